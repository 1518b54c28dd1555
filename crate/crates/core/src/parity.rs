//! Parity games with edge priorities, solved positionally by the recursive
//! attractor (Zielonka) algorithm. Both winning conventions are supported.

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, EdgeId, Lasso, Player};
use crate::memory::PositionalStrategy;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
pub struct ParityGame {
    pub arena: Arena,
    /// Priority per edge id.
    pub priority: Vec<u32>,
    /// Max wins a play iff the largest priority occurring infinitely often
    /// has this parity.
    pub max_wins: Convention,
}

#[derive(Debug, Clone)]
pub struct ParitySolution {
    pub winner: Vec<Player>,
    pub max_strategy: PositionalStrategy,
    pub min_strategy: PositionalStrategy,
}

/// Winner of a lasso: the largest priority on the cycle decides; the prefix
/// is ignored.
pub fn evaluate_parity(g: &ParityGame, l: &Lasso) -> Result<Player> {
    g.arena.check_lasso(l)?;
    let top = l.cycle.iter().map(|&e| g.priority[e]).max().unwrap();
    let even = top % 2 == 0;
    let max_wins = match g.max_wins {
        Convention::Even => even,
        Convention::Odd => !even,
    };
    Ok(if max_wins { Player::Max } else { Player::Min })
}

// Internal node-priority game over the subdivided graph. Each arena edge e
// becomes a midpoint node carrying e's (normalized) priority; original nodes
// carry priority 0, which never decides a cycle because every cycle passes
// through midpoints of strictly larger priority.
struct SubGame {
    owner: Vec<Player>,
    priority: Vec<u32>,
    /// out[v] = (successor, arena edge this choice represents)
    out: Vec<Vec<(usize, EdgeId)>>,
    preds: Vec<Vec<usize>>,
}

pub fn solve(g: &ParityGame) -> ParitySolution {
    let a = &g.arena;
    let n = a.n_nodes();
    let m = a.n_edges();
    // normalize so that Max always wants an even top priority, and all
    // midpoint priorities dominate the 0 of original nodes
    let shift = match g.max_wins {
        Convention::Even => 2,
        Convention::Odd => 3,
    };
    let total = n + m;
    let mut owner = vec![Player::Max; total];
    let mut priority = vec![0u32; total];
    let mut out: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); total];
    for v in 0..n {
        owner[v] = a.owner(v);
        for &e in a.out_edges(v) {
            out[v].push((n + e, e));
        }
    }
    for e in 0..m {
        priority[n + e] = g.priority[e] + shift;
        out[n + e].push((a.edge(e).dst, e));
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (v, outs) in out.iter().enumerate() {
        for &(w, _) in outs {
            preds[w].push(v);
        }
    }
    let sub = SubGame { owner, priority, out, preds };
    let mask = vec![true; total];
    let (win_max, strat) = zielonka(&sub, &mask);

    let winner: Vec<Player> = (0..n)
        .map(|v| if win_max[v] { Player::Max } else { Player::Min })
        .collect();
    let pick = |side: Player| -> PositionalStrategy {
        let moves = (0..n)
            .map(|v| {
                if a.owner(v) != side {
                    return None;
                }
                let in_region = winner[v] == side;
                let chosen = if in_region { strat[v] } else { None };
                Some(chosen.unwrap_or_else(|| a.out_edges(v)[0]))
            })
            .collect();
        PositionalStrategy { owner: side, moves }
    };
    let max_strategy = pick(Player::Max);
    let min_strategy = pick(Player::Min);
    ParitySolution { winner, max_strategy, min_strategy }
}

/// Attractor of `targets` for `player` within `mask`. Returns the attracted
/// set and, for player-owned attracted non-target nodes, the edge to move
/// along.
fn attractor(
    g: &SubGame,
    mask: &[bool],
    player: Player,
    targets: &[bool],
) -> (Vec<bool>, Vec<Option<EdgeId>>) {
    let total = mask.len();
    let mut in_attr = vec![false; total];
    let mut strat = vec![None; total];
    let mut out_count = vec![0usize; total];
    for v in 0..total {
        if mask[v] {
            out_count[v] = g.out[v].iter().filter(|&&(w, _)| mask[w]).count();
        }
    }
    let mut queue: Vec<usize> = Vec::new();
    for v in 0..total {
        if mask[v] && targets[v] {
            in_attr[v] = true;
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        for &u in &g.preds[v] {
            if !mask[u] || in_attr[u] {
                continue;
            }
            if g.owner[u] == player {
                in_attr[u] = true;
                strat[u] = g
                    .out[u]
                    .iter()
                    .find(|&&(w, _)| in_attr[w] && mask[w])
                    .map(|&(_, e)| e);
                queue.push(u);
            } else {
                // preds holds one entry per edge, so decrement once per entry
                out_count[u] -= 1;
                if out_count[u] == 0 {
                    in_attr[u] = true;
                    queue.push(u);
                }
            }
        }
    }
    (in_attr, strat)
}

/// Recursive Zielonka. Returns per-node Max-wins flags and, for each node
/// owned by its winner, a winning edge choice.
fn zielonka(g: &SubGame, mask: &[bool]) -> (Vec<bool>, Vec<Option<EdgeId>>) {
    let total = mask.len();
    let mut win_max = vec![false; total];
    let mut strat = vec![None; total];
    if !mask.iter().any(|&b| b) {
        return (win_max, strat);
    }
    let d = (0..total)
        .filter(|&v| mask[v])
        .map(|v| g.priority[v])
        .max()
        .unwrap();
    let side = if d % 2 == 0 { Player::Max } else { Player::Min };
    let targets: Vec<bool> = (0..total).map(|v| mask[v] && g.priority[v] == d).collect();
    let (attr, attr_strat) = attractor(g, mask, side, &targets);
    let inner_mask: Vec<bool> = (0..total).map(|v| mask[v] && !attr[v]).collect();
    let (inner_win_max, inner_strat) = zielonka(g, &inner_mask);
    let opp_wins_inner = (0..total).any(|v| {
        inner_mask[v] && (inner_win_max[v] != (side == Player::Max))
    });
    if !opp_wins_inner {
        for v in 0..total {
            if !mask[v] {
                continue;
            }
            win_max[v] = side == Player::Max;
            if g.owner[v] != side {
                continue;
            }
            strat[v] = if inner_mask[v] {
                inner_strat[v]
            } else if targets[v] {
                // revisit the top priority: any move staying inside the game
                g.out[v].iter().find(|&&(w, _)| mask[w]).map(|&(_, e)| e)
            } else {
                attr_strat[v]
            };
        }
        return (win_max, strat);
    }
    let opp = side.opponent();
    let opp_inner: Vec<bool> = (0..total)
        .map(|v| inner_mask[v] && (inner_win_max[v] == (opp == Player::Max)))
        .collect();
    let (opp_attr, opp_attr_strat) = attractor(g, mask, opp, &opp_inner);
    let rest_mask: Vec<bool> = (0..total).map(|v| mask[v] && !opp_attr[v]).collect();
    let (rest_win_max, rest_strat) = zielonka(g, &rest_mask);
    for v in 0..total {
        if !mask[v] {
            continue;
        }
        if rest_mask[v] {
            win_max[v] = rest_win_max[v];
            let winner = if win_max[v] { Player::Max } else { Player::Min };
            if g.owner[v] == winner {
                strat[v] = rest_strat[v];
            }
        } else {
            win_max[v] = opp == Player::Max;
            if g.owner[v] == opp {
                strat[v] = if opp_inner[v] {
                    inner_strat[v]
                } else {
                    opp_attr_strat[v]
                };
            }
        }
    }
    (win_max, strat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Arena;

    fn loop_game(priority: u32, max_wins: Convention) -> ParityGame {
        let arena =
            Arena::build(&["0"], vec![Player::Max], &[(0, 0, "0")]).unwrap();
        ParityGame { arena, priority: vec![priority], max_wins }
    }

    #[test]
    fn single_loop_even() {
        let g = loop_game(2, Convention::Even);
        let sol = solve(&g);
        assert_eq!(sol.winner, vec![Player::Max]);
        assert_eq!(sol.max_strategy.moves[0], Some(0));
    }

    #[test]
    fn single_loop_odd_convention() {
        let g = loop_game(2, Convention::Odd);
        let sol = solve(&g);
        assert_eq!(sol.winner, vec![Player::Min]);
    }

    #[test]
    fn evaluate_ignores_prefix() {
        // 0 -> 1 (priority 5), 1 -> 1 (priority 1)
        let arena = Arena::build(
            &["0"],
            vec![Player::Max, Player::Max],
            &[(0, 1, "0"), (1, 1, "0")],
        )
        .unwrap();
        let g = ParityGame { arena, priority: vec![5, 1], max_wins: Convention::Odd };
        let l = Lasso::new(vec![0], vec![1]);
        assert_eq!(evaluate_parity(&g, &l).unwrap(), Player::Max);
        let g_even = ParityGame { max_wins: Convention::Even, ..g };
        assert_eq!(evaluate_parity(&g_even, &l).unwrap(), Player::Min);
    }

    #[test]
    fn choice_between_loops() {
        // Max node with two self-loops of priorities 1 and 2, even wins:
        // Max must pick the priority-2 loop.
        let arena = Arena::build(
            &["1", "2"],
            vec![Player::Max],
            &[(0, 0, "1"), (0, 0, "2")],
        )
        .unwrap();
        let g = ParityGame {
            arena,
            priority: vec![1, 2],
            max_wins: Convention::Even,
        };
        let sol = solve(&g);
        assert_eq!(sol.winner, vec![Player::Max]);
        assert_eq!(sol.max_strategy.moves[0], Some(1));
    }

    #[test]
    fn min_escapes_through_own_node() {
        // Max node 0 -> Min node 1; Min chooses between returning with
        // priority 1 or looping with priority 2; odd wins for Max, so Min
        // should loop on the even priority.
        let arena = Arena::build(
            &["0"],
            vec![Player::Max, Player::Min],
            &[(0, 1, "0"), (1, 0, "0"), (1, 1, "0")],
        )
        .unwrap();
        let g = ParityGame {
            arena,
            priority: vec![1, 1, 2],
            max_wins: Convention::Odd,
        };
        let sol = solve(&g);
        assert_eq!(sol.winner, vec![Player::Min, Player::Min]);
        assert_eq!(sol.min_strategy.moves[1], Some(2));
    }
}
