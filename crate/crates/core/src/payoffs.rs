//! Payoff functions: lasso evaluation and one-player optimum pipelines.
//!
//! Four payoffs are built in. `Psi` asks that the running sum of +-1 weights
//! either diverges to +infinity or hits zero infinitely often. `Phi` is the
//! run-length payoff over {0,1}: Max wins if zeros eventually stop or some
//! maximal 1-run between zeros has a length in T. `Parity` reads colors as
//! edge priorities, `Mean` reads colors as weights and averages the cycle.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::arena::{Arena, EdgeId, Lasso, NodeId, Player};
use crate::graph;
use crate::memory::{ChromaticStrategy, MemorySkeleton, PositionalStrategy, Strategy};
use crate::parity::{self, Convention, ParityGame};
use crate::probes::{synth_mk, synth_mn};
use crate::product::{self, ProductArena};
use crate::{Error, Result};

/// All payoff values live in one ordered domain; the 0/1 payoffs embed as
/// integers.
pub type Value = Rational64;

pub fn bit(b: bool) -> Value {
    Value::from_integer(if b { 1 } else { 0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "payoff", rename_all = "snake_case")]
pub enum Payoff {
    Psi,
    Phi {
        #[serde(rename = "T")]
        t: Vec<u64>,
    },
    Parity { convention: Convention },
    Mean,
}

impl Payoff {
    /// Parses a payoff descriptor: either the JSON object form or a bare
    /// name (`psi`, `mean`, `parity-even`, `parity-odd`).
    pub fn from_descriptor(s: &str) -> Result<Payoff> {
        match s.trim() {
            "psi" => return Ok(Payoff::Psi),
            "mean" => return Ok(Payoff::Mean),
            "parity-even" | "parity" => {
                return Ok(Payoff::Parity { convention: Convention::Even })
            }
            "parity-odd" => return Ok(Payoff::Parity { convention: Convention::Odd }),
            _ => {}
        }
        let p: Payoff = serde_json::from_str(s)?;
        if let Payoff::Phi { t } = &p {
            if t.is_empty() || t.contains(&0) {
                return Err(Error::BadParameter(
                    "phi requires a nonempty set of positive integers".into(),
                ));
            }
        }
        Ok(p)
    }

    /// Evaluates the payoff on a lasso's color word.
    pub fn eval_lasso(&self, a: &Arena, l: &Lasso) -> Result<Value> {
        let (pw, cw) = a.color_word_lasso(l)?;
        let prefix: Vec<&str> = pw.iter().map(|&c| a.color_symbol(c)).collect();
        let cycle: Vec<&str> = cw.iter().map(|&c| a.color_symbol(c)).collect();
        match self {
            Payoff::Psi => Ok(bit(eval_psi_syms(&prefix, &cycle)? == 1)),
            Payoff::Phi { t } => Ok(bit(eval_phi_syms(&prefix, &cycle, t)? == 1)),
            Payoff::Parity { convention } => {
                let g = parity_game_from_colors(a, *convention)?;
                Ok(bit(parity::evaluate_parity(&g, l)? == Player::Max))
            }
            Payoff::Mean => {
                let w = a.numeric_alphabet()?;
                let sum: i64 = cw.iter().map(|&c| w[c]).sum();
                Ok(Rational64::new(sum, cw.len() as i64))
            }
        }
    }

    /// Per-color integer counter weights, where defined (psi and mean).
    pub fn weights(&self, a: &Arena) -> Result<Vec<i64>> {
        match self {
            Payoff::Psi => psi_weights(a),
            Payoff::Mean => a.numeric_alphabet(),
            _ => Err(Error::NonNumericColor(
                "payoff does not weight colors".into(),
            )),
        }
    }

    /// Optimal values and a witness strategy for `side` on a one-player
    /// arena where the other side is choice-free.
    pub fn one_player_opt(&self, a: &Arena, side: Player) -> Result<(Vec<Value>, Strategy)> {
        match self {
            Payoff::Psi => one_player_opt_psi(a, side),
            Payoff::Phi { t } => one_player_opt_phi(a, side, t),
            Payoff::Parity { convention } => {
                let g = parity_game_from_colors(a, *convention)?;
                let sol = parity::solve(&g);
                let values = sol.winner.iter().map(|&w| bit(w == Player::Max)).collect();
                let witness = match side {
                    Player::Max => sol.max_strategy,
                    Player::Min => sol.min_strategy,
                };
                Ok((values, Strategy::Positional(witness)))
            }
            Payoff::Mean => one_player_opt_mean(a, side),
        }
    }

    /// Uniform positional equilibrium on a one-player arena, for payoffs
    /// that admit one (parity and mean). This is the oracle handed to the
    /// lifting engine.
    pub fn one_player_pair(
        &self,
        a: &Arena,
    ) -> Result<(PositionalStrategy, PositionalStrategy)> {
        match self {
            Payoff::Parity { convention } => {
                let g = parity_game_from_colors(a, *convention)?;
                let sol = parity::solve(&g);
                Ok((sol.max_strategy, sol.min_strategy))
            }
            Payoff::Mean => {
                let side = match a.is_one_player() {
                    crate::arena::OnePlayer::MinHasNoChoice => Player::Max,
                    crate::arena::OnePlayer::MaxHasNoChoice => Player::Min,
                    crate::arena::OnePlayer::TwoPlayer => return Err(Error::NotOnePlayer),
                };
                let (_, witness) = one_player_opt_mean(a, side)?;
                let opt = match witness {
                    Strategy::Positional(p) => p,
                    Strategy::Chromatic(_) => unreachable!("mean witness is positional"),
                };
                let forced = forced_strategy(a, side.opponent());
                Ok(match side {
                    Player::Max => (opt, forced),
                    Player::Min => (forced, opt),
                })
            }
            _ => Err(Error::BadParameter(
                "payoff has no positional one-player equilibrium oracle".into(),
            )),
        }
    }
}

/// The unique strategy of a choice-free side.
pub fn forced_strategy(a: &Arena, side: Player) -> PositionalStrategy {
    let moves = a
        .nodes()
        .map(|v| {
            if a.owner(v) == side {
                Some(a.out_edges(v)[0])
            } else {
                None
            }
        })
        .collect();
    PositionalStrategy { owner: side, moves }
}

fn parity_game_from_colors(a: &Arena, convention: Convention) -> Result<ParityGame> {
    let prio: Vec<u32> = a
        .alphabet()
        .iter()
        .map(|s| {
            s.parse::<u32>()
                .map_err(|_| Error::NonNumericColor(s.clone()))
        })
        .collect::<Result<_>>()?;
    let priority = (0..a.n_edges()).map(|e| prio[a.edge(e).color]).collect();
    Ok(ParityGame { arena: a.clone(), priority, max_wins: convention })
}

fn psi_weights(a: &Arena) -> Result<Vec<i64>> {
    a.alphabet()
        .iter()
        .map(|s| match s.as_str() {
            "-1" => Ok(-1i64),
            "+1" | "1" => Ok(1i64),
            other => Err(Error::BadLetter(other.to_string())),
        })
        .collect()
}

fn phi_letters(a: &Arena) -> Result<Vec<u8>> {
    a.alphabet()
        .iter()
        .map(|s| match s.as_str() {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            other => Err(Error::BadLetter(other.to_string())),
        })
        .collect()
}

fn parse_pm1(sym: &str) -> Result<i64> {
    match sym {
        "-1" => Ok(-1),
        "+1" | "1" => Ok(1),
        other => Err(Error::BadLetter(other.to_string())),
    }
}

fn parse_01(sym: &str) -> Result<u8> {
    match sym {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::BadLetter(other.to_string())),
    }
}

/// Sum payoff on an ultimately periodic word. Returns 1 iff the running sums
/// diverge to +infinity (positive cycle weight) or equal zero infinitely
/// often (zero cycle weight with a zero prefix-sum inside the periodic part).
pub fn eval_psi(prefix: &[i64], cycle: &[i64]) -> u8 {
    assert!(!cycle.is_empty());
    let d: i64 = cycle.iter().sum();
    if d > 0 {
        return 1;
    }
    if d < 0 {
        return 0;
    }
    let mut sum: i64 = prefix.iter().sum();
    // cycle weight is zero, so one pass covers every sum the periodic part
    // ever takes
    for &w in cycle {
        sum += w;
        if sum == 0 {
            return 1;
        }
    }
    0
}

pub fn eval_psi_syms(prefix: &[&str], cycle: &[&str]) -> Result<u8> {
    let p: Vec<i64> = prefix.iter().map(|s| parse_pm1(s)).collect::<Result<_>>()?;
    let c: Vec<i64> = cycle.iter().map(|s| parse_pm1(s)).collect::<Result<_>>()?;
    Ok(eval_psi(&p, &c))
}

/// Run-length payoff on an ultimately periodic word. Returns 1 iff the cycle
/// has no zeros, or some maximal 1-run strictly between two zeros has length
/// in T. Scanning prefix + two cycle passes is complete: every bounded run
/// starts within prefix + one cycle and is shorter than one further cycle.
pub fn eval_phi(prefix: &[u8], cycle: &[u8], t: &[u64]) -> u8 {
    assert!(!cycle.is_empty());
    if cycle.iter().all(|&b| b == 1) {
        return 1;
    }
    let mut w: Vec<u8> = Vec::with_capacity(prefix.len() + 2 * cycle.len());
    w.extend_from_slice(prefix);
    w.extend_from_slice(cycle);
    w.extend_from_slice(cycle);
    let mut i = 0;
    while i < w.len() {
        if w[i] != 0 {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < w.len() && w[j] == 1 {
            j += 1;
        }
        if j < w.len() && w[j] == 0 {
            let run = (j - i - 1) as u64;
            if t.contains(&run) {
                return 1;
            }
        }
        i = j.max(i + 1);
    }
    0
}

pub fn eval_phi_syms(prefix: &[&str], cycle: &[&str], t: &[u64]) -> Result<u8> {
    let p: Vec<u8> = prefix.iter().map(|s| parse_01(s)).collect::<Result<_>>()?;
    let c: Vec<u8> = cycle.iter().map(|s| parse_01(s)).collect::<Result<_>>()?;
    Ok(eval_phi(&p, &c, t))
}

fn require_one_player(a: &Arena, optimizing: Player) -> Result<()> {
    if a.side_is_choice_free(optimizing.opponent()) {
        Ok(())
    } else {
        Err(Error::NotOnePlayer)
    }
}

fn edge_weights(a: &Arena, per_color: &[i64]) -> Vec<i64> {
    (0..a.n_edges()).map(|e| per_color[a.edge(e).color]).collect()
}

/// Moves for the "reach a marked cycle, then rotate along it" strategy:
/// cycle nodes follow their cycle edge, other nodes that can reach a cycle
/// follow a shortest path.
fn reach_and_rotate(a: &Arena, cycles: &[Vec<EdgeId>]) -> Vec<Option<EdgeId>> {
    let mut moves: Vec<Option<EdgeId>> = vec![None; a.n_nodes()];
    let mut on_cycle = vec![false; a.n_nodes()];
    for cycle in cycles {
        for &e in cycle {
            moves[a.edge(e).src] = Some(e);
            on_cycle[a.edge(e).src] = true;
        }
    }
    let tree = graph::shortest_path_tree(a, &on_cycle, None);
    for v in a.nodes() {
        if moves[v].is_none() {
            moves[v] = tree[v];
        }
    }
    moves
}

/// The index of the sum-0 state in the layout used by `synth_mn`.
fn mn_zero_state(b: usize) -> usize {
    b
}

/// Stitches a witness over the whole arena out of a positional region
/// strategy and a per-(state, residual node) strategy from the product.
#[allow(clippy::too_many_arguments)]
fn stitch_chromatic(
    a: &Arena,
    owner: Player,
    skeleton: MemorySkeleton,
    region_moves: &[Option<EdgeId>],
    region: &[bool],
    node_back: &[NodeId],
    edge_back: &[EdgeId],
    product_moves: Option<(&ProductArena, &PositionalStrategy)>,
) -> Result<Strategy> {
    let n_states = skeleton.n_states();
    let mut moves = vec![vec![None; a.n_nodes()]; n_states];
    for row in moves.iter_mut() {
        for v in a.nodes() {
            if a.owner(v) != owner {
                continue;
            }
            if region[v] {
                row[v] = region_moves[v].or_else(|| Some(a.out_edges(v)[0]));
            }
        }
    }
    if let Some((p, s)) = product_moves {
        for pv in 0..p.arena.n_nodes() {
            let (state, rv) = p.node_origin[pv];
            let v = node_back[rv];
            if a.owner(v) != owner {
                continue;
            }
            if let Some(pe) = s.moves[pv] {
                let (_, re) = p.edge_origin[pe];
                moves[state][v] = Some(edge_back[re]);
            }
        }
    }
    // any leftover owner nodes (unreachable corners) get their first edge
    for row in moves.iter_mut() {
        for v in a.nodes() {
            if a.owner(v) == owner && row[v].is_none() {
                row[v] = Some(a.out_edges(v)[0]);
            }
        }
    }
    let c = ChromaticStrategy { owner, skeleton, moves };
    c.validate(a)?;
    Ok(Strategy::Chromatic(c))
}

/// Case pipelines for the sum payoff on one-player arenas.
fn one_player_opt_psi(a: &Arena, side: Player) -> Result<(Vec<Value>, Strategy)> {
    require_one_player(a, side)?;
    let per_color = psi_weights(a)?;
    let w = edge_weights(a, &per_color);
    match side {
        Player::Max => {
            // nodes from which a positive cycle is reachable are winning by
            // reach-and-rotate
            let pos = graph::positive_cycle_region(a, &w);
            let region_moves = reach_and_rotate(a, &pos.cycles);
            let keep: Vec<bool> = pos.reach.iter().map(|&b| !b).collect();
            if keep.iter().all(|&b| !b) {
                let values = vec![bit(true); a.n_nodes()];
                let skel = MemorySkeleton::trivial(a.alphabet().to_vec());
                let witness = stitch_chromatic(
                    a, side, skel, &region_moves, &pos.reach, &[], &[], None,
                )?;
                return Ok((values, witness));
            }
            let (res, node_back, edge_back) = a.induced(&keep);
            let b = res.n_nodes();
            let mb = synth_mn(b);
            let p = product::build(&mb, &res)?;
            // Buechi condition "sum-0 state infinitely often" as a 2-priority
            // parity game: edges leaving a sum-0 node get priority 2
            let zero = mn_zero_state(b);
            let priority: Vec<u32> = (0..p.arena.n_edges())
                .map(|pe| if p.edge_origin[pe].0 == zero { 2 } else { 1 })
                .collect();
            let g = ParityGame {
                arena: p.arena.clone(),
                priority,
                max_wins: Convention::Even,
            };
            let sol = parity::solve(&g);
            let mut values = vec![bit(true); a.n_nodes()];
            for rv in 0..res.n_nodes() {
                let won = sol.winner[p.node_id(zero, rv)] == Player::Max;
                values[node_back[rv]] = bit(won);
            }
            let witness = stitch_chromatic(
                a,
                side,
                mb,
                &region_moves,
                &pos.reach,
                &node_back,
                &edge_back,
                Some((&p, &sol.max_strategy)),
            )?;
            Ok((values, witness))
        }
        Player::Min => {
            // nodes from which a negative cycle is reachable lose for Max
            let neg = graph::negative_cycle_region(a, &w);
            let region_moves = reach_and_rotate(a, &neg.cycles);
            let keep: Vec<bool> = neg.reach.iter().map(|&b| !b).collect();
            if keep.iter().all(|&b| !b) {
                let values = vec![bit(false); a.n_nodes()];
                let skel = MemorySkeleton::trivial(a.alphabet().to_vec());
                let witness = stitch_chromatic(
                    a, side, skel, &region_moves, &neg.reach, &[], &[], None,
                )?;
                return Ok((values, witness));
            }
            let (res, node_back, edge_back) = a.induced(&keep);
            let b = res.n_nodes();
            let mb = synth_mn(b);
            let p = product::build(&mb, &res)?;
            let zero = mn_zero_state(b);
            let pw: Vec<i64> = (0..p.arena.n_edges())
                .map(|pe| w[edge_back[p.edge_origin[pe].1]])
                .collect();
            // greedily collect disjoint good simple cycles: weight zero and
            // no sum-0 node (all residual cycles are non-negative, so any
            // non-positive cycle found has weight exactly zero)
            let mut usable: Vec<bool> = (0..p.arena.n_nodes())
                .map(|pv| p.node_origin[pv].0 != zero)
                .collect();
            let mut good_cycles: Vec<Vec<EdgeId>> = Vec::new();
            let mut marked = vec![false; p.arena.n_nodes()];
            while let Some(cycle) = graph::find_nonpositive_cycle(&p.arena, &pw, Some(&usable)) {
                for &pe in &cycle {
                    let v = p.arena.edge(pe).src;
                    usable[v] = false;
                    marked[v] = true;
                }
                good_cycles.push(cycle);
            }
            let g_set = graph::backward_reachable(&p.arena, &marked, None);
            let tau_moves = reach_and_rotate(&p.arena, &good_cycles);
            let tau = PositionalStrategy {
                owner: Player::Min,
                moves: (0..p.arena.n_nodes())
                    .map(|pv| {
                        if p.arena.owner(pv) != Player::Min {
                            return None;
                        }
                        Some(
                            tau_moves[pv]
                                .filter(|_| g_set[pv])
                                .unwrap_or_else(|| p.arena.out_edges(pv)[0]),
                        )
                    })
                    .collect(),
            };
            let mut values = vec![bit(false); a.n_nodes()];
            for rv in 0..res.n_nodes() {
                values[node_back[rv]] = bit(!g_set[p.node_id(zero, rv)]);
            }
            let witness = stitch_chromatic(
                a,
                side,
                mb,
                &region_moves,
                &neg.reach,
                &node_back,
                &edge_back,
                Some((&p, &tau)),
            )?;
            Ok((values, witness))
        }
    }
}

/// Run-length payoff optimum via the k+4-state skeleton and a 3-priority
/// parity game on the product.
fn one_player_opt_phi(a: &Arena, side: Player, t: &[u64]) -> Result<(Vec<Value>, Strategy)> {
    require_one_player(a, side)?;
    phi_letters(a)?;
    if t.is_empty() || t.contains(&0) {
        return Err(Error::BadParameter("T must be nonempty and positive".into()));
    }
    let k = *t.iter().max().unwrap();
    let (g, p, mk) = phi_parity_game(a, k, t)?;
    let sol = parity::solve(&g);
    let values = (0..a.n_nodes())
        .map(|v| bit(sol.winner[p.node_id(mk.init, v)] == Player::Max))
        .collect();
    let (sigma, tau) =
        product::project_equilibrium(&mk, a, &p, &sol.max_strategy, &sol.min_strategy)?;
    let witness = match side {
        Player::Max => sigma,
        Player::Min => tau,
    };
    Ok((values, Strategy::Chromatic(witness)))
}

/// The product with the run-length skeleton plus the 3-priority labeling:
/// edges leaving a final-state node get 3, color-0 edges 2, color-1 edges 1;
/// Max wins on an odd top priority.
pub fn phi_parity_game(
    a: &Arena,
    k: u64,
    t: &[u64],
) -> Result<(ParityGame, ProductArena, MemorySkeleton)> {
    let letters = phi_letters(a)?;
    let mk = synth_mk(k, t);
    let final_state = mk.n_states() - 1;
    let p = product::build(&mk, a)?;
    let priority: Vec<u32> = (0..p.arena.n_edges())
        .map(|pe| {
            let (state, e) = p.edge_origin[pe];
            if state == final_state {
                3
            } else if letters[a.edge(e).color] == 0 {
                2
            } else {
                1
            }
        })
        .collect();
    let g = ParityGame {
        arena: p.arena.clone(),
        priority,
        max_wins: Convention::Odd,
    };
    Ok((g, p, mk))
}

/// Mean payoff optimum on a one-player arena: per-node best reachable cycle
/// mean, with a level-wise reach-and-rotate witness.
fn one_player_opt_mean(a: &Arena, side: Player) -> Result<(Vec<Value>, Strategy)> {
    require_one_player(a, side)?;
    let per_color = a.numeric_alphabet()?;
    let w = edge_weights(a, &per_color);
    let cycles = graph::simple_cycles(a, None);
    assert!(!cycles.is_empty(), "every valid arena has a cycle");
    let mean_of = |c: &[EdgeId]| -> Value {
        Rational64::new(c.iter().map(|&e| w[e]).sum(), c.len() as i64)
    };
    let better = |x: Value, y: Value| match side {
        Player::Max => x.max(y),
        Player::Min => x.min(y),
    };
    // per-node optimum over reachable cycles
    let mut values: Vec<Option<Value>> = vec![None; a.n_nodes()];
    for c in &cycles {
        let mu = mean_of(c);
        let mut on = vec![false; a.n_nodes()];
        for &e in c {
            on[a.edge(e).src] = true;
        }
        let reach = graph::backward_reachable(a, &on, None);
        for v in a.nodes() {
            if reach[v] {
                values[v] = Some(values[v].map_or(mu, |old| better(old, mu)));
            }
        }
    }
    let values: Vec<Value> = values
        .into_iter()
        .map(|v| v.expect("every node reaches a cycle"))
        .collect();
    // witness per value level: greedily pick disjoint optimal cycles inside
    // the level, then shortest paths within the level
    let mut moves: Vec<Option<EdgeId>> = vec![None; a.n_nodes()];
    let mut levels: Vec<Value> = values.clone();
    levels.sort();
    levels.dedup();
    for &mu in &levels {
        let level: Vec<bool> = values.iter().map(|&x| x == mu).collect();
        let mut free = level.clone();
        let mut chosen: Vec<Vec<EdgeId>> = Vec::new();
        for c in &cycles {
            if mean_of(c) != mu {
                continue;
            }
            if c.iter().all(|&e| free[a.edge(e).src]) {
                for &e in c {
                    free[a.edge(e).src] = false;
                }
                chosen.push(c.clone());
            }
        }
        let mut on = vec![false; a.n_nodes()];
        for c in &chosen {
            for &e in c {
                moves[a.edge(e).src] = Some(e);
                on[a.edge(e).src] = true;
            }
        }
        let tree = graph::shortest_path_tree(a, &on, Some(&level));
        for v in a.nodes() {
            if level[v] && moves[v].is_none() {
                moves[v] = tree[v];
            }
        }
    }
    let witness = PositionalStrategy {
        owner: side,
        moves: (0..a.n_nodes())
            .map(|v| {
                if a.owner(v) == side {
                    Some(moves[v].unwrap_or_else(|| a.out_edges(v)[0]))
                } else {
                    None
                }
            })
            .collect(),
    };
    witness.validate(a)?;
    Ok((values, Strategy::Positional(witness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::OnePlayer;

    #[test]
    fn psi_examples() {
        assert_eq!(eval_psi(&[], &[1]), 1);
        assert_eq!(eval_psi(&[-1], &[1, -1]), 1);
        assert_eq!(eval_psi(&[1], &[1, -1]), 0);
        assert_eq!(eval_psi(&[], &[-1]), 0);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(eval_phi(&[], &[1], &[2]), 1);
        assert_eq!(eval_phi(&[], &[0, 1, 1], &[2]), 1);
        assert_eq!(eval_phi(&[], &[0], &[2]), 0);
        assert_eq!(eval_phi(&[0, 1], &[1, 0], &[2]), 1);
        assert_eq!(eval_phi(&[], &[0, 1, 1, 1], &[2]), 0);
    }

    fn single_loop(color: &str, alphabet: &[&str]) -> Arena {
        Arena::build(alphabet, vec![Player::Max], &[(0, 0, color)]).unwrap()
    }

    #[test]
    fn psi_single_loops() {
        let plus = single_loop("+1", &["-1", "+1"]);
        let (vals, _) = Payoff::Psi.one_player_opt(&plus, Player::Max).unwrap();
        assert_eq!(vals, vec![bit(true)]);
        let minus = single_loop("-1", &["-1", "+1"]);
        let (vals, _) = Payoff::Psi.one_player_opt(&minus, Player::Max).unwrap();
        assert_eq!(vals, vec![bit(false)]);
    }

    #[test]
    fn psi_min_side_flat_cycle() {
        // one Min node alternating -1/+1 via two nodes: sum oscillates
        // through 0, so Min cannot avoid zeros
        let a = Arena::build(
            &["-1", "+1"],
            vec![Player::Min, Player::Min],
            &[(0, 1, "+1"), (1, 0, "-1")],
        )
        .unwrap();
        let (vals, _) = Payoff::Psi.one_player_opt(&a, Player::Min).unwrap();
        assert_eq!(vals, vec![bit(true), bit(true)]);
    }

    #[test]
    fn psi_min_escapes_zero() {
        // Min chooses between a zero-sum 2-cycle through 0 and a +1/-1
        // 2-cycle that never returns the sum to 0 when entered on +1 first;
        // from node 0 sums go 1,0,1,0 on the first cycle but Min can leave
        // to the pair (2,3) where sums stay 1,2,1,2
        let a = Arena::build(
            &["-1", "+1"],
            vec![Player::Min, Player::Min, Player::Min, Player::Min],
            &[
                (0, 1, "+1"),
                (1, 0, "-1"),
                (0, 2, "+1"),
                (2, 3, "+1"),
                (3, 2, "-1"),
            ],
        )
        .unwrap();
        let (vals, witness) = Payoff::Psi.one_player_opt(&a, Player::Min).unwrap();
        assert_eq!(vals[0], bit(false));
        witness.validate(&a).unwrap();
    }

    #[test]
    fn phi_single_loops() {
        let ones = single_loop("1", &["0", "1"]);
        let (vals, _) = Payoff::Phi { t: vec![1] }
            .one_player_opt(&ones, Player::Max)
            .unwrap();
        assert_eq!(vals, vec![bit(true)]);
        let zeros = single_loop("0", &["0", "1"]);
        let (vals, _) = Payoff::Phi { t: vec![1] }
            .one_player_opt(&zeros, Player::Max)
            .unwrap();
        assert_eq!(vals, vec![bit(false)]);
    }

    #[test]
    fn mean_examples() {
        let a = Arena::build(
            &["-1", "+1"],
            vec![Player::Max, Player::Max],
            &[(0, 1, "+1"), (1, 0, "-1")],
        )
        .unwrap();
        let l = Lasso::new(vec![], vec![0, 1]);
        assert_eq!(Payoff::Mean.eval_lasso(&a, &l).unwrap(), Rational64::new(0, 1));
        let two_loops = Arena::build(
            &["-1", "+1"],
            vec![Player::Max],
            &[(0, 0, "+1"), (0, 0, "-1")],
        )
        .unwrap();
        let (vals, witness) = Payoff::Mean.one_player_opt(&two_loops, Player::Max).unwrap();
        assert_eq!(vals, vec![Rational64::from_integer(1)]);
        match witness {
            Strategy::Positional(p) => assert_eq!(p.moves[0], Some(0)),
            _ => panic!("expected positional witness"),
        }
    }

    #[test]
    fn one_player_precondition_enforced() {
        let a = crate::probes::build_fig2();
        assert_eq!(a.is_one_player(), OnePlayer::TwoPlayer);
        assert!(matches!(
            Payoff::Psi.one_player_opt(&a, Player::Max),
            Err(Error::NotOnePlayer)
        ));
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(Payoff::from_descriptor("psi").unwrap(), Payoff::Psi);
        assert_eq!(
            Payoff::from_descriptor(r#"{"payoff":"phi","T":[5]}"#).unwrap(),
            Payoff::Phi { t: vec![5] }
        );
        assert_eq!(
            Payoff::from_descriptor(r#"{"payoff":"parity","convention":"odd"}"#).unwrap(),
            Payoff::Parity { convention: Convention::Odd }
        );
        assert!(Payoff::from_descriptor(r#"{"payoff":"phi","T":[]}"#).is_err());
    }
}
