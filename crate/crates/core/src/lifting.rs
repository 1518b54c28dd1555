//! Constructive lifting of one-player equilibria to two-player equilibria.
//!
//! The engine recurses on the edge set of the arena: it picks a node of the
//! splitting side with at least two outgoing edges, partitions those edges
//! into the lowest-id singleton and the rest, solves both sub-arenas, and
//! decides between the two candidate strategies by solving a one-player
//! bridge arena built from the opponent-restricted sub-arenas merged at the
//! split node. Running the procedure once per side and combining the results
//! is sound because the set of equilibria is a Cartesian product of the two
//! sides' optimal strategy sets.

use std::collections::HashMap;

use serde::Serialize;

use crate::arena::{Arena, Edge, EdgeId, NodeId, OnePlayer, Player};
use crate::equilibrium::check_equilibrium;
use crate::memory::{
    ChromaticStrategy, GeneralCounterStrategy, MemorySkeleton, MoveRule, PositionalStrategy,
    Strategy,
};
use crate::payoffs::Payoff;
use crate::product::{self, TrivialWitness};
use crate::{Error, Result};

/// Execution trace of one lifting run.
#[derive(Debug, Clone, Serialize)]
pub struct LiftTrace {
    pub oracle_calls: usize,
    pub distinct_oracle_arenas: usize,
    pub max_oracle_nodes: usize,
    pub root: TraceNode,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceNode {
    /// The sub-arena was one-player and went straight to the oracle.
    Oracle { nodes: usize, edges: usize },
    /// The sub-arena was already solved earlier in this run.
    Reused,
    /// Two-player: one split per side.
    Split {
        max_part: Box<SplitRecord>,
        min_part: Box<SplitRecord>,
    },
}

/// One singleton-vs-rest split and its resolution.
#[derive(Debug, Clone, Serialize)]
pub struct SplitRecord {
    pub node: NodeId,
    pub e1: Vec<EdgeId>,
    pub e2: Vec<EdgeId>,
    /// 1 if the bridge equilibrium selected the e1 side, else 2.
    pub chosen: u8,
    pub bridge_nodes: usize,
    pub sub1: TraceNode,
    pub sub2: TraceNode,
}

/// Switching strategy: play tau1 in mode 1 and tau2 in mode 2, flipping the
/// mode whenever the play leaves `w` by an edge outside the current mode's
/// partition class. `initial` is 1 or 2.
pub fn build_switch_strategy(
    a: &Arena,
    tau1: &PositionalStrategy,
    tau2: &PositionalStrategy,
    w: NodeId,
    e1: &[EdgeId],
    e2: &[EdgeId],
    initial: u8,
) -> GeneralCounterStrategy {
    assert_eq!(tau1.owner, tau2.owner);
    assert!(initial == 1 || initial == 2);
    let flip_from = |class: &[EdgeId]| -> Vec<usize> {
        (0..a.n_edges())
            .map(|e| usize::from(a.edge(e).src == w && !class.contains(&e)))
            .collect()
    };
    let row0 = flip_from(e1);
    let row1: Vec<usize> = flip_from(e2).iter().map(|&f| 1 - f).collect();
    GeneralCounterStrategy {
        owner: tau1.owner,
        init_mode: initial as usize - 1,
        mode_update: vec![row0, row1],
        moves: vec![
            MoveRule::Fixed(tau1.moves.clone()),
            MoveRule::Fixed(tau2.moves.clone()),
        ],
    }
}

/// First m (1-based index into the table) with f(m) * 2n <= m + 1 determines
/// g(n) = f(m); None if the table is too short to decide.
pub fn compute_g(f_table: &[u64], n: u64) -> Option<u64> {
    f_table
        .iter()
        .enumerate()
        .find(|&(i, &fm)| fm.checked_mul(2 * n).unwrap() <= i as u64 + 2)
        .map(|(_, &fm)| fm)
}

/// A bridge arena plus the maps back to the original arena.
pub struct Bridge {
    pub arena: Arena,
    /// prototype[bridge node] = original node.
    pub node_prototype: Vec<NodeId>,
    /// prototype[bridge edge] = (side 1|2, original edge).
    pub edge_prototype: Vec<(u8, EdgeId)>,
}

/// Merges two edge-masked copies of the arena at node `w`: left copy keeps
/// original node ids, right copy nodes shift past them, the two copies of w
/// coincide. 2n-1 nodes total.
pub fn build_bridge(a: &Arena, left_mask: &[bool], right_mask: &[bool], w: NodeId) -> Bridge {
    let n = a.n_nodes();
    let map_r = |v: NodeId| -> NodeId {
        if v == w {
            w
        } else if v < w {
            n + v
        } else {
            n + v - 1
        }
    };
    let mut owners: Vec<Player> = a.owners().to_vec();
    let mut node_prototype: Vec<NodeId> = a.nodes().collect();
    for v in a.nodes() {
        if v != w {
            owners.push(a.owner(v));
            node_prototype.push(v);
        }
    }
    let mut edges = Vec::new();
    let mut edge_prototype = Vec::new();
    for (e, &keep) in left_mask.iter().enumerate() {
        if keep {
            let Edge { src, dst, color } = *a.edge(e);
            edges.push(Edge { src, dst, color });
            edge_prototype.push((1u8, e));
        }
    }
    for (e, &keep) in right_mask.iter().enumerate() {
        if keep {
            let Edge { src, dst, color } = *a.edge(e);
            edges.push(Edge { src: map_r(src), dst: map_r(dst), color });
            edge_prototype.push((2u8, e));
        }
    }
    let arena = Arena::from_parts(a.alphabet().to_vec(), owners, edges);
    Bridge { arena, node_prototype, edge_prototype }
}

type PositionalPair = (PositionalStrategy, PositionalStrategy);

struct Lifter<'a, F> {
    a: &'a Arena,
    payoff: &'a Payoff,
    oracle: F,
    trivial: Option<(&'a MemorySkeleton, &'a TrivialWitness)>,
    memo: HashMap<Vec<bool>, PositionalPair>,
    oracle_memo: HashMap<String, PositionalPair>,
    oracle_calls: usize,
    max_oracle_nodes: usize,
}

impl<'a, F> Lifter<'a, F>
where
    F: FnMut(&Arena, Option<&TrivialWitness>) -> Result<PositionalPair>,
{
    /// Runs the oracle on a one-player arena and verifies its claim before
    /// trusting it.
    fn call_oracle(
        &mut self,
        b: &Arena,
        witness: Option<&TrivialWitness>,
    ) -> Result<PositionalPair> {
        assert!(b.n_nodes() < 2 * self.a.n_nodes());
        assert_ne!(b.is_one_player(), OnePlayer::TwoPlayer);
        assert!(b.validate().is_ok());
        if let (Some((m, _)), Some(g)) = (self.trivial, witness) {
            assert!(product::check_trivial(m, b, g).is_ok());
        }
        let arena_json = serde_json::to_value(b.to_json())?;
        let key = serde_json::to_string(&(
            &arena_json,
            witness.map(|g| g.f.clone()).unwrap_or_default(),
        ))?;
        if let Some(pair) = self.oracle_memo.get(&key) {
            return Ok(pair.clone());
        }
        self.oracle_calls += 1;
        self.max_oracle_nodes = self.max_oracle_nodes.max(b.n_nodes());
        let (sigma, tau) = (self.oracle)(b, witness)?;
        sigma.validate(b)?;
        tau.validate(b)?;
        let starts: Vec<NodeId> = match (self.trivial, witness) {
            (Some((m, _)), Some(g)) => {
                b.nodes().filter(|&v| g.f[v] == m.init).collect()
            }
            _ => b.nodes().collect(),
        };
        let report = check_equilibrium(
            b,
            self.payoff,
            &Strategy::Positional(sigma.clone()),
            &Strategy::Positional(tau.clone()),
            &starts,
        )?;
        if !report.is_equilibrium() {
            return Err(Error::OracleFailure {
                nodes: b.n_nodes(),
                arena: arena_json,
            });
        }
        self.oracle_memo.insert(key, (sigma.clone(), tau.clone()));
        Ok((sigma, tau))
    }

    /// Solves the sub-arena given by an edge mask over the original arena.
    /// Strategies are returned in original edge ids.
    fn lift(&mut self, mask: &[bool]) -> Result<(PositionalPair, TraceNode)> {
        if let Some(pair) = self.memo.get(mask) {
            return Ok((pair.clone(), TraceNode::Reused));
        }
        let (sub, back) = self.a.sub_arena(|e| mask[e]);
        let result = if sub.is_one_player() != OnePlayer::TwoPlayer {
            let witness = self.trivial.map(|(_, f)| f);
            let (sigma, tau) = self.call_oracle(&sub, witness)?;
            let translate = |s: &PositionalStrategy| PositionalStrategy {
                owner: s.owner,
                moves: s.moves.iter().map(|m| m.map(|e| back[e])).collect(),
            };
            let trace = TraceNode::Oracle { nodes: sub.n_nodes(), edges: sub.n_edges() };
            ((translate(&sigma), translate(&tau)), trace)
        } else {
            let (sigma, max_rec) = self.part(mask, Player::Max)?;
            let (tau, min_rec) = self.part(mask, Player::Min)?;
            let trace = TraceNode::Split {
                max_part: Box::new(max_rec),
                min_part: Box::new(min_rec),
            };
            ((sigma, tau), trace)
        };
        self.memo.insert(mask.to_vec(), result.0.clone());
        Ok(result)
    }

    /// One split round for `side`: solve both halves, then let the oracle
    /// decide on the bridge which half's strategy survives.
    fn part(&mut self, mask: &[bool], side: Player) -> Result<(PositionalStrategy, SplitRecord)> {
        let a = self.a;
        let out_in_mask = |v: NodeId| -> Vec<EdgeId> {
            (0..a.n_edges())
                .filter(|&e| mask[e] && a.edge(e).src == v)
                .collect()
        };
        let w = a
            .nodes()
            .find(|&v| a.owner(v) == side && out_in_mask(v).len() >= 2)
            .expect("a two-player sub-arena has a splittable node on each side");
        let ew = out_in_mask(w);
        let e1 = vec![ew[0]];
        let e2: Vec<EdgeId> = ew[1..].to_vec();
        let mut mask1 = mask.to_vec();
        for &e in &e2 {
            mask1[e] = false;
        }
        let mut mask2 = mask.to_vec();
        mask2[ew[0]] = false;

        let ((p1, sub1_trace), (p2, sub2_trace)) =
            (self.lift(&mask1)?, self.lift(&mask2)?);
        let pick = |pair: &PositionalPair| -> PositionalStrategy {
            match side {
                Player::Max => pair.0.clone(),
                Player::Min => pair.1.clone(),
            }
        };
        let opp_of = |pair: &PositionalPair| -> PositionalStrategy {
            match side {
                Player::Max => pair.1.clone(),
                Player::Min => pair.0.clone(),
            }
        };
        let opp = side.opponent();
        let restrict_mask = |m: &[bool], t: &PositionalStrategy| -> Vec<bool> {
            (0..a.n_edges())
                .map(|e| {
                    m[e] && (a.owner(a.edge(e).src) != opp
                        || t.moves[a.edge(e).src] == Some(e))
                })
                .collect()
        };
        let left = restrict_mask(&mask1, &opp_of(&p1));
        let right = restrict_mask(&mask2, &opp_of(&p2));
        let bridge = build_bridge(a, &left, &right, w);
        assert!(bridge.arena.side_is_choice_free(opp));
        let g = self.trivial.map(|(_, f)| TrivialWitness {
            f: bridge.node_prototype.iter().map(|&v| f.f[v]).collect(),
        });
        let pair = self.call_oracle(&bridge.arena, g.as_ref())?;
        let deciding = match side {
            Player::Max => &pair.0,
            Player::Min => &pair.1,
        };
        let be = deciding.moves[w].expect("split node is owned by the deciding side");
        let chosen = bridge.edge_prototype[be].0;
        let strategy = if chosen == 1 { pick(&p1) } else { pick(&p2) };
        Ok((
            strategy,
            SplitRecord {
                node: w,
                e1,
                e2,
                chosen,
                bridge_nodes: bridge.arena.n_nodes(),
                sub1: sub1_trace,
                sub2: sub2_trace,
            },
        ))
    }
}

/// Lifts a one-player positional-equilibrium oracle to a positional
/// equilibrium of a two-player arena. With `trivial` supplied, the recursion
/// maintains the skeleton-labeling witness and only demands equilibria at the
/// initially-labeled nodes; the oracle then receives the corresponding
/// witness for every sub-instance.
pub fn positional_lift<F>(
    a: &Arena,
    payoff: &Payoff,
    oracle: F,
    trivial: Option<(&MemorySkeleton, &TrivialWitness)>,
) -> Result<(PositionalStrategy, PositionalStrategy, LiftTrace)>
where
    F: FnMut(&Arena, Option<&TrivialWitness>) -> Result<PositionalPair>,
{
    a.validate().map_err(Error::InvalidArena)?;
    if let Some((m, f)) = trivial {
        if product::check_trivial(m, a, f).is_err() {
            return Err(Error::BadStrategy("witness is not trivial for this arena".into()));
        }
    }
    let mut lifter = Lifter {
        a,
        payoff,
        oracle,
        trivial,
        memo: HashMap::new(),
        oracle_memo: HashMap::new(),
        oracle_calls: 0,
        max_oracle_nodes: 0,
    };
    let mask = vec![true; a.n_edges()];
    let ((sigma, tau), root) = lifter.lift(&mask)?;
    let starts: Vec<NodeId> = match trivial {
        Some((m, f)) => a.nodes().filter(|&v| f.f[v] == m.init).collect(),
        None => a.nodes().collect(),
    };
    let report = check_equilibrium(
        a,
        payoff,
        &Strategy::Positional(sigma.clone()),
        &Strategy::Positional(tau.clone()),
        &starts,
    )?;
    if !report.is_equilibrium() {
        return Err(Error::OracleFailure {
            nodes: a.n_nodes(),
            arena: serde_json::to_value(a.to_json())?,
        });
    }
    let trace = LiftTrace {
        oracle_calls: lifter.oracle_calls,
        distinct_oracle_arenas: lifter.oracle_memo.len(),
        max_oracle_nodes: lifter.max_oracle_nodes,
        root,
    };
    Ok((sigma, tau, trace))
}

/// Lifts through a memory skeleton: solves the product arena positionally
/// with the projection witness, then projects back to a chromatic equilibrium
/// of the base arena.
pub fn lift_with_skeleton<F>(
    a: &Arena,
    m: &MemorySkeleton,
    payoff: &Payoff,
    oracle: F,
) -> Result<(ChromaticStrategy, ChromaticStrategy, LiftTrace)>
where
    F: FnMut(&Arena, Option<&TrivialWitness>) -> Result<PositionalPair>,
{
    let p = product::build(m, a)?;
    let f = p.projection_witness();
    let (sigma_hat, tau_hat, trace) =
        positional_lift(&p.arena, payoff, oracle, Some((m, &f)))?;
    let (sigma, tau) = product::project_equilibrium(m, a, &p, &sigma_hat, &tau_hat)?;
    let starts: Vec<NodeId> = a.nodes().collect();
    let report = check_equilibrium(
        a,
        payoff,
        &Strategy::Chromatic(sigma.clone()),
        &Strategy::Chromatic(tau.clone()),
        &starts,
    )?;
    if !report.is_equilibrium() {
        return Err(Error::OracleFailure {
            nodes: a.n_nodes(),
            arena: serde_json::to_value(a.to_json())?,
        });
    }
    Ok((sigma, tau, trace))
}

/// The built-in one-player oracle backed by a payoff's optimum pipelines.
pub fn payoff_oracle(
    payoff: Payoff,
) -> impl FnMut(&Arena, Option<&TrivialWitness>) -> Result<PositionalPair> {
    move |a, _witness| payoff.one_player_pair(a)
}
