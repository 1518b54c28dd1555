//! Plays, best responses, and equilibrium verification.
//!
//! A strategy pair induces a unique play from every start node. The play is
//! ultimately periodic because the joint configuration space (node, memory
//! states) is finite; `play` returns it as a lasso. `check_equilibrium`
//! compares the play's value against the optimal deviation of each side,
//! computed by the one-player optimum pipelines on the restricted arena.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, Lasso, NodeId, Player};
use crate::memory::{GeneralCounterStrategy, Strategy};
use crate::payoffs::{bit, Payoff, Value};
use crate::product;
use crate::{Error, Result};

/// The unique play of a strategy pair from `start`, as a lasso. The joint
/// configuration (node, Max memory state, Min memory state) repeats within
/// |V| * |sigma| * |tau| steps.
pub fn play(a: &Arena, start: NodeId, sigma: &Strategy, tau: &Strategy) -> Result<Lasso> {
    if sigma.owner() != Player::Max || tau.owner() != Player::Min {
        return Err(Error::BadStrategy(
            "play requires a Max strategy and a Min strategy".into(),
        ));
    }
    sigma.validate(a)?;
    tau.validate(a)?;
    let mut seen: HashMap<(NodeId, usize, usize), usize> = HashMap::new();
    let mut edges: Vec<usize> = Vec::new();
    let (mut v, mut s1, mut s2) = (start, sigma.initial_state(), tau.initial_state());
    loop {
        if let Some(&i) = seen.get(&(v, s1, s2)) {
            return Ok(Lasso::new(edges[..i].to_vec(), edges[i..].to_vec()));
        }
        seen.insert((v, s1, s2), edges.len());
        let mover = if a.owner(v) == Player::Max { sigma } else { tau };
        let state = if a.owner(v) == Player::Max { s1 } else { s2 };
        let e = mover.move_at(state, v).ok_or_else(|| {
            Error::BadStrategy(format!("no move defined at node {v}"))
        })?;
        if a.edge(e).src != v {
            return Err(Error::BadStrategy(format!(
                "move at node {v} is not one of its outgoing edges"
            )));
        }
        let sym = a.color_of(e).to_string();
        s1 = sigma.step(s1, &sym)?;
        s2 = tau.step(s2, &sym)?;
        edges.push(e);
        v = a.edge(e).dst;
    }
}

/// The optimal value the opponent of `fixed` can force from `start` once
/// `fixed` is pinned. Computed on the product of `fixed`'s skeleton with the
/// arena, restricted to `fixed`'s moves.
pub fn best_response_value(
    a: &Arena,
    payoff: &Payoff,
    fixed: &Strategy,
    start: NodeId,
) -> Result<Value> {
    Ok(best_response_values(a, payoff, fixed)?[start])
}

/// Best-response values of the opponent at every start node, computed with a
/// single solve on the restricted product.
pub fn best_response_values(a: &Arena, payoff: &Payoff, fixed: &Strategy) -> Result<Vec<Value>> {
    fixed.validate(a)?;
    let c = fixed.to_chromatic(a);
    let p = product::restrict_by_chromatic(a, &c)?;
    let opponent = fixed.owner().opponent();
    let (values, _) = payoff.one_player_opt(&p.arena, opponent)?;
    Ok((0..a.n_nodes())
        .map(|v| values[p.node_id(c.skeleton.init, v)])
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equilibrium,
    NotEquilibrium,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StartReport {
    pub start: NodeId,
    pub play_value: Value,
    /// Best value Max can force against tau.
    pub best_max: Value,
    /// Best value Min can force against sigma.
    pub best_min: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub start: NodeId,
    /// The side with a profitable deviation.
    pub side: Player,
    pub play_value: Value,
    pub best_value: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub verdict: Verdict,
    pub entries: Vec<StartReport>,
    pub counterexample: Option<Counterexample>,
}

impl EquilibriumReport {
    pub fn is_equilibrium(&self) -> bool {
        self.verdict == Verdict::Equilibrium
    }
}

/// Verifies that (sigma, tau) is an equilibrium from every listed start: the
/// induced play's value must match the best deviation of each side.
pub fn check_equilibrium(
    a: &Arena,
    payoff: &Payoff,
    sigma: &Strategy,
    tau: &Strategy,
    starts: &[NodeId],
) -> Result<EquilibriumReport> {
    let mut entries = Vec::with_capacity(starts.len());
    let mut counterexample = None;
    let max_vals = best_response_values(a, payoff, tau)?;
    let min_vals = best_response_values(a, payoff, sigma)?;
    for &start in starts {
        let l = play(a, start, sigma, tau)?;
        let play_value = payoff.eval_lasso(a, &l)?;
        let best_max = max_vals[start];
        let best_min = min_vals[start];
        if counterexample.is_none() {
            if best_max > play_value {
                counterexample = Some(Counterexample {
                    start,
                    side: Player::Max,
                    play_value,
                    best_value: best_max,
                });
            } else if best_min < play_value {
                counterexample = Some(Counterexample {
                    start,
                    side: Player::Min,
                    play_value,
                    best_value: best_min,
                });
            }
        }
        entries.push(StartReport { start, play_value, best_max, best_min });
    }
    Ok(EquilibriumReport {
        verdict: if counterexample.is_none() {
            Verdict::Equilibrium
        } else {
            Verdict::NotEquilibrium
        },
        entries,
        counterexample,
    })
}

const COUNTER_STEP_CAP: usize = 2_000_000;

/// The sum payoff value of the play of two counter strategies sharing the
/// running-sum counter. The play need not be ultimately periodic in any
/// finite configuration space, so the simulation detects three kinds of
/// certificates: an exact configuration repeat (zero-drift cycle), a drifting
/// repeat inside a counter region where no threshold can flip (divergence),
/// and a drifting repeat headed back toward the thresholds (fast-forwarded).
pub fn play_counter(
    a: &Arena,
    start: NodeId,
    sigma: &GeneralCounterStrategy,
    tau: &GeneralCounterStrategy,
) -> Result<Value> {
    if sigma.owner != Player::Max || tau.owner != Player::Min {
        return Err(Error::BadStrategy(
            "play requires a Max strategy and a Min strategy".into(),
        ));
    }
    let weights = Payoff::Psi.weights(a)?;
    let mut thresholds: Vec<i64> = sigma.thresholds();
    thresholds.extend(tau.thresholds());
    let lo = thresholds.iter().min().copied();
    let hi = thresholds.iter().max().copied();
    // region id for a counter value: all moves are counter-independent while
    // the counter stays strictly below every threshold (Low) or at/above all
    // of them (High); None inside the band
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Region {
        Low,
        High,
        All,
    }
    let region_of = |c: i64| -> Option<Region> {
        match (lo, hi) {
            (None, None) => Some(Region::All),
            (Some(lo), Some(hi)) => {
                if c < lo {
                    Some(Region::Low)
                } else if c >= hi {
                    Some(Region::High)
                } else {
                    None
                }
            }
            _ => unreachable!(),
        }
    };

    type Config = (NodeId, usize, usize);
    let mut exact: HashMap<(Config, i64), usize> = HashMap::new();
    // history of (config, counter) at each step boundary since the last
    // fast-forward
    let mut hist: Vec<(Config, i64)> = Vec::new();
    let mut region_hist: HashMap<Config, usize> = HashMap::new();
    let mut cur_region: Option<Region> = None;

    let (mut v, mut m1, mut m2) = (start, sigma.init_mode, tau.init_mode);
    let mut counter: i64 = 0;
    for _ in 0..COUNTER_STEP_CAP {
        let cfg: Config = (v, m1, m2);
        if let Some(&i) = exact.get(&(cfg, counter)) {
            // zero-drift cycle: the counter pattern repeats verbatim
            let hits_zero = hist[i..].iter().any(|&(_, c)| c == 0);
            return Ok(bit(hits_zero));
        }
        exact.insert((cfg, counter), hist.len());

        let region = region_of(counter);
        if region != cur_region {
            region_hist.clear();
            cur_region = region;
        }
        if let Some(reg) = region {
            if let Some(&i) = region_hist.get(&cfg) {
                let (_, c0) = hist[i];
                let d = counter - c0;
                debug_assert_ne!(d, 0, "zero drift is caught by the exact map");
                match (reg, d > 0) {
                    // drifting away from every threshold: the counter
                    // diverges and the moves never change again
                    (Region::High, true) | (Region::All, true) => return Ok(bit(true)),
                    (Region::Low, false) | (Region::All, false) => return Ok(bit(false)),
                    // drifting back toward the band: skip whole periods while
                    // every intermediate counter provably stays in the region
                    (Region::High, false) => {
                        let min_inter =
                            hist[i..].iter().map(|&(_, c)| c).min().unwrap().min(counter);
                        let k = (min_inter - hi.unwrap()) / (-d);
                        if k >= 1 {
                            counter += k * d;
                            exact.clear();
                            region_hist.clear();
                            hist.clear();
                            continue;
                        }
                    }
                    (Region::Low, true) => {
                        let max_inter =
                            hist[i..].iter().map(|&(_, c)| c).max().unwrap().max(counter);
                        let k = (lo.unwrap() - 1 - max_inter) / d;
                        if k >= 1 {
                            counter += k * d;
                            exact.clear();
                            region_hist.clear();
                            hist.clear();
                            continue;
                        }
                    }
                }
            } else {
                region_hist.insert(cfg, hist.len());
            }
        }
        hist.push((cfg, counter));

        let (mover, mode) = if a.owner(v) == Player::Max {
            (sigma, m1)
        } else {
            (tau, m2)
        };
        let e = mover.move_at(mode, counter, v).ok_or_else(|| {
            Error::BadStrategy(format!("no move defined at node {v}"))
        })?;
        if a.edge(e).src != v {
            return Err(Error::BadStrategy(format!(
                "move at node {v} is not one of its outgoing edges"
            )));
        }
        counter += weights[a.edge(e).color];
        m1 = sigma.step_mode(m1, e);
        m2 = tau.step_mode(m2, e);
        v = a.edge(e).dst;
    }
    panic!("counter play did not stabilize within {COUNTER_STEP_CAP} steps");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::{MoveRule, PositionalStrategy};
    use crate::probes::build_fig2;

    fn fig2_pair(max_edge: usize, min_edge: usize) -> (Strategy, Strategy) {
        let sigma = Strategy::Positional(PositionalStrategy {
            owner: Player::Max,
            moves: vec![Some(max_edge), None],
        });
        let tau = Strategy::Positional(PositionalStrategy {
            owner: Player::Min,
            moves: vec![None, Some(min_edge)],
        });
        (sigma, tau)
    }

    #[test]
    fn play_is_a_lasso() {
        let a = build_fig2();
        let (sigma, tau) = fig2_pair(1, 3);
        let l = play(&a, 0, &sigma, &tau).unwrap();
        a.check_lasso(&l).unwrap();
        // 0 -e1-> 1 -e3-> 0 repeats immediately
        assert_eq!(l.prefix, Vec::<usize>::new());
        assert_eq!(l.cycle, vec![1, 3]);
    }

    #[test]
    fn positional_pairs_are_not_psi_equilibria_on_fig2() {
        // the running sum oscillates or diverges under every positional
        // pair, and one side can always improve
        let a = build_fig2();
        for max_edge in [0, 1] {
            for min_edge in [2, 3] {
                let (sigma, tau) = fig2_pair(max_edge, min_edge);
                let report =
                    check_equilibrium(&a, &Payoff::Psi, &sigma, &tau, &[0, 1]).unwrap();
                assert!(!report.is_equilibrium(), "{max_edge}/{min_edge}");
            }
        }
    }

    #[test]
    fn mean_equilibrium_on_fig2() {
        // Max loops on -1? No: Max should take +1 to node 1, Min should
        // answer -1 back; the cycle mean is 0 and neither side improves
        let a = build_fig2();
        let (sigma, tau) = fig2_pair(1, 3);
        let report = check_equilibrium(&a, &Payoff::Mean, &sigma, &tau, &[0, 1]).unwrap();
        assert!(report.is_equilibrium());
        assert_eq!(report.entries[0].play_value, Value::from_integer(0));
    }

    #[test]
    fn counter_play_zero_drift() {
        // both sides positional: 0 -> 1 -> 0 with weights +1/-1; counter
        // pattern 1,0 repeats, hitting zero
        let a = build_fig2();
        let (sigma, tau) = fig2_pair(1, 3);
        let gs = GeneralCounterStrategy::from_strategy(&a, &sigma).unwrap();
        let gt = GeneralCounterStrategy::from_strategy(&a, &tau).unwrap();
        assert_eq!(play_counter(&a, 0, &gs, &gt).unwrap(), bit(true));
    }

    #[test]
    fn counter_play_divergence() {
        // Max loops on the -1 self-loop forever: counter diverges down
        let a = build_fig2();
        let (sigma, tau) = fig2_pair(0, 2);
        let gs = GeneralCounterStrategy::from_strategy(&a, &sigma).unwrap();
        let gt = GeneralCounterStrategy::from_strategy(&a, &tau).unwrap();
        assert_eq!(play_counter(&a, 0, &gs, &gt).unwrap(), bit(false));
    }

    #[test]
    fn counter_play_with_thresholds() {
        // Max's counter strategy: loop on -1 while the sum is >= 1,
        // otherwise go to node 1 on +1; Min always returns on -1. The sum
        // cycles through 0 forever.
        let a = build_fig2();
        let gs = GeneralCounterStrategy {
            owner: Player::Max,
            init_mode: 0,
            mode_update: vec![vec![0; a.n_edges()]],
            moves: vec![MoveRule::Threshold {
                theta: 1,
                ge: vec![Some(0), None],
                lt: vec![Some(1), None],
            }],
        };
        let tau = Strategy::Positional(PositionalStrategy {
            owner: Player::Min,
            moves: vec![None, Some(3)],
        });
        let gt = GeneralCounterStrategy::from_strategy(&a, &tau).unwrap();
        assert_eq!(play_counter(&a, 0, &gs, &gt).unwrap(), bit(true));
        assert_eq!(play_counter(&a, 1, &gs, &gt).unwrap(), bit(true));
    }
}
