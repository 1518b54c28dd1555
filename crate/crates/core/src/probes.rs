//! Skeleton synthesis, named example arenas, and desk-scale probes.
//!
//! The probes are executable checks of the memory lower and upper bounds:
//! the two-node counter game (memory of every finite size loses for Max),
//! the branching arena family (chromatic memory below the branch count
//! loses), sum-payoff sufficiency of the bounded-counter skeleton on small
//! one-player arenas, and run-length equilibria through the run-tracking
//! skeleton on small two-player arenas.

use std::time::Instant;

use serde::Serialize;

use crate::arena::{Arena, EdgeId, NodeId, OnePlayer, Player};
use crate::equilibrium::{check_equilibrium, play, play_counter};
use crate::memory::{
    enumerate_skeletons, ChromaticStrategy, GeneralCounterStrategy, MemorySkeleton, MoveRule,
    PositionalStrategy, Strategy,
};
use crate::parity;
use crate::payoffs::{bit, forced_strategy, phi_parity_game, Payoff};
use crate::product;
use crate::Result;

/// Bounded-counter skeleton: tracks the running sum of +-1 weights while its
/// absolute value stays within n, then falls into an absorbing invalid state.
/// State i (0 <= i <= 2n) holds sum i - n; state 2n+1 is invalid; 2n+2 states
/// total.
pub fn synth_mn(n: usize) -> MemorySkeleton {
    assert!(n >= 1);
    let invalid = 2 * n + 1;
    let delta = (0..=invalid)
        .map(|i| {
            if i == invalid {
                vec![invalid, invalid]
            } else {
                // alphabet order: ["-1", "+1"]
                let down = if i >= 1 { i - 1 } else { invalid };
                let up = if i < 2 * n { i + 1 } else { invalid };
                vec![down, up]
            }
        })
        .collect();
    MemorySkeleton::new(vec!["-1".into(), "+1".into()], n, delta)
}

/// Run-length skeleton with k+4 states over {0,1}. State I (index 0) absorbs
/// 1s until the first 0; q_i (index 1+i, 0 <= i <= k) counts the current
/// 1-run; q_{>k} (index k+2) holds overflowed runs; F (index k+3) is the
/// absorbing accepting state, reached when a 0 closes a run whose length is
/// in T.
pub fn synth_mk(k: u64, t: &[u64]) -> MemorySkeleton {
    assert!(k >= 1);
    let k = k as usize;
    let q = |i: usize| 1 + i;
    let over = k + 2;
    let f = k + 3;
    let mut delta = Vec::with_capacity(k + 4);
    // alphabet order: ["0", "1"]
    delta.push(vec![q(0), 0]); // I
    for i in 0..=k {
        let on_zero = if i >= 1 && t.contains(&(i as u64)) { f } else { q(0) };
        let on_one = if i < k { q(i + 1) } else { over };
        delta.push(vec![on_zero, on_one]);
    }
    delta.push(vec![q(0), over]); // q_{>k}
    delta.push(vec![f, f]); // F
    MemorySkeleton::new(vec!["0".into(), "1".into()], 0, delta)
}

/// The two-node counter game: a Max node (the square, node 0) with a -1
/// self-loop and a +1 edge to a Min node (the triangle, node 1), which has a
/// +1 self-loop and a -1 edge back.
pub fn build_fig2() -> Arena {
    Arena::build(
        &["-1", "+1"],
        vec![Player::Max, Player::Min],
        &[(0, 0, "-1"), (0, 1, "+1"), (1, 1, "+1"), (1, 0, "-1")],
    )
    .unwrap()
}

/// Max's winning counter strategy on the two-node game: drain the sum on the
/// self-loop while it is positive, otherwise step to the triangle.
pub fn fig2_max_counter() -> GeneralCounterStrategy {
    GeneralCounterStrategy {
        owner: Player::Max,
        init_mode: 0,
        mode_update: vec![vec![0; 4]],
        moves: vec![MoveRule::Threshold {
            theta: 1,
            ge: vec![Some(0), None],
            lt: vec![Some(1), None],
        }],
    }
}

/// Min's spoiler against s-state Max strategies: pump the sum up to s+2 on
/// the triangle loop, then release it back to the square.
pub fn fig2_min_counter(s: usize) -> GeneralCounterStrategy {
    GeneralCounterStrategy {
        owner: Player::Min,
        init_mode: 0,
        mode_update: vec![vec![0; 4]],
        moves: vec![MoveRule::Threshold {
            theta: s as i64 + 2,
            ge: vec![None, Some(3)],
            lt: vec![None, Some(2)],
        }],
    }
}

/// Branching arena with m left entries and m right exits around a central
/// Max choice. Entry i spells 0 1^i into the center; the center's branch j
/// spells 1^{k-j} into a 0-looping sink, so the full word from entry i via
/// branch j is 0 1^{i+k-j} 0^omega.
#[derive(Debug, Clone)]
pub struct AmArena {
    pub arena: Arena,
    /// Left entry nodes, index i-1 for entry i.
    pub left: Vec<NodeId>,
    pub center: NodeId,
    /// Right sink nodes, index j-1 for branch j.
    pub right: Vec<NodeId>,
    /// The center's outgoing edge toward branch j, index j-1.
    pub center_edges: Vec<EdgeId>,
}

pub fn build_am(m: usize, k: usize) -> AmArena {
    assert!(m >= 1 && k > m);
    let mut n_nodes = 1usize; // center = 0
    let center = 0;
    let mut edges: Vec<(NodeId, NodeId, &str)> = Vec::new();
    let mut left = Vec::new();
    for i in 1..=m {
        // entry -0-> x_1 -1-> ... -1-> x_i -1-> center
        let entry = n_nodes;
        left.push(entry);
        let firsts: Vec<NodeId> = (0..=i).map(|d| n_nodes + d).collect();
        n_nodes += i + 1;
        edges.push((firsts[0], firsts[1], "0"));
        for d in 1..i {
            edges.push((firsts[d], firsts[d + 1], "1"));
        }
        edges.push((firsts[i], center, "1"));
    }
    let mut right = Vec::new();
    let mut center_edge_slots = Vec::new();
    for j in 1..=m {
        // center -1-> y_1 -1-> ... -1-> sink, k-j ones total, then 0-loop
        let steps = k - j;
        let chain: Vec<NodeId> = (0..steps).map(|d| n_nodes + d).collect();
        n_nodes += steps;
        let sink = chain[steps - 1];
        right.push(sink);
        center_edge_slots.push(edges.len());
        edges.push((center, chain[0], "1"));
        for d in 0..steps - 1 {
            edges.push((chain[d], chain[d + 1], "1"));
        }
        edges.push((sink, sink, "0"));
    }
    let arena = Arena::build(&["0", "1"], vec![Player::Max; n_nodes], &edges).unwrap();
    AmArena {
        arena,
        left,
        center,
        right,
        center_edges: center_edge_slots,
    }
}

/// The m-state chromatic strategy that wins from every left entry of the
/// branching arena: count 1s modulo m and pick the matching branch.
pub fn am_winning_strategy(am: &AmArena, m: usize) -> ChromaticStrategy {
    let delta = (0..m)
        .map(|s| vec![s, (s + 1) % m]) // ["0", "1"]
        .collect();
    let skeleton = MemorySkeleton::new(vec!["0".into(), "1".into()], 0, delta);
    let a = &am.arena;
    let moves = (0..m)
        .map(|s| {
            (0..a.n_nodes())
                .map(|v| {
                    if v == am.center {
                        let j = if s == 0 { m } else { s };
                        Some(am.center_edges[j - 1])
                    } else {
                        Some(a.out_edges(v)[0])
                    }
                })
                .collect()
        })
        .collect();
    ChromaticStrategy { owner: Player::Max, skeleton, moves }
}

/// True iff no other element of T falls in the open window (k/2, k^4).
pub fn is_isolated_element(t: &[u64], k: u64) -> bool {
    if !t.contains(&k) {
        return false;
    }
    t.iter()
        .all(|&l| l == k || !(2 * l > k && l < k.saturating_pow(4)))
}

/// True iff some element k of T has an empty open window (k, k^4) and that
/// window is fully checkable within the horizon. Windows reaching past the
/// horizon are not counted, so a truncated set never passes by accident.
pub fn is_sparse(t: &[u64], horizon: u64) -> bool {
    t.iter()
        .filter(|&&k| k.saturating_pow(4).saturating_sub(1) <= horizon)
        .any(|&k| t.iter().all(|&l| l <= k || l >= k.saturating_pow(4)))
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    pub index: usize,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub probe: String,
    pub params: serde_json::Value,
    pub trials: Vec<TrialResult>,
    pub verdict: String,
    pub seed: Option<u64>,
    pub elapsed_ms: u128,
}

impl ProbeReport {
    fn finish(
        probe: &str,
        params: serde_json::Value,
        trials: Vec<TrialResult>,
        seed: Option<u64>,
        started: Instant,
    ) -> ProbeReport {
        let pass = trials.iter().all(|t| t.pass);
        ProbeReport {
            probe: probe.to_string(),
            params,
            trials,
            verdict: if pass { "PASS" } else { "FAIL" }.to_string(),
            seed,
            elapsed_ms: started.elapsed().as_millis(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

/// All Max (resp. Min) chromatic strategies on the two-node game with at
/// most `max_states` states, as counter strategies for simulation.
fn fig2_chromatic_side(side: Player, max_states: usize) -> Vec<ChromaticStrategy> {
    let a = build_fig2();
    let skels = enumerate_skeletons(&["-1", "+1"], max_states);
    let (node, choices): (NodeId, [EdgeId; 2]) = match side {
        Player::Max => (0, [0, 1]),
        Player::Min => (1, [2, 3]),
    };
    let mut out = Vec::new();
    for skel in skels {
        let n = skel.n_states();
        for pick in 0..(1usize << n) {
            let moves = (0..n)
                .map(|s| {
                    let e = choices[(pick >> s) & 1];
                    (0..a.n_nodes())
                        .map(|v| if v == node { Some(e) } else { None })
                        .collect()
                })
                .collect();
            out.push(ChromaticStrategy { owner: side, skeleton: skel.clone(), moves });
        }
    }
    out
}

/// Lower-bound probe on the two-node counter game. For each s <= s_max, every
/// Max chromatic strategy with <= s states loses (value 0 from the square)
/// against the Min counter spoiler with threshold s+2; additionally the Max
/// counter strategy wins (value 1) against every Min chromatic strategy with
/// <= 2 states.
pub fn probe_fig2_lower(s_max: usize) -> Result<ProbeReport> {
    let started = Instant::now();
    let a = build_fig2();
    let mut trials = Vec::new();
    let mut index = 0;
    for s in 1..=s_max {
        let spoiler = fig2_min_counter(s);
        for c in fig2_chromatic_side(Player::Max, s) {
            let gcs = GeneralCounterStrategy::from_chromatic(&a, &c)?;
            let v = play_counter(&a, 0, &gcs, &spoiler)?;
            trials.push(TrialResult {
                index,
                pass: v == bit(false),
                detail: format!("max chromatic ({} states) vs spoiler s={s}", c.skeleton.n_states()),
            });
            index += 1;
        }
    }
    let sigma = fig2_max_counter();
    for c in fig2_chromatic_side(Player::Min, 2) {
        let gcs = GeneralCounterStrategy::from_chromatic(&a, &c)?;
        for start in [0, 1] {
            let v = play_counter(&a, start, &sigma, &gcs)?;
            trials.push(TrialResult {
                index,
                pass: v == bit(true),
                detail: format!(
                    "max counter vs min chromatic ({} states) from {start}",
                    c.skeleton.n_states()
                ),
            });
            index += 1;
        }
    }
    Ok(ProbeReport::finish(
        "fig2",
        serde_json::json!({ "s_max": s_max }),
        trials,
        None,
        started,
    ))
}

/// Lower-bound probe on the branching arena. Every skeleton with fewer than
/// m states collides on two entry words 0 1^i, and every chromatic Max
/// strategy built from such a skeleton loses from some left entry, while the
/// m-state counting strategy wins from all of them.
pub fn probe_am_lower(m: usize) -> Result<ProbeReport> {
    assert!(m >= 2);
    let started = Instant::now();
    let k = m as u64 + 1; // T = {m+1} is isolated and exceeds m
    assert!(is_isolated_element(&[k], k));
    let payoff = Payoff::Phi { t: vec![k] };
    let am = build_am(m, k as usize);
    let a = &am.arena;
    let no_min = Strategy::Positional(PositionalStrategy {
        owner: Player::Min,
        moves: vec![None; a.n_nodes()],
    });
    let entry_word = |i: usize| -> Vec<&'static str> {
        let mut w = vec!["0"];
        w.extend(std::iter::repeat_n("1", i));
        w
    };
    let mut trials = Vec::new();
    let mut index = 0;
    for skel in enumerate_skeletons(&["0", "1"], m - 1) {
        // pigeonhole: two entries land in the same state
        let states: Vec<usize> = (1..=m).map(|i| skel.run(&entry_word(i)).unwrap()).collect();
        let mut sorted = states.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let collision = sorted.len() < states.len();
        trials.push(TrialResult {
            index,
            pass: collision,
            detail: format!("pigeonhole on {}-state skeleton", skel.n_states()),
        });
        index += 1;
        // every chromatic strategy over this skeleton fails from some entry
        let n_states = skel.n_states();
        let mut picks = vec![0usize; n_states];
        loop {
            let moves = (0..n_states)
                .map(|s| {
                    (0..a.n_nodes())
                        .map(|v| {
                            if v == am.center {
                                Some(am.center_edges[picks[s]])
                            } else {
                                Some(a.out_edges(v)[0])
                            }
                        })
                        .collect()
                })
                .collect();
            let sigma = Strategy::Chromatic(ChromaticStrategy {
                owner: Player::Max,
                skeleton: skel.clone(),
                moves,
            });
            let mut loses_somewhere = false;
            for &entry in &am.left {
                let l = play(a, entry, &sigma, &no_min)?;
                if payoff.eval_lasso(a, &l)? == bit(false) {
                    loses_somewhere = true;
                    break;
                }
            }
            trials.push(TrialResult {
                index,
                pass: loses_somewhere,
                detail: format!("{n_states}-state strategy loses from some entry"),
            });
            index += 1;
            // odometer over the center's branch choice per state
            let mut pos = 0;
            while pos < n_states {
                picks[pos] += 1;
                if picks[pos] < m {
                    break;
                }
                picks[pos] = 0;
                pos += 1;
            }
            if pos == n_states {
                break;
            }
        }
    }
    // the m-state counting strategy wins from every entry
    let winner = Strategy::Chromatic(am_winning_strategy(&am, m));
    for &entry in &am.left {
        let l = play(a, entry, &winner, &no_min)?;
        trials.push(TrialResult {
            index,
            pass: payoff.eval_lasso(a, &l)? == bit(true),
            detail: format!("m-state counting strategy wins from entry {entry}"),
        });
        index += 1;
    }
    Ok(ProbeReport::finish(
        "am",
        serde_json::json!({ "m": m, "k": k }),
        trials,
        None,
        started,
    ))
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Sufficiency probe for the sum payoff: on random one-player arenas with at
/// most n nodes (both orientations), the optimum pipelines produce verified
/// equilibria whose witness memory fits in the 2n+2-state counter skeleton.
pub fn probe_mn_sufficiency(n: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    let started = Instant::now();
    let mut results = Vec::with_capacity(trials);
    for trial in 0..trials {
        let optimizer = if trial % 2 == 0 { Player::Max } else { Player::Min };
        let a = Arena::random(
            n,
            &["-1", "+1"],
            trial_seed(seed, trial),
            Some(optimizer.opponent()),
        );
        let pass = mn_trial(&a, optimizer, n)?;
        results.push(TrialResult {
            index: trial,
            pass,
            detail: format!("{} nodes, optimizer {:?}", a.n_nodes(), optimizer),
        });
    }
    Ok(ProbeReport::finish(
        "mn",
        serde_json::json!({ "n": n, "trials": trials }),
        results,
        Some(seed),
        started,
    ))
}

fn mn_trial(a: &Arena, optimizer: Player, n: usize) -> Result<bool> {
    let (values, witness) = Payoff::Psi.one_player_opt(a, optimizer)?;
    if witness.n_states() > 2 * n + 2 {
        return Ok(false);
    }
    let forced = Strategy::Positional(forced_strategy(a, optimizer.opponent()));
    let (sigma, tau) = match optimizer {
        Player::Max => (witness, forced),
        Player::Min => (forced, witness),
    };
    let starts: Vec<NodeId> = a.nodes().collect();
    let report = check_equilibrium(a, &Payoff::Psi, &sigma, &tau, &starts)?;
    if !report.is_equilibrium() {
        return Ok(false);
    }
    Ok(report
        .entries
        .iter()
        .all(|e| e.play_value == values[e.start]))
}

/// Equilibrium probe for the run-length payoff: on random two-player arenas,
/// solving the 3-priority parity game on the product with the run-length
/// skeleton and projecting yields an equilibrium for the payoff itself.
pub fn probe_mk_equilibrium(t: &[u64], trials: usize, seed: u64) -> Result<ProbeReport> {
    let started = Instant::now();
    let k = *t.iter().max().expect("T must be nonempty");
    assert!(is_isolated_element(t, k), "largest element of T must be isolated");
    let n_max = ((k * k) as usize).min(64);
    let payoff = Payoff::Phi { t: t.to_vec() };
    let mut results = Vec::with_capacity(trials);
    for trial in 0..trials {
        let a = Arena::random(n_max, &["0", "1"], trial_seed(seed, trial), None);
        let pass = mk_trial(&a, k, t, &payoff)?;
        results.push(TrialResult {
            index: trial,
            pass,
            detail: format!(
                "{} nodes, {:?}",
                a.n_nodes(),
                if a.is_one_player() == OnePlayer::TwoPlayer {
                    "two-player"
                } else {
                    "one-player"
                }
            ),
        });
    }
    Ok(ProbeReport::finish(
        "mk",
        serde_json::json!({ "T": t, "k": k, "n_max": n_max, "trials": trials }),
        results,
        Some(seed),
        started,
    ))
}

fn mk_trial(a: &Arena, k: u64, t: &[u64], payoff: &Payoff) -> Result<bool> {
    let (g, p, mk) = phi_parity_game(a, k, t)?;
    let sol = parity::solve(&g);
    let (sigma, tau) =
        product::project_equilibrium(&mk, a, &p, &sol.max_strategy, &sol.min_strategy)?;
    let starts: Vec<NodeId> = a.nodes().collect();
    let report = check_equilibrium(
        a,
        payoff,
        &Strategy::Chromatic(sigma),
        &Strategy::Chromatic(tau),
        &starts,
    )?;
    Ok(report.is_equilibrium())
}
