//! Memory skeletons (DFAs over colors), the strategy family, restriction of
//! an arena by a strategy, and canonical skeleton enumeration.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, EdgeId, NodeId, Player};
use crate::{Error, Result};

/// Deterministic finite automaton over a color alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemorySkeleton {
    pub alphabet: Vec<String>,
    pub init: usize,
    /// delta[state][color index] -> state; total.
    pub delta: Vec<Vec<usize>>,
}

impl MemorySkeleton {
    pub fn new(alphabet: Vec<String>, init: usize, delta: Vec<Vec<usize>>) -> MemorySkeleton {
        let n = delta.len();
        assert!(init < n);
        for row in &delta {
            assert_eq!(row.len(), alphabet.len());
            assert!(row.iter().all(|&s| s < n));
        }
        MemorySkeleton { alphabet, init, delta }
    }

    /// The one-state skeleton over the given alphabet (no memory).
    pub fn trivial(alphabet: Vec<String>) -> MemorySkeleton {
        let width = alphabet.len();
        MemorySkeleton { alphabet, init: 0, delta: vec![vec![0; width]] }
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn color_index(&self, sym: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|c| c == sym)
            .ok_or_else(|| Error::UnknownColor(sym.to_string()))
    }

    pub fn step_sym(&self, state: usize, sym: &str) -> Result<usize> {
        Ok(self.delta[state][self.color_index(sym)?])
    }

    /// delta extended to finite words (symbols), starting from the initial
    /// state.
    pub fn run(&self, word: &[&str]) -> Result<usize> {
        self.run_from(self.init, word)
    }

    pub fn run_from(&self, mut state: usize, word: &[&str]) -> Result<usize> {
        for sym in word {
            state = self.step_sym(state, sym)?;
        }
        Ok(state)
    }

    /// Per-arena-color transition column, so products avoid repeated symbol
    /// lookups. Errors if the skeleton alphabet does not cover the arena's.
    pub fn color_map(&self, a: &Arena) -> Result<Vec<usize>> {
        a.alphabet().iter().map(|sym| self.color_index(sym)).collect()
    }

    /// Canonical form: drop states unreachable from init, renumber by BFS
    /// first-occurrence order (scanning transition rows color by color).
    pub fn canonical(&self) -> MemorySkeleton {
        let mut order: Vec<usize> = vec![self.init];
        let mut rank = vec![usize::MAX; self.n_states()];
        rank[self.init] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for c in 0..self.alphabet.len() {
                let t = self.delta[s][c];
                if rank[t] == usize::MAX {
                    rank[t] = order.len();
                    order.push(t);
                }
            }
            i += 1;
        }
        let delta = order
            .iter()
            .map(|&s| self.delta[s].iter().map(|&t| rank[t]).collect())
            .collect();
        MemorySkeleton { alphabet: self.alphabet.clone(), init: 0, delta }
    }
}

/// All skeletons over `alphabet` with at most `max_states` states, up to
/// state-renaming equivalence.
pub fn enumerate_skeletons(alphabet: &[&str], max_states: usize) -> Vec<MemorySkeleton> {
    assert!(max_states >= 1);
    let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
    let width = alphabet.len();
    let mut seen: HashSet<(usize, Vec<Vec<usize>>)> = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_states {
        let entries = n * width;
        let mut counters = vec![0usize; entries];
        loop {
            let delta: Vec<Vec<usize>> = (0..n)
                .map(|s| (0..width).map(|c| counters[s * width + c]).collect())
                .collect();
            let skel = MemorySkeleton { alphabet: alphabet.clone(), init: 0, delta };
            let canon = skel.canonical();
            if seen.insert((canon.n_states(), canon.delta.clone())) {
                out.push(canon);
            }
            // odometer over state targets
            let mut pos = 0;
            loop {
                if pos == entries {
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < n {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
            if pos == entries {
                break;
            }
        }
    }
    out
}

/// Positional strategy: one outgoing edge per owned node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PositionalStrategy {
    pub owner: Player,
    /// moves[node] = Some(edge) exactly on owned nodes.
    pub moves: Vec<Option<EdgeId>>,
}

impl PositionalStrategy {
    pub fn validate(&self, a: &Arena) -> Result<()> {
        if self.moves.len() != a.n_nodes() {
            return Err(Error::BadStrategy("move table size mismatch".into()));
        }
        for v in a.nodes() {
            match self.moves[v] {
                Some(e) if a.owner(v) == self.owner => {
                    if e >= a.n_edges() || a.edge(e).src != v {
                        return Err(Error::BadStrategy(format!(
                            "move at node {v} is not one of its outgoing edges"
                        )));
                    }
                }
                None if a.owner(v) != self.owner => {}
                _ => {
                    return Err(Error::BadStrategy(format!(
                        "move table defined on the wrong nodes (node {v})"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Chromatic strategy: a skeleton plus a move per (state, owned node).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticStrategy {
    pub owner: Player,
    pub skeleton: MemorySkeleton,
    /// moves[state][node] = Some(edge) exactly on owned nodes.
    pub moves: Vec<Vec<Option<EdgeId>>>,
}

impl ChromaticStrategy {
    pub fn validate(&self, a: &Arena) -> Result<()> {
        if self.moves.len() != self.skeleton.n_states() {
            return Err(Error::BadStrategy("one move row per state required".into()));
        }
        for row in &self.moves {
            let p = PositionalStrategy { owner: self.owner, moves: row.clone() };
            p.validate(a)?;
        }
        Ok(())
    }

    pub fn from_positional(a: &Arena, p: &PositionalStrategy) -> ChromaticStrategy {
        ChromaticStrategy {
            owner: p.owner,
            skeleton: MemorySkeleton::trivial(a.alphabet().to_vec()),
            moves: vec![p.moves.clone()],
        }
    }
}

/// Either strategy form accepted by plays and equilibrium checking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Positional(PositionalStrategy),
    Chromatic(ChromaticStrategy),
}

impl Strategy {
    pub fn owner(&self) -> Player {
        match self {
            Strategy::Positional(p) => p.owner,
            Strategy::Chromatic(c) => c.owner,
        }
    }

    pub fn validate(&self, a: &Arena) -> Result<()> {
        match self {
            Strategy::Positional(p) => p.validate(a),
            Strategy::Chromatic(c) => c.validate(a),
        }
    }

    pub fn to_chromatic(&self, a: &Arena) -> ChromaticStrategy {
        match self {
            Strategy::Positional(p) => ChromaticStrategy::from_positional(a, p),
            Strategy::Chromatic(c) => c.clone(),
        }
    }

    pub fn n_states(&self) -> usize {
        match self {
            Strategy::Positional(_) => 1,
            Strategy::Chromatic(c) => c.skeleton.n_states(),
        }
    }

    pub fn initial_state(&self) -> usize {
        match self {
            Strategy::Positional(_) => 0,
            Strategy::Chromatic(c) => c.skeleton.init,
        }
    }

    pub fn move_at(&self, state: usize, v: NodeId) -> Option<EdgeId> {
        match self {
            Strategy::Positional(p) => p.moves[v],
            Strategy::Chromatic(c) => c.moves[state][v],
        }
    }

    pub fn step(&self, state: usize, color_sym: &str) -> Result<usize> {
        match self {
            Strategy::Positional(_) => Ok(0),
            Strategy::Chromatic(c) => c.skeleton.step_sym(state, color_sym),
        }
    }
}

/// Deletes the edges inconsistent with a positional strategy. Node set is
/// unchanged; the strategy's side becomes choice-free. Returns the restricted
/// arena and a map from new edge ids to old ones.
pub fn restrict(a: &Arena, s: &PositionalStrategy) -> (Arena, Vec<EdgeId>) {
    a.sub_arena(|e| {
        let v = a.edge(e).src;
        a.owner(v) != s.owner || s.moves[v] == Some(e)
    })
}

/// Counter strategies: finite modes plus a shared running counter over color
/// weights, with moves gated by counter thresholds. Covers both the
/// edge-observing switching strategies (no thresholds) and the running-sum
/// threshold strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralCounterStrategy {
    pub owner: Player,
    pub init_mode: usize,
    /// mode_update[mode][edge] -> next mode; total over edges.
    pub mode_update: Vec<Vec<usize>>,
    /// One move rule per mode.
    pub moves: Vec<MoveRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveRule {
    /// Counter-independent move table (per node).
    Fixed(Vec<Option<EdgeId>>),
    /// If counter >= theta use `ge`, otherwise `lt`.
    Threshold {
        theta: i64,
        ge: Vec<Option<EdgeId>>,
        lt: Vec<Option<EdgeId>>,
    },
}

impl GeneralCounterStrategy {
    pub fn n_modes(&self) -> usize {
        self.moves.len()
    }

    /// The threshold set consulted by this strategy.
    pub fn thresholds(&self) -> Vec<i64> {
        self.moves
            .iter()
            .filter_map(|m| match m {
                MoveRule::Fixed(_) => None,
                MoveRule::Threshold { theta, .. } => Some(*theta),
            })
            .collect()
    }

    pub fn move_at(&self, mode: usize, counter: i64, v: NodeId) -> Option<EdgeId> {
        match &self.moves[mode] {
            MoveRule::Fixed(table) => table[v],
            MoveRule::Threshold { theta, ge, lt } => {
                if counter >= *theta {
                    ge[v]
                } else {
                    lt[v]
                }
            }
        }
    }

    pub fn step_mode(&self, mode: usize, edge: EdgeId) -> usize {
        self.mode_update[mode][edge]
    }

    pub fn from_positional(a: &Arena, p: &PositionalStrategy) -> GeneralCounterStrategy {
        GeneralCounterStrategy {
            owner: p.owner,
            init_mode: 0,
            mode_update: vec![vec![0; a.n_edges()]],
            moves: vec![MoveRule::Fixed(p.moves.clone())],
        }
    }

    pub fn from_chromatic(a: &Arena, c: &ChromaticStrategy) -> Result<GeneralCounterStrategy> {
        let cmap = c.skeleton.color_map(a)?;
        let n_states = c.skeleton.n_states();
        let mode_update = (0..n_states)
            .map(|m| {
                (0..a.n_edges())
                    .map(|e| c.skeleton.delta[m][cmap[a.edge(e).color]])
                    .collect()
            })
            .collect();
        Ok(GeneralCounterStrategy {
            owner: c.owner,
            init_mode: c.skeleton.init,
            mode_update,
            moves: c.moves.iter().map(|row| MoveRule::Fixed(row.clone())).collect(),
        })
    }

    pub fn from_strategy(a: &Arena, s: &Strategy) -> Result<GeneralCounterStrategy> {
        match s {
            Strategy::Positional(p) => Ok(GeneralCounterStrategy::from_positional(a, p)),
            Strategy::Chromatic(c) => GeneralCounterStrategy::from_chromatic(a, c),
        }
    }
}
