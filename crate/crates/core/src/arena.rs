//! Arena data model: edge-colored two-player game graphs, paths, lassos,
//! validation, the one-player predicate, JSON/DOT serialization and random
//! generation.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;
/// Index into an arena's color alphabet.
pub type ColorId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Max => Player::Min,
            Player::Min => Player::Max,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Max => write!(f, "Max"),
            Player::Min => write!(f, "Min"),
        }
    }
}

/// A directed colored edge. Parallel edges and self-loops are first-class;
/// edges are identified by their index, never by (src, dst, color).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub color: ColorId,
}

/// Finite edge-colored game graph with an ownership partition.
///
/// Immutable after construction; all derived arenas (restrictions, products,
/// bridges) are fresh values with origin maps back to their parents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arena {
    alphabet: Vec<String>,
    owners: Vec<Player>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
}

/// One violation found by [`Arena::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Violation {
    DeadEndNode(NodeId),
    DanglingEdge(EdgeId),
    UnknownColor(EdgeId),
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match v {
                Violation::DeadEndNode(n) => write!(f, "node {n} has no outgoing edge")?,
                Violation::DanglingEdge(e) => write!(f, "edge {e} has an out-of-range endpoint")?,
                Violation::UnknownColor(e) => write!(f, "edge {e} has a color outside the alphabet")?,
            }
        }
        Ok(())
    }
}

/// Classification of the one-player predicate. When neither side has any
/// choice at all, `MinHasNoChoice` is reported; both one-player oracles agree
/// on choice-free arenas, so the distinction never matters downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OnePlayer {
    MinHasNoChoice,
    MaxHasNoChoice,
    TwoPlayer,
}

/// Ultimately periodic play: a finite (possibly empty) prefix followed by a
/// nonempty cycle, both given as edge id sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso {
    pub prefix: Vec<EdgeId>,
    pub cycle: Vec<EdgeId>,
}

impl Lasso {
    pub fn new(prefix: Vec<EdgeId>, cycle: Vec<EdgeId>) -> Lasso {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Lasso { prefix, cycle }
    }

    /// The lasso with its cycle repeated `k` times (same infinite play).
    pub fn unrolled(&self, k: usize) -> Lasso {
        assert!(k >= 1);
        let mut cycle = Vec::with_capacity(self.cycle.len() * k);
        for _ in 0..k {
            cycle.extend_from_slice(&self.cycle);
        }
        Lasso { prefix: self.prefix.clone(), cycle }
    }

    /// The lasso with its cycle rotated by `r` positions; the rotated-off
    /// edges move into the prefix (same infinite play).
    pub fn rotated(&self, r: usize) -> Lasso {
        let r = r % self.cycle.len();
        let mut prefix = self.prefix.clone();
        prefix.extend_from_slice(&self.cycle[..r]);
        let mut cycle = self.cycle[r..].to_vec();
        cycle.extend_from_slice(&self.cycle[..r]);
        Lasso { prefix, cycle }
    }
}

impl Arena {
    /// Permissive constructor: invariants are checked by [`Arena::validate`],
    /// not here, so malformed inputs can be constructed and reported on.
    pub fn from_parts(alphabet: Vec<String>, owners: Vec<Player>, edges: Vec<Edge>) -> Arena {
        let mut out = vec![Vec::new(); owners.len()];
        for (id, e) in edges.iter().enumerate() {
            if e.src < owners.len() {
                out[e.src].push(id);
            }
        }
        Arena { alphabet, owners, edges, out }
    }

    /// Convenience constructor with colors given as symbols.
    pub fn build(
        alphabet: &[&str],
        owners: Vec<Player>,
        edges: &[(NodeId, NodeId, &str)],
    ) -> Result<Arena> {
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let mut es = Vec::with_capacity(edges.len());
        for &(src, dst, sym) in edges {
            let color = alphabet
                .iter()
                .position(|c| c == sym)
                .ok_or_else(|| Error::UnknownColor(sym.to_string()))?;
            es.push(Edge { src, dst, color });
        }
        Ok(Arena::from_parts(alphabet, owners, es))
    }

    pub fn n_nodes(&self) -> usize {
        self.owners.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn owner(&self, v: NodeId) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.owners.len()
    }

    pub fn color_symbol(&self, c: ColorId) -> &str {
        &self.alphabet[c]
    }

    pub fn color_of(&self, e: EdgeId) -> &str {
        &self.alphabet[self.edges[e].color]
    }

    /// Looks up a color symbol in the alphabet.
    pub fn color_index(&self, sym: &str) -> Result<ColorId> {
        self.alphabet
            .iter()
            .position(|c| c == sym)
            .ok_or_else(|| Error::UnknownColor(sym.to_string()))
    }

    /// Per-color integer weights, parsing each alphabet symbol as an integer.
    pub fn numeric_alphabet(&self) -> Result<Vec<i64>> {
        self.alphabet
            .iter()
            .map(|s| s.parse::<i64>().map_err(|_| Error::NonNumericColor(s.clone())))
            .collect()
    }

    pub fn validate(&self) -> std::result::Result<(), ValidationReport> {
        let mut violations = Vec::new();
        for e in 0..self.edges.len() {
            let Edge { src, dst, color } = self.edges[e];
            if src >= self.owners.len() || dst >= self.owners.len() {
                violations.push(Violation::DanglingEdge(e));
            }
            if color >= self.alphabet.len() {
                violations.push(Violation::UnknownColor(e));
            }
        }
        for v in 0..self.owners.len() {
            if self.out[v].is_empty() {
                violations.push(Violation::DeadEndNode(v));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationReport { violations })
        }
    }

    pub fn is_one_player(&self) -> OnePlayer {
        let min_free = self
            .nodes()
            .all(|v| self.owners[v] != Player::Min || self.out[v].len() == 1);
        let max_free = self
            .nodes()
            .all(|v| self.owners[v] != Player::Max || self.out[v].len() == 1);
        if min_free {
            OnePlayer::MinHasNoChoice
        } else if max_free {
            OnePlayer::MaxHasNoChoice
        } else {
            OnePlayer::TwoPlayer
        }
    }

    /// True when `side` has no choice anywhere (every node it owns has
    /// out-degree one).
    pub fn side_is_choice_free(&self, side: Player) -> bool {
        self.nodes()
            .all(|v| self.owners[v] != side || self.out[v].len() == 1)
    }

    /// Checks that `edges` chain into a path; returns the index of the first
    /// edge whose source does not match its predecessor's target.
    pub fn check_path(&self, edges: &[EdgeId]) -> Result<()> {
        for i in 1..edges.len() {
            if self.edges[edges[i - 1]].dst != self.edges[edges[i]].src {
                return Err(Error::NotAPath(i));
            }
        }
        Ok(())
    }

    pub fn check_lasso(&self, l: &Lasso) -> Result<()> {
        let mut all = l.prefix.clone();
        all.extend_from_slice(&l.cycle);
        self.check_path(&all)?;
        let first = l.cycle[0];
        let last = *l.cycle.last().unwrap();
        if self.edges[last].dst != self.edges[first].src {
            return Err(Error::NotAPath(all.len()));
        }
        Ok(())
    }

    /// Start node of a lasso (source of its first edge).
    pub fn lasso_start(&self, l: &Lasso) -> NodeId {
        let first = l.prefix.first().copied().unwrap_or(l.cycle[0]);
        self.edges[first].src
    }

    /// Per-edge color word of a finite path. The zero-length path yields the
    /// empty word.
    pub fn color_word(&self, edges: &[EdgeId]) -> Result<Vec<ColorId>> {
        self.check_path(edges)?;
        Ok(edges.iter().map(|&e| self.edges[e].color).collect())
    }

    /// Color word of a lasso, as (prefix word, cycle word).
    pub fn color_word_lasso(&self, l: &Lasso) -> Result<(Vec<ColorId>, Vec<ColorId>)> {
        self.check_lasso(l)?;
        let pw = l.prefix.iter().map(|&e| self.edges[e].color).collect();
        let cw = l.cycle.iter().map(|&e| self.edges[e].color).collect();
        Ok((pw, cw))
    }

    /// Deletes every edge not in `keep`, re-indexing the survivors.
    /// Returns the sub-arena together with a map from new to old edge ids.
    pub fn sub_arena(&self, keep: impl Fn(EdgeId) -> bool) -> (Arena, Vec<EdgeId>) {
        let mut edges = Vec::new();
        let mut back = Vec::new();
        for e in 0..self.edges.len() {
            if keep(e) {
                edges.push(self.edges[e]);
                back.push(e);
            }
        }
        (
            Arena::from_parts(self.alphabet.clone(), self.owners.clone(), edges),
            back,
        )
    }

    /// Node-induced sub-arena: keeps the flagged nodes and all edges between
    /// them, re-indexing both. Returns the sub-arena plus node and edge maps
    /// from new ids to old ones.
    pub fn induced(&self, keep: &[bool]) -> (Arena, Vec<NodeId>, Vec<EdgeId>) {
        let mut node_back = Vec::new();
        let mut new_id = vec![usize::MAX; self.owners.len()];
        for v in 0..self.owners.len() {
            if keep[v] {
                new_id[v] = node_back.len();
                node_back.push(v);
            }
        }
        let owners = node_back.iter().map(|&v| self.owners[v]).collect();
        let mut edges = Vec::new();
        let mut edge_back = Vec::new();
        for e in 0..self.edges.len() {
            let Edge { src, dst, color } = self.edges[e];
            if keep[src] && keep[dst] {
                edges.push(Edge { src: new_id[src], dst: new_id[dst], color });
                edge_back.push(e);
            }
        }
        (
            Arena::from_parts(self.alphabet.clone(), owners, edges),
            node_back,
            edge_back,
        )
    }

    /// Random valid arena with at most `n_max` nodes; deterministic per seed.
    /// With `one_player = Some(side)`, every node owned by `side` gets
    /// out-degree exactly one.
    pub fn random(
        n_max: usize,
        alphabet: &[&str],
        seed: u64,
        one_player: Option<Player>,
    ) -> Arena {
        assert!(n_max >= 1 && !alphabet.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=n_max);
        let owners: Vec<Player> = (0..n)
            .map(|_| if rng.gen::<bool>() { Player::Max } else { Player::Min })
            .collect();
        let mut edges = Vec::new();
        for (v, &owner) in owners.iter().enumerate() {
            let deg = match one_player {
                Some(side) if owner == side => 1,
                _ => rng.gen_range(1..=3usize),
            };
            for _ in 0..deg {
                edges.push(Edge {
                    src: v,
                    dst: rng.gen_range(0..n),
                    color: rng.gen_range(0..alphabet.len()),
                });
            }
        }
        let alphabet = alphabet.iter().map(|s| s.to_string()).collect();
        Arena::from_parts(alphabet, owners, edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_with_priorities(None)
    }

    pub fn to_json_with_priorities(&self, priorities: Option<&[u32]>) -> serde_json::Value {
        let file = ArenaJson {
            alphabet: self.alphabet.clone(),
            nodes: (0..self.owners.len())
                .map(|id| NodeJson { id, owner: self.owners[id] })
                .collect(),
            edges: (0..self.edges.len())
                .map(|id| EdgeJson {
                    id,
                    src: self.edges[id].src,
                    dst: self.edges[id].dst,
                    color: self.alphabet[self.edges[id].color].clone(),
                    priority: priorities.map(|p| p[id]),
                })
                .collect(),
        };
        serde_json::to_value(file).expect("arena serialization cannot fail")
    }

    /// Parses the JSON interchange format. Returns the arena and, when every
    /// edge carries one, the optional per-edge priority map.
    pub fn from_json(value: &serde_json::Value) -> Result<(Arena, Option<Vec<u32>>)> {
        let file: ArenaJson = serde_json::from_value(value.clone())?;
        let n = file.nodes.len();
        let mut owners = vec![Player::Max; n];
        for node in &file.nodes {
            if node.id >= n {
                return Err(Error::BadParameter(format!(
                    "node id {} out of range (ids must be dense 0..{})",
                    node.id, n
                )));
            }
            owners[node.id] = node.owner;
        }
        let m = file.edges.len();
        let mut edges = vec![Edge { src: 0, dst: 0, color: 0 }; m];
        let mut priorities = vec![None; m];
        for e in &file.edges {
            if e.id >= m {
                return Err(Error::BadParameter(format!(
                    "edge id {} out of range (ids must be dense 0..{})",
                    e.id, m
                )));
            }
            let color = file
                .alphabet
                .iter()
                .position(|c| *c == e.color)
                .ok_or_else(|| Error::UnknownColor(e.color.clone()))?;
            edges[e.id] = Edge { src: e.src, dst: e.dst, color };
            priorities[e.id] = e.priority;
        }
        let prio = if m > 0 && priorities.iter().all(|p| p.is_some()) {
            Some(priorities.into_iter().map(|p| p.unwrap()).collect())
        } else {
            None
        };
        Ok((Arena::from_parts(file.alphabet, owners, edges), prio))
    }

    /// DOT export: Max nodes are boxes, Min nodes triangles, edges labeled by
    /// color.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph arena {\n");
        for v in self.nodes() {
            let shape = match self.owners[v] {
                Player::Max => "box",
                Player::Min => "triangle",
            };
            s.push_str(&format!("  n{v} [shape={shape}, label=\"{v}\"];\n"));
        }
        for e in 0..self.edges.len() {
            let Edge { src, dst, color } = self.edges[e];
            s.push_str(&format!(
                "  n{src} -> n{dst} [label=\"{}\"];\n",
                self.alphabet[color]
            ));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize, Deserialize)]
struct ArenaJson {
    alphabet: Vec<String>,
    nodes: Vec<NodeJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: NodeId,
    owner: Player,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: EdgeId,
    src: NodeId,
    dst: NodeId,
    color: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    priority: Option<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::build_fig2;
    use proptest::prelude::*;

    fn single_loop() -> Arena {
        Arena::build(&["0"], vec![Player::Max], &[(0, 0, "0")]).unwrap()
    }

    #[test]
    fn validate_minimal_legal_arena() {
        assert!(single_loop().validate().is_ok());
    }

    #[test]
    fn validate_dead_end() {
        let a = Arena::from_parts(vec!["0".into()], vec![Player::Max], vec![]);
        let report = a.validate().unwrap_err();
        assert_eq!(report.violations, vec![Violation::DeadEndNode(0)]);
    }

    #[test]
    fn validate_fig2() {
        assert!(build_fig2().validate().is_ok());
    }

    #[test]
    fn validate_dangling_and_unknown() {
        let a = Arena::from_parts(
            vec!["0".into()],
            vec![Player::Max],
            vec![Edge { src: 0, dst: 5, color: 0 }, Edge { src: 0, dst: 0, color: 9 }],
        );
        let report = a.validate().unwrap_err();
        assert!(report.violations.contains(&Violation::DanglingEdge(0)));
        assert!(report.violations.contains(&Violation::UnknownColor(1)));
    }

    #[test]
    fn one_player_classification() {
        let a = Arena::build(
            &["0"],
            vec![Player::Max],
            &[(0, 0, "0"), (0, 0, "0")],
        )
        .unwrap();
        // no Min nodes at all
        assert_eq!(a.is_one_player(), OnePlayer::MinHasNoChoice);
        assert_eq!(build_fig2().is_one_player(), OnePlayer::TwoPlayer);
    }

    #[test]
    fn color_word_basics() {
        let a = build_fig2();
        assert_eq!(a.color_word(&[]).unwrap(), Vec::<ColorId>::new());
        let l = Lasso::new(vec![1], vec![2]); // square -> triangle, triangle loop
        let (pw, cw) = a.color_word_lasso(&l).unwrap();
        assert_eq!(pw.len(), 1);
        assert_eq!(cw.len(), 1);
        assert_eq!(a.color_symbol(pw[0]), "+1");
        assert_eq!(a.color_symbol(cw[0]), "+1");
    }

    #[test]
    fn color_word_rejects_non_paths() {
        let a = build_fig2();
        // square loop followed by triangle loop does not chain
        assert!(matches!(a.color_word(&[0, 2]), Err(Error::NotAPath(1))));
    }

    #[test]
    fn random_arena_deterministic() {
        let a = Arena::random(5, &["-1", "+1"], 7, Some(Player::Min));
        let b = Arena::random(5, &["-1", "+1"], 7, Some(Player::Min));
        assert_eq!(a, b);
        assert_eq!(a.is_one_player(), OnePlayer::MinHasNoChoice);
    }

    #[test]
    fn json_round_trip() {
        let a = build_fig2();
        let v = a.to_json();
        let (b, prio) = Arena::from_json(&v).unwrap();
        assert_eq!(a, b);
        assert!(prio.is_none());
    }

    #[test]
    fn dot_export_mentions_shapes() {
        let dot = build_fig2().to_dot();
        assert!(dot.contains("shape=box"));
        assert!(dot.contains("shape=triangle"));
    }

    proptest! {
        #[test]
        fn random_arenas_validate(seed in 0u64..500, n_max in 1usize..=32) {
            let a = Arena::random(n_max, &["0", "1"], seed, None);
            prop_assert!(a.validate().is_ok());
            prop_assert!(a.n_nodes() <= n_max);
        }

        #[test]
        fn one_player_means_out_degree_one(seed in 0u64..200) {
            let a = Arena::random(6, &["-1", "+1"], seed, Some(Player::Min));
            if a.is_one_player() == OnePlayer::MinHasNoChoice {
                for v in a.nodes() {
                    if a.owner(v) == Player::Min {
                        prop_assert_eq!(a.out_edges(v).len(), 1);
                    }
                }
            }
        }

        #[test]
        fn color_word_length(seed in 0u64..100) {
            let a = Arena::random(8, &["0", "1"], seed, None);
            // walk 3 arbitrary steps from node 0
            let mut v = 0;
            let mut path = Vec::new();
            for _ in 0..3 {
                let e = a.out_edges(v)[0];
                path.push(e);
                v = a.edge(e).dst;
            }
            prop_assert_eq!(a.color_word(&path).unwrap().len(), 3);
        }
    }
}
