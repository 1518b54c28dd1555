//! Product arenas, trivial witnesses, and strategy projection between a
//! product and its base arena.

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, Edge, EdgeId, NodeId};
use crate::memory::{ChromaticStrategy, MemorySkeleton, PositionalStrategy};
use crate::{Error, Result};

/// The arena M x A plus origin maps back to skeleton states and base ids.
#[derive(Debug, Clone)]
pub struct ProductArena {
    pub arena: Arena,
    pub n_states: usize,
    pub n_base_nodes: usize,
    /// node_origin[product node] = (state, base node)
    pub node_origin: Vec<(usize, NodeId)>,
    /// edge_origin[product edge] = (state, base edge)
    pub edge_origin: Vec<(usize, EdgeId)>,
}

impl ProductArena {
    pub fn node_id(&self, state: usize, v: NodeId) -> NodeId {
        state * self.n_base_nodes + v
    }

    pub fn edge_id(&self, state: usize, e: EdgeId) -> EdgeId {
        state * (self.edge_origin.len() / self.n_states) + e
    }

    /// The projection witness (m, v) -> m; trivial for every product.
    pub fn projection_witness(&self) -> TrivialWitness {
        TrivialWitness {
            f: self.node_origin.iter().map(|&(m, _)| m).collect(),
        }
    }
}

/// Node-to-state labeling claimed to commute with the skeleton transition
/// along every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrivialWitness {
    pub f: Vec<usize>,
}

/// Builds M x A: nodes are (state, base node), each base edge is copied once
/// per state, landing in the state advanced by the edge's color.
pub fn build(m: &MemorySkeleton, a: &Arena) -> Result<ProductArena> {
    let cmap = m.color_map(a)?;
    let n_states = m.n_states();
    let nv = a.n_nodes();
    let ne = a.n_edges();
    let mut owners = Vec::with_capacity(n_states * nv);
    let mut node_origin = Vec::with_capacity(n_states * nv);
    for s in 0..n_states {
        for v in 0..nv {
            owners.push(a.owner(v));
            node_origin.push((s, v));
        }
    }
    let mut edges = Vec::with_capacity(n_states * ne);
    let mut edge_origin = Vec::with_capacity(n_states * ne);
    for s in 0..n_states {
        for e in 0..ne {
            let Edge { src, dst, color } = *a.edge(e);
            let s2 = m.delta[s][cmap[color]];
            edges.push(Edge { src: s * nv + src, dst: s2 * nv + dst, color });
            edge_origin.push((s, e));
        }
    }
    Ok(ProductArena {
        arena: Arena::from_parts(a.alphabet().to_vec(), owners, edges),
        n_states,
        n_base_nodes: nv,
        node_origin,
        edge_origin,
    })
}

/// Checks the commutation condition delta(f(src), col(e)) = f(dst) on every
/// edge; returns the first violating edge id.
pub fn check_trivial(
    m: &MemorySkeleton,
    a: &Arena,
    f: &TrivialWitness,
) -> std::result::Result<(), EdgeId> {
    let cmap = match m.color_map(a) {
        Ok(c) => c,
        Err(_) => return Err(0),
    };
    for e in 0..a.n_edges() {
        let edge = a.edge(e);
        if m.delta[f.f[edge.src]][cmap[edge.color]] != f.f[edge.dst] {
            return Err(e);
        }
    }
    Ok(())
}

/// Turns a positional strategy pair on M x A into a chromatic pair on A:
/// the move at (state, node) is the base edge underlying the product move.
pub fn project_equilibrium(
    m: &MemorySkeleton,
    a: &Arena,
    p: &ProductArena,
    sigma_hat: &PositionalStrategy,
    tau_hat: &PositionalStrategy,
) -> Result<(ChromaticStrategy, ChromaticStrategy)> {
    let project = |s: &PositionalStrategy| -> Result<ChromaticStrategy> {
        let mut moves = vec![vec![None; a.n_nodes()]; p.n_states];
        for pv in 0..p.arena.n_nodes() {
            let (state, v) = p.node_origin[pv];
            if let Some(pe) = s.moves[pv] {
                moves[state][v] = Some(p.edge_origin[pe].1);
            }
        }
        let c = ChromaticStrategy { owner: s.owner, skeleton: m.clone(), moves };
        c.validate(a)?;
        Ok(c)
    };
    Ok((project(sigma_hat)?, project(tau_hat)?))
}

/// Collapses a chromatic strategy to a positional one through a trivial
/// witness: p(v) = moves(f(v), v). Agrees with the chromatic strategy on all
/// plays starting in nodes labeled by the initial state.
pub fn degenerate(
    m: &MemorySkeleton,
    a: &Arena,
    f: &TrivialWitness,
    s: &ChromaticStrategy,
) -> Result<PositionalStrategy> {
    if check_trivial(m, a, f).is_err() {
        return Err(Error::BadStrategy("witness is not trivial for this arena".into()));
    }
    let moves = (0..a.n_nodes()).map(|v| s.moves[f.f[v]][v]).collect();
    let p = PositionalStrategy { owner: s.owner, moves };
    p.validate(a)?;
    Ok(p)
}

/// Restriction by a chromatic strategy: restrict the product M x A by the
/// positional image of the strategy. Returns the restricted product (origin
/// maps already composed through the restriction).
pub fn restrict_by_chromatic(a: &Arena, s: &ChromaticStrategy) -> Result<ProductArena> {
    let p = build(&s.skeleton, a)?;
    let keep: Vec<bool> = (0..p.arena.n_edges())
        .map(|pe| {
            let (state, e) = p.edge_origin[pe];
            let v = a.edge(e).src;
            a.owner(v) != s.owner || s.moves[state][v] == Some(e)
        })
        .collect();
    let (arena, back) = p.arena.sub_arena(|pe| keep[pe]);
    Ok(ProductArena {
        arena,
        n_states: p.n_states,
        n_base_nodes: p.n_base_nodes,
        node_origin: p.node_origin,
        edge_origin: back.iter().map(|&pe| p.edge_origin[pe]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Player;
    use crate::memory::enumerate_skeletons;
    use crate::probes::{build_fig2, synth_mn};
    use proptest::prelude::*;

    #[test]
    fn trivial_skeleton_product_is_isomorphic() {
        let a = build_fig2();
        let m = MemorySkeleton::trivial(a.alphabet().to_vec());
        let p = build(&m, &a).unwrap();
        assert_eq!(p.arena.n_nodes(), a.n_nodes());
        assert_eq!(p.arena.n_edges(), a.n_edges());
        for e in 0..a.n_edges() {
            assert_eq!(p.arena.edge(e), a.edge(e));
        }
    }

    #[test]
    fn cardinality_law() {
        let a = build_fig2();
        let m = synth_mn(1); // 4 states
        let p = build(&m, &a).unwrap();
        assert_eq!(p.arena.n_nodes(), 4 * 2);
        assert_eq!(p.arena.n_edges(), 4 * 4);
        assert!(p.arena.validate().is_ok());
    }

    #[test]
    fn projection_witness_is_trivial() {
        let a = build_fig2();
        let m = synth_mn(2);
        let p = build(&m, &a).unwrap();
        assert!(check_trivial(&m, &p.arena, &p.projection_witness()).is_ok());
    }

    #[test]
    fn constructed_violation_is_reported() {
        let a = build_fig2();
        let m = synth_mn(1);
        // constant labeling by the initial state disagrees on every edge
        let f = TrivialWitness { f: vec![m.init; a.n_nodes()] };
        assert_eq!(check_trivial(&m, &a, &f), Err(0));
    }

    #[test]
    fn degenerate_round_trip() {
        let a = build_fig2();
        let p = PositionalStrategy { owner: Player::Max, moves: vec![Some(1), None] };
        let m = MemorySkeleton::trivial(a.alphabet().to_vec());
        let c = ChromaticStrategy::from_positional(&a, &p);
        let f = TrivialWitness { f: vec![0; a.n_nodes()] };
        let back = degenerate(&m, &a, &f, &c).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn restrict_by_chromatic_sizes() {
        let a = build_fig2();
        let skels = enumerate_skeletons(&["-1", "+1"], 2);
        let m = skels.iter().find(|s| s.n_states() == 2).unwrap().clone();
        let moves = vec![vec![Some(0), None], vec![Some(1), None]];
        let c = ChromaticStrategy { owner: Player::Max, skeleton: m, moves };
        c.validate(&a).unwrap();
        let r = restrict_by_chromatic(&a, &c).unwrap();
        assert_eq!(r.arena.n_nodes(), 2 * a.n_nodes());
        for pv in 0..r.arena.n_nodes() {
            let (_, v) = r.node_origin[pv];
            if a.owner(v) == Player::Max {
                assert_eq!(r.arena.out_edges(pv).len(), 1);
            }
        }
    }

    proptest! {
        #[test]
        fn path_correspondence(seed in 0u64..60, steps in 1usize..8) {
            let a = Arena::random(5, &["-1", "+1"], seed, None);
            let m = synth_mn(2);
            let p = build(&m, &a).unwrap();
            // walk a base path greedily and lift it edge by edge
            let mut v = 0;
            let mut state = m.init;
            for _ in 0..steps {
                let e = a.out_edges(v)[0];
                let pe = p.edge_id(state, e);
                let (ps, pv) = (p.arena.edge(pe).src, p.arena.edge(pe).dst);
                prop_assert_eq!(ps, p.node_id(state, v));
                prop_assert_eq!(p.arena.color_of(pe), a.color_of(e));
                state = m.step_sym(state, a.color_of(e)).unwrap();
                v = a.edge(e).dst;
                prop_assert_eq!(pv, p.node_id(state, v));
            }
        }

        #[test]
        fn products_validate(seed in 0u64..40) {
            let a = Arena::random(4, &["-1", "+1"], seed, None);
            let p = build(&synth_mn(2), &a).unwrap();
            prop_assert!(p.arena.validate().is_ok());
            prop_assert!(check_trivial(&synth_mn(2), &p.arena, &p.projection_witness()).is_ok());
        }
    }
}
