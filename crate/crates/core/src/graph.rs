//! Plain graph algorithms over arenas: reachability, strongly connected
//! components, cycle finding by Bellman-Ford, shortest-path trees.
//!
//! All functions take an optional node mask (`allowed`); edges with a masked
//! endpoint are ignored. Masks let callers work on sub-arenas without
//! re-indexing.

use std::collections::VecDeque;

use crate::arena::{Arena, EdgeId, NodeId};

fn full_mask(a: &Arena) -> Vec<bool> {
    vec![true; a.n_nodes()]
}

fn edge_ok(a: &Arena, e: EdgeId, allowed: &[bool]) -> bool {
    let edge = a.edge(e);
    allowed[edge.src] && allowed[edge.dst]
}

/// Nodes reachable from `starts` along edges, within the mask.
pub fn forward_reachable(a: &Arena, starts: &[NodeId], allowed: Option<&[bool]>) -> Vec<bool> {
    let allowed = allowed.map(|m| m.to_vec()).unwrap_or_else(|| full_mask(a));
    let mut seen = vec![false; a.n_nodes()];
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    for &v in starts {
        if allowed[v] && !seen[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in a.out_edges(v) {
            if !edge_ok(a, e, &allowed) {
                continue;
            }
            let w = a.edge(e).dst;
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Nodes that can reach some node of `targets` along edges, within the mask.
pub fn backward_reachable(a: &Arena, targets: &[bool], allowed: Option<&[bool]>) -> Vec<bool> {
    let allowed = allowed.map(|m| m.to_vec()).unwrap_or_else(|| full_mask(a));
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); a.n_nodes()];
    for e in 0..a.n_edges() {
        if edge_ok(a, e, &allowed) {
            preds[a.edge(e).dst].push(a.edge(e).src);
        }
    }
    let mut seen = vec![false; a.n_nodes()];
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    for v in 0..a.n_nodes() {
        if targets[v] && allowed[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &preds[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Tarjan strongly connected components. Returns per-node component ids;
/// masked-out nodes get usize::MAX.
pub fn scc(a: &Arena, allowed: Option<&[bool]>) -> Vec<usize> {
    let allowed = allowed.map(|m| m.to_vec()).unwrap_or_else(|| full_mask(a));
    let n = a.n_nodes();
    let mut comp = vec![usize::MAX; n];
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;

    // iterative Tarjan: (node, out-edge cursor)
    for root in 0..n {
        if !allowed[root] || index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(NodeId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut cursor)) = call.last_mut() {
            if *cursor < a.out_edges(v).len() {
                let e = a.out_edges(v)[*cursor];
                *cursor += 1;
                if !edge_ok(a, e, &allowed) {
                    continue;
                }
                let w = a.edge(e).dst;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&mut (u, _)) = call.last_mut() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Finds a simple cycle with strictly negative total weight, if one exists
/// within the mask. Weights are per edge id. Returns the cycle's edges in
/// order.
pub fn find_negative_cycle(
    a: &Arena,
    weights: &[i64],
    allowed: Option<&[bool]>,
) -> Option<Vec<EdgeId>> {
    let allowed = allowed.map(|m| m.to_vec()).unwrap_or_else(|| full_mask(a));
    let n = a.n_nodes();
    // Bellman-Ford from a virtual super-source: all distances start at 0.
    let mut dist = vec![0i128; n];
    let mut pred: Vec<Option<EdgeId>> = vec![None; n];
    let relax_round = |dist: &mut [i128], pred: &mut [Option<EdgeId>]| {
        let mut last = None;
        for (e, &w) in weights.iter().enumerate() {
            if !edge_ok(a, e, &allowed) {
                continue;
            }
            let (u, v) = (a.edge(e).src, a.edge(e).dst);
            let cand = dist[u] + w as i128;
            if cand < dist[v] {
                dist[v] = cand;
                pred[v] = Some(e);
                last = Some(v);
            }
        }
        last
    };
    let mut relaxed_node = None;
    for _ in 0..n {
        relaxed_node = relax_round(&mut dist, &mut pred);
        relaxed_node?;
    }
    // A relaxation in the n-th round means a negative cycle exists. Walk the
    // predecessor chain with a visited set to extract one; retry with extra
    // relaxation rounds if the chain has not wrapped into a cycle yet.
    for _ in 0..=n {
        if let Some(cycle) = extract_pred_cycle(a, &pred, relaxed_node.unwrap(), weights) {
            return Some(cycle);
        }
        relaxed_node = relax_round(&mut dist, &mut pred).or(relaxed_node);
    }
    // Exhaustive fallback; a negative cycle is guaranteed to exist.
    simple_cycles(a, Some(&allowed))
        .into_iter()
        .find(|c| c.iter().map(|&e| weights[e] as i128).sum::<i128>() < 0)
}

fn extract_pred_cycle(
    a: &Arena,
    pred: &[Option<EdgeId>],
    from: NodeId,
    weights: &[i64],
) -> Option<Vec<EdgeId>> {
    let mut seen_at = vec![usize::MAX; a.n_nodes()];
    let mut chain: Vec<EdgeId> = Vec::new();
    let mut v = from;
    loop {
        if seen_at[v] != usize::MAX {
            let mut cycle: Vec<EdgeId> = chain[seen_at[v]..].to_vec();
            cycle.reverse();
            let total: i128 = cycle.iter().map(|&e| weights[e] as i128).sum();
            return if total < 0 { Some(cycle) } else { None };
        }
        seen_at[v] = chain.len();
        let e = pred[v]?;
        chain.push(e);
        v = a.edge(e).src;
    }
}

/// Finds a simple cycle with total weight <= 0 within the mask. Exact via the
/// scaling trick: a simple cycle has at most n edges, so with transformed
/// weights w*(n+1) - 1 a strictly negative cycle exists iff some simple cycle
/// has original weight <= 0.
pub fn find_nonpositive_cycle(
    a: &Arena,
    weights: &[i64],
    allowed: Option<&[bool]>,
) -> Option<Vec<EdgeId>> {
    let k = a.n_nodes() as i64 + 1;
    let scaled: Vec<i64> = weights.iter().map(|&w| w * k - 1).collect();
    find_negative_cycle(a, &scaled, allowed)
}

/// Finds a simple cycle with strictly positive total weight within the mask.
pub fn find_positive_cycle(
    a: &Arena,
    weights: &[i64],
    allowed: Option<&[bool]>,
) -> Option<Vec<EdgeId>> {
    let negated: Vec<i64> = weights.iter().map(|&w| -w).collect();
    find_negative_cycle(a, &negated, allowed)
}

/// Per-node first edge of a shortest (fewest-edges) path to the target set,
/// within the mask. Targets themselves get None.
pub fn shortest_path_tree(
    a: &Arena,
    targets: &[bool],
    allowed: Option<&[bool]>,
) -> Vec<Option<EdgeId>> {
    let allowed = allowed.map(|m| m.to_vec()).unwrap_or_else(|| full_mask(a));
    let mut preds: Vec<Vec<EdgeId>> = vec![Vec::new(); a.n_nodes()];
    for e in 0..a.n_edges() {
        if edge_ok(a, e, &allowed) {
            preds[a.edge(e).dst].push(e);
        }
    }
    let mut tree: Vec<Option<EdgeId>> = vec![None; a.n_nodes()];
    let mut seen = vec![false; a.n_nodes()];
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    for v in 0..a.n_nodes() {
        if targets[v] && allowed[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in &preds[v] {
            let u = a.edge(e).src;
            if !seen[u] {
                seen[u] = true;
                tree[u] = Some(e);
                queue.push_back(u);
            }
        }
    }
    tree
}

/// Nodes from which a strictly positive (resp. negative) cycle is reachable,
/// plus one representative cycle per SCC that contains one. Used by the
/// reach-and-rotate strategies of the sum payoff pipelines.
pub struct CycleRegion {
    /// Nodes from which a qualifying cycle is reachable.
    pub reach: Vec<bool>,
    /// Representative simple cycles, disjoint across SCCs.
    pub cycles: Vec<Vec<EdgeId>>,
}

fn cycle_region_by(
    a: &Arena,
    finder: impl Fn(&[bool]) -> Option<Vec<EdgeId>>,
) -> CycleRegion {
    let comp = scc(a, None);
    let n_comp = comp.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    let mut cycles = Vec::new();
    let mut on_cycle = vec![false; a.n_nodes()];
    for c in 0..n_comp {
        let mask: Vec<bool> = comp.iter().map(|&x| x == c).collect();
        if let Some(cycle) = finder(&mask) {
            for &e in &cycle {
                on_cycle[a.edge(e).src] = true;
            }
            cycles.push(cycle);
        }
    }
    let reach = backward_reachable(a, &on_cycle, None);
    CycleRegion { reach, cycles }
}

pub fn positive_cycle_region(a: &Arena, weights: &[i64]) -> CycleRegion {
    cycle_region_by(a, |mask| find_positive_cycle(a, weights, Some(mask)))
}

pub fn negative_cycle_region(a: &Arena, weights: &[i64]) -> CycleRegion {
    cycle_region_by(a, |mask| find_negative_cycle(a, weights, Some(mask)))
}

/// Enumerates all simple cycles (edge sequences) within the mask. Intended
/// for desk-scale arenas only; used by tests and the mean payoff optimum.
pub fn simple_cycles(a: &Arena, allowed: Option<&[bool]>) -> Vec<Vec<EdgeId>> {
    let allowed = allowed.map(|m| m.to_vec()).unwrap_or_else(|| full_mask(a));
    let mut out = Vec::new();
    let n = a.n_nodes();
    // DFS over simple paths from each root, only visiting nodes >= root to
    // avoid reporting rotations of the same cycle.
    for root in 0..n {
        if !allowed[root] {
            continue;
        }
        let mut path: Vec<EdgeId> = Vec::new();
        let mut on_path = vec![false; n];
        on_path[root] = true;
        let mut cursors: Vec<usize> = vec![0];
        let mut nodes: Vec<NodeId> = vec![root];
        while let Some(&v) = nodes.last() {
            let cur = *cursors.last().unwrap();
            if cur < a.out_edges(v).len() {
                let e = a.out_edges(v)[cur];
                *cursors.last_mut().unwrap() += 1;
                if !edge_ok(a, e, &allowed) {
                    continue;
                }
                let w = a.edge(e).dst;
                if w == root {
                    let mut cycle = path.clone();
                    cycle.push(e);
                    out.push(cycle);
                } else if w > root && !on_path[w] {
                    on_path[w] = true;
                    path.push(e);
                    nodes.push(w);
                    cursors.push(0);
                }
            } else {
                nodes.pop();
                cursors.pop();
                if let Some(e) = path.pop() {
                    on_path[a.edge(e).dst] = false;
                } else {
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::Player;

    fn chain_with_loop() -> Arena {
        // 0 -> 1 -> 2, 2 has a self-loop; weights via colors
        Arena::build(
            &["-1", "+1"],
            vec![Player::Max, Player::Max, Player::Max],
            &[(0, 1, "+1"), (1, 2, "-1"), (2, 2, "+1")],
        )
        .unwrap()
    }

    #[test]
    fn reachability() {
        let a = chain_with_loop();
        let fwd = forward_reachable(&a, &[0], None);
        assert_eq!(fwd, vec![true, true, true]);
        let fwd = forward_reachable(&a, &[2], None);
        assert_eq!(fwd, vec![false, false, true]);
        let bwd = backward_reachable(&a, &[false, false, true], None);
        assert_eq!(bwd, vec![true, true, true]);
    }

    #[test]
    fn scc_ids() {
        let a = chain_with_loop();
        let comp = scc(&a, None);
        assert_ne!(comp[0], comp[1]);
        assert_ne!(comp[1], comp[2]);
    }

    #[test]
    fn cycle_finders() {
        let a = chain_with_loop();
        let w = vec![1i64, -1, 1];
        assert!(find_negative_cycle(&a, &w, None).is_none());
        let pos = find_positive_cycle(&a, &w, None).unwrap();
        assert_eq!(pos, vec![2]);
        let nonpos = find_nonpositive_cycle(&a, &w, None);
        assert!(nonpos.is_none());
        let w0 = vec![1i64, -1, 0];
        let z = find_nonpositive_cycle(&a, &w0, None).unwrap();
        assert_eq!(z, vec![2]);
    }

    #[test]
    fn shortest_paths() {
        let a = chain_with_loop();
        let tree = shortest_path_tree(&a, &[false, false, true], None);
        assert_eq!(tree, vec![Some(0), Some(1), None]);
    }

    #[test]
    fn cycle_regions() {
        let a = chain_with_loop();
        let w = vec![1i64, -1, 1];
        let pos = positive_cycle_region(&a, &w);
        assert_eq!(pos.reach, vec![true, true, true]);
        assert_eq!(pos.cycles.len(), 1);
        let neg = negative_cycle_region(&a, &w);
        assert_eq!(neg.reach, vec![false, false, false]);
    }

    #[test]
    fn simple_cycle_enumeration() {
        let a = chain_with_loop();
        let cycles = simple_cycles(&a, None);
        assert_eq!(cycles, vec![vec![2]]);
    }
}
