//! Independent oracles for the acceptance suite. Everything here re-derives
//! values from first principles (brute-force strategy enumeration, bounded
//! counter graphs, run-tracking reachability) without calling the library's
//! solvers, so agreement is meaningful evidence.

#![allow(dead_code)]

use chromem::arena::{Arena, Edge, EdgeId, NodeId, Player};
use chromem::parity::Convention;
use chromem::payoffs::Value;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random arena with a hard edge cap (the library generator has no cap).
/// Returns the arena and one random priority (0..=p_max) per edge.
pub fn gen_capped(
    seed: u64,
    n_max: usize,
    e_max: usize,
    alphabet: &[&str],
    p_max: u32,
) -> (Arena, Vec<u32>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=n_max);
    let e_max = e_max.max(n);
    let m = rng.gen_range(n..=e_max);
    let mut edges = Vec::with_capacity(m);
    // one outgoing edge per node first, then the remainder anywhere
    for v in 0..n {
        let dst = rng.gen_range(0..n);
        let c = rng.gen_range(0..alphabet.len());
        edges.push((v, dst, c));
    }
    for _ in n..m {
        let src = rng.gen_range(0..n);
        let dst = rng.gen_range(0..n);
        let c = rng.gen_range(0..alphabet.len());
        edges.push((src, dst, c));
    }
    let owners = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::Max } else { Player::Min })
        .collect();
    let named: Vec<(usize, usize, &str)> =
        edges.iter().map(|&(s, d, c)| (s, d, alphabet[c])).collect();
    let a = Arena::build(alphabet, owners, &named).unwrap();
    let priorities = (0..a.n_edges()).map(|_| rng.gen_range(0..=p_max)).collect();
    (a, priorities)
}

/// All positional move tables for one side.
pub fn enumerate_positional(a: &Arena, side: Player) -> Vec<Vec<Option<EdgeId>>> {
    let owned: Vec<NodeId> = a.nodes().filter(|&v| a.owner(v) == side).collect();
    let mut out = vec![vec![None; a.n_nodes()]];
    for &v in &owned {
        let mut next = Vec::new();
        for partial in &out {
            for &e in a.out_edges(v) {
                let mut t = partial.clone();
                t[v] = Some(e);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The lasso induced by a positional pair, simulated directly.
pub fn lasso_of(
    a: &Arena,
    start: NodeId,
    smax: &[Option<EdgeId>],
    smin: &[Option<EdgeId>],
) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let mut first_seen = vec![usize::MAX; a.n_nodes()];
    let mut edges = Vec::new();
    let mut v = start;
    loop {
        if first_seen[v] != usize::MAX {
            let i = first_seen[v];
            return (edges[..i].to_vec(), edges[i..].to_vec());
        }
        first_seen[v] = edges.len();
        let e = match a.owner(v) {
            Player::Max => smax[v].unwrap(),
            Player::Min => smin[v].unwrap(),
        };
        edges.push(e);
        v = a.edge(e).dst;
    }
}

/// True iff Max wins the lasso under the given edge priorities.
pub fn parity_lasso_winner(
    priorities: &[u32],
    cycle: &[EdgeId],
    convention: Convention,
) -> bool {
    let top = cycle.iter().map(|&e| priorities[e]).max().unwrap();
    match convention {
        Convention::Even => top % 2 == 0,
        Convention::Odd => top % 2 == 1,
    }
}

/// Brute-force minimax winner map over all positional pairs.
pub fn parity_minimax(a: &Arena, priorities: &[u32], convention: Convention) -> Vec<bool> {
    let maxes = enumerate_positional(a, Player::Max);
    let mins = enumerate_positional(a, Player::Min);
    (0..a.n_nodes())
        .map(|v| {
            maxes.iter().any(|smax| {
                mins.iter().all(|smin| {
                    let (_, cycle) = lasso_of(a, v, smax, smin);
                    parity_lasso_winner(priorities, &cycle, convention)
                })
            })
        })
        .collect()
}

fn mean_of_cycle(a: &Arena, weights: &[i64], cycle: &[EdgeId]) -> Value {
    let sum: i64 = cycle.iter().map(|&e| weights[a.edge(e).color]).sum();
    Value::new(sum, cycle.len() as i64)
}

/// Brute-force minimax mean-payoff values over all positional pairs.
pub fn mean_minimax(a: &Arena) -> Vec<Value> {
    let weights = a.numeric_alphabet().unwrap();
    let maxes = enumerate_positional(a, Player::Max);
    let mins = enumerate_positional(a, Player::Min);
    (0..a.n_nodes())
        .map(|v| {
            maxes
                .iter()
                .map(|smax| {
                    mins.iter()
                        .map(|smin| {
                            let (_, cycle) = lasso_of(a, v, smax, smin);
                            mean_of_cycle(a, &weights, &cycle)
                        })
                        .min()
                        .unwrap()
                })
                .max()
                .unwrap()
        })
        .collect()
}

/// Simple cycles by DFS over simple paths (root = smallest node id).
fn all_simple_cycles(a: &Arena) -> Vec<Vec<EdgeId>> {
    let n = a.n_nodes();
    let mut out = Vec::new();
    for root in 0..n {
        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        let mut path: Vec<EdgeId> = Vec::new();
        let mut on_path = vec![false; n];
        on_path[root] = true;
        while let Some(&mut (v, ref mut cur)) = stack.last_mut() {
            if *cur < a.out_edges(v).len() {
                let e = a.out_edges(v)[*cur];
                *cur += 1;
                let w = a.edge(e).dst;
                if w == root {
                    let mut c = path.clone();
                    c.push(e);
                    out.push(c);
                } else if w > root && !on_path[w] {
                    on_path[w] = true;
                    path.push(e);
                    stack.push((w, 0));
                }
            } else {
                stack.pop();
                if let Some(e) = path.pop() {
                    on_path[a.edge(e).dst] = false;
                }
            }
        }
    }
    out
}

/// Per-node flag: a simple cycle satisfying `good` is reachable.
fn cycle_reachable(a: &Arena, good: impl Fn(&[EdgeId]) -> bool) -> Vec<bool> {
    let mut target = vec![false; a.n_nodes()];
    for c in all_simple_cycles(a) {
        if good(&c) {
            for &e in &c {
                target[a.edge(e).src] = true;
            }
        }
    }
    // backward reachability over reversed edges
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); a.n_nodes()];
    for e in 0..a.n_edges() {
        preds[a.edge(e).dst].push(a.edge(e).src);
    }
    let mut seen = target.clone();
    let mut queue: Vec<NodeId> = (0..a.n_nodes()).filter(|&v| seen[v]).collect();
    while let Some(v) = queue.pop() {
        for &u in &preds[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push(u);
            }
        }
    }
    seen
}

/// Explicit bounded-sum graph: nodes (sum in -b..=b, arena node).
struct SumGraph {
    b: i64,
    n: usize,
    succ: Vec<Vec<usize>>,
}

impl SumGraph {
    fn build(a: &Arena, weights: &[i64], b: i64) -> SumGraph {
        let n = a.n_nodes();
        let width = (2 * b + 1) as usize;
        let idx = |s: i64, v: usize| -> usize { ((s + b) as usize) * n + v };
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); width * n];
        for s in -b..=b {
            for e in 0..a.n_edges() {
                let s2 = s + weights[a.edge(e).color];
                if s2.abs() <= b {
                    succ[idx(s, a.edge(e).src)].push(idx(s2, a.edge(e).dst));
                }
            }
        }
        SumGraph { b, n, succ }
    }

    fn idx(&self, s: i64, v: usize) -> usize {
        ((s + self.b) as usize) * self.n + v
    }

    fn reach_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.succ.len()];
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for &y in &self.succ[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        seen
    }

    /// Nodes lying on a cycle within `allowed` (iterative Tarjan; a node
    /// counts if its component has >= 2 nodes or a self-loop).
    fn on_cycle(&self, allowed: &[bool]) -> Vec<bool> {
        let total = self.succ.len();
        let mut comp = vec![usize::MAX; total];
        let mut index = vec![usize::MAX; total];
        let mut low = vec![0usize; total];
        let mut on_stack = vec![false; total];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        let mut comp_size = Vec::new();
        for root in 0..total {
            if !allowed[root] || index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut cur)) = call.last_mut() {
                if *cur < self.succ[v].len() {
                    let w = self.succ[v][*cur];
                    *cur += 1;
                    if !allowed[w] {
                        continue;
                    }
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
                        let mut size = 0;
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            size += 1;
                            if w == v {
                                break;
                            }
                        }
                        comp_size.push(size);
                        next_comp += 1;
                    }
                }
            }
        }
        (0..total)
            .map(|x| {
                if !allowed[x] || comp[x] == usize::MAX {
                    return false;
                }
                comp_size[comp[x]] >= 2
                    || self.succ[x].iter().any(|&y| y == x && allowed[y])
            })
            .collect()
    }
}

fn psi_weights(a: &Arena) -> Vec<i64> {
    a.alphabet()
        .iter()
        .map(|s| match s.as_str() {
            "-1" => -1i64,
            _ => 1i64,
        })
        .collect()
}

/// Optimal sum-payoff values on a one-player arena, derived from cycle
/// reachability plus a bounded counter graph (bound 3n+2, wide enough for a
/// witness whenever one exists).
pub fn psi_values(a: &Arena, optimizer: Player) -> Vec<bool> {
    assert!(a.side_is_choice_free(match optimizer {
        Player::Max => Player::Min,
        Player::Min => Player::Max,
    }));
    let w = psi_weights(a);
    let edge_weight =
        |c: &[EdgeId]| -> i64 { c.iter().map(|&e| w[a.edge(e).color]).sum() };
    let b = 3 * a.n_nodes() as i64 + 2;
    let g = SumGraph::build(a, &w, b);
    match optimizer {
        Player::Max => {
            let pos = cycle_reachable(a, |c| edge_weight(c) > 0);
            // (0, x) nodes lying on a counter-graph cycle
            let all = vec![true; g.succ.len()];
            let cyc = g.on_cycle(&all);
            (0..a.n_nodes())
                .map(|v| {
                    if pos[v] {
                        return true;
                    }
                    let reach = g.reach_from(g.idx(0, v));
                    (0..a.n_nodes()).any(|x| {
                        let z = g.idx(0, x);
                        reach[z] && cyc[z]
                    })
                })
                .collect()
        }
        Player::Min => {
            let neg = cycle_reachable(a, |c| edge_weight(c) < 0);
            // cycles that never touch a sum-0 node
            let nonzero: Vec<bool> = (0..g.succ.len())
                .map(|x| x / a.n_nodes() != (b as usize))
                .collect();
            let cyc = g.on_cycle(&nonzero);
            (0..a.n_nodes())
                .map(|v| {
                    // value is 0 (true = "Min succeeds") recorded as false
                    // for Max; return the payoff value instead
                    if neg[v] {
                        return false;
                    }
                    let reach = g.reach_from(g.idx(0, v));
                    let escapes = (0..g.succ.len()).any(|x| reach[x] && cyc[x]);
                    !escapes
                })
                .collect()
        }
    }
}

/// Run-tracking state for the run-length payoff: 0 = no zero seen yet,
/// 1..=k+1 = current run has length state-1, k+2 = run longer than k,
/// k+3 = accepted.
fn phi_step(state: usize, letter: u8, k: usize, t: &[u64]) -> usize {
    let over = k + 2;
    let done = k + 3;
    if state == done {
        return done;
    }
    if letter == 0 {
        if state >= 1 && state <= k + 1 && t.contains(&((state - 1) as u64)) {
            return done;
        }
        return 1; // a fresh run of length 0 begins after this zero
    }
    if state == 0 {
        0
    } else if state >= over {
        over
    } else {
        state + 1
    }
}

/// Optimal run-length payoff values on a one-player arena via reachability
/// in the explicit run-tracking product.
pub fn phi_values(a: &Arena, optimizer: Player, t: &[u64]) -> Vec<bool> {
    let k = *t.iter().max().unwrap() as usize;
    let letters: Vec<u8> = a
        .alphabet()
        .iter()
        .map(|s| if s == "0" { 0 } else { 1 })
        .collect();
    let n = a.n_nodes();
    let n_states = k + 4;
    let idx = |s: usize, v: usize| s * n + v;
    let done = k + 3;
    let mut succ: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n_states * n];
    for s in 0..n_states {
        for e in 0..a.n_edges() {
            let l = letters[a.edge(e).color];
            let s2 = phi_step(s, l, k, t);
            succ[idx(s, a.edge(e).src)].push((idx(s2, a.edge(e).dst), l));
        }
    }
    let reach_from = |start: usize, allowed: &dyn Fn(usize) -> bool| -> Vec<bool> {
        let mut seen = vec![false; succ.len()];
        if !allowed(start) {
            return seen;
        }
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for &(y, _) in &succ[x] {
                if allowed(y) && !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        seen
    };
    match optimizer {
        Player::Max => {
            let all_one = cycle_reachable(a, |c| {
                c.iter().all(|&e| letters[a.edge(e).color] == 1)
            });
            (0..n)
                .map(|v| {
                    if all_one[v] {
                        return true;
                    }
                    let reach = reach_from(idx(0, v), &|_| true);
                    (0..n).any(|x| reach[idx(done, x)])
                })
                .collect()
        }
        Player::Min => {
            // value 0 iff a cycle with a 0-edge is reachable while avoiding
            // the accepting state
            let avoid = |x: usize| x / n != done;
            (0..n)
                .map(|v| {
                    let reach = reach_from(idx(0, v), &avoid);
                    // look for a reachable product node that can return to
                    // itself through a 0-edge, staying clear of accept
                    for x in 0..succ.len() {
                        if !reach[x] || !avoid(x) {
                            continue;
                        }
                        // BFS from x's 0-successors back to x
                        let mut seen = vec![false; succ.len()];
                        let mut queue = Vec::new();
                        for &(y, l) in &succ[x] {
                            if l == 0 && avoid(y) && !seen[y] {
                                seen[y] = true;
                                queue.push(y);
                            }
                        }
                        while let Some(z) = queue.pop() {
                            if z == x {
                                return false;
                            }
                            for &(y, _) in &succ[z] {
                                if avoid(y) && !seen[y] {
                                    seen[y] = true;
                                    queue.push(y);
                                }
                            }
                        }
                        if seen[x] {
                            return false;
                        }
                    }
                    true
                })
                .collect()
        }
    }
}

/// Convenience: build an arena whose colors are the priorities, so the
/// parity payoff can read them back.
pub fn arena_with_priority_colors(a: &Arena, priorities: &[u32]) -> Arena {
    let symbols: Vec<String> = priorities.iter().map(|p| p.to_string()).collect();
    let alphabet: Vec<&str> = {
        let mut set: Vec<&str> = symbols.iter().map(|s| s.as_str()).collect();
        set.sort();
        set.dedup();
        set
    };
    let named: Vec<(usize, usize, &str)> = (0..a.n_edges())
        .map(|e| {
            let Edge { src, dst, .. } = *a.edge(e);
            (src, dst, symbols[e].as_str())
        })
        .collect();
    Arena::build(&alphabet, a.owners().to_vec(), &named).unwrap()
}
