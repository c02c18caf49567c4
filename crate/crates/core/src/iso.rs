//! Label-respecting isomorphism of projected executions.
//!
//! A VF2-style backtracking matcher over the directed graphs: node labels,
//! edge labels, and adjacency must all be preserved by the bijection. Labels
//! are interned to small integers up front so the hot path compares ints.

use std::collections::HashMap;

use crate::projection::ProjectedExecution;

/// True iff a bijection of nodes exists that preserves edges, node labels,
/// and edge labels.
pub fn iso_check(p: &ProjectedExecution, q: &ProjectedExecution) -> bool {
    let n = p.node_count();
    if n != q.node_count() || p.edges().len() != q.edges().len() {
        return false;
    }
    if n == 0 {
        return true;
    }

    // Intern labels across both graphs.
    let mut node_interner: HashMap<&crate::projection::NodeLabel, u32> = HashMap::new();
    let p_node: Vec<u32> = p
        .node_labels()
        .iter()
        .map(|l| intern(&mut node_interner, l))
        .collect();
    let q_node: Vec<u32> = q
        .node_labels()
        .iter()
        .map(|l| intern(&mut node_interner, l))
        .collect();
    let mut edge_interner: HashMap<&crate::projection::EdgeLabel, u32> = HashMap::new();
    let p_edge_label: Vec<u32> = p
        .edge_labels()
        .iter()
        .map(|l| intern(&mut edge_interner, l))
        .collect();
    let q_edge_label: Vec<u32> = q
        .edge_labels()
        .iter()
        .map(|l| intern(&mut edge_interner, l))
        .collect();

    // Cheap invariants: label multisets and degree/label signatures.
    if sorted(&p_node) != sorted(&q_node) || sorted(&p_edge_label) != sorted(&q_edge_label) {
        return false;
    }
    let signature = |g: &ProjectedExecution, labels: &[u32]| -> Vec<(usize, usize, u32)> {
        let mut sigs: Vec<(usize, usize, u32)> = (0..n)
            .map(|v| (g.out_edges(v).len(), g.in_edges(v).len(), labels[v]))
            .collect();
        sigs.sort_unstable();
        sigs
    };
    if signature(p, &p_node) != signature(q, &q_node) {
        return false;
    }

    let p_edges: HashMap<(usize, usize), u32> = p
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ((a, b), p_edge_label[i]))
        .collect();
    let q_edges: HashMap<(usize, usize), u32> = q
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ((a, b), q_edge_label[i]))
        .collect();

    // Static matching order: most connected to the already-ordered prefix
    // first, then highest degree, then label. Keeps the search anchored.
    let order = matching_order(p);

    let mut state = State {
        p,
        q,
        p_node: &p_node,
        q_node: &q_node,
        p_edges: &p_edges,
        q_edges: &q_edges,
        mapping: vec![usize::MAX; n],
        reverse: vec![usize::MAX; n],
    };
    assign(&mut state, &order, 0)
}

fn intern<'a, T: Eq + std::hash::Hash>(table: &mut HashMap<&'a T, u32>, key: &'a T) -> u32 {
    let next = table.len() as u32;
    *table.entry(key).or_insert(next)
}

fn sorted(values: &[u32]) -> Vec<u32> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v
}

fn matching_order(p: &ProjectedExecution) -> Vec<usize> {
    let n = p.node_count();
    let degree = |v: usize| p.out_edges(v).len() + p.in_edges(v).len();
    let mut connectivity = vec![0usize; n];
    let mut chosen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !chosen[v])
            .max_by_key(|&v| (connectivity[v], degree(v), std::cmp::Reverse(v)))
            .expect("unchosen node remains");
        chosen[next] = true;
        order.push(next);
        for &(w, _) in p.out_edges(next) {
            connectivity[w] += 1;
        }
        for &(w, _) in p.in_edges(next) {
            connectivity[w] += 1;
        }
    }
    order
}

struct State<'a> {
    p: &'a ProjectedExecution,
    q: &'a ProjectedExecution,
    p_node: &'a [u32],
    q_node: &'a [u32],
    p_edges: &'a HashMap<(usize, usize), u32>,
    q_edges: &'a HashMap<(usize, usize), u32>,
    mapping: Vec<usize>,
    reverse: Vec<usize>,
}

fn assign(state: &mut State<'_>, order: &[usize], depth: usize) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    for v in 0..state.q.node_count() {
        if state.reverse[v] != usize::MAX || !feasible(state, u, v) {
            continue;
        }
        state.mapping[u] = v;
        state.reverse[v] = u;
        if assign(state, order, depth + 1) {
            return true;
        }
        state.mapping[u] = usize::MAX;
        state.reverse[v] = usize::MAX;
    }
    false
}

fn feasible(state: &State<'_>, u: usize, v: usize) -> bool {
    if state.p_node[u] != state.q_node[v]
        || state.p.out_edges(u).len() != state.q.out_edges(v).len()
        || state.p.in_edges(u).len() != state.q.in_edges(v).len()
    {
        return false;
    }
    // Edges towards already-mapped nodes must exist with equal labels, in
    // both graphs (the reverse direction catches extra edges early).
    for &(x, _) in state.p.out_edges(u) {
        let mx = state.mapping[x];
        if mx != usize::MAX && state.q_edges.get(&(v, mx)) != state.p_edges.get(&(u, x)) {
            return false;
        }
    }
    for &(x, _) in state.p.in_edges(u) {
        let mx = state.mapping[x];
        if mx != usize::MAX && state.q_edges.get(&(mx, v)) != state.p_edges.get(&(x, u)) {
            return false;
        }
    }
    for &(y, _) in state.q.out_edges(v) {
        let ry = state.reverse[y];
        if ry != usize::MAX && state.p_edges.get(&(u, ry)) != state.q_edges.get(&(v, y)) {
            return false;
        }
    }
    for &(y, _) in state.q.in_edges(v) {
        let ry = state.reverse[y];
        if ry != usize::MAX && state.p_edges.get(&(ry, u)) != state.q_edges.get(&(y, v)) {
            return false;
        }
    }
    true
}
