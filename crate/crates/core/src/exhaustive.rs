//! Exhaustive equivalence-class oracle.
//!
//! Groups projected executions by trying every node bijection, comparing raw
//! labels and edges directly. Deliberately shares nothing with the hash or
//! matcher implementations so it can serve as an independent reference in
//! tests. Bounded to nine nodes per graph.

use std::collections::HashMap;

use thiserror::Error;

use crate::projection::{EdgeLabel, ProjectedExecution};

/// Largest graph the oracle accepts (9! bijections are still cheap).
pub const ORACLE_NODE_LIMIT: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph with {0} nodes exceeds the oracle limit of {ORACLE_NODE_LIMIT}")]
    TooLarge(usize),
}

/// Partition the graphs into equivalence classes by pairwise exhaustive
/// bijection search. Classes are listed in order of their first member;
/// members ascend within each class.
pub fn brute_force_classes(
    projections: &[ProjectedExecution],
) -> Result<Vec<Vec<usize>>, OracleError> {
    for p in projections {
        if p.node_count() > ORACLE_NODE_LIMIT {
            return Err(OracleError::TooLarge(p.node_count()));
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in projections.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|class| exhaustive_iso(&projections[class[0]], p))
        {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(classes)
}

/// Try all node bijections from `p` to `q`.
fn exhaustive_iso(p: &ProjectedExecution, q: &ProjectedExecution) -> bool {
    let n = p.node_count();
    if n != q.node_count() || p.edges().len() != q.edges().len() {
        return false;
    }
    if n == 0 {
        return true;
    }
    let q_edges: HashMap<(usize, usize), &EdgeLabel> = q
        .edges()
        .iter()
        .zip(q.edge_labels())
        .map(|(&(a, b), label)| ((a, b), label))
        .collect();

    let mut perm: Vec<usize> = (0..n).collect();
    let matches = |perm: &[usize]| -> bool {
        (0..n).all(|v| p.node_label(v) == q.node_label(perm[v]))
            && p
                .edges()
                .iter()
                .zip(p.edge_labels())
                .all(|(&(a, b), label)| q_edges.get(&(perm[a], perm[b])) == Some(&label))
    };

    // Heap's algorithm, with an early exit on the first match.
    if matches(&perm) {
        return true;
    }
    let mut counters = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            if matches(&perm) {
                return true;
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    false
}
