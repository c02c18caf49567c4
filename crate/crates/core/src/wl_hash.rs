//! Weisfeiler-Lehman hashing of projected executions.
//!
//! The hash is invariant under node reordering by construction: every step
//! aggregates over sorted multisets only. Digests use 64-bit FNV-1a over a
//! canonical byte encoding of the labels, so hashes are stable across runs
//! and platforms and safe to freeze in golden tests.

use std::collections::BTreeMap;

use crate::projection::{EdgeLabel, NodeLabel, ProjectedExecution};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Streaming FNV-1a, tagged per domain to keep encodings disjoint.
struct Digest(u64);

impl Digest {
    fn new(tag: u8) -> Self {
        let mut digest = Digest(FNV_OFFSET);
        digest.write(&[tag]);
        digest
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    fn write_chunk(&mut self, bytes: &[u8]) {
        self.write(&(bytes.len() as u32).to_le_bytes());
        self.write(bytes);
    }

    fn write_u64(&mut self, value: u64) {
        self.write(&value.to_le_bytes());
    }

    fn write_counts(&mut self, counts: &BTreeMap<String, u32>) {
        self.write(&(counts.len() as u32).to_le_bytes());
        for (tname, count) in counts {
            self.write_chunk(tname.as_bytes());
            self.write(&count.to_le_bytes());
        }
    }

    fn finish(self) -> u64 {
        self.0
    }
}

/// Digest of a node label (attribute value, then sorted type counts).
pub fn node_label_digest(label: &NodeLabel) -> u64 {
    let mut digest = Digest::new(b'N');
    digest.write_chunk(label.value.as_bytes());
    digest.write_counts(&label.counts);
    digest.finish()
}

/// Digest of an edge label (sorted type counts).
pub fn edge_label_digest(label: &EdgeLabel) -> u64 {
    let mut digest = Digest::new(b'E');
    digest.write_counts(&label.counts);
    digest.finish()
}

/// Isomorphism-invariant digest of a projected execution.
///
/// Initial node colors are label digests. Each round recolors a node with the
/// digest of its own color plus the sorted multiset of (edge digest, direction
/// flag, neighbor color) over incoming and outgoing edges. The final hash
/// digests the sorted multiset of all node colors across all rounds.
pub fn wl_hash(p: &ProjectedExecution, iterations: u32) -> String {
    assert!(iterations >= 1, "at least one refinement round is required");
    let n = p.node_count();
    let edge_digests: Vec<u64> = p.edge_labels().iter().map(edge_label_digest).collect();
    let mut colors: Vec<u64> = p.node_labels().iter().map(node_label_digest).collect();
    let mut all_colors = colors.clone();

    for _ in 0..iterations {
        let mut next = Vec::with_capacity(n);
        for node in 0..n {
            let mut tuples: Vec<(u64, u8, u64)> = Vec::new();
            for &(neighbor, edge) in p.in_edges(node) {
                tuples.push((edge_digests[edge], 0, colors[neighbor]));
            }
            for &(neighbor, edge) in p.out_edges(node) {
                tuples.push((edge_digests[edge], 1, colors[neighbor]));
            }
            tuples.sort_unstable();
            let mut digest = Digest::new(b'R');
            digest.write_u64(colors[node]);
            for (edge, direction, color) in tuples {
                digest.write_u64(edge);
                digest.write(&[direction]);
                digest.write_u64(color);
            }
            next.push(digest.finish());
        }
        colors = next;
        all_colors.extend_from_slice(&colors);
    }

    all_colors.sort_unstable();
    let mut digest = Digest::new(b'G');
    for color in all_colors {
        digest.write_u64(color);
    }
    format!("{:016x}", digest.finish())
}
