//! Projection of process executions onto one event attribute.
//!
//! A projected execution keeps only the structure of the event graph plus,
//! per node, the attribute value and the per-type count of the execution's
//! objects attached to the event, and, per edge, the per-type count of the
//! execution's objects that are members of both endpoint events. Two
//! executions are equivalent w.r.t. the attribute iff their projections are
//! isomorphic respecting these labels.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::extraction::ProcessExecution;
use crate::log::EventLog;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProjectError {
    #[error("attribute `{attribute}` is not defined on event `{event}`")]
    MissingAttribute { event: String, attribute: String },
}

/// Node label: attribute value plus per-type object counts (types with count
/// zero are omitted).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeLabel {
    pub value: String,
    pub counts: BTreeMap<String, u32>,
}

/// Edge label: per-type count of objects that are members of both endpoint
/// events. May be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgeLabel {
    pub counts: BTreeMap<String, u32>,
}

/// A node- and edge-labeled directed graph used for equivalence testing.
/// Nodes are positional; `node_ids` only ties them back to events (or any
/// other external naming) and carries no meaning for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedExecution {
    node_ids: Vec<String>,
    node_labels: Vec<NodeLabel>,
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<EdgeLabel>,
    out_adj: Vec<Vec<(usize, usize)>>,
    in_adj: Vec<Vec<(usize, usize)>>,
}

impl ProjectedExecution {
    /// Assemble a projected execution. Node ids must be unique; edge
    /// endpoints must be in range and edges must not repeat.
    pub fn new(
        node_ids: Vec<String>,
        node_labels: Vec<NodeLabel>,
        edges: Vec<(usize, usize, EdgeLabel)>,
    ) -> Self {
        assert_eq!(node_ids.len(), node_labels.len());
        let n = node_ids.len();
        {
            let mut ids = node_ids.clone();
            ids.sort_unstable();
            ids.dedup();
            assert_eq!(ids.len(), n, "node ids must be unique");
        }
        let mut edges = edges;
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut edge_pairs = Vec::with_capacity(edges.len());
        let mut edge_labels = Vec::with_capacity(edges.len());
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, (from, to, label)) in edges.into_iter().enumerate() {
            assert!(from < n && to < n, "edge endpoint out of range");
            assert!(
                edge_pairs.last() != Some(&(from, to)),
                "duplicate edge ({from}, {to})"
            );
            edge_pairs.push((from, to));
            edge_labels.push(label);
            out_adj[from].push((to, i));
            in_adj[to].push((from, i));
        }
        ProjectedExecution {
            node_ids,
            node_labels,
            edges: edge_pairs,
            edge_labels,
            out_adj,
            in_adj,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn node_id(&self, node: usize) -> &str {
        &self.node_ids[node]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ids.iter().position(|n| n == id)
    }

    pub fn node_labels(&self) -> &[NodeLabel] {
        &self.node_labels
    }

    pub fn node_label(&self, node: usize) -> &NodeLabel {
        &self.node_labels[node]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_labels(&self) -> &[EdgeLabel] {
        &self.edge_labels
    }

    /// Outgoing `(neighbor, edge index)` pairs of a node.
    pub fn out_edges(&self, node: usize) -> &[(usize, usize)] {
        &self.out_adj[node]
    }

    /// Incoming `(neighbor, edge index)` pairs of a node.
    pub fn in_edges(&self, node: usize) -> &[(usize, usize)] {
        &self.in_adj[node]
    }

    /// Copy with nodes stored in a different order: old node `i` becomes node
    /// `perm[i]`. Ids travel with their nodes, so the result describes the
    /// same labeled graph.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.node_count());
        let n = self.node_count();
        let mut node_ids = vec![String::new(); n];
        let mut node_labels = vec![
            NodeLabel {
                value: String::new(),
                counts: BTreeMap::new()
            };
            n
        ];
        for i in 0..n {
            node_ids[perm[i]] = self.node_ids[i].clone();
            node_labels[perm[i]] = self.node_labels[i].clone();
        }
        let edges = self
            .edges
            .iter()
            .zip(&self.edge_labels)
            .map(|(&(a, b), label)| (perm[a], perm[b], label.clone()))
            .collect();
        ProjectedExecution::new(node_ids, node_labels, edges)
    }

    /// Byte encoding that is independent of node storage order (nodes and
    /// edges are listed by node id). Two structurally identical graphs with
    /// identical ids encode identically; used to derive stable tie-break keys.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut order: Vec<usize> = (0..self.node_count()).collect();
        order.sort_by(|&a, &b| self.node_ids[a].cmp(&self.node_ids[b]));
        let mut out = Vec::new();
        push_chunk(&mut out, b"nodes");
        for &i in &order {
            push_chunk(&mut out, self.node_ids[i].as_bytes());
            push_node_label(&mut out, &self.node_labels[i]);
        }
        let mut edges: Vec<(&str, &str, &EdgeLabel)> = self
            .edges
            .iter()
            .zip(&self.edge_labels)
            .map(|(&(a, b), label)| (self.node_id(a), self.node_id(b), label))
            .collect();
        edges.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        push_chunk(&mut out, b"edges");
        for (from, to, label) in edges {
            push_chunk(&mut out, from.as_bytes());
            push_chunk(&mut out, to.as_bytes());
            push_counts(&mut out, &label.counts);
        }
        out
    }
}

fn push_chunk(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(bytes);
}

fn push_counts(out: &mut Vec<u8>, counts: &BTreeMap<String, u32>) {
    out.extend_from_slice(&(counts.len() as u32).to_le_bytes());
    for (tname, count) in counts {
        push_chunk(out, tname.as_bytes());
        out.extend_from_slice(&count.to_le_bytes());
    }
}

fn push_node_label(out: &mut Vec<u8>, label: &NodeLabel) {
    push_chunk(out, label.value.as_bytes());
    push_counts(out, &label.counts);
}

/// Project an execution onto `attribute`. The attribute must be defined on
/// every event of the execution (`ocel:activity` and `ocel:timestamp` always
/// are).
pub fn project(
    log: &EventLog,
    exec: &ProcessExecution,
    attribute: &str,
) -> Result<ProjectedExecution, ProjectError> {
    let local = |event: usize| -> usize {
        exec.events
            .binary_search(&event)
            .expect("edge endpoints are execution events")
    };

    let mut node_ids = Vec::with_capacity(exec.events.len());
    let mut node_labels = Vec::with_capacity(exec.events.len());
    for &e in &exec.events {
        let event = &log.events()[e];
        let value = event
            .attribute(attribute)
            .ok_or_else(|| ProjectError::MissingAttribute {
                event: event.id().into(),
                attribute: attribute.into(),
            })?;
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        for &o in event.omap() {
            if exec.objects.binary_search(&o).is_ok() {
                *counts
                    .entry(log.type_name(log.object_type(o)).into())
                    .or_insert(0) += 1;
            }
        }
        node_ids.push(event.id().into());
        node_labels.push(NodeLabel { value, counts });
    }

    let edges = exec
        .edges
        .iter()
        .map(|&(a, b)| {
            let mut counts: BTreeMap<String, u32> = BTreeMap::new();
            for &o in intersect_sorted(log.events()[a].omap(), log.events()[b].omap()).iter() {
                if exec.objects.binary_search(&o).is_ok() {
                    *counts
                        .entry(log.type_name(log.object_type(o)).into())
                        .or_insert(0) += 1;
                }
            }
            (local(a), local(b), EdgeLabel { counts })
        })
        .collect();

    Ok(ProjectedExecution::new(node_ids, node_labels, edges))
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_graph::build_event_graph;
    use crate::extraction::extract_components;
    use crate::object_graph::build_object_graph;
    use crate::test_support::fixture_log;

    fn fixture_projection() -> (EventLog, ProjectedExecution) {
        let log = fixture_log();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        let p = project(&log, &execs[0], "ocel:activity").unwrap();
        (log, p)
    }

    #[test]
    fn node_labels_count_objects_by_type() {
        let (_, p) = fixture_projection();
        let e3 = p.node_index("e3").unwrap();
        let label = p.node_label(e3);
        assert_eq!(label.value, "C");
        assert_eq!(
            label.counts,
            BTreeMap::from([("Type1".to_string(), 1), ("Type2".to_string(), 2)])
        );
        // e5 carries only the two Type2 objects.
        let e5 = p.node_index("e5").unwrap();
        assert_eq!(
            p.node_label(e5).counts,
            BTreeMap::from([("Type2".to_string(), 2)])
        );
    }

    #[test]
    fn edge_labels_count_shared_members() {
        let (_, p) = fixture_projection();
        let e3 = p.node_index("e3").unwrap();
        let e5 = p.node_index("e5").unwrap();
        let edge = p
            .edges()
            .iter()
            .position(|&(a, b)| (a, b) == (e3, e5))
            .unwrap();
        assert_eq!(
            p.edge_labels()[edge].counts,
            BTreeMap::from([("Type2".to_string(), 2)])
        );
    }

    #[test]
    fn missing_attribute_is_reported_per_event() {
        let log = fixture_log();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        let err = project(&log, &execs[0], "cost").unwrap_err();
        assert_eq!(
            err,
            ProjectError::MissingAttribute {
                event: "e1".into(),
                attribute: "cost".into()
            }
        );
    }

    #[test]
    fn single_event_projection_has_no_edges() {
        let doc = br#"{
            "ocel:events": {"e": {"ocel:activity": "go", "ocel:timestamp": "2022-01-01T00:00:00Z", "ocel:omap": ["o"]}},
            "ocel:objects": {"o": {"ocel:type": "T"}}
        }"#;
        let log = crate::ocel_json::parse_log(doc).unwrap();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        let p = project(&log, &execs[0], "ocel:activity").unwrap();
        assert_eq!(p.node_count(), 1);
        assert!(p.edges().is_empty());
        assert_eq!(p.node_label(0).value, "go");
        assert_eq!(
            p.node_label(0).counts,
            BTreeMap::from([("T".to_string(), 1)])
        );
    }

    #[test]
    fn permutation_preserves_the_labeled_graph() {
        let (_, p) = fixture_projection();
        let n = p.node_count();
        let perm: Vec<usize> = (0..n).map(|i| (i + 3) % n).collect();
        let q = p.permuted(&perm);
        assert_eq!(p.canonical_bytes(), q.canonical_bytes());
        for i in 0..n {
            assert_eq!(p.node_label(i), q.node_label(perm[i]));
        }
        assert_eq!(p.edges().len(), q.edges().len());
    }
}
