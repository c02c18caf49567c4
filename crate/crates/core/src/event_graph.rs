//! The event-object graph: events as nodes, per-object directly-follows
//! relationships as directed edges, objects as node annotations.

use std::collections::HashMap;

use thiserror::Error;

use crate::log::EventLog;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphBuildError {
    /// Unreachable for logs built through validation (trace order follows the
    /// global event order); signals a corrupted ordering otherwise.
    #[error("directly-follows edge `{from}` -> `{to}` violates the event order")]
    CycleDetected { from: String, to: String },
}

/// Directed graph over event indices. Edge `(e, e')` exists iff some object's
/// trace contains `e` immediately followed by `e'`. Deduplicated across
/// objects; the contributing objects are kept per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventObjectGraph {
    /// Per event: object indices, identical to the log's omap.
    node_objects: Vec<Vec<usize>>,
    /// Sorted lexicographically; endpoints always satisfy `from < to`.
    edges: Vec<(usize, usize)>,
    /// Parallel to `edges`: objects with the pair consecutive in their trace.
    edge_objects: Vec<Vec<usize>>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl EventObjectGraph {
    pub fn node_count(&self) -> usize {
        self.node_objects.len()
    }

    /// Objects annotated on an event node (obj of the event).
    pub fn node_objects(&self, event: usize) -> &[usize] {
        &self.node_objects[event]
    }

    /// All directly-follows edges, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Objects for which `to` directly follows `from`; `None` if no such edge.
    pub fn edge_objects(&self, from: usize, to: usize) -> Option<&[usize]> {
        self.edge_index
            .get(&(from, to))
            .map(|&i| self.edge_objects[i].as_slice())
    }

    pub fn successors(&self, event: usize) -> &[usize] {
        &self.successors[event]
    }

    pub fn predecessors(&self, event: usize) -> &[usize] {
        &self.predecessors[event]
    }

    /// DOT rendering for debugging; node label is "id | objects".
    pub fn to_dot(&self, log: &EventLog) -> String {
        let mut out = String::from("digraph event_object_graph {\n  rankdir=LR;\n");
        for (ei, event) in log.events().iter().enumerate() {
            let objects: Vec<&str> = self.node_objects[ei]
                .iter()
                .map(|&oi| log.objects()[oi].id())
                .collect();
            out.push_str(&format!(
                "  \"{}\" [label=\"{} | {}\"];\n",
                event.id(),
                event.id(),
                objects.join(",")
            ));
        }
        for &(from, to) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                log.events()[from].id(),
                log.events()[to].id()
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Derive the event-object graph from a validated log.
pub fn build_event_graph(log: &EventLog) -> Result<EventObjectGraph, GraphBuildError> {
    let n = log.events().len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for object in 0..log.objects().len() {
        let trace = log.trace(object);
        for window in trace.windows(2) {
            let (from, to) = (window[0], window[1]);
            if from >= to {
                return Err(GraphBuildError::CycleDetected {
                    from: log.events()[from].id().into(),
                    to: log.events()[to].id().into(),
                });
            }
            pairs.push((from, to, object));
        }
    }
    pairs.sort_unstable();

    let mut edges = Vec::new();
    let mut edge_objects: Vec<Vec<usize>> = Vec::new();
    for (from, to, object) in pairs {
        if edges.last() == Some(&(from, to)) {
            edge_objects.last_mut().expect("parallel").push(object);
        } else {
            edges.push((from, to));
            edge_objects.push(vec![object]);
        }
    }

    let mut successors = vec![Vec::new(); n];
    let mut predecessors = vec![Vec::new(); n];
    let mut edge_index = HashMap::with_capacity(edges.len());
    for (i, &(from, to)) in edges.iter().enumerate() {
        successors[from].push(to);
        predecessors[to].push(from);
        edge_index.insert((from, to), i);
    }

    Ok(EventObjectGraph {
        node_objects: log.events().iter().map(|e| e.omap().to_vec()).collect(),
        edges,
        edge_objects,
        successors,
        predecessors,
        edge_index,
    })
}
