//! Extraction of process executions: directed event graphs induced by a
//! connected set of objects.
//!
//! Two strategies are provided. Connected-component extraction takes every
//! component of the object graph and yields the largest possible executions.
//! Leading-type extraction runs a level-pruned breadth-first search from each
//! object of the chosen type: a neighbor reached at BFS level `k` is admitted
//! iff `k` equals the first level at which its type was seen, so the closest
//! objects of each reachable type join the execution and everything farther
//! out is discarded.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::event_graph::EventObjectGraph;
use crate::log::EventLog;
use crate::object_graph::ObjectGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("object set is not connected in the object graph")]
    DisconnectedObjectSet,
    #[error("object set covers no events")]
    EmptyExecution,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown object type `{0}`")]
    UnknownType(String),
}

/// How an execution was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// One connected component of the object graph.
    Components,
    /// Level-pruned BFS from `lead`. `levels` is parallel to the execution's
    /// object list and records each member's BFS level, which makes the
    /// admission rule auditable after the fact.
    Leading {
        otype: usize,
        lead: usize,
        levels: Vec<u32>,
    },
    /// Caller-supplied object set.
    Custom,
}

/// A process execution: the events of a connected object set `O'` together
/// with the directly-follows edges among them.
///
/// Invariants (checked in tests, guaranteed by construction):
/// * `events` = every event whose object set intersects `objects`;
/// * `edges` = all event-graph edges with both endpoints in `events`;
/// * `objects` is connected in the object graph;
/// * the event graph restricted to `events` is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessExecution {
    /// Object indices, sorted ascending.
    pub objects: Vec<usize>,
    /// Event indices, sorted ascending (= global event order).
    pub events: Vec<usize>,
    /// Event-index pairs, sorted; `from < to` always holds.
    pub edges: Vec<(usize, usize)>,
    pub provenance: Provenance,
}

impl ProcessExecution {
    /// JSON form with arrays sorted ascending for byte-stable output.
    pub fn to_json(&self, log: &EventLog) -> Value {
        let strategy = match &self.provenance {
            Provenance::Components => "components",
            Provenance::Leading { .. } => "leading",
            Provenance::Custom => "custom",
        };
        let (leading_type, lead_object) = match &self.provenance {
            Provenance::Leading { otype, lead, .. } => (
                Value::String(log.type_name(*otype).into()),
                Value::String(log.objects()[*lead].id().into()),
            ),
            _ => (Value::Null, Value::Null),
        };
        let mut objects: Vec<&str> = self
            .objects
            .iter()
            .map(|&o| log.objects()[o].id())
            .collect();
        objects.sort_unstable();
        let mut events: Vec<&str> = self.events.iter().map(|&e| log.events()[e].id()).collect();
        events.sort_unstable();
        let mut edges: Vec<[&str; 2]> = self
            .edges
            .iter()
            .map(|&(a, b)| [log.events()[a].id(), log.events()[b].id()])
            .collect();
        edges.sort_unstable();
        json!({
            "strategy": strategy,
            "leading_type": leading_type,
            "lead_object": lead_object,
            "objects": objects,
            "events": events,
            "edges": edges,
        })
    }
}

/// Gather events and edges for a fixed object set; `None` when no events.
fn assemble(
    log: &EventLog,
    graph: &EventObjectGraph,
    objects: Vec<usize>,
    provenance: Provenance,
) -> Option<ProcessExecution> {
    let mut events: Vec<usize> = objects
        .iter()
        .flat_map(|&o| log.trace(o).iter().copied())
        .collect();
    events.sort_unstable();
    events.dedup();
    if events.is_empty() {
        return None;
    }
    let member: HashSet<usize> = events.iter().copied().collect();
    let mut edges = Vec::new();
    for &e in &events {
        for &next in graph.successors(e) {
            if member.contains(&next) {
                edges.push((e, next));
            }
        }
    }
    edges.sort_unstable();
    Some(ProcessExecution {
        objects,
        events,
        edges,
        provenance,
    })
}

/// Materialize the execution of an explicit object set.
///
/// The set must be non-empty and connected in the object graph; executions
/// without events are rejected.
pub fn execution_from_objects(
    log: &EventLog,
    graph: &EventObjectGraph,
    object_graph: &ObjectGraph,
    object_ids: &[&str],
) -> Result<ProcessExecution, ExtractError> {
    let mut objects = Vec::with_capacity(object_ids.len());
    for id in object_ids {
        let idx = log
            .object_index(id)
            .ok_or_else(|| ExtractError::UnknownObject(id.to_string()))?;
        objects.push(idx);
    }
    objects.sort_unstable();
    objects.dedup();
    if objects.is_empty() {
        return Err(ExtractError::EmptyExecution);
    }

    // Connectivity check restricted to the candidate set.
    let in_set: HashSet<usize> = objects.iter().copied().collect();
    let mut seen = HashSet::from([objects[0]]);
    let mut queue = VecDeque::from([objects[0]]);
    while let Some(o) = queue.pop_front() {
        for &next in object_graph.neighbors(o) {
            if in_set.contains(&next) && seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    if seen.len() != objects.len() {
        return Err(ExtractError::DisconnectedObjectSet);
    }

    assemble(log, graph, objects, Provenance::Custom).ok_or(ExtractError::EmptyExecution)
}

/// One execution per connected component of the object graph that covers at
/// least one event, ordered by smallest member object.
pub fn extract_components(
    log: &EventLog,
    graph: &EventObjectGraph,
    object_graph: &ObjectGraph,
) -> Vec<ProcessExecution> {
    object_graph
        .connected_components()
        .into_par_iter()
        .filter_map(|component| assemble(log, graph, component, Provenance::Components))
        .collect()
}

/// One execution per object of the leading type with a non-empty event set,
/// ordered by lead object id. Results are deterministic and independent of
/// the internal parallelism.
pub fn extract_leading_type(
    log: &EventLog,
    graph: &EventObjectGraph,
    object_graph: &ObjectGraph,
    leading_type: &str,
) -> Result<Vec<ProcessExecution>, ExtractError> {
    let otype = log
        .types()
        .iter()
        .position(|t| t == leading_type)
        .ok_or_else(|| ExtractError::UnknownType(leading_type.to_string()))?;

    let leads: Vec<usize> = (0..log.objects().len())
        .filter(|&o| log.object_type(o) == otype)
        .collect();

    Ok(leads
        .into_par_iter()
        .filter_map(|lead| {
            let (objects, levels) = admitted_objects(log, object_graph, lead);
            assemble(
                log,
                graph,
                objects,
                Provenance::Leading {
                    otype,
                    lead,
                    levels,
                },
            )
        })
        .collect())
}

/// Level-pruned BFS from `lead`. The lead's type is fixed at level 0, so
/// other objects of the leading type are never admitted. Neighbors are
/// visited in ascending object order; rejected objects are final.
fn admitted_objects(
    log: &EventLog,
    object_graph: &ObjectGraph,
    lead: usize,
) -> (Vec<usize>, Vec<u32>) {
    let mut first_level_of_type: HashMap<usize, u32> = HashMap::new();
    first_level_of_type.insert(log.object_type(lead), 0);

    let mut level_of: HashMap<usize, u32> = HashMap::new();
    level_of.insert(lead, 0);
    let mut admitted = vec![lead];
    let mut frontier = vec![lead];
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let mut next_frontier = Vec::new();
        for &o in &frontier {
            for &neighbor in object_graph.neighbors(o) {
                if level_of.contains_key(&neighbor) {
                    continue;
                }
                level_of.insert(neighbor, level);
                let first = *first_level_of_type
                    .entry(log.object_type(neighbor))
                    .or_insert(level);
                if first == level {
                    admitted.push(neighbor);
                    next_frontier.push(neighbor);
                }
            }
        }
        next_frontier.sort_unstable();
        frontier = next_frontier;
    }

    admitted.sort_unstable();
    let levels = admitted.iter().map(|o| level_of[o]).collect();
    (admitted, levels)
}
