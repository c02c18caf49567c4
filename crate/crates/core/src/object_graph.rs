//! The object graph: objects as nodes, undirected edges between objects that
//! co-occur in at least one event.

use std::collections::VecDeque;

use thiserror::Error;

use crate::log::EventLog;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObjectGraphError {
    #[error("object index {0} is not part of the graph")]
    UnknownObject(usize),
}

/// Undirected co-occurrence graph over object indices. No self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectGraph {
    /// Sorted, deduplicated neighbor lists; index = object index.
    neighbors: Vec<Vec<usize>>,
}

impl ObjectGraph {
    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, object: usize) -> &[usize] {
        &self.neighbors[object]
    }

    /// Undirected edges as pairs with the smaller index first.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (a, ns) in self.neighbors.iter().enumerate() {
            for &b in ns {
                if a < b {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// BFS hop count between two objects; `None` encodes the absence of a
    /// path. `distance(o, o) == 0`.
    pub fn distance(&self, from: usize, to: usize) -> Result<Option<u32>, ObjectGraphError> {
        let n = self.neighbors.len();
        if from >= n {
            return Err(ObjectGraphError::UnknownObject(from));
        }
        if to >= n {
            return Err(ObjectGraphError::UnknownObject(to));
        }
        if from == to {
            return Ok(Some(0));
        }
        let mut dist: Vec<Option<u32>> = vec![None; n];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(o) = queue.pop_front() {
            let d = dist[o].expect("queued nodes have distances");
            for &next in &self.neighbors[o] {
                if dist[next].is_none() {
                    if next == to {
                        return Ok(Some(d + 1));
                    }
                    dist[next] = Some(d + 1);
                    queue.push_back(next);
                }
            }
        }
        Ok(None)
    }

    /// Maximal connected object sets. Each component is sorted ascending and
    /// the list is ordered by smallest member, so output is deterministic.
    /// Iterative BFS; component sizes beyond stack depth are fine.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.neighbors.len();
        let mut visited = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(o) = queue.pop_front() {
                for &next in &self.neighbors[o] {
                    if !visited[next] {
                        visited[next] = true;
                        component.push(next);
                        queue.push_back(next);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }
}

/// Build the object graph from event co-occurrence.
pub fn build_object_graph(log: &EventLog) -> ObjectGraph {
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); log.objects().len()];
    for event in log.events() {
        let omap = event.omap();
        for (i, &a) in omap.iter().enumerate() {
            for &b in &omap[i + 1..] {
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }
    ObjectGraph { neighbors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ocel_json::parse_log;
    use crate::test_support::fixture_log;

    fn named_edges(log: &crate::log::EventLog, g: &ObjectGraph) -> Vec<(String, String)> {
        g.edges()
            .iter()
            .map(|&(a, b)| {
                (
                    log.objects()[a].id().to_string(),
                    log.objects()[b].id().to_string(),
                )
            })
            .collect()
    }

    #[test]
    fn fixture_object_graph_edges() {
        let log = fixture_log();
        let g = build_object_graph(&log);
        let mut edges = named_edges(&log, &g);
        edges.sort();
        assert_eq!(
            edges,
            vec![
                ("m1".to_string(), "m2".to_string()),
                ("m1".to_string(), "o1".to_string()),
                ("m2".to_string(), "o1".to_string()),
                ("m3".to_string(), "m4".to_string()),
                ("m3".to_string(), "o2".to_string()),
                ("m4".to_string(), "o2".to_string()),
            ]
        );
    }

    #[test]
    fn three_object_event_forms_a_triangle() {
        let doc = br#"{
            "ocel:events": {"e": {"ocel:activity": "x", "ocel:timestamp": "2022-01-01T00:00:00Z", "ocel:omap": ["a", "b", "c"]}},
            "ocel:objects": {"a": {"ocel:type": "T"}, "b": {"ocel:type": "T"}, "c": {"ocel:type": "T"}}
        }"#;
        let log = parse_log(doc).unwrap();
        let g = build_object_graph(&log);
        assert_eq!(g.edges().len(), 3);
    }

    #[test]
    fn single_object_events_yield_an_edgeless_graph() {
        let doc = br#"{
            "ocel:events": {
                "e1": {"ocel:activity": "x", "ocel:timestamp": "2022-01-01T00:00:00Z", "ocel:omap": ["a"]},
                "e2": {"ocel:activity": "y", "ocel:timestamp": "2022-01-01T00:01:00Z", "ocel:omap": ["b"]}
            },
            "ocel:objects": {"a": {"ocel:type": "T"}, "b": {"ocel:type": "T"}}
        }"#;
        let log = parse_log(doc).unwrap();
        let g = build_object_graph(&log);
        assert!(g.edges().is_empty());
        assert_eq!(g.connected_components(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn fixture_distances() {
        let log = fixture_log();
        let g = build_object_graph(&log);
        let idx = |id: &str| log.object_index(id).unwrap();
        assert_eq!(g.distance(idx("o1"), idx("m1")).unwrap(), Some(1));
        assert_eq!(g.distance(idx("o1"), idx("o2")).unwrap(), None);
        assert_eq!(g.distance(idx("o1"), idx("o1")).unwrap(), Some(0));
        assert_eq!(
            g.distance(idx("o1"), 99),
            Err(ObjectGraphError::UnknownObject(99))
        );
    }

    #[test]
    fn distance_is_symmetric_on_the_fixture() {
        let log = fixture_log();
        let g = build_object_graph(&log);
        for a in 0..g.node_count() {
            for b in 0..g.node_count() {
                assert_eq!(g.distance(a, b).unwrap(), g.distance(b, a).unwrap());
            }
        }
    }

    #[test]
    fn fixture_components() {
        let log = fixture_log();
        let g = build_object_graph(&log);
        let comps: Vec<Vec<&str>> = g
            .connected_components()
            .iter()
            .map(|c| c.iter().map(|&o| log.objects()[o].id()).collect())
            .collect();
        assert_eq!(comps, vec![vec!["m1", "m2", "o1"], vec!["m3", "m4", "o2"]]);
    }

    #[test]
    fn empty_graph_has_no_components() {
        let g = build_object_graph(&parse_log(b"{}").unwrap());
        assert!(g.connected_components().is_empty());
    }

    #[test]
    fn components_partition_the_node_set() {
        let log = fixture_log();
        let g = build_object_graph(&log);
        let mut seen: Vec<usize> = g.connected_components().into_iter().flatten().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..g.node_count()).collect::<Vec<_>>());
    }
}
