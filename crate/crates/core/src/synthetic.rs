//! Seeded generators for synthetic logs and labeled graphs, used by tests and
//! benchmarks. Same seed, same output, on every platform.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Map;

use crate::log::{EventInput, EventLog, ObjectInput};
use crate::projection::{EdgeLabel, NodeLabel, ProjectedExecution};

/// Shape of a generated log. Objects come in independent groups (so the
/// object graph decomposes into many components) and every event references
/// objects of a single group.
#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub groups: usize,
    pub types: usize,
    pub objects_per_group: (usize, usize),
    pub events_per_group: (usize, usize),
    /// Size of the activity pool; smaller pools repeat structure across
    /// groups and produce fewer, larger variants.
    pub activities: usize,
    pub max_objects_per_event: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Many tiny executions (at most nine events each), oracle-friendly.
    pub fn small(groups: usize, seed: u64) -> Self {
        SyntheticSpec {
            groups,
            types: 3,
            objects_per_group: (1, 3),
            events_per_group: (1, 9),
            activities: 4,
            max_objects_per_event: 3,
            seed,
        }
    }

    /// Fixed-size groups: `groups * 20` events, `groups * 4` objects.
    pub fn desk_scale(groups: usize, seed: u64) -> Self {
        SyntheticSpec {
            groups,
            types: 3,
            objects_per_group: (4, 4),
            events_per_group: (20, 20),
            activities: 12,
            max_objects_per_event: 3,
            seed,
        }
    }
}

/// Generate a validated log from the spec.
pub fn generate_log(spec: &SyntheticSpec) -> EventLog {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base: DateTime<Utc> = DateTime::parse_from_rfc3339("2022-01-01T00:00:00Z")
        .expect("valid base timestamp")
        .with_timezone(&Utc);

    let mut objects = Vec::new();
    let mut events = Vec::new();
    let mut event_counter: usize = 0;
    for group in 0..spec.groups {
        let object_count = rng.gen_range(spec.objects_per_group.0..=spec.objects_per_group.1);
        let ids: Vec<String> = (0..object_count)
            .map(|j| format!("g{group:06}-o{j}"))
            .collect();
        for (j, id) in ids.iter().enumerate() {
            objects.push(ObjectInput {
                id: id.clone(),
                otype: format!("T{}", j % spec.types),
                ..Default::default()
            });
        }
        let event_count = rng.gen_range(spec.events_per_group.0..=spec.events_per_group.1);
        for _ in 0..event_count {
            let take = rng.gen_range(1..=spec.max_objects_per_event.min(object_count));
            let mut picks: Vec<usize> = (0..object_count).collect();
            picks.shuffle(&mut rng);
            picks.truncate(take);
            events.push(EventInput {
                id: format!("e{event_counter:08}"),
                activity: format!("a{}", rng.gen_range(0..spec.activities)),
                timestamp: base + Duration::seconds(event_counter as i64),
                omap: picks.into_iter().map(|j| ids[j].clone()).collect(),
                ..Default::default()
            });
            event_counter += 1;
        }
    }
    EventLog::new(events, objects, vec![], Map::new(), Map::new())
        .expect("generated logs are valid")
}

/// Random labeled DAG with up to `max_nodes` nodes (edges only run from lower
/// to higher node index, so the graph is acyclic by construction).
pub fn random_projected(rng: &mut ChaCha8Rng, max_nodes: usize) -> ProjectedExecution {
    let n = rng.gen_range(1..=max_nodes);
    let node_ids: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let node_labels: Vec<NodeLabel> = (0..n)
        .map(|_| NodeLabel {
            value: format!("v{}", rng.gen_range(0..3)),
            counts: random_counts(rng, 1),
        })
        .collect();
    let mut edges = Vec::new();
    for from in 0..n {
        for to in (from + 1)..n {
            if rng.gen_bool(0.35) {
                edges.push((
                    from,
                    to,
                    EdgeLabel {
                        counts: random_counts(rng, 0),
                    },
                ));
            }
        }
    }
    ProjectedExecution::new(node_ids, node_labels, edges)
}

fn random_counts(rng: &mut ChaCha8Rng, min_entries: usize) -> BTreeMap<String, u32> {
    let entries = rng.gen_range(min_entries..=2);
    let mut counts = BTreeMap::new();
    let mut types = [0, 1, 2];
    types.shuffle(rng);
    for &t in types.iter().take(entries) {
        counts.insert(format!("T{t}"), rng.gen_range(1..=2));
    }
    counts
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
