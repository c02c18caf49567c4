//! Variant mining: grouping process executions into equivalence classes.
//!
//! Two-step pipeline: executions are projected and hashed first, then the
//! hash buckets are refined with one-to-one isomorphism checks against one
//! representative per refined subclass (transitivity makes one comparison per
//! subclass sufficient). Approximate mode skips the refinement and reports
//! the raw hash buckets, which can only be coarser than the exact classes.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::extraction::ProcessExecution;
use crate::iso::iso_check;
use crate::log::EventLog;
use crate::projection::{project, ProjectError, ProjectedExecution};
use crate::wl_hash::wl_hash;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiningMode {
    Exact,
    Approximate,
}

impl MiningMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            MiningMode::Exact => "exact",
            MiningMode::Approximate => "approximate",
        }
    }
}

/// Exact relative frequency as an integer pair (`num` = class size, `den` =
/// total executions; kept unreduced so sums telescope exactly).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frequency {
    pub num: u64,
    pub den: u64,
}

impl Frequency {
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// One mined equivalence class.
#[derive(Debug, Clone)]
pub struct EquivalenceClass {
    /// Weisfeiler-Lehman hash, suffixed `-<k>` when the hash bucket split
    /// during refinement.
    pub class_id: String,
    /// Indices into the mined execution list, ascending.
    pub members: Vec<usize>,
    /// Projection of the smallest member.
    pub representative: ProjectedExecution,
    pub frequency: Frequency,
}

/// All classes of a mining run, sorted by frequency descending (ties by
/// class id ascending).
#[derive(Debug, Clone)]
pub struct VariantReport {
    pub attribute: String,
    pub mode: MiningMode,
    pub wl_iterations: u32,
    pub total: usize,
    pub classes: Vec<EquivalenceClass>,
}

/// Mine equivalence classes of `execs` with respect to `attribute`.
pub fn mine_variants(
    log: &EventLog,
    execs: &[ProcessExecution],
    attribute: &str,
    mode: MiningMode,
    wl_iterations: u32,
) -> Result<VariantReport, ProjectError> {
    mine_variants_with_progress(log, execs, attribute, mode, wl_iterations, |_| {})
}

/// Like [`mine_variants`], invoking `progress` with the running count of
/// hashed executions. The callback must tolerate concurrent invocation.
pub fn mine_variants_with_progress(
    log: &EventLog,
    execs: &[ProcessExecution],
    attribute: &str,
    mode: MiningMode,
    wl_iterations: u32,
    progress: impl Fn(usize) + Sync,
) -> Result<VariantReport, ProjectError> {
    let done = AtomicUsize::new(0);
    let hashed: Vec<(ProjectedExecution, String)> = execs
        .par_iter()
        .map(|exec| {
            let projection = project(log, exec, attribute)?;
            let hash = wl_hash(&projection, wl_iterations);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1);
            Ok((projection, hash))
        })
        .collect::<Result<_, ProjectError>>()?;

    // Hash buckets keyed by digest; BTreeMap keeps bucket order stable.
    let mut buckets: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, (_, hash)) in hashed.iter().enumerate() {
        buckets.entry(hash).or_default().push(i);
    }

    let bucket_list: Vec<(&str, Vec<usize>)> = buckets.into_iter().collect();
    let mut classes: Vec<EquivalenceClass> = bucket_list
        .into_par_iter()
        .flat_map(|(hash, members)| match mode {
            MiningMode::Approximate => vec![make_class(hash.to_string(), members, &hashed)],
            MiningMode::Exact => refine_bucket(hash, members, &hashed),
        })
        .collect();

    let total = execs.len();
    for class in &mut classes {
        class.frequency = Frequency {
            num: class.members.len() as u64,
            den: total as u64,
        };
    }
    classes.sort_by(|a, b| {
        b.members
            .len()
            .cmp(&a.members.len())
            .then_with(|| a.class_id.cmp(&b.class_id))
    });

    Ok(VariantReport {
        attribute: attribute.to_string(),
        mode,
        wl_iterations,
        total,
        classes,
    })
}

fn make_class(
    class_id: String,
    members: Vec<usize>,
    hashed: &[(ProjectedExecution, String)],
) -> EquivalenceClass {
    let representative = hashed[members[0]].0.clone();
    EquivalenceClass {
        class_id,
        members,
        representative,
        frequency: Frequency { num: 0, den: 0 },
    }
}

/// Split one hash bucket into exact classes. Each candidate is compared
/// against a single representative per refined subclass.
fn refine_bucket(
    hash: &str,
    members: Vec<usize>,
    hashed: &[(ProjectedExecution, String)],
) -> Vec<EquivalenceClass> {
    let mut subclasses: Vec<Vec<usize>> = Vec::new();
    for member in members {
        let position = subclasses
            .iter()
            .position(|sub| iso_check(&hashed[sub[0]].0, &hashed[member].0));
        match position {
            Some(i) => subclasses[i].push(member),
            None => subclasses.push(vec![member]),
        }
    }
    if subclasses.len() == 1 {
        let members = subclasses.pop().expect("one subclass");
        return vec![make_class(hash.to_string(), members, hashed)];
    }
    // The discovery order above depends on the input order; re-key the
    // subclasses by their smallest canonical member encoding so suffixes are
    // stable under permutations of the execution list.
    let mut keyed: Vec<(Vec<u8>, Vec<usize>)> = subclasses
        .into_iter()
        .map(|sub| {
            let key = sub
                .iter()
                .map(|&m| hashed[m].0.canonical_bytes())
                .min()
                .expect("non-empty subclass");
            (key, sub)
        })
        .collect();
    keyed.sort();
    keyed
        .into_iter()
        .enumerate()
        .map(|(k, (_, sub))| make_class(format!("{hash}-{k}"), sub, hashed))
        .collect()
}

/// Report JSON; the representative is serialized as its source execution.
pub fn report_to_json(
    report: &VariantReport,
    log: &EventLog,
    execs: &[ProcessExecution],
) -> Value {
    json!({
        "attribute": report.attribute,
        "mode": report.mode.as_str(),
        "wl_iterations": report.wl_iterations,
        "total_executions": report.total,
        "classes": report.classes.iter().map(|class| json!({
            "class_id": class.class_id,
            "size": class.members.len(),
            "frequency": {"num": class.frequency.num, "den": class.frequency.den},
            "members": class.members,
            "representative": execs[class.members[0]].to_json(log),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_graph::build_event_graph;
    use crate::exhaustive::brute_force_classes;
    use crate::extraction::{extract_components, extract_leading_type};
    use crate::object_graph::build_object_graph;
    use crate::test_support::fixture_log;

    struct Mined {
        log: EventLog,
        execs: Vec<ProcessExecution>,
    }

    fn fixture_components() -> Mined {
        let log = fixture_log();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        Mined { log, execs }
    }

    #[test]
    fn fixture_components_form_two_singleton_classes() {
        let m = fixture_components();
        let report =
            mine_variants(&m.log, &m.execs, "ocel:activity", MiningMode::Exact, 3).unwrap();
        assert_eq!(report.total, 2);
        assert_eq!(report.classes.len(), 2);
        for class in &report.classes {
            assert_eq!(class.members.len(), 1);
            assert_eq!(class.frequency, Frequency { num: 1, den: 2 });
        }
    }

    #[test]
    fn exact_partition_matches_the_oracle_on_leading_type_executions() {
        let log = fixture_log();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_leading_type(&log, &graph, &objects, "Type2").unwrap();
        let report = mine_variants(&log, &execs, "ocel:activity", MiningMode::Exact, 3).unwrap();
        let projections: Vec<_> = execs
            .iter()
            .map(|e| crate::projection::project(&log, e, "ocel:activity").unwrap())
            .collect();
        let oracle = brute_force_classes(&projections).unwrap();
        let mut mined: Vec<Vec<usize>> = report.classes.iter().map(|c| c.members.clone()).collect();
        mined.sort();
        let mut expected = oracle;
        expected.sort();
        assert_eq!(mined, expected);
    }

    #[test]
    fn frequencies_sum_to_one_exactly() {
        let m = fixture_components();
        let report =
            mine_variants(&m.log, &m.execs, "ocel:activity", MiningMode::Exact, 3).unwrap();
        let num_sum: u64 = report.classes.iter().map(|c| c.frequency.num).sum();
        assert_eq!(num_sum, report.total as u64);
        assert!(report
            .classes
            .iter()
            .all(|c| c.frequency.den == report.total as u64));
    }

    #[test]
    fn approximate_mode_reports_hash_buckets() {
        let m = fixture_components();
        let exact =
            mine_variants(&m.log, &m.execs, "ocel:activity", MiningMode::Exact, 3).unwrap();
        let approx = mine_variants(
            &m.log,
            &m.execs,
            "ocel:activity",
            MiningMode::Approximate,
            3,
        )
        .unwrap();
        // Every exact class sits inside exactly one approximate class.
        for class in &exact.classes {
            let containers: Vec<_> = approx
                .classes
                .iter()
                .filter(|a| class.members.iter().all(|m| a.members.contains(m)))
                .collect();
            assert_eq!(containers.len(), 1);
        }
    }

    #[test]
    fn empty_input_yields_an_empty_report() {
        let m = fixture_components();
        let report = mine_variants(&m.log, &[], "ocel:activity", MiningMode::Exact, 3).unwrap();
        assert_eq!(report.total, 0);
        assert!(report.classes.is_empty());
    }

    #[test]
    fn missing_attribute_propagates() {
        let m = fixture_components();
        let err = mine_variants(&m.log, &m.execs, "cost", MiningMode::Exact, 3).unwrap_err();
        assert!(matches!(err, ProjectError::MissingAttribute { .. }));
    }

    #[test]
    fn report_json_shape() {
        let m = fixture_components();
        let report =
            mine_variants(&m.log, &m.execs, "ocel:activity", MiningMode::Exact, 3).unwrap();
        let value = report_to_json(&report, &m.log, &m.execs);
        assert_eq!(value["total_executions"], 2);
        assert_eq!(value["classes"][0]["size"], 1);
        assert_eq!(value["classes"][0]["frequency"]["den"], 2);
        assert_eq!(value["classes"][0]["representative"]["strategy"], "components");
    }

    #[test]
    fn progress_reaches_the_total() {
        let m = fixture_components();
        let max_seen = std::sync::atomic::AtomicUsize::new(0);
        mine_variants_with_progress(
            &m.log,
            &m.execs,
            "ocel:activity",
            MiningMode::Exact,
            3,
            |n| {
                max_seen.fetch_max(n, Ordering::Relaxed);
            },
        )
        .unwrap();
        assert_eq!(max_seen.load(Ordering::Relaxed), 2);
    }
}
