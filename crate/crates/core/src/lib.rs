//! Process executions and variants for object-centric event logs.
//!
//! An object-centric event log associates each event with any number of
//! objects of different types, so the data forms a graph of event sequences
//! rather than a set of isolated cases. This crate extracts *process
//! executions* (the graph-shaped counterpart of cases) from such logs, groups
//! equivalent executions into variants via labeled-graph isomorphism, and lays
//! variants out as lane-based chevron diagrams.
//!
//! Pipeline overview:
//!
//! ```text
//! OCEL JSON -> EventLog -> EventObjectGraph -+-> extract_components   -> ProcessExecution*
//!                          ObjectGraph      -+-> extract_leading_type -> ProcessExecution*
//!
//! ProcessExecution* -> project -> ProjectedExecution* -> mine_variants -> VariantReport
//! VariantReport -> layout_variant -> LayoutGrid -> render_svg
//! ```

pub mod event_graph;
pub mod exhaustive;
pub mod extraction;
pub mod iso;
pub mod layout;
pub mod log;
pub mod object_graph;
pub mod ocel_json;
pub mod projection;
pub mod svg;
pub mod synthetic;
pub mod variants;
pub mod wl_hash;

#[cfg(test)]
pub(crate) mod test_support {
    use crate::log::EventLog;

    pub(crate) fn fixture_bytes() -> &'static [u8] {
        include_bytes!("../../../fixtures/sample.jsonocel")
    }

    /// The bundled twelve-event, two-component example log.
    pub(crate) fn fixture_log() -> EventLog {
        crate::ocel_json::parse_log(fixture_bytes()).expect("fixture parses")
    }
}

pub use event_graph::{build_event_graph, EventObjectGraph, GraphBuildError};
pub use exhaustive::{brute_force_classes, OracleError, ORACLE_NODE_LIMIT};
pub use extraction::{
    execution_from_objects, extract_components, extract_leading_type, ExtractError,
    ProcessExecution, Provenance,
};
pub use iso::iso_check;
pub use layout::{event_positions, layout_variant, Cell, Lane, LayoutError, LayoutGrid, Positions};
pub use log::{Event, EventLog, LogError, LogStats, Object, Warning};
pub use object_graph::{build_object_graph, ObjectGraph, ObjectGraphError};
pub use ocel_json::{parse_log, serialize_log, ParseError};
pub use projection::{project, EdgeLabel, NodeLabel, ProjectError, ProjectedExecution};
pub use svg::{render_svg, ChevronGeometry, Palette, SHADES_PER_TYPE};
pub use synthetic::{generate_log, random_permutation, random_projected, SyntheticSpec};
pub use variants::{
    mine_variants, mine_variants_with_progress, report_to_json, EquivalenceClass, Frequency,
    MiningMode, VariantReport,
};
pub use wl_hash::wl_hash;
