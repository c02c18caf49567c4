//! Grid layout for variant diagrams.
//!
//! Horizontal positions come from the execution's partial order: an event
//! starts one column after the latest start among its predecessors and ends
//! right before the earliest start among its successors, so shared events
//! occupy the same span on every lane. Vertical positions are lanes, one per
//! object, grouped by object type.

use std::collections::VecDeque;

use thiserror::Error;

use crate::extraction::ProcessExecution;
use crate::log::EventLog;
use crate::projection::ProjectedExecution;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("the execution graph contains a cycle")]
    CyclicExecution,
    #[error("projection does not match the execution ({0})")]
    Mismatch(String),
}

/// Start and end columns per node of a projected execution, memoized in one
/// topological pass (total cost O(nodes + edges)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Positions {
    pub starts: Vec<u32>,
    pub ends: Vec<u32>,
}

/// Compute all horizontal positions.
///
/// `starts[v]` is 0 for source nodes, otherwise 1 + the maximum start among
/// predecessors. `ends[v]` equals `starts[v]` for sinks, otherwise the
/// minimum successor start minus 1.
pub fn event_positions(p: &ProjectedExecution) -> Result<Positions, LayoutError> {
    let n = p.node_count();
    let mut indegree: Vec<usize> = (0..n).map(|v| p.in_edges(v).len()).collect();
    let mut starts = vec![0u32; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut processed = 0;
    while let Some(v) = queue.pop_front() {
        processed += 1;
        for &(w, _) in p.out_edges(v) {
            starts[w] = starts[w].max(starts[v] + 1);
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    if processed != n {
        return Err(LayoutError::CyclicExecution);
    }
    let ends = (0..n)
        .map(|v| {
            let succ_min = p.out_edges(v).iter().map(|&(w, _)| starts[w]).min();
            match succ_min {
                None => starts[v],
                Some(min) => min - 1,
            }
        })
        .collect();
    Ok(Positions { starts, ends })
}

/// One horizontal lane of the diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lane {
    pub object: String,
    pub otype: String,
}

/// Placement of one event: a column span plus the lanes it appears on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub event: String,
    pub x_start: u32,
    pub x_end: u32,
    /// Indices into [`LayoutGrid::lanes`], ascending.
    pub lanes: Vec<usize>,
}

/// A laid-out variant: lanes top to bottom, cells sorted by (start column,
/// event id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutGrid {
    lanes: Vec<Lane>,
    cells: Vec<Cell>,
    width: u32,
}

impl LayoutGrid {
    pub fn lanes(&self) -> &[Lane] {
        &self.lanes
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of columns (maximum end column + 1).
    pub fn width(&self) -> u32 {
        self.width
    }
}

/// Lay out one execution. Lanes are grouped by type (types in name order);
/// within a type, objects are ordered by first event, then id. Every event is
/// placed on each of its objects' lanes at the same span.
pub fn layout_variant(
    log: &EventLog,
    exec: &ProcessExecution,
    p: &ProjectedExecution,
) -> Result<LayoutGrid, LayoutError> {
    if p.node_count() != exec.events.len() {
        return Err(LayoutError::Mismatch(format!(
            "{} projected nodes vs {} events",
            p.node_count(),
            exec.events.len()
        )));
    }
    for (local, &event) in exec.events.iter().enumerate() {
        if p.node_id(local) != log.events()[event].id() {
            return Err(LayoutError::Mismatch(format!(
                "node `{}` does not match event `{}`",
                p.node_id(local),
                log.events()[event].id()
            )));
        }
    }
    let positions = event_positions(p)?;

    let mut lane_objects: Vec<usize> = exec.objects.clone();
    lane_objects.sort_by(|&a, &b| {
        let key = |o: usize| {
            let first = *log.trace(o).first().expect("execution objects have events");
            (
                log.type_name(log.object_type(o)).to_string(),
                log.events()[first].timestamp(),
                log.objects()[o].id().to_string(),
            )
        };
        key(a).cmp(&key(b))
    });
    let lanes: Vec<Lane> = lane_objects
        .iter()
        .map(|&o| Lane {
            object: log.objects()[o].id().into(),
            otype: log.type_name(log.object_type(o)).into(),
        })
        .collect();

    let mut cells = Vec::with_capacity(exec.events.len());
    for (local, &event) in exec.events.iter().enumerate() {
        let omap = log.events()[event].omap();
        let member_lanes: Vec<usize> = lane_objects
            .iter()
            .enumerate()
            .filter(|&(_, &o)| omap.binary_search(&o).is_ok())
            .map(|(lane, _)| lane)
            .collect();
        debug_assert!(!member_lanes.is_empty(), "execution events carry objects");
        cells.push(Cell {
            event: log.events()[event].id().into(),
            x_start: positions.starts[local],
            x_end: positions.ends[local],
            lanes: member_lanes,
        });
    }
    cells.sort_by(|a, b| (a.x_start, &a.event).cmp(&(b.x_start, &b.event)));

    let width = cells.iter().map(|c| c.x_end + 1).max().unwrap_or(0);
    let grid = LayoutGrid {
        lanes,
        cells,
        width,
    };
    check_invariants(p, &positions, &grid);
    Ok(grid)
}

/// Structural guarantees, asserted on every layout: edges advance columns,
/// spans are non-empty, lanes never overlap.
fn check_invariants(p: &ProjectedExecution, positions: &Positions, grid: &LayoutGrid) {
    for &(a, b) in p.edges() {
        assert!(
            positions.starts[b] >= positions.starts[a] + 1,
            "edge does not advance columns"
        );
    }
    for v in 0..p.node_count() {
        assert!(positions.starts[v] <= positions.ends[v], "inverted span");
    }
    for lane in 0..grid.lanes.len() {
        let mut spans: Vec<(u32, u32)> = grid
            .cells
            .iter()
            .filter(|c| c.lanes.contains(&lane))
            .map(|c| (c.x_start, c.x_end))
            .collect();
        spans.sort_unstable();
        for pair in spans.windows(2) {
            assert!(pair[0].1 < pair[1].0, "overlapping cells on one lane");
        }
    }
}
