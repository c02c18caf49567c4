//! In-memory model of an object-centric event log.
//!
//! The log is validated and frozen at construction time: events are kept in
//! their global order (timestamp, then event id), objects are kept sorted by
//! id, and per-object traces are derived from the events' object references.
//! All indices handed out by this module refer to those two orderings.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use chrono::{DateTime, Utc};
use serde_json::{Map, Value};
use thiserror::Error;

/// Validation errors raised while assembling an [`EventLog`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("event `{event}` references undeclared object `{object}`")]
    UnknownObjectRef { event: String, object: String },
}

/// Non-fatal oddities recorded during log construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// The event references no objects: it is kept for statistics but will
    /// never be part of a process execution.
    EventWithoutObjects { event: String },
    /// The object occurs in no event's object set.
    ObjectWithoutEvents { object: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::EventWithoutObjects { event } => {
                write!(f, "event `{event}` has an empty object set")
            }
            Warning::ObjectWithoutEvents { object } => {
                write!(f, "object `{object}` occurs in no event")
            }
        }
    }
}

/// A single event. Attribute values are plain strings; `ocel:activity` and
/// `ocel:timestamp` are reserved attribute names served from the dedicated
/// fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    id: String,
    activity: String,
    timestamp: DateTime<Utc>,
    /// Indices into [`EventLog::objects`], sorted ascending.
    omap: Vec<usize>,
    vmap: BTreeMap<String, String>,
    /// Unknown JSON keys, preserved for round-trips.
    extra: Map<String, Value>,
}

impl Event {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn activity(&self) -> &str {
        &self.activity
    }

    /// UTC instant, truncated to millisecond precision.
    pub fn timestamp(&self) -> DateTime<Utc> {
        self.timestamp
    }

    /// Object indices, sorted ascending (object index order equals object id
    /// order).
    pub fn omap(&self) -> &[usize] {
        &self.omap
    }

    pub fn vmap(&self) -> &BTreeMap<String, String> {
        &self.vmap
    }

    pub fn extra(&self) -> &Map<String, Value> {
        &self.extra
    }

    /// Attribute lookup with the reserved names resolved first.
    pub fn attribute(&self, name: &str) -> Option<String> {
        match name {
            "ocel:activity" => Some(self.activity.clone()),
            "ocel:timestamp" => Some(format_timestamp(self.timestamp)),
            _ => self.vmap.get(name).cloned(),
        }
    }
}

/// A single object of one declared type.
#[derive(Debug, Clone, PartialEq)]
pub struct Object {
    id: String,
    otype: usize,
    ovmap: Map<String, Value>,
    extra: Map<String, Value>,
}

impl Object {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Index into [`EventLog::types`].
    pub fn otype(&self) -> usize {
        self.otype
    }

    pub fn ovmap(&self) -> &Map<String, Value> {
        &self.ovmap
    }

    pub fn extra(&self) -> &Map<String, Value> {
        &self.extra
    }
}

/// Raw event data fed into [`EventLog::new`].
#[derive(Debug, Clone, Default)]
pub struct EventInput {
    pub id: String,
    pub activity: String,
    pub timestamp: DateTime<Utc>,
    pub omap: Vec<String>,
    pub vmap: BTreeMap<String, String>,
    pub extra: Map<String, Value>,
}

/// Raw object data fed into [`EventLog::new`].
#[derive(Debug, Clone, Default)]
pub struct ObjectInput {
    pub id: String,
    pub otype: String,
    pub ovmap: Map<String, Value>,
    pub extra: Map<String, Value>,
}

/// A validated, immutable object-centric event log.
///
/// Invariants held after construction:
/// * `events` is sorted by (timestamp, event id); the index order is the
///   global event order used everywhere else.
/// * `objects` is sorted by object id.
/// * `traces[o]` lists exactly the events whose object set contains `o`, in
///   event order, each at most once.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    events: Vec<Event>,
    objects: Vec<Object>,
    types: Vec<String>,
    traces: Vec<Vec<usize>>,
    event_index: HashMap<String, usize>,
    object_index: HashMap<String, usize>,
    warnings: Vec<Warning>,
    /// Preserved contents of `ocel:global-log`.
    global: Map<String, Value>,
    /// Preserved unknown top-level keys.
    extra: Map<String, Value>,
}

impl EventLog {
    /// Build a validated log from raw parts. `declared_types` may list types
    /// beyond those used by objects (they count towards the type set).
    pub fn new(
        mut event_inputs: Vec<EventInput>,
        mut object_inputs: Vec<ObjectInput>,
        declared_types: Vec<String>,
        global: Map<String, Value>,
        extra: Map<String, Value>,
    ) -> Result<Self, LogError> {
        // Objects first: sorted by id so that object index order == id order.
        object_inputs.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in object_inputs.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(LogError::DuplicateId {
                    kind: "object",
                    id: pair[1].id.clone(),
                });
            }
        }

        let mut types: Vec<String> = declared_types;
        types.extend(object_inputs.iter().map(|o| o.otype.clone()));
        types.sort();
        types.dedup();

        let mut object_index = HashMap::with_capacity(object_inputs.len());
        let objects: Vec<Object> = object_inputs
            .into_iter()
            .enumerate()
            .map(|(i, input)| {
                object_index.insert(input.id.clone(), i);
                let otype = types.binary_search(&input.otype).expect("type collected");
                Object {
                    id: input.id,
                    otype,
                    ovmap: input.ovmap,
                    extra: input.extra,
                }
            })
            .collect();

        // Events in global order: timestamp, then id (byte-wise).
        event_inputs.sort_by(|a, b| {
            a.timestamp
                .cmp(&b.timestamp)
                .then_with(|| a.id.cmp(&b.id))
        });
        // Duplicate ids can sort apart when timestamps differ; the index map
        // catches them all.
        let mut event_index = HashMap::with_capacity(event_inputs.len());
        let mut events = Vec::with_capacity(event_inputs.len());
        let mut warnings = Vec::new();
        for input in event_inputs {
            let idx = events.len();
            if event_index.insert(input.id.clone(), idx).is_some() {
                return Err(LogError::DuplicateId {
                    kind: "event",
                    id: input.id,
                });
            }
            let mut omap = Vec::with_capacity(input.omap.len());
            for oid in &input.omap {
                let oi = object_index
                    .get(oid)
                    .copied()
                    .ok_or_else(|| LogError::UnknownObjectRef {
                        event: input.id.clone(),
                        object: oid.clone(),
                    })?;
                omap.push(oi);
            }
            omap.sort_unstable();
            omap.dedup();
            if omap.is_empty() {
                warnings.push(Warning::EventWithoutObjects {
                    event: input.id.clone(),
                });
            }
            events.push(Event {
                id: input.id,
                activity: input.activity,
                timestamp: truncate_millis(input.timestamp),
                omap,
                vmap: input.vmap,
                extra: input.extra,
            });
        }

        // Traces fall out sorted because events are visited in global order.
        let mut traces = vec![Vec::new(); objects.len()];
        for (ei, event) in events.iter().enumerate() {
            for &oi in &event.omap {
                traces[oi].push(ei);
            }
        }
        for (oi, trace) in traces.iter().enumerate() {
            if trace.is_empty() {
                warnings.push(Warning::ObjectWithoutEvents {
                    object: objects[oi].id.clone(),
                });
            }
        }

        Ok(EventLog {
            events,
            objects,
            types,
            traces,
            event_index,
            object_index,
            warnings,
            global,
            extra,
        })
    }

    /// Events in global (timestamp, id) order.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Objects sorted by id.
    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    /// Sorted type names (declared plus used).
    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn event_index(&self, id: &str) -> Option<usize> {
        self.event_index.get(id).copied()
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.object_index.get(id).copied()
    }

    /// Event indices of the object's trace, in event order.
    pub fn trace(&self, object: usize) -> &[usize] {
        &self.traces[object]
    }

    pub fn type_name(&self, otype: usize) -> &str {
        &self.types[otype]
    }

    /// Type index of an object.
    pub fn object_type(&self, object: usize) -> usize {
        self.objects[object].otype
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn global(&self) -> &Map<String, Value> {
        &self.global
    }

    pub fn extra(&self) -> &Map<String, Value> {
        &self.extra
    }

    /// Exact counts for reporting.
    pub fn stats(&self) -> LogStats {
        let mut objects_per_type: BTreeMap<String, usize> = BTreeMap::new();
        for object in &self.objects {
            *objects_per_type
                .entry(self.types[object.otype].clone())
                .or_insert(0) += 1;
        }
        LogStats {
            events: self.events.len(),
            objects: self.objects.len(),
            types: self.types.len(),
            objects_per_type,
        }
    }
}

/// Headline counts of a log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogStats {
    pub events: usize,
    pub objects: usize,
    pub types: usize,
    pub objects_per_type: BTreeMap<String, usize>,
}

/// RFC 3339 with millisecond precision in UTC, the canonical form used on
/// output and for the reserved `ocel:timestamp` attribute.
pub fn format_timestamp(ts: DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn truncate_millis(ts: DateTime<Utc>) -> DateTime<Utc> {
    DateTime::from_timestamp_millis(ts.timestamp_millis()).expect("timestamp in range")
}
