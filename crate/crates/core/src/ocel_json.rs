//! OCEL JSON ingestion and serialization.
//!
//! The wire format is the OCEL JSON document layout: `ocel:global-log`,
//! `ocel:events` (map event id -> event), `ocel:objects` (map object id ->
//! object). Unknown keys are preserved on round-trip but carry no meaning.
//! Attribute values are canonicalized to strings on ingestion.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use chrono::{DateTime, Utc};
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::log::{format_timestamp, EventInput, EventLog, LogError, ObjectInput};

/// Errors raised by [`parse_log`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("missing field `{path}`")]
    MissingField { path: String },
    #[error("invalid timestamp at `{path}`: `{value}` (RFC 3339 with timezone required)")]
    InvalidTimestamp { path: String, value: String },
    #[error(transparent)]
    Log(#[from] LogError),
}

/// Parse and validate an OCEL JSON document.
///
/// Traces are always derived from the events' `ocel:omap` entries (ordered by
/// timestamp, then event id), never read from the document.
pub fn parse_log(bytes: &[u8]) -> Result<EventLog, ParseError> {
    let raw: RawLog =
        serde_json::from_slice(bytes).map_err(|e| ParseError::MalformedJson(e.to_string()))?;

    let mut object_inputs = Vec::with_capacity(raw.objects.len());
    for (id, obj) in raw.objects {
        let path = format!("ocel:objects.{id}");
        let otype = obj.otype.ok_or_else(|| ParseError::MissingField {
            path: format!("{path}.ocel:type"),
        })?;
        object_inputs.push(ObjectInput {
            id,
            otype,
            ovmap: obj.ovmap.unwrap_or_default(),
            extra: obj.extra,
        });
    }

    let mut event_inputs = Vec::with_capacity(raw.events.len());
    for (id, event) in raw.events {
        let path = format!("ocel:events.{id}");
        let activity = event.activity.ok_or_else(|| ParseError::MissingField {
            path: format!("{path}.ocel:activity"),
        })?;
        let ts_text = event.timestamp.ok_or_else(|| ParseError::MissingField {
            path: format!("{path}.ocel:timestamp"),
        })?;
        let timestamp = parse_timestamp(&ts_text).ok_or_else(|| ParseError::InvalidTimestamp {
            path: format!("{path}.ocel:timestamp"),
            value: ts_text.clone(),
        })?;
        let vmap = event
            .vmap
            .unwrap_or_default()
            .into_iter()
            .map(|(k, v)| (k, value_to_string(&v)))
            .collect::<BTreeMap<String, String>>();
        event_inputs.push(EventInput {
            id,
            activity,
            timestamp,
            omap: event.omap.unwrap_or_default(),
            vmap,
            extra: event.extra,
        });
    }

    let declared_types = raw
        .global
        .get("ocel:object-types")
        .and_then(Value::as_array)
        .map(|types| {
            types
                .iter()
                .filter_map(Value::as_str)
                .map(str::to_owned)
                .collect()
        })
        .unwrap_or_default();

    Ok(EventLog::new(
        event_inputs,
        object_inputs,
        declared_types,
        raw.global,
        raw.extra,
    )?)
}

/// Serialize a log back to the OCEL JSON layout (pretty-printed, byte-stable).
pub fn serialize_log(log: &EventLog) -> String {
    let mut events = Map::new();
    for event in log.events() {
        let mut entry = Map::new();
        entry.insert(
            "ocel:activity".into(),
            Value::String(event.activity().into()),
        );
        entry.insert(
            "ocel:timestamp".into(),
            Value::String(format_timestamp(event.timestamp())),
        );
        entry.insert(
            "ocel:omap".into(),
            Value::Array(
                event
                    .omap()
                    .iter()
                    .map(|&oi| Value::String(log.objects()[oi].id().into()))
                    .collect(),
            ),
        );
        entry.insert(
            "ocel:vmap".into(),
            Value::Object(
                event
                    .vmap()
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect(),
            ),
        );
        for (k, v) in event.extra() {
            entry.insert(k.clone(), v.clone());
        }
        events.insert(event.id().into(), Value::Object(entry));
    }

    let mut objects = Map::new();
    for object in log.objects() {
        let mut entry = Map::new();
        entry.insert(
            "ocel:type".into(),
            Value::String(log.type_name(object.otype()).into()),
        );
        entry.insert("ocel:ovmap".into(), Value::Object(object.ovmap().clone()));
        for (k, v) in object.extra() {
            entry.insert(k.clone(), v.clone());
        }
        objects.insert(object.id().into(), Value::Object(entry));
    }

    let mut doc = Map::new();
    doc.insert(
        "ocel:global-log".into(),
        Value::Object(log.global().clone()),
    );
    doc.insert("ocel:events".into(), Value::Object(events));
    doc.insert("ocel:objects".into(), Value::Object(objects));
    for (k, v) in log.extra() {
        doc.insert(k.clone(), v.clone());
    }
    serde_json::to_string_pretty(&Value::Object(doc)).expect("serialization cannot fail")
}

fn parse_timestamp(text: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(text)
        .ok()
        .map(|dt| dt.with_timezone(&Utc))
}

/// Canonical string form of a JSON attribute value.
fn value_to_string(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Null => "null".into(),
        other => serde_json::to_string(other).expect("serialization cannot fail"),
    }
}

#[derive(Deserialize)]
struct RawEvent {
    #[serde(rename = "ocel:activity")]
    activity: Option<String>,
    #[serde(rename = "ocel:timestamp")]
    timestamp: Option<String>,
    #[serde(rename = "ocel:omap")]
    omap: Option<Vec<String>>,
    #[serde(rename = "ocel:vmap")]
    vmap: Option<Map<String, Value>>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

#[derive(Deserialize)]
struct RawObject {
    #[serde(rename = "ocel:type")]
    otype: Option<String>,
    #[serde(rename = "ocel:ovmap")]
    ovmap: Option<Map<String, Value>>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

/// Map deserialized as an entry list so duplicate ids survive parsing and can
/// be reported as [`LogError::DuplicateId`] instead of silently winning last.
struct EntryList<T>(Vec<(String, T)>);

impl<'de, T: Deserialize<'de>> Deserialize<'de> for EntryList<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntryVisitor<T>(PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for EntryVisitor<T> {
            type Value = EntryList<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut entries = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some(entry) = map.next_entry::<String, T>()? {
                    entries.push(entry);
                }
                Ok(EntryList(entries))
            }
        }
        deserializer.deserialize_map(EntryVisitor(PhantomData))
    }
}

struct RawLog {
    global: Map<String, Value>,
    events: Vec<(String, RawEvent)>,
    objects: Vec<(String, RawObject)>,
    extra: Map<String, Value>,
}

impl<'de> Deserialize<'de> for RawLog {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LogVisitor;
        impl<'de> Visitor<'de> for LogVisitor {
            type Value = RawLog;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an OCEL JSON document")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut global: Option<Map<String, Value>> = None;
                let mut events: Option<EntryList<RawEvent>> = None;
                let mut objects: Option<EntryList<RawObject>> = None;
                let mut extra = Map::new();
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "ocel:global-log" => {
                            if global.is_some() {
                                return Err(serde::de::Error::duplicate_field("ocel:global-log"));
                            }
                            global = Some(map.next_value()?);
                        }
                        "ocel:events" => {
                            if events.is_some() {
                                return Err(serde::de::Error::duplicate_field("ocel:events"));
                            }
                            events = Some(map.next_value()?);
                        }
                        "ocel:objects" => {
                            if objects.is_some() {
                                return Err(serde::de::Error::duplicate_field("ocel:objects"));
                            }
                            objects = Some(map.next_value()?);
                        }
                        _ => {
                            let value = map.next_value::<Value>()?;
                            extra.insert(key, value);
                        }
                    }
                }
                Ok(RawLog {
                    global: global.unwrap_or_default(),
                    events: events.map(|e| e.0).unwrap_or_default(),
                    objects: objects.map(|o| o.0).unwrap_or_default(),
                    extra,
                })
            }
        }
        deserializer.deserialize_map(LogVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{fixture_bytes, fixture_log};

    #[test]
    fn fixture_parses_with_expected_traces() {
        let log = fixture_log();
        assert_eq!(log.events().len(), 12);
        assert_eq!(log.objects().len(), 6);
        assert_eq!(log.types(), ["Type1", "Type2"]);
        let trace = |id: &str| -> Vec<&str> {
            log.trace(log.object_index(id).unwrap())
                .iter()
                .map(|&e| log.events()[e].id())
                .collect()
        };
        assert_eq!(trace("o1"), ["e3", "e4", "e6"]);
        assert_eq!(trace("m1"), ["e1", "e3", "e5", "e6"]);
        assert_eq!(trace("m4"), ["e7", "e10", "e11", "e12"]);
    }

    #[test]
    fn empty_document_yields_empty_log() {
        let log = parse_log(b"{}").unwrap();
        assert_eq!(log.events().len(), 0);
        assert_eq!(log.objects().len(), 0);
        assert_eq!(log.stats().types, 0);
    }

    #[test]
    fn unknown_object_reference_is_reported() {
        let doc = br#"{
            "ocel:events": {"eX": {"ocel:activity": "a", "ocel:timestamp": "2022-01-01T00:00:00Z", "ocel:omap": ["ghost"]}},
            "ocel:objects": {}
        }"#;
        let err = parse_log(doc).unwrap_err();
        assert_eq!(
            err,
            ParseError::Log(LogError::UnknownObjectRef {
                event: "eX".into(),
                object: "ghost".into()
            })
        );
    }

    #[test]
    fn duplicate_object_keys_are_reported() {
        let doc = br#"{
            "ocel:objects": {"o": {"ocel:type": "T"}, "o": {"ocel:type": "T"}}
        }"#;
        let err = parse_log(doc).unwrap_err();
        assert_eq!(
            err,
            ParseError::Log(LogError::DuplicateId {
                kind: "object",
                id: "o".into()
            })
        );
    }

    #[test]
    fn missing_activity_reports_path() {
        let doc = br#"{
            "ocel:events": {"e1": {"ocel:timestamp": "2022-01-01T00:00:00Z"}}
        }"#;
        assert_eq!(
            parse_log(doc).unwrap_err(),
            ParseError::MissingField {
                path: "ocel:events.e1.ocel:activity".into()
            }
        );
    }

    #[test]
    fn timestamp_without_timezone_is_rejected() {
        let doc = br#"{
            "ocel:events": {"e1": {"ocel:activity": "a", "ocel:timestamp": "2022-01-01T00:00:00"}}
        }"#;
        assert!(matches!(
            parse_log(doc).unwrap_err(),
            ParseError::InvalidTimestamp { .. }
        ));
    }

    #[test]
    fn malformed_json_is_rejected() {
        assert!(matches!(
            parse_log(b"{not json").unwrap_err(),
            ParseError::MalformedJson(_)
        ));
    }

    #[test]
    fn round_trip_preserves_the_log() {
        let first = fixture_log();
        let second = parse_log(serialize_log(&first).as_bytes()).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn unknown_keys_survive_round_trips() {
        let doc = br#"{
            "ocel:global-log": {"ocel:version": "1.0"},
            "ocel:events": {"e1": {"ocel:activity": "a", "ocel:timestamp": "2022-01-01T00:00:00Z", "ocel:omap": [], "custom:flag": true}},
            "ocel:objects": {},
            "custom:top": {"nested": [1, 2]}
        }"#;
        let first = parse_log(doc).unwrap();
        let text = serialize_log(&first);
        assert!(text.contains("custom:flag"));
        assert!(text.contains("custom:top"));
        let second = parse_log(text.as_bytes()).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn attribute_values_are_canonical_strings() {
        let doc = br#"{
            "ocel:events": {"e1": {"ocel:activity": "a", "ocel:timestamp": "2022-01-01T00:00:00+02:00", "ocel:omap": [], "ocel:vmap": {"n": 3.5, "b": false, "s": "x"}}}
        }"#;
        let log = parse_log(doc).unwrap();
        let event = &log.events()[0];
        assert_eq!(event.vmap()["n"], "3.5");
        assert_eq!(event.vmap()["b"], "false");
        assert_eq!(event.vmap()["s"], "x");
        // Offset timestamps normalize to UTC.
        assert_eq!(
            event.attribute("ocel:timestamp").as_deref(),
            Some("2021-12-31T22:00:00.000Z")
        );
    }

    #[test]
    fn parsing_is_deterministic() {
        let bytes = fixture_bytes();
        assert_eq!(parse_log(bytes).unwrap(), parse_log(bytes).unwrap());
    }
}
