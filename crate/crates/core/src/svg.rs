//! Chevron-diagram rendering to SVG 1.1.
//!
//! One chevron per (event, lane) pair; shared events repeat on every lane of
//! their objects at the same horizontal span. Output bytes are deterministic:
//! lanes render top to bottom and events by start column, then id.

use std::collections::BTreeMap;

use crate::layout::LayoutGrid;

/// Pixel geometry of the diagram. Overridable; the defaults are pinned by
/// golden tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChevronGeometry {
    pub cell_width: u32,
    pub cell_height: u32,
    pub arrow_depth: u32,
    pub lane_gap: u32,
}

impl Default for ChevronGeometry {
    fn default() -> Self {
        ChevronGeometry {
            cell_width: 96,
            cell_height: 28,
            arrow_depth: 10,
            lane_gap: 4,
        }
    }
}

/// Shades per type objects may share a lane color scheme before repeating.
pub const SHADES_PER_TYPE: usize = 12;

const BASE_HUES: [f64; 8] = [210.0, 135.0, 0.0, 270.0, 30.0, 180.0, 315.0, 60.0];

/// Colors for a diagram: one base color per type (8-hue cycle in type name
/// order) and one shade per object (lightness steps within the type's hue).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    base: BTreeMap<String, String>,
    shades: BTreeMap<String, String>,
    /// Types whose object count exceeds [`SHADES_PER_TYPE`]; their shades
    /// repeat and the renderer flags it.
    overflow: Vec<String>,
}

impl Palette {
    /// Derive colors from the grid's lanes.
    pub fn for_grid(grid: &LayoutGrid) -> Palette {
        let mut per_type: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for lane in grid.lanes() {
            per_type
                .entry(lane.otype.as_str())
                .or_default()
                .push(lane.object.as_str());
        }
        let mut base = BTreeMap::new();
        let mut shades = BTreeMap::new();
        let mut overflow = Vec::new();
        for (type_index, (otype, objects)) in per_type.into_iter().enumerate() {
            let hue = BASE_HUES[type_index % BASE_HUES.len()];
            base.insert(otype.to_string(), hsl_to_hex(hue, 0.65, 0.32));
            if objects.len() > SHADES_PER_TYPE {
                overflow.push(otype.to_string());
            }
            // Shade assignment by object id, independent of lane order.
            let mut sorted = objects;
            sorted.sort_unstable();
            sorted.dedup();
            let slots = sorted.len().min(SHADES_PER_TYPE);
            for (i, object) in sorted.into_iter().enumerate() {
                let slot = i % SHADES_PER_TYPE;
                let lightness = if slots <= 1 {
                    0.55
                } else {
                    0.38 + 0.34 * slot as f64 / (slots as f64 - 1.0)
                };
                shades.insert(object.to_string(), hsl_to_hex(hue, 0.62, lightness));
            }
        }
        Palette {
            base,
            shades,
            overflow,
        }
    }

    pub fn base(&self, otype: &str) -> Option<&str> {
        self.base.get(otype).map(String::as_str)
    }

    pub fn shade(&self, object: &str) -> Option<&str> {
        self.shades.get(object).map(String::as_str)
    }

    pub fn overflow(&self) -> &[String] {
        &self.overflow
    }
}

/// Render the grid to SVG bytes. `labels` maps event ids to the text shown in
/// each chevron.
pub fn render_svg(
    grid: &LayoutGrid,
    labels: &BTreeMap<String, String>,
    palette: &Palette,
    geometry: &ChevronGeometry,
) -> Vec<u8> {
    let cw = i64::from(geometry.cell_width);
    let ch = i64::from(geometry.cell_height);
    let depth = i64::from(geometry.arrow_depth);
    let gap = i64::from(geometry.lane_gap);
    let lane_count = grid.lanes().len() as i64;
    let width = i64::from(grid.width()) * cw;
    let mut height = (lane_count * ch + (lane_count - 1).max(0) * gap).max(ch);
    let warning = (!palette.overflow().is_empty()).then(|| {
        format!(
            "shades repeat beyond {} objects per type: {}",
            SHADES_PER_TYPE,
            palette.overflow().join(", ")
        )
    });
    if warning.is_some() {
        height += 16;
    }

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    for (lane_index, lane) in grid.lanes().iter().enumerate() {
        let y0 = lane_index as i64 * (ch + gap);
        let y1 = y0 + ch;
        let ym = y0 + ch / 2;
        let fill = palette.shade(&lane.object).unwrap_or("#999999");
        let stroke = palette.base(&lane.otype).unwrap_or("#333333");
        for cell in grid.cells() {
            if !cell.lanes.contains(&lane_index) {
                continue;
            }
            let x0 = i64::from(cell.x_start) * cw;
            let x1 = i64::from(cell.x_end + 1) * cw;
            let points = format!(
                "{x0},{y0} {},{y0} {x1},{ym} {},{y1} {x0},{y1} {},{ym}",
                x1 - depth,
                x1 - depth,
                x0 + depth
            );
            out.push_str(&format!(
                "  <polygon points=\"{points}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"1\"/>\n"
            ));
            let label = labels.get(&cell.event).map(String::as_str).unwrap_or("");
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{ym}\" text-anchor=\"middle\" dominant-baseline=\"central\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#ffffff\">{}</text>\n",
                (x0 + x1) / 2,
                escape_xml(label)
            ));
        }
    }
    if let Some(text) = warning {
        out.push_str(&format!(
            "  <text x=\"0\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#aa3333\">{}</text>\n",
            height - 4,
            escape_xml(&text)
        ));
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}

fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

fn hsl_to_hex(h: f64, s: f64, l: f64) -> String {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 % 6 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let channel = |v: f64| ((v + m) * 255.0).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        channel(r1),
        channel(g1),
        channel(b1)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_graph::build_event_graph;
    use crate::extraction::extract_components;
    use crate::layout::layout_variant;
    use crate::object_graph::build_object_graph;
    use crate::ocel_json::parse_log;
    use crate::projection::project;
    use crate::test_support::fixture_log;

    fn activity_labels(log: &crate::log::EventLog) -> BTreeMap<String, String> {
        log.events()
            .iter()
            .map(|e| (e.id().to_string(), e.activity().to_string()))
            .collect()
    }

    fn render_first_component(doc: &[u8]) -> String {
        let log = parse_log(doc).unwrap();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        let p = project(&log, &execs[0], "ocel:activity").unwrap();
        let grid = layout_variant(&log, &execs[0], &p).unwrap();
        let palette = Palette::for_grid(&grid);
        String::from_utf8(render_svg(
            &grid,
            &activity_labels(&log),
            &palette,
            &ChevronGeometry::default(),
        ))
        .unwrap()
    }

    #[test]
    fn single_event_grid_renders_one_polygon_and_one_text() {
        let svg = render_first_component(
            br#"{
            "ocel:events": {"e": {"ocel:activity": "go", "ocel:timestamp": "2022-01-01T00:00:00Z", "ocel:omap": ["o"]}},
            "ocel:objects": {"o": {"ocel:type": "T"}}
        }"#,
        );
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<text").count(), 1);
        assert!(svg.contains(">go</text>"));
    }

    #[test]
    fn shared_events_align_across_lanes() {
        let log = fixture_log();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        let p = project(&log, &execs[0], "ocel:activity").unwrap();
        let grid = layout_variant(&log, &execs[0], &p).unwrap();
        let palette = Palette::for_grid(&grid);
        let svg = String::from_utf8(render_svg(
            &grid,
            &activity_labels(&log),
            &palette,
            &ChevronGeometry::default(),
        ))
        .unwrap();
        // e3 has activity "C" at column 1 on all three lanes: identical x in
        // all three text elements.
        let occurrences: Vec<&str> = svg
            .lines()
            .filter(|line| line.contains(">C</text>"))
            .collect();
        assert_eq!(occurrences.len(), 3);
        for line in &occurrences {
            assert!(line.contains("x=\"144\""), "unexpected x in {line}");
        }
    }

    #[test]
    fn two_objects_of_one_type_get_distinct_shades() {
        let log = fixture_log();
        let graph = build_event_graph(&log).unwrap();
        let objects = build_object_graph(&log);
        let execs = extract_components(&log, &graph, &objects);
        let p = project(&log, &execs[0], "ocel:activity").unwrap();
        let grid = layout_variant(&log, &execs[0], &p).unwrap();
        let palette = Palette::for_grid(&grid);
        let m1 = palette.shade("m1").unwrap();
        let m2 = palette.shade("m2").unwrap();
        assert_ne!(m1, m2);
        assert!(palette.base("Type2").is_some());
    }

    #[test]
    fn rendering_is_deterministic() {
        let doc = include_bytes!("../../../fixtures/sample.jsonocel");
        assert_eq!(render_first_component(doc), render_first_component(doc));
    }

    #[test]
    fn shade_overflow_renders_a_warning() {
        let mut events = String::new();
        let mut objects = String::new();
        for i in 0..13 {
            if i > 0 {
                events.push(',');
                objects.push(',');
            }
            events.push_str(&format!(
                "\"e{i:02}\": {{\"ocel:activity\": \"a\", \"ocel:timestamp\": \"2022-01-01T00:{i:02}:00Z\", \"ocel:omap\": [\"hub\", \"o{i:02}\"]}}"
            ));
            objects.push_str(&format!("\"o{i:02}\": {{\"ocel:type\": \"T\"}}"));
        }
        let doc = format!(
            "{{\"ocel:events\": {{{events}}}, \"ocel:objects\": {{{objects}, \"hub\": {{\"ocel:type\": \"H\"}}}}}}"
        );
        let svg = render_first_component(doc.as_bytes());
        assert!(svg.contains("shades repeat"));
    }
}
