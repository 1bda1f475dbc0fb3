//! SVG and DOT output for semantic frames and correlograms.
//!
//! Output is a pure function of its input: no timestamps, no randomness, and
//! fixed numeric precision.

use std::fmt::Write;

use crate::frames::{EdgeClass, FrameNode, SemanticFrame};
use crate::stats::Correlogram;
use crate::valence::Valence;

const SIZE: f64 = 800.0;
const RADIUS: f64 = 300.0;
const BASE_FONT: f64 = 12.0;

pub fn node_colour(valence: Valence) -> &'static str {
    match valence {
        Valence::Negative => "blue",
        Valence::Positive => "cyan",
        Valence::Neutral => "black",
    }
}

pub fn edge_colour(class: EdgeClass) -> &'static str {
    match class {
        EdgeClass::Negative => "red",
        EdgeClass::Positive => "cyan",
        EdgeClass::Neutral => "black",
        EdgeClass::Contrastive => "purple",
    }
}

fn valence_name(v: Valence) -> &'static str {
    match v {
        Valence::Negative => "negative",
        Valence::Positive => "positive",
        Valence::Neutral => "neutral",
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn position(node: &FrameNode) -> (f64, f64) {
    let c = SIZE / 2.0;
    match node.angle {
        None => (c, c),
        Some(deg) => {
            let rad = deg.to_radians();
            (c + RADIUS * rad.sin(), c - RADIUS * rad.cos())
        }
    }
}

fn stroke_width(weight: u32) -> f64 {
    1.0 + f64::from(weight).ln()
}

/// Circular frame drawing: target in the centre, neighbours on the rim, edges
/// as curves bent towards the centre.
pub fn frame_svg(frame: &SemanticFrame) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if frame.neighbours.is_empty() {
        let _ = writeln!(
            s,
            r#"<text class="node {cls}" data-node="{id}" x="{c:.2}" y="{c:.2}" font-size="{fs:.2}" fill="{fill}" text-anchor="middle" dominant-baseline="middle">{id}</text>"#,
            cls = valence_name(frame.target.valence),
            id = escape(&frame.target.concept),
            c = SIZE / 2.0,
            fs = BASE_FONT * frame.target.font_scale,
            fill = node_colour(frame.target.valence),
        );
        s.push_str("</svg>\n");
        return s;
    }

    let lookup = |name: &str| {
        frame
            .node(name)
            .map(position)
            .expect("frame edges reference frame nodes")
    };
    s.push_str("<g class=\"edges\" fill=\"none\">\n");
    let c = SIZE / 2.0;
    for e in &frame.edges {
        let (x1, y1) = lookup(&e.source);
        let (x2, y2) = lookup(&e.target);
        // control point halfway between the chord midpoint and the centre
        let (cx, cy) = (((x1 + x2) / 2.0 + c) / 2.0, ((y1 + y2) / 2.0 + c) / 2.0);
        let _ = writeln!(
            s,
            r#"<path class="edge {cls}" data-class="{cls}" data-source="{a}" data-target="{b}" data-weight="{w}" d="M {x1:.2} {y1:.2} Q {cx:.2} {cy:.2} {x2:.2} {y2:.2}" stroke="{col}" stroke-width="{sw:.2}" stroke-opacity="0.7"/>"#,
            cls = e.class.as_str(),
            a = escape(&e.source),
            b = escape(&e.target),
            w = e.weight,
            col = edge_colour(e.class),
            sw = stroke_width(e.weight),
        );
    }
    s.push_str("</g>\n<g class=\"nodes\">\n");
    for node in std::iter::once(&frame.target).chain(&frame.neighbours) {
        let (x, y) = position(node);
        let anchor = match node.angle {
            None => "middle",
            Some(a) if a == 0.0 || a == 180.0 => "middle",
            Some(a) if a < 180.0 => "start",
            Some(_) => "end",
        };
        let _ = writeln!(
            s,
            r#"<text class="node {cls}" data-node="{id}" data-valence="{v}" x="{x:.2}" y="{y:.2}" font-size="{fs:.2}" fill="{fill}" text-anchor="{anchor}" dominant-baseline="middle">{id}</text>"#,
            cls = valence_name(node.valence),
            id = escape(&node.concept),
            v = node.valence.as_i8(),
            fs = BASE_FONT * node.font_scale,
            fill = node_colour(node.valence),
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn frame_dot(frame: &SemanticFrame) -> String {
    let mut s = String::from("graph frame {\n  layout=circo;\n  node [shape=plaintext];\n");
    for node in std::iter::once(&frame.target).chain(&frame.neighbours) {
        let _ = writeln!(
            s,
            "  {} [fontcolor={}, fontsize={:.2}, valence={}];",
            dot_id(&node.concept),
            node_colour(node.valence),
            BASE_FONT * node.font_scale,
            node.valence.as_i8()
        );
    }
    for e in &frame.edges {
        let _ = writeln!(
            s,
            "  {} -- {} [color={}, class={}, weight={}, penwidth={:.2}];",
            dot_id(&e.source),
            dot_id(&e.target),
            edge_colour(e.class),
            e.class.as_str(),
            e.weight,
            stroke_width(e.weight)
        );
    }
    s.push_str("}\n");
    s
}

/// Diverging fill for r in [−1, 1]: blue for negative, white at 0, red for positive.
fn heat(r: f64) -> String {
    let t = r.clamp(-1.0, 1.0);
    let fade = |x: f64| (255.0 * (1.0 - x)).round() as u8;
    let (red, green, blue) = if t >= 0.0 {
        (255, fade(t), fade(t))
    } else {
        (fade(-t), fade(-t), 255)
    };
    format!("#{red:02x}{green:02x}{blue:02x}")
}

/// Lower-triangle heat map with r values and significance stars.
pub fn correlogram_svg(cg: &Correlogram, labels: impl Fn(&str) -> String) -> String {
    let k = cg.names.len();
    let cell = 70.0;
    let margin = 200.0;
    let size = margin + cell * k as f64 + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, name) in cg.names.iter().enumerate() {
        let y = margin + cell * (i as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            margin - 6.0,
            escape(&labels(name))
        );
        let x = margin + cell * (i as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="start" transform="rotate(-45 {x:.2} {:.2})">{}</text>"#,
            margin - 6.0,
            margin - 6.0,
            escape(&labels(name))
        );
    }
    for i in 0..k {
        for j in 0..=i {
            let c = &cg.cells[i][j];
            let (x, y) = (margin + cell * j as f64, margin + cell * i as f64);
            let (fill, text) = match c.r {
                Some(r) => (heat(r), format!("{r:.2}{}", c.stars)),
                None => ("#cccccc".to_string(), "NA".to_string()),
            };
            let _ = writeln!(
                s,
                r#"<rect class="cell" data-row="{}" data-col="{}" x="{x:.2}" y="{y:.2}" width="{cell}" height="{cell}" fill="{fill}" stroke="white"/>"#,
                escape(&cg.names[i]),
                escape(&cg.names[j])
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" dominant-baseline="middle">{text}</text>"#,
                x + cell / 2.0,
                y + cell / 2.0
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::semantic_frame;
    use crate::network::NetworkBuilder;
    use std::collections::BTreeMap;

    fn frame() -> SemanticFrame {
        let mut b = NetworkBuilder::new();
        for n in ["good", "bad", "meh", "nice", "dull"] {
            b.add_edge("t", n, 2);
        }
        b.add_edge("good", "bad", 1);
        let mut net = b.build();
        let labels: BTreeMap<String, Valence> = [
            ("good", Valence::Positive),
            ("nice", Valence::Positive),
            ("bad", Valence::Negative),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        net.set_labels(&labels);
        semantic_frame(&net, "t").unwrap()
    }

    #[test]
    fn one_purple_edge() {
        let svg = frame_svg(&frame());
        assert_eq!(svg.matches(r#"stroke="purple""#).count(), 1);
        assert_eq!(svg.matches("<path").count(), 6);
        assert_eq!(frame_svg(&frame()), svg);
    }

    #[test]
    fn empty_frame_single_label() {
        let mut b = NetworkBuilder::new();
        b.add_node("lonely");
        let f = semantic_frame(&b.build(), "lonely").unwrap();
        let svg = frame_svg(&f);
        assert_eq!(svg.matches("<text").count(), 1);
        assert!(svg.contains(r#"x="400.00" y="400.00""#));
        assert!(!svg.contains("<path"));
    }

    #[test]
    fn dot_lists_every_edge() {
        let dot = frame_dot(&frame());
        assert_eq!(dot.matches(" -- ").count(), 6);
        assert!(dot.contains("color=purple"));
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn heat_endpoints() {
        assert_eq!(heat(1.0), "#ff0000");
        assert_eq!(heat(-1.0), "#0000ff");
        assert_eq!(heat(0.0), "#ffffff");
    }
}
