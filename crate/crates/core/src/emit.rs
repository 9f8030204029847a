//! Text renderings of a result: JSON report, Graphviz DOT and SVG. All three
//! are deterministic functions of their input.

use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{to_f64, Rational};
use crate::error::Result;
use crate::report::TopologyReport;
use crate::topology::TopoGraph;

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(report: &TopologyReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Vertex positions in the original coordinates: the sweep ran on
/// `g(x + t·y, y)`, so a point `(x', y)` of the graph is `(x' + t·y, y)`.
fn original_positions(graph: &TopoGraph, shear: &Rational) -> Vec<(f64, f64)> {
    let t = to_f64(shear);
    graph.vertices.iter().map(|v| (v.x + t * v.y, v.y)).collect()
}

/// Undirected DOT graph. Vertices are named `v<fiber>_<rank>` (0-based) and
/// pinned at their coordinates; critical vertices are red.
pub fn to_dot(graph: &TopoGraph, shear: &Rational) -> String {
    let pos = original_positions(graph, shear);
    let mut s = String::from("graph curveseg {\n  node [shape=point];\n");
    for (v, (x, y)) in graph.vertices.iter().zip(&pos) {
        let color = if v.critical { ", color=red" } else { "" };
        writeln!(s, "  v{}_{} [pos=\"{x:.6},{y:.6}!\"{color}];", v.fiber, v.rank).unwrap();
    }
    for ((a, b), (c, d)) in &graph.edges {
        writeln!(s, "  v{a}_{b} -- v{c}_{d};").unwrap();
    }
    s.push_str("}\n");
    s
}

const CANVAS: f64 = 800.0;

/// SVG drawing of the graph as straight segments, with a 5% margin around
/// the vertices. Critical vertices are red, the others black.
pub fn to_svg(graph: &TopoGraph, shear: &Rational) -> String {
    let pos = original_positions(graph, shear);
    let mut s = String::new();
    if pos.is_empty() {
        writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\"></svg>"
        )
        .unwrap();
        return s;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pos {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.05 * span;
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let scale = CANVAS / (x1 - x0).max(y1 - y0);
    let (w, h) = ((x1 - x0) * scale, (y1 - y0) * scale);
    let px = |x: f64| (x - x0) * scale;
    let py = |y: f64| (y1 - y) * scale;
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    )
    .unwrap();
    let index: std::collections::HashMap<(usize, usize), usize> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(k, v)| ((v.fiber, v.rank), k))
        .collect();
    s.push_str("<g stroke=\"black\" stroke-width=\"1.5\">\n");
    for (a, b) in &graph.edges {
        let (p, q) = (pos[index[a]], pos[index[b]]);
        writeln!(
            s,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
            px(p.0),
            py(p.1),
            px(q.0),
            py(q.1)
        )
        .unwrap();
    }
    s.push_str("</g>\n");
    for (v, &(x, y)) in graph.vertices.iter().zip(&pos) {
        let (r, fill) = if v.critical { (4.0, "red") } else { (2.5, "black") };
        writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{r}\" fill=\"{fill}\"/>",
            px(x),
            py(y)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}
