//! Graphviz export. Write-only: the sidecar JSON is the re-readable form.

use std::fmt::Write;

use wlpa_core::{RepresentationGraph, WeightedGraph};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_dot(g: &WeightedGraph) -> String {
    let mut out = String::from("digraph E {\n");
    for v in g.vertex_ids() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for (k, e) in g.edges().iter().enumerate() {
        let label = if e.weight == 1 { e.id.clone() } else { format!("{} ({})", e.id, e.weight) };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, color={}];",
            quote(g.vertex_id(e.src)),
            quote(g.vertex_id(e.dst)),
            quote(&label),
            quote(PALETTE[k % PALETTE.len()])
        );
    }
    out.push_str("}\n");
    out
}

/// Edges are coloured by structure edge and labelled by tag; frontier
/// vertices are dashed.
pub fn rep_dot(f: &RepresentationGraph) -> String {
    let g = f.base();
    let mut out = String::from("digraph F {\n");
    for u in 0..f.vertex_count() {
        let style = if f.is_frontier(u) { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  {} [xlabel={}{}];",
            quote(f.vertex_id(u)),
            quote(g.vertex_id(f.image(u))),
            style
        );
    }
    for e in f.edges() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, color={}];",
            quote(f.vertex_id(e.src)),
            quote(f.vertex_id(e.dst)),
            quote(&e.image.tag.to_string()),
            quote(PALETTE[e.image.edge % PALETTE.len()])
        );
    }
    out.push_str("}\n");
    out
}
