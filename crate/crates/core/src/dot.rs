//! Graphviz renderings of cartoons, orthant colorings, trees and labels.

use std::fmt::Write;

use crate::birkhoff_positivity::{Cartoon, OrthantColoring};
use crate::label_graphs::{bipartite_complement, BipartiteLabel};
use crate::tree_space::BicoloredTree;

/// `K_n` with one midpoint node per edge mark and a count on marked nodes.
pub fn cartoon_dot(c: &Cartoon) -> String {
    let mut s = String::from("graph cartoon {\n  layout=circo;\n");
    for v in 0..c.n {
        let marks = c.node_marks.iter().filter(|&&x| x == v).count();
        let label = if marks > 0 { format!("v{} ({marks})", v + 1) } else { format!("v{}", v + 1) };
        let style = if marks > 0 { ", style=filled, fillcolor=gray80" } else { "" };
        let _ = writeln!(s, "  v{} [label=\"{label}\"{style}];", v + 1);
    }
    for a in 0..c.n {
        for b in a + 1..c.n {
            let marks = c.edge_marks.iter().filter(|&&e| e == (a, b)).count();
            if marks == 0 {
                let _ = writeln!(s, "  v{} -- v{} [color=gray70];", a + 1, b + 1);
                continue;
            }
            let mid = format!("m{}_{}", a + 1, b + 1);
            let _ = writeln!(s, "  {mid} [shape=point, xlabel=\"{marks}\"];");
            let _ = writeln!(s, "  v{} -- {mid} -- v{} [penwidth=2];", a + 1, b + 1);
        }
    }
    s.push_str("}\n");
    s
}

/// Birkhoff graph with green and red edges; vertices in cycle notation.
pub fn orthant_dot(oc: &OrthantColoring) -> String {
    let mut s = String::from("graph orthants {\n");
    for (k, p) in oc.vertices.iter().enumerate() {
        let shape = if p.is_even() { "circle" } else { "box" };
        let _ = writeln!(s, "  p{k} [label=\"{p}\", shape={shape}];");
    }
    for &(a, b) in &oc.green_edges {
        let _ = writeln!(s, "  p{a} -- p{b} [color=green];");
    }
    for &(a, b) in &oc.red_edges {
        let _ = writeln!(s, "  p{a} -- p{b} [color=red];");
    }
    s.push_str("}\n");
    s
}

/// Internal nodes as points, red and green leaves, internal edges with weights.
pub fn tree_dot(t: &BicoloredTree) -> String {
    let names = t.names();
    let g = t.as_phylo().graph();
    let mut s = String::from("graph tree {\n");
    for v in 0..g.node_count() {
        let _ = writeln!(s, "  n{v} [shape=point];");
    }
    for leaf in 0..t.d + t.n {
        let color = if leaf < t.d { "red" } else { "green" };
        let _ = writeln!(s, "  {} [color={color}, fontcolor={color}];", names.name(leaf));
    }
    for (k, &(child, parent)) in g.internal_edges.iter().enumerate() {
        let w = t.splits[&g.splits[k]];
        let _ = writeln!(s, "  n{child} -- n{parent} [label=\"{w}\"];");
    }
    for &(leaf, node) in &g.leaf_edges {
        let _ = writeln!(s, "  {} -- n{node};", names.name(leaf));
    }
    s.push_str("}\n");
    s
}

/// Label edges in black, complement edges dashed red.
pub fn label_dot(g: &BipartiteLabel) -> String {
    let mut s = String::from("graph label {\n  rankdir=LR;\n");
    for i in 0..g.d {
        let _ = writeln!(s, "  r{} [color=red, shape=circle];", i + 1);
    }
    for j in 0..g.n {
        let _ = writeln!(s, "  g{} [color=green, shape=box];", j + 1);
    }
    for &(i, j) in &g.edges {
        let _ = writeln!(s, "  r{} -- g{};", i + 1, j + 1);
    }
    for &(i, j) in &bipartite_complement(g).edges {
        let _ = writeln!(s, "  r{} -- g{} [color=red, style=dashed];", i + 1, j + 1);
    }
    s.push_str("}\n");
    s
}
