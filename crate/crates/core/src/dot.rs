//! Graphviz export. Nodes of equal Busemann value share a rank, so the
//! drawing runs from the end fixed by the unipotents downwards.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::algebra::Place;
use crate::complex::{Cell, Chain};
use crate::error::Result;
use crate::tree::{bfs_ball, busemann, TreeEdge, TreeVertex};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render(name: &str, nodes: &BTreeSet<TreeVertex>, edges: &BTreeSet<TreeEdge>, bold: Option<&TreeVertex>) -> String {
    let ids: BTreeMap<&TreeVertex, usize> = nodes.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut ranks: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut out = format!("graph {name} {{\n  rankdir=BT;\n  node [shape=ellipse, fontsize=10];\n");
    for (v, &i) in &ids {
        let style = if bold == Some(*v) { ", style=bold" } else { "" };
        let _ = writeln!(out, "  v{i} [label=\"{}\"{style}];", escape(&v.to_string()));
        ranks.entry(busemann(v)).or_default().push(format!("v{i};"));
    }
    for e in edges {
        let _ = writeln!(out, "  v{} -- v{};", ids[e.lo()], ids[e.hi()]);
    }
    for (beta, members) in &ranks {
        let _ = writeln!(out, "  subgraph beta_{} {{ rank=same; {} }}", beta.to_string().replace('-', "m"), members.join(" "));
    }
    out.push_str("}\n");
    out
}

/// The ball of the given radius around `center`. Needs a finite field.
pub fn ball_dot(center: &TreeVertex, radius: u64) -> Result<String> {
    let nodes: BTreeSet<TreeVertex> = bfs_ball(center, radius)?.into_keys().collect();
    let edges = nodes.iter().filter(|v| nodes.contains(&v.parent())).map(TreeEdge::up_from).collect();
    Ok(render("ball", &nodes, &edges, Some(center)))
}

fn factor(cell: &Cell, at: Place) -> (Option<&TreeVertex>, Option<&TreeEdge>) {
    match (cell, at) {
        (Cell::Vertex(p), Place::Infinity) => (Some(p.inf()), None),
        (Cell::Vertex(p), Place::Zero) => (Some(p.zero()), None),
        (Cell::EdgeInf { edge, .. }, Place::Infinity) | (Cell::EdgeZero { edge, .. }, Place::Zero) => (None, Some(edge)),
        (Cell::EdgeInf { zero, .. }, Place::Zero) => (Some(zero), None),
        (Cell::EdgeZero { inf, .. }, Place::Infinity) => (Some(inf), None),
        (Cell::Square { inf, .. }, Place::Infinity) => (None, Some(inf)),
        (Cell::Square { zero, .. }, Place::Zero) => (None, Some(zero)),
    }
}

/// The support of a chain projected to the tree at `at`: every vertex and
/// edge occurring as the factor there of some cell.
pub fn chain_dot(c: &Chain, at: Place) -> String {
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for (cell, _) in c.iter() {
        match factor(cell, at) {
            (Some(v), _) => {
                nodes.insert(v.clone());
            }
            (_, Some(e)) => {
                nodes.insert(e.lo().clone());
                nodes.insert(e.hi().clone());
                edges.insert(e.clone());
            }
            (None, None) => unreachable!(),
        }
    }
    render("support", &nodes, &edges, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::complex::{square_b, TriangleVariant};

    #[test]
    fn ball_has_one_three_six_nodes() {
        let f2 = Field::prime(2).unwrap();
        let dot = ball_dot(&TreeVertex::base(Place::Zero, f2), 2).unwrap();
        assert_eq!(dot.matches("[label=").count(), 10);
        assert_eq!(dot.matches(" -- ").count(), 9);
        assert!(dot.starts_with("graph ball {"));
    }

    #[test]
    fn ball_over_rationals_is_refused() {
        assert!(ball_dot(&TreeVertex::base(Place::Zero, Field::Rationals), 1).is_err());
    }

    #[test]
    fn chain_projection() {
        let b = square_b(1, TriangleVariant::CornerAtX2n, Field::Rationals);
        let dot = chain_dot(&b, Place::Zero);
        assert!(dot.contains("rank=same"));
        let edges = dot.matches(" -- ").count();
        assert_eq!(dot.matches("[label=").count(), edges + 1, "projection of a connected support is a tree");
    }
}
