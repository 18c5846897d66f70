//! Graphviz renderings with stable ordering.

use std::fmt::Write;

use super::global::build_descent;
use crate::curvetop::glue_curve;
use crate::error::StructureError;
use crate::ribbon::{default_placement, glue_skeletons};
use crate::toricdata::{EdgeKind, StackyFan};

pub fn skeleton_dot(fan: &StackyFan) -> Result<String, StructureError> {
    let curve = glue_curve(fan)?;
    let placement = default_placement(fan, &curve)?;
    Ok(glue_skeletons(&curve, &placement)?.graph.to_dot("skeleton"))
}

/// Triangles as nodes; interior edges join them, boundary edges hang off.
pub fn dual_graph_dot(fan: &StackyFan) -> String {
    let mut out = String::from("graph dual {\n");
    for (t, tri) in fan.triangles().iter().enumerate() {
        writeln!(out, "  t{t} [label=\"{t}: {tri:?}\"];").unwrap();
    }
    for (e, edge) in fan.edges().iter().enumerate() {
        let (a, b) = edge.ends;
        match edge.kind {
            EdgeKind::Interior => {
                writeln!(out, "  t{} -- t{} [label=\"({a},{b})\"];", edge.triangles[0], edge.triangles[1]).unwrap();
            }
            EdgeKind::Boundary => {
                writeln!(out, "  b{e} [shape=point];").unwrap();
                writeln!(out, "  t{} -- b{e} [label=\"({a},{b})\", style=dashed];", edge.triangles[0]).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Cone and edge entries with restriction arrows labeled by how many
/// generators reach the edge.
pub fn descent_dot(fan: &StackyFan) -> Result<String, StructureError> {
    let d = build_descent(fan)?;
    let mut out = String::from("digraph descent {\n");
    for c in &d.cones {
        writeln!(out, "  c{} [shape=box, label=\"cone {} {}\"];", c.triangle, c.triangle, c.params).unwrap();
    }
    for e in &d.edges {
        let (a, b) = e.ends;
        writeln!(out, "  e{} [label=\"({a},{b}) |labels|={}\"];", e.edge, e.labels.len()).unwrap();
    }
    for r in &d.restrictions {
        let live = r.map.iter().filter(|(_, l)| l.is_some()).count();
        writeln!(
            out,
            "  c{} -> e{} [label=\"type {} : {live}/{}\"];",
            r.cone,
            r.edge,
            r.puncture_type + 1,
            r.map.len()
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toricdata::parse_fan;

    #[test]
    fn square_exports() {
        let fan = parse_fan(r#"{"points": [[0,0],[1,0],[1,1],[0,1]], "triangles": [[0,1,2],[0,2,3]]}"#).unwrap();
        let dual = dual_graph_dot(&fan);
        assert_eq!(dual.matches(" -- ").count(), 5);
        assert!(skeleton_dot(&fan).unwrap().starts_with("graph skeleton {"));
        let descent = descent_dot(&fan).unwrap();
        assert_eq!(descent.matches(" -> ").count(), 6);
        assert_eq!(descent, descent_dot(&fan).unwrap());
    }
}
