use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::affine::check_affine;
use super::report::{CheckResult, HmsReport, Topology};
use crate::curvetop::{build_cones, glue_cones, pick_counts, ConeCurve, GlobalCurveModel};
use crate::error::{InputError, StructureError};
use crate::fukaya::circle_hom_series;
use crate::mfside::{ext_chart, generator_set};
use crate::ribbon::{default_placement, glue_skeletons};
use crate::series::{Generator, GradedSeries, Parity};
use crate::toricdata::{
    stacky_picard, AbelianGroup, CokerClass, CokernelModel, EdgeKind, Elem, NormalFormParams, RaySubset, StackyFan,
};

#[derive(Clone, Debug, Serialize)]
pub struct ConeEntry {
    pub triangle: usize,
    pub params: NormalFormParams,
    pub generators: Vec<Generator>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeEntry {
    pub edge: usize,
    pub ends: (usize, usize),
    pub kind: EdgeKind,
    pub cones: Vec<usize>,
    /// Elements of the edge cokernel model, one per boundary circle of the chart.
    pub labels: Vec<CokerClass>,
}

/// Restriction from a cone to one of its edges. Generators supported away
/// from the edge chart restrict to `None`.
#[derive(Clone, Debug, Serialize)]
pub struct Restriction {
    pub cone: usize,
    pub edge: usize,
    pub puncture_type: usize,
    pub map: Vec<(Generator, Option<CokerClass>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentDiagram {
    pub cones: Vec<ConeEntry>,
    pub edges: Vec<EdgeEntry>,
    pub restrictions: Vec<Restriction>,
}

impl DescentDiagram {
    pub fn restrictions_to(&self, edge: usize) -> impl Iterator<Item = &Restriction> {
        self.restrictions.iter().filter(move |r| r.edge == edge)
    }
}

fn edge_models(fan: &StackyFan) -> Result<Vec<CokernelModel>, StructureError> {
    (0..fan.edges().len())
        .map(|e| stacky_picard(fan, RaySubset::Edge(e)))
        .collect()
}

/// `(j, θ)` survives on the chart of puncture type `i` exactly when `j - 1 != i`.
fn restrict(cone: &ConeCurve, edge: usize, model: &CokernelModel, ty: usize) -> Restriction {
    let map = generator_set(&cone.group)
        .into_iter()
        .map(|g| {
            let image = (g.side as usize - 1 != ty).then(|| cone.edge_label(&g.label, model));
            (g, image)
        })
        .collect();
    Restriction {
        cone: cone.triangle,
        edge,
        puncture_type: ty,
        map,
    }
}

/// Whole fan to edge, directly and through each adjacent cone, on basis classes.
fn squares_commute(
    fan: &StackyFan,
    whole: &CokernelModel,
    cones: &[CokernelModel],
    edge: usize,
    model: &CokernelModel,
) -> Result<(), StructureError> {
    let (a, b) = fan.edges()[edge].ends;
    for ray in fan.rays() {
        let class = whole.basis_class(ray).expect("ray of the fan");
        let direct = whole.project(&class, model)?;
        for &t in &fan.edges()[edge].triangles {
            let through = cones[t].project(&whole.project(&class, &cones[t])?, model)?;
            if through != direct {
                return Err(StructureError::ProjectionMismatch(a, b));
            }
        }
    }
    Ok(())
}

fn build_descent_from(fan: &StackyFan, cones: &[ConeCurve]) -> Result<DescentDiagram, StructureError> {
    let whole = stacky_picard(fan, RaySubset::Whole)?;
    let models = edge_models(fan)?;
    let cone_models: Vec<CokernelModel> = cones.iter().map(|c| c.coker.clone()).collect();
    let mut edges = Vec::new();
    let mut restrictions = Vec::new();
    for (e, edge) in fan.edges().iter().enumerate() {
        let model = &models[e];
        let labels = model.elements().expect("edge models are finite");
        let all: BTreeSet<&CokerClass> = labels.iter().collect();
        squares_commute(fan, &whole, &cone_models, e, model)?;
        for &t in &edge.triangles {
            let cone = &cones[t];
            let ty = cone.type_of_edge(edge.ends).expect("edge of its cone");
            let r = restrict(cone, e, model, ty);
            let hit: BTreeSet<&CokerClass> = r.map.iter().filter_map(|(_, l)| l.as_ref()).collect();
            if hit != all {
                return Err(StructureError::ProjectionMismatch(edge.ends.0, edge.ends.1));
            }
            restrictions.push(r);
        }
        edges.push(EdgeEntry {
            edge: e,
            ends: edge.ends,
            kind: edge.kind,
            cones: edge.triangles.clone(),
            labels,
        });
    }
    let cones = cones
        .iter()
        .map(|c| ConeEntry {
            triangle: c.triangle,
            params: c.normal_form.params,
            generators: generator_set(&c.group),
        })
        .collect();
    Ok(DescentDiagram {
        cones,
        edges,
        restrictions,
    })
}

pub fn build_descent(fan: &StackyFan) -> Result<DescentDiagram, StructureError> {
    let cones = build_cones(fan).map_err(|_| StructureError::CharacterLabels(0))?;
    build_descent_from(fan, &cones)
}

fn edge_group(model: &CokernelModel) -> AbelianGroup {
    AbelianGroup::new(model.torsion_factors())
}

fn as_elem(class: &CokerClass) -> Elem {
    Elem(class.torsion.clone())
}

/// Per-route comparison on `G_σ^∨`: Laurent loops on the labeled circles
/// against the chart Ext, under the inverted labeling.
fn route_matches(cone: &ConeCurve, ty: usize, truncation: u32) -> Option<Value> {
    let dual = cone.group.dual();
    let shift = &cone.group.rho[ty];
    let chars = cone.group.characters();
    for a in &chars {
        for b in &chars {
            let lhs = circle_hom_series(dual, shift, a, b, truncation);
            let rhs = ext_chart(dual, shift, &cone.group.inv(a), &cone.group.inv(b), truncation);
            if let Some(m) = lhs.first_mismatch(&rhs) {
                return Some(json!({
                    "cone": cone.triangle,
                    "source": a.to_string(),
                    "target": b.to_string(),
                    "parity": m.parity,
                    "weight": m.weight,
                    "values": [m.left, m.right],
                }));
            }
        }
    }
    None
}

/// Circle-to-circle series in units of one full turn around the puncture.
fn coarse_table(cone: &ConeCurve, ty: usize, model: &CokernelModel, fine: u32, coarse: u32) -> BTreeMap<(CokerClass, CokerClass), GradedSeries> {
    let dual = cone.group.dual();
    let shift = &cone.group.rho[ty];
    let turn = dual.element_order(shift) as i64;
    let mut circles: BTreeMap<CokerClass, Vec<Elem>> = BTreeMap::new();
    for theta in cone.group.characters() {
        circles.entry(cone.edge_label(&theta, model)).or_default().push(theta);
    }
    let mut out = BTreeMap::new();
    for (l, members) in &circles {
        let rep = &members[0];
        for (l2, members2) in &circles {
            let mut sum = GradedSeries::zero(fine);
            for t2 in members2 {
                sum.accumulate(&circle_hom_series(dual, shift, rep, t2, fine));
            }
            let mut c = GradedSeries::zero(coarse);
            for k in c.weights() {
                for parity in [Parity::Even, Parity::Odd] {
                    c.add(parity, k, sum.get(parity, k * turn));
                }
            }
            out.insert((l.clone(), l2.clone()), c);
        }
    }
    out
}

fn check_edge(
    fan: &StackyFan,
    curve: &GlobalCurveModel,
    model: &CokernelModel,
    edge: usize,
    truncation: u32,
) -> Option<Value> {
    let (a, b) = fan.edges()[edge].ends;
    let sides: Vec<(&ConeCurve, usize)> = fan.edges()[edge]
        .triangles
        .iter()
        .map(|&t| {
            let cone = &curve.cones[t];
            (cone, cone.type_of_edge((a, b)).expect("edge of its cone"))
        })
        .collect();
    for &(cone, ty) in &sides {
        if let Some(w) = route_matches(cone, ty, truncation) {
            return Some(json!({"edge": [a, b], "route": w}));
        }
    }
    let turn = sides
        .iter()
        .map(|(c, ty)| c.group.dual().element_order(&c.group.rho[*ty]))
        .max()
        .unwrap_or(1);
    let coarse = truncation / turn as u32;
    let tables: Vec<_> = sides
        .iter()
        .map(|&(cone, ty)| coarse_table(cone, ty, model, truncation, coarse))
        .collect();
    let group = edge_group(model);
    let zero = group.identity();
    for ((l, l2), series) in &tables[0] {
        let chart = ext_chart(&group, &zero, &as_elem(l), &as_elem(l2), coarse);
        let other = tables.get(1).and_then(|t| t.get(&(l.clone(), l2.clone())));
        let found = match other {
            Some(o) => series.first_mismatch(o).map(|m| ("routes", m)),
            None if tables.len() > 1 => {
                return Some(json!({"edge": [a, b], "missing_label": [l, l2]}));
            }
            None => None,
        }
        .or_else(|| series.first_mismatch(&chart).map(|m| ("chart", m)));
        if let Some((what, m)) = found {
            return Some(json!({
                "edge": [a, b],
                "compare": what,
                "labels": [l, l2],
                "parity": m.parity,
                "weight": m.weight,
                "values": [m.left, m.right],
            }));
        }
    }
    None
}

/// Every three cones share at most one ray, so triple chart overlaps have
/// at least two invertible coordinates.
fn triple_overlaps(fan: &StackyFan) -> Option<Value> {
    let tris = fan.triangles();
    for i in 0..tris.len() {
        for j in i + 1..tris.len() {
            for k in j + 1..tris.len() {
                let shared: Vec<usize> = tris[i]
                    .iter()
                    .filter(|p| tris[j].contains(p) && tris[k].contains(p))
                    .copied()
                    .collect();
                if shared.len() > 1 {
                    return Some(json!({"triangles": [i, j, k], "shared_rays": shared}));
                }
            }
        }
    }
    None
}

fn pick_topology(fan: &StackyFan) -> Topology {
    let (g, b) = pick_counts(fan.hull()).expect("hull of a valid fan");
    Topology {
        genus: g,
        punctures: b,
        chi: 2 - 2 * g as i64 - b as i64,
    }
}

fn curve_topology(curve: &GlobalCurveModel) -> Topology {
    Topology {
        genus: curve.genus,
        punctures: curve.punctures,
        chi: curve.chi,
    }
}

/// All global sub-checks plus the topology they certify. Topology falls back
/// to lattice-point counts when the curve cannot be glued.
pub fn check_global(fan: &StackyFan, truncation: u32) -> (Vec<CheckResult>, Topology) {
    let mut checks = Vec::new();
    let cones = match build_cones(fan) {
        Ok(c) => c,
        Err(e) => {
            checks.push(CheckResult::fail("cones", json!({"error": e.to_string()})));
            return (checks, pick_topology(fan));
        }
    };

    let per_cone: Vec<CheckResult> = cones
        .par_iter()
        .map(|cone| {
            let params = cone.normal_form.params;
            let sub = check_affine(params, truncation);
            let total = sub.len();
            let failed: Vec<Value> = sub
                .into_iter()
                .filter(|c| !c.passed())
                .map(|c| json!({"check": c.name, "counterexample": c.counterexample}))
                .collect();
            CheckResult::from_witness(
                format!("cone {} {params}: affine suite ({total} checks)", cone.triangle),
                (!failed.is_empty()).then(|| json!({"failed": failed})),
            )
        })
        .collect();
    checks.extend(per_cone);

    let descent = build_descent_from(fan, &cones);
    checks.push(CheckResult::from_witness(
        format!("descent: {} edges, squares commute", fan.edges().len()),
        descent.as_ref().err().map(|e| json!({"error": e.to_string()})),
    ));

    let curve = match glue_cones(fan, cones) {
        Ok(c) => c,
        Err(e) => {
            checks.push(CheckResult::fail("curve gluing", json!({"error": e.to_string()})));
            return (checks, pick_topology(fan));
        }
    };

    let models = match edge_models(fan) {
        Ok(m) => m,
        Err(e) => {
            checks.push(CheckResult::fail("edge models", json!({"error": e.to_string()})));
            return (checks, curve_topology(&curve));
        }
    };
    let interior: Vec<usize> = fan.interior_edges().map(|(e, _)| e).collect();
    let edge_checks: Vec<CheckResult> = interior
        .par_iter()
        .map(|&e| {
            let (a, b) = fan.edges()[e].ends;
            CheckResult::from_witness(
                format!("edge ({a},{b}): circle series match chart, both routes"),
                check_edge(fan, &curve, &models[e], e, truncation),
            )
        })
        .collect();
    checks.extend(edge_checks);

    let skeleton = default_placement(fan, &curve).and_then(|p| glue_skeletons(&curve, &p));
    let expected = 2 - 2 * curve.genus as i64 - curve.punctures as i64;
    let skeleton_witness = match &skeleton {
        Err(e) => Some(json!({"error": e.to_string()})),
        Ok(s) => {
            let chi = s.graph.euler_characteristic();
            let bad_sites: Vec<usize> = s.sites.iter().filter(|x| !x.pattern_ok).map(|x| x.edge).collect();
            (chi != expected || !curve.matches_pick() || !bad_sites.is_empty() || !s.graph.validate()).then(|| {
                json!({
                    "skeleton_chi": chi,
                    "expected": expected,
                    "curve": [curve.genus, curve.punctures],
                    "pick": [curve.pick.0, curve.pick.1],
                    "bad_sites": bad_sites,
                })
            })
        }
    };
    checks.push(CheckResult::from_witness(
        format!("glued skeleton: chi = 2-2g-b = {expected}"),
        skeleton_witness,
    ));

    checks.push(CheckResult::from_witness("triple overlaps share at most one ray", triple_overlaps(fan)));
    (checks, curve_topology(&curve))
}

pub fn global_report(fan: &StackyFan, truncation: u32, input: Value) -> HmsReport {
    let (checks, topology) = check_global(fan, truncation);
    HmsReport::new(input, checks, topology)
}

fn sorted_hull(fan: &StackyFan) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = fan.hull().iter().map(|p| (p.x, p.y)).collect();
    v.sort();
    v
}

/// Puncture count over each side of the hull, summed from boundary edges.
pub fn side_punctures(fan: &StackyFan, curve: &GlobalCurveModel) -> Vec<u64> {
    let hull = fan.hull();
    let n = hull.len();
    let mut totals = vec![0u64; n];
    for (_, edge) in fan.boundary_edges() {
        let (p, q) = (fan.point(edge.ends.0), fan.point(edge.ends.1));
        let side = (0..n)
            .find(|&k| {
                let (a, b) = (hull[k], hull[(k + 1) % n]);
                crate::toricdata::fan::orient(a, b, p) == 0 && crate::toricdata::fan::orient(a, b, q) == 0
            })
            .expect("boundary edges lie on the hull");
        let t = edge.triangles[0];
        let cone = &curve.cones[t];
        let ty = cone.type_of_edge(edge.ends).expect("edge of its cone");
        totals[side] += cone.curve.punctures[ty];
    }
    totals
}

/// Compares two triangulations of one polygon.
pub fn crepant_compare(a: &StackyFan, b: &StackyFan, truncation: u32) -> Result<(Vec<CheckResult>, Topology), InputError> {
    let (ha, hb) = (sorted_hull(a), sorted_hull(b));
    if ha != hb {
        return Err(InputError::PolygonMismatch(format!("{ha:?} vs {hb:?}")));
    }
    let (checks_a, top_a) = check_global(a, truncation);
    let (checks_b, top_b) = check_global(b, truncation);
    let mut checks = Vec::new();
    checks.push(CheckResult::from_witness(
        "crepant: equal genus, punctures, chi",
        (top_a != top_b).then(|| json!({"first": top_a, "second": top_b})),
    ));
    let sides = |f: &StackyFan| glue_curve_sides(f);
    let (sa, sb) = (sides(a), sides(b));
    checks.push(CheckResult::from_witness(
        "crepant: punctures per hull side",
        (sa.is_none() || sa != sb).then(|| json!({"first": sa, "second": sb})),
    ));
    checks.extend(checks_a.into_iter().map(|c| prefixed("first", c)));
    checks.extend(checks_b.into_iter().map(|c| prefixed("second", c)));
    Ok((checks, top_a))
}

fn glue_curve_sides(fan: &StackyFan) -> Option<Vec<u64>> {
    let curve = crate::curvetop::glue_curve(fan).ok()?;
    Some(side_punctures(fan, &curve))
}

fn prefixed(tag: &str, mut c: CheckResult) -> CheckResult {
    c.name = format!("{tag}: {}", c.name);
    c
}

pub fn crepant_report(a: &StackyFan, b: &StackyFan, truncation: u32, input: Value) -> Result<HmsReport, InputError> {
    let (checks, topology) = crepant_compare(a, b, truncation)?;
    Ok(HmsReport::new(input, checks, topology))
}
