use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::graph::RibbonGraph;
use super::wheel::make_wheel;
use crate::curvetop::{affine_curve, GlobalCurveModel, MonodromyData};
use crate::error::StructureError;
use crate::toricdata::group::sequence_data;
use crate::toricdata::{Character, CokerClass, StackyFan, StructureGroup};

/// One boundary circle of a lifted skeleton.
#[derive(Clone, Debug)]
pub struct SkeletonCircle {
    /// Index (0-based) of the puncture type the circle surrounds.
    pub puncture_type: usize,
    /// Interval labels in circle order: `θ, θ·shift, …`.
    pub labels: Vec<Character>,
    /// Vertices in circle order.
    pub vertices: Vec<usize>,
    /// At each vertex, the half-edge that leaves the circle.
    pub spokes: Vec<usize>,
}

/// Lift of a dumbbell to the `G^∨`-cover, with circles at two puncture types.
#[derive(Clone, Debug)]
pub struct LabeledSkeleton {
    pub graph: RibbonGraph,
    /// Puncture types carrying the two circle families.
    pub sides: [usize; 2],
    pub shifts: [Character; 2],
    /// `attach[c][k]`: vertex where segment `θ_k` meets side `c`.
    pub attach: [Vec<usize>; 2],
    /// `intervals[c][k]`: half-edge at the end of interval `(c, θ_k)`.
    pub intervals: [Vec<usize>; 2],
    /// Segment `θ_k`, as its half-edge on side 0.
    pub segments: Vec<usize>,
    pub circles: Vec<SkeletonCircle>,
    pub base_label: Character,
}

impl LabeledSkeleton {
    /// Circle on side `c` containing the interval labeled `theta`.
    pub fn circle_of(&self, c: usize, theta: &Character) -> usize {
        self.circles
            .iter()
            .position(|circ| circ.puncture_type == self.sides[c] && circ.labels.contains(theta))
            .expect("every label lies on a circle")
    }

    /// Orbit structure, segment count, and Euler characteristic against the
    /// curve of the same cone.
    pub fn verify(&self, group: &StructureGroup) -> Result<(), StructureError> {
        let data = sequence_data(group.params);
        for (c, &t) in self.sides.iter().enumerate() {
            let sizes: Vec<usize> = self
                .circles
                .iter()
                .filter(|circ| circ.puncture_type == t)
                .map(|circ| circ.labels.len())
                .collect();
            let (m, r) = data[t];
            if sizes.len() as u64 != m || sizes.iter().any(|&s| s as u64 != r) {
                return Err(StructureError::OrbitMismatch {
                    side: c + 1,
                    expected_count: m,
                    expected_size: r,
                    found: sizes,
                });
            }
        }
        let curve = affine_curve(group.params);
        assert_eq!(self.segments.len() as u64, group.order());
        assert_eq!(self.graph.euler_characteristic(), curve.chi());
        Ok(())
    }
}

/// Lifted dumbbell with circle shifts `rho_{sides[0]}`, `rho_{sides[1]}`.
pub fn affine_skeleton_at(group: &StructureGroup, sides: [usize; 2]) -> Result<LabeledSkeleton, StructureError> {
    assert!(sides[0] < 3 && sides[1] < 3 && sides[0] != sides[1]);
    let dual = group.dual();
    let chars = group.characters();
    let n = chars.len();
    let shifts = sides.map(|t| group.rho[t].clone());
    let mut graph = RibbonGraph::new();
    let attach: [Vec<usize>; 2] = [0, 1].map(|c| {
        chars
            .iter()
            .map(|theta| graph.add_vertex(format!("({},{})", sides[c] + 1, theta)))
            .collect()
    });

    let mut arc_in = [vec![0; n], vec![0; n]];
    let mut arc_out = [vec![0; n], vec![0; n]];
    let mut circles = Vec::new();
    for c in 0..2 {
        for orbit in dual.orbits(&shifts[c]) {
            let idx: Vec<usize> = orbit.iter().map(|t| dual.index_of(t)).collect();
            let len = idx.len();
            for k in 0..len {
                let prev = idx[(k + len - 1) % len];
                let (out, inc) = graph.add_edge(attach[c][prev], attach[c][idx[k]]);
                arc_out[c][prev] = out;
                arc_in[c][idx[k]] = inc;
            }
            circles.push(SkeletonCircle {
                puncture_type: sides[c],
                vertices: idx.iter().map(|&k| attach[c][k]).collect(),
                labels: orbit,
                spokes: Vec::new(),
            });
        }
    }
    let mut segments = Vec::with_capacity(n);
    let mut seg_ends = [vec![0; n], vec![0; n]];
    for k in 0..n {
        let (a, b) = graph.add_edge(attach[0][k], attach[1][k]);
        seg_ends[0][k] = a;
        seg_ends[1][k] = b;
        segments.push(a);
    }
    for c in 0..2 {
        for k in 0..n {
            graph.set_rotation(attach[c][k], vec![arc_in[c][k], seg_ends[c][k], arc_out[c][k]]);
        }
    }
    for circ in circles.iter_mut() {
        let c = sides.iter().position(|&t| t == circ.puncture_type).unwrap();
        circ.spokes = circ.labels.iter().map(|t| seg_ends[c][dual.index_of(t)]).collect();
    }

    let skel = LabeledSkeleton {
        graph,
        sides,
        shifts,
        attach,
        intervals: arc_in,
        segments,
        circles,
        base_label: dual.identity(),
    };
    skel.verify(group)?;
    Ok(skel)
}

/// Lifted dumbbell with circles at the first two puncture types, checked
/// against the deck monodromy.
pub fn affine_skeleton(group: &StructureGroup, monodromy: &MonodromyData) -> Result<LabeledSkeleton, StructureError> {
    let skel = affine_skeleton_at(group, [0, 1])?;
    let partition = |orbits: &[Vec<Character>]| -> BTreeSet<BTreeSet<Character>> {
        orbits.iter().map(|o| o.iter().cloned().collect()).collect()
    };
    for (c, orbits) in [&monodromy.x_orbits, &monodromy.y_orbits].into_iter().enumerate() {
        let circles: Vec<Vec<Character>> = skel
            .circles
            .iter()
            .filter(|circ| circ.puncture_type == c)
            .map(|circ| circ.labels.clone())
            .collect();
        if partition(orbits) != partition(&circles) {
            let (m, r) = sequence_data(group.params)[c];
            return Err(StructureError::OrbitMismatch {
                side: c + 1,
                expected_count: m,
                expected_size: r,
                found: orbits.iter().map(|o| o.len()).collect(),
            });
        }
    }
    Ok(skel)
}

/// Lifted theta graph: circles at all three puncture types, pairwise
/// sharing edges. Only its combinatorics are used.
#[derive(Clone, Debug)]
pub struct ThetaSkeleton {
    pub graph: RibbonGraph,
    pub circles: Vec<SkeletonCircle>,
}

pub fn theta_skeleton(group: &StructureGroup) -> ThetaSkeleton {
    let dual = group.dual();
    let chars = group.characters();
    let n = chars.len();
    // Edge k joins A_θ to B_{θ·c_k}; the face between edges k+1 and k+2
    // then has monodromy rho_k.
    let c = [dual.identity(), group.inv(&group.rho[2]), group.rho[1].clone()];
    let mut graph = RibbonGraph::new();
    let a: Vec<usize> = chars.iter().map(|t| graph.add_vertex(format!("A{t}"))).collect();
    let b: Vec<usize> = chars.iter().map(|t| graph.add_vertex(format!("B{t}"))).collect();
    let mut at_a = vec![[0usize; 3]; n];
    let mut at_b = vec![[0usize; 3]; n];
    for k in 0..3 {
        for (i, theta) in chars.iter().enumerate() {
            let j = dual.index_of(&group.mul(theta, &c[k]));
            let (x, y) = graph.add_edge(a[i], b[j]);
            at_a[i][k] = x;
            at_b[j][k] = y;
        }
    }
    for i in 0..n {
        graph.set_rotation(a[i], at_a[i].to_vec());
        graph.set_rotation(b[i], vec![at_b[i][2], at_b[i][1], at_b[i][0]]);
    }
    let mut circles = Vec::new();
    for t in 0..3 {
        let (e1, e2, third) = ((t + 1) % 3, (t + 2) % 3, t);
        for orbit in dual.orbits(&group.rho[t]) {
            let mut vertices = Vec::new();
            let mut spokes = Vec::new();
            for theta in &orbit {
                let i = dual.index_of(theta);
                let j = dual.index_of(&group.mul(theta, &c[e1]));
                debug_assert_eq!(
                    group.mul(&group.mul(theta, &c[e1]), &group.inv(&c[e2])),
                    group.mul(theta, &group.rho[t])
                );
                vertices.extend([a[i], b[j]]);
                spokes.extend([at_a[i][third], at_b[j][third]]);
            }
            circles.push(SkeletonCircle {
                puncture_type: t,
                labels: orbit,
                vertices,
                spokes,
            });
        }
    }
    ThetaSkeleton { graph, circles }
}

/// One identified pair of circles over an interior edge.
#[derive(Clone, Debug, Serialize)]
pub struct GluingSite {
    pub edge: usize,
    pub label: CokerClass,
    /// `(triangle, puncture type)` for the upward and downward sides.
    pub cones: [(usize, usize); 2],
    pub n1: usize,
    pub n2: usize,
    /// Vertices of the glued circle: `n1` upward, then `n2` downward.
    pub vertices: Vec<usize>,
    /// Spoke counts and Euler characteristic match `Γ(n1, n2)`, and each
    /// side's spokes times its circle count is its group order.
    pub pattern_ok: bool,
}

#[derive(Clone, Debug)]
pub struct GlobalSkeleton {
    pub graph: RibbonGraph,
    /// Circle sides chosen for each cone.
    pub placement: Vec<[usize; 2]>,
    pub sites: Vec<GluingSite>,
}

/// Per cone, two puncture types covering its interior edges.
pub fn default_placement(fan: &StackyFan, curve: &GlobalCurveModel) -> Result<Vec<[usize; 2]>, StructureError> {
    curve
        .cones
        .iter()
        .map(|cone| {
            let mut types: BTreeSet<usize> = fan
                .interior_edges()
                .filter(|(_, e)| e.triangles.contains(&cone.triangle))
                .map(|(_, e)| cone.type_of_edge(e.ends).expect("edge of its cone"))
                .collect();
            if types.len() > 2 {
                return Err(StructureError::UncoverablePlacement {
                    cone: cone.triangle,
                    interior: types.len(),
                    exposed: 2,
                });
            }
            let mut fill = 0;
            while types.len() < 2 {
                types.insert(fill);
                fill += 1;
            }
            let v: Vec<usize> = types.into_iter().collect();
            Ok([v[0], v[1]])
        })
        .collect()
}

pub fn glue_skeletons(
    curve: &GlobalCurveModel,
    placement: &[[usize; 2]],
) -> Result<GlobalSkeleton, StructureError> {
    let skeletons: Vec<LabeledSkeleton> = curve
        .cones
        .iter()
        .zip(placement)
        .map(|(cone, &sides)| affine_skeleton_at(&cone.group, sides))
        .collect::<Result<_, _>>()?;

    // (cone, circle) -> (site, half)
    let mut glued: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut pending = Vec::new();
    for ident in &curve.identifications {
        let (a, b) = ident.ends;
        for (label, rep0, rep1) in &ident.circles {
            let mut circ = [0usize; 2];
            for half in 0..2 {
                let (t, ty) = ident.cones[half];
                let skel = &skeletons[t];
                let c = skel.sides.iter().position(|&s| s == ty).ok_or(
                    StructureError::UncoverablePlacement {
                        cone: t,
                        interior: 3,
                        exposed: 2,
                    },
                )?;
                let rep = [rep0, rep1][half];
                let theta = &curve.cones[t].group.characters()[*rep];
                circ[half] = skel.circle_of(c, theta);
                if glued.insert((t, circ[half]), (pending.len(), half)).is_some() {
                    return Err(StructureError::LabelMismatch(a, b));
                }
            }
            pending.push((ident.edge, label.clone(), ident.cones, circ));
        }
    }

    let mut graph = RibbonGraph::new();
    // Global vertex for each local vertex, per cone.
    let mut vmap: Vec<Vec<usize>> = Vec::new();
    for (t, skel) in skeletons.iter().enumerate() {
        vmap.push(
            (0..skel.graph.num_vertices())
                .map(|v| graph.add_vertex(format!("c{t}:{}", skel.graph.label(v))))
                .collect(),
        );
    }
    let nv = graph.num_vertices();
    let (mut arc_in, mut arc_out, mut seg) = (vec![0; nv], vec![0; nv], vec![0; nv]);
    let mut downward = vec![false; nv];
    let add_cycle = |graph: &mut RibbonGraph, verts: &[usize], arc_in: &mut [usize], arc_out: &mut [usize]| {
        let len = verts.len();
        for k in 0..len {
            let prev = verts[(k + len - 1) % len];
            let (out, inc) = graph.add_edge(prev, verts[k]);
            arc_out[prev] = out;
            arc_in[verts[k]] = inc;
        }
    };
    for (t, skel) in skeletons.iter().enumerate() {
        for (ci, circ) in skel.circles.iter().enumerate() {
            if !glued.contains_key(&(t, ci)) {
                let verts: Vec<usize> = circ.vertices.iter().map(|&v| vmap[t][v]).collect();
                add_cycle(&mut graph, &verts, &mut arc_in, &mut arc_out);
            }
        }
    }
    let mut sites = Vec::new();
    for (edge, label, cones, circ) in pending {
        let sides: Vec<Vec<usize>> = (0..2)
            .map(|half| {
                let t = cones[half].0;
                skeletons[t].circles[circ[half]]
                    .vertices
                    .iter()
                    .map(|&v| vmap[t][v])
                    .collect()
            })
            .collect();
        for &v in &sides[1] {
            downward[v] = true;
        }
        let vertices: Vec<usize> = sides.concat();
        add_cycle(&mut graph, &vertices, &mut arc_in, &mut arc_out);
        sites.push(GluingSite {
            edge,
            label,
            cones,
            n1: sides[0].len(),
            n2: sides[1].len(),
            vertices,
            pattern_ok: false,
        });
    }
    for (t, skel) in skeletons.iter().enumerate() {
        for k in 0..skel.segments.len() {
            let (x, y) = graph.add_edge(vmap[t][skel.attach[0][k]], vmap[t][skel.attach[1][k]]);
            seg[vmap[t][skel.attach[0][k]]] = x;
            seg[vmap[t][skel.attach[1][k]]] = y;
        }
    }
    for v in 0..nv {
        let order = if downward[v] {
            vec![arc_in[v], arc_out[v], seg[v]]
        } else {
            vec![arc_in[v], seg[v], arc_out[v]]
        };
        graph.set_rotation(v, order);
    }

    for site in sites.iter_mut() {
        site.pattern_ok = site_matches_pattern(&graph, site, curve);
    }
    Ok(GlobalSkeleton {
        graph,
        placement: placement.to_vec(),
        sites,
    })
}

fn site_matches_pattern(graph: &RibbonGraph, site: &GluingSite, curve: &GlobalCurveModel) -> bool {
    let (n1, n2) = (site.n1, site.n2);
    let on_circle: BTreeSet<usize> = site.vertices.iter().copied().collect();
    let leaves = |h: usize| !on_circle.contains(&graph.vertex_of(graph.tau(h)));
    let arrangement_ok = site.vertices.iter().enumerate().all(|(k, &v)| {
        let expected = if k < n1 { 1 } else { 2 };
        graph.valency(v) == 3 && graph.rotation(v).iter().position(|&h| leaves(h)) == Some(expected)
    });
    // Neighborhood of the circle: its vertices, arcs, and spokes.
    let half_edges: Vec<usize> = site.vertices.iter().flat_map(|&v| graph.rotation(v).to_vec()).collect();
    let spokes = half_edges.iter().filter(|&&h| leaves(h)).count();
    let arcs = (half_edges.len() - spokes) / 2;
    let local_chi = on_circle.len() as i64 - (arcs + spokes) as i64;
    let wheel_chi = make_wheel(n1, n2, None).graph.euler_characteristic();
    let side_ok = site.cones.iter().zip([n1, n2]).all(|(&(t, ty), n)| {
        let cone = &curve.cones[t];
        n as u64 * cone.curve.punctures[ty] == cone.group.order()
    });
    arrangement_ok && spokes == n1 + n2 && local_chi == wheel_chi && side_ok
}
