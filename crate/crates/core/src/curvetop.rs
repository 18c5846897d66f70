//! Topology of the mirror curve: Hurwitz counts for one cone, lattice-point
//! counts for polygons, deck monodromy, and gluing along interior edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{InputError, StructureError};
use crate::snf::{smith_normal_form, IntMatrix};
use crate::toricdata::fan::{orient, LatticePoint};
use crate::toricdata::group::sequence_data;
use crate::toricdata::{
    normalize_cone, stacky_picard, structure_group, AbelianGroup, Character, CokerClass,
    CokernelModel, ConeNormalForm, Elem, NormalFormParams, Phase, RaySubset, StackyFan,
    StructureGroup,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineCurveModel {
    pub params: NormalFormParams,
    pub order: u64,
    /// Punctures over the edge opposite each ray.
    pub punctures: [u64; 3],
    /// Euler characteristic of the compactified curve.
    pub chi_bar: i64,
    pub genus: u64,
    pub covering_degree: u64,
}

impl AffineCurveModel {
    /// Euler characteristic of the punctured curve.
    pub fn chi(&self) -> i64 {
        self.chi_bar - self.punctures.iter().sum::<u64>() as i64
    }

    pub fn total_punctures(&self) -> u64 {
        self.punctures.iter().sum()
    }

    /// The triangle `b3, b2, b1` in normal-form coordinates.
    pub fn polygon(&self) -> [LatticePoint; 3] {
        let [b1, b2, b3] = self.params.rays();
        [b3, b2, b1].map(|[x, y]| LatticePoint::new(x, y))
    }
}

/// Curve `X^r Y^-s + Y^m + 1 = 0` as a degree-`rm` cover of the pair of pants.
pub fn affine_curve(params: NormalFormParams) -> AffineCurveModel {
    let order = params.order();
    let punctures = sequence_data(params).map(|(m_i, _)| m_i);
    // Riemann-Hurwitz over P^1 with three branch points: the fiber over
    // the point for edge i has m_i preimages.
    let chi_bar = -(order as i64) + punctures.iter().sum::<u64>() as i64;
    let twice_genus = 2 - chi_bar;
    assert!(twice_genus >= 0 && twice_genus % 2 == 0, "Hurwitz genus is not an integer");
    AffineCurveModel {
        params,
        order,
        punctures,
        chi_bar,
        genus: (twice_genus / 2) as u64,
        covering_degree: order,
    }
}

/// Interior and boundary lattice points of a convex polygon, by enumeration
/// over its bounding box. Vertices may be listed in either orientation.
pub fn pick_counts(polygon: &[LatticePoint]) -> Result<(u64, u64), InputError> {
    if polygon.is_empty() {
        return Err(InputError::EmptyPolygon);
    }
    let n = polygon.len();
    let area: i128 = (0..n)
        .map(|k| {
            let (a, b) = (polygon[k], polygon[(k + 1) % n]);
            a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128
        })
        .sum();
    let sign = if area < 0 { -1 } else { 1 };
    let (x0, x1) = bounds(polygon.iter().map(|p| p.x));
    let (y0, y1) = bounds(polygon.iter().map(|p| p.y));
    let (mut interior, mut boundary) = (0u64, 0u64);
    for x in x0..=x1 {
        for y in y0..=y1 {
            let p = LatticePoint::new(x, y);
            let mut inside = true;
            let mut on_edge = false;
            for k in 0..n {
                let (a, b) = (polygon[k], polygon[(k + 1) % n]);
                let o = sign * orient(a, b, p);
                if o < 0 {
                    inside = false;
                    break;
                }
                if o == 0 && within_box(a, b, p) {
                    on_edge = true;
                }
            }
            if n < 3 {
                // Degenerate polygons have no interior.
                inside = (0..n).any(|k| {
                    let (a, b) = (polygon[k], polygon[(k + 1) % n]);
                    orient(a, b, p) == 0 && within_box(a, b, p)
                });
                on_edge = inside;
            }
            if !inside {
                continue;
            }
            if on_edge {
                boundary += 1;
            } else {
                interior += 1;
            }
        }
    }
    Ok((interior, boundary))
}

fn bounds(it: impl Iterator<Item = i64> + Clone) -> (i64, i64) {
    (it.clone().min().unwrap(), it.max().unwrap())
}

fn within_box(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> bool {
    a.x.min(b.x) <= p.x && p.x <= a.x.max(b.x) && a.y.min(b.y) <= p.y && p.y <= a.y.max(b.y)
}

/// Deck transformations of `(X, Y) -> (X^r Y^-s, Y^m)` and their images in
/// the character group.
#[derive(Clone, Debug)]
pub struct MonodromyData {
    /// `Z^2 / A Z^2` for `A = [[r, -s], [0, m]]`, acting on columns.
    pub deck: AbelianGroup,
    pub sigma_x: Elem,
    pub sigma_y: Elem,
    /// Image of each deck element (by index) in `G^∨`.
    pub transport: Vec<Character>,
    pub sigma_x_character: Character,
    pub sigma_y_character: Character,
    /// Orbits of translation by the transported `sigma_x`, `sigma_y` on `G^∨`.
    pub x_orbits: Vec<Vec<Character>>,
    pub y_orbits: Vec<Vec<Character>>,
}

/// Which power of the coordinate character a deck generator matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Orientation {
    Direct,
    Inverse,
}

impl MonodromyData {
    /// `sigma_x`, `sigma_y` generate the deck group.
    pub fn generates(&self) -> bool {
        let mut seen = BTreeSet::from([self.deck.identity()]);
        let mut queue = VecDeque::from([self.deck.identity()]);
        while let Some(x) = queue.pop_front() {
            for g in [&self.sigma_x, &self.sigma_y] {
                let y = self.deck.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() as u64 == self.deck.order()
    }

    /// The transport is a bijective homomorphism.
    pub fn transport_is_isomorphism(&self, group: &StructureGroup) -> bool {
        let images: BTreeSet<&Character> = self.transport.iter().collect();
        if images.len() as u64 != group.order() || self.deck.order() != group.order() {
            return false;
        }
        let elems = self.deck.elements();
        elems.iter().all(|a| {
            elems.iter().all(|b| {
                let sum = self.deck.add(a, b);
                self.transport[self.deck.index_of(&sum)]
                    == group.mul(
                        &self.transport[self.deck.index_of(a)],
                        &self.transport[self.deck.index_of(b)],
                    )
            })
        })
    }

    /// Matches `sigma_x` against `rho1^{±1}` and `sigma_y` against `rho2^{±1}`.
    /// When a character is its own inverse, `Direct` is reported.
    pub fn orientation(&self, group: &StructureGroup) -> Option<(Orientation, Orientation)> {
        let classify = |sigma: &Character, rho: &Character| {
            if sigma == rho {
                Some(Orientation::Direct)
            } else if *sigma == group.inv(rho) {
                Some(Orientation::Inverse)
            } else {
                None
            }
        };
        Some((
            classify(&self.sigma_x_character, &group.rho[0])?,
            classify(&self.sigma_y_character, &group.rho[1])?,
        ))
    }
}

pub fn monodromy(group: &StructureGroup) -> MonodromyData {
    let NormalFormParams { r, m, s } = group.params;
    let (r, m, s) = (r as i64, m as i64, s as i64);
    let a = IntMatrix::from_rows(&[vec![r, -s], vec![0, m]]);
    let form = smith_normal_form(&a);
    let diag: Vec<u64> = (0..2)
        .map(|k| form.d[(k, k)].to_u64().expect("positive diagonal"))
        .collect();
    let kept: Vec<usize> = (0..2).filter(|&k| diag[k] > 1).collect();
    let deck = AbelianGroup::new(kept.iter().map(|&k| diag[k]).collect());

    let class = |x: [i64; 2]| -> Elem {
        let y = form.u.mul_vec(&[BigInt::from(x[0]), BigInt::from(x[1])]);
        let raw: Vec<i64> = kept.iter().map(|&k| y[k].to_i64().expect("small")).collect();
        deck.reduce(&raw)
    };
    let lift = |e: &Elem| -> [i64; 2] {
        let mut y = vec![BigInt::from(0); 2];
        for (&k, &v) in kept.iter().zip(&e.0) {
            y[k] = BigInt::from(v);
        }
        let x = form.u_inv.mul_vec(&y);
        [x[0].to_i64().expect("small"), x[1].to_i64().expect("small")]
    };
    // A^{-1} x gives the values on (eta1, eta2) of the matching character.
    let to_character = |x: [i64; 2]| -> Character {
        let on_eta1 = Phase::new(m * x[0] + s * x[1], r * m);
        let on_eta2 = Phase::new(x[1], m);
        group
            .character_from_eta_values(on_eta1, on_eta2)
            .expect("A^{-1} x satisfies the relations of G")
    };

    let transport: Vec<Character> = deck.elements().iter().map(|e| to_character(lift(e))).collect();
    let sigma_x = class([1, 0]);
    let sigma_y = class([0, 1]);
    let sigma_x_character = transport[deck.index_of(&sigma_x)].clone();
    let sigma_y_character = transport[deck.index_of(&sigma_y)].clone();
    MonodromyData {
        x_orbits: group.dual().orbits(&sigma_x_character),
        y_orbits: group.dual().orbits(&sigma_y_character),
        deck,
        sigma_x,
        sigma_y,
        transport,
        sigma_x_character,
        sigma_y_character,
    }
}

/// One cone of a fan with its group, curve, and cokernel labels.
#[derive(Clone, Debug)]
pub struct ConeCurve {
    pub triangle: usize,
    /// Point indices of `b1, b2, b3`.
    pub points: [usize; 3],
    pub normal_form: ConeNormalForm,
    pub group: StructureGroup,
    pub curve: AffineCurveModel,
    pub coker: CokernelModel,
    /// Cokernel class of each character, by character index.
    labels: Vec<CokerClass>,
}

impl ConeCurve {
    pub fn new(fan: &StackyFan, triangle: usize) -> Result<Self, InputError> {
        let tri = fan.triangles()[triangle];
        let normal_form = normalize_cone(tri.map(|i| fan.point(i).ray())).map_err(|e| match e {
            InputError::DegenerateTriangle { .. } => InputError::DegenerateTriangle {
                triangle,
                vertices: tri,
            },
            other => other,
        })?;
        let points = normal_form.ray_order.map(|k| tri[k]);
        let group = structure_group(normal_form.params);
        let curve = affine_curve(normal_form.params);
        let coker = stacky_picard(fan, RaySubset::Cone(triangle)).expect("three rays");
        let labels = character_labels(&group, &coker, points)
            .ok_or_else(|| InputError::Malformed(format!("cone {triangle} has inconsistent labels")))?;
        Ok(ConeCurve {
            triangle,
            points,
            normal_form,
            group,
            curve,
            coker,
            labels,
        })
    }

    /// The cokernel class of a character, sending `rho_i` to the basis class of `b_i`.
    pub fn label(&self, theta: &Character) -> &CokerClass {
        &self.labels[self.group.dual().index_of(theta)]
    }

    /// Index `i` (0-based) of the ray opposite the given edge.
    pub fn type_of_edge(&self, ends: (usize, usize)) -> Option<usize> {
        (0..3).find(|&i| {
            let others: BTreeSet<usize> = (0..3).filter(|&k| k != i).map(|k| self.points[k]).collect();
            others == BTreeSet::from([ends.0, ends.1])
        })
    }

    /// Label of a character on the edge model, through the cokernel projection.
    pub fn edge_label(&self, theta: &Character, edge: &CokernelModel) -> CokerClass {
        self.coker
            .project(self.label(theta), edge)
            .expect("edge rays lie in the cone")
    }
}

/// Builds `rho_i -> [e_{b_i}]` by breadth-first search over products of
/// `rho1`, `rho2`, checking well-definedness and bijectivity.
fn character_labels(
    group: &StructureGroup,
    coker: &CokernelModel,
    points: [usize; 3],
) -> Option<Vec<CokerClass>> {
    let dual = group.dual();
    let steps: Vec<(Character, CokerClass)> = (0..3)
        .map(|i| (group.rho[i].clone(), coker.basis_class(points[i]).expect("ray in cone")))
        .collect();
    let mut labels: Vec<Option<CokerClass>> = vec![None; dual.order() as usize];
    labels[dual.index_of(&dual.identity())] = Some(coker.zero());
    let mut queue = VecDeque::from([dual.identity()]);
    while let Some(theta) = queue.pop_front() {
        let here = labels[dual.index_of(&theta)].clone().expect("visited");
        for (rho, class) in &steps {
            let next = group.mul(&theta, rho);
            let image = coker.add(&here, class);
            let slot = &mut labels[dual.index_of(&next)];
            match slot {
                Some(existing) if *existing != image => return None,
                Some(_) => {}
                None => {
                    *slot = Some(image);
                    queue.push_back(next);
                }
            }
        }
    }
    let labels: Vec<CokerClass> = labels.into_iter().collect::<Option<_>>()?;
    let distinct: BTreeSet<&CokerClass> = labels.iter().collect();
    (distinct.len() == labels.len() && coker.torsion_order() == group.order()).then_some(labels)
}

/// How the boundary circles of two cones meet over one interior edge.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeIdentification {
    pub edge: usize,
    pub ends: (usize, usize),
    /// Adjacent cones (triangle indices) and the puncture type of the edge in each.
    pub cones: [(usize, usize); 2],
    /// Edge-group label of each circle with a representative character index
    /// from each side.
    pub circles: Vec<(CokerClass, usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct GlobalCurveModel {
    pub cones: Vec<ConeCurve>,
    pub identifications: Vec<EdgeIdentification>,
    pub chi: i64,
    pub genus: u64,
    pub punctures: u64,
    /// Interior and boundary lattice points of the polygon.
    pub pick: (u64, u64),
}

impl GlobalCurveModel {
    /// Genus and punctures agree with the lattice-point counts.
    pub fn matches_pick(&self) -> bool {
        (self.genus, self.punctures) == self.pick && self.chi == 2 - 2 * self.genus as i64 - self.punctures as i64
    }
}

/// Circle labels on the edge model for the cosets of `rho_i` in a cone.
fn circle_labels(cone: &ConeCurve, edge: &CokernelModel) -> BTreeMap<CokerClass, usize> {
    let mut out = BTreeMap::new();
    for (idx, theta) in cone.group.characters().iter().enumerate() {
        out.entry(cone.edge_label(theta, edge)).or_insert(idx);
    }
    out
}

pub fn build_cones(fan: &StackyFan) -> Result<Vec<ConeCurve>, InputError> {
    (0..fan.triangles().len()).map(|t| ConeCurve::new(fan, t)).collect()
}

pub fn glue_curve(fan: &StackyFan) -> Result<GlobalCurveModel, StructureError> {
    let cones = build_cones(fan).map_err(|_| StructureError::CharacterLabels(0))?;
    glue_cones(fan, cones)
}

/// Gluing over already-built cones.
pub fn glue_cones(fan: &StackyFan, cones: Vec<ConeCurve>) -> Result<GlobalCurveModel, StructureError> {
    let mut identifications = Vec::new();
    for (e, edge) in fan.interior_edges() {
        let model = stacky_picard(fan, RaySubset::Edge(e))?;
        let (a, b) = edge.ends;
        let sides: Vec<(usize, usize, BTreeMap<CokerClass, usize>)> = edge
            .triangles
            .iter()
            .map(|&t| {
                let cone = &cones[t];
                let i = cone.type_of_edge(edge.ends).expect("edge of its cone");
                (t, i, circle_labels(cone, &model))
            })
            .collect();
        let (l, r) = (&sides[0].2, &sides[1].2);
        if l.len() != r.len() {
            return Err(StructureError::LabelCardinality(a, b, l.len(), r.len()));
        }
        for (t, i, labels) in &sides {
            let expected = cones[*t].curve.punctures[*i] as usize;
            if labels.len() != expected {
                return Err(StructureError::LabelCardinality(a, b, labels.len(), expected));
            }
        }
        if l.keys().ne(r.keys()) {
            return Err(StructureError::LabelMismatch(a, b));
        }
        identifications.push(EdgeIdentification {
            edge: e,
            ends: edge.ends,
            cones: [(sides[0].0, sides[0].1), (sides[1].0, sides[1].1)],
            circles: l.iter().map(|(k, &x)| (k.clone(), x, r[k])).collect(),
        });
    }

    let chi: i64 = cones.iter().map(|c| c.curve.chi()).sum();
    let punctures: u64 = cones.iter().map(|c| c.curve.total_punctures()).sum::<u64>()
        - 2 * identifications.iter().map(|id| id.circles.len() as u64).sum::<u64>();
    let twice_genus = 2 - chi - punctures as i64;
    assert!(twice_genus >= 0 && twice_genus % 2 == 0, "glued genus is not an integer");
    let pick = pick_counts(fan.hull()).expect("validated fan has a hull");
    Ok(GlobalCurveModel {
        cones,
        identifications,
        chi,
        genus: (twice_genus / 2) as u64,
        punctures,
        pick,
    })
}
