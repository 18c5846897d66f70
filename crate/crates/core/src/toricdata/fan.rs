//! Triangulated lattice polygons and their derived combinatorics.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::InputError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// The height-one ray `(x, y, 1)`.
    pub fn ray(&self) -> [i64; 3] {
        [self.x, self.y, 1]
    }
}

/// Twice the signed area of the triangle `abc`; positive when counterclockwise.
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i128 {
    let (ax, ay) = (a.x as i128, a.y as i128);
    let (bx, by) = (b.x as i128, b.y as i128);
    let (cx, cy) = (c.x as i128, c.y as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Number of lattice segments on the segment `ab` (lattice points minus one).
pub fn lattice_length(a: LatticePoint, b: LatticePoint) -> u64 {
    num_integer::gcd((b.x - a.x).unsigned_abs(), (b.y - a.y).unsigned_abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Interior,
    Boundary,
}

/// A 2-cone: an edge of the triangulation with its incident triangles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanEdge {
    /// Point indices, smaller first.
    pub ends: (usize, usize),
    pub kind: EdgeKind,
    /// One triangle for boundary edges, two (ascending) for interior ones.
    pub triangles: Vec<usize>,
}

/// The cone over a triangulated lattice polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    points: Vec<LatticePoint>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<FanEdge>,
    hull: Vec<LatticePoint>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub points: Vec<[i64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

/// Parses and validates a JSON fan document.
pub fn parse_fan(document: &str) -> Result<StackyFan, InputError> {
    let doc: FanDocument =
        serde_json::from_str(document).map_err(|e| InputError::Malformed(e.to_string()))?;
    let points = doc
        .points
        .iter()
        .map(|&[x, y]| LatticePoint::new(x, y))
        .collect();
    StackyFan::new(points, doc.triangles)
}

impl StackyFan {
    pub fn new(points: Vec<LatticePoint>, triangles: Vec<[usize; 3]>) -> Result<Self, InputError> {
        const LIMIT: i64 = 1 << 30;
        if let Some(p) = points
            .iter()
            .find(|p| p.x.abs() > LIMIT || p.y.abs() > LIMIT)
        {
            return Err(InputError::Overflow(format!("coordinate ({}, {})", p.x, p.y)));
        }
        if triangles.is_empty() {
            return Err(InputError::Empty);
        }
        for (t, tri) in triangles.iter().enumerate() {
            for &i in tri {
                if i >= points.len() {
                    return Err(InputError::IndexOutOfRange {
                        triangle: t,
                        index: i,
                        len: points.len(),
                    });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(InputError::RepeatedVertex { triangle: t });
            }
        }
        let mut seen: BTreeMap<LatticePoint, usize> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(InputError::DuplicatePoint(j, i));
            }
            seen.insert(*p, i);
        }

        // Orient every triangle counterclockwise.
        let mut oriented = Vec::with_capacity(triangles.len());
        for (t, &tri) in triangles.iter().enumerate() {
            let [a, b, c] = tri;
            let area = orient(points[a], points[b], points[c]);
            if area == 0 {
                return Err(InputError::DegenerateTriangle {
                    triangle: t,
                    vertices: tri,
                });
            }
            oriented.push(if area > 0 { tri } else { [a, c, b] });
        }

        for s in 0..oriented.len() {
            for t in s + 1..oriented.len() {
                if interiors_overlap(&points, oriented[s], oriented[t]) {
                    return Err(InputError::Overlap(s, t));
                }
            }
        }

        let used: BTreeSet<usize> = oriented.iter().flatten().copied().collect();
        let used_points: Vec<LatticePoint> = used.iter().map(|&i| points[i]).collect();
        let hull = convex_hull(&used_points);
        let hull_area = polygon_doubled_area(&hull);
        let tri_area: i128 = oriented
            .iter()
            .map(|&[a, b, c]| orient(points[a], points[b], points[c]))
            .sum();
        if hull_area != tri_area {
            return Err(InputError::NonConvex {
                triangles: tri_area,
                hull: hull_area,
            });
        }

        let mut incidence: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, tri) in oriented.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                incidence.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        let mut edges = Vec::with_capacity(incidence.len());
        for ((a, b), tris) in incidence {
            let kind = match tris.len() {
                1 if on_hull_boundary(&hull, points[a], points[b]) => EdgeKind::Boundary,
                1 => return Err(InputError::DanglingEdge(a, b)),
                2 => EdgeKind::Interior,
                n => return Err(InputError::OvershareEdge(a, b, n)),
            };
            edges.push(FanEdge {
                ends: (a, b),
                kind,
                triangles: tris,
            });
        }

        let fan = StackyFan {
            points,
            triangles: oriented,
            edges,
            hull,
        };
        fan.check_connected()?;
        Ok(fan)
    }

    fn check_connected(&self) -> Result<(), InputError> {
        let adj = self.dual_graph_adjacency();
        let mut seen = vec![false; self.triangles.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(t) = queue.pop_front() {
            for &(u, _) in &adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(t) => Err(InputError::Disconnected(t)),
            None => Ok(()),
        }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> LatticePoint {
        self.points[i]
    }

    /// Triangles as counterclockwise index triples.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[FanEdge] {
        &self.edges
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = (usize, &FanEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind == EdgeKind::Interior)
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = (usize, &FanEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind == EdgeKind::Boundary)
    }

    /// Indices of points used by some triangle (the rays of the fan).
    pub fn rays(&self) -> Vec<usize> {
        let used: BTreeSet<usize> = self.triangles.iter().flatten().copied().collect();
        used.into_iter().collect()
    }

    /// Convex hull of the polygon, counterclockwise, no collinear vertices.
    pub fn hull(&self) -> &[LatticePoint] {
        &self.hull
    }

    pub fn triangle_points(&self, t: usize) -> [LatticePoint; 3] {
        self.triangles[t].map(|i| self.points[i])
    }

    pub fn doubled_area(&self, t: usize) -> u64 {
        let [a, b, c] = self.triangle_points(t);
        orient(a, b, c) as u64
    }

    /// For each triangle, the (neighbour, edge index) pairs across interior edges.
    pub fn dual_graph_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.triangles.len()];
        for (e, edge) in self.interior_edges() {
            let (s, t) = (edge.triangles[0], edge.triangles[1]);
            adj[s].push((t, e));
            adj[t].push((s, e));
        }
        adj
    }

    /// Dual graph edges as (triangle, triangle) pairs, in edge order.
    pub fn dual_graph(&self) -> Vec<(usize, usize)> {
        self.interior_edges()
            .map(|(_, e)| (e.triangles[0], e.triangles[1]))
            .collect()
    }

    /// Index of the edge with the given endpoints, in either order.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = (a.min(b), a.max(b));
        self.edges.iter().position(|e| e.ends == key)
    }

    /// Edge indices of triangle `t`, listed as the edge opposite each vertex.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        let [a, b, c] = self.triangles[t];
        [
            self.edge_index(b, c).expect("edge bc"),
            self.edge_index(a, c).expect("edge ac"),
            self.edge_index(a, b).expect("edge ab"),
        ]
    }
}

fn interiors_overlap(points: &[LatticePoint], s: [usize; 3], t: [usize; 3]) -> bool {
    // Separating-axis test on edge lines: two convex sets have disjoint
    // interiors exactly when some edge line weakly separates them.
    let separated_by = |own: [usize; 3], other: [usize; 3]| {
        (0..3).any(|k| {
            let a = points[own[k]];
            let b = points[own[(k + 1) % 3]];
            other.iter().all(|&i| orient(a, b, points[i]) <= 0)
        })
    };
    !(separated_by(s, t) || separated_by(t, s))
}

/// Andrew's monotone chain; returns the strict hull counterclockwise.
pub fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn polygon_doubled_area(poly: &[LatticePoint]) -> i128 {
    let n = poly.len();
    if n < 3 {
        return 0;
    }
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128
        })
        .sum()
}

fn on_hull_boundary(hull: &[LatticePoint], a: LatticePoint, b: LatticePoint) -> bool {
    let n = hull.len();
    (0..n).any(|i| {
        let (p, q) = (hull[i], hull[(i + 1) % n]);
        orient(p, q, a) == 0 && orient(p, q, b) == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect()
    }

    #[test]
    fn unit_triangle() {
        let fan = StackyFan::new(pts(&[(0, 0), (1, 0), (0, 1)]), vec![[0, 1, 2]]).unwrap();
        assert_eq!(fan.triangles().len(), 1);
        assert_eq!(fan.boundary_edges().count(), 3);
        assert_eq!(fan.interior_edges().count(), 0);
        assert!(fan.dual_graph().is_empty());
    }

    #[test]
    fn square() {
        let fan = StackyFan::new(
            pts(&[(0, 0), (1, 0), (0, 1), (1, 1)]),
            vec![[0, 1, 3], [0, 3, 2]],
        )
        .unwrap();
        assert_eq!(fan.interior_edges().count(), 1);
        assert_eq!(fan.dual_graph(), vec![(0, 1)]);
        assert_eq!(fan.boundary_edges().count(), 4);
    }

    #[test]
    fn local_p2() {
        let fan = StackyFan::new(
            pts(&[(-1, -1), (1, 0), (0, 1), (0, 0)]),
            vec![[0, 1, 3], [1, 2, 3], [2, 0, 3]],
        )
        .unwrap();
        // Oracle: brute force over triangle pairs for shared vertex pairs.
        let tris = fan.triangles();
        let mut shared = 0;
        for s in 0..tris.len() {
            for t in s + 1..tris.len() {
                let common = tris[s].iter().filter(|i| tris[t].contains(i)).count();
                if common == 2 {
                    shared += 1;
                }
            }
        }
        assert_eq!(shared, 3);
        assert_eq!(fan.interior_edges().count(), 3);
        let mut dual = fan.dual_graph();
        dual.sort();
        assert_eq!(dual, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let err = StackyFan::new(pts(&[(0, 0), (1, 1), (2, 2)]), vec![[0, 1, 2]]).unwrap_err();
        assert_eq!(
            err,
            InputError::DegenerateTriangle {
                triangle: 0,
                vertices: [0, 1, 2]
            }
        );
    }

    #[test]
    fn non_convex_rejected() {
        // (1,1) is a reflex vertex of the union.
        let err = StackyFan::new(
            pts(&[(0, 0), (2, 0), (1, 1), (0, 3)]),
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap_err();
        assert_eq!(err, InputError::NonConvex { triangles: 5, hull: 6 });
    }

    #[test]
    fn dangling_edge_rejected() {
        // T-junction: the big triangle's edge contains a vertex of the others.
        let err = StackyFan::new(
            pts(&[(0, 0), (2, 0), (0, 2), (1, 1), (2, 2)]),
            vec![[0, 1, 2], [1, 4, 3], [3, 4, 2]],
        )
        .unwrap_err();
        assert_eq!(err, InputError::DanglingEdge(1, 2));
    }

    #[test]
    fn overlap_rejected() {
        let err = StackyFan::new(
            pts(&[(0, 0), (2, 0), (0, 2), (1, 1)]),
            vec![[0, 1, 2], [0, 1, 3]],
        )
        .unwrap_err();
        assert_eq!(err, InputError::Overlap(0, 1));
    }

    #[test]
    fn index_errors() {
        let err = StackyFan::new(pts(&[(0, 0), (1, 0)]), vec![[0, 1, 5]]).unwrap_err();
        assert_eq!(
            err,
            InputError::IndexOutOfRange {
                triangle: 0,
                index: 5,
                len: 2
            }
        );
    }

    #[test]
    fn parses_json() {
        let fan = parse_fan(r#"{"points": [[0,0],[1,0],[0,1]], "triangles": [[0,2,1]]}"#).unwrap();
        // Clockwise input gets reoriented.
        assert_eq!(fan.triangles()[0], [0, 1, 2]);
        assert!(matches!(parse_fan("{\"points\": 3}"), Err(InputError::Malformed(_))));
    }

    #[test]
    fn unused_points_permitted() {
        let fan = StackyFan::new(pts(&[(-1, -1), (1, 0), (0, 1), (0, 0)]), vec![[0, 1, 2]]).unwrap();
        assert_eq!(fan.rays(), vec![0, 1, 2]);
    }
}
