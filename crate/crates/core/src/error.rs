use thiserror::Error;

/// Errors raised while ingesting and validating fan data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("triangle {triangle} references point index {index}, but only {len} points are given")]
    IndexOutOfRange {
        triangle: usize,
        index: usize,
        len: usize,
    },
    #[error("triangle {triangle} repeats a vertex index")]
    RepeatedVertex { triangle: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("triangle {triangle} with vertices {vertices:?} is degenerate (zero area)")]
    DegenerateTriangle {
        triangle: usize,
        vertices: [usize; 3],
    },
    #[error("triangles {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("union of triangles is not a convex polygon (triangle area {triangles}, hull area {hull}, doubled)")]
    NonConvex { triangles: i128, hull: i128 },
    #[error("edge ({0}, {1}) is shared by {2} triangles")]
    OvershareEdge(usize, usize, usize),
    #[error("edge ({0}, {1}) lies inside the polygon but bounds only one triangle")]
    DanglingEdge(usize, usize),
    #[error("dual graph is disconnected (triangle {0} unreachable)")]
    Disconnected(usize),
    #[error("fan has no triangles")]
    Empty,
    #[error("invalid normal form parameters r={r}, m={m}, s={s}")]
    InvalidNormalForm { r: i64, m: i64, s: i64 },
    #[error("value {0} exceeds the supported range")]
    Overflow(String),
    #[error("polygons differ: {0}")]
    PolygonMismatch(String),
    #[error("polygon has no vertices")]
    EmptyPolygon,
}

/// Errors raised by combinatorial constructions that signal an internal
/// inconsistency rather than bad user input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("subset of rays is empty")]
    EmptySubset,
    #[error("ray subset {sub:?} is not contained in {sup:?}")]
    NotASubset { sub: Vec<usize>, sup: Vec<usize> },
    #[error("orbit structure mismatch on side {side}: expected {expected_count} orbits of size {expected_size}, found {found:?}")]
    OrbitMismatch {
        side: usize,
        expected_count: u64,
        expected_size: u64,
        found: Vec<usize>,
    },
    #[error("label-set size mismatch across edge ({0}, {1}): {2} vs {3}")]
    LabelCardinality(usize, usize, usize, usize),
    #[error("label mismatch across edge ({0}, {1})")]
    LabelMismatch(usize, usize),
    #[error("cone {cone} has {interior} interior edges but the chosen base skeleton exposes only {exposed} circles")]
    UncoverablePlacement {
        cone: usize,
        interior: usize,
        exposed: usize,
    },
    #[error("subgraph references elements outside the graph or splits an edge")]
    NotASubgraph,
    #[error("vertex {0} is not in the quiver")]
    UnknownVertex(usize),
    #[error("wheel Γ(0,0) has no intervals; use the circle model")]
    CircleWheel,
    #[error("negative truncation bound {0}")]
    NegativeTruncation(i64),
    #[error("projection routes disagree at edge ({0}, {1})")]
    ProjectionMismatch(usize, usize),
    #[error("coordinate characters of cone {0} do not induce an isomorphism onto its cokernel model")]
    CharacterLabels(usize),
}
