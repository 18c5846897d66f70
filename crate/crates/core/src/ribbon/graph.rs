use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::StructureError;

/// Half-edge graph with a cyclic order at each vertex. A half-edge fixed by
/// the involution is an external (open-ended) edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RibbonGraph {
    vertex_of: Vec<usize>,
    tau: Vec<usize>,
    rotation: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl RibbonGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.rotation.push(Vec::new());
        self.labels.push(label.into());
        self.rotation.len() - 1
    }

    /// A new external half-edge at `v`, appended to its cyclic order.
    pub fn add_half_edge(&mut self, v: usize) -> usize {
        let h = self.vertex_of.len();
        self.vertex_of.push(v);
        self.tau.push(h);
        self.rotation[v].push(h);
        h
    }

    /// Pairs two external half-edges into an edge.
    pub fn join(&mut self, h1: usize, h2: usize) {
        assert!(h1 != h2 && self.tau[h1] == h1 && self.tau[h2] == h2, "half-edges already paired");
        self.tau[h1] = h2;
        self.tau[h2] = h1;
    }

    /// An edge from `v` to `w`, returning the half-edges at `v` and `w`.
    pub fn add_edge(&mut self, v: usize, w: usize) -> (usize, usize) {
        let a = self.add_half_edge(v);
        let b = self.add_half_edge(w);
        self.join(a, b);
        (a, b)
    }

    /// Replaces the cyclic order at `v`; it must be a permutation of the
    /// current one.
    pub fn set_rotation(&mut self, v: usize, order: Vec<usize>) {
        let mut old = self.rotation[v].clone();
        let mut new = order.clone();
        old.sort_unstable();
        new.sort_unstable();
        assert_eq!(old, new, "rotation must permute the half-edges at the vertex");
        self.rotation[v] = order;
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.tau.len()
    }

    /// Number of edges, counting external edges.
    pub fn num_edges(&self) -> usize {
        (0..self.tau.len()).filter(|&h| self.tau[h] >= h).count()
    }

    pub fn tau(&self, h: usize) -> usize {
        self.tau[h]
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn is_external(&self, h: usize) -> bool {
        self.tau[h] == h
    }

    pub fn external_half_edges(&self) -> Vec<usize> {
        (0..self.tau.len()).filter(|&h| self.is_external(h)).collect()
    }

    /// Checks the involution and that each rotation lists exactly the
    /// half-edges at its vertex, once each.
    pub fn validate(&self) -> bool {
        let involutive = (0..self.tau.len()).all(|h| self.tau[h] < self.tau.len() && self.tau[self.tau[h]] == h);
        let mut seen = vec![false; self.tau.len()];
        for (v, order) in self.rotation.iter().enumerate() {
            for &h in order {
                if h >= seen.len() || seen[h] || self.vertex_of[h] != v {
                    return false;
                }
                seen[h] = true;
            }
        }
        involutive && seen.into_iter().all(|s| s)
    }

    /// `|V| - |E|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64
    }

    /// Turns every external edge into an edge ending at a new univalent vertex.
    pub fn capped(&self) -> RibbonGraph {
        let mut g = self.clone();
        for h in self.external_half_edges() {
            let w = g.add_vertex(format!("cap{h}"));
            let k = g.add_half_edge(w);
            g.join(h, k);
        }
        g
    }

    /// Disjoint union; returns the vertex and half-edge offsets of `other`.
    pub fn disjoint_union(&mut self, other: &RibbonGraph) -> (usize, usize) {
        let (vo, ho) = (self.num_vertices(), self.num_half_edges());
        self.vertex_of.extend(other.vertex_of.iter().map(|v| v + vo));
        self.tau.extend(other.tau.iter().map(|h| h + ho));
        self.rotation
            .extend(other.rotation.iter().map(|r| r.iter().map(|h| h + ho).collect::<Vec<_>>()));
        self.labels.extend(other.labels.iter().cloned());
        (vo, ho)
    }

    /// Graphviz rendering; cyclic orders appear as comments.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "graph {name} {{").unwrap();
        for v in 0..self.num_vertices() {
            let order: Vec<String> = self.rotation[v].iter().map(|h| format!("h{h}")).collect();
            writeln!(out, "  // v{v} rotation: {}", order.join(" ")).unwrap();
            writeln!(out, "  v{v} [label=\"{}\"];", self.labels[v].replace('"', "'")).unwrap();
        }
        for h in 0..self.num_half_edges() {
            let t = self.tau[h];
            if t == h {
                writeln!(out, "  x{h} [shape=point];").unwrap();
                writeln!(out, "  v{} -- x{h} [label=\"h{h}\"];", self.vertex_of[h]).unwrap();
            } else if h < t {
                writeln!(
                    out,
                    "  v{} -- v{} [label=\"h{h}/h{t}\"];",
                    self.vertex_of[h], self.vertex_of[t]
                )
                .unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

/// A subgraph given by vertices and whole edges (half-edge sets closed under
/// the involution). Edges may be present without their endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: BTreeSet<usize>,
    pub half_edges: BTreeSet<usize>,
}

impl Subgraph {
    /// Vertices together with every half-edge at them.
    pub fn star(g: &RibbonGraph, vertices: impl IntoIterator<Item = usize>) -> Subgraph {
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        let half_edges = vertices
            .iter()
            .flat_map(|&v| g.rotation(v).iter().flat_map(|&h| [h, g.tau(h)]))
            .collect();
        Subgraph { vertices, half_edges }
    }

    pub fn complement(&self, g: &RibbonGraph) -> Subgraph {
        Subgraph {
            vertices: (0..g.num_vertices()).filter(|v| !self.vertices.contains(v)).collect(),
            half_edges: (0..g.num_half_edges()).filter(|h| !self.half_edges.contains(h)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubgraphPredicates {
    pub is_open: bool,
    pub is_good_closed: bool,
}

pub fn subgraph_predicates(g: &RibbonGraph, h: &Subgraph) -> Result<SubgraphPredicates, StructureError> {
    let in_range = h.vertices.iter().all(|&v| v < g.num_vertices())
        && h.half_edges.iter().all(|&e| e < g.num_half_edges());
    if !in_range || h.half_edges.iter().any(|&e| !h.half_edges.contains(&g.tau(e))) {
        return Err(StructureError::NotASubgraph);
    }
    let is_open = h
        .vertices
        .iter()
        .all(|&v| g.rotation(v).iter().all(|e| h.half_edges.contains(e)));
    let is_closed = h.half_edges.iter().all(|&e| h.vertices.contains(&g.vertex_of(e)));
    // The complement of a closed subgraph is open, so its vertices keep
    // their full valency.
    let complement = h.complement(g);
    let is_good_closed = is_closed && complement.vertices.iter().all(|&v| g.valency(v) != 1);
    Ok(SubgraphPredicates {
        is_open,
        is_good_closed,
    })
}
