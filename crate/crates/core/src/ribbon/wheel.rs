use serde::Serialize;

use super::graph::{RibbonGraph, Subgraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Spoke {
    Up,
    Down,
}

/// `Γ(p, q)`: a central circle with `p` upward and `q` downward spokes.
#[derive(Clone, Debug)]
pub struct Wheel {
    pub p: usize,
    pub q: usize,
    /// Spoke directions in circle order.
    pub arrangement: Vec<Spoke>,
    pub graph: RibbonGraph,
    /// Attachment vertex of each spoke (the single vertex for `Γ(0,0)`).
    pub hubs: Vec<usize>,
    /// External half-edge of each spoke.
    pub spokes: Vec<usize>,
}

impl Wheel {
    /// The central circle as a subgraph (vertices and arcs, no spokes).
    pub fn circle(&self) -> Subgraph {
        let vertices = (0..self.graph.num_vertices()).collect();
        let half_edges = (0..self.graph.num_half_edges())
            .filter(|&h| !self.graph.is_external(h))
            .collect();
        Subgraph { vertices, half_edges }
    }
}

/// Builds `Γ(p, q)`. With no arrangement the `p` upward spokes come first.
pub fn make_wheel(p: usize, q: usize, arrangement: Option<Vec<Spoke>>) -> Wheel {
    let arrangement = arrangement.unwrap_or_else(|| {
        std::iter::repeat_n(Spoke::Up, p)
            .chain(std::iter::repeat_n(Spoke::Down, q))
            .collect()
    });
    let ups = arrangement.iter().filter(|&&s| s == Spoke::Up).count();
    assert!(
        arrangement.len() == p + q && ups == p,
        "arrangement does not match Γ({p},{q})"
    );
    let mut graph = RibbonGraph::new();
    let n = p + q;
    if n == 0 {
        let v = graph.add_vertex("hub");
        graph.add_edge(v, v);
        return Wheel {
            p,
            q,
            arrangement,
            graph,
            hubs: vec![v],
            spokes: vec![],
        };
    }
    let hubs: Vec<usize> = (0..n).map(|k| graph.add_vertex(format!("s{k}"))).collect();
    // Arc k runs into hub k; arc k+1 leaves it.
    let mut arc_in = vec![0; n];
    let mut arc_out = vec![0; n];
    for k in 0..n {
        let (out, inc) = graph.add_edge(hubs[(k + n - 1) % n], hubs[k]);
        arc_out[(k + n - 1) % n] = out;
        arc_in[k] = inc;
    }
    let spokes: Vec<usize> = (0..n).map(|k| graph.add_half_edge(hubs[k])).collect();
    for k in 0..n {
        let order = match arrangement[k] {
            Spoke::Up => vec![arc_in[k], spokes[k], arc_out[k]],
            Spoke::Down => vec![arc_in[k], arc_out[k], spokes[k]],
        };
        graph.set_rotation(hubs[k], order);
    }
    Wheel {
        p,
        q,
        arrangement,
        graph,
        hubs,
        spokes,
    }
}

#[cfg(test)]
mod tests {
    use super::super::graph::subgraph_predicates;
    use super::*;

    #[test]
    fn euler_characteristics() {
        assert_eq!(make_wheel(0, 0, None).graph.euler_characteristic(), 0);
        assert_eq!(make_wheel(1, 0, None).graph.euler_characteristic(), -1);
        assert_eq!(make_wheel(3, 0, None).graph.euler_characteristic(), -3);
        let w = make_wheel(2, 3, None);
        assert_eq!(w.graph.euler_characteristic(), -5);
        assert_eq!(w.spokes.len(), 5);
        for (p, q) in [(0, 0), (1, 0), (1, 1), (4, 2)] {
            assert!(make_wheel(p, q, None).graph.validate());
        }
    }

    #[test]
    fn central_circle_is_good_closed() {
        for n in 1..=5 {
            let w = make_wheel(n, 0, None);
            let pred = subgraph_predicates(&w.graph, &w.circle()).unwrap();
            assert!(pred.is_good_closed && !pred.is_open, "n={n}");
        }
    }

    #[test]
    fn single_spoke_end_is_not_good_closed() {
        let w = make_wheel(2, 0, None);
        let capped = w.graph.capped();
        let end = capped.num_vertices() - 1;
        let h = Subgraph {
            vertices: [end].into(),
            half_edges: Default::default(),
        };
        let pred = subgraph_predicates(&capped, &h).unwrap();
        assert!(!pred.is_good_closed);
    }

    #[test]
    fn custom_arrangement() {
        let w = make_wheel(1, 1, Some(vec![Spoke::Down, Spoke::Up]));
        assert_eq!(w.arrangement, vec![Spoke::Down, Spoke::Up]);
        assert!(w.graph.validate());
    }
}
