//! Named graphs used as witnesses and test fixtures.
//!
//! The same graphs ship as graph6 text in `fixtures/witnesses.g6`, one
//! `name<TAB>graph6` pair per line, so the CLI can emit them without a generator.

use crate::graph::Graph;
use crate::graph6::{parse_graph6, Graph6Error};

/// The bundled fixture file.
pub const WITNESSES_G6: &str = include_str!("../fixtures/witnesses.g6");

/// A named fixture graph.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub graph: Graph,
    /// Planar embedding known to exist.
    pub planar: bool,
    pub bipartite: bool,
}

pub fn k4() -> Graph {
    Graph::complete(4)
}

pub fn c5() -> Graph {
    Graph::cycle(5)
}

/// K_{2,2,2}: antipodal pairs (0,3), (1,4), (2,5) are the non-edges.
pub fn octahedron() -> Graph {
    Graph::from_edges(
        6,
        (0..6).flat_map(|u| (u + 1..6).filter(move |&v| v != u + 3).map(move |v| (u, v))),
    )
    .expect("octahedron is simple")
}

/// Apex 0, upper pentagon 1..=5, lower pentagon 6..=10, apex 11.
pub fn icosahedron() -> Graph {
    let mut edges = Vec::with_capacity(30);
    for i in 0..5 {
        let upper = 1 + i;
        let upper_next = 1 + (i + 1) % 5;
        let lower = 6 + i;
        let lower_next = 6 + (i + 1) % 5;
        edges.push((0, upper));
        edges.push((upper, upper_next));
        edges.push((upper, lower));
        edges.push((upper, lower_next));
        edges.push((lower, lower_next));
        edges.push((lower, 11));
    }
    Graph::from_edges(12, edges).expect("icosahedron is simple")
}

/// K_4 on 0..=3 with the edge 0-1 replaced by the path 0-4-1.
pub fn subdivided_k4() -> Graph {
    Graph::from_edges(5, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4)])
        .expect("subdivided K4 is simple")
}

/// Outer 5-cycle 0..=4, inner pentagram 5..=9, spokes i - i+5.
pub fn petersen() -> Graph {
    let edges = (0..5).flat_map(|i| [(i, (i + 1) % 5), (5 + i, 5 + (i + 2) % 5), (i, i + 5)]);
    Graph::from_edges(10, edges).expect("Petersen graph is simple")
}

pub fn k33() -> Graph {
    Graph::complete_bipartite(3, 3)
}

/// The 3-cube Q_3: vertices are 3-bit words, edges join words at Hamming distance 1.
pub fn cube() -> Graph {
    let edges = (0..8usize).flat_map(|u| {
        (0..3)
            .map(move |b| (u, u ^ (1 << b)))
            .filter(|&(u, v)| u < v)
    });
    Graph::from_edges(8, edges).expect("cube is simple")
}

/// Grid P_3 x P_3, row-major.
pub fn grid_3x3() -> Graph {
    let mut edges = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let v = 3 * r + c;
            if c + 1 < 3 {
                edges.push((v, v + 1));
            }
            if r + 1 < 3 {
                edges.push((v, v + 3));
            }
        }
    }
    Graph::from_edges(9, edges).expect("grid is simple")
}

/// A path on 4 vertices, a star K_{1,3} and an isolated vertex.
pub fn forest() -> Graph {
    Graph::from_edges(9, [(0, 1), (1, 2), (2, 3), (4, 5), (4, 6), (4, 7)])
        .expect("forest is simple")
}

/// Every named fixture, in file order.
pub fn all() -> Vec<Fixture> {
    let fixture = |name: &str, graph: Graph, planar: bool, bipartite: bool| Fixture {
        name: name.to_string(),
        graph,
        planar,
        bipartite,
    };
    vec![
        fixture("k4", k4(), true, false),
        fixture("c5", c5(), true, false),
        fixture("octahedron", octahedron(), true, false),
        fixture("icosahedron", icosahedron(), true, false),
        fixture("subdivided_k4", subdivided_k4(), true, false),
        fixture("petersen", petersen(), false, false),
        fixture("k33", k33(), false, true),
        fixture("c4", Graph::cycle(4), true, true),
        fixture("c6", Graph::cycle(6), true, true),
        fixture("k23", Graph::complete_bipartite(2, 3), true, true),
        fixture("cube", cube(), true, true),
        fixture("grid3x3", grid_3x3(), true, true),
        fixture("p5", Graph::path(5), true, true),
        fixture("forest", forest(), true, true),
    ]
}

/// Looks up a fixture by name.
pub fn by_name(name: &str) -> Option<Graph> {
    all().into_iter().find(|f| f.name == name).map(|f| f.graph)
}

/// Parses the bundled fixture file into `(name, graph)` pairs.
pub fn parse_witness_file(text: &str) -> Result<Vec<(String, Graph)>, Graph6Error> {
    text.lines()
        .filter(|line| !line.trim().is_empty() && !line.starts_with('#'))
        .map(|line| {
            let (name, code) = line.split_once('\t').unwrap_or(("", line));
            parse_graph6(code.trim()).map(|g| (name.to_string(), g))
        })
        .collect()
}
