//! Vertex orderings and degeneracy.
//!
//! A graph is d-degenerate exactly when its vertices can be listed so that
//! each vertex has at most d neighbours later in the list. [`VertexOrdering`]
//! stores such a list together with the per-vertex later-neighbour counts,
//! so any claimed bound can be read off and rechecked.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("ordering has {found} entries but the graph has {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("vertex {0} appears more than once")]
    Repeated(usize),
}

/// A permutation of the vertices with its forward-degree certificate.
///
/// `forward_degree(v)` counts the neighbours of `v` placed strictly after it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    order: Vec<usize>,
    position: Vec<usize>,
    forward_degree: Vec<usize>,
    max_forward_degree: usize,
}

impl VertexOrdering {
    /// Validates `order` as a permutation of `g`'s vertices and computes forward degrees.
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<VertexOrdering, OrderingError> {
        let n = g.n();
        if order.len() != n {
            return Err(OrderingError::WrongLength {
                expected: n,
                found: order.len(),
            });
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(OrderingError::OutOfRange(v));
            }
            if position[v] != usize::MAX {
                return Err(OrderingError::Repeated(v));
            }
            position[v] = i;
        }
        let forward_degree: Vec<usize> = (0..n)
            .map(|v| {
                g.neighbours(v)
                    .iter()
                    .filter(|&&w| position[w] > position[v])
                    .count()
            })
            .collect();
        let max_forward_degree = forward_degree.iter().copied().max().unwrap_or(0);
        Ok(VertexOrdering {
            order,
            position,
            forward_degree,
            max_forward_degree,
        })
    }

    /// The identity ordering `0, 1, ..., n-1`.
    pub fn identity(g: &Graph) -> VertexOrdering {
        VertexOrdering::new(g, (0..g.n()).collect()).expect("identity is a permutation")
    }

    /// The same vertices in the opposite order, with forward degrees recounted.
    pub fn reversed(&self, g: &Graph) -> VertexOrdering {
        VertexOrdering::new(g, self.order.iter().rev().copied().collect())
            .expect("reversal of a permutation is a permutation")
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Index of `v` in the ordering.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn forward_degree(&self, v: usize) -> usize {
        self.forward_degree[v]
    }

    /// Forward degrees indexed by vertex.
    pub fn forward_degrees(&self) -> &[usize] {
        &self.forward_degree
    }

    pub fn max_forward_degree(&self) -> usize {
        self.max_forward_degree
    }

    /// Number of neighbours of `v` placed strictly before it.
    pub fn backward_degree(&self, g: &Graph, v: usize) -> usize {
        g.degree(v) - self.forward_degree[v]
    }
}

/// Smallest-last ordering: repeatedly remove a vertex of minimum remaining
/// degree, lowest id first among ties. Vertices are listed in removal order,
/// so every vertex's surviving neighbours come after it and the maximum
/// forward degree equals the degeneracy.
pub fn degeneracy_ordering(g: &Graph) -> (VertexOrdering, usize) {
    let n = g.n();
    let mut degree = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    // Buckets keyed by current degree; stale heap entries are skipped on pop.
    let mut buckets: Vec<BinaryHeap<Reverse<usize>>> = vec![BinaryHeap::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v]].push(Reverse(v));
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut forward_degree = vec![0; n];
    let mut degeneracy = 0;
    let mut low = 0;
    while order.len() < n {
        let v = loop {
            match buckets[low].peek() {
                Some(&Reverse(v)) if removed[v] || degree[v] != low => {
                    buckets[low].pop();
                }
                Some(&Reverse(v)) => {
                    buckets[low].pop();
                    break v;
                }
                None => low += 1,
            }
        };
        removed[v] = true;
        forward_degree[v] = degree[v];
        degeneracy = degeneracy.max(degree[v]);
        order.push(v);
        for &w in g.neighbours(v) {
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(Reverse(w));
            }
        }
        low = low.saturating_sub(1);
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let ordering = VertexOrdering {
        order,
        position,
        forward_degree,
        max_forward_degree: degeneracy,
    };
    (ordering, degeneracy)
}

/// The degeneracy of `g`.
pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_ordering(g).1
}

/// True iff every subgraph of `g` has a vertex of degree at most `d`.
///
/// Peels vertices of degree at most `d` with a work queue; linear in n + m.
pub fn is_d_degenerate(g: &Graph, d: usize) -> bool {
    let n = g.n();
    let mut degree = g.degrees();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] <= d).collect();
    let mut removed = vec![false; n];
    for &v in &queue {
        removed[v] = true;
    }
    let mut peeled = 0;
    while let Some(v) = queue.pop_front() {
        peeled += 1;
        for &w in g.neighbours(v) {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] <= d {
                    removed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    peeled == n
}

/// Peeling test on a vertex subset of a graph with at most 64 vertices.
///
/// `adjacency[v]` is the neighbour mask of `v`; only vertices in `set` are considered.
pub fn is_d_degenerate_mask(adjacency: &[u64], set: u64, d: usize) -> bool {
    let d = d as u32;
    let mut remaining = set;
    loop {
        let mut low = 0u64;
        let mut scan = remaining;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            if (adjacency[v] & remaining).count_ones() <= d {
                low |= 1 << v;
            }
        }
        if low == 0 {
            return remaining == 0;
        }
        remaining &= !low;
        if remaining == 0 {
            return true;
        }
    }
}
