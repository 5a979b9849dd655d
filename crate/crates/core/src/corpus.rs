//! Exhaustive enumeration of labelled graphs on few vertices.
//!
//! Graph number `code` on `n` vertices has edge `(u, v)`, `u < v`, exactly when
//! bit `v(v-1)/2 + u` of `code` is set. That is the graph6 pair order, so
//! codes enumerate graphs in the same order as their graph6 bit strings.
//! Nothing is deduplicated up to isomorphism.

use rand::Rng;

use crate::graph::Graph;

/// Largest order the enumerator accepts; 2^28 labelled graphs at n = 8.
pub const MAX_ENUMERATION_ORDER: usize = 8;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Number of labelled graphs on exactly `n` vertices.
pub fn labelled_count(n: usize) -> u64 {
    1u64 << pair_count(n)
}

/// Decodes a pair code into neighbour masks.
pub fn masks_from_code(n: usize, code: u64) -> Vec<u64> {
    let mut masks = vec![0u64; n];
    let mut bit = 0;
    for v in 1..n {
        for u in 0..v {
            if code >> bit & 1 == 1 {
                masks[u] |= 1 << v;
                masks[v] |= 1 << u;
            }
            bit += 1;
        }
    }
    masks
}

pub fn graph_from_code(n: usize, code: u64) -> Graph {
    Graph::from_masks(&masks_from_code(n, code))
}

/// All labelled graphs on exactly `n` vertices, in code order.
pub fn labelled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(
        n <= MAX_ENUMERATION_ORDER,
        "enumeration is limited to n <= {MAX_ENUMERATION_ORDER}"
    );
    (0..labelled_count(n)).map(move |code| graph_from_code(n, code))
}

/// All labelled graphs with `min_n <= n <= max_n`, ordered by `n` then code.
pub fn labelled_graphs_between(min_n: usize, max_n: usize) -> impl Iterator<Item = Graph> {
    (min_n..=max_n).flat_map(labelled_graphs)
}

/// A uniformly random labelled graph on `n` vertices (each pair present with probability 1/2).
pub fn random_labelled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if rng.random::<bool>() {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("random graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph6::write_graph6;

    #[test]
    fn counts() {
        assert_eq!(labelled_graphs(0).count(), 1);
        assert_eq!(labelled_graphs(1).count(), 1);
        assert_eq!(labelled_graphs(4).count(), 64);
        assert_eq!(labelled_count(7), 1 << 21);
        assert_eq!(labelled_graphs_between(1, 4).count(), 1 + 2 + 8 + 64);
    }

    #[test]
    fn code_bits_follow_graph6_pair_order() {
        // Code 0b100000 sets pair index 5, which is (2,3).
        let g = graph_from_code(4, 0b100000);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(2, 3)]);
        assert_eq!(graph_from_code(4, 63), Graph::complete(4));
        assert_eq!(write_graph6(&graph_from_code(4, 63)), "C~");
    }

    #[test]
    fn every_labelled_graph_appears_once() {
        let mut seen = std::collections::HashSet::new();
        for g in labelled_graphs(5) {
            assert!(seen.insert(write_graph6(&g)));
        }
        assert_eq!(seen.len(), 1024);
    }
}
