//! Simple undirected graphs on vertices `0..n`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Largest vertex count a [`Graph`] may hold.
pub const MAX_VERTICES: usize = 1 << 16;

/// Graphs up to this order also carry an adjacency bitset.
pub const BITSET_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {0} exceeds the limit of {MAX_VERTICES} vertices")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
}

/// Row-major adjacency matrix packed into 64-bit words.
#[derive(Clone, PartialEq, Eq)]
struct AdjacencyBits {
    words_per_row: usize,
    words: Vec<u64>,
}

impl AdjacencyBits {
    fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        AdjacencyBits {
            words_per_row,
            words: vec![0; words_per_row * n],
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.words[v * self.words_per_row..(v + 1) * self.words_per_row]
    }

    fn set(&mut self, u: usize, v: usize) {
        self.words[u * self.words_per_row + v / 64] |= 1 << (v % 64);
    }

    fn get(&self, u: usize, v: usize) -> bool {
        self.words[u * self.words_per_row + v / 64] >> (v % 64) & 1 == 1
    }
}

/// An immutable simple undirected graph.
///
/// Neighbour lists are sorted ascending. For graphs with at most
/// [`BITSET_LIMIT`] vertices an adjacency bitset is kept alongside the lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    bits: Option<AdjacencyBits>,
    edge_count: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        Graph::from_edges(n, std::iter::empty())
    }

    /// Builds a graph from an edge list. Self-loops and repeated edges are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph::from_sorted_lists(adjacency))
    }

    /// Builds a graph on at most 64 vertices from per-vertex neighbour masks.
    ///
    /// Only the bits above the diagonal are read, so the masks need not be symmetric.
    pub fn from_masks(masks: &[u64]) -> Graph {
        let n = masks.len();
        assert!(n <= 64, "mask graphs are limited to 64 vertices");
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            let mut upper = masks[u] & !low_bits(u + 1);
            if n < 64 {
                upper &= low_bits(n);
            }
            while upper != 0 {
                let v = upper.trailing_zeros() as usize;
                upper &= upper - 1;
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph::from_sorted_lists(adjacency)
    }

    fn from_sorted_lists(adjacency: Vec<Vec<usize>>) -> Graph {
        let n = adjacency.len();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let bits = (n <= BITSET_LIMIT).then(|| {
            let mut bits = AdjacencyBits::new(n);
            for (u, list) in adjacency.iter().enumerate() {
                for &v in list {
                    bits.set(u, v);
                }
            }
            bits
        });
        Graph {
            adjacency,
            bits,
            edge_count,
        }
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|v| (0..v).map(move |u| (u, v))))
            .expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least three vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
            .expect("complete bipartite graph is simple")
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adjacency.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adjacency.iter().map(Vec::len).max()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Sorted neighbours of `v`.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.bits {
            Some(bits) => bits.get(u, v),
            None => self.adjacency[u].binary_search(&v).is_ok(),
        }
    }

    /// True when the adjacency bitset is maintained.
    pub fn has_bitset(&self) -> bool {
        self.bits.is_some()
    }

    /// The bitset row of `v`, when the bitset is maintained.
    pub fn bitset_row(&self, v: usize) -> Option<&[u64]> {
        self.bits.as_ref().map(|b| b.row(v))
    }

    /// Neighbourhood of `v` as a single word. Only defined for graphs on at most 64 vertices.
    pub fn neighbour_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n() <= 64);
        self.bitset_row(v)
            .map_or(0, |row| row.first().copied().unwrap_or(0))
    }

    /// Neighbourhood masks of every vertex. Only defined for graphs on at most 64 vertices.
    pub fn neighbour_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "mask view needs at most 64 vertices");
        (0..self.n()).map(|v| self.neighbour_mask(v)).collect()
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `keep`, relabelled `0..|keep|` by increasing original id.
    ///
    /// The returned map sends each new label to its original vertex.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        let n = self.n();
        let mut map: Vec<usize> = keep.to_vec();
        map.sort_unstable();
        map.dedup();
        if let Some(&bad) = map.last().filter(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n });
        }
        let mut label = vec![usize::MAX; n];
        for (new, &old) in map.iter().enumerate() {
            label[old] = new;
        }
        let adjacency = map
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter_map(|&w| (label[w] != usize::MAX).then_some(label[w]))
                    .collect()
            })
            .collect();
        Ok((Graph::from_sorted_lists(adjacency), map))
    }

    /// Disjoint union, with `other` relabelled after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let shift = self.n();
        Graph::from_edges(
            shift + other.n(),
            self.edges()
                .chain(other.edges().map(|(u, v)| (u + shift, v + shift))),
        )
    }

    pub fn girth(&self) -> Girth {
        girth(self)
    }

    pub fn has_triangle(&self) -> bool {
        has_triangle(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn low_bits(count: usize) -> u64 {
    if count >= 64 {
        u64::MAX
    } else {
        (1u64 << count) - 1
    }
}

/// Length of a shortest cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    /// The graph is a forest.
    Infinite,
}

impl Girth {
    /// True when the girth is at least `k`.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= k,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinite"),
        }
    }
}

/// Shortest cycle length, by breadth-first search from every vertex.
pub fn girth(g: &Graph) -> Girth {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.fill(usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // Cycles found deeper than this cannot beat the current best.
            if 2 * dist[u] >= best {
                break;
            }
            for &w in g.neighbours(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// True iff the graph contains a triangle.
pub fn has_triangle(g: &Graph) -> bool {
    if g.has_bitset() {
        g.edges().any(|(u, v)| {
            let (ru, rv) = (g.bitset_row(u).unwrap(), g.bitset_row(v).unwrap());
            ru.iter().zip(rv).any(|(a, b)| a & b != 0)
        })
    } else {
        g.edges()
            .any(|(u, v)| sorted_intersect(g.neighbours(u), g.neighbours(v)))
    }
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}
