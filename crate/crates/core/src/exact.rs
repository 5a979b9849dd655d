//! Exact `alpha_d`: the largest vertex set inducing a d-degenerate subgraph.
//!
//! [`alpha_exact`] is a branch-and-bound over 64-bit vertex masks.
//! [`alpha_brute`] enumerates subsets largest-first and serves as its oracle.
//! Both return the lexicographically smallest optimal witness.

use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::ordering::{degeneracy_ordering, is_d_degenerate, is_d_degenerate_mask};
use crate::partition::partition_theorem;

/// Largest order accepted by [`alpha_exact`].
pub const EXACT_LIMIT: usize = 64;
/// Largest order accepted by [`alpha_brute`].
pub const BRUTE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("graph has {n} vertices; the {method} solver is limited to {limit}, use a heuristic instead")]
    TooLarge {
        n: usize,
        limit: usize,
        method: &'static str,
    },
    #[error("search cancelled")]
    Cancelled,
    #[error("incumbent is not a d-degenerate vertex set of the graph")]
    BadIncumbent,
}

/// Cooperative cancellation flag shared between a caller and running solvers.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, AtomicOrdering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(AtomicOrdering::Relaxed)
    }
}

/// Size of a largest d-degenerate induced subgraph, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaResult {
    pub d: usize,
    pub value: usize,
    /// Sorted vertex ids; `witness.len() == value`.
    pub witness: Vec<usize>,
    /// False when the value comes from a heuristic and is only a lower bound.
    pub optimal: bool,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions<'a> {
    pub cancel: Option<&'a CancelToken>,
    /// A known d-degenerate vertex set used as the starting incumbent.
    pub incumbent: Option<&'a [usize]>,
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | bit(v))
}

fn vertices_of(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Search state shared by both passes. Vertex labels are internal: `adjacency`
/// is relabelled so that branching always takes the lowest undecided label.
struct Search<'a> {
    adjacency: Vec<u64>,
    d: usize,
    nodes: u64,
    cancel: Option<&'a CancelToken>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), ExactError> {
        self.nodes += 1;
        match self.cancel {
            Some(token) if token.is_cancelled() => Err(ExactError::Cancelled),
            _ => Ok(()),
        }
    }

    fn feasible(&self, kept: u64, v: usize) -> bool {
        (self.adjacency[v] & kept).count_ones() as usize <= self.d
            || is_d_degenerate_mask(&self.adjacency, kept | bit(v), self.d)
    }

    /// Drops undecided vertices that can no longer join `kept`; d-degeneracy
    /// is hereditary, so once infeasible they stay infeasible below this node.
    fn prune_undecided(&self, kept: u64, mut undecided: u64) -> u64 {
        let mut scan = undecided;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            if !self.feasible(kept, u) {
                undecided &= !bit(u);
            }
        }
        undecided
    }

    /// Maximisation pass. `best` holds the incumbent mask.
    fn maximise(&mut self, kept: u64, undecided: u64, best: &mut u64) -> Result<(), ExactError> {
        self.tick()?;
        let reachable = kept | undecided;
        if reachable.count_ones() <= best.count_ones() {
            return Ok(());
        }
        if is_d_degenerate_mask(&self.adjacency, reachable, self.d) {
            *best = reachable;
            return Ok(());
        }
        let v = undecided.trailing_zeros() as usize;
        let rest = undecided & !bit(v);
        // Include first: large incumbents early tighten the bound.
        if self.feasible(kept, v) {
            let with_v = kept | bit(v);
            let rest_with = self.prune_undecided(with_v, rest);
            self.maximise(with_v, rest_with, best)?;
        }
        self.maximise(kept, rest, best)
    }

    /// Lexicographically first set of exactly `target` vertices (labels in
    /// increasing order), searched include-first over increasing labels.
    fn first_of_size(
        &mut self,
        kept: u64,
        undecided: u64,
        target: u32,
    ) -> Result<Option<u64>, ExactError> {
        self.tick()?;
        let have = kept.count_ones();
        if have == target {
            return Ok(Some(kept));
        }
        if have + undecided.count_ones() < target {
            return Ok(None);
        }
        if is_d_degenerate_mask(&self.adjacency, kept | undecided, self.d) {
            // Any subset works; the smallest labels give the first one.
            let mut fill = kept;
            let mut scan = undecided;
            while fill.count_ones() < target {
                fill |= scan & scan.wrapping_neg();
                scan &= scan - 1;
            }
            return Ok(Some(fill));
        }
        let v = undecided.trailing_zeros() as usize;
        let rest = undecided & !bit(v);
        if self.feasible(kept, v) {
            let with_v = kept | bit(v);
            let rest_with = self.prune_undecided(with_v, rest);
            if let Some(found) = self.first_of_size(with_v, rest_with, target)? {
                return Ok(Some(found));
            }
        }
        self.first_of_size(kept, rest, target)
    }
}

/// Branching order: smallest-last order, stably sorted by forward degree, highest first.
fn branch_order(g: &Graph) -> Vec<usize> {
    let (ordering, _) = degeneracy_ordering(g);
    let mut order = ordering.order().to_vec();
    order.sort_by_key(|&v| std::cmp::Reverse(ordering.forward_degree(v)));
    order
}

fn check_size(g: &Graph, limit: usize, method: &'static str) -> Result<(), ExactError> {
    if g.n() > limit {
        Err(ExactError::TooLarge {
            n: g.n(),
            limit,
            method,
        })
    } else {
        Ok(())
    }
}

/// Exact `alpha_d(g)` by branch-and-bound. Limited to [`EXACT_LIMIT`] vertices.
pub fn alpha_exact(g: &Graph, d: usize) -> Result<AlphaResult, ExactError> {
    alpha_exact_with(g, d, SolveOptions::default())
}

pub fn alpha_exact_with(
    g: &Graph,
    d: usize,
    options: SolveOptions<'_>,
) -> Result<AlphaResult, ExactError> {
    check_size(g, EXACT_LIMIT, "exact")?;
    let n = g.n();
    if n == 0 {
        return Ok(AlphaResult {
            d,
            value: 0,
            witness: Vec::new(),
            optimal: true,
            nodes_explored: 0,
        });
    }
    let masks = g.neighbour_masks();

    let seed = partition_theorem(g, d);
    let mut incumbent = mask_of(seed.blue());
    if let Some(given) = options.incumbent {
        if given.iter().any(|&v| v >= n) {
            return Err(ExactError::BadIncumbent);
        }
        let given = mask_of(given);
        if !is_d_degenerate_mask(&masks, given, d) {
            return Err(ExactError::BadIncumbent);
        }
        if given.count_ones() > incumbent.count_ones() {
            incumbent = given;
        }
    }

    // Relabel so that internal label i is the i-th vertex in branching order.
    let order = branch_order(g);
    let mut label = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        label[v] = i;
    }
    let relabel = |mask: u64| {
        vertices_of(mask)
            .into_iter()
            .fold(0u64, |m, v| m | bit(label[v]))
    };
    let internal: Vec<u64> = order.iter().map(|&v| relabel(masks[v])).collect();

    let mut search = Search {
        adjacency: internal,
        d,
        nodes: 0,
        cancel: options.cancel,
    };
    let mut best = relabel(incumbent);
    search.maximise(0, full_mask(n), &mut best)?;
    let value = best.count_ones();

    // Second pass in original labels for the lexicographically smallest witness.
    let mut lex = Search {
        adjacency: masks,
        d,
        nodes: 0,
        cancel: options.cancel,
    };
    let witness = lex
        .first_of_size(0, full_mask(n), value)?
        .expect("a set of the optimal size exists");
    Ok(AlphaResult {
        d,
        value: value as usize,
        witness: vertices_of(witness),
        optimal: true,
        nodes_explored: search.nodes + lex.nodes,
    })
}

/// Exact `alpha_d(g)` by literal enumeration of vertex subsets, largest first
/// and lexicographic within a size. Limited to [`BRUTE_LIMIT`] vertices.
pub fn alpha_brute(g: &Graph, d: usize) -> Result<AlphaResult, ExactError> {
    check_size(g, BRUTE_LIMIT, "brute-force")?;
    let n = g.n();
    let mut checked = 0u64;
    for size in (0..=n).rev() {
        for subset in (0..n).combinations(size) {
            checked += 1;
            let (sub, _) = g.induced_subgraph(&subset).expect("subset of vertices");
            if is_d_degenerate(&sub, d) {
                return Ok(AlphaResult {
                    d,
                    value: size,
                    witness: subset,
                    optimal: true,
                    nodes_explored: checked,
                });
            }
        }
    }
    unreachable!("the empty set is d-degenerate")
}

/// `alpha_0(g), ..., alpha_{d_max}(g)`, each level seeded with the previous witness.
pub fn alpha_profile(g: &Graph, d_max: usize) -> Result<Vec<AlphaResult>, ExactError> {
    alpha_profile_with(g, d_max, None)
}

pub fn alpha_profile_with(
    g: &Graph,
    d_max: usize,
    cancel: Option<&CancelToken>,
) -> Result<Vec<AlphaResult>, ExactError> {
    let mut out: Vec<AlphaResult> = Vec::with_capacity(d_max + 1);
    for d in 0..=d_max {
        let options = SolveOptions {
            cancel,
            incumbent: out.last().map(|r| r.witness.as_slice()),
        };
        out.push(alpha_exact_with(g, d, options)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn value(g: &Graph, d: usize) -> usize {
        alpha_exact(g, d).unwrap().value
    }

    #[test]
    fn witness_values_from_the_literature() {
        assert_eq!(value(&fixtures::octahedron(), 2), 4);
        assert_eq!(value(&fixtures::octahedron(), 3), 5);
        assert_eq!(value(&fixtures::subdivided_k4(), 1), 3);
        assert_eq!(value(&fixtures::icosahedron(), 3), 10);
        assert_eq!(value(&fixtures::icosahedron(), 4), 11);
        assert_eq!(value(&fixtures::c5(), 1), 4);
        for k in 1..=6 {
            let clique = Graph::complete(k + 1);
            for d in 0..k {
                assert_eq!(value(&clique, d), d + 1, "K_{} d={d}", k + 1);
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(alpha_brute(&Graph::empty(5).unwrap(), 0).unwrap().value, 5);
        assert_eq!(alpha_brute(&fixtures::k4(), 0).unwrap().value, 1);
        assert_eq!(alpha_brute(&fixtures::k4(), 1).unwrap().value, 2);
        assert_eq!(alpha_brute(&Graph::empty(0).unwrap(), 0).unwrap().value, 0);
    }

    #[test]
    fn profiles() {
        let values = |g: &Graph, d_max| {
            alpha_profile(g, d_max)
                .unwrap()
                .into_iter()
                .map(|r| r.value)
                .collect::<Vec<_>>()
        };
        assert_eq!(values(&fixtures::octahedron(), 3), vec![2, 3, 4, 5]);
        let forest = fixtures::forest();
        let alpha0 = alpha_brute(&forest, 0).unwrap().value;
        assert_eq!(values(&forest, 2), vec![alpha0, 9, 9]);
        assert_eq!(values(&Graph::complete(5), 4), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn size_limits_are_errors() {
        let big = Graph::path(65);
        assert!(matches!(
            alpha_exact(&big, 1),
            Err(ExactError::TooLarge {
                n: 65,
                limit: 64,
                ..
            })
        ));
        assert!(matches!(
            alpha_brute(&Graph::path(21), 1),
            Err(ExactError::TooLarge {
                n: 21,
                limit: 20,
                ..
            })
        ));
        assert_eq!(alpha_exact(&Graph::path(64), 1).unwrap().value, 64);
    }

    #[test]
    fn cancellation_stops_the_search() {
        let token = CancelToken::new();
        token.cancel();
        let options = SolveOptions {
            cancel: Some(&token),
            incumbent: None,
        };
        assert_eq!(
            alpha_exact_with(&fixtures::petersen(), 1, options),
            Err(ExactError::Cancelled)
        );
    }

    #[test]
    fn incumbents_are_validated() {
        let g = fixtures::k4();
        let bad = [0, 1, 2];
        let options = SolveOptions {
            cancel: None,
            incumbent: Some(&bad),
        };
        assert_eq!(
            alpha_exact_with(&g, 1, options),
            Err(ExactError::BadIncumbent)
        );
        let good = [1, 3];
        let options = SolveOptions {
            cancel: None,
            incumbent: Some(&good),
        };
        assert_eq!(
            alpha_exact_with(&g, 1, options).unwrap().witness,
            vec![0, 1]
        );
    }

    #[test]
    fn agrees_with_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = 1 + (rand::Rng::random::<u32>(&mut rng) % 10) as usize;
            let g = corpus::random_labelled(n, &mut rng);
            for d in 0..4 {
                let exact = alpha_exact(&g, d).unwrap();
                let brute = alpha_brute(&g, d).unwrap();
                assert_eq!(exact.value, brute.value, "{g:?} d={d}");
                assert_eq!(exact.witness, brute.witness, "{g:?} d={d}");
                let (sub, _) = g.induced_subgraph(&exact.witness).unwrap();
                assert!(is_d_degenerate(&sub, d));
            }
        }
    }

    #[test]
    fn alpha_is_monotone_and_full_exactly_when_degenerate() {
        for g in corpus::labelled_graphs(5) {
            let profile = alpha_profile(&g, 4).unwrap();
            for pair in profile.windows(2) {
                assert!(pair[0].value <= pair[1].value);
            }
            for r in &profile {
                assert_eq!(r.value == g.n(), is_d_degenerate(&g, r.d));
            }
        }
    }
}
