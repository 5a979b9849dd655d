//! Blue/red colouring partitions of k-degenerate graphs.
//!
//! Scanning the vertices in some order, a vertex is coloured blue when at
//! most `d` of its earlier neighbours are already blue, and red otherwise.
//! The blue side always induces a d-degenerate graph.
//!
//! * Along an ordering in which every vertex has at most `k` later
//!   neighbours ([`colour_forward`]), at least `(d+1)n/(k+d+1)` vertices end
//!   up blue.
//! * Along the reverse of such an ordering, where every vertex has at most
//!   `k` earlier neighbours ([`partition_theorem`]), each red vertex has at
//!   least `d+1` earlier blue neighbours and so at most `k-d-1` earlier red
//!   ones: the red side is (k-d-1)-degenerate.
//!
//! Every [`Partition`] carries orderings that witness these claims, and
//! [`verify_partition`] rechecks everything from scratch.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::ordering::{degeneracy_ordering, OrderingError, VertexOrdering};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("ordering is not a permutation of the graph's vertices: {0}")]
    Ordering(#[from] OrderingError),
    #[error("vertex {0} is coloured both blue and red")]
    Overlap(usize),
    #[error("vertex {0} has no colour")]
    Uncoloured(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} listed twice in one colour class")]
    Repeated(usize),
}

/// Which scan produced a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanKind {
    /// Scan along an ordering with bounded later-degree.
    Forward,
    /// Scan along the reversed smallest-last ordering.
    Reversed,
    /// All vertices blue because the graph is already d-degenerate.
    Trivial,
    /// Built by hand from explicit colour classes.
    Given,
}

/// A blue/red split of the vertices with degeneracy witnesses.
///
/// `blue_witness` is an ordering of `G[blue]` whose labels index into
/// [`Partition::blue`] (the induced subgraph keeps relative order), with
/// forward degree at most `d`. `red_witness`, when present, is the analogous
/// ordering of `G[red]` with forward degree at most `k - d - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blue: Vec<usize>,
    red: Vec<usize>,
    blue_witness: VertexOrdering,
    red_witness: Option<VertexOrdering>,
    scan_order: Vec<usize>,
    d: usize,
    k: usize,
    kind: ScanKind,
}

impl Partition {
    /// Builds a partition from explicit colour classes without any claims.
    ///
    /// Witnesses are smallest-last orderings of the two sides; nothing is
    /// asserted about their degeneracy until [`verify_partition`] runs.
    pub fn from_classes(
        g: &Graph,
        blue: Vec<usize>,
        red: Vec<usize>,
        d: usize,
    ) -> Result<Partition, PartitionError> {
        let (blue, red) = check_classes(g, blue, red)?;
        let (sub, _) = g.induced_subgraph(&blue).expect("classes checked");
        let (blue_witness, _) = degeneracy_ordering(&sub);
        let (_, k) = degeneracy_ordering(g);
        Ok(Partition {
            scan_order: blue.iter().chain(&red).copied().collect(),
            blue,
            red,
            blue_witness,
            red_witness: None,
            d,
            k,
            kind: ScanKind::Given,
        })
    }

    pub fn blue(&self) -> &[usize] {
        &self.blue
    }

    pub fn red(&self) -> &[usize] {
        &self.red
    }

    pub fn blue_witness(&self) -> &VertexOrdering {
        &self.blue_witness
    }

    pub fn red_witness(&self) -> Option<&VertexOrdering> {
        self.red_witness.as_ref()
    }

    /// The blue witness order translated back to original vertex ids.
    pub fn blue_witness_vertices(&self) -> Vec<usize> {
        self.blue_witness
            .order()
            .iter()
            .map(|&i| self.blue[i])
            .collect()
    }

    /// The red witness order translated back to original vertex ids.
    pub fn red_witness_vertices(&self) -> Option<Vec<usize>> {
        self.red_witness
            .as_ref()
            .map(|w| w.order().iter().map(|&i| self.red[i]).collect())
    }

    /// The order in which vertices were coloured.
    pub fn scan_order(&self) -> &[usize] {
        &self.scan_order
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// For forward scans, the largest later-degree of the scan ordering; otherwise the degeneracy.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> ScanKind {
        self.kind
    }

    /// True when the construction guarantees `|blue| >= ceil((d+1)n/(k+d+1))`.
    pub fn claims_cardinality(&self) -> bool {
        matches!(self.kind, ScanKind::Forward | ScanKind::Trivial)
    }

    /// Degeneracy bound certified for the red side, when one is claimed.
    pub fn red_bound(&self) -> Option<usize> {
        self.red_witness.as_ref().map(|_| self.k - self.d - 1)
    }
}

/// `ceil((d+1)n/(k+d+1))`, the guaranteed blue count of a forward scan.
pub fn blue_lower_bound(n: usize, k: usize, d: usize) -> usize {
    ((d + 1) * n).div_ceil(k + d + 1)
}

/// Colours `order` left to right; returns `is_blue` per vertex.
///
/// `blue_before[v]` counts blue neighbours coloured before `v` and is
/// updated as each blue vertex is placed, so the scan is O(n + m).
fn scan(g: &Graph, order: &[usize], d: usize) -> Vec<bool> {
    let n = g.n();
    let mut blue_before = vec![0usize; n];
    let mut coloured = vec![false; n];
    let mut is_blue = vec![false; n];
    for &v in order {
        coloured[v] = true;
        if blue_before[v] <= d {
            is_blue[v] = true;
            for &w in g.neighbours(v) {
                if !coloured[w] {
                    blue_before[w] += 1;
                }
            }
        }
    }
    is_blue
}

/// Ordering of `G[members]` (local labels) that lists `members` in reverse scan order.
fn reverse_scan_witness(g: &Graph, scan_order: &[usize], members: &[usize]) -> VertexOrdering {
    let (sub, map) = g
        .induced_subgraph(members)
        .expect("members are vertices of g");
    let local: Vec<usize> = scan_order
        .iter()
        .rev()
        .filter_map(|v| map.binary_search(v).ok())
        .collect();
    VertexOrdering::new(&sub, local).expect("restriction of a permutation")
}

fn split(is_blue: &[bool]) -> (Vec<usize>, Vec<usize>) {
    (0..is_blue.len()).partition(|&v| is_blue[v])
}

/// Runs the colouring scan along `ordering`.
///
/// The ordering is recertified against `g`, so `k` is its true largest
/// later-degree here. At least `ceil((d+1)n/(k+d+1))` vertices come out blue.
pub fn colour_forward(
    g: &Graph,
    ordering: &VertexOrdering,
    d: usize,
) -> Result<Partition, PartitionError> {
    let ordering = VertexOrdering::new(g, ordering.order().to_vec())?;
    let scan_order = ordering.order().to_vec();
    let (blue, red) = split(&scan(g, &scan_order, d));
    let blue_witness = reverse_scan_witness(g, &scan_order, &blue);
    Ok(Partition {
        blue,
        red,
        blue_witness,
        red_witness: None,
        scan_order,
        d,
        k: ordering.max_forward_degree(),
        kind: ScanKind::Forward,
    })
}

/// Splits `g` into a d-degenerate blue side and a (k-d-1)-degenerate red
/// side, where `k` is the degeneracy of `g`.
///
/// When `k <= d` the whole graph is already d-degenerate and every vertex is blue.
pub fn partition_theorem(g: &Graph, d: usize) -> Partition {
    let (ordering, k) = degeneracy_ordering(g);
    if k <= d {
        return Partition {
            blue: (0..g.n()).collect(),
            red: Vec::new(),
            scan_order: ordering.order().to_vec(),
            blue_witness: ordering,
            red_witness: None,
            d,
            k,
            kind: ScanKind::Trivial,
        };
    }
    let scan_order: Vec<usize> = ordering.order().iter().rev().copied().collect();
    let (blue, red) = split(&scan(g, &scan_order, d));
    let blue_witness = reverse_scan_witness(g, &scan_order, &blue);
    let red_witness = reverse_scan_witness(g, &scan_order, &red);
    Partition {
        blue,
        red,
        blue_witness,
        red_witness: Some(red_witness),
        scan_order,
        d,
        k,
        kind: ScanKind::Reversed,
    }
}

/// The forward colouring along the smallest-last ordering: the construction
/// behind the `(d+1)n/(k+d+1)` bound.
pub fn partition_forward(g: &Graph, d: usize) -> Partition {
    let (ordering, _) = degeneracy_ordering(g);
    colour_forward(g, &ordering, d).expect("smallest-last ordering is a permutation of g")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Passed,
    Failed,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub outcome: CheckOutcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.outcome != CheckOutcome::Failed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, outcome: CheckOutcome, detail: String) {
        self.checks.push(Check {
            name,
            outcome,
            detail,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.outcome {
                CheckOutcome::Passed => "pass",
                CheckOutcome::Failed => "FAIL",
                CheckOutcome::NotApplicable => "n/a",
            };
            writeln!(f, "{tag:>4}  {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check_classes(
    g: &Graph,
    blue: Vec<usize>,
    red: Vec<usize>,
) -> Result<(Vec<usize>, Vec<usize>), PartitionError> {
    let n = g.n();
    let mut colour = vec![0u8; n];
    for (class, tag) in [(&blue, 1u8), (&red, 2u8)] {
        for &v in class.iter() {
            if v >= n {
                return Err(PartitionError::OutOfRange { vertex: v, n });
            }
            match colour[v] {
                0 => colour[v] = tag,
                t if t == tag => return Err(PartitionError::Repeated(v)),
                _ => return Err(PartitionError::Overlap(v)),
            }
        }
    }
    if let Some(v) = colour.iter().position(|&c| c == 0) {
        return Err(PartitionError::Uncoloured(v));
    }
    let mut blue = blue;
    let mut red = red;
    blue.sort_unstable();
    red.sort_unstable();
    Ok((blue, red))
}

fn outcome(ok: bool) -> CheckOutcome {
    if ok {
        CheckOutcome::Passed
    } else {
        CheckOutcome::Failed
    }
}

/// Rechecks a partition against `g` without trusting its witnesses.
///
/// Degeneracy of each side is recomputed with a fresh smallest-last
/// ordering; the witnesses are then recounted separately.
pub fn verify_partition(g: &Graph, p: &Partition) -> Result<VerificationReport, PartitionError> {
    let (blue, red) = check_classes(g, p.blue.clone(), p.red.clone())?;
    let mut report = VerificationReport { checks: Vec::new() };
    let d = p.d;

    let (blue_graph, _) = g.induced_subgraph(&blue).expect("classes checked");
    let (_, blue_k) = degeneracy_ordering(&blue_graph);
    report.push(
        "blue_degenerate",
        outcome(blue_k <= d),
        format!("G[blue] has degeneracy {blue_k}, required <= {d}"),
    );

    let witness_ok = VertexOrdering::new(&blue_graph, p.blue_witness.order().to_vec())
        .map(|w| w.max_forward_degree() <= d);
    report.push(
        "blue_witness",
        outcome(witness_ok == Ok(true)),
        match witness_ok {
            Ok(_) => format!("witness order recounted against G[blue], bound {d}"),
            Err(e) => format!("witness is not an ordering of G[blue]: {e}"),
        },
    );

    match p.red_bound() {
        Some(bound) => {
            let (red_graph, _) = g.induced_subgraph(&red).expect("classes checked");
            let (_, red_k) = degeneracy_ordering(&red_graph);
            report.push(
                "red_degenerate",
                outcome(red_k <= bound),
                format!("G[red] has degeneracy {red_k}, required <= {bound}"),
            );
            let witness = p.red_witness.as_ref().expect("bound implies witness");
            let witness_ok = VertexOrdering::new(&red_graph, witness.order().to_vec())
                .map(|w| w.max_forward_degree() <= bound);
            report.push(
                "red_witness",
                outcome(witness_ok == Ok(true)),
                format!("witness order recounted against G[red], bound {bound}"),
            );
        }
        None => {
            report.push(
                "red_degenerate",
                CheckOutcome::NotApplicable,
                "no red claim".into(),
            );
            report.push(
                "red_witness",
                CheckOutcome::NotApplicable,
                "no red claim".into(),
            );
        }
    }

    if p.claims_cardinality() {
        let n = g.n();
        let need = blue_lower_bound(n, p.k, d);
        let exact = Rational::ratio((d + 1) * n, p.k + d + 1);
        debug_assert_eq!(exact.ceil(), BigInt::from(need));
        report.push(
            "cardinality",
            outcome(blue.len() >= need),
            format!(
                "|blue| = {}, required >= ceil({exact}) = {need}",
                blue.len()
            ),
        );
    } else {
        report.push(
            "cardinality",
            CheckOutcome::NotApplicable,
            "scan order does not certify the later-degree bound".into(),
        );
    }
    Ok(report)
}

/// Removes `strip` vertices of largest smallest-last position, then runs the
/// forward scan with `d` on what is left.
///
/// Returns the blue vertices (original ids), the removed vertices and the
/// degeneracy of the remaining graph.
pub fn strip_and_colour(g: &Graph, strip: usize, d: usize) -> (Vec<usize>, Vec<usize>, usize) {
    let (ordering, _) = degeneracy_ordering(g);
    let strip = strip.min(g.n());
    let keep_len = g.n() - strip;
    let mut removed: Vec<usize> = ordering.order()[keep_len..].to_vec();
    removed.sort_unstable();
    let kept: Vec<usize> = ordering.order()[..keep_len].to_vec();
    let (rest, map) = g
        .induced_subgraph(&kept)
        .expect("kept vertices are in range");
    let inner = partition_forward(&rest, d);
    let (_, rest_k) = degeneracy_ordering(&rest);
    let blue = inner.blue().iter().map(|&i| map[i]).collect();
    (blue, removed, rest_k)
}
