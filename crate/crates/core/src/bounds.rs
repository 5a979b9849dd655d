//! Closed-form lower bounds on `alpha_d` and one-sided falsifiers for the
//! edge-count inequalities of graphs on surfaces.
//!
//! Every value is an exact [`Rational`]. Genus is never computed: callers supply
//! a claimed genus `g` and the falsifiers can only certify that the claim is too
//! small.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{alpha_exact, AlphaResult, ExactError};
use crate::graph::{Girth, Graph};
use crate::ordering::degeneracy;
use crate::partition::strip_and_colour;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bound requires k > d, got k = {k}, d = {d}")]
    KNotAboveD { k: usize, d: usize },
    #[error("surface bounds are stated for 1 <= d <= 5, got d = {0}")]
    DOutOfRange(usize),
    #[error("the triangle-free edge bound does not apply: graph contains a triangle")]
    HasTriangle,
    #[error("k must be at least {min}, got {k}")]
    KTooSmall { k: usize, min: usize },
    #[error("girth {girth} is below k = {k}")]
    GirthTooSmall { girth: Girth, k: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Theorem1,
    Theorem1Combined,
    Aks,
    Theorem2,
    Lemma1,
    Lemma2,
    Conjecture,
    GirthConjecture,
}

/// Parameters a report was evaluated at; absent fields did not enter the bound.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BoundContext {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub bound: BoundName,
    pub value: Rational,
    /// Present exactly when a graph-dependent quantity was compared to `value`.
    pub satisfied: Option<bool>,
    /// The compared quantity (for example `alpha_d(g)` or `|E(g)|`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Rational>,
    /// Signed distance from the bound to `observed`, oriented so that
    /// non-negative means satisfied and zero means tight.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<Rational>,
    pub context: BoundContext,
    /// Named intermediate values, such as the branches of a maximum.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub terms: BTreeMap<String, Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    /// A bound evaluated from parameters alone, with nothing compared against it.
    pub fn new(bound: BoundName, value: Rational, context: BoundContext) -> Self {
        BoundReport {
            bound,
            value,
            satisfied: None,
            observed: None,
            slack: None,
            context,
            terms: BTreeMap::new(),
            note: None,
        }
    }

    /// Records `observed >= value` (lower bounds).
    fn compare_at_least(mut self, observed: Rational) -> Self {
        let slack = &observed - &self.value;
        self.satisfied = Some(!slack.is_negative());
        self.slack = Some(slack);
        self.observed = Some(observed);
        self
    }

    /// Records `observed <= value` (upper bounds).
    fn compare_at_most(mut self, observed: Rational) -> Self {
        let slack = &self.value - &observed;
        self.satisfied = Some(!slack.is_negative());
        self.slack = Some(slack);
        self.observed = Some(observed);
        self
    }

    pub fn is_tight(&self) -> bool {
        self.slack.as_ref() == Some(&Rational::zero())
    }

    pub fn is_violated(&self) -> bool {
        self.satisfied == Some(false)
    }
}

fn r(value: usize) -> Rational {
    Rational::from_usize(value)
}

/// `(d+1)n / (k+d+1)`: the blue-class guarantee for a k-degenerate graph.
pub fn theorem1_bound(n: usize, k: usize, d: usize) -> Result<Rational, BoundsError> {
    if k <= d {
        return Err(BoundsError::KNotAboveD { k, d });
    }
    Ok(Rational::ratio((d + 1) * n, k + d + 1))
}

/// `max{(d+1)n/(k+d+1), n - alpha_{k-d-1}(g)}` with `k` the degeneracy of `g`,
/// compared against `alpha_d(g)`. When `k <= d` the bound is `n` itself.
pub fn theorem1_combined(g: &Graph, d: usize) -> Result<BoundReport, BoundsError> {
    let n = g.n();
    let k = degeneracy(g);
    let context = BoundContext {
        n: Some(n),
        m: Some(g.m()),
        k: Some(k),
        d: Some(d),
        g: None,
    };
    let (value, terms) = if k <= d {
        let mut terms = BTreeMap::new();
        terms.insert("degenerate".to_string(), r(n));
        (r(n), terms)
    } else {
        let first = theorem1_bound(n, k, d)?;
        let complement = alpha_exact(g, k - d - 1)?;
        let second = r(n) - r(complement.value);
        let mut terms = BTreeMap::new();
        terms.insert("ratio_branch".to_string(), first.clone());
        terms.insert("complement_branch".to_string(), second.clone());
        terms.insert(format!("alpha_{}", k - d - 1), r(complement.value));
        (first.max(second), terms)
    };
    let observed = alpha_exact(g, d)?;
    let mut report = BoundReport::new(BoundName::Theorem1Combined, value, context)
        .compare_at_least(r(observed.value));
    report.terms = terms;
    Ok(report)
}

/// `sum_v min{1, (d+1)/(deg(v)+1)}`.
pub fn aks_bound(g: &Graph, d: usize) -> Rational {
    // Vertices of equal degree contribute equal terms, so sum over the
    // degree histogram, in machine integers while the denominator fits.
    let mut histogram = vec![0usize; g.n()];
    for v in 0..g.n() {
        histogram[g.degree(v)] += 1;
    }
    let terms = || histogram.iter().enumerate().filter(|&(_, &c)| c > 0);
    let whole: usize = terms().filter(|&(deg, _)| deg <= d).map(|(_, &c)| c).sum();
    let fractional = terms().filter(|&(deg, _)| deg > d);
    let small = fractional
        .clone()
        .try_fold((0u128, 1u128), |(num, den), (deg, &c)| {
            let term_den = deg as u128 + 1;
            let lcm = num_integer::lcm(den, term_den);
            let num = num.checked_mul(lcm / den)?;
            let add = ((c * (d + 1)) as u128).checked_mul(lcm / term_den)?;
            Some((num.checked_add(add)?, lcm))
        });
    let fraction = match small {
        Some((num, den)) => Rational::from(BigRational::new(num.into(), den.into())),
        None => fractional
            .map(|(deg, &c)| Rational::ratio(c * (d + 1), deg + 1))
            .sum(),
    };
    &fraction + &Rational::from_usize(whole)
}

/// [`aks_bound`] compared against `alpha_d(g)`.
pub fn aks_check(g: &Graph, d: usize) -> Result<BoundReport, BoundsError> {
    let context = BoundContext {
        n: Some(g.n()),
        m: Some(g.m()),
        k: None,
        d: Some(d),
        g: None,
    };
    let observed = alpha_exact(g, d)?;
    Ok(BoundReport::new(BoundName::Aks, aks_bound(g, d), context)
        .compare_at_least(r(observed.value)))
}

/// Lower bound on `alpha_d` for graphs of genus at most `genus`, `1 <= d <= 5`.
///
/// The formulas are reproduced as stated; see the workspace README for how they
/// relate to the edge bound in [`lemma1_falsifier`].
pub fn theorem2_bound(n: usize, genus: usize, d: usize) -> Result<Rational, BoundsError> {
    let n = Rational::from_usize(n);
    let g = Rational::from_usize(genus);
    let int = Rational::from_integer;
    let value = match d {
        1 => (int(2) * n - int(24) * g + int(2)) / int(7),
        2 => (n - int(2) * g + int(4)) / int(3),
        3 => n / int(2) - g + int(1),
        4 => (int(3) * n - int(2) * g + int(4)) / int(5),
        5 => (int(2) * n - g + int(2)) / int(3),
        _ => return Err(BoundsError::DOutOfRange(d)),
    };
    Ok(value)
}

/// [`theorem2_bound`] at the order of `g`, compared against `alpha_d(g)`.
/// Only meaningful if the caller knows `g` has genus at most `genus`.
pub fn theorem2_check(g: &Graph, genus: usize, d: usize) -> Result<BoundReport, BoundsError> {
    let value = theorem2_bound(g.n(), genus, d)?;
    let context = BoundContext {
        n: Some(g.n()),
        m: Some(g.m()),
        k: None,
        d: Some(d),
        g: Some(genus),
    };
    let observed = alpha_exact(g, d)?;
    Ok(BoundReport::new(BoundName::Theorem2, value, context).compare_at_least(r(observed.value)))
}

/// Checks `m <= 2n + 4g - 4` for a triangle-free graph. A violation certifies
/// that the genus of `g` exceeds `genus_claim`.
pub fn lemma1_falsifier(g: &Graph, genus_claim: usize) -> Result<BoundReport, BoundsError> {
    if g.has_triangle() {
        return Err(BoundsError::HasTriangle);
    }
    let value = Rational::from_usize(2 * g.n() + 4 * genus_claim) - Rational::from_integer(4);
    let context = BoundContext {
        n: Some(g.n()),
        m: Some(g.m()),
        k: None,
        d: None,
        g: Some(genus_claim),
    };
    let mut report = BoundReport::new(BoundName::Lemma1, value, context).compare_at_most(r(g.m()));
    if report.is_violated() {
        report.note = Some(format!("genus exceeds {genus_claim}"));
    }
    Ok(report)
}

/// A graph of genus at most `g` with minimum degree at least `k + 6` has fewer
/// than `12g/k` vertices. The report's value is `12g/k` and `observed` is `n`;
/// `satisfied` is absent when the minimum degree is too small for the
/// statement to say anything.
pub fn lemma2_falsifier(
    g: &Graph,
    genus_claim: usize,
    k: usize,
) -> Result<BoundReport, BoundsError> {
    if k == 0 {
        return Err(BoundsError::KTooSmall { k, min: 1 });
    }
    let value = Rational::ratio(12 * genus_claim, k);
    let context = BoundContext {
        n: Some(g.n()),
        m: Some(g.m()),
        k: Some(k),
        d: None,
        g: Some(genus_claim),
    };
    let mut report = BoundReport::new(BoundName::Lemma2, value, context);
    let delta = g.min_degree().unwrap_or(0);
    if g.n() == 0 || delta < k + 6 {
        report.note = Some(format!(
            "inapplicable: minimum degree {delta} < k + 6 = {}",
            k + 6
        ));
        return Ok(report);
    }
    let n = r(g.n());
    let violated = n >= report.value;
    report.slack = Some(&report.value - &n);
    report.observed = Some(n);
    report.satisfied = Some(!violated);
    report.note = Some(if violated {
        format!("genus exceeds {genus_claim}")
    } else {
        "applicable and satisfied".to_string()
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// The value is conjectured to equal `alpha_d(k)`.
    Conjectured,
    /// Only the clique upper bound `(d+1)/(k+1)` is offered; no conjecture is made.
    UpperBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureTarget {
    pub k: usize,
    pub d: usize,
    pub value: Rational,
    pub kind: TargetKind,
}

/// Target value for `alpha_d(k)`, the infimum of `alpha_d(G)/n` over graphs of
/// degeneracy exactly `k`.
pub fn conjecture_targets(k: usize, d: usize) -> Result<ConjectureTarget, BoundsError> {
    if k <= d {
        return Err(BoundsError::KNotAboveD { k, d });
    }
    let (value, kind) = match (k, d) {
        (2, 1) => (Rational::new(3, 5), TargetKind::Conjectured),
        _ if k >= 3 => (Rational::ratio(d + 1, k + 1), TargetKind::Conjectured),
        _ => (Rational::ratio(d + 1, k + 1), TargetKind::UpperBoundOnly),
    };
    Ok(ConjectureTarget { k, d, value, kind })
}

/// `alpha_1(g) >= n - m/k` for a graph of girth at least `k >= 3`.
pub fn girth_conjecture_check(g: &Graph, k: usize) -> Result<BoundReport, BoundsError> {
    if k < 3 {
        return Err(BoundsError::KTooSmall { k, min: 3 });
    }
    let girth = g.girth();
    if !girth.at_least(k) {
        return Err(BoundsError::GirthTooSmall { girth, k });
    }
    let value = r(g.n()) - Rational::ratio(g.m(), k);
    let context = BoundContext {
        n: Some(g.n()),
        m: Some(g.m()),
        k: Some(k),
        d: Some(1),
        g: None,
    };
    let observed = alpha_exact(g, 1)?;
    Ok(BoundReport::new(BoundName::GirthConjecture, value, context)
        .compare_at_least(r(observed.value)))
}

/// Induced forest built by deleting the `12g - 1` vertices that a smallest-last
/// peel removes last (the densest core) and colouring the rest with `d = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusForest {
    pub genus: usize,
    /// `optimal` is always false: this is a lower bound on `alpha_1`.
    pub forest: AlphaResult,
    pub stripped: Vec<usize>,
    /// Degeneracy of the graph left after stripping.
    pub residual_degeneracy: usize,
    /// What the forward colouring guarantees on the residual graph:
    /// `2|V(H)| / (k_H + 2)`.
    pub guaranteed: Rational,
}

pub fn genus_forest_heuristic(g: &Graph, genus: usize) -> GenusForest {
    let strip = (12 * genus).saturating_sub(1);
    let (blue, stripped, residual_degeneracy) = strip_and_colour(g, strip, 1);
    let remaining = g.n() - stripped.len();
    // A residual forest is kept whole; the scan alone could colour a star centre red.
    let (mut witness, guaranteed) = if residual_degeneracy <= 1 {
        let all = (0..g.n())
            .filter(|v| stripped.binary_search(v).is_err())
            .collect();
        (all, r(remaining))
    } else {
        (
            blue,
            Rational::ratio(2 * remaining, residual_degeneracy + 2),
        )
    };
    witness.sort_unstable();
    GenusForest {
        genus,
        forest: AlphaResult {
            d: 1,
            value: witness.len(),
            witness,
            optimal: false,
            nodes_explored: 0,
        },
        stripped,
        residual_degeneracy,
        guaranteed,
    }
}
