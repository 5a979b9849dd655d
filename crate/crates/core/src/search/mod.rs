//! Extremal search for small `alpha_d(G)/n` among graphs of degeneracy exactly `k`.
//!
//! [`scan_stream`] walks a graph6 corpus and [`evolve`] runs a seeded genetic
//! search. Both report an [`ExtremalRecord`] whose witness can be rechecked
//! exactly, and [`conjecture_report`] compares it with the conjectured value.

mod evolve;
mod scan;

use std::fmt;

use serde::Serialize;

use crate::bounds::{conjecture_targets, BoundsError, TargetKind};
use crate::exact::alpha_exact;
use crate::graph::Graph;
use crate::ordering::degeneracy;
use crate::rational::Rational;

pub use evolve::{
    evolve, repair_degeneracy, ConfigError, Evolution, EvolveConfig, Individual, Repair,
};
pub use scan::{scan_graphs, scan_stream, LineError, ScanError, ScanOptions};

/// Where a record's graphs came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Stream,
    Evolve,
}

/// Smallest ratio found and the graph attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalRecord {
    pub k: usize,
    pub d: usize,
    /// `alpha_d(witness) / n(witness)`; absent when no graph of degeneracy `k` was seen.
    pub best_ratio: Option<Rational>,
    pub best_alpha: Option<usize>,
    pub witness_graph6: Option<String>,
    #[serde(skip)]
    pub witness: Option<Graph>,
    /// Graphs considered (parsed stream lines, or evaluated individuals).
    pub n_scanned: u64,
    /// Graphs of degeneracy exactly `k` whose ratio was computed.
    pub n_matched: u64,
    /// Graphs beyond the exact solver's order limit, left out.
    pub skipped_too_large: u64,
    pub parse_errors: u64,
    /// The first few parse errors, with line numbers.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub first_parse_errors: Vec<LineError>,
    pub source: Source,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ExtremalRecord {
    fn new(k: usize, d: usize, source: Source) -> Self {
        ExtremalRecord {
            k,
            d,
            best_ratio: None,
            best_alpha: None,
            witness_graph6: None,
            witness: None,
            n_scanned: 0,
            n_matched: 0,
            skipped_too_large: 0,
            parse_errors: 0,
            first_parse_errors: Vec::new(),
            source,
            seed: None,
        }
    }

    /// Offers a graph with known `alpha_d`; keeps it only if its ratio is
    /// strictly smaller, so the first graph seen wins ties.
    fn offer(&mut self, g: &Graph, alpha: usize) {
        let better = match (&self.witness, self.best_alpha) {
            (Some(w), Some(best)) => alpha * w.n() < best * g.n(),
            _ => true,
        };
        if better {
            self.best_ratio = Some(Rational::ratio(alpha, g.n()));
            self.best_alpha = Some(alpha);
            self.witness_graph6 = Some(crate::graph6::write_graph6(g));
            self.witness = Some(g.clone());
        }
    }

    /// Recomputes the witness's degeneracy and ratio from scratch.
    pub fn verify(&self) -> bool {
        match (&self.witness, &self.best_ratio) {
            (None, None) => true,
            (Some(w), Some(ratio)) => {
                degeneracy(w) == self.k
                    && alpha_exact(w, self.d)
                        .map(|a| &Rational::ratio(a.value, w.n()) == ratio)
                        .unwrap_or(false)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// Best ratio strictly above the target.
    Consistent,
    Tight,
    /// Best ratio strictly below the target.
    Counterexample,
    /// No graph of degeneracy `k` was seen.
    NoWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub k: usize,
    pub d: usize,
    pub classification: Classification,
    pub target: Rational,
    pub target_kind: TargetKind,
    pub best_ratio: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_graph6: Option<String>,
    pub source: Source,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n_scanned: u64,
}

/// Compares a record's best ratio with the target for `alpha_d(k)`.
pub fn conjecture_report(record: &ExtremalRecord) -> Result<ConjectureReport, BoundsError> {
    let target = conjecture_targets(record.k, record.d)?;
    let classification = match &record.best_ratio {
        None => Classification::NoWitness,
        Some(ratio) if *ratio < target.value => Classification::Counterexample,
        Some(ratio) if *ratio == target.value => Classification::Tight,
        Some(_) => Classification::Consistent,
    };
    let echo = matches!(
        classification,
        Classification::Tight | Classification::Counterexample
    );
    Ok(ConjectureReport {
        k: record.k,
        d: record.d,
        classification,
        target: target.value,
        target_kind: target.kind,
        best_ratio: record.best_ratio.clone(),
        witness_graph6: if echo {
            record.witness_graph6.clone()
        } else {
            None
        },
        source: record.source,
        seed: record.seed,
        n_scanned: record.n_scanned,
    })
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Consistent => "CONSISTENT",
            Classification::Tight => "TIGHT",
            Classification::Counterexample => "COUNTEREXAMPLE",
            Classification::NoWitness => "NO WITNESS",
        })
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.target_kind {
            TargetKind::Conjectured => "conjectured value",
            TargetKind::UpperBoundOnly => "clique upper bound",
        };
        write!(
            f,
            "{} k={} d={}: target {} ({kind})",
            self.classification, self.k, self.d, self.target
        )?;
        if let Some(ratio) = &self.best_ratio {
            write!(f, ", best ratio {ratio}")?;
        }
        if let Some(g6) = &self.witness_graph6 {
            write!(f, ", witness {g6}")?;
        }
        write!(f, " [{:?}, {} graphs", self.source, self.n_scanned)?;
        if let Some(seed) = self.seed {
            write!(f, ", seed {seed}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn record(k: usize, d: usize, g: &Graph) -> ExtremalRecord {
        let mut r = ExtremalRecord::new(k, d, Source::Stream);
        r.offer(g, alpha_exact(g, d).unwrap().value);
        r
    }

    #[test]
    fn classifications() {
        let r = record(2, 1, &fixtures::subdivided_k4());
        let report = conjecture_report(&r).unwrap();
        assert_eq!(report.classification, Classification::Tight);
        assert_eq!(report.witness_graph6.as_deref(), Some("D^o"));

        assert_eq!(
            conjecture_report(&record(3, 2, &fixtures::k4()))
                .unwrap()
                .classification,
            Classification::Tight
        );
        assert_eq!(
            conjecture_report(&record(4, 1, &Graph::complete(5)))
                .unwrap()
                .classification,
            Classification::Tight
        );
        let c5 = record(2, 1, &fixtures::c5());
        let report = conjecture_report(&c5).unwrap();
        assert_eq!(report.classification, Classification::Consistent);
        assert_eq!(report.witness_graph6, None);

        let mut fake = record(4, 1, &Graph::complete(5));
        fake.best_ratio = Some(Rational::new(1, 3));
        assert_eq!(
            conjecture_report(&fake).unwrap().classification,
            Classification::Counterexample
        );
        assert!(!fake.verify());

        let empty = ExtremalRecord::new(2, 1, Source::Stream);
        assert_eq!(
            conjecture_report(&empty).unwrap().classification,
            Classification::NoWitness
        );
        assert!(empty.verify());
    }

    #[test]
    fn first_seen_wins_ties() {
        let mut r = ExtremalRecord::new(3, 1, Source::Stream);
        let k4 = fixtures::k4();
        let two = k4.disjoint_union(&k4).unwrap();
        r.offer(&k4, 2);
        r.offer(&two, 4);
        assert_eq!(r.witness.as_ref(), Some(&k4));
        assert!(r.verify());
    }

    #[test]
    fn report_text() {
        let text = conjecture_report(&record(2, 1, &fixtures::subdivided_k4()))
            .unwrap()
            .to_string();
        assert!(text.starts_with("TIGHT k=2 d=1: target 3/5"), "{text}");
        assert!(text.contains("witness D^o"));
    }
}
