use std::io::BufRead;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;
use thiserror::Error;

use super::{ExtremalRecord, Source};
use crate::bounds::BoundsError;
use crate::exact::{alpha_exact, EXACT_LIMIT};
use crate::graph::Graph;
use crate::graph6::{parse_graph6, Graph6Error};
use crate::ordering::degeneracy;

/// How many parse errors a record keeps verbatim; the rest are only counted.
const KEPT_ERRORS: usize = 20;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Config(#[from] BoundsError),
    #[error("reading input: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse { line: u64, source: Graph6Error },
    #[error("building thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    /// Abort on the first malformed line instead of counting and skipping it.
    pub strict: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Lines evaluated per parallel batch.
    pub batch_size: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            strict: false,
            threads: None,
            batch_size: 4096,
        }
    }
}

enum Outcome {
    Malformed(Graph6Error),
    TooLarge,
    OtherDegeneracy,
    Matched(Graph, usize),
}

fn evaluate(g: Graph, k: usize, d: usize) -> Outcome {
    if g.n() > EXACT_LIMIT {
        return Outcome::TooLarge;
    }
    if degeneracy(&g) != k {
        return Outcome::OtherDegeneracy;
    }
    let alpha = alpha_exact(&g, d)
        .expect("order checked against the solver limit")
        .value;
    Outcome::Matched(g, alpha)
}

fn pool(threads: Option<usize>) -> Result<Option<ThreadPool>, ScanError> {
    Ok(threads
        .map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build())
        .transpose()?)
}

fn run<T: Send>(pool: &Option<ThreadPool>, work: impl FnOnce() -> T + Send) -> T {
    match pool {
        Some(p) => p.install(work),
        None => work(),
    }
}

fn check_params(k: usize, d: usize) -> Result<(), ScanError> {
    if k <= d {
        return Err(BoundsError::KNotAboveD { k, d }.into());
    }
    Ok(())
}

/// Folds one batch of outcomes into the record in input order, which keeps
/// the first-seen tie-break independent of scheduling.
fn absorb(
    record: &mut ExtremalRecord,
    outcomes: Vec<(u64, Outcome)>,
    strict: bool,
) -> Result<(), ScanError> {
    for (line, outcome) in outcomes {
        match outcome {
            Outcome::Malformed(source) => {
                if strict {
                    return Err(ScanError::Parse { line, source });
                }
                record.parse_errors += 1;
                if record.first_parse_errors.len() < KEPT_ERRORS {
                    record.first_parse_errors.push(LineError {
                        line,
                        message: source.to_string(),
                    });
                }
            }
            Outcome::TooLarge => {
                record.n_scanned += 1;
                record.skipped_too_large += 1;
            }
            Outcome::OtherDegeneracy => record.n_scanned += 1,
            Outcome::Matched(g, alpha) => {
                record.n_scanned += 1;
                record.n_matched += 1;
                record.offer(&g, alpha);
            }
        }
    }
    Ok(())
}

/// Scans graph6 lines for the smallest `alpha_d/n` among graphs of degeneracy
/// exactly `k`. Blank lines are ignored; line numbers in errors are 1-based.
pub fn scan_stream<R: BufRead>(
    reader: R,
    k: usize,
    d: usize,
    options: &ScanOptions,
) -> Result<ExtremalRecord, ScanError> {
    check_params(k, d)?;
    let pool = pool(options.threads)?;
    let mut record = ExtremalRecord::new(k, d, Source::Stream);
    let batch_size = options.batch_size.max(1);
    let mut batch: Vec<(u64, String)> = Vec::with_capacity(batch_size);

    let flush = |record: &mut ExtremalRecord, batch: &mut Vec<(u64, String)>| {
        let outcomes = run(&pool, || {
            batch
                .par_iter()
                .map(|(line, text)| {
                    let outcome = match parse_graph6(text) {
                        Ok(g) => evaluate(g, k, d),
                        Err(e) => Outcome::Malformed(e),
                    };
                    (*line, outcome)
                })
                .collect::<Vec<_>>()
        });
        batch.clear();
        absorb(record, outcomes, options.strict)
    };

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        batch.push((index as u64 + 1, line));
        if batch.len() == batch_size {
            flush(&mut record, &mut batch)?;
        }
    }
    flush(&mut record, &mut batch)?;
    Ok(record)
}

/// [`scan_stream`] over graphs already in memory, such as the internal enumerator.
pub fn scan_graphs<I>(
    graphs: I,
    k: usize,
    d: usize,
    options: &ScanOptions,
) -> Result<ExtremalRecord, ScanError>
where
    I: IntoIterator<Item = Graph>,
{
    check_params(k, d)?;
    let pool = pool(options.threads)?;
    let mut record = ExtremalRecord::new(k, d, Source::Stream);
    let batch_size = options.batch_size.max(1);
    let mut graphs = graphs.into_iter();
    let mut seq = 0u64;
    loop {
        let batch: Vec<Graph> = graphs.by_ref().take(batch_size).collect();
        if batch.is_empty() {
            break;
        }
        let first = seq;
        seq += batch.len() as u64;
        let outcomes = run(&pool, || {
            batch
                .into_par_iter()
                .enumerate()
                .map(|(i, g)| (first + i as u64 + 1, evaluate(g, k, d)))
                .collect::<Vec<_>>()
        });
        absorb(&mut record, outcomes, options.strict)?;
    }
    Ok(record)
}
