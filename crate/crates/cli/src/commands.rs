use std::fmt;
use std::io::{self, BufReader, Write};
use std::time::Instant;

use degen_core::bounds::{
    aks_bound, aks_check, conjecture_targets, genus_forest_heuristic, girth_conjecture_check,
    lemma1_falsifier, lemma2_falsifier, theorem1_bound, theorem1_combined, theorem2_bound,
    theorem2_check, BoundContext, BoundName, BoundReport,
};
use degen_core::corpus::{labelled_graphs_between, MAX_ENUMERATION_ORDER};
use degen_core::exact::{alpha_brute, alpha_exact, ExactError, EXACT_LIMIT};
use degen_core::partition::{blue_lower_bound, partition_forward};
use degen_core::search::{
    conjecture_report, scan_graphs, scan_stream, Classification, Evolution, EvolveConfig,
    ExtremalRecord, ScanError, ScanOptions,
};
use degen_core::{
    degeneracy, degeneracy_ordering, fixtures, is_d_degenerate, parse_graph6, partition_theorem,
    verify_partition, write_graph6, Graph,
};
use serde_json::{json, Value};

use crate::args::{
    AlphaArgs, BoundsArgs, Cli, Command, CorpusArgs, EvolveArgs, FixturesArgs, InputArgs, Method,
    PartitionArgs, ScanArgs,
};
use crate::manifest::{open, read_all, Manifest};

/// Process exit status. Larger values take precedence when several apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Usage = 1,
    Parse = 2,
    SizeLimit = 3,
    Counterexample = 4,
    Verification = 5,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    fn new(status: Status, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(Status::Usage, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("input: {e}"))
    }
}

struct Run {
    threads: Option<usize>,
    started: Option<Instant>,
}

impl Run {
    /// Threads for the parallel subcommands: flag, then environment, then all cores.
    fn parallel_threads(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }

    fn emit(&self, mut manifest: Manifest, body: Value) -> Result<(), Failure> {
        manifest.finish(self.started);
        let mut out = json!({ "manifest": manifest });
        if let (Value::Object(out), Value::Object(body)) = (&mut out, body) {
            out.extend(body);
        }
        let mut stdout = io::stdout().lock();
        let written = serde_json::to_writer_pretty(&mut stdout, &out)
            .map_err(io::Error::from)
            .and_then(|()| writeln!(stdout));
        match written {
            // A closed downstream pipe (`| head`) is not our failure.
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            other => Ok(other?),
        }
    }
}

pub fn run(cli: Cli) -> Result<Status, Failure> {
    let run = Run {
        threads: cli.threads,
        started: cli.timing.then(Instant::now),
    };
    match cli.command {
        Command::Degeneracy(args) => cmd_degeneracy(&run, args),
        Command::Partition(args) => cmd_partition(&run, args),
        Command::Alpha(args) => cmd_alpha(&run, args),
        Command::Bounds(args) => cmd_bounds(&run, args),
        Command::Scan(args) => cmd_scan(&run, args),
        Command::Evolve(args) => cmd_evolve(&run, args),
        Command::Corpus(args) => cmd_corpus(args),
        Command::Fixtures(args) => cmd_fixtures(args),
    }
}

/// Applies `f` to every well-formed line; malformed lines go to stderr and to
/// the returned error list, and raise the status to [`Status::Parse`].
fn each_graph(
    text: &str,
    status: &mut Status,
    mut f: impl FnMut(u64, &str, Graph, &mut Status) -> Value,
) -> (Vec<Value>, Vec<Value>) {
    let mut results = Vec::new();
    let mut errors = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let number = index as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_graph6(line) {
            Ok(g) => results.push(f(number, line.trim_end(), g, status)),
            Err(e) => {
                eprintln!("degen: line {number}: {e}");
                errors.push(json!({ "line": number, "message": e.to_string() }));
                *status = (*status).max(Status::Parse);
            }
        }
    }
    (results, errors)
}

fn graph_input(
    name: &'static str,
    params: &impl serde::Serialize,
    input: &InputArgs,
) -> Result<(Manifest, String), Failure> {
    let (text, digest) = read_all(input.input.as_ref())?;
    let mut manifest = Manifest::new(name, params);
    manifest.inputs.push(digest);
    Ok((manifest, text))
}

fn cmd_degeneracy(run: &Run, args: InputArgs) -> Result<Status, Failure> {
    let (manifest, text) = graph_input("degeneracy", &args, &args)?;
    let mut status = Status::Ok;
    let (results, errors) = each_graph(&text, &mut status, |line, g6, g, _| {
        let (ordering, k) = degeneracy_ordering(&g);
        json!({
            "line": line,
            "graph6": g6,
            "n": g.n(),
            "m": g.m(),
            "degeneracy": k,
            "ordering": ordering.order(),
        })
    });
    run.emit(manifest, json!({ "results": results, "errors": errors }))?;
    Ok(status)
}

fn cmd_partition(run: &Run, args: PartitionArgs) -> Result<Status, Failure> {
    let (manifest, text) = graph_input("partition", &args, &args.input)?;
    let d = args.d;
    let mut status = Status::Ok;
    let (results, errors) = each_graph(&text, &mut status, |line, g6, g, status| {
        let p = partition_theorem(&g, d);
        let report = verify_partition(&g, &p).expect("partition covers the graph");
        // The forward scan along the smallest-last order realises the cardinality bound.
        let forward = partition_forward(&g, d);
        let forward_report = verify_partition(&g, &forward).expect("partition covers the graph");
        let bound = (p.k() > d).then(|| {
            let value = theorem1_bound(g.n(), p.k(), d).expect("k > d");
            json!({
                "value": value,
                "ceiling": blue_lower_bound(g.n(), p.k(), d),
                "forward_scan_blue": forward.blue().len(),
                "satisfied": forward_report.passed(),
            })
        });
        let verified = report.passed() && forward_report.passed();
        if !verified {
            eprintln!("degen: line {line}: partition certificate failed verification");
            *status = (*status).max(Status::Verification);
        }
        json!({
            "line": line,
            "graph6": g6,
            "n": g.n(),
            "d": d,
            "k": p.k(),
            "kind": p.kind(),
            "blue": p.blue(),
            "red": p.red(),
            "blue_witness": p.blue_witness_vertices(),
            "red_witness": p.red_witness_vertices(),
            "red_degeneracy_bound": p.red_bound(),
            "checks": report.checks,
            "cardinality_bound": bound,
            "verified": verified,
        })
    });
    run.emit(manifest, json!({ "results": results, "errors": errors }))?;
    Ok(status)
}

fn cmd_alpha(run: &Run, args: AlphaArgs) -> Result<Status, Failure> {
    let (manifest, text) = graph_input("alpha", &args, &args.input)?;
    let (d, method) = (args.d, args.method);
    let mut status = Status::Ok;
    let (results, errors) = each_graph(&text, &mut status, |line, g6, g, status| {
        let solved = match method {
            Method::Exact => alpha_exact(&g, d),
            Method::Brute => alpha_brute(&g, d),
        };
        match solved {
            Ok(result) => {
                let (sub, _) = g
                    .induced_subgraph(&result.witness)
                    .expect("witness vertices exist");
                if !is_d_degenerate(&sub, d) || result.witness.len() != result.value {
                    eprintln!("degen: line {line}: witness failed verification");
                    *status = (*status).max(Status::Verification);
                }
                json!({ "line": line, "graph6": g6, "n": g.n(), "method": method, "result": result })
            }
            Err(e) => {
                eprintln!("degen: line {line}: {e}");
                *status = (*status).max(Status::SizeLimit);
                json!({ "line": line, "graph6": g6, "n": g.n(), "method": method, "error": e.to_string() })
            }
        }
    });
    run.emit(manifest, json!({ "results": results, "errors": errors }))?;
    Ok(status)
}

fn bound_error(e: degen_core::BoundsError) -> Failure {
    match e {
        degen_core::BoundsError::Exact(ExactError::TooLarge { .. }) => {
            Failure::new(Status::SizeLimit, e.to_string())
        }
        _ => Failure::usage(e.to_string()),
    }
}

fn cmd_bounds(run: &Run, args: BoundsArgs) -> Result<Status, Failure> {
    let mut manifest = Manifest::new("bounds", &args);
    let graph = if let Some(g6) = &args.graph6 {
        Some(parse_graph6(g6).map_err(|e| Failure::new(Status::Parse, format!("--graph6: {e}")))?)
    } else if let Some(path) = &args.input {
        let (text, digest) = read_all(Some(path))?;
        manifest.inputs.push(digest);
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Failure::new(Status::Parse, "input holds no graph"))?;
        Some(parse_graph6(line).map_err(|e| Failure::new(Status::Parse, format!("line 1: {e}")))?)
    } else {
        None
    };

    let mut n = args.n;
    let mut k = args.k;
    if let Some(g) = &graph {
        if n.is_some_and(|n| n != g.n()) {
            return Err(Failure::usage(format!(
                "--n {} disagrees with the graph's order {}",
                n.unwrap(),
                g.n()
            )));
        }
        let degen = degeneracy(g);
        if k.is_some_and(|k| k != degen) {
            return Err(Failure::usage(format!(
                "--k {} disagrees with the graph's degeneracy {degen}",
                k.unwrap()
            )));
        }
        n = Some(g.n());
        k = Some(degen);
    }

    let mut status = Status::Ok;
    let mut reports: Vec<BoundReport> = Vec::new();
    let context = BoundContext {
        n,
        m: graph.as_ref().map(Graph::m),
        k,
        d: args.d,
        g: args.g,
    };
    let small = graph.as_ref().is_some_and(|g| g.n() <= EXACT_LIMIT);

    if let (Some(n), Some(k), Some(d)) = (n, k, args.d) {
        if k > d {
            match &graph {
                Some(g) if small => reports.push(theorem1_combined(g, d).map_err(bound_error)?),
                _ => reports.push(BoundReport::new(
                    BoundName::Theorem1,
                    theorem1_bound(n, k, d).map_err(bound_error)?,
                    context.clone(),
                )),
            }
        } else if graph.is_none() {
            return Err(Failure::usage(format!(
                "the degeneracy bound needs k > d, got k = {k}, d = {d}"
            )));
        }
    }
    if let (Some(g), Some(d)) = (&graph, args.d) {
        if small {
            reports.push(aks_check(g, d).map_err(bound_error)?);
        } else {
            reports.push(BoundReport::new(
                BoundName::Aks,
                aks_bound(g, d),
                context.clone(),
            ));
        }
    }
    if let (Some(n), Some(genus), Some(d)) = (n, args.g, args.d) {
        if (1..=5).contains(&d) {
            match &graph {
                Some(g) if small => reports.push(theorem2_check(g, genus, d).map_err(bound_error)?),
                _ => reports.push(BoundReport::new(
                    BoundName::Theorem2,
                    theorem2_bound(n, genus, d).map_err(bound_error)?,
                    context.clone(),
                )),
            }
        }
    }
    if let (Some(g), Some(genus)) = (&graph, args.g) {
        if !g.has_triangle() {
            reports.push(lemma1_falsifier(g, genus).map_err(bound_error)?);
        }
        reports.push(lemma2_falsifier(g, genus, args.lemma2_k).map_err(bound_error)?);
    }
    if let (Some(g), Some(girth_k)) = (&graph, args.girth_k) {
        reports.push(girth_conjecture_check(g, girth_k).map_err(bound_error)?);
    }

    // The degeneracy and AKS bounds are theorems: failing them is an internal error.
    for report in &reports {
        if matches!(report.bound, BoundName::Theorem1Combined | BoundName::Aks)
            && report.is_violated()
        {
            eprintln!(
                "degen: {:?} bound violated; this indicates a bug",
                report.bound
            );
            status = status.max(Status::Verification);
        }
    }

    let target = match (k, args.d) {
        (Some(k), Some(d)) if k > d => Some(conjecture_targets(k, d).map_err(bound_error)?),
        _ => None,
    };
    let heuristic = match (&graph, args.g) {
        (Some(g), Some(genus)) => Some(genus_forest_heuristic(g, genus)),
        _ => None,
    };
    if reports.is_empty() && target.is_none() {
        return Err(Failure::usage(
            "nothing to evaluate: give --n/--k/--d/--g or a graph",
        ));
    }
    let mut body = json!({ "bounds": reports });
    if let Some(target) = target {
        body["conjecture_target"] = json!(target);
    }
    if let Some(h) = heuristic {
        body["genus_forest"] = json!(h);
    }
    run.emit(manifest, body)?;
    Ok(status)
}

/// Shared tail of scan and evolve: verify, classify, report, pick the exit status.
fn finish_search(
    run: &Run,
    manifest: Manifest,
    record: ExtremalRecord,
    extra: Value,
) -> Result<Status, Failure> {
    let mut status = Status::Ok;
    for e in &record.first_parse_errors {
        eprintln!("degen: line {}: {}", e.line, e.message);
    }
    if record.parse_errors > record.first_parse_errors.len() as u64 {
        eprintln!(
            "degen: {} further malformed lines skipped",
            record.parse_errors - record.first_parse_errors.len() as u64
        );
    }
    if record.skipped_too_large > 0 {
        eprintln!(
            "degen: {} graphs above {EXACT_LIMIT} vertices skipped",
            record.skipped_too_large
        );
    }
    if !record.verify() {
        eprintln!("degen: witness failed re-verification");
        status = Status::Verification;
    }
    let report = conjecture_report(&record).map_err(|e| Failure::usage(e.to_string()))?;
    eprintln!("{report}");
    if report.classification == Classification::Counterexample {
        eprintln!(
            "degen: COUNTEREXAMPLE: alpha_{}/n = {} is below the target {} for k = {}",
            record.d,
            record
                .best_ratio
                .as_ref()
                .expect("counterexample has a ratio"),
            report.target,
            record.k
        );
        status = status.max(Status::Counterexample);
    }
    let mut body = json!({
        "k": record.k,
        "d": record.d,
        "best_ratio": record.best_ratio,
        "witness_graph6": record.witness_graph6,
        "n_scanned": record.n_scanned,
        "seed": record.seed,
        "classification": report.classification,
        "target": report.target,
        "target_kind": report.target_kind,
    });
    if let (Value::Object(body), Value::Object(extra)) = (&mut body, extra) {
        body.extend(extra);
    }
    body["record"] = json!(record);
    run.emit(manifest, body)?;
    Ok(status)
}

fn scan_failure(e: ScanError) -> Failure {
    match e {
        ScanError::Parse { .. } => Failure::new(Status::Parse, e.to_string()),
        ScanError::Io(ref io) if io.kind() == io::ErrorKind::InvalidData => {
            Failure::new(Status::Parse, e.to_string())
        }
        _ => Failure::usage(e.to_string()),
    }
}

fn cmd_scan(run: &Run, args: ScanArgs) -> Result<Status, Failure> {
    let mut manifest = Manifest::new("scan", &args);
    let options = ScanOptions {
        strict: args.strict,
        threads: Some(run.parallel_threads()),
        batch_size: args.batch_size,
    };
    let record = if let Some(max_n) = args.bundled {
        if max_n > MAX_ENUMERATION_ORDER {
            return Err(Failure::usage(format!(
                "--bundled is limited to {MAX_ENUMERATION_ORDER} vertices"
            )));
        }
        scan_graphs(labelled_graphs_between(1, max_n), args.k, args.d, &options)
            .map_err(scan_failure)?
    } else {
        let mut reader = open(args.input.as_deref())?;
        let record = scan_stream(BufReader::new(&mut reader), args.k, args.d, &options)
            .map_err(scan_failure)?;
        manifest.inputs.push(reader.digest());
        record
    };
    finish_search(run, manifest, record, json!({}))
}

fn cmd_evolve(run: &Run, args: EvolveArgs) -> Result<Status, Failure> {
    let mut config = EvolveConfig::default();
    let mut manifest = Manifest::new("evolve", &args);
    if let Some(path) = &args.config {
        let (text, digest) = read_all(Some(path))?;
        manifest.inputs.push(digest);
        config
            .apply_text(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    macro_rules! flag {
        ($($field:ident),*) => { $( if let Some(v) = args.$field { config.$field = v; } )* };
    }
    flag!(
        k,
        d,
        population_size,
        generations,
        mutation_rate,
        seed,
        n_vertices,
        elitism_count
    );
    if args.no_crossover {
        config.crossover = false;
    }
    manifest.params = json!({ "config": config });
    manifest.seed = Some(config.seed);
    let evolution = Evolution::with_threads(config.clone(), Some(run.parallel_threads()))
        .map_err(|e| Failure::usage(e.to_string()))?;
    let record = evolution.run();
    finish_search(run, manifest, record, json!({ "config": config }))
}

fn cmd_corpus(args: CorpusArgs) -> Result<Status, Failure> {
    if args.max_n > MAX_ENUMERATION_ORDER || args.min_n > args.max_n {
        return Err(Failure::usage(format!(
            "need min-n <= max-n <= {MAX_ENUMERATION_ORDER}"
        )));
    }
    let mut out = io::BufWriter::new(io::stdout().lock());
    for g in labelled_graphs_between(args.min_n, args.max_n) {
        writeln!(out, "{}", write_graph6(&g))?;
    }
    out.flush()?;
    Ok(Status::Ok)
}

fn cmd_fixtures(args: FixturesArgs) -> Result<Status, Failure> {
    let all = fixtures::all();
    let mut out = io::stdout().lock();
    match args.name {
        Some(name) => {
            let f = all
                .iter()
                .find(|f| f.name == name)
                .ok_or_else(|| Failure::usage(format!("unknown fixture {name:?}")))?;
            writeln!(out, "{}", write_graph6(&f.graph))?;
        }
        None => {
            for f in &all {
                writeln!(out, "{}\t{}", f.name, write_graph6(&f.graph))?;
            }
        }
    }
    Ok(Status::Ok)
}
