//! Command-line front end: file loading, caps, and report rendering.
//!
//! Every command reads one graph file (except `selftest`), computes with the
//! library, and prints either plain text or a JSON object carrying the same
//! fields. Domain problems (unreadable file, malformed graph, unknown edge,
//! cap exceeded, precondition violations) exit 1 with a single diagnostic
//! line on stderr; argument mistakes exit 2.

use crate::classify::{
    classify_all, classify_edge, corollary_knot_check, corollary_simple_check,
    enumerate_connected, verify_graph, CheckStatus, CorollaryReport, EdgeVerdict,
    SplitAssumption, Verdict, VerificationReport,
};
use crate::cutsets::{all_maximal_pds, dl_extreme_coeffs, dual_extreme_coeffs, es_identity_check, maximal_pds_of_edge, parity};
use crate::diagram::{
    build_medial, kauffman_bracket_capped, kauffman_bracket_with, DiagramError,
    SmoothingConvention, DEFAULT_STATE_SUM_CAP,
};
use crate::laurent::LaurentPoly;
use crate::plane_graph::{EdgeId, SignedPlaneGraph};
use crate::polynomials::{
    q_after_flip, q_polynomial, q_polynomial_capped, q_via_tutte, tutte_neg_eval,
    tutte_neg_eval_capped, PolyError, DEFAULT_RECURSION_EDGE_CAP, DEFAULT_SUBSET_EDGE_CAP,
};
use crate::{corpus, polynomials};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const RECURSION_CAP_ENV: &str = "QKNOT_RECURSION_CAP";
pub const SUBSET_CAP_ENV: &str = "QKNOT_SUBSET_CAP";
pub const STATE_CAP_ENV: &str = "QKNOT_STATE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// Effective limits and output format for one invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub recursion_cap: usize,
    pub subset_cap: usize,
    pub state_cap: usize,
    pub format: Format,
}

#[derive(Parser)]
#[command(
    name = "qknot",
    version,
    about = "Q-polynomials of signed plane graphs and crossing-change analysis of alternating links",
    color = clap::ColorChoice::Never,
    disable_help_subcommand = true
)]
struct Cli {
    /// Edge budget for the deletion-contraction recursion
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    recursion_cap: Option<u64>,
    /// Edge budget for subset-expansion sums
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    subset_cap: Option<u64>,
    /// Crossing budget for bracket state sums
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    state_cap: Option<u64>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Q-polynomial of the signed graph, in A
    Qpoly { file: PathBuf },
    /// Subset expansion of the Tutte specialization, in t
    Tutte { file: PathBuf },
    /// Kauffman bracket of the medial link diagram, with its span
    Bracket { file: PathBuf },
    /// Componentwise dual graph, in the same file format
    Dual { file: PathBuf },
    /// Number of link components of the medial diagram
    Components { file: PathBuf },
    /// Maximal pairwise-disconnecting sets and maximal multiple edges
    Cutsets { file: PathBuf },
    /// Q-polynomial after flipping one edge's sign
    Flip {
        file: PathBuf,
        #[arg(long, value_name = "EID")]
        edge: String,
    },
    /// Does flipping this edge drop the crossing number by exactly two?
    Classify {
        file: PathBuf,
        #[arg(long, value_name = "EID")]
        edge: String,
        /// Treat the changed link as split even without a graph certificate
        #[arg(long, conflicts_with = "assume_nonsplit")]
        assume_split: bool,
        /// Treat the changed link as nonsplit
        #[arg(long)]
        assume_nonsplit: bool,
    },
    /// Classify every edge of the graph
    ClassifyAll { file: PathBuf },
    /// Whole-graph checks: 1 = multigraph conditions, 2 = simple-graph conditions
    Corollary {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Cross-check every identity the library rests on, on one graph
    Verify {
        file: PathBuf,
        #[arg(long, value_name = "EID")]
        edge: Option<String>,
    },
    /// Run the identity suite over the corpus and an enumerated sweep
    Selftest {
        #[arg(long, value_name = "N", default_value_t = 6)]
        max_edges: usize,
    },
}

/// Everything one invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Rendered {
    text: String,
    json: Value,
    status: i32,
}

impl Rendered {
    fn ok(text: String, json: Value) -> Self {
        Rendered { text, json, status: 0 }
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => return usage_outcome(&err),
    };
    let config = match resolve_config(&cli) {
        Ok(config) => config,
        Err(msg) => return domain_failure(&msg),
    };
    match execute(&cli.command, &config) {
        Ok(rendered) => {
            let stdout = match config.format {
                Format::Text => rendered.text,
                Format::Structured => {
                    let mut s = serde_json::to_string_pretty(&rendered.json)
                        .expect("reports serialize");
                    s.push('\n');
                    s
                }
            };
            Outcome { status: rendered.status, stdout, stderr: String::new() }
        }
        Err(msg) => domain_failure(&msg),
    }
}

fn domain_failure(msg: &str) -> Outcome {
    Outcome { status: 1, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

fn usage_outcome(err: &clap::Error) -> Outcome {
    let rendered = err.render().to_string();
    if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        let mut stdout = rendered;
        if !stdout.ends_with('\n') {
            stdout.push('\n');
        }
        return Outcome { status: 0, stdout, stderr: String::new() };
    }
    let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: bad usage");
    Outcome { status: 2, stdout: String::new(), stderr: format!("{line}\n") }
}

fn cap_from_env(name: &str) -> Result<Option<usize>, String> {
    match std::env::var(name) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(err) => Err(format!("{name} is not readable: {err}")),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{name} must be a positive integer, got {raw:?}")),
        },
    }
}

fn resolve_config(cli: &Cli) -> Result<Config, String> {
    let pick = |flag: Option<u64>, env: &str, default: usize| -> Result<usize, String> {
        if let Some(n) = flag {
            return Ok(n as usize);
        }
        Ok(cap_from_env(env)?.unwrap_or(default))
    };
    Ok(Config {
        recursion_cap: pick(cli.recursion_cap, RECURSION_CAP_ENV, DEFAULT_RECURSION_EDGE_CAP)?,
        subset_cap: pick(cli.subset_cap, SUBSET_CAP_ENV, DEFAULT_SUBSET_EDGE_CAP)?,
        state_cap: pick(cli.state_cap, STATE_CAP_ENV, DEFAULT_STATE_SUM_CAP)?,
        format: cli.format,
    })
}

fn load_graph(path: &Path) -> Result<SignedPlaneGraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| format!("cannot read {}: {err}", path.display()))?;
    SignedPlaneGraph::parse(&text).map_err(|err| err.to_string())
}

fn parse_edge(token: &str) -> Result<EdgeId, String> {
    EdgeId::parse_token(token)
        .ok_or_else(|| format!("malformed edge id {token:?} (expected e<number>)"))
}

fn check_recursion_cap(g: &SignedPlaneGraph, cap: usize) -> Result<(), String> {
    if g.underlying().edge_count() > cap {
        return Err(PolyError::CapExceeded { edges: g.underlying().edge_count(), cap }.to_string());
    }
    Ok(())
}

fn poly_json(p: &LaurentPoly, var: char) -> Value {
    let terms: Vec<Value> = p.terms().map(|(exp, coeff)| json!([exp, coeff.to_string()])).collect();
    json!({ "text": p.render(var), "terms": terms })
}

fn ids_line<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if parts.is_empty() {
        "(none)".to_string()
    } else {
        parts.join(" ")
    }
}

fn ids_json<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(|x| Value::String(x.to_string())).collect())
}

fn execute(command: &Command, config: &Config) -> Result<Rendered, String> {
    match command {
        Command::Qpoly { file } => {
            let g = load_graph(file)?;
            let p = q_polynomial_capped(g.underlying(), config.recursion_cap)
                .map_err(|e| e.to_string())?;
            Ok(Rendered::ok(format!("{p}\n"), json!({ "q": poly_json(&p, 'A') })))
        }
        Command::Tutte { file } => {
            let g = load_graph(file)?;
            let p = tutte_neg_eval_capped(g.underlying(), config.subset_cap)
                .map_err(|e| e.to_string())?;
            Ok(Rendered::ok(format!("{}\n", p.render('t')), json!({ "tutte_eval": poly_json(&p, 't') })))
        }
        Command::Bracket { file } => {
            let g = load_graph(file)?;
            let d = build_medial(&g);
            let b = kauffman_bracket_capped(&d, config.state_cap).map_err(|e| e.to_string())?;
            let info = b.degree_info();
            let mut text = format!("{b}\n");
            let json = match info {
                Some(info) => {
                    writeln!(text, "span: {}", info.span).unwrap();
                    let quarter = (info.span % 4 == 0).then(|| info.span / 4);
                    if let Some(q) = quarter {
                        writeln!(text, "span/4: {q}").unwrap();
                    }
                    json!({ "bracket": poly_json(&b, 'A'), "span": info.span, "span_over_four": quarter })
                }
                None => json!({ "bracket": poly_json(&b, 'A'), "span": Value::Null, "span_over_four": Value::Null }),
            };
            Ok(Rendered::ok(text, json))
        }
        Command::Dual { file } => {
            let g = load_graph(file)?;
            let text = g.dual().render();
            let json = json!({ "dual": text });
            Ok(Rendered::ok(text, json))
        }
        Command::Components { file } => {
            let g = load_graph(file)?;
            let n = build_medial(&g).link_components();
            Ok(Rendered::ok(format!("{n}\n"), json!({ "link_components": n })))
        }
        Command::Cutsets { file } => {
            let g = load_graph(file)?;
            let und = g.underlying();
            let family = all_maximal_pds(und).map_err(|e| e.to_string())?;
            let info = und.multiplicity_info().map_err(|e| e.to_string())?;
            let mut text = String::from("pairwise-disconnecting sets:\n");
            if family.is_empty() {
                text.push_str("(none)\n");
            }
            for set in &family {
                writeln!(text, "{}", ids_line(set.iter())).unwrap();
            }
            text.push_str("maximal multiple edges:\n");
            if info.maximal_multiple_edges.is_empty() {
                text.push_str("(none)\n");
            }
            for class in &info.maximal_multiple_edges {
                writeln!(text, "{}", ids_line(class.iter())).unwrap();
            }
            let json = json!({
                "pairwise_disconnecting_sets":
                    Value::Array(family.iter().map(|s| ids_json(s.iter())).collect()),
                "maximal_multiple_edges":
                    Value::Array(info.maximal_multiple_edges.iter().map(|s| ids_json(s.iter())).collect()),
            });
            Ok(Rendered::ok(text, json))
        }
        Command::Flip { file, edge } => {
            let g = load_graph(file)?;
            let e = parse_edge(edge)?;
            check_recursion_cap(&g, config.recursion_cap)?;
            let p = q_after_flip(g.underlying(), e).map_err(|err| err.to_string())?;
            Ok(Rendered::ok(format!("{p}\n"), json!({ "q_flipped": poly_json(&p, 'A') })))
        }
        Command::Classify { file, edge, assume_split, assume_nonsplit } => {
            let g = load_graph(file)?;
            let e = parse_edge(edge)?;
            let assumption = if *assume_split {
                SplitAssumption::AssertedSplit
            } else if *assume_nonsplit {
                SplitAssumption::AssertedNonsplit
            } else {
                SplitAssumption::Auto
            };
            let verdict =
                classify_edge(g.underlying(), e, assumption).map_err(|err| err.to_string())?;
            Ok(Rendered::ok(verdict_text(&verdict), verdict_json(&verdict)))
        }
        Command::ClassifyAll { file } => {
            let g = load_graph(file)?;
            let verdicts = classify_all(g.underlying(), SplitAssumption::Auto)
                .map_err(|err| err.to_string())?;
            let mut text = String::new();
            for v in &verdicts {
                let clause = match v.matched_clause {
                    Some(c) => format!("  {}", c.label()),
                    None => String::new(),
                };
                writeln!(
                    text,
                    "{}: {} ({}){}",
                    v.edge,
                    v.verdict.token(),
                    v.split_status.label(),
                    clause
                )
                .unwrap();
            }
            let mut caveats: Vec<&str> = Vec::new();
            for v in &verdicts {
                for c in &v.caveats {
                    if !caveats.contains(&c.as_str()) {
                        caveats.push(c);
                    }
                }
            }
            for c in &caveats {
                writeln!(text, "caveat: {c}").unwrap();
            }
            let json = json!({
                "edges": Value::Array(verdicts.iter().map(verdict_json).collect()),
            });
            Ok(Rendered::ok(text, json))
        }
        Command::Corollary { file, which } => {
            let g = load_graph(file)?;
            let report = match which {
                1 => corollary_knot_check(&g).map_err(|err| err.to_string())?,
                2 => corollary_simple_check(&g).map_err(|err| err.to_string())?,
                _ => unreachable!("clap restricts the range"),
            };
            Ok(Rendered::ok(corollary_text(&report), corollary_json(&report)))
        }
        Command::Verify { file, edge } => {
            let g = load_graph(file)?;
            let edge = edge.as_deref().map(parse_edge).transpose()?;
            check_recursion_cap(&g, config.recursion_cap)?;
            let edges = g.underlying().edge_count();
            if edges > config.state_cap {
                return Err(DiagramError::CapExceeded { crossings: edges, cap: config.state_cap }
                    .to_string());
            }
            if edges > config.subset_cap {
                return Err(PolyError::CapExceeded { edges, cap: config.subset_cap }.to_string());
            }
            let report = verify_graph(&g, edge).map_err(|err| err.to_string())?;
            Ok(Rendered::ok(verify_text(&report), verify_json(&report)))
        }
        Command::Selftest { max_edges } => selftest(*max_edges),
    }
}

fn verdict_text(v: &EdgeVerdict) -> String {
    let mut text = String::new();
    writeln!(text, "edge: {}", v.edge).unwrap();
    writeln!(text, "multiplicity: {}", v.multiplicity).unwrap();
    writeln!(text, "split status: {}", v.split_status.label()).unwrap();
    writeln!(text, "deletion bridges: {}", ids_line(v.facts.deletion_bridges.iter())).unwrap();
    writeln!(text, "common neighbors: {}", ids_line(v.facts.common_neighbors.iter())).unwrap();
    let partners = v.facts.parallel.iter().map(|p| {
        format!(
            "{} ({}, {})",
            p.partner,
            if p.connected { "connected" } else { "disconnected" },
            if p.bridgeless { "bridgeless" } else { "has bridges" }
        )
    });
    writeln!(text, "parallel partners: {}", ids_line(partners)).unwrap();
    writeln!(text, "verdict: {}", v.verdict.token()).unwrap();
    match v.matched_clause {
        Some(clause) => writeln!(text, "clause: {}", clause.label()).unwrap(),
        None => writeln!(text, "clause: (none)").unwrap(),
    }
    for caveat in &v.caveats {
        writeln!(text, "caveat: {caveat}").unwrap();
    }
    text
}

fn verdict_json(v: &EdgeVerdict) -> Value {
    json!({
        "edge": v.edge.to_string(),
        "multiplicity": v.multiplicity,
        "split_status": v.split_status.label(),
        "deletion_bridges": ids_json(v.facts.deletion_bridges.iter()),
        "common_neighbors": ids_json(v.facts.common_neighbors.iter()),
        "parallel_partners": Value::Array(
            v.facts
                .parallel
                .iter()
                .map(|p| {
                    json!({
                        "partner": p.partner.to_string(),
                        "connected": p.connected,
                        "bridgeless": p.bridgeless,
                    })
                })
                .collect()
        ),
        "verdict": v.verdict.token(),
        "clause": v.matched_clause.map(|c| c.label()),
        "caveats": v.caveats,
    })
}

fn corollary_text(r: &CorollaryReport) -> String {
    let mut text = String::new();
    let label = if r.which == 1 { "multigraph conditions" } else { "simple-graph conditions" };
    writeln!(text, "check: {label}").unwrap();
    writeln!(text, "knot: {}", if r.knot { "yes" } else { "no" }).unwrap();
    for c in &r.conditions {
        match (&c.pass, &c.witness) {
            (true, _) => writeln!(text, "condition {}: pass", c.name).unwrap(),
            (false, Some(w)) => writeln!(text, "condition {}: fail ({w})", c.name).unwrap(),
            (false, None) => writeln!(text, "condition {}: fail", c.name).unwrap(),
        }
    }
    writeln!(text, "result: {}", if r.pass { "pass" } else { "fail" }).unwrap();
    text
}

fn corollary_json(r: &CorollaryReport) -> Value {
    json!({
        "which": r.which,
        "knot": r.knot,
        "conditions": Value::Array(
            r.conditions
                .iter()
                .map(|c| json!({ "name": c.name, "pass": c.pass, "witness": c.witness }))
                .collect()
        ),
        "conditions_pass": r.conditions_pass,
        "pass": r.pass,
    })
}

fn verify_text(r: &VerificationReport) -> String {
    let mut text = String::new();
    writeln!(text, "graph: {}", r.graph).unwrap();
    if let Some(e) = r.edge {
        writeln!(text, "edge: {e}").unwrap();
    }
    for check in &r.checks {
        match &check.status {
            CheckStatus::Pass => writeln!(text, "check {}: pass", check.name).unwrap(),
            CheckStatus::Fail { left, right } => {
                writeln!(text, "check {}: fail (computed {left}, expected {right})", check.name)
                    .unwrap()
            }
            CheckStatus::Skipped { reason } => {
                writeln!(text, "check {}: skipped ({reason})", check.name).unwrap()
            }
        }
    }
    writeln!(text, "result: {} passed, {} failed, {} skipped", r.passed(), r.failed(), r.skipped())
        .unwrap();
    text
}

fn verify_json(r: &VerificationReport) -> Value {
    json!({
        "graph": r.graph,
        "edge": r.edge.map(|e| e.to_string()),
        "checks": Value::Array(
            r.checks
                .iter()
                .map(|c| match &c.status {
                    CheckStatus::Pass => json!({ "name": c.name, "status": "pass" }),
                    CheckStatus::Fail { left, right } => json!({
                        "name": c.name, "status": "fail", "computed": left, "expected": right,
                    }),
                    CheckStatus::Skipped { reason } => {
                        json!({ "name": c.name, "status": "skipped", "reason": reason })
                    }
                })
                .collect()
        ),
        "passed": r.passed(),
        "failed": r.failed(),
        "skipped": r.skipped(),
    })
}

/// Runs every identity over the corpus and an enumerated sweep, counting as
/// it goes; any failure flips the exit status.
fn selftest(max_edges: usize) -> Result<Rendered, String> {
    let mut failures: Vec<String> = Vec::new();
    let corpus = corpus::all();

    let mut corpus_checks = (0usize, 0usize, 0usize);
    for plane in &corpus {
        let report = verify_graph(plane, None).map_err(|err| err.to_string())?;
        corpus_checks.0 += report.passed();
        corpus_checks.1 += report.failed();
        corpus_checks.2 += report.skipped();
        for check in &report.checks {
            if let CheckStatus::Fail { left, right } = &check.status {
                failures.push(format!(
                    "{}: {} (computed {left}, expected {right})",
                    plane.name(),
                    check.name
                ));
            }
        }
    }

    let mut flip_spots = 0usize;
    for plane in &corpus {
        let und = plane.underlying();
        if !und.is_connected() || und.loop_edge().is_some() || !und.is_bridgeless() {
            continue;
        }
        if und.edge_count() == 0 {
            continue;
        }
        let e = und.edge_ids().next().expect("edges are present");
        let report = verify_graph(plane, Some(e)).map_err(|err| err.to_string())?;
        flip_spots += 1;
        for check in &report.checks {
            if let CheckStatus::Fail { left, right } = &check.status {
                failures.push(format!(
                    "{} at {e}: {} (computed {left}, expected {right})",
                    plane.name(),
                    check.name
                ));
            }
        }
    }

    let everything =
        enumerate_connected(max_edges + 1, max_edges, false).map_err(|err| err.to_string())?;
    let mut rank_count = 0usize;
    let mut top_count = 0usize;
    let mut bottom_count = 0usize;
    let mut extreme_count = 0usize;
    let mut flip_count = 0usize;
    let mut rii_count = 0usize;
    for g in &everything {
        let q = q_polynomial(g);
        match q_via_tutte(g) {
            Ok(via) if via == q => rank_count += 1,
            Ok(via) => failures.push(format!(
                "rank expansion disagrees on a {}-vertex {}-edge graph: {via} vs {q}",
                g.vertex_count(),
                g.edge_count()
            )),
            Err(err) => failures.push(format!("rank expansion failed: {err}")),
        }

        let evaluation = tutte_neg_eval(g);
        match dl_extreme_coeffs(g) {
            Ok(end)
                if evaluation.coeff(end.degree) == end.extreme_coeff
                    && evaluation.coeff(end.degree - 1) == end.second_coeff =>
            {
                top_count += 1
            }
            Ok(_) => failures.push(format!(
                "top-end coefficients disagree on a {}-vertex {}-edge graph",
                g.vertex_count(),
                g.edge_count()
            )),
            Err(err) => failures.push(format!("top-end formula failed: {err}")),
        }

        if !g.is_bridgeless() {
            continue;
        }
        match dual_extreme_coeffs(g) {
            Ok(end)
                if evaluation.coeff(end.degree) == end.extreme_coeff
                    && evaluation.coeff(end.degree + 1) == end.second_coeff =>
            {
                bottom_count += 1
            }
            Ok(_) => failures.push(format!(
                "bottom-end coefficients disagree on a {}-vertex {}-edge graph",
                g.vertex_count(),
                g.edge_count()
            )),
            Err(err) => failures.push(format!("bottom-end formula failed: {err}")),
        }

        match polynomials::extreme_coeff_predictions(g) {
            Ok(pred) => {
                let hits = [pred.highest, pred.second_highest, pred.second_lowest, pred.lowest]
                    .iter()
                    .all(|(deg, coeff)| q.coeff(*deg) == *coeff);
                if hits {
                    extreme_count += 1;
                } else {
                    failures.push(format!(
                        "extreme coefficients disagree on a {}-vertex {}-edge graph: {q}",
                        g.vertex_count(),
                        g.edge_count()
                    ));
                }
            }
            Err(err) => failures.push(format!("extreme predictions failed: {err}")),
        }

        let q_span = q.degree_info().expect("Q is nonzero here").span;
        let v = g.vertex_count() as i64;
        let m = g.edge_count() as i64;
        for e in g.edge_ids() {
            let verdict = match classify_edge(g, e, SplitAssumption::Auto) {
                Ok(verdict) => verdict,
                Err(err) => {
                    failures.push(format!("classification failed at {e}: {err}"));
                    continue;
                }
            };
            let flipped = q_after_flip(g, e).map_err(|err| err.to_string())?;
            let f_span = flipped.degree_info().map(|i| i.span).unwrap_or(0);
            flip_count += 1;
            if verdict.split_status.certified() {
                if q_span - f_span != 4 {
                    failures.push(format!(
                        "split flip at {e} dropped the span by {} instead of 4",
                        q_span - f_span
                    ));
                }
            } else {
                if f_span > q_span - 8 {
                    failures.push(format!(
                        "flip at {e} dropped the span by only {}",
                        q_span - f_span
                    ));
                }
                if (f_span == q_span - 8) != (verdict.verdict == Verdict::ExactlyTwo) {
                    failures.push(format!(
                        "span drop {} disagrees with verdict {} at {e}",
                        q_span - f_span,
                        verdict.verdict.token()
                    ));
                }
            }
            if verdict.multiplicity == 1 {
                let in_family =
                    maximal_pds_of_edge(g, e).map_err(|err| err.to_string())?.is_some();
                let top = parity(m - v + 1) * BigInt::from(i64::from(in_family));
                if flipped.coeff(3 * m - 2 * v) != top {
                    failures.push(format!("flipped top coefficient disagrees at {e}"));
                }
                let es = es_identity_check(g, e).map_err(|err| err.to_string())?;
                let bottom = parity(v - 1)
                    * BigInt::from(es.simple_edges_contracted as i64 + 2 - es.simple_edges as i64);
                if flipped.coeff(-m - 2 * v + 8) != bottom {
                    failures.push(format!("flipped bottom coefficient disagrees at {e}"));
                }
                if !es.holds {
                    failures.push(format!("pair-count identity fails at {e}"));
                }
            } else if let Some(p) = verdict.facts.parallel.iter().find(|p| p.connected) {
                let rest = g.delete_edges([e, p.partner]).map_err(|err| err.to_string())?;
                rii_count += 1;
                if flipped != q_polynomial(&rest) {
                    failures.push(format!("parallel-deletion identity fails at {e}"));
                }
            }
        }
    }

    let mut detected = 0usize;
    let mut bridge_detects = false;
    for plane in &corpus {
        let honest = q_polynomial(plane.underlying());
        let corrupted =
            kauffman_bracket_with(&build_medial(plane), SmoothingConvention::Mirrored);
        if corrupted != honest {
            detected += 1;
            if plane.name() == "b1" {
                bridge_detects = true;
            }
        }
    }
    if detected == 0 {
        failures.push("negative control: the corrupted convention went unnoticed".to_string());
    }
    if !bridge_detects {
        failures
            .push("negative control: the single-bridge graph missed the corruption".to_string());
    }

    let pass = failures.is_empty();
    let mut text = String::new();
    writeln!(
        text,
        "corpus graphs: {}, verification checks: {} passed, {} failed, {} skipped",
        corpus.len(),
        corpus_checks.0,
        corpus_checks.1,
        corpus_checks.2
    )
    .unwrap();
    writeln!(text, "corpus flip spot-checks: {flip_spots} graphs").unwrap();
    writeln!(text, "enumerated connected loopless graphs (max {max_edges} edges): {}", everything.len())
        .unwrap();
    writeln!(text, "rank-expansion identity: {rank_count} passed").unwrap();
    writeln!(text, "top-end coefficients: {top_count} passed").unwrap();
    writeln!(text, "bottom-end coefficients: {bottom_count} passed").unwrap();
    writeln!(text, "extreme coefficients: {extreme_count} passed").unwrap();
    writeln!(text, "flip checks: {flip_count} edges").unwrap();
    writeln!(text, "parallel-deletion identity: {rii_count} pairs").unwrap();
    writeln!(text, "negative control: corrupted convention detected on {detected} of {} corpus graphs", corpus.len())
        .unwrap();
    for failure in &failures {
        writeln!(text, "FAIL {failure}").unwrap();
    }
    writeln!(text, "result: {}", if pass { "pass" } else { "fail" }).unwrap();

    let json = json!({
        "corpus_graphs": corpus.len(),
        "verification": {
            "passed": corpus_checks.0,
            "failed": corpus_checks.1,
            "skipped": corpus_checks.2,
        },
        "corpus_flip_spot_checks": flip_spots,
        "max_edges": max_edges,
        "enumerated_graphs": everything.len(),
        "rank_expansion_passed": rank_count,
        "top_end_passed": top_count,
        "bottom_end_passed": bottom_count,
        "extreme_coefficients_passed": extreme_count,
        "flip_checks": flip_count,
        "parallel_deletion_pairs": rii_count,
        "negative_control_detections": detected,
        "failures": failures,
        "pass": pass,
    });
    Ok(Rendered { text, json, status: i32::from(!pass) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus_path(name: &str) -> String {
        format!("{}/corpus/{name}.g", env!("CARGO_MANIFEST_DIR"))
    }

    fn run_args(args: &[&str]) -> Outcome {
        let mut argv = vec!["qknot".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        run(argv)
    }

    #[test]
    fn qpoly_prints_the_polynomial() {
        let out = run_args(&["qpoly", &corpus_path("c2")]);
        assert_eq!(out.status, 0, "stderr: {}", out.stderr);
        assert_eq!(out.stdout, "-A^-4 - A^4\n");
        assert!(out.stderr.is_empty());
    }

    #[test]
    fn structured_output_mirrors_the_text() {
        let out = run_args(&["qpoly", &corpus_path("c2"), "--format", "structured"]);
        assert_eq!(out.status, 0);
        let value: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(value["q"]["text"], "-A^-4 - A^4");
        assert_eq!(value["q"]["terms"], json!([[-4, "-1"], [4, "-1"]]));
    }

    #[test]
    fn tutte_uses_the_t_variable() {
        let out = run_args(&["tutte", &corpus_path("c3")]);
        assert_eq!(out.stdout, "-t^-1 - t + t^2\n");
    }

    #[test]
    fn bracket_reports_the_span() {
        let out = run_args(&["bracket", &corpus_path("c3")]);
        assert_eq!(out.stdout, "A^-7 - A^-3 - A^5\nspan: 12\nspan/4: 3\n");
    }

    #[test]
    fn components_counts_strands() {
        let out = run_args(&["components", &corpus_path("c4")]);
        assert_eq!(out.stdout, "2\n");
    }

    #[test]
    fn dual_round_trips_through_the_parser() {
        let out = run_args(&["dual", &corpus_path("c3")]);
        assert_eq!(out.status, 0);
        let dual = SignedPlaneGraph::parse(&out.stdout).unwrap();
        assert_eq!(dual.underlying().vertex_count(), 2);
        assert_eq!(dual.underlying().edge_count(), 3);
    }

    #[test]
    fn cutsets_lists_both_families() {
        let out = run_args(&["cutsets", &corpus_path("c5")]);
        assert_eq!(
            out.stdout,
            "pairwise-disconnecting sets:\ne1 e2 e3 e4 e5\nmaximal multiple edges:\n(none)\n"
        );
        let theta = run_args(&["cutsets", &corpus_path("theta3")]);
        assert_eq!(
            theta.stdout,
            "pairwise-disconnecting sets:\n(none)\nmaximal multiple edges:\ne1 e2 e3\n"
        );
    }

    #[test]
    fn flip_prints_the_changed_polynomial() {
        let out = run_args(&["flip", &corpus_path("c3"), "--edge", "e1"]);
        assert_eq!(out.stdout, "-A^3\n");
    }

    #[test]
    fn classify_shows_verdict_clause_and_caveats() {
        let out = run_args(&["classify", &corpus_path("c5"), "--edge", "e1"]);
        assert_eq!(out.status, 0);
        assert!(out.stdout.contains("verdict: EXACTLY_TWO"));
        assert!(out
            .stdout
            .contains("clause: deletion leaves bridges and the endpoints share no neighbor"));
        assert!(out.stdout.contains("caveat: conditional on L̃ alternating"));

        let structured =
            run_args(&["classify", &corpus_path("c5"), "--edge", "e1", "--format", "structured"]);
        let value: Value = serde_json::from_str(&structured.stdout).unwrap();
        assert_eq!(value["verdict"], "EXACTLY_TWO");
        assert_eq!(value["split_status"], "assumed nonsplit");
        assert_eq!(value["caveats"][0], "conditional on L̃ alternating");
    }

    #[test]
    fn classify_honors_the_assumption_flags() {
        let out =
            run_args(&["classify", &corpus_path("c5"), "--edge", "e1", "--assume-split"]);
        assert!(out.stdout.contains("split status: asserted split"));
        assert!(out.stdout.contains("verdict: NOT_EXACTLY_TWO"));
        let conflict = run_args(&[
            "classify",
            &corpus_path("c5"),
            "--edge",
            "e1",
            "--assume-split",
            "--assume-nonsplit",
        ]);
        assert_eq!(conflict.status, 2);
    }

    #[test]
    fn classify_all_summarizes_every_edge() {
        let out = run_args(&["classify-all", &corpus_path("theta3")]);
        assert_eq!(out.status, 0);
        for e in ["e1", "e2", "e3"] {
            assert!(out.stdout.contains(&format!("{e}: NOT_EXACTLY_TWO")));
        }
        assert!(out.stdout.contains("caveat: conditional on L̃ alternating"));
    }

    #[test]
    fn corollary_reports_conditions() {
        let pass = run_args(&["corollary", &corpus_path("c5"), "--which", "2"]);
        assert!(pass.stdout.ends_with("result: pass\n"));
        let fail = run_args(&["corollary", &corpus_path("theta3"), "--which", "1"]);
        assert!(fail.stdout.contains("condition some parallel pair of each class deletes cleanly: fail"));
        assert!(fail.stdout.ends_with("result: fail\n"));
    }

    #[test]
    fn verify_prints_per_check_lines() {
        let out = run_args(&["verify", &corpus_path("c5"), "--edge", "e1"]);
        assert_eq!(out.status, 0);
        assert!(out.stdout.starts_with("graph: c5\nedge: e1\n"));
        assert!(out.stdout.contains("check bracket-matches-recursion: pass"));
        assert!(out.stdout.contains(", 0 failed,"));
    }

    #[test]
    fn domain_errors_exit_one_with_one_line() {
        let missing = run_args(&["qpoly", "/nonexistent/file.g"]);
        assert_eq!(missing.status, 1);
        assert_eq!(missing.stderr.lines().count(), 1);
        assert!(missing.stdout.is_empty());

        let unknown_edge = run_args(&["flip", &corpus_path("c3"), "--edge", "e9"]);
        assert_eq!(unknown_edge.status, 1);
        assert_eq!(unknown_edge.stderr.lines().count(), 1);

        let malformed_edge = run_args(&["flip", &corpus_path("c3"), "--edge", "x1"]);
        assert_eq!(malformed_edge.status, 1);

        let bridge = run_args(&["classify", &corpus_path("b1"), "--edge", "e1"]);
        assert_eq!(bridge.status, 1);
        assert!(bridge.stderr.contains("bridge"));
    }

    #[test]
    fn usage_errors_exit_two() {
        let out = run_args(&["qpoly"]);
        assert_eq!(out.status, 2);
        assert_eq!(out.stderr.lines().count(), 1);
        let nonsense = run_args(&["frobnicate"]);
        assert_eq!(nonsense.status, 2);
    }

    #[test]
    fn caps_are_enforced_and_overridable() {
        let blocked = run_args(&["qpoly", &corpus_path("c5"), "--recursion-cap", "4"]);
        assert_eq!(blocked.status, 1);
        assert!(blocked.stderr.contains("cap"));
        let allowed = run_args(&["qpoly", &corpus_path("c5"), "--recursion-cap", "5"]);
        assert_eq!(allowed.status, 0);
        let zero = run_args(&["qpoly", &corpus_path("c5"), "--recursion-cap", "0"]);
        assert_eq!(zero.status, 2);

        let bracket = run_args(&["bracket", &corpus_path("c5"), "--state-cap", "4"]);
        assert_eq!(bracket.status, 1);
        let tutte = run_args(&["tutte", &corpus_path("c5"), "--subset-cap", "4"]);
        assert_eq!(tutte.status, 1);
    }

    #[test]
    fn help_and_version_exit_zero() {
        let help = run_args(&["--help"]);
        assert_eq!(help.status, 0);
        assert!(help.stdout.contains("qpoly"));
        let version = run_args(&["--version"]);
        assert_eq!(version.status, 0);
    }

    #[test]
    fn selftest_passes_quickly_at_small_bounds() {
        let out = run_args(&["selftest", "--max-edges", "4"]);
        assert_eq!(out.status, 0, "stdout: {}", out.stdout);
        assert!(out.stdout.ends_with("result: pass\n"));
        assert!(out.stdout.contains("negative control"));
        let capped = run_args(&["selftest", "--max-edges", "11"]);
        assert_eq!(capped.status, 1);
    }
}
