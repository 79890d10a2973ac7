//! Command-line front end: expansions, cumulants, limits, Monte-Carlo runs
//! and DOT export.
//!
//! Exit codes: 0 success, 2 parse error, 3 enumeration guard, 4 numeric or
//! contract error.

use std::collections::HashMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use genus::asymptotics::{
    limit_covariance_poly, limit_moment_poly, spoke_covariance_poly, SpokeProblem,
};
use genus::cumulants::{
    centred_cumulant_with, connected_expand_with, cumulant_with, CentredExpression, Segment,
};
use genus::dot::export_dot;
use genus::expr::{parse_expression, parse_word, parse_word_list, TraceWord};
use genus::gluing::{
    compile, enumerate_gluings, expand_with, EngineError, ExpandOptions, ExpansionTerm,
    DEFAULT_MAX_CLASS_LETTERS,
};
use genus::mc::{estimate, estimate_covariance, Matrix, McError, SampleConfig};
use genus::perm::{FaceData, Premap, SignedPermutation};

#[derive(Parser)]
#[command(name = "genus", about = "Euler-characteristic expansions of Gaussian matrix traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a trace expression into collected terms.
    Expand(ExpandArgs),
    /// Euler characteristic, connectivity, orientability and classification
    /// of an explicit (γ, π) gluing.
    Chi(ChiArgs),
    /// Classical cumulant of one or more traces.
    Cumulant(CumulantArgs),
    /// Asymptotic quantities: limit moments, covariances, spoke diagrams.
    Limit(LimitArgs),
    /// Seeded Monte-Carlo estimation against the expansion.
    Mc(McArgs),
    /// DOT export of one gluing.
    ExportDot(ExportDotArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Expression, e.g. "tr(Z Y1 Z' Y2)".
    #[arg(long)]
    expr: String,
    /// moment (all gluings) or connected (single-component gluings).
    #[arg(long, default_value = "moment")]
    mode: String,
    #[arg(long)]
    json: bool,
    /// Report unnormalized traces: multiply by N per trace.
    #[arg(long = "Tr")]
    unnormalized: bool,
}

#[derive(Args)]
struct ChiArgs {
    /// Face permutation γ in cycle notation, e.g. "(1,2,3,4,5)(6,7,8)".
    #[arg(long)]
    gamma: String,
    /// Edge premap π in cycle notation, e.g. "(1,-7)(-1,7)…".
    #[arg(long)]
    pi: String,
}

#[derive(Args)]
struct CumulantArgs {
    /// Trace words, one per --trace, in reading order.  Centred segments are
    /// wrapped in braces: "{Z Z'} {T}".
    #[arg(long = "trace", required = true)]
    traces: Vec<String>,
    /// Cumulant order; must equal the number of --trace arguments.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LimitArgs {
    /// Limit moment of a single trace expression.
    #[arg(long, conflicts_with_all = ["covariance", "spokes"])]
    expr: Option<String>,
    /// Limit covariance of two traces.
    #[arg(long, num_args = 2)]
    covariance: Option<Vec<String>>,
    /// Spoke problem: two ';'-separated word lists, e.g. "Z Z Z'; T T".
    #[arg(long, num_args = 2)]
    spokes: Option<Vec<String>>,
    /// Aspect ratio c = M/N.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, conflicts_with = "cov")]
    expr: Option<String>,
    /// Covariance mode: two trace expressions.
    #[arg(long, num_args = 2)]
    cov: Option<Vec<String>>,
    #[arg(long = "N", default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON file of spectator matrices: {"Y1": [[…]], …}, row-major.
    #[arg(long = "y-file")]
    y_file: Option<String>,
}

#[derive(Args)]
struct ExportDotArgs {
    #[arg(long)]
    expr: String,
    /// Index into the deterministic gluing stream.
    #[arg(long, default_value_t = 0, conflicts_with = "pi")]
    gluing_index: usize,
    /// Explicit π in cycle notation instead of a stream index.
    #[arg(long)]
    pi: Option<String>,
}

#[derive(Serialize)]
struct TermRecord {
    coefficient: i64,
    n_exponent: i64,
    c_exponent: u32,
    traces: Vec<Vec<String>>,
}

fn term_records(terms: &[ExpansionTerm], n_shift: i64) -> Vec<TermRecord> {
    terms
        .iter()
        .map(|t| TermRecord {
            coefficient: t.coefficient,
            n_exponent: t.n_exponent + n_shift,
            c_exponent: t.c_exponent,
            traces: t
                .monomials
                .iter()
                .map(|m| {
                    m.entries()
                        .iter()
                        .map(|&(l, tr)| {
                            if tr {
                                format!("Y{l}t")
                            } else {
                                format!("Y{l}")
                            }
                        })
                        .collect()
                })
                .collect(),
        })
        .collect()
}

fn print_terms(terms: &[ExpansionTerm], n_shift: i64, json: bool) {
    let records = term_records(terms, n_shift);
    if json {
        println!("{}", serde_json::to_string_pretty(&records).unwrap());
        return;
    }
    if records.is_empty() {
        println!("0");
        return;
    }
    for r in records {
        let mut line = format!("{:+} * N^{}", r.coefficient, r.n_exponent);
        if r.c_exponent > 0 {
            line.push_str(&format!(" * c^{}", r.c_exponent));
        }
        for t in &r.traces {
            line.push_str(&format!(" * tr({})", t.join(" ")));
        }
        println!("{line}");
    }
}

enum CliError {
    Parse(String),
    Guard(String),
    Contract(String),
}

impl From<genus::expr::ParseError> for CliError {
    fn from(e: genus::expr::ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<genus::perm::PermError> for CliError {
    fn from(e: genus::perm::PermError) -> Self {
        match e {
            genus::perm::PermError::Malformed(_)
            | genus::perm::PermError::OutOfRange(_, _)
            | genus::perm::PermError::Repeated(_) => CliError::Parse(e.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            EngineError::EmptyExpression => CliError::Parse(e.to_string()),
            other => CliError::Contract(other.to_string()),
        }
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        match e {
            McError::Engine(inner) => inner.into(),
            other => CliError::Contract(other.to_string()),
        }
    }
}

fn options_from_env() -> ExpandOptions {
    let max = std::env::var("GENUS_MAX_LETTERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_CLASS_LETTERS);
    ExpandOptions {
        max_class_letters: max,
        connected_only: false,
    }
}

fn cmd_expand(args: &ExpandArgs) -> Result<(), CliError> {
    let expr = parse_expression(&args.expr)?;
    let opts = options_from_env();
    let terms = match args.mode.as_str() {
        "moment" => expand_with(&compile(&expr)?, &opts)?,
        "connected" => connected_expand_with(&expr, &opts)?,
        other => return Err(CliError::Parse(format!("unknown mode `{other}`"))),
    };
    let shift = if args.unnormalized {
        expr.0.len() as i64
    } else {
        0
    };
    print_terms(&terms, shift, args.json);
    Ok(())
}

fn infer_n(texts: &[&str]) -> usize {
    texts
        .iter()
        .flat_map(|t| {
            t.split(|c: char| !(c.is_ascii_digit() || c == '-'))
                .filter_map(|tok| tok.parse::<i64>().ok())
        })
        .map(|v| v.unsigned_abs() as usize)
        .max()
        .unwrap_or(0)
}

fn cmd_chi(args: &ChiArgs) -> Result<(), CliError> {
    let n = infer_n(&[args.gamma.as_str(), args.pi.as_str()]);
    let gamma = SignedPermutation::parse_cycles(&args.gamma, n)?;
    let faces = FaceData::lift_faces(&gamma)?;
    let pi = Premap::new(SignedPermutation::parse_cycles(&args.pi, n)?)?;
    let chi = faces.euler_characteristic(&pi)?;
    let components = faces.face_components(&pi);
    let orientable = faces.orientability(&pi);
    let classes = faces.classify_surface(&pi)?;
    println!("chi = {chi}");
    println!("components = {}", components.len());
    for (i, block) in components.iter().enumerate() {
        let faces_list: Vec<String> = block.iter().map(|f| format!("{}", f + 1)).collect();
        println!(
            "component {} (faces {}): {}, {}",
            i + 1,
            faces_list.join(","),
            if orientable[i] {
                "orientable"
            } else {
                "nonorientable"
            },
            classes[i]
        );
    }
    Ok(())
}

/// Parses a trace spec with optional centred groups, e.g. "{Z Z'} T {W}".
fn parse_centred_trace(text: &str) -> Result<Vec<Segment>, CliError> {
    let mut segments = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(open) = rest.strip_prefix('{') {
            let close = open
                .find('}')
                .ok_or_else(|| CliError::Parse(format!("unclosed brace in `{text}`")))?;
            let word = parse_word(&open[..close])?;
            segments.push(Segment {
                word,
                centred: true,
            });
            rest = open[close + 1..].trim_start();
        } else {
            let end = rest.find('{').unwrap_or(rest.len());
            let plain = rest[..end].trim();
            if !plain.is_empty() {
                segments.push(Segment {
                    word: parse_word(plain)?,
                    centred: false,
                });
            }
            rest = rest[end..].trim_start();
        }
    }
    Ok(segments)
}

fn cmd_cumulant(args: &CumulantArgs) -> Result<(), CliError> {
    if let Some(order) = args.order {
        if order != args.traces.len() {
            return Err(CliError::Parse(format!(
                "--order {order} does not match {} trace(s)",
                args.traces.len()
            )));
        }
    }
    let opts = options_from_env();
    let any_centred = args.traces.iter().any(|t| t.contains('{'));
    let terms = if any_centred {
        let traces: Result<Vec<Vec<Segment>>, CliError> =
            args.traces.iter().map(|t| parse_centred_trace(t)).collect();
        centred_cumulant_with(&CentredExpression { traces: traces? }, &opts)?
    } else {
        let words: Result<Vec<TraceWord>, _> =
            args.traces.iter().map(|t| parse_word(t)).collect();
        cumulant_with(&words?, &opts)?
    };
    print_terms(&terms, 0, args.json);
    Ok(())
}

fn cmd_limit(args: &LimitArgs) -> Result<(), CliError> {
    if let Some(expr) = &args.expr {
        let parsed = parse_expression(expr)?;
        if parsed.0.len() != 1 {
            return Err(CliError::Parse("--expr takes a single trace".into()));
        }
        let poly = limit_moment_poly(&parsed.0[0])?;
        println!("{}", poly.eval(args.c));
    } else if let Some(pair) = &args.covariance {
        let t1 = single_trace(&pair[0])?;
        let t2 = single_trace(&pair[1])?;
        let poly = limit_covariance_poly(&t1, &t2)?;
        println!("{}", poly.eval(args.c));
    } else if let Some(pair) = &args.spokes {
        let problem = SpokeProblem {
            a_words: parse_word_list(&pair[0])?,
            b_words: parse_word_list(&pair[1])?,
        };
        let poly = spoke_covariance_poly(&problem)?;
        println!("{}", poly.eval(args.c));
    } else {
        return Err(CliError::Parse(
            "one of --expr, --covariance, --spokes is required".into(),
        ));
    }
    Ok(())
}

fn single_trace(text: &str) -> Result<TraceWord, CliError> {
    // Accept either "tr(Z Z')" or a bare word "Z Z'".
    if text.trim_start().starts_with("tr") {
        let e = parse_expression(text)?;
        if e.0.len() != 1 {
            return Err(CliError::Parse("expected a single trace".into()));
        }
        Ok(e.0.into_iter().next().unwrap())
    } else {
        Ok(parse_word(text)?)
    }
}

fn load_y_matrices(path: &str, n: usize) -> Result<HashMap<u32, Matrix>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Contract(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("bad y-file: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Parse("y-file must be a JSON object".into()))?;
    let mut out = HashMap::new();
    for (key, rows) in obj {
        let label: u32 = key
            .strip_prefix('Y')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Parse(format!("bad spectator key `{key}`")))?;
        let rows = rows
            .as_array()
            .ok_or_else(|| CliError::Parse("matrix must be an array of rows".into()))?;
        if rows.len() != n {
            return Err(CliError::Contract(format!(
                "matrix {key} is {}x?, expected {n}x{n}",
                rows.len()
            )));
        }
        let mut mat = Matrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| CliError::Contract(format!("row {i} of {key} is not length {n}")))?;
            for (j, v) in row.iter().enumerate() {
                mat.set(
                    i,
                    j,
                    v.as_f64()
                        .ok_or_else(|| CliError::Parse("matrix entries must be numbers".into()))?,
                );
            }
        }
        out.insert(label, mat);
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportRecord {
    mean: f64,
    std_error: f64,
    expansion_value: f64,
    z_score: f64,
}

fn cmd_mc(args: &McArgs) -> Result<(), CliError> {
    let mut config = SampleConfig::new(args.n, args.samples, args.seed);
    config.c = args.c;
    if let Some(path) = &args.y_file {
        config.y_matrices = load_y_matrices(path, args.n)?;
    }
    let report = if let Some(pair) = &args.cov {
        let t1 = single_trace(&pair[0])?;
        let t2 = single_trace(&pair[1])?;
        estimate_covariance(&t1, &t2, &config)?
    } else if let Some(expr) = &args.expr {
        estimate(&parse_expression(expr)?, &config)?
    } else {
        return Err(CliError::Parse("one of --expr, --cov is required".into()));
    };
    let record = ReportRecord {
        mean: report.mean,
        std_error: report.std_error,
        expansion_value: report.expansion_value,
        z_score: report.z_score,
    };
    println!("{}", serde_json::to_string_pretty(&record).unwrap());
    Ok(())
}

fn cmd_export_dot(args: &ExportDotArgs) -> Result<(), CliError> {
    let expr = parse_expression(&args.expr)?;
    let spec = compile(&expr)?;
    let opts = options_from_env();
    let gluing = if let Some(pi_text) = &args.pi {
        let pi = Premap::new(SignedPermutation::parse_cycles(pi_text, spec.n())?)?;
        enumerate_gluings(&spec, &opts)?
            .into_iter()
            .find(|g| g.pi == pi)
            .ok_or_else(|| CliError::Contract("π is not a gluing of this expression".into()))?
    } else {
        let gluings = enumerate_gluings(&spec, &opts)?;
        gluings
            .into_iter()
            .nth(args.gluing_index)
            .ok_or_else(|| CliError::Contract("gluing index out of range".into()))?
    };
    print!("{}", export_dot(&spec, &gluing)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Expand(args) => cmd_expand(args),
        Command::Chi(args) => cmd_chi(args),
        Command::Cumulant(args) => cmd_cumulant(args),
        Command::Limit(args) => cmd_limit(args),
        Command::Mc(args) => cmd_mc(args),
        Command::ExportDot(args) => cmd_export_dot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Guard(msg)) => {
            eprintln!("guard: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Contract(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
