//! Command-line front end for the `multideg` crate.

pub mod files;

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use multideg::certify::{
    certified_minimum, certify_batch, CertifyError, IntervalSystem, DEFAULT_RADIUS, RETRY_RADII,
};
use multideg::chow::{degree_report, ChowError};
use multideg::oracle::{oracle_count, InstanceSeed};
use multideg::polyring::DEFAULT_PRIME;
use multideg::systems::{homogenized_system, lagrangian_system, minor_system};
use multideg::{BlockStructure, MultiDegree};

use files::{FileError, InstanceFile, SolutionsFile};

#[derive(Debug, Parser)]
#[command(name = "multideg", version, about = "Algebraic degree of multi-block polynomial optimization")]
pub struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print intermediate quantities.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of complex critical points of a generic instance.
    Degree(DegreeArgs),
    /// Degree for every split of the constraint total degrees into blocks.
    Table(TableArgs),
    /// Write a critical-point system for an instance file.
    Emit(EmitArgs),
    /// Compare the formula with a Gröbner basis count on random instances.
    Verify(VerifyArgs),
    /// Certify externally computed critical points.
    Certify(CertifyArgs),
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    /// Block sizes, e.g. `2,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub blocks: Vec<usize>,
    /// Multi-degree of the objective, e.g. `1,1`.
    #[arg(long)]
    pub obj: MultiDegree,
    /// Multi-degree of one constraint; repeat for each constraint.
    #[arg(long = "con")]
    pub constraints: Vec<MultiDegree>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub blocks: Vec<usize>,
    #[arg(long)]
    pub obj: MultiDegree,
    /// Total degree of one constraint; repeat for each constraint.
    #[arg(long = "total")]
    pub totals: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Lagrangian,
    Minors,
    Homogenized,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    /// Instance file.
    #[arg(long)]
    pub instance: String,
    #[arg(long, value_enum, default_value = "lagrangian")]
    pub variant: Variant,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub blocks: Vec<usize>,
    #[arg(long)]
    pub obj: MultiDegree,
    #[arg(long = "con")]
    pub constraints: Vec<MultiDegree>,
    /// Number of random instances.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    /// Seed of the first instance; the others follow consecutively.
    #[arg(long, default_value_t = 1)]
    pub first_seed: u64,
    /// Characteristic of the coefficient field.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Replaces the formula value; used to exercise the mismatch path.
    #[arg(long, hide = true)]
    pub formula_override: Option<BigUint>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub instance: String,
    /// Solutions file: x-variables then multipliers for each point.
    #[arg(long)]
    pub solutions: String,
    /// Half-width of the initial box around each point.
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    /// Do not retry inconclusive points with other radii.
    #[arg(long)]
    pub no_retry: bool,
}

/// Failure of a command, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Usage(String),
    /// Verification disagreed: exit code 1. Holds the report.
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(
    FileError,
    ChowError,
    CertifyError,
    multideg::PolyError,
    multideg::systems::SystemError,
    std::io::Error
);

type Outcome = Result<String, CliError>;

/// Runs a parsed command line. Returns the exit code; the report goes to
/// `out`, diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let mut warnings = Vec::new();
    let result = pool.install(|| match &cli.command {
        Command::Degree(a) => cmd_degree(cli, a),
        Command::Table(a) => cmd_table(cli, a),
        Command::Emit(a) => cmd_emit(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Certify(a) => cmd_certify(cli, a, &mut warnings),
    });
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(CliError::Mismatch(text)) => {
            let _ = out.write_all(text.as_bytes());
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn blocks_of(sizes: &[usize]) -> Result<BlockStructure, CliError> {
    Ok(BlockStructure::new(sizes.to_vec())?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn cmd_degree(cli: &Cli, a: &DegreeArgs) -> Outcome {
    let blocks = blocks_of(&a.blocks)?;
    let mut degrees = vec![a.obj.clone()];
    degrees.extend(a.constraints.iter().cloned());
    let report = degree_report(&blocks, &degrees)?;
    if cli.json {
        return Ok(to_json(&json!({
            "blocks": a.blocks,
            "degrees": degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "report": report,
        })));
    }
    let mut s = format!("{}\n", report.count);
    if cli.verbose {
        let _ = writeln!(s, "sigma part: {}", report.sigma_part);
        let _ = writeln!(s, "class of V: {}", report.class_of_v);
        let _ = writeln!(s, "signed coefficient: {}", report.signed);
    }
    Ok(s)
}

/// Ordered ways of writing `total` as `k` positive parts, lexicographic.
pub fn compositions(total: u32, k: usize) -> Vec<MultiDegree> {
    fn rec(total: u32, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
        if k == 1 {
            if total >= 1 {
                prefix.push(total);
                out.push(MultiDegree::new(prefix.clone()));
                prefix.pop();
            }
            return;
        }
        for first in 1..total {
            prefix.push(first);
            rec(total - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(total, k, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Serialize)]
struct TableRow {
    constraints: Vec<String>,
    #[serde(serialize_with = "serialize_display")]
    degree: BigUint,
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn cmd_table(cli: &Cli, a: &TableArgs) -> Outcome {
    let blocks = blocks_of(&a.blocks)?;
    let k = blocks.k();
    let mut rows: Vec<Vec<MultiDegree>> = vec![Vec::new()];
    for &t in &a.totals {
        let parts = compositions(t, k);
        if parts.is_empty() {
            return Err(CliError::Usage(format!(
                "total degree {t} cannot be split into {k} positive block degrees"
            )));
        }
        rows = rows
            .into_iter()
            .flat_map(|r| {
                parts.iter().map(move |p| {
                    let mut r = r.clone();
                    r.push(p.clone());
                    r
                })
            })
            .collect();
    }
    let table = rows
        .par_iter()
        .map(|cons| {
            let mut degrees = vec![a.obj.clone()];
            degrees.extend(cons.iter().cloned());
            multideg::algebraic_degree(&blocks, &degrees).map(|degree| TableRow {
                constraints: cons.iter().map(|d| d.to_string()).collect(),
                degree,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if cli.json {
        return Ok(to_json(&json!({
            "blocks": a.blocks,
            "objective": a.obj.to_string(),
            "rows": table,
        })));
    }
    let mut s = String::from("constraints\tdegree\n");
    for row in &table {
        let label = if row.constraints.is_empty() {
            "none".to_string()
        } else {
            row.constraints.join(" ")
        };
        let _ = writeln!(s, "{label}\t{}", row.degree);
    }
    Ok(s)
}

fn cmd_emit(cli: &Cli, a: &EmitArgs) -> Outcome {
    let inst = InstanceFile::read(&a.instance)?.to_instance()?;
    let system = match a.variant {
        Variant::Lagrangian => lagrangian_system(&inst)?,
        Variant::Minors => minor_system(&inst)?,
        Variant::Homogenized => homogenized_system(&inst)?,
    };
    let text = if cli.json {
        to_json(&json!({
            "variant": format!("{:?}", a.variant).to_lowercase(),
            "unknowns": system.unknowns.names().collect::<Vec<_>>(),
            "equations": system.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        }))
    } else {
        let mut s = String::new();
        if cli.verbose {
            let _ = writeln!(
                s,
                "# {} equations in {}",
                system.equations.len(),
                system.unknowns.names().collect::<Vec<_>>().join(", ")
            );
        }
        for e in &system.equations {
            let _ = writeln!(s, "{e}");
        }
        s
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

#[derive(Serialize)]
struct SeedResult {
    seed: u64,
    #[serde(serialize_with = "serialize_display")]
    formula: BigUint,
    oracle: Option<u64>,
    matches: bool,
    error: Option<String>,
}

/// Runs the verification and reports whether every seed matched.
fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Outcome {
    let blocks = blocks_of(&a.blocks)?;
    let mut degrees = vec![a.obj.clone()];
    degrees.extend(a.constraints.iter().cloned());
    let formula = match &a.formula_override {
        Some(v) => v.clone(),
        None => multideg::algebraic_degree(&blocks, &degrees)?,
    };
    multideg::PrimeField::new(a.prime)?;
    let seeds: Vec<u64> = (0..a.seeds).map(|i| a.first_seed + i).collect();
    let results: Vec<SeedResult> = seeds
        .par_iter()
        .map(|&seed| {
            let spec = InstanceSeed {
                seed,
                prime: a.prime,
                blocks: a.blocks.clone(),
                degrees: degrees.clone(),
            };
            match oracle_count(&spec) {
                Ok((_, count)) => SeedResult {
                    seed,
                    formula: formula.clone(),
                    oracle: Some(count),
                    matches: BigUint::from(count) == formula,
                    error: None,
                },
                Err(e) => SeedResult {
                    seed,
                    formula: formula.clone(),
                    oracle: None,
                    matches: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let all = results.iter().all(|r| r.matches);
    let text = if cli.json {
        to_json(&json!({
            "blocks": a.blocks,
            "degrees": degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "prime": a.prime,
            "results": results,
            "all_match": all,
        }))
    } else {
        let mut s = String::new();
        for r in &results {
            match (&r.oracle, &r.error) {
                (Some(o), _) => {
                    let verdict = if r.matches { "MATCH" } else { "MISMATCH" };
                    let _ = writeln!(s, "seed={} formula={} oracle={o} {verdict}", r.seed, r.formula);
                }
                (None, e) => {
                    let _ = writeln!(
                        s,
                        "seed={} formula={} error: {}",
                        r.seed,
                        r.formula,
                        e.as_deref().unwrap_or("unknown")
                    );
                }
            }
        }
        s
    };
    if all {
        Ok(text)
    } else {
        Err(CliError::Mismatch(text))
    }
}

fn format_point(p: &[num_complex::Complex64]) -> String {
    let coords: Vec<String> = p.iter().map(|z| format!("{:.6}", z.re)).collect();
    format!("({})", coords.join(", "))
}

fn cmd_certify(cli: &Cli, a: &CertifyArgs, warnings: &mut Vec<String>) -> Outcome {
    let inst = InstanceFile::read(&a.instance)?.to_instance()?;
    let points = SolutionsFile::read(&a.solutions)?.complex_points();
    let system = IntervalSystem::lagrangian(&inst)?;
    let expected = inst.algebraic_degree()?;
    let retry: &[f64] = if a.no_retry { &[] } else { &RETRY_RADII };
    let report = certify_batch(&system, &points, a.radius, retry)?;
    warnings.extend(report.warnings.iter().cloned());
    let minimum = certified_minimum(&report).ok();
    let complete = BigUint::from(report.distinct_certified) == expected;
    let n = inst.n();
    if cli.json {
        let outcomes: Vec<_> = report
            .outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| {
                json!({
                    "index": i,
                    "certified_unique": o.certificate.certified_unique,
                    "certified_real": o.certificate.certified_real,
                    "radius": o.radius,
                    "duplicate_of": o.duplicate_of,
                    "objective": o.certificate.objective_enclosure,
                })
            })
            .collect();
        return Ok(to_json(&json!({
            "points": points.len(),
            "distinct_certified": report.distinct_certified,
            "real_certified": report.real_certified,
            "expected": expected.to_string(),
            "complete": complete,
            "minimum": minimum.as_ref().map(|m| json!({
                "index": m.index,
                "value": m.min_value,
                "point": m.argmin.refined.mid()[..n].iter().map(|z| z.re).collect::<Vec<_>>(),
            })),
            "outcomes": outcomes,
        })));
    }
    let mut s = String::new();
    if cli.verbose {
        for (i, o) in report.outcomes.iter().enumerate() {
            let c = &o.certificate;
            let status = match (c.certified_unique, c.certified_real, o.duplicate_of) {
                (false, _, _) => "inconclusive".to_string(),
                (true, _, Some(j)) => format!("duplicate of point {j}"),
                (true, true, None) => "certified real".to_string(),
                (true, false, None) => "certified non-real".to_string(),
            };
            let _ = writeln!(s, "point {i}: {status} (radius {:e})", o.radius);
        }
    }
    let marker = if complete { "COMPLETE" } else { "INCOMPLETE" };
    let _ = writeln!(
        s,
        "{} distinct / {expected} expected - {marker}; {} real",
        report.distinct_certified, report.real_certified
    );
    match &minimum {
        Some(m) => {
            let _ = writeln!(
                s,
                "min f_0 in [{}, {}] at point {} ~ {}",
                m.min_value.lo(),
                m.min_value.hi(),
                m.index,
                format_point(&m.argmin.refined.mid()[..n])
            );
        }
        None => s.push_str("min f_0: none (no certified real point)\n"),
    }
    Ok(s)
}

/// Parses `args`, runs the command and returns the exit code. Used by the
/// binary and by the tests.
pub fn main_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    run(&cli, out, err)
}
