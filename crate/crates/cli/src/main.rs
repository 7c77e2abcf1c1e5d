//! `sunit`: batch front end for the bound engine and the Hurwitz-quaternion
//! verification suites.
//!
//! Every subcommand prints a single JSON run manifest on stdout. Exit codes:
//! 0 when every check passed, 1 when a mathematical verification failed,
//! 2 for usage or input errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use sunit_core::bounds::{DEFAULT_PRECISION_DIGITS, MAX_PRECISION_DIGITS, MIN_PRECISION_DIGITS};
use sunit_core::enumerate::{enumerate_by_norm, enumerate_by_norm_naive, unit_group_check};
use sunit_core::presentation::evaluate_relators;
use sunit_core::tree::{verify_neighbor_coverage, verify_product_transitivity};
use sunit_core::{AlgebraShape, BoundsEngine, Covolume, RatQuaternion, SPlaceSet};

#[derive(Parser, Debug)]
#[command(name = "sunit", version, about = "Height bounds for S-unit generators and Hurwitz-quaternion checks")]
struct Cli {
    /// Decimal digits for the real-valued bound constants.
    #[arg(long, global = true, env = "SUNIT_PRECISION", default_value_t = DEFAULT_PRECISION_DIGITS,
          value_parser = clap::value_parser!(u32).range(MIN_PRECISION_DIGITS as i64..=MAX_PRECISION_DIGITS as i64))]
    precision: u32,

    /// Add the wall-clock duration to the manifest (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every explicit constant and both height bounds for an algebra shape.
    Bounds(BoundsArgs),
    /// Hurwitz elements of the given reduced norms.
    Enumerate(EnumerateArgs),
    /// Height, norm and local content of a rational quaternion.
    Height(HeightArgs),
    /// Structure of the unit group of the Hurwitz order.
    VerifyUnits,
    /// Neighbor coverage and product-tree transitivity for S = {∞} ∪ primes.
    VerifyTree(TreeArgs),
    /// Evaluate the eight relators of the presentation at S = {∞, 3, 5}.
    VerifyPresentation {
        /// Print the JSON manifest instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run every verification suite.
    VerifyAll(AllArgs),
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    /// JSON file with fields n, d, s, r1, r2, covolume (replaces the shape flags).
    #[arg(long, conflicts_with_all = ["n", "d", "s", "r1", "r2", "covolume"])]
    shape: Option<PathBuf>,
    #[arg(long, required_unless_present = "shape")]
    n: Option<u32>,
    #[arg(long, required_unless_present = "shape")]
    d: Option<u32>,
    #[arg(long, required_unless_present = "shape")]
    s: Option<u32>,
    #[arg(long, required_unless_present = "shape")]
    r1: Option<u32>,
    #[arg(long, required_unless_present = "shape")]
    r2: Option<u32>,
    /// Vol(B_ℝ/𝒟): an integer, p/q, sqrt(p/q) or a decimal literal.
    #[arg(long, required_unless_present = "shape")]
    covolume: Option<String>,
    /// Residue-field sizes of the finite places in S.
    #[arg(long, value_delimiter = ',', conflicts_with = "ms")]
    norms: Vec<u64>,
    /// Largest residue-field size in S (1 for no finite places).
    #[arg(long)]
    ms: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    norms: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct HeightArgs {
    /// Quaternion such as "1/2 + 1/2*I - J + 3/2*K".
    quaternion: String,
    /// Odd primes at which to report content valuations and S-unit status.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
}

#[derive(Args, Debug, Serialize)]
struct TreeArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    radius: u32,
    /// Write the vertex → quaternion witness map to this JSON file.
    #[arg(long)]
    witnesses: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct AllArgs {
    #[arg(long, value_delimiter = ',', default_value = "3")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    radius: u32,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: &'static str,
    parameters: Value,
    precision_digits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration_seconds: Option<f64>,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    output: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Error,
}

/// Outcome of a subcommand body: a payload plus whether all checks passed.
struct Outcome {
    output: Value,
    passed: bool,
}

impl Outcome {
    fn pass(output: Value) -> Self {
        Self { output, passed: true }
    }
}

fn classify(err: &anyhow::Error) -> Status {
    match err.downcast_ref::<sunit_core::Error>() {
        Some(e) if e.is_verification_failure() => Status::Fail,
        _ => Status::Error,
    }
}

fn to_value<T: Serialize>(v: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn s_place_set(primes: &[u64]) -> anyhow::Result<SPlaceSet> {
    Ok(SPlaceSet::new(primes.iter().copied())?)
}

fn cmd_bounds(args: &BoundsArgs, precision: u32) -> anyhow::Result<Outcome> {
    let shape = match &args.shape {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let shape: AlgebraShape = serde_json::from_str(&text).context("parsing shape document")?;
            shape.validate()?;
            shape
        }
        None => {
            let covolume: Covolume = args.covolume.as_deref().unwrap_or_default().parse()?;
            let get = |v: Option<u32>| v.context("missing shape flag");
            AlgebraShape::new(get(args.n)?, get(args.d)?, get(args.s)?, get(args.r1)?, get(args.r2)?, covolume)?
        }
    };
    let norms: Vec<u64> = match args.ms {
        Some(0) => bail!("--ms must be at least 1"),
        Some(1) => Vec::new(),
        Some(m) => vec![m],
        None => args.norms.clone(),
    };
    let mut engine = BoundsEngine::new(precision)?;
    let report = engine.bound_report(&shape, &norms)?;
    if report.c_lt_one {
        eprintln!("warning: c = {} < 1, closed forms f1/f2 and the final bound are unavailable", report.c);
    }
    Ok(Outcome::pass(to_value(&report)?))
}

fn cmd_enumerate(args: &EnumerateArgs) -> anyhow::Result<Outcome> {
    let mut classes = Vec::new();
    for &m in &args.norms {
        classes.push(enumerate_by_norm(m)?);
    }
    if let Format::Csv = args.format {
        let mut w = csv::Writer::from_writer(io::stdout().lock());
        w.write_record(["norm", "element"])?;
        for class in &classes {
            for h in &class.elements {
                w.write_record([class.norm.to_string(), h.to_string()])?;
            }
        }
        w.flush()?;
        return Ok(Outcome { output: Value::Null, passed: true });
    }
    let out: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "norm": c.norm,
                "count": c.len(),
                "elements": c.elements.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::pass(Value::Array(out)))
}

fn cmd_height(args: &HeightArgs) -> anyhow::Result<Outcome> {
    let q: RatQuaternion = args.quaternion.parse()?;
    let s = s_place_set(&args.primes)?;
    let mut content = BTreeMap::new();
    for &p in s.primes() {
        content.insert(p.to_string(), q.content_valuation(p)?);
    }
    let height: BigRational = q.height()?;
    Ok(Outcome::pass(json!({
        "quaternion": q.to_string(),
        "reduced_norm": q.reduced_norm().to_string(),
        "height": height.to_string(),
        "hurwitz": q.is_hurwitz(),
        "content_valuation": content,
        "s_places": s.to_string(),
        "s_unit": q.is_s_unit(&s),
    })))
}

fn cmd_verify_units() -> anyhow::Result<Outcome> {
    let report = unit_group_check()?;
    Ok(Outcome::pass(json!({
        "count": report.elements.len(),
        "order_counts": report.order_counts,
        "elements_of_order_two": report.elements_of_order_two.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "elements": report.elements.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })))
}

fn cmd_verify_tree(args: &TreeArgs) -> anyhow::Result<Outcome> {
    let s = s_place_set(&args.primes)?;
    if s.primes().is_empty() {
        bail!("--primes needs at least one odd prime");
    }
    let mut coverage = Vec::new();
    for &p in s.primes() {
        let c = verify_neighbor_coverage(p)?;
        coverage.push(json!({
            "p": p,
            "generators": c.generators,
            "neighbors": c.neighbors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "hits": c.hits,
        }));
    }
    let report = verify_product_transitivity(&s, args.radius)?;
    if let Some(path) = &args.witnesses {
        let map: BTreeMap<String, String> =
            report.witnesses.iter().map(|(v, w)| (v.to_string(), w.to_string())).collect();
        fs::write(path, serde_json::to_string_pretty(&map)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::pass(json!({
        "coverage": coverage,
        "primes": report.primes,
        "radius": report.radius,
        "padic_precision": report.precision,
        "generators": report.generators,
        "ball_sizes": report.ball_sizes,
        "target_vertices": report.target_vertices,
        "reached": report.reached,
        "bfs_levels": report.bfs_levels,
        "min_precision_margin": report.min_precision_margin,
    })))
}

fn presentation_payload() -> anyhow::Result<Outcome> {
    let report = evaluate_relators()?;
    let rows: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "word": o.word,
                "value": o.value.to_string(),
                "central": o.central,
            })
        })
        .collect();
    Ok(Outcome { output: json!({ "relators": rows }), passed: report.all_central() })
}

fn cmd_verify_all(args: &AllArgs) -> anyhow::Result<Outcome> {
    let s = s_place_set(&args.primes)?;
    let mut suites = Vec::new();
    let mut passed = true;
    let mut record = |name: &str, result: anyhow::Result<Outcome>| -> anyhow::Result<()> {
        match result {
            Ok(o) => {
                passed &= o.passed;
                suites.push(json!({ "suite": name, "status": if o.passed { "pass" } else { "fail" } }));
                Ok(())
            }
            Err(e) if classify(&e) == Status::Fail => {
                passed = false;
                suites.push(json!({ "suite": name, "status": "fail", "error": format!("{e:#}") }));
                Ok(())
            }
            Err(e) => Err(e.context(format!("suite {name}"))),
        }
    };
    record("unit-group", cmd_verify_units())?;
    record("enumeration-oracle", enumeration_oracle())?;
    record(
        "tree",
        cmd_verify_tree(&TreeArgs { primes: s.primes().to_vec(), radius: args.radius, witnesses: None }),
    )?;
    record("presentation", presentation_payload())?;
    Ok(Outcome { output: json!({ "suites": suites }), passed })
}

/// Production enumerator against the plain box scan for norms 1..=50.
fn enumeration_oracle() -> anyhow::Result<Outcome> {
    let mut bad = Vec::new();
    for m in 1..=50 {
        if enumerate_by_norm(m)?.elements != enumerate_by_norm_naive(m) {
            bad.push(m);
        }
    }
    Ok(Outcome { output: json!({ "norms": "1..=50", "mismatches": bad }), passed: bad.is_empty() })
}

fn print_presentation_table(out: &Value) {
    let mut stdout = io::stdout().lock();
    for row in out["relators"].as_array().into_iter().flatten() {
        let mark = if row["central"].as_bool() == Some(true) { "central" } else { "NOT CENTRAL" };
        let _ = writeln!(stdout, "{:<3} {:<12} {}", row["name"].as_str().unwrap_or(""), mark, row["value"].as_str().unwrap_or(""));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, parameters, result): (&'static str, Value, anyhow::Result<Outcome>) = match &cli.command {
        Command::Bounds(a) => ("bounds", json!(a), cmd_bounds(a, cli.precision)),
        Command::Enumerate(a) => ("enumerate", json!(a), cmd_enumerate(a)),
        Command::Height(a) => ("height", json!(a), cmd_height(a)),
        Command::VerifyUnits => ("verify-units", json!({}), cmd_verify_units()),
        Command::VerifyTree(a) => ("verify-tree", json!(a), cmd_verify_tree(a)),
        Command::VerifyPresentation { json } => ("verify-presentation", json!({ "json": json }), presentation_payload()),
        Command::VerifyAll(a) => ("verify-all", json!(a), cmd_verify_all(a)),
    };
    let elapsed = start.elapsed().as_secs_f64();

    let (status, error, output) = match result {
        Ok(o) => (if o.passed { Status::Pass } else { Status::Fail }, None, o.output),
        Err(e) => (classify(&e), Some(format!("{e:#}")), Value::Null),
    };
    if let Some(msg) = &error {
        eprintln!("error: {msg}");
    }

    let csv_mode = matches!(&cli.command, Command::Enumerate(a) if matches!(a.format, Format::Csv));
    let table_mode = matches!(&cli.command, Command::VerifyPresentation { json: false });
    if table_mode && error.is_none() {
        print_presentation_table(&output);
        println!("{}", if status == Status::Pass { "all relators central" } else { "verification failed" });
    } else if !(csv_mode && error.is_none()) {
        let manifest = RunManifest {
            subcommand: name,
            parameters,
            precision_digits: cli.precision,
            duration_seconds: cli.timing.then_some(elapsed),
            status,
            error,
            output,
        };
        match serde_json::to_string_pretty(&manifest) {
            Ok(text) => {
                let _ = writeln!(io::stdout().lock(), "{text}");
            }
            Err(e) => {
                eprintln!("error: serializing manifest: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if cli.timing {
        eprintln!("{name} finished in {elapsed:.3}s");
    }
    match status {
        Status::Pass => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::Error => ExitCode::from(2),
    }
}
