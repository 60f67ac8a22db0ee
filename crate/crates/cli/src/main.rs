use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use orbicurve::algebra::scalar::parse_q;
use orbicurve::algebra::{PlaceClass, Poly, Q};
use orbicurve::arithmetic::{abc_quality, enumerate_points, ArithOrbifoldSpec, ProjectivePoint};
use orbicurve::function_field::{
    height_bounds, hurwitz_degree_bound, pluriform_degree_bound, verify_hurwitz_certificate,
};
use orbicurve::function_field::{tangency_violations, FunctionFieldSection, SectionConfig};
use orbicurve::orbifold::{
    base_orbifold, canonical_degree, dominates, fiber_multiplicities, is_general_type_via_five, kodaira_dimension,
    FiberData, KodairaClass, OrbifoldCurve, OrbifoldDivisor,
};
use orbicurve::pluriform::{linear_mark, matrix_to_text, verify_conditions_suite, FormKind, PluriformSystem};
use orbicurve::report::{canonical_pretty, digest, poly_to_json, q_to_json, verify_envelope, RunManifest};
use orbicurve::sextic::run_pipeline;
use orbicurve::Error;

#[derive(Parser, Debug)]
#[command(name = "orbicurve", version, about = "Exact computations with orbifold curves and multiple fibres")]
struct Cli {
    /// Write the result with its run manifest to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Upper bound on worker threads.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Record wall-clock time in the manifest.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kodaira dimension and canonical degree of an orbifold curve.
    Classify(ClassifyArgs),
    /// Whether one divisor dominates another after matching marks.
    Dominate(DominateArgs),
    /// Multiplicities of fibres and the induced base orbifolds.
    Fiber(FiberArgs),
    /// Tangency and ramification checks for a section A/C.
    SectionCheck(SectionArgs),
    /// Degree and height bound calculators.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Builds and verifies the pluri-differential condition system.
    Pluriform(PluriformArgs),
    /// Orbifold points of bounded height on the projective line over Q.
    Enumerate(EnumerateArgs),
    /// Runs the sextic construction from a seed.
    Sextic(SexticArgs),
    /// Checks the digests of a saved report, optionally recomputing it.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Comma-separated multiplicities; empty for no marks.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    marks: Vec<u32>,
}

#[derive(Args, Debug)]
struct DominateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    source: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    target: Vec<u32>,
}

#[derive(Args, Debug)]
struct FiberArgs {
    /// `label=m1,m2,...`, repeatable.
    #[arg(long = "fiber", required = true, value_name = "LABEL=MULTS")]
    fibers: Vec<String>,
    /// Genus of the base curve.
    #[arg(long, default_value_t = 0)]
    base_genus: u32,
}

#[derive(Args, Debug)]
struct SectionArgs {
    /// Coefficients of A, lowest degree first (rationals like 3/2).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    a: Vec<String>,
    /// Coefficients of C, lowest degree first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    c: Vec<String>,
    /// Multiplicities of the constant marks 0, 1, inf.
    #[arg(long, value_delimiter = ',', default_value = "2,3,7")]
    marks: Vec<u32>,
    /// Rational bad places, and `inf`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bad: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Degree bound against constant marks.
    Hurwitz {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        card_m: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        marks: Vec<u32>,
    },
    /// Degree bound coming from a pluri-differential form.
    Pluriform {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        m_plus: u32,
        #[arg(long, default_value_t = 0)]
        poles: u32,
    },
    /// Height bounds for sections of a fibration.
    Height {
        #[arg(long)]
        fiber_genus: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        sigma: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
}

#[derive(Args, Debug)]
struct PluriformArgs {
    /// `w6` (one moving mark) or `w4` (two).
    #[arg(long, default_value = "w6", value_parser = ["w6", "w4"])]
    kind: String,
    /// Moving mark p(x) = p0 + p1 x.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    p0: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    p1: String,
    /// Second moving mark q(x) = q0 + q1 x (w4 only).
    #[arg(long, default_value = "3", allow_hyphen_values = true)]
    q0: String,
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    q1: String,
    /// Test sections per condition class and kernel form.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Series truncation.
    #[arg(long, default_value_t = 24)]
    trunc: i64,
    /// Also write the condition matrix as plain text rows.
    #[arg(long, value_name = "PATH")]
    matrix_text: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    /// Multiplicities, the first three at 0, 1, inf.
    #[arg(long, value_delimiter = ',', required = true)]
    marks: Vec<u32>,
    /// Positions of the marks (`a/c` or `inf`); default 0,1,inf,-1,2,1/2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    points: Vec<String>,
    /// Height bound, e.g. 10000 or 1e4.
    #[arg(long)]
    height: String,
    #[arg(long, value_delimiter = ',')]
    exclude_primes: Vec<u64>,
}

#[derive(Args, Debug)]
struct SexticArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// A file written with --out.
    path: PathBuf,
    /// Recompute the result from the recorded arguments and compare.
    #[arg(long)]
    rerun: bool,
}

/// What a subcommand produced: the result and whether every check passed.
struct Outcome {
    result: Value,
    ok: bool,
    seed: Option<u64>,
}

impl Outcome {
    fn pass(result: Value) -> Self {
        Outcome { result, ok: true, seed: None }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => Failure::Usage(m),
            other => Failure::Run(other),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Run<T> {
    Err(Failure::Usage(msg.into()))
}

fn rational(s: &str) -> Run<Q> {
    parse_q(s.trim()).map_or_else(|| usage(format!("not a rational number: {s:?}")), Ok)
}

fn rationals(items: &[String]) -> Run<Vec<Q>> {
    items.iter().map(|s| rational(s)).collect()
}

fn kappa_json(k: KodairaClass) -> Value {
    match k {
        KodairaClass::MinusInfinity => json!("-inf"),
        KodairaClass::Zero => json!(0),
        KodairaClass::One => json!(1),
    }
}

fn divisor_json(d: &OrbifoldDivisor) -> Value {
    Value::Array(d.marks.iter().map(|m| json!({"point": m.label, "m": m.m})).collect())
}

fn classify(a: &ClassifyArgs) -> Run<Outcome> {
    let curve = OrbifoldCurve::new(a.genus, OrbifoldDivisor::from_multiplicities(&a.marks)?);
    Ok(Outcome::pass(json!({
        "kappa": kappa_json(kodaira_dimension(&curve)),
        "degree": q_to_json(&canonical_degree(&curve)),
    })))
}

fn dominate(a: &DominateArgs) -> Run<Outcome> {
    let src = OrbifoldDivisor::from_multiplicities(&a.source)?;
    let tgt = OrbifoldDivisor::from_multiplicities(&a.target)?;
    Ok(Outcome::pass(json!({
        "dominates": dominates(&src, &tgt),
        "source_general_type": is_general_type_via_five(&src),
    })))
}

fn fiber(a: &FiberArgs) -> Run<Outcome> {
    let mut fibers = BTreeMap::new();
    for item in &a.fibers {
        let Some((label, ms)) = item.split_once('=') else {
            return usage(format!("expected LABEL=MULTS, got {item:?}"));
        };
        let ms: Vec<u32> = ms
            .split(',')
            .map(|m| m.trim().parse().map_err(|_| Failure::Usage(format!("bad multiplicity in {item:?}"))))
            .collect::<Run<_>>()?;
        if fibers.insert(label.to_string(), ms).is_some() {
            return usage(format!("fibre {label} given twice"));
        }
    }
    let data = FiberData::new(fibers)?;
    let mut per = serde_json::Map::new();
    for label in data.fibers.keys() {
        let (m, m_star) = fiber_multiplicities(&data, label)?;
        per.insert(label.clone(), json!({"m": m, "m_star": m_star}));
    }
    let (delta, star) = base_orbifold(&data);
    let classify = |d: &OrbifoldDivisor| {
        let c = OrbifoldCurve::new(a.base_genus, d.clone());
        json!({"kappa": kappa_json(kodaira_dimension(&c)), "degree": q_to_json(&canonical_degree(&c))})
    };
    Ok(Outcome::pass(json!({
        "fibers": per,
        "delta": divisor_json(&delta),
        "delta_star": divisor_json(&star),
        "base": classify(&delta),
        "base_star": classify(&star),
    })))
}

const MARK_NAMES: [&str; 3] = ["0", "1", "inf"];

fn section_check(a: &SectionArgs) -> Run<Outcome> {
    let marks: [u32; 3] = a.marks.clone().try_into().map_err(|_| Failure::Usage("--marks takes three values".into()))?;
    let s = FunctionFieldSection::new(Poly::new(rationals(&a.a)?), Poly::new(rationals(&a.c)?))?;
    let bad = a
        .bad
        .iter()
        .map(|b| if b.trim() == "inf" { Ok(PlaceClass::Infinity) } else { rational(b).map(PlaceClass::Rational) })
        .collect::<Run<Vec<_>>>()?;
    let cfg = SectionConfig::constant_marks(marks, bad)?;
    let violations = tangency_violations(&s, &cfg)?;
    let mut result = json!({
        "section": s.to_json(),
        "degree": s.degree(),
        "is_orbifold_section": violations.is_empty(),
        "violations": violations
            .iter()
            .map(|v| json!({"mark": MARK_NAMES[v.mark], "place": v.class.to_string(), "order": v.order}))
            .collect::<Vec<_>>(),
    });
    let mut ok = true;
    if !s.is_constant() {
        let c = verify_hurwitz_certificate(&s, marks)?;
        ok = c.hurwitz_holds && c.fibre_sums_hold && c.restricted_holds && c.count_bound_holds;
        result["hurwitz"] = json!({
            "degree": c.degree,
            "wronskian_degree": c.wronskian_degree,
            "r_infinity": c.r_infinity,
            "lhs": c.hurwitz_lhs,
            "rhs": c.hurwitz_rhs,
            "holds": c.hurwitz_holds,
            "fibre_sums_hold": c.fibre_sums_hold,
            "b_prime": c.b_prime,
            "restricted_sum": c.restricted_sum,
            "restricted_holds": c.restricted_holds,
            "violations": c.violations,
            "count_bound": q_to_json(&c.count_bound),
            "count_bound_holds": c.count_bound_holds,
            "fibres": c.fibres.iter().map(|f| json!({
                "value": f.value.to_string(),
                "multiplicity": f.multiplicity,
                "points": f.points.iter().map(|(p, r)| json!({"place": p.to_string(), "r": r})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome { result, ok, seed: None })
}

fn bounds(b: &BoundsCommand) -> Run<Outcome> {
    let result = match b {
        BoundsCommand::Hurwitz { genus, card_m, marks } => {
            let d = hurwitz_degree_bound(*genus, *card_m, marks)?;
            json!({"epsilon": q_to_json(&d.epsilon), "bound": d.bound, "cap": d.cap, "empty": d.empty})
        }
        BoundsCommand::Pluriform { genus, m_plus, poles } => {
            json!({"bound": pluriform_degree_bound(*genus, *m_plus, *poles)})
        }
        BoundsCommand::Height { fiber_genus, q, sigma, m } => {
            let h = height_bounds(*fiber_genus, *q, *sigma, *m)?;
            json!({"ev_bound": h.ev_bound, "isotrivial_bound": h.isotrivial_bound, "l_bound": h.l_bound})
        }
    };
    Ok(Outcome::pass(result))
}

fn pluriform(a: &PluriformArgs, jobs: usize) -> Run<Outcome> {
    let kind = if a.kind == "w6" { FormKind::W6 } else { FormKind::W4 };
    let mut movers = vec![linear_mark(&rational(&a.p0)?, &rational(&a.p1)?)];
    if kind == FormKind::W4 {
        movers.push(linear_mark(&rational(&a.q0)?, &rational(&a.q1)?));
    }
    if a.trunc < 4 {
        return usage("--trunc must be at least 4");
    }
    let sys = PluriformSystem::build(kind, movers)?;
    if let Some(path) = &a.matrix_text {
        write_file(path, &matrix_to_text(&sys.matrix)).map_err(|m| Failure::Run(Error::Unsupported(m)))?;
    }
    let suite = verify_conditions_suite(&sys, a.trials, a.seed, a.trunc, jobs)?;
    let rows: Vec<Value> = (0..sys.matrix.rows())
        .map(|r| Value::Array(sys.matrix.row(r).iter().map(q_to_json).collect()))
        .collect();
    let kernel: Vec<Value> = sys.kernel.iter().map(|v| Value::Array(v.iter().map(q_to_json).collect())).collect();
    let result = json!({
        "kind": kind.name(),
        "movers": sys.movers.iter().map(poly_to_json).collect::<Vec<_>>(),
        "shape": [sys.matrix.rows(), sys.matrix.cols()],
        "block_sizes": sys.block_sizes,
        "rank": sys.rank,
        "kernel_dimension": sys.kernel.len(),
        "matrix": rows,
        "kernel": kernel,
        "suite": {
            "trials": suite.trials,
            "trunc": a.trunc,
            "checked": suite.checked(),
            "passed": suite.all_passed(),
            "classes": suite.classes.iter().map(|c| json!({
                "class": c.class, "checked": c.checked, "passed": c.passed, "min_valuation": c.min_valuation,
            })).collect::<Vec<_>>(),
            "failures": suite.failures.iter().map(|f| json!({
                "class": f.class, "kernel_index": f.kernel_index, "witness": f.witness,
                "valuation": f.valuation, "required": f.required, "reason": f.reason,
            })).collect::<Vec<_>>(),
        },
    });
    Ok(Outcome { result, ok: suite.all_passed(), seed: Some(a.seed) })
}

/// Accepts plain integers and `XeY` with integral value.
fn parse_height(s: &str) -> Run<u64> {
    let bad = || Failure::Usage(format!("bad height {s:?}"));
    match s.split_once(['e', 'E']) {
        None => s.parse().map_err(|_| bad()),
        Some((m, e)) => {
            let m: u64 = m.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)
        }
    }
}

fn parse_point(s: &str) -> Run<ProjectivePoint> {
    if s.trim() == "inf" {
        return Ok(ProjectivePoint::infinity());
    }
    let q = rational(s)?;
    let (a, c) = (q.numer().try_into(), q.denom().try_into());
    match (a, c) {
        (Ok(a), Ok(c)) => Ok(ProjectivePoint::new(a, c)?),
        _ => usage(format!("point {s} is too large")),
    }
}

fn enumerate(a: &EnumerateArgs, jobs: usize) -> Run<Outcome> {
    const DEFAULT_POINTS: [&str; 6] = ["0", "1", "inf", "-1", "2", "1/2"];
    let h = parse_height(&a.height)?;
    if a.marks.len() < 3 {
        return usage("--marks needs at least three values");
    }
    let points: Vec<String> = if a.points.is_empty() {
        if a.marks.len() > DEFAULT_POINTS.len() {
            return usage("give --points for more than six marks");
        }
        DEFAULT_POINTS[..a.marks.len()].iter().map(|s| s.to_string()).collect()
    } else {
        a.points.clone()
    };
    if points.len() != a.marks.len() {
        return usage("--points and --marks differ in length");
    }
    let marks = points.iter().zip(&a.marks).map(|(p, &m)| Ok((parse_point(p)?, m))).collect::<Run<Vec<_>>>()?;
    let excluded: BTreeSet<u64> = a.exclude_primes.iter().copied().collect();
    let spec = ArithOrbifoldSpec::new(marks, excluded)?;
    if spec.standard_exponents().is_none() {
        return usage("the first three points must be 0, 1, inf");
    }
    let recs = enumerate_points(&spec, h, jobs)?;
    let pts: Vec<Value> = recs
        .iter()
        .map(|r| {
            let quality = abc_quality(r.point.a, r.b, r.point.c).ok();
            json!({
                "point": [r.point.a, r.point.c],
                "b": r.b,
                "height": r.height,
                "valuations": r.valuations.iter().map(|fs| fs.iter().map(|(p, e)| json!([p, e])).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "rad": quality.as_ref().map(|q| q.rad.to_string()),
                "quality": quality.as_ref().map(|q| q.quality_string()),
            })
        })
        .collect();
    Ok(Outcome::pass(json!({
        "spec": spec.label(),
        "excluded_primes": spec.excluded.iter().collect::<Vec<_>>(),
        "height": h,
        "count": pts.len(),
        "points": pts,
    })))
}

fn sextic(a: &SexticArgs) -> Run<Outcome> {
    let report = run_pipeline(a.seed)?;
    Ok(Outcome { result: report.to_json(), ok: true, seed: Some(a.seed) })
}

fn read_json(path: &Path) -> Run<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn report(a: &ReportArgs) -> Run<Outcome> {
    let env = read_json(&a.path)?;
    let digests_ok = verify_envelope(&env)?;
    let manifest = RunManifest::from_json(&env["manifest"])?;
    let mut result = json!({
        "digests_match": digests_ok,
        "command": manifest.command,
        "result_digest": manifest.result_digest,
    });
    let mut ok = digests_ok;
    if a.rerun {
        let argv: Vec<String> = env["input"]["argv"]
            .as_array()
            .and_then(|xs| xs.iter().map(|x| x.as_str().map(str::to_string)).collect())
            .ok_or_else(|| Failure::Usage("report input has no argv".into()))?;
        let cli = Cli::try_parse_from(std::iter::once("orbicurve".to_string()).chain(argv))
            .map_err(|e| Failure::Usage(e.to_string()))?;
        if matches!(cli.command, Command::Report(_)) {
            return usage("refusing to rerun a report of a report");
        }
        let fresh = dispatch(&cli.command, 1)?;
        let same = digest(&fresh.result) == manifest.result_digest;
        result["rerun_matches"] = json!(same);
        ok &= same;
    }
    Ok(Outcome { result, ok, seed: None })
}

fn dispatch(cmd: &Command, jobs: usize) -> Run<Outcome> {
    match cmd {
        Command::Classify(a) => classify(a),
        Command::Dominate(a) => dominate(a),
        Command::Fiber(a) => fiber(a),
        Command::SectionCheck(a) => section_check(a),
        Command::Bounds { which } => bounds(which),
        Command::Pluriform(a) => pluriform(a, jobs),
        Command::Enumerate(a) => enumerate(a, jobs),
        Command::Sextic(a) => sextic(a),
        Command::Report(a) => report(a),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Classify(_) => "classify",
        Command::Dominate(_) => "dominate",
        Command::Fiber(_) => "fiber",
        Command::SectionCheck(_) => "section-check",
        Command::Bounds { .. } => "bounds",
        Command::Pluriform(_) => "pluriform",
        Command::Enumerate(_) => "enumerate",
        Command::Sextic(_) => "sextic",
        Command::Report(_) => "report",
    }
}

/// The arguments that determine the result: argv without output and
/// scheduling flags.
fn result_argv(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--out" | "--jobs" => {
                it.next();
            }
            "--timing" => {}
            s if s.starts_with("--out=") || s.starts_with("--jobs=") => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn failure_report(kind: &str, message: &str) -> String {
    canonical_pretty(&json!({"error": {"kind": kind, "message": message}}))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let start = Instant::now();
    let outcome = match dispatch(&cli.command, jobs) {
        Ok(o) => o,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Run(e)) => {
            print!("{}", failure_report("run", &e.to_string()));
            return ExitCode::from(1);
        }
    };
    let input = json!({"argv": result_argv(&args[1..])});
    let mut manifest = RunManifest::new(command_name(&cli.command), &input, &outcome.result, outcome.seed);
    if cli.timing {
        let ms = start.elapsed().as_millis() as u64;
        manifest.timing_ms = Some(ms);
        eprintln!("elapsed: {ms} ms");
    }
    if let Some(path) = &cli.out {
        let env = json!({"input": input, "result": outcome.result, "manifest": manifest.to_json()});
        if let Err(m) = write_file(path, &canonical_pretty(&env)) {
            print!("{}", failure_report("io", &m));
            return ExitCode::from(1);
        }
    }
    print!("{}", canonical_pretty(&outcome.result));
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}
