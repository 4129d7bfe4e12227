mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{Config, Format};
use ncomplex::contour::{self, Builtin, QuadSpec};
use ncomplex::cosexp::CosexpFamily;
use ncomplex::formats::{PathFile, PolynomialFile, SeriesFile};
use ncomplex::polyfactor::{self, Factorization};
use ncomplex::series::{self, DEFAULT_WINDOW};
use ncomplex::spectral::{geometric_form, Spectrum};
use ncomplex::verify::{self, VerifyConfig};
use ncomplex::{elementary, Error, NComplex, Tolerances, Variant};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "ncomplex", version, about = "Polar and planar n-complex numbers")]
struct Cli {
    /// JSON config file: {"tolerances": {..}, "format": .., "seed": ..}
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format; overrides the config file
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply exp, log or pow to a literal such as `polar:n=4:[1,0,2,-3]`
    Eval {
        #[arg(long, value_enum)]
        op: Op,
        /// Exponent for `pow`
        #[arg(long, allow_negative_numbers = true)]
        m: Option<f64>,
        literal: String,
    },
    /// Spectral coordinates and geometric form
    Spectrum { literal: String },
    /// Exponential, trigonometric or geometric form
    Form {
        #[arg(long, value_enum, default_value = "exponential")]
        kind: FormKind,
        literal: String,
    },
    /// Table of cosexponential functions
    Table(TableArgs),
    /// Root sets and factorizations of a monic polynomial file
    Factor {
        file: PathBuf,
        #[arg(long, default_value_t = polyfactor::DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Integrate a built-in function along a path file
    Integrate(IntegrateArgs),
    /// Convergence radii of a series file
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        /// Also check the analyticity relations of the partial sum at this point
        #[arg(long)]
        riemann_at: Option<String>,
    },
    /// Run the verification suite
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Op {
    Exp,
    Log,
    Pow,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormKind {
    Exponential,
    Trigonometric,
    Geometric,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value = "polar")]
    variant: Variant,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    /// Sum the power series instead of the closed form
    #[arg(long)]
    series: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FunctionName {
    Const,
    Identity,
    Exp,
    Reciprocal,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    path: PathBuf,
    #[arg(long, value_enum, default_value = "const")]
    function: FunctionName,
    /// Pole of the residue check; required for `reciprocal`
    #[arg(long)]
    center: Option<String>,
    /// Value of `const` (defaults to one)
    #[arg(long)]
    value: Option<String>,
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    #[arg(long, default_value_t = 4096)]
    max_segments: usize,
}

enum Failure {
    Domain(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

struct Ctx {
    tol: Tolerances,
    format: Option<Format>,
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = std::io::stdout().lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: Io: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn literal(s: &str) -> Result<NComplex, Failure> {
    Ok(NComplex::parse_literal(s)?)
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure::Io(e.to_string()))
}

fn emit_json(out: &mut impl Write, v: &Value) -> Result<(), Failure> {
    emit(out, &serde_json::to_string_pretty(v).expect("serializable"))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8, Failure> {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    let ctx = Ctx {
        tol: config.tolerances()?,
        format: cli.format.or(config.format),
        seed: config.seed,
    };
    match cli.command {
        Command::Eval { op, m, literal: s } => eval(&ctx, out, op, m, &s),
        Command::Spectrum { literal: s } => spectrum(&ctx, out, &s),
        Command::Form { kind, literal: s } => form(&ctx, out, kind, &s),
        Command::Table(a) => table(&ctx, out, &a),
        Command::Factor { file, limit, count_only } => factor(&ctx, out, &file, limit, count_only),
        Command::Integrate(a) => integrate(&ctx, out, &a),
        Command::Analyze { file, window, riemann_at } => analyze(out, &file, window, riemann_at.as_deref()),
        Command::Verify { seed, n_max, samples } => run_verify(&ctx, out, seed, n_max, samples),
    }
}

fn eval(ctx: &Ctx, out: &mut impl Write, op: Op, m: Option<f64>, s: &str) -> Result<u8, Failure> {
    let u = literal(s)?;
    let r = match (op, m) {
        (Op::Exp, _) => elementary::exp(&u)?,
        (Op::Log, _) => elementary::log(&u, &ctx.tol)?,
        (Op::Pow, Some(m)) => elementary::pow(&u, m, &ctx.tol)?,
        (Op::Pow, None) => return Err(Failure::Usage("--op pow requires --m <real>".into())),
    };
    match ctx.format {
        Some(Format::Json) => emit_json(out, &to_value(&r))?,
        _ => emit(out, &r.to_string())?,
    }
    Ok(0)
}

fn spectrum(ctx: &Ctx, out: &mut impl Write, s: &str) -> Result<u8, Failure> {
    let u = literal(s)?;
    let spec = Spectrum::of(&u);
    let geometric = match geometric_form(&u, &ctx.tol) {
        Ok(g) => to_value(&g),
        Err(Error::DegenerateAngle { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let mut v = to_value(&spec);
    v["determinant"] = json!(spec.determinant());
    v["geometric"] = geometric;
    emit_json(out, &v)?;
    Ok(0)
}

fn form(ctx: &Ctx, out: &mut impl Write, kind: FormKind, s: &str) -> Result<u8, Failure> {
    let u = literal(s)?;
    let v = match kind {
        FormKind::Exponential => to_value(&elementary::exponential_form(&u, &ctx.tol)?),
        FormKind::Trigonometric => to_value(&elementary::trigonometric_form(&u, &ctx.tol)?),
        FormKind::Geometric => to_value(&geometric_form(&u, &ctx.tol)?),
    };
    emit_json(out, &v)?;
    Ok(0)
}

fn table(ctx: &Ctx, out: &mut impl Write, a: &TableArgs) -> Result<u8, Failure> {
    let fam = CosexpFamily::new(a.n, a.variant)?;
    if a.steps < 2 || !(a.from.is_finite() && a.to.is_finite()) {
        return Err(Failure::Usage("--steps must be at least 2 and the range finite".into()));
    }
    let letter = match a.variant {
        Variant::Polar => "g",
        Variant::Planar => "f",
    };
    let names: Vec<String> = (0..a.n)
        .map(|k| if a.n < 10 { format!("{letter}_{}{k}", a.n) } else { format!("{letter}_{}_{k}", a.n) })
        .collect();
    let mut rows = Vec::with_capacity(a.steps);
    for i in 0..a.steps {
        let y = a.from + (a.to - a.from) * i as f64 / (a.steps - 1) as f64;
        let vals = (0..a.n)
            .map(|k| if a.series { fam.eval_series(k, y, &ctx.tol) } else { Ok(fam.eval_closed(k, y)) })
            .collect::<ncomplex::Result<Vec<f64>>>()?;
        rows.push((y, vals));
    }
    match ctx.format {
        Some(Format::Json) => {
            let v: Vec<Value> = rows.iter().map(|(y, vals)| json!({"y": y, "values": vals})).collect();
            emit_json(out, &json!({"columns": names, "rows": v}))?;
        }
        _ => {
            emit(out, &format!("y,{}", names.join(",")))?;
            for (y, vals) in rows {
                let cells: Vec<String> = vals.iter().map(|v| format!("{v:e}")).collect();
                emit(out, &format!("{y},{}", cells.join(",")))?;
            }
        }
    }
    Ok(0)
}

fn factorization_json(f: &Factorization) -> Value {
    json!({
        "ordering_id": f.ordering_id,
        "mixed": f.mixed,
        "roots": f.linear_roots.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
        "quadratic_factors": f.quadratic_factors.iter().map(|q| json!({"b": q.b.to_string(), "c": q.c.to_string()})).collect::<Vec<_>>(),
    })
}

fn factor(ctx: &Ctx, out: &mut impl Write, file: &Path, limit: usize, count_only: bool) -> Result<u8, Failure> {
    let p = PolynomialFile::from_json(&read(file)?)?.to_polynomial()?;
    let roots = match ctx.seed {
        Some(seed) => polyfactor::roots_seeded(&p, &ctx.tol, seed)?,
        None => polyfactor::roots(&p, &ctx.tol)?,
    };
    let count = polyfactor::count_factorizations(&roots, limit)?;
    let shown = if count.exact { count.count.to_string() } else { format!(">={}", count.count) };
    if count_only {
        emit(out, &shown)?;
        return Ok(0);
    }
    let all = polyfactor::factorizations(&roots, limit).collect::<ncomplex::Result<Vec<_>>>()?;
    match ctx.format {
        Some(Format::Json) => {
            let fs: Vec<Value> = all.iter().map(factorization_json).collect();
            emit_json(out, &json!({"count": count.count, "exact": count.exact, "factorizations": fs}))?;
        }
        _ => {
            for f in &all {
                let mut parts: Vec<String> = f.linear_roots.iter().map(|u| u.to_string()).collect();
                parts.extend(f.quadratic_factors.iter().map(|q| format!("quadratic(b={}, c={})", q.b, q.c)));
                emit(out, &parts.join(" ; "))?;
            }
            emit(out, &format!("count {shown}"))?;
        }
    }
    Ok(0)
}

fn integrate(ctx: &Ctx, out: &mut impl Write, a: &IntegrateArgs) -> Result<u8, Failure> {
    let path = PathFile::from_json(&read(&a.path)?)?.to_path()?;
    let quad = QuadSpec {
        tol: a.quad_tol,
        max_segments: a.max_segments,
        ..QuadSpec::default()
    };
    let one = NComplex::one(path.variant(), path.n())?;
    let center = a.center.as_deref().map(literal).transpose()?;
    let f = match a.function {
        FunctionName::Const => Builtin::Const(a.value.as_deref().map(literal).transpose()?.unwrap_or(one)),
        FunctionName::Identity => Builtin::Identity,
        FunctionName::Exp => Builtin::Exp,
        FunctionName::Reciprocal => {
            if center.is_none() {
                return Err(Failure::Usage("--function reciprocal requires --center <literal>".into()));
            }
            Builtin::Const(one)
        }
    };
    let v = match center {
        Some(c) => to_value(&contour::residue_check(&f, &c, &path, &quad, &ctx.tol)?),
        None => json!({"integral": contour::integrate(&f, &path, &quad, &ctx.tol)?}),
    };
    emit_json(out, &v)?;
    Ok(0)
}

fn analyze(out: &mut impl Write, file: &Path, window: usize, riemann_at: Option<&str>) -> Result<u8, Failure> {
    let s = SeriesFile::from_json(&read(file)?)?.to_series()?;
    let radii = series::convergence_radii(&s, window)?;
    let crude = series::crude_radius(&s, window)?;
    let mut v = json!({
        "radii": to_value(&radii),
        "crude_radius": if crude.is_finite() { json!(crude) } else { json!("inf") },
    });
    if let Some(at) = riemann_at {
        let u0 = literal(at)?;
        let terms = s.coefficients().len();
        let report = series::check_riemann_relations(|u: &NComplex| s.evaluate(u, terms), &u0, series::default_step(&u0))?;
        v["riemann"] = json!({
            "h": report.h,
            "first_order": report.first_order,
            "second_order": report.second_order,
            "analytic": report.is_analytic(1e-6),
        });
    }
    emit_json(out, &v)?;
    Ok(0)
}

fn run_verify(ctx: &Ctx, out: &mut impl Write, seed: Option<u64>, n_max: usize, samples: usize) -> Result<u8, Failure> {
    let mut cfg = VerifyConfig::default().with_n_max(n_max);
    if cfg.dims.is_empty() {
        return Err(Failure::Usage("--n-max must be at least 2".into()));
    }
    cfg.seed = seed.or(ctx.seed).unwrap_or(cfg.seed);
    cfg.samples = samples;
    cfg.tol = ctx.tol;
    // criteria are independent and seeded separately, so run them side by side
    let results: Vec<Vec<verify::CheckOutcome>> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=10u8).map(|c| {
            let cfg = &cfg;
            s.spawn(move || verify::run_criterion(c, cfg))
        }).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread")).collect()
    });
    let all: Vec<_> = results.into_iter().flatten().collect();
    let passed = verify::all_passed(&all);
    match ctx.format {
        Some(Format::Json) => emit_json(out, &json!({"seed": cfg.seed, "passed": passed, "checks": to_value(&all)}))?,
        _ => {
            emit(out, &format!("seed {} dims {:?} samples {}", cfg.seed, cfg.dims, cfg.samples))?;
            for o in &all {
                emit(out, &o.to_string())?;
            }
            let failed = all.iter().filter(|o| !o.passed).count();
            emit(out, &format!("{} checks, {} failed", all.len(), failed))?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}
