use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use canonkac::enumerate::{count_abs_indec, nil_volume, stack_volume, EnumOptions, Volume};
use canonkac::gf::{format_rational, Elem, Field};
use canonkac::kacpoly::{self, KacPolynomial, KacSample};
use canonkac::lattice::{normal_form, KClass, LatticeContext, ModuleLattice, RawKClass};
use canonkac::presentations::{AlgebraConfig, AlgebraKind, AlgebraPresentation, WeightData};
use canonkac::series::{jordan_strata, nil_exp_check, stratum_check};
use canonkac::suite::{compare_fixtures, record_fixtures, run_suite};
use canonkac::torsionpair::{abs_indec_split, check_factorization, dim_side, sub_dims, Side};
use canonkac::Error;

#[derive(Parser)]
#[command(name = "canonkac", version, about = "Exact counts of representations of canonical and squid algebras over finite fields")]
struct Cli {
    /// Worker threads for enumeration (never changes results).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest tuple space to enumerate; defaults to $CANONKAC_CAP or 1e8.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Write the result to a .json or .csv file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON algebra config supplying defaults for the algebra flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct AlgebraArgs {
    /// canonical or squid.
    #[arg(long)]
    algebra: Option<AlgebraKind>,
    /// Weights, e.g. 2,2,3.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<usize>>,
    /// λ_3.. as field element indices, e.g. 2,3 (defaults to 1,2,..).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<Elem>>,
}

#[derive(Subcommand)]
enum Command {
    /// Number of absolutely indecomposable representations of dimension d.
    Count(PointArgs),
    /// Stack volume |Rep_d| / |GL_d|.
    Volume(PointArgs),
    /// Volume of pairs (M, nilpotent endomorphism) over |GL_d|.
    NilVolume(PointArgs),
    /// Kac polynomial by interpolation over several fields.
    Kac(KacArgs),
    /// Euler form, symmetrized form, rank, degree and slope of two classes.
    Euler(EulerArgs),
    /// Exponential identity between nilpotent volumes and Kac counts.
    NilCheck(NilArgs),
    /// Jordan-type strata against the rank formula.
    StratumCheck(StratumArgs),
    /// Torsion-pair factorization of the stack volume.
    TorsionCheck(TorsionArgs),
    /// The acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Field order q.
    #[arg(long)]
    field: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
}

#[derive(Args)]
struct KacArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Dimension vector; repeat for several.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    dim: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    fields: Vec<u64>,
    /// Extra field whose count must match the interpolated polynomial.
    #[arg(long)]
    confirm: Option<u64>,
    /// Take samples from the nilpotent-volume logarithm instead of direct counts.
    #[arg(long)]
    from_nil: bool,
}

#[derive(Args)]
struct EulerArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<usize>,
    /// Class such as `e`, `delta`, `2e - e1,1` or a JSON object.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
}

#[derive(Args)]
struct NilArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long)]
    field: Option<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    bound: Vec<usize>,
}

#[derive(Args)]
struct StratumArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long)]
    field: Option<u64>,
    /// Every dimension vector up to this bound is checked.
    #[arg(long, value_delimiter = ',', required = true)]
    bound: Vec<usize>,
    /// Only this Jordan type, parts separated by `;`, e.g. `1,0,0,0;0,1,0,0`.
    #[arg(long)]
    jordan: Option<String>,
}

#[derive(Args)]
struct TorsionArgs {
    #[command(flatten)]
    algebra: AlgebraArgs,
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', required = true)]
    fields: Vec<u64>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Criteria to run (default all).
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<u8>>,
    /// Write the computed values as fixtures.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Compare the computed values with recorded fixtures.
    #[arg(long)]
    compare: Option<PathBuf>,
}

struct Failure {
    code: u8,
    report: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match &e {
            Error::NotPrime(_) => ("not-prime", 2),
            Error::InvalidField(_) => ("invalid-field", 2),
            Error::FieldTooLarge { .. } => ("field-too-large", 2),
            Error::InvalidWeight(_) => ("invalid-weight", 2),
            Error::InvalidDimension(_) => ("invalid-dimension", 2),
            Error::Shape(_) => ("shape", 2),
            Error::InvalidArgument(_) => ("invalid-argument", 2),
            Error::ContextMismatch => ("context-mismatch", 2),
            Error::EnumerationCap { .. } => ("enumeration-cap", 3),
            Error::EndomorphismCap { .. } => ("endomorphism-cap", 3),
            _ => ("computation", 3),
        };
        let mut report = json!({"error": kind, "message": e.to_string()});
        if let Error::EnumerationCap { q, exponent, cap } | Error::EndomorphismCap { q, exponent, cap } = e {
            report["q"] = json!(q);
            report["exponent"] = json!(exponent);
            report["cap"] = json!(cap);
        }
        Failure { code, report }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Error::InvalidArgument(msg.into()).into()
}

/// A result is either emitted as-is or, when a check fails, emitted and
/// turned into exit status 1.
struct Output {
    json: Value,
    csv: Option<String>,
    pass: bool,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, csv: None, pass: true }
    }
}

struct Ctx {
    opts: EnumOptions,
    config: Option<AlgebraConfig>,
}

impl Ctx {
    fn kind(&self, a: &AlgebraArgs) -> AlgebraKind {
        a.algebra
            .or(self.config.as_ref().map(|c| c.algebra))
            .unwrap_or(AlgebraKind::Canonical)
    }

    fn weights(&self, a: &AlgebraArgs) -> Result<(Vec<usize>, Vec<Elem>), Failure> {
        let p = a
            .p
            .clone()
            .or_else(|| self.config.as_ref().map(|c| c.p.clone()))
            .ok_or_else(|| invalid("--p is required"))?;
        let lambda = a
            .lambda
            .clone()
            .or_else(|| self.config.as_ref().filter(|c| c.p == p).map(|c| c.lambda.clone()))
            .unwrap_or_else(|| (1..p.len().saturating_sub(1) as Elem).collect());
        Ok((p, lambda))
    }

    fn field(&self, q: Option<u64>) -> Result<Field, Failure> {
        match (q, &self.config) {
            (Some(q), _) => Ok(Field::with_order(q)?),
            (None, Some(c)) => Ok(canonkac::gf::make_field(c.field.characteristic, c.field.degree)?),
            (None, None) => Err(invalid("--field is required")),
        }
    }

    fn presentation(&self, a: &AlgebraArgs, q: Option<u64>) -> Result<AlgebraPresentation, Failure> {
        let (p, lambda) = self.weights(a)?;
        let w = WeightData::new(p, lambda, Arc::new(self.field(q)?))?;
        Ok(AlgebraPresentation::build(self.kind(a), &w)?)
    }

    fn dim(&self, d: &Option<Vec<usize>>) -> Result<Vec<usize>, Failure> {
        d.clone()
            .or_else(|| self.config.as_ref().map(|c| c.dim.clone()).filter(|d| !d.is_empty()))
            .ok_or_else(|| invalid("--dim is required"))
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn point(ctx: &Ctx, args: &PointArgs, what: &str) -> Result<Output, Failure> {
    let pres = ctx.presentation(&args.algebra, args.field)?;
    let d = ctx.dim(&args.dim)?;
    pres.check_dim(&d)?;
    let q = pres.field().order();
    let start = Instant::now();
    let (value, solutions) = match what {
        "count" => {
            let c = count_abs_indec(&pres, &d, &ctx.opts)?;
            (json!(integer(&c.value)), c.solutions)
        }
        _ => {
            let Volume { value, solutions, .. } = if what == "volume" {
                stack_volume(&pres, &d, &ctx.opts)?
            } else {
                nil_volume(&pres, &d, &ctx.opts)?
            };
            (json!(format_rational(&value)), solutions)
        }
    };
    let json = json!({
        "q": q,
        "dim": d,
        "value": value,
        "solutions": solutions as u64,
        "elapsed_ms": elapsed_ms(start),
    });
    let value_text = match &json["value"] {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    };
    let csv = format!(
        "q,dim,value,solutions\n{q},{},{value_text},{solutions}\n",
        join(&d, " ")
    );
    Ok(Output { json, csv: Some(csv), pass: true })
}

fn integer(n: &num_bigint::BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_dim(s: &str) -> Result<Vec<usize>, Failure> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| invalid(format!("bad dimension entry `{t}`"))))
        .collect()
}

fn kac(ctx: &Ctx, args: &KacArgs) -> Result<Output, Failure> {
    let kind = ctx.kind(&args.algebra);
    let (p, lambda) = ctx.weights(&args.algebra)?;
    // clap splits on commas; regroup by vertex count
    let n = 2 + p.iter().map(|w| w - 1).sum::<usize>();
    let dims: Vec<Vec<usize>> = if args.dim.is_empty() {
        vec![ctx.dim(&None)?]
    } else {
        let flat = parse_dim(&args.dim.join(","))?;
        if flat.len() % n != 0 {
            return Err(Error::InvalidDimension(format!(
                "dimension vectors need {n} entries each, got {} in total",
                flat.len()
            ))
            .into());
        }
        flat.chunks(n).map(<[usize]>::to_vec).collect()
    };
    let mut rows = Vec::new();
    let mut csv = String::from("dim,coefficients\n");
    let mut pass = true;
    for d in &dims {
        let poly: KacPolynomial = if args.from_nil {
            let samples: Vec<KacSample> =
                kacpoly::recovered_samples(kind, &p, &lambda, d, &args.fields, &ctx.opts)?;
            KacPolynomial {
                kind,
                p: p.clone(),
                dim: d.clone(),
                coefficients: kacpoly::interpolate(&samples)?,
                samples,
            }
        } else {
            kacpoly::kac_polynomial(kind, &p, &lambda, d, &args.fields, &ctx.opts)?
        };
        let mut row = json!({
            "dim": d,
            "samples": poly.samples.iter().map(|s| json!([s.q, integer(&s.value)])).collect::<Vec<_>>(),
            "polynomial": poly.coefficients.iter().map(integer).collect::<Vec<_>>(),
            "nonnegative": poly.nonnegative(),
        });
        if let Some(q) = args.confirm {
            let actual = kacpoly::sample_counts(kind, &p, &lambda, d, &[q], &ctx.opts)?[0].value.clone();
            let expected = poly.evaluate(q);
            let ok = actual == expected;
            pass &= ok;
            row["confirm"] = json!({"q": q, "expected": integer(&expected), "actual": integer(&actual), "pass": ok});
        }
        csv += &format!("{},{}\n", join(d, " "), join(&poly.coefficients, " "));
        rows.push(row);
    }
    let json = if rows.len() == 1 { rows.pop().unwrap() } else { Value::Array(rows) };
    Ok(Output { json, csv: Some(csv), pass })
}

/// Parses `e`, `delta`, `e{i},{s}` terms with integer coefficients, or a
/// JSON class.
fn parse_class(ctx: &LatticeContext, s: &str) -> Result<KClass, Failure> {
    let p = ctx.p();
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.starts_with('{') {
        let x: KClass = serde_json::from_str(&text).map_err(|e| invalid(format!("class `{s}`: {e}")))?;
        ctx.check(&x)?;
        return Ok(x);
    }
    let mut total = KClass::zero(p);
    let mut rest = text.as_str();
    if rest.is_empty() {
        return Err(invalid("empty class"));
    }
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body[1..].find(['+', '-']).map_or(body.len(), |k| k + 1);
        let term = &body[..end];
        rest = &body[end..];
        let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let coeff: i64 = if digits == 0 {
            1
        } else {
            term[..digits].parse().map_err(|_| invalid(format!("bad coefficient in `{term}`")))?
        };
        let name = term[digits..].trim_start_matches('*');
        let class = match name {
            "e" => KClass::e(p),
            "delta" | "δ" | "d" => KClass::delta(p),
            _ => {
                let idx = name
                    .strip_prefix('e')
                    .map(|r| r.trim_start_matches('_').trim_matches(|c| c == '{' || c == '}'))
                    .and_then(|r| r.split_once(','))
                    .and_then(|(i, s)| Some((i.parse::<usize>().ok()?, s.parse::<i64>().ok()?)));
                match idx {
                    Some((i, s)) if (1..=p.len()).contains(&i) => normal_form(&RawKClass::generator(p, i, s)),
                    _ => return Err(invalid(format!("unknown class term `{term}` (use e, delta or e<i>,<s>)"))),
                }
            }
        };
        total = &total + &class.scale(sign * coeff);
    }
    Ok(total)
}

fn class_json(ctx: &LatticeContext, x: &KClass) -> Value {
    json!({
        "class": x,
        "text": x.to_string(),
        "rank": ctx.rank(x),
        "degree": ctx.degree(x),
        "slope": ctx.slope(x).ok().map(|s| s.to_string()),
    })
}

fn euler(args: &EulerArgs) -> Result<Output, Failure> {
    let ctx = LatticeContext::new(&args.p)?;
    let x = parse_class(&ctx, &args.x)?;
    let y = parse_class(&ctx, &args.y)?;
    Ok(Output::ok(json!({
        "p": args.p,
        "x": class_json(&ctx, &x),
        "y": class_json(&ctx, &y),
        "euler": ctx.euler(&x, &y),
        "symmetric": ctx.sym(&x, &y),
    })))
}

fn nil_check(ctx: &Ctx, args: &NilArgs) -> Result<Output, Failure> {
    let pres = ctx.presentation(&args.algebra, args.field)?;
    let report = nil_exp_check(&pres, &args.bound, &ctx.opts)?;
    Ok(Output {
        pass: report.pass,
        json: to_json(&report)?,
        csv: None,
    })
}

fn to_json<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()).into())
}

fn stratum(ctx: &Ctx, args: &StratumArgs) -> Result<Output, Failure> {
    let pres = ctx.presentation(&args.algebra, args.field)?;
    pres.check_dim(&args.bound)?;
    let lattice = ModuleLattice::new(&pres)?;
    let mut reports = Vec::new();
    if let Some(spec) = &args.jordan {
        let jt = spec.split(';').map(parse_dim).collect::<Result<Vec<_>, _>>()?;
        let n = pres.vertex_count();
        let mut d = vec![0; n];
        for (i, a) in jt.iter().enumerate() {
            for (x, y) in d.iter_mut().zip(a) {
                *x += (i + 1) * y;
            }
        }
        reports.push(stratum_check(&pres, &d, &jt, &ctx.opts)?);
    } else {
        for d in sub_dims(&args.bound) {
            if d.iter().all(|&x| x == 0) {
                continue;
            }
            for jt in jordan_strata(&pres, &d, &ctx.opts)?.keys() {
                let inside_t = jt
                    .iter()
                    .all(|a| a.iter().all(|&v| v == 0) || dim_side(&lattice, a).ok() == Some(Side::T));
                if inside_t {
                    reports.push(stratum_check(&pres, &d, jt, &ctx.opts)?);
                }
            }
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(Output {
        json: json!({"pass": pass, "checked": reports.len(), "strata": to_json(&reports)?}),
        csv: None,
        pass,
    })
}

fn torsion(ctx: &Ctx, args: &TorsionArgs) -> Result<Output, Failure> {
    let d = ctx.dim(&args.dim)?;
    let mut fields = Vec::new();
    let mut pass = true;
    for &q in &args.fields {
        let pres = ctx.presentation(&args.algebra, Some(q))?;
        let report = check_factorization(&pres, &d, &ctx.opts)?;
        let split = abs_indec_split(&pres, &d, &ctx.opts)?;
        let split_ok = split.t.clone() + &split.f == split.total;
        pass &= report.pass && split_ok;
        fields.push(json!({
            "q": q,
            "factorization": to_json(&report)?,
            "abs_indec": {
                "total": integer(&split.total),
                "t": integer(&split.t),
                "f": integer(&split.f),
                "pass": split_ok,
            },
        }));
    }
    Ok(Output {
        json: json!({"dim": d, "pass": pass, "fields": fields}),
        csv: None,
        pass,
    })
}

fn suite(ctx: &Ctx, args: &SuiteArgs) -> Result<Output, Failure> {
    let ids = args.criteria.clone().unwrap_or_else(|| (1..=10).collect());
    let report = run_suite(&ids, &ctx.opts)?;
    for r in &report.results {
        eprintln!("{}", r.line());
    }
    if let Some(path) = &args.record {
        record_fixtures(&report, path)?;
    }
    let mut json = to_json(&report)?;
    let mut pass = report.pass;
    if let Some(path) = &args.compare {
        let changed = compare_fixtures(&report, path)?;
        pass &= changed.is_empty();
        json["fixture_mismatches"] = json!(changed);
    }
    Ok(Output { json, csv: None, pass })
}

fn emit(out: &Output, path: Option<&Path>) -> Result<(), Failure> {
    let text = match path {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => out
            .csv
            .clone()
            .ok_or_else(|| invalid("CSV output is only available for count, volume, nil-volume and kac"))?,
        _ => serde_json::to_string_pretty(&out.json).map_err(|e| Failure::from(Error::Internal(e.to_string())))? + "\n",
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            let c: AlgebraConfig =
                serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            c.presentation()?;
            Some(c)
        }
        None => None,
    };
    let mut opts = EnumOptions::default();
    if let Some(w) = cli.workers {
        opts = opts.with_workers(w);
    }
    if let Some(c) = cli.cap {
        opts = opts.with_cap(c);
    }
    let ctx = Ctx { opts, config };
    let out = match &cli.command {
        Command::Count(a) => point(&ctx, a, "count")?,
        Command::Volume(a) => point(&ctx, a, "volume")?,
        Command::NilVolume(a) => point(&ctx, a, "nil-volume")?,
        Command::Kac(a) => kac(&ctx, a)?,
        Command::Euler(a) => euler(a)?,
        Command::NilCheck(a) => nil_check(&ctx, a)?,
        Command::StratumCheck(a) => stratum(&ctx, a)?,
        Command::TorsionCheck(a) => torsion(&ctx, a)?,
        Command::Suite(a) => suite(&ctx, a)?,
    };
    emit(&out, cli.out.as_deref())?;
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) if out.pass => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(f) => {
            eprintln!("{}", f.report);
            ExitCode::from(f.code)
        }
    }
}
