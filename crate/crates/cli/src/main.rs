use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use e6count::arith::density::delta_exact;
use e6count::arith::expsum::{lv_bound, lv_worst_ratio};
use e6count::arith::{delta, delta_partial_sums, factorize, ExpSumTable};
use e6count::peyre::{leading_coefficient, predicted, ConstantReport};
use e6count::surface::count_naive_with;
use e6count::verify::{run_all, PropertyResult};
use e6count::{CountReport, EnumConfig, Execution, Strategy, MAX_BOUND};
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const CSV_HEADER: [&str; 9] = ["B", "N", "e_count", "conic", "x0zero", "x1zero", "predicted", "ratio", "seconds"];
const MAX_EXPSUM_MODULUS: u64 = 1_000_000;
const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "e6count", version, about = "Exact rational-point counts on the E6 cubic surface x1 x2^2 + x2 x0^2 + x3^3 = 0")]
struct Cli {
    /// Worker threads [env: E6COUNT_THREADS]
    #[arg(long, global = true, value_parser = parse_threads)]
    threads: Option<usize>,
    /// Absolute quadrature tolerance in (0, 1) [env: E6COUNT_TOLERANCE] [default: 1e-9]
    #[arg(long, global = true, value_parser = parse_tolerance)]
    tolerance: Option<f64>,
    /// Run every loop on the calling thread
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count points of height at most B
    Count(CountArgs),
    /// Run the property suite up to B
    Verify(VerifyArgs),
    /// Assemble the leading constant
    Constants(ConstantArgs),
    /// Count over several bounds and compare with c B (log B)^6
    Sweep(SweepArgs),
    /// Evaluate the cubic exponential sums S_q(a, b) and T_q(a, b)
    Expsum(ExpsumArgs),
    /// Print Delta(n) and the partial sums M(x)
    Delta(DeltaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Naive,
    Torsor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Direct,
    Residue,
    Auto,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Direct => Strategy::Direct,
            StrategyArg::Residue => Strategy::Residue,
            StrategyArg::Auto => Strategy::Auto,
        }
    }
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Height bound
    #[arg(long = "B", value_name = "B", value_parser = parse_bound)]
    b: u64,
    #[arg(long, value_enum, default_value = "torsor")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Float slack of the torsor loop bounds
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(0..=64))]
    slack: i64,
    /// Emit the report as JSON
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit one CSV row with header
    #[arg(long)]
    csv: bool,
    /// Prime limit of the Euler product, for the CSV prediction
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..=10_000_000))]
    prime_limit: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Height bound
    #[arg(long = "B", value_name = "B", value_parser = parse_verify_bound)]
    b: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConstantArgs {
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..=10_000_000))]
    prime_limit: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated height bounds, at least two
    #[arg(long = "Bs", value_name = "B1,B2,...", value_parser = parse_bound_list)]
    bs: BoundList,
    #[arg(long, value_enum, default_value = "torsor")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Write the table to this CSV file
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Print the rows as JSON instead of a text table
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..=10_000_000))]
    prime_limit: u64,
}

#[derive(Args, Debug)]
struct ExpsumArgs {
    /// Modulus
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_EXPSUM_MODULUS))]
    q: u64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    a: i64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    b: i64,
    /// Also run the bound checks for this modulus
    #[arg(long)]
    check: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("what").required(true).multiple(true).args(["n", "x"]))]
struct DeltaArgs {
    /// Evaluate Delta(n)
    #[arg(long, value_parser = parse_bound)]
    n: Option<u64>,
    /// Evaluate M(x) = sum of Delta(n) over n <= x
    #[arg(long, value_parser = parse_bound)]
    x: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Debug)]
struct BoundList(Vec<u64>);

fn parse_bound(s: &str) -> Result<u64, String> {
    let b: u64 = s.trim().parse().map_err(|e| format!("`{s}` is not a positive integer: {e}"))?;
    if b == 0 || b > MAX_BOUND {
        return Err(format!("{b} is outside 1..={MAX_BOUND}"));
    }
    Ok(b)
}

fn parse_verify_bound(s: &str) -> Result<u64, String> {
    let b = parse_bound(s)?;
    if b > 5000 {
        return Err(format!("verify runs a naive scan for every B' <= B; {b} exceeds 5000"));
    }
    Ok(b)
}

fn parse_bound_list(s: &str) -> Result<BoundList, String> {
    let mut bs = s.split(',').map(parse_bound).collect::<Result<Vec<_>, _>>()?;
    bs.sort_unstable();
    bs.dedup();
    if bs.len() < 2 {
        return Err("need at least two distinct bounds".into());
    }
    Ok(BoundList(bs))
}

fn parse_threads(s: &str) -> Result<usize, String> {
    let t: usize = s.trim().parse().map_err(|e| format!("`{s}` is not a thread count: {e}"))?;
    if t == 0 || t > 4096 {
        return Err(format!("thread count {t} is outside 1..=4096"));
    }
    Ok(t)
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.trim().parse().map_err(|e| format!("`{s}` is not a number: {e}"))?;
    if !(t > 0.0 && t < 1.0) {
        return Err(format!("tolerance {t} is outside (0, 1)"));
    }
    Ok(t)
}

/// `x` rounded to 12 significant digits.
fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn fmt12(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 || (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Serializes `v` with every real rounded to 12 significant digits.
fn to_json<T: Serialize>(v: &T) -> Result<String> {
    fn walk(v: &mut Value) {
        match v {
            Value::Number(n) if n.is_f64() => {
                let x = round12(n.as_f64().expect("f64 number"));
                if let Some(m) = serde_json::Number::from_f64(x) {
                    *n = m;
                }
            }
            Value::Array(items) => items.iter_mut().for_each(walk),
            Value::Object(map) => map.values_mut().for_each(walk),
            _ => {}
        }
    }
    let mut value = serde_json::to_value(v)?;
    walk(&mut value);
    Ok(serde_json::to_string_pretty(&value)?)
}

struct Ctx {
    execution: Execution,
    tolerance: f64,
}

/// A failed property or invariant: exit code 1, output already printed.
#[derive(Debug)]
struct PropertyFailure(String);

impl std::fmt::Display for PropertyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for PropertyFailure {}

fn run_count(b: u64, method: MethodArg, strategy: StrategyArg, slack: i64, ctx: &Ctx) -> Result<CountReport> {
    let report = match method {
        MethodArg::Naive => count_naive_with(b, ctx.execution),
        MethodArg::Torsor => {
            let cfg = EnumConfig {
                strategy: strategy.into(),
                slack,
                execution: ctx.execution,
            };
            e6count::enumerate::count_total_with(b, &cfg)
        }
    };
    if !report.is_consistent() {
        return Err(PropertyFailure(format!("inconsistent count report for B = {b}: {report:?}")).into());
    }
    Ok(report)
}

fn csv_row(r: &CountReport, c: f64) -> Vec<String> {
    let pred = predicted(c, r.b);
    vec![
        r.b.to_string(),
        r.total.to_string(),
        r.e_count.to_string(),
        r.conic_count.to_string(),
        r.x0zero_count.to_string(),
        r.x1zero_count.to_string(),
        fmt12(pred),
        fmt12(r.total as f64 / pred),
        fmt12(r.elapsed),
    ]
}

fn write_csv<W: Write>(out: W, rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn print_count_text(r: &CountReport) {
    println!("B            {}", r.b);
    println!("method       {}", r.method);
    println!("#E(B)        {}", r.e_count);
    println!("x3 = 0       {}", r.conic_count);
    println!("x0 = 0       {}", r.x0zero_count);
    println!("x1 = 0       {}", r.x1zero_count);
    println!("N(B)         {}", r.total);
    println!("seconds      {}", fmt12(r.elapsed));
}

fn cmd_count(a: &CountArgs, ctx: &Ctx) -> Result<()> {
    let r = run_count(a.b, a.method, a.strategy, a.slack, ctx)?;
    if a.json {
        println!("{}", to_json(&r)?);
    } else if a.csv {
        let c = leading_coefficient(a.prime_limit, ctx.tolerance).leading_coeff;
        write_csv(std::io::stdout().lock(), &[csv_row(&r, c)])?;
    } else {
        print_count_text(&r);
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    b: u64,
    passed: bool,
    properties: &'a [PropertyResult],
}

fn cmd_verify(a: &VerifyArgs, ctx: &Ctx) -> Result<()> {
    let results = run_all(a.b, ctx.execution);
    let passed = results.iter().all(|r| r.passed);
    if a.json {
        println!(
            "{}",
            to_json(&VerifyReport {
                b: a.b,
                passed,
                properties: &results,
            })?
        );
    } else {
        for r in &results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            println!("{tag} {} ({} checked)", r.name, r.checked);
            for c in &r.counterexamples {
                println!("    counterexample: {c}");
            }
        }
    }
    if !passed {
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
        return Err(PropertyFailure(format!("properties failed: {}", failed.join(", "))).into());
    }
    Ok(())
}

fn print_constants_text(r: &ConstantReport) {
    println!("alpha              {}/{}", r.alpha.numer(), r.alpha.denom());
    println!("beta               {}", r.beta);
    println!("omega_inf (g3)     {}", fmt12(r.omega_inf));
    println!("omega_inf (3d)     {}", fmt12(r.omega_inf_3d));
    println!("omega agreement    {}", fmt12(r.omega_agreement));
    println!("euler product      {}", fmt12(r.euler_product));
    println!("euler partial      {}", fmt12(r.euler_partial));
    println!("euler tail bound   {}", fmt12(r.euler_tail_bound));
    println!("prime limit        {}", r.prime_limit);
    println!("leading coeff c    {}", fmt12(r.leading_coeff));
}

fn cmd_constants(a: &ConstantArgs, ctx: &Ctx) -> Result<()> {
    let r = leading_coefficient(a.prime_limit, ctx.tolerance);
    if a.json {
        println!("{}", to_json(&r)?);
    } else {
        print_constants_text(&r);
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    b: u64,
    n: u64,
    e_count: u64,
    conic: u64,
    x0zero: u64,
    x1zero: u64,
    predicted: f64,
    ratio: f64,
    seconds: f64,
}

fn cmd_sweep(a: &SweepArgs, ctx: &Ctx) -> Result<()> {
    let c = leading_coefficient(a.prime_limit, ctx.tolerance).leading_coeff;
    let reports = a
        .bs
        .0
        .iter()
        .map(|&b| run_count(b, a.method, a.strategy, 1, ctx))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<String>> = reports.iter().map(|r| csv_row(r, c)).collect();
    if let Some(path) = &a.csv {
        let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_csv(f, &rows)?;
    }
    if a.json {
        let out: Vec<SweepRow> = reports
            .iter()
            .map(|r| {
                let p = predicted(c, r.b);
                SweepRow {
                    b: r.b,
                    n: r.total,
                    e_count: r.e_count,
                    conic: r.conic_count,
                    x0zero: r.x0zero_count,
                    x1zero: r.x1zero_count,
                    predicted: p,
                    ratio: r.total as f64 / p,
                    seconds: r.elapsed,
                }
            })
            .collect();
        println!("{}", to_json(&out)?);
    } else if a.csv.is_none() {
        write_csv(std::io::stdout().lock(), &rows)?;
    } else {
        println!("c = {}", fmt12(c));
        for r in &rows {
            println!("B = {:>10}  N = {:>12}  ratio = {}", r[0], r[1], r[7]);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
    abs: f64,
}

impl From<num_complex::Complex64> for ComplexOut {
    fn from(z: num_complex::Complex64) -> Self {
        ComplexOut {
            re: z.re,
            im: z.im,
            abs: z.norm(),
        }
    }
}

#[derive(Serialize)]
struct ExpsumReport {
    q: u64,
    a: i64,
    b: i64,
    s: ComplexOut,
    t: ComplexOut,
    /// `max |S_q(a, 0)| / q^{2/3}` over units `a`.
    pure_cubic_ratio: Option<f64>,
    /// `max |T| / (2 q^{1/2} gcd(b, q))` over `gcd(a, b, p) = 1`.
    lv_worst_ratio: Option<f64>,
    lv_bound_holds: Option<bool>,
}

fn cmd_expsum(a: &ExpsumArgs) -> Result<()> {
    let table = ExpSumTable::new(a.q);
    let mut rep = ExpsumReport {
        q: a.q,
        a: a.a,
        b: a.b,
        s: table.s(a.a, a.b).into(),
        t: table.t(a.a, a.b).into(),
        pure_cubic_ratio: None,
        lv_worst_ratio: None,
        lv_bound_holds: None,
    };
    let mut failed = false;
    if a.check {
        let r = table.max_abs_s_pure_cubic() / (a.q as f64).powf(2.0 / 3.0);
        rep.pure_cubic_ratio = Some(r);
        failed |= r > 10.0;
        if factorize(a.q).factors().len() == 1 {
            if a.q > 5000 {
                bail!(UsageError(format!("the bound check scans q^2 pairs; q = {} exceeds 5000", a.q)));
            }
            let w = lv_worst_ratio(a.q).expect("prime power");
            rep.lv_worst_ratio = Some(w);
            rep.lv_bound_holds = Some(w <= 1.0);
            failed |= w > 1.0;
        }
    }
    if a.json {
        println!("{}", to_json(&rep)?);
    } else {
        println!("S_{}({}, {}) = {} + {} i   |S| = {}", a.q, a.a, a.b, fmt12(rep.s.re), fmt12(rep.s.im), fmt12(rep.s.abs));
        println!("T_{}({}, {}) = {} + {} i   |T| = {}", a.q, a.a, a.b, fmt12(rep.t.re), fmt12(rep.t.im), fmt12(rep.t.abs));
        if factorize(a.q).factors().len() == 1 {
            println!("2 q^(1/2) gcd(b, q) = {}", fmt12(lv_bound(a.q, a.b)));
        }
        if let Some(r) = rep.pure_cubic_ratio {
            let tag = if r <= 10.0 { "PASS" } else { "FAIL" };
            println!("{tag} max |S_q(a, 0)| / q^(2/3) = {} (<= 10)", fmt12(r));
        }
        if let Some(w) = rep.lv_worst_ratio {
            let tag = if w <= 1.0 { "PASS" } else { "FAIL" };
            println!("{tag} max |T_q(a, b)| / (2 q^(1/2) gcd(b, q)) = {} (<= 1)", fmt12(w));
        }
    }
    if failed {
        return Err(PropertyFailure(format!("bound check failed for q = {}", a.q)).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct DeltaReport {
    n: Option<u64>,
    delta: Option<f64>,
    /// `n^{-1/6} Delta(n)` as `p/q`.
    delta_scaled: Option<String>,
    x: Option<u64>,
    partial_sum: Option<f64>,
}

fn cmd_delta(a: &DeltaArgs) -> Result<()> {
    let mut rep = DeltaReport {
        n: a.n,
        delta: None,
        delta_scaled: None,
        x: a.x,
        partial_sum: None,
    };
    if let Some(n) = a.n {
        let r = delta_exact(n);
        rep.delta = Some(delta(n));
        rep.delta_scaled = Some(format!("{}/{}", r.numer(), r.denom()));
    }
    if let Some(x) = a.x {
        rep.partial_sum = Some(delta_partial_sums(x));
    }
    if a.json {
        println!("{}", to_json(&rep)?);
    } else {
        if let (Some(n), Some(d), Some(s)) = (rep.n, rep.delta, &rep.delta_scaled) {
            println!("Delta({n}) = {}   n^(-1/6) Delta(n) = {s}", fmt12(d));
        }
        if let (Some(x), Some(m)) = (rep.x, rep.partial_sum) {
            println!("M({x}) = {}", fmt12(m));
        }
    }
    Ok(())
}

/// Invalid input detected after parsing: exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// The flag if given, else the environment variable, else `None`.
fn flag_or_env<T>(flag: Option<T>, var: &str, parse: fn(&str) -> Result<T, String>) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(var) {
        Ok(v) => parse(&v)
            .map(Some)
            .map_err(|e| UsageError(format!("invalid {var}: {e}")).into()),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(UsageError(format!("invalid {var}: {e}")).into()),
    }
}

fn dispatch(cli: &Cli, tolerance: f64) -> Result<()> {
    let ctx = Ctx {
        execution: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        tolerance,
    };
    match &cli.command {
        Command::Count(a) => cmd_count(a, &ctx),
        Command::Verify(a) => cmd_verify(a, &ctx),
        Command::Constants(a) => cmd_constants(a, &ctx),
        Command::Sweep(a) => cmd_sweep(a, &ctx),
        Command::Expsum(a) => cmd_expsum(a),
        Command::Delta(a) => cmd_delta(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = flag_or_env(cli.tolerance, "E6COUNT_TOLERANCE", parse_tolerance).and_then(|tol| {
        let tol = tol.unwrap_or(DEFAULT_TOLERANCE);
        match flag_or_env(cli.threads, "E6COUNT_THREADS", parse_threads)? {
            Some(t) => e6count::with_threads(t, || dispatch(&cli, tol)),
            None => dispatch(&cli, tol),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
