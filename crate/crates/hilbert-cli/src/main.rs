use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hilbert_core::chain_enum::{BruteCounter, EnumError, DEFAULT_BUDGET};
use hilbert_core::closed_form::{
    h2_closed, h3_closed, p1_recursive, p1_series, p2_recursive, p2_series_closed, s2_series,
    s3_series, ClosedFormError,
};
use hilbert_core::exact_arith::{binomial, RationalGeneratingFunction};
use hilbert_core::module_analyzer::{
    analyze, variety_report, variety_value, AnalysisOptions, Method, ModuleError, ModuleParams,
};
use hilbert_core::verification::{
    binomial_identity_sweep, chain_sweep, degree_lc_sweep, generator_sweep, inequality_sweep,
    variety_sweep, CheckReport,
};
use num_bigint::BigInt;
use serde::Serialize;

const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_METHOD: u8 = 4;

#[derive(Parser)]
#[command(name = "hilb", version, about = "Hilbert series and polynomials for oscillator modules of sl(n)")]
struct Cli {
    /// Enumeration budget; overrides HILB_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Variety and generator report for one module.
    Analyze(AnalyzeArgs),
    /// One chain-restricted monomial count.
    Count(CountArgs),
    /// Generating function of a chain-count family or of a variety.
    Series(SeriesArgs),
    /// Run cross-check sweeps.
    Verify(VerifyArgs),
    /// Generator values with method tags, one row per k.
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(clap::Args)]
struct ModuleFlags {
    #[arg(long)]
    n: i64,
    #[arg(long)]
    n1: i64,
    #[arg(long)]
    n2: i64,
    #[arg(long, allow_negative_numbers = true)]
    l1: i64,
    #[arg(long, allow_negative_numbers = true)]
    l2: i64,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    module: ModuleFlags,
    #[arg(long, default_value_t = 10)]
    k_max: i64,
    /// Expand the series through t^trunc.
    #[arg(long, default_value_t = 10)]
    trunc: u64,
    /// First k for the polynomial fit; defaults to n.
    #[arg(long)]
    stabilization: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    H2,
    H3,
    P1,
    P2,
    P3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Formula,
    Recursion,
    Series,
    Brute,
}

impl CountMethod {
    fn tag(self) -> Method {
        match self {
            CountMethod::Formula => Method::Formula,
            CountMethod::Recursion => Method::Recursion,
            CountMethod::Series => Method::Series,
            CountMethod::Brute => Method::Oracle,
        }
    }
}

#[derive(clap::Args)]
struct CountArgs {
    #[arg(value_enum)]
    family: Family,
    /// `m n r` for h2/h3, `m n xi r` for p1, `m n rho xi r` for p2, `p q r` for p3.
    #[arg(required = true, allow_negative_numbers = true)]
    args: Vec<i64>,
    #[arg(long, value_enum)]
    method: Option<CountMethod>,
    #[arg(long)]
    all_methods: bool,
    /// Report brute-force progress on stderr.
    #[arg(long)]
    progress: bool,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesFamily {
    H2,
    H3,
    P1,
    P2,
    Variety,
}

#[derive(clap::Args)]
struct SeriesArgs {
    #[arg(value_enum)]
    family: SeriesFamily,
    /// `m n` for h2/h3, `m n xi` for p1, `m n rho xi` for p2, `n n1 n2 l1 l2` for variety.
    #[arg(required = true, allow_negative_numbers = true)]
    args: Vec<i64>,
    #[arg(long, default_value_t = 10)]
    trunc: u64,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Arith,
    Chains,
    Series,
    Module,
    All,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite_pos: Option<Suite>,
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Largest grid side for the chain sweeps.
    #[arg(long, default_value_t = 4)]
    max: i64,
    /// Largest degree for the chain sweeps.
    #[arg(long, default_value_t = 6)]
    rmax: i64,
    /// Largest n for the module sweeps.
    #[arg(long, default_value_t = 5)]
    nmax: i64,
}

#[derive(clap::Args)]
struct TableArgs {
    #[command(flatten)]
    module: ModuleFlags,
    #[arg(long, default_value_t = 10)]
    k_max: i64,
    /// Add the oracle count beside every value.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Error carrying the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ModuleError> for Failure {
    fn from(e: ModuleError) -> Self {
        let code = match e {
            ModuleError::Budget(_) => EXIT_BUDGET,
            ModuleError::Unstable { .. } => EXIT_FAILED,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Self {
        Failure::new(EXIT_BUDGET, e.to_string())
    }
}

impl From<ClosedFormError> for Failure {
    fn from(e: ClosedFormError) -> Self {
        Failure::new(EXIT_INVALID, e.to_string())
    }
}

fn budget(cli: &Cli) -> u64 {
    cli.budget
        .or_else(|| std::env::var("HILB_BUDGET").ok()?.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report")
}

fn params(m: &ModuleFlags) -> Result<ModuleParams, Failure> {
    Ok(ModuleParams::new(m.n, m.n1, m.n2, m.l1, m.l2)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = budget(&cli);
    let mut out = String::new();
    let res = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, budget, &mut out),
        Command::Count(c) => cmd_count(c, budget, &mut out),
        Command::Series(s) => cmd_series(s, &mut out),
        Command::Verify(v) => cmd_verify(v, budget, &mut out),
        Command::Table(t) => cmd_table(t, budget, &mut out),
    };
    let _ = io::stdout().write_all(out.as_bytes());
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hilb: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[derive(Serialize)]
struct PartialAnalysis {
    partial: bool,
    params: ModuleParams,
    variety: Option<hilbert_core::module_analyzer::VarietyReport>,
    error: String,
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    #[serde(flatten)]
    analysis: &'a hilbert_core::module_analyzer::Analysis,
    series_expansion: Vec<String>,
    value_method: Method,
}

fn cmd_analyze(a: &AnalyzeArgs, budget: u64, out: &mut String) -> Result<(), Failure> {
    let p = params(&a.module)?;
    let opts = AnalysisOptions {
        budget,
        stabilization: a.stabilization,
    };
    let analysis = match analyze(&p, a.k_max, &opts) {
        Ok(x) => x,
        Err(ModuleError::Budget(e)) => {
            let partial = PartialAnalysis {
                partial: true,
                params: p,
                variety: variety_report(&p).ok(),
                error: e.to_string(),
            };
            out.push_str(&json(&partial));
            out.push('\n');
            return Err(Failure::new(EXIT_BUDGET, e.to_string()));
        }
        Err(e) => return Err(e.into()),
    };
    let expansion: Vec<BigInt> = analysis.variety.series.expand(a.trunc as usize).coefficients().to_vec();
    match a.format {
        Format::Json => {
            let o = AnalyzeOutput {
                analysis: &analysis,
                series_expansion: expansion.iter().map(|v| v.to_string()).collect(),
                value_method: Method::Series,
            };
            out.push_str(&json(&o));
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("k,variety,variety_method,generator,generator_method\n");
            for (k, g) in analysis.generator.values.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    k,
                    variety_value(&p, k as i64),
                    Method::Series,
                    g,
                    analysis.generator.method
                ));
            }
        }
        Format::Pretty => {
            let v = &analysis.variety;
            let g = &analysis.generator;
            let clauses = match &analysis.validation {
                hilbert_core::module_analyzer::Validation::Accepted { clauses, .. } => clauses
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                _ => String::new(),
            };
            let line = |out: &mut String, k: &str, v: String| out.push_str(&format!("{:<22}{}\n", k, v));
            line(out, "parameters", p.to_string());
            line(out, "accepted by clause", clauses);
            line(out, "variety series", v.series.to_string());
            line(out, "expansion", strs(&expansion).join(" "));
            line(out, "hilbert polynomial", v.polynomial.to_string());
            line(out, "krull dimension", v.krull_dim.to_string());
            line(out, "degree", v.degree.to_string());
            line(out, "genus", v.genus.to_string());
            line(out, "generator case", g.case.to_string());
            line(out, "generator values", format!("{} [{}]", strs(&g.values).join(" "), g.method));
            match &g.polynomial {
                Some(poly) => line(out, "generator polynomial", poly.to_string()),
                None => line(out, "generator polynomial", "values only".to_string()),
            }
            line(out, "dim V0", g.dim_v0.to_string());
            line(out, "lc ratio", g.lc_ratio.to_string());
            line(
                out,
                "lc ratio (table)",
                g.table_lc_ratio
                    .as_ref()
                    .map(|r| r.to_string())
                    .unwrap_or_else(|| "case not covered".to_string()),
            );
            line(out, "verdict", g.equality.to_string());
            for note in &analysis.notes {
                line(out, "note", note.clone());
            }
        }
    }
    Ok(())
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn arity(family: Family) -> usize {
    match family {
        Family::H2 | Family::H3 | Family::P3 => 3,
        Family::P1 => 4,
        Family::P2 => 5,
    }
}

fn methods(family: Family) -> &'static [CountMethod] {
    match family {
        Family::H2 | Family::H3 => &[CountMethod::Formula, CountMethod::Series, CountMethod::Brute],
        Family::P1 | Family::P2 => &[CountMethod::Recursion, CountMethod::Series, CountMethod::Brute],
        Family::P3 => &[CountMethod::Brute, CountMethod::Formula],
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::H2 => "h2",
        Family::H3 => "h3",
        Family::P1 => "p1",
        Family::P2 => "p2",
        Family::P3 => "p3",
    }
}

fn count_with(family: Family, a: &[i64], method: CountMethod, brute: &BruteCounter) -> Result<BigInt, Failure> {
    let r = *a.last().expect("arity checked");
    if r < 0 {
        return Err(Failure::new(EXIT_INVALID, "degree r must be >= 0"));
    }
    let ru = r as usize;
    let v = match (family, method) {
        (Family::H2, CountMethod::Formula) => h2_closed(a[0], a[1], r),
        (Family::H2, CountMethod::Series) => s2_series(a[0], a[1]).coefficient(r as u64),
        (Family::H2, CountMethod::Brute) => BigInt::from(brute.h2(a[0], a[1], ru)?),
        (Family::H3, CountMethod::Formula) => h3_closed(a[0], a[1], r),
        (Family::H3, CountMethod::Series) => s3_series(a[0], a[1])?.coefficient(r as u64),
        (Family::H3, CountMethod::Brute) => BigInt::from(brute.h3(a[0], a[1], ru)?),
        (Family::P1, CountMethod::Recursion) => p1_recursive(a[0], a[1], a[2], r)?,
        (Family::P1, CountMethod::Series) => p1_series(a[0], a[1], a[2])?.coefficient(r as u64),
        (Family::P1, CountMethod::Brute) => {
            p1_recursive(a[0], a[1], a[2], 0)?;
            BigInt::from(brute.p1(a[0], a[1], a[2], ru)?)
        }
        (Family::P2, CountMethod::Recursion) => p2_recursive(a[0], a[1], a[2], a[3], r)?,
        (Family::P2, CountMethod::Series) => {
            p2_series_closed(a[0], a[1], a[2], a[3])?.coefficient(r as u64)
        }
        (Family::P2, CountMethod::Brute) => {
            p2_recursive(a[0], a[1], a[2], a[3], 0)?;
            BigInt::from(brute.p2(a[0], a[1], a[2], a[3], ru)?)
        }
        (Family::P3, CountMethod::Brute) => {
            if a[1] < 1 || a[0] < a[1] {
                return Err(Failure::new(EXIT_INVALID, "p3 needs 1 <= q <= p"));
            }
            BigInt::from(brute.p3(a[0], a[1], ru)?)
        }
        (Family::P3, CountMethod::Formula) if a[1] == 1 && a[0] >= 2 => binomial(a[0] + r - 2, r),
        (Family::P3, CountMethod::Formula) => {
            return Err(Failure::new(
                EXIT_METHOD,
                "p3 has a closed formula only for q = 1 and p >= 2",
            ))
        }
        _ => {
            return Err(Failure::new(
                EXIT_METHOD,
                format!("method not available for {}", family_name(family)),
            ))
        }
    };
    Ok(v)
}

#[derive(Serialize)]
struct CountRow {
    method: Method,
    value: String,
}

#[derive(Serialize)]
struct CountOutput {
    family: &'static str,
    args: Vec<i64>,
    values: Vec<CountRow>,
    agree: bool,
}

fn cmd_count(c: &CountArgs, budget: u64, out: &mut String) -> Result<(), Failure> {
    if c.args.len() != arity(c.family) {
        return Err(Failure::new(
            EXIT_INVALID,
            format!("{} takes {} arguments", family_name(c.family), arity(c.family)),
        ));
    }
    let mut brute = BruteCounter::new(budget);
    if c.progress {
        brute = brute.with_progress(|done, total| eprintln!("enumerated {} of {}", done, total));
    }
    let chosen: Vec<CountMethod> = if c.all_methods {
        methods(c.family)
            .iter()
            .copied()
            .filter(|&m| !(c.family == Family::P3 && m == CountMethod::Formula && (c.args[1] != 1 || c.args[0] < 2)))
            .collect()
    } else {
        vec![c.method.unwrap_or(methods(c.family)[0])]
    };
    let mut rows = Vec::new();
    for &m in &chosen {
        rows.push((m, count_with(c.family, &c.args, m, &brute)?));
    }
    let agree = rows.windows(2).all(|w| w[0].1 == w[1].1);
    match c.format {
        Format::Json => {
            let o = CountOutput {
                family: family_name(c.family),
                args: c.args.clone(),
                values: rows
                    .iter()
                    .map(|(m, v)| CountRow {
                        method: m.tag(),
                        value: v.to_string(),
                    })
                    .collect(),
                agree,
            };
            out.push_str(&json(&o));
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("method,value\n");
            for (m, v) in &rows {
                out.push_str(&format!("{},{}\n", m.tag(), v));
            }
        }
        Format::Pretty => {
            if c.all_methods {
                for (m, v) in &rows {
                    out.push_str(&format!("{:<10}{}\n", m.tag().to_string(), v));
                }
                out.push_str(if agree { "all methods agree\n" } else { "methods disagree\n" });
            } else {
                out.push_str(&format!("{}\n", rows[0].1));
            }
        }
    }
    if !agree {
        return Err(Failure::new(EXIT_METHOD, "methods disagree"));
    }
    Ok(())
}

#[derive(Serialize)]
struct SeriesOutput {
    family: &'static str,
    args: Vec<i64>,
    series: RationalGeneratingFunction,
    canonical: RationalGeneratingFunction,
    expansion: Vec<String>,
    method: Method,
}

fn cmd_series(s: &SeriesArgs, out: &mut String) -> Result<(), Failure> {
    let a = &s.args;
    let (name, want) = match s.family {
        SeriesFamily::H2 => ("h2", 2),
        SeriesFamily::H3 => ("h3", 2),
        SeriesFamily::P1 => ("p1", 3),
        SeriesFamily::P2 => ("p2", 4),
        SeriesFamily::Variety => ("variety", 5),
    };
    if a.len() != want {
        return Err(Failure::new(EXIT_INVALID, format!("{} takes {} arguments", name, want)));
    }
    let gf = match s.family {
        SeriesFamily::H2 => {
            if a[0] < 1 || a[1] < 1 {
                return Err(Failure::new(EXIT_INVALID, "h2 needs m, n >= 1"));
            }
            s2_series(a[0], a[1])
        }
        SeriesFamily::H3 => {
            if a[0] < 1 || a[1] < 1 {
                return Err(Failure::new(EXIT_INVALID, "h3 needs m, n >= 1"));
            }
            s3_series(a[0], a[1])?
        }
        SeriesFamily::P1 => p1_series(a[0], a[1], a[2])?,
        SeriesFamily::P2 => p2_series_closed(a[0], a[1], a[2], a[3])?,
        SeriesFamily::Variety => {
            let p = ModuleParams::new(a[0], a[1], a[2], a[3], a[4])?;
            variety_report(&p)?.series
        }
    };
    let canonical = gf.canonicalize();
    let expansion = gf.expand(s.trunc as usize).coefficients().to_vec();
    match s.format {
        Format::Json => {
            let o = SeriesOutput {
                family: name,
                args: a.clone(),
                series: gf,
                canonical,
                expansion: strs(&expansion),
                method: Method::Series,
            };
            out.push_str(&json(&o));
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("k,value,method\n");
            for (k, v) in expansion.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", k, v, Method::Series));
            }
        }
        Format::Pretty => {
            out.push_str(&format!("{}\n", canonical));
            out.push_str(&format!("{}\n", strs(&expansion).join(" ")));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput {
    suite: &'static str,
    passed: bool,
    reports: Vec<CheckReport>,
}

fn cmd_verify(v: &VerifyArgs, budget: u64, out: &mut String) -> Result<(), Failure> {
    let suite = v.suite.or(v.suite_pos).unwrap_or(Suite::All);
    let run = |s: Suite| suite == s || suite == Suite::All;
    let mut reports = Vec::new();
    if run(Suite::Arith) {
        reports.push(binomial_identity_sweep(12));
    }
    if run(Suite::Chains) {
        let (a, b) = chain_sweep(v.max, v.rmax, budget)?;
        reports.push(a);
        reports.push(b);
        reports.push(degree_lc_sweep(v.max));
    }
    if run(Suite::Series) {
        reports.push(variety_sweep(v.nmax, 3, 8, budget)?);
    }
    if run(Suite::Module) {
        reports.push(generator_sweep(v.nmax, 2, 4, budget)?);
        let t = inequality_sweep(v.nmax, 2, budget)?;
        reports.push(t.inequality);
        reports.push(t.lc_ratio);
    }
    let passed = reports.iter().all(|r| r.passed());
    let name = match suite {
        Suite::Arith => "arith",
        Suite::Chains => "chains",
        Suite::Series => "series",
        Suite::Module => "module",
        Suite::All => "all",
    };
    out.push_str(&json(&VerifyOutput {
        suite: name,
        passed,
        reports: reports.clone(),
    }));
    out.push('\n');
    if passed {
        Ok(())
    } else {
        let first = reports
            .iter()
            .find_map(|r| r.failures.first().map(|f| format!("{}: {}", r.name, f)))
            .unwrap_or_default();
        Err(Failure::new(EXIT_FAILED, format!("first counterexample: {}", first)))
    }
}

#[derive(Serialize)]
struct TableRow {
    k: i64,
    value: String,
    method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

fn cmd_table(t: &TableArgs, budget: u64, out: &mut String) -> Result<(), Failure> {
    let p = params(&t.module)?;
    let eval = hilbert_core::module_analyzer::GeneratorEvaluator::new(&p, budget)?;
    let mut rows = Vec::new();
    for k in 0..=t.k_max {
        let oracle = if t.oracle {
            Some(eval.oracle_value(k, budget)?.to_string())
        } else {
            None
        };
        rows.push(TableRow {
            k,
            value: eval.value(k).to_string(),
            method: eval.method(),
            oracle,
        });
    }
    match t.format {
        Format::Json => {
            out.push_str(&json(&rows));
            out.push('\n');
        }
        Format::Csv | Format::Pretty => {
            out.push_str(if t.oracle { "k,value,method,oracle\n" } else { "k,value,method\n" });
            for r in &rows {
                out.push_str(&format!("{},{},{}", r.k, r.value, r.method));
                if let Some(o) = &r.oracle {
                    out.push_str(&format!(",{}", o));
                }
                out.push('\n');
            }
        }
    }
    if rows.iter().any(|r| r.oracle.as_ref().is_some_and(|o| *o != r.value)) {
        return Err(Failure::new(EXIT_METHOD, "table values disagree with the oracle"));
    }
    Ok(())
}
