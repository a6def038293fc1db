//! `dirichlet` — exact arithmetic in the truncated Dirichlet
//! convolution ring: evaluate expressions, run independence
//! certificates and the relation oracle, reproduce the built-in worked
//! examples, and compute numeric partial sums of Dirichlet series.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use dirichlet_core::{
    certify_jacobian, certify_orders, certify_support_escape, certify_support_triangular,
    certify_value_tests, dependence_oracle, dsl, wronskian_li, ArithFun, Certificate, Error,
    OperatorSpec, OracleConfig, ValueTestMode,
};

mod paper;

#[derive(Parser)]
#[command(
    name = "dirichlet",
    version,
    about = "Exact truncated Dirichlet-convolution arithmetic and independence certificates"
)]
struct Cli {
    /// Truncation horizon: values are computed exactly at 1..=N
    #[arg(long, global = true, default_value_t = dirichlet_core::DEFAULT_HORIZON)]
    horizon: u64,

    /// Output format for `eval` and `dirichlet`
    #[arg(long, global = true, value_enum, default_value_t = Output::Table)]
    output: Output,

    /// Decimal digits in numeric display columns
    #[arg(long, global = true, default_value_t = 12)]
    precision: u32,

    /// Seed for randomized demonstration modes (reserved; current
    /// subcommands are fully deterministic)
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression; print exact values (plus a numeric column)
    Eval {
        /// Expression, e.g. "Log(one)" or "dL(ind_p(2)) - L2*(ind_p(2)^2 - ind_p(2))"
        expr: String,
        /// Index range "A..B" (inclusive) or a single index; default 1..16
        range: Option<String>,
    },
    /// Run an independence certificate; exits 0 certified / 2 inconclusive / 3 relation found
    Certify {
        /// Criterion: jacobian | values | orders | support | wronskian
        method: Option<String>,
        /// Comma-separated function expressions (commas inside parentheses are fine)
        #[arg(long)]
        fns: Option<String>,
        /// Comma-separated derivations: dL, dp<p>, dhat<k>, dk<k>, T<a>
        #[arg(long)]
        derivs: Option<String>,
        /// Comma-separated primes
        #[arg(long)]
        primes: Option<String>,
        /// For `values`: at_primes | gvj | order_anchored; for `support`: triangular | escape
        #[arg(long)]
        mode: Option<String>,
        /// gvj target index m
        #[arg(long)]
        m: Option<u64>,
        /// order_anchored anchors m_j (defaults to the minimal valid ones)
        #[arg(long)]
        anchors: Option<String>,
        /// JSON file holding the certificate request instead of flags
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Brute-force polynomial-relation search with the mu profile
    Oracle {
        #[arg(long)]
        fns: String,
        /// Total degree searched
        #[arg(long)]
        degree: u32,
        /// Cap on the number of monomials enumerated
        #[arg(long, default_value_t = 500)]
        monomial_cap: usize,
    },
    /// Reproduce the built-in worked examples; nonzero exit on any mismatch
    PaperExamples,
    /// Numeric partial sum of the Dirichlet series sum f(n)/n^s
    Dirichlet {
        expr: String,
        /// Complex s as "re,im", e.g. "2.0,0.0"
        #[arg(long)]
        s: String,
        /// Number of terms (must be <= horizon)
        #[arg(long)]
        terms: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Eval { ref expr, ref range } => {
            let f = eval_text(expr, cli.horizon)?;
            let (lo, hi) = match range {
                Some(r) => parse_range(r, f.horizon())?,
                None => (1, f.horizon().min(16)),
            };
            print_values(&f, lo, hi, cli.output, cli.precision, expr);
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify {
            ref method,
            ref fns,
            ref derivs,
            ref primes,
            ref mode,
            m,
            ref anchors,
            ref spec,
        } => {
            let request = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    serde_json::from_str::<CertifyRequest>(&text)?
                }
                None => CertifyRequest {
                    method: method.clone().ok_or("missing certify method")?,
                    fns: split_top_level(fns.as_deref().ok_or("missing --fns")?),
                    derivs: derivs.as_deref().map(|d| split_top_level(d)).unwrap_or_default(),
                    primes: parse_u64_list(primes.as_deref())?,
                    mode: mode.clone(),
                    m,
                    anchors: anchors
                        .as_deref()
                        .map(|a| parse_u64_list(Some(a)))
                        .transpose()?
                        .map(|v| v.to_vec()),
                },
            };
            let cert = run_certify(&request, cli.horizon)?;
            println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
            Ok(ExitCode::from(cert.verdict.exit_code() as u8))
        }
        Command::Oracle { ref fns, degree, monomial_cap } => {
            let fs = eval_many(&split_top_level(fns), cli.horizon)?;
            let config = OracleConfig { monomial_cap };
            let report = dependence_oracle(&fs, degree, &config)?;
            println!("{}", serde_json::to_string_pretty(&report.to_json())?);
            Ok(ExitCode::from(report.certificate.verdict.exit_code() as u8))
        }
        Command::PaperExamples => {
            let items = paper::run_all();
            let mut all_pass = true;
            for item in &items {
                let tag = if item.pass { "PASS" } else { "FAIL" };
                all_pass &= item.pass;
                println!("{tag} {name}: {detail}", name = item.name, detail = item.detail);
            }
            println!(
                "{} of {} examples reproduced",
                items.iter().filter(|i| i.pass).count(),
                items.len()
            );
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Dirichlet { ref expr, ref s, terms } => {
            let s = parse_complex(s)?;
            if terms < 1 || terms > cli.horizon {
                return Err(format!(
                    "terms must lie in 1..=horizon ({}); pass --horizon to raise it",
                    cli.horizon
                )
                .into());
            }
            let f = eval_text(expr, cli.horizon)?;
            if terms > f.horizon() {
                return Err(format!(
                    "expression is only exact up to {} after horizon shrink",
                    f.horizon()
                )
                .into());
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 1..=terms {
                let value = f.at(n).eval_numeric(cli.precision).to_f64();
                if value == 0.0 {
                    continue;
                }
                let scale = (-s * (n as f64).ln()).exp();
                sum += scale * value;
            }
            match cli.output {
                Output::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "label": "partial sum, no convergence claim",
                        "s": [s.re, s.im],
                        "terms": terms,
                        "sum": [sum.re, sum.im],
                    }))?
                ),
                _ => {
                    println!("partial sum, no convergence claim");
                    println!(
                        "sum over n <= {terms} of f(n) n^-s at s = {} + {}i:",
                        s.re, s.im
                    );
                    println!("  {} + {}i", sum.re, sum.im);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Deserialize)]
struct CertifyRequest {
    method: String,
    fns: Vec<String>,
    #[serde(default)]
    derivs: Vec<String>,
    #[serde(default)]
    primes: Vec<u64>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    m: Option<u64>,
    #[serde(default)]
    anchors: Option<Vec<u64>>,
}

fn run_certify(req: &CertifyRequest, horizon: u64) -> Result<Certificate, Box<dyn std::error::Error>> {
    let fs = eval_many(&req.fns, horizon)?;
    let cert = match req.method.as_str() {
        "jacobian" => {
            let ops = parse_derivs(&req.derivs)?;
            certify_jacobian(&fs, &ops)?
        }
        "values" => {
            let mode = match req.mode.as_deref().unwrap_or("at_primes") {
                "at_primes" => ValueTestMode::AtPrimes,
                "gvj" => ValueTestMode::Gvj { m: req.m.unwrap_or(1) },
                "order_anchored" => ValueTestMode::OrderAnchored { ms: req.anchors.clone() },
                other => return Err(format!("unknown values mode `{other}`").into()),
            };
            certify_value_tests(&fs, &req.primes, mode)?
        }
        "orders" => certify_orders(&fs)?,
        "support" => match req.mode.as_deref().unwrap_or("triangular") {
            "triangular" => certify_support_triangular(&fs, &req.primes)?,
            "escape" => {
                if fs.is_empty() {
                    return Err("support escape needs f followed by the g functions".into());
                }
                certify_support_escape(&fs[0], &fs[1..])?
            }
            other => return Err(format!("unknown support mode `{other}`").into()),
        },
        "wronskian" => {
            let ops = parse_derivs(&req.derivs)?;
            if ops.len() != 1 {
                return Err("wronskian takes exactly one derivation".into());
            }
            wronskian_li(&fs, &ops[0])?
        }
        other => return Err(format!("unknown certify method `{other}`").into()),
    };
    Ok(cert)
}

fn eval_text(text: &str, horizon: u64) -> Result<ArithFun, Error> {
    let parsed = dsl::parse(text)?;
    for warning in &parsed.warnings {
        eprintln!("warning: {warning}");
    }
    dsl::eval_expr(&parsed.root, horizon)
}

fn eval_many(texts: &[String], horizon: u64) -> Result<Vec<ArithFun>, Error> {
    texts.iter().map(|t| eval_text(t, horizon)).collect()
}

/// Splits on commas at parenthesis/brace depth zero, so expressions
/// like `e(2),mg(Omega,1,one)` come apart correctly.
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(current.trim().to_string());
                current.clear();
                continue;
            }
            _ => {}
        }
        current.push(c);
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

fn parse_u64_list(text: Option<&str>) -> Result<Vec<u64>, Box<dyn std::error::Error>> {
    match text {
        None => Ok(Vec::new()),
        Some(t) => t
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|e| e.to_string().into()))
            .collect(),
    }
}

/// Derivation tokens: `dL`, `dp<p>`, `dhat<k>`, `dk<k>`, `T<a>`.
fn parse_derivs(tokens: &[String]) -> Result<Vec<OperatorSpec>, Box<dyn std::error::Error>> {
    tokens
        .iter()
        .map(|t| {
            let t = t.trim();
            if t == "dL" {
                return Ok(OperatorSpec::LogDeriv);
            }
            if let Some(rest) = t.strip_prefix("dhat") {
                return Ok(OperatorSpec::DkHat(rest.parse()?));
            }
            if let Some(rest) = t.strip_prefix("dp") {
                return Ok(OperatorSpec::BasicDeriv(rest.parse()?));
            }
            if let Some(rest) = t.strip_prefix("dk") {
                return Ok(OperatorSpec::CompositeDk(rest.parse()?));
            }
            if let Some(rest) = t.strip_prefix('T') {
                return Ok(OperatorSpec::Shift(rest.parse()?));
            }
            Err(format!("unknown derivation token `{t}` (try dL, dp2, dhat4, dk6, T2)").into())
        })
        .collect()
}

fn parse_range(text: &str, horizon: u64) -> Result<(u64, u64), Box<dyn std::error::Error>> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u64>()?, b.trim().parse::<u64>()?),
        None => {
            let n = text.trim().parse::<u64>()?;
            (n, n)
        }
    };
    if lo < 1 || hi < lo || hi > horizon {
        return Err(format!(
            "range {lo}..{hi} outside the function's exact horizon 1..={horizon}"
        )
        .into());
    }
    Ok((lo, hi))
}

fn parse_complex(text: &str) -> Result<Complex64, Box<dyn std::error::Error>> {
    let (re, im) = text
        .split_once(',')
        .ok_or("expected complex s as \"re,im\", e.g. \"2.0,0.0\"")?;
    Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
}

fn print_values(f: &ArithFun, lo: u64, hi: u64, output: Output, precision: u32, expr: &str) {
    match output {
        Output::Table => {
            println!("effective horizon: {}", f.horizon());
            println!("{:>8}  {:<28}  numeric", "n", "value");
            for n in lo..=hi {
                let value = f.at(n);
                let numeric = value.eval_numeric(precision).decimal(precision);
                println!("{n:>8}  {:<28}  {numeric}", value.to_string());
            }
        }
        Output::Json => {
            let values: Vec<String> = (lo..=hi).map(|n| f.at(n).to_string()).collect();
            let numeric: Vec<String> = (lo..=hi)
                .map(|n| f.at(n).eval_numeric(precision).decimal(precision))
                .collect();
            let payload = json!({
                "expr": expr,
                "horizon": f.horizon(),
                "range": [lo, hi],
                "values": values,
                "numeric": numeric,
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
        }
        Output::Csv => {
            println!("index,value,numeric");
            for n in lo..=hi {
                let value = f.at(n);
                let numeric = value.eval_numeric(precision).decimal(precision);
                println!("{n},{value},{numeric}");
            }
        }
    }
}
