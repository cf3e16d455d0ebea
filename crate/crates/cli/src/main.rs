//! Command-line surface: build codes, compute weight hierarchies, count
//! torus zeros, check dual identities, and run the verification sweeps.
//!
//! JSON is the machine interface; the human-readable table output is
//! rendered from the same JSON value. All outputs carry a schema_version
//! field. Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 budget or enumeration cap exceeded.

use std::fs;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperweight::bounds::{shadow_lower_bound, zero_count_bound, BoundVariant};
use hyperweight::codes::{build_code, nullspace, CodeFamily, LinearCode};
use hyperweight::gf::{make_field, FieldSpec};
use hyperweight::poly::PolynomialJson;
use hyperweight::torus::{count_common_zeros_threaded, enumerate_affine_torus_with_cap};
use hyperweight::verify::{
    run_bounds_suite, run_duals_suite, run_formula_suite, run_shadows_suite, SuiteReport,
};
use hyperweight::weights::{weight_hierarchy, Method, SearchOpts, DEFAULT_SEARCH_BUDGET};
use hyperweight::{Error, Result};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "hyperweight", version, about = "Evaluation codes on tori: builders, weight hierarchies, bounds, duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format; `table` is rendered from the JSON value.
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and print its parameters.
    Build {
        /// affine | projective | sfleq | delta-prime | proj-dual
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        d: usize,
        /// Also write the generator matrix to this CSV file.
        #[arg(long, value_name = "PATH.csv")]
        emit_generator: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Compute a weight hierarchy d_1..d_r_max.
    Ghw {
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r_max: usize,
        /// brute | formula | both; `both` exits nonzero on any mismatch.
        #[arg(long, default_value = "brute")]
        method: String,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Count common affine-torus zeros of a JSON list of polynomials.
    Zeros {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: usize,
        /// JSON file holding a list of {"s":…, "terms":[{"exps":…, "coeff":…}]}.
        #[arg(long, value_name = "FILE.json")]
        polys: String,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Verify the dual-code identity by exact matrix comparison.
    DualCheck {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        d: usize,
        /// Check the projective dual instead of the affine one.
        #[arg(long)]
        projective: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run a verification sweep and print a pass/fail table.
    Verify {
        /// formulas | bounds | shadows | duals
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 3)]
        q_max: u32,
        #[arg(long, default_value_t = 4)]
        s_max: usize,
        /// Samples per configuration for the randomized bounds suite.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// PRNG seed for the randomized sweeps.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Print the zero-count and shadow bounds with their sources.
    Bound {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        /// homogeneous | at-most
        #[arg(long, default_value = "homogeneous")]
        variant: String,
        #[command(flatten)]
        output: OutputOpts,
    },
}

/// Enumeration and search budgets, overridable via HYPERWEIGHT_BUDGET.
fn budget_from_env() -> Result<Option<u128>> {
    match std::env::var("HYPERWEIGHT_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(Some)
            .map_err(|_| Error::BadParameters(format!("HYPERWEIGHT_BUDGET={v} is not an integer"))),
        Err(_) => Ok(None),
    }
}

/// The formula sweep keeps a tighter default so `verify` stays interactive.
const DEFAULT_SUITE_BUDGET: u128 = 10_000_000;

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(val))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// The pass/fail table for a verification sweep, derived from its JSON.
fn render_suite_table(v: &Value) -> String {
    let mut out = String::new();
    let checks = v["checks"].as_array().cloned().unwrap_or_default();
    for c in &checks {
        let pass = c["pass"].as_bool().unwrap_or(false);
        out.push_str(&format!(
            "{}  {}  expected: {}  got: {}\n",
            if pass { "PASS" } else { "FAIL" },
            scalar(&c["id"]),
            scalar(&c["expected"]),
            scalar(&c["got"]),
        ));
    }
    out.push_str(&format!(
        "suite={} passed={} failed={}\n",
        scalar(&v["suite"]),
        v["passed"],
        v["failed"]
    ));
    out
}

fn emit(value: &Value, output: &OutputOpts, table: Option<String>) -> Result<()> {
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => table.unwrap_or_else(|| {
            let mut s = String::new();
            render_value(value, 0, &mut s);
            s
        }),
        Format::Csv => {
            return Err(Error::BadParameters(
                "csv output is only available for `build`".into(),
            ))
        }
    };
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::BadParameters(format!("cannot write {path}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_family(s: &str) -> Result<CodeFamily> {
    CodeFamily::from_str(s)
}

fn build_named(family: &str, q: u64, s: usize, d: usize, cap: u128) -> Result<(Arc<FieldSpec>, LinearCode)> {
    let fs = make_field(q)?;
    let code = build_code(parse_family(family)?, &fs, s, d, cap)?;
    Ok((fs, code))
}

fn run(cli: Cli) -> Result<u8> {
    let budget = budget_from_env()?.unwrap_or(DEFAULT_SEARCH_BUDGET);
    match cli.command {
        Command::Build {
            family,
            q,
            s,
            d,
            emit_generator,
            output,
        } => {
            let (_, code) = build_named(&family, q, s, d, budget)?;
            if let Some(path) = emit_generator {
                fs::write(&path, code.generator_csv())
                    .map_err(|e| Error::BadParameters(format!("cannot write {path}: {e}")))?;
            }
            if output.format == Format::Csv {
                match &output.out {
                    Some(path) => fs::write(path, code.generator_csv())
                        .map_err(|e| Error::BadParameters(format!("cannot write {path}: {e}")))?,
                    None => print!("{}", code.generator_csv()),
                }
                return Ok(0);
            }
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "family": code.meta().family.to_string(),
                "q": code.meta().q,
                "s": code.meta().s,
                "d": code.meta().d,
                "n": code.length(),
                "k": code.dimension(),
            });
            emit(&value, &output, None)?;
            Ok(0)
        }
        Command::Ghw {
            family,
            q,
            s,
            d,
            r_max,
            method,
            threads,
            output,
        } => {
            let (_, code) = build_named(&family, q, s, d, budget)?;
            let method = Method::from_str(&method)?;
            let opts = SearchOpts { budget, threads };
            let report = weight_hierarchy(&code, r_max, method, &opts)?;
            let mut value = serde_json::to_value(&report).expect("serializable");
            value["schema_version"] = json!(SCHEMA_VERSION);
            emit(&value, &output, None)?;
            if report.truncated.is_some() {
                return Ok(3);
            }
            if !report.mismatches.is_empty() {
                return Ok(1);
            }
            Ok(0)
        }
        Command::Zeros {
            q,
            s,
            polys,
            threads,
            output,
        } => {
            let fs = make_field(q)?;
            let text = fs::read_to_string(&polys)
                .map_err(|e| Error::BadParameters(format!("cannot read {polys}: {e}")))?;
            let parsed: Vec<PolynomialJson> = serde_json::from_str(&text)
                .map_err(|e| Error::BadParameters(format!("bad polynomial JSON: {e}")))?;
            let family = parsed
                .into_iter()
                .map(|pj| {
                    if pj.s != s {
                        return Err(Error::DimensionMismatch(format!(
                            "polynomial in {} variables, expected {s}",
                            pj.s
                        )));
                    }
                    pj.into_polynomial(&fs)
                })
                .collect::<Result<Vec<_>>>()?;
            let pts = enumerate_affine_torus_with_cap(&fs, s, budget)?;
            let count = count_common_zeros_threaded(&family, &pts, threads)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "q": q,
                "s": s,
                "polynomials": family.len(),
                "points": pts.len(),
                "common_zeros": count,
            });
            emit(&value, &output, None)?;
            Ok(0)
        }
        Command::DualCheck {
            q,
            s,
            d,
            projective,
            output,
        } => {
            let fs = make_field(q)?;
            let (primal, dual, label) = if projective {
                (
                    build_code(CodeFamily::Projective, &fs, s, d, budget)?,
                    build_code(CodeFamily::ProjDual, &fs, s, d, budget)?,
                    "C_U == (C_d^P)^perp",
                )
            } else {
                (
                    build_code(CodeFamily::Affine, &fs, s, d, budget)?,
                    build_code(CodeFamily::DeltaPrime, &fs, s, d, budget)?,
                    "C_Delta' == C_d^perp",
                )
            };
            let kernel = nullspace(primal.generator(), &fs)?;
            let equal = *dual.generator() == kernel;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "q": q,
                "s": s,
                "d": d,
                "projective": projective,
                "identity": label,
                "equal": equal,
                "k": dual.dimension(),
                "n": dual.length(),
            });
            let table = format!(
                "{} {} (k={}, n={})\n",
                label,
                if equal { "holds" } else { "FAILS" },
                dual.dimension(),
                dual.length()
            );
            emit(&value, &output, Some(table))?;
            Ok(if equal { 0 } else { 1 })
        }
        Command::Verify {
            suite,
            q_max,
            s_max,
            samples,
            seed,
            threads,
            output,
        } => {
            let suite_budget = budget_from_env()?.unwrap_or(DEFAULT_SUITE_BUDGET);
            let report: SuiteReport = match suite.as_str() {
                "formulas" => run_formula_suite(q_max, s_max, suite_budget, threads)?,
                "bounds" => run_bounds_suite(q_max, s_max, samples, seed)?,
                "shadows" => run_shadows_suite(q_max, s_max)?,
                "duals" => run_duals_suite(q_max, s_max)?,
                other => {
                    return Err(Error::BadParameters(format!("unknown suite {other}")));
                }
            };
            let value = serde_json::to_value(&report).expect("serializable");
            let table = render_suite_table(&value);
            emit(&value, &output, Some(table))?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Bound {
            q,
            s,
            d,
            r,
            variant,
            output,
        } => {
            let variant = BoundVariant::from_str(&variant)?;
            let zb = zero_count_bound(q, s, d, r, variant)?;
            let sb = shadow_lower_bound(q, s, d, r, variant)?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "q": q,
                "s": s,
                "d": d,
                "r": r,
                "variant": match variant {
                    BoundVariant::Homogeneous => "homogeneous",
                    BoundVariant::AtMost => "at-most",
                },
                "zero_count_bound": serde_json::to_value(&zb).expect("serializable"),
                "shadow_lower_bound": sb,
            });
            emit(&value, &output, None)?;
            Ok(0)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::SizeCap { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
