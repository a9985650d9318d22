//! `fgc` — command-line front end for the formal group calculus.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
//! 3 precision or window error. Every failure prints a single
//! machine-parsable line on stderr.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fgc_core::charclass::{
    class_on_bundle, genus_cpn, hirzebruch_series, orientation_quotient, symmetric_expand,
    BundleData, ExpClass,
};
use fgc_core::cnstruct::{adjoint_series, bar_differential, sharp, sharp0, CnBody, CnStructure};
use fgc_core::fgl::{FglKind, FormalGroupLaw};
use fgc_core::json;
use fgc_core::selftest;
use fgc_core::series::TruncSeries;
use fgc_core::tate::{
    beta_coefficient, minimal_window, tate_invert_euler, tch_on_bundle, total_chern_check,
    TateContext,
};
use fgc_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fgc",
    version,
    about = "exact calculus of formal group laws and Tate-valued characteristic classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Truncation order for series computations.
    #[arg(long, default_value_t = 6)]
    order: u32,

    /// Emit canonical JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct LawArgs {
    /// Law selector: additive | multiplicative | universal_rational |
    /// jacobi_quartic | broken-example.
    #[arg(long, default_value = "multiplicative")]
    law: String,

    /// Generator count for the universal rational law.
    #[arg(long, default_value_t = 4)]
    gens: u32,
}

impl LawArgs {
    fn kind(&self) -> Result<FglKind> {
        FglKind::from_selector(&self.law, self.gens)
    }
}

fn parse_window(text: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected low:high, got `{}`", text))?;
    let low = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad window low: {}", e))?;
    let high = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad window high: {}", e))?;
    Ok((low, high))
}

#[derive(Subcommand)]
enum Command {
    /// Formal group laws: construction and axiom verification.
    Fgl {
        #[command(subcommand)]
        cmd: FglCmd,
    },
    /// Characteristic classes: expansion, quotients, genera.
    Class {
        #[command(subcommand)]
        cmd: ClassCmd,
    },
    /// The Euler-Tate class and Laurent-window operations.
    Tate {
        #[command(subcommand)]
        cmd: TateCmd,
    },
    /// C^n-structures: verification, the bar differential, sharp.
    Cn {
        #[command(subcommand)]
        cmd: CnCmd,
    },
    /// Runs the acceptance suite and prints a pass/fail table.
    Selftest {
        /// Cap on the per-criterion orders (defaults to the stated ones).
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum FglCmd {
    /// Prints the law's series.
    Show {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Verifies unitality, commutativity, associativity, homogeneity.
    Verify {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum ClassCmd {
    /// Expands prod f(x_i) in the elementary symmetric polynomials.
    Expand {
        /// One-variable unit series in the interchange format.
        #[arg(long = "series-json")]
        series_json: String,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Genus of complex projective n-space.
    Genus {
        #[command(flatten)]
        law: LawArgs,
        /// Series selector: todd | l | one | hirzebruch.
        #[arg(long, default_value = "todd")]
        series: String,
        /// The projective space dimension.
        #[arg(long)]
        cpn: u32,
        #[command(flatten)]
        common: Common,
    },
    /// The quotient class g(x)/x of an orientation parameter.
    Quotient {
        #[arg(long = "series-json")]
        series_json: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum TateCmd {
    /// The Euler-Tate class of a sum of line bundles.
    Tch {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        roots: u32,
        /// Laurent window low:high.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
    /// The beta series (coefficient of x in the characteristic series).
    Beta {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
    /// Verifies the total-Chern specialization for the additive law.
    ChernCheck {
        #[arg(long)]
        roots: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
    /// Laurent inverse of the twisted Euler class.
    InvertEuler {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        roots: u32,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum CnCmd {
    /// Verifies a C^n structure from a series file.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        law: LawArgs,
        #[arg(long = "series-json")]
        series_json: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sharp: substitutes the Tate variable into the last slot.
    Sharp {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        law: LawArgs,
        #[arg(long = "series-json")]
        series_json: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
    /// The bar differential of a unit series.
    Delta {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long = "series-json")]
        series_json: String,
        #[command(flatten)]
        common: Common,
    },
    /// The adjoint-orientation series of a one-variable unit series.
    Adjoint {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long = "series-json")]
        series_json: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
    /// The n = 0 structure (x +_F t)/t with its unit verdict.
    Sharp0 {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::Precision(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load_series(path: &str) -> Result<TruncSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read `{}`: {}", path, e)))?;
    json::series_from_json(&json::from_str(&text)?)
}

/// Builds the law over the series' coefficient ring when they differ
/// (the built-in rings embed into any user ring carrying their
/// generators).
fn law_for_series(kind: FglKind, order: u32, f: &TruncSeries) -> Result<FormalGroupLaw> {
    let law = kind.build(order)?;
    if law.ring() == f.ring() {
        Ok(law)
    } else {
        law.over_ring(f.ring())
    }
}

fn emit_series(f: &TruncSeries, as_json: bool) {
    if as_json {
        println!("{}", json::to_canonical_string(&json::series_to_json(f)));
    } else {
        println!("{}", f);
    }
}

fn emit_tate(f: &fgc_core::TateSeries, as_json: bool) {
    if as_json {
        println!("{}", json::to_canonical_string(&json::tate_to_json(f)));
    } else {
        println!("{}", f);
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Fgl { cmd } => fgl_cmd(cmd),
        Command::Class { cmd } => class_cmd(cmd),
        Command::Tate { cmd } => tate_cmd(cmd),
        Command::Cn { cmd } => cn_cmd(cmd),
        Command::Selftest { order, seed, json } => selftest_cmd(order, seed, json),
    }
}

fn fgl_cmd(cmd: FglCmd) -> Result<ExitCode> {
    match cmd {
        FglCmd::Show { law, common } => {
            let built = law.kind()?.build(common.order)?;
            if common.json {
                emit_series(built.series(), true);
            } else {
                println!("{}: F(x, y) = {}", built.name(), built.series());
            }
            Ok(ExitCode::SUCCESS)
        }
        FglCmd::Verify { law, common } => {
            let mut built = law.kind()?.build(common.order)?;
            let report = built.verify(common.order)?;
            if common.json {
                let payload = serde_json::json!({
                    "law": built.name(),
                    "series": serde_json::to_value(json::series_to_json(built.series())).unwrap(),
                    "report": {
                        "order": report.order,
                        "unital": report.unital,
                        "commutative": report.commutative,
                        "associative_to": report.associative_to,
                        "homogeneous": report.homogeneous,
                        "failures": report.failures,
                    },
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else if report.passed() {
                println!(
                    "{}: all axioms hold to order {}",
                    built.name(),
                    report.order
                );
            } else {
                println!("{}: FAILED {:?}", built.name(), report.failures);
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn class_cmd(cmd: ClassCmd) -> Result<ExitCode> {
    match cmd {
        ClassCmd::Expand {
            series_json,
            rank,
            common,
        } => {
            let f = load_series(&series_json)?;
            let class = ExpClass::new(f)?;
            let prod = class_on_bundle(&class, &BundleData::standard_roots(rank))?;
            let g = symmetric_expand(&prod.truncated(common.order.min(prod.trunc())), rank)?;
            emit_series(&g, common.json);
            Ok(ExitCode::SUCCESS)
        }
        ClassCmd::Genus {
            law,
            series,
            cpn,
            common,
        } => {
            let order = common.order.max(cpn + 2);
            let class = match series.as_str() {
                "todd" => ExpClass::todd(order)?,
                "l" | "l-genus" | "signature" => ExpClass::l_genus(order)?,
                "one" => ExpClass::one(&fgc_core::GradedRing::rationals(), order),
                "hirzebruch" => hirzebruch_series(&law.kind()?.build(order)?)?,
                other => {
                    return Err(Error::Invalid(format!(
                        "unknown series `{}` (todd | l | one | hirzebruch)",
                        other
                    )))
                }
            };
            let value = genus_cpn(&class, cpn)?;
            if common.json {
                let payload = serde_json::json!({
                    "series": series,
                    "cpn": cpn,
                    "genus": value.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!("{}", value);
            }
            Ok(ExitCode::SUCCESS)
        }
        ClassCmd::Quotient {
            series_json,
            common,
        } => {
            let g = load_series(&series_json)?;
            let q = orientation_quotient(&g)?;
            emit_series(q.series(), common.json);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn tate_cmd(cmd: TateCmd) -> Result<ExitCode> {
    match cmd {
        TateCmd::Tch {
            law,
            roots,
            window,
            common,
        } => {
            let window = window.unwrap_or_else(|| minimal_window(roots, common.order));
            let ctx = TateContext::build(law.kind()?, window, common.order, roots)?;
            let v = BundleData::standard_roots(roots as usize);
            let tch = tch_on_bundle(&ctx, &v)?;
            emit_tate(&tch, common.json);
            Ok(ExitCode::SUCCESS)
        }
        TateCmd::Beta {
            law,
            window,
            common,
        } => {
            let window = window.unwrap_or((-2, common.order as i64));
            let ctx = TateContext::build(law.kind()?, window, 1, 1)?;
            let (beta, unit) = beta_coefficient(&ctx)?;
            if common.json {
                let payload = serde_json::json!({
                    "series": serde_json::to_value(json::tate_to_json(&beta)).unwrap(),
                    "unit": unit,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!("{} (unit: {})", beta, unit);
            }
            Ok(if unit {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        TateCmd::ChernCheck {
            roots,
            window,
            common,
        } => {
            let window = window.unwrap_or((-((roots + common.order) as i64), 2));
            let ctx = TateContext::build(FglKind::Additive, window, common.order, roots)?;
            let v = BundleData::standard_roots(roots as usize);
            let report = total_chern_check(&ctx, &v, common.order)?;
            if common.json {
                let payload = serde_json::json!({
                    "roots": roots,
                    "order": common.order,
                    "pass": report.pass,
                    "mismatch": report.mismatch,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else if report.pass {
                println!("total Chern class reproduced for {} roots", roots);
            } else {
                println!("MISMATCH: {}", report.mismatch.clone().unwrap_or_default());
            }
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        TateCmd::InvertEuler {
            law,
            roots,
            window,
            common,
        } => {
            let window = window.unwrap_or_else(|| minimal_window(roots, common.order));
            let ctx = TateContext::build(law.kind()?, window, common.order, roots)?;
            let v = BundleData::standard_roots(roots as usize);
            let inv = tate_invert_euler(&ctx, &v)?;
            emit_tate(&inv, common.json);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cn_cmd(cmd: CnCmd) -> Result<ExitCode> {
    match cmd {
        CnCmd::Verify {
            n,
            law,
            series_json,
            common,
        } => {
            let f = load_series(&series_json)?;
            let built = law_for_series(law.kind()?, common.order.max(f.trunc()), &f)?;
            let mut s = CnStructure::new_plain(n, built, f)?;
            let report = s.verify(common.order)?;
            if common.json {
                let payload = serde_json::json!({
                    "n": n,
                    "symmetric": report.symmetric,
                    "normalized": report.normalized,
                    "cocycle_to": report.cocycle_to,
                    "unit_ok": report.unit_ok,
                    "failures": report.failures,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else if report.passed() {
                println!("C^{} structure verified to order {}", n, report.order);
            } else {
                println!("FAILED: {:?}", report.failures);
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        CnCmd::Sharp {
            n,
            law,
            series_json,
            window,
            common,
        } => {
            let f = load_series(&series_json)?;
            let window = window.unwrap_or((-(common.order as i64), common.order as i64));
            let built = law_for_series(law.kind()?, common.order.max(f.trunc()), &f)?;
            let mut s = CnStructure::new_plain(n, built.clone(), f)?;
            let rin = s.verify(common.order)?;
            if !rin.essential_passed() {
                eprintln!(
                    "error: input structure fails verification: {:?}",
                    rin.failures
                );
                return Ok(ExitCode::from(1));
            }
            let ctx = TateContext::new(built, window, common.order)?;
            let mut out = sharp(&s, &ctx)?;
            let rout = out.verify(common.order)?;
            let CnBody::Tate(body) = out.body() else {
                unreachable!("sharp produces Tate bodies")
            };
            if common.json {
                let payload = serde_json::json!({
                    "n": out.n(),
                    "series": serde_json::to_value(json::tate_to_json(body)).unwrap(),
                    "symmetric": rout.symmetric,
                    "normalized": rout.normalized,
                    "cocycle_to": rout.cocycle_to,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!("{}", body);
                println!(
                    "verify: symmetric={} normalized={} cocycle_to={}",
                    rout.symmetric, rout.normalized, rout.cocycle_to
                );
            }
            Ok(if rout.essential_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        CnCmd::Delta {
            law,
            series_json,
            common,
        } => {
            let g = load_series(&series_json)?;
            let built = law_for_series(law.kind()?, common.order.max(g.trunc()), &g)?;
            let d = bar_differential(&g, &built)?;
            emit_series(&d, common.json);
            Ok(ExitCode::SUCCESS)
        }
        CnCmd::Adjoint {
            law,
            series_json,
            window,
            common,
        } => {
            let g = load_series(&series_json)?;
            let window = window.unwrap_or((-(common.order as i64), common.order as i64));
            let built = law_for_series(law.kind()?, common.order.max(g.trunc()), &g)?;
            let ctx = TateContext::new(built, window, common.order)?;
            let adj = adjoint_series(&g, &ctx)?;
            emit_tate(&adj, common.json);
            Ok(ExitCode::SUCCESS)
        }
        CnCmd::Sharp0 {
            law,
            window,
            common,
        } => {
            let window = window.unwrap_or((-(common.order as i64), common.order as i64));
            let ctx = TateContext::build(law.kind()?, window, common.order, 1)?;
            let mut s0 = sharp0(&ctx)?;
            let report = s0.verify(common.order)?;
            let CnBody::Tate(body) = s0.body() else {
                unreachable!()
            };
            if common.json {
                let payload = serde_json::json!({
                    "series": serde_json::to_value(json::tate_to_json(body)).unwrap(),
                    "unit_ok": report.unit_ok,
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                println!("{} (unit: {})", body, report.unit_ok);
            }
            Ok(if report.unit_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn selftest_cmd(order: Option<u32>, seed: u64, as_json: bool) -> Result<ExitCode> {
    let cfg = selftest::Config {
        order_cap: order,
        seed,
    };
    let results = selftest::run_all(&cfg);
    if as_json {
        let payload: Vec<serde_json::Value> = results
            .iter()
            .map(|c| {
                serde_json::json!({
                    "id": c.id,
                    "name": c.name,
                    "pass": c.pass,
                    "detail": c.detail,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        println!(" id  result       ms  name");
        for c in &results {
            println!(
                "{:>3}  {:<6} {:>8}  {} — {}",
                c.id,
                if c.pass { "PASS" } else { "FAIL" },
                c.millis,
                c.name,
                c.detail
            );
        }
        let passed = results.iter().filter(|c| c.pass).count();
        println!(
            "selftest: {} ({}/{})",
            if passed == results.len() {
                "PASS"
            } else {
                "FAIL"
            },
            passed,
            results.len()
        );
    }
    Ok(if selftest::all_pass(&results) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
