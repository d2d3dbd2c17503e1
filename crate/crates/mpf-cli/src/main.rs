//! `mpf` — multiproduct formulas from the command line.
//!
//! Subcommands: `construct` (formula families), `optimize` (conditioning
//! searches), `verify-tables` (fixture verification), `cost` (analytic cost
//! reports and sweeps), `bench` (Heisenberg-chain step benchmark), `fig1`
//! (per-order curves), and `gen-tables` (fixture regeneration).
//!
//! Structured output is JSON or CSV on stdout. Exit codes: 0 on success,
//! 1 on usage or runtime errors, 2 when verification fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mpf::bench::{
    benchmark_csv, benchmark_sweep, figure1_csv, figure1_data, fixture_formulas,
    generate_table_fixture, parse_fixture, verify_tables, FixtureRow, TableFixture,
    TABLE_BASE2_JSON, TABLE_BASE4_JSON,
};
use mpf::construct::{
    arithmetic_mpf, chebyshev_mpf, rounded_mpf, FormulaJson, MpfFormula, RealMpf, ScalePolicy,
};
use mpf::cost::{choose_order, total_cost, SimulationTask};
use mpf::exact::parse_rational;
use mpf::optimize::{l1_min_lp, search_min_k1_capped, search_min_product, LpObjective, LpProblem, LpSolution};
use mpf::Error;

#[derive(Parser)]
#[command(
    name = "mpf",
    version,
    about = "Well-conditioned multiproduct formulas: construction, optimization, cost models, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Real-exponent Chebyshev-node formula (closed-form coefficients).
    Chebyshev,
    /// Integer exponents by scaling/rounding the halved Chebyshev nodes.
    Rounded,
    /// Arithmetic-progression exponents k_j = j.
    Chin,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Objective {
    /// Minimize the product ‖a‖₁·‖k‖₁.
    Product,
    /// Minimize ‖k‖₁ subject to ‖a‖₁ ≤ cap.
    K1cap,
    /// Minimize ‖a‖₁ over the fixed candidate set (plain linear program).
    A1,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum FormulaSet {
    /// Bottom table half: minimal ‖k‖₁ under the amplification cap.
    K1cap,
    /// Top table half: minimal ‖a‖₁·‖k‖₁.
    Product,
    /// Both halves.
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a formula of the given order and print it as JSON.
    Construct {
        /// Target order 2m (even).
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum)]
        method: Method,
        /// Base sequence order (2 or 4; 4 is supported for --method chin).
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an optimally conditioned formula and print it as JSON.
    Optimize {
        /// Order parameter m (target order is 2m).
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        alpha: u32,
        #[arg(long, value_enum)]
        objective: Objective,
        /// Condition-number cap for --objective k1cap (rational, e.g. "2" or "9/5").
        #[arg(long, default_value = "2")]
        cap: String,
        /// Largest candidate exponent for the sweep/LP.
        #[arg(long)]
        max_exponent: Option<u64>,
    },
    /// Verify a table fixture file row by row.
    VerifyTables {
        #[arg(long)]
        fixtures: PathBuf,
    },
    /// Analytic cost report (JSON) or sweep (CSV with multiple values).
    Cost {
        /// One value for a JSON report, a comma list for a CSV sweep.
        #[arg(long, value_delimiter = ',', required = true)]
        t_lambda: Vec<f64>,
        /// One value for a JSON report, a comma list for a CSV sweep.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilon: Vec<f64>,
        /// Formula JSON file; defaults to the rounded construction at the
        /// order chosen from tλ/ε.
        #[arg(long)]
        formula: Option<PathBuf>,
        /// Account a bare LCU step instead of amplified steps.
        #[arg(long)]
        unamplified: bool,
        /// Write CSV sweep output here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Heisenberg-chain benchmark: minimal steps and 3·r·‖k‖₁ cost per ε.
    Bench {
        #[arg(long)]
        sites: usize,
        /// Evolution time (defaults to the site count).
        #[arg(long)]
        time: Option<f64>,
        /// Comma-separated error targets.
        #[arg(long, value_delimiter = ',', required = true)]
        eps_list: Vec<f64>,
        /// Base sequence order (2 or 4) selecting the fixture table.
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Fixture file to draw formulas from (bundled tables by default).
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Use only formulas with order parameter up to this m.
        #[arg(long, default_value_t = 10)]
        max_m: u32,
        #[arg(long, value_enum, default_value_t = FormulaSet::K1cap)]
        formula_set: FormulaSet,
        /// Allow more than 8 sites (dimension beyond 256; slow).
        #[arg(long)]
        allow_large: bool,
    },
    /// Per-order query/condition curves as CSV.
    Fig1 {
        #[arg(long)]
        max_m: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Regenerate a table fixture by rerunning both searches.
    GenTables {
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// Write the fixture here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 15)]
        max_m: u32,
        /// Condition-number cap for the bottom half.
        #[arg(long, default_value = "2")]
        cap: String,
    },
}

#[derive(Serialize)]
struct RealMpfJson {
    order: u32,
    interpolation_points: Vec<f64>,
    real_exponents: Vec<f64>,
    coefficients: Vec<f64>,
    a_norm1: f64,
    k_norm1: f64,
}

impl From<&RealMpf> for RealMpfJson {
    fn from(f: &RealMpf) -> Self {
        Self {
            order: f.order(),
            interpolation_points: f.interpolation_points().to_vec(),
            real_exponents: f.real_exponents().to_vec(),
            coefficients: f.coefficients().to_vec(),
            a_norm1: f.a_norm1(),
            k_norm1: f.k_norm1(),
        }
    }
}

#[derive(Serialize)]
struct LpSolutionJson {
    alpha: u32,
    order: u32,
    exponents: Vec<u64>,
    coefficients: Vec<String>,
    a_norm1: String,
    k_norm1: u64,
    objective: String,
    exhaustive: bool,
}

fn lp_solution_json(sol: &LpSolution, alpha: u32, m: u32) -> LpSolutionJson {
    LpSolutionJson {
        alpha,
        order: 2 * m,
        exponents: sol.support.clone(),
        coefficients: sol.coefficients.iter().map(|c| c.to_string()).collect(),
        a_norm1: sol.a_norm1.to_string(),
        k_norm1: sol.k_norm1,
        objective: sol.objective_tag.to_string(),
        exhaustive: sol.exhaustive,
    }
}

fn emit(text: String, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_formula(path: &Path) -> Result<MpfFormula, Error> {
    let content = std::fs::read_to_string(path)?;
    let json: FormulaJson = serde_json::from_str(&content)?;
    MpfFormula::try_from(json)
}

fn builtin_fixture(base: u32) -> Result<TableFixture, Error> {
    match base {
        2 => parse_fixture(TABLE_BASE2_JSON, "builtin:table_base2"),
        4 => parse_fixture(TABLE_BASE4_JSON, "builtin:table_base4"),
        other => Err(Error::InvalidInput {
            details: format!("no bundled table for base order {other}"),
        }),
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Construct {
            order,
            method,
            base,
            out,
        } => {
            if order == 0 || order % 2 != 0 {
                return Err(Error::InvalidInput {
                    details: format!("--order {order} must be even and positive"),
                });
            }
            let m = order / 2;
            let text = match (method, base) {
                (Method::Chebyshev, 2) => {
                    let f = chebyshev_mpf(m as usize);
                    serde_json::to_string_pretty(&RealMpfJson::from(&f))?
                }
                (Method::Rounded, 2) => {
                    let f = rounded_mpf(m as usize, ScalePolicy::default())?;
                    serde_json::to_string_pretty(&FormulaJson::from(&f))?
                }
                (Method::Chin, 2 | 4) => {
                    let f = arithmetic_mpf(m, base)?;
                    serde_json::to_string_pretty(&FormulaJson::from(&f))?
                }
                (Method::Chebyshev | Method::Rounded, _) => {
                    return Err(Error::InvalidInput {
                        details: format!(
                            "--base {base} is not available for this method (Chebyshev \
                             constructions are base-2)"
                        ),
                    })
                }
                (Method::Chin, _) => {
                    return Err(Error::InvalidInput {
                        details: format!("--base {base} must be 2 or 4"),
                    })
                }
            };
            emit(text + "\n", out.as_deref())?;
            Ok(0)
        }
        Command::Optimize {
            m,
            alpha,
            objective,
            cap,
            max_exponent,
        } => {
            let sol = match objective {
                Objective::Product => search_min_product(m, alpha, max_exponent)?,
                Objective::K1cap => {
                    let cap = parse_rational(&cap)?;
                    search_min_k1_capped(m, alpha, &cap, max_exponent)?
                }
                Objective::A1 => {
                    let max_exponent = max_exponent.unwrap_or(4 * m as u64);
                    l1_min_lp(&LpProblem {
                        m,
                        alpha,
                        max_exponent,
                        objective: LpObjective::MinANorm1,
                    })?
                }
            };
            println!("{}", serde_json::to_string_pretty(&lp_solution_json(&sol, alpha, m))?);
            Ok(0)
        }
        Command::VerifyTables { fixtures } => {
            let report = verify_tables(&fixtures)?;
            print!("{}", report.summary());
            let failures = report.failures().count();
            if failures == 0 {
                println!("all {} rows pass", report.rows.len());
                Ok(0)
            } else {
                println!("{failures} of {} rows fail", report.rows.len());
                Ok(2)
            }
        }
        Command::Cost {
            t_lambda,
            epsilon,
            formula,
            unamplified,
            csv,
        } => {
            let fixed = formula.as_deref().map(load_formula).transpose()?;
            let formula_for = |task: &SimulationTask| -> Result<MpfFormula, Error> {
                match &fixed {
                    Some(f) => Ok(f.clone()),
                    None => {
                        let m = choose_order(task) / 2;
                        rounded_mpf(m as usize, ScalePolicy::default())
                    }
                }
            };
            if t_lambda.len() == 1 && epsilon.len() == 1 {
                let task = SimulationTask::new(t_lambda[0], epsilon[0])?;
                let report = total_cost(&task, &formula_for(&task)?, !unamplified);
                println!("{}", serde_json::to_string_pretty(&report)?);
                return Ok(0);
            }
            let mut text = String::from("t_lambda,epsilon,order,r,u2_queries,progmpf_queries\n");
            for &tl in &t_lambda {
                for &eps in &epsilon {
                    let task = SimulationTask::new(tl, eps)?;
                    let f = formula_for(&task)?;
                    let report = total_cost(&task, &f, !unamplified);
                    text.push_str(&format!(
                        "{},{:e},{},{},{},{}\n",
                        tl,
                        eps,
                        2 * report.order_m,
                        report.steps_r,
                        report.u2_queries,
                        report.progmpf_queries
                    ));
                }
            }
            emit(text, csv.as_deref())?;
            Ok(0)
        }
        Command::Bench {
            sites,
            time,
            eps_list,
            base,
            csv,
            fixtures,
            max_m,
            formula_set,
            allow_large,
        } => {
            if sites > 8 && !allow_large {
                return Err(Error::InvalidInput {
                    details: format!(
                        "{sites} sites means a {}-dimensional dense system; pass --allow-large \
                         to accept the runtime",
                        1u64 << sites
                    ),
                });
            }
            let fixture = match fixtures {
                Some(path) => {
                    let content = std::fs::read_to_string(&path)?;
                    parse_fixture(&content, &path.display().to_string())?
                }
                None => builtin_fixture(base)?,
            };
            let mut formulas = Vec::new();
            if formula_set != FormulaSet::Product {
                formulas.extend(fixture_formulas(&fixture, "min_k1_capped", max_m)?);
            }
            if formula_set != FormulaSet::K1cap {
                formulas.extend(fixture_formulas(&fixture, "min_a1k1", max_m)?);
            }
            let time = time.unwrap_or(sites as f64);
            let points = benchmark_sweep(sites, time, &eps_list, &formulas, base)?;
            emit(benchmark_csv(&points), csv.as_deref())?;
            Ok(0)
        }
        Command::Fig1 { max_m, csv } => {
            let rows = figure1_data(max_m)?;
            emit(figure1_csv(&rows), csv.as_deref())?;
            Ok(0)
        }
        Command::GenTables {
            base,
            out,
            max_m,
            cap,
        } => {
            let cap = parse_rational(&cap)?;
            let (top, bottom) = match base {
                2 => (1..=max_m, 3..=max_m),
                4 => (3..=max_m, 3..=max_m),
                other => {
                    return Err(Error::InvalidInput {
                        details: format!("--base {other} must be 2 or 4"),
                    })
                }
            };
            let fixture = generate_table_fixture(base, top, bottom, &cap, None)?;
            let text = serde_json::to_string_pretty(&fixture)?;
            emit(text + "\n", out.as_deref())?;
            summarize_fixture(&fixture);
            Ok(0)
        }
    }
}

fn summarize_fixture(fixture: &TableFixture) {
    let line = |r: &FixtureRow| {
        eprintln!(
            "  {:14} m={:<2} k={:?} a1={} k1={}{}",
            r.objective,
            r.m,
            r.exponents,
            r.a_norm1,
            r.k_norm1,
            if r.exhaustive { "" } else { " (heuristic)" }
        );
    };
    eprintln!("base {} table: {} rows", fixture.base_alpha, fixture.rows.len());
    for row in &fixture.rows {
        line(row);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
