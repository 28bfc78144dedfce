//! `fastsort` command-line tool.
//!
//! Exit codes: 0 success, 1 validation or verification failure, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fastsort::harness::{self, Check, ExperimentConfig, Model};
use fastsort::rank::{self, Profile, TieRule};
use fastsort::{
    backward_count, backward_edges, formulas, Algorithm, Method, Ordering, PivotRule, Tournament,
};

#[derive(Parser)]
#[command(
    name = "fastsort",
    version,
    about = "Sorting-style heuristics for feedback arc set in tournaments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tournament file.
    Gen {
        #[arg(long)]
        n: usize,
        /// uniform, transitive or noisy:P
        #[arg(long, default_value = "uniform")]
        model: Model,
        #[arg(long, env = "FASTSORT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order a tournament with a heuristic or the exact solver.
    Solve {
        #[arg(long)]
        algo: Method,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, env = "FASTSORT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random")]
        pivot: PivotRule,
    },
    /// Count the backward edges of an ordering.
    Cost {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated vertex ids, earliest first.
        #[arg(long)]
        order: String,
    },
    /// Run a Monte Carlo campaign and print CSV.
    Experiment(ExperimentArgs),
    /// Compare the enumeration oracles with the closed forms.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        theorem: u8,
        /// Largest n (theorem 1) or run length (theorems 2 and 3).
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Print a table of closed-form values.
    Formulas {
        #[arg(long)]
        table: Table,
        #[arg(long, default_value_t = 10)]
        max: u64,
    },
    /// Aggregate ranked ballots into one ranking.
    Aggregate {
        #[arg(long)]
        ballots: PathBuf,
        #[arg(long, default_value = "quick")]
        algo: Method,
        #[arg(long, env = "FASTSORT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random")]
        pivot: PivotRule,
        #[arg(long, value_enum, default_value_t = Ties::Error)]
        ties: Ties,
    },
}

#[derive(clap::Args)]
struct ExperimentArgs {
    /// TOML file with the fields of an experiment configuration.
    #[arg(long, conflicts_with_all = ["algo", "n", "model", "trials", "pivot", "exact", "sequential"])]
    config: Option<PathBuf>,
    /// Comma-separated algorithms (insertion, merge, selection, bubble, quick, exact).
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Method>,
    #[arg(long, required_unless_present = "config")]
    n: Option<usize>,
    #[arg(long)]
    model: Option<Model>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, env = "FASTSORT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    pivot: Option<PivotRule>,
    /// Solve every instance exactly and report cost ratios.
    #[arg(long)]
    exact: bool,
    /// Run trials on the calling thread only.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Bk,
    Total,
    H,
    P,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    Error,
    Random,
    Lex,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(cli.command, &mut stdout) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = stdout.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_tournament(path: &PathBuf) -> Result<Tournament> {
    Tournament::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &mut impl Write, file: Option<&PathBuf>, text: &str) -> Result<()> {
    match file {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<ExitCode> {
    match command {
        Command::Gen {
            n,
            model,
            seed,
            out: file,
        } => {
            let t = model.generate(n, seed)?;
            emit(out, file.as_ref(), &t.to_text())?;
        }
        Command::Solve {
            algo,
            input,
            seed,
            pivot,
        } => {
            let t = read_tournament(&input)?;
            let s = algo.solve(&t, seed, pivot)?;
            writeln!(out, "order {}", s.ordering)?;
            writeln!(out, "cost {}", s.cost)?;
            writeln!(out, "work {}", s.work)?;
        }
        Command::Cost { input, order } => {
            let t = read_tournament(&input)?;
            let o = Ordering::parse(&order)?;
            writeln!(out, "cost {}", backward_count(&t, &o)?)?;
            writeln!(out, "# backward edges: <from> <to>, from placed after to")?;
            for (u, v) in backward_edges(&t, &o)? {
                writeln!(out, "{u} {v}")?;
            }
        }
        Command::Experiment(args) => {
            let cfg = experiment_config(&args)?;
            let stats = if cfg.compare_exact {
                harness::approximation_report(&cfg)?
            } else {
                harness::run_trials(&cfg)?
            };
            emit(out, args.out.as_ref(), &stats.to_csv())?;
        }
        Command::Verify { theorem, nmax } => return verify(theorem, nmax, out),
        Command::Formulas { table, max } => formula_table(table, max, out)?,
        Command::Aggregate {
            ballots,
            algo,
            seed,
            pivot,
            ties,
        } => {
            let profile = Profile::parse(&read(&ballots)?)
                .with_context(|| format!("parsing {}", ballots.display()))?;
            let tie = match ties {
                Ties::Error => TieRule::Error,
                Ties::Random => TieRule::Random(seed),
                Ties::Lex => TieRule::Lexicographic,
            };
            let agg = rank::aggregate(&profile, algo, seed, pivot, tie)?;
            writeln!(out, "ranking {}", profile.names(&agg.ordering).join(" "))?;
            writeln!(out, "total_kendall_tau {}", agg.total_kendall_tau)?;
            writeln!(out, "majority_cost {}", agg.tournament_cost)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    if let Some(path) = &args.config {
        let cfg: ExperimentConfig =
            toml::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(cfg);
    }
    let algorithms = if args.algo.is_empty() {
        Algorithm::ALL
            .iter()
            .map(|&a| Method::Heuristic(a))
            .collect()
    } else {
        args.algo.clone()
    };
    Ok(ExperimentConfig {
        algorithms,
        n: args.n.context("--n is required")?,
        model: args.model.unwrap_or(Model::Uniform),
        trials: args.trials.unwrap_or(1000),
        seed: args.seed,
        pivot: args.pivot.unwrap_or_default(),
        compare_exact: args.exact,
        parallel: !args.sequential,
    })
}

fn verify(theorem: u8, nmax: Option<usize>, out: &mut impl Write) -> Result<ExitCode> {
    let checks: Vec<Check> = match theorem {
        1 => {
            let n = nmax.unwrap_or(5);
            writeln!(
                out,
                "theorem 1: mean insertion cost over all tournaments, n = 2..={n}"
            )?;
            harness::verify_insertion_total(n)?
        }
        2 => {
            let g = nmax.unwrap_or(5);
            writeln!(
                out,
                "theorem 2: head-comparison probability H(i,j), runs of length {g}"
            )?;
            harness::verify_merge_comparison(g)?
        }
        3 => {
            let g = nmax.unwrap_or(4);
            writeln!(out, "theorem 3: backward probability P(i,j), runs of length {g}; identity for i,j <= 12")?;
            harness::verify_merge_backward(g, 12)?
        }
        _ => bail!("unknown theorem {theorem}"),
    };
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed == 0 {
        writeln!(out, "all {} checks passed", checks.len())?;
        Ok(ExitCode::SUCCESS)
    } else {
        writeln!(out, "{failed} of {} checks FAILED", checks.len())?;
        Ok(ExitCode::from(1))
    }
}

fn header(out: &mut impl Write, cols: [&str; 3]) -> io::Result<()> {
    writeln!(
        out,
        "{:<10} {:<28} {:<24} float evaluator",
        cols[0], cols[1], cols[2]
    )
}

fn formula_table(table: Table, max: u64, out: &mut impl Write) -> Result<()> {
    use num_traits::ToPrimitive;
    let row = |out: &mut dyn Write,
               key: String,
               exact: formulas::ExactRational,
               float: f64|
     -> Result<()> {
        let exact_f = exact.to_f64().unwrap_or(f64::NAN);
        writeln!(
            out,
            "{key:<10} {:<28} {exact_f:<24} {float}",
            exact.to_string()
        )?;
        Ok(())
    };
    match table {
        Table::Bk => {
            header(out, ["k", "B(k)", "B(k) as f64"])?;
            for k in 1..=max {
                row(out, k.to_string(), formulas::b_k(k)?, formulas::b_k_f64(k)?)?;
            }
        }
        Table::Total => {
            header(out, ["n", "expected", "expected as f64"])?;
            for n in 2..=max.max(2) {
                row(
                    out,
                    n.to_string(),
                    formulas::expected_total_backward(n)?,
                    formulas::expected_total_backward_f64(n)?,
                )?;
            }
        }
        Table::H | Table::P => {
            let name = if matches!(table, Table::H) {
                "H(i,j)"
            } else {
                "P(i,j)"
            };
            header(out, ["i,j", name, "as f64"])?;
            for i in 1..=max {
                for j in 1..=max {
                    let (exact, float) = match table {
                        Table::H => (formulas::h_prob(i, j)?, formulas::h_prob_f64(i, j)?),
                        _ => (
                            formulas::backward_prob(i, j)?,
                            formulas::backward_prob_f64(i, j)?,
                        ),
                    };
                    row(out, format!("{i},{j}"), exact, float)?;
                }
            }
        }
    }
    Ok(())
}
