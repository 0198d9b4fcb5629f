use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tricolor::bench::{run_suite, BenchConfig, Suite};
use tricolor::dimacs::{load_dimacs, write_dimacs};
use tricolor::{
    approx_color, approx_independent_set, exact_3color, exact_max_independent_set,
    gen_planted_3col, ColorConfig, Error, Graph, IsConfig,
};

const EXIT_BUDGET: u8 = 3;
const EXIT_PROMISE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tricolor",
    version,
    about = "Approximate coloring of 3-colorable graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted 3-colorable graph in DIMACS format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the hidden coloring as JSON.
        #[arg(long)]
        planted_out: Option<PathBuf>,
    },
    /// Color a graph with about 3r + 4 colors.
    Color {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        per_round_calls: Option<usize>,
        #[arg(long)]
        repetitions: Option<usize>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        time_cap_factor: Option<f64>,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find an independent set of size about alpha / r.
    Is {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Exact solvers for small graphs.
    Exact {
        problem: ExactProblem,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run a benchmark suite.
    Bench {
        /// rounding-scaling, leaf-count or end-to-end
        name: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactProblem {
    Mis,
    #[value(name = "3color")]
    ThreeColor,
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")
        .with_context(|| format!("writing {}", path.display()))
}

fn is_config(node_budget: Option<u64>) -> IsConfig {
    let mut cfg = IsConfig::default();
    if let Some(b) = node_budget {
        cfg.node_budget = b;
    }
    cfg
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            n,
            degree,
            seed,
            out,
            planted_out,
        } => {
            let inst = gen_planted_3col(n, degree, seed)?;
            std::fs::write(&out, write_dimacs(&inst.graph))
                .with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = planted_out {
                write_json(&path, &inst.hidden_coloring.to_hidden_json())?;
            }
        }
        Command::Color {
            input,
            r,
            seed,
            per_round_calls,
            repetitions,
            beta,
            time_cap_factor,
            node_budget,
            report,
            out,
        } => {
            let g = read_graph(&input)?;
            let mut cfg = ColorConfig {
                is: is_config(node_budget),
                per_round_calls,
                ..ColorConfig::default()
            };
            cfg.is.repetitions = repetitions;
            if let Some(b) = beta {
                cfg.is.beta = b;
            }
            if let Some(f) = time_cap_factor {
                cfg.is.time_cap_factor = f;
            }
            let (coloring, rep) = approx_color(&g, r, &cfg, seed)?;
            write_json(&report, &rep)?;
            if let Some(path) = out {
                write_json(&path, &coloring)?;
            }
            println!("{} colors in {} rounds", rep.colors_used, rep.rounds);
            if rep.promise_violation {
                eprintln!("warning: residual graph is not 3-colorable; colored greedily");
                return Ok(ExitCode::from(EXIT_PROMISE));
            }
        }
        Command::Is {
            input,
            r,
            seed,
            node_budget,
            report,
        } => {
            let g = read_graph(&input)?;
            let (set, rep) = approx_independent_set(&g, r, &is_config(node_budget), seed)?;
            let json = serde_json::json!({
                "size": set.len(),
                "members": set.members(),
                "report": rep,
            });
            write_json(&report, &json)?;
            println!("{}", set.len());
        }
        Command::Exact {
            problem,
            input,
            budget,
        } => {
            let g = read_graph(&input)?;
            let outcome = match problem {
                ExactProblem::Mis => exact_max_independent_set(
                    &g,
                    budget.unwrap_or(tricolor::exact::DEFAULT_MIS_BUDGET),
                )
                .map(|s| println!("{}", s.len())),
                ExactProblem::ThreeColor => exact_3color(
                    &g,
                    budget.unwrap_or(tricolor::exact::DEFAULT_COLOR_BUDGET),
                )
                .map(|c| match c {
                    Some(c) => println!("{}", serde_json::to_string(&c).expect("serializable")),
                    None => println!("not 3-colorable"),
                }),
            };
            match outcome {
                Ok(()) => {}
                Err(e @ Error::BudgetExceeded { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(EXIT_BUDGET));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Bench {
            name,
            config,
            out_dir,
        } => {
            let suite: Suite = name.parse()?;
            let cfg = BenchConfig::from_path(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let output = run_suite(suite, &cfg)?;
            let (csv, summary) = output.write(&out_dir)?;
            for check in &output.checks {
                println!(
                    "{} {}: {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            println!("wrote {} and {}", csv.display(), summary.display());
            if !output.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e
                .downcast_ref::<Error>()
                .is_some_and(|e| matches!(e, Error::InvalidArgument(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
