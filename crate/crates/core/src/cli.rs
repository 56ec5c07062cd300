//! Command-line front end. Exit status 0 on success, 1 on input errors and 2
//! when an exact oracle refuses an input beyond its budget.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{
    cycle_blowup, near_acyclic_gadget, oriented_complete_bipartite, random_digraph, random_tournament,
    transitive_tournament, BipartiteMode,
};
use crate::discrepancy::{bfree_fas, polynomial_witness, BfreeParams, DiscrepancyError, DiscrepancyWitness};
use crate::edgelist::{parse_edge_list, write_edge_list};
use crate::exact::{beta_exact, tau_exact, tau_partition_exact, tau_star_exact, ExactBudget, ExactError};
use crate::experiment::{experiment_scaling, ExperimentError, ExperimentSpec};
use crate::graph::{Digraph, FasResult};
use crate::greedy::{randomized_fas, GreedyError};
use crate::quasirandom::{quasirandom_report, report_to_json, QuasiError, ReportParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "faslab", version, about = "Feedback arc set laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a digraph in edge-list format.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Feedback arc set of an edge-list file.
    Fas {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Greedy)]
        algo: Algo,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Directional discrepancy of an edge-list file.
    Discrepancy {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Tau)]
        which: Which,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quasirandomness diagnostics of an edge-list file.
    Quasi {
        file: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, value_delimiter = ',', default_value = "4,6")]
        k: Vec<usize>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a scaling experiment described by a JSON spec.
    Experiment { spec: PathBuf },
}

#[derive(Subcommand, Debug)]
enum GenFamily {
    /// Random tournament.
    Tournament { n: usize },
    /// Transitive tournament.
    Transitive { n: usize },
    /// Complete bipartite graph, one-way unless --random.
    Bipartite {
        a: usize,
        b: usize,
        #[arg(long)]
        random: bool,
    },
    /// Balanced blowup of a directed (r+1)-cycle.
    Blowup { r: usize, t: usize },
    /// Near-acyclic gadget with 3N vertices.
    Gadget { big_n: usize },
    /// Uniform random oriented graph with m edges.
    Random { n: usize, m: usize },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Greedy,
    Exact,
    Bfree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Tau,
    TauStar,
    TauPart,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exact,
    Witness,
}

/// Failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        let code = if matches!(e, ExactError::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

impl From<QuasiError> for Failure {
    fn from(e: QuasiError) -> Self {
        match e {
            QuasiError::Exact(inner) => inner.into(),
            other => Failure::input(other),
        }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Exact(inner) => inner.into(),
            other => Failure::input(other),
        }
    }
}

impl From<DiscrepancyError> for Failure {
    fn from(e: DiscrepancyError) -> Self {
        Failure::input(e)
    }
}

impl From<GreedyError> for Failure {
    fn from(e: GreedyError) -> Self {
        Failure::input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

fn read_graph(path: &Path) -> Result<Digraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn print_fas(out: &mut dyn Write, label: &str, g: &Digraph, result: &FasResult) -> Result<(), Failure> {
    if !result.verify(g) {
        return Err(Failure::input("internal error: feedback arc set failed re-validation"));
    }
    writeln!(out, "{label}={}", result.size)?;
    writeln!(out, "surplus={}", result.surplus)?;
    writeln!(out, "ordering={}", join(result.ordering.sequence()))?;
    let deleted: Vec<String> = result.deleted.iter().map(|(u, v)| format!("{u}->{v}")).collect();
    writeln!(out, "deleted={}", deleted.join(" "))?;
    Ok(())
}

fn print_witness(out: &mut dyn Write, label: &str, exact: bool, w: &DiscrepancyWitness) -> Result<(), Failure> {
    writeln!(out, "{label}={}", w.difference)?;
    writeln!(out, "exact={exact}")?;
    writeln!(out, "A={}", join(&w.a))?;
    writeln!(out, "B={}", join(&w.b))?;
    Ok(())
}

fn c4_forward() -> Digraph {
    Digraph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).expect("valid pattern")
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let budget = ExactBudget::from_env()?;
    match command {
        Command::Gen { family, seed, out: path } => {
            let g = match family {
                GenFamily::Tournament { n } => random_tournament(n, seed),
                GenFamily::Transitive { n } => transitive_tournament(n),
                GenFamily::Bipartite { a, b, random } => {
                    let mode = if random { BipartiteMode::Random(seed) } else { BipartiteMode::OneWay };
                    oriented_complete_bipartite(a, b, mode).map_err(Failure::input)?
                }
                GenFamily::Blowup { r, t } => cycle_blowup(r, t).map_err(Failure::input)?,
                GenFamily::Gadget { big_n } => near_acyclic_gadget(big_n).map_err(Failure::input)?,
                GenFamily::Random { n, m } => random_digraph(n, m, seed).map_err(Failure::input)?,
            };
            let text = write_edge_list(&g);
            match path {
                Some(p) => std::fs::write(&p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Fas { file, algo, trials, seed } => {
            let g = read_graph(&file)?;
            if trials == 0 {
                return Err(Failure::input("--trials must be at least 1"));
            }
            match algo {
                Algo::Exact => print_fas(out, "beta", &g, &beta_exact(&g, &budget)?)?,
                Algo::Greedy => print_fas(out, "size", &g, &randomized_fas(&g, trials, seed)?.best.result)?,
                Algo::Bfree => {
                    let params = BfreeParams { trials, ..BfreeParams::default() };
                    let outcome = bfree_fas(&g, &c4_forward(), &params, seed)?;
                    print_fas(out, "size", &g, &outcome.result)?;
                    let ledger = serde_json::to_string(&outcome.ledger).expect("ledger serializes");
                    writeln!(out, "ledger={ledger}")?;
                }
            }
        }
        Command::Discrepancy { file, which, mode, seed } => {
            let g = read_graph(&file)?;
            let label = match which {
                Which::Tau => "tau",
                Which::TauStar => "tau_star",
                Which::TauPart => "tau_part",
            };
            let (w, exact) = match (mode, which) {
                (Mode::Exact, Which::Tau) => (tau_exact(&g, &budget)?, true),
                (Mode::Exact, Which::TauStar) => (tau_star_exact(&g, &budget)?, true),
                (Mode::Exact, Which::TauPart) => (tau_partition_exact(&g, &budget)?, true),
                (Mode::Witness, Which::TauPart) => {
                    let a: Vec<usize> = (0..g.n()).filter(|&v| g.imbalance(v) > 0).collect();
                    let b: Vec<usize> = (0..g.n()).filter(|&v| g.imbalance(v) <= 0).collect();
                    (DiscrepancyWitness::new(&g, a, b), true)
                }
                (Mode::Witness, _) => (polynomial_witness(&g, 20, seed)?, false),
            };
            print_witness(out, label, exact, &w)?;
        }
        Command::Quasi { file, delta, k, json, seed } => {
            let g = read_graph(&file)?;
            let params = ReportParams { delta, ks: k, seed, budget, ..ReportParams::default() };
            let report = quasirandom_report(&g, &params)?;
            if json {
                writeln!(out, "{}", report_to_json(&report))?;
            } else {
                let value = serde_json::to_value(&report).expect("report serializes");
                for (key, v) in value.as_object().expect("object") {
                    writeln!(out, "{key}={v}")?;
                }
            }
        }
        Command::Experiment { spec } => {
            let text =
                std::fs::read_to_string(&spec).map_err(|e| Failure::input(format!("{}: {e}", spec.display())))?;
            let spec: ExperimentSpec = serde_json::from_str(&text).map_err(ExperimentError::from)?;
            let outcome = match &spec.output {
                Some(path) => {
                    let mut file = std::fs::File::create(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
                    experiment_scaling(&spec, &mut file)?
                }
                None => experiment_scaling(&spec, out)?,
            };
            writeln!(out, "{}", serde_json::to_string(&outcome.fit).expect("fit serializes"))?;
        }
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command.
pub fn cli_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
