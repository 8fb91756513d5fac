//! `pap`: command-line front end for penalized abduction problems.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pap_core::oracle::{oracle_admissible, oracle_pap, oracle_stable_models};
use pap_core::{
    eval_cost, gen_tsp, ground, parse_ground_atom, parse_ground_atom_list, parse_pap_with_warnings,
    CostFunction, Engine, EngineOptions, GroundAtom, OracleError, PapInstance, SearchStats,
    Solution, SolveError, SolveResult, Solver, SolverOptions, WeightMatrix, EPSILON,
};

#[derive(Parser, Debug)]
#[command(
    name = "pap",
    version,
    about = "Abduction with penalization over normal logic programs"
)]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,

    /// Override the instance's cost function (sum, count, prob, max)
    #[arg(long, global = true, value_name = "ID")]
    cost: Option<CostFunction>,

    /// Answer with the brute-force reference implementation
    #[arg(long, global = true)]
    oracle: bool,

    /// Search node cap for the engine
    #[arg(long, global = true, value_name = "N")]
    node_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the instance have an admissible solution?
    Check { file: PathBuf },
    /// Compute the optimal cost and an optimal solution
    Solve {
        file: PathBuf,
        /// List every optimal solution
        #[arg(long)]
        all: bool,
    },
    /// Is the given hypothesis set an admissible solution?
    Admissible(SetQuery),
    /// Is the given hypothesis set an optimal solution?
    Optimal(SetQuery),
    /// Is the hypothesis in some optimal solution?
    Relevant { file: PathBuf, atom: String },
    /// Is the hypothesis in every optimal solution?
    Necessary { file: PathBuf, atom: String },
    /// Stable models of the program with no hypothesis assumed
    Models { file: PathBuf },
    /// Print the ground instantiation
    Ground { file: PathBuf },
    /// Generate instances
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Args, Debug)]
struct SetQuery {
    file: PathBuf,
    /// Comma-separated hypothesis atoms
    #[arg(long, value_name = "ATOMS")]
    hypotheses: String,
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Travelling salesman instance from a weight matrix
    Tsp {
        /// Number of cities
        #[arg(long)]
        n: usize,
        /// Whitespace-separated integer matrix, one row per line
        #[arg(long, value_name = "FILE")]
        weights: PathBuf,
        /// Leave out the reachability rules, admitting disjoint subtours
        #[arg(long)]
        cycle_cover: bool,
    },
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn input(err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: 2,
            err: err.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = if e.is_capacity() { 3 } else { 2 };
        Failure {
            code,
            err: e.into(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = if matches!(e, OracleError::Cap { .. }) {
            3
        } else {
            2
        };
        Failure {
            code,
            err: e.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 3,
            err: e.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")
            .map_err(Failure::input)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::input)
    }
}

fn load(cli: &Cli, path: &PathBuf) -> Result<PapInstance, Failure> {
    let text = read_input(path)?;
    let name = path.display();
    let (p, warnings) = parse_pap_with_warnings(&text).map_err(|e| {
        for d in &e.diagnostics {
            eprintln!("{name}:{d}");
        }
        Failure::input(anyhow!("could not parse {name}"))
    })?;
    for w in warnings {
        eprintln!("{name}:{w}");
    }
    Ok(match cli.cost {
        Some(c) => p.with_cost(c),
        None => p,
    })
}

fn options(cli: &Cli) -> SolverOptions {
    let mut o = SolverOptions::default();
    if let Some(cap) = cli.node_cap {
        o.node_cap = cap;
    }
    o
}

/// Rounds to 9 significant digits for stable output.
fn round9(x: f64) -> f64 {
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn render(s: &Solution) -> Vec<String> {
    s.iter().map(GroundAtom::to_string).collect()
}

fn braces(items: &[String]) -> String {
    if items.is_empty() {
        "{}".to_string()
    } else {
        format!("{{ {} }}", items.join(", "))
    }
}

fn atom_arg(text: &str) -> Result<GroundAtom, Failure> {
    parse_ground_atom(text).map_err(|e| Failure::input(anyhow!("atom `{text}`: {e}")))
}

fn set_arg(text: &str) -> Result<Solution, Failure> {
    let atoms =
        parse_ground_atom_list(text).map_err(|e| Failure::input(anyhow!("--hypotheses: {e}")))?;
    Ok(atoms.into_iter().collect())
}

fn emit(out: &mut impl Write, v: &Value) -> io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(v).expect("json values serialize")
    )
}

fn decision(
    cli: &Cli,
    out: &mut impl Write,
    answer: bool,
    extra: Option<(&str, Value)>,
) -> Outcome {
    if cli.json {
        let mut v = json!({ "answer": answer });
        if let Some((k, x)) = extra {
            v[k] = x;
        }
        emit(out, &v)?;
    } else {
        writeln!(out, "{}", if answer { "yes" } else { "no" })?;
    }
    Ok(if answer { 0 } else { 1 })
}

fn oracle_result(p: &PapInstance, want_all: bool) -> Result<SolveResult, Failure> {
    let report = oracle_pap(p)?;
    let mut solutions = report.optimal.clone();
    if !want_all {
        solutions.truncate(1);
    }
    Ok(SolveResult {
        consistent: report.consistent(),
        optimal_cost: report.optimal_cost,
        solutions,
        stats: SearchStats::default(),
    })
}

fn run(cli: &Cli) -> Outcome {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Check { file } => {
            let p = load(cli, file)?;
            let yes = if cli.oracle {
                oracle_pap(&p)?.consistent()
            } else {
                Solver::with_options(&p, options(cli))?.is_consistent()?
            };
            if cli.json {
                emit(&mut out, &json!({ "consistent": yes }))?;
            } else {
                writeln!(out, "{}", if yes { "consistent" } else { "inconsistent" })?;
            }
            Ok(if yes { 0 } else { 1 })
        }
        Command::Solve { file, all } => {
            let p = load(cli, file)?;
            let r = if cli.oracle {
                oracle_result(&p, *all)?
            } else {
                Solver::with_options(&p, options(cli))?.solve(*all)?
            };
            if cli.json {
                let solutions: Vec<Vec<String>> = r.solutions.iter().map(render).collect();
                emit(
                    &mut out,
                    &json!({
                        "consistent": r.consistent,
                        "optimal_cost": r.optimal_cost.map(round9),
                        "solutions": solutions,
                        "stats": {
                            "nodes": r.stats.nodes_explored,
                            "checks": r.stats.admissibility_checks,
                            "ms": r.stats.elapsed.as_millis() as u64,
                        },
                    }),
                )?;
            } else if let Some(c) = r.optimal_cost {
                for s in &r.solutions {
                    writeln!(out, "cost={}  {}", round9(c), braces(&render(s)))?;
                }
            } else {
                writeln!(out, "inconsistent")?;
            }
            Ok(if r.consistent { 0 } else { 1 })
        }
        Command::Admissible(q) => {
            let p = load(cli, &q.file)?;
            let s = set_arg(&q.hypotheses)?;
            let yes = if cli.oracle {
                p.indices_of(&s).map_err(Failure::input)?;
                oracle_admissible(&p, &s)?
            } else {
                Solver::with_options(&p, options(cli))?.is_admissible(&s)?
            };
            decision(cli, &mut out, yes, None)
        }
        Command::Optimal(q) => {
            let p = load(cli, &q.file)?;
            let s = set_arg(&q.hypotheses)?;
            let yes = if cli.oracle {
                let idx = p.indices_of(&s).map_err(Failure::input)?;
                let report = oracle_pap(&p)?;
                let c = eval_cost(p.cost, &p.penalties(), idx).map_err(Failure::input)?;
                report.is_admissible(&s)
                    && report.optimal_cost.is_some_and(|best| c <= best + EPSILON)
            } else {
                Solver::with_options(&p, options(cli))?.is_optimal(&s)?
            };
            decision(cli, &mut out, yes, None)
        }
        Command::Relevant { file, atom } | Command::Necessary { file, atom } => {
            let relevant = matches!(cli.command, Command::Relevant { .. });
            let p = load(cli, file)?;
            let h = atom_arg(atom)?;
            let (yes, consistent) = if cli.oracle {
                p.indices_of([&h]).map_err(Failure::input)?;
                let report = oracle_pap(&p)?;
                let yes = if relevant {
                    report.relevant(&h)
                } else {
                    report.necessary(&h)
                };
                (yes, report.consistent())
            } else {
                let s = Solver::with_options(&p, options(cli))?;
                let yes = if relevant {
                    s.is_relevant(&h)?
                } else {
                    s.is_necessary(&h)?
                };
                (yes, s.is_consistent()?)
            };
            if !consistent && !cli.json {
                eprintln!(
                    "note: the instance has no admissible solution, so the answer is vacuous"
                );
            }
            decision(cli, &mut out, yes, Some(("consistent", json!(consistent))))
        }
        Command::Models { file } => {
            let p = load(cli, file)?;
            let g = ground(&p.program, &[]).map_err(Failure::input)?;
            let models = if cli.oracle {
                oracle_stable_models(&g, &g.facts)?
            } else {
                let opts = EngineOptions {
                    node_cap: options(cli).node_cap,
                    ..EngineOptions::default()
                };
                Engine::new(&g, opts)
                    .stable_models(&g.facts)
                    .map_err(|e| Failure::from(SolveError::from(e)))?
            };
            let rendered: Vec<Vec<String>> = models.iter().map(|m| g.render(m)).collect();
            if cli.json {
                emit(&mut out, &json!({ "models": rendered }))?;
            } else {
                for m in &rendered {
                    writeln!(out, "{{{}}}", m.join(", "))?;
                }
            }
            Ok(0)
        }
        Command::Ground { file } => {
            let p = load(cli, file)?;
            let g = ground(&p.program, &p.hypothesis_atoms()).map_err(Failure::input)?;
            write!(out, "{}", g.dump())?;
            Ok(0)
        }
        Command::Gen(Gen::Tsp {
            n,
            weights,
            cycle_cover,
        }) => {
            let w = WeightMatrix::parse(&read_input(weights)?).map_err(Failure::input)?;
            if w.n() != *n {
                return Err(Failure::input(pap_core::TspError::CityCount {
                    expected: *n,
                    found: w.n(),
                }));
            }
            write!(
                out,
                "{}",
                gen_tsp(&w, *cycle_cover).map_err(Failure::input)?
            )?;
            Ok(0)
        }
    }
}
