//! Command-line front-end for the evolutionary-stability toolkit.
//!
//! Exit codes: 0 success, 2 input error, 3 indeterminate ESS decision,
//! 4 precondition failure (e.g. a uniform barrier requested for a strategy
//! that is not stable against multiple mutations). `EVOSTAB_THREADS` caps
//! internal parallelism; output is deterministic regardless.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use evostab_cli::document::{AnalysisDocument, CertifyVerdict, GameMeta, StrategyAnalysis};
use evostab_core::barriers::{max_box_barrier, uniform_barrier, MutationSet};
use evostab_core::catalog;
use evostab_core::dynamics::{simulate, write_csv, InvasionScenario};
use evostab_core::oracle::{search_mess_counterexample_with, GridSpec};
use evostab_core::rat::{format_rat, parse_rat};
use evostab_core::stability::analyze;
use evostab_core::{Error, MixedStrategy, SymmetricGame};

#[derive(Parser)]
#[command(
    name = "evostab",
    version,
    about = "Exact evolutionary-stability analysis for finite symmetric games"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide all stability flags for a strategy, or sweep all pure
    /// strategies (every multi-mutation-stable strategy is pure, so the
    /// sweep finds them all)
    Analyze {
        /// Game JSON file
        game: PathBuf,
        /// Strategy literal like "[1/2,1/2]"
        #[arg(long, conflicts_with = "pure_sweep", required_unless_present = "pure_sweep")]
        strategy: Option<String>,
        /// Analyze all k pure strategies
        #[arg(long)]
        pure_sweep: bool,
    },
    /// Compute the maximal box invasion barrier for explicit mutants, or a
    /// uniform barrier valid for any m mutants
    Barrier {
        game: PathBuf,
        #[arg(long)]
        strategy: String,
        /// Mutant strategy literals
        #[arg(long, num_args = 1.., conflicts_with = "uniform", required_unless_present = "uniform")]
        mutants: Vec<String>,
        /// Number of simultaneous mutants for a uniform barrier
        #[arg(long)]
        uniform: Option<usize>,
    },
    /// Integrate a multi-mutant invasion under replicator dynamics
    Simulate {
        game: PathBuf,
        #[arg(long)]
        incumbent: String,
        #[arg(long, num_args = 1..)]
        mutants: Vec<String>,
        /// Initial shares, incumbent first (m+1 values summing to 1)
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        shares: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long = "t-end", default_value_t = 200.0)]
        t_end: f64,
        /// Write the trajectory CSV here (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force search for a stability counterexample at a fixed
    /// resolution
    Certify {
        game: PathBuf,
        #[arg(long)]
        strategy: String,
        /// Mutant grid denominator
        #[arg(long)]
        denom: u32,
        /// Number of simultaneous mutants
        #[arg(long)]
        m: usize,
        /// Candidate proportions, e.g. --eps 1/10 1/5
        #[arg(long, num_args = 1..)]
        eps: Vec<String>,
    },
    /// Print a named example game as JSON
    Gen {
        #[command(subcommand)]
        target: GenTarget,
    },
}

#[derive(Subcommand)]
enum GenTarget {
    /// 2x2 anti-coordination game whose unique ESS is the even mix
    Example1,
    /// 2x2 degenerate game with a non-strict vertex that repels any number
    /// of simultaneous mutations
    Example2,
    /// Hawk-Dove with resource value V and fight cost C (0 < V < C)
    HawkDove { v: String, c: String },
    /// k x k game with integer entries drawn uniformly from {-3..3}
    Random { k: usize, seed: u64 },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::IndeterminateEss { .. } => 3,
            Error::NotMess(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn thread_cap() -> usize {
    std::env::var("EVOSTAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn load_game(path: &Path) -> Result<SymmetricGame, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(SymmetricGame::parse(&text)?)
}

fn parse_strategy(game: &SymmetricGame, literal: &str) -> Result<MixedStrategy, Failure> {
    let p = MixedStrategy::parse(literal)?;
    game.check_strategy(&p)?;
    Ok(p)
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Analyze {
            game,
            strategy,
            pure_sweep,
        } => cmd_analyze(&game, strategy.as_deref(), pure_sweep),
        Command::Barrier {
            game,
            strategy,
            mutants,
            uniform,
        } => cmd_barrier(&game, &strategy, &mutants, uniform),
        Command::Simulate {
            game,
            incumbent,
            mutants,
            shares,
            dt,
            t_end,
            out,
        } => cmd_simulate(&game, &incumbent, &mutants, &shares, dt, t_end, out.as_deref()),
        Command::Certify {
            game,
            strategy,
            denom,
            m,
            eps,
        } => cmd_certify(&game, &strategy, denom, m, &eps),
        Command::Gen { target } => cmd_gen(target),
    }
}

fn cmd_analyze(
    game_path: &Path,
    strategy: Option<&str>,
    pure_sweep: bool,
) -> Result<(), Failure> {
    let game = load_game(game_path)?;
    let strategies: Vec<MixedStrategy> = if pure_sweep {
        (0..game.k()).map(|c| MixedStrategy::pure(game.k(), c)).collect()
    } else {
        vec![parse_strategy(&game, strategy.expect("clap enforces the group"))?]
    };

    let threads = thread_cap().clamp(1, strategies.len());
    let reports: Vec<Result<_, Error>> = if threads == 1 {
        strategies.iter().map(|p| analyze(&game, p)).collect()
    } else {
        let chunk = strategies.len().div_ceil(threads);
        let mut out: Vec<Option<Result<_, Error>>> = vec![None; strategies.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (t, chunk_items) in strategies.chunks(chunk).enumerate() {
                let game = &game;
                handles.push(scope.spawn(move || {
                    (
                        t * chunk,
                        chunk_items
                            .iter()
                            .map(|p| analyze(game, p))
                            .collect::<Vec<_>>(),
                    )
                }));
            }
            for handle in handles {
                let (offset, results) = handle.join().expect("analysis thread panicked");
                for (i, r) in results.into_iter().enumerate() {
                    out[offset + i] = Some(r);
                }
            }
        });
        out.into_iter().map(|r| r.expect("all slots filled")).collect()
    };

    let mut results = Vec::with_capacity(strategies.len());
    for (p, report) in strategies.into_iter().zip(reports) {
        results.push(StrategyAnalysis::from_report(p, report?));
    }
    let document = AnalysisDocument {
        game: GameMeta {
            k: game.k(),
            labels: game.labels().map(<[String]>::to_vec),
            source: game_path.display().to_string(),
        },
        results,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    println!("{}", serde_json::to_string_pretty(&document).expect("serializable"));
    Ok(())
}

fn cmd_barrier(
    game_path: &Path,
    strategy: &str,
    mutants: &[String],
    uniform: Option<usize>,
) -> Result<(), Failure> {
    let game = load_game(game_path)?;
    let p = parse_strategy(&game, strategy)?;
    let json = if let Some(m) = uniform {
        let report = uniform_barrier(&game, &p, m)?;
        serde_json::to_string_pretty(&report).expect("serializable")
    } else {
        let mutants = mutants
            .iter()
            .map(|lit| parse_strategy(&game, lit))
            .collect::<Result<Vec<_>, _>>()?;
        let ms = MutationSet::new(p, mutants)?;
        let result = max_box_barrier(&game, &ms)?;
        serde_json::to_string_pretty(&result).expect("serializable")
    };
    println!("{json}");
    Ok(())
}

fn cmd_simulate(
    game_path: &Path,
    incumbent: &str,
    mutants: &[String],
    shares: &[f64],
    dt: f64,
    t_end: f64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let game = load_game(game_path)?;
    let mut strategies = vec![parse_strategy(&game, incumbent)?];
    for lit in mutants {
        strategies.push(parse_strategy(&game, lit)?);
    }
    if shares.len() != strategies.len() {
        return Err(Failure::input(format!(
            "expected {} shares (incumbent first), got {}",
            strategies.len(),
            shares.len()
        )));
    }
    let scenario = InvasionScenario::new(game, strategies, shares.to_vec(), dt, t_end)?;
    let trajectory = simulate(&scenario)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let mut writer = std::io::BufWriter::new(file);
            write_csv(&trajectory, &mut writer)
                .and_then(|()| writer.flush())
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            println!("{}", trajectory.outcome);
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(&trajectory, stdout.lock())
                .map_err(|e| Failure::input(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_certify(
    game_path: &Path,
    strategy: &str,
    denom: u32,
    m: usize,
    eps: &[String],
) -> Result<(), Failure> {
    let game = load_game(game_path)?;
    let p = parse_strategy(&game, strategy)?;
    let eps_list = eps
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rat(&format!("eps[{i}]"), s))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = GridSpec::new(denom, eps_list, m)?;
    let found = search_mess_counterexample_with(&game, &p, &spec, thread_cap())?;
    let verdict = match found {
        Some(counterexample) => CertifyVerdict::Counterexample { counterexample },
        None => CertifyVerdict::Absent {
            note: "no counterexample at resolution".to_string(),
            denom: spec.denom,
            m: spec.m,
            eps_list: spec.eps_list.iter().map(format_rat).collect(),
        },
    };
    println!("{}", serde_json::to_string_pretty(&verdict).expect("serializable"));
    Ok(())
}

fn cmd_gen(target: GenTarget) -> Result<(), Failure> {
    let game = match target {
        GenTarget::Example1 => catalog::example1(),
        GenTarget::Example2 => catalog::example2(),
        GenTarget::HawkDove { v, c } => {
            let v = parse_rat("V", &v)?;
            let c = parse_rat("C", &c)?;
            catalog::hawk_dove(&v, &c)?
        }
        GenTarget::Random { k, seed } => {
            if k == 0 {
                return Err(Failure::input("k must be at least 1"));
            }
            catalog::random_game(k, seed)
        }
    };
    println!("{}", game.to_json());
    Ok(())
}
