//! Command-line front end. `run` parses arguments, executes one
//! subcommand and returns the exit code: 0 on success, 1 when a check
//! fails, 2 on usage, parse or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::betarank::{FlipSystem, SystemFunction, SystemPoint};
use crate::cbspace::{build_space, PointAddress};
use crate::dendrite::build::DEFAULT_BLOCKS;
use crate::dendrite::io::{read_stage, to_dot, write_stage};
use crate::dendrite::{build_twocolor_tower, build_wazewski_stage, Order};
use crate::ordinal::Ordinal;
use crate::rational::{parse_q, Rational};
use crate::suites::{run_suite, SuiteConfig, CHECKS};
use crate::textio::{read_space, write_space};

#[derive(Debug, Parser)]
#[command(name = "tamedyn", version, about = "Exact ranks, dendrite stages and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Countable compact spaces of a given Cantor-Bendixson rank.
    Space {
        #[command(subcommand)]
        action: SpaceAction,
    },
    /// Cantor-Bendixson rank of a stored space.
    CbRank { file: PathBuf },
    /// Oscillation rank of a function on the doubled space.
    BetaRank {
        file: PathBuf,
        #[arg(long = "fn", value_enum, default_value_t = FnName::ParityFlip)]
        function: FnName,
        /// Rank at this epsilon instead of the supremum over epsilon.
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Rational>,
    },
    /// Clopen level swap agreeing with the parity flip on sample points.
    Ellis {
        file: PathBuf,
        /// Sample point `address@level`, e.g. `2,0@1`; `@0` is the root.
        #[arg(long = "point", required = true, value_parser = parse_system_point)]
        points: Vec<SystemPoint>,
    },
    /// Finite stages of dendrites.
    Dendrite {
        #[command(subcommand)]
        action: DendriteAction,
    },
    /// Runs verification checks and prints a report.
    Verify {
        /// A check name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Instance count for randomized checks; each check has its own default.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Renders a stored stage as a DOT graph.
    Export {
        #[arg(long)]
        stage: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SpaceAction {
    Build {
        #[arg(long, value_parser = parse_ordinal)]
        rank: Ordinal,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum DendriteAction {
    Build {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        depth: u32,
        /// Ramification orders, comma separated; `w` for infinite order.
        #[arg(long, value_delimiter = ',', value_parser = parse_order, default_value = "3")]
        orders: Vec<Order>,
        #[arg(long, default_value_t = 1)]
        width: u32,
        #[arg(long, default_value_t = 1)]
        marks: u32,
        #[arg(long, default_value_t = DEFAULT_BLOCKS)]
        blocks: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Wazewski,
    Twocolor,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FnName {
    Identity,
    ParityFlip,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    parse_q(s).ok_or_else(|| format!("not a rational: {s}"))
}

fn parse_ordinal(s: &str) -> Result<Ordinal, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_order(s: &str) -> Result<Order, String> {
    match s.trim() {
        "w" => Ok(Order::Omega),
        t => t.parse().map(Order::Finite).map_err(|_| format!("not an order: {s}")),
    }
}

fn parse_system_point(s: &str) -> Result<SystemPoint, String> {
    let (addr, level) = s.rsplit_once('@').ok_or_else(|| format!("expected address@level: {s}"))?;
    let base: PointAddress = addr.parse().map_err(|e| format!("{e}"))?;
    match level {
        "0" => Ok(SystemPoint::new(base, 0)),
        "1" => Ok(SystemPoint::new(base, 1)),
        _ => Err(format!("level must be 0 or 1: {s}")),
    }
}

/// A failure and its exit code.
struct Exit(i32, String);

fn usage(msg: impl std::fmt::Display) -> Exit {
    Exit(2, msg.to_string())
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Exit> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| usage(e)),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Exit> {
    match command {
        Command::Space {
            action: SpaceAction::Build { rank, out: path },
        } => {
            let space = build_space(&rank).map_err(usage)?;
            emit(out, path.as_deref(), &write_space(&space))?;
            Ok(0)
        }
        Command::CbRank { file } => {
            let space = read_space(&read(&file)?).map_err(usage)?;
            emit(out, None, &format!("{}\n", space.cb_rank()))?;
            Ok(0)
        }
        Command::BetaRank { file, function, eps } => {
            let sys = FlipSystem::new(read_space(&read(&file)?).map_err(usage)?);
            let f = match function {
                FnName::Identity => SystemFunction::Identity,
                FnName::ParityFlip => SystemFunction::ParityFlip,
            };
            let rank = match eps {
                Some(e) => sys.beta_rank_at_eps(&f, &e).map_err(usage)?,
                None => sys.beta_rank(&f),
            };
            emit(out, None, &format!("{rank}\n"))?;
            Ok(0)
        }
        Command::Ellis { file, points } => {
            let sys = FlipSystem::new(read_space(&read(&file)?).map_err(usage)?);
            let g = sys.ellis_approximant(&points).map_err(usage)?;
            let mut text = String::new();
            if let SystemFunction::ClopenLevelSwap(cones) = &g {
                for c in cones {
                    text.push_str(&format!("cone apex={} k={}\n", c.apex, c.k));
                }
            }
            let mut agree = 0;
            for x in &points {
                let flip = sys.apply(&SystemFunction::ParityFlip, x).map_err(usage)?;
                agree += usize::from(sys.apply(&g, x).map_err(usage)? == flip);
            }
            text.push_str(&format!("agree {agree}/{}\n", points.len()));
            emit(out, None, &text)?;
            Ok(i32::from(agree != points.len()))
        }
        Command::Dendrite {
            action:
                DendriteAction::Build {
                    mode,
                    depth,
                    orders,
                    width,
                    marks,
                    blocks,
                    out: path,
                },
        } => {
            let stage = match mode {
                Mode::Wazewski => build_wazewski_stage(&orders, depth, width),
                Mode::Twocolor => build_twocolor_tower(depth, blocks, marks).map(|mut t| t.pop().expect("nonempty tower")),
            }
            .map_err(usage)?;
            emit(out, path.as_deref(), &write_stage(&stage))?;
            Ok(0)
        }
        Command::Verify { suite, seed, trials, out: path } => {
            let cfg = SuiteConfig { seed, trials };
            let report = run_suite(&suite, &cfg)
                .ok_or_else(|| usage(format!("unknown suite {suite}; expected all or one of {}", CHECKS.join(", "))))?;
            emit(out, path.as_deref(), &report.to_string())?;
            Ok(report.exit_code())
        }
        Command::Export { stage, out: path } => {
            let s = read_stage(&read(&stage)?).map_err(usage)?;
            emit(out, path.as_deref(), &to_dot(&s))?;
            Ok(0)
        }
    }
}
