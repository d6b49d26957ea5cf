use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use spcalc_core::Bounds;

use crate::jobs::{resolve, Command};
use crate::record::Record;
use crate::workspace::{load, Workspace};

#[derive(Debug, Parser)]
#[command(name = "spcalc", about = "Small presheaves, Kan extensions, Day convolution and Isbell conjugacy on finite and procedural categories")]
pub struct Cli {
    /// Workspace file (`.cat`).
    #[arg(long, global = true)]
    pub workspace: Option<PathBuf>,
    /// Overrides, e.g. `probes=16,depth=4,budget=1000000`.
    #[arg(long, global = true)]
    pub bounds: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Leave `wall_ms` out of records.
    #[arg(long, global = true)]
    pub no_time: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Value of a presheaf at an object.
    Eval {
        presheaf: String,
        #[arg(long)]
        at: String,
    },
    /// Hom object between two presheaves.
    Hom { f: String, g: String },
    /// Weighted colimit of a diagram of representables.
    Colim {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        cat: Option<String>,
    },
    /// Pointwise weighted limit, certified.
    Limit {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        cat: Option<String>,
    },
    /// Left Kan extension of a presheaf along a functor.
    Kan {
        #[arg(long)]
        functor: String,
        #[arg(long)]
        presheaf: String,
    },
    /// Restriction of a presheaf along a functor, certified.
    Restrict {
        #[arg(long)]
        functor: String,
        #[arg(long)]
        presheaf: String,
    },
    /// Day convolution.
    Convolve {
        f: String,
        g: String,
        #[arg(long)]
        monoidal: String,
    },
    /// Internal hom for Day convolution.
    Ihom {
        g: String,
        h: String,
        #[arg(long)]
        monoidal: String,
        #[arg(long)]
        left: bool,
    },
    /// Isbell conjugate of a presheaf.
    Isbell {
        #[arg(long, conflicts_with = "right", required_unless_present = "right")]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
    },
    /// Fixed points of the Isbell closure on a finite poset over Bool2.
    Dm { poset: String },
    #[command(subcommand)]
    Check(Check),
    /// Seeded theorem replay.
    Replay {
        suite: String,
        /// Cases per suite; defaults per suite.
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Canonical text of the workspace.
    Fmt,
}

#[derive(Debug, Subcommand)]
pub enum Check {
    Complete {
        #[arg(long)]
        cat: String,
        #[arg(long, default_value = "finite-limits")]
        phi: String,
    },
    Closed {
        #[arg(long)]
        monoidal: String,
    },
    Continuity {
        #[arg(long)]
        functor: String,
        #[arg(long, default_value = "finite-limits")]
        phi: String,
    },
    Flat {
        #[arg(long)]
        presheaf: String,
        #[arg(long, default_value = "finite-limits")]
        phi: String,
    },
    IsbellGate {
        #[arg(long)]
        cat: String,
    },
    Phi {
        #[arg(long)]
        cat: String,
        #[arg(long, default_value = "finite-limits")]
        phi: String,
        #[arg(long)]
        colimits: bool,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    Adjunction {
        #[arg(long)]
        functor: String,
    },
}

fn command(cmd: Cmd) -> Option<Command> {
    Some(match cmd {
        Cmd::Eval { presheaf, at } => Command::Eval { presheaf, at },
        Cmd::Hom { f, g } => Command::Hom { f, g },
        Cmd::Colim { weight, diagram, cat } => Command::Colim { weight, diagram, cat },
        Cmd::Limit { weight, diagram, cat } => Command::Limit { weight, diagram, cat },
        Cmd::Kan { functor, presheaf } => Command::Kan { functor, presheaf },
        Cmd::Restrict { functor, presheaf } => Command::Restrict { functor, presheaf },
        Cmd::Convolve { f, g, monoidal } => Command::Convolve { f, g, monoidal },
        Cmd::Ihom { g, h, monoidal, left } => Command::Ihom { g, h, monoidal, left },
        Cmd::Isbell { left: Some(p), .. } => Command::Isbell { presheaf: p, left: true },
        Cmd::Isbell { right, .. } => Command::Isbell { presheaf: right?, left: false },
        Cmd::Dm { poset } => Command::Dm { poset },
        Cmd::Check(c) => match c {
            Check::Complete { cat, phi } => Command::CheckComplete { cat, phi },
            Check::Closed { monoidal } => Command::CheckClosed { monoidal },
            Check::Continuity { functor, phi } => Command::CheckContinuity { functor, phi },
            Check::Flat { presheaf, phi } => Command::CheckFlat { presheaf, phi },
            Check::IsbellGate { cat } => Command::CheckIsbellGate { cat },
            Check::Phi { cat, phi, colimits, bound } => Command::CheckPhi { cat, phi, colimits, bound },
            Check::Adjunction { functor } => Command::CheckAdjunction { functor },
        },
        Cmd::Replay { .. } | Cmd::Fmt => return None,
    })
}

/// `probes=16,depth=4` on top of `base`.
pub fn parse_bounds(text: &str, mut base: Bounds) -> Result<Bounds, String> {
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("bound `{part}` is not key=value"))?;
        let n: u64 = v.trim().parse().map_err(|_| format!("bound `{part}` is not a number"))?;
        if n == 0 && k.trim() != "seed" {
            return Err(format!("bound `{}` must be positive", k.trim()));
        }
        match k.trim() {
            "probes" => base.probes = n as usize,
            "depth" => base.depth = n as usize,
            "budget" => base.iso_budget = n,
            "seed" => base.seed = n,
            other => return Err(format!("unknown bound `{other}`")),
        }
    }
    Ok(base)
}

fn emit(out: &mut dyn Write, r: &Record) {
    let _ = writeln!(out, "{}", r.to_line());
}

/// Runs one invocation and returns its exit code: 0 when every verdict was
/// delivered, 1 when a check failed, 2 on parse or validation errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let ws = match &cli.workspace {
        None => Workspace::default(),
        Some(path) => match std::fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| load(&t).map_err(|e| format!("{}: {e}", e.kind()))) {
            Ok(ws) => ws,
            Err(e) => {
                let _ = writeln!(err, "{}: {e}", path.display());
                return 2;
            }
        },
    };
    let mut bounds = ws.bounds;
    if let Some(text) = &cli.bounds {
        match parse_bounds(text, bounds) {
            Ok(b) => bounds = b,
            Err(e) => {
                let _ = writeln!(err, "ValidationError: {e}");
                return 2;
            }
        }
    }
    if let Some(s) = cli.seed {
        bounds.seed = s;
    }
    let start = Instant::now();
    let timed = |mut r: Record| {
        if !cli.no_time {
            r.wall_ms = Some(start.elapsed().as_millis() as u64);
        }
        r
    };
    match cli.cmd {
        Cmd::Fmt => {
            let text = ws.file.as_ref().map(crate::printer::print).unwrap_or_default();
            let _ = write!(out, "{text}");
            0
        }
        Cmd::Replay { suite, cases } => {
            let Some(s) = crate::replay::Suite::parse(&suite) else {
                let names: Vec<&str> = crate::replay::Suite::ALL.iter().map(|s| s.name()).collect();
                let _ = writeln!(err, "UnknownSuite: `{suite}`; expected one of {}", names.join(", "));
                return 2;
            };
            let report = crate::replay::run_suite(s, bounds.seed, cases, &bounds);
            let r = timed(report.record(&bounds));
            emit(out, &r);
            i32::from(!r.ok)
        }
        other => {
            let cmd = command(other).expect("subcommand maps to a command");
            let job = match resolve(&ws, &cmd) {
                Ok(j) => j,
                Err(e) => {
                    let _ = writeln!(err, "CommandError: {}: {e}", cmd.name());
                    return 2;
                }
            };
            match job(&bounds) {
                Ok(r) => {
                    let r = timed(r);
                    emit(out, &r);
                    i32::from(!r.ok)
                }
                Err(e) => {
                    let r = timed(Record::new(cmd.name(), "Error", crate::record::Body::Witness(serde_json::json!({ "error": e.to_string() })), &bounds).failing(true));
                    emit(out, &r);
                    1
                }
            }
        }
    }
}
