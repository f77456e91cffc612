//! Command-line front end: `value`, `sequence`, `dilate` and `check`.
//!
//! Exit codes: 0 success, 1 internal failure, 2 unreadable or malformed
//! input (including bad flags), 3 size cap exceeded, 4 precondition
//! violated.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::channels::load_povm;
use crate::correlations::{is_local, is_no_signalling, load_correlation};
use crate::dilation::{dump_commuting_dilation, dump_dilation, joint_commuting_dilation, naimark};
use crate::error::{Error, Result};
use crate::games::{self, GameFile, SequenceReport, ValueOptions, ValueType};
use crate::text::{format_machine, format_sig};

const TABLE_DIGITS: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "nlgames",
    version,
    about = "Values of non-local games, dilations and correlation checks"
)]
pub struct Cli {
    /// Worker threads for the parallel engines (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Loc,
    Ns,
    Qs,
}

impl From<Kind> for ValueType {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Loc => ValueType::Local,
            Kind::Ns => ValueType::NoSignalling,
            Kind::Qs => ValueType::QuantumLowerBound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Iid,
    Inner,
    Memory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Test {
    Ns,
    Local,
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct SeesawArgs {
    /// Local dimension for the see-saw.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub d: u64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,
    #[arg(long, default_value_t = 200)]
    pub sweeps: usize,
    #[arg(long = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,
}

impl From<SeesawArgs> for ValueOptions {
    fn from(a: SeesawArgs) -> Self {
        ValueOptions {
            dim: a.d as usize,
            seeds: a.seeds as usize,
            sweeps: a.sweeps,
            rng_seed: a.rng_seed,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Value of a game.
    Value {
        game: PathBuf,
        #[arg(long = "type", value_enum)]
        kind: Kind,
        #[command(flatten)]
        seesaw: SeesawArgs,
    },
    /// Normalised values of products, iterates or memory-game iterates.
    Sequence {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Iid)]
        mode: Mode,
        #[arg(long = "type", value_enum)]
        kind: Kind,
        #[arg(long = "n-max", default_value_t = 2)]
        n_max: usize,
        #[command(flatten)]
        seesaw: SeesawArgs,
    },
    /// Naimark dilation of a POVM, or joint dilation of a commuting pair.
    Dilate {
        povm: PathBuf,
        #[arg(long)]
        joint: Option<PathBuf>,
    },
    /// No-signalling or locality test of a correlation dump.
    Check {
        corr: PathBuf,
        #[arg(long, value_enum)]
        test: Test,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        Error::TooLarge { .. } => 3,
        Error::Precondition(_)
        | Error::NonCommuting { .. }
        | Error::Invariant { .. }
        | Error::NotPsd { .. }
        | Error::Shape(_)
        | Error::DimensionMismatch { .. }
        | Error::NonUnitState { .. } => 4,
        Error::NumericFailure { .. } | Error::NotIsometric { .. } | Error::Infeasible { .. } => 1,
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 1;
    }
    match result {
        Ok(()) => 0,
        Err((path, e)) => {
            let code = exit_code(&e);
            match path {
                Some(p) => {
                    let _ = writeln!(err, "error: {}: {e}", p.display());
                }
                None => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            code
        }
    }
}

type CmdResult = std::result::Result<(), (Option<PathBuf>, Error)>;

fn read(path: &Path) -> std::result::Result<String, (Option<PathBuf>, Error)> {
    std::fs::read_to_string(path).map_err(|e| (Some(path.to_path_buf()), Error::Io(e.to_string())))
}

fn at<T>(path: &Path, r: Result<T>) -> std::result::Result<T, (Option<PathBuf>, Error)> {
    r.map_err(|e| (Some(path.to_path_buf()), e))
}

fn io<T>(r: std::io::Result<T>) -> std::result::Result<T, (Option<PathBuf>, Error)> {
    r.map_err(|_| {
        (
            None,
            Error::NumericFailure {
                what: "cannot write output",
                residual: 0.0,
            },
        )
    })
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let machine = cli.format == Format::Machine;
    match &cli.command {
        Command::Value { game, kind, seesaw } => {
            let file = at(game, games::load_game(&read(game)?))?;
            let g = file.finite();
            let report = at(game, games::value(g, (*kind).into(), &(*seesaw).into()))?;
            if machine {
                io(writeln!(
                    out,
                    "value {} {}",
                    report.kind.tag(),
                    format_machine(report.value)
                ))?;
            } else {
                let (nx, ny, na, nb) = g.shape();
                io(writeln!(out, "game        {} ({nx}x{ny}x{na}x{nb})", game.display()))?;
                io(writeln!(
                    out,
                    "type        {} ({})",
                    report.kind.tag(),
                    if report.exact { "exact" } else { "lower bound" }
                ))?;
                io(writeln!(out, "value       {}", format_sig(report.value, TABLE_DIGITS)))?;
                io(writeln!(out, "certificate {}", report.summary()))?;
            }
        }
        Command::Sequence {
            game,
            mode,
            kind,
            n_max,
            seesaw,
        } => {
            let file = at(game, games::load_game(&read(game)?))?;
            let opts: ValueOptions = (*seesaw).into();
            let kind: ValueType = (*kind).into();
            let report = match (mode, &file) {
                (Mode::Iid, GameFile::Finite(g)) => games::asymptotic_sequence(g, kind, *n_max, &opts),
                (Mode::Inner, GameFile::Finite(g)) => {
                    games::inner_value_sequence(&games::embed(g), kind, *n_max, &opts)
                }
                (Mode::Inner, GameFile::Cylinder(c)) => games::inner_value_sequence(c, kind, *n_max, &opts),
                (Mode::Memory, GameFile::Finite(g)) => {
                    games::inner_value_sequence(&games::memory_game(g), kind, *n_max, &opts)
                }
                (_, GameFile::Cylinder(_)) => Err(Error::Precondition(
                    "iid and memory modes need a finite game, not a windowed one".into(),
                )),
            };
            let report = at(game, report)?;
            write_sequence(out, &report, *mode, machine)?;
        }
        Command::Dilate { povm, joint } => {
            let e = at(povm, load_povm(&read(povm)?))?;
            match joint {
                None => {
                    let dil = at(povm, naimark(&e))?;
                    if machine {
                        io(write!(out, "{}", dump_dilation(&dil)))?;
                    } else {
                        let (idem, orth) = dil.projectivity_defects();
                        io(writeln!(out, "input dimension   {}", dil.input_dim()))?;
                        io(writeln!(out, "dilated dimension {}", dil.dilated_dim()))?;
                        io(writeln!(out, "outcomes          {}", e.outcomes()))?;
                        for (name, r) in [
                            ("isometry", dil.isometry_defect()),
                            ("projectivity", idem),
                            ("orthogonality", orth),
                            ("reconstruction", dil.residual),
                        ] {
                            io(writeln!(out, "residual {name:<17} {r:.3e}"))?;
                        }
                    }
                }
                Some(other) => {
                    let f = at(other, load_povm(&read(other)?))?;
                    let dil = at(povm, joint_commuting_dilation(&e, &f))?;
                    if machine {
                        io(write!(out, "{}", dump_commuting_dilation(&dil)))?;
                    } else {
                        let (pi, po) = dil.pvm_p.as_povm().projectivity_defects();
                        let (qi, qo) = dil.pvm_q.as_povm().projectivity_defects();
                        io(writeln!(out, "input dimension   {}", dil.isometry.cols()))?;
                        io(writeln!(out, "dilated dimension {}", dil.isometry.rows()))?;
                        for (name, r) in [
                            ("isometry", dil.isometry.isometry_defect()),
                            ("projectivity", pi.max(qi)),
                            ("orthogonality", po.max(qo)),
                            ("reconstruction", dil.residual),
                            ("cross-commutation", dil.cross_residual),
                        ] {
                            io(writeln!(out, "residual {name:<17} {r:.3e}"))?;
                        }
                    }
                }
            }
        }
        Command::Check { corr, test } => {
            let p = at(corr, load_correlation(&read(corr)?))?;
            match test {
                Test::Ns => {
                    let c = is_no_signalling(&p, 1e-9);
                    let verdict = if c.passes { "pass" } else { "fail" };
                    let worst = c.max_alice.max(c.max_bob);
                    if machine {
                        io(writeln!(out, "check ns {verdict} {}", format_machine(worst)))?;
                    } else {
                        io(writeln!(out, "no-signalling {verdict}"))?;
                        io(writeln!(
                            out,
                            "alice defect  {:.3e} at (x, a, y, y') = {:?}",
                            c.max_alice, c.alice_witness
                        ))?;
                        io(writeln!(
                            out,
                            "bob defect    {:.3e} at (y, b, x, x') = {:?}",
                            c.max_bob, c.bob_witness
                        ))?;
                    }
                }
                Test::Local => {
                    let rep = at(corr, is_local(&p, 1e-9))?;
                    let verdict = if rep.local { "pass" } else { "fail" };
                    if machine {
                        io(writeln!(
                            out,
                            "check local {verdict} {}",
                            format_machine(rep.max_infeasibility)
                        ))?;
                        for (f, g, w) in &rep.decomposition {
                            io(writeln!(out, "weight {} {} {}", format_machine(*w), join(f), join(g)))?;
                        }
                    } else {
                        io(writeln!(out, "local {verdict}"))?;
                        io(writeln!(out, "infeasibility gap {:.3e}", rep.max_infeasibility))?;
                        for (f, g, w) in &rep.decomposition {
                            io(writeln!(
                                out,
                                "  weight {}  f={f:?} g={g:?}",
                                format_sig(*w, TABLE_DIGITS)
                            ))?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}

fn write_sequence(out: &mut dyn Write, report: &SequenceReport, mode: Mode, machine: bool) -> CmdResult {
    let tag = report.kind.tag();
    if machine {
        for e in &report.entries {
            io(writeln!(
                out,
                "entry {tag} {} {} {} {}",
                e.n,
                format_machine(e.raw),
                format_machine(e.normalized),
                format_machine(e.running_max)
            ))?;
        }
        io(writeln!(out, "truncated {}", report.truncated))?;
        return Ok(());
    }
    io(writeln!(out, "# {tag} values ({})", report.label()))?;
    if mode == Mode::Iid {
        io(writeln!(out, "{:>3}  {:>12}  {:>12}", "n", "value", "normalized"))?;
    } else {
        io(writeln!(
            out,
            "{:>3}  {:>12}  {:>12}  {:>12}",
            "n", "value", "normalized", "running max"
        ))?;
    }
    for e in &report.entries {
        let raw = format_sig(e.raw, TABLE_DIGITS);
        let norm = format_sig(e.normalized, TABLE_DIGITS);
        if mode == Mode::Iid {
            io(writeln!(out, "{:>3}  {raw:>12}  {norm:>12}", e.n))?;
        } else {
            let run = format_sig(e.running_max, TABLE_DIGITS);
            io(writeln!(out, "{:>3}  {raw:>12}  {norm:>12}  {run:>12}", e.n))?;
        }
    }
    if report.truncated {
        io(writeln!(out, "# truncated: the next entry exceeds a size cap"))?;
    }
    Ok(())
}
