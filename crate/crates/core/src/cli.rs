//! Command-line surface of the `stoplat` binary.
//!
//! Exit codes: 0 success or found, 1 self-test failure, 2 invalid instance
//! or flags, 3 not found on the grid, 4 precondition failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read as _, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::search::hunt::{hunt, replay, HuntConfig, Property};
use crate::search::oracle::{canonical_decomposition, cone_interpolants, decompositions, max_minorant, pointwise_min};
use crate::search::{
    decompose_stopping, enumerate_stopping_times, interpolate_cone, interpolate_pointwise,
    max_stopping_minorant, Caps, Grid, SearchOutcome,
};
use crate::selftest;
use crate::times::{is_member_x, RandomTime, TimeKind};
use crate::value::{parse_rational, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "stoplat", version, about = "Stopping-time order theory on finite filtered spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Use the optional-time predicates.
    #[arg(long, global = true)]
    optional: bool,
    /// Write a machine-readable report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Grid denominator q: values are multiples of 1/q.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..))]
    grid_denominator: i64,
    /// Largest finite grid value (default: largest finite input value).
    #[arg(long, value_parser = parse_rational_arg)]
    grid_max: Option<Rational>,
    /// Cross-check the verdict against brute-force enumeration.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pointwise,
    Cone,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the stopping and optional predicates on every time and rv.
    Check {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Largest admitted minorant of each time (or of `--time`).
    Minorant {
        file: PathBuf,
        #[arg(long)]
        time: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Search for S = S1 + … + Sn with admitted Si ≤ Ti.
    Decompose {
        file: PathBuf,
        /// Target time (default: the `S` role).
        #[arg(long)]
        target: Option<String>,
        /// Comma-separated bounds (default: the `T1, T2, …` roles).
        #[arg(long, value_delimiter = ',')]
        parts: Option<Vec<String>>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Find T with A ≤ T ≤ B for the sets `A` and `B`.
    Interpolate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pointwise)]
        mode: Mode,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded counterexample hunt.
    Hunt {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        instances: u64,
        #[arg(long, default_value_t = 4)]
        max_omega: usize,
        /// Maximum breakpoints per filtration, counting the one at 0.
        #[arg(long, default_value_t = 3)]
        max_breakpoints: usize,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..))]
        grid_denominator: i64,
        /// Largest finite value of generated times and breakpoints.
        #[arg(long, default_value = "1", value_parser = parse_rational_arg)]
        grid_max: Rational,
        /// Comma-separated subset of decompose,cone,x-sub,truncation,agreement.
        #[arg(long, value_delimiter = ',')]
        properties: Option<Vec<String>>,
        /// Worker threads (0: one per core). The report does not depend on it.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Instance files evaluated before the generated instances.
        #[arg(long)]
        corpus: Vec<PathBuf>,
        /// Re-evaluate every flagged entry of an existing report instead.
        #[arg(long, value_name = "REPORT")]
        replay: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suites of every module.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Enumerate every admitted grid-valued time.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Human-readable output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Output { text, report, code }) => {
            let _ = out.write_all(text.as_bytes());
            if let Some((path, body)) = report {
                if let Err(e) = std::fs::write(&path, body) {
                    let _ = writeln!(err, "stoplat: cannot write {}: {e}", path.display());
                    return EXIT_INVALID;
                }
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "stoplat: {e}");
            EXIT_INVALID
        }
    }
}

struct Output {
    text: String,
    report: Option<(PathBuf, String)>,
    code: i32,
}

impl Output {
    fn new(text: String, code: i32) -> Self {
        Output { text, report: None, code }
    }

    fn with_report(mut self, path: Option<PathBuf>, body: impl FnOnce() -> String) -> Self {
        self.report = path.map(|p| (p, body()));
        self
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Instance(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Instance(format!("reading {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance> {
    Instance::parse(&read_text(path)?).map_err(|e| match e {
        Error::Parse { line, message } => {
            Error::Instance(format!("{}:{line}: {message}", path.display()))
        }
        other => other,
    })
}

fn kind(common: &Common) -> TimeKind {
    TimeKind::from_optional_flag(common.optional)
}

fn grid_for<'a>(args: &GridArgs, times: impl IntoIterator<Item = &'a RandomTime> + Clone) -> Result<Grid> {
    let covering = Grid::covering(args.grid_denominator, times)?;
    match args.grid_max {
        Some(max) => Grid::new(args.grid_denominator, max, covering.allows_infinity()),
        None => Ok(covering),
    }
}

/// Enumeration limits for `--oracle`: any grid, as long as the brute force
/// stays within a few million candidate vectors.
fn oracle_caps(outcomes: usize, grid: &Grid) -> Result<Caps> {
    let per_outcome = grid.finite_count() as f64 + 1.0;
    if per_outcome.powi(outcomes as i32) > ORACLE_BUDGET {
        return Err(Error::CapExceeded(format!(
            "brute force over {outcomes} outcomes on grid {grid} exceeds {ORACLE_BUDGET} candidates"
        )));
    }
    Ok(Caps { max_outcomes: 6, max_values: usize::MAX })
}

const ORACLE_BUDGET: f64 = 4e6;

fn dispatch(command: Command) -> Result<Output> {
    match command {
        Command::Check { file, common } => check(&load(&file)?, common),
        Command::Minorant { file, time, grid, common } => minorant(&load(&file)?, time, grid, common),
        Command::Decompose { file, target, parts, grid, common } => {
            decompose(&load(&file)?, target, parts, grid, common)
        }
        Command::Interpolate { file, mode, grid, common } => interpolate(&load(&file)?, mode, grid, common),
        Command::Hunt {
            seed,
            instances,
            max_omega,
            max_breakpoints,
            grid_denominator,
            grid_max,
            properties,
            threads,
            corpus,
            replay: replay_path,
            common,
        } => {
            if let Some(path) = replay_path {
                return replay_report(&path);
            }
            let properties = match properties {
                Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<Property>>>()?,
                None => Property::ALL.to_vec(),
            };
            let corpus = corpus.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
            let config = HuntConfig {
                seed,
                instances,
                max_omega,
                max_breakpoints,
                grid_denominator,
                grid_max,
                properties,
                kind: kind(&common),
                threads,
                corpus,
            };
            let report = hunt(&config)?;
            Ok(Output::new(report.summary(), EXIT_OK).with_report(common.report, || report.to_text()))
        }
        Command::Selftest { seed } => {
            let mut text = String::new();
            let mut ok = true;
            for result in selftest::run_all(seed) {
                let status = if result.passed() { "ok" } else { "FAILED" };
                writeln!(text, "{:<10} {status} ({} checks)", result.name, result.checks).unwrap();
                for failure in &result.failures {
                    writeln!(text, "    {failure}").unwrap();
                }
                ok &= result.passed();
            }
            Ok(Output::new(text, if ok { EXIT_OK } else { EXIT_SELFTEST }))
        }
        Command::Oracle { file, grid, common } => oracle(&load(&file)?, grid, common),
    }
}

fn machine_report(instance: &Instance, results: &str) -> String {
    let mut body = instance.emit();
    body.push_str(results);
    body
}

fn check(instance: &Instance, common: Common) -> Result<Output> {
    let f = &instance.filtration;
    let mut text = String::new();
    let mut results = String::new();
    for (name, t) in &instance.times {
        let stopping = TimeKind::Stopping.admits(t, f)?;
        let optional = TimeKind::Optional.admits(t, f)?;
        writeln!(text, "{name}: stopping={stopping} optional={optional}").unwrap();
        writeln!(results, "result check {name} stopping {stopping} optional {optional}").unwrap();
    }
    for (name, rv) in &instance.rvs {
        let member = is_member_x(rv, f, kind(&common))?;
        writeln!(text, "{name}: member-x={member}").unwrap();
        writeln!(results, "result check {name} member-x {member}").unwrap();
    }
    Ok(Output::new(text, EXIT_OK).with_report(common.report, || machine_report(instance, &results)))
}

fn minorant(instance: &Instance, only: Option<String>, grid: GridArgs, common: Common) -> Result<Output> {
    let f = &instance.filtration;
    let k = kind(&common);
    let selected: Vec<&(String, RandomTime)> = match &only {
        Some(name) => vec![instance
            .times
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Instance(format!("unknown time `{name}`")))?],
        None => instance.times.iter().collect(),
    };
    let mut text = String::new();
    let mut results = String::new();
    for (name, u) in selected {
        let m = max_stopping_minorant(u, f, k)?;
        writeln!(text, "{name}: {} minorant {m}", k.name()).unwrap();
        writeln!(results, "result minorant {name} {m}").unwrap();
        if grid.oracle {
            let g = grid_for(&grid, [u])?.with_infinity(true);
            let slow = max_minorant(u, f, &g, k, oracle_caps(f.size(), &g)?)?;
            let agree = if slow == m { "agrees" } else { "DISAGREES" };
            writeln!(text, "  oracle on grid {g}: {slow} ({agree})").unwrap();
            if slow != m {
                return Err(Error::Instance(format!("oracle disagreement on {name}")));
            }
        }
    }
    Ok(Output::new(text, EXIT_OK).with_report(common.report, || machine_report(instance, &results)))
}

fn decompose(
    instance: &Instance,
    target: Option<String>,
    parts: Option<Vec<String>>,
    grid: GridArgs,
    common: Common,
) -> Result<Output> {
    let f = &instance.filtration;
    let k = kind(&common);
    let s = match &target {
        Some(name) => instance.resolve(std::slice::from_ref(name))?.remove(0),
        None => instance.target_time()?,
    };
    let bounds = match &parts {
        Some(names) => instance.resolve(names)?,
        None => instance.part_times()?,
    };
    if bounds.is_empty() {
        return Err(Error::Instance("no parts given and no `T1` role".into()));
    }
    let g = grid_for(&grid, std::iter::once(&s).chain(&bounds))?;
    let outcome = decompose_stopping(&s, &bounds, f, &g, k);
    let mut text = String::new();
    let mut results = String::new();
    let code = match &outcome {
        SearchOutcome::Found(d) => {
            writeln!(text, "found on grid {g}").unwrap();
            writeln!(results, "result decompose found grid {g}").unwrap();
            for (i, p) in d.parts.iter().enumerate() {
                writeln!(text, "  S{} = {p}", i + 1).unwrap();
                writeln!(results, "result part S{} {p}", i + 1).unwrap();
            }
            EXIT_OK
        }
        SearchOutcome::NotFoundOnGrid(ex) => {
            writeln!(
                text,
                "not found on grid {} ({} states explored, digest {})",
                ex.grid, ex.states_explored, ex.digest
            )
            .unwrap();
            writeln!(
                results,
                "result decompose notfound grid {} explored {} digest {}",
                ex.grid, ex.states_explored, ex.digest
            )
            .unwrap();
            EXIT_NOT_FOUND
        }
        SearchOutcome::PreconditionFailed(p) => {
            writeln!(text, "precondition failed: {p}").unwrap();
            writeln!(results, "result decompose precondition {}", p.kind.as_str()).unwrap();
            EXIT_PRECONDITION
        }
    };
    if grid.oracle && !matches!(outcome, SearchOutcome::PreconditionFailed(_)) {
        let all = decompositions(&s, &bounds, f, &g, k, oracle_caps(f.size(), &g)?)?;
        let expected = canonical_decomposition(&all);
        let agree = outcome.found().map(|d| &d.parts) == expected;
        writeln!(text, "oracle: {} decompositions ({})", all.len(), if agree { "agrees" } else { "DISAGREES" })
            .unwrap();
        if !agree {
            return Err(Error::Instance("oracle disagreement".into()));
        }
    }
    Ok(Output::new(text, code).with_report(common.report, || machine_report(instance, &results)))
}

fn interpolate(instance: &Instance, mode: Mode, grid: GridArgs, common: Common) -> Result<Output> {
    let f = &instance.filtration;
    let k = kind(&common);
    let a = instance.resolve(&instance.set_a)?;
    let b = instance.resolve(&instance.set_b)?;
    let mut text = String::new();
    let mut results = String::new();
    let code = match mode {
        Mode::Pointwise => match interpolate_pointwise(&a, &b, f, k) {
            Ok(t) => {
                writeln!(text, "pointwise interpolant {t}").unwrap();
                writeln!(results, "result interpolate pointwise found {t}").unwrap();
                EXIT_OK
            }
            Err(Error::Precondition(msg)) => {
                writeln!(text, "precondition failed: {msg}").unwrap();
                writeln!(results, "result interpolate pointwise precondition").unwrap();
                EXIT_PRECONDITION
            }
            Err(e) => return Err(e),
        },
        Mode::Cone => {
            let g = grid_for(&grid, a.iter().chain(&b))?.with_infinity(false);
            let outcome = interpolate_cone(&a, &b, f, &g, k);
            let code = match &outcome {
                SearchOutcome::Found(t) => {
                    writeln!(text, "cone interpolant {t} on grid {g}").unwrap();
                    writeln!(results, "result interpolate cone found {t}").unwrap();
                    EXIT_OK
                }
                SearchOutcome::NotFoundOnGrid(ex) => {
                    writeln!(
                        text,
                        "not found on grid {} ({} states explored, digest {})",
                        ex.grid, ex.states_explored, ex.digest
                    )
                    .unwrap();
                    writeln!(
                        results,
                        "result interpolate cone notfound grid {} explored {} digest {}",
                        ex.grid, ex.states_explored, ex.digest
                    )
                    .unwrap();
                    EXIT_NOT_FOUND
                }
                SearchOutcome::PreconditionFailed(p) => {
                    writeln!(text, "precondition failed: {p}").unwrap();
                    writeln!(results, "result interpolate cone precondition {}", p.kind.as_str()).unwrap();
                    EXIT_PRECONDITION
                }
            };
            if grid.oracle && code != EXIT_PRECONDITION {
                let all = cone_interpolants(&a, &b, f, &g, k, oracle_caps(f.size(), &g)?)?;
                let agree = outcome.found() == pointwise_min(&all).as_ref();
                writeln!(text, "oracle: {} interpolants ({})", all.len(), if agree { "agrees" } else { "DISAGREES" })
                    .unwrap();
                if !agree {
                    return Err(Error::Instance("oracle disagreement".into()));
                }
            }
            code
        }
    };
    Ok(Output::new(text, code).with_report(common.report, || machine_report(instance, &results)))
}

fn oracle(instance: &Instance, grid: GridArgs, common: Common) -> Result<Output> {
    let f = &instance.filtration;
    let k = kind(&common);
    let g = grid_for(&grid, instance.times.iter().map(|(_, t)| t))?.with_infinity(true);
    let all = enumerate_stopping_times(f, &g, k, oracle_caps(f.size(), &g)?)?;
    let mut text = format!("{} {} times on grid {g}\n", all.len(), k.name());
    let mut results = String::new();
    for t in &all {
        writeln!(text, "  {t}").unwrap();
        writeln!(results, "result oracle {t}").unwrap();
    }
    let times: Vec<RandomTime> = instance.times.iter().map(|(_, t)| t.clone()).collect();
    let disagreements = selftest::dense_agreement(&times, f);
    for d in &disagreements {
        writeln!(text, "dense check disagrees: {d}").unwrap();
    }
    let code = if disagreements.is_empty() { EXIT_OK } else { EXIT_SELFTEST };
    Ok(Output::new(text, code).with_report(common.report, || machine_report(instance, &results)))
}

fn replay_report(path: &Path) -> Result<Output> {
    let replays = replay(&read_text(path)?)?;
    let mut text = String::new();
    let mut ok = true;
    for r in &replays {
        let status = if r.matches() { "ok" } else { "MISMATCH" };
        writeln!(text, "{} {} {status}", r.id, r.property.name()).unwrap();
        ok &= r.matches();
    }
    writeln!(text, "{} flagged entries replayed", replays.len()).unwrap();
    Ok(Output::new(text, if ok { EXIT_OK } else { EXIT_SELFTEST }))
}
