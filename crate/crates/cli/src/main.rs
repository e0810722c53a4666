//! `psing`: command-line front end for psing-core.
//!
//! Exit codes: 0 success, 1 internal error or failed property check,
//! 2 invalid input, 3 resource cap exceeded.

mod output;

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use psing_core::{
    build_table, center_bounds, classify, nu_stratum, run_search, shift_profile, sht, verify_sweep, Error,
    ExplorerConfig, LowerBoundPolicy, Objective, Predicate, Prime, Representation, SearchQuery, SingularityClass,
};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "psing", version, about = "Discrepancies of Z/p quotient singularities in characteristic p")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,

    /// Emit the centre-restricted lower bound whenever D_V >= p - 1, not only when D_V >= p.
    #[arg(long, global = true)]
    remark_literal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the quotient singularity of one representation.
    Classify {
        #[command(flatten)]
        rep: RepArgs,
        /// Also report bounds for divisors centred in a closed subset C of the
        /// singular locus with this dimension.
        #[arg(long, value_name = "DIM")]
        center_dim: Option<u64>,
    },
    /// Shift numbers sht_V(j), strata dimensions, or the full residue profile.
    Sht {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(short = 'j', long = "jump", required_unless_present = "profile", conflicts_with = "profile")]
        j: Option<u64>,
        /// Table of s, sht, jump and nu for s = 1..p-1.
        #[arg(long)]
        profile: bool,
        /// Emit nu(M_j) instead of sht_V(j).
        #[arg(long)]
        nu: bool,
    },
    /// Search all representations for ones matching a predicate.
    Search {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 1)]
        d_min: u64,
        #[arg(long)]
        terminal: bool,
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        log_canonical: bool,
        #[arg(long, conflicts_with = "not_cm")]
        cm: bool,
        #[arg(long)]
        not_cm: bool,
        /// Restrict to exact classes (repeatable).
        #[arg(long = "class", value_enum)]
        classes: Vec<ClassArg>,
        #[arg(long, allow_hyphen_values = true)]
        d_v_min: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        d_v_max: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        delta_min: Option<i128>,
        #[arg(long, allow_hyphen_values = true)]
        delta_max: Option<i128>,
        /// Per prime, keep only the smallest dimension with a match.
        #[arg(long)]
        minimal: bool,
    },
    /// Classification table of every representation up to a dimension.
    Table {
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Run the full property sweep.
    Verify {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 3)]
        n_max: u64,
    },
}

#[derive(Debug, Args)]
struct RepArgs {
    #[arg(short = 'p', long = "prime")]
    p: u64,
    /// Indecomposable sizes, e.g. "4" or "2^3,1^2".
    #[arg(long)]
    rep: String,
}

#[derive(Debug, Args)]
struct RangeArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    #[arg(long)]
    d_max: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Smooth,
    Terminal,
    CanonicalStrict,
    LogCanonicalStrict,
    NotLogCanonical,
}

impl From<ClassArg> for SingularityClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Smooth => SingularityClass::Smooth,
            ClassArg::Terminal => SingularityClass::Terminal,
            ClassArg::CanonicalStrict => SingularityClass::CanonicalStrict,
            ClassArg::LogCanonicalStrict => SingularityClass::LogCanonicalStrict,
            ClassArg::NotLogCanonical => SingularityClass::NotLogCanonical,
        }
    }
}

enum Failure {
    Core(Error),
    PropertyFailed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn primes(values: &[u64]) -> Result<Vec<Prime>, Error> {
    values.iter().map(|&p| Prime::new(p)).collect()
}

fn class_filter(
    terminal: bool,
    canonical: bool,
    log_canonical: bool,
    exact: &[ClassArg],
) -> Option<BTreeSet<SingularityClass>> {
    let mut allowed: Option<BTreeSet<SingularityClass>> = None;
    let mut restrict = |keep: &dyn Fn(SingularityClass) -> bool| {
        let set: BTreeSet<_> = SingularityClass::ALL.into_iter().filter(|&k| keep(k)).collect();
        allowed = Some(match allowed.take() {
            Some(prev) => prev.intersection(&set).copied().collect(),
            None => set,
        });
    };
    if terminal {
        restrict(&|k| k.is_terminal());
    }
    if canonical {
        restrict(&|k| k.is_canonical());
    }
    if log_canonical {
        restrict(&|k| k.is_log_canonical());
    }
    if !exact.is_empty() {
        let set: BTreeSet<SingularityClass> = exact.iter().map(|&c| c.into()).collect();
        restrict(&|k| set.contains(&k));
    }
    allowed
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    let policy = if cli.remark_literal { LowerBoundPolicy::RemarkLiteral } else { LowerBoundPolicy::Proven };
    match cli.command {
        Command::Classify { rep, center_dim } => {
            let rep = Representation::parse(rep.p, &rep.rep)?;
            let report = classify(&rep)?;
            let center = center_dim.map(|dim| center_bounds(&rep, dim, policy)).transpose()?;
            Ok(output::classify(format, &report, center.as_ref()))
        }
        Command::Sht { rep, j, profile, nu } => {
            let rep = Representation::parse(rep.p, &rep.rep)?;
            if profile {
                let prof = shift_profile(&rep)?;
                let nus = prof.residues().map(|s| nu_stratum(&rep, s)).collect::<Result<Vec<_>, _>>()?;
                Ok(output::profile(format, &prof, &nus))
            } else {
                let j = j.expect("clap requires -j without --profile");
                let value = if nu { nu_stratum(&rep, j)? } else { sht(&rep, j)? };
                Ok(output::single(format, &rep, j, if nu { "nu" } else { "sht" }, value))
            }
        }
        Command::Search {
            range,
            d_min,
            terminal,
            canonical,
            log_canonical,
            cm,
            not_cm,
            classes,
            d_v_min,
            d_v_max,
            delta_min,
            delta_max,
            minimal,
        } => {
            let query = SearchQuery {
                primes: primes(&range.primes)?,
                d_min,
                d_max: range.d_max,
                predicate: Predicate {
                    classes: class_filter(terminal, canonical, log_canonical, &classes),
                    cm: if cm {
                        Some(true)
                    } else if not_cm {
                        Some(false)
                    } else {
                        None
                    },
                    d_v_min,
                    d_v_max,
                    delta_min,
                    delta_max,
                },
                objective: if minimal { Objective::MinimizeDim } else { Objective::None },
            };
            let rows = run_search(&query, &ExplorerConfig::from_env()?)?;
            Ok(output::rows(format, &rows))
        }
        Command::Table { range } => {
            let rows = build_table(&primes(&range.primes)?, range.d_max, &ExplorerConfig::from_env()?)?;
            Ok(output::rows(format, &rows))
        }
        Command::Verify { range, n_max } => {
            let report = verify_sweep(&primes(&range.primes)?, range.d_max, n_max, &ExplorerConfig::from_env()?)?;
            let text = output::verify(format, &report);
            if report.passed() {
                Ok(text)
            } else {
                Err(Failure::PropertyFailed(text))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::PropertyFailed(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            let code = if e.is_validation() {
                2
            } else if e.is_resource_limit() {
                3
            } else {
                1
            };
            ExitCode::from(code)
        }
    }
}
