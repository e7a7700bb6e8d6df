use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cone_sod::config::{parse_space, ConfigError, InstanceConfig};
use cone_sod::report::{cohomology_table, instance_report, Format, HomReport, Render, ReportError};
use cone_sod::tilting::check_sod;
use cone_sod::{hom_objects, ConeSpace, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "cone-sod", version, about = "Exact graded Hom dimensions and SOD checks on P(1,...,1,m)")]
struct Cli {
    /// Space as "n,m" for P(1^n, m).
    #[arg(long, global = true)]
    space: Option<String>,
    /// Instance config (TOML) with space, objects and collections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Markdown,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Markdown => Format::Markdown,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// dim H^i of O_X(d) or O_Z(d) over a range of twists.
    Cohomology {
        /// O_X or O_Z.
        sheaf: String,
        /// A twist "d" or an inclusive range "a..b".
        #[arg(allow_hyphen_values = true)]
        twists: String,
        /// Only this cohomological degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Graded Hom^*(A, B) between named objects or inline expressions.
    Hom { source: String, target: String },
    /// Check a named collection from the config as a semiorthogonal decomposition.
    VerifySod { collection: String },
    /// Recompute a builtin instance: P1113 or P112.
    #[command(name = "paper-report")]
    InstanceReport { instance: String },
}

enum Failure {
    Usage(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpace(_) | Error::InvalidObject(_) | Error::DegreeOutOfRange { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Refused(other.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Engine(inner) => inner.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::UnknownInstance(_) => Failure::Usage(e.to_string()),
            ReportError::Config(c) => c.into(),
            ReportError::Engine(inner) => inner.into(),
        }
    }
}

fn instance(cli: &Cli) -> Result<InstanceConfig, Failure> {
    match (&cli.config, &cli.space) {
        (Some(path), space) => {
            let cfg = InstanceConfig::load(path)?;
            if let Some(s) = space {
                let given = parse_space(s)?;
                if given != cfg.space {
                    return Err(Failure::Usage(format!(
                        "--space {s} disagrees with the space in {}",
                        path.display()
                    )));
                }
            }
            Ok(cfg)
        }
        (None, Some(s)) => Ok(InstanceConfig::bare(parse_space(s)?)),
        (None, None) => Err(Failure::Usage("one of --space or --config is required".into())),
    }
}

fn parse_twists(s: &str) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    let bad = || Failure::Usage(format!("bad twist range {s:?}: expected \"d\" or \"a..b\""));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), s.trim()),
    };
    let a: i64 = a.parse().map_err(|_| bad())?;
    let b: i64 = b.parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let format = Format::from(cli.format);
    match &cli.command {
        Command::Cohomology { sheaf, twists, degree } => {
            let space: ConeSpace = instance(cli)?.space;
            let on_z = match sheaf.as_str() {
                "O_X" => false,
                "O_Z" => true,
                other => return Err(Failure::Usage(format!("unknown sheaf {other:?}: expected O_X or O_Z"))),
            };
            let t = cohomology_table(&space, on_z, parse_twists(twists)?, *degree)?;
            Ok((t.render(format), 0))
        }
        Command::Hom { source, target } => {
            let cfg = instance(cli)?;
            let a = cfg.object(source)?;
            let b = cfg.object(target)?;
            let h = hom_objects(&cfg.space, &a, &b)?;
            Ok((HomReport::new(&cfg.space, source, target, h).render(format), 0))
        }
        Command::VerifySod { collection } => {
            let cfg = instance(cli)?;
            let r = check_sod(&cfg.space, cfg.collection(collection)?)?;
            let code = if r.passed { 0 } else { EXIT_FAIL };
            Ok((r.render(format), code))
        }
        Command::InstanceReport { instance } => {
            let r = instance_report(instance)?;
            let code = if r.passed {
                0
            } else if r.refusals > 0 {
                EXIT_REFUSED
            } else {
                EXIT_FAIL
            };
            Ok((r.render(format), code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(EXIT_REFUSED)
        }
    }
}
