use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use birkhoff::config::{load_config, OutputFormat, RunConfig};
use birkhoff::output::{write_hm, write_json, write_nls};
use birkhoff::run::{exit, run_crosscheck, run_verify, ASign, Which};
use birkhoff::sample::{sample_hm, sample_nls};
use birkhoff_core::verify::TimeConvention;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "birkhoff",
    version,
    about = "Exact NLS and Heisenberg magnet multisolitons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample u(x, t) on the configured grid.
    Nls(FieldArgs),
    /// Sample the spin field S(x, t) on the configured grid.
    Hm(FieldArgs),
    /// Run residual suites on the grid and its half-step refinement.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suites to run.
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, value_enum)]
        time_convention: Option<Convention>,
        /// Add a third, twice-refined level.
        #[arg(long)]
        refine: bool,
    },
    /// Compare the determinant and closed-form routes with the linear solve.
    Crosscheck {
        #[command(flatten)]
        common: Common,
        /// Sign of the tanh term in the closed form.
        #[arg(long, value_enum, default_value_t = ASign::Resolved)]
        a_sign: ASign,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    time_convention: Option<Convention>,
    /// Also write the half-step refined grid to `<out>.refined.<ext>`.
    #[arg(long)]
    refine: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Half,
    Unit,
}

impl From<Convention> for TimeConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Half => TimeConvention::Half,
            Convention::Unit => TimeConvention::Unit,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::new(
                exit::VALIDATION,
                format!("cannot create {}: {e}", path.display()),
            )
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(
    out: Option<&Path>,
    write: impl FnOnce(&mut Box<dyn Write>) -> io::Result<()>,
) -> Result<(), Failure> {
    let mut sink = open_sink(out)?;
    write(&mut sink)
        .and_then(|_| sink.flush())
        .map_err(|e| Failure::new(exit::NUMERICAL, format!("write failed: {e}")))
}

fn refined_path(out: &Path, format: OutputFormat) -> PathBuf {
    let stem = out.with_extension("");
    PathBuf::from(format!("{}.refined.{}", stem.display(), format.extension()))
}

fn load(path: &Path) -> Result<RunConfig, Failure> {
    load_config(path).map_err(|e| Failure::new(exit::VALIDATION, e))
}

fn sample_fields(args: &FieldArgs, hm: bool) -> Result<u8, Failure> {
    let cfg = load(&args.common.config)?;
    let format = args.format.map_or(cfg.output_format, OutputFormat::from);
    let convention = args
        .time_convention
        .map_or(cfg.time_convention, TimeConvention::from);
    let out = args.common.out.as_deref();
    if args.refine && out.is_none() {
        return Err(Failure::new(exit::VALIDATION, "--refine needs --out"));
    }
    let mut targets = vec![(cfg.grid, out.map(Path::to_path_buf))];
    if args.refine {
        targets.push((cfg.grid.refined(), out.map(|p| refined_path(p, format))));
    }
    for (grid, path) in targets {
        let numerical = |e: birkhoff::SampleError| Failure::new(exit::NUMERICAL, e);
        if hm {
            let s = sample_hm(&cfg.spectral, &grid, convention).map_err(numerical)?;
            emit(path.as_deref(), |w| write_hm(w, &s, format, convention))?;
        } else {
            let u = sample_nls(&cfg.spectral, &grid).map_err(numerical)?;
            emit(path.as_deref(), |w| write_nls(w, &u, format))?;
        }
    }
    Ok(exit::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Nls(args) => sample_fields(&args, false),
        Command::Hm(args) => sample_fields(&args, true),
        Command::Verify {
            common,
            which,
            time_convention,
            refine,
        } => {
            let cfg = load(&common.config)?;
            let convention = time_convention.map_or(cfg.time_convention, TimeConvention::from);
            let report = run_verify(&cfg, which, convention, 1 + usize::from(refine))
                .map_err(|e| Failure::new(e.exit_code(), e))?;
            emit(common.out.as_deref(), |w| write_json(w, &report))?;
            for suite in report.suites.iter().filter(|s| !s.passed) {
                eprintln!("{}: {}", suite.name, suite.message);
            }
            Ok(report.exit_code())
        }
        Command::Crosscheck { common, a_sign } => {
            let cfg = load(&common.config)?;
            let report =
                run_crosscheck(&cfg, a_sign).map_err(|e| Failure::new(e.exit_code(), e))?;
            emit(common.out.as_deref(), |w| write_json(w, &report))?;
            for cmp in report.comparisons.iter().filter(|c| !c.passed) {
                eprintln!("{}", cmp.message);
            }
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::VALIDATION
            } else {
                exit::SUCCESS
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
