//! Command-line front end: reads a symbol document, runs one analysis and
//! writes a JSON report (or a CSV/PPM portrait).

pub mod input;
pub mod output;
pub mod render;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rational_toeplitz::operator::{analyze, cayley_pullback};
use rational_toeplitz::spectral::{classify, portrait};
use rational_toeplitz::symmetric::deficiency;
use rational_toeplitz::{Complex64, Error, ErrorKind, Grid, RationalSymbol};

use input::{parse_complex, read_symbol};
use output::{emit, format_float, to_json, AnalysisDoc, CommandEcho, DeficiencyDoc, Document, PolyDoc, PullbackDoc, SpectrumDoc};
use render::PortraitSummary;

const PULLBACK_SAMPLES: usize = 32;

#[derive(Debug, Parser)]
#[command(name = "rtoep", version, about = "Toeplitz operators with rational symbols")]
pub struct Cli {
    /// Half-width of the band around the unit circle counted as on it
    #[arg(long, global = true, value_name = "EPS")]
    pub eps_circle: Option<f64>,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here (atomically) instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SymbolArg {
    /// Symbol document, or - for stdin
    #[arg(value_name = "SYMBOL")]
    pub symbol: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Ppm,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Domain, kernel, cokernel, range and Fredholm index
    Analyze(SymbolArg),
    /// Classify one shift value lambda
    Spectrum {
        #[command(flatten)]
        input: SymbolArg,
        /// Shift value: a, bi, a+bi or a-bi
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
    },
    /// Classify every node of a rectangular grid
    Portrait {
        #[command(flatten)]
        input: SymbolArg,
        /// x0,x1,y0,y1,nx,ny
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Deficiency indices of a symbol real on the circle
    Deficiency(SymbolArg),
    /// Run the numerical certificates
    Verify {
        #[command(flatten)]
        input: SymbolArg,
        #[arg(long, value_enum, default_value_t = verify::Level::Quick)]
        level: verify::Level,
    },
    /// Polynomials P, Q of the symbol pulled back to the real line
    Pullback(SymbolArg),
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected x0,x1,y0,y1,nx,ny, got {s:?}"));
    }
    let f = |k: usize| parts[k].parse::<f64>().map_err(|e| format!("{}: {e}", parts[k]));
    let n = |k: usize| parts[k].parse::<usize>().map_err(|e| format!("{}: {e}", parts[k]));
    let grid = Grid {
        x0: f(0)?,
        x1: f(1)?,
        y0: f(2)?,
        y1: f(3)?,
        nx: n(4)?,
        ny: n(5)?,
    };
    grid.validate().map_err(|e| e.to_string())?;
    Ok(grid)
}

/// Anything that ends a run early.
#[derive(Debug)]
pub enum Failure {
    Analysis(Error),
    Io(std::io::Error),
    /// A document was written but reports failed checks.
    Reported(i32),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Analysis(e) => match e.kind() {
                ErrorKind::Input => 1,
                ErrorKind::Numerical => 2,
                ErrorKind::Theory => 3,
            },
            Failure::Io(_) => 1,
            Failure::Reported(code) => *code,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Analysis(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
            Failure::Reported(code) => write!(f, "verification failed (exit code {code})"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Analysis(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn load(cli: &Cli, input: &SymbolArg) -> Result<RationalSymbol, Failure> {
    Ok(read_symbol(&input.symbol)?.build(cli.eps_circle)?)
}

/// Inverse of [`parse_complex`], in the fixed float format.
pub fn format_complex(z: Complex64) -> String {
    let im = format_float(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", format_float(z.re))
}

fn echo(cli: &Cli, name: &'static str, input: &SymbolArg) -> CommandEcho {
    let mut args = BTreeMap::new();
    if let Some(e) = cli.eps_circle {
        args.insert("eps_circle", format_float(e));
    }
    CommandEcho {
        name,
        input: input.symbol.display().to_string(),
        args,
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Analyze(input) => {
            let sym = load(cli, input)?;
            let doc = Document::new(echo(cli, "analyze", input), &sym, AnalysisDoc::new(&sym, &analyze(&sym)));
            emit(&to_json(&doc), out)?;
        }
        Command::Spectrum { input, lambda } => {
            let sym = load(cli, input)?;
            let report = classify(&sym, *lambda)?;
            let mut cmd = echo(cli, "spectrum", input);
            cmd.args.insert("lambda", format_complex(*lambda));
            emit(&to_json(&Document::new(cmd, &sym, SpectrumDoc::from(&report))), out)?;
        }
        Command::Portrait { input, grid, format } => {
            let sym = load(cli, input)?;
            let p = portrait(&sym, *grid)?;
            match format {
                Format::Csv => emit(&render::csv(&p), out)?,
                Format::Ppm => emit(&render::ppm(&p), out)?,
                Format::Json => {
                    let mut cmd = echo(cli, "portrait", input);
                    let g = grid;
                    let fields = [g.x0, g.x1, g.y0, g.y1].map(format_float);
                    cmd.args.insert("grid", format!("{},{},{}", fields.join(","), g.nx, g.ny));
                    let doc = Document::new(cmd, &sym, PortraitSummary::new(&p, None));
                    emit(&to_json(&doc), out)?;
                }
            }
        }
        Command::Deficiency(input) => {
            let sym = load(cli, input)?;
            let d = deficiency(&sym)?;
            let doc = Document::new(echo(cli, "deficiency", input), &sym, DeficiencyDoc::new(&sym, &d));
            emit(&to_json(&doc), out)?;
        }
        Command::Verify { input, level } => {
            let sym = load(cli, input)?;
            let report = verify::run(&sym, *level, cli.seed);
            let mut cmd = echo(cli, "verify", input);
            cmd.args.insert("level", level.as_str().to_string());
            cmd.args.insert("seed", cli.seed.to_string());
            let code = report.exit_code();
            emit(&to_json(&Document::new(cmd, &sym, report)), out)?;
            if code != 0 {
                return Err(Failure::Reported(code));
            }
        }
        Command::Pullback(input) => {
            let sym = load(cli, input)?;
            let pb = cayley_pullback(&sym, None)?;
            let tol = sym.tolerances().root_tol;
            let report = PullbackDoc {
                alpha: pb.alpha,
                p: PolyDoc::new(&pb.p, tol),
                q: PolyDoc::new(&pb.q, tol),
                sample_points: PULLBACK_SAMPLES,
                sampling_residual: pb.sampling_residual(&sym, PULLBACK_SAMPLES),
            };
            emit(&to_json(&Document::new(echo(cli, "pullback", input), &sym, report)), out)?;
        }
    }
    Ok(())
}

/// Parses arguments and runs; returns the process exit code. Usage errors
/// exit with 1 like any other malformed input.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("rtoep: {f}");
            f.exit_code()
        }
    }
}
