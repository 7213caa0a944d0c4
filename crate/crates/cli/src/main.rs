//! `chdyn`: landmarks, catalogs, connectivity verdicts, orbit probes and
//! plane renders for the Chebyshev-Halley family on `z^n - 1`.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chdyn::Error;
use settings::Settings;

#[derive(Parser, Debug)]
#[command(
    name = "chdyn",
    version,
    about = "Chebyshev-Halley dynamics on z^n - 1"
)]
struct Cli {
    /// File of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed points, multipliers, critical points and stability disks.
    Landmarks(LandmarksArgs),
    /// The special parameters for a given degree.
    Catalog(CatalogArgs),
    /// Julia-set connectivity verdict.
    Classify(ClassifyArgs),
    /// Parameter-plane or dynamical-plane image.
    Render(RenderArgs),
    /// Numerical order of convergence to a root.
    Order(OrderArgs),
    /// Batch critical-orbit probe over a parameter grid.
    Survey(SurveyArgs),
}

#[derive(Args, Debug)]
struct Family {
    #[arg(long)]
    n: Option<u32>,
    /// Complex parameter: a+bi, a-bi, bi, a, or rationals such as 5/6.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
}

impl Family {
    fn apply(&self, s: &mut Settings) {
        s.set("n", self.n);
        s.set("alpha", self.alpha.as_deref());
    }
}

#[derive(Args, Debug)]
struct LandmarksArgs {
    #[command(flatten)]
    family: Family,
    /// Also write the points as CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[arg(long)]
    n: Option<u32>,
    /// Print CSV instead of an aligned table.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    family: Family,
    /// Base grid resolution (pixels per axis).
    #[arg(long)]
    resolution: Option<usize>,
    /// Index of the root whose basin is examined.
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Args, Debug)]
struct Window {
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y_max: Option<String>,
}

impl Window {
    fn apply(&self, s: &mut Settings) {
        s.set("x_min", self.x_min.as_deref());
        s.set("x_max", self.x_max.as_deref());
        s.set("y_min", self.y_min.as_deref());
        s.set("y_max", self.y_max.as_deref());
    }
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Named preset; other flags override its fields.
    #[arg(long)]
    figure: Option<String>,
    /// `param` or `dynam`.
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    family: Family,
    #[command(flatten)]
    window: Window,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    /// Iteration budget per pixel.
    #[arg(long)]
    iters: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `ppm` or `png`; guessed from the output extension by default.
    #[arg(long)]
    format: Option<String>,
    /// Mark critical points and preimages of 1 (dynamical planes).
    #[arg(long)]
    markers: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[command(flatten)]
    family: Family,
    #[arg(long)]
    root: Option<usize>,
    /// Relative distance of the seed from the root.
    #[arg(long)]
    offset: Option<String>,
}

#[derive(Args, Debug)]
struct SurveyArgs {
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    window: Window,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    iters: Option<u32>,
    /// Also run the connectivity classifier on every sample.
    #[arg(long)]
    classify: bool,
    #[arg(long)]
    resolution: Option<usize>,
    /// Output file, `-` for standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateParameter { .. } => 2,
        Error::NoConvergence { .. } | Error::BasinEscape { .. } => 3,
        Error::Io { .. } => 4,
        Error::InvalidParameter(_) | Error::Domain(_) => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut s = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    match cli.command {
        Command::Landmarks(a) => {
            a.family.apply(&mut s);
            s.set("csv", a.csv.as_ref().map(|p| p.display()));
            commands::landmarks(s)
        }
        Command::Catalog(a) => {
            s.set("n", a.n);
            s.set_flag("csv", a.csv);
            commands::catalog(s)
        }
        Command::Classify(a) => {
            a.family.apply(&mut s);
            s.set("resolution", a.resolution);
            s.set("root", a.root);
            commands::classify(s)
        }
        Command::Render(a) => {
            s.set("figure", a.figure.as_deref());
            s.set("mode", a.mode.as_deref());
            a.family.apply(&mut s);
            a.window.apply(&mut s);
            s.set("width", a.width);
            s.set("height", a.height);
            s.set("max_iterations", a.iters);
            s.set("out", a.out.as_ref().map(|p| p.display()));
            s.set("format", a.format.as_deref());
            s.set_flag("markers", a.markers);
            s.set("workers", a.workers);
            commands::render(s)
        }
        Command::Order(a) => {
            a.family.apply(&mut s);
            s.set("root", a.root);
            s.set("offset", a.offset.as_deref());
            commands::order(s)
        }
        Command::Survey(a) => {
            s.set("n", a.n);
            a.window.apply(&mut s);
            s.set("cols", a.cols);
            s.set("rows", a.rows);
            s.set("max_iterations", a.iters);
            s.set_flag("classify", a.classify);
            s.set("resolution", a.resolution);
            s.set("out", a.out.as_ref().map(|p| p.display()));
            s.set("workers", a.workers);
            commands::survey(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
