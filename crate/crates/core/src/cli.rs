//! `softround` command-line front end.
//!
//! ```text
//! softround eval  --method norm-deriv --k 10 --x 0.25 [--grad]
//! softround sweep --kind k --method sigma-diff --ks 1,10,100,1000 --exclude 0.05
//! softround sweep --kind window --k 10 --radii 1,2,3,10
//! softround plot  --output figure.svg [--data figure.csv]
//! ```
//!
//! Tabular output is CSV with a header row. Numbers are printed in their
//! shortest round-trip form, so every value reparses to the identical double.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{self, compare_methods, SampleGrid, SweepReport};
use crate::kernels::{DenominatorFloor, MethodKind, Rounder, WindowSpec};
use crate::sigmoid::SharpnessK;
use crate::svg::{LinePlot, Series};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Kernel(#[from] crate::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{path}:{line}: {message}")]
    Input {
        path: String,
        line: usize,
        message: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            _ => 1,
        }
    }

    fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

/// `start:stop:count`, inclusive endpoints, linear spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridArg {
    fn to_grid(self, exclusion: f64) -> Result<SampleGrid, CliError> {
        SampleGrid::new(self.start, self.stop, self.count, exclusion)
            .map_err(|e| CliError::Usage(format!("--grid: {e}")))
    }
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("{count:?}: {e}"))?;
        Ok(Self {
            start: num(start)?,
            stop: num(stop)?,
            count,
        })
    }
}

impl Default for GridArg {
    fn default() -> Self {
        Self {
            start: -1.0,
            stop: 1.0,
            count: 1000,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "softround",
    version,
    about = "Smooth, differentiable approximations to integer rounding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a rounding method at a list of points.
    Eval(EvalArgs),
    /// Error sweeps over the sharpness k or the window radius.
    Sweep(SweepArgs),
    /// Plot classical rounding and both smooth methods as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Sharpness k (> 0)
    #[arg(long, default_value_t = 10.0)]
    pub k: f64,

    /// Window radius W: sum over floor(x)-W ..= floor(x)+W
    #[arg(long, default_value_t = WindowSpec::DEFAULT_RADIUS)]
    pub radius: u32,

    /// Use the four-neighbour window floor(x)-1 ..= floor(x)+2 with an
    /// additive denominator floor
    #[arg(long, conflicts_with = "radius")]
    pub precise: bool,

    /// Denominator floor for norm-deriv
    #[arg(long, default_value_t = DenominatorFloor::DEFAULT_EPSILON)]
    pub epsilon: f64,
}

impl KernelArgs {
    fn window(&self) -> WindowSpec {
        if self.precise {
            WindowSpec::appendix_precise()
        } else {
            WindowSpec::symmetric(self.radius)
        }
    }

    fn floor(&self) -> Result<DenominatorFloor, CliError> {
        let floor = if self.precise {
            DenominatorFloor::additive(self.epsilon)
        } else {
            DenominatorFloor::new(self.epsilon)
        };
        floor.map_err(|e| CliError::Usage(format!("--epsilon: {e}")))
    }

    fn sharpness(&self) -> Result<SharpnessK, CliError> {
        SharpnessK::new(self.k).map_err(|e| CliError::Usage(format!("--k: {e}")))
    }

    fn rounder(&self, method: MethodKind) -> Result<Rounder, CliError> {
        Ok(Rounder::new(method, self.sharpness()?)
            .with_window(self.window())
            .with_floor(self.floor()?))
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["x", "grid", "input"])))]
pub struct EvalArgs {
    /// classical, sigma-diff or norm-deriv
    #[arg(long, default_value = "norm-deriv")]
    pub method: MethodKind,

    /// Input values (repeatable or comma-separated)
    #[arg(long = "x", value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,

    /// Evaluate on start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridArg>,

    /// File with one value per line; '#' starts a comment
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Add a derivative column
    #[arg(long)]
    pub grad: bool,

    /// Write CSV here instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub kernel: KernelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    K,
    Window,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// What to sweep: k (error vs classical rounding) or window (error vs the widest radius)
    #[arg(long, value_enum)]
    pub kind: SweepKind,

    /// sigma-diff or norm-deriv
    #[arg(long, default_value = "norm-deriv")]
    pub method: MethodKind,

    /// Ascending k values for --kind k
    #[arg(long, value_delimiter = ',')]
    pub ks: Vec<f64>,

    /// Ascending radii for --kind window; the last is the reference
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<u32>,

    /// Sample grid start:stop:count
    #[arg(long, default_value = "-1:1:1000", allow_hyphen_values = true)]
    pub grid: GridArg,

    /// Drop grid points closer than this to a half-integer
    /// [default: 0.05 for --kind k, 0 for --kind window]
    #[arg(long)]
    pub exclude: Option<f64>,

    /// Write CSV here instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub kernel: KernelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Sample grid start:stop:count
    #[arg(long, default_value = "-1:1:1000", allow_hyphen_values = true)]
    pub grid: GridArg,

    /// SVG output path
    #[arg(long, short, default_value = "smooth_rounding.svg")]
    pub output: PathBuf,

    /// Also write the plotted values as CSV
    #[arg(long)]
    pub data: Option<PathBuf>,

    #[command(flatten)]
    pub kernel: KernelArgs,
}

/// Shortest representation that reparses to the same double; integral
/// values drop the trailing `.0` (`2.0 → "2"`).
pub fn format_number(v: f64) -> String {
    let s = format!("{v:?}");
    match s.strip_suffix(".0") {
        Some(int) => int.to_string(),
        None => s,
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(args) => cmd_eval(&args, stdout),
        Command::Sweep(args) => cmd_sweep(&args, stdout),
        Command::Plot(args) => cmd_plot(&args),
    }
}

fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(p, e))
        }
        None => body(stdout).map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Values from a text file: one per line, blank lines and `#` comments skipped.
pub fn read_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_values(&text, &path.display().to_string())
}

fn parse_values(text: &str, origin: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Input {
            path: origin.to_string(),
            line: i + 1,
            message,
        };
        let v: f64 = line
            .parse()
            .map_err(|_| err(format!("cannot parse {line:?} as a number")))?;
        if !v.is_finite() {
            return Err(err(format!("non-finite value {line}")));
        }
        values.push(v);
    }
    Ok(values)
}

pub fn cmd_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let xs: Vec<f64> = if let Some(path) = &args.input {
        read_values(path)?
    } else if let Some(grid) = args.grid {
        grid.to_grid(0.0)?.points().to_vec()
    } else {
        args.x.clone()
    };
    if xs.is_empty() {
        return Err(CliError::Usage("no input values".into()));
    }
    if let Some(bad) = xs.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("x must be finite, got {bad}")));
    }
    let rounder = args.kernel.rounder(args.method)?;

    let rows: Vec<(f64, f64, Option<f64>)> = if args.grad {
        xs.par_iter()
            .map(|&x| rounder.grad(x).map(|g| (x, g.value, Some(g.derivative))))
            .collect::<crate::Result<_>>()?
    } else {
        xs.par_iter()
            .map(|&x| rounder.eval(x).map(|v| (x, v, None)))
            .collect::<crate::Result<_>>()?
    };

    with_output(args.output.as_deref(), stdout, |w| {
        if args.grad {
            writeln!(w, "x,value,derivative")?;
        } else {
            writeln!(w, "x,value")?;
        }
        for (x, v, d) in &rows {
            match d {
                Some(d) => writeln!(
                    w,
                    "{},{},{}",
                    format_number(*x),
                    format_number(*v),
                    format_number(*d)
                )?,
                None => writeln!(w, "{},{}", format_number(*x), format_number(*v))?,
            }
        }
        Ok(())
    })
}

pub fn write_sweep_csv(report: &SweepReport, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "param,max_abs_err,mean_abs_err,argmax_x")?;
    for row in &report.rows {
        writeln!(
            w,
            "{},{},{},{}",
            format_number(row.param),
            format_number(row.max_abs_err),
            format_number(row.mean_abs_err),
            format_number(row.argmax_x)
        )?;
    }
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !args.method.is_smooth() {
        return Err(CliError::Usage(
            "--method must be sigma-diff or norm-deriv for sweeps".into(),
        ));
    }
    let floor = args.kernel.floor()?;
    let report = match args.kind {
        SweepKind::K => {
            if args.ks.is_empty() {
                return Err(CliError::Usage("--kind k needs a non-empty --ks list".into()));
            }
            let ks = args
                .ks
                .iter()
                .map(|&k| SharpnessK::new(k))
                .collect::<crate::Result<Vec<_>>>()
                .map_err(|e| CliError::Usage(format!("--ks: {e}")))?;
            let grid = args
                .grid
                .to_grid(args.exclude.unwrap_or(analysis::DEFAULT_EXCLUSION))?;
            analysis::sweep_k(args.method, &grid, &ks, args.kernel.window(), floor)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        SweepKind::Window => {
            if args.radii.len() < 2 {
                return Err(CliError::Usage(
                    "--kind window needs at least two --radii".into(),
                ));
            }
            let grid = args.grid.to_grid(args.exclude.unwrap_or(0.0))?;
            analysis::sweep_window(
                args.method,
                &grid,
                args.kernel.sharpness()?,
                &args.radii,
                floor,
            )
            .map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    with_output(args.output.as_deref(), stdout, |w| write_sweep_csv(&report, w))
}

/// SVG for the three methods over the grid, plus the rows it was drawn from.
pub fn render_comparison(
    args: &PlotArgs,
) -> Result<(String, Vec<analysis::ComparisonRow>), CliError> {
    let grid = args.grid.to_grid(0.0)?;
    let k = args.kernel.sharpness()?;
    let rows = compare_methods(&grid, k, args.kernel.window(), args.kernel.floor()?)?;

    let series = |m: MethodKind| -> Vec<(f64, f64)> { rows.iter().map(|r| (r.x, r.get(m))).collect() };
    let plot = LinePlot::new(format!(
        "Comparison of Rounding Functions (k={})",
        format_number(k.get())
    ))
    .labels("x", "Value")
    .with_series(Series::new(
        MethodKind::Classical.label(),
        series(MethodKind::Classical),
    ))
    .with_series(
        Series::new(MethodKind::SigmaDiff.label(), series(MethodKind::SigmaDiff)).dashed("8 4"),
    )
    .with_series(
        Series::new(MethodKind::NormDeriv.label(), series(MethodKind::NormDeriv))
            .dashed("8 4 2 4"),
    );
    Ok((plot.render(), rows))
}

pub fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let (svg, rows) = render_comparison(args)?;
    fs::write(&args.output, svg).map_err(|e| CliError::io(&args.output, e))?;
    if let Some(path) = &args.data {
        let mut sink = io::sink();
        with_output(Some(path), &mut sink, |w| {
            writeln!(w, "x,classical,sigma-diff,norm-deriv")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{}",
                    format_number(r.x),
                    format_number(r.classical),
                    format_number(r.sigma_diff),
                    format_number(r.norm_deriv)
                )?;
            }
            Ok(())
        })?;
    }
    Ok(())
}
