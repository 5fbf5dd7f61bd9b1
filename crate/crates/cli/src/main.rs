//! Command-line surface for exact optimal-transport computations: pairwise
//! distances, metric-induced triangulations, distances to a model, and
//! distance landscapes over a model's parameter grid.

mod commands;
mod docs;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use otv_core::models::Engine;
use otv_core::Distribution;

use commands::TriangulateOutput;
use docs::{MetricFile, ProblemDocument};

/// Exit codes: 0 success, 2 validation error, 3 capability error (problem
/// size or degree out of supported range), 4 numeric infeasibility.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: String) -> Self {
        CliError { code, message }
    }

    pub fn validation(message: String) -> Self {
        Self::new(2, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<otv_core::Error> for CliError {
    fn from(e: otv_core::Error) -> Self {
        let code = match &e {
            otv_core::Error::Capability(_) => 3,
            otv_core::Error::NumericInfeasible(_) => 4,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "otv",
    version,
    about = "Exact Wasserstein distances from discrete distributions to statistical models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact distance between two distributions, with an optimal vertex plan
    Distance {
        /// JSON file with the ground metric (object with "d" or bare matrix)
        #[arg(long)]
        metric: PathBuf,
        /// First marginal, e.g. "1/2,1/7,5/14" (column sums of the plan)
        #[arg(long)]
        mu: String,
        /// Second marginal (row sums of the plan)
        #[arg(long)]
        nu: String,
        /// Write the JSON result here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Regular triangulation of the product of simplices induced by a metric
    Triangulate {
        #[arg(long)]
        metric: PathBuf,
        /// trees: spanning-tree edge sets; ideal: prime components of the
        /// monomial ideal; cells: coarse subdivision cells; cone: defining
        /// inequalities of the secondary cone
        #[arg(long, value_enum, default_value_t = TriFormat::Trees)]
        format: TriFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Distance from a distribution to a model (problem document)
    ModelDistance {
        problem: PathBuf,
        /// Override the document's engine choice
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        /// Numeric-engine refinement tolerance on the parameters
        #[arg(long)]
        tol: Option<f64>,
        /// Numeric-engine grid points per axis
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV of the exact distance at every grid point of the parameter box
    Heatmap {
        problem: PathBuf,
        /// Grid points per axis (1 = domain midpoint only)
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TriFormat {
    Trees,
    Ideal,
    Cells,
    Cone,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Distance {
            metric,
            mu,
            nu,
            output,
        } => {
            let d = read_json::<MetricFile>(&metric)?.metric()?;
            let mu = Distribution::parse(&mu)?;
            let nu = Distribution::parse(&nu)?;
            let doc = commands::distance(&d, &mu, &nu)?;
            emit(output.as_deref(), &to_json(&doc)?)
        }
        Command::Triangulate {
            metric,
            format,
            output,
        } => {
            let d = read_json::<MetricFile>(&metric)?.metric()?;
            let kind = match format {
                TriFormat::Trees => TriangulateOutput::Trees,
                TriFormat::Ideal => TriangulateOutput::Ideal,
                TriFormat::Cells => TriangulateOutput::Cells,
                TriFormat::Cone => TriangulateOutput::Cone,
            };
            emit(output.as_deref(), &commands::triangulate(&d, &kind)?)
        }
        Command::ModelDistance {
            problem,
            engine,
            format,
            tol,
            grid,
            output,
        } => {
            let doc = read_json::<ProblemDocument>(&problem)?;
            let engine = engine.map(|e| match e {
                EngineArg::Exact => Engine::Exact,
                EngineArg::Numeric => Engine::Numeric,
            });
            let run = commands::run_model_distance(&doc, engine, tol, grid)?;
            let text = match format {
                OutFormat::Json => to_json(&commands::model_result_document(&run))?,
                OutFormat::Table => commands::model_result_table(&run),
            };
            emit(output.as_deref(), &text)
        }
        Command::Heatmap {
            problem,
            grid,
            output,
        } => {
            let doc = read_json::<ProblemDocument>(&problem)?;
            emit(output.as_deref(), &commands::heatmap(&doc, grid)?)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::validation(format!("serialization failed: {e}")))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_codes_map_by_kind() {
        let cap = CliError::from(otv_core::Error::Capability("too big".into()));
        assert_eq!(cap.code, 3);
        let num = CliError::from(otv_core::Error::NumericInfeasible(
            "cell numerically infeasible".into(),
        ));
        assert_eq!(num.code, 4);
        let val = CliError::from(otv_core::Error::DivisionByZero);
        assert_eq!(val.code, 2);
        assert_eq!(CliError::validation("bad".into()).code, 2);
    }
}
