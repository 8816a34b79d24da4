//! `tradeoff`: accuracy versus sensitivity analysis from the command line.

mod commands;
mod error;
mod inputs;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tradeoff_core::Norm;

#[derive(Debug, Parser)]
#[command(name = "tradeoff", version, about = "Accuracy versus sensitivity tradeoffs of binary classifiers")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Problem file, or one of the presets table1, fig2a, fig2b, fig2c
    #[arg(long, global = true, default_value = "table1")]
    pub problem: String,

    #[arg(long, global = true, value_enum, default_value_t = NormArg::Inf)]
    pub norm: NormArg,

    /// Base seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output directory; without it results go to stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    Inf,
    Two,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Inf => Norm::Inf,
            NormArg::Two => Norm::Two,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Ml,
    Linear,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3,
    Table1,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Accuracy targets of the general curve
    #[arg(long, default_value_t = 60)]
    pub zeta_steps: usize,

    /// Log-spaced thresholds of the ML curve
    #[arg(long, default_value_t = 400)]
    pub eta_steps: usize,

    /// Thresholds of the linear curve
    #[arg(long, default_value_t = 2001)]
    pub y_steps: usize,

    /// Points per axis of the general solver's stage-1 grid
    #[arg(long, default_value_t = 600)]
    pub grid: usize,

    /// Contour vertices refined per accuracy target
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,

    /// Boundaries of the general classifier
    #[arg(long, default_value_t = 2)]
    pub n_boundaries: usize,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum Command {
    /// Likelihood-ratio boundaries of the ML classifier
    Boundaries {
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Scan points of the root search used for non-Gaussian pairs
        #[arg(long, default_value_t = 4096)]
        root_grid: usize,
    },
    /// Accuracy of a classifier
    Accuracy {
        /// ml:<eta>, linear:<y>[:h0_first|h1_first] or general:<y1>,<y2>,..[:h0_first|h1_first]
        #[arg(long, default_value = "ml:1")]
        classifier: String,
    },
    /// Sensitivity and accuracy gradient of a classifier
    Sensitivity {
        /// ml:<eta>, linear:<y>[:h0_first|h1_first] or general:<y1>,<y2>,..[:h0_first|h1_first]
        #[arg(long, default_value = "ml:1")]
        classifier: String,
    },
    /// Tradeoff curve of one classifier family
    Curve {
        #[arg(value_enum)]
        kind: CurveKind,
        #[command(flatten)]
        grids: GridArgs,
    },
    /// Assumption checks at the maximum-accuracy classifier
    Check,
    /// Monte Carlo run against shifted distributions
    Simulate {
        /// ml:<eta>, linear:<y>[:h0_first|h1_first] or general:<y1>,<y2>,..[:h0_first|h1_first]
        #[arg(long, default_value = "ml:1")]
        classifier: String,
        /// s1, s2 or none
        #[arg(long)]
        scenario: Option<String>,
        /// Perturbation file with mu_bar_0, sigma_bar_0, mu_bar_1, sigma_bar_1
        #[arg(long)]
        perturbation: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        n_obs: usize,
        #[arg(long, default_value_t = 100)]
        n_trials: usize,
    },
    /// Minimum-sensitivity parameters at a prescribed accuracy
    Design {
        #[arg(long, default_value_t = 0.9)]
        gamma: f64,
        /// Admissible-set file, or the preset fig3
        #[arg(long = "box", default_value = "fig3")]
        box_file: String,
        #[arg(long, default_value_t = 30)]
        restarts: usize,
    },
    /// Regenerate a figure or table into --out (default out/<target>)
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        grids: GridArgs,
        #[arg(long, default_value_t = 30)]
        restarts: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
