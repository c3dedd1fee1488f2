use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pursuit_escape::PursuerModel;

#[derive(Debug, Parser)]
#[command(name = "escape-ratio", version, about = "Critical speed ratios for escaping a polygon")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Polygon file: a JSON array of [x, y] vertices.
    #[arg(long, global = true, value_name = "FILE")]
    pub polygon: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Model::Moat)]
    pub model: Model,
    /// Write the result document here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker bound; the solvers are sequential so any value >= 1 is accepted.
    #[arg(long, global = true, env = "ESCAPE_RATIO_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Moat,
    Exterior,
}

impl From<Model> for PursuerModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Moat => PursuerModel::Moat,
            Model::Exterior => PursuerModel::Exterior,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Disk,
    Halfplane,
    Wedge,
    Polygon,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper bounds on r* from boundary pair ratios.
    Ratio {
        #[arg(long, default_value_t = 0.05)]
        spacing: f64,
    },
    /// Closed-form critical ratios of the canonical shapes.
    Exact {
        /// Full opening angle of the wedge row, in radians.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        wedge_angle: f64,
    },
    /// Builds and solves the discrete game at one ratio.
    DiscreteSolve {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = pursuit_escape::discrete::DEFAULT_STATE_CAP)]
        max_states: u64,
        /// Dump the strategy tables and game parameters to this file.
        #[arg(long, value_name = "FILE")]
        tables: Option<PathBuf>,
        /// Rows kept per table in the dump.
        #[arg(long, default_value_t = 10_000)]
        table_limit: usize,
        /// Random probes used to measure the sample nets.
        #[arg(long, default_value_t = 0)]
        verify_net: usize,
    },
    /// Brackets r* by bisection over the discrete decider.
    Approximate {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(long, requires = "override_gamma")]
        override_delta: Option<f64>,
        #[arg(long, requires = "override_delta")]
        override_gamma: Option<f64>,
    },
    /// Plays a strategy pair in continuous time.
    Simulate {
        #[arg(long, value_enum)]
        scenario: Scenario,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long)]
        t_max: Option<f64>,
        /// Escape margin; defaults to 5 r dt.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Boundary angle of the halfplane scenario.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        /// Full opening angle of the wedge scenario.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        wedge_angle: f64,
        /// Table dump from discrete-solve, for the polygon scenario.
        #[arg(long, value_name = "FILE")]
        tables: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
}
