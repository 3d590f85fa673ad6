//! `lsnc`: synthesize and verify Latin Squares that remove singular fade
//! states of the two-way relay channel.

mod commands;
mod input;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Marks errors caused by bad invocations or unreadable inputs.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Process outcome of a command that ran to the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Verification failed or the problem is infeasible.
    Failed,
    BudgetExhausted,
}

#[derive(Parser, Debug)]
#[command(name = "lsnc", version, about = "Latin Squares removing singular fade states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// psk:M, qam:M, pam:M or custom:@points.json
    #[arg(long)]
    pub signal: String,
    /// a+bj, polar:r,theta or psk:k,l
    #[arg(long, allow_hyphen_values = true)]
    pub fade: String,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Budget {
    /// Search node budget
    #[arg(long, env = "LSNC_BUDGET", default_value_t = lsnc_core::coloring::DEFAULT_NODE_BUDGET)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the nonzero singular fade states of a signal set
    FadeStates {
        #[arg(long)]
        signal: String,
        /// Write JSON records (to stdout when no file is given)
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Singularity removal constraints at a fade state
    Constraints {
        #[command(flatten)]
        target: Target,
        /// Print the constrained partial Latin Square (the default)
        #[arg(long)]
        ascii: bool,
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Singularity removal graph
    Graph {
        #[command(flatten)]
        target: Target,
        /// Restrict to constraints with at least two cells
        #[arg(long)]
        vital: bool,
        #[arg(long, num_args = 0..=1)]
        dot: Option<Option<PathBuf>>,
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Chromatic number of the removal graph
    Chromatic {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        vital_only: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Build a removing Latin Square with as few symbols as possible
    Latin {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Check that a grid is a Latin Square removing a fade state
    Verify {
        #[arg(long)]
        latin: PathBuf,
        /// Defaults to the signal set named in the grid file
        #[arg(long)]
        signal: Option<String>,
        /// Defaults to the fade state named in the grid file
        #[arg(long, allow_hyphen_values = true)]
        fade: Option<String>,
    },
    /// Complete a partial Latin grid by backtracking
    Complete {
        #[arg(long)]
        partial: PathBuf,
        #[arg(long)]
        symbols: usize,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Closed-form M-symbol squares for every PSK representative
    PskSweep {
        #[arg(long)]
        m: usize,
        /// Directory for one JSON square per representative and a summary
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add wall times to the table
        #[arg(long)]
        timing: bool,
    },
    /// (M+1)-clique certificates for square M-QAM
    Clique {
        #[arg(long)]
        m: usize,
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Size and minimum distance of the effective constellation
    Mindist {
        #[command(flatten)]
        target: Target,
    },
    /// Random Latin rectangle, optionally completed to a square
    Rectangle {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        complete: bool,
        #[arg(long, num_args = 0..=1)]
        json: Option<Option<PathBuf>>,
    },
    /// Verify every grid in a fixture directory
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Ok(Status::BudgetExhausted) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            let bad_input = matches!(
                e.downcast_ref::<lsnc_core::Error>(),
                Some(lsnc_core::Error::InvalidParameter(_) | lsnc_core::Error::InvalidInput(_))
            );
            if bad_input || e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
