//! Library side of the `findim` command-line tool.

pub mod commands;
pub mod io;
pub mod report;

use thiserror::Error;

pub use report::AnalysisReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] findim::Error),
    #[error("solver and brute-force oracle disagree")]
    OracleMismatch(Box<AnalysisReport>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use findim::Error as E;
        match self {
            CliError::Input(_) | CliError::Io(_) => exit::INPUT,
            CliError::OracleMismatch(_) => exit::ORACLE,
            CliError::Output(_) => exit::OTHER,
            CliError::Core(e) if e.is_budget() => exit::BUDGET,
            CliError::Core(
                E::MalformedInput(_)
                | E::DegenerateInput(_)
                | E::NotAMetric(_)
                | E::EmptySpace
                | E::SingletonSpace
                | E::BadParameter(_),
            ) => exit::INPUT,
            CliError::Core(_) => exit::OTHER,
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const ORACLE: i32 = 4;
}
