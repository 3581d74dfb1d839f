use std::fmt;

use graphsched::{GraphError, ScheduleError, SimError, SolverError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID_INPUT: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

/// A command failure: what to print on stderr and which exit code to use.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_INVALID_INPUT,
            message: message.to_string(),
        }
    }

    pub fn validation(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.to_string(),
        }
    }

    pub fn limit(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_LIMIT,
            message: message.to_string(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::input(e)
    }
}

impl From<ScheduleError> for Failure {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::InvalidSchedule(_) | ScheduleError::InvalidDecomposition(_) => {
                Failure::validation(e)
            }
            _ => Failure::input(e),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::TooLarge { .. } => Failure::limit(e),
            SolverError::Schedule(inner) => inner.into(),
            SolverError::NoRestarts => Failure::input(e),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooLarge { .. } => Failure::limit(e),
            SimError::Schedule(inner) => inner.into(),
            SimError::InvalidSchedule(_)
            | SimError::NormDrift { .. }
            | SimError::InactiveNeighbour { .. } => Failure::validation(e),
            SimError::BasisLength { .. }
            | SimError::UnknownBasis(_)
            | SimError::OutcomeLength { .. } => Failure::input(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::input(format!("malformed document: {e}"))
    }
}

pub type CmdResult = Result<u8, Failure>;
