//! Quantum-semantics check of measurement schedules.
//!
//! [`stream_simulate`] executes a schedule while holding only the active
//! qubits, so memory is `2^cost`. [`monolithic_simulate`] prepares the whole
//! graph state and serves as the reference. [`distribution_equivalence`]
//! compares the two exactly over every joint outcome.

mod basis;
mod monolithic;
mod scalar;
mod stream;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::schedule::{MeasurementSchedule, ScheduleError, ValidationReport};

pub use basis::{Basis, BasisAssignment};
pub use monolithic::{graph_state, monolithic_simulate};
pub use scalar::Real;
pub use stream::{stream_probability, stream_simulate, Outcome, SimulationReport, StreamRegister};

/// Largest schedule cost the streaming simulator accepts.
pub const STREAM_MAX_ACTIVE: usize = 24;
pub const MONOLITHIC_MAX_N: usize = 12;
pub const EQUIVALENCE_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid measurement schedule: {0}")]
    InvalidSchedule(ValidationReport),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("register norm drifted to {norm} after event {event}")]
    NormDrift { event: usize, norm: f64 },
    #[error("{what} is {value}; the limit is {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("expected {expected} bases, found {found}")]
    BasisLength { expected: usize, found: usize },
    #[error("unknown basis `{0}`; use Z, X or Y")]
    UnknownBasis(char),
    #[error("expected {expected} outcome bits, found {found}")]
    OutcomeLength { expected: usize, found: usize },
    #[error("vertex {vertex} initialised after its neighbour {neighbour} was measured")]
    InactiveNeighbour { vertex: usize, neighbour: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub outcomes_checked: usize,
    pub tolerance: f64,
}

/// Compares streamed and monolithic joint outcome probabilities over all
/// `2^n` outcome strings.
pub fn distribution_equivalence<T: Real>(
    g: &Graph,
    s: &MeasurementSchedule,
    bases: &BasisAssignment,
) -> Result<EquivalenceReport, SimError> {
    let n = g.n();
    if n > EQUIVALENCE_MAX_N {
        return Err(SimError::TooLarge {
            what: "vertex count",
            value: n,
            max: EQUIVALENCE_MAX_N,
        });
    }
    stream::prepare(g, s, bases)?;
    let deviations = (0..1usize << n)
        .into_par_iter()
        .map(|x| {
            let bits: Vec<u8> = (0..n).map(|v| (x >> v & 1) as u8).collect();
            let streamed = stream_probability::<T>(g, s, bases, &bits)?.to_f64();
            let (reference, _) = monolithic_simulate::<T>(g, bases, Some(&bits), 0)?;
            Ok((streamed - reference).abs())
        })
        .collect::<Result<Vec<f64>, SimError>>()?;
    let max_deviation = deviations.into_iter().fold(0.0, f64::max);
    let tolerance = T::equivalence_tolerance().to_f64();
    Ok(EquivalenceReport {
        pass: max_deviation < tolerance,
        max_deviation,
        outcomes_checked: 1 << n,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyDescriptor;
    use crate::schedule::ordering_to_schedule;
    use crate::solver::exact_dp;

    #[test]
    fn equivalence_examples() {
        let p3 = FamilyDescriptor::Path { n: 3 }.generate().unwrap();
        let s = ordering_to_schedule(&p3, &[1, 0, 2]).unwrap();
        let r = distribution_equivalence::<f64>(&p3, &s, &BasisAssignment::uniform(Basis::Z, 3))
            .unwrap();
        assert!(r.pass);
        assert!(r.max_deviation < 1e-9);
        assert_eq!(r.outcomes_checked, 8);

        let g23 = FamilyDescriptor::Grid { m: 2, n: 3 }.generate().unwrap();
        let opt = exact_dp(&g23).unwrap().schedule;
        let r = distribution_equivalence::<f64>(&g23, &opt, &BasisAssignment::uniform(Basis::X, 6))
            .unwrap();
        assert!(r.pass);

        let k4 = FamilyDescriptor::Complete { n: 4 }.generate().unwrap();
        let s = MeasurementSchedule::all_init_then_measure(4);
        let r =
            distribution_equivalence::<f64>(&k4, &s, &BasisAssignment::parse("XYZX", 4).unwrap())
                .unwrap();
        assert!(r.pass);
    }

    #[test]
    fn grid_peak_matches_spatial_cost() {
        let g = FamilyDescriptor::Grid { m: 2, n: 3 }.generate().unwrap();
        let opt = exact_dp(&g).unwrap().schedule;
        let r =
            stream_simulate::<f64>(&g, &opt, &BasisAssignment::uniform(Basis::Z, 6), 5).unwrap();
        assert_eq!(r.peak_active, 3);
        assert_eq!(r.peak_amplitude_length, 8);
    }

    #[test]
    fn equivalence_size_cap() {
        let g = Graph::edgeless(EQUIVALENCE_MAX_N + 1);
        let s = MeasurementSchedule::all_init_then_measure(g.n());
        let b = BasisAssignment::uniform(Basis::Z, g.n());
        assert!(matches!(
            distribution_equivalence::<f64>(&g, &s, &b),
            Err(SimError::TooLarge { .. })
        ));
    }
}
