//! Optimal measurement schedules for graph states.
//!
//! A measurement schedule initialises and measures the qubits of a graph
//! state one at a time, measuring a qubit only once all its neighbours are
//! initialised. The smallest achievable peak number of simultaneously active
//! qubits (the spatial cost) equals the pathwidth of the graph plus one, and
//! schedules and path decompositions convert into each other constructively.
//!
//! - [`graph`], [`family`], [`io`]: graphs, generators and file formats.
//! - [`schedule`]: schedules, decompositions, validators and conversions.
//! - [`solver`]: exact and heuristic pathwidth solvers with certificates.
//! - [`sim`]: streaming simulator whose memory is `2^cost`, plus a full
//!   state-vector reference. Generic over the real scalar type.

pub mod family;
pub mod graph;
pub mod io;
pub mod schedule;
pub mod sim;
pub mod solver;

pub use family::FamilyDescriptor;
pub use graph::{degeneracy, Graph, GraphError, Vertex};
pub use schedule::{
    Action, MeasurementSchedule, PathDecomposition, ScheduleError, ScheduleEvent, ValidationReport,
};
pub use sim::{Basis, BasisAssignment, Real, SimError, SimulationReport};
pub use solver::{Budget, Method, SolverError, SolverReport};

/// Double-precision streaming register.
pub type Register = sim::StreamRegister<f64>;
/// Single-precision streaming register, for memory-bound runs.
pub type Register32 = sim::StreamRegister<f32>;
/// Double-precision complex amplitude.
pub type Amplitude = num_complex::Complex<f64>;
