use std::fmt::Debug;

use num_traits::{Float, FloatConst};

/// Real scalar type used for amplitudes.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    /// Allowed drift of the register norm after any single event.
    fn norm_tolerance() -> Self;
    /// Largest probability difference accepted by the equivalence check.
    fn equivalence_tolerance() -> Self;

    fn from_f64(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("finite f64 converts")
    }

    fn to_f64(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).expect("finite value converts")
    }
}

impl Real for f64 {
    fn norm_tolerance() -> Self {
        1e-10
    }

    fn equivalence_tolerance() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn norm_tolerance() -> Self {
        1e-4
    }

    fn equivalence_tolerance() -> Self {
        1e-4
    }
}
