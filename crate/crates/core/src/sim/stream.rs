//! Streaming state-vector execution of a measurement schedule.
//!
//! The register only holds active qubits, so its amplitude vector has length
//! `2^active` and peaks at `2^cost` for the executed schedule.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Basis, BasisAssignment, Real, SimError, STREAM_MAX_ACTIVE};
use crate::graph::{Graph, Vertex};
use crate::schedule::{self, Action, MeasurementSchedule};

/// Amplitudes over the active qubits, with a vertex-to-slot map.
///
/// Slot `s` is bit `s` of the amplitude index.
#[derive(Debug, Clone)]
pub struct StreamRegister<T: Real> {
    slot_of: Vec<Option<usize>>,
    vertex_at: Vec<Vertex>,
    amps: Vec<Complex<T>>,
}

/// How a measurement outcome is chosen.
pub enum Outcome<'a> {
    Sample(&'a mut ChaCha8Rng),
    Forced(u8),
}

impl<T: Real> StreamRegister<T> {
    /// Empty register for a graph with `n` vertices (amplitude vector `[1]`).
    pub fn new(n: usize) -> Self {
        StreamRegister {
            slot_of: vec![None; n],
            vertex_at: Vec::new(),
            amps: vec![Complex::new(T::one(), T::zero())],
        }
    }

    pub fn active(&self) -> usize {
        self.vertex_at.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn slot(&self, v: Vertex) -> Option<usize> {
        self.slot_of[v]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Appends `v` as a new slot in `|+>`.
    pub fn add_plus(&mut self, v: Vertex) {
        debug_assert!(self.slot_of[v].is_none());
        let h = T::FRAC_1_SQRT_2();
        let len = self.amps.len();
        self.amps.extend_from_within(..);
        for a in &mut self.amps {
            *a = a.scale(h);
        }
        debug_assert_eq!(self.amps.len(), 2 * len);
        self.slot_of[v] = Some(self.vertex_at.len());
        self.vertex_at.push(v);
    }

    /// Controlled-Z between two active slots.
    pub fn cz(&mut self, a: usize, b: usize) {
        let both = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & both == both {
                *amp = -*amp;
            }
        }
    }

    pub fn hadamard(&mut self, s: usize) {
        let h = T::FRAC_1_SQRT_2();
        let stride = 1usize << s;
        for i in (0..self.amps.len()).filter(|i| i & stride == 0) {
            let (a, b) = (self.amps[i], self.amps[i | stride]);
            self.amps[i] = (a + b).scale(h);
            self.amps[i | stride] = (a - b).scale(h);
        }
    }

    /// Inverse phase gate: `|1>` picks up a factor of `-i`.
    pub fn s_dagger(&mut self, s: usize) {
        let stride = 1usize << s;
        let minus_i = Complex::new(T::zero(), -T::one());
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & stride != 0 {
                *amp = *amp * minus_i;
            }
        }
    }

    /// Measures `v` in `basis`, removes its slot, and returns the outcome
    /// with its conditional probability. A forced outcome of probability zero
    /// leaves the register unnormalised; the caller must stop there.
    pub fn measure(&mut self, v: Vertex, basis: Basis, outcome: Outcome<'_>) -> (u8, T) {
        let s = self.slot_of[v].expect("measured vertex is active");
        match basis {
            Basis::Z => {}
            Basis::X => self.hadamard(s),
            Basis::Y => {
                self.s_dagger(s);
                self.hadamard(s);
            }
        }
        let stride = 1usize << s;
        let p0 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & stride == 0)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr());
        let total = self.norm_sqr();
        let p0 = p0 / total;
        let p1 = T::one() - p0;
        let bit = match outcome {
            Outcome::Forced(b) => b,
            Outcome::Sample(rng) => {
                let r: f64 = rng.gen();
                let mut b = u8::from(r >= p0.to_f64());
                let chosen = if b == 0 { p0 } else { p1 };
                if chosen < T::norm_tolerance() {
                    b ^= 1;
                }
                b
            }
        };
        let prob = if bit == 0 { p0 } else { p1 };
        let scale = if prob > T::zero() {
            T::one() / (prob * total).sqrt()
        } else {
            T::one()
        };

        // Keep the half with bit `s == bit`; the last slot moves into slot `s`.
        let last = self.vertex_at.len() - 1;
        let half = self.amps.len() / 2;
        let fixed = usize::from(bit) << s;
        let mut next = Vec::with_capacity(half);
        for j in 0..half {
            let i = if s == last {
                j | fixed
            } else {
                let moved = (j >> s) & 1;
                (j & !stride) | fixed | (moved << last)
            };
            next.push(self.amps[i].scale(scale));
        }
        self.amps = next;

        let tail = self.vertex_at.pop().expect("register is non-empty");
        if tail != v {
            self.vertex_at[s] = tail;
            self.slot_of[tail] = Some(s);
        }
        self.slot_of[v] = None;
        (bit, prob)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    /// Outcome bit per vertex, indexed by vertex id.
    pub outcomes: Vec<u8>,
    /// Joint probability of the observed outcomes.
    pub probability: f64,
    pub peak_active: usize,
    pub peak_amplitude_length: usize,
}

pub(crate) fn prepare(
    g: &Graph,
    s: &MeasurementSchedule,
    bases: &BasisAssignment,
) -> Result<(), SimError> {
    bases.check(g.n())?;
    let report = schedule::validate_schedule(g, s)?;
    if !report.is_valid() {
        return Err(SimError::InvalidSchedule(report));
    }
    let cost = schedule::cost(s)?;
    if cost > STREAM_MAX_ACTIVE {
        return Err(SimError::TooLarge {
            what: "schedule cost",
            value: cost,
            max: STREAM_MAX_ACTIVE,
        });
    }
    Ok(())
}

/// Core event loop. `choose` picks the outcome for each measured vertex.
/// Stops early (returning probability zero) when a forced branch is impossible.
fn execute<T: Real>(
    g: &Graph,
    s: &MeasurementSchedule,
    bases: &BasisAssignment,
    mut choose: impl FnMut(Vertex) -> Option<u8>,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<u8>, T, usize), SimError> {
    let mut reg = StreamRegister::<T>::new(g.n());
    let mut initialised = vec![false; g.n()];
    let mut outcomes = vec![0u8; g.n()];
    let mut probability = T::one();
    let mut peak = 0;
    for (index, e) in s.events().iter().enumerate() {
        let v = e.vertex;
        match e.action {
            Action::Init => {
                reg.add_plus(v);
                initialised[v] = true;
                let sv = reg.slot(v).expect("just added");
                for &u in g.adj(v) {
                    if !initialised[u] || u == v {
                        continue;
                    }
                    let su = reg.slot(u).ok_or(SimError::InactiveNeighbour {
                        vertex: v,
                        neighbour: u,
                    })?;
                    reg.cz(su, sv);
                }
                peak = peak.max(reg.active());
            }
            Action::Measure => {
                let outcome = match choose(v) {
                    Some(b) => Outcome::Forced(b),
                    None => Outcome::Sample(&mut *rng),
                };
                let (bit, p) = reg.measure(v, bases.get(v), outcome);
                outcomes[v] = bit;
                probability = probability * p;
                if p <= T::zero() {
                    return Ok((outcomes, T::zero(), peak));
                }
            }
        }
        let norm = reg.norm_sqr().sqrt();
        if (norm - T::one()).abs() > T::norm_tolerance() {
            return Err(SimError::NormDrift {
                event: index,
                norm: norm.to_f64(),
            });
        }
    }
    Ok((outcomes, probability, peak))
}

/// Runs the schedule, sampling each measurement with a seeded generator.
pub fn stream_simulate<T: Real>(
    g: &Graph,
    s: &MeasurementSchedule,
    bases: &BasisAssignment,
    seed: u64,
) -> Result<SimulationReport, SimError> {
    prepare(g, s, bases)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (outcomes, probability, peak) = execute::<T>(g, s, bases, |_| None, &mut rng)?;
    Ok(SimulationReport {
        outcomes,
        probability: probability.to_f64(),
        peak_active: peak,
        peak_amplitude_length: 1usize << peak,
    })
}

/// Exact probability that the streamed execution yields `outcomes`
/// (one bit per vertex), computed by projecting onto each forced branch.
pub fn stream_probability<T: Real>(
    g: &Graph,
    s: &MeasurementSchedule,
    bases: &BasisAssignment,
    outcomes: &[u8],
) -> Result<T, SimError> {
    prepare(g, s, bases)?;
    if outcomes.len() != g.n() {
        return Err(SimError::OutcomeLength {
            expected: g.n(),
            found: outcomes.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (_, p, _) = execute::<T>(g, s, bases, |v| Some(outcomes[v]), &mut rng)?;
    Ok(p)
}
