//! Reference simulator holding the whole graph state.
//!
//! The state is written down directly: the amplitude of basis string `x` is
//! `(-1)^(edges inside x) / sqrt(2^n)`. Qubits are then measured in ascending
//! id by contracting each with the bra of its basis eigenvector, so no gate
//! is ever applied here.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Basis, BasisAssignment, Real, SimError, MONOLITHIC_MAX_N};
use crate::graph::Graph;

/// Eigenvector of `basis` for `outcome`, as `(<0|phi>, <1|phi>)`.
fn eigenvector<T: Real>(basis: Basis, outcome: u8) -> [Complex<T>; 2] {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let h = T::FRAC_1_SQRT_2();
    let sign = if outcome == 0 { T::one() } else { -T::one() };
    match basis {
        Basis::Z if outcome == 0 => [one, zero],
        Basis::Z => [zero, one],
        Basis::X => [
            Complex::new(h, T::zero()),
            Complex::new(sign * h, T::zero()),
        ],
        Basis::Y => [
            Complex::new(h, T::zero()),
            Complex::new(T::zero(), sign * h),
        ],
    }
}

/// Full graph state over `n` qubits; qubit `v` is bit `v` of the index.
pub fn graph_state<T: Real>(g: &Graph) -> Vec<Complex<T>> {
    let n = g.n();
    let amp = T::one() / T::from_f64((1u64 << n) as f64).sqrt();
    let edges: Vec<usize> = g.edges().map(|(u, v)| (1 << u) | (1 << v)).collect();
    (0..1usize << n)
        .map(|x| {
            let inside = edges.iter().filter(|&&e| x & e == e).count();
            let sign = if inside % 2 == 0 { amp } else { -amp };
            Complex::new(sign, T::zero())
        })
        .collect()
}

/// Contracts the lowest qubit with `<phi|`.
fn contract_lowest<T: Real>(state: &[Complex<T>], phi: [Complex<T>; 2]) -> Vec<Complex<T>> {
    let (c0, c1) = (phi[0].conj(), phi[1].conj());
    state
        .chunks_exact(2)
        .map(|pair| c0 * pair[0] + c1 * pair[1])
        .collect()
}

fn norm_sqr<T: Real>(state: &[Complex<T>]) -> T {
    state.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
}

/// Measures every qubit of the full graph state in ascending id order.
///
/// With `forced` outcomes the exact joint probability of those outcomes is
/// returned (possibly 0). Otherwise outcomes are sampled from `seed`.
pub fn monolithic_simulate<T: Real>(
    g: &Graph,
    bases: &BasisAssignment,
    forced: Option<&[u8]>,
    seed: u64,
) -> Result<(f64, Vec<u8>), SimError> {
    let n = g.n();
    if n > MONOLITHIC_MAX_N {
        return Err(SimError::TooLarge {
            what: "vertex count",
            value: n,
            max: MONOLITHIC_MAX_N,
        });
    }
    bases.check(n)?;
    if let Some(f) = forced {
        if f.len() != n {
            return Err(SimError::OutcomeLength {
                expected: n,
                found: f.len(),
            });
        }
    }
    let mut state = graph_state::<T>(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::with_capacity(n);
    for v in 0..n {
        let basis = bases.get(v);
        match forced {
            Some(f) => {
                // Unnormalised: the final scalar's squared modulus is the joint probability.
                state = contract_lowest(&state, eigenvector(basis, f[v]));
                outcomes.push(f[v]);
            }
            None => {
                let branch0 = contract_lowest(&state, eigenvector(basis, 0));
                let p0 = norm_sqr(&branch0) / norm_sqr(&state);
                let mut bit = u8::from(rng.gen::<f64>() >= p0.to_f64());
                let chosen = if bit == 0 { p0 } else { T::one() - p0 };
                if chosen < T::norm_tolerance() {
                    bit ^= 1;
                }
                let next = if bit == 0 {
                    branch0
                } else {
                    contract_lowest(&state, eigenvector(basis, 1))
                };
                let norm = norm_sqr(&next).sqrt();
                state = next.into_iter().map(|a| a.unscale(norm)).collect();
                outcomes.push(bit);
            }
        }
    }
    if forced.is_none() {
        // Re-run forced to report the joint probability of the sample.
        return monolithic_simulate::<T>(g, bases, Some(&outcomes), seed);
    }
    let probability = norm_sqr(&state).to_f64();
    Ok((probability, outcomes))
}
