use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SimError;

/// Single-qubit Pauli measurement basis.
///
/// Y is measured by applying S-dagger, then H, then reading the computational
/// basis, so outcome 0 corresponds to `(|0> + i|1>)/sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl TryFrom<char> for Basis {
    type Error = SimError;

    fn try_from(c: char) -> Result<Self, SimError> {
        match c.to_ascii_uppercase() {
            'Z' => Ok(Basis::Z),
            'X' => Ok(Basis::X),
            'Y' => Ok(Basis::Y),
            _ => Err(SimError::UnknownBasis(c)),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Z => "Z",
            Basis::X => "X",
            Basis::Y => "Y",
        })
    }
}

/// One basis per vertex, indexed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisAssignment(Vec<Basis>);

impl BasisAssignment {
    pub fn new(bases: Vec<Basis>) -> Self {
        BasisAssignment(bases)
    }

    pub fn uniform(basis: Basis, n: usize) -> Self {
        BasisAssignment(vec![basis; n])
    }

    /// Parses a string over `{Z, X, Y}` with one letter per vertex. A single
    /// letter is broadcast to all `n` vertices.
    pub fn parse(text: &str, n: usize) -> Result<Self, SimError> {
        let bases = text
            .trim()
            .chars()
            .map(Basis::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        match bases.len() {
            1 if n != 1 => Ok(Self::uniform(bases[0], n)),
            len if len == n => Ok(BasisAssignment(bases)),
            len => Err(SimError::BasisLength {
                expected: n,
                found: len,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> Basis {
        self.0[v]
    }

    pub(crate) fn check(&self, n: usize) -> Result<(), SimError> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(SimError::BasisLength {
                expected: n,
                found: self.0.len(),
            })
        }
    }
}

impl FromStr for BasisAssignment {
    type Err = SimError;

    /// Parses without a broadcast: the string length fixes the vertex count.
    fn from_str(s: &str) -> Result<Self, SimError> {
        let n = s.trim().chars().count();
        BasisAssignment::parse(s, n)
    }
}

impl fmt::Display for BasisAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{b}"))
    }
}
