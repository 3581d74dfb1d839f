//! Named graph families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};

/// A generator recipe for one of the supported families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyDescriptor {
    Complete {
        n: usize,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// `m` rows by `n` columns, ids row-major.
    Grid {
        m: usize,
        n: usize,
    },
    /// A path of `spine` vertices, each carrying `legs` pendant leaves.
    Caterpillar {
        spine: usize,
        legs: usize,
    },
    /// Erdős–Rényi `G(n, p)` from a seeded ChaCha8 stream.
    Random {
        n: usize,
        p: f64,
        seed: u64,
    },
}

impl FamilyDescriptor {
    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidParameters(msg));
        match *self {
            FamilyDescriptor::Cycle { n } if n < 3 => bad(format!("cycle needs n >= 3, got {n}")),
            FamilyDescriptor::Grid { m, n } if m == 0 || n == 0 => {
                bad(format!("grid needs m >= 1 and n >= 1, got {m}x{n}"))
            }
            FamilyDescriptor::Random { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("edge probability must lie in [0, 1], got {p}"))
            }
            _ => Ok(()),
        }
    }

    /// Short human-readable name, e.g. `grid(3,4)`.
    pub fn name(&self) -> String {
        match *self {
            FamilyDescriptor::Complete { n } => format!("complete({n})"),
            FamilyDescriptor::Path { n } => format!("path({n})"),
            FamilyDescriptor::Cycle { n } => format!("cycle({n})"),
            FamilyDescriptor::Grid { m, n } => format!("grid({m},{n})"),
            FamilyDescriptor::Caterpillar { spine, legs } => format!("caterpillar({spine},{legs})"),
            FamilyDescriptor::Random { n, p, seed } => format!("random({n},{p},{seed})"),
        }
    }

    pub fn generate(&self) -> Result<Graph, GraphError> {
        self.validate()?;
        let edges: Vec<(usize, usize)> = match *self {
            FamilyDescriptor::Complete { n } => (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect(),
            FamilyDescriptor::Path { n } => (1..n).map(|v| (v - 1, v)).collect(),
            FamilyDescriptor::Cycle { n } => (0..n).map(|v| (v, (v + 1) % n)).collect(),
            FamilyDescriptor::Grid { m, n } => {
                let id = |r: usize, c: usize| r * n + c;
                let mut e = Vec::with_capacity(m * (n - 1) + n * (m - 1));
                for r in 0..m {
                    for c in 0..n {
                        if c + 1 < n {
                            e.push((id(r, c), id(r, c + 1)));
                        }
                        if r + 1 < m {
                            e.push((id(r, c), id(r + 1, c)));
                        }
                    }
                }
                e
            }
            FamilyDescriptor::Caterpillar { spine, legs } => {
                let mut e: Vec<_> = (1..spine).map(|v| (v - 1, v)).collect();
                for s in 0..spine {
                    for j in 0..legs {
                        e.push((s, spine + s * legs + j));
                    }
                }
                e
            }
            FamilyDescriptor::Random { n, p, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut e = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen::<f64>() < p {
                            e.push((u, v));
                        }
                    }
                }
                e
            }
        };
        Graph::from_edges(self.vertex_count(), edges)
    }

    fn vertex_count(&self) -> usize {
        match *self {
            FamilyDescriptor::Complete { n }
            | FamilyDescriptor::Path { n }
            | FamilyDescriptor::Cycle { n }
            | FamilyDescriptor::Random { n, .. } => n,
            FamilyDescriptor::Grid { m, n } => m * n,
            FamilyDescriptor::Caterpillar { spine, legs } => spine * (legs + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_examples() {
        let k5 = FamilyDescriptor::Complete { n: 5 }.generate().unwrap();
        assert_eq!((k5.n(), k5.edge_count()), (5, 10));
        let g = FamilyDescriptor::Grid { m: 3, n: 4 }.generate().unwrap();
        assert_eq!((g.n(), g.edge_count()), (12, 17));
        let p1 = FamilyDescriptor::Path { n: 1 }.generate().unwrap();
        assert_eq!((p1.n(), p1.edge_count()), (1, 0));
    }

    #[test]
    fn invalid_parameters() {
        assert!(FamilyDescriptor::Cycle { n: 2 }.generate().is_err());
        assert!(FamilyDescriptor::Grid { m: 0, n: 3 }.generate().is_err());
        assert!(FamilyDescriptor::Random {
            n: 3,
            p: 1.5,
            seed: 0
        }
        .generate()
        .is_err());
    }

    #[test]
    fn caterpillar_shape() {
        let g = FamilyDescriptor::Caterpillar { spine: 6, legs: 2 }
            .generate()
            .unwrap();
        assert_eq!(g.n(), 18);
        assert_eq!(g.edge_count(), 5 + 12);
        assert!(g.is_connected());
        for leaf in 6..18 {
            assert_eq!(g.degree(leaf), 1);
        }
    }

    #[test]
    fn random_is_seeded() {
        let a = FamilyDescriptor::Random {
            n: 20,
            p: 0.3,
            seed: 7,
        }
        .generate()
        .unwrap();
        let b = FamilyDescriptor::Random {
            n: 20,
            p: 0.3,
            seed: 7,
        }
        .generate()
        .unwrap();
        let c = FamilyDescriptor::Random {
            n: 20,
            p: 0.3,
            seed: 8,
        }
        .generate()
        .unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let full = FamilyDescriptor::Random {
            n: 6,
            p: 1.0,
            seed: 1,
        }
        .generate()
        .unwrap();
        assert_eq!(full.edge_count(), 15);
        let none = FamilyDescriptor::Random {
            n: 6,
            p: 0.0,
            seed: 1,
        }
        .generate()
        .unwrap();
        assert_eq!(none.edge_count(), 0);
    }

    proptest! {
        #[test]
        fn counts_match_formulas(m in 1usize..8, n in 1usize..8, k in 3usize..12) {
            let c = FamilyDescriptor::Complete { n }.generate().unwrap();
            prop_assert_eq!(c.edge_count(), n * (n - 1) / 2);
            let g = FamilyDescriptor::Grid { m, n }.generate().unwrap();
            prop_assert_eq!(g.n(), m * n);
            prop_assert_eq!(g.edge_count(), m * (n - 1) + n * (m - 1));
            let p = FamilyDescriptor::Path { n }.generate().unwrap();
            prop_assert_eq!(p.edge_count(), n - 1);
            let cy = FamilyDescriptor::Cycle { n: k }.generate().unwrap();
            prop_assert_eq!(cy.edge_count(), k);
            let cat = FamilyDescriptor::Caterpillar { spine: m, legs: n }.generate().unwrap();
            prop_assert_eq!(cat.edge_count(), m - 1 + m * n);
        }
    }
}
