// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::GramLattice;

/// Simply-laced root systems, named by type and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootSystem {
    A(u32),
    D(u32),
    E(u32),
}

impl RootSystem {
    pub fn rank(&self) -> u32 {
        match *self {
            RootSystem::A(n) | RootSystem::D(n) | RootSystem::E(n) => n,
        }
    }

    /// Edges of the Dynkin diagram on nodes `0..rank`.
    fn edges(&self) -> Vec<(usize, usize)> {
        let path = |len: usize| (1..len).map(|i| (i - 1, i)).collect::<Vec<_>>();
        match *self {
            RootSystem::A(n) => path(n as usize),
            RootSystem::D(n) => {
                assert!(n >= 4, "D_n needs n >= 4");
                let n = n as usize;
                let mut e = path(n - 1);
                e.push((n - 3, n - 1));
                e
            }
            RootSystem::E(n) => {
                assert!((6..=8).contains(&n), "E_n needs 6 <= n <= 8");
                let n = n as usize;
                let mut e = path(n - 1);
                e.push((2, n - 1));
                e
            }
        }
    }

    /// Positive definite Cartan matrix (2 on the diagonal, -1 on edges).
    pub fn cartan(&self) -> GramLattice {
        let n = self.rank() as usize;
        let mut g = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = BigInt::from(2);
        }
        for (i, j) in self.edges() {
            g[i][j] = BigInt::from(-1);
            g[j][i] = BigInt::from(-1);
        }
        GramLattice::new(g).expect("Cartan matrix is symmetric")
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystem::A(n) => write!(f, "A{n}"),
            RootSystem::D(n) => write!(f, "D{n}"),
            RootSystem::E(n) => write!(f, "E{n}"),
        }
    }
}
