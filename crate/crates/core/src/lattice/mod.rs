// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Integral lattices presented by Gram matrices.
//!
//! Everything here is exact: entries are [`BigInt`], rational intermediate
//! values are [`BigRational`], and no operation touches floating point.

mod binary;
mod overlattice;
mod roots;
mod snf;

pub use binary::{
    enumerate_even_posdef_binary, is_isometric_binary, reduce_binary, BinaryEvenForm,
};
pub use overlattice::{enumerate_even_overlattices, enumerate_integral_overlattices, Overlattice};
pub use roots::RootSystem;
pub use snf::{smith_normal_form, SmithForm};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square (row {row} has {len} entries, expected {expected})")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("Gram matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("lattice is degenerate (determinant 0)")]
    DegenerateLattice,
    #[error("Gram entry at ({i}, {j}) is not divisible by {n}")]
    NotDivisible { i: usize, j: usize, n: BigInt },
    #[error("binary form is not positive definite")]
    NotPositiveDefinite,
    #[error("lattice is not even")]
    NotEven,
    #[error("{sub} / {sup} is not the square of an integer")]
    NotPerfectSquareRatio { sub: BigInt, sup: BigInt },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid integer literal {0:?}")]
    InvalidEntry(String),
}

/// An integral lattice given by its Gram matrix in a fixed ordered basis.
///
/// Rank 0 is allowed and behaves as the zero lattice (determinant 1), which
/// makes it the identity for [`GramLattice::direct_sum`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GramLattice {
    gram: IntMatrix,
}

impl GramLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        let n = gram.len();
        for (row, r) in gram.iter().enumerate() {
            if r.len() != n {
                return Err(LatticeError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { gram })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self { gram: Vec::new() }
    }

    /// Diagonal lattice `<e_1> + ... + <e_k>`.
    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        for (i, &e) in entries.iter().enumerate() {
            gram[i][i] = BigInt::from(e);
        }
        Self { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.gram[i][j]
    }

    /// Signed determinant of the Gram matrix.
    pub fn det(&self) -> BigInt {
        determinant(&self.gram)
    }

    /// `|det|`, the discriminant used throughout the crate.
    pub fn disc(&self) -> BigInt {
        self.det().abs()
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().is_zero()
    }

    /// Over an integral Gram basis, `x.x` is even for every `x` iff the
    /// diagonal is even, since off-diagonal terms enter as `2 x_i x_j g_ij`.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i].is_even())
    }

    /// Positive definiteness by Sylvester's criterion on leading minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.rank()).all(|k| {
            let minor: IntMatrix = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&minor).is_positive()
        })
    }

    /// `L(n)`: every pairing multiplied by `n`.
    pub fn rescale(&self, n: &BigInt) -> Self {
        Self {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| x * n).collect())
                .collect(),
        }
    }

    /// Inverse of [`rescale`](Self::rescale); fails unless every entry is divisible by `n`.
    pub fn unscale(&self, n: &BigInt) -> Result<Self, LatticeError> {
        if n.is_zero() {
            return Err(LatticeError::PreconditionViolated(
                "cannot unscale by 0".into(),
            ));
        }
        let mut gram = self.gram.clone();
        for (i, row) in gram.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let (q, r) = x.div_rem(n);
                if !r.is_zero() {
                    return Err(LatticeError::NotDivisible { i, j, n: n.clone() });
                }
                *x = q;
            }
        }
        Ok(Self { gram })
    }

    pub fn direct_sum(&self, other: &GramLattice) -> Self {
        let (n1, n2) = (self.rank(), other.rank());
        let mut gram = vec![vec![BigInt::zero(); n1 + n2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..n1 {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                gram[n1 + i][n1 + j] = other.gram[i][j].clone();
            }
        }
        Self { gram }
    }

    pub fn negate(&self) -> Self {
        Self {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Invariant factors of `L*/L`, the cokernel of the Gram matrix.
    pub fn discriminant_group(&self) -> Result<DiscGroupShape, LatticeError> {
        if self.is_degenerate() {
            return Err(LatticeError::DegenerateLattice);
        }
        let snf = smith_normal_form(&self.gram);
        let invariant_factors = snf
            .diagonal()
            .into_iter()
            .map(|d| d.abs())
            .filter(|d| d > &BigInt::one())
            .collect();
        Ok(DiscGroupShape { invariant_factors })
    }

    /// `x^T G y` for rational coordinate vectors.
    pub fn pairing_rational(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.rank() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.rank() {
                acc += &x[i] * &y[j] * BigRational::from_integer(self.gram[i][j].clone());
            }
        }
        acc
    }
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.gram.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for GramLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(serializer)
    }
}

/// Gram entries on input may be decimal strings or plain JSON integers.
#[derive(Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Str(String),
    Int(i64),
}

impl EntryRepr {
    fn to_bigint(&self) -> Result<BigInt, LatticeError> {
        match self {
            EntryRepr::Int(x) => Ok(BigInt::from(*x)),
            EntryRepr::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| LatticeError::InvalidEntry(s.clone())),
        }
    }
}

impl<'de> Deserialize<'de> for GramLattice {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<EntryRepr>> = Vec::deserialize(deserializer)?;
        let gram = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(EntryRepr::to_bigint)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<IntMatrix, _>>()
            .map_err(de::Error::custom)?;
        GramLattice::new(gram).map_err(de::Error::custom)
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_k` (all `> 1`) of a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscGroupShape {
    #[serde(serialize_with = "serialize_bigints")]
    pub invariant_factors: Vec<BigInt>,
}

impl DiscGroupShape {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

fn serialize_bigints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `sqrt(d_sub / d_sup)`: the index `[M : L]` of a finite-index sublattice
/// `L` of discriminant `d_sub` in `M` of discriminant `d_sup`.
pub fn sublattice_index_from_discs(d_sub: &BigInt, d_sup: &BigInt) -> Result<BigInt, LatticeError> {
    let fail = || LatticeError::NotPerfectSquareRatio {
        sub: d_sub.clone(),
        sup: d_sup.clone(),
    };
    if !d_sub.is_positive() || !d_sup.is_positive() {
        return Err(fail());
    }
    let (ratio, rem) = d_sub.div_rem(d_sup);
    if !rem.is_zero() {
        return Err(fail());
    }
    let root = ratio.sqrt();
    if &root * &root != ratio {
        return Err(fail());
    }
    Ok(root)
}

pub(crate) fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn lat(rows: &[[i64; 2]]) -> GramLattice {
        GramLattice::from_i64(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(lat(&[[2, 1], [1, 2]]).det(), big(3));
        assert_eq!(lat(&[[4, 2], [2, 4]]).det(), big(12));
        assert_eq!(GramLattice::diagonal(&[2]).det(), big(2));
        assert_eq!(GramLattice::empty().det(), big(1));
        assert_eq!(lat(&[[2, 2], [2, 2]]).det(), big(0));
        // needs a pivot swap
        let m = GramLattice::from_i64(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(m.det(), big(-1));
    }

    #[test]
    fn rejects_asymmetric_and_ragged() {
        assert_eq!(
            GramLattice::from_i64(&[[2, 1], [0, 2]]),
            Err(LatticeError::NotSymmetric { i: 0, j: 1 })
        );
        assert!(matches!(
            GramLattice::from_i64(&[vec![2, 1], vec![1]]),
            Err(LatticeError::NotSquare { .. })
        ));
    }

    #[test]
    fn discriminant_groups() {
        assert_eq!(
            lat(&[[2, 1], [1, 2]])
                .discriminant_group()
                .unwrap()
                .invariant_factors,
            vec![big(3)]
        );
        assert_eq!(
            lat(&[[2, 0], [0, 2]])
                .discriminant_group()
                .unwrap()
                .invariant_factors,
            vec![big(2), big(2)]
        );
        assert!(lat(&[[0, 1], [1, 0]])
            .discriminant_group()
            .unwrap()
            .is_trivial());
        assert_eq!(
            lat(&[[4, 2], [2, 4]])
                .discriminant_group()
                .unwrap()
                .invariant_factors,
            vec![big(2), big(6)]
        );
        assert_eq!(
            lat(&[[1, 1], [1, 1]]).discriminant_group(),
            Err(LatticeError::DegenerateLattice)
        );
    }

    #[test]
    fn evenness() {
        assert!(lat(&[[2, 1], [1, 2]]).is_even());
        assert!(!lat(&[[1, 0], [0, 1]]).is_even());
        // Parity of x.x over all classes of Z^2 / 2Z^2 agrees with the diagonal test.
        let l = lat(&[[4, 2], [2, 2]]);
        let all_even = [(0i64, 0i64), (0, 1), (1, 0), (1, 1)]
            .iter()
            .all(|&(x, y)| {
                let n = 4 * x * x + 2 * 2 * x * y + 2 * y * y;
                n % 2 == 0
            });
        assert_eq!(l.is_even(), all_even);
        assert!(l.is_even());
    }

    #[test]
    fn rescale_and_unscale() {
        let a2 = lat(&[[2, 1], [1, 2]]);
        assert_eq!(a2.rescale(&big(2)), lat(&[[4, 2], [2, 4]]));
        assert_eq!(lat(&[[4, 2], [2, 4]]).unscale(&big(2)).unwrap(), a2);
        assert_eq!(
            lat(&[[4, 0], [0, 4]]).unscale(&big(2)).unwrap(),
            lat(&[[2, 0], [0, 2]])
        );
        assert_eq!(
            lat(&[[4, 2], [2, 3]]).unscale(&big(2)),
            Err(LatticeError::NotDivisible {
                i: 1,
                j: 1,
                n: big(2)
            })
        );
    }

    #[test]
    fn direct_sums() {
        let a1 = GramLattice::diagonal(&[2]);
        assert_eq!(a1.direct_sum(&a1), lat(&[[2, 0], [0, 2]]));
        assert_eq!(a1.direct_sum(&GramLattice::empty()), a1);
        assert_eq!(GramLattice::empty().direct_sum(&a1), a1);
        let a1_2 = a1.rescale(&big(2));
        assert_eq!(a1_2.direct_sum(&a1_2), lat(&[[4, 0], [0, 4]]));
        let odd = GramLattice::diagonal(&[1]);
        assert!(!a1.direct_sum(&odd).is_even());
    }

    #[test]
    fn index_from_discs() {
        assert_eq!(
            sublattice_index_from_discs(&big(48), &big(3)).unwrap(),
            big(4)
        );
        assert_eq!(
            sublattice_index_from_discs(&big(7), &big(7)).unwrap(),
            big(1)
        );
        assert_eq!(
            sublattice_index_from_discs(&big(64), &big(4)).unwrap(),
            big(4)
        );
        assert!(matches!(
            sublattice_index_from_discs(&big(12), &big(2)),
            Err(LatticeError::NotPerfectSquareRatio { .. })
        ));
        assert!(sublattice_index_from_discs(&big(10), &big(3)).is_err());
    }

    #[test]
    fn json_round_trip_uses_strings() {
        let l = lat(&[[4, 2], [2, 4]]);
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"[["4","2"],["2","4"]]"#);
        let back: GramLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        let ints: GramLattice = serde_json::from_str("[[4,2],[2,4]]").unwrap();
        assert_eq!(ints, l);
        let huge: GramLattice =
            serde_json::from_str(r#"[["123456789012345678901234567890"]]"#).unwrap();
        assert_eq!(huge.det().to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<GramLattice>(r#"[["1","2"],["3","4"]]"#).is_err());
    }

    #[test]
    fn positive_definiteness() {
        assert!(lat(&[[2, 1], [1, 2]]).is_positive_definite());
        assert!(!lat(&[[0, 1], [1, 0]]).is_positive_definite());
        assert!(!lat(&[[2, 3], [3, 2]]).is_positive_definite());
    }
}
