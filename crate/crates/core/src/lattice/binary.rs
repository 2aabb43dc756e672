// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Even positive definite binary lattices `[[2a, b], [b, 2c]]`.
//!
//! Such a lattice is the same thing as the integral binary quadratic form
//! `a x^2 + b x y + c y^2` (half the norm), so Gauss reduction applies
//! directly. Lattice isometry allows orientation-reversing changes of basis,
//! which identifies `(a, b, c)` with `(a, -b, c)`; reduced representatives
//! therefore satisfy `0 <= b <= a <= c`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::{GramLattice, LatticeError};

/// Serialized as its Gram matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryEvenForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BinaryEvenForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    /// Reads `[[2a, b], [b, 2c]]`; the lattice must be rank 2 and even.
    pub fn from_lattice(l: &GramLattice) -> Result<Self, LatticeError> {
        if l.rank() != 2 {
            return Err(LatticeError::PreconditionViolated(format!(
                "binary form needs rank 2, got rank {}",
                l.rank()
            )));
        }
        if !l.is_even() {
            return Err(LatticeError::NotEven);
        }
        Ok(Self {
            a: l.entry(0, 0) / 2,
            b: l.entry(0, 1).clone(),
            c: l.entry(1, 1) / 2,
        })
    }

    pub fn to_lattice(&self) -> GramLattice {
        GramLattice::new(vec![
            vec![&self.a * 2, self.b.clone()],
            vec![self.b.clone(), &self.c * 2],
        ])
        .expect("binary Gram matrix is symmetric by construction")
    }

    /// `4ac - b^2`, equal to the Gram determinant.
    pub fn discriminant(&self) -> BigInt {
        &self.a * &self.c * 4 - &self.b * &self.b
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.discriminant().is_positive()
    }

    pub fn is_reduced(&self) -> bool {
        !self.b.is_negative() && self.b <= self.a && self.a <= self.c
    }
}

impl fmt::Debug for BinaryEvenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_lattice())
    }
}

impl fmt::Display for BinaryEvenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_lattice())
    }
}

impl Serialize for BinaryEvenForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_lattice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryEvenForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let l = GramLattice::deserialize(d)?;
        BinaryEvenForm::from_lattice(&l).map_err(de::Error::custom)
    }
}

impl PartialOrd for BinaryEvenForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinaryEvenForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.a, &self.b, &self.c).cmp(&(&other.a, &other.b, &other.c))
    }
}

/// Gauss reduction to the unique representative with `0 <= b <= a <= c`.
pub fn reduce_binary(form: &BinaryEvenForm) -> Result<BinaryEvenForm, LatticeError> {
    if !form.is_positive_definite() {
        return Err(LatticeError::NotPositiveDefinite);
    }
    let BinaryEvenForm {
        mut a,
        mut b,
        mut c,
    } = form.clone();
    loop {
        // x -> x + k y brings b into (-a, a].
        if b.abs() > a || b == -&a {
            let two_a: BigInt = &a * 2;
            let k = (&a - &b).div_floor(&two_a);
            c = &a * &k * &k + &b * &k + &c;
            b += &two_a * &k;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    Ok(BinaryEvenForm { a, b: b.abs(), c })
}

/// Every reduced even positive definite binary form with `4ac - b^2 = d`,
/// sorted by `(a, b, c)`.
pub fn enumerate_even_posdef_binary(d: u64) -> Vec<BinaryEvenForm> {
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    // Reduced forms have 4ac - b^2 >= 4a^2 - a^2, so 3a^2 <= d.
    let mut a: u64 = 1;
    while 3 * a * a <= d {
        for b in 0..=a {
            let num = d + b * b;
            if !num.is_multiple_of(4 * a) {
                continue;
            }
            let c = num / (4 * a);
            if c >= a {
                out.push(BinaryEvenForm::new(a, b, c));
            }
        }
        a += 1;
    }
    out.sort();
    out
}

fn binary_precondition(l: &GramLattice) -> Result<BinaryEvenForm, LatticeError> {
    if l.rank() != 2 || !l.is_even() || !l.is_positive_definite() {
        return Err(LatticeError::PreconditionViolated(format!(
            "expected an even positive definite rank-2 lattice, got {l}"
        )));
    }
    BinaryEvenForm::from_lattice(l)
}

pub fn is_isometric_binary(l1: &GramLattice, l2: &GramLattice) -> Result<bool, LatticeError> {
    let f1 = reduce_binary(&binary_precondition(l1)?)?;
    let f2 = reduce_binary(&binary_precondition(l2)?)?;
    Ok(f1 == f2)
}

impl BinaryEvenForm {
    pub fn reduced(&self) -> Result<BinaryEvenForm, LatticeError> {
        reduce_binary(self)
    }
}
