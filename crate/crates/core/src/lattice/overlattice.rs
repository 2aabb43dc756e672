// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Finite-index integral overlattices.
//!
//! An overlattice `M ⊇ L` of index `m` sits inside `(1/m) L`, so `m M` is a
//! sublattice of `L` containing `m L`. We enumerate `m M` through its unique
//! lower-triangular Hermite normal form `K` (rows are basis vectors, positive
//! pivots, entries left of each pivot reduced modulo that column's pivot) and
//! keep those `K` for which `m L ⊆ rowspan(K)`. The generator matrix of `M` is
//! then `K / m`, which is the canonical basis reported to callers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{GramLattice, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlattice {
    pub index: u64,
    /// Rows are the basis of `M` in coordinates of the basis of `L`.
    pub generators: Vec<Vec<BigRational>>,
    pub lattice: GramLattice,
}

impl Overlattice {
    pub fn is_even(&self) -> bool {
        self.lattice.is_even()
    }
}

/// All integral overlattices of index exactly `m`, even or odd.
pub fn enumerate_integral_overlattices(
    l: &GramLattice,
    m: u64,
) -> Result<Vec<Overlattice>, LatticeError> {
    if m == 0 {
        return Err(LatticeError::PreconditionViolated(
            "overlattice index must be positive".into(),
        ));
    }
    let det = l.det();
    if det.is_zero() {
        return Err(LatticeError::DegenerateLattice);
    }
    let n = l.rank();
    let m_big = BigInt::from(m);
    if n == 0 {
        return Ok(if m == 1 { vec![trivial(l)] } else { Vec::new() });
    }
    // disc(M) = disc(L) / m^2 must be an integer for M to be integral.
    if !det.abs().is_multiple_of(&(&m_big * &m_big)) {
        return Ok(Vec::new());
    }

    let divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let target = m.pow((n - 1) as u32);
    let mut out = Vec::new();
    let mut diag = Vec::with_capacity(n);
    for_each_diagonal(&divisors, n, target, &mut diag, &mut |pivots| {
        for_each_hnf(pivots, &mut |k| {
            if contains_scaled_identity(k, &m_big) {
                if let Some(o) = overlattice_from_hnf(l, k, m) {
                    out.push(o);
                }
            }
        });
    });
    Ok(out)
}

/// Even integral overlattices of index exactly `m`.
pub fn enumerate_even_overlattices(
    l: &GramLattice,
    m: u64,
) -> Result<Vec<Overlattice>, LatticeError> {
    if !l.is_even() {
        return Err(LatticeError::NotEven);
    }
    Ok(enumerate_integral_overlattices(l, m)?
        .into_iter()
        .filter(Overlattice::is_even)
        .collect())
}

fn trivial(l: &GramLattice) -> Overlattice {
    Overlattice {
        index: 1,
        generators: Vec::new(),
        lattice: l.clone(),
    }
}

fn for_each_diagonal(
    divisors: &[u64],
    n: usize,
    remaining: u64,
    acc: &mut Vec<u64>,
    f: &mut dyn FnMut(&[u64]),
) {
    if acc.len() == n {
        if remaining == 1 {
            f(acc);
        }
        return;
    }
    for &d in divisors {
        if remaining.is_multiple_of(d) {
            acc.push(d);
            for_each_diagonal(divisors, n, remaining / d, acc, f);
            acc.pop();
        }
    }
}

fn for_each_hnf(pivots: &[u64], f: &mut dyn FnMut(&IntMatrix)) {
    let n = pivots.len();
    let mut k: IntMatrix = vec![vec![BigInt::zero(); n]; n];
    for (i, &p) in pivots.iter().enumerate() {
        k[i][i] = BigInt::from(p);
    }
    // Free slots are (i, j) with j < i; entry ranges over 0..pivot_j.
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    fill_slots(&slots, 0, pivots, &mut k, f);
}

fn fill_slots(
    slots: &[(usize, usize)],
    pos: usize,
    pivots: &[u64],
    k: &mut IntMatrix,
    f: &mut dyn FnMut(&IntMatrix),
) {
    if pos == slots.len() {
        f(k);
        return;
    }
    let (i, j) = slots[pos];
    for x in 0..pivots[j] {
        k[i][j] = BigInt::from(x);
        fill_slots(slots, pos + 1, pivots, k, f);
    }
    k[i][j] = BigInt::zero();
}

/// Whether `m e_i` lies in the row span of the lower-triangular `k` for all `i`.
fn contains_scaled_identity(k: &IntMatrix, m: &BigInt) -> bool {
    let n = k.len();
    (0..n).all(|t| {
        // Solve x K = m e_t by back substitution over columns n-1, ..., 0.
        let mut x = vec![BigInt::zero(); n];
        for j in (0..n).rev() {
            let target = if j == t { m.clone() } else { BigInt::zero() };
            let partial: BigInt = ((j + 1)..n).map(|i| &x[i] * &k[i][j]).sum();
            let (q, r) = (target - partial).div_rem(&k[j][j]);
            if !r.is_zero() {
                return false;
            }
            x[j] = q;
        }
        true
    })
}

fn overlattice_from_hnf(l: &GramLattice, k: &IntMatrix, m: u64) -> Option<Overlattice> {
    let n = k.len();
    let m_big = BigInt::from(m);
    let generators: Vec<Vec<BigRational>> = k
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::new(x.clone(), m_big.clone()))
                .collect()
        })
        .collect();
    let mut gram = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = l.pairing_rational(&generators[i], &generators[j]);
            if !p.denom().is_one() {
                return None;
            }
            gram[i][j] = p.to_integer();
            gram[j][i] = gram[i][j].clone();
        }
    }
    let lattice = GramLattice::new(gram).ok()?;
    debug_assert_eq!(lattice.det().abs() * &m_big * &m_big, l.det().abs());
    debug_assert!(generators
        .iter()
        .enumerate()
        .all(|(i, r)| r[i].is_positive()));
    Some(Overlattice {
        index: m,
        generators,
        lattice,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{reduce_binary, BinaryEvenForm};

    fn lat(rows: [[i64; 2]; 2]) -> GramLattice {
        GramLattice::from_i64(&rows).unwrap()
    }

    #[test]
    fn a2_has_no_index_two_overlattice() {
        assert!(enumerate_even_overlattices(&lat([[2, 1], [1, 2]]), 2)
            .unwrap()
            .is_empty());
        assert!(enumerate_integral_overlattices(&lat([[2, 1], [1, 2]]), 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn a1_plus_a1_only_odd_overlattice() {
        let l = lat([[2, 0], [0, 2]]);
        assert!(enumerate_even_overlattices(&l, 2).unwrap().is_empty());
        let all = enumerate_integral_overlattices(&l, 2).unwrap();
        assert_eq!(all.len(), 1);
        assert!(!all[0].is_even());
        assert_eq!(all[0].lattice.disc(), BigInt::one());
    }

    #[test]
    fn a1_2_squared_has_one_even_overlattice() {
        let found = enumerate_even_overlattices(&lat([[4, 0], [0, 4]]), 2).unwrap();
        assert_eq!(found.len(), 1);
        let red = reduce_binary(&BinaryEvenForm::from_lattice(&found[0].lattice).unwrap()).unwrap();
        assert_eq!(red, BinaryEvenForm::new(1, 0, 1));
        // Canonical generator matrix: rows (1, 0) and (1/2, 1/2).
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(found[0].generators[1], vec![half.clone(), half]);
    }

    #[test]
    fn odd_input_is_rejected() {
        assert_eq!(
            enumerate_even_overlattices(&GramLattice::diagonal(&[1, 4]), 2),
            Err(LatticeError::NotEven)
        );
        assert_eq!(
            enumerate_integral_overlattices(&lat([[2, 2], [2, 2]]), 2),
            Err(LatticeError::DegenerateLattice)
        );
    }

    #[test]
    fn index_one_is_the_lattice_itself() {
        let l = lat([[2, 1], [1, 2]]);
        let found = enumerate_integral_overlattices(&l, 1).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].lattice, l);
    }

    #[test]
    fn rank_three_and_four() {
        // diag(4,4,4): the glue vector (1/2)x has norm = #nonzero coordinates,
        // so the even choices are the three with exactly two nonzero entries.
        let l = GramLattice::diagonal(&[4, 4, 4]);
        let even = enumerate_even_overlattices(&l, 2).unwrap();
        assert_eq!(even.len(), 3);
        for o in &even {
            assert_eq!(o.lattice.det() * 4, l.det());
        }
        // A1^4: only (1/2)(1,1,1,1) has even norm; the result is D4.
        let a1_4 = GramLattice::diagonal(&[2, 2, 2, 2]);
        let even = enumerate_even_overlattices(&a1_4, 2).unwrap();
        assert_eq!(even.len(), 1);
        assert_eq!(even[0].lattice.disc(), BigInt::from(4));
    }
}
