// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Overlattices of rank-2 lattices by direct subgroup search.
//!
//! An index-`m` overlattice `M` of `L = Z^2` (Gram `g`) is `L + H` for a
//! subgroup `H` of `(1/m) Z^2 / Z^2` of order `m`. Elements of `H` are
//! stored by their numerators `(x, y)` with `0 <= x, y < m`. Every subgroup
//! of a rank-2 group is generated by two elements, so closing all pairs
//! finds every candidate.

use std::collections::BTreeSet;

pub type Gram2 = [[i64; 2]; 2];
pub type Subgroup = BTreeSet<(i64, i64)>;

fn close(v: (i64, i64), w: (i64, i64), m: i64) -> Subgroup {
    let mut h = BTreeSet::new();
    for i in 0..m {
        for j in 0..m {
            h.insert((
                (i * v.0 + j * w.0).rem_euclid(m),
                (i * v.1 + j * w.1).rem_euclid(m),
            ));
        }
    }
    h
}

fn pair(g: &Gram2, u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.0 * g[0][0] + (u.0 * v.1 + u.1 * v.0) * g[0][1] + u.1 * v.1 * g[1][1]
}

/// Whether `L + H` is integral, and whether it is even.
pub fn classify(g: &Gram2, h: &Subgroup, m: i64) -> (bool, bool) {
    let m2 = m * m;
    let lattice_basis = [(m, 0), (0, m)];
    let gens: Vec<(i64, i64)> = h.iter().copied().chain(lattice_basis).collect();
    let integral = gens
        .iter()
        .all(|&u| gens.iter().all(|&v| pair(g, u, v) % m2 == 0));
    let even = integral && gens.iter().all(|&u| pair(g, u, u) % (2 * m2) == 0);
    (integral, even)
}

pub fn subgroups_of_order(m: i64) -> BTreeSet<Subgroup> {
    let mut out = BTreeSet::new();
    for v0 in 0..m {
        for v1 in 0..m {
            for w0 in 0..m {
                for w1 in 0..m {
                    let h = close((v0, v1), (w0, w1), m);
                    if h.len() as i64 == m {
                        out.insert(h);
                    }
                }
            }
        }
    }
    out
}

/// Glue groups of the even overlattices of index `m`.
pub fn even_overlattices(g: &Gram2, m: i64) -> BTreeSet<Subgroup> {
    subgroups_of_order(m)
        .into_iter()
        .filter(|h| classify(g, h, m).1)
        .collect()
}

/// Glue groups of all integral overlattices of index `m`.
pub fn integral_overlattices(g: &Gram2, m: i64) -> BTreeSet<Subgroup> {
    subgroups_of_order(m)
        .into_iter()
        .filter(|h| classify(g, h, m).0)
        .collect()
}

/// The index-2 case spelled out: `L + Z v` for each nonzero half-vector `v`.
pub fn half_coset_even_overlattices(g: &Gram2) -> Vec<(i64, i64)> {
    [(1, 0), (0, 1), (1, 1)]
        .into_iter()
        .filter(|&v| {
            let norm_ok = pair(g, v, v) % 8 == 0;
            let integral = pair(g, v, (2, 0)) % 4 == 0 && pair(g, v, (0, 2)) % 4 == 0;
            norm_ok && integral
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        // (Z/2)^2 has three subgroups of order 2; (Z/4)^2 has seven of order 4.
        assert_eq!(subgroups_of_order(2).len(), 3);
        assert_eq!(subgroups_of_order(4).len(), 7);
        assert_eq!(even_overlattices(&[[4, 0], [0, 4]], 2).len(), 1);
        assert_eq!(
            half_coset_even_overlattices(&[[4, 0], [0, 4]]),
            vec![(1, 1)]
        );
        assert!(even_overlattices(&[[2, 0], [0, 2]], 2).is_empty());
        assert_eq!(integral_overlattices(&[[2, 0], [0, 2]], 2).len(), 1);
    }
}
