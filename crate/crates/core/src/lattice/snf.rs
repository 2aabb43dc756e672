// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{identity, IntMatrix};

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut calc = Calc {
        d: m.to_vec(),
        u: identity(rows),
        v: identity(cols),
        rows,
        cols,
    };
    for t in 0..rows.min(cols) {
        if !calc.process_pivot(t) {
            break;
        }
    }
    SmithForm {
        d: calc.d,
        u: calc.u,
        v: calc.v,
    }
}

struct Calc {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Calc {
    /// Returns false once the trailing block is entirely zero.
    fn process_pivot(&mut self, t: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.min_nonzero(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut clean = true;
            for i in (t + 1)..self.rows {
                if self.d[i][t].is_zero() {
                    continue;
                }
                let q = &self.d[i][t] / &self.d[t][t];
                self.add_row(i, t, &-q);
                clean &= self.d[i][t].is_zero();
            }
            for j in (t + 1)..self.cols {
                if self.d[t][j].is_zero() {
                    continue;
                }
                let q = &self.d[t][j] / &self.d[t][t];
                self.add_col(j, t, &-q);
                clean &= self.d[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            // Pivot must divide the whole trailing block.
            let offending = ((t + 1)..self.rows).find(|&i| {
                ((t + 1)..self.cols).any(|j| !self.d[i][j].is_multiple_of(&self.d[t][t]))
            });
            match offending {
                Some(i) => self.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if self.d[t][t].is_negative() {
            for x in self.d[t].iter_mut().chain(self.u[t].iter_mut()) {
                *x = -&*x;
            }
        }
        true
    }

    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.d[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.d.swap(a, b);
            self.u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for row in self.d.iter_mut().chain(self.v.iter_mut()) {
                row.swap(a, b);
            }
        }
    }

    /// row_dst += k * row_src
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = k * &self.d[src][j];
            self.d[dst][j] += delta;
        }
        for j in 0..self.rows {
            let delta = k * &self.u[src][j];
            self.u[dst][j] += delta;
        }
    }

    /// col_dst += k * col_src
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            let delta = k * &row[src];
            row[dst] += delta;
        }
    }
}
