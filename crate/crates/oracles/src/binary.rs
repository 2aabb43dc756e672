// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Binary forms `a x^2 + b x y + c y^2`, written as `(a, b, c)`; the lattice
//! Gram matrix is `[[2a, b], [b, 2c]]`.

pub type Form = (i64, i64, i64);

pub fn value(f: Form, x: i64, y: i64) -> i64 {
    f.0 * x * x + f.1 * x * y + f.2 * y * y
}

/// Gram pairing `u . v` for the lattice of `f`.
pub fn pairing(f: Form, u: (i64, i64), v: (i64, i64)) -> i64 {
    value(f, u.0 + v.0, u.1 + v.1) - value(f, u.0, u.1) - value(f, v.0, v.1)
}

/// `f(p x + q y, r x + s y)`.
pub fn transform(f: Form, m: (i64, i64, i64, i64)) -> Form {
    let (a, b, c) = f;
    let (p, q, r, s) = m;
    (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )
}

pub fn disc(f: Form) -> i64 {
    4 * f.0 * f.2 - f.1 * f.1
}

fn isqrt(n: i64) -> i64 {
    let mut r = 0i64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All `(x, y)` with `f(x, y) = n`, for positive definite `f`.
///
/// From `4a f = (2a x + b y)^2 + d y^2` we get `y^2 <= 4 a n / d`, and
/// symmetrically `x^2 <= 4 c n / d`.
pub fn vectors_of_norm(f: Form, n: i64) -> Vec<(i64, i64)> {
    let d = disc(f);
    assert!(f.0 > 0 && d > 0, "form must be positive definite");
    let by = isqrt(4 * f.0 * n / d) + 1;
    let bx = isqrt(4 * f.2 * n / d) + 1;
    let mut out = Vec::new();
    for x in -bx..=bx {
        for y in -by..=by {
            if value(f, x, y) == n {
                out.push((x, y));
            }
        }
    }
    out
}

/// Decides lattice isometry (GL2(Z) equivalence) by searching for a basis
/// `v1, v2` of the first lattice realising the Gram matrix of the second.
pub fn isometric(f: Form, g: Form) -> bool {
    if disc(f) != disc(g) {
        return false;
    }
    let first = vectors_of_norm(f, g.0);
    let second = vectors_of_norm(f, g.2);
    for &v1 in &first {
        for &v2 in &second {
            let det = v1.0 * v2.1 - v1.1 * v2.0;
            if det.abs() == 1 && pairing(f, v1, v2) == g.1 {
                return true;
            }
        }
    }
    false
}

/// Literal loop over `0 <= b <= a <= c <= d` with `4ac - b^2 = d`.
pub fn reduced_triples_by_loop(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    for a in 1..=d {
        for b in 0..=a {
            for c in a..=d {
                if 4 * a * c - b * b == d {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// Isometry classes of even positive definite binary lattices of
/// determinant `d`: every `(a, b, c)` with `1 <= a <= c <= d` and `|b| <= a`,
/// deduplicated pairwise with [`isometric`]. One representative per class,
/// in search order.
pub fn brute_force_classes(d: i64) -> Vec<Form> {
    let mut reps: Vec<Form> = Vec::new();
    for a in 1..=d {
        for c in a..=d {
            for b in -a..=a {
                let f = (a, b, c);
                if disc(f) != d {
                    continue;
                }
                if !reps.iter().any(|&r| isometric(r, f)) {
                    reps.push(f);
                }
            }
        }
    }
    reps
}
