// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Singular fibers of elliptic fibrations over a field of characteristic 0,
//! handled through the valuations `(v(a), v(b), v(Δ))` of a minimal short
//! Weierstrass model `y^2 = x^3 + a x + b`. Fibers are named by their usual
//! tokens (`"I3"`, `"IV*"`, ...).

/// Minimal valuations for a fiber token, or `None` if the token is unknown.
pub fn valuations(token: &str) -> Option<(u32, u32, u32)> {
    let v = match token {
        "II" => (1, 1, 2),
        "III" => (1, 2, 3),
        "IV" => (2, 2, 4),
        "IV*" => (3, 4, 8),
        "III*" => (3, 5, 9),
        "II*" => (4, 5, 10),
        _ => {
            if let Some(n) = token.strip_prefix('I').and_then(|r| r.strip_suffix('*')) {
                (2, 3, n.parse::<u32>().ok()? + 6)
            } else {
                let n = token.strip_prefix('I')?.parse::<u32>().ok()?;
                (0, 0, n)
            }
        }
    };
    Some(v)
}

/// Tate's classification of a minimal triple.
pub fn classify(v: (u32, u32, u32)) -> Option<String> {
    let (a, b, d) = v;
    if a.min(b) == 0 {
        return Some(format!("I{d}"));
    }
    let t = match d {
        2 => "II".to_string(),
        3 => "III".to_string(),
        4 => "IV".to_string(),
        _ if a >= 2 && b >= 3 && (d == 6 || (a == 2 && b == 3)) => format!("I{}*", d - 6),
        8 => "IV*".to_string(),
        9 => "III*".to_string(),
        10 => "II*".to_string(),
        _ => return None,
    };
    Some(t)
}

/// Fiber of the pullback under `t = s^2` at the ramification point: double
/// every valuation, then make the model minimal by the twist `(a, b) -> (a/u^4, b/u^6)`.
pub fn base_change(token: &str) -> Option<String> {
    let (a, b, d) = valuations(token)?;
    let (mut a, mut b, mut d) = (2 * a, 2 * b, 2 * d);
    while a >= 4 && b >= 6 {
        a -= 4;
        b -= 6;
        d -= 12;
    }
    classify((a, b, d))
}

/// Euler number of the fiber: `v(Δ)` in characteristic 0.
pub fn euler_via_discriminant(token: &str) -> Option<u32> {
    valuations(token).map(|v| v.2)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Denominators occurring in the local height correction of `I_n`:
/// `i (n - j) / n` for `0 < i <= j < n`, together with `1`.
pub fn in_contribution_denominators(n: u64) -> Vec<u64> {
    let mut out = vec![1];
    for j in 1..n {
        for i in 1..=j {
            let num = i * (n - j);
            let den = n / gcd(num, n);
            if !out.contains(&den) {
                out.push(den);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Denominators of the standard local corrections for every fiber type:
/// `III`: 1/2, `IV`: 2/3 and 1/3, `I_n^*`: 1, 1/2 + n/4, 1 + n/4, `IV*`: 4/3
/// and 2/3, `III*`: 3/2.
pub fn contribution_denominators(token: &str) -> Option<Vec<u64>> {
    let d = match token {
        "II" | "II*" => vec![1],
        "III" | "III*" => vec![1, 2],
        "IV" | "IV*" => vec![1, 3],
        _ => {
            if let Some(n) = token.strip_prefix('I').and_then(|r| r.strip_suffix('*')) {
                let n: u64 = n.parse().ok()?;
                // 1/2 + n/4 = (2 + n)/4 and 1 + n/4 = (4 + n)/4.
                let mut out = vec![1, 2];
                for num in [2 + n, 4 + n] {
                    let den = 4 / gcd(num, 4);
                    if !out.contains(&den) {
                        out.push(den);
                    }
                }
                out.sort_unstable();
                out
            } else {
                let n: u64 = token.strip_prefix('I')?.parse().ok()?;
                in_contribution_denominators(n)
            }
        }
    };
    Some(d)
}
