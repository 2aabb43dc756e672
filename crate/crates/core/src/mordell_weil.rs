// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Shioda–Tate arithmetic for elliptic surfaces with a section.
//!
//! The trivial lattice is spanned by the zero section, a fiber and the
//! non-identity fiber components. With `ρ` the Picard number,
//! `ρ = 2 + r + Σ (m_v - 1)` and
//! `disc NS = disc Triv · disc MWL / |MW_tors|^2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::surfaces::SurfaceConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MordellWeilError {
    #[error("Picard number {rho} is below the trivial lattice rank {trivial_rank}")]
    PicardTooSmall { rho: i64, trivial_rank: i64 },
    #[error("torsion order must be positive")]
    ZeroTorsion,
    #[error("discriminant of the Neron–Severi lattice must be positive, got {0}")]
    NonPositiveDisc(BigInt),
}

/// `2 + Σ (m_v - 1)`.
pub fn trivial_rank(c: &SurfaceConfig) -> i64 {
    2 + c
        .fibers()
        .iter()
        .map(|f| f.fiber.components() as i64 - 1)
        .sum::<i64>()
}

/// `Π |det|` of the fiber root lattices.
pub fn trivial_disc(c: &SurfaceConfig) -> BigInt {
    c.fibers()
        .iter()
        .map(|f| f.fiber.profile().root_disc)
        .product()
}

pub fn mw_rank(c: &SurfaceConfig, rho: i64) -> Result<u32, MordellWeilError> {
    let t = trivial_rank(c);
    if rho < t {
        return Err(MordellWeilError::PicardTooSmall {
            rho,
            trivial_rank: t,
        });
    }
    Ok((rho - t) as u32)
}

pub fn mwl_discriminant(
    c: &SurfaceConfig,
    disc_ns: &BigInt,
    rho: i64,
    torsion_order: u64,
) -> Result<BigRational, MordellWeilError> {
    mw_rank(c, rho)?;
    if torsion_order == 0 {
        return Err(MordellWeilError::ZeroTorsion);
    }
    if *disc_ns <= BigInt::zero() {
        return Err(MordellWeilError::NonPositiveDisc(disc_ns.clone()));
    }
    let t = BigInt::from(torsion_order);
    Ok(BigRational::new(disc_ns * &t * &t, trivial_disc(c)))
}

/// lcm of every fiber's contribution denominators.
pub fn global_denominator(c: &SurfaceConfig) -> BigInt {
    c.fibers()
        .iter()
        .flat_map(|f| f.fiber.contribution_denominators())
        .fold(BigInt::one(), |acc, d| acc.lcm(&BigInt::from(d)))
}

/// `D^r`: the denominator of `disc MWL` must divide this. For `r = 0` the
/// bound is 1.
pub fn mwl_denominator_bound(c: &SurfaceConfig, r: u32) -> BigInt {
    Pow::pow(global_denominator(c), r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Consistency {
    Consistent,
    Contradiction { reason: String },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscCheck {
    #[serde(serialize_with = "ser_string")]
    pub candidate: BigInt,
    pub mw_rank: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub mwl_disc: BigRational,
    #[serde(serialize_with = "ser_string")]
    pub bound: BigInt,
    #[serde(flatten)]
    pub consistency: Consistency,
}

/// Tests a candidate `disc T = disc NS` against the height denominator bound.
/// In rank 0 the Mordell–Weil lattice is empty and its discriminant must be 1.
pub fn check_disc_consistency(
    c: &SurfaceConfig,
    candidate_disc_t: &BigInt,
    rho: i64,
    torsion_order: u64,
) -> Result<DiscCheck, MordellWeilError> {
    let r = mw_rank(c, rho)?;
    let mwl = mwl_discriminant(c, candidate_disc_t, rho, torsion_order)?;
    let bound = mwl_denominator_bound(c, r);
    let consistency = if r == 0 && !mwl.is_one() {
        Consistency::Contradiction {
            reason: format!("rank 0 forces disc(MWL) = 1, got {}", ratio_string(&mwl)),
        }
    } else if !bound.is_multiple_of(mwl.denom()) {
        Consistency::Contradiction {
            reason: format!(
                "denominator {} of disc(MWL) = {} does not divide {bound}",
                mwl.denom(),
                ratio_string(&mwl)
            ),
        }
    } else {
        Consistency::Consistent
    };
    Ok(DiscCheck {
        candidate: candidate_disc_t.clone(),
        mw_rank: r,
        mwl_disc: mwl,
        bound,
        consistency,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiodaTateResult {
    pub rho: i64,
    pub trivial_rank: i64,
    pub mw_rank: u32,
    #[serde(serialize_with = "ser_string")]
    pub trivial_disc: BigInt,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub mwl_disc: Option<BigRational>,
}

/// Shioda–Tate data; `mwl_disc` is filled in when `disc NS` is known.
pub fn shioda_tate(
    c: &SurfaceConfig,
    rho: i64,
    disc_ns: Option<&BigInt>,
    torsion_order: u64,
) -> Result<ShiodaTateResult, MordellWeilError> {
    let mw = mw_rank(c, rho)?;
    let mwl_disc = disc_ns
        .map(|d| mwl_discriminant(c, d, rho, torsion_order))
        .transpose()?;
    Ok(ShiodaTateResult {
        rho,
        trivial_rank: trivial_rank(c),
        mw_rank: mw,
        trivial_disc: trivial_disc(c),
        mwl_disc,
    })
}

/// Always `p/q`, including integers (`1/1`).
pub fn ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn ser_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_ratio<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(x))
}

fn ser_opt_ratio<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&ratio_string(r)),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kodaira::KodairaFiber::{self, *};

    fn cfg(genus: u32, types: &[KodairaFiber]) -> SurfaceConfig {
        SurfaceConfig::from_types("c", genus, types)
    }

    fn y2() -> SurfaceConfig {
        cfg(0, &[IStar(0), IStar(0), IV, IVStar])
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ranks() {
        assert_eq!(mw_rank(&y2(), 20), Ok(2));
        assert_eq!(mw_rank(&cfg(0, &[IVStar; 3]), 20), Ok(0));
        assert_eq!(mw_rank(&cfg(1, &[IVStar, IV]), 12), Ok(2));
        assert_eq!(mw_rank(&cfg(1, &[IVStar, I(2), I(2)]), 12), Ok(2));
        assert_eq!(
            mw_rank(&y2(), 17),
            Err(MordellWeilError::PicardTooSmall {
                rho: 17,
                trivial_rank: 18
            })
        );
    }

    #[test]
    fn discriminants() {
        assert_eq!(trivial_disc(&y2()), BigInt::from(144));
        assert_eq!(mwl_discriminant(&y2(), &48.into(), 20, 1), Ok(q(1, 3)));
        assert_eq!(mwl_discriminant(&y2(), &3.into(), 20, 1), Ok(q(1, 48)));
        // 3 * 3^2 / 3^3.
        assert_eq!(
            mwl_discriminant(&cfg(0, &[IVStar; 3]), &3.into(), 20, 3),
            Ok(q(1, 1))
        );
        assert_eq!(
            mwl_discriminant(&y2(), &48.into(), 20, 0),
            Err(MordellWeilError::ZeroTorsion)
        );
    }

    #[test]
    fn bounds() {
        assert_eq!(mwl_denominator_bound(&y2(), 2), BigInt::from(36));
        assert_eq!(
            mwl_denominator_bound(&cfg(0, &[IIStar, IIStar]), 1),
            BigInt::from(1)
        );
        assert_eq!(
            mwl_denominator_bound(&cfg(1, &[IVStar, I(2), I(2)]), 2),
            BigInt::from(36)
        );
        assert_eq!(mwl_denominator_bound(&y2(), 0), BigInt::from(1));
    }

    #[test]
    fn consistency_examples() {
        let c = check_disc_consistency(&y2(), &3.into(), 20, 1).unwrap();
        assert!(!c.consistency.is_consistent());
        assert_eq!(
            (c.mwl_disc.clone(), c.bound.clone()),
            (q(1, 48), BigInt::from(36))
        );
        assert!(check_disc_consistency(&y2(), &48.into(), 20, 1)
            .unwrap()
            .consistency
            .is_consistent());
        let c = check_disc_consistency(&y2(), &12.into(), 20, 1).unwrap();
        assert_eq!(c.mwl_disc, q(1, 12));
        assert!(c.consistency.is_consistent());
        // Extremal case with the wrong torsion.
        let iv3 = cfg(0, &[IVStar; 3]);
        assert!(check_disc_consistency(&iv3, &3.into(), 20, 3)
            .unwrap()
            .consistency
            .is_consistent());
        assert!(!check_disc_consistency(&iv3, &3.into(), 20, 1)
            .unwrap()
            .consistency
            .is_consistent());
    }

    #[test]
    fn serialization() {
        let st = shioda_tate(&y2(), 20, Some(&48.into()), 1).unwrap();
        assert_eq!(
            serde_json::to_string(&st).unwrap(),
            r#"{"rho":20,"trivial_rank":18,"mw_rank":2,"trivial_disc":"144","mwl_disc":"1/3"}"#
        );
        let st = shioda_tate(&cfg(0, &[IVStar; 3]), 20, Some(&3.into()), 3).unwrap();
        assert!(serde_json::to_string(&st)
            .unwrap()
            .contains(r#""mwl_disc":"1/1""#));
        assert_eq!(shioda_tate(&y2(), 20, None, 1).unwrap().mwl_disc, None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn fiber() -> impl Strategy<Value = KodairaFiber> {
            prop_oneof![
                (0u32..8).prop_map(I),
                (0u32..4).prop_map(IStar),
                Just(II),
                Just(III),
                Just(IV),
                Just(IIStar),
                Just(IIIStar),
                Just(IVStar),
            ]
        }

        proptest! {
            #[test]
            fn rank_monotone_and_additive(
                types in proptest::collection::vec(fiber(), 0..6),
                extra in fiber(),
                rho in 0i64..40,
            ) {
                let c = cfg(0, &types);
                if let (Ok(a), Ok(b)) = (mw_rank(&c, rho), mw_rank(&c, rho + 1)) {
                    prop_assert_eq!(b, a + 1);
                }
                let mut more = types.clone();
                more.push(extra);
                let c2 = cfg(0, &more);
                let big = 60;
                prop_assert_eq!(
                    mw_rank(&c, big).unwrap() as i64 - mw_rank(&c2, big).unwrap() as i64,
                    extra.components() as i64 - 1
                );
            }

            #[test]
            fn disc_scaling(types in proptest::collection::vec(fiber(), 0..6), d in 1i64..500, t in 1u64..6) {
                let c = cfg(0, &types);
                let base = mwl_discriminant(&c, &d.into(), 60, 1).unwrap();
                let scaled = mwl_discriminant(&c, &(3 * d).into(), 60, t).unwrap();
                let t2 = BigInt::from(t * t);
                prop_assert_eq!(scaled, base * BigRational::from_integer(BigInt::from(3) * t2));
            }
        }
    }
}
