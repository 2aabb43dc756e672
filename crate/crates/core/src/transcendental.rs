// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Index arguments on rank-2 transcendental lattices.
//!
//! For a rational double cover `π: Y ⇢ X` of K3 surfaces,
//! `π_* π^* = [2]` on `T_X` and `π_*` doubles the pairing, which leaves
//! `disc T_Y = disc T_X · 2^(2α - rank)` for `0 <= α <= rank`. Candidates are
//! excluded by [`ExclusionFact`]s, which are
//! external classification results carried with their provenance.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::kodaira::KodairaFiber;
use crate::lattice::{
    enumerate_even_overlattices, enumerate_even_posdef_binary, enumerate_integral_overlattices,
    sublattice_index_from_discs, BinaryEvenForm, GramLattice, LatticeError,
};
use crate::mordell_weil::{check_disc_consistency, DiscCheck, MordellWeilError};
use crate::surfaces::SurfaceConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranscendentalError {
    #[error("the double-cover analysis supports rank 2 only, got rank {0}")]
    UnsupportedRank(usize),
    #[error("disc {disc} / 2^{rank} is not an integer")]
    NonIntegralCandidate { disc: BigInt, rank: usize },
    #[error("every candidate discriminant is excluded")]
    NothingSurvives { certificate: Vec<CandidateVerdict> },
    #[error("candidate discriminant {0} is too large to enumerate")]
    CandidateTooLarge(BigInt),
    #[error("invalid exclusion fact: {0}")]
    InvalidFact(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    MordellWeil(#[from] MordellWeilError),
}

fn ser_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub alpha: u32,
    #[serde(serialize_with = "ser_string")]
    pub disc: BigInt,
}

/// `[(α, disc_TX · 2^(2α - 2)) : α = 0, 1, 2]`.
pub fn double_cover_disc_candidates(
    disc_tx: &BigInt,
    rank: usize,
) -> Result<Vec<Candidate>, TranscendentalError> {
    if rank != 2 {
        return Err(TranscendentalError::UnsupportedRank(rank));
    }
    let (base, rem) = disc_tx.div_rem(&BigInt::from(4));
    if !rem.is_zero() || base <= BigInt::zero() {
        return Err(TranscendentalError::NonIntegralCandidate {
            disc: disc_tx.clone(),
            rank,
        });
    }
    Ok((0..=rank as u32)
        .map(|alpha| Candidate {
            alpha,
            disc: &base * BigInt::from(4u32.pow(alpha)),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKind {
    NotIsomorphicTo,
    NoFibrationWithFibers,
    DenominatorBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exclusion {
    /// The transcendental lattice is not this form.
    NotIsomorphicTo(BinaryEvenForm),
    /// The K3 surface with this transcendental lattice carries no elliptic
    /// fibration with exactly these singular fibers.
    NoFibrationWithFibers {
        form: BinaryEvenForm,
        fibers: Vec<KodairaFiber>,
    },
    /// Run the Mordell–Weil denominator test on the context configuration.
    DenominatorBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFact {
    kind: FactKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<GramLattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fibers: Option<Vec<KodairaFiber>>,
    provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFact", into = "RawFact")]
pub struct ExclusionFact {
    pub exclusion: Exclusion,
    pub provenance: String,
}

fn reduced_form(l: &GramLattice) -> Result<BinaryEvenForm, TranscendentalError> {
    if l.rank() != 2 || !l.is_even() || !l.is_positive_definite() {
        return Err(TranscendentalError::InvalidFact(format!(
            "form {l} is not an even positive definite binary lattice"
        )));
    }
    Ok(BinaryEvenForm::from_lattice(l)?.reduced()?)
}

impl TryFrom<RawFact> for ExclusionFact {
    type Error = TranscendentalError;

    fn try_from(r: RawFact) -> Result<Self, TranscendentalError> {
        let missing = |what: &str| {
            TranscendentalError::InvalidFact(format!("{:?} requires \"{what}\"", r.kind))
        };
        let exclusion = match r.kind {
            FactKind::NotIsomorphicTo => {
                if r.fibers.is_some() {
                    return Err(TranscendentalError::InvalidFact(
                        "not_isomorphic_to takes no \"fibers\"".into(),
                    ));
                }
                Exclusion::NotIsomorphicTo(reduced_form(
                    r.form.as_ref().ok_or_else(|| missing("form"))?,
                )?)
            }
            FactKind::NoFibrationWithFibers => Exclusion::NoFibrationWithFibers {
                form: reduced_form(r.form.as_ref().ok_or_else(|| missing("form"))?)?,
                fibers: r.fibers.clone().ok_or_else(|| missing("fibers"))?,
            },
            FactKind::DenominatorBound => {
                if r.form.is_some() || r.fibers.is_some() {
                    return Err(TranscendentalError::InvalidFact(
                        "denominator_bound takes no \"form\" or \"fibers\"".into(),
                    ));
                }
                Exclusion::DenominatorBound
            }
        };
        ExclusionFact::new(exclusion, r.provenance)
    }
}

impl From<ExclusionFact> for RawFact {
    fn from(f: ExclusionFact) -> Self {
        let (kind, form, fibers) = match f.exclusion {
            Exclusion::NotIsomorphicTo(form) => {
                (FactKind::NotIsomorphicTo, Some(form.to_lattice()), None)
            }
            Exclusion::NoFibrationWithFibers { form, fibers } => (
                FactKind::NoFibrationWithFibers,
                Some(form.to_lattice()),
                Some(fibers),
            ),
            Exclusion::DenominatorBound => (FactKind::DenominatorBound, None, None),
        };
        RawFact {
            kind,
            form,
            fibers,
            provenance: f.provenance,
        }
    }
}

impl ExclusionFact {
    pub fn new(
        exclusion: Exclusion,
        provenance: impl Into<String>,
    ) -> Result<Self, TranscendentalError> {
        let provenance = provenance.into();
        if provenance.trim().is_empty() {
            return Err(TranscendentalError::InvalidFact(
                "provenance must be nonempty".into(),
            ));
        }
        let exclusion = match exclusion {
            Exclusion::NotIsomorphicTo(f) => Exclusion::NotIsomorphicTo(f.reduced()?),
            Exclusion::NoFibrationWithFibers { form, fibers } => Exclusion::NoFibrationWithFibers {
                form: form.reduced()?,
                fibers,
            },
            Exclusion::DenominatorBound => Exclusion::DenominatorBound,
        };
        Ok(ExclusionFact {
            exclusion,
            provenance,
        })
    }

    pub fn kind(&self) -> FactKind {
        match self.exclusion {
            Exclusion::NotIsomorphicTo(_) => FactKind::NotIsomorphicTo,
            Exclusion::NoFibrationWithFibers { .. } => FactKind::NoFibrationWithFibers,
            Exclusion::DenominatorBound => FactKind::DenominatorBound,
        }
    }
}

fn multiset(fibers: impl IntoIterator<Item = KodairaFiber>) -> BTreeMap<KodairaFiber, usize> {
    let mut m = BTreeMap::new();
    for f in fibers.into_iter().filter(|f| !f.is_smooth()) {
        *m.entry(f).or_insert(0) += 1;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub form: BinaryEvenForm,
    /// Index into the fact list of the first fact excluding this class.
    pub excluded_by: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateVerdict {
    pub alpha: u32,
    #[serde(serialize_with = "ser_string")]
    pub disc: BigInt,
    pub classes: Vec<ClassVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator_check: Option<DiscCheck>,
    pub excluded: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Resolution {
    Resolved {
        alpha: u32,
        #[serde(serialize_with = "ser_string")]
        disc: BigInt,
        /// Set when exactly one isometry class of that discriminant survives.
        form: Option<BinaryEvenForm>,
    },
    Ambiguous {
        discs: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscResolution {
    pub certificate: Vec<CandidateVerdict>,
    pub resolution: Resolution,
}

impl DiscResolution {
    pub fn surviving(&self) -> Vec<&CandidateVerdict> {
        self.certificate.iter().filter(|c| !c.excluded).collect()
    }

    pub fn resolved_disc(&self) -> Option<&BigInt> {
        match &self.resolution {
            Resolution::Resolved { disc, .. } => Some(disc),
            Resolution::Ambiguous { .. } => None,
        }
    }
}

/// Classifies every candidate: it is excluded when each of its isometry
/// classes is excluded by some fact, or when the denominator test fails and
/// a `denominator_bound` fact is present.
pub fn resolve_disc(
    candidates: &[Candidate],
    facts: &[ExclusionFact],
    context: &SurfaceConfig,
    rho: i64,
    torsion_order: u64,
) -> Result<DiscResolution, TranscendentalError> {
    let context_fibers = multiset(context.fibers().iter().map(|f| f.fiber));
    let bound_fact = facts
        .iter()
        .position(|f| f.exclusion == Exclusion::DenominatorBound);
    let mut certificate = Vec::new();
    for cand in candidates {
        let d = cand
            .disc
            .to_u64()
            .ok_or_else(|| TranscendentalError::CandidateTooLarge(cand.disc.clone()))?;
        let denominator_check = match bound_fact {
            Some(_) => Some(check_disc_consistency(
                context,
                &cand.disc,
                rho,
                torsion_order,
            )?),
            None => None,
        };
        let bound_excludes = denominator_check
            .as_ref()
            .is_some_and(|c| !c.consistency.is_consistent());
        let classes: Vec<ClassVerdict> = enumerate_even_posdef_binary(d)
            .into_iter()
            .map(|form| {
                let hit = facts.iter().position(|f| match &f.exclusion {
                    Exclusion::NotIsomorphicTo(g) => *g == form,
                    Exclusion::NoFibrationWithFibers { form: g, fibers } => {
                        *g == form && multiset(fibers.iter().copied()) == context_fibers
                    }
                    Exclusion::DenominatorBound => bound_excludes,
                });
                ClassVerdict {
                    provenance: hit.map(|i| facts[i].provenance.clone()),
                    form,
                    excluded_by: hit,
                }
            })
            .collect();
        let (excluded, reason) = if classes.is_empty() {
            (
                true,
                "no even positive definite binary lattice has this discriminant".to_string(),
            )
        } else if classes.iter().all(|c| c.excluded_by.is_some()) {
            (true, "every isometry class is excluded".to_string())
        } else {
            let open = classes.iter().filter(|c| c.excluded_by.is_none()).count();
            (
                false,
                format!("{open} of {} isometry classes remain", classes.len()),
            )
        };
        certificate.push(CandidateVerdict {
            alpha: cand.alpha,
            disc: cand.disc.clone(),
            classes,
            denominator_check,
            excluded,
            reason,
        });
    }
    let survivors: Vec<&CandidateVerdict> = certificate.iter().filter(|c| !c.excluded).collect();
    let resolution = match survivors.as_slice() {
        [] => return Err(TranscendentalError::NothingSurvives { certificate }),
        [only] => {
            let open: Vec<&ClassVerdict> = only
                .classes
                .iter()
                .filter(|c| c.excluded_by.is_none())
                .collect();
            Resolution::Resolved {
                alpha: only.alpha,
                disc: only.disc.clone(),
                form: (open.len() == 1).then(|| open[0].form.clone()),
            }
        }
        many => Resolution::Ambiguous {
            discs: many.iter().map(|c| c.disc.to_string()).collect(),
        },
    };
    Ok(DiscResolution {
        certificate,
        resolution,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IndexStep {
    /// `m^2` does not divide `det L`.
    DeterminantExcludes,
    /// `m^2 | det L`, but every integral overlattice of index `m` is odd.
    OddOnly {
        odd_overlattices: usize,
    },
    Found {
        witness: GramLattice,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexRecord {
    pub index: u64,
    #[serde(flatten)]
    pub step: IndexStep,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Rigidity {
    /// No even lattice contains `L` with index in `2..=index_bound`.
    Rigid,
    /// An even overlattice exists; the witness is of the smallest index.
    Refuted { index: u64, witness: GramLattice },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityCertificate {
    pub lattice: GramLattice,
    pub index_bound: u64,
    pub steps: Vec<IndexRecord>,
    #[serde(flatten)]
    pub rigidity: Rigidity,
}

impl RigidityCertificate {
    pub fn is_rigid(&self) -> bool {
        self.rigidity == Rigidity::Rigid
    }
}

pub const DEFAULT_INDEX_BOUND: u64 = 10;

pub fn rigidity_transfer(
    l: &GramLattice,
    index_bound: u64,
) -> Result<RigidityCertificate, TranscendentalError> {
    if l.rank() != 2 || !l.is_even() || !l.is_positive_definite() {
        return Err(LatticeError::PreconditionViolated(format!(
            "rigidity needs an even positive definite rank-2 lattice, got {l}"
        ))
        .into());
    }
    let det = l.det();
    let mut steps = Vec::new();
    let mut refuted = None;
    for m in 2..=index_bound {
        let mb = BigInt::from(m);
        let step = if !det.is_multiple_of(&(&mb * &mb)) {
            IndexStep::DeterminantExcludes
        } else {
            let even = enumerate_even_overlattices(l, m)?;
            match even.first() {
                Some(o) => {
                    let witness = BinaryEvenForm::from_lattice(&o.lattice)?
                        .reduced()?
                        .to_lattice();
                    IndexStep::Found { witness }
                }
                None => IndexStep::OddOnly {
                    odd_overlattices: enumerate_integral_overlattices(l, m)?.len(),
                },
            }
        };
        if let (None, IndexStep::Found { witness }) = (&refuted, &step) {
            refuted = Some(Rigidity::Refuted {
                index: m,
                witness: witness.clone(),
            });
        }
        steps.push(IndexRecord { index: m, step });
    }
    Ok(RigidityCertificate {
        lattice: l.clone(),
        index_bound,
        steps,
        rigidity: refuted.unwrap_or(Rigidity::Rigid),
    })
}

/// `T_Y` from `T_X ≅ T_Y(2)`.
pub fn shioda_inose_unscale(t_x: &GramLattice) -> Result<GramLattice, LatticeError> {
    t_x.unscale(&BigInt::from(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LictVerdict {
    #[serde(rename = "LICT_fails")]
    Fails,
    #[serde(rename = "LICT_holds_possible")]
    HoldsPossible,
}

impl std::fmt::Display for LictVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LictVerdict::Fails => "LICT_fails",
            LictVerdict::HoldsPossible => "LICT_holds_possible",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecializationIndex {
    #[serde(serialize_with = "ser_string")]
    pub index: BigInt,
    pub verdict: LictVerdict,
}

/// Index of the specialization image: `sqrt(disc_central / disc_nearby)`.
pub fn specialization_index(
    disc_central: &BigInt,
    disc_nearby: &BigInt,
) -> Result<SpecializationIndex, LatticeError> {
    let index = sublattice_index_from_discs(disc_central, disc_nearby)?;
    let verdict = if index > BigInt::one() {
        LictVerdict::Fails
    } else {
        LictVerdict::HoldsPossible
    };
    Ok(SpecializationIndex { index, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kodaira::KodairaFiber::*;

    fn lat(r: [[i64; 2]; 2]) -> GramLattice {
        GramLattice::from_i64(&r).unwrap()
    }

    fn discs(c: &[Candidate]) -> Vec<(u32, i64)> {
        c.iter()
            .map(|c| (c.alpha, c.disc.to_i64().unwrap()))
            .collect()
    }

    fn y2() -> SurfaceConfig {
        SurfaceConfig::from_types("Y2", 0, &[IStar(0), IStar(0), IV, IVStar])
    }

    fn y2_facts() -> Vec<ExclusionFact> {
        let fibers = vec![IStar(0), IStar(0), IV, IVStar];
        vec![
            ExclusionFact::new(
                Exclusion::NotIsomorphicTo(BinaryEvenForm::new(1, 1, 1)),
                "Y2 is not Y0",
            )
            .unwrap(),
            ExclusionFact::new(
                Exclusion::NoFibrationWithFibers {
                    form: BinaryEvenForm::new(2, 2, 2),
                    fibers: fibers.clone(),
                },
                "fibration classification",
            )
            .unwrap(),
            ExclusionFact::new(
                Exclusion::NoFibrationWithFibers {
                    form: BinaryEvenForm::new(1, 0, 3),
                    fibers,
                },
                "fibration classification",
            )
            .unwrap(),
        ]
    }

    #[test]
    fn candidates() {
        assert_eq!(
            discs(&double_cover_disc_candidates(&12.into(), 2).unwrap()),
            [(0, 3), (1, 12), (2, 48)]
        );
        assert_eq!(
            discs(&double_cover_disc_candidates(&16.into(), 2).unwrap()),
            [(0, 4), (1, 16), (2, 64)]
        );
        assert_eq!(
            discs(&double_cover_disc_candidates(&4.into(), 2).unwrap()),
            [(0, 1), (1, 4), (2, 16)]
        );
        assert_eq!(
            double_cover_disc_candidates(&12.into(), 3),
            Err(TranscendentalError::UnsupportedRank(3))
        );
        assert!(matches!(
            double_cover_disc_candidates(&6.into(), 2),
            Err(TranscendentalError::NonIntegralCandidate { .. })
        ));
    }

    #[test]
    fn resolution_with_classification_facts() {
        let c = double_cover_disc_candidates(&12.into(), 2).unwrap();
        let r = resolve_disc(&c, &y2_facts(), &y2(), 20, 1).unwrap();
        assert_eq!(
            r.resolution,
            Resolution::Resolved {
                alpha: 2,
                disc: 48.into(),
                form: None
            }
        );
        assert_eq!(r.certificate.len(), 3);
        assert_eq!(
            r.certificate[1]
                .classes
                .iter()
                .map(|c| c.excluded_by)
                .collect::<Vec<_>>(),
            [Some(2), Some(1)]
        );
    }

    #[test]
    fn resolution_with_denominator_bound_only() {
        let c = double_cover_disc_candidates(&12.into(), 2).unwrap();
        let facts =
            vec![ExclusionFact::new(Exclusion::DenominatorBound, "height pairing").unwrap()];
        let r = resolve_disc(&c, &facts, &y2(), 20, 1).unwrap();
        assert_eq!(
            r.resolution,
            Resolution::Ambiguous {
                discs: vec!["12".into(), "48".into()]
            }
        );
        assert!(r.certificate[0].excluded);
    }

    #[test]
    fn resolution_example_two() {
        let ctx = SurfaceConfig::from_types("Y1", 0, &[IVStar, I(2), IStar(1), IStar(1)]);
        let c = double_cover_disc_candidates(&16.into(), 2).unwrap();
        let facts = vec![ExclusionFact::new(
            Exclusion::NotIsomorphicTo(BinaryEvenForm::new(1, 0, 1)),
            "larger disc",
        )
        .unwrap()];
        let r = resolve_disc(&c, &facts, &ctx, 20, 1).unwrap();
        assert_eq!(
            r.resolution,
            Resolution::Ambiguous {
                discs: vec!["16".into(), "64".into()]
            }
        );
    }

    #[test]
    fn fibration_fact_needs_matching_fibers() {
        let other = SurfaceConfig::from_types("Z", 0, &[IVStar, IVStar, IVStar]);
        let c = double_cover_disc_candidates(&12.into(), 2).unwrap();
        let r = resolve_disc(&c, &y2_facts(), &other, 20, 3).unwrap();
        assert_eq!(
            r.resolution,
            Resolution::Ambiguous {
                discs: vec!["12".into(), "48".into()]
            }
        );
    }

    #[test]
    fn nothing_survives() {
        let c = vec![Candidate {
            alpha: 0,
            disc: 3.into(),
        }];
        let facts = vec![ExclusionFact::new(
            Exclusion::NotIsomorphicTo(BinaryEvenForm::new(1, 1, 1)),
            "x",
        )
        .unwrap()];
        assert!(matches!(
            resolve_disc(&c, &facts, &y2(), 20, 1),
            Err(TranscendentalError::NothingSurvives { .. })
        ));
    }

    #[test]
    fn rigidity_examples() {
        let a2 = rigidity_transfer(&lat([[2, 1], [1, 2]]), 10).unwrap();
        assert!(a2.is_rigid());
        assert!(a2
            .steps
            .iter()
            .all(|s| s.step == IndexStep::DeterminantExcludes));

        let a1a1 = rigidity_transfer(&lat([[2, 0], [0, 2]]), 10).unwrap();
        assert!(a1a1.is_rigid());
        assert_eq!(
            a1a1.steps[0].step,
            IndexStep::OddOnly {
                odd_overlattices: 1
            }
        );

        let r = rigidity_transfer(&lat([[4, 0], [0, 4]]), 10).unwrap();
        assert_eq!(
            r.rigidity,
            Rigidity::Refuted {
                index: 2,
                witness: lat([[2, 0], [0, 2]])
            }
        );
        assert!(rigidity_transfer(&GramLattice::diagonal(&[2, 2, 2]), 10).is_err());
    }

    #[test]
    fn unscaling() {
        assert_eq!(
            shioda_inose_unscale(&lat([[4, 2], [2, 4]])).unwrap(),
            lat([[2, 1], [1, 2]])
        );
        assert_eq!(
            shioda_inose_unscale(&lat([[4, 0], [0, 4]])).unwrap(),
            lat([[2, 0], [0, 2]])
        );
        assert_eq!(
            shioda_inose_unscale(&lat([[2, 0], [0, 2]])).unwrap(),
            lat([[1, 0], [0, 1]])
        );
        assert!(shioda_inose_unscale(&lat([[2, 1], [1, 2]])).is_err());
    }

    #[test]
    fn specialization() {
        let s = specialization_index(&48.into(), &3.into()).unwrap();
        assert_eq!((s.index, s.verdict), (4.into(), LictVerdict::Fails));
        let s = specialization_index(&3.into(), &3.into()).unwrap();
        assert_eq!((s.index, s.verdict), (1.into(), LictVerdict::HoldsPossible));
        let s = specialization_index(&16.into(), &4.into()).unwrap();
        assert_eq!((s.index, s.verdict), (2.into(), LictVerdict::Fails));
        assert!(specialization_index(&12.into(), &5.into()).is_err());
    }

    #[test]
    fn fact_json() {
        let json = r#"{"kind":"no_fibration_with_fibers","form":[["4","2"],["2","4"]],"fibers":["I0*","I0*","IV","IV*"],"provenance":"p"}"#;
        let f: ExclusionFact = serde_json::from_str(json).unwrap();
        assert_eq!(f.kind(), FactKind::NoFibrationWithFibers);
        assert_eq!(serde_json::to_string(&f).unwrap(), json);
        for bad in [
            r#"{"kind":"not_isomorphic_to","provenance":"p"}"#,
            r#"{"kind":"not_isomorphic_to","form":[[2,1],[1,2]],"provenance":" "}"#,
            r#"{"kind":"not_isomorphic_to","form":[[1,0],[0,1]],"provenance":"p"}"#,
            r#"{"kind":"denominator_bound","form":[[2,1],[1,2]],"provenance":"p"}"#,
            r#"{"kind":"something_else","provenance":"p"}"#,
        ] {
            assert!(serde_json::from_str::<ExclusionFact>(bad).is_err(), "{bad}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn self_index_is_one(d in 1u64..100_000) {
                let s = specialization_index(&d.into(), &d.into()).unwrap();
                prop_assert_eq!(s.index, BigInt::one());
            }

            #[test]
            fn rank_two_candidates_contain_input(k in 1u64..10_000) {
                let d = BigInt::from(4 * k);
                let c = double_cover_disc_candidates(&d, 2).unwrap();
                prop_assert_eq!(&c[1].disc, &d);
            }
        }
    }
}
