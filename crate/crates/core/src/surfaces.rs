// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Elliptic fibrations described by base genus and labeled singular fibers,
//! and their quadratic base changes.
//!
//! Fiber positions are abstract labels. A branch point that is not a fiber
//! of the configuration is declared in [`BranchSpec::fresh`] and stands for a
//! generic smooth fiber.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kodaira::{KodairaError, KodairaFiber, RowSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("total Euler number {0} is not divisible by 12")]
    EulerNotDivisibleBy12(u64),
    #[error("fiber label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("branch label {0:?} appears more than once")]
    DuplicateBranchLabel(String),
    #[error("branch label {0:?} is neither a fiber label nor declared fresh")]
    UnknownLabel(String),
    #[error("fresh label {0:?} collides with a fiber label")]
    FreshLabelCollides(String),
    #[error("fresh label {0:?} is not a branch point")]
    UnusedFreshLabel(String),
    #[error("a double cover needs an even number of branch points, got {0}")]
    OddBranchCount(usize),
    #[error("a rational curve has no connected unramified double cover")]
    UnramifiedCoverOfRationalCurve,
    #[error(transparent)]
    Kodaira(#[from] KodairaError),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledFiber {
    pub label: String,
    #[serde(rename = "type")]
    pub fiber: KodairaFiber,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    base_genus: u32,
    fibers: Vec<LabeledFiber>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct SurfaceConfig {
    name: String,
    base_genus: u32,
    fibers: Vec<LabeledFiber>,
}

impl TryFrom<RawConfig> for SurfaceConfig {
    type Error = SurfaceError;

    fn try_from(r: RawConfig) -> Result<Self, SurfaceError> {
        SurfaceConfig::new(r.name, r.base_genus, r.fibers)
    }
}

impl From<SurfaceConfig> for RawConfig {
    fn from(c: SurfaceConfig) -> Self {
        RawConfig {
            name: c.name,
            base_genus: c.base_genus,
            fibers: c.fibers,
        }
    }
}

impl SurfaceConfig {
    pub fn new(
        name: impl Into<String>,
        base_genus: u32,
        fibers: Vec<LabeledFiber>,
    ) -> Result<Self, SurfaceError> {
        let mut seen = BTreeSet::new();
        for f in &fibers {
            if !seen.insert(f.label.as_str()) {
                return Err(SurfaceError::DuplicateLabel(f.label.clone()));
            }
        }
        Ok(SurfaceConfig {
            name: name.into(),
            base_genus,
            fibers,
        })
    }

    /// Configuration with fibers labeled `"0"`, `"1"`, ... in order.
    pub fn from_types(name: impl Into<String>, base_genus: u32, types: &[KodairaFiber]) -> Self {
        let fibers = types
            .iter()
            .enumerate()
            .map(|(i, &fiber)| LabeledFiber {
                label: i.to_string(),
                fiber,
            })
            .collect();
        SurfaceConfig::new(name, base_genus, fibers).expect("generated labels are distinct")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base_genus(&self) -> u32 {
        self.base_genus
    }

    pub fn fibers(&self) -> &[LabeledFiber] {
        &self.fibers
    }

    pub fn fiber(&self, label: &str) -> Option<KodairaFiber> {
        self.fibers
            .iter()
            .find(|f| f.label == label)
            .map(|f| f.fiber)
    }

    pub fn euler(&self) -> u64 {
        self.fibers.iter().map(|f| f.fiber.euler_number()).sum()
    }

    /// Singular fiber types with multiplicity, smooth entries discarded.
    pub fn fiber_multiset(&self) -> BTreeMap<KodairaFiber, usize> {
        let mut m = BTreeMap::new();
        for f in self.fibers.iter().filter(|f| !f.fiber.is_smooth()) {
            *m.entry(f.fiber).or_insert(0) += 1;
        }
        m
    }

    pub fn star_count(&self) -> usize {
        self.fibers.iter().filter(|f| f.fiber.is_star()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    #[serde(rename = "rational-elliptic")]
    RationalElliptic,
    #[serde(rename = "K3")]
    K3,
    #[serde(rename = "elliptic-elliptic")]
    EllipticElliptic,
    #[serde(rename = "trivial-family-abelian")]
    TrivialFamilyAbelian,
    #[serde(rename = "other")]
    Other,
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SurfaceKind::RationalElliptic => "rational-elliptic",
            SurfaceKind::K3 => "K3",
            SurfaceKind::EllipticElliptic => "elliptic-elliptic",
            SurfaceKind::TrivialFamilyAbelian => "trivial-family-abelian",
            SurfaceKind::Other => "other",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub e: i64,
    pub d: i64,
    pub p_g: i64,
    pub q: i64,
    pub b1: i64,
    pub b2: i64,
    pub h11: i64,
    pub kind: SurfaceKind,
    /// Set when `d = 0`: the Hodge formulas are applied outside their range.
    pub formula_extrapolation: bool,
}

pub fn invariants(c: &SurfaceConfig) -> Result<SurfaceInvariants, SurfaceError> {
    let e = c.euler();
    if !e.is_multiple_of(12) {
        return Err(SurfaceError::EulerNotDivisibleBy12(e));
    }
    let e = e as i64;
    let g = c.base_genus as i64;
    let d = e / 12;
    let p_g = d + g - 1;
    let q = g;
    let b1 = 2 * q;
    let b2 = e - 2 + 2 * b1;
    let h11 = b2 - 2 * p_g;
    let kind = match (g, d) {
        (_, 0) => SurfaceKind::TrivialFamilyAbelian,
        (0, 1) => SurfaceKind::RationalElliptic,
        (0, 2) => SurfaceKind::K3,
        (1, 1) => SurfaceKind::EllipticElliptic,
        _ => SurfaceKind::Other,
    };
    Ok(SurfaceInvariants {
        e,
        d,
        p_g,
        q,
        b1,
        b2,
        h11,
        kind,
        formula_extrapolation: d == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranch {
    branch: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    fresh: Vec<String>,
}

/// Branch locus of a double cover of the base curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBranch", into = "RawBranch")]
pub struct BranchSpec {
    branch: Vec<String>,
    fresh: Vec<String>,
}

impl TryFrom<RawBranch> for BranchSpec {
    type Error = SurfaceError;

    fn try_from(r: RawBranch) -> Result<Self, SurfaceError> {
        BranchSpec::new(r.branch, r.fresh)
    }
}

impl From<BranchSpec> for RawBranch {
    fn from(b: BranchSpec) -> Self {
        RawBranch {
            branch: b.branch,
            fresh: b.fresh,
        }
    }
}

impl BranchSpec {
    /// Checks that labels are distinct and that every fresh label is used.
    /// Parity and label resolution are checked against a configuration.
    pub fn new(branch: Vec<String>, fresh: Vec<String>) -> Result<Self, SurfaceError> {
        let mut seen = BTreeSet::new();
        for l in &branch {
            if !seen.insert(l.as_str()) {
                return Err(SurfaceError::DuplicateBranchLabel(l.clone()));
            }
        }
        let mut fresh_seen = BTreeSet::new();
        for f in &fresh {
            if !seen.contains(f.as_str()) {
                return Err(SurfaceError::UnusedFreshLabel(f.clone()));
            }
            if !fresh_seen.insert(f.as_str()) {
                return Err(SurfaceError::DuplicateBranchLabel(f.clone()));
            }
        }
        Ok(BranchSpec { branch, fresh })
    }

    pub fn of<S: AsRef<str>>(branch: &[S], fresh: &[S]) -> Result<Self, SurfaceError> {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect();
        BranchSpec::new(own(branch), own(fresh))
    }

    pub fn labels(&self) -> &[String] {
        &self.branch
    }

    pub fn fresh(&self) -> &[String] {
        &self.fresh
    }

    pub fn is_fresh(&self, label: &str) -> bool {
        self.fresh.iter().any(|f| f == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.branch.iter().any(|b| b == label)
    }

    pub fn len(&self) -> usize {
        self.branch.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branch.is_empty()
    }

    /// The same spec with some branch labels removed.
    pub fn without(&self, drop: &[&str]) -> BranchSpec {
        let keep = |l: &String| !drop.contains(&l.as_str());
        BranchSpec {
            branch: self.branch.iter().filter(|l| keep(l)).cloned().collect(),
            fresh: self.fresh.iter().filter(|l| keep(l)).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointAction {
    /// Ramification over a fiber of the configuration.
    Branched,
    /// Ramification over a generic smooth fiber.
    BranchedFresh,
    /// Unbranched fiber, pulled back to two copies.
    Duplicated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointLog {
    pub label: String,
    pub action: PointAction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<KodairaFiber>,
    pub to: Vec<KodairaFiber>,
    pub delta: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<RowSource>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub delta: u32,
    pub d: i64,
    pub d_prime: i64,
    pub base_genus: u32,
    pub log: Vec<PointLog>,
    /// Branched non-star singular fibers; their image types come from
    /// derived rows, not the star table.
    pub derived_rows: Vec<String>,
}

/// Double cover of the base branched at `b`, pulled back and made
/// relatively minimal.
pub fn quadratic_base_change(
    c: &SurfaceConfig,
    b: &BranchSpec,
) -> Result<(SurfaceConfig, DefectReport), SurfaceError> {
    for f in b.fresh() {
        if c.fiber(f).is_some() {
            return Err(SurfaceError::FreshLabelCollides(f.clone()));
        }
    }
    for l in b.labels() {
        if c.fiber(l).is_none() && !b.is_fresh(l) {
            return Err(SurfaceError::UnknownLabel(l.clone()));
        }
    }
    if !b.len().is_multiple_of(2) {
        return Err(SurfaceError::OddBranchCount(b.len()));
    }
    if c.base_genus == 0 && b.is_empty() {
        return Err(SurfaceError::UnramifiedCoverOfRationalCurve);
    }
    let before = invariants(c)?;

    let mut fibers = Vec::new();
    let mut log = Vec::new();
    let mut delta = 0;
    let mut derived_rows = Vec::new();
    for lf in c.fibers() {
        if b.contains(&lf.label) {
            let image = lf.fiber.quadratic_base_change();
            let dv = lf.fiber.delta()?;
            delta += dv;
            let row = lf.fiber.base_change_source();
            if row == RowSource::Derived && !lf.fiber.is_smooth() {
                derived_rows.push(lf.label.clone());
            }
            let to = if image.is_smooth() {
                vec![]
            } else {
                vec![image]
            };
            if !image.is_smooth() {
                fibers.push(LabeledFiber {
                    label: lf.label.clone(),
                    fiber: image,
                });
            }
            log.push(PointLog {
                label: lf.label.clone(),
                action: PointAction::Branched,
                from: Some(lf.fiber),
                to,
                delta: dv,
                row: Some(row),
            });
        } else if !lf.fiber.is_smooth() {
            for k in 1..=2 {
                fibers.push(LabeledFiber {
                    label: format!("{}/{k}", lf.label),
                    fiber: lf.fiber,
                });
            }
            log.push(PointLog {
                label: lf.label.clone(),
                action: PointAction::Duplicated,
                from: Some(lf.fiber),
                to: vec![lf.fiber, lf.fiber],
                delta: 0,
                row: None,
            });
        }
    }
    for f in b.fresh() {
        log.push(PointLog {
            label: f.clone(),
            action: PointAction::BranchedFresh,
            from: None,
            to: vec![],
            delta: 0,
            row: None,
        });
    }

    // Riemann–Hurwitz: 2g' - 2 = 2(2g - 2) + |b|.
    let genus = 2 * c.base_genus as i64 - 1 + (b.len() / 2) as i64;
    let genus = u32::try_from(genus)
        .map_err(|_| SurfaceError::InternalInconsistency(format!("negative genus {genus}")))?;
    let name = format!("{}[{}]", c.name, b.labels().join(","));
    let new = SurfaceConfig::new(name, genus, fibers)?;
    let after = invariants(&new)?;
    let d_prime = 2 * before.d - delta as i64;
    if after.d != d_prime || 2 * before.e - after.e != 12 * delta as i64 {
        return Err(SurfaceError::InternalInconsistency(format!(
            "defect bookkeeping: d = {}, delta = {delta}, but the cover has d = {}",
            before.d, after.d
        )));
    }
    Ok((
        new,
        DefectReport {
            delta,
            d: before.d,
            d_prime,
            base_genus: genus,
            log,
            derived_rows,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use KodairaFiber::*;

    fn kummer() -> SurfaceConfig {
        SurfaceConfig::from_types("X", 0, &[IIStar, IVStar, IStar(0)])
    }

    fn sorted(c: &SurfaceConfig) -> Vec<KodairaFiber> {
        let mut v: Vec<_> = c.fibers().iter().map(|f| f.fiber).collect();
        v.sort();
        v
    }

    fn types(mut v: Vec<KodairaFiber>) -> Vec<KodairaFiber> {
        v.sort();
        v
    }

    #[test]
    fn invariant_examples() {
        let inv = invariants(&kummer()).unwrap();
        assert_eq!((inv.e, inv.d, inv.p_g, inv.q, inv.h11), (24, 2, 1, 0, 20));
        assert_eq!(inv.kind, SurfaceKind::K3);
        assert_eq!(inv.b2, 22);

        let ee = SurfaceConfig::from_types("S", 1, &[IVStar, IV]);
        let inv = invariants(&ee).unwrap();
        assert_eq!((inv.e, inv.d, inv.p_g, inv.q, inv.h11), (12, 1, 1, 1, 12));
        assert_eq!(inv.kind, SurfaceKind::EllipticElliptic);

        let ab = invariants(&SurfaceConfig::from_types("A", 1, &[])).unwrap();
        assert_eq!(
            (ab.e, ab.d, ab.kind, ab.formula_extrapolation),
            (0, 0, SurfaceKind::TrivialFamilyAbelian, true)
        );

        let rat = invariants(&SurfaceConfig::from_types("R", 0, &[IIStar, II])).unwrap();
        assert_eq!(rat.kind, SurfaceKind::RationalElliptic);
        assert_eq!(
            invariants(&SurfaceConfig::from_types("B", 0, &[IIStar])),
            Err(SurfaceError::EulerNotDivisibleBy12(10))
        );
    }

    #[test]
    fn kummer_base_changes() {
        let x = kummer();
        let cases: [(&[&str], u32, Vec<KodairaFiber>, u32); 4] = [
            (&["1", "2"], 0, vec![IIStar, IIStar, IV], 2),
            (&["0", "2"], 0, vec![IVStar, IVStar, IVStar], 2),
            (&["0", "1"], 0, vec![IStar(0), IStar(0), IV, IVStar], 2),
            (&["0", "1", "2", "t"], 1, vec![IVStar, IV], 3),
        ];
        for (branch, genus, expected, delta) in cases {
            let fresh: &[&str] = if branch.contains(&"t") { &["t"] } else { &[] };
            let (y, rep) =
                quadratic_base_change(&x, &BranchSpec::of(branch, fresh).unwrap()).unwrap();
            assert_eq!(y.base_genus(), genus);
            assert_eq!(sorted(&y), types(expected));
            assert_eq!(rep.delta, delta);
            assert_eq!(rep.d_prime, 4 - delta as i64);
        }
        let (s, _) =
            quadratic_base_change(&x, &BranchSpec::of(&["0", "1", "2", "t"], &["t"]).unwrap())
                .unwrap();
        assert_eq!(invariants(&s).unwrap().kind, SurfaceKind::EllipticElliptic);
    }

    #[test]
    fn four_star_branch_gives_abelian() {
        let c = SurfaceConfig::from_types("Q", 0, &[IStar(0); 4]);
        let (y, rep) =
            quadratic_base_change(&c, &BranchSpec::of(&["0", "1", "2", "3"], &[]).unwrap())
                .unwrap();
        assert!(y.fibers().is_empty());
        assert_eq!((y.base_genus(), rep.delta, rep.d_prime), (1, 4, 0));
        assert_eq!(
            invariants(&y).unwrap().kind,
            SurfaceKind::TrivialFamilyAbelian
        );
    }

    #[test]
    fn duplication_labels_and_derived_rows() {
        let c = SurfaceConfig::from_types("C", 0, &[IIStar, IV, I(8), II]);
        let (y, rep) =
            quadratic_base_change(&c, &BranchSpec::of(&["0", "1"], &[]).unwrap()).unwrap();
        let labels: Vec<&str> = y.fibers().iter().map(|f| f.label.as_str()).collect();
        assert_eq!(labels, ["0", "1", "2/1", "2/2", "3/1", "3/2"]);
        assert_eq!(rep.derived_rows, vec!["1".to_string()]);
        assert_eq!(rep.delta, 1);
    }

    #[test]
    fn branch_errors() {
        let x = kummer();
        let spec = |b: &[&str], f: &[&str]| BranchSpec::of(b, f).unwrap();
        assert_eq!(
            quadratic_base_change(&x, &spec(&["0"], &[])).unwrap_err(),
            SurfaceError::OddBranchCount(1)
        );
        assert_eq!(
            quadratic_base_change(&x, &spec(&["0", "q"], &[])).unwrap_err(),
            SurfaceError::UnknownLabel("q".into())
        );
        assert_eq!(
            quadratic_base_change(&x, &spec(&["0", "1"], &["1"])).unwrap_err(),
            SurfaceError::FreshLabelCollides("1".into())
        );
        assert_eq!(
            quadratic_base_change(&x, &spec(&[], &[])).unwrap_err(),
            SurfaceError::UnramifiedCoverOfRationalCurve
        );
        assert_eq!(
            BranchSpec::of(&["0", "0"], &[]).unwrap_err(),
            SurfaceError::DuplicateBranchLabel("0".into())
        );
        assert_eq!(
            BranchSpec::of(&["0"], &["t"]).unwrap_err(),
            SurfaceError::UnusedFreshLabel("t".into())
        );
    }

    #[test]
    fn unramified_cover_of_elliptic_base() {
        let c = SurfaceConfig::from_types("E", 1, &[IVStar, IV]);
        let (y, rep) =
            quadratic_base_change(&c, &BranchSpec::of::<&str>(&[], &[]).unwrap()).unwrap();
        assert_eq!((y.base_genus(), rep.delta, y.fibers().len()), (1, 0, 4));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let json = r#"{"name":"X","base_genus":0,"fibers":[{"label":"0","type":"II*"},{"label":"1","type":"IV*"},{"label":"2","type":"I0*"}]}"#;
        let c: SurfaceConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c, kummer());
        assert_eq!(serde_json::to_string(&c).unwrap(), json);
        let dup = r#"{"name":"X","base_genus":0,"fibers":[{"label":"0","type":"II*"},{"label":"0","type":"IV*"}]}"#;
        assert!(serde_json::from_str::<SurfaceConfig>(dup)
            .unwrap_err()
            .to_string()
            .contains("more than once"));
        let bad = r#"{"name":"X","base_genus":0,"fibers":[{"label":"0","type":"V*"}]}"#;
        assert!(serde_json::from_str::<SurfaceConfig>(bad).is_err());
        let b: BranchSpec = serde_json::from_str(r#"{"branch":["0","t"],"fresh":["t"]}"#).unwrap();
        assert!(b.is_fresh("t") && !b.is_fresh("0"));
    }
}
