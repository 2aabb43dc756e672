// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Verification report: the JSON document and its text rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::lattice::GramLattice;
use crate::mordell_weil::{ratio_string, DiscCheck, ShiodaTateResult};
use crate::surfaces::{DefectReport, SurfaceConfig, SurfaceInvariants};
use crate::transcendental::{Candidate, DiscResolution, RigidityCertificate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Failure certified and every limit discriminant pinned down.
    Verified,
    /// Failure certified, but some limit discriminant is only known up to
    /// the listed alternatives.
    Conditional,
    NotCertified,
    Stopped,
}

impl Status {
    pub fn exit_code(self, strict: bool) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Conditional if !strict => 2,
            _ => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Conditional => "conditional",
            Status::NotCertified => "not_certified",
            Status::Stopped => "stopped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Seed,
    Nearby,
    Limit,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Seed => "seed",
            Role::Nearby => "nearby",
            Role::Limit => "limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stopped {
    pub stage: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscendentalRecord {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<GramLattice>,
    /// The discriminant, or every surviving alternative.
    pub discs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Candidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<DiscResolution>,
}

impl TranscendentalRecord {
    pub fn is_determined(&self) -> bool {
        self.discs.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Vec<String>>,
    pub config: SurfaceConfig,
    pub invariants: SurfaceInvariants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<DefectReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shioda_tate: Option<ShiodaTateResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcendental: Option<TranscendentalRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mwl_check: Option<DiscCheck>,
    /// Denominator test run on every candidate, for information.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<DiscCheck>,
    pub skipped: Vec<String>,
    pub conditional_on: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiodaInoseFinding {
    pub stage: String,
    pub t_x: GramLattice,
    pub t_y: GramLattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityFinding {
    pub stage: String,
    pub certificate: RigidityCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearbyFinding {
    pub lattice: GramLattice,
    pub disc: String,
    /// Limit stages whose rigid `T` was transported.
    pub from: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Composition {
    pub unscaled_disc: String,
    pub quarter_disc_t_x: String,
    pub alpha0_candidate: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeFindings {
    pub seed: GramLattice,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shioda_inose: Option<ShiodaInoseFinding>,
    pub rigidity: Vec<RigidityFinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nearby: Option<NearbyFinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<Composition>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StageVerdict {
    #[serde(rename = "LICT_fails")]
    Fails,
    #[serde(rename = "LICT_holds_possible")]
    HoldsPossible,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl StageVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StageVerdict::Fails => "LICT_fails",
            StageVerdict::HoldsPossible => "LICT_holds_possible",
            StageVerdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexEntry {
    pub disc: String,
    /// `None` when `disc / disc_nearby` is not a square.
    pub index: Option<String>,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageIndex {
    pub stage: String,
    pub resolved: bool,
    pub entries: Vec<IndexEntry>,
    pub verdict: StageVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub nearby_disc: String,
    pub stages: Vec<StageIndex>,
    /// Indices of the failing stages, ascending.
    pub index_set: Vec<String>,
    pub verdict: StageVerdict,
    pub conditional_on: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub id: String,
    pub kind: String,
    pub statement: String,
    pub provenance: String,
    pub used_by: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    /// Computed and equal to a value listed under `expected`.
    Paper,
    /// Read directly from the input.
    Trivial,
    Derived,
    Assumed,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Paper => "paper",
            Tag::Trivial => "trivial",
            Tag::Derived => "derived",
            Tag::Assumed => "assumed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub key: String,
    pub value: String,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped: Option<Stopped>,
    pub stages: Vec<StageRecord>,
    pub lattice: LatticeFindings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    pub notes: Vec<String>,
    pub assumptions: Vec<LedgerEntry>,
    /// Base change rows used that are not in the star table, as `from->to`.
    pub derived_rows: Vec<String>,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn exit_code(&self, strict: bool) -> i32 {
        self.status.exit_code(strict)
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn claim(&self, key: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.key == key)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "report: {}", self.name);
        let _ = writeln!(w, "status: {}", self.status.as_str());
        if let Some(s) = &self.stopped {
            let _ = writeln!(w, "stopped at {}: {}", s.stage, s.reason);
        }
        for st in &self.stages {
            render_stage(w, st);
        }
        let l = &self.lattice;
        let _ = writeln!(w, "\nlattices");
        let _ = writeln!(w, "  T(X) = {}", l.seed);
        if let Some(si) = &l.shioda_inose {
            let _ = writeln!(
                w,
                "  shioda-inose at {}: T(X) = {} = T({})(2) with T({}) = {}",
                si.stage, si.t_x, si.stage, si.stage, si.t_y
            );
        }
        for r in &l.rigidity {
            let verdict = if r.certificate.is_rigid() {
                "rigid"
            } else {
                "not rigid"
            };
            let _ = writeln!(
                w,
                "  {} T = {}: {} up to index {}",
                r.stage, r.certificate.lattice, verdict, r.certificate.index_bound
            );
        }
        if let Some(n) = &l.nearby {
            let _ = writeln!(
                w,
                "  T(S_t) = {} (disc {}) from {}",
                n.lattice,
                n.disc,
                n.from.join(", ")
            );
        }
        if let Some(c) = &l.composition {
            let _ = writeln!(
                w,
                "  composition: disc {} = disc T(X)/4 = {} = alpha 0 candidate {}: {}",
                c.unscaled_disc,
                c.quarter_disc_t_x,
                c.alpha0_candidate,
                if c.holds { "holds" } else { "fails" }
            );
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(w, "\nspecialization (nearby disc {})", f.nearby_disc);
            for s in &f.stages {
                let idx: Vec<String> = s
                    .entries
                    .iter()
                    .map(|e| match &e.index {
                        Some(i) => format!("disc {} index {i}", e.disc),
                        None => format!("disc {} incompatible", e.disc),
                    })
                    .collect();
                let res = if s.resolved { "resolved" } else { "ambiguous" };
                let _ = writeln!(
                    w,
                    "  {} ({res}): {} -> {}",
                    s.stage,
                    idx.join("; "),
                    s.verdict.as_str()
                );
            }
            let _ = writeln!(
                w,
                "  verdict: {} with index in {{{}}}",
                f.verdict.as_str(),
                f.index_set.join(", ")
            );
        }
        for n in &self.notes {
            let _ = writeln!(w, "note: {n}");
        }
        if !self.assumptions.is_empty() {
            let _ = writeln!(w, "\nassumptions");
            for a in &self.assumptions {
                let _ = writeln!(
                    w,
                    "  [{}] {} (source: {}; used by {})",
                    a.id,
                    a.statement,
                    a.provenance,
                    a.used_by.join(", ")
                );
            }
        }
        if !self.derived_rows.is_empty() {
            let _ = writeln!(
                w,
                "\nderived base change rows: {}",
                self.derived_rows.join(", ")
            );
        }
        let _ = writeln!(w, "\nclaims");
        for c in &self.claims {
            let _ = writeln!(w, "  {} = {} [{}]", c.key, c.value, c.tag.as_str());
        }
        out
    }
}

fn render_stage(w: &mut String, st: &StageRecord) {
    let inv = &st.invariants;
    let fibers: Vec<String> = st
        .config
        .fibers()
        .iter()
        .map(|f| format!("{}:{}", f.label, f.fiber))
        .collect();
    let _ = writeln!(w, "\nstage {} ({})", st.name, st.role.as_str());
    if let Some(b) = &st.branch {
        let _ = writeln!(w, "  branch: {}", b.join(", "));
    }
    let _ = writeln!(
        w,
        "  fibers: {} over genus {}",
        fibers.join(" "),
        st.config.base_genus()
    );
    let _ = writeln!(
        w,
        "  e={} d={} p_g={} q={} b2={} h11={} kind={}",
        inv.e, inv.d, inv.p_g, inv.q, inv.b2, inv.h11, inv.kind
    );
    if let Some(d) = &st.defect {
        let _ = writeln!(w, "  delta={} d'={}", d.delta, d.d_prime);
    }
    if let Some(t) = &st.shioda_tate {
        let _ = writeln!(
            w,
            "  rho={} trivial rank={} trivial disc={} mw rank={}",
            t.rho, t.trivial_rank, t.trivial_disc, t.mw_rank
        );
    }
    if let Some(t) = &st.transcendental {
        match &t.gram {
            Some(g) => {
                let _ = writeln!(w, "  T = {g} ({}), disc {}", t.source, t.discs.join(" | "));
            }
            None => {
                let _ = writeln!(w, "  disc T in {{{}}} ({})", t.discs.join(", "), t.source);
            }
        }
        for c in t.resolution.iter().flat_map(|r| &r.certificate) {
            let _ = writeln!(
                w,
                "    alpha {} disc {}: {}{}",
                c.alpha,
                c.disc,
                if c.excluded { "excluded, " } else { "" },
                c.reason
            );
        }
    }
    for c in &st.sweep {
        let _ = writeln!(
            w,
            "    denominator test disc {}: mwl {} bound {} {}",
            c.candidate,
            ratio_string(&c.mwl_disc),
            c.bound,
            verdict(c)
        );
    }
    if let Some(c) = &st.mwl_check {
        let _ = writeln!(
            w,
            "  mwl disc {} (bound {}) {}",
            ratio_string(&c.mwl_disc),
            c.bound,
            verdict(c)
        );
    }
    for s in &st.skipped {
        let _ = writeln!(w, "  skipped: {s}");
    }
    if !st.conditional_on.is_empty() {
        let _ = writeln!(w, "  conditional on: {}", st.conditional_on.join(", "));
    }
}

fn verdict(c: &DiscCheck) -> String {
    match &c.consistency {
        crate::mordell_weil::Consistency::Consistent => "consistent".into(),
        crate::mordell_weil::Consistency::Contradiction { reason } => {
            format!("contradiction: {reason}")
        }
    }
}
