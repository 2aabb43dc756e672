// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! End-to-end verification of a degenerating family.
//!
//! From a K3 seed `X` and a branch spec with one fresh point `t`, the
//! pipeline builds the nearby fiber `S_t` (branched at every listed point)
//! and one limit `Y_ℓ` per non-fresh label (branched at all points except
//! `ℓ` and `t`). It then
//!
//! 1. runs Shioda–Tate on every stage with a declared Picard number,
//! 2. obtains `T` of each limit exactly (Shioda–Inose unscaling or a declared
//!    identification) or up to the double-cover candidates,
//! 3. transports a rigid limit lattice to `S_t`,
//! 4. compares discriminants through the specialization index.
//!
//! Every input taken on trust is listed in the report's assumption ledger.

mod assumptions;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use thiserror::Error;

pub use assumptions::{
    Assumptions, HodgeId, HodgeNote, SameTranscendental, ScopedFact, SeedTranscendental, StageNote,
    TorsionNote,
};
pub use report::{
    Claim, Composition, Failure, IndexEntry, LatticeFindings, LedgerEntry, NearbyFinding, Report,
    RigidityFinding, Role, ShiodaInoseFinding, StageIndex, StageRecord, StageVerdict, Status,
    Stopped, Tag, TranscendentalRecord, SCHEMA_VERSION,
};

use crate::io::{parse_json, read_json, InputError};
use crate::kodaira::{KodairaFiber, RowSource};
use crate::lattice::{is_isometric_binary, GramLattice, LatticeError};
use crate::mordell_weil::{check_disc_consistency, ratio_string, shioda_tate, MordellWeilError};
use crate::surfaces::{
    invariants, quadratic_base_change, BranchSpec, SurfaceConfig, SurfaceError, SurfaceKind,
};
use crate::transcendental::{
    double_cover_disc_candidates, resolve_disc, rigidity_transfer, shioda_inose_unscale,
    specialization_index, Exclusion, ExclusionFact, Resolution, TranscendentalError,
    DEFAULT_INDEX_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    MordellWeil(#[from] MordellWeilError),
    #[error(transparent)]
    Transcendental(#[from] TranscendentalError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unknown example {0}; expected 1 or 2")]
    UnknownExample(u8),
    #[error("the seed must be a K3 surface with e = 24, got {kind} with e = {e}")]
    SeedNotK3 { kind: SurfaceKind, e: i64 },
    #[error("the branch spec must declare exactly one fresh label, got {0}")]
    FreshCount(usize),
    #[error("{field}: unknown stage {stage:?}")]
    UnknownStage { field: String, stage: String },
    #[error("{field}: invalid assumption: {message}")]
    InvalidAssumption { field: String, message: String },
    #[error("contradiction at stage {stage}: {reason}")]
    Contradiction { stage: String, reason: String },
    #[error("claim {key}: expected {expected}, computed {actual}")]
    ExpectedMismatch {
        key: String,
        expected: String,
        actual: String,
    },
    #[error("claim {0} is expected but was not produced")]
    ExpectedMissing(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineInput {
    pub seed: SurfaceConfig,
    pub branch: BranchSpec,
    pub assumptions: Assumptions,
}

const EXAMPLES: [[(&str, &str); 3]; 2] = [
    [
        (
            "example1/config.json",
            include_str!("../../data/example1/config.json"),
        ),
        (
            "example1/branch.json",
            include_str!("../../data/example1/branch.json"),
        ),
        (
            "example1/assumptions.json",
            include_str!("../../data/example1/assumptions.json"),
        ),
    ],
    [
        (
            "example2/config.json",
            include_str!("../../data/example2/config.json"),
        ),
        (
            "example2/branch.json",
            include_str!("../../data/example2/branch.json"),
        ),
        (
            "example2/assumptions.json",
            include_str!("../../data/example2/assumptions.json"),
        ),
    ],
];

/// Raw text of the bundled files of example `id`, as `(name, contents)`.
pub fn example_files(id: u8) -> Result<[(&'static str, &'static str); 3], PipelineError> {
    match id {
        1 | 2 => Ok(EXAMPLES[id as usize - 1]),
        _ => Err(PipelineError::UnknownExample(id)),
    }
}

pub fn load_example(id: u8) -> Result<PipelineInput, PipelineError> {
    let [(cn, c), (bn, b), (an, a)] = example_files(id)?;
    let branch = parse_json(b, bn)?;
    check_fresh(&branch, bn)?;
    Ok(PipelineInput {
        seed: parse_json(c, cn)?,
        branch,
        assumptions: parse_json(a, an)?,
    })
}

pub fn load_files(
    config: &Path,
    branch: &Path,
    assumptions: &Path,
) -> Result<PipelineInput, PipelineError> {
    let seed = read_json(config)?;
    let b = read_json(branch)?;
    check_fresh(&b, &branch.display().to_string())?;
    Ok(PipelineInput {
        seed,
        branch: b,
        assumptions: read_json(assumptions)?,
    })
}

fn check_fresh(b: &BranchSpec, origin: &str) -> Result<(), InputError> {
    match b.fresh().len() {
        1 => Ok(()),
        n => Err(InputError::Schema {
            origin: origin.into(),
            field: "fresh".into(),
            message: format!("exactly one fresh label is required, got {n}"),
        }),
    }
}

pub fn run_example(id: u8) -> Result<Report, PipelineError> {
    run(&load_example(id)?)
}

pub fn run_custom(
    config: &Path,
    branch: &Path,
    assumptions: &Path,
) -> Result<Report, PipelineError> {
    run(&load_files(config, branch, assumptions)?)
}

pub fn run(input: &PipelineInput) -> Result<Report, PipelineError> {
    Engine::new(input)?.run()
}

/// Fiber list as sorted tokens, e.g. `I0*,I0*,IV,IV*`.
pub fn fiber_list(c: &SurfaceConfig) -> String {
    let mut v: Vec<KodairaFiber> = c.fibers().iter().map(|f| f.fiber).collect();
    v.sort();
    v.iter().map(|f| f.token()).collect::<Vec<_>>().join(",")
}

#[derive(Default)]
struct Ledger {
    entries: BTreeMap<String, LedgerEntry>,
}

impl Ledger {
    fn consume(
        &mut self,
        id: String,
        kind: &str,
        statement: String,
        provenance: &str,
        user: &str,
    ) -> String {
        let e = self
            .entries
            .entry(id.clone())
            .or_insert_with(|| LedgerEntry {
                id: id.clone(),
                kind: kind.into(),
                statement,
                provenance: provenance.into(),
                used_by: Vec::new(),
            });
        if !e.used_by.iter().any(|u| u == user) {
            e.used_by.push(user.into());
        }
        id
    }
}

fn push_unique(v: &mut Vec<String>, id: String) {
    if !v.contains(&id) {
        v.push(id);
    }
}

fn describe(fact: &ExclusionFact) -> String {
    match &fact.exclusion {
        Exclusion::NotIsomorphicTo(f) => format!("T is not isometric to {f}"),
        Exclusion::NoFibrationWithFibers { form, fibers } => {
            let names: Vec<String> = fibers.iter().map(|f| f.token()).collect();
            format!(
                "the K3 surface with T = {form} has no elliptic fibration with fibers {}",
                names.join(",")
            )
        }
        Exclusion::DenominatorBound => {
            "candidates violating the Mordell-Weil denominator bound are excluded".into()
        }
    }
}

struct Engine<'a> {
    input: &'a PipelineInput,
    fresh: String,
    stages: Vec<StageRecord>,
    ledger: Ledger,
    /// Ledger ids each stage's `T` rests on.
    t_deps: BTreeMap<String, Vec<String>>,
    lattice: LatticeFindings,
    notes: Vec<String>,
}

impl<'a> Engine<'a> {
    fn new(input: &'a PipelineInput) -> Result<Self, PipelineError> {
        let fresh = match input.branch.fresh() {
            [t] => t.clone(),
            other => return Err(PipelineError::FreshCount(other.len())),
        };
        let lattice = LatticeFindings {
            seed: input.assumptions.seed_transcendental.gram.clone(),
            shioda_inose: None,
            rigidity: Vec::new(),
            nearby: None,
            composition: None,
        };
        Ok(Engine {
            input,
            fresh,
            stages: Vec::new(),
            ledger: Ledger::default(),
            t_deps: BTreeMap::new(),
            lattice,
            notes: Vec::new(),
        })
    }

    fn a(&self) -> &'a Assumptions {
        &self.input.assumptions
    }

    fn idx(&self, name: &str) -> usize {
        self.stages
            .iter()
            .position(|s| s.name == name)
            .expect("stage exists")
    }

    fn limit_names(&self) -> Vec<String> {
        self.stages
            .iter()
            .filter(|s| s.role == Role::Limit)
            .map(|s| s.name.clone())
            .collect()
    }

    fn consume(
        &mut self,
        stage: &str,
        id: String,
        kind: &str,
        statement: String,
        provenance: &str,
    ) -> String {
        let id = self.ledger.consume(id, kind, statement, provenance, stage);
        if let Some(i) = self.stages.iter().position(|s| s.name == stage) {
            push_unique(&mut self.stages[i].conditional_on, id.clone());
        }
        id
    }

    fn consume_hodge(&mut self, stage: &str, id: HodgeId) -> Option<String> {
        let h = self.a().hodge(id)?;
        Some(self.consume(
            stage,
            format!("hodge:{}", id.as_str()),
            "hodge",
            h.statement.clone(),
            &h.provenance,
        ))
    }

    fn skip(&mut self, stage: &str, reason: impl Into<String>) {
        let i = self.idx(stage);
        self.stages[i].skipped.push(reason.into());
    }

    fn torsion(&mut self, stage: &str) -> u64 {
        let (order, id, kind, provenance) = match self.a().torsion(stage) {
            Some(t) => (
                t.order,
                format!("torsion:{stage}"),
                "torsion",
                t.provenance.as_str(),
            ),
            None => (
                1,
                format!("torsion_default:{stage}"),
                "torsion_default",
                "default when no torsion order is declared",
            ),
        };
        self.consume(
            stage,
            id,
            kind,
            format!("|MW_tors({stage})| = {order}"),
            provenance,
        );
        let i = self.idx(stage);
        self.stages[i].torsion = Some(order);
        order
    }

    fn consume_seed(&mut self, stage: &str) -> String {
        let seed = &self.a().seed_transcendental;
        self.consume(
            stage,
            "seed_transcendental".into(),
            "seed_transcendental",
            format!("T(X) = {}", seed.gram),
            &seed.provenance,
        )
    }

    fn validate(&self) -> Result<(), PipelineError> {
        let a = self.a();
        let names: BTreeSet<&str> = self.stages.iter().map(|s| s.name.as_str()).collect();
        for (field, stage) in a.stage_refs() {
            if !names.contains(stage) {
                return Err(PipelineError::UnknownStage {
                    field,
                    stage: stage.into(),
                });
            }
        }
        for (field, p) in a.provenances() {
            if p.trim().is_empty() {
                return Err(PipelineError::InvalidAssumption {
                    field,
                    message: "provenance must be nonempty".into(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for (i, h) in a.hodge.iter().enumerate() {
            if !seen.insert(h.id) {
                return Err(PipelineError::InvalidAssumption {
                    field: format!("hodge[{i}].id"),
                    message: format!("{} is declared twice", h.id.as_str()),
                });
            }
        }
        if matches!(a.index_bound, Some(b) if b < 2) {
            return Err(PipelineError::InvalidAssumption {
                field: "index_bound".into(),
                message: "the index bound must be at least 2".into(),
            });
        }
        let t = &a.seed_transcendental.gram;
        if t.rank() != 2 || !t.is_even() || !t.is_positive_definite() {
            return Err(PipelineError::InvalidAssumption {
                field: "seed_transcendental.gram".into(),
                message: format!("{t} is not an even positive definite lattice of rank 2"),
            });
        }
        Ok(())
    }

    fn run(mut self) -> Result<Report, PipelineError> {
        let seed = &self.input.seed;
        let branch = &self.input.branch;
        let x_inv = invariants(seed)?;
        if x_inv.kind != SurfaceKind::K3 || x_inv.e != 24 {
            return Err(PipelineError::SeedNotK3 {
                kind: x_inv.kind,
                e: x_inv.e,
            });
        }
        self.stages
            .push(record("X", Role::Seed, None, seed.clone(), x_inv, None));
        let (s_cfg, s_def) = quadratic_base_change(seed, branch)?;
        let s_inv = invariants(&s_cfg)?;
        let st_kind = s_inv.kind;
        self.stages.push(record(
            "S_t",
            Role::Nearby,
            Some(branch.labels().to_vec()),
            s_cfg,
            s_inv,
            Some(s_def),
        ));
        let labels: Vec<String> = branch
            .labels()
            .iter()
            .filter(|l| !branch.is_fresh(l))
            .cloned()
            .collect();
        for l in &labels {
            let b = branch.without(&[l.as_str(), self.fresh.as_str()]);
            let (cfg, def) = quadratic_base_change(seed, &b)?;
            let inv = invariants(&cfg)?;
            self.stages.push(record(
                &format!("Y{l}"),
                Role::Limit,
                Some(b.labels().to_vec()),
                cfg,
                inv,
                Some(def),
            ));
        }
        self.validate()?;

        if st_kind != SurfaceKind::EllipticElliptic {
            self.stages.truncate(2);
            self.shioda_tate_all()?;
            let reason = format!(
                "S_t is {st_kind}, not elliptic-elliptic; the family has no K3 limits to compare"
            );
            return self.finish(
                Some(Stopped {
                    stage: "S_t".into(),
                    reason,
                }),
                None,
            );
        }

        self.shioda_tate_all()?;
        self.seed_stage()?;
        self.exact_limits()?;
        for name in self.limit_names() {
            if self.stages[self.idx(&name)].transcendental.is_none() {
                self.alpha_stage(&name)?;
            }
        }
        self.nearby()?;
        self.composition()?;
        let failure = self.failure()?;
        self.finish(None, failure)
    }

    fn shioda_tate_all(&mut self) -> Result<(), PipelineError> {
        for i in 0..self.stages.len() {
            let name = self.stages[i].name.clone();
            match self.a().picard_maximal(&name) {
                Some(p) => {
                    let rho = self.stages[i].invariants.h11;
                    self.consume(
                        &name,
                        format!("picard_maximal:{name}"),
                        "picard_maximal",
                        format!("rho({name}) = h11 = {rho}"),
                        &p.provenance,
                    );
                    let st = shioda_tate(&self.stages[i].config, rho, None, 1)?;
                    let s = &mut self.stages[i];
                    s.rho = Some(rho);
                    s.shioda_tate = Some(st);
                }
                None => self.skip(
                    &name,
                    "shioda_tate: no picard_maximal assumption, so rho is unknown",
                ),
            }
        }
        Ok(())
    }

    /// Runs the Mordell–Weil check for a stage whose `T` is known exactly.
    /// Anything but consistency aborts the run.
    fn exact_mwl_check(&mut self, name: &str, disc: &BigInt) -> Result<(), PipelineError> {
        let i = self.idx(name);
        let Some(rho) = self.stages[i].rho else {
            self.skip(name, "mwl_check: rho is unknown");
            return Ok(());
        };
        if self.consume_hodge(name, HodgeId::UnimodularH2).is_none() {
            self.skip(
                name,
                "mwl_check: no unimodular_h2 assumption relating disc NS to disc T",
            );
            return Ok(());
        }
        let tor = self.torsion(name);
        let check = check_disc_consistency(&self.stages[i].config, disc, rho, tor)?;
        if let crate::mordell_weil::Consistency::Contradiction { reason } = &check.consistency {
            return Err(PipelineError::Contradiction {
                stage: name.into(),
                reason: reason.clone(),
            });
        }
        let s = &mut self.stages[i];
        if let Some(st) = &mut s.shioda_tate {
            st.mwl_disc = Some(check.mwl_disc.clone());
        }
        s.mwl_check = Some(check);
        Ok(())
    }

    fn set_exact(&mut self, name: &str, source: String, gram: GramLattice, deps: Vec<String>) {
        let i = self.idx(name);
        for d in &deps {
            push_unique(&mut self.stages[i].conditional_on, d.clone());
        }
        let disc = gram.disc().to_string();
        self.stages[i].transcendental = Some(TranscendentalRecord {
            source,
            gram: Some(gram),
            discs: vec![disc],
            candidates: Vec::new(),
            resolution: None,
        });
        self.t_deps.insert(name.into(), deps);
    }

    fn rank_check(&self, name: &str, t: &GramLattice) -> Result<(), PipelineError> {
        let s = &self.stages[self.idx(name)];
        if let Some(rho) = s.rho {
            let expected = s.invariants.b2 - rho;
            if expected != t.rank() as i64 {
                return Err(PipelineError::Contradiction {
                    stage: name.into(),
                    reason: format!("T has rank {} but b2 - rho = {expected}", t.rank()),
                });
            }
        }
        Ok(())
    }

    fn seed_stage(&mut self) -> Result<(), PipelineError> {
        let t = self.a().seed_transcendental.gram.clone();
        self.rank_check("X", &t)?;
        let id = self.consume_seed("X");
        self.set_exact("X", "seed".into(), t.clone(), vec![id]);
        self.exact_mwl_check("X", &t.disc())
    }

    fn exact_limits(&mut self) -> Result<(), PipelineError> {
        let a = self.a();
        if let Some(si) = &a.shioda_inose {
            let name = si.stage.clone();
            let i = self.idx(&name);
            if self.stages[i].role != Role::Limit {
                return Err(PipelineError::InvalidAssumption {
                    field: "shioda_inose.stage".into(),
                    message: format!("{name} is not a limit stage"),
                });
            }
            let seed = &self.input.seed;
            let expected: BTreeSet<&str> = seed
                .fibers()
                .iter()
                .filter(|f| f.fiber.is_star() && f.fiber != KodairaFiber::IIStar)
                .map(|f| f.label.as_str())
                .collect();
            let actual: BTreeSet<&str> = self.stages[i]
                .branch
                .iter()
                .flatten()
                .map(String::as_str)
                .collect();
            if expected != actual {
                return Err(PipelineError::InvalidAssumption {
                    field: "shioda_inose.stage".into(),
                    message: format!(
                        "{name} is branched at {{{}}}, but the Shioda-Inose cover is branched at the star fibers other than II*, {{{}}}",
                        actual.into_iter().collect::<Vec<_>>().join(","),
                        expected.into_iter().collect::<Vec<_>>().join(",")
                    ),
                });
            }
            let t_x = a.seed_transcendental.gram.clone();
            let t_y = shioda_inose_unscale(&t_x)?;
            self.rank_check(&name, &t_y)?;
            let seed_id = self.consume_seed(&name);
            let id = self.consume(
                &name,
                format!("shioda_inose:{name}"),
                "shioda_inose",
                format!("T({name})(2) = T(X)"),
                &si.provenance,
            );
            self.lattice.shioda_inose = Some(ShiodaInoseFinding {
                stage: name.clone(),
                t_x,
                t_y: t_y.clone(),
            });
            self.set_exact(&name, "shioda_inose".into(), t_y.clone(), vec![seed_id, id]);
            self.exact_mwl_check(&name, &t_y.disc())?;
        }
        for (k, same) in a.same_transcendental.iter().enumerate() {
            let (name, from) = (same.stage.clone(), same.same_as.clone());
            for (field, s) in [("stage", &name), ("as", &from)] {
                if self.stages[self.idx(s)].role != Role::Limit {
                    return Err(PipelineError::InvalidAssumption {
                        field: format!("same_transcendental[{k}].{field}"),
                        message: format!("{s} is not a limit stage"),
                    });
                }
            }
            let source = &self.stages[self.idx(&from)];
            let gram = match source.transcendental.as_ref().and_then(|t| t.gram.clone()) {
                Some(g) if self.stages[self.idx(&name)].transcendental.is_none() => g,
                _ => {
                    return Err(PipelineError::InvalidAssumption {
                        field: format!("same_transcendental[{k}]"),
                        message: format!(
                            "T({from}) must be known exactly and T({name}) not yet determined"
                        ),
                    })
                }
            };
            self.rank_check(&name, &gram)?;
            let mut deps = self.t_deps.get(&from).cloned().unwrap_or_default();
            for d in &deps {
                if let Some(e) = self.ledger.entries.get_mut(d) {
                    if !e.used_by.contains(&name) {
                        e.used_by.push(name.clone());
                    }
                }
            }
            let id = self.consume(
                &name,
                format!("same_transcendental:{name}"),
                "same_transcendental",
                format!("T({name}) = T({from})"),
                &same.provenance,
            );
            deps.push(id);
            self.set_exact(&name, format!("same_as:{from}"), gram.clone(), deps);
            self.exact_mwl_check(&name, &gram.disc())?;
        }
        Ok(())
    }

    fn alpha_stage(&mut self, name: &str) -> Result<(), PipelineError> {
        let i = self.idx(name);
        let Some(rho) = self.stages[i].rho else {
            self.skip(
                name,
                "transcendental: rho is unknown, so the rank of T is unknown",
            );
            return Ok(());
        };
        let rank = (self.stages[i].invariants.b2 - rho) as usize;
        let disc_tx = self.a().seed_transcendental.gram.disc();
        let candidates = match double_cover_disc_candidates(&disc_tx, rank) {
            Ok(c) => c,
            Err(TranscendentalError::UnsupportedRank(r)) => {
                self.skip(
                    name,
                    format!("transcendental: the double-cover analysis needs rank 2, got {r}"),
                );
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        let seed_id = self.consume_seed(name);
        let mut deps = vec![seed_id];
        let unimodular = self.a().hodge(HodgeId::UnimodularH2).is_some();
        let mut facts = Vec::new();
        let mut positions = Vec::new();
        for (pos, fact) in self.a().exclusions_for(name) {
            if fact.exclusion == Exclusion::DenominatorBound && !unimodular {
                self.skip(
                    name,
                    format!(
                        "exclusions[{pos}]: denominator_bound needs the unimodular_h2 assumption"
                    ),
                );
                continue;
            }
            deps.push(self.consume(
                name,
                format!("exclusion:{pos}"),
                "exclusion",
                describe(fact),
                &fact.provenance,
            ));
            facts.push(fact.clone());
            positions.push(pos);
        }
        let tor = if unimodular {
            deps.extend(self.consume_hodge(name, HodgeId::UnimodularH2));
            self.torsion(name)
        } else {
            self.skip(
                name,
                "sweep: no unimodular_h2 assumption relating disc NS to disc T",
            );
            1
        };
        let cfg = self.stages[i].config.clone();
        let mut res = match resolve_disc(&candidates, &facts, &cfg, rho, tor) {
            Ok(r) => r,
            Err(TranscendentalError::NothingSurvives { certificate }) => {
                let why: Vec<String> = certificate
                    .iter()
                    .map(|c| format!("{}: {}", c.disc, c.reason))
                    .collect();
                return Err(PipelineError::Contradiction {
                    stage: name.into(),
                    reason: format!(
                        "every candidate discriminant is excluded ({})",
                        why.join("; ")
                    ),
                });
            }
            Err(e) => return Err(e.into()),
        };
        for c in &mut res.certificate {
            for cv in &mut c.classes {
                cv.excluded_by = cv.excluded_by.map(|k| positions[k]);
            }
        }
        let mut sweep = Vec::new();
        if unimodular {
            for c in &candidates {
                sweep.push(check_disc_consistency(&cfg, &c.disc, rho, tor)?);
            }
        }
        let (discs, gram) = match &res.resolution {
            Resolution::Resolved { disc, form, .. } => (
                vec![disc.to_string()],
                form.as_ref().map(|f| f.to_lattice()),
            ),
            Resolution::Ambiguous { discs } => (discs.clone(), None),
        };
        if let Some(d) = res.resolved_disc() {
            if let Some(check) = sweep.iter().find(|c| &c.candidate == d) {
                if let crate::mordell_weil::Consistency::Contradiction { reason } =
                    &check.consistency
                {
                    return Err(PipelineError::Contradiction {
                        stage: name.into(),
                        reason: reason.clone(),
                    });
                }
                let check = check.clone();
                let s = &mut self.stages[i];
                if let Some(st) = &mut s.shioda_tate {
                    st.mwl_disc = Some(check.mwl_disc.clone());
                }
                s.mwl_check = Some(check);
            }
        }
        let s = &mut self.stages[i];
        s.sweep = sweep;
        s.transcendental = Some(TranscendentalRecord {
            source: "alpha_analysis".into(),
            gram,
            discs,
            candidates,
            resolution: Some(res),
        });
        self.t_deps.insert(name.into(), deps);
        Ok(())
    }

    fn nearby(&mut self) -> Result<(), PipelineError> {
        let Some(emb) = self.consume_hodge("S_t", HodgeId::SpecializationEmbedding) else {
            self.skip(
                "S_t",
                "transcendental: no specialization_embedding assumption",
            );
            return Ok(());
        };
        let bound = self.a().index_bound.unwrap_or(DEFAULT_INDEX_BOUND);
        let mut nearby: Option<NearbyFinding> = None;
        let mut deps = vec![emb];
        for name in self.limit_names() {
            let s = &self.stages[self.idx(&name)];
            let Some(t) = s
                .transcendental
                .as_ref()
                .filter(|t| t.source != "alpha_analysis")
                .and_then(|t| t.gram.clone())
            else {
                continue;
            };
            let certificate = rigidity_transfer(&t, bound)?;
            let rigid = certificate.is_rigid();
            self.lattice.rigidity.push(RigidityFinding {
                stage: name.clone(),
                certificate,
            });
            if !rigid {
                continue;
            }
            match &mut nearby {
                None => {
                    nearby = Some(NearbyFinding {
                        disc: t.disc().to_string(),
                        lattice: t,
                        from: vec![name.clone()],
                    });
                }
                Some(n) if is_isometric_binary(&n.lattice, &t)? => n.from.push(name.clone()),
                Some(n) => {
                    return Err(PipelineError::Contradiction {
                        stage: "S_t".into(),
                        reason: format!(
                            "rigid limit lattices {} ({}) and {t} ({name}) differ",
                            n.lattice, n.from[0]
                        ),
                    })
                }
            }
            for d in self.t_deps.get(&name).cloned().unwrap_or_default() {
                push_unique(&mut deps, d);
            }
        }
        let Some(n) = nearby else {
            self.skip(
                "S_t",
                "transcendental: no limit stage has a rigid transcendental lattice",
            );
            return Ok(());
        };
        for d in &deps {
            let e = self.ledger.entries.get_mut(d).expect("consumed");
            if !e.used_by.iter().any(|u| u == "S_t") {
                e.used_by.push("S_t".into());
            }
        }
        let t = n.lattice.clone();
        self.rank_check("S_t", &t)?;
        self.set_exact("S_t", "rigidity".into(), t.clone(), deps);
        self.lattice.nearby = Some(n);
        self.exact_mwl_check("S_t", &t.disc())
    }

    fn composition(&mut self) -> Result<(), PipelineError> {
        let Some(si) = &self.lattice.shioda_inose else {
            return Ok(());
        };
        let disc_tx = si.t_x.disc();
        let unscaled = si.t_y.disc();
        let quarter = &disc_tx / BigInt::from(4);
        let alpha0 = double_cover_disc_candidates(&disc_tx, 2)?[0].disc.clone();
        let holds = unscaled == quarter && quarter == alpha0 && &quarter * 4 == disc_tx;
        if !holds {
            return Err(PipelineError::Contradiction {
                stage: si.stage.clone(),
                reason: format!("disc T = {unscaled} disagrees with disc T(X)/4 = {quarter}"),
            });
        }
        self.lattice.composition = Some(Composition {
            unscaled_disc: unscaled.to_string(),
            quarter_disc_t_x: quarter.to_string(),
            alpha0_candidate: alpha0.to_string(),
            holds,
        });
        Ok(())
    }

    fn failure(&mut self) -> Result<Option<Failure>, PipelineError> {
        let Some(nearby) = self.lattice.nearby.clone() else {
            self.notes
                .push("failure: the nearby transcendental lattice is unknown".into());
            return Ok(None);
        };
        let Some(vhs) = self.consume_hodge("failure", HodgeId::ConstantVhs) else {
            self.notes.push(
                "failure: no constant_vhs assumption, so the classes need not be invariant".into(),
            );
            return Ok(None);
        };
        let nearby_disc: BigInt = nearby.disc.parse().expect("integer");
        let mut stages = Vec::new();
        let mut conditional_on = vec![vhs];
        for c in &self.stages[self.idx("S_t")].conditional_on {
            push_unique(&mut conditional_on, c.clone());
        }
        let mut index_set = BTreeSet::new();
        for name in self.limit_names() {
            let s = &self.stages[self.idx(&name)];
            let Some(t) = &s.transcendental else { continue };
            let mut entries = Vec::new();
            for d in &t.discs {
                let disc: BigInt = d.parse().expect("integer");
                entries.push(match specialization_index(&disc, &nearby_disc) {
                    Ok(si) => IndexEntry {
                        disc: d.clone(),
                        index: Some(si.index.to_string()),
                        compatible: true,
                    },
                    Err(LatticeError::NotPerfectSquareRatio { .. }) => IndexEntry {
                        disc: d.clone(),
                        index: None,
                        compatible: false,
                    },
                    Err(e) => return Err(e.into()),
                });
            }
            let idx: Vec<BigInt> = entries
                .iter()
                .filter_map(|e| e.index.as_ref())
                .map(|i| i.parse().expect("integer"))
                .collect();
            if idx.is_empty() {
                return Err(PipelineError::Contradiction {
                    stage: name,
                    reason: format!(
                        "no discriminant in {{{}}} is a square multiple of {nearby_disc}",
                        t.discs.join(",")
                    ),
                });
            }
            let one = BigInt::from(1);
            let verdict = if idx.iter().all(|i| *i > one) {
                StageVerdict::Fails
            } else if idx.iter().all(|i| *i == one) {
                StageVerdict::HoldsPossible
            } else {
                StageVerdict::Undetermined
            };
            if verdict == StageVerdict::Fails {
                index_set.extend(idx);
                for c in &s.conditional_on {
                    push_unique(&mut conditional_on, c.clone());
                }
            }
            stages.push(StageIndex {
                stage: name,
                resolved: t.is_determined(),
                entries,
                verdict,
            });
        }
        for id in &conditional_on {
            let e = self.ledger.entries.get_mut(id).expect("consumed");
            if !e.used_by.iter().any(|u| u == "failure") {
                e.used_by.push("failure".into());
            }
        }
        let verdict = if stages.iter().any(|s| s.verdict == StageVerdict::Fails) {
            StageVerdict::Fails
        } else if !stages.is_empty()
            && stages
                .iter()
                .all(|s| s.verdict == StageVerdict::HoldsPossible)
        {
            StageVerdict::HoldsPossible
        } else {
            StageVerdict::Undetermined
        };
        conditional_on.sort();
        Ok(Some(Failure {
            nearby_disc: nearby.disc,
            stages,
            index_set: index_set.iter().map(|i| i.to_string()).collect(),
            verdict,
            conditional_on,
        }))
    }

    fn finish(
        mut self,
        stopped: Option<Stopped>,
        failure: Option<Failure>,
    ) -> Result<Report, PipelineError> {
        let status = if stopped.is_some() {
            Status::Stopped
        } else {
            match &failure {
                Some(f) if f.verdict == StageVerdict::Fails => {
                    let limits = self.stages.iter().filter(|s| s.role == Role::Limit);
                    let pinned = limits
                        .clone()
                        .all(|s| s.transcendental.as_ref().is_some_and(|t| t.is_determined()));
                    if pinned && f.stages.len() == limits.count() {
                        Status::Verified
                    } else {
                        Status::Conditional
                    }
                }
                _ => Status::NotCertified,
            }
        };
        for s in &mut self.stages {
            s.conditional_on.sort();
        }
        let mut derived_rows: Vec<String> = self
            .stages
            .iter()
            .flat_map(|s| s.defect.iter().flat_map(|d| &d.log))
            .filter(|p| p.row == Some(RowSource::Derived))
            .filter_map(|p| Some(format!("{}->{}", p.from?, p.to.first()?)))
            .collect();
        derived_rows.sort();
        derived_rows.dedup();
        let mut claims = claims(&self.stages, failure.as_ref());
        apply_expected(&mut claims, &self.a().expected)?;
        Ok(Report {
            schema_version: SCHEMA_VERSION,
            name: self.input.seed.name().to_string(),
            status,
            stopped,
            stages: self.stages,
            lattice: self.lattice,
            failure,
            notes: self.notes,
            assumptions: self.ledger.entries.into_values().collect(),
            derived_rows,
            claims,
        })
    }
}

fn record(
    name: &str,
    role: Role,
    branch: Option<Vec<String>>,
    config: SurfaceConfig,
    invariants: crate::surfaces::SurfaceInvariants,
    defect: Option<crate::surfaces::DefectReport>,
) -> StageRecord {
    StageRecord {
        name: name.into(),
        role,
        branch,
        config,
        invariants,
        defect,
        rho: None,
        torsion: None,
        shioda_tate: None,
        transcendental: None,
        mwl_check: None,
        sweep: Vec::new(),
        skipped: Vec::new(),
        conditional_on: Vec::new(),
    }
}

fn claims(stages: &[StageRecord], failure: Option<&Failure>) -> Vec<Claim> {
    let mut out = Vec::new();
    let mut put = |key: String, value: String, tag: Tag| out.push(Claim { key, value, tag });
    for s in stages {
        let n = &s.name;
        let input_tag = if s.role == Role::Seed {
            Tag::Trivial
        } else {
            Tag::Derived
        };
        put(format!("{n}.fibers"), fiber_list(&s.config), input_tag);
        put(
            format!("{n}.base_genus"),
            s.config.base_genus().to_string(),
            input_tag,
        );
        let inv = &s.invariants;
        for (k, v) in [
            ("e", inv.e),
            ("d", inv.d),
            ("p_g", inv.p_g),
            ("q", inv.q),
            ("b2", inv.b2),
            ("h11", inv.h11),
        ] {
            put(format!("{n}.{k}"), v.to_string(), Tag::Derived);
        }
        put(format!("{n}.kind"), inv.kind.to_string(), Tag::Derived);
        if let Some(d) = &s.defect {
            put(format!("{n}.delta"), d.delta.to_string(), Tag::Derived);
            put(format!("{n}.d_prime"), d.d_prime.to_string(), Tag::Derived);
        }
        if let Some(rho) = s.rho {
            put(format!("{n}.rho"), rho.to_string(), Tag::Assumed);
        }
        if let Some(t) = s.torsion {
            put(format!("{n}.torsion"), t.to_string(), Tag::Assumed);
        }
        if let Some(st) = &s.shioda_tate {
            put(
                format!("{n}.trivial_rank"),
                st.trivial_rank.to_string(),
                Tag::Derived,
            );
            put(
                format!("{n}.trivial_disc"),
                st.trivial_disc.to_string(),
                Tag::Derived,
            );
            put(format!("{n}.mw_rank"), st.mw_rank.to_string(), Tag::Derived);
        }
        if let Some(t) = &s.transcendental {
            let t_tag = if t.source == "seed" {
                Tag::Assumed
            } else {
                Tag::Derived
            };
            if let Some(g) = &t.gram {
                put(format!("{n}.T"), g.to_string(), t_tag);
            }
            put(format!("{n}.disc_T"), t.discs.join("|"), t_tag);
            if !t.candidates.is_empty() {
                let c: Vec<String> = t.candidates.iter().map(|c| c.disc.to_string()).collect();
                put(format!("{n}.candidates"), c.join(","), Tag::Derived);
            }
            if let Some(Resolution::Resolved { alpha, .. }) =
                t.resolution.as_ref().map(|r| &r.resolution)
            {
                put(format!("{n}.alpha"), alpha.to_string(), Tag::Derived);
            }
        }
        match &s.mwl_check {
            Some(c) => {
                put(
                    format!("{n}.mwl_disc"),
                    ratio_string(&c.mwl_disc),
                    Tag::Derived,
                );
                put(format!("{n}.bound"), c.bound.to_string(), Tag::Derived);
            }
            None => {
                let discs = s
                    .transcendental
                    .as_ref()
                    .map(|t| t.discs.clone())
                    .unwrap_or_default();
                let open: Vec<_> = s
                    .sweep
                    .iter()
                    .filter(|c| discs.contains(&c.candidate.to_string()))
                    .collect();
                if !open.is_empty() {
                    let v: Vec<String> = open.iter().map(|c| ratio_string(&c.mwl_disc)).collect();
                    put(format!("{n}.mwl_disc"), v.join("|"), Tag::Derived);
                    put(
                        format!("{n}.bound"),
                        open[0].bound.to_string(),
                        Tag::Derived,
                    );
                }
            }
        }
    }
    if let Some(f) = failure {
        for s in &f.stages {
            let idx: Vec<&str> = s
                .entries
                .iter()
                .filter_map(|e| e.index.as_deref())
                .collect();
            put(format!("{}.index", s.stage), idx.join("|"), Tag::Derived);
            put(
                format!("{}.verdict", s.stage),
                s.verdict.as_str().into(),
                Tag::Derived,
            );
        }
        put(
            "failure.nearby_disc".into(),
            f.nearby_disc.clone(),
            Tag::Derived,
        );
        put(
            "failure.index_set".into(),
            f.index_set.join(","),
            Tag::Derived,
        );
        put(
            "failure.verdict".into(),
            f.verdict.as_str().into(),
            Tag::Derived,
        );
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

fn apply_expected(
    claims: &mut [Claim],
    expected: &BTreeMap<String, String>,
) -> Result<(), PipelineError> {
    for (key, value) in expected {
        let c = claims
            .iter_mut()
            .find(|c| &c.key == key)
            .ok_or_else(|| PipelineError::ExpectedMissing(key.clone()))?;
        if &c.value != value {
            return Err(PipelineError::ExpectedMismatch {
                key: key.clone(),
                expected: value.clone(),
                actual: c.value.clone(),
            });
        }
        if c.tag != Tag::Assumed {
            c.tag = Tag::Paper;
        }
    }
    Ok(())
}
