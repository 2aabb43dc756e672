// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! The assumptions file: every input the pipeline takes on trust.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::GramLattice;
use crate::transcendental::ExclusionFact;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedTranscendental {
    pub gram: GramLattice,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageNote {
    pub stage: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SameTranscendental {
    pub stage: String,
    #[serde(rename = "as")]
    pub same_as: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionNote {
    pub stage: String,
    pub order: u64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScopedFact {
    pub stages: Vec<String>,
    pub fact: ExclusionFact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HodgeId {
    /// Trivial monodromy on the transcendental part of the family.
    ConstantVhs,
    /// Specialization embeds each limit `T` into the nearby `T` with finite index.
    SpecializationEmbedding,
    /// `|disc NS| = |disc T|`.
    UnimodularH2,
}

impl HodgeId {
    pub fn as_str(&self) -> &'static str {
        match self {
            HodgeId::ConstantVhs => "constant_vhs",
            HodgeId::SpecializationEmbedding => "specialization_embedding",
            HodgeId::UnimodularH2 => "unimodular_h2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeNote {
    pub id: HodgeId,
    pub statement: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assumptions {
    pub seed_transcendental: SeedTranscendental,
    #[serde(default)]
    pub picard_maximal: Vec<StageNote>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shioda_inose: Option<StageNote>,
    #[serde(default)]
    pub same_transcendental: Vec<SameTranscendental>,
    #[serde(default)]
    pub torsion: Vec<TorsionNote>,
    #[serde(default)]
    pub exclusions: Vec<ScopedFact>,
    #[serde(default)]
    pub hodge: Vec<HodgeNote>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_bound: Option<u64>,
    /// Reference values keyed by claim; each must be reproduced exactly.
    #[serde(default)]
    pub expected: BTreeMap<String, String>,
}

impl Assumptions {
    pub fn hodge(&self, id: HodgeId) -> Option<&HodgeNote> {
        self.hodge.iter().find(|h| h.id == id)
    }

    pub fn picard_maximal(&self, stage: &str) -> Option<&StageNote> {
        self.picard_maximal.iter().find(|p| p.stage == stage)
    }

    pub fn torsion(&self, stage: &str) -> Option<&TorsionNote> {
        self.torsion.iter().find(|t| t.stage == stage)
    }

    pub fn same_transcendental(&self, stage: &str) -> Option<&SameTranscendental> {
        self.same_transcendental.iter().find(|s| s.stage == stage)
    }

    /// `(position in the file, fact)` for every exclusion scoped to `stage`.
    pub fn exclusions_for(&self, stage: &str) -> Vec<(usize, &ExclusionFact)> {
        self.exclusions
            .iter()
            .enumerate()
            .filter(|(_, s)| s.stages.iter().any(|x| x == stage))
            .map(|(i, s)| (i, &s.fact))
            .collect()
    }

    /// Every `(json path, stage name)` the file refers to.
    pub(crate) fn stage_refs(&self) -> Vec<(String, &str)> {
        let mut out = Vec::new();
        for (i, p) in self.picard_maximal.iter().enumerate() {
            out.push((format!("picard_maximal[{i}].stage"), p.stage.as_str()));
        }
        if let Some(s) = &self.shioda_inose {
            out.push(("shioda_inose.stage".into(), s.stage.as_str()));
        }
        for (i, s) in self.same_transcendental.iter().enumerate() {
            out.push((format!("same_transcendental[{i}].stage"), s.stage.as_str()));
            out.push((format!("same_transcendental[{i}].as"), s.same_as.as_str()));
        }
        for (i, t) in self.torsion.iter().enumerate() {
            out.push((format!("torsion[{i}].stage"), t.stage.as_str()));
        }
        for (i, e) in self.exclusions.iter().enumerate() {
            for (j, s) in e.stages.iter().enumerate() {
                out.push((format!("exclusions[{i}].stages[{j}]"), s.as_str()));
            }
        }
        out
    }

    /// Every `(json path, provenance)` pair.
    pub(crate) fn provenances(&self) -> Vec<(String, &str)> {
        let mut out = vec![(
            "seed_transcendental.provenance".to_string(),
            self.seed_transcendental.provenance.as_str(),
        )];
        for (i, p) in self.picard_maximal.iter().enumerate() {
            out.push((
                format!("picard_maximal[{i}].provenance"),
                p.provenance.as_str(),
            ));
        }
        if let Some(s) = &self.shioda_inose {
            out.push(("shioda_inose.provenance".into(), s.provenance.as_str()));
        }
        for (i, s) in self.same_transcendental.iter().enumerate() {
            out.push((
                format!("same_transcendental[{i}].provenance"),
                s.provenance.as_str(),
            ));
        }
        for (i, t) in self.torsion.iter().enumerate() {
            out.push((format!("torsion[{i}].provenance"), t.provenance.as_str()));
        }
        for (i, h) in self.hodge.iter().enumerate() {
            out.push((format!("hodge[{i}].provenance"), h.provenance.as_str()));
        }
        out
    }
}
