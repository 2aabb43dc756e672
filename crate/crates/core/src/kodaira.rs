// Copyright (c) 2026, The ictz authors.
// SPDX-License-Identifier: Apache-2.0

//! Kodaira fiber types and their numerical data.
//!
//! Root lattices follow the usual sign convention: the components of a
//! fiber not meeting the zero section span a negative definite lattice, so
//! [`FiberProfile::root_lattice`] is the negated Cartan matrix and its
//! discriminant is reported as an absolute value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{GramLattice, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KodairaError {
    #[error("unknown Kodaira fiber token {0:?}")]
    UnknownToken(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaFiber {
    /// `I_n`; `I(0)` is a smooth fiber.
    I(u32),
    /// `I_n^*`.
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

/// Where a base-change row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    /// One of the four star rows of the reference table.
    Table,
    /// A non-star row completed from Euler doubling and monodromy squaring.
    Derived,
}

impl KodairaFiber {
    pub fn euler_number(&self) -> u64 {
        use KodairaFiber::*;
        match *self {
            I(n) => n as u64,
            IStar(n) => 6 + n as u64,
            II => 2,
            III => 3,
            IV => 4,
            IVStar => 8,
            IIIStar => 9,
            IIStar => 10,
        }
    }

    pub fn is_star(&self) -> bool {
        use KodairaFiber::*;
        matches!(self, IStar(_) | IIStar | IIIStar | IVStar)
    }

    pub fn is_smooth(&self) -> bool {
        *self == KodairaFiber::I(0)
    }

    /// Fiber type over a ramification point of a quadratic base change.
    pub fn quadratic_base_change(&self) -> KodairaFiber {
        use KodairaFiber::*;
        match *self {
            IIStar => IVStar,
            IIIStar => IStar(0),
            IVStar => IV,
            IStar(n) => I(2 * n),
            I(n) => I(2 * n),
            II => IV,
            III => IStar(0),
            IV => IVStar,
        }
    }

    pub fn base_change_source(&self) -> RowSource {
        if self.is_star() {
            RowSource::Table
        } else {
            RowSource::Derived
        }
    }

    /// Euler defect `(2 e(F) - e(F')) / 12`, which must be 0 or 1.
    pub fn delta(&self) -> Result<u32, KodairaError> {
        let twice = 2 * self.euler_number() as i64;
        let image = self.quadratic_base_change().euler_number() as i64;
        let diff = twice - image;
        if diff % 12 != 0 || !(0..=12).contains(&diff) {
            return Err(KodairaError::InternalInconsistency(format!(
                "Euler defect of {self} is {diff}/12"
            )));
        }
        let delta = (diff / 12) as u32;
        if (delta == 1) != self.is_star() {
            return Err(KodairaError::InternalInconsistency(format!(
                "Euler defect of {self} is {delta}, star = {}",
                self.is_star()
            )));
        }
        Ok(delta)
    }

    /// Number of irreducible components `m_v`.
    pub fn components(&self) -> u32 {
        use KodairaFiber::*;
        match *self {
            I(0) => 1,
            I(n) => n,
            IStar(n) => 5 + n,
            II => 1,
            III => 2,
            IV => 3,
            IVStar => 7,
            IIIStar => 8,
            IIStar => 9,
        }
    }

    /// Root system spanned by the non-identity components.
    pub fn root_system(&self) -> Option<RootSystem> {
        use KodairaFiber::*;
        match *self {
            IIStar => Some(RootSystem::E(8)),
            IIIStar => Some(RootSystem::E(7)),
            IVStar => Some(RootSystem::E(6)),
            IStar(n) => Some(RootSystem::D(4 + n)),
            I(n) if n >= 2 => Some(RootSystem::A(n - 1)),
            IV => Some(RootSystem::A(2)),
            III => Some(RootSystem::A(1)),
            I(_) | II => None,
        }
    }

    pub fn root_lattice(&self) -> GramLattice {
        match self.root_system() {
            Some(r) => r.cartan().negate(),
            None => GramLattice::empty(),
        }
    }

    /// Denominators of the local height corrections at this fiber.
    pub fn contribution_denominators(&self) -> Vec<u64> {
        use KodairaFiber::*;
        match *self {
            II | IIStar | I(0) | I(1) => vec![1],
            III | IIIStar | IStar(0) => vec![1, 2],
            IV | IVStar => vec![1, 3],
            I(n) => {
                let n = n as u64;
                (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
            }
            IStar(_) => vec![1, 2, 4],
        }
    }

    pub fn profile(&self) -> FiberProfile {
        let root_lattice = self.root_lattice();
        FiberProfile {
            euler: self.euler_number(),
            components: self.components(),
            root_system: self.root_system(),
            root_disc: root_lattice.disc(),
            root_lattice,
            odd_mult_components: self.is_star().then_some(4),
            contribution_denominators: self.contribution_denominators(),
        }
    }

    pub fn token(&self) -> String {
        self.to_string()
    }
}

pub fn euler_number(f: KodairaFiber) -> u64 {
    f.euler_number()
}

pub fn is_star(f: KodairaFiber) -> bool {
    f.is_star()
}

pub fn quadratic_base_change_fiber(f: KodairaFiber) -> KodairaFiber {
    f.quadratic_base_change()
}

pub fn delta(f: KodairaFiber) -> Result<u32, KodairaError> {
    f.delta()
}

pub fn fiber_profile(f: KodairaFiber) -> FiberProfile {
    f.profile()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProfile {
    pub euler: u64,
    pub components: u32,
    pub root_system: Option<RootSystem>,
    pub root_lattice: GramLattice,
    /// `|det|` of the root lattice; 1 for rank 0.
    pub root_disc: BigInt,
    /// Four for star fibers; not applicable otherwise.
    pub odd_mult_components: Option<u32>,
    pub contribution_denominators: Vec<u64>,
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use KodairaFiber::*;
        match self {
            I(n) => write!(f, "I{n}"),
            IStar(n) => write!(f, "I{n}*"),
            II => f.write_str("II"),
            III => f.write_str("III"),
            IV => f.write_str("IV"),
            IIStar => f.write_str("II*"),
            IIIStar => f.write_str("III*"),
            IVStar => f.write_str("IV*"),
        }
    }
}

/// Canonical decimal: no sign, no leading zeros.
fn parse_index(s: &str) -> Option<u32> {
    let canonical =
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if canonical {
        s.parse().ok()
    } else {
        None
    }
}

impl FromStr for KodairaFiber {
    type Err = KodairaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use KodairaFiber::*;
        let fiber = match s {
            "II" => II,
            "III" => III,
            "IV" => IV,
            "II*" => IIStar,
            "III*" => IIIStar,
            "IV*" => IVStar,
            _ => {
                let rest = s
                    .strip_prefix('I')
                    .ok_or_else(|| KodairaError::UnknownToken(s.into()))?;
                let parsed = match rest.strip_suffix('*') {
                    Some(n) => parse_index(n).map(IStar),
                    None => parse_index(rest).map(I),
                };
                parsed.ok_or_else(|| KodairaError::UnknownToken(s.into()))?
            }
        };
        Ok(fiber)
    }
}

impl Serialize for KodairaFiber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KodairaFiber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
