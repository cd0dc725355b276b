//! Agent identifiers.
//!
//! Indices are zero-based in memory. Everything that leaves the process
//! (JSON, CSV, traces, `Display`) uses the one-based numbering `a1..an`,
//! `p1..pm`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! agent_index {
    ($name:ident, $prefix:literal) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            /// Builds an id from its one-based label number.
            pub fn from_one_based(index: usize) -> Option<Self> {
                index.checked_sub(1).map($name)
            }

            pub fn index(self) -> usize {
                self.0
            }

            pub fn one_based(self) -> usize {
                self.0 + 1
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0 + 1)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_u64(self.one_based() as u64)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let raw = u64::deserialize(deserializer)?;
                $name::from_one_based(raw as usize).ok_or_else(|| {
                    serde::de::Error::custom(concat!($prefix, " indices start at 1"))
                })
            }
        }
    };
}

agent_index!(ApplicantId, "a");
agent_index!(PositionId, "p");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Applicant,
    Position,
}

/// Either side of the market.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentId {
    Applicant(ApplicantId),
    Position(PositionId),
}

impl AgentId {
    pub fn side(self) -> Side {
        match self {
            AgentId::Applicant(_) => Side::Applicant,
            AgentId::Position(_) => Side::Position,
        }
    }
}

impl From<ApplicantId> for AgentId {
    fn from(a: ApplicantId) -> Self {
        AgentId::Applicant(a)
    }
}

impl From<PositionId> for AgentId {
    fn from(p: PositionId) -> Self {
        AgentId::Position(p)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentId::Applicant(a) => a.fmt(f),
            AgentId::Position(p) => p.fmt(f),
        }
    }
}

pub fn applicants(n: usize) -> impl DoubleEndedIterator<Item = ApplicantId> + Clone {
    (0..n).map(ApplicantId)
}

pub fn positions(m: usize) -> impl DoubleEndedIterator<Item = PositionId> + Clone {
    (0..m).map(PositionId)
}
