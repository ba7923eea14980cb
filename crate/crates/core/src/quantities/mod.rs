//! The doubling-type quantities `D[A;B]`, `S_T[A;B]`, `E_T[A;B]`, the shift
//! ratio `K(A)`, the longest progression `k(A)`, the additive dimension and the
//! Petridis ratio.
//!
//! Searches are exhaustive when the instance fits the [`SearchBudget`], and
//! otherwise fall back to seeded heuristics whose results are flagged as
//! one-sided bounds.

mod pair_search;
mod petridis;
mod structure;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratio::{ratio, QValue, Rational, Threshold};
use crate::set::GroupSet;
use crate::sumset::sumset;

pub(crate) use pair_search::max_independent;
pub use pair_search::{e_quantity, s_quantity};
pub use petridis::petridis_ratio;
pub use structure::{additive_dimension, is_dissociated, is_dissociated_by_signs, longest_ap, shift_ratio_k};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum QuantityKind {
    #[serde(rename = "D")]
    Doubling,
    #[serde(rename = "S_T")]
    S,
    #[serde(rename = "E_T")]
    E,
    #[serde(rename = "K")]
    ShiftRatio,
    #[serde(rename = "k")]
    LongestAp,
    #[serde(rename = "dim")]
    Dimension,
    #[serde(rename = "petridis")]
    Petridis,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    None,
    Set(GroupSet),
    Pair(GroupSet, GroupSet),
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Witness::None => s.serialize_none(),
            Witness::Set(x) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("set", &x.to_vec())?;
                m.end()
            }
            Witness::Pair(x, y) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("X", &x.to_vec())?;
                m.serialize_entry("Y", &y.to_vec())?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantityResult {
    pub kind: QuantityKind,
    pub value: QValue,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<Threshold>,
    pub witness: Witness,
    pub exactness: Exactness,
}

impl QuantityResult {
    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    /// The finite value; panics on `+inf`.
    pub fn rational(&self) -> &Rational {
        self.value.finite().expect("finite quantity value")
    }

    pub fn pair(&self) -> Option<(&GroupSet, &GroupSet)> {
        match &self.witness {
            Witness::Pair(x, y) => Some((x, y)),
            _ => None,
        }
    }
}

/// Limits for the exhaustive searches.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Exhaustive search runs when the searched ground sets total at most this many elements.
    pub max_exact_bits: u32,
    /// Restarts for the stochastic fallback searches.
    pub heuristic_iters: u32,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_exact_bits: 24,
            heuristic_iters: 64,
            seed: 0,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(seed: u64) -> Self {
        SearchBudget {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_exact_bits == 0 || self.heuristic_iters == 0 {
            return Err(Error::InvalidArgument("search budget limits must be positive".into()));
        }
        Ok(())
    }
}

/// `D[A;B] = |A+B| / |A|`.
pub fn doubling(a: &GroupSet, b: &GroupSet) -> Result<QuantityResult> {
    a.same_group(b)?;
    if a.is_empty() {
        return Err(Error::EmptySet("doubling"));
    }
    let s = sumset(a, b)?;
    Ok(QuantityResult {
        kind: QuantityKind::Doubling,
        value: QValue::Finite(ratio(s.len() as u64, a.len() as u64)),
        t: None,
        witness: Witness::None,
        exactness: Exactness::Exact,
    })
}
