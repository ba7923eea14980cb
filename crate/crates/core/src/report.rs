//! Verified inequality instances.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::ratio::{serialize_opt_rational, Rational};
use crate::set::GroupSet;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// A required quantity was only bounded, or the check does not apply.
    #[serde(rename = "n/a")]
    NotApplicable,
    /// The statement hides an absolute constant; only the measured constant is reported.
    #[serde(rename = "measured")]
    Measured,
}

/// The named sets a check was run on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub group: String,
    pub sets: BTreeMap<String, Vec<usize>>,
}

impl Instance {
    pub fn new<'a>(sets: impl IntoIterator<Item = (&'a str, &'a GroupSet)>) -> Self {
        let mut inst = Instance::default();
        for (name, s) in sets {
            if inst.group.is_empty() {
                inst.group = s.group().to_string();
            }
            inst.sets.insert(name.to_string(), s.to_vec());
        }
        inst
    }
}

/// One checked statement `lhs <= rhs`, or a measured constant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub group: String,
    pub sets: BTreeMap<String, Vec<usize>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lhs: Option<Rational>,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub rhs: Option<Rational>,
    pub pass: Outcome,
    /// `rhs / lhs`, when `lhs > 0`.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub ratio: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CheckReport {
    fn base(check_id: &str, instance: &Instance) -> Self {
        CheckReport {
            check_id: check_id.to_string(),
            group: instance.group.clone(),
            sets: instance.sets.clone(),
            params: BTreeMap::new(),
            lhs: None,
            rhs: None,
            pass: Outcome::NotApplicable,
            ratio: None,
            measured: None,
            notes: Vec::new(),
            seed: None,
        }
    }

    /// Exact check of `lhs <= rhs`.
    pub fn inequality(check_id: &str, instance: &Instance, lhs: Rational, rhs: Rational) -> Self {
        let mut r = Self::base(check_id, instance);
        r.pass = if lhs <= rhs { Outcome::Pass } else { Outcome::Fail };
        r.ratio = (!lhs.is_zero()).then(|| &rhs / &lhs);
        r.lhs = Some(lhs);
        r.rhs = Some(rhs);
        r
    }

    /// A measured constant for a statement with an implicit constant.
    pub fn measured(check_id: &str, instance: &Instance, value: f64) -> Self {
        let mut r = Self::base(check_id, instance);
        r.pass = Outcome::Measured;
        r.measured = Some(value);
        r
    }

    pub fn not_applicable(check_id: &str, instance: &Instance, reason: impl Into<String>) -> Self {
        let mut r = Self::base(check_id, instance);
        r.notes.push(reason.into());
        r
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_sides(mut self, lhs: Rational, rhs: Rational) -> Self {
        self.ratio = (!lhs.is_zero()).then(|| &rhs / &lhs);
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn failed(&self) -> bool {
        self.pass == Outcome::Fail
    }
}
