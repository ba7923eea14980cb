//! Instance families and the parallel family runner.
//!
//! ```text
//! subsets(G, max=6[, min=1])                 every A with min <= |A| <= max, mask order
//! sets(G, max=8, n=200, seed=1[, min=1])     n sampled sets
//! pairs(G, max=8, n=200, seed=1[, min=1])    n sampled (A, B)
//! triples(G, max=6, n=500, seed=7[, min=1])  n sampled (A, B, C)
//! ```

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{run_checks, CheckConfig, CheckKind, InstanceSets};
use crate::constructions::rng;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::ratio::{serialize_opt_rational, Rational};
use crate::report::{CheckReport, Outcome};
use crate::set::GroupSet;

/// Largest exhaustive family enumerated without refusal.
pub const DEFAULT_FAMILY_LIMIT: u128 = 1 << 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Subsets,
    Sets,
    Pairs,
    Triples,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub text: String,
    pub kind: FamilyKind,
    #[serde(serialize_with = "display")]
    pub group: GroupSpec,
    pub min: usize,
    pub max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn display<S: Serializer>(g: &GroupSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(g)
}

pub fn parse_family(text: &str, max_order: u64) -> Result<Family> {
    let bad = |why: &str| Error::Parse(format!("family {text:?}: {why}"));
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| bad("expected name(...)"))?;
    let inner = text[open + 1..].strip_suffix(')').ok_or_else(|| bad("missing closing parenthesis"))?;
    let kind = match text[..open].trim() {
        "subsets" => FamilyKind::Subsets,
        "sets" => FamilyKind::Sets,
        "pairs" => FamilyKind::Pairs,
        "triples" => FamilyKind::Triples,
        other => return Err(bad(&format!("unknown family {other:?}"))),
    };
    let mut parts = inner.split(',').map(str::trim);
    let group = GroupSpec::parse_with_cap(parts.next().unwrap_or(""), max_order)?;
    let mut kv: BTreeMap<&str, u64> = BTreeMap::new();
    for part in parts {
        let (k, v) = part.split_once('=').ok_or_else(|| bad(&format!("expected key=value, got {part:?}")))?;
        let (k, v) = (k.trim(), v.trim());
        if !["min", "max", "n", "seed"].contains(&k) {
            return Err(bad(&format!("unknown key {k:?}")));
        }
        let v: u64 = v.parse().map_err(|_| bad(&format!("{k} must be a nonnegative integer")))?;
        if kv.insert(k, v).is_some() {
            return Err(bad(&format!("duplicate key {k:?}")));
        }
    }
    let sampled = kind != FamilyKind::Subsets;
    let max = *kv.get("max").ok_or_else(|| bad("max is required"))? as usize;
    let min = kv.get("min").copied().unwrap_or(1) as usize;
    if min == 0 || min > max {
        return Err(bad("need 1 <= min <= max"));
    }
    if max > group.order() {
        return Err(bad("max exceeds the group order"));
    }
    let (n, seed) = if sampled {
        let n = *kv.get("n").ok_or_else(|| bad("n is required"))? as usize;
        let seed = *kv.get("seed").ok_or_else(|| bad("seed is required"))?;
        (Some(n), Some(seed))
    } else {
        if kv.contains_key("n") || kv.contains_key("seed") {
            return Err(bad("subsets takes no n or seed"));
        }
        (None, None)
    };
    Ok(Family {
        text: text.to_string(),
        kind,
        group,
        min,
        max,
        n,
        seed,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

impl Family {
    /// Number of instances, before any refusal.
    pub fn count(&self) -> u128 {
        match self.n {
            Some(n) => n as u128,
            None => (self.min..=self.max)
                .map(|k| binomial(self.group.order() as u128, k as u128))
                .fold(0u128, u128::saturating_add),
        }
    }

    /// All instances in order: mask order for `subsets`, draw order otherwise.
    pub fn instances(&self, limit: u128) -> Result<Vec<InstanceSets>> {
        let count = self.count();
        if count > limit {
            return Err(Error::FamilyTooLarge { count, limit });
        }
        let g = &self.group;
        match self.kind {
            FamilyKind::Subsets => {
                let mut all: Vec<Vec<usize>> = Vec::with_capacity(count as usize);
                for k in self.min..=self.max {
                    combinations(g.order(), k, &mut all);
                }
                // numeric mask order compares the largest members first
                all.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
                Ok(all
                    .into_iter()
                    .map(|c| InstanceSets::single(GroupSet::from_idx_iter(g, c)))
                    .collect())
            }
            _ => {
                let mut r = rng(self.seed.unwrap_or(0));
                let mut draw = || {
                    let size = r.gen_range(self.min..=self.max);
                    GroupSet::from_idx_iter(g, sample(&mut r, g.order(), size))
                };
                Ok((0..self.n.unwrap_or(0))
                    .map(|_| match self.kind {
                        FamilyKind::Sets => InstanceSets::single(draw()),
                        FamilyKind::Pairs => {
                            let a = draw();
                            InstanceSets::pair(a, draw())
                        }
                        _ => {
                            let a = draw();
                            let b = draw();
                            InstanceSets::triple(a, b, draw())
                        }
                    })
                    .collect())
            }
        }
    }
}

fn combinations(n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Seed of the sampled subsets used by checks on instance `i`.
pub(crate) fn instance_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extremal {
    #[serde(serialize_with = "serialize_opt_rational", skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    pub report: CheckReport,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckStats {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub measured: usize,
    /// Tightest instance (`rhs / lhs` smallest).
    pub min_ratio: Option<Extremal>,
    pub max_ratio: Option<Extremal>,
    pub min_measured: Option<Extremal>,
    pub max_measured: Option<Extremal>,
}

impl CheckStats {
    fn add(&mut self, r: &CheckReport) {
        self.checked += 1;
        match r.pass {
            Outcome::Pass => self.passed += 1,
            Outcome::Fail => self.failed += 1,
            Outcome::NotApplicable => self.not_applicable += 1,
            Outcome::Measured => self.measured += 1,
        }
        let ex = |r: &CheckReport| Extremal {
            ratio: r.ratio.clone(),
            measured: r.measured,
            report: r.clone(),
        };
        if r.pass == Outcome::Measured {
            if let Some(m) = r.measured {
                if self.max_measured.as_ref().is_none_or(|e| e.measured.is_some_and(|b| m > b)) {
                    self.max_measured = Some(ex(r));
                }
                if self.min_measured.as_ref().is_none_or(|e| e.measured.is_some_and(|b| m < b)) {
                    self.min_measured = Some(ex(r));
                }
            }
        } else if let Some(q) = &r.ratio {
            if self.min_ratio.as_ref().is_none_or(|e| e.ratio.as_ref().is_some_and(|b| q < b)) {
                self.min_ratio = Some(ex(r));
            }
            if self.max_ratio.as_ref().is_none_or(|e| e.ratio.as_ref().is_some_and(|b| q > b)) {
                self.max_ratio = Some(ex(r));
            }
        }
    }
}

/// Totals satisfy `checked = passed + failed + not_applicable + measured`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyRunSummary {
    pub family: Family,
    pub checks: Vec<CheckKind>,
    pub instances: usize,
    pub totals: CheckStatsTotals,
    pub per_check: BTreeMap<String, CheckStats>,
    pub failures: Vec<CheckReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckStatsTotals {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub measured: usize,
}

impl FamilyRunSummary {
    pub fn all_passed(&self) -> bool {
        self.totals.failed == 0
    }
}

/// Runs `config` on every instance of `family` in parallel. Reports come back
/// in instance order, so the summary does not depend on the thread count.
pub fn run_family(family: &Family, config: &CheckConfig, limit: u128) -> Result<(FamilyRunSummary, Vec<CheckReport>)> {
    let instances = family.instances(limit)?;
    let seed = family.seed.unwrap_or(0);
    let per_instance: Vec<Vec<CheckReport>> = instances
        .par_iter()
        .enumerate()
        .map(|(i, sets)| run_checks(sets, config, instance_seed(seed, i)))
        .collect::<Result<_>>()?;
    let reports: Vec<CheckReport> = per_instance.into_iter().flatten().collect();
    let mut totals = CheckStatsTotals::default();
    let mut per_check: BTreeMap<String, CheckStats> = BTreeMap::new();
    for r in &reports {
        per_check.entry(r.check_id.clone()).or_default().add(r);
        totals.checked += 1;
        match r.pass {
            Outcome::Pass => totals.passed += 1,
            Outcome::Fail => totals.failed += 1,
            Outcome::NotApplicable => totals.not_applicable += 1,
            Outcome::Measured => totals.measured += 1,
        }
    }
    let failures = reports.iter().filter(|r| r.failed()).cloned().collect();
    let summary = FamilyRunSummary {
        family: family.clone(),
        checks: config.checks.clone(),
        instances: instances.len(),
        totals,
        per_check,
        failures,
    };
    Ok((summary, reports))
}
