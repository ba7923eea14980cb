//! `S[A]` for random sets of density `delta`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::sample_random_set;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::quantities::{s_quantity, Exactness, SearchBudget};
use crate::ratio::{int, serialize_rational, to_f64, Rational, Threshold};
use crate::report::{CheckReport, Instance, Outcome};
use crate::set::GroupSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational,
    pub trial: usize,
    pub seed: u64,
    pub size: usize,
    /// `S[A]`, or a lower bound for it.
    #[serde(serialize_with = "serialize_rational")]
    pub s: Rational,
    pub exactness: Exactness,
    /// The direct pair behind `s`.
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaRow {
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational,
    pub trials: usize,
    pub exact_trials: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub median_size: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub median_s: Rational,
    /// `median_s * sqrt(delta)`.
    pub implied_constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub group: String,
    pub seed: u64,
    pub rng: &'static str,
    pub rows: Vec<DeltaRow>,
    /// Medians must grow strictly as `delta` shrinks.
    pub trend: Vec<CheckReport>,
    pub trials: Vec<TrialRecord>,
}

impl ExperimentSummary {
    pub fn trend_holds(&self) -> bool {
        self.trend.iter().all(|r| r.pass == Outcome::Pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,trials,exact_trials,median_size,median_s,median_s_float,implied_constant\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.delta,
                r.trials,
                r.exact_trials,
                r.median_size,
                r.median_s,
                to_f64(&r.median_s),
                r.implied_constant
            );
        }
        out
    }
}

fn median(mut xs: Vec<Rational>) -> Rational {
    xs.sort();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2].clone()
    } else {
        (&xs[n / 2 - 1] + &xs[n / 2]) / int(2)
    }
}

/// Trial `t` at every density uses seed `seed + t`. Densities are reported in
/// decreasing order; the trend compares neighbours.
pub fn experiment_random_s(
    g: &GroupSpec,
    deltas: &[Rational],
    trials: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<ExperimentSummary> {
    if deltas.is_empty() || trials == 0 {
        return Err(Error::InvalidArgument("need at least one density and one trial".into()));
    }
    let mut deltas = deltas.to_vec();
    deltas.sort_by(|a, b| b.cmp(a));
    deltas.dedup();
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for delta in &deltas {
        let batch: Vec<TrialRecord> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let s = seed.wrapping_add(t as u64);
                let a = sample_random_set(g, delta, s)?;
                if a.is_empty() {
                    return Ok(TrialRecord {
                        delta: delta.clone(),
                        trial: t,
                        seed: s,
                        size: 0,
                        s: int(0),
                        exactness: Exactness::Exact,
                        x: Vec::new(),
                        y: Vec::new(),
                    });
                }
                let q = s_quantity(&a, &a, &Threshold::Infinite, budget)?;
                let (x, y) = q.pair().expect("S_T has a pair witness");
                let (x, y) = (x.to_vec(), y.to_vec());
                Ok(TrialRecord {
                    delta: delta.clone(),
                    trial: t,
                    seed: s,
                    size: a.len(),
                    s: q.rational().clone(),
                    exactness: q.exactness,
                    x,
                    y,
                })
            })
            .collect::<Result<_>>()?;
        let median_s = median(batch.iter().map(|r| r.s.clone()).collect());
        rows.push(DeltaRow {
            delta: delta.clone(),
            trials,
            exact_trials: batch.iter().filter(|r| r.exactness == Exactness::Exact).count(),
            median_size: median(batch.iter().map(|r| int(r.size as u64)).collect()),
            implied_constant: to_f64(&median_s) * to_f64(delta).sqrt(),
            median_s,
        });
        records.extend(batch);
    }
    let inst = Instance::new([("G", &GroupSet::full(g))]);
    let trend = rows
        .windows(2)
        .map(|w| {
            let r = CheckReport::inequality("random_s.trend", &inst, w[0].median_s.clone(), w[1].median_s.clone())
                .with_param("delta_hi", &w[0].delta)
                .with_param("delta_lo", &w[1].delta);
            if w[0].median_s == w[1].median_s {
                let mut r = r.with_note("medians are equal; a strict increase is required");
                r.pass = Outcome::Fail;
                r
            } else {
                r
            }
        })
        .collect();
    Ok(ExperimentSummary {
        group: g.to_string(),
        seed,
        rng: crate::constructions::RNG_NAME,
        rows,
        trend,
        trials: records,
    })
}
