//! Instance checks. Statements with explicit constants are checked exactly
//! (pass/fail); statements with an implicit absolute constant only produce a
//! measured constant. A check whose quantities are only bounded is `n/a`.

mod experiment;
mod family;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Pow};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::rng;
use crate::energy::{common_energy, cs_energy_lower_bound};
use crate::error::{Error, Result};
use crate::quantities::{
    additive_dimension, doubling, e_quantity, longest_ap, petridis_ratio, s_quantity, shift_ratio_k,
    QuantityResult, SearchBudget,
};
use crate::ratio::{int, ratio, to_f64, QValue, Rational, Threshold};
use crate::report::{CheckReport, Instance, Outcome};
use crate::set::GroupSet;
use crate::sumset::{difference_set, higher_sumset, Sign};

pub use experiment::{experiment_random_s, DeltaRow, ExperimentSummary, TrialRecord};
pub use family::{
    parse_family, run_family, CheckStats, CheckStatsTotals, Extremal, Family, FamilyKind, FamilyRunSummary,
    DEFAULT_FAMILY_LIMIT,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Chain,
    Dichotomy,
    PolynomialCriterion,
    Triangle,
    DimBounds,
    CauchySchwarz,
    Ruzsa,
    Plunnecke,
    Petridis,
    EnergyBounds,
    SDecrease,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Chain,
        CheckKind::Dichotomy,
        CheckKind::PolynomialCriterion,
        CheckKind::Triangle,
        CheckKind::DimBounds,
        CheckKind::CauchySchwarz,
        CheckKind::Ruzsa,
        CheckKind::Plunnecke,
        CheckKind::Petridis,
        CheckKind::EnergyBounds,
        CheckKind::SDecrease,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Chain => "chain",
            CheckKind::Dichotomy => "dichotomy",
            CheckKind::PolynomialCriterion => "polynomial_criterion",
            CheckKind::Triangle => "triangle",
            CheckKind::DimBounds => "dim_bounds",
            CheckKind::CauchySchwarz => "cs",
            CheckKind::Ruzsa => "ruzsa",
            CheckKind::Plunnecke => "plunnecke",
            CheckKind::Petridis => "petridis",
            CheckKind::EnergyBounds => "e_s",
            CheckKind::SDecrease => "s_decrease",
        }
    }

    /// Parses a comma-separated list; `all` selects every check.
    pub fn parse_list(text: &str) -> Result<Vec<CheckKind>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(CheckKind::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty check list".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "chain" => CheckKind::Chain,
            "dichotomy" => CheckKind::Dichotomy,
            "polynomial_criterion" | "polynomial" | "poly" => CheckKind::PolynomialCriterion,
            "triangle" => CheckKind::Triangle,
            "dim_bounds" | "dim" => CheckKind::DimBounds,
            "cs" | "cauchy_schwarz" => CheckKind::CauchySchwarz,
            "ruzsa" => CheckKind::Ruzsa,
            "plunnecke" => CheckKind::Plunnecke,
            "petridis" => CheckKind::Petridis,
            "e_s" | "energy_bounds" | "e1" => CheckKind::EnergyBounds,
            "s_decrease" => CheckKind::SDecrease,
            other => return Err(Error::Parse(format!("unknown check {other:?}"))),
        };
        Ok(kind)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which checks to run and with which thresholds.
#[derive(Clone, Debug, Serialize)]
pub struct CheckConfig {
    pub checks: Vec<CheckKind>,
    pub chain_ts: Vec<Threshold>,
    pub triangle_ts: Vec<Threshold>,
    pub s_decrease_ts: Vec<Threshold>,
    /// `n, m` range `1..=plunnecke_max` for `|nA - mA|`.
    pub plunnecke_max: u32,
    pub budget: SearchBudget,
}

impl CheckConfig {
    pub fn new(checks: Vec<CheckKind>) -> Self {
        let two = Threshold::integer(2).expect("2 >= 1");
        let one = Threshold::integer(1).expect("1 >= 1");
        CheckConfig {
            checks,
            chain_ts: vec![one.clone(), two.clone(), Threshold::Infinite],
            triangle_ts: vec![two.clone(), Threshold::Infinite],
            s_decrease_ts: vec![one, two, Threshold::Infinite],
            plunnecke_max: 3,
            budget: SearchBudget::default(),
        }
    }
}

/// The sets of one instance; `B` and `C` default to `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSets {
    pub a: GroupSet,
    pub b: GroupSet,
    pub c: GroupSet,
    /// Distinct named sets, for reports.
    pub arity: usize,
}

impl InstanceSets {
    pub fn single(a: GroupSet) -> Self {
        InstanceSets {
            b: a.clone(),
            c: a.clone(),
            a,
            arity: 1,
        }
    }

    pub fn pair(a: GroupSet, b: GroupSet) -> Self {
        InstanceSets {
            c: a.clone(),
            a,
            b,
            arity: 2,
        }
    }

    pub fn triple(a: GroupSet, b: GroupSet, c: GroupSet) -> Self {
        InstanceSets { a, b, c, arity: 3 }
    }

    pub fn instance(&self) -> Instance {
        match self.arity {
            1 => Instance::new([("A", &self.a)]),
            2 => Instance::new([("A", &self.a), ("B", &self.b)]),
            _ => Instance::new([("A", &self.a), ("B", &self.b), ("C", &self.c)]),
        }
    }
}

/// Runs every configured check on one instance. `seed` drives the sampled
/// subsets of the `s_decrease` and `e_s` checks.
pub fn run_checks(sets: &InstanceSets, config: &CheckConfig, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let budget = &config.budget;
    let (a, b, c) = (&sets.a, &sets.b, &sets.c);
    let inst = sets.instance();
    for kind in &config.checks {
        match kind {
            CheckKind::Chain => {
                for t in &config.chain_ts {
                    out.extend(check_chain(a, b, t, budget)?.into_iter().map(|r| relabel(r, &inst)));
                }
            }
            CheckKind::Dichotomy => out.push(relabel(check_dichotomy(a, budget)?, &inst)),
            CheckKind::PolynomialCriterion => {
                out.extend(check_polynomial_criterion(a, budget)?.into_iter().map(|r| relabel(r, &inst)))
            }
            CheckKind::Triangle => {
                for t in &config.triangle_ts {
                    out.extend(check_triangle(a, b, c, t, budget)?.into_iter().map(|r| relabel(r, &inst)));
                }
            }
            CheckKind::DimBounds => out.extend(check_dim_bounds(a, budget)?.into_iter().map(|r| relabel(r, &inst))),
            CheckKind::CauchySchwarz => {
                for sign in [Sign::Plus, Sign::Minus] {
                    out.push(relabel(cs_energy_lower_bound(a, b, sign)?, &inst));
                }
            }
            CheckKind::Ruzsa => out.push(relabel(check_ruzsa(a, b, c)?, &inst)),
            CheckKind::Plunnecke => {
                out.extend(check_plunnecke(a, config.plunnecke_max)?.into_iter().map(|r| relabel(r, &inst)))
            }
            CheckKind::Petridis => out.extend(check_petridis(a, budget)?.into_iter().map(|r| relabel(r, &inst))),
            CheckKind::EnergyBounds => {
                out.extend(check_e_s_bounds(a, b, budget, seed)?.into_iter().map(|r| relabel(r, &inst)))
            }
            CheckKind::SDecrease => {
                for t in &config.s_decrease_ts {
                    out.extend(check_s_decrease(a, b, t, budget, seed)?.into_iter().map(|r| relabel(r, &inst)));
                }
            }
        }
    }
    Ok(out)
}

fn relabel(mut r: CheckReport, inst: &Instance) -> CheckReport {
    r.group = inst.group.clone();
    r.sets = inst.sets.clone();
    r
}

fn exact_value(r: &QuantityResult) -> Option<Rational> {
    if r.is_exact() {
        r.value.finite().cloned()
    } else {
        None
    }
}

fn t_times(t: &Threshold, x: &Rational) -> Option<Rational> {
    match t {
        Threshold::Infinite => None,
        Threshold::Finite(t) => Some(t * x),
    }
}

/// `1 <= S_T[A;B] <= E_T[A;B] <= D[A;B]`, and the measured constant `E_T / (T S_T^2)`.
pub fn check_chain(a: &GroupSet, b: &GroupSet, t: &Threshold, budget: &SearchBudget) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a), ("B", b)]);
    let s = s_quantity(a, b, t, budget)?;
    let e = e_quantity(a, b, t, budget)?;
    let d = doubling(a, b)?.rational().clone();
    let ids = ["chain.s_ge_1", "chain.s_le_e", "chain.e_le_d", "chain.e_le_cts2"];
    let (Some(s), Some(e)) = (exact_value(&s), exact_value(&e)) else {
        return Ok(ids
            .iter()
            .map(|id| CheckReport::not_applicable(id, &inst, "S_T or E_T only bounded within budget").with_param("T", t))
            .collect());
    };
    let mut out = vec![
        CheckReport::inequality(ids[0], &inst, int(1), s.clone()),
        CheckReport::inequality(ids[1], &inst, s.clone(), e.clone()),
        CheckReport::inequality(ids[2], &inst, e.clone(), d),
    ];
    out.push(match t_times(t, &(&s * &s)) {
        Some(ts2) => {
            let c = &e / &ts2;
            CheckReport::measured(ids[3], &inst, to_f64(&c)).with_sides(e, ts2)
        }
        None => CheckReport::not_applicable(ids[3], &inst, "T S_T^2 is infinite for T = inf"),
    });
    Ok(out.into_iter().map(|r| r.with_param("T", t)).collect())
}

/// `k(A) <= 2 S[A]` or `K(A) <= 8 S[A]`.
pub fn check_dichotomy(a: &GroupSet, budget: &SearchBudget) -> Result<CheckReport> {
    let inst = Instance::new([("A", a)]);
    let s = s_quantity(a, a, &Threshold::Infinite, budget)?;
    let Some(s) = exact_value(&s) else {
        return Ok(CheckReport::not_applicable("dichotomy", &inst, "S only bounded within budget"));
    };
    let k = longest_ap(a)?.rational().clone();
    let two_s = int(2) * &s;
    if k <= two_s {
        return Ok(CheckReport::inequality("dichotomy", &inst, k, two_s).with_note("k(A) <= 2S[A]"));
    }
    let eight_s = int(8) * &s;
    match shift_ratio_k(a)?.value {
        QValue::Finite(kk) => {
            let r = CheckReport::inequality("dichotomy", &inst, kk, eight_s);
            let note = if r.pass == Outcome::Pass {
                "K(A) <= 8S[A]"
            } else {
                "k(A) > 2S[A] and K(A) > 8S[A]"
            };
            Ok(r.with_note(note))
        }
        QValue::Infinite => Ok(CheckReport::inequality("dichotomy", &inst, k, two_s)
            .with_note("K(A) is infinite and k(A) > 2S[A]")),
    }
}

/// `D <= c S^36`, `D <= c E_2^26` (measured `c`), and `E_2 <= D` exactly.
pub fn check_polynomial_criterion(a: &GroupSet, budget: &SearchBudget) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a)]);
    let two = Threshold::integer(2)?;
    let d = doubling(a, a)?.rational().clone();
    let s = exact_value(&s_quantity(a, a, &Threshold::Infinite, budget)?);
    let e2 = exact_value(&e_quantity(a, a, &two, budget)?);
    let mut out = Vec::new();
    match &s {
        Some(s) => {
            let rhs: Rational = Pow::pow(s, 36u32);
            let c = &d / &rhs;
            out.push(
                CheckReport::measured("poly.d_le_s36", &inst, to_f64(&c))
                    .with_sides(d.clone(), rhs)
                    .with_param("constant_one_holds", c <= Rational::one()),
            );
        }
        None => out.push(CheckReport::not_applicable("poly.d_le_s36", &inst, "S only bounded within budget")),
    }
    match &e2 {
        Some(e2) => {
            let rhs: Rational = Pow::pow(e2, 26u32);
            let c = &d / &rhs;
            out.push(
                CheckReport::measured("poly.d_le_e2_26", &inst, to_f64(&c))
                    .with_sides(d.clone(), rhs)
                    .with_param("constant_one_holds", c <= Rational::one()),
            );
            out.push(CheckReport::inequality("poly.e2_le_d", &inst, e2.clone(), d));
        }
        None => {
            out.push(CheckReport::not_applicable("poly.d_le_e2_26", &inst, "E_2 only bounded within budget"));
            out.push(CheckReport::not_applicable("poly.e2_le_d", &inst, "E_2 only bounded within budget"));
        }
    }
    Ok(out)
}

/// `S_T[B;C] <= E_T[B;A] S[A;C]` and `E_T[B;C] <= E_T[B;A] E[A;C]`.
pub fn check_triangle(
    a: &GroupSet,
    b: &GroupSet,
    c: &GroupSet,
    t: &Threshold,
    budget: &SearchBudget,
) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a), ("B", b), ("C", c)]);
    let inf = Threshold::Infinite;
    let s_bc = exact_value(&s_quantity(b, c, t, budget)?);
    let e_bc = exact_value(&e_quantity(b, c, t, budget)?);
    let e_ba = exact_value(&e_quantity(b, a, t, budget)?);
    let s_ac = exact_value(&s_quantity(a, c, &inf, budget)?);
    let e_ac = exact_value(&e_quantity(a, c, &inf, budget)?);
    let mut out = Vec::new();
    match (&s_bc, &e_ba, &s_ac) {
        (Some(s_bc), Some(e_ba), Some(s_ac)) => {
            out.push(CheckReport::inequality("triangle.s", &inst, s_bc.clone(), e_ba * s_ac))
        }
        _ => out.push(CheckReport::not_applicable("triangle.s", &inst, "a quantity is only bounded")),
    }
    match (&e_bc, &e_ba, &e_ac) {
        (Some(e_bc), Some(e_ba), Some(e_ac)) => {
            out.push(CheckReport::inequality("triangle.e", &inst, e_bc.clone(), e_ba * e_ac))
        }
        _ => out.push(CheckReport::not_applicable("triangle.e", &inst, "a quantity is only bounded")),
    }
    Ok(out.into_iter().map(|r| r.with_param("T", t)).collect())
}

/// Measured `dim(A) / (S^2 ln|A|)` and `dim(A) / (E ln|A|)`.
pub fn check_dim_bounds(a: &GroupSet, budget: &SearchBudget) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a)]);
    let ids = ["dim.s2log", "dim.elog"];
    if a.len() < 2 {
        return Ok(ids
            .iter()
            .map(|id| CheckReport::not_applicable(id, &inst, "ln|A| = 0"))
            .collect());
    }
    let dim = additive_dimension(a, budget)?;
    let s = exact_value(&s_quantity(a, a, &Threshold::Infinite, budget)?);
    let e = exact_value(&e_quantity(a, a, &Threshold::Infinite, budget)?);
    let (Some(dim), Some(s), Some(e)) = (exact_value(&dim), s, e) else {
        return Ok(ids
            .iter()
            .map(|id| CheckReport::not_applicable(id, &inst, "a quantity is only bounded"))
            .collect());
    };
    let ln = (a.len() as f64).ln();
    Ok(vec![
        CheckReport::measured(ids[0], &inst, to_f64(&dim) / (to_f64(&(&s * &s)) * ln)).with_param("dim", &dim),
        CheckReport::measured(ids[1], &inst, to_f64(&dim) / (to_f64(&e) * ln)).with_param("dim", &dim),
    ])
}

/// `|A||B - C| <= |B - A||A - C|`.
pub fn check_ruzsa(a: &GroupSet, b: &GroupSet, c: &GroupSet) -> Result<CheckReport> {
    let inst = Instance::new([("A", a), ("B", b), ("C", c)]);
    let lhs = a.len() * difference_set(b, c)?.len();
    let rhs = difference_set(b, a)?.len() * difference_set(a, c)?.len();
    Ok(CheckReport::inequality("ruzsa", &inst, int(lhs as u64), int(rhs as u64)))
}

/// `|nA - mA| <= D[A]^{n+m} |A|` for `1 <= n, m <= max`.
pub fn check_plunnecke(a: &GroupSet, max: u32) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a)]);
    if a.is_empty() {
        return Err(Error::EmptySet("plunnecke"));
    }
    let d = doubling(a, a)?.rational().clone();
    let mut out = Vec::new();
    for n in 1..=max {
        for m in 1..=max {
            let lhs = int(higher_sumset(a, n, m)?.len() as u64);
            let rhs: Rational = Pow::pow(&d, n + m) * int(a.len() as u64);
            out.push(
                CheckReport::inequality("plunnecke", &inst, lhs, rhs)
                    .with_param("n", n)
                    .with_param("m", m),
            );
        }
    }
    Ok(out)
}

/// `R <= D[A] <= R^2` for the Petridis ratio `R`.
pub fn check_petridis(a: &GroupSet, budget: &SearchBudget) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a)]);
    let r = petridis_ratio(a, budget)?;
    let Some(r) = exact_value(&r) else {
        return Ok(["petridis.r_le_d", "petridis.d_le_r2"]
            .iter()
            .map(|id| CheckReport::not_applicable(id, &inst, "Petridis ratio only bounded"))
            .collect());
    };
    let d = doubling(a, a)?.rational().clone();
    Ok(vec![
        CheckReport::inequality("petridis.r_le_d", &inst, r.clone(), d.clone()),
        CheckReport::inequality("petridis.d_le_r2", &inst, d, &r * &r),
    ])
}

/// `|A||B|^2 <= E(A,B) E_1[A;B]` exactly, and the measured constants in
/// `E(A,B) >> |A||B|^2 / S_1^2` and `E(A',B) >> |A'|^3|B|^2 / (|A|^2 S_T^2)`
/// with `T = |A|/|A'|` for a sampled half `A' ⊆ A`.
pub fn check_e_s_bounds(a: &GroupSet, b: &GroupSet, budget: &SearchBudget, seed: u64) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a), ("B", b)]);
    let one = Threshold::integer(1)?;
    let energy = int(common_energy(a, b)?.value);
    let (na, nb) = (int(a.len() as u64), int(b.len() as u64));
    let base = &na * &nb * &nb;
    let mut out = Vec::new();
    match exact_value(&e_quantity(a, b, &one, budget)?) {
        Some(e1) => out.push(CheckReport::inequality("e_s.e1", &inst, base.clone(), &energy * e1)),
        None => out.push(CheckReport::not_applicable("e_s.e1", &inst, "E_1 only bounded")),
    }
    match exact_value(&s_quantity(a, b, &one, budget)?) {
        Some(s1) => {
            let rhs = &energy * &s1 * &s1;
            out.push(CheckReport::measured("e_s.s1_sq", &inst, to_f64(&(&rhs / &base))).with_sides(base.clone(), rhs))
        }
        None => out.push(CheckReport::not_applicable("e_s.s1_sq", &inst, "S_1 only bounded")),
    }
    let members = a.to_vec();
    let k = members.len().div_ceil(2);
    let a_prime = GroupSet::from_idx_iter(a.group(), members.choose_multiple(&mut rng(seed), k).copied());
    let t = Threshold::finite(ratio(a.len() as u64, k as u64))?;
    match exact_value(&s_quantity(a, b, &t, budget)?) {
        Some(st) => {
            let np = int(k as u64);
            let lhs = &np * &np * &np * &nb * &nb;
            let rhs = int(common_energy(&a_prime, b)?.value) * &na * &na * &st * &st;
            out.push(
                CheckReport::measured("e_s.a_prime", &inst, to_f64(&(&rhs / &lhs)))
                    .with_sides(lhs, rhs)
                    .with_param("A_prime", format!("{a_prime}"))
                    .with_seed(seed),
            );
        }
        None => out.push(CheckReport::not_applicable("e_s.a_prime", &inst, "S_T only bounded")),
    }
    Ok(out)
}

/// `S_T[A;B'] <= S_T[A;B]` for `B' ⊆ B` and `S_T[A';B] <= R S_{RT}[A;B]`
/// for `A' ⊆ A`, `R = |A|/|A'|`, on seeded random proper subsets.
pub fn check_s_decrease(
    a: &GroupSet,
    b: &GroupSet,
    t: &Threshold,
    budget: &SearchBudget,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let inst = Instance::new([("A", a), ("B", b)]);
    let mut r = rng(seed);
    // a nonempty subset, proper when possible
    let sub = |s: &GroupSet, r: &mut ChaCha8Rng| {
        let members = s.to_vec();
        let size = r.gen_range(1..members.len().max(2));
        GroupSet::from_idx_iter(s.group(), members.choose_multiple(r, size).copied())
    };
    let b_prime = sub(b, &mut r);
    let a_prime = sub(a, &mut r);
    let s_ab = exact_value(&s_quantity(a, b, t, budget)?);
    let s_abp = exact_value(&s_quantity(a, &b_prime, t, budget)?);
    let mut out = Vec::new();
    match (&s_ab, &s_abp) {
        (Some(s_ab), Some(s_abp)) => out.push(
            CheckReport::inequality("s_decrease.b_prime", &inst, s_abp.clone(), s_ab.clone())
                .with_param("B_prime", format!("{b_prime}")),
        ),
        _ => out.push(CheckReport::not_applicable("s_decrease.b_prime", &inst, "S_T only bounded")),
    }
    let rr = ratio(a.len() as u64, a_prime.len() as u64);
    let s_rt = exact_value(&s_quantity(a, b, &t.scaled(&rr), budget)?);
    let s_apb = exact_value(&s_quantity(&a_prime, b, t, budget)?);
    match (&s_rt, &s_apb) {
        (Some(s_rt), Some(s_apb)) => out.push(
            CheckReport::inequality("s_decrease.a_prime", &inst, s_apb.clone(), &rr * s_rt)
                .with_param("A_prime", format!("{a_prime}")),
        ),
        _ => out.push(CheckReport::not_applicable("s_decrease.a_prime", &inst, "S_T only bounded")),
    }
    Ok(out.into_iter().map(|r| r.with_param("T", t).with_seed(seed)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn set(g: &GroupSpec, xs: &[u64]) -> GroupSet {
        GroupSet::from_indices(g, xs.iter().copied()).unwrap()
    }

    fn all_pass(reports: &[CheckReport]) -> bool {
        reports.iter().all(|r| r.pass != Outcome::Fail)
    }

    #[test]
    fn chain_examples() {
        let b = SearchBudget::default();
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        for t in [Threshold::integer(1).unwrap(), Threshold::integer(3).unwrap(), Threshold::Infinite] {
            let r = check_chain(&h, &h, &t, &b).unwrap();
            assert!(all_pass(&r));
            assert_eq!(r[0].rhs, Some(int(1)));
            assert_eq!(r[2].lhs, Some(int(1)));
        }
        let z100 = GroupSpec::cyclic(100).unwrap();
        let ap = set(&z100, &[0, 1, 2, 3, 4]);
        let r = check_chain(&ap, &ap, &Threshold::Infinite, &b).unwrap();
        assert!(all_pass(&r));
        assert_eq!(r[1].lhs, Some(ratio(8, 5)));
        assert_eq!(r[2].rhs, Some(ratio(9, 5)));
        assert_eq!(r[3].pass, Outcome::NotApplicable);
        let sidon = set(&z100, &[0, 1, 3, 7]);
        let r = check_chain(&sidon, &sidon, &Threshold::integer(2).unwrap(), &b).unwrap();
        assert!(all_pass(&r));
        assert_eq!(r[3].pass, Outcome::Measured);
    }

    #[test]
    fn chain_is_na_outside_budget() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let ap = set(&z100, &[0, 1, 2, 3, 4]);
        let tight = SearchBudget {
            max_exact_bits: 4,
            ..SearchBudget::default()
        };
        let r = check_chain(&ap, &ap, &Threshold::Infinite, &tight).unwrap();
        assert!(r.iter().all(|r| r.pass == Outcome::NotApplicable));
    }

    #[test]
    fn dichotomy_examples() {
        let b = SearchBudget::default();
        let z100 = GroupSpec::cyclic(100).unwrap();
        let r = check_dichotomy(&set(&z100, &[0, 1, 2, 3, 4, 5, 6, 7]), &b).unwrap();
        assert_eq!(r.pass, Outcome::Pass);
        let r = check_dichotomy(&set(&z100, &[42]), &b).unwrap();
        assert_eq!(r.pass, Outcome::Pass);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (Some(int(1)), Some(int(2))));
    }

    #[test]
    fn polynomial_criterion_coset() {
        let b = SearchBudget::default();
        let z12 = GroupSpec::cyclic(12).unwrap();
        let coset = set(&z12, &[1, 5, 9]);
        let r = check_polynomial_criterion(&coset, &b).unwrap();
        assert!(r.iter().all(|r| r.lhs == r.rhs));
        assert_eq!(r[0].measured, Some(1.0));
    }

    #[test]
    fn triangle_and_companions() {
        let b = SearchBudget::default();
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        for t in [Threshold::integer(2).unwrap(), Threshold::Infinite] {
            let r = check_triangle(&h, &h, &h, &t, &b).unwrap();
            assert!(r.iter().all(|r| r.pass == Outcome::Pass && r.lhs == Some(int(1)) && r.rhs == Some(int(1))));
        }
        let r = check_ruzsa(&h, &h, &h).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (Some(int(9)), Some(int(9))));
        let z16 = GroupSpec::cyclic(16).unwrap();
        let (x, y, z) = (set(&z16, &[0, 1, 5]), set(&z16, &[2, 3, 9, 11]), set(&z16, &[0, 7]));
        let r = check_triangle(&x, &y, &z, &Threshold::integer(2).unwrap(), &b).unwrap();
        assert!(all_pass(&r));
        assert!(all_pass(&check_plunnecke(&x, 3).unwrap()));
        assert!(all_pass(&check_petridis(&y, &b).unwrap()));
        assert!(all_pass(&check_e_s_bounds(&x, &y, &b, 4).unwrap()));
        for t in [Threshold::integer(1).unwrap(), Threshold::Infinite] {
            assert!(all_pass(&check_s_decrease(&y, &x, &t, &b, 9).unwrap()));
        }
        let dim = check_dim_bounds(&y, &b).unwrap();
        assert!(dim.iter().all(|r| r.pass == Outcome::Measured));
    }

    #[test]
    fn check_list_parsing() {
        assert_eq!(
            CheckKind::parse_list("chain,dichotomy").unwrap(),
            vec![CheckKind::Chain, CheckKind::Dichotomy]
        );
        assert_eq!(CheckKind::parse_list("all").unwrap().len(), CheckKind::ALL.len());
        assert!(CheckKind::parse_list("chain,nope").is_err());
        assert!(CheckKind::parse_list("").is_err());
    }
}
