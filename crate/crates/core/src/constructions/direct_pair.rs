//! Direct pairs `A' + B'` inside `A`, `B`: the randomized shift-removal
//! construction and the exact search for a `k x l` direct pair.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::rng;
use crate::energy::common_energy;
use crate::error::{Error, Result};
use crate::quantities::SearchBudget;
use crate::ratio::{ceil_sqrt, int, ratio, serialize_rational, to_f64, Rational};
use crate::set::GroupSet;
use crate::sumset::{is_direct_sum, rep_function, RepMethod, Sign};

/// Record of one run of [`direct_pair_random_trace`].
#[derive(Clone, Debug, Serialize)]
pub struct RandomDirectPairTrace {
    /// `K` with `E(A,B) = |A||B|^2 / K`.
    #[serde(rename = "K", serialize_with = "serialize_rational")]
    pub k: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub kappa: Rational,
    /// Upper approximation of `2 sqrt(K/kappa)` on a grid of step `1/256`.
    #[serde(rename = "M", serialize_with = "serialize_rational")]
    pub m: Rational,
    pub omega_size: usize,
    /// `sqrt(K/2M) / |B|`.
    pub delta: f64,
    /// `floor(delta * 2^32)`; an element is kept when a uniform 32-bit draw is below it.
    pub delta_fixed: u64,
    pub attempts: u32,
    pub max_attempts: u32,
    pub seed: u64,
    pub success: bool,
    pub a_star: Option<Vec<usize>>,
    pub b_star: Option<Vec<usize>>,
    /// `|B_*| / (kappa K)^{1/4}`.
    pub c0: Option<f64>,
    pub postconditions: Option<Postconditions>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Postconditions {
    /// `|A_*| > (1 - kappa)|A|`.
    pub a_star_large: bool,
    pub direct: bool,
    /// `delta|B|/2 <= |B_*| <= 2 delta |B|`.
    pub size_window: bool,
    pub omega_free: bool,
}

impl Postconditions {
    pub fn all(&self) -> bool {
        self.a_star_large && self.direct && self.size_window && self.omega_free
    }
}

/// Like [`direct_pair_random_trace`], but a run that exhausts its retries is an error.
pub fn direct_pair_random(
    a: &GroupSet,
    b: &GroupSet,
    kappa: &Rational,
    seed: u64,
    max_attempts: u32,
) -> Result<RandomDirectPairTrace> {
    let trace = direct_pair_random_trace(a, b, kappa, seed, max_attempts)?;
    if trace.success {
        Ok(trace)
    } else {
        Err(Error::ConstructionFailed(format!(
            "no admissible B_* after {} attempts: {}",
            trace.attempts,
            serde_json::to_string(&trace).unwrap_or_default()
        )))
    }
}

/// Samples `B_* ⊆ B` with probability `delta = sqrt(K/2M)/|B|` until
/// `|B_*|` lies in `[delta|B|/2, 2 delta|B|]` and no pair of `B_*` lies in
/// `Omega_M = {b != b' : |(A+b) ∩ (A+b')| >= |A|/M}`, then removes every
/// `A - b + b'` from `A`. Here `M = 2 sqrt(K/kappa)` rounded up.
pub fn direct_pair_random_trace(
    a: &GroupSet,
    b: &GroupSet,
    kappa: &Rational,
    seed: u64,
    max_attempts: u32,
) -> Result<RandomDirectPairTrace> {
    let zero = int(0);
    if *kappa <= zero || *kappa >= int(1) {
        return Err(Error::InvalidArgument(format!("kappa must lie in (0,1), got {kappa}")));
    }
    if max_attempts == 0 {
        return Err(Error::InvalidArgument("max_attempts must be positive".into()));
    }
    let g = a.group();
    let energy = common_energy(a, b)?.value;
    let (na, nb) = (a.len(), b.len());
    let k = ratio(BigInt::from(na) * BigInt::from(nb * nb), BigInt::from(energy));
    if k > int(nb as u64) {
        return Err(Error::InvalidArgument(format!("K = {k} exceeds |B| = {nb}")));
    }
    // M = t/256 with t = ceil(sqrt(ceil(65536 * 4K / kappa)))
    let scaled = (&k * int(4 * 65536u64) / kappa).ceil().to_integer();
    let m = ratio(ceil_sqrt(&scaled), 256);

    // r_{A-A}(b' - b) = |(A+b) ∩ (A+b')|
    let r = rep_function(a, a, Sign::Minus, RepMethod::Auto)?;
    let members = b.to_vec();
    let in_omega = |x: usize, y: usize| int(r.get(g.sub_idx(y, x))) * &m >= int(na as u64);
    let mut omega_size = 0usize;
    for &x in &members {
        for &y in &members {
            if x != y && in_omega(x, y) {
                omega_size += 1;
            }
        }
    }

    // delta^2 |B|^2 = K / 2M
    let target = &k / (int(2) * &m);
    let delta_sq = &target / int((nb * nb) as u64);
    let fixed = (&delta_sq * int(BigInt::from(1u8) << 64)).floor().to_integer();
    let delta_fixed = fixed.sqrt().to_u64().unwrap_or(u64::MAX).min(1 << 32);
    let delta = to_f64(&delta_sq).sqrt();

    let mut trace = RandomDirectPairTrace {
        k: k.clone(),
        kappa: kappa.clone(),
        m: m.clone(),
        omega_size,
        delta,
        delta_fixed,
        attempts: 0,
        max_attempts,
        seed,
        success: false,
        a_star: None,
        b_star: None,
        c0: None,
        postconditions: None,
        notes: Vec::new(),
    };
    // |B_*|^2 within [target/4, 4 target]
    let in_window = |s: usize| {
        let s2 = int((s * s) as u64);
        s >= 1 && &target / int(4) <= s2 && s2 <= &target * int(4)
    };
    if !(1..=nb).any(in_window) {
        trace
            .notes
            .push("the size window [delta|B|/2, 2 delta|B|] contains no positive integer".into());
        return Ok(trace);
    }

    let mut r_gen = rng(seed);
    for attempt in 1..=max_attempts {
        trace.attempts = attempt;
        let sample: Vec<usize> = members
            .iter()
            .copied()
            .filter(|_| r_gen.gen_range(0..1u64 << 32) < delta_fixed)
            .collect();
        if !in_window(sample.len()) {
            continue;
        }
        if sample.iter().any(|&x| sample.iter().any(|&y| x != y && in_omega(x, y))) {
            continue;
        }
        let mut a_star = a.clone();
        for &x in &sample {
            for &y in &sample {
                if x != y {
                    // remove A - x + y
                    let shift = g.sub_idx(y, x);
                    for v in a.indices() {
                        a_star.remove_idx(g.add_idx(v, shift));
                    }
                }
            }
        }
        let b_star = GroupSet::from_idx_iter(g, sample.iter().copied());
        let post = Postconditions {
            a_star_large: int(a_star.len() as u64) > (int(1) - kappa) * int(na as u64),
            direct: !a_star.is_empty() && is_direct_sum(&a_star, &b_star)?,
            size_window: in_window(b_star.len()),
            omega_free: omega_free(a, &b_star, &m)?,
        };
        let c0 = b_star.len() as f64 / (to_f64(kappa) * to_f64(&k)).powf(0.25);
        trace.success = post.all();
        trace.postconditions = Some(post);
        trace.c0 = Some(c0);
        trace.a_star = Some(a_star.to_vec());
        trace.b_star = Some(b_star.to_vec());
        if !post.all() {
            trace.notes.push("an admissible sample violated a postcondition".into());
        }
        return Ok(trace);
    }
    trace.notes.push(format!("no admissible sample in {max_attempts} attempts"));
    Ok(trace)
}

/// Recheck through translates: `|(A+b) ∩ (A+b')| < |A|/M` for all `b != b'` in `B_*`.
fn omega_free(a: &GroupSet, b_star: &GroupSet, m: &Rational) -> Result<bool> {
    let shifted: Vec<GroupSet> = b_star.elements().map(|x| a.translate(x)).collect::<Result<_>>()?;
    for (i, p) in shifted.iter().enumerate() {
        for (j, q) in shifted.iter().enumerate() {
            if i != j && int(p.intersection_len(q)? as u64) * m >= int(a.len() as u64) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum DirectPairOutcome {
    Found { x: Vec<usize>, y: Vec<usize> },
    Absent,
    /// The instance exceeds the search budget.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectPairSearch {
    pub outcome: DirectPairOutcome,
    /// `E(A,B) - |A||B|`.
    pub excess_energy: u128,
    pub k_at_most_half: bool,
    pub excess_above_a: bool,
    /// `2 k l^2 E <= |A|^2 |B|^2`.
    pub size_condition: bool,
    /// All hypotheses hold, so a pair must exist.
    pub hypotheses_met: bool,
    /// The hypotheses hold but the exhaustive search found nothing.
    pub verification_failure: bool,
}

/// Exhaustive search for `X ⊆ A`, `Y ⊆ B` with `|X| = k`, `|Y| = l` and `X + Y` direct.
///
/// `X` runs over `k`-subsets in increasing mask order; the first `X` whose
/// conflict graph on `B` has an independent set of size `l` wins, with `Y`
/// the first `l` members of the smallest maximum independent set.
pub fn direct_pair_witness(
    a: &GroupSet,
    b: &GroupSet,
    k: usize,
    l: usize,
    budget: &SearchBudget,
) -> Result<DirectPairSearch> {
    a.same_group(b)?;
    budget.validate()?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet("direct_pair_witness"));
    }
    if k == 0 || l == 0 || k > a.len() || l > b.len() {
        return Err(Error::InvalidArgument(format!(
            "sizes k = {k}, l = {l} must lie in [1, {}] x [1, {}]",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as u128, b.len() as u128);
    let excess = common_energy(a, b)?.value - na * nb;
    let k_at_most_half = 2 * k <= a.len();
    let excess_above_a = excess > na;
    let lhs = BigInt::from(2u8) * BigInt::from(k) * BigInt::from(l * l) * BigInt::from(excess);
    let size_condition = lhs <= BigInt::from(na * na * nb * nb);
    let hypotheses_met = k_at_most_half && excess_above_a && size_condition;

    let outcome = if a.len() + b.len() > budget.max_exact_bits as usize || a.len() >= 64 || b.len() >= 64 {
        DirectPairOutcome::Unknown
    } else {
        search_sizes(a, b, k, l)
    };
    if let DirectPairOutcome::Found { x, y } = &outcome {
        let xs = GroupSet::from_idx_iter(a.group(), x.iter().copied());
        let ys = GroupSet::from_idx_iter(a.group(), y.iter().copied());
        debug_assert!(is_direct_sum(&xs, &ys)?);
    }
    Ok(DirectPairSearch {
        verification_failure: hypotheses_met && outcome == DirectPairOutcome::Absent,
        outcome,
        excess_energy: excess,
        k_at_most_half,
        excess_above_a,
        size_condition,
        hypotheses_met,
    })
}

fn search_sizes(a: &GroupSet, b: &GroupSet, k: usize, l: usize) -> DirectPairOutcome {
    let g = a.group();
    let av = a.to_vec();
    let bv = b.to_vec();
    let n = bv.len();
    let all_b = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // k-subsets in increasing numeric order (Gosper's hack)
    let mut xmask: u64 = (1u64 << k) - 1;
    let limit = 1u64 << av.len();
    while xmask < limit {
        let xs: Vec<usize> = (0..av.len()).filter(|&i| xmask >> i & 1 == 1).map(|i| av[i]).collect();
        let diffs = GroupSet::from_idx_iter(g, xs.iter().flat_map(|&p| xs.iter().map(move |&q| g.sub_idx(p, q))));
        let adj: Vec<u64> = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&t| t != j && diffs.contains_idx(g.sub_idx(bv[j], bv[t])))
                    .fold(0u64, |m, t| m | (1 << t))
            })
            .collect();
        if let Some((_, ymask)) = crate::quantities::max_independent(&adj, all_b, l - 1) {
            let y: Vec<usize> = (0..n).filter(|&j| ymask >> j & 1 == 1).take(l).map(|j| bv[j]).collect();
            return DirectPairOutcome::Found { x: xs, y };
        }
        let c = xmask & xmask.wrapping_neg();
        let r = xmask + c;
        if r == 0 {
            break;
        }
        xmask = (((r ^ xmask) >> 2) / c) | r;
    }
    DirectPairOutcome::Absent
}
