//! Covering by translates: maximal direct complements, the exhaustion
//! algorithm, and the search for large direct sums inside `A`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantities::{s_quantity, Exactness, SearchBudget};
use crate::ratio::{int, ratio, to_f64, Rational, Threshold};
use crate::set::GroupSet;
use crate::sumset::{difference_set, rep_function, sumset, RepMethod, Sign};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverWitness {
    /// `A'` for a direct complement, `A_1` for the exhaustion.
    pub core: Vec<usize>,
    /// The translates `x_1, x_2, ...` chosen by the exhaustion.
    pub translates: Vec<usize>,
    /// The maximal `Y` (or `W`) with `core + Y` direct.
    pub complement_cover: Vec<usize>,
    /// The set grown by the exhaustion (`A_s`); equal to the core otherwise.
    pub reached: Vec<usize>,
    pub steps: usize,
    /// `ceil(4 M_*^2)` when `M_*` was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_bound: Option<u64>,
    /// Every claimed inclusion was recomputed and holds.
    pub verified: bool,
}

/// Greedy maximal `Y ⊆ ambient` (ascending order) with `core + Y` direct,
/// together with the check `ambient ⊆ core - core + Y`.
pub fn maximal_direct_complement(core: &GroupSet, ambient: &GroupSet) -> Result<CoverWitness> {
    core.same_group(ambient)?;
    if core.is_empty() {
        return Err(Error::EmptySet("maximal_direct_complement core"));
    }
    let (y, verified) = complement(core, ambient)?;
    Ok(CoverWitness {
        core: core.to_vec(),
        translates: Vec::new(),
        complement_cover: y.to_vec(),
        reached: core.to_vec(),
        steps: y.len(),
        step_bound: None,
        verified,
    })
}

fn complement(core: &GroupSet, ambient: &GroupSet) -> Result<(GroupSet, bool)> {
    let g = core.group();
    let d = difference_set(core, core)?;
    let mut y: Vec<usize> = Vec::new();
    for v in ambient.indices() {
        if y.iter().all(|&u| !d.contains_idx(g.sub_idx(v, u))) {
            y.push(v);
        }
    }
    let y = GroupSet::from_idx_iter(g, y);
    let direct = sumset(core, &y)?.len() == core.len() * y.len();
    let covered = ambient.is_subset(&sumset(&d, &y)?)?;
    Ok((y, direct && covered))
}

/// Grows `A_1` inside `A` by pieces `(A \ A_i) ∩ (A_1 + x_i)` of largest size
/// (ties to the smallest `x_i`) until `|A_i| >= |A|/2`, then covers `A` by
/// `A_s - A_s + W` with a maximal direct complement `W`.
pub fn exhaustion_cover(a: &GroupSet, a1: &GroupSet, m_star: Option<&Rational>) -> Result<CoverWitness> {
    a.same_group(a1)?;
    if a1.is_empty() {
        return Err(Error::EmptySet("exhaustion_cover A1"));
    }
    if !a1.is_subset(a)? {
        return Err(Error::InvalidArgument("A1 must be a subset of A".into()));
    }
    let g = a.group();
    let mut cur = a1.clone();
    let mut translates = Vec::new();
    while 2 * cur.len() < a.len() {
        let rest = a.minus(&cur)?;
        // |rest ∩ (A1 + x)| = r_{rest - A1}(x)
        let r = rep_function(&rest, a1, Sign::Minus, RepMethod::Auto)?;
        let (x, best) = r
            .counts()
            .iter()
            .enumerate()
            .fold((0usize, 0u64), |acc, (x, &c)| if c > acc.1 { (x, c) } else { acc });
        if best == 0 {
            return Err(Error::ConstructionFailed(format!(
                "exhaustion stalled at |A_i| = {} of |A| = {}",
                cur.len(),
                a.len()
            )));
        }
        for v in a1.indices() {
            let t = g.add_idx(v, x);
            if rest.contains_idx(t) {
                cur.insert_idx(t);
            }
        }
        translates.push(x);
    }
    let mut union_cover = a1.clone();
    for &x in &translates {
        for v in a1.indices() {
            union_cover.insert_idx(g.add_idx(v, x));
        }
    }
    let (w, w_ok) = complement(&cur, a)?;
    let verified = 2 * cur.len() >= a.len() && cur.is_subset(&union_cover)? && cur.is_subset(a)? && w_ok;
    let step_bound = m_star.map(|m| {
        let v = (int(4) * m * m).ceil().to_integer();
        v.try_into().unwrap_or(u64::MAX)
    });
    Ok(CoverWitness {
        core: a1.to_vec(),
        steps: translates.len(),
        translates,
        complement_cover: w.to_vec(),
        reached: cur.to_vec(),
        step_bound,
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfDirectResult {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// `|X||Y|`.
    pub product: usize,
    pub exactness: Exactness,
    /// `|X||Y| / (kappa^{1/4} |A|)`.
    pub ratio_to_kappa_quarter: f64,
    /// Largest direct sum with `|X| >= (1/2 + kappa)|A|`.
    pub plus_probe: Option<Probe>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub exactness: Exactness,
    /// `|Y| * kappa`.
    pub y_times_kappa: f64,
}

/// Largest `|X||Y|` over `X, Y ⊆ A` with `|X| >= (1/2 - kappa)|A|` and `X + Y` direct.
pub fn half_direct_search(a: &GroupSet, kappa: &Rational, budget: &SearchBudget) -> Result<HalfDirectResult> {
    let half = ratio(1, 2);
    if *kappa <= int(0) || *kappa >= half {
        return Err(Error::InvalidArgument(format!("kappa must lie in (0, 1/2), got {kappa}")));
    }
    if a.is_empty() {
        return Err(Error::EmptySet("half_direct_search"));
    }
    let t = Threshold::finite(int(1) / (&half - kappa))?;
    let r = s_quantity(a, a, &t, budget)?;
    let (x, y) = r.pair().expect("S_T has a pair witness");
    let product = x.len() * y.len();
    let ratio_to_kappa_quarter = product as f64 / (to_f64(kappa).powf(0.25) * a.len() as f64);

    let t_plus = Threshold::finite(int(1) / (&half + kappa))?;
    let plus = s_quantity(a, a, &t_plus, budget)?;
    let (px, py) = plus.pair().expect("S_T has a pair witness");
    Ok(HalfDirectResult {
        x: x.to_vec(),
        y: y.to_vec(),
        product,
        exactness: r.exactness,
        ratio_to_kappa_quarter,
        plus_probe: Some(Probe {
            x: px.to_vec(),
            y: py.to_vec(),
            exactness: plus.exactness,
            y_times_kappa: py.len() as f64 * to_f64(kappa),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_subgroup, make_subgroup_union};
    use crate::group::GroupSpec;

    fn set(g: &GroupSpec, xs: &[u64]) -> GroupSet {
        GroupSet::from_indices(g, xs.iter().copied()).unwrap()
    }

    fn two_subgroups() -> (GroupSet, GroupSet, GroupSet) {
        let f = GroupSpec::parse("F2^4").unwrap();
        let h1 = make_subgroup(&f, &[f.element(8).unwrap(), f.element(4).unwrap()]).unwrap();
        let h2 = make_subgroup(&f, &[f.element(2).unwrap(), f.element(1).unwrap()]).unwrap();
        let a = make_subgroup_union(&[h1.clone(), h2.clone()]).unwrap();
        (a, h1, h2)
    }

    #[test]
    fn complement_examples() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        let w = maximal_direct_complement(&h, &h).unwrap();
        assert_eq!(w.complement_cover, vec![0]);
        assert!(w.verified);
        let z100 = GroupSpec::cyclic(100).unwrap();
        let w = maximal_direct_complement(&set(&z100, &[0, 1]), &set(&z100, &[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(w.complement_cover, vec![0, 2, 4]);
        assert!(w.verified);
        let amb = set(&z100, &[3, 9, 40]);
        let w = maximal_direct_complement(&set(&z100, &[5]), &amb).unwrap();
        assert_eq!(w.complement_cover, amb.to_vec());
        assert!(w.verified);
    }

    #[test]
    fn exhaustion_examples() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let a = set(&z100, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let w = exhaustion_cover(&a, &a, None).unwrap();
        assert_eq!(w.steps, 0);
        assert!(w.verified);
        let w = exhaustion_cover(&a, &set(&z100, &[0, 1]), None).unwrap();
        assert!(w.steps <= 3 && w.verified);
        assert!(2 * w.reached.len() >= a.len());

        // A1 = H1 already holds 4 of the 7 elements
        let (a, h1, h2) = two_subgroups();
        let w = exhaustion_cover(&a, &h1, None).unwrap();
        assert_eq!(w.steps, 0);
        assert!(w.verified);
        // a two-element start needs one translate, taken from inside H2
        let start = set(a.group(), &[0, 1]);
        let w = exhaustion_cover(&a, &start, Some(&int(2))).unwrap();
        assert_eq!(w.steps, 1);
        assert!(h2.contains_idx(w.translates[0]));
        assert!(w.verified);
        assert_eq!(w.step_bound, Some(16));
        assert!(exhaustion_cover(&a, &set(a.group(), &[5, 6]), None).is_err());
    }

    #[test]
    fn half_direct_examples() {
        let (a, _, _) = two_subgroups();
        let b = SearchBudget::default();
        let r = half_direct_search(&a, &ratio(1, 4), &b).unwrap();
        assert!(r.product >= a.len());
        let probe = r.plus_probe.unwrap();
        assert!(2 * probe.x.len() >= a.len());
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        let r = half_direct_search(&h, &ratio(1, 8), &b).unwrap();
        assert_eq!(r.product, 3);
        let z100 = GroupSpec::cyclic(100).unwrap();
        let sidon = set(&z100, &[0, 1, 3, 7, 12, 20]);
        let r = half_direct_search(&sidon, &ratio(1, 4), &b).unwrap();
        assert!(r.product >= 9);
        assert!(half_direct_search(&sidon, &ratio(1, 2), &b).is_err());
    }
}
