//! Example families and executable constructions: progressions, subgroups
//! and their unions, Sidon sets, random sets, direct pairs and coverings.

mod cover;
mod direct_pair;

use std::collections::HashSet;

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::ratio::Rational;
use crate::set::GroupSet;
use crate::sumset::{rep_function, sumset, RepMethod, Sign};

pub use cover::{exhaustion_cover, half_direct_search, maximal_direct_complement, CoverWitness, HalfDirectResult};
pub use direct_pair::{
    direct_pair_random, direct_pair_random_trace, direct_pair_witness, DirectPairOutcome, DirectPairSearch,
    RandomDirectPairTrace,
};

/// Name of the generator behind every seeded construction.
pub const RNG_NAME: &str = "chacha8/rand-0.8";

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `{start, start + diff, ..., start + (len-1) diff}`; the terms must be distinct.
pub fn make_ap(g: &GroupSpec, start: Element, diff: Element, len: usize) -> Result<GroupSet> {
    g.element(start.index() as u64)?;
    g.element(diff.index() as u64)?;
    if len == 0 {
        return Err(Error::InvalidArgument("progression length must be positive".into()));
    }
    let order = g.additive_order_idx(diff.index());
    if len as u64 > order {
        return Err(Error::ConstructionFailed(format!(
            "progression of length {len} with difference of order {order} repeats"
        )));
    }
    let mut x = start.index();
    let mut out = GroupSet::empty(g);
    for _ in 0..len {
        out.insert_idx(x);
        x = g.add_idx(x, diff.index());
    }
    Ok(out)
}

/// The subgroup generated by `generators`.
pub fn make_subgroup(g: &GroupSpec, generators: &[Element]) -> Result<GroupSet> {
    for x in generators {
        g.element(x.index() as u64)?;
    }
    let mut out = GroupSet::from_idx_iter(g, [0]);
    let mut frontier = vec![0usize];
    while let Some(h) = frontier.pop() {
        for x in generators {
            let y = g.add_idx(h, x.index());
            if out.insert_idx(y) {
                frontier.push(y);
            }
        }
    }
    Ok(out)
}

fn is_subgroup(h: &GroupSet) -> bool {
    let g = h.group();
    h.contains_idx(0) && h.indices().all(|a| h.indices().all(|b| h.contains_idx(g.sub_idx(a, b))))
}

/// `H_1 ∪ ... ∪ H_k` for mutually additively disjoint subgroups: pairwise
/// intersections are `{0}` and `H_1 + ... + H_k` is direct.
pub fn make_subgroup_union(subgroups: &[GroupSet]) -> Result<GroupSet> {
    let Some(first) = subgroups.first() else {
        return Err(Error::InvalidArgument("need at least one subgroup".into()));
    };
    let g = first.group();
    for (i, h) in subgroups.iter().enumerate() {
        first.same_group(h)?;
        if !is_subgroup(h) {
            return Err(Error::InvalidArgument(format!("set #{i} is not a subgroup")));
        }
    }
    for i in 0..subgroups.len() {
        for j in i + 1..subgroups.len() {
            if subgroups[i].intersection_len(&subgroups[j])? != 1 {
                return Err(Error::ConstructionFailed(format!(
                    "subgroups #{i} and #{j} meet outside 0"
                )));
            }
        }
    }
    let mut total = GroupSet::from_idx_iter(g, [0]);
    let mut product = 1usize;
    for h in subgroups {
        total = sumset(&total, h)?;
        product *= h.len();
        if total.len() != product {
            return Err(Error::ConstructionFailed("the sum of the subgroups is not direct".into()));
        }
    }
    let mut out = GroupSet::empty(g);
    for h in subgroups {
        out = out.union(h)?;
    }
    let expected = subgroups.iter().map(GroupSet::len).sum::<usize>() + 1 - subgroups.len();
    debug_assert_eq!(out.len(), expected);
    Ok(out)
}

/// Whether `r_{A-A}(x) <= 1` for every `x != 0`.
pub fn is_sidon(a: &GroupSet) -> Result<bool> {
    let r = rep_function(a, a, Sign::Minus, RepMethod::Auto)?;
    Ok(r.counts().iter().skip(1).all(|&c| c <= 1))
}

/// Greedy Sidon set over a seeded random order of the group.
///
/// A candidate `c` is kept when the new differences `±(c - a)` are nonzero,
/// pairwise distinct and absent from the differences collected so far.
pub fn make_sidon(g: &GroupSpec, size: usize, seed: u64) -> Result<GroupSet> {
    if size == 0 {
        return Err(Error::InvalidArgument("Sidon set size must be positive".into()));
    }
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.shuffle(&mut rng(seed));
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    let mut diffs = GroupSet::empty(g);
    let mut fresh: HashSet<usize> = HashSet::new();
    for &c in &order {
        if chosen.len() == size {
            break;
        }
        fresh.clear();
        let ok = chosen.iter().all(|&a| {
            let (p, m) = (g.sub_idx(c, a), g.sub_idx(a, c));
            p != m && !diffs.contains_idx(p) && !diffs.contains_idx(m) && fresh.insert(p) && fresh.insert(m)
        });
        if ok {
            for &d in &fresh {
                diffs.insert_idx(d);
            }
            chosen.push(c);
        }
    }
    if chosen.len() < size {
        return Err(Error::ConstructionFailed(format!(
            "greedy Sidon search in {g} stopped at size {} of {size}",
            chosen.len()
        )));
    }
    let out = GroupSet::from_idx_iter(g, chosen);
    if !is_sidon(&out)? {
        return Err(Error::ConstructionFailed("greedy output is not Sidon".into()));
    }
    Ok(out)
}

/// Each element independently with probability `delta`, `0 < delta < 1`.
///
/// Element `x` (in index order) is kept when a uniform draw from
/// `0..den(delta)` falls below `num(delta)`.
pub fn sample_random_set(g: &GroupSpec, delta: &Rational, seed: u64) -> Result<GroupSet> {
    if *delta <= Rational::zero() || *delta >= Rational::one() {
        return Err(Error::InvalidArgument(format!("delta must lie strictly between 0 and 1, got {delta}")));
    }
    let num = delta.numer().to_u64();
    let den = delta.denom().to_u64();
    let (Some(num), Some(den)) = (num, den) else {
        return Err(Error::InvalidArgument(format!("delta {delta} needs a 64-bit denominator")));
    };
    let mut r = rng(seed);
    Ok(GroupSet::from_idx_iter(
        g,
        (0..g.order()).filter(|_| r.gen_range(0..den) < num),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    fn el(g: &GroupSpec, i: u64) -> Element {
        g.element(i).unwrap()
    }

    #[test]
    fn ap_examples() {
        let z20 = GroupSpec::cyclic(20).unwrap();
        let ap = make_ap(&z20, el(&z20, 2), el(&z20, 3), 4).unwrap();
        assert_eq!(ap.to_vec(), vec![2, 5, 8, 11]);
        assert!(make_ap(&z20, el(&z20, 0), el(&z20, 5), 5).is_err());
        assert_eq!(make_ap(&z20, el(&z20, 0), el(&z20, 5), 4).unwrap().len(), 4);
        assert!(make_ap(&z20, el(&z20, 0), el(&z20, 1), 0).is_err());
    }

    #[test]
    fn subgroup_union_examples() {
        let f = GroupSpec::parse("F2^4").unwrap();
        let h1 = make_subgroup(&f, &[el(&f, 8), el(&f, 4)]).unwrap();
        let h2 = make_subgroup(&f, &[el(&f, 2), el(&f, 1)]).unwrap();
        assert_eq!((h1.len(), h2.len()), (4, 4));
        let a = make_subgroup_union(&[h1.clone(), h2.clone()]).unwrap();
        assert_eq!(a.len(), 7);
        assert!(make_subgroup_union(&[h1.clone(), h1.clone()]).is_err());
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert_eq!(make_subgroup(&z6, &[el(&z6, 2)]).unwrap().to_vec(), vec![0, 2, 4]);
        let not_sub = GroupSet::from_indices(&z6, [0, 1]).unwrap();
        assert!(make_subgroup_union(&[not_sub]).is_err());
    }

    #[test]
    fn sidon_examples() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let s = make_sidon(&z100, 4, 1).unwrap();
        assert_eq!(s.len(), 4);
        assert!(is_sidon(&s).unwrap());
        assert!(is_sidon(&GroupSet::from_indices(&z100, [0, 1, 3, 7]).unwrap()).unwrap());
        assert_eq!(make_sidon(&z100, 1, 9).unwrap().len(), 1);
        // Z/7 has only 6 nonzero differences, a 4-element Sidon set needs 12
        let z7 = GroupSpec::cyclic(7).unwrap();
        assert!(make_sidon(&z7, 4, 0).is_err());
        for mask in 0u32..128 {
            if mask.count_ones() == 4 {
                let s = GroupSet::from_idx_iter(&z7, (0..7).filter(|i| mask >> i & 1 == 1));
                assert!(!is_sidon(&s).unwrap());
            }
        }
    }

    #[test]
    fn random_set_examples() {
        let z256 = GroupSpec::cyclic(256).unwrap();
        assert!(sample_random_set(&z256, &ratio(1, 1), 0).is_err());
        assert!(sample_random_set(&z256, &ratio(0, 1), 0).is_err());
        let a = sample_random_set(&z256, &ratio(1, 8), 11).unwrap();
        assert!((12..=52).contains(&a.len()), "{}", a.len());
        assert_eq!(a, sample_random_set(&z256, &ratio(1, 8), 11).unwrap());
    }

    #[test]
    fn random_set_distribution_on_z2() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mut counts = [0f64; 4];
        let trials = 10_000u64;
        for seed in 0..trials {
            let s = sample_random_set(&z2, &ratio(1, 2), seed).unwrap();
            let k = s.indices().fold(0, |acc, i| acc | (1 << i));
            counts[k] += 1.0;
        }
        let expect = trials as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|c| (c - expect).powi(2) / expect).sum();
        // 3 degrees of freedom, 0.1% critical value
        assert!(chi2 < 16.27, "{counts:?}");
    }
}
