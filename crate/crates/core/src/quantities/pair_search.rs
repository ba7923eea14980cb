//! Maximisation of `|X||Y|/|A|` over direct pairs (`S_T`) and of
//! `|X|^2|Y|^2 / (|A| E(X,Y))` over all pairs (`E_T`), with `X ⊆ A`,
//! `|X| >= |A|/T`, nonempty `Y ⊆ B`.
//!
//! The exact searches walk `X` in increasing mask order. For `S_T` the best
//! `Y` for a fixed `X` is a maximum independent set of the conflict graph on
//! `B` (`b ~ b'` when `b - b'` lies in `X - X`), found by branch and bound.
//! For `E_T` every `Y` is visited in Gray-code order with the energy updated
//! incrementally from `E(X,Y) = sum_{y,y'} r_{X-X}(y - y')`. Ties go to the
//! smallest `X` mask, then the smallest `Y` mask.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Exactness, QuantityKind, QuantityResult, SearchBudget, Witness};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::ratio::{cmp_frac, ratio, QValue, Threshold};
use crate::set::GroupSet;
use crate::sumset::{difference_set, sumset};

const NONE: u32 = u32::MAX;

/// Difference tables for the members of `A` and `B`.
struct PairCtx {
    group: GroupSpec,
    a: Vec<usize>,
    b: Vec<usize>,
    /// `a_pair[i*m + k]`: id of `a_i - a_k` among the distinct nonzero differences of `A`.
    a_pair: Vec<u32>,
    /// `b_pair[j*n + l]`: id of `b_j - b_l` in the same table, or `NONE`.
    b_pair: Vec<u32>,
    ids: usize,
}

impl PairCtx {
    fn new(a: &GroupSet, b: &GroupSet) -> Self {
        let g = a.group().clone();
        let av = a.to_vec();
        let bv = b.to_vec();
        let (m, n) = (av.len(), bv.len());
        let mut index: HashMap<usize, u32> = HashMap::new();
        let mut a_pair = vec![NONE; m * m];
        for i in 0..m {
            for k in 0..m {
                if i != k {
                    let d = g.sub_idx(av[i], av[k]);
                    let next = index.len() as u32;
                    a_pair[i * m + k] = *index.entry(d).or_insert(next);
                }
            }
        }
        let mut b_pair = vec![NONE; n * n];
        for j in 0..n {
            for l in 0..n {
                if j != l {
                    let d = g.sub_idx(bv[j], bv[l]);
                    b_pair[j * n + l] = index.get(&d).copied().unwrap_or(NONE);
                }
            }
        }
        PairCtx {
            group: g,
            a: av,
            b: bv,
            a_pair,
            b_pair,
            ids: index.len(),
        }
    }

    fn x_set(&self, mask: u64) -> GroupSet {
        GroupSet::from_member_mask(&self.group, &self.a, mask)
    }

    fn y_set(&self, mask: u64) -> GroupSet {
        GroupSet::from_member_mask(&self.group, &self.b, mask)
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(j)
        }
    })
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Maximum independent set strictly larger than `floor`, smallest mask among
/// the maximum ones. Vertices are decided from the highest index down with
/// the exclusion branch first, so leaves arrive in increasing mask order.
pub(crate) fn max_independent(adj: &[u64], vertices: u64, floor: usize) -> Option<(usize, u64)> {
    fn rec(adj: &[u64], chosen: u64, size: usize, cand: u64, best: &mut (usize, Option<u64>)) {
        if cand == 0 {
            if size > best.0 {
                *best = (size, Some(chosen));
            }
            return;
        }
        if size + cand.count_ones() as usize <= best.0 {
            return;
        }
        let v = 63 - cand.leading_zeros() as usize;
        let rest = cand & !(1u64 << v);
        rec(adj, chosen, size, rest, best);
        rec(adj, chosen | (1u64 << v), size + 1, rest & !adj[v], best);
    }
    let mut best = (floor, None);
    rec(adj, 0, 0, vertices, &mut best);
    best.1.map(|m| (best.0, m))
}

fn check_inputs(a: &GroupSet, b: &GroupSet, budget: &SearchBudget) -> Result<()> {
    a.same_group(b)?;
    budget.validate()?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet("S_T / E_T"));
    }
    Ok(())
}

fn fits_exact(a: &GroupSet, b: &GroupSet, budget: &SearchBudget) -> bool {
    a.len() + b.len() <= budget.max_exact_bits as usize && a.len() < 64 && b.len() < 64
}

/// `S_T[A;B]`.
pub fn s_quantity(a: &GroupSet, b: &GroupSet, t: &Threshold, budget: &SearchBudget) -> Result<QuantityResult> {
    check_inputs(a, b, budget)?;
    let m = a.len();
    let (x, y, exactness) = if fits_exact(a, b, budget) {
        let ctx = PairCtx::new(a, b);
        let sum_len = sumset(a, b)?.len();
        let (xm, ym) = s_exact(&ctx, t, sum_len);
        (ctx.x_set(xm), ctx.y_set(ym), Exactness::Exact)
    } else {
        let (x, y) = s_heuristic(a, b, t, budget)?;
        (x, y, Exactness::LowerBound)
    };
    Ok(QuantityResult {
        kind: QuantityKind::S,
        value: QValue::Finite(ratio((x.len() * y.len()) as u64, m as u64)),
        t: Some(t.clone()),
        witness: Witness::Pair(x, y),
        exactness,
    })
}

fn s_exact(ctx: &PairCtx, t: &Threshold, sum_len: usize) -> (u64, u64) {
    let (m, n) = (ctx.a.len(), ctx.b.len());
    let mut forbidden = vec![0u64; ctx.ids.div_ceil(64).max(1)];
    let mut adj = vec![0u64; n];
    let all_b = low_mask(n);
    let mut best_prod = 0usize;
    let mut best = (0u64, 0u64);
    for xmask in 1..=low_mask(m) {
        let kx = xmask.count_ones() as usize;
        if !t.admits(kx, m) {
            continue;
        }
        let ub_y = n.min(sum_len / kx);
        if kx * ub_y <= best_prod {
            continue;
        }
        forbidden.fill(0);
        for i in bits(xmask) {
            for k in bits(xmask) {
                if i != k {
                    let id = ctx.a_pair[i * m + k] as usize;
                    forbidden[id / 64] |= 1 << (id % 64);
                }
            }
        }
        for (j, row) in adj.iter_mut().enumerate() {
            *row = 0;
            for l in 0..n {
                let id = ctx.b_pair[j * n + l];
                if id != NONE && forbidden[id as usize / 64] >> (id % 64) & 1 == 1 {
                    *row |= 1 << l;
                }
            }
        }
        if let Some((size, ymask)) = max_independent(&adj, all_b, best_prod / kx) {
            if kx * size > best_prod {
                best_prod = kx * size;
                best = (xmask, ymask);
            }
        }
    }
    best
}

/// `E_T[A;B]`.
pub fn e_quantity(a: &GroupSet, b: &GroupSet, t: &Threshold, budget: &SearchBudget) -> Result<QuantityResult> {
    check_inputs(a, b, budget)?;
    let m = a.len();
    let (x, y, num, den, exactness) = if fits_exact(a, b, budget) {
        let ctx = PairCtx::new(a, b);
        let sum_len = sumset(a, b)?.len();
        let best = e_exact(&ctx, t, sum_len);
        (ctx.x_set(best.2), ctx.y_set(best.3), best.0, best.1, Exactness::Exact)
    } else {
        let (x, y, num, den) = e_heuristic(a, b, t, budget)?;
        (x, y, num, den, Exactness::LowerBound)
    };
    debug_assert!(den > 0 && m > 0);
    Ok(QuantityResult {
        kind: QuantityKind::E,
        value: QValue::Finite(ratio(num, den)),
        t: Some(t.clone()),
        witness: Witness::Pair(x, y),
        exactness,
    })
}

/// Returns `(num, den, xmask, ymask)` of the best value `num/den`.
fn e_exact(ctx: &PairCtx, t: &Threshold, sum_len: usize) -> (u128, u128, u64, u64) {
    let (m, n) = (ctx.a.len(), ctx.b.len());
    let mut counts = vec![0u32; ctx.ids.max(1)];
    let mut w = vec![0u64; n * n];
    let mut best: Option<(u128, u128, u64, u64)> = None;
    for xmask in 1..=low_mask(m) {
        let kx = xmask.count_ones() as usize;
        if !t.admits(kx, m) {
            continue;
        }
        // value <= |X+Y|/|A| <= min(|X||B|, |A+B|)/|A|
        let ub = (kx * n).min(sum_len) as u128;
        if let Some((bn, bd, _, _)) = best {
            if cmp_frac(ub, m as u128, bn, bd) != Ordering::Greater {
                continue;
            }
        }
        for i in bits(xmask) {
            for k in bits(xmask) {
                if i != k {
                    counts[ctx.a_pair[i * m + k] as usize] += 1;
                }
            }
        }
        for j in 0..n {
            for l in 0..n {
                w[j * n + l] = if j == l {
                    kx as u64
                } else {
                    match ctx.b_pair[j * n + l] {
                        NONE => 0,
                        id => counts[id as usize] as u64,
                    }
                };
            }
        }
        for i in bits(xmask) {
            for k in bits(xmask) {
                if i != k {
                    counts[ctx.a_pair[i * m + k] as usize] = 0;
                }
            }
        }

        let (mut ymask, mut energy, mut size) = (0u64, 0u64, 0u64);
        for step in 1u64..=low_mask(n) {
            let j = step.trailing_zeros() as usize;
            let bit = 1u64 << j;
            if ymask & bit != 0 {
                ymask ^= bit;
                let cross: u64 = bits(ymask).map(|l| w[j * n + l]).sum();
                energy -= w[j * n + j] + 2 * cross;
                size -= 1;
            } else {
                let cross: u64 = bits(ymask).map(|l| w[j * n + l]).sum();
                energy += w[j * n + j] + 2 * cross;
                ymask |= bit;
                size += 1;
            }
            let num = (kx as u128 * size as u128).pow(2);
            let den = m as u128 * energy as u128;
            let better = match best {
                None => true,
                Some((bn, bd, bx, by)) => match cmp_frac(num, den, bn, bd) {
                    Ordering::Greater => true,
                    Ordering::Equal => bx == xmask && ymask < by,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((num, den, xmask, ymask));
            }
        }
    }
    best.expect("X = A is always admissible")
}

/// Difference set `S - S` as a membership mask.
fn differences(g: &GroupSpec, members: &[usize]) -> GroupSet {
    let s = GroupSet::from_idx_iter(g, members.iter().copied());
    difference_set(&s, &s).expect("same group")
}

/// Greedy independent set: vertices in `order`, `u ~ v` when `u - v ∈ forbidden`.
fn greedy_independent(g: &GroupSpec, order: &[usize], forbidden: &GroupSet) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for &v in order {
        if chosen.iter().all(|&u| !forbidden.contains_idx(g.sub_idx(v, u))) {
            chosen.push(v);
        }
    }
    chosen
}

/// Orders vertices by conflict degree (random tie-break), or uniformly at random.
fn vertex_order(g: &GroupSpec, members: &[usize], forbidden: &GroupSet, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order = members.to_vec();
    order.shuffle(rng);
    if rng.gen_bool(0.5) {
        let degree = |v: usize| {
            members
                .iter()
                .filter(|&&u| u != v && forbidden.contains_idx(g.sub_idx(v, u)))
                .count()
        };
        let mut keyed: Vec<(usize, usize)> = order.iter().map(|&v| (degree(v), v)).collect();
        keyed.sort_by_key(|&(d, _)| d);
        order = keyed.into_iter().map(|(_, v)| v).collect();
    }
    order
}

/// Alternating greedy maximisation: given `Y`, take a large `X` avoiding
/// `Y - Y`; given `X`, take a large `Y` avoiding `X - X`.
fn s_heuristic(a: &GroupSet, b: &GroupSet, t: &Threshold, budget: &SearchBudget) -> Result<(GroupSet, GroupSet)> {
    let g = a.group();
    let av = a.to_vec();
    let bv = b.to_vec();
    let floor = t.min_size(av.len());
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut best: (Vec<usize>, Vec<usize>) = (av.clone(), vec![bv[0]]);
    let consider = |x: &[usize], y: &[usize], best: &mut (Vec<usize>, Vec<usize>)| {
        if x.len() >= floor && !y.is_empty() && x.len() * y.len() > best.0.len() * best.1.len() {
            *best = (x.to_vec(), y.to_vec());
        }
    };
    for _ in 0..budget.heuristic_iters {
        let seed_len = rng.gen_range(1..=bv.len().min(3));
        let mut y: Vec<usize> = bv.choose_multiple(&mut rng, seed_len).copied().collect();
        for _round in 0..4 {
            let dy = differences(g, &y);
            let order = vertex_order(g, &av, &dy, &mut rng);
            let x = greedy_independent(g, &order, &dy);
            if x.len() < floor {
                break;
            }
            consider(&x, &y, &mut best);
            let dx = differences(g, &x);
            let order = vertex_order(g, &bv, &dx, &mut rng);
            let y_next = greedy_independent(g, &order, &dx);
            consider(&x, &y_next, &mut best);
            if y_next.len() <= y.len() {
                break;
            }
            y = y_next;
        }
    }
    let x = GroupSet::from_idx_iter(g, best.0);
    let y = GroupSet::from_idx_iter(g, best.1);
    debug_assert!(sumset(&x, &y)?.len() == x.len() * y.len());
    Ok((x, y))
}

/// Hill climbing on `|X|^2|Y|^2 / E(X,Y)` with single-element toggles.
fn e_heuristic(
    a: &GroupSet,
    b: &GroupSet,
    t: &Threshold,
    budget: &SearchBudget,
) -> Result<(GroupSet, GroupSet, u128, u128)> {
    let g = a.group();
    let av = a.to_vec();
    let bv = b.to_vec();
    let (m, n) = (av.len(), bv.len());
    let floor = t.min_size(m);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x9e37_79b9_7f4a_7c15);

    struct State {
        inx: Vec<bool>,
        iny: Vec<bool>,
        kx: usize,
        ky: usize,
        reps: HashMap<usize, u64>,
        energy: u128,
    }
    let value = |s: &State| ((s.kx as u128 * s.ky as u128).pow(2), m as u128 * s.energy);
    let toggle = |s: &mut State, side: bool, idx: usize| {
        let adding = if side { !s.inx[idx] } else { !s.iny[idx] };
        let others: Vec<usize> = if side {
            (0..n).filter(|&j| s.iny[j]).map(|j| bv[j]).collect()
        } else {
            (0..m).filter(|&i| s.inx[i]).map(|i| av[i]).collect()
        };
        for o in others {
            let z = if side { g.sub_idx(av[idx], o) } else { g.sub_idx(o, bv[idx]) };
            let r = s.reps.entry(z).or_insert(0);
            if adding {
                s.energy += 2 * *r as u128 + 1;
                *r += 1;
            } else {
                s.energy -= 2 * *r as u128 - 1;
                *r -= 1;
            }
        }
        if side {
            s.inx[idx] = adding;
            s.kx = if adding { s.kx + 1 } else { s.kx - 1 };
        } else {
            s.iny[idx] = adding;
            s.ky = if adding { s.ky + 1 } else { s.ky - 1 };
        }
    };

    let mut best: Option<(u128, u128, Vec<bool>, Vec<bool>)> = None;
    for round in 0..budget.heuristic_iters {
        let mut s = State {
            inx: vec![false; m],
            iny: vec![false; n],
            kx: 0,
            ky: 0,
            reps: HashMap::new(),
            energy: 0,
        };
        // start from (A, B) on the first round, random admissible pairs afterwards
        let (xs, ys): (Vec<usize>, Vec<usize>) = if round == 0 {
            ((0..m).collect(), (0..n).collect())
        } else {
            let kx = rng.gen_range(floor.max(1)..=m);
            let ky = rng.gen_range(1..=n);
            let mut xi: Vec<usize> = (0..m).collect();
            let mut yi: Vec<usize> = (0..n).collect();
            xi.shuffle(&mut rng);
            yi.shuffle(&mut rng);
            (xi[..kx].to_vec(), yi[..ky].to_vec())
        };
        for i in xs {
            toggle(&mut s, true, i);
        }
        for j in ys {
            toggle(&mut s, false, j);
        }
        let mut current = value(&s);
        for _ in 0..8 * (m + n) {
            let side = rng.gen_range(0..m + n) < m;
            let idx = if side { rng.gen_range(0..m) } else { rng.gen_range(0..n) };
            let removing = if side { s.inx[idx] } else { s.iny[idx] };
            if removing && ((side && s.kx <= floor.max(1)) || (!side && s.ky == 1)) {
                continue;
            }
            toggle(&mut s, side, idx);
            let next = value(&s);
            if cmp_frac(next.0, next.1, current.0, current.1) == Ordering::Less {
                toggle(&mut s, side, idx);
            } else {
                current = next;
            }
        }
        let improves = match &best {
            None => true,
            Some((bn, bd, _, _)) => cmp_frac(current.0, current.1, *bn, *bd) == Ordering::Greater,
        };
        if improves {
            best = Some((current.0, current.1, s.inx.clone(), s.iny.clone()));
        }
    }
    let (num, den, inx, iny) = best.expect("at least one round");
    let x = GroupSet::from_idx_iter(g, (0..m).filter(|&i| inx[i]).map(|i| av[i]));
    let y = GroupSet::from_idx_iter(g, (0..n).filter(|&j| iny[j]).map(|j| bv[j]));
    Ok((x, y, num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::common_energy;
    use crate::ratio::{int, Rational};
    use crate::sumset::is_direct_sum;

    fn set(g: &GroupSpec, xs: &[u64]) -> GroupSet {
        GroupSet::from_indices(g, xs.iter().copied()).unwrap()
    }

    fn recompute_s(r: &QuantityResult, a: &GroupSet) -> Rational {
        let (x, y) = r.pair().unwrap();
        assert!(is_direct_sum(x, y).unwrap());
        ratio((x.len() * y.len()) as u64, a.len() as u64)
    }

    fn recompute_e(r: &QuantityResult, a: &GroupSet) -> Rational {
        let (x, y) = r.pair().unwrap();
        let e = common_energy(x, y).unwrap().value;
        ratio((x.len() * y.len()).pow(2) as u64, (a.len() as u128 * e) as u64)
    }

    #[test]
    fn max_independent_prefers_small_masks() {
        // path 0-1-2: maximum sets {0,2}
        let adj = [0b010, 0b101, 0b010];
        assert_eq!(max_independent(&adj, 0b111, 0), Some((2, 0b101)));
        // no conflicts: everything
        assert_eq!(max_independent(&[0, 0, 0], 0b111, 0), Some((3, 0b111)));
        assert_eq!(max_independent(&[0, 0, 0], 0b111, 3), None);
        // triangle: smallest singleton
        let tri = [0b110, 0b101, 0b011];
        assert_eq!(max_independent(&tri, 0b111, 0), Some((1, 0b001)));
    }

    #[test]
    fn s_examples() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let ap = set(&z100, &[0, 1, 2, 3, 4]);
        let r = s_quantity(&ap, &ap, &Threshold::Infinite, &SearchBudget::default()).unwrap();
        assert_eq!(*r.rational(), ratio(8, 5));
        let (x, y) = r.pair().unwrap();
        assert_eq!(x.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(y.to_vec(), vec![0, 4]);
        assert_eq!(recompute_s(&r, &ap), ratio(8, 5));

        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        for t in [Threshold::Infinite, Threshold::integer(1).unwrap()] {
            assert_eq!(*s_quantity(&h, &h, &t, &SearchBudget::default()).unwrap().rational(), int(1));
        }
    }

    #[test]
    fn s_sidon_halves() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let sidon = set(&z100, &[0, 1, 3, 7]);
        let r = s_quantity(&sidon, &sidon, &Threshold::Infinite, &SearchBudget::default()).unwrap();
        // disjoint halves give 2*2/4 = 1; the maximum is at least that
        assert!(*r.rational() >= ratio(4, 4));
        assert_eq!(recompute_s(&r, &sidon), *r.rational());
    }

    #[test]
    fn e_examples() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        for t in [Threshold::Infinite, Threshold::integer(1).unwrap(), Threshold::integer(2).unwrap()] {
            assert_eq!(*e_quantity(&h, &h, &t, &SearchBudget::default()).unwrap().rational(), int(1));
        }
        let z10 = GroupSpec::cyclic(10).unwrap();
        let a = set(&z10, &[0, 1, 2]);
        let r = e_quantity(&a, &a, &Threshold::Infinite, &SearchBudget::default()).unwrap();
        assert!(*r.rational() >= ratio(27, 19));
        assert_eq!(recompute_e(&r, &a), *r.rational());
        let r1 = e_quantity(&a, &a, &Threshold::integer(1).unwrap(), &SearchBudget::default()).unwrap();
        assert!(*r1.rational() >= ratio(27, 19));
        assert!(r1.rational() <= r.rational());
    }

    #[test]
    fn threshold_floor_respected() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let a = set(&z100, &[0, 1, 2, 3, 4, 5, 6]);
        let t = Threshold::parse("7/4").unwrap(); // |X| >= 4
        let r = s_quantity(&a, &a, &t, &SearchBudget::default()).unwrap();
        assert!(r.pair().unwrap().0.len() >= 4);
        let r = e_quantity(&a, &a, &t, &SearchBudget::default()).unwrap();
        assert!(r.pair().unwrap().0.len() >= 4);
    }

    #[test]
    fn heuristics_give_valid_lower_bounds() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let a = set(&z100, &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let tight = SearchBudget {
            max_exact_bits: 4,
            ..SearchBudget::default()
        };
        let exact_s = s_quantity(&a, &a, &Threshold::Infinite, &SearchBudget::default()).unwrap();
        let lb_s = s_quantity(&a, &a, &Threshold::Infinite, &tight).unwrap();
        assert_eq!(lb_s.exactness, Exactness::LowerBound);
        assert_eq!(recompute_s(&lb_s, &a), *lb_s.rational());
        assert!(lb_s.rational() <= exact_s.rational());

        let exact_e = e_quantity(&a, &a, &Threshold::Infinite, &SearchBudget::default()).unwrap();
        let lb_e = e_quantity(&a, &a, &Threshold::Infinite, &tight).unwrap();
        assert_eq!(recompute_e(&lb_e, &a), *lb_e.rational());
        assert!(lb_e.rational() <= exact_e.rational());
        assert!(*lb_e.rational() >= int(1));
    }
}
