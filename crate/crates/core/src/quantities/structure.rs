//! `K(A)`, `k(A)` and the additive dimension.

use std::collections::HashMap;

use super::{Exactness, QuantityKind, QuantityResult, SearchBudget, Witness};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::ratio::{int, ratio, QValue};
use crate::set::GroupSet;
use crate::sumset::{difference_set, rep_function, RepMethod, Sign};

/// `K(A) = min_{s != 0} |A| / |A ∩ (A - s)|`, `+inf` when no nonzero shift overlaps.
pub fn shift_ratio_k(a: &GroupSet) -> Result<QuantityResult> {
    if a.group().order() < 2 {
        return Err(Error::InvalidArgument("K(A) needs a nontrivial group".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet("K(A)"));
    }
    let r = rep_function(a, a, Sign::Minus, RepMethod::Auto)?;
    let (mut best_s, mut best) = (0usize, 0u64);
    for (s, &c) in r.counts().iter().enumerate().skip(1) {
        if c > best {
            best = c;
            best_s = s;
        }
    }
    let (value, witness) = if best == 0 {
        (QValue::Infinite, Witness::None)
    } else {
        let s = GroupSet::from_idx_iter(a.group(), [best_s]);
        (QValue::Finite(ratio(a.len() as u64, best)), Witness::Set(s))
    };
    Ok(QuantityResult {
        kind: QuantityKind::ShiftRatio,
        value,
        t: None,
        witness,
        exactness: Exactness::Exact,
    })
}

/// `k(A)`: the longest progression `a, a+d, ..., a+(l-1)d` of distinct elements inside `A`.
///
/// Ties go to the smallest `d`, then the smallest start.
pub fn longest_ap(a: &GroupSet) -> Result<QuantityResult> {
    if a.is_empty() {
        return Err(Error::EmptySet("k(A)"));
    }
    let g = a.group();
    let members = a.to_vec();
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut best = (1usize, members[0], 0usize);
    let mut visited = vec![false; members.len()];
    for d in difference_set(a, a)?.indices().filter(|&d| d != 0) {
        let order = g.additive_order_idx(d) as usize;
        visited.fill(false);
        for &start in &members {
            if a.contains_idx(g.sub_idx(start, d)) {
                continue;
            }
            let (mut len, mut x) = (0usize, start);
            while a.contains_idx(x) {
                visited[pos[&x]] = true;
                len += 1;
                x = g.add_idx(x, d);
            }
            if len > best.0 {
                best = (len, start, d);
            }
        }
        // members never reached lie on full cycles of d
        if let Some(i) = visited.iter().position(|&v| !v) {
            if order > best.0 {
                best = (order, members[i], d);
            }
        }
    }
    let (len, start, d) = best;
    let mut prog = Vec::with_capacity(len);
    let mut x = start;
    for _ in 0..len {
        prog.push(x);
        x = g.add_idx(x, d);
    }
    Ok(QuantityResult {
        kind: QuantityKind::LongestAp,
        value: QValue::Finite(int(len as u64)),
        t: None,
        witness: Witness::Set(GroupSet::from_idx_iter(g, prog)),
        exactness: Exactness::Exact,
    })
}

/// `S ∪ (S + l) ∪ (S - l)`.
fn extend_signed(g: &GroupSpec, acc: &GroupSet, l: usize) -> GroupSet {
    let neg = g.neg_idx(l);
    let mut out = acc.clone();
    for s in acc.indices() {
        out.insert_idx(g.add_idx(s, l));
        out.insert_idx(g.add_idx(s, neg));
    }
    out
}

/// Whether `set` is dissociated: `sum eps_l l = 0` with `eps in {-1,0,1}` forces `eps = 0`.
///
/// Adds elements one at a time, rejecting an element that is already a signed
/// sum of the previous ones.
pub fn is_dissociated(set: &GroupSet) -> bool {
    let g = set.group();
    let mut sums = GroupSet::from_idx_iter(g, [0]);
    for l in set.indices() {
        if sums.contains_idx(l) {
            return false;
        }
        sums = extend_signed(g, &sums, l);
    }
    true
}

/// Dissociativity by enumerating sign vectors; splits into halves above 12 elements.
pub fn is_dissociated_by_signs(set: &GroupSet) -> Result<bool> {
    let g = set.group();
    let elems = set.to_vec();
    if elems.len() > 40 {
        return Err(Error::InvalidArgument(format!(
            "sign enumeration limited to 40 elements, got {}",
            elems.len()
        )));
    }
    // every vector's sum, with multiplicity
    fn sums(g: &GroupSpec, elems: &[usize]) -> HashMap<usize, u64> {
        let mut out = HashMap::from([(0usize, 1u64)]);
        for &l in elems {
            let neg = g.neg_idx(l);
            let mut next = HashMap::with_capacity(out.len() * 3);
            for (&s, &c) in &out {
                for t in [s, g.add_idx(s, l), g.add_idx(s, neg)] {
                    *next.entry(t).or_insert(0) += c;
                }
            }
            out = next;
        }
        out
    }
    if elems.len() <= 12 {
        return Ok(sums(g, &elems)[&0] == 1);
    }
    let (left, right) = elems.split_at(elems.len() / 2);
    let ls = sums(g, left);
    let rs = sums(g, right);
    if ls[&0] > 1 || rs[&0] > 1 {
        return Ok(false);
    }
    // a nonzero right vector with sum s pairs with a left vector of sum -s
    Ok(!rs.keys().any(|&s| s != 0 && ls.contains_key(&g.neg_idx(s))))
}

/// Size of the largest dissociated subset of `A`.
///
/// Exact by branch and bound while the node count stays below `2^max_exact_bits`,
/// a lower bound otherwise.
pub fn additive_dimension(a: &GroupSet, budget: &SearchBudget) -> Result<QuantityResult> {
    budget.validate()?;
    if a.is_empty() {
        return Err(Error::EmptySet("dim(A)"));
    }
    let g = a.group();
    let cands: Vec<usize> = a.indices().filter(|&x| x != 0).collect();
    let cap = 1u64 << budget.max_exact_bits.min(62);
    // greedy seed for the incumbent
    let mut greedy = Vec::new();
    let mut sums = GroupSet::from_idx_iter(g, [0]);
    for &c in &cands {
        if !sums.contains_idx(c) {
            sums = extend_signed(g, &sums, c);
            greedy.push(c);
        }
    }
    let mut search = DimSearch {
        g,
        cands: &cands,
        best: greedy,
        nodes: 0,
        cap,
        exhausted: false,
    };
    // 2^|L| distinct subset sums fit in the group
    let ceiling = (usize::BITS - 1 - g.order().leading_zeros()) as usize;
    if search.best.len() < ceiling {
        let mut chosen = Vec::new();
        search.rec(0, &mut chosen, &GroupSet::from_idx_iter(g, [0]));
    }
    let exactness = if search.exhausted {
        Exactness::LowerBound
    } else {
        Exactness::Exact
    };
    let best = search.best;
    Ok(QuantityResult {
        kind: QuantityKind::Dimension,
        value: QValue::Finite(int(best.len() as u64)),
        t: None,
        witness: Witness::Set(GroupSet::from_idx_iter(g, best)),
        exactness,
    })
}

struct DimSearch<'a> {
    g: &'a GroupSpec,
    cands: &'a [usize],
    best: Vec<usize>,
    nodes: u64,
    cap: u64,
    exhausted: bool,
}

impl DimSearch<'_> {
    fn rec(&mut self, from: usize, chosen: &mut Vec<usize>, sums: &GroupSet) {
        self.nodes += 1;
        if self.nodes > self.cap {
            self.exhausted = true;
            return;
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        let open: Vec<usize> = (from..self.cands.len())
            .filter(|&i| !sums.contains_idx(self.cands[i]))
            .collect();
        if chosen.len() + open.len() <= self.best.len() {
            return;
        }
        for (k, &i) in open.iter().enumerate() {
            if chosen.len() + open.len() - k <= self.best.len() || self.exhausted {
                return;
            }
            let c = self.cands[i];
            let next = extend_signed(self.g, sums, c);
            chosen.push(c);
            self.rec(i + 1, chosen, &next);
            chosen.pop();
        }
    }
}
