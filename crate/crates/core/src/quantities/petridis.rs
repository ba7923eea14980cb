//! The Petridis ratio `min_{∅ != X ⊆ A} |A + X| / |X|`.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{Exactness, QuantityKind, QuantityResult, SearchBudget, Witness};
use crate::error::{Error, Result};
use crate::ratio::{cmp_frac, ratio, QValue};
use crate::set::GroupSet;
use crate::sumset::sumset;

/// Translates `A + a` as bit rows over the positions of `A + A`.
struct Rows {
    rows: Vec<Vec<u64>>,
    words: usize,
}

impl Rows {
    fn new(a: &GroupSet, members: &[usize]) -> Result<Self> {
        let g = a.group();
        let ss = sumset(a, a)?;
        let pos: HashMap<usize, usize> = ss.indices().enumerate().map(|(i, x)| (x, i)).collect();
        let words = ss.len().div_ceil(64);
        let rows = members
            .iter()
            .map(|&x| {
                let mut row = vec![0u64; words];
                for y in members {
                    let p = pos[&g.add_idx(x, *y)];
                    row[p / 64] |= 1 << (p % 64);
                }
                row
            })
            .collect();
        Ok(Rows { rows, words })
    }

    fn union_len(&self, chosen: &[usize]) -> usize {
        let mut acc = vec![0u64; self.words];
        for &i in chosen {
            for (w, r) in acc.iter_mut().zip(&self.rows[i]) {
                *w |= r;
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Exact when `|A| <= max_exact_bits` (every nonempty subset is visited),
/// otherwise an upper bound from greedy element removal. Ties go to the
/// smallest member mask.
pub fn petridis_ratio(a: &GroupSet, budget: &SearchBudget) -> Result<QuantityResult> {
    budget.validate()?;
    if a.is_empty() {
        return Err(Error::EmptySet("petridis ratio"));
    }
    let members = a.to_vec();
    let m = members.len();
    let rows = Rows::new(a, &members)?;
    let (num, den, chosen, exactness) = if m <= budget.max_exact_bits as usize && m < 64 {
        let (num, den, mask) = exhaustive(&rows, m);
        let chosen: Vec<usize> = (0..m).filter(|&j| mask >> j & 1 == 1).collect();
        (num, den, chosen, Exactness::Exact)
    } else {
        let (num, den, chosen) = greedy(&rows, m);
        (num, den, chosen, Exactness::UpperBound)
    };
    let x = GroupSet::from_idx_iter(a.group(), chosen.iter().map(|&j| members[j]));
    Ok(QuantityResult {
        kind: QuantityKind::Petridis,
        value: QValue::Finite(ratio(num as u64, den as u64)),
        t: None,
        witness: Witness::Set(x),
        exactness,
    })
}

fn exhaustive(rows: &Rows, m: usize) -> (usize, usize, u64) {
    struct Walk<'a> {
        rows: &'a Rows,
        m: usize,
        best: (usize, usize, u64),
    }
    impl Walk<'_> {
        // every extension of `mask` by members at positions `from..`
        fn rec(&mut self, mask: u64, size: usize, acc: &[u64], from: usize) {
            for j in from..self.m {
                let next: Vec<u64> = acc.iter().zip(&self.rows.rows[j]).map(|(a, r)| a | r).collect();
                let nmask = mask | (1 << j);
                let len: usize = next.iter().map(|w| w.count_ones() as usize).sum();
                let (bn, bd, bm) = self.best;
                match cmp_frac(len as u128, (size + 1) as u128, bn as u128, bd as u128) {
                    Ordering::Less => self.best = (len, size + 1, nmask),
                    Ordering::Equal if nmask < bm => self.best = (len, size + 1, nmask),
                    _ => {}
                }
                self.rec(nmask, size + 1, &next, j + 1);
            }
        }
    }
    // X = {a_0} gives |A|/1
    let mut walk = Walk {
        rows,
        m,
        best: (m, 1, 1),
    };
    walk.rec(0, 0, &vec![0u64; rows.words], 0);
    walk.best
}

fn greedy(rows: &Rows, m: usize) -> (usize, usize, Vec<usize>) {
    let mut current: Vec<usize> = (0..m).collect();
    let mut best = (rows.union_len(&current), m, current.clone());
    if cmp_frac(m as u128, 1, best.0 as u128, best.1 as u128) == Ordering::Less {
        best = (m, 1, vec![0]);
    }
    while current.len() > 1 {
        let mut step: Option<(usize, usize)> = None;
        for k in 0..current.len() {
            let trial: Vec<usize> = current.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &j)| j).collect();
            let len = rows.union_len(&trial);
            if step.is_none_or(|(_, l)| len < l) {
                step = Some((k, len));
            }
        }
        let (k, len) = step.expect("nonempty");
        current.remove(k);
        if cmp_frac(len as u128, current.len() as u128, best.0 as u128, best.1 as u128) == Ordering::Less {
            best = (len, current.len(), current.clone());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::ratio::int;

    #[test]
    fn petridis_examples() {
        let z10 = GroupSpec::cyclic(10).unwrap();
        let b = SearchBudget::default();
        let r = petridis_ratio(&GroupSet::from_indices(&z10, [0, 1]).unwrap(), &b).unwrap();
        assert_eq!(*r.rational(), ratio(3, 2));
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = GroupSet::from_indices(&z6, [0, 2, 4]).unwrap();
        assert_eq!(*petridis_ratio(&h, &b).unwrap().rational(), int(1));
        let z100 = GroupSpec::cyclic(100).unwrap();
        let sidon = GroupSet::from_indices(&z100, [0, 1, 3, 7]).unwrap();
        let r = petridis_ratio(&sidon, &b).unwrap();
        assert!(*r.rational() <= ratio(5, 2));
        let Witness::Set(x) = &r.witness else { panic!() };
        assert_eq!(ratio(sumset(&sidon, x).unwrap().len() as u64, x.len() as u64), *r.rational());
    }

    #[test]
    fn greedy_is_an_upper_bound() {
        let z100 = GroupSpec::cyclic(100).unwrap();
        let a = GroupSet::from_indices(&z100, [0, 1, 2, 3, 10, 20, 31, 47]).unwrap();
        let exact = petridis_ratio(&a, &SearchBudget::default()).unwrap();
        let tight = SearchBudget {
            max_exact_bits: 3,
            ..SearchBudget::default()
        };
        let ub = petridis_ratio(&a, &tight).unwrap();
        assert_eq!(ub.exactness, Exactness::UpperBound);
        assert!(ub.rational() >= exact.rational());
    }
}
