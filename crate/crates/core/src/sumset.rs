//! Sumsets, difference sets, representation functions and direct sums.

use serde::Serialize;

use crate::conv::{convolve, ConvKernel, ConvStrategy};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::set::GroupSet;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RepMethod {
    Naive,
    Convolution,
    Auto,
}

/// `x -> r_{A±B}(x)` over the whole group.
#[derive(Clone, Debug)]
pub struct RepFunction {
    group: GroupSpec,
    counts: Vec<u64>,
    kernel: ConvKernel,
    note: Option<String>,
}

impl RepFunction {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, x: usize) -> u64 {
        self.counts[x]
    }

    /// Kernel that actually produced the counts.
    pub fn kernel(&self) -> ConvKernel {
        self.kernel
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }

    pub fn support(&self) -> GroupSet {
        GroupSet::from_idx_iter(
            &self.group,
            self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, _)| i),
        )
    }
}

pub(crate) fn indicator(a: &GroupSet) -> Vec<i128> {
    let mut f = vec![0i128; a.group().order()];
    for i in a.indices() {
        f[i] = 1;
    }
    f
}

/// `r_{A+B}` or `r_{A-B}`.
pub fn rep_function(a: &GroupSet, b: &GroupSet, sign: Sign, method: RepMethod) -> Result<RepFunction> {
    a.same_group(b)?;
    let g = a.group();
    if method == RepMethod::Naive {
        let mut counts = vec![0u64; g.order()];
        let bs: Vec<usize> = match sign {
            Sign::Plus => b.to_vec(),
            Sign::Minus => b.indices().map(|y| g.neg_idx(y)).collect(),
        };
        for x in a.indices() {
            for &y in &bs {
                counts[g.add_idx(x, y)] += 1;
            }
        }
        return Ok(RepFunction {
            group: g.clone(),
            counts,
            kernel: ConvKernel::Naive,
            note: None,
        });
    }
    let fb = match sign {
        Sign::Plus => indicator(b),
        Sign::Minus => indicator(&b.negate()),
    };
    let strategy = if method == RepMethod::Convolution {
        ConvStrategy::Transform
    } else {
        ConvStrategy::Auto
    };
    let out = convolve(g, &indicator(a), &fb, strategy)?;
    Ok(RepFunction {
        group: g.clone(),
        counts: out.values.into_iter().map(|v| v as u64).collect(),
        kernel: out.kernel,
        note: out.note,
    })
}

/// `A + B`. An empty operand gives the empty set.
pub fn sumset(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.same_group(b)?;
    combine(a, b, Sign::Plus)
}

/// `A - B`.
pub fn difference_set(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.same_group(b)?;
    combine(a, b, Sign::Minus)
}

fn combine(a: &GroupSet, b: &GroupSet, sign: Sign) -> Result<GroupSet> {
    let g = a.group();
    if a.is_empty() || b.is_empty() {
        return Ok(GroupSet::empty(g));
    }
    let pairs = a.len() as f64 * b.len() as f64;
    let n = g.order() as f64;
    if pairs <= 3.0 * n * n.log2().max(1.0) + 64.0 {
        let bs: Vec<usize> = match sign {
            Sign::Plus => b.to_vec(),
            Sign::Minus => b.indices().map(|y| g.neg_idx(y)).collect(),
        };
        let mut out = GroupSet::empty(g);
        for x in a.indices() {
            for &y in &bs {
                out.insert_idx(g.add_idx(x, y));
            }
        }
        Ok(out)
    } else {
        Ok(rep_function(a, b, sign, RepMethod::Auto)?.support())
    }
}

/// `nA - mA`, built by repeated sums and differences.
pub fn higher_sumset(a: &GroupSet, n: u32, m: u32) -> Result<GroupSet> {
    if n == 0 && m == 0 {
        return Err(Error::InvalidArgument("higher_sumset needs n + m >= 1".into()));
    }
    let mut acc = if n > 0 { a.clone() } else { a.negate() };
    for _ in 1..n {
        acc = sumset(&acc, a)?;
    }
    for _ in (if n > 0 { 0 } else { 1 })..m {
        acc = difference_set(&acc, a)?;
    }
    Ok(acc)
}

/// `|X + Y| = |X||Y|`.
pub fn is_direct_sum(x: &GroupSet, y: &GroupSet) -> Result<bool> {
    x.same_group(y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet("is_direct_sum"));
    }
    Ok(sumset(x, y)?.len() == x.len() * y.len())
}

/// `(X - X) ∩ (Y - Y) = {0}`; equivalent to [`is_direct_sum`].
pub fn is_direct_sum_via_differences(x: &GroupSet, y: &GroupSet) -> Result<bool> {
    x.same_group(y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet("is_direct_sum"));
    }
    let dx = difference_set(x, x)?;
    let dy = difference_set(y, y)?;
    Ok(dx.intersection_len(&dy)? == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn set(g: &GroupSpec, xs: &[u64]) -> GroupSet {
        GroupSet::from_indices(g, xs.iter().copied()).unwrap()
    }

    #[test]
    fn sumset_examples() {
        let z10 = GroupSpec::cyclic(10).unwrap();
        assert_eq!(sumset(&set(&z10, &[1, 2]), &set(&z10, &[3, 5])).unwrap().to_vec(), vec![4, 5, 6, 7]);
        assert!(sumset(&set(&z10, &[0, 1]), &set(&z10, &[])).unwrap().is_empty());
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        assert_eq!(sumset(&h, &h).unwrap(), h);
    }

    #[test]
    fn difference_and_higher() {
        let z10 = GroupSpec::cyclic(10).unwrap();
        let a = set(&z10, &[0, 1]);
        assert_eq!(difference_set(&a, &a).unwrap().to_vec(), vec![0, 1, 9]);
        assert_eq!(higher_sumset(&a, 2, 1).unwrap().to_vec(), vec![0, 1, 2, 9]);
        assert_eq!(higher_sumset(&a, 1, 0).unwrap(), a);
        assert_eq!(higher_sumset(&a, 0, 1).unwrap().to_vec(), vec![0, 9]);
        assert_eq!(higher_sumset(&a, 0, 2).unwrap().to_vec(), vec![0, 8, 9]);
        assert!(higher_sumset(&a, 0, 0).is_err());
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = set(&z6, &[0, 2, 4]);
        assert_eq!(higher_sumset(&h, 3, 2).unwrap(), h);
    }

    #[test]
    fn rep_function_examples() {
        let z10 = GroupSpec::cyclic(10).unwrap();
        let a = set(&z10, &[0, 1, 2]);
        for method in [RepMethod::Naive, RepMethod::Convolution, RepMethod::Auto] {
            let r = rep_function(&a, &a, Sign::Minus, method).unwrap();
            assert_eq!(r.counts(), &[3, 2, 1, 0, 0, 0, 0, 0, 1, 2]);
        }
        let r = rep_function(&set(&z10, &[1, 2]), &set(&z10, &[3, 5]), Sign::Plus, RepMethod::Auto).unwrap();
        assert_eq!(r.get(4), 1);
        assert_eq!(r.get(7), 1);
        assert_eq!(r.total(), 4);
    }

    #[test]
    fn direct_sum_examples() {
        let z10 = GroupSpec::cyclic(10).unwrap();
        let z4 = GroupSpec::cyclic(4).unwrap();
        let cases = [
            (set(&z10, &[1, 2]), set(&z10, &[3, 5]), true),
            (set(&z4, &[0, 1]), set(&z4, &[0, 2]), true),
            (set(&z10, &[0, 1]), set(&z10, &[0, 1]), false),
        ];
        for (x, y, expect) in cases {
            assert_eq!(is_direct_sum(&x, &y).unwrap(), expect);
            assert_eq!(is_direct_sum_via_differences(&x, &y).unwrap(), expect);
        }
        assert!(matches!(
            is_direct_sum(&set(&z10, &[]), &set(&z10, &[1])),
            Err(Error::EmptySet(_))
        ));
    }

    #[test]
    fn direct_sum_routes_agree_exhaustively() {
        let g = GroupSpec::cyclic(8).unwrap();
        for xm in 1u32..256 {
            let x = GroupSet::from_idx_iter(&g, (0..8).filter(|i| xm >> i & 1 == 1));
            for ym in (1u32..256).step_by(3) {
                let y = GroupSet::from_idx_iter(&g, (0..8).filter(|i| ym >> i & 1 == 1));
                assert_eq!(
                    is_direct_sum(&x, &y).unwrap(),
                    is_direct_sum_via_differences(&x, &y).unwrap()
                );
            }
        }
    }
}
