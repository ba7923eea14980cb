//! Brute-force oracles over plain index vectors. Group arithmetic is redone
//! here from the factor list, independently of the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use addcomb::group::GroupSpec;

/// Mixed-radix arithmetic, last factor fastest.
#[derive(Clone, Debug)]
pub struct Arith {
    pub factors: Vec<usize>,
    pub order: usize,
}

impl Arith {
    pub fn new(g: &GroupSpec) -> Self {
        let factors: Vec<usize> = g.factors().iter().map(|&f| f as usize).collect();
        Arith {
            order: factors.iter().product(),
            factors,
        }
    }

    fn decode(&self, mut x: usize) -> Vec<usize> {
        let mut c = vec![0; self.factors.len()];
        for (i, &f) in self.factors.iter().enumerate().rev() {
            c[i] = x % f;
            x /= f;
        }
        c
    }

    fn encode(&self, c: &[usize]) -> usize {
        c.iter().zip(&self.factors).fold(0, |acc, (&ci, &f)| acc * f + ci)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let c: Vec<usize> = a.iter().zip(&b).zip(&self.factors).map(|((&p, &q), &f)| (p + q) % f).collect();
        self.encode(&c)
    }

    pub fn neg(&self, x: usize) -> usize {
        let a = self.decode(x);
        let c: Vec<usize> = a.iter().zip(&self.factors).map(|(&p, &f)| (f - p) % f).collect();
        self.encode(&c)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    pub fn sumset(&self, a: &[usize], b: &[usize]) -> BTreeSet<usize> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.add(x, y)).collect()
    }

    pub fn diffset(&self, a: &[usize], b: &[usize]) -> BTreeSet<usize> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.sub(x, y)).collect()
    }

    /// `r_{A+B}` (`minus = false`) or `r_{A-B}`.
    pub fn rep(&self, a: &[usize], b: &[usize], minus: bool) -> Vec<u64> {
        let mut r = vec![0u64; self.order];
        for &x in a {
            for &y in b {
                let z = if minus { self.sub(x, y) } else { self.add(x, y) };
                r[z] += 1;
            }
        }
        r
    }

    /// `#{(a1, b1, a2, b2) : a1 - b1 = a2 - b2}`, counted through a hash map.
    pub fn energy(&self, a: &[usize], b: &[usize]) -> u128 {
        let mut m: HashMap<usize, u128> = HashMap::new();
        for &x in a {
            for &y in b {
                *m.entry(self.sub(x, y)).or_default() += 1;
            }
        }
        m.values().map(|c| c * c).sum()
    }

    /// Quadruple enumeration of the energy.
    pub fn energy_quadruples(&self, a: &[usize], b: &[usize]) -> u128 {
        let mut n = 0u128;
        for &a1 in a {
            for &b1 in b {
                let d = self.sub(a1, b1);
                for &a2 in a {
                    for &b2 in b {
                        if self.sub(a2, b2) == d {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    pub fn is_direct(&self, x: &[usize], y: &[usize]) -> bool {
        self.sumset(x, y).len() == x.len() * y.len()
    }
}

pub fn pick(members: &[usize], mask: u64) -> Vec<usize> {
    members.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &m)| m).collect()
}

/// `a/b < c/d` for positive denominators.
fn less(a: u128, b: u128, c: u128, d: u128) -> bool {
    a * d < c * b
}

/// Optimum of `S_T` or `E_T` by full subset-pair enumeration. `t` is
/// `Some((p, q))` for `T = p/q` and `None` for `T = inf`. Returns
/// `(num, den, X, Y)`; the first optimum in (X mask, Y mask) order wins.
pub fn pair_optimum(
    ar: &Arith,
    a: &[usize],
    b: &[usize],
    t: Option<(u64, u64)>,
    energy: bool,
) -> (u128, u128, Vec<usize>, Vec<usize>) {
    let (m, n) = (a.len(), b.len());
    let mut best: Option<(u128, u128, Vec<usize>, Vec<usize>)> = None;
    for xm in 1u64..(1 << m) {
        let kx = xm.count_ones() as u64;
        if let Some((p, q)) = t {
            // |X| >= |A| / T  <=>  |X| p >= |A| q
            if kx * p < m as u64 * q {
                continue;
            }
        }
        let x = pick(a, xm);
        for ym in 1u64..(1 << n) {
            let y = pick(b, ym);
            let (num, den) = if energy {
                let (kx, ky) = (x.len() as u128, y.len() as u128);
                (kx * kx * ky * ky, m as u128 * ar.energy(&x, &y))
            } else if ar.is_direct(&x, &y) {
                ((x.len() * y.len()) as u128, m as u128)
            } else {
                continue;
            };
            if best.as_ref().is_none_or(|(bn, bd, _, _)| less(*bn, *bd, num, den)) {
                best = Some((num, den, x.clone(), y));
            }
        }
    }
    best.expect("X = A with a single Y is always admissible")
}

/// Longest arithmetic progression in `a` with nonzero difference, by brute force.
pub fn longest_ap(ar: &Arith, a: &[usize]) -> usize {
    let set: BTreeSet<usize> = a.iter().copied().collect();
    let mut best = 1;
    for d in 1..ar.order {
        for &s in a {
            let mut len = 1;
            let mut x = ar.add(s, d);
            while set.contains(&x) && x != s {
                len += 1;
                x = ar.add(x, d);
            }
            best = best.max(len);
        }
    }
    best
}
