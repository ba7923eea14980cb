//! Exact integer convolution over `Z/n1 x ... x Z/nd`.
//!
//! Four kernels share one contract, `h(x) = sum_y f(y) g(x - y)`, and all of
//! them return exact integers:
//!
//! * `Naive` walks the supports with checked `i128` arithmetic.
//! * `WalshHadamard` handles `F2^n`: the transform is integral, so it runs in
//!   `i128` with no rounding at all.
//! * `Fft` runs a complex FFT per axis. It is only used while
//!   `bound * order < 2^52`, where `bound` caps every output magnitude, and
//!   every output must round with residual below 0.25.
//! * `Ntt` runs three-prime number-theoretic transforms per axis (power-of-two
//!   axes cyclically, other axes zero-padded and folded back) and recombines
//!   with CRT. Length-2 axes reduce to the Hadamard butterfly.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Copy, Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvKernel {
    Naive,
    WalshHadamard,
    Fft,
    Ntt,
}

/// How the caller wants the convolution computed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ConvStrategy {
    Naive,
    /// Prefer a transform kernel; falls back to naive (with a note) when no
    /// transform is exact for the inputs.
    Transform,
    /// Pick by estimated cost.
    Auto,
}

#[derive(Clone, Debug)]
pub struct ConvOutput {
    pub values: Vec<i128>,
    pub kernel: ConvKernel,
    pub note: Option<String>,
}

const FFT_EXACT_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52
const NTT_PRIMES: [u64; 3] = [998_244_353, 167_772_161, 469_762_049];
const NTT_MAX_LEN: usize = 1 << 23;
const NTT_MAX_TOTAL: usize = 1 << 27;

/// Largest possible |h(x)| given the inputs.
fn output_bound(f: &[i128], g: &[i128]) -> Option<u128> {
    let (sf, mf) = l1_and_max(f)?;
    let (sg, mg) = l1_and_max(g)?;
    let a = sf.checked_mul(mg);
    let b = sg.checked_mul(mf);
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn l1_and_max(f: &[i128]) -> Option<(u128, u128)> {
    let mut s: u128 = 0;
    let mut m: u128 = 0;
    for &v in f {
        let a = v.unsigned_abs();
        s = s.checked_add(a)?;
        m = m.max(a);
    }
    Some((s, m))
}

fn support_len(f: &[i128]) -> usize {
    f.iter().filter(|&&v| v != 0).count()
}

/// Cyclic convolution of `f` and `g`, both dense over `group`.
pub fn convolve(group: &GroupSpec, f: &[i128], g: &[i128], strategy: ConvStrategy) -> Result<ConvOutput> {
    let n = group.order();
    if f.len() != n || g.len() != n {
        return Err(Error::InvalidArgument(format!(
            "convolution inputs must have length {n} (got {} and {})",
            f.len(),
            g.len()
        )));
    }
    let use_transform = match strategy {
        ConvStrategy::Naive => false,
        ConvStrategy::Transform => true,
        ConvStrategy::Auto => {
            let naive_cost = support_len(f) as f64 * support_len(g) as f64;
            let log = (n as f64).log2().max(1.0);
            naive_cost > 3.0 * n as f64 * log + 64.0
        }
    };
    if !use_transform {
        return naive(group, f, g).map(|values| ConvOutput {
            values,
            kernel: ConvKernel::Naive,
            note: None,
        });
    }

    let bound = output_bound(f, g);
    if group.factors().iter().all(|&m| m == 2) {
        if let Some(values) = walsh_hadamard(f, g) {
            return Ok(ConvOutput {
                values,
                kernel: ConvKernel::WalshHadamard,
                note: None,
            });
        }
    }
    if let Some(b) = bound {
        if (b as f64) * (n as f64) < FFT_EXACT_LIMIT {
            if let Some(values) = fft(group, f, g) {
                return Ok(ConvOutput {
                    values,
                    kernel: ConvKernel::Fft,
                    note: None,
                });
            }
        }
        if b < (1u128 << 85) {
            if let Some(values) = ntt(group, f, g) {
                return Ok(ConvOutput {
                    values,
                    kernel: ConvKernel::Ntt,
                    note: None,
                });
            }
        }
    }
    let values = naive(group, f, g)?;
    Ok(ConvOutput {
        values,
        kernel: ConvKernel::Naive,
        note: Some("inputs exceed the transform exactness envelope; computed naively".into()),
    })
}

fn naive(group: &GroupSpec, f: &[i128], g: &[i128]) -> Result<Vec<i128>> {
    let mut h = vec![0i128; group.order()];
    let gs: Vec<(usize, i128)> = g.iter().copied().enumerate().filter(|&(_, v)| v != 0).collect();
    let overflow = || Error::ExactnessEnvelope("naive convolution overflowed i128".into());
    for (x, &fx) in f.iter().enumerate() {
        if fx == 0 {
            continue;
        }
        for &(y, gy) in &gs {
            let z = group.add_idx(x, y);
            let p = fx.checked_mul(gy).ok_or_else(overflow)?;
            h[z] = h[z].checked_add(p).ok_or_else(overflow)?;
        }
    }
    Ok(h)
}

fn wht_in_place(a: &mut [i128]) -> Option<()> {
    let n = a.len();
    let mut len = 1;
    while len < n {
        for block in (0..n).step_by(2 * len) {
            for j in block..block + len {
                let (u, v) = (a[j], a[j + len]);
                a[j] = u.checked_add(v)?;
                a[j + len] = u.checked_sub(v)?;
            }
        }
        len <<= 1;
    }
    Some(())
}

fn walsh_hadamard(f: &[i128], g: &[i128]) -> Option<Vec<i128>> {
    let n = f.len();
    let (sf, _) = l1_and_max(f)?;
    let (sg, _) = l1_and_max(g)?;
    // transform coefficients are bounded by the l1 norms; the inverse adds a factor n
    let limit = sf.checked_mul(sg)?.checked_mul(n as u128)?;
    if limit >= (1u128 << 126) {
        return None;
    }
    let mut fa = f.to_vec();
    let mut ga = g.to_vec();
    wht_in_place(&mut fa)?;
    wht_in_place(&mut ga)?;
    for (x, y) in fa.iter_mut().zip(&ga) {
        *x *= *y;
    }
    wht_in_place(&mut fa)?;
    let shift = n.trailing_zeros();
    for v in fa.iter_mut() {
        debug_assert_eq!(*v & ((1i128 << shift) - 1), 0);
        *v >>= shift;
    }
    Some(fa)
}

/// Visits every 1-D line of a row-major array along `axis`.
fn for_each_line<T: Copy + Default>(data: &mut [T], dims: &[usize], axis: usize, mut f: impl FnMut(&mut [T])) {
    let len = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let mut buf = vec![T::default(); len];
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * len * stride + inner;
            for (k, b) in buf.iter_mut().enumerate() {
                *b = data[base + k * stride];
            }
            f(&mut buf);
            for (k, b) in buf.iter().enumerate() {
                data[base + k * stride] = *b;
            }
        }
    }
}

fn fft(group: &GroupSpec, f: &[i128], g: &[i128]) -> Option<Vec<i128>> {
    let dims: Vec<usize> = group.factors().iter().map(|&m| m as usize).collect();
    let n = group.order();
    let mut planner = FftPlanner::<f64>::new();
    let mut fa: Vec<Complex<f64>> = f.iter().map(|&v| Complex::new(v as f64, 0.0)).collect();
    let mut ga: Vec<Complex<f64>> = g.iter().map(|&v| Complex::new(v as f64, 0.0)).collect();
    for axis in 0..dims.len() {
        let plan = planner.plan_fft_forward(dims[axis]);
        for_each_line(&mut fa, &dims, axis, |line| plan.process(line));
        for_each_line(&mut ga, &dims, axis, |line| plan.process(line));
    }
    for (x, y) in fa.iter_mut().zip(&ga) {
        *x *= *y;
    }
    for axis in 0..dims.len() {
        let plan = planner.plan_fft_inverse(dims[axis]);
        for_each_line(&mut fa, &dims, axis, |line| plan.process(line));
    }
    let scale = 1.0 / n as f64;
    let mut out = Vec::with_capacity(n);
    for c in fa {
        let v = c.re * scale;
        let r = v.round();
        if (v - r).abs() >= 0.25 || (c.im * scale).abs() >= 0.25 {
            return None;
        }
        out.push(r as i128);
    }
    Some(out)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn ntt_in_place(a: &mut [u64], p: u64, invert: bool) {
    let n = a.len();
    if n == 1 {
        return;
    }
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    // 3 is a primitive root for all three primes
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(3, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        for start in (0..n).step_by(len) {
            let mut wk = 1u64;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = a[start + k + len / 2] * wk % p;
                a[start + k] = if u + v >= p { u + v - p } else { u + v };
                a[start + k + len / 2] = if u >= v { u - v } else { u + p - v };
                wk = wk * w % p;
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn ntt(group: &GroupSpec, f: &[i128], g: &[i128]) -> Option<Vec<i128>> {
    let factors: Vec<usize> = group.factors().iter().map(|&m| m as usize).collect();
    let padded: Vec<usize> = factors
        .iter()
        .map(|&m| if m.is_power_of_two() { m } else { (2 * m - 1).next_power_of_two() })
        .collect();
    if padded.iter().any(|&l| l > NTT_MAX_LEN) {
        return None;
    }
    let total = padded.iter().try_fold(1usize, |acc, &l| acc.checked_mul(l))?;
    if total > NTT_MAX_TOTAL {
        return None;
    }
    let n = group.order();
    let strides = |dims: &[usize]| {
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let fs = strides(&factors);
    let ps = strides(&padded);
    // map group index -> padded index
    let embed: Vec<usize> = (0..n)
        .map(|x| {
            factors
                .iter()
                .zip(&fs)
                .zip(&ps)
                .map(|((&m, &s), &t)| ((x / s) % m) * t)
                .sum()
        })
        .collect();
    // map padded index -> group index after folding each axis mod its factor
    let fold: Vec<usize> = (0..total)
        .map(|y| {
            padded
                .iter()
                .zip(&ps)
                .zip(factors.iter().zip(&fs))
                .map(|((&l, &t), (&m, &s))| (((y / t) % l) % m) * s)
                .sum()
        })
        .collect();

    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(NTT_PRIMES.len());
    for &p in &NTT_PRIMES {
        let lift = |v: i128| -> u64 { v.rem_euclid(p as i128) as u64 };
        let mut fa = vec![0u64; total];
        let mut ga = vec![0u64; total];
        for x in 0..n {
            fa[embed[x]] = lift(f[x]);
            ga[embed[x]] = lift(g[x]);
        }
        for axis in 0..padded.len() {
            for_each_line(&mut fa, &padded, axis, |line| ntt_in_place(line, p, false));
            for_each_line(&mut ga, &padded, axis, |line| ntt_in_place(line, p, false));
        }
        for (x, y) in fa.iter_mut().zip(&ga) {
            *x = *x * *y % p;
        }
        for axis in 0..padded.len() {
            for_each_line(&mut fa, &padded, axis, |line| ntt_in_place(line, p, true));
        }
        let mut out = vec![0u64; n];
        for (y, &v) in fa.iter().enumerate() {
            let t = &mut out[fold[y]];
            *t = (*t + v) % p;
        }
        residues.push(out);
    }
    Some((0..n).map(|x| crt3(residues[0][x], residues[1][x], residues[2][x])).collect())
}

/// Garner recombination into the symmetric range around zero.
fn crt3(r1: u64, r2: u64, r3: u64) -> i128 {
    let [p1, p2, p3] = NTT_PRIMES;
    let inv_p1_mod_p2 = pow_mod(p1 % p2, p2 - 2, p2);
    let inv_p1p2_mod_p3 = pow_mod((p1 % p3) * (p2 % p3) % p3, p3 - 2, p3);
    let t2 = (r2 + p2 - r1 % p2) % p2 * inv_p1_mod_p2 % p2;
    let x12 = r1 as u128 + p1 as u128 * t2 as u128;
    let x12_mod_p3 = (x12 % p3 as u128) as u64;
    let t3 = (r3 + p3 - x12_mod_p3) % p3 * inv_p1p2_mod_p3 % p3;
    let modulus = p1 as u128 * p2 as u128 * p3 as u128;
    let x = x12 + p1 as u128 * p2 as u128 * t3 as u128;
    if x > modulus / 2 {
        -((modulus - x) as i128)
    } else {
        x as i128
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(rng: &mut ChaCha8Rng, n: usize, lo: i128, hi: i128, density: f64) -> Vec<i128> {
        (0..n)
            .map(|_| if rng.gen_bool(density) { rng.gen_range(lo..=hi) } else { 0 })
            .collect()
    }

    #[test]
    fn kernels_agree_with_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["Z/7", "Z/12", "Z/4xZ/6", "F2^5", "Z/3xZ/5xZ/2", "Z/128", "Z/2xZ/9"] {
            let g = GroupSpec::parse(spec).unwrap();
            for _ in 0..10 {
                let f = random_fn(&mut rng, g.order(), -40, 40, 0.6);
                let h = random_fn(&mut rng, g.order(), -40, 40, 0.6);
                let expect = naive(&g, &f, &h).unwrap();
                assert_eq!(fft(&g, &f, &h).unwrap(), expect, "fft {spec}");
                assert_eq!(ntt(&g, &f, &h).unwrap(), expect, "ntt {spec}");
                if g.factors().iter().all(|&m| m == 2) {
                    assert_eq!(walsh_hadamard(&f, &h).unwrap(), expect, "wht {spec}");
                }
            }
        }
    }

    #[test]
    fn ntt_handles_values_beyond_double_precision() {
        let g = GroupSpec::parse("Z/6").unwrap();
        let big = 1i128 << 40;
        let f = vec![big, -big, 3, 0, 1, big - 1];
        let h = vec![big - 7, 2, 0, -big, 5, 1];
        let expect = naive(&g, &f, &h).unwrap();
        assert_eq!(ntt(&g, &f, &h).unwrap(), expect);
        let out = convolve(&g, &f, &h, ConvStrategy::Transform).unwrap();
        assert_eq!(out.kernel, ConvKernel::Ntt);
        assert_eq!(out.values, expect);
    }

    #[test]
    fn envelope_fallback_is_reported() {
        let g = GroupSpec::parse("Z/3").unwrap();
        let big = 1i128 << 60;
        let f = vec![big, big, 0];
        let out = convolve(&g, &f, &f, ConvStrategy::Transform).unwrap();
        assert_eq!(out.kernel, ConvKernel::Naive);
        assert!(out.note.is_some());
        assert_eq!(out.values, vec![big * big, 2 * big * big, big * big]);

        let huge = vec![1i128 << 100, 0, 0];
        assert!(matches!(
            convolve(&g, &huge, &huge, ConvStrategy::Naive),
            Err(Error::ExactnessEnvelope(_))
        ));
    }

    #[test]
    fn crt_round_trip() {
        for v in [0i128, 1, -1, 123456789012345678901234, -(1i128 << 84), (1i128 << 84) - 5] {
            let r: Vec<u64> = NTT_PRIMES.iter().map(|&p| v.rem_euclid(p as i128) as u64).collect();
            assert_eq!(crt3(r[0], r[1], r[2]), v);
        }
    }
}
