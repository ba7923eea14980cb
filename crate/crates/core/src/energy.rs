//! Common additive energy, the higher moments `T_k`, and the
//! Cauchy–Schwarz lower bound `E(A,B) |A ± B| >= |A|^2 |B|^2`.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::conv::{convolve, ConvStrategy};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::ratio::int;
use crate::report::{CheckReport, Instance};
use crate::set::GroupSet;
use crate::sumset::{difference_set, rep_function, sumset, RepMethod, Sign};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyMethod {
    /// Direct count of quadruples `a1 - b1 = a2 - b2`.
    Naive,
    /// `sum_x r_{A-B}(x)^2`.
    RepSquared,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyValue {
    pub value: u128,
    pub method: EnergyMethod,
}

/// `E(A,B) = #{(a1,a2,b1,b2) : a1 - b1 = a2 - b2}`.
pub fn common_energy(a: &GroupSet, b: &GroupSet) -> Result<EnergyValue> {
    common_energy_with(a, b, EnergyMethod::RepSquared)
}

pub fn common_energy_with(a: &GroupSet, b: &GroupSet, method: EnergyMethod) -> Result<EnergyValue> {
    a.same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet("common_energy"));
    }
    let value = match method {
        EnergyMethod::RepSquared => rep_function(a, b, Sign::Minus, RepMethod::Auto)?.sum_of_squares(),
        EnergyMethod::Naive => {
            let g = a.group();
            let (av, bv) = (a.to_vec(), b.to_vec());
            let mut count = 0u128;
            for &a1 in &av {
                for &b1 in &bv {
                    let d = g.sub_idx(a1, b1);
                    for &a2 in &av {
                        for &b2 in &bv {
                            if g.sub_idx(a2, b2) == d {
                                count += 1;
                            }
                        }
                    }
                }
            }
            count
        }
    };
    Ok(EnergyValue { value, method })
}

/// `T_k(f) = sum_x (f * ... * f)(x)^2` with `k` copies of `f`.
///
/// `f` is dense over `group`. For an indicator and `k = 2` this is `E(A,A)`.
pub fn t_k(group: &GroupSpec, f: &[i64], k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("T_k needs k >= 2, got {k}")));
    }
    if f.len() != group.order() {
        return Err(Error::InvalidArgument(format!(
            "function has {} values, group order is {}",
            f.len(),
            group.order()
        )));
    }
    let base: Vec<i128> = f.iter().map(|&v| v as i128).collect();
    let mut acc = base.clone();
    for _ in 1..k {
        acc = convolve(group, &acc, &base, ConvStrategy::Auto)?.values;
    }
    let total: BigInt = acc.iter().map(|&v| BigInt::from(v) * BigInt::from(v)).sum();
    Ok(total.to_biguint().expect("sum of squares is nonnegative"))
}

/// `T_k` of a set indicator.
pub fn t_k_set(a: &GroupSet, k: u32) -> Result<BigUint> {
    let mut f = vec![0i64; a.group().order()];
    for i in a.indices() {
        f[i] = 1;
    }
    t_k(a.group(), &f, k)
}

/// Checks `|A|^2 |B|^2 <= E(A,B) |A ± B|`; this always holds.
pub fn cs_energy_lower_bound(a: &GroupSet, b: &GroupSet, sign: Sign) -> Result<CheckReport> {
    let e = common_energy(a, b)?.value;
    let combined = match sign {
        Sign::Plus => sumset(a, b)?,
        Sign::Minus => difference_set(a, b)?,
    };
    let (na, nb) = (a.len() as u128, b.len() as u128);
    let id = match sign {
        Sign::Plus => "cs_energy.plus",
        Sign::Minus => "cs_energy.minus",
    };
    let lhs = int(na * na * nb * nb);
    let rhs = int(e) * int(combined.len() as u64);
    Ok(CheckReport::inequality(id, &Instance::new([("A", a), ("B", b)]), lhs, rhs))
}
