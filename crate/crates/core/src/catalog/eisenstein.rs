use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::arith::{bernoulli, divisor_sieve};
use super::{mode_enum, CatalogError};
use crate::series::{LaurentSeries, Rational, UNITS_PER_Q};

mode_enum!(ETildeMode, "Et2", {
    Lambert => "lambert",
    OddDivisor => "odd_divisor",
    Level1Combination => "level1_combination",
});

/// `1 + factor * sum_{m>=1} c[m] q^m`, known below `q^order`.
fn one_plus(factor: &Rational, c: &[BigInt], order: u32) -> LaurentSeries {
    let terms = std::iter::once((0, Rational::one())).chain(
        c.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| {
                (
                    m as i64 * UNITS_PER_Q,
                    factor * Rational::from_integer(v.clone()),
                )
            }),
    );
    LaurentSeries::new(terms, order as i64 * UNITS_PER_Q)
}

fn check_weight(k: u32) -> Result<(), CatalogError> {
    if k < 2 || k % 2 == 1 {
        return Err(CatalogError::InvalidWeight(k as i64));
    }
    Ok(())
}

/// `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n` on the full modular group.
pub fn eisenstein_level1(k: u32, order: u32) -> Result<LaurentSeries, CatalogError> {
    check_weight(k)?;
    let factor = -Rational::from_integer(BigInt::from(2 * k)) / bernoulli(k)?;
    let c = divisor_sieve(order as usize, |n, _| BigInt::from(n).pow(k - 1));
    Ok(one_plus(&factor, &c, order))
}

/// Level-2 Eisenstein series
/// `1 + 2k/((1-2^k) B_k) sum (-1)^n n^{k-1} q^n/(1-q^n)`.
pub fn eisenstein_level2(k: u32, order: u32) -> Result<LaurentSeries, CatalogError> {
    check_weight(k)?;
    let one_minus = Rational::one() - Rational::from_integer(BigInt::from(2).pow(k));
    let factor = Rational::from_integer(BigInt::from(2 * k)) / (one_minus * bernoulli(k)?);
    let c = divisor_sieve(order as usize, |n, _| {
        let v = BigInt::from(n).pow(k - 1);
        if n % 2 == 1 {
            -v
        } else {
            v
        }
    });
    Ok(one_plus(&factor, &c, order))
}

/// The weight-2 modular form on the level-2 congruence subgroup.
pub fn e_tilde_2(order: u32, mode: ETildeMode) -> LaurentSeries {
    let len = order as usize;
    let factor = Rational::from_integer(24.into());
    match mode {
        ETildeMode::Lambert => {
            // n q^n/(1+q^n) = sum_j (-1)^{j-1} n q^{nj}
            let c = divisor_sieve(len, |n, j| {
                if j % 2 == 1 {
                    BigInt::from(n)
                } else {
                    -BigInt::from(n)
                }
            });
            one_plus(&factor, &c, order)
        }
        ETildeMode::OddDivisor => {
            let c = divisor_sieve(len, |n, _| BigInt::from(n % 2 * n));
            one_plus(&factor, &c, order)
        }
        ETildeMode::Level1Combination => {
            let e2 = eisenstein_level1(2, order).expect("weight 2 is valid");
            e2.scale_arg(2)
                .scale(&Rational::from_integer(2.into()))
                .sub(&e2)
                .truncate(order as i64 * UNITS_PER_Q)
        }
    }
}
