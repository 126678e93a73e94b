use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use super::CatalogError;
use crate::series::Rational;

/// Bernoulli number `B_k` for even `k >= 2`, via
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`, memoized.
pub fn bernoulli(k: u32) -> Result<Rational, CatalogError> {
    if k < 2 || k % 2 == 1 {
        return Err(CatalogError::InvalidWeight(k as i64));
    }
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        Mutex::new(vec![
            Rational::one(),
            Rational::new(BigInt::from(-1), BigInt::from(2)),
        ])
    });
    let mut b = table.lock().unwrap_or_else(|e| e.into_inner());
    while b.len() <= k as usize {
        let m = b.len();
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            let c: BigInt = binomial(BigInt::from(m + 1), BigInt::from(j));
            acc += bj * Rational::from_integer(c);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    Ok(b[k as usize].clone())
}

/// Sum of `k`-th powers of the positive divisors of `n`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

/// `out[m] = sum_{n | m} f(n, m / n)` for `1 <= m < len`; `out[0] = 0`.
pub(crate) fn divisor_sieve<F>(len: usize, f: F) -> Vec<BigInt>
where
    F: Fn(u64, u64) -> BigInt,
{
    let mut out = vec![BigInt::zero(); len];
    for n in 1..len {
        for (j, m) in (n..len).step_by(n).enumerate() {
            out[m] += f(n as u64, j as u64 + 1);
        }
    }
    out
}
