use num_bigint::BigInt;
use num_traits::Zero;

use super::{at_order, CatalogError};
use crate::series::{LaurentSeries, Rational, UNITS_PER_Q};

/// Null theta function `theta_i`, `i` in {2, 3, 4}. Exponents are in 1/24
/// units: `q^{n^2/2}` sits at `12 n^2`, `q^{(n+1/2)^2/2}` at `12 n(n+1) + 3`.
pub fn theta(i: u32, order: u32) -> Result<LaurentSeries, CatalogError> {
    let precision = order as i64 * UNITS_PER_Q;
    let mut terms = Vec::new();
    match i {
        2 => {
            let mut n = 0i64;
            while 12 * n * (n + 1) + 3 < precision {
                terms.push((12 * n * (n + 1) + 3, Rational::from_integer(2.into())));
                n += 1;
            }
        }
        3 | 4 => {
            terms.push((0, Rational::from_integer(1.into())));
            let mut n = 1i64;
            while 12 * n * n < precision {
                let c = if i == 4 && n % 2 == 1 { -2 } else { 2 };
                terms.push((12 * n * n, Rational::from_integer(c.into())));
                n += 1;
            }
        }
        _ => return Err(CatalogError::InvalidIndex(i)),
    }
    Ok(LaurentSeries::new(terms, precision))
}

/// Coefficients of `prod_{n>=1} (1 - q^n)` below `q^len`.
pub(crate) fn euler_product(len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len > 0 {
        c[0] = 1.into();
    }
    for n in 1..len {
        for m in (n..len).rev() {
            let prev = c[m - n].clone();
            c[m] -= prev;
        }
    }
    c
}

/// Dedekind eta: `q^{1/24} prod (1 - q^n)`.
pub fn eta(order: u32) -> LaurentSeries {
    let precision = order as i64 * UNITS_PER_Q;
    let c = euler_product(order as usize);
    LaurentSeries::new(
        c.into_iter()
            .enumerate()
            .map(|(k, v)| (1 + UNITS_PER_Q * k as i64, Rational::from_integer(v))),
        precision,
    )
}

/// Modular lambda function `theta_2^4 / theta_3^4`.
pub fn lambda_fn(order: u32) -> Result<LaurentSeries, CatalogError> {
    at_order(order, |m| {
        let t2 = theta(2, m).expect("valid index");
        let t3 = theta(3, m).expect("valid index");
        t2.pow(4)?.div(&t3.pow(4)?)
    })
}
