use super::eisenstein::{e_tilde_2, eisenstein_level1, eisenstein_level2, ETildeMode};
use super::theta::{euler_product, theta};
use super::{at_order, mode_enum, CatalogError};
use crate::series::{LaurentSeries, Rational, SeriesError, UNITS_PER_Q};

mode_enum!(DeltaMode, "Delta", {
    Product => "product",
    Eisenstein => "eisenstein",
});

mode_enum!(SMode, "s", {
    J2Quarter => "j2_quarter",
    DeltaQuotient => "delta_quotient",
    ThetaQuotient => "theta_quotient",
});

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn e(k: u32, order: u32) -> LaurentSeries {
    eisenstein_level1(k, order).expect("even weight")
}

/// The discriminant `Delta`, weight-12 cusp form.
pub fn delta_fn(order: u32, mode: DeltaMode) -> Result<LaurentSeries, CatalogError> {
    let precision = order as i64 * UNITS_PER_Q;
    match mode {
        DeltaMode::Eisenstein => {
            let e4 = e(4, order);
            let e6 = e(6, order);
            Ok(e4.pow(3)?.sub(&e6.pow(2)?).scale(&rat(1, 1728)))
        }
        DeltaMode::Product => {
            let p = LaurentSeries::from_q_coeffs(0, &euler_product(order as usize), order as i64);
            let q = LaurentSeries::monomial(UNITS_PER_Q, rat(1, 1));
            Ok(p.pow(24)?.mul(&q).truncate(precision))
        }
    }
}

/// `(Et2^2 - Ecal4)/64`.
pub fn d_cal(order: u32) -> Result<LaurentSeries, CatalogError> {
    let t = e_tilde_2(order, ETildeMode::Lambert);
    let e4 = eisenstein_level2(4, order)?;
    Ok(t.pow(2)?.sub(&e4).scale(&rat(1, 64)))
}

/// Klein's `j = E4^3/Delta`.
pub fn j_fn(order: u32) -> Result<LaurentSeries, CatalogError> {
    at_order(order, |m| {
        let delta = delta_fn(m, DeltaMode::Product).map_err(as_series)?;
        e(4, m).pow(3)?.div(&delta)
    })
}

/// Hauptmodul of level 2, `Et2^2/Dcal`.
pub fn j2_fn(order: u32) -> Result<LaurentSeries, CatalogError> {
    at_order(order, |m| {
        let d = d_cal(m).map_err(as_series)?;
        e_tilde_2(m, ETildeMode::Lambert).pow(2)?.div(&d)
    })
}

/// `s = j2/64`, built three ways.
pub fn s_fn(order: u32, mode: SMode) -> Result<LaurentSeries, CatalogError> {
    match mode {
        SMode::J2Quarter => Ok(j2_fn(order)?.scale(&rat(1, 64))),
        SMode::DeltaQuotient => at_order(order, |m| {
            // 1 + Delta(z)/(64 Delta(2z))
            let d = delta_fn(m, DeltaMode::Product).map_err(as_series)?;
            let q = d.div(&d.scale_arg(2))?.scale(&rat(1, 64));
            Ok(LaurentSeries::one().add(&q))
        }),
        SMode::ThetaQuotient => at_order(order, |m| {
            let t = |i| theta(i, m).expect("valid index").pow(4);
            t(3)?.add(&t(4)?).div(&t(2)?)?.pow(2)
        }),
    }
}

/// Only series errors can escape the inner constructors used above.
fn as_series(e: CatalogError) -> SeriesError {
    match e {
        CatalogError::Series(s) => s,
        other => unreachable!("catalog constructor failed: {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn ints(s: &LaurentSeries, from: i64, to: i64) -> Vec<i64> {
        (from..to)
            .map(|n| {
                let c = s.q_coeff(n).unwrap();
                assert!(c.is_integer(), "q^{n} coefficient {c} not integral");
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    /// Naive 24-fold product of truncated polynomials.
    fn tau_oracle(len: usize) -> Vec<i128> {
        let mut euler = vec![0i128; len];
        euler[0] = 1;
        for n in 1..len {
            for m in (n..len).rev() {
                euler[m] -= euler[m - n];
            }
        }
        let mut acc = vec![0i128; len];
        acc[0] = 1;
        for _ in 0..24 {
            let mut next = vec![0i128; len];
            for i in 0..len {
                for j in 0..len - i {
                    next[i + j] += acc[i] * euler[j];
                }
            }
            acc = next;
        }
        // shift by q
        let mut tau = vec![0i128; len];
        tau[1..len].copy_from_slice(&acc[..len - 1]);
        tau
    }

    /// Number of ordered 8-tuples of triangular numbers summing to n.
    fn delta8_oracle(max: usize) -> Vec<u64> {
        let tri: Vec<usize> = (0..)
            .map(|k| k * (k + 1) / 2)
            .take_while(|t| *t <= max)
            .collect();
        let mut ways = vec![0u64; max + 1];
        ways[0] = 1;
        for _ in 0..8 {
            let mut next = vec![0u64; max + 1];
            for (s, w) in ways.iter().enumerate() {
                for t in &tri {
                    if s + t <= max {
                        next[s + t] += w;
                    }
                }
            }
            ways = next;
        }
        ways
    }

    #[test]
    fn delta_modes_agree_and_match_tau() {
        let n = 60;
        let a = delta_fn(n, DeltaMode::Product).unwrap();
        let b = delta_fn(n, DeltaMode::Eisenstein).unwrap();
        assert_eq!(a, b);
        assert_eq!(ints(&a, 0, 4), [0, 1, -24, 252]);
        let tau = tau_oracle(n as usize);
        for m in 0..n as i64 {
            assert_eq!(
                a.q_coeff(m).unwrap(),
                Rational::from_integer(tau[m as usize].into())
            );
        }
    }

    #[test]
    fn ramanujan_bound_to_200() {
        let d = delta_fn(201, DeltaMode::Product).unwrap();
        for m in 1..=200u64 {
            let c = d.q_coeff(m as i64).unwrap();
            assert!(c.is_integer());
            let tau = c.to_integer().abs();
            let d0 = crate::catalog::sigma(0, m);
            let t: f64 = tau.to_string().parse().unwrap();
            let bound = (m as f64).powf(5.5) * d0.to_string().parse::<f64>().unwrap();
            // equality at n = 1, where tau(1) = 1 = 1^(11/2) sigma_0(1)
            let exact_sq = BigInt::from(m).pow(11) * &d0 * &d0;
            if m == 1 {
                assert!(t <= bound);
                assert_eq!(&tau * &tau, exact_sq);
            } else {
                assert!(t < bound, "n={m}");
                assert!(&tau * &tau < exact_sq, "n={m}");
            }
        }
    }

    #[test]
    fn d_cal_expansion_and_triangular_counts() {
        let d = d_cal(27).unwrap();
        assert_eq!(ints(&d, 0, 5), [0, 1, 8, 28, 64]);
        let oracle = delta8_oracle(25);
        for n in 0..=25 {
            assert_eq!(
                d.q_coeff(n as i64 + 1).unwrap(),
                Rational::from_integer(oracle[n].into()),
                "n={n}"
            );
        }
    }

    #[test]
    fn j_and_j2_expansions() {
        let j = j_fn(4).unwrap();
        assert_eq!(j.valuation(), -24);
        assert_eq!(j.precision(), 96);
        assert_eq!(ints(&j, -1, 3), [1, 744, 196884, 21493760]);
        let j2 = j2_fn(4).unwrap();
        assert_eq!(j2.valuation(), -24);
        assert_eq!(ints(&j2, -1, 3), [1, 40, 276, -2048]);
    }

    #[test]
    fn s_modes_agree() {
        let n = 40;
        let a = s_fn(n, SMode::J2Quarter).unwrap();
        assert_eq!(a.q_coeff(-1).unwrap(), rat(1, 64));
        assert_eq!(a.q_coeff(0).unwrap(), rat(40, 64));
        assert_eq!(a.q_coeff(1).unwrap(), rat(276, 64));
        assert_eq!(a.q_coeff(2).unwrap(), rat(-32, 1));
        assert_eq!(a, s_fn(n, SMode::DeltaQuotient).unwrap());
        assert_eq!(a, s_fn(n, SMode::ThetaQuotient).unwrap());
        assert_eq!(a.scale(&rat(64, 1)), j2_fn(n).unwrap());
    }

    #[test]
    fn cusp_forms_vanish_at_infinity() {
        assert_eq!(
            delta_fn(5, DeltaMode::Product).unwrap().q_coeff(0).unwrap(),
            rat(0, 1)
        );
        assert_eq!(d_cal(5).unwrap().q_coeff(0).unwrap(), rat(0, 1));
    }

    #[test]
    fn d_cube_relation() {
        // Dcal^3 = Delta(2z)^2 / Delta(z)
        let n = 30;
        let d = d_cal(n).unwrap();
        let delta = delta_fn(n + 2, DeltaMode::Product).unwrap();
        let rhs = delta.scale_arg(2).pow(2).unwrap().div(&delta).unwrap();
        assert!(d
            .pow(3)
            .unwrap()
            .eq_to_order(&rhs, 24 * n as i64)
            .unwrap()
            .is_equal());
    }
}
