use super::*;
use proptest::prelude::*;

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn rq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn q_poly(coeffs: &[i64], order: i64) -> LaurentSeries {
    LaurentSeries::from_q_coeffs(0, coeffs, order)
}

fn exact_poly(coeffs: &[i64]) -> LaurentSeries {
    LaurentSeries::new(
        coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| (24 * n as i64, r(*c))),
        EXACT,
    )
}

/// -24 sigma_1(n) by direct divisor enumeration.
fn e2_oracle(order: i64) -> LaurentSeries {
    let mut c = vec![1i64];
    for n in 1..order {
        c.push(-24 * (1..=n).filter(|d| n % d == 0).sum::<i64>());
    }
    q_poly(&c, order)
}

fn brute_convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len().min(b.len())];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < out.len() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

#[test]
fn add_cancels_and_has_identity() {
    let a = exact_poly(&[1, 1]);
    let b = exact_poly(&[1, -1]);
    assert_eq!(a.add(&b), LaurentSeries::constant(r(2)));
    let f = e2_oracle(10);
    assert_eq!(f.add(&LaurentSeries::exact_zero()), f);
}

#[test]
fn add_kills_q1_coefficient_of_e2() {
    let e2 = e2_oracle(8);
    let sum = e2.add(&LaurentSeries::monomial(24, r(24)));
    assert_eq!(sum.q_coeff(1).unwrap(), r(0));
    assert_eq!(sum.precision(), 8 * 24);
}

#[test]
fn add_takes_min_precision_and_trims_valuation() {
    let a = LaurentSeries::new([(24, r(1)), (48, r(2))], 120);
    let b = LaurentSeries::new([(24, r(-1)), (72, r(5))], 96);
    let s = a.add(&b);
    assert_eq!(s.precision(), 96);
    assert_eq!(s.valuation(), 48);
}

#[test]
fn mul_examples() {
    let p = exact_poly(&[1, 1]).mul(&exact_poly(&[1, -1]));
    assert_eq!(p, exact_poly(&[1, 0, -1]));

    let et2 = [1i64, 24, 24, 96, 24];
    let expected = brute_convolve(&et2, &et2);
    assert_eq!(expected, vec![1, 48, 624, 1344, 5232]);
    let s = q_poly(&et2, 5);
    let sq = s.mul(&s);
    assert_eq!(sq, q_poly(&expected, 5));

    let q8 = LaurentSeries::monomial(3, r(1));
    assert_eq!(q8.mul(&q8), LaurentSeries::monomial(6, r(1)));
}

#[test]
fn mul_precision_rule() {
    let a = LaurentSeries::new([(24, r(1)), (48, r(3))], 240);
    let b = LaurentSeries::new([(-24, r(2)), (0, r(1))], 120);
    let p = a.mul(&b);
    assert_eq!(p.valuation(), 0);
    assert_eq!(p.precision(), (240 - 24).min(120 + 24));
}

#[test]
fn div_examples() {
    let q = exact_poly(&[1, 0, -1]).div(&exact_poly(&[1, -1]));
    // exact / exact non-monomial has no finite precision to work with
    assert!(matches!(q, Err(SeriesError::InsufficientPrecision { .. })));
    let q = exact_poly(&[1, 0, -1])
        .truncate(240)
        .div(&exact_poly(&[1, -1]))
        .unwrap();
    assert_eq!(q, exact_poly(&[1, 1]).truncate(240));

    // brute-force recursive inversion b0 = 1, b_n = -sum a_k b_{n-k}
    let a = [1i64, 8, 28, 64];
    let mut inv = vec![1i64];
    for n in 1..4 {
        let s: i64 = (1..=n).map(|k| a[k] * inv[n - k]).sum();
        inv.push(-s);
    }
    assert_eq!(inv, vec![1, -8, 36, -128]);
    let got = LaurentSeries::one().div(&q_poly(&a, 4)).unwrap();
    assert_eq!(got, q_poly(&inv, 4));
}

#[test]
fn div_by_positive_valuation_gives_pole() {
    // (1 + q)/(q + q^2) = q^{-1} exactly, known to the propagated precision
    let a = q_poly(&[1, 1], 10);
    let b = LaurentSeries::from_q_coeffs(1, &[1i64, 1], 10);
    let c = a.div(&b).unwrap();
    assert_eq!(c.valuation(), -24);
    assert_eq!(c.precision(), (10 * 24 - 24).min(10 * 24 - 48));
    assert_eq!(c.coeff(-24).unwrap(), r(1));
    assert!(c.terms().count() == 1);
}

#[test]
fn div_errors() {
    let a = q_poly(&[1, 2], 5);
    assert_eq!(
        a.div(&LaurentSeries::exact_zero()),
        Err(SeriesError::ZeroDivisor)
    );
    assert!(matches!(
        a.div(&LaurentSeries::zero(48)),
        Err(SeriesError::InsufficientPrecision { .. })
    ));
}

#[test]
fn pow_examples() {
    assert_eq!(exact_poly(&[1, 1]).pow(2).unwrap(), exact_poly(&[1, 2, 1]));
    let d = LaurentSeries::from_q_coeffs(1, &[1i64, 8, 28, 64], 5);
    let d3 = d.pow(3).unwrap();
    assert_eq!(d3.q_coeff(3).unwrap(), r(1));
    assert_eq!(d3.valuation(), 72);
    assert_eq!(d.pow(0).unwrap(), LaurentSeries::one());

    // theta_2 = 2 q^{1/8} (1 + q + q^3 + ...)
    let theta2 = LaurentSeries::new([(3, r(2)), (27, r(2)), (75, r(2))], 24 * 4);
    let t8 = theta2.pow(8).unwrap();
    assert_eq!(t8.valuation(), 24);
    assert_eq!(t8.leading().unwrap().1, &r(256));
}

#[test]
fn negative_pow_inverts() {
    let a = q_poly(&[2, 3, 5, 7], 4);
    let inv2 = a.pow(-2).unwrap();
    let back = inv2.mul(&a.pow(2).unwrap());
    assert!(back
        .eq_to_order(&LaurentSeries::one(), back.precision())
        .unwrap()
        .is_equal());
}

#[test]
fn scale_arg_examples() {
    let e2 = e2_oracle(6);
    let e2_2 = e2.scale_arg(2);
    assert_eq!(
        e2_2,
        q_poly(&[1, 0, -24, 0, -72, 0, -96, 0, -168, 0, -144, 0], 12)
    );
    assert_eq!(e2.scale_arg(1), e2);
    let combo = e2_2.scale(&r(2)).sub(&e2);
    assert_eq!(combo.truncate(5 * 24), q_poly(&[1, 24, 24, 96, 24], 5));
}

#[test]
fn delta_examples() {
    assert_eq!(
        LaurentSeries::monomial(5 * 24, r(1)).delta(),
        LaurentSeries::monomial(5 * 24, r(5))
    );
    assert!(LaurentSeries::constant(r(7)).delta().is_zero());
    let d = LaurentSeries::from_q_coeffs(1, &[1i64, 8, 28, 64], 5);
    assert_eq!(
        d.delta(),
        LaurentSeries::from_q_coeffs(1, &[1i64, 16, 84, 256], 5)
    );
    assert_eq!(
        LaurentSeries::monomial(3, r(1)).delta(),
        LaurentSeries::monomial(3, rq(1, 8))
    );
}

#[test]
fn dlog_of_monomial_is_its_exponent() {
    assert_eq!(
        LaurentSeries::monomial(24, r(1)).dlog().unwrap(),
        LaurentSeries::constant(r(1))
    );
}

#[test]
fn z_deriv_grading() {
    let g = GradedSeries::ungraded(LaurentSeries::monomial(24, r(1)));
    let d = g.z_deriv();
    assert_eq!(d.lambda_degree, 1);
    assert_eq!(d.body, LaurentSeries::monomial(24, r(2)));
    let d3 = g.z_deriv().z_deriv().z_deriv();
    assert_eq!(d3.lambda_degree, 3);
    assert_eq!(d3.body, LaurentSeries::monomial(24, r(8)));
}

#[test]
fn graded_addition_rejects_mixed_degrees() {
    let a = GradedSeries::new(1, q_poly(&[1, 2], 4));
    let b = GradedSeries::new(0, q_poly(&[1, 2], 4));
    assert_eq!(a.add(&b), Err(SeriesError::Grading { left: 1, right: 0 }));
    assert!(a.add(&a).is_ok());
    assert_eq!(a.mul(&b).lambda_degree, 1);
    assert_eq!(a.div(&a.lam(1)).unwrap().lambda_degree, -1);
}

#[test]
fn eq_to_order_examples() {
    let f = e2_oracle(10);
    assert!(f.eq_to_order(&f, 240).unwrap().is_equal());
    let a = exact_poly(&[1, 1]);
    let b = a.add(&LaurentSeries::monomial(100 * 24, r(1)));
    assert!(a.eq_to_order(&b, 50 * 24).unwrap().is_equal());

    // Ecal2 = 1 + 8q - 8q^2 + ...
    let ecal2 = q_poly(&[1, 8, -8, 32], 4);
    let res = e2_oracle(4).eq_to_order(&ecal2, 24 * 4).unwrap();
    let m = res.mismatch().unwrap();
    assert_eq!(
        (m.exponent, m.lhs.clone(), m.rhs.clone()),
        (24, r(-24), r(8))
    );
}

#[test]
fn eq_to_order_reports_short_operand() {
    let a = q_poly(&[1, 2, 3], 3);
    let b = q_poly(&[1, 2, 3, 4, 5], 5);
    match b.eq_to_order(&a, 4 * 24) {
        Err(SeriesError::InsufficientPrecision { operand, .. }) => assert_eq!(operand, "right"),
        other => panic!("unexpected {:?}", other),
    }
}

#[test]
fn coefficient_above_precision_is_unknown() {
    let a = q_poly(&[1, 2, 3], 3);
    assert_eq!(a.coeff(24).unwrap(), r(2));
    assert_eq!(a.coeff(-100).unwrap(), r(0));
    assert!(matches!(
        a.coeff(72),
        Err(SeriesError::UnknownCoefficient { .. })
    ));
}

#[test]
fn dump_format() {
    let s = LaurentSeries::new([(-24, r(1)), (0, r(40)), (24, rq(69, 16))], 48);
    assert_eq!(
        s.dump(0),
        "valuation=-24 precision=48 lambda=0\n-24/24\t1/1\n0/24\t40/1\n24/24\t69/16\n"
    );
}

#[test]
fn display_is_readable() {
    let s = LaurentSeries::new([(0, r(1)), (3, r(-2)), (24, r(8))], 48);
    assert_eq!(s.to_string(), "1 - 2q^(1/8) + 8q + O(q^2)");
}

// ---- property tests ----

prop_compose! {
    /// A truncated series with exponents on a random sub-grid, a small
    /// random valuation shift and random precision.
    fn arb_series()(
        shift in -2i64..3,
        step in prop::sample::select(vec![3i64, 6, 12, 24]),
        coeffs in prop::collection::vec((-20i64..20, 1i64..4), 1..12),
        extra in 0i64..48,
    ) -> LaurentSeries {
        let base = shift * 24;
        let precision = base + step * coeffs.len() as i64 + extra;
        LaurentSeries::new(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, (n, d))| (base + step * i as i64, Rational::new((*n).into(), (*d).into()))),
            precision,
        )
    }
}

prop_compose! {
    fn arb_unit()(s in arb_series(), lead in 1i64..5) -> LaurentSeries {
        // force a nonzero leading coefficient
        let v = s.valuation().min(s.precision() - 1);
        s.with_coeff(v, Rational::from_integer(lead.into())).unwrap()
    }
}

fn agree(a: &LaurentSeries, b: &LaurentSeries) -> bool {
    let p = a.precision().min(b.precision());
    a.eq_to_order(b, p).unwrap().is_equal()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert!(agree(&a.add(&b).add(&c), &a.add(&b.add(&c))));
        prop_assert!(agree(&a.mul(&b), &b.mul(&a)));
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
    }

    #[test]
    fn leibniz_rule(a in arb_series(), b in arb_series()) {
        let lhs = a.mul(&b).delta();
        let rhs = a.delta().mul(&b).add(&a.mul(&b.delta()));
        prop_assert!(agree(&lhs, &rhs));
    }

    #[test]
    fn div_inverts_mul(a in arb_series(), b in arb_unit()) {
        let q = a.mul(&b).div(&b).unwrap();
        prop_assert!(agree(&q, &a));
    }

    #[test]
    fn scale_arg_chain_rule(f in arb_series(), m in 1u32..4) {
        let lhs = f.scale_arg(m).delta();
        let rhs = f.delta().scale_arg(m).scale(&Rational::from_integer(m.into()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dlog_is_additive(a in arb_unit(), b in arb_unit()) {
        let lhs = a.mul(&b).dlog().unwrap();
        let rhs = a.dlog().unwrap().add(&b.dlog().unwrap());
        prop_assert!(agree(&lhs, &rhs));
    }

    /// Truncating the inputs first must reproduce every coefficient the
    /// full-precision computation reports below the smaller precision.
    #[test]
    fn precision_is_never_optimistic(a in arb_series(), b in arb_unit(), cut in 0i64..24) {
        let full = a.mul(&b).add(&a.div(&b).unwrap());
        let pa = (a.precision() - cut).max(a.valuation());
        let pb = (b.precision() - cut).max(b.valuation() + 1);
        let lo = a.truncate(pa);
        let lb = b.truncate(pb);
        let low = lo.mul(&lb).add(&lo.div(&lb).unwrap());
        prop_assert!(low.precision() <= full.precision());
        prop_assert!(full.eq_to_order(&low, low.precision()).unwrap().is_equal());
    }
}
