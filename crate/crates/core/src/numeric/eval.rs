use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::jet::Jet;
use super::NumericError;
use crate::series::{GradedSeries, LaurentSeries, UNITS_PER_Q};

/// Numeric value of the grading symbol, `pi i`.
pub const LAMBDA: Complex64 = Complex64::new(0.0, PI);

/// A series value at a point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEval {
    pub value: Complex64,
    /// Geometric majorant of the dropped terms; a heuristic, not a bound.
    pub tail_estimate: f64,
}

/// Anything that evaluates like a graded series.
pub trait Evaluable {
    fn parts(&self) -> (i32, &LaurentSeries);
}

impl Evaluable for LaurentSeries {
    fn parts(&self) -> (i32, &LaurentSeries) {
        (0, self)
    }
}

impl Evaluable for GradedSeries {
    fn parts(&self) -> (i32, &LaurentSeries) {
        (self.lambda_degree, &self.body)
    }
}

/// Compensated complex summation.
#[derive(Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: Complex64,
    comp: Complex64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum(self.sum.re, x.re);
        let (im, cim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.comp += Complex64::new(cre, cim);
    }

    pub(crate) fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn two_sum(s: f64, x: f64) -> (f64, f64) {
    let t = s + x;
    let c = if s.abs() >= x.abs() {
        (s - t) + x
    } else {
        (x - t) + s
    };
    (t, c)
}

pub(crate) fn check_half_plane(z: Complex64) -> Result<(), NumericError> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(NumericError::HalfPlane { re: z.re, im: z.im })
    }
}

/// Sum of `c_e q^(e/24)` at `q = exp(2 pi i z)`, with `lambda -> pi i`.
pub fn eval_series<S: Evaluable + ?Sized>(
    f: &S,
    z: Complex64,
) -> Result<ComplexEval, NumericError> {
    let jet = series_jet(f, z, 1)?;
    let (deg, body) = f.parts();
    let tail = if body.is_exact() {
        0.0
    } else {
        match body.terms().next_back() {
            Some((e, c)) => {
                let r = (-2.0 * PI * z.im / UNITS_PER_Q as f64).exp();
                let c = c.to_f64().unwrap_or(f64::INFINITY).abs();
                c * r.powf(e as f64) / (1.0 - r) * PI.powi(deg)
            }
            None => 0.0,
        }
    };
    Ok(ComplexEval {
        value: jet.value(),
        tail_estimate: tail,
    })
}

/// Taylor expansion in `z` of the series around `z`, with `len` coefficients.
/// Derivatives are taken termwise: `d/dz q^x = 2 pi i x q^x`.
pub fn series_jet<S: Evaluable + ?Sized>(
    f: &S,
    z: Complex64,
    len: usize,
) -> Result<Jet, NumericError> {
    check_half_plane(z)?;
    let (deg, body) = f.parts();
    let mut sums = vec![Neumaier::default(); len];
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for (e, c) in body.terms() {
        let x = e as f64 / UNITS_PER_Q as f64;
        let c = c
            .to_f64()
            .filter(|c| c.is_finite())
            .ok_or(NumericError::Overflow)?;
        let mut t = (two_pi_i * z * x).exp() * c;
        let step = two_pi_i * x;
        for (k, s) in sums.iter_mut().enumerate() {
            s.add(t);
            t = t * step / (k + 1) as f64;
        }
    }
    let scale = LAMBDA.powi(deg);
    Ok(Jet::new(sums.iter().map(|s| s.total() * scale).collect()))
}

/// Smallest series order whose dropped terms sit well below double
/// precision at imaginary part `im`, assuming polynomially growing
/// coefficients. Never below `floor`.
pub fn order_for(im: f64, floor: u32) -> u32 {
    let mut n = floor as f64;
    for _ in 0..8 {
        n = ((40.0 + 3.0 * (n + 1.0).ln()) / (2.0 * PI * im)).max(floor as f64);
    }
    n.ceil() as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, DeltaMode};
    use crate::series::Rational;

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn e2_at_i_is_three_over_pi() {
        let e2 = catalog::eisenstein_level1(2, 60).unwrap();
        let v = eval_series(&e2, i()).unwrap();
        assert!((v.value - 3.0 / PI).norm() < 1e-12, "{}", v.value);
        assert!(v.tail_estimate < 1e-30);
    }

    #[test]
    fn constant_has_no_tail() {
        let one = LaurentSeries::one();
        let v = eval_series(&one, Complex64::new(0.3, 0.2)).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        assert_eq!(v.tail_estimate, 0.0);
    }

    #[test]
    fn delta_is_eta_to_the_24() {
        let z = Complex64::new(0.1, 0.9);
        let d = eval_series(&catalog::delta_fn(60, DeltaMode::Eisenstein).unwrap(), z).unwrap();
        let eta = eval_series(&catalog::eta(60), z).unwrap();
        let rel = (d.value - eta.value.powi(24)).norm() / d.value.norm();
        assert!(rel < 1e-12, "{rel}");
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        let one = LaurentSeries::one();
        assert!(matches!(
            eval_series(&one, Complex64::new(0.0, 0.0)),
            Err(NumericError::HalfPlane { .. })
        ));
    }

    #[test]
    fn huge_coefficient_is_an_error_not_nan() {
        let big = Rational::from_integer(num_bigint::BigInt::from(10).pow(400u32));
        let f = LaurentSeries::new([(0, Rational::from_integer(1.into())), (24, big)], 48);
        assert_eq!(eval_series(&f, i()), Err(NumericError::Overflow));
    }

    #[test]
    fn grading_substitutes_pi_i() {
        let g = GradedSeries::new(2, LaurentSeries::constant(Rational::from_integer(3.into())));
        let v = eval_series(&g, i()).unwrap();
        assert!((v.value + 3.0 * PI * PI).norm() < 1e-12);
    }

    #[test]
    fn jet_matches_delta_series() {
        // d/dz f = 2 pi i delta f
        let z = Complex64::new(-0.2, 0.8);
        let e4 = catalog::eisenstein_level1(4, 60).unwrap();
        let jet = series_jet(&e4, z, 3).unwrap();
        let d1 = eval_series(&e4.delta(), z).unwrap().value * 2.0 * LAMBDA;
        let d2 = eval_series(&e4.delta().delta(), z).unwrap().value * (2.0 * LAMBDA).powi(2);
        assert!((jet.derivative(1) - d1).norm() < 1e-9 * d1.norm());
        assert!((jet.derivative(2) - d2).norm() < 1e-9 * d2.norm());
    }

    #[test]
    fn order_grows_as_im_shrinks() {
        assert_eq!(order_for(1.0, 60), 60);
        let n = order_for(0.005, 60);
        assert!((1500..3000).contains(&n), "{n}");
    }
}
