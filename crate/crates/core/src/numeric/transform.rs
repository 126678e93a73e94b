use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::eval::{check_half_plane, eval_series, order_for, series_jet, LAMBDA};
use super::jet::Jet;
use super::ode::{OdeField, OdeKind};
use super::NumericError;
use crate::catalog::{self, GdhMode};
use crate::series::GradedSeries;

type C = Complex64;

/// Minimum series order used by transformation checks.
pub const MIN_ORDER: u32 = 60;

/// The Schwarz-mode gDH variables have poles on the Gamma0(2) orbit of the
/// elliptic point (1+i)/2, so their q-expansions converge only above
/// `Im z = 1/2`, with coefficients growing like `exp(pi n)`.
pub const U_POLE_IM: f64 = 0.5;

/// Smallest distance above [`U_POLE_IM`] we evaluate the u variables at.
pub const U_MARGIN: f64 = 0.05;

/// A nonsingular 2x2 complex matrix acting by Moebius transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

fn is_integer(x: C) -> bool {
    x.im == 0.0 && x.re.fract() == 0.0 && x.re.is_finite()
}

impl Matrix2 {
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self, NumericError> {
        let m = Self { a, b, c, d };
        if m.det().norm() == 0.0 || !m.det().is_finite() {
            return Err(NumericError::Parameter(format!("singular matrix {m}")));
        }
        Ok(m)
    }

    pub fn integer(a: i64, b: i64, c: i64, d: i64) -> Result<Self, NumericError> {
        let f = |x: i64| C::new(x as f64, 0.0);
        Self::new(f(a), f(b), f(c), f(d))
    }

    pub fn det(&self) -> C {
        self.a * self.d - self.b * self.c
    }

    pub fn is_sl2z(&self) -> bool {
        [self.a, self.b, self.c, self.d].into_iter().all(is_integer)
            && self.det() == C::new(1.0, 0.0)
    }

    pub fn is_gamma0_2(&self) -> bool {
        self.is_sl2z() && self.c.re % 2.0 == 0.0
    }

    /// `cz + d`
    pub fn factor(&self, z: C) -> C {
        self.c * z + self.d
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / self.factor(z)
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |x: C| {
            if x.im == 0.0 {
                format!("{}", x.re)
            } else {
                format!("{}{:+}i", x.re, x.im)
            }
        };
        write!(
            f,
            "({} {}; {} {})",
            p(self.a),
            p(self.b),
            p(self.c),
            p(self.d)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TransformLaw {
    /// `E2(gz) = J^2 E2(z) + 6/(pi i) c J` on SL2(Z), with `J = cz + d`.
    #[serde(rename = "E2_law")]
    E2,
    /// `Ecal2(gz) = J^2 Ecal2(z) + 2/(pi i) c J` on Gamma0(2).
    #[serde(rename = "Ecal2_law")]
    Ecal2,
    /// `y(gz)/J^2 - 2c/J` solves the third-order `Ecal2` equation
    /// whenever `y` does, for any complex `g` of determinant 1.
    #[serde(rename = "y_transform")]
    Y,
    /// The same with `-c/J`, as first printed; fails.
    #[serde(rename = "y_transform_literal")]
    YLiteral,
    /// `u_i(gz)/J^2 + c/J` solves the level-2 generalized Halphen system.
    #[serde(rename = "u_transform")]
    U,
}

impl TransformLaw {
    pub const ALL: [TransformLaw; 5] = [
        TransformLaw::E2,
        TransformLaw::Ecal2,
        TransformLaw::Y,
        TransformLaw::YLiteral,
        TransformLaw::U,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformLaw::E2 => "E2_law",
            TransformLaw::Ecal2 => "Ecal2_law",
            TransformLaw::Y => "y_transform",
            TransformLaw::YLiteral => "y_transform_literal",
            TransformLaw::U => "u_transform",
        }
    }
}

impl fmt::Display for TransformLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformLaw {
    type Err = NumericError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let short = |l: TransformLaw| {
            l.as_str()
                .trim_end_matches("_law")
                .trim_end_matches("_transform")
        };
        TransformLaw::ALL
            .into_iter()
            .find(|&l| l.as_str() == s || short(l) == s)
            .ok_or_else(|| NumericError::Parameter(format!("unknown transformation law `{s}`")))
    }
}

fn group_check(law: TransformLaw, g: &Matrix2) -> Result<(), NumericError> {
    let ok = match law {
        TransformLaw::E2 => g.is_sl2z(),
        TransformLaw::Ecal2 => g.is_gamma0_2(),
        _ => (g.det() - 1.0).norm() < 1e-12,
    };
    if ok {
        Ok(())
    } else {
        let need = match law {
            TransformLaw::E2 => "SL2(Z)",
            TransformLaw::Ecal2 => "Gamma0(2)",
            _ => "determinant 1",
        };
        Err(NumericError::Group {
            law: law.as_str(),
            need,
            matrix: g.to_string(),
        })
    }
}

fn series_for(law: TransformLaw, order: u32) -> Result<Vec<GradedSeries>, NumericError> {
    Ok(match law {
        TransformLaw::E2 => vec![GradedSeries::ungraded(catalog::eisenstein_level1(
            2, order,
        )?)],
        TransformLaw::Ecal2 => vec![GradedSeries::ungraded(catalog::eisenstein_level2(
            2, order,
        )?)],
        TransformLaw::Y | TransformLaw::YLiteral => {
            vec![GradedSeries::new(1, catalog::eisenstein_level2(2, order)?)]
        }
        TransformLaw::U => (1..=3)
            .map(|i| catalog::gdh_u(i, order, GdhMode::Schwarz))
            .collect::<Result<_, _>>()?,
    })
}

/// Series order for evaluating the law's series down to `min_im`.
fn law_order(law: TransformLaw, min_im: f64) -> Result<u32, NumericError> {
    if law != TransformLaw::U {
        return Ok(order_for(min_im, MIN_ORDER));
    }
    let room = min_im - U_POLE_IM;
    if room < U_MARGIN {
        return Err(NumericError::Domain(format!(
            "u_transform evaluates the u series at Im = {min_im}, below their convergence bound {}",
            U_POLE_IM + U_MARGIN
        )));
    }
    Ok(order_for(room, MIN_ORDER))
}

/// `|LHS - RHS|` of a transformation law at `z`. For the ODE laws this is
/// the largest equation residual of the transformed solution, with its
/// derivatives propagated analytically through the Moebius map.
pub fn transform_residual(law: TransformLaw, g: &Matrix2, z: C) -> Result<f64, NumericError> {
    group_check(law, g)?;
    check_half_plane(z)?;
    let w = g.apply(z);
    check_half_plane(w)?;
    let series = series_for(law, law_order(law, z.im.min(w.im))?)?;
    residual_with(law, g, z, &series)
}

fn residual_with(
    law: TransformLaw,
    g: &Matrix2,
    z: C,
    series: &[GradedSeries],
) -> Result<f64, NumericError> {
    let j = g.factor(z);
    match law {
        TransformLaw::E2 | TransformLaw::Ecal2 => {
            let k = if law == TransformLaw::E2 { 6.0 } else { 2.0 };
            let lhs = eval_series(&series[0], g.apply(z))?.value;
            let rhs = j * j * eval_series(&series[0], z)?.value + k / LAMBDA * g.c * j;
            Ok((lhs - rhs).norm())
        }
        TransformLaw::Y | TransformLaw::YLiteral => {
            let k = if law == TransformLaw::Y { 2.0 } else { 1.0 };
            let yt = transformed(&series[0], g, z, -k, 4)?;
            let d = yt.derivatives();
            let (y, y1, y2, y3) = (d[0], d[1], d[2], d[3]);
            let rhs = 2.0 * y * y2 - y1 * y1 + 2.0 * (y2 - y * y1).powi(2) / (2.0 * y1 - y * y);
            Ok((y3 - rhs).norm())
        }
        TransformLaw::U => {
            let u: Vec<Jet> = series
                .iter()
                .map(|s| transformed(s, g, z, 1.0, 2))
                .collect::<Result<_, _>>()?;
            let field = OdeField::level2(OdeKind::Gdh);
            let rhs = field.rhs(&[u[0].value(), u[1].value(), u[2].value()])?;
            Ok((0..3)
                .map(|i| (u[i].derivative(1) - rhs[i]).norm())
                .fold(0.0, f64::max))
        }
    }
}

/// Jet at `z` of `f(gz)/J^2 + k c/J`.
fn transformed(
    f: &GradedSeries,
    g: &Matrix2,
    z: C,
    k: f64,
    len: usize,
) -> Result<Jet, NumericError> {
    let var = Jet::variable(z, len);
    let cst = |v: C| Jet::constant(v, len);
    let jz = cst(g.c) * var.clone() + cst(g.d);
    let wz = (cst(g.a) * var + cst(g.b)) / jz.clone();
    let fw = series_jet(f, wz.value(), len)?.compose(&wz);
    Ok(fw / (jz.clone() * jz.clone()) + cst(g.c * k) / jz)
}

/// Residuals for a batch of matrices, sharing one set of series.
pub fn transform_residuals(
    law: TransformLaw,
    gs: &[Matrix2],
    z: C,
) -> Result<Vec<f64>, NumericError> {
    check_half_plane(z)?;
    let mut min_im = z.im;
    for g in gs {
        group_check(law, g)?;
        let w = g.apply(z);
        check_half_plane(w)?;
        min_im = min_im.min(w.im);
    }
    let series = series_for(law, law_order(law, min_im)?)?;
    gs.iter()
        .map(|g| residual_with(law, g, z, &series))
        .collect()
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Random element of SL2(Z) with entries bounded by `bound`; with
/// `level2`, the lower-left entry is even.
pub fn random_sl2z<R: Rng>(rng: &mut R, bound: i64, level2: bool) -> Matrix2 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(-bound..=bound);
        if (level2 && c % 2 != 0) || (c == 0 && d == 0) {
            continue;
        }
        let (g, x, y) = egcd(d, c);
        if g != 1 {
            continue;
        }
        // a d - b c = 1 with a = x, b = -y; shift by multiples of (c, d)
        let (mut a, mut b) = (x, -y);
        let t = rng.gen_range(-3i64..=3);
        a += t * c;
        b += t * d;
        if a.abs() <= bound && b.abs() <= bound {
            return Matrix2::integer(a, b, c, d).expect("determinant 1");
        }
    }
}

/// Random complex matrix of determinant 1 that keeps `z` well inside the
/// upper half-plane (imaginary part of the image at least `min_im`).
pub fn random_complex<R: Rng>(rng: &mut R, z: C, min_im: f64) -> Matrix2 {
    let mut r = |s: f64| C::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
    loop {
        let a = C::new(1.0, 0.0) + r(0.5);
        let (b, c) = (r(0.5), r(0.5));
        let d = (1.0 + b * c) / a;
        let m = Matrix2 { a, b, c, d };
        if a.norm() > 0.3 && m.factor(z).norm() > 0.3 && m.apply(z).im >= min_im {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn i() -> C {
        C::new(0.0, 1.0)
    }

    #[test]
    fn group_predicates() {
        let t = Matrix2::integer(1, 1, 0, 1).unwrap();
        assert!(t.is_sl2z() && t.is_gamma0_2());
        let s = Matrix2::integer(0, -1, 1, 0).unwrap();
        assert!(s.is_sl2z() && !s.is_gamma0_2());
        let m = Matrix2::integer(2, 0, 0, 1).unwrap();
        assert!(!m.is_sl2z());
        assert!(Matrix2::integer(1, 2, 2, 4).is_err());
    }

    #[test]
    fn translation_is_a_symmetry() {
        let t = Matrix2::integer(1, 1, 0, 1).unwrap();
        let r = transform_residual(TransformLaw::E2, &t, C::new(0.2, 0.7)).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn ecal2_law_example() {
        let g = Matrix2::integer(1, 0, 2, 1).unwrap();
        let r = transform_residual(TransformLaw::Ecal2, &g, i()).unwrap();
        assert!(r <= 1e-9, "{r}");
    }

    #[test]
    fn wrong_group_is_rejected() {
        let s = Matrix2::integer(0, -1, 1, 0).unwrap();
        assert!(matches!(
            transform_residual(TransformLaw::Ecal2, &s, i()),
            Err(NumericError::Group { .. })
        ));
        // the inversion is fine for the level-1 law
        let r = transform_residual(TransformLaw::E2, &s, i()).unwrap();
        assert!(r < 1e-9);
    }

    #[test]
    fn random_matrices_are_in_their_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_sl2z(&mut rng, 10, false);
            assert!(g.is_sl2z());
            assert!([g.a, g.b, g.c, g.d].iter().all(|x| x.re.abs() <= 10.0));
            assert!(random_sl2z(&mut rng, 10, true).is_gamma0_2());
            let m = random_complex(&mut rng, C::new(0.0, 1.1), 0.3);
            assert!((m.det() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn y_transform_corrected_and_literal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = C::new(0.0, 1.1);
        let g = random_complex(&mut rng, z, 0.4);
        let r = transform_residual(TransformLaw::Y, &g, z).unwrap();
        assert!(r <= 1e-7, "{r}");
        let lit = transform_residual(TransformLaw::YLiteral, &g, z).unwrap();
        assert!(lit > 1e-3, "{lit}");
        // the identity matrix leaves y alone
        let id = Matrix2::integer(1, 0, 0, 1).unwrap();
        assert!(transform_residual(TransformLaw::Y, &id, z).unwrap() < 1e-9);
    }

    #[test]
    fn u_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let z = C::new(0.0, 1.1);
        for _ in 0..20 {
            let g = random_complex(&mut rng, z, U_POLE_IM + 0.25);
            let r = transform_residual(TransformLaw::U, &g, z).unwrap();
            assert!(r <= 1e-7, "{g}: {r}");
        }
    }

    #[test]
    fn u_series_stop_at_their_poles() {
        // (1+i)/2 is an elliptic point; the image of 1.1i lands just below it
        let z = C::new(0.0, 1.1);
        let g = Matrix2::new(
            C::new(1.0, 0.0),
            C::new(0.0, 0.0),
            C::new(0.0, -1.1),
            C::new(1.0, 0.0),
        )
        .unwrap();
        assert!(g.apply(z).im < U_POLE_IM + U_MARGIN);
        assert!(matches!(
            transform_residual(TransformLaw::U, &g, z),
            Err(NumericError::Domain(_))
        ));
        // the holomorphic laws still accept it
        assert!(transform_residual(TransformLaw::Y, &g, z).unwrap() < 1e-7);
    }

    #[test]
    fn law_names_parse() {
        for l in TransformLaw::ALL {
            assert_eq!(l.as_str().parse::<TransformLaw>().unwrap(), l);
        }
        assert_eq!(
            "Ecal2".parse::<TransformLaw>().unwrap(),
            TransformLaw::Ecal2
        );
        assert_eq!("y".parse::<TransformLaw>().unwrap(), TransformLaw::Y);
        assert!("nope".parse::<TransformLaw>().is_err());
    }
}
