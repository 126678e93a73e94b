use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::eval::check_half_plane;
use super::jet::{Jet, Scalar};
use super::NumericError;

/// Guard for the movable denominator `2y' - y^2` of the third-order
/// `Ecal2` equation, relative to `1 + |y|^2`.
pub const EQ18_GUARD: f64 = 1e-8;
/// Guard for `s`, `s - 1` and `s'` in the Schwarzian equation.
pub const SCHWARZ_GUARD: f64 = 1e-12;
/// Smallest step, as a fraction of the path, before giving up.
pub const MIN_STEP: f64 = 1e-12;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OdeKind {
    /// `y''' = 2 y y'' - 3 y'^2`
    Chazy,
    /// Third-order equation solved by `pi i Ecal2`.
    Eq18,
    /// Halphen system in sum form: `u1' + u2' = u1 u2` and cyclic.
    Dh,
    /// Generalized Halphen system with the quadratic `tau^2` term.
    Gdh,
    /// Schwarzian equation for a triangle function with potential `V(s)`.
    Schwarzian,
}

impl OdeKind {
    pub const ALL: [OdeKind; 5] = [
        OdeKind::Chazy,
        OdeKind::Eq18,
        OdeKind::Dh,
        OdeKind::Gdh,
        OdeKind::Schwarzian,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OdeKind::Chazy => "chazy",
            OdeKind::Eq18 => "eq18",
            OdeKind::Dh => "dh",
            OdeKind::Gdh => "gdh",
            OdeKind::Schwarzian => "schwarzian",
        }
    }

    fn has_params(self) -> bool {
        matches!(self, OdeKind::Gdh | OdeKind::Schwarzian)
    }
}

impl fmt::Display for OdeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OdeKind {
    type Err = NumericError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OdeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| NumericError::Parameter(format!("unknown ODE kind `{s}`")))
    }
}

/// A first-order system on `C^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeField {
    pub kind: OdeKind,
    /// `(alpha, beta, gamma)`; zero for kinds without parameters.
    pub params: [C; 3],
}

impl OdeField {
    pub const DIMENSION: usize = 3;

    /// The level-2 triangle parameters `(1/2, 0, 0)`.
    pub fn level2(kind: OdeKind) -> Self {
        make_field(kind, [C::new(0.5, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)])
    }

    /// Right-hand side on plain values or on Taylor jets. Guards look only
    /// at the values.
    pub fn rhs<T: Scalar>(&self, y: &[T; 3]) -> Result<[T; 3], NumericError> {
        let k = |c: f64| T::lift(C::new(c, 0.0), &y[0]);
        let [a, b, c] = y.clone();
        Ok(match self.kind {
            OdeKind::Chazy => {
                let third = k(2.0) * a.clone() * c.clone() - k(3.0) * b.clone() * b.clone();
                [b, c, third]
            }
            OdeKind::Eq18 => {
                let den = k(2.0) * b.clone() - a.clone() * a.clone();
                let scale = 1.0 + a.value().norm_sqr();
                if den.value().norm() < EQ18_GUARD * scale {
                    return Err(NumericError::Singular {
                        what: "2y' - y^2",
                        magnitude: den.value().norm(),
                    });
                }
                let num = c.clone() - a.clone() * b.clone();
                let third = k(2.0) * a.clone() * c.clone() - b.clone() * b.clone()
                    + k(2.0) * num.clone() * num / den;
                [b, c, third]
            }
            OdeKind::Dh => {
                let half = k(0.5);
                let (p12, p23, p31) = (
                    a.clone() * b.clone(),
                    b.clone() * c.clone(),
                    c.clone() * a.clone(),
                );
                [
                    half.clone() * (p12.clone() + p31.clone() - p23.clone()),
                    half.clone() * (p12.clone() + p23.clone() - p31.clone()),
                    half * (p23 + p31 - p12),
                ]
            }
            OdeKind::Gdh => {
                let [al, be, ga] = self.params;
                let sq = |v: C| T::lift(v * v, &y[0]);
                let tau2 = sq(al) * (a.clone() - b.clone()) * (b.clone() - c.clone())
                    + sq(be) * (b.clone() - a.clone()) * (a.clone() - c.clone())
                    + sq(ga) * (c.clone() - a.clone()) * (b.clone() - c.clone());
                [
                    b.clone() * c.clone() - a.clone() * (b.clone() + c.clone()) + tau2.clone(),
                    c.clone() * a.clone() - b.clone() * (c.clone() + a.clone()) + tau2.clone(),
                    a.clone() * b.clone() - c.clone() * (a.clone() + b.clone()) + tau2,
                ]
            }
            OdeKind::Schwarzian => {
                for (what, v) in [
                    ("s", a.value()),
                    ("s - 1", a.value() - 1.0),
                    ("s'", b.value()),
                ] {
                    if v.norm() < SCHWARZ_GUARD {
                        return Err(NumericError::Singular {
                            what,
                            magnitude: v.norm(),
                        });
                    }
                }
                let v = potential(self.params, &a);
                let third = k(1.5) * c.clone() * c.clone() / b.clone()
                    - k(0.5) * b.clone() * b.clone() * b.clone() * v;
                [b, c, third]
            }
        })
    }
}

pub fn make_field(kind: OdeKind, params: [C; 3]) -> OdeField {
    OdeField {
        kind,
        params: if kind.has_params() {
            params
        } else {
            [C::new(0.0, 0.0); 3]
        },
    }
}

/// Pointwise right-hand side.
pub fn field_rhs(field: &OdeField, state: &[C; 3]) -> Result<[C; 3], NumericError> {
    field.rhs(state)
}

/// Triangle potential `V(s)` for parameters `(alpha, beta, gamma)`.
pub fn potential<T: Scalar>(params: [C; 3], s: &T) -> T {
    let [al, be, ga] = params;
    let one = C::new(1.0, 0.0);
    let k = |c: C| T::lift(c, s);
    let s1 = s.clone() - k(one);
    k(one - al * al) / (s.clone() * s.clone())
        + k(one - be * be) / (s1.clone() * s1.clone())
        + k(al * al + be * be - ga * ga - one) / (s.clone() * s1)
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub state: Vec<C>,
    pub accepted: usize,
    pub rejected: usize,
}

// Dormand-Prince 5(4) tableau
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand-Prince step of size `h` (in path units). Returns the
/// fifth-order solution and the embedded error estimate.
fn dp_step<F>(f: &F, y: &[C], k1: &[C], h: f64) -> Result<(Vec<C>, Vec<C>, Vec<C>), NumericError>
where
    F: Fn(&[C]) -> Result<Vec<C>, NumericError>,
{
    let n = y.len();
    let mut ks: Vec<Vec<C>> = vec![k1.to_vec()];
    for row in A.iter() {
        let stage: Vec<C> = (0..n)
            .map(|i| y[i] + row.iter().zip(&ks).map(|(a, k)| k[i] * (a * h)).sum::<C>())
            .collect();
        ks.push(f(&stage)?);
    }
    // the last stage is evaluated at the fifth-order solution (FSAL)
    let y5: Vec<C> = (0..n)
        .map(|i| y[i] + A[5].iter().zip(&ks).map(|(a, k)| k[i] * (a * h)).sum::<C>())
        .collect();
    let err: Vec<C> = (0..n)
        .map(|i| E.iter().zip(&ks).map(|(e, k)| k[i] * (e * h)).sum::<C>())
        .collect();
    let k7 = ks.pop().expect("seven stages");
    Ok((y5, err, k7))
}

/// Adaptive Dormand-Prince integration of the autonomous system `w' = g(w)`
/// along the segment `z0 -> z1`. `g` is supplied as a function of the state.
/// Steps are accepted when the error estimate per unit of path, scaled by
/// `1 + |w|`, is at most `tol`; a step whose stages trip a guard is retried
/// with a smaller step.
pub fn integrate<G>(g: G, y0: &[C], z0: C, z1: C, tol: f64) -> Result<Integration, NumericError>
where
    G: Fn(&[C]) -> Result<Vec<C>, NumericError>,
{
    if !(tol > 0.0) {
        return Err(NumericError::Parameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let dz = z1 - z0;
    let f = |w: &[C]| g(w).map(|v| v.into_iter().map(|x| x * dz).collect::<Vec<_>>());
    let mut y = y0.to_vec();
    let mut k1 = f(&y)?;
    let (mut t, mut h) = (0.0f64, 0.05f64);
    let (mut accepted, mut rejected) = (0usize, 0usize);
    while t < 1.0 {
        if h < MIN_STEP {
            return Err(NumericError::StepUnderflow {
                at: z0 + dz * t,
                step: h,
            });
        }
        h = h.min(1.0 - t);
        match dp_step(&f, &y, &k1, h) {
            Ok((y5, err, k7)) => {
                let norm = err
                    .iter()
                    .zip(y.iter().zip(&y5))
                    .map(|(e, (a, b))| e.norm() / (1.0 + a.norm().max(b.norm())))
                    .fold(0.0, f64::max)
                    / h;
                if norm <= tol && y5.iter().all(|v| v.is_finite()) {
                    t += h;
                    y = y5;
                    k1 = k7;
                    accepted += 1;
                } else {
                    rejected += 1;
                }
                let factor = if norm == 0.0 {
                    5.0
                } else if !norm.is_finite() {
                    0.2
                } else {
                    0.9 * (tol / norm).powf(0.25)
                };
                h *= factor.clamp(0.2, 5.0);
            }
            Err(NumericError::Singular { .. }) => {
                rejected += 1;
                h *= 0.25;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Integration {
        state: y,
        accepted,
        rejected,
    })
}

/// Fixed-step fifth-order integration with `steps` equal steps.
pub fn integrate_fixed<G>(
    g: G,
    y0: &[C],
    z0: C,
    z1: C,
    steps: usize,
) -> Result<Vec<C>, NumericError>
where
    G: Fn(&[C]) -> Result<Vec<C>, NumericError>,
{
    let dz = z1 - z0;
    let f = |w: &[C]| g(w).map(|v| v.into_iter().map(|x| x * dz).collect::<Vec<_>>());
    let h = 1.0 / steps.max(1) as f64;
    let mut y = y0.to_vec();
    for _ in 0..steps.max(1) {
        let k1 = f(&y)?;
        y = dp_step(&f, &y, &k1, h)?.0;
    }
    Ok(y)
}

/// Integrates `field` from `state0` at `z0` to `z1` along the straight path.
pub fn rk_integrate(
    field: &OdeField,
    state0: [C; 3],
    z0: C,
    z1: C,
    tol: f64,
) -> Result<[C; 3], NumericError> {
    check_half_plane(z0)?;
    check_half_plane(z1)?;
    field.rhs(&state0)?;
    let out = integrate(
        |w| field.rhs(&[w[0], w[1], w[2]]).map(|r| r.to_vec()),
        &state0,
        z0,
        z1,
        tol,
    )?;
    Ok([out.state[0], out.state[1], out.state[2]])
}

/// Taylor expansion of the solution through `state` with `len`
/// coefficients, by repeatedly feeding the jet through the field.
pub fn solution_jet(field: &OdeField, state: [C; 3], len: usize) -> Result<[Jet; 3], NumericError> {
    let mut coeffs: [Vec<C>; 3] = [vec![state[0]], vec![state[1]], vec![state[2]]];
    for k in 1..len.max(1) {
        let jets = coeffs.clone().map(Jet::new);
        let d = field.rhs(&jets)?;
        for (c, dj) in coeffs.iter_mut().zip(&d) {
            c.push(dj.coeffs()[k - 1] / k as f64);
        }
    }
    Ok(coeffs.map(Jet::new))
}
