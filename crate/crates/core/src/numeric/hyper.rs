use num_complex::Complex64;

use super::jet::Jet;
use super::ode::potential;
use super::NumericError;

type C = Complex64;

/// Largest `|s|` accepted by the hypergeometric summation.
pub const MAX_ABS_S: f64 = 0.8;
/// Sample window for the Schwarz-map check.
pub const SAMPLE_WINDOW: (f64, f64) = (0.05, 0.7);
/// Step of the finite-difference Schwarzian diagnostic.
pub const FD_STEP: f64 = 1e-3;

const REL_STOP: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

fn check_params(c: f64, s: C) -> Result<(), NumericError> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(NumericError::Domain(format!(
            "c = {c} is a nonpositive integer"
        )));
    }
    if !(s.norm() <= MAX_ABS_S) {
        return Err(NumericError::Domain(format!(
            "|s| = {} exceeds {MAX_ABS_S}",
            s.norm()
        )));
    }
    Ok(())
}

/// Gauss hypergeometric series `2F1(a, b; c; s)` by direct summation.
pub fn hyp2f1(a: f64, b: f64, c: f64, s: C) -> Result<C, NumericError> {
    Ok(hyp_jet(a, b, c, 0.0, s, 1)?.value())
}

/// Taylor expansion around `s0` of `s^offset 2F1(a, b; c; s)`, summed
/// termwise: each `s^(k + offset)` contributes its own derivatives.
pub fn hyp_jet(
    a: f64,
    b: f64,
    c: f64,
    offset: f64,
    s0: C,
    len: usize,
) -> Result<Jet, NumericError> {
    check_params(c, s0)?;
    if offset != 0.0 && s0.norm() == 0.0 {
        return Err(NumericError::Domain("fractional power at s = 0".into()));
    }
    let mut out = vec![C::new(0.0, 0.0); len];
    let mut t = 1.0f64;
    for k in 0..MAX_TERMS {
        let p = k as f64 + offset;
        // falling factorial p (p-1) ... (p-j+1) / j!
        let mut binom = 1.0;
        let mut largest = 0.0f64;
        for (j, o) in out.iter_mut().enumerate() {
            if binom != 0.0 {
                let e = p - j as f64;
                let pw = if e == 0.0 {
                    C::new(1.0, 0.0)
                } else if s0.norm() == 0.0 {
                    C::new(0.0, 0.0)
                } else {
                    s0.powf(e)
                };
                let term = pw * (t * binom);
                *o += term;
                largest = largest.max(term.norm() / o.norm().max(f64::MIN_POSITIVE));
            }
            binom *= (p - j as f64) / (j + 1) as f64;
        }
        if k > 2 && largest < REL_STOP {
            return Ok(Jet::new(out));
        }
        t *= (a + k as f64) * (b + k as f64) / ((c + k as f64) * (k as f64 + 1.0));
    }
    Err(NumericError::Domain(format!(
        "2F1 did not converge at s = {s0}"
    )))
}

/// `z(s) = chi1 / chi2` for the level-2 triangle, as a jet in `s`.
fn z_of_s(s: f64, len: usize) -> Result<Jet, NumericError> {
    let s0 = C::new(s, 0.0);
    let chi1 = hyp_jet(0.25, 0.25, 0.5, 0.0, s0, len)?;
    let chi2 = hyp_jet(0.75, 0.75, 1.5, 0.5, s0, len)?;
    Ok(chi1 / chi2)
}

fn z_value(s: f64) -> Result<C, NumericError> {
    let s0 = C::new(s, 0.0);
    Ok(hyp2f1(0.25, 0.25, 0.5, s0)? / (s0.sqrt() * hyp2f1(0.75, 0.75, 1.5, s0)?))
}

fn schwarzian_of(d1: C, d2: C, d3: C) -> C {
    d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1)
}

/// `{z, s}` with derivatives from the termwise-differentiated series.
pub fn schwarzian_at(s: f64) -> Result<C, NumericError> {
    let j = z_of_s(s, 4)?;
    Ok(schwarzian_of(
        j.derivative(1),
        j.derivative(2),
        j.derivative(3),
    ))
}

/// `{z, s}` from five-point central differences with step `h`. Kept as a
/// diagnostic: near `s = 0` the high derivatives of `z ~ s^(-1/2)` make
/// the truncation error large.
pub fn schwarzian_fd(s: f64, h: f64) -> Result<C, NumericError> {
    let f = |k: f64| z_value(s + k * h);
    let (m2, m1, p1, p2) = (f(-2.0)?, f(-1.0)?, f(1.0)?, f(2.0)?);
    let z0 = f(0.0)?;
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * z0 + 16.0 * p1 - p2) / (12.0 * h * h);
    let d3 = (-m2 + 2.0 * m1 - 2.0 * p1 + p2) / (2.0 * h * h * h);
    Ok(schwarzian_of(d1, d2, d3))
}

/// `V(s) / 2` at the level-2 parameters `(1/2, 0, 0)`.
pub fn half_potential(s: f64) -> C {
    potential(
        [C::new(0.5, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        &C::new(s, 0.0),
    ) / 2.0
}

/// Maximum of `|{z, s} - V(s)/2|` over the samples.
pub fn schwarz_map_check(samples: &[f64]) -> Result<f64, NumericError> {
    let (lo, hi) = SAMPLE_WINDOW;
    let mut worst = 0.0f64;
    for &s in samples {
        if !(s > lo && s < hi) {
            return Err(NumericError::Domain(format!(
                "sample {s} outside ({lo}, {hi})"
            )));
        }
        worst = worst.max((schwarzian_at(s)? - half_potential(s)).norm());
    }
    Ok(worst)
}

/// The default sample set `0.1, 0.2, ..., 0.6`.
pub fn default_samples() -> Vec<f64> {
    (1..=6).map(|k| k as f64 / 10.0).collect()
}
