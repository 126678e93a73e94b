use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::eval::{series_jet, LAMBDA};
use super::jet::Jet;
use super::NumericError;
use crate::dsl::{Environment, Expr, ExprKind, Func};
use crate::identity::Identity;

type C = Complex64;

/// Evaluates an expression numerically as a Taylor jet in `z` with `len`
/// coefficients. Names are evaluated from their series; `delta`, `dz` and
/// `dlog` differentiate the jet, `scale2` re-expands around `2z`.
pub fn eval_jet(e: &Expr, env: &Environment, z: C, len: usize) -> Result<Jet, NumericError> {
    let go = |x: &Expr, len| eval_jet(x, env, z, len);
    Ok(match &e.kind {
        ExprKind::Int(n) => {
            Jet::constant(C::new(n.to_f64().ok_or(NumericError::Overflow)?, 0.0), len)
        }
        ExprKind::Name(name) => match env.get(name) {
            Some(v) => series_jet(v?, z, len)?,
            None => return Err(NumericError::Parameter(format!("unbound name `{name}`"))),
        },
        ExprKind::Add(a, b) => go(a, len)? + go(b, len)?,
        ExprKind::Sub(a, b) => go(a, len)? - go(b, len)?,
        ExprKind::Mul(a, b) => go(a, len)? * go(b, len)?,
        ExprKind::Div(a, b) => go(a, len)? / go(b, len)?,
        ExprKind::Pow(a, k) => go(a, len)?.powi(*k),
        ExprKind::Call(f, args) => {
            let a = &args[0];
            match f {
                Func::Delta => go(a, len + 1)?.deriv().scale(1.0 / (2.0 * LAMBDA)),
                Func::Dz => go(a, len + 1)?.deriv(),
                Func::Dlog => {
                    let x = go(a, len + 1)?;
                    (x.deriv() / x.truncate(len)).scale(1.0 / (2.0 * LAMBDA))
                }
                Func::Scale2 => eval_jet(a, env, 2.0 * z, len)?.dilate(2.0),
                Func::Neg => -go(a, len)?,
                Func::Lam => go(a, len)?.scale(LAMBDA),
                Func::Lam2 => go(a, len)?.scale(LAMBDA * LAMBDA),
            }
        }
    })
}

/// Numeric value of an expression at `z`.
pub fn eval_expr(e: &Expr, env: &Environment, z: C) -> Result<C, NumericError> {
    Ok(eval_jet(e, env, z, 1)?.value())
}

/// Largest relative residual `|l - r| / max(|l|, |r|)` over the
/// equations of an identity, evaluated at `z`.
pub fn identity_residual(
    identity: &Identity,
    env: &Environment,
    z: C,
) -> Result<f64, NumericError> {
    let mut worst = 0.0f64;
    for eq in &identity.equations {
        let side = |s: &str| -> Result<C, NumericError> {
            let e = crate::dsl::parse(s).map_err(|e| NumericError::Parameter(e.to_string()))?;
            eval_expr(&e, env, z)
        };
        let (l, r) = (side(&eq.lhs)?, side(&eq.rhs)?);
        let scale = l.norm().max(r.norm()).max(f64::MIN_POSITIVE);
        let res = (l - r).norm() / scale;
        worst = worst.max(if res.is_nan() { f64::INFINITY } else { res });
    }
    Ok(worst)
}
