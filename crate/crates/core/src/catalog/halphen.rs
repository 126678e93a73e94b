use super::modular::{s_fn, SMode};
use super::theta::theta;
use super::{at_order, mode_enum, CatalogError};
use crate::series::{GradedSeries, LaurentSeries, Rational, SeriesError};

mode_enum!(GdhMode, "u", {
    Schwarz => "schwarz",
    Theta => "theta",
});

fn theta4(i: u32, m: u32) -> Result<LaurentSeries, SeriesError> {
    theta(i, m).expect("valid index").pow(4)
}

/// Body of the generalized Halphen variable `u_i` (lambda-degree 1).
fn gdh_body(i: u32, m: u32, mode: GdhMode) -> Result<LaurentSeries, SeriesError> {
    let neg = |s: LaurentSeries| s.neg();
    match mode {
        GdhMode::Schwarz => {
            // u = -1/2 (log(s'/g(s)))' with g = s, s - 1, s(s - 1); the
            // factor 2 pi i of each derivative turns -1/2 into -lambda.
            let s = s_fn(m, SMode::DeltaQuotient).map_err(into_series)?;
            let ds_log = s.delta().dlog()?;
            let s1 = s.sub(&LaurentSeries::one());
            let body = match i {
                1 => ds_log.sub(&s.dlog()?),
                2 => ds_log.sub(&s1.dlog()?),
                _ => ds_log.sub(&s.dlog()?).sub(&s1.dlog()?),
            };
            Ok(neg(body))
        }
        GdhMode::Theta => {
            let t3 = theta4(3, m)?;
            let t4 = theta4(4, m)?;
            let sum = t3.add(&t4);
            let body = match i {
                1 => t3.dlog()?.add(&t4.dlog()?).sub(&sum.dlog()?),
                2 => sum.dlog()?,
                _ => theta4(2, m)?.pow(2)?.dlog()?.sub(&sum.dlog()?),
            };
            Ok(neg(body))
        }
    }
}

/// Generalized Halphen variable `u_i`, `i` in {1, 2, 3}, as `lambda * body`.
pub fn gdh_u(i: u32, order: u32, mode: GdhMode) -> Result<GradedSeries, CatalogError> {
    if !(1..=3).contains(&i) {
        return Err(CatalogError::InvalidIndex(i));
    }
    let body = at_order(order, |m| gdh_body(i, m, mode))?;
    Ok(GradedSeries::new(1, body))
}

/// Classical Halphen variable: `4 (log theta_4)'`, `4 (log theta_2)'`,
/// `4 (log theta_3)'` for `i` = 1, 2, 3. With `q = exp(2 pi i z)` the factor 4
/// is what makes `u1' + u2' = u1 u2` hold and the sum equal `pi i E2`.
pub fn dh_u(i: u32, order: u32) -> Result<GradedSeries, CatalogError> {
    let which = match i {
        1 => 4,
        2 => 2,
        3 => 3,
        _ => return Err(CatalogError::InvalidIndex(i)),
    };
    let body = at_order(order, |m| {
        Ok(theta(which, m)
            .expect("valid index")
            .dlog()?
            .scale(&Rational::from_integer(8.into())))
    })?;
    Ok(GradedSeries::new(1, body))
}

fn into_series(e: CatalogError) -> SeriesError {
    match e {
        CatalogError::Series(s) => s,
        other => unreachable!("catalog constructor failed: {other}"),
    }
}
