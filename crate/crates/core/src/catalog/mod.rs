//! Named q-series, most with two or three independent constructions.
//!
//! Every constructor takes an order `N` in integral powers of `q` and returns a
//! series known exactly up to (not including) `q^N`, i.e. precision `24 N`.

mod arith;
mod eisenstein;
mod halphen;
mod modular;
mod theta;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::series::{GradedSeries, LaurentSeries, SeriesError, UNITS_PER_Q};

pub use arith::{bernoulli, sigma};
pub use eisenstein::{e_tilde_2, eisenstein_level1, eisenstein_level2, ETildeMode};
pub use halphen::{dh_u, gdh_u, GdhMode};
pub use modular::{d_cal, delta_fn, j2_fn, j_fn, s_fn, DeltaMode, SMode};
pub use theta::{eta, lambda_fn, theta};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("weight {0} is not an even integer >= 2")]
    InvalidWeight(i64),
    #[error("index {0} is out of range")]
    InvalidIndex(u32),
    #[error("unknown form `{0}`")]
    UnknownName(String),
    #[error("form `{name}` has no construction `{mode}`")]
    UnknownMode { name: String, mode: String },
    #[error("could not reach precision {required}/24 (got {available}/24)")]
    PrecisionNotReached { required: i64, available: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Group {
    #[serde(rename = "SL2Z")]
    Sl2z,
    #[serde(rename = "Gamma0_2")]
    Gamma0Of2,
    #[serde(rename = "Gamma_2")]
    GammaOf2,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Sl2z => "SL2Z",
            Group::Gamma0Of2 => "Gamma0_2",
            Group::GammaOf2 => "Gamma_2",
        })
    }
}

/// Descriptive metadata for a catalog entry. Nothing in the crate computes
/// with `weight` or `group`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FormDescriptor {
    pub name: &'static str,
    pub weight: &'static str,
    pub group: Group,
    pub constructions: &'static [&'static str],
    pub summary: &'static str,
}

macro_rules! form {
    ($name:literal, $w:literal, $g:ident, [$($c:literal),*], $s:literal) => {
        FormDescriptor {
            name: $name,
            weight: $w,
            group: Group::$g,
            constructions: &[$($c),*],
            summary: $s,
        }
    };
}

static FORMS: &[FormDescriptor] = &[
    form!(
        "E2",
        "quasi-2",
        Sl2z,
        ["divisor_sum"],
        "1 - 24 sum sigma_1(n) q^n"
    ),
    form!(
        "E4",
        "4",
        Sl2z,
        ["divisor_sum"],
        "1 + 240 sum sigma_3(n) q^n"
    ),
    form!(
        "E6",
        "6",
        Sl2z,
        ["divisor_sum"],
        "1 - 504 sum sigma_5(n) q^n"
    ),
    form!(
        "E8",
        "8",
        Sl2z,
        ["divisor_sum", "e4_squared"],
        "1 + 480 sum sigma_7(n) q^n"
    ),
    form!("P", "quasi-2", Sl2z, ["divisor_sum"], "same series as E2"),
    form!("Q", "4", Sl2z, ["divisor_sum"], "same series as E4"),
    form!("R", "6", Sl2z, ["divisor_sum"], "same series as E6"),
    form!(
        "Ecal2",
        "quasi-2",
        Gamma0Of2,
        ["lambert", "level1_combination"],
        "level-2 Eisenstein series of weight 2"
    ),
    form!(
        "Ecal4",
        "4",
        Gamma0Of2,
        ["lambert"],
        "level-2 Eisenstein series of weight 4"
    ),
    form!(
        "Et2",
        "2",
        Gamma0Of2,
        ["lambert", "odd_divisor", "level1_combination"],
        "1 + 24 sum n q^n/(1+q^n)"
    ),
    form!(
        "Pcal",
        "quasi-2",
        Gamma0Of2,
        ["lambert"],
        "same series as Ecal2"
    ),
    form!("Ptilde", "2", Gamma0Of2, ["lambert"], "same series as Et2"),
    form!("Qcal", "4", Gamma0Of2, ["lambert"], "same series as Ecal4"),
    form!(
        "Delta",
        "12",
        Sl2z,
        ["product", "eisenstein"],
        "q prod (1-q^n)^24"
    ),
    form!("Dcal", "4", Gamma0Of2, ["eisenstein"], "(Et2^2 - Ecal4)/64"),
    form!("j", "0", Sl2z, ["eisenstein"], "E4^3/Delta"),
    form!("j2", "0", Gamma0Of2, ["eisenstein"], "Et2^2/Dcal"),
    form!("theta2", "1/2", GammaOf2, ["sum"], "sum q^((n+1/2)^2/2)"),
    form!("theta3", "1/2", GammaOf2, ["sum"], "sum q^(n^2/2)"),
    form!("theta4", "1/2", GammaOf2, ["sum"], "sum (-1)^n q^(n^2/2)"),
    form!("eta", "1/2", Sl2z, ["product"], "q^(1/24) prod (1-q^n)"),
    form!("lambda", "0", GammaOf2, ["theta"], "theta2^4/theta3^4"),
    form!(
        "s",
        "0",
        Gamma0Of2,
        ["j2_quarter", "delta_quotient", "theta_quotient"],
        "j2/64"
    ),
    form!(
        "u1",
        "quasi-2",
        Gamma0Of2,
        ["schwarz", "theta"],
        "generalized Halphen variable"
    ),
    form!(
        "u2",
        "quasi-2",
        Gamma0Of2,
        ["schwarz", "theta"],
        "generalized Halphen variable"
    ),
    form!(
        "u3",
        "quasi-2",
        Gamma0Of2,
        ["schwarz", "theta"],
        "generalized Halphen variable"
    ),
    form!(
        "v1",
        "quasi-2",
        GammaOf2,
        ["theta"],
        "Halphen variable (log theta4)'"
    ),
    form!(
        "v2",
        "quasi-2",
        GammaOf2,
        ["theta"],
        "Halphen variable (log theta2)'"
    ),
    form!(
        "v3",
        "quasi-2",
        GammaOf2,
        ["theta"],
        "Halphen variable (log theta3)'"
    ),
];

/// All catalog entries, in listing order.
pub fn descriptors() -> &'static [FormDescriptor] {
    FORMS
}

pub fn descriptor(name: &str) -> Option<&'static FormDescriptor> {
    FORMS.iter().find(|d| d.name == name)
}

/// Builds the named form at order `order`. `mode` selects a construction;
/// `None` takes the first one listed for the form.
pub fn build(name: &str, order: u32, mode: Option<&str>) -> Result<GradedSeries, CatalogError> {
    let desc = descriptor(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let mode = match mode {
        None => desc.constructions[0],
        Some(m) => *desc
            .constructions
            .iter()
            .find(|c| **c == m)
            .ok_or_else(|| CatalogError::UnknownMode {
                name: name.to_string(),
                mode: m.to_string(),
            })?,
    };
    let plain = |s: LaurentSeries| Ok(GradedSeries::ungraded(s));
    let index = || {
        name.chars()
            .last()
            .and_then(|c| c.to_digit(10))
            .unwrap_or(0)
    };
    match name {
        "E2" | "P" => plain(eisenstein_level1(2, order)?),
        "E4" | "Q" => plain(eisenstein_level1(4, order)?),
        "E6" | "R" => plain(eisenstein_level1(6, order)?),
        "E8" if mode == "e4_squared" => plain(eisenstein_level1(4, order)?.pow(2)?),
        "E8" => plain(eisenstein_level1(8, order)?),
        "Ecal2" if mode == "level1_combination" => {
            // 4/3 E2(2z) - 1/3 E2(z)
            let e2 = eisenstein_level1(2, order)?;
            let third = crate::series::Rational::new(1.into(), 3.into());
            let four_thirds = crate::series::Rational::new(4.into(), 3.into());
            let s = e2.scale_arg(2).scale(&four_thirds).sub(&e2.scale(&third));
            plain(s.truncate(order as i64 * UNITS_PER_Q))
        }
        "Ecal2" | "Pcal" => plain(eisenstein_level2(2, order)?),
        "Ecal4" | "Qcal" => plain(eisenstein_level2(4, order)?),
        "Et2" | "Ptilde" => plain(e_tilde_2(order, mode.parse()?)),
        "Delta" => plain(delta_fn(order, mode.parse()?)?),
        "Dcal" => plain(d_cal(order)?),
        "j" => plain(j_fn(order)?),
        "j2" => plain(j2_fn(order)?),
        "theta2" | "theta3" | "theta4" => plain(theta(index(), order)?),
        "eta" => plain(eta(order)),
        "lambda" => plain(lambda_fn(order)?),
        "s" => plain(s_fn(order, mode.parse()?)?),
        "u1" | "u2" | "u3" => gdh_u(index(), order, mode.parse()?),
        "v1" | "v2" | "v3" => dh_u(index(), order),
        _ => Err(CatalogError::UnknownName(name.to_string())),
    }
}

fn unknown_mode(kind: &str, mode: &str) -> CatalogError {
    CatalogError::UnknownMode {
        name: kind.to_string(),
        mode: mode.to_string(),
    }
}

macro_rules! mode_enum {
    ($ty:ident, $kind:literal, { $($var:ident => $s:literal),* $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $ty { $($var),* }

        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$var),*];

            pub fn as_str(self) -> &'static str {
                match self { $($ty::$var => $s),* }
            }
        }

        impl std::str::FromStr for $ty {
            type Err = crate::catalog::CatalogError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($s => Ok($ty::$var),)*
                    _ => Err(crate::catalog::unknown_mode($kind, s)),
                }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}
pub(crate) use mode_enum;

/// Calls `build` at increasing internal orders until the result is known to
/// `24 * order`, then cuts it there. Divisions lose a little precision, so the
/// intermediate series are computed with some headroom.
pub(crate) fn at_order<F>(order: u32, build: F) -> Result<LaurentSeries, CatalogError>
where
    F: Fn(u32) -> Result<LaurentSeries, SeriesError>,
{
    let target = order as i64 * UNITS_PER_Q;
    let mut extra = 2u32;
    loop {
        let s = build(order + extra)?;
        if s.precision() >= target {
            return Ok(s.truncate(target));
        }
        if extra >= 128 {
            return Err(CatalogError::PrecisionNotReached {
                required: target,
                available: s.precision(),
            });
        }
        extra *= 4;
    }
}

impl FromStr for Group {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "SL2Z" => Ok(Group::Sl2z),
            "Gamma0_2" => Ok(Group::Gamma0Of2),
            "Gamma_2" => Ok(Group::GammaOf2),
            _ => Err(unknown_mode("group", s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_descriptor_builds_with_every_construction() {
        for d in descriptors() {
            for c in d.constructions {
                let s = build(d.name, 6, Some(c)).unwrap_or_else(|e| panic!("{} {c}: {e}", d.name));
                assert_eq!(s.precision(), 6 * 24, "{} {c}", d.name);
            }
        }
    }

    #[test]
    fn constructions_agree_pairwise() {
        for d in descriptors() {
            let first = build(d.name, 12, None).unwrap();
            for c in &d.constructions[1..] {
                let other = build(d.name, 12, Some(c)).unwrap();
                assert_eq!(first, other, "{} vs {c}", d.name);
            }
        }
    }

    #[test]
    fn unknown_names_and_modes() {
        assert!(matches!(
            build("E3", 4, None),
            Err(CatalogError::UnknownName(_))
        ));
        assert!(matches!(
            build("E4", 4, Some("product")),
            Err(CatalogError::UnknownMode { .. })
        ));
    }

    #[test]
    fn graded_entries() {
        assert_eq!(build("u2", 4, None).unwrap().lambda_degree, 1);
        assert_eq!(build("v1", 4, None).unwrap().lambda_degree, 1);
        assert_eq!(build("j", 4, None).unwrap().lambda_degree, 0);
    }
}
