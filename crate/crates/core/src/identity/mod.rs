//! Registry of series identities, checked exactly to a requested order.
//!
//! Passing to order `N` is evidence, not proof.

mod meta;
#[cfg(test)]
mod tests;

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dsl::{self, DslError, Environment};
use crate::series::{Mismatch, UNITS_PER_Q};

pub use meta::{metadata, IdentityMeta};

/// Extra orders of `q` the shared environment is built with, so that
/// divisions and logarithmic derivatives still reach the requested order.
pub const ENV_HEADROOM: u32 = 16;

/// The shipped registry text.
pub const BUILTIN: &str = include_str!("../../data/identities.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: String,
    /// Requested order, in integral powers of `q`.
    pub order: u32,
    /// Precision the comparison actually covered, in 1/24 units.
    pub checked_to: i64,
    pub status: Status,
    pub mismatch: Option<Mismatch>,
    pub error: Option<String>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct MismatchRecord {
    pub exponent24: i64,
    pub lhs: String,
    pub rhs: String,
}

/// Wire form of a report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub id: String,
    pub order: u32,
    pub status: Status,
    pub mismatch: Option<MismatchRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub ms: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn record(&self) -> ReportRecord {
        ReportRecord {
            id: self.id.clone(),
            order: self.order,
            status: self.status,
            mismatch: self.mismatch.as_ref().map(|m| MismatchRecord {
                exponent24: m.exponent,
                lhs: m.lhs.to_string(),
                rhs: m.rhs.to_string(),
            }),
            error: self.error.clone(),
            ms: self.elapsed.as_secs_f64() * 1e3,
        }
    }

    fn error(id: &str, order: u32, msg: String, elapsed: Duration) -> Self {
        Self {
            id: id.to_string(),
            order,
            checked_to: 0,
            status: Status::Error,
            mismatch: None,
            error: Some(msg),
            elapsed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub id: String,
    pub equations: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown identity `{0}`")]
    UnknownId(String),
    #[error("registry line {line}: {message}")]
    Registry { line: usize, message: String },
}

/// Parses registry text. Ids keep their first-seen order.
pub fn parse_registry(text: &str) -> Result<Vec<Identity>, IdentityError> {
    let mut out: Vec<Identity> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: &str| IdentityError::Registry {
            line: i + 1,
            message: message.to_string(),
        };
        let (id, body) = line.split_once("::=").ok_or_else(|| bad("missing `::=`"))?;
        let (lhs, rhs) = body.split_once("==").ok_or_else(|| bad("missing `==`"))?;
        let id = id.trim();
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(bad("identity name must be alphanumeric"));
        }
        for side in [lhs, rhs] {
            dsl::parse(side).map_err(|e| bad(&e.to_string()))?;
        }
        let eq = Equation {
            lhs: lhs.trim().to_string(),
            rhs: rhs.trim().to_string(),
        };
        match out.iter_mut().find(|x| x.id == id) {
            Some(x) => x.equations.push(eq),
            None => out.push(Identity {
                id: id.to_string(),
                equations: vec![eq],
            }),
        }
    }
    Ok(out)
}

/// The built-in registry.
pub fn registry() -> &'static [Identity] {
    static REG: OnceLock<Vec<Identity>> = OnceLock::new();
    REG.get_or_init(|| parse_registry(BUILTIN).expect("built-in registry parses"))
}

pub fn lookup(id: &str) -> Result<&'static Identity, IdentityError> {
    registry()
        .iter()
        .find(|x| x.id == id)
        .ok_or_else(|| IdentityError::UnknownId(id.to_string()))
}

/// Environment used by `verify`: the catalog at `order + ENV_HEADROOM`.
pub fn environment(order: u32) -> Environment {
    Environment::catalog(order + ENV_HEADROOM)
}

/// Checks every equation of `identity` in `env`; the first failing or
/// erroring equation decides the report.
pub fn verify_in(identity: &Identity, env: &Environment, order: u32) -> IdentityReport {
    let start = Instant::now();
    let mut checked_to = i64::MAX;
    for eq in &identity.equations {
        match dsl::check_identity(&eq.lhs, &eq.rhs, env, order) {
            Ok(mut r) => {
                checked_to = checked_to.min(r.checked_to);
                if !r.passed() {
                    r.id = identity.id.clone();
                    r.elapsed = start.elapsed();
                    return r;
                }
            }
            Err(e) => {
                let msg = match &e {
                    DslError::Precision { .. } => e.to_string(),
                    _ => format!("`{} == {}`: {e}", eq.lhs, eq.rhs),
                };
                return IdentityReport::error(&identity.id, order, msg, start.elapsed());
            }
        }
    }
    IdentityReport {
        id: identity.id.clone(),
        order,
        checked_to: if checked_to == i64::MAX {
            order as i64 * UNITS_PER_Q
        } else {
            checked_to
        },
        status: Status::Pass,
        mismatch: None,
        error: None,
        elapsed: start.elapsed(),
    }
}

pub fn verify(id: &str, order: u32) -> Result<IdentityReport, IdentityError> {
    let identity = lookup(id)?;
    Ok(verify_in(identity, &environment(order), order))
}

/// Checks the whole registry concurrently; reports come back in registry order.
pub fn verify_all(order: u32) -> Vec<IdentityReport> {
    verify_all_in(registry(), &environment(order), order, true)
}

pub fn verify_all_sequential(order: u32) -> Vec<IdentityReport> {
    verify_all_in(registry(), &environment(order), order, false)
}

pub fn verify_all_in(
    identities: &[Identity],
    env: &Environment,
    order: u32,
    parallel: bool,
) -> Vec<IdentityReport> {
    if parallel {
        identities
            .par_iter()
            .map(|x| verify_in(x, env, order))
            .collect()
    } else {
        identities
            .iter()
            .map(|x| verify_in(x, env, order))
            .collect()
    }
}
