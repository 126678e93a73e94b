//! Expression language for series identities.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' int)*
//! atom  := int | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `delta`, `dlog`, `dz`, `scale2`, `neg`, `lam`, `lam2`.

mod ast;
mod env;
mod eval;
mod parser;

use std::time::Instant;

use thiserror::Error;

pub use ast::{Expr, ExprKind, Func, Span};
pub use env::Environment;
pub use eval::{eval, EvalError};
pub use parser::{parse, ParseError};

use crate::identity::{IdentityReport, Status};
use crate::series::{is_exact, UNITS_PER_Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{side}: {source}")]
    Parse {
        side: &'static str,
        source: ParseError,
    },
    #[error("{side}: {source}")]
    Eval {
        side: &'static str,
        source: EvalError,
    },
    #[error("sides have lambda-degree {lhs} and {rhs}")]
    SideGrading { lhs: i32, rhs: i32 },
    #[error("precision shortfall: sides known to {available}/24, need {required}/24; requires order >= {required_order}")]
    Precision {
        required: i64,
        available: i64,
        required_order: u32,
    },
}

/// Parses, evaluates and compares two sides. The comparison runs over the
/// largest precision both sides know, which must reach `q^order`.
pub fn check_identity(
    lhs: &str,
    rhs: &str,
    env: &Environment,
    order: u32,
) -> Result<IdentityReport, DslError> {
    let start = Instant::now();
    let parsed = |side, src| parse(src).map_err(|source| DslError::Parse { side, source });
    let (l, r) = (parsed("lhs", lhs)?, parsed("rhs", rhs)?);
    let evaluated = |side, e| eval(e, env).map_err(|source| DslError::Eval { side, source });
    let (a, b) = (evaluated("lhs", &l)?, evaluated("rhs", &r)?);
    if a.lambda_degree != b.lambda_degree {
        return Err(DslError::SideGrading {
            lhs: a.lambda_degree,
            rhs: b.lambda_degree,
        });
    }
    let required = order as i64 * UNITS_PER_Q;
    let mut common = a.precision().min(b.precision());
    if is_exact(common) {
        common = required;
    }
    if common < required {
        let deficit = (required - common + UNITS_PER_Q - 1) / UNITS_PER_Q;
        return Err(DslError::Precision {
            required,
            available: common,
            required_order: env.order() + deficit as u32,
        });
    }
    let agreement = a
        .body
        .eq_to_order(&b.body, common)
        .expect("both sides known to the common precision");
    let mismatch = agreement.mismatch().cloned();
    Ok(IdentityReport {
        id: "adhoc".to_string(),
        order,
        checked_to: common,
        status: if mismatch.is_none() {
            Status::Pass
        } else {
            Status::Fail
        },
        mismatch,
        error: None,
        elapsed: start.elapsed(),
    })
}
