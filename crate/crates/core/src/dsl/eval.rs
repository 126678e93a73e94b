use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use super::ast::{Expr, ExprKind, Func};
use super::env::Environment;
use crate::catalog::CatalogError;
use crate::series::{GradedSeries, Rational, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound name `{name}` at offset {offset}")]
    Unbound { name: String, offset: usize },
    #[error("lambda-degree mismatch in `{expr}`: {left} vs {right}")]
    Grading {
        left: i32,
        right: i32,
        expr: String,
        offset: usize,
    },
    #[error("in `{expr}`: {source}")]
    Series {
        source: SeriesError,
        expr: String,
        offset: usize,
    },
    #[error("building `{name}`: {source}")]
    Catalog { name: String, source: CatalogError },
}

/// Evaluates `e` bottom-up. Repeated subexpressions are computed once.
pub fn eval(e: &Expr, env: &Environment) -> Result<GradedSeries, EvalError> {
    Evaluator {
        env,
        memo: HashMap::new(),
    }
    .eval(e)
}

struct Evaluator<'a> {
    env: &'a Environment,
    memo: HashMap<String, GradedSeries>,
}

/// `Some(c)` if `s` is the exact constant `c` of degree 0.
fn as_constant(s: &GradedSeries) -> Option<Rational> {
    if s.lambda_degree != 0 || !s.body.is_exact() {
        return None;
    }
    let mut terms = s.body.terms();
    match (terms.next(), terms.next()) {
        (None, _) => Some(Rational::zero()),
        (Some((0, c)), None) => Some(c.clone()),
        _ => None,
    }
}

impl Evaluator<'_> {
    fn eval(&mut self, e: &Expr) -> Result<GradedSeries, EvalError> {
        let key = e.to_string();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(e)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn compute(&mut self, e: &Expr) -> Result<GradedSeries, EvalError> {
        let series_err = |source: SeriesError| EvalError::Series {
            source,
            expr: e.to_string(),
            offset: e.span.start,
        };
        let grading_err = |source: SeriesError| match source {
            SeriesError::Grading { left, right } => EvalError::Grading {
                left,
                right,
                expr: e.to_string(),
                offset: e.span.start,
            },
            other => series_err(other),
        };
        Ok(match &e.kind {
            ExprKind::Int(n) => GradedSeries::constant(Rational::from_integer(n.clone())),
            ExprKind::Name(name) => match self.env.get(name) {
                None => {
                    return Err(EvalError::Unbound {
                        name: name.clone(),
                        offset: e.span.start,
                    })
                }
                Some(Err(source)) => {
                    return Err(EvalError::Catalog {
                        name: name.clone(),
                        source,
                    })
                }
                Some(Ok(v)) => v.clone(),
            },
            ExprKind::Add(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                a.add(&b).map_err(grading_err)?
            }
            ExprKind::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                a.sub(&b).map_err(grading_err)?
            }
            ExprKind::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match (as_constant(&a), as_constant(&b)) {
                    (Some(c), _) => b.scale(&c),
                    (_, Some(c)) => a.scale(&c),
                    _ => a.mul(&b),
                }
            }
            ExprKind::Div(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match as_constant(&b) {
                    Some(c) if c.is_zero() => return Err(series_err(SeriesError::ZeroDivisor)),
                    Some(c) => a.scale(&(Rational::one() / c)),
                    None => a.div(&b).map_err(series_err)?,
                }
            }
            ExprKind::Pow(a, k) => self.eval(a)?.pow(*k).map_err(series_err)?,
            ExprKind::Call(func, args) => {
                let x = self.eval(&args[0])?;
                match func {
                    Func::Delta => x.delta(),
                    Func::Dlog => x.dlog().map_err(series_err)?,
                    Func::Dz => x.z_deriv(),
                    Func::Scale2 => x.scale_arg(2),
                    Func::Neg => x.neg(),
                    Func::Lam => x.lam(1),
                    Func::Lam2 => x.lam(2),
                }
            }
        })
    }
}
