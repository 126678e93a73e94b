//! Truncated Laurent series in the 24th root of the nome.
//!
//! Exponents are stored in units of 1/24 of a power of `q = e^{2 pi i z}`, so
//! `q^{1/8}` (theta_2), `q^{1/24}` (eta) and every integral power of `q` live on
//! the same integer grid. Every series carries a precision: the coefficient at
//! an exponent `e >= precision` is unknown and asking for it is an error.
//! Precision is propagated pessimistically, so every coefficient a series
//! reports is exact.

mod graded;

pub use graded::GradedSeries;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficient.
pub type Rational = BigRational;

/// Number of exponent units per integral power of `q`.
pub const UNITS_PER_Q: i64 = 24;

/// Precision marker for series known exactly (polynomials, constants).
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error(
        "insufficient precision: {operand} operand known below {available}/24, need {required}/24"
    )]
    InsufficientPrecision {
        operand: &'static str,
        required: i64,
        available: i64,
    },
    #[error("coefficient at exponent {exponent}/24 is unknown (precision {precision}/24)")]
    UnknownCoefficient { exponent: i64, precision: i64 },
    #[error("lambda-degree mismatch: cannot add degree {left} to degree {right}")]
    Grading { left: i32, right: i32 },
}

/// First exponent at which two series differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of [`LaurentSeries::eq_to_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    Equal,
    Differs(Mismatch),
}

impl Agreement {
    pub fn is_equal(&self) -> bool {
        matches!(self, Agreement::Equal)
    }

    pub fn mismatch(&self) -> Option<&Mismatch> {
        match self {
            Agreement::Equal => None,
            Agreement::Differs(m) => Some(m),
        }
    }
}

pub(crate) fn is_exact(p: i64) -> bool {
    p >= EXACT
}

/// `p + by`, saturating at [`EXACT`].
pub(crate) fn shift(p: i64, by: i64) -> i64 {
    if is_exact(p) || is_exact(by) {
        EXACT
    } else {
        (p + by).min(EXACT)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    valuation: i64,
    precision: i64,
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentSeries {
    /// Builds a series from `(exponent, coefficient)` pairs. Pairs at or above
    /// `precision` are dropped, repeated exponents are summed.
    pub fn new<I>(terms: I, precision: i64) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e >= precision || c.is_zero() {
                continue;
            }
            *coeffs.entry(e).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(coeffs, precision)
    }

    fn from_map(mut coeffs: BTreeMap<i64, Rational>, precision: i64) -> Self {
        coeffs.retain(|e, c| *e < precision && !c.is_zero());
        let valuation = coeffs.keys().next().copied().unwrap_or(precision);
        Self {
            valuation,
            precision,
            coeffs,
        }
    }

    /// Series in integral powers of `q`: `coeffs[n]` multiplies `q^{shift + n}`,
    /// known up to (not including) `q^order`.
    pub fn from_q_coeffs<T: Into<BigInt> + Clone>(shift: i64, coeffs: &[T], order: i64) -> Self {
        Self::new(
            coeffs.iter().enumerate().map(|(n, c)| {
                (
                    (shift + n as i64) * UNITS_PER_Q,
                    Rational::from_integer(c.clone().into()),
                )
            }),
            order * UNITS_PER_Q,
        )
    }

    pub fn zero(precision: i64) -> Self {
        Self::from_map(BTreeMap::new(), precision)
    }

    pub fn exact_zero() -> Self {
        Self::zero(EXACT)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exponent: i64, c: Rational) -> Self {
        Self::new([(exponent, c)], EXACT)
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        is_exact(self.precision)
    }

    /// True when every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `exponent` (1/24 units).
    pub fn coeff(&self, exponent: i64) -> Result<Rational, SeriesError> {
        if exponent >= self.precision {
            return Err(SeriesError::UnknownCoefficient {
                exponent,
                precision: self.precision,
            });
        }
        Ok(self
            .coeffs
            .get(&exponent)
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// Coefficient of `q^n`.
    pub fn q_coeff(&self, n: i64) -> Result<Rational, SeriesError> {
        self.coeff(n * UNITS_PER_Q)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn leading(&self) -> Option<(i64, &Rational)> {
        self.coeffs.iter().next().map(|(e, c)| (*e, c))
    }

    /// Forgets every coefficient at or above `precision`.
    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        Self::from_map(
            self.coeffs
                .range(..precision)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            precision,
        )
    }

    /// Same series with one coefficient replaced; used for fault injection.
    pub fn with_coeff(&self, exponent: i64, c: Rational) -> Result<Self, SeriesError> {
        if exponent >= self.precision {
            return Err(SeriesError::UnknownCoefficient {
                exponent,
                precision: self.precision,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.insert(exponent, c);
        Ok(Self::from_map(coeffs, self.precision))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        Self::from_map(
            self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
            self.precision,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        let mut coeffs: BTreeMap<i64, Rational> = self
            .coeffs
            .range(..precision)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        for (e, c) in other.coeffs.range(..precision) {
            *coeffs.entry(*e).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(coeffs, precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            valuation: self.valuation,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// Cauchy product. The result is known below
    /// `min(a.precision + b.valuation, b.precision + a.valuation)`.
    pub fn mul(&self, other: &Self) -> Self {
        let precision =
            shift(self.precision, other.valuation).min(shift(other.precision, self.valuation));
        if self.is_zero() || other.is_zero() {
            return Self::zero(precision);
        }
        let (da, a) = self.integer_form(shift(precision, -other.valuation));
        let (db, b) = other.integer_form(shift(precision, -self.valuation));
        let base = self.valuation + other.valuation;
        let top = if is_exact(precision) {
            a.last().map_or(base, |t| t.0) + b.last().map_or(base, |t| t.0) + 1
        } else {
            precision
        };
        if top <= base {
            return Self::zero(precision);
        }
        let mut acc = vec![BigInt::zero(); (top - base) as usize];
        for (ea, ca) in &a {
            if ea + other.valuation >= top {
                break;
            }
            for (eb, cb) in &b {
                let e = ea + eb;
                if e >= top {
                    break;
                }
                acc[(e - base) as usize] += ca * cb;
            }
        }
        let den = da * db;
        let coeffs = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + i as i64, Rational::new(c, den.clone())))
            .collect();
        Self::from_map(coeffs, precision)
    }

    /// Coefficients below `limit` scaled to integers: returns the common
    /// denominator and the scaled numerators.
    fn integer_form(&self, limit: i64) -> (BigInt, Vec<(i64, BigInt)>) {
        let den = self
            .coeffs
            .range(..limit)
            .fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let terms = self
            .coeffs
            .range(..limit)
            .map(|(e, c)| (*e, c.numer() * (&den / c.denom())))
            .collect();
        (den, terms)
    }

    /// Reciprocal known to `relative` units above its valuation.
    fn reciprocal(&self, relative: i64) -> Result<Self, SeriesError> {
        let (v, lead) = match self.leading() {
            Some((v, c)) => (v, c.clone()),
            None if self.is_exact() => return Err(SeriesError::ZeroDivisor),
            None => {
                return Err(SeriesError::InsufficientPrecision {
                    operand: "divisor",
                    required: self.precision + 1,
                    available: self.precision,
                })
            }
        };
        if self.coeffs.len() == 1 {
            let precision = if self.is_exact() { EXACT } else { relative - v };
            return Ok(Self::new([(-v, lead.recip())], precision));
        }
        // Relative exponents of the divisor all lie on a grid of step g, so
        // the reciprocal does too.
        let g = self.coeffs.keys().fold(0i64, |g, e| g.gcd(&(e - v)));
        let count = ((relative + g - 1) / g).max(0) as usize;
        let (den, ints) = self.integer_form(v + relative);
        let c0 = ints[0].1.clone();
        let body: Vec<(usize, &BigInt)> = ints[1..]
            .iter()
            .map(|(e, c)| (((e - v) / g) as usize, c))
            .take_while(|(k, _)| *k < count)
            .collect();
        // 1/B = sum d_n / c0^{n+1} t^n with d_0 = 1 and
        // d_n = -sum_k B_k d_{n-k} c0^{k-1}.
        let mut c0_pow = vec![BigInt::one()];
        for i in 1..=count {
            let next = &c0_pow[i - 1] * &c0;
            c0_pow.push(next);
        }
        let mut d: Vec<BigInt> = Vec::with_capacity(count);
        if count > 0 {
            d.push(BigInt::one());
        }
        for n in 1..count {
            let mut acc = BigInt::zero();
            for (k, bk) in &body {
                if *k > n {
                    break;
                }
                if d[n - k].is_zero() {
                    continue;
                }
                acc -= *bk * &d[n - k] * &c0_pow[k - 1];
            }
            d.push(acc);
        }
        let terms = d
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(n, x)| {
                let r = Rational::new(x * &den, c0_pow[n + 1].clone());
                (-v + n as i64 * g, r)
            });
        Ok(Self::new(terms, relative - v))
    }

    /// Laurent division. The result valuation is `a.valuation - b.valuation`
    /// and its precision is `min(a.precision - vb, b.precision - 2 vb + va)`.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let vb = match other.leading() {
            Some((v, _)) => v,
            None if other.is_exact() => return Err(SeriesError::ZeroDivisor),
            None => {
                return Err(SeriesError::InsufficientPrecision {
                    operand: "divisor",
                    required: other.precision + 1,
                    available: other.precision,
                })
            }
        };
        let relative = if other.is_exact() {
            if other.coeffs.len() == 1 {
                EXACT
            } else if self.is_exact() {
                return Err(SeriesError::InsufficientPrecision {
                    operand: "dividend",
                    required: EXACT,
                    available: EXACT,
                });
            } else {
                (self.precision - self.valuation.min(self.precision)).max(0)
            }
        } else {
            other.precision - vb
        };
        let inv = other.reciprocal(relative)?;
        Ok(self.mul(&inv))
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        Self::one().div(self)
    }

    /// Integer power; negative powers require an invertible series.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        if k < 0 {
            return self.pow(-k)?.recip();
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// `f(z) -> f(m z)`, i.e. `q -> q^m`.
    pub fn scale_arg(&self, m: u32) -> Self {
        let m = m as i64;
        let precision = if self.is_exact() {
            EXACT
        } else {
            (self.precision * m).min(EXACT)
        };
        Self::from_map(
            self.coeffs
                .iter()
                .map(|(e, c)| (e * m, c.clone()))
                .collect(),
            precision,
        )
    }

    /// `q d/dq`: multiplies the coefficient at exponent `e` by `e/24`.
    pub fn delta(&self) -> Self {
        Self::from_map(
            self.coeffs
                .iter()
                .map(|(e, c)| (*e, c * Rational::new((*e).into(), UNITS_PER_Q.into())))
                .collect(),
            self.precision,
        )
    }

    /// Logarithmic derivative `delta(f)/f`.
    pub fn dlog(&self) -> Result<Self, SeriesError> {
        self.delta().div(self)
    }

    /// Compares coefficients at every exponent below `order` (1/24 units).
    pub fn eq_to_order(&self, other: &Self, order: i64) -> Result<Agreement, SeriesError> {
        for (operand, s) in [("left", self), ("right", other)] {
            if s.precision < order {
                return Err(SeriesError::InsufficientPrecision {
                    operand,
                    required: order,
                    available: s.precision,
                });
            }
        }
        let mut exps: Vec<i64> = self
            .coeffs
            .range(..order)
            .chain(other.coeffs.range(..order))
            .map(|(e, _)| *e)
            .collect();
        exps.sort_unstable();
        exps.dedup();
        for e in exps {
            let l = self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero);
            let r = other.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero);
            if l != r {
                return Ok(Agreement::Differs(Mismatch {
                    exponent: e,
                    lhs: l,
                    rhs: r,
                }));
            }
        }
        Ok(Agreement::Equal)
    }

    /// Coefficient dump: a header line then one `e/24<TAB>num/den` line per
    /// stored exponent.
    pub fn dump(&self, lambda_degree: i32) -> String {
        let mut out = format!(
            "valuation={} precision={} lambda={}\n",
            fmt_bound(self.valuation),
            fmt_bound(self.precision),
            lambda_degree
        );
        for (e, c) in &self.coeffs {
            out.push_str(&format!("{}/24\t{}/{}\n", e, c.numer(), c.denom()));
        }
        out
    }

    /// Largest absolute coefficient; used for tail estimates.
    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn fmt_bound(p: i64) -> String {
    if is_exact(p) {
        "inf".to_string()
    } else {
        p.to_string()
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentSeries {
    /// Human-readable form, e.g. `1 - 24q - 72q^2 + O(q^3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let mono = fmt_monomial(*e);
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}{}", mag, mono)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.is_exact() {
            let mono = fmt_monomial(self.precision);
            write!(f, " + O({})", if mono.is_empty() { "1" } else { &mono })?;
        }
        Ok(())
    }
}

fn fmt_monomial(e: i64) -> String {
    if e == 0 {
        return String::new();
    }
    let g = e.gcd(&UNITS_PER_Q);
    let (num, den) = (e / g, UNITS_PER_Q / g);
    match (num, den) {
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{}", n),
        (n, d) => format!("q^({}/{})", n, d),
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: Self) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

#[cfg(test)]
mod tests;
