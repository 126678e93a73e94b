use super::{LaurentSeries, Rational, SeriesError};

/// `lambda^d * body`, where the formal symbol `lambda` stands for `pi i`.
///
/// Only series of equal degree can be added. The z-derivative is
/// `d/dz = 2 lambda q d/dq`, so differentiating raises the degree by one and
/// every z-derivative identity becomes a rational statement about bodies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    pub lambda_degree: i32,
    pub body: LaurentSeries,
}

impl GradedSeries {
    pub fn new(lambda_degree: i32, body: LaurentSeries) -> Self {
        Self {
            lambda_degree,
            body,
        }
    }

    pub fn ungraded(body: LaurentSeries) -> Self {
        Self::new(0, body)
    }

    pub fn constant(c: Rational) -> Self {
        Self::ungraded(LaurentSeries::constant(c))
    }

    fn check_degree(&self, other: &Self) -> Result<(), SeriesError> {
        if self.lambda_degree != other.lambda_degree {
            return Err(SeriesError::Grading {
                left: self.lambda_degree,
                right: other.lambda_degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_degree(other)?;
        Ok(Self::new(self.lambda_degree, self.body.add(&other.body)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_degree(other)?;
        Ok(Self::new(self.lambda_degree, self.body.sub(&other.body)))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.lambda_degree, self.body.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.lambda_degree, self.body.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.lambda_degree + other.lambda_degree,
            self.body.mul(&other.body),
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(Self::new(
            self.lambda_degree - other.lambda_degree,
            self.body.div(&other.body)?,
        ))
    }

    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        Ok(Self::new(self.lambda_degree * k as i32, self.body.pow(k)?))
    }

    /// `f'(z) = 2 pi i (q d/dq) f`.
    pub fn z_deriv(&self) -> Self {
        Self::new(
            self.lambda_degree + 1,
            self.body.delta().scale(&Rational::from_integer(2.into())),
        )
    }

    /// `q d/dq` applied to the body; the constant factor `lambda^d` is untouched.
    pub fn delta(&self) -> Self {
        Self::new(self.lambda_degree, self.body.delta())
    }

    /// `delta(f)/f`; the lambda factor cancels.
    pub fn dlog(&self) -> Result<Self, SeriesError> {
        Ok(Self::ungraded(self.body.dlog()?))
    }

    pub fn scale_arg(&self, m: u32) -> Self {
        Self::new(self.lambda_degree, self.body.scale_arg(m))
    }

    /// Multiplies by `lambda^k` without touching the body.
    pub fn lam(&self, k: i32) -> Self {
        Self::new(self.lambda_degree + k, self.body.clone())
    }

    pub fn precision(&self) -> i64 {
        self.body.precision()
    }

    pub fn valuation(&self) -> i64 {
        self.body.valuation()
    }

    pub fn truncate(&self, precision: i64) -> Self {
        Self::new(self.lambda_degree, self.body.truncate(precision))
    }

    pub fn dump(&self) -> String {
        self.body.dump(self.lambda_degree)
    }
}

impl From<LaurentSeries> for GradedSeries {
    fn from(body: LaurentSeries) -> Self {
        Self::ungraded(body)
    }
}
