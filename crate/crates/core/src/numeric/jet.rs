use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Truncated Taylor expansion `c[0] + c[1] e + ... + c[n-1] e^(n-1)` of a
/// function around a point. Binary operations truncate to the shorter operand.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<Complex64>,
}

impl Jet {
    /// Jet from Taylor coefficients (not derivatives).
    pub fn new(c: Vec<Complex64>) -> Self {
        assert!(!c.is_empty(), "a jet needs at least one coefficient");
        Self { c }
    }

    pub fn constant(v: Complex64, len: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); len.max(1)];
        c[0] = v;
        Self { c }
    }

    /// The identity function around `at`.
    pub fn variable(at: Complex64, len: usize) -> Self {
        let mut j = Self::constant(at, len);
        if len > 1 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Jet from derivative values `f, f', f'', ...`.
    pub fn from_derivatives(d: &[Complex64]) -> Self {
        let mut fact = 1.0;
        let c = d
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k > 0 {
                    fact *= k as f64;
                }
                v / fact
            })
            .collect();
        Self::new(c)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Complex64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    pub fn derivatives(&self) -> Vec<Complex64> {
        (0..self.len()).map(|k| self.derivative(k)).collect()
    }

    /// Derivative as a jet; one coefficient shorter.
    pub fn deriv(&self) -> Self {
        if self.len() == 1 {
            return Self::constant(Complex64::new(0.0, 0.0), 1);
        }
        Self::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(k, v)| v * (k + 1) as f64)
                .collect(),
        )
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self::new(self.c[..len.min(self.len()).max(1)].to_vec())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.c.iter().map(|v| v * s).collect())
    }

    pub fn recip(&self) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), self.len()) / self.clone()
    }

    pub fn powi(&self, k: i64) -> Self {
        let mut out = Self::constant(Complex64::new(1.0, 0.0), self.len());
        let mut base = if k < 0 { self.recip() } else { self.clone() };
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = out * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        out
    }

    /// `self` composed with `inner`: the Taylor coefficients of `self` are
    /// taken around `inner.value()`.
    pub fn compose(&self, inner: &Jet) -> Self {
        let len = self.len().min(inner.len());
        let mut h = inner.truncate(len);
        h.c[0] = Complex64::new(0.0, 0.0);
        let mut out = Self::constant(self.c[len - 1], len);
        for k in (0..len - 1).rev() {
            out = out * h.clone();
            out.c[0] += self.c[k];
        }
        out
    }

    /// Expansion of `f(m z)` around `z`, given the expansion of `f` around `m z`.
    pub fn dilate(&self, m: f64) -> Self {
        let mut p = 1.0;
        Self::new(
            self.c
                .iter()
                .map(|v| {
                    let r = v * p;
                    p *= m;
                    r
                })
                .collect(),
        )
    }
}

fn zip(a: &Jet, b: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
    Jet::new(a.c.iter().zip(&b.c).map(|(x, y)| f(*x, *y)).collect())
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        zip(&self, &o, |x, y| x + y)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        zip(&self, &o, |x, y| x - y)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(self.c.into_iter().map(|x| -x).collect())
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let n = self.len().min(o.len());
        let c = (0..n)
            .map(|k| (0..=k).map(|j| self.c[j] * o.c[k - j]).sum())
            .collect();
        Jet::new(c)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let n = self.len().min(o.len());
        let mut q: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.c[k];
            for j in 0..k {
                acc -= q[j] * o.c[k - j];
            }
            q.push(acc / o.c[0]);
        }
        Jet::new(q)
    }
}

/// Arithmetic shared by plain complex numbers and jets, so that a vector
/// field can be evaluated pointwise or on Taylor expansions.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant shaped like `like`.
    fn lift(c: Complex64, like: &Self) -> Self;
    fn value(&self) -> Complex64;
}

impl Scalar for Complex64 {
    fn lift(c: Complex64, _: &Self) -> Self {
        c
    }
    fn value(&self) -> Complex64 {
        *self
    }
}

impl Scalar for Jet {
    fn lift(c: Complex64, like: &Self) -> Self {
        Jet::constant(c, like.len())
    }
    fn value(&self) -> Complex64 {
        self.c[0]
    }
}
