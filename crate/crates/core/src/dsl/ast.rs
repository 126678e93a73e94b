use std::fmt;

use num_bigint::BigInt;

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    /// `q d/dq`
    Delta,
    /// `delta(f)/f`
    Dlog,
    /// `d/dz`, raises the lambda-degree by one
    Dz,
    /// `f(z) -> f(2z)`
    Scale2,
    Neg,
    /// `lambda * f`
    Lam,
    /// `lambda^2 * f`
    Lam2,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Delta,
        Func::Dlog,
        Func::Dz,
        Func::Scale2,
        Func::Neg,
        Func::Lam,
        Func::Lam2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Delta => "delta",
            Func::Dlog => "dlog",
            Func::Dz => "dz",
            Func::Scale2 => "scale2",
            Func::Neg => "neg",
            Func::Lam => "lam",
            Func::Lam2 => "lam2",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Name(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Func, Vec<Expr>),
}

/// A parsed expression. Equality ignores spans.
#[derive(Debug, Clone, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Int(_) | ExprKind::Name(_) => vec![],
            ExprKind::Add(a, b)
            | ExprKind::Sub(a, b)
            | ExprKind::Mul(a, b)
            | ExprKind::Div(a, b) => {
                vec![a, b]
            }
            ExprKind::Pow(a, _) => vec![a],
            ExprKind::Call(_, args) => args.iter().collect(),
        }
    }

    /// Every name referenced in the tree, in first-seen order.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            if let ExprKind::Name(n) = &e.kind {
                if !out.contains(&n.as_str()) {
                    out.push(n.as_str());
                }
            }
            stack.extend(e.children().into_iter().rev());
        }
        out
    }
}

/// Canonical form: every binary operation fully parenthesized.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Name(n) => f.write_str(n),
            ExprKind::Add(a, b) => write!(f, "({a} + {b})"),
            ExprKind::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprKind::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprKind::Div(a, b) => write!(f, "({a} / {b})"),
            ExprKind::Pow(a, k) if *k < 0 => write!(f, "({a}^({k}))"),
            ExprKind::Pow(a, k) => write!(f, "({a}^{k})"),
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
