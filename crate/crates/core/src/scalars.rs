//! Exact scalar arithmetic.
//!
//! Every quantity in this crate is an exact rational number: an identity
//! "holds" only when its residual is literally zero. [`Rat`] is an
//! arbitrary-precision rational kept in lowest terms with a positive
//! denominator; both invariants are maintained by the backing
//! implementation and double-checked in the tests.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;

/// Arbitrary-precision rational scalar.
pub type Rat = num_rational::BigRational;

/// Arithmetic on [`Rat`] values can fail only by dividing by zero.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational literal `{0}`")]
    BadLiteral(String),
}

/// Binary operation selector for [`rational_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a rational (panics on `d == 0`; use [`rational_arith`] for fallible division).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Apply one exact binary operation, reporting division by zero as an error.
pub fn rational_arith(a: &Rat, b: &Rat, op: RatOp) -> Result<Rat, ScalarError> {
    match op {
        RatOp::Add => Ok(a + b),
        RatOp::Sub => Ok(a - b),
        RatOp::Mul => Ok(a * b),
        RatOp::Div => {
            if b.is_zero() {
                Err(ScalarError::DivisionByZero)
            } else {
                Ok(a / b)
            }
        }
    }
}

/// Parse `"p"`, `"-p"`, or `"p/q"` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, ScalarError> {
    let s = s.trim();
    let mk_err = || ScalarError::BadLiteral(s.to_string());
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rat::from_integer).map_err(|_| mk_err()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| mk_err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| mk_err())?;
            if q.is_zero() {
                Err(ScalarError::DivisionByZero)
            } else {
                Ok(Rat::new(p, q))
            }
        }
    }
}

/// Generalized binomial coefficient `C(a, k) = a(a-1)...(a-k+1) / k!` for rational `a`.
pub fn binomial(a: &Rat, k: u32) -> Rat {
    let mut num = Rat::one();
    for t in 0..k {
        num *= a - rat_int(t as i64);
        num /= rat_int((t + 1) as i64);
    }
    num
}

/// Ordinary integer binomial coefficient as a rational.
pub fn binomial_int(n: i64, k: u32) -> Rat {
    binomial(&rat_int(n), k)
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut f = Rat::one();
    for t in 2..=n {
        f *= rat_int(t as i64);
    }
    f
}

/// Canonical string form of a rational: `p` or `p/q` with `q > 1`.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}
