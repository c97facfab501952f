//! Shifted-factorial calculus.
//!
//! For an integer parameter `eps` the shifted factorial of a rational `a` is
//!
//! ```text
//! a^(r) = a (a + (eps-1)) (a + 2(eps-1)) ... (a + (r-1)(eps-1)),    a^(0) = 1.
//! ```
//!
//! At `eps = 1` this degenerates to the power `a^r`; at `eps = 2` it is the
//! ordinary rising factorial. Two identities drive the rest of the crate:
//! a binomial expansion of `(a+b)^(p)` and a two-weight convolution that
//! re-centers the weights `(alpha, -beta)` to `(alpha+beta, beta)`.

use crate::scalars::{binomial_int, rat_int, Rat};
use num_traits::{One, Zero};

/// The shifted factorial `a^(r)` with step `eps - 1`.
pub fn eps_pochhammer(a: &Rat, r: u32, eps: i64) -> Rat {
    let step = rat_int(eps - 1);
    let mut p = Rat::one();
    let mut x = a.clone();
    for _ in 0..r {
        p *= &x;
        x += &step;
    }
    p
}

/// Both sides of the binomial expansion
/// `(a+b)^(p) = sum_i C(p,i) a^(i) b^(p-i)`.
pub fn binomial_expansion_sides(p: u32, a: &Rat, b: &Rat, eps: i64) -> (Rat, Rat) {
    let mut rhs = Rat::zero();
    for i in 0..=p {
        rhs += binomial_int(p as i64, i)
            * eps_pochhammer(a, i, eps)
            * eps_pochhammer(b, p - i, eps);
    }
    (eps_pochhammer(&(a + b), p, eps), rhs)
}

/// LHS minus RHS of the binomial expansion; zero when the identity holds.
pub fn binomial_expansion_residual(p: u32, a: &Rat, b: &Rat, eps: i64) -> Rat {
    let (lhs, rhs) = binomial_expansion_sides(p, a, b, eps);
    lhs - rhs
}

/// Both sides of the weight-shuffling convolution
///
/// ```text
/// sum_r C(p,r) alpha^(p-r) a^(p-r) (-beta)^r b^(r)
///   = sum_s C(p,s) (alpha+beta)^(p-s) a^(p-s) beta^s (-a-b-(p-1)(eps-1))^(s)
/// ```
///
/// where superscripts in parentheses are shifted factorials and the plain
/// powers of `alpha`, `-beta`, `alpha+beta`, `beta` are ordinary powers.
pub fn convolution_sides(
    p: u32,
    a: &Rat,
    b: &Rat,
    alpha: &Rat,
    beta: &Rat,
    eps: i64,
) -> (Rat, Rat) {
    let mut lhs = Rat::zero();
    for r in 0..=p {
        lhs += binomial_int(p as i64, r)
            * pow(alpha, p - r)
            * eps_pochhammer(a, p - r, eps)
            * pow(&-beta.clone(), r)
            * eps_pochhammer(b, r, eps);
    }
    let gamma = -a - b - rat_int((p as i64 - 1) * (eps - 1));
    let mut rhs = Rat::zero();
    for s in 0..=p {
        rhs += binomial_int(p as i64, s)
            * pow(&(alpha + beta), p - s)
            * eps_pochhammer(a, p - s, eps)
            * pow(beta, s)
            * eps_pochhammer(&gamma, s, eps);
    }
    (lhs, rhs)
}

/// LHS minus RHS of the convolution; zero when the identity holds.
pub fn convolution_residual(p: u32, a: &Rat, b: &Rat, alpha: &Rat, beta: &Rat, eps: i64) -> Rat {
    let (lhs, rhs) = convolution_sides(p, a, b, alpha, beta, eps);
    lhs - rhs
}

fn pow(x: &Rat, n: u32) -> Rat {
    let mut p = Rat::one();
    for _ in 0..n {
        p *= x;
    }
    p
}
