//! The deformed-flow calculus.
//!
//! For an integer `eps`, exponentiating the vector field `z2^eps d/dz2`
//! gives the formal flow
//!
//! ```text
//! phi_eps(z2, z0) = exp(z0 * z2^eps d/dz2) z2
//!                 = sum_n  1^(n) / n! * z2^(1 + n(eps-1)) z0^n,
//! ```
//!
//! a one-parameter deformation of the coordinate `z2` satisfying the group
//! laws `phi(z2, 0) = z2` and `phi(phi(z2, z0), z1) = phi(z2, z0 + z1)`.
//! At `eps = 0` the flow is a translation, at `eps = 1` a dilation.
//!
//! Three companion series drive the normal-ordering corrections downstream:
//! the cofactor `h` defined by `phi - z2 = z0 z2^eps h(z2, z0)`, the
//! coefficients `h_n` of its multiplicative inverse (computed here by two
//! independent routes — a closed partition sum and power-series inversion —
//! and cross-checked), and the inverse flow coordinate `f_eps` with
//! `f_eps(z2, phi/z2 - 1) = z0`. At `eps = 1` the `h_n` reduce to the
//! coefficients of `z/(e^z - 1)`, i.e. Bernoulli numbers over factorials.

use crate::factorial::eps_pochhammer;
use crate::scalars::{factorial, rat_int, Rat};
use crate::series::{Mono, TruncatedSeries};
use num_traits::{One, Zero};

/// The flow series `phi_eps(z2, z0)`, built by iterating the vector field
/// exactly on Laurent monomials (never from the closed form, which instead
/// serves as a test oracle).
pub fn phi_eps(eps: i64, order: u32) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(order);
    // (z2^eps d/dz2)^n applied to z2, one application per iteration
    let mut iterated = TruncatedSeries::aux_power(order, 1);
    for n in 0..=order {
        let c = Rat::one() / factorial(n);
        out = out.add(&iterated.mul_monomial(Mono { z0: n, z1: 0, z2: 0 }, &c));
        iterated = iterated.aux_eps_del(eps);
    }
    out
}

/// Residuals of the two one-parameter-group axioms:
/// `phi(z2, 0) - z2` and `phi(phi(z2, z0), z1) - phi(z2, z0 + z1)`,
/// the latter truncated at `order` in total `(z0, z1)`-degree.
/// Both are identically zero.
pub fn associate_axioms_residual(eps: i64, order: u32) -> (TruncatedSeries, TruncatedSeries) {
    let flow = phi_eps(eps, order);
    let at_zero = flow
        .primary_constant_part()
        .sub(&TruncatedSeries::aux_power(order, 1));

    // Outer copy of the flow deforms in z1; its coordinate slot is then
    // filled with the inner flow, which deforms in z0.
    let outer = flow
        .promote_secondary()
        .expect("the flow series has no secondary exponents");
    let lhs = outer
        .compose_aux(&flow)
        .expect("the flow series has the shape z2*(1 + O(z0))");
    let sum = TruncatedSeries::var_primary(order).add(&TruncatedSeries::var_secondary(order));
    let rhs = flow
        .compose_primary(&sum)
        .expect("z0 + z1 has positive truncated valuation");
    (at_zero, lhs.sub(&rhs))
}

/// The cofactor series `h(z2, z0) = sum_n eps^(n)/(n+1)! z2^(n(eps-1)) z0^n`,
/// characterized by `phi_eps - z2 = z0 * z2^eps * h`.
pub fn h_series(eps: i64, order: u32) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(order);
    for n in 0..=order {
        let c = eps_pochhammer(&rat_int(eps), n, eps) / factorial(n + 1);
        out.add_term(
            Mono { z0: n, z1: 0, z2: n as i64 * (eps - 1) },
            c,
        );
    }
    out
}

/// The inverse-series coefficients `h_0 .. h_nmax` by the closed partition
/// sum: over all multiplicity vectors `r_1..r_n` with `sum m*r_m = n`,
///
/// ```text
/// h_n = sum (-1)^(r_1+..+r_n) (r_1+..+r_n)! prod_m (eps^(m)/(m+1)!)^(r_m) / r_m!
/// ```
pub fn h_closed_form(eps: i64, nmax: u32) -> Vec<Rat> {
    let mut out = vec![Rat::one()];
    for n in 1..=nmax {
        let mut hn = Rat::zero();
        for part in partitions(n) {
            let total: u32 = part.iter().map(|&(_, r)| r).sum();
            let mut term = factorial(total);
            if total % 2 == 1 {
                term = -term;
            }
            for &(m, r) in &part {
                let base = eps_pochhammer(&rat_int(eps), m, eps) / factorial(m + 1);
                term *= rat_pow(&base, r) / factorial(r);
            }
            hn += term;
        }
        out.push(hn);
    }
    out
}

/// The same coefficients by exact power-series inversion: with
/// `t_k = eps^(k)/(k+1)!` the inverse of `sum t_k z0^k` satisfies
/// `g_0 = 1` and `g_n = -sum_{k=1..n} t_k g_{n-k}`.
pub fn h_by_inversion(eps: i64, nmax: u32) -> Vec<Rat> {
    let t: Vec<Rat> = (0..=nmax)
        .map(|k| eps_pochhammer(&rat_int(eps), k, eps) / factorial(k + 1))
        .collect();
    let mut g = vec![Rat::one()];
    for n in 1..=nmax as usize {
        let mut gn = Rat::zero();
        for k in 1..=n {
            gn -= &t[k] * &g[n - k];
        }
        g.push(gn);
    }
    g
}

/// The inverse-series coefficients, computed by both routes and
/// cross-checked; a disagreement would be an internal inconsistency.
pub fn h_inverse_coeffs(eps: i64, nmax: u32) -> Vec<Rat> {
    let closed = h_closed_form(eps, nmax);
    let inverted = h_by_inversion(eps, nmax);
    assert_eq!(
        closed, inverted,
        "inverse-cofactor coefficient routes disagree at eps = {eps}"
    );
    closed
}

/// The inverse flow coordinate
///
/// ```text
/// f_eps(z2, z) = z2^(1-eps) ((1+z)^(1-eps) - 1) / (1-eps)    (eps != 1)
/// f_1(z2, z)   = log(1+z)
/// ```
///
/// satisfying `f_eps(z2, phi_eps(z2,z0)/z2 - 1) = z0`.
pub fn f_eps(eps: i64, order: u32) -> TruncatedSeries {
    if eps == 1 {
        let mut out = TruncatedSeries::zero(order);
        for n in 1..=order {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            out.add_term(
                Mono { z0: n, z1: 0, z2: 0 },
                rat_int(sign) / rat_int(n as i64),
            );
        }
        return out;
    }
    let base = TruncatedSeries::one(order).add(&TruncatedSeries::var_primary(order));
    let p = base
        .binom_pow(1 - eps)
        .expect("1 + z0 is a unit base");
    p.sub(&TruncatedSeries::one(order))
        .scale(&(Rat::one() / rat_int(1 - eps)))
        .aux_shift(1 - eps)
}

/// Residual of the inverse-coordinate contract
/// `f_eps(z2, phi_eps(z2,z0)/z2 - 1) - z0`; identically zero.
pub fn f_contract_residual(eps: i64, order: u32) -> TruncatedSeries {
    let flow = phi_eps(eps, order);
    let inner = flow.aux_shift(-1).sub(&TruncatedSeries::one(order));
    f_eps(eps, order)
        .compose_primary(&inner)
        .expect("phi/z2 - 1 has positive truncated valuation")
        .sub(&TruncatedSeries::var_primary(order))
}

/// The normal-ordering correction coefficients
///
/// ```text
/// c_n = sum_{i=0..n+1} eps^(i)/i! * h_(n-i+1),
/// ```
///
/// the scalars in front of `z^((n+1)(eps-1))` when a `(-1)`-product field is
/// re-expressed through the normally ordered product; `c_n = 0` for all `n`
/// at `eps = 0`, recovering the undeformed case.
pub fn u_minus1_correction(eps: i64, nmax: u32) -> Vec<Rat> {
    let h = h_inverse_coeffs(eps, nmax + 1);
    (0..=nmax)
        .map(|n| {
            let mut c = Rat::zero();
            for i in 0..=n + 1 {
                c += eps_pochhammer(&rat_int(eps), i, eps) / factorial(i)
                    * &h[(n + 1 - i) as usize];
            }
            c
        })
        .collect()
}

/// All partitions of `n`, as `(part, multiplicity)` lists with parts
/// strictly decreasing.
pub(crate) fn partitions(n: u32) -> Vec<Vec<(u32, u32)>> {
    fn rec(
        remaining: u32,
        max_part: u32,
        acc: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        let top = max_part.min(remaining);
        for m in (1..=top).rev() {
            for r in 1..=remaining / m {
                acc.push((m, r));
                rec(remaining - m * r, m - 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn rat_pow(x: &Rat, n: u32) -> Rat {
    let mut p = Rat::one();
    for _ in 0..n {
        p *= x;
    }
    p
}
