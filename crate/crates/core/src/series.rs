//! Truncated formal series in two nilpotent-by-truncation variables `z0`, `z1`
//! over Laurent monomials in an auxiliary variable `z2`.
//!
//! Everything downstream of the formal-group calculus lives in the ring
//!
//! ```text
//! Q[z2, z2^-1][[z0, z1]] / (z0, z1)^{order+1}
//! ```
//!
//! `z0` is the distinguished deformation variable; `z1` is a second copy used
//! only when two deformation directions coexist (the composition law of the
//! flow). `z2` enters through integer powers only — the shift exponents
//! produced by the calculus are multiples of `eps - 1`, which is an integer —
//! so no fractional-exponent machinery is needed.
//!
//! Truncation is by *total* degree in `(z0, z1)`: a term `z0^p z1^s z2^a` is
//! kept iff `p + s <= order`. All operations are exact on the retained
//! coefficients; binary operations between series of different orders truncate
//! to the smaller order.

use crate::scalars::{binomial, rat_int, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exponent triple of one monomial `z0^z0 * z1^z1 * z2^z2`.
///
/// The truncated exponents are non-negative by construction; the auxiliary
/// exponent is an arbitrary integer (Laurent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub z0: u32,
    pub z1: u32,
    pub z2: i64,
}

impl Mono {
    /// Total degree in the truncated variables.
    fn tdeg(&self) -> u32 {
        self.z0 + self.z1
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (name, e) in [("z0", self.z0 as i64), ("z1", self.z1 as i64), ("z2", self.z2)] {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, "*")?;
            }
            wrote = true;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Errors raised by the precondition checks on series operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    /// A series substituted for a truncated variable must vanish at
    /// `z0 = z1 = 0`, otherwise the substitution is an infinite sum.
    #[error("substituted series must have positive truncated valuation; offending term {found}")]
    CompositionValuation { found: String },
    /// `binom_pow` needs the base to be `1 + (higher truncated order)`.
    #[error("binomial power base must be 1 + O(z0,z1); offending term {found}")]
    NotUnit { found: String },
    /// A series substituted for the auxiliary variable must be
    /// `z2 * (1 + higher truncated order)`.
    #[error("aux substitution target must be z2*(1 + O(z0,z1)); offending term {found}")]
    AuxSubstitutionShape { found: String },
    /// Moving the primary exponents into the secondary slot requires the
    /// secondary slot to be empty.
    #[error("secondary variable already occurs; offending term {found}")]
    SecondaryOccupied { found: String },
}

/// A truncated series. Structural equality is coefficient equality at the
/// same truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: u32,
    terms: BTreeMap<Mono, Rat>,
}

impl TruncatedSeries {
    /// The zero series at the given truncation order.
    pub fn zero(order: u32) -> Self {
        TruncatedSeries { order, terms: BTreeMap::new() }
    }

    /// The constant series `1`.
    pub fn one(order: u32) -> Self {
        Self::constant(order, Rat::one())
    }

    /// A constant series.
    pub fn constant(order: u32, c: Rat) -> Self {
        Self::monomial(order, Mono { z0: 0, z1: 0, z2: 0 }, c)
    }

    /// A single monomial `c * z0^p z1^s z2^a` (zero if beyond truncation).
    pub fn monomial(order: u32, m: Mono, c: Rat) -> Self {
        let mut s = Self::zero(order);
        s.add_term(m, c);
        s
    }

    /// The primary truncated variable `z0`.
    pub fn var_primary(order: u32) -> Self {
        Self::monomial(order, Mono { z0: 1, z1: 0, z2: 0 }, Rat::one())
    }

    /// The secondary truncated variable `z1`.
    pub fn var_secondary(order: u32) -> Self {
        Self::monomial(order, Mono { z0: 0, z1: 1, z2: 0 }, Rat::one())
    }

    /// The auxiliary Laurent monomial `z2^k`.
    pub fn aux_power(order: u32, k: i64) -> Self {
        Self::monomial(order, Mono { z0: 0, z1: 0, z2: k }, Rat::one())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> Rat {
        self.terms.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    /// Add `c * z0^p z1^s z2^a`, dropping cancellations and over-order terms.
    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() || m.tdeg() > self.order {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Re-truncate to a (usually lower) order.
    pub fn truncate(&self, order: u32) -> Self {
        let mut out = Self::zero(order);
        for (m, c) in self.iter() {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(self.order.min(other.order));
        for (m, c) in other.iter() {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.order);
        if c.is_zero() {
            return out;
        }
        for (m, r) in self.iter() {
            out.terms.insert(*m, r * c);
        }
        out
    }

    /// Multiply by a single monomial (shifts every exponent triple).
    pub fn mul_monomial(&self, dm: Mono, c: &Rat) -> Self {
        let mut out = Self::zero(self.order);
        for (m, r) in self.iter() {
            out.add_term(
                Mono { z0: m.z0 + dm.z0, z1: m.z1 + dm.z1, z2: m.z2 + dm.z2 },
                r * c,
            );
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for (m, a) in self.iter() {
            if m.tdeg() > order {
                continue;
            }
            for (n, b) in other.iter() {
                out.add_term(
                    Mono { z0: m.z0 + n.z0, z1: m.z1 + n.z1, z2: m.z2 + n.z2 },
                    a * b,
                );
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.order);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Formal derivative in the primary variable: `z0^p -> p * z0^(p-1)`.
    ///
    /// The top truncated degree of the result is only trustworthy to
    /// `order - 1`; callers comparing derivatives should truncate.
    pub fn primary_derivative(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in self.iter() {
            if m.z0 > 0 {
                out.add_term(Mono { z0: m.z0 - 1, ..*m }, c * rat_int(m.z0 as i64));
            }
        }
        out
    }

    /// Formal derivative in the auxiliary variable: `z2^a -> a * z2^(a-1)`.
    pub fn aux_derivative(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in self.iter() {
            out.add_term(Mono { z2: m.z2 - 1, ..*m }, c * rat_int(m.z2));
        }
        out
    }

    /// Multiply by `z2^k`.
    pub fn aux_shift(&self, k: i64) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in self.iter() {
            out.terms.insert(Mono { z2: m.z2 + k, ..*m }, c.clone());
        }
        out
    }

    /// The weighted derivation `z2^eps * d/dz2` in the auxiliary variable.
    pub fn aux_eps_del(&self, eps: i64) -> Self {
        self.aux_derivative().aux_shift(eps)
    }

    /// The part independent of the primary variable (i.e. the value at
    /// `z0 = 0`, with secondary and auxiliary exponents retained).
    pub fn primary_constant_part(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in self.iter() {
            if m.z0 == 0 {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// The coefficient of `z0^n` as a series in the remaining variables.
    pub fn primary_coefficient(&self, n: u32) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in self.iter() {
            if m.z0 == n {
                out.terms.insert(Mono { z0: 0, ..*m }, c.clone());
            }
        }
        out
    }

    /// Move the primary exponents into the secondary slot (`z0 -> z1`).
    /// Fails if the secondary variable already occurs.
    pub fn promote_secondary(&self) -> Result<Self, SeriesError> {
        let mut out = Self::zero(self.order);
        for (m, c) in self.iter() {
            if m.z1 != 0 {
                return Err(SeriesError::SecondaryOccupied { found: m.to_string() });
            }
            out.terms.insert(Mono { z0: 0, z1: m.z0, z2: m.z2 }, c.clone());
        }
        Ok(out)
    }

    /// Substitute `inner` for the primary variable `z0`.
    ///
    /// `inner` must have positive valuation in the truncated variables, so
    /// each power `inner^p` only touches total degrees `>= p` and the
    /// truncated result is exact.
    pub fn compose_primary(&self, inner: &Self) -> Result<Self, SeriesError> {
        let order = self.order.min(inner.order);
        if let Some((m, _)) = inner.iter().find(|(m, _)| m.tdeg() == 0) {
            return Err(SeriesError::CompositionValuation { found: m.to_string() });
        }
        let powers = power_table(&inner.truncate(order), order);
        let mut out = Self::zero(order);
        for (m, c) in self.iter() {
            if m.z0 > order {
                continue;
            }
            let t = powers[m.z0 as usize].mul_monomial(
                Mono { z0: 0, z1: m.z1, z2: m.z2 },
                c,
            );
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitute `inner` for the auxiliary variable `z2`.
    ///
    /// `inner` must have the shape `z2 * (1 + T)` with `T` of positive
    /// truncated valuation; then `inner^a = z2^a (1+T)^a` makes sense for
    /// every integer `a` via the generalized binomial series.
    pub fn compose_aux(&self, inner: &Self) -> Result<Self, SeriesError> {
        let order = self.order.min(inner.order);
        let t = inner.truncate(order).aux_shift(-1).sub(&Self::one(order));
        if let Some((m, _)) = t.iter().find(|(m, _)| m.tdeg() == 0) {
            return Err(SeriesError::AuxSubstitutionShape { found: m.to_string() });
        }
        let tpows = power_table(&t, order);
        // (1 + T)^a for each distinct auxiliary exponent a, by the binomial
        // series; only finitely many powers of T survive truncation.
        let mut unit_pows: BTreeMap<i64, TruncatedSeries> = BTreeMap::new();
        let mut out = Self::zero(order);
        for (m, c) in self.iter() {
            let up = unit_pows.entry(m.z2).or_insert_with(|| {
                let a = rat_int(m.z2);
                let mut acc = Self::zero(order);
                for (j, tp) in tpows.iter().enumerate() {
                    acc = acc.add(&tp.scale(&binomial(&a, j as u32)));
                }
                acc
            });
            out = out.add(&up.mul_monomial(*m, c));
        }
        Ok(out)
    }

    /// The generalized binomial power `self^k = (1 + T)^k` for an integer
    /// exponent `k` (negative allowed), where `T = self - 1` must have
    /// positive truncated valuation.
    pub fn binom_pow(&self, k: i64) -> Result<Self, SeriesError> {
        let t = self.sub(&Self::one(self.order));
        if let Some((m, _)) = t.iter().find(|(m, _)| m.tdeg() == 0) {
            return Err(SeriesError::NotUnit { found: m.to_string() });
        }
        let a = rat_int(k);
        let mut acc = Self::zero(self.order);
        for (j, tp) in power_table(&t, self.order).iter().enumerate() {
            acc = acc.add(&tp.scale(&binomial(&a, j as u32)));
        }
        Ok(acc)
    }
}

/// `[s^0, s^1, ..., s^order]` at the given truncation order.
fn power_table(s: &TruncatedSeries, order: u32) -> Vec<TruncatedSeries> {
    let mut pows = Vec::with_capacity(order as usize + 1);
    pows.push(TruncatedSeries::one(order));
    for k in 1..=order as usize {
        let next = pows[k - 1].mul(s);
        pows.push(next);
    }
    pows
}

impl fmt::Display for TruncatedSeries {
    /// Canonical ASCII form: monomials in exponent order, explicit signs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, r)) in self.iter().enumerate() {
            if i == 0 {
                if r.is_negative() {
                    write!(f, "-")?;
                }
            } else if r.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = r.abs();
            if m.tdeg() == 0 && m.z2 == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}
