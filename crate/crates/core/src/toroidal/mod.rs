//! The extended two-variable loop algebra.
//!
//! Working over the Laurent ring `R = C[t0^{±1}, t1^{±1}]`, the algebra is
//!
//! ```text
//! (R ⊗ g)  ⊕  K  ⊕  D^eps
//! ```
//!
//! where `K = Omega^1_R / dR` is spanned by the two degree-zero forms
//! `k0 = t0^{-1} dt0`, `k1 = t1^{-1} dt1` and the classes `k[m0,m1]`
//! (`(m0,m1) != (0,0)`), and `D^eps` is the divergence-twisted derivation
//! sector spanned by `t0^{eps-1} d0`, `t0^{eps-1} d1` and
//!
//! ```text
//! dt[m0,m1] = (m0 - eps + 1) t0^{m0} t1^{m1} d1 - m1 t0^{m0} t1^{m1} d0,
//! ```
//!
//! `(m0,m1) != (eps-1, 0)`, with `d_r = t_r d/dt_r`. Brackets of derivations
//! acquire a central two-cocycle weighted by the rational parameter `mu`.
//!
//! All computations pass through a raw presentation (`t0^a t1^b` times a
//! tensor, form, or derivation) and are normalized back into the canonical
//! basis; a derivation-sector result that cannot be normalized is reported
//! as a closure violation rather than silently projected.

mod form;
mod relations;

pub use form::{form_invariance_residual, form_pair, form_pair_elements};
pub use relations::{
    relation_ids, relation_labels, relation_residual, relation_residual_with, RelationLabels,
    SeriesKind,
};

use crate::combination::Combination;
use crate::context::ParamContext;
use crate::scalars::{rat, rat_int, Rat};
use num_traits::Zero;
use std::fmt;

/// Canonical basis keys.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    /// `t0^a t1^b ⊗ u_i` for `u_i` a basis element of the coefficient algebra.
    Torus { a: i64, b: i64, u: usize },
    /// The degree form `k0 = t0^{-1} dt0`.
    K0,
    /// The degree form `k1 = t1^{-1} dt1`.
    K1,
    /// `k[m0,m1]`: the class of `(1/m1) t0^{m0} t1^{m1} k0` when `m1 != 0`,
    /// of `-(1/m0) t0^{m0} k1` when `m1 = 0`; `(m0,m1) != (0,0)`.
    KForm { m0: i64, m1: i64 },
    /// `dt[m0,m1]` as in the module docs; `(m0,m1) != (eps-1, 0)`.
    DTilde { m0: i64, m1: i64 },
    /// `t0^{eps-1} d0`.
    D0Shift,
    /// `t0^{eps-1} d1`.
    D1Shift,
}

/// An element: a sparse combination of canonical keys.
pub type Element = Combination<Key>;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ToroidalError {
    #[error("key {0} is excluded from the basis")]
    ExcludedKey(String),
    #[error("key {key} is not valid at eps = {eps}")]
    InvalidKey { key: String, eps: i64 },
    #[error("coefficient index {0} out of range for algebra of dimension {1}")]
    BadCoefficientIndex(usize, usize),
    #[error("derivation part outside the twisted sector: {witness}")]
    ClosureViolation { witness: String },
    #[error("unknown relation id {0} (valid: 1..=12)")]
    UnknownRelation(u32),
    #[error("relation {id} labels invalid: {reason}")]
    BadLabels { id: u32, reason: String },
    #[error("the invariant form is defined at eps = 1 only (got eps = {0})")]
    FormNeedsEpsOne(i64),
}

impl Key {
    /// `k[m0,m1]`; rejects the excluded index `(0,0)`.
    pub fn kform(m0: i64, m1: i64) -> Result<Key, ToroidalError> {
        if (m0, m1) == (0, 0) {
            return Err(ToroidalError::ExcludedKey("k[0,0]".into()));
        }
        Ok(Key::KForm { m0, m1 })
    }

    /// `dt[m0,m1]`; rejects the excluded index `(eps-1, 0)`.
    pub fn dtilde(m0: i64, m1: i64, eps: i64) -> Result<Key, ToroidalError> {
        if (m0, m1) == (eps - 1, 0) {
            return Err(ToroidalError::ExcludedKey(format!("dt[{m0},{m1}] at eps = {eps}")));
        }
        Ok(Key::DTilde { m0, m1 })
    }

    /// The `t0`-exponent carried by the key (gradings read off from it).
    pub fn t0_exponent(&self, eps: i64) -> i64 {
        match self {
            Key::Torus { a, .. } => *a,
            Key::K0 | Key::K1 => 0,
            Key::KForm { m0, .. } => *m0,
            Key::DTilde { m0, .. } => *m0,
            Key::D0Shift | Key::D1Shift => eps - 1,
        }
    }

    /// The `t1`-exponent carried by the key.
    pub fn t1_exponent(&self) -> i64 {
        match self {
            Key::Torus { b, .. } => *b,
            Key::K0 | Key::K1 => 0,
            Key::KForm { m1, .. } => *m1,
            Key::DTilde { m1, .. } => *m1,
            Key::D0Shift | Key::D1Shift => 0,
        }
    }

    pub(crate) fn check(&self, ctx: &ParamContext) -> Result<(), ToroidalError> {
        match self {
            Key::KForm { m0: 0, m1: 0 } => Err(ToroidalError::InvalidKey {
                key: self.to_string(),
                eps: ctx.eps,
            }),
            Key::DTilde { m0, m1 } if (*m0, *m1) == (ctx.eps - 1, 0) => {
                Err(ToroidalError::InvalidKey { key: self.to_string(), eps: ctx.eps })
            }
            Key::Torus { u, .. } if *u >= ctx.algebra.dim => Err(
                ToroidalError::BadCoefficientIndex(*u, ctx.algebra.dim),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Torus { a, b, u } => write!(f, "u{u}[{a},{b}]"),
            Key::K0 => write!(f, "k0"),
            Key::K1 => write!(f, "k1"),
            Key::KForm { m0, m1 } => write!(f, "k[{m0},{m1}]"),
            Key::DTilde { m0, m1 } => write!(f, "dt[{m0},{m1}]"),
            Key::D0Shift => write!(f, "d0shift"),
            Key::D1Shift => write!(f, "d1shift"),
        }
    }
}

/// Raw (pre-normalization) generators: `t0^a t1^b` times a tensor factor,
/// a one-form `k_r`, or a derivation `d_r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Raw {
    Tensor { a: i64, b: i64, u: usize },
    KR { a: i64, b: i64, r: u8 },
    DR { a: i64, b: i64, r: u8 },
}

impl fmt::Display for Raw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Raw::Tensor { a, b, u } => write!(f, "t0^{a} t1^{b} (x) u{u}"),
            Raw::KR { a, b, r } => write!(f, "t0^{a} t1^{b} k{r}"),
            Raw::DR { a, b, r } => write!(f, "t0^{a} t1^{b} d{r}"),
        }
    }
}

type RawSum = Combination<Raw>;

/// Class of `t0^{m0} t1^{m1} k_r` in `K`, in the canonical basis.
///
/// Uses the exactness relation `m0 t^M k0 + m1 t^M k1 = d(t^M) = 0`:
/// for `m1 != 0` the `k0`-form is `m1 * k[m0,m1]` and the `k1`-form is
/// `-m0 * k[m0,m1]`; for `m1 = 0, m0 != 0` the `k0`-form is exact (zero)
/// and the `k1`-form is `-m0 * k[m0,0]`.
pub fn kform_normalize(m0: i64, m1: i64, r: u8) -> Element {
    assert!(r < 2, "form index must be 0 or 1");
    match (m0, m1, r) {
        (0, 0, 0) => Element::term(Key::K0, rat_int(1)),
        (0, 0, 1) => Element::term(Key::K1, rat_int(1)),
        (_, 0, 0) => Element::zero(),
        (m0, 0, 1) => Element::term(Key::KForm { m0, m1: 0 }, rat_int(-m0)),
        (m0, m1, 0) => Element::term(Key::KForm { m0, m1 }, rat_int(m1)),
        (m0, m1, 1) => Element::term(Key::KForm { m0, m1 }, rat_int(-m0)),
        _ => unreachable!(),
    }
}

/// Expand a canonical key into raw generators.
fn expand(key: &Key, eps: i64) -> Vec<(Raw, Rat)> {
    match key {
        Key::Torus { a, b, u } => vec![(Raw::Tensor { a: *a, b: *b, u: *u }, rat_int(1))],
        Key::K0 => vec![(Raw::KR { a: 0, b: 0, r: 0 }, rat_int(1))],
        Key::K1 => vec![(Raw::KR { a: 0, b: 0, r: 1 }, rat_int(1))],
        Key::KForm { m0, m1 } => {
            if *m1 != 0 {
                vec![(Raw::KR { a: *m0, b: *m1, r: 0 }, rat(1, *m1))]
            } else {
                vec![(Raw::KR { a: *m0, b: 0, r: 1 }, rat(-1, *m0))]
            }
        }
        Key::DTilde { m0, m1 } => vec![
            (Raw::DR { a: *m0, b: *m1, r: 1 }, rat_int(*m0 - eps + 1)),
            (Raw::DR { a: *m0, b: *m1, r: 0 }, rat_int(-*m1)),
        ],
        Key::D0Shift => vec![(Raw::DR { a: eps - 1, b: 0, r: 0 }, rat_int(1))],
        Key::D1Shift => vec![(Raw::DR { a: eps - 1, b: 0, r: 1 }, rat_int(1))],
    }
}

/// Raw bracket of two raw generators.
fn raw_bracket(x: &Raw, y: &Raw, ctx: &ParamContext) -> RawSum {
    let g = &ctx.algebra;
    let mut out = RawSum::zero();
    match (x, y) {
        (Raw::Tensor { a: m0, b: m1, u }, Raw::Tensor { a: n0, b: n1, u: v }) => {
            let (mm0, mm1) = (m0 + n0, m1 + n1);
            for (k, c) in g.bracket(*u, *v) {
                out.add_term(Raw::Tensor { a: mm0, b: mm1, u: k }, c);
            }
            let pair = g.pairing(*u, *v);
            if !pair.is_zero() {
                out.add_term(Raw::KR { a: mm0, b: mm1, r: 0 }, &pair * rat_int(*m0));
                out.add_term(Raw::KR { a: mm0, b: mm1, r: 1 }, &pair * rat_int(*m1));
            }
        }
        (Raw::KR { .. }, _) | (_, Raw::KR { .. })
            if !matches!(x, Raw::DR { .. }) && !matches!(y, Raw::DR { .. }) =>
        {
            // forms are central among tensors and forms
        }
        (Raw::DR { a: m0, b: m1, r: i }, Raw::Tensor { a: n0, b: n1, u }) => {
            let ni = if *i == 0 { *n0 } else { *n1 };
            out.add_term(Raw::Tensor { a: m0 + n0, b: m1 + n1, u: *u }, rat_int(ni));
        }
        (Raw::Tensor { .. }, Raw::DR { .. }) => {
            out = raw_bracket(y, x, ctx).neg();
        }
        (Raw::DR { a: m0, b: m1, r: i }, Raw::KR { a: n0, b: n1, r: j }) => {
            let ni = if *i == 0 { *n0 } else { *n1 };
            let (mm0, mm1) = (m0 + n0, m1 + n1);
            out.add_term(Raw::KR { a: mm0, b: mm1, r: *j }, rat_int(ni));
            if i == j {
                out.add_term(Raw::KR { a: mm0, b: mm1, r: 0 }, rat_int(*m0));
                out.add_term(Raw::KR { a: mm0, b: mm1, r: 1 }, rat_int(*m1));
            }
        }
        (Raw::KR { .. }, Raw::DR { .. }) => {
            out = raw_bracket(y, x, ctx).neg();
        }
        (Raw::DR { a: m0, b: m1, r: i }, Raw::DR { a: n0, b: n1, r: j }) => {
            let ni = if *i == 0 { *n0 } else { *n1 };
            let mj = if *j == 0 { *m0 } else { *m1 };
            let (mm0, mm1) = (m0 + n0, m1 + n1);
            out.add_term(Raw::DR { a: mm0, b: mm1, r: *j }, rat_int(ni));
            out.add_term(Raw::DR { a: mm0, b: mm1, r: *i }, rat_int(-mj));
            // the mu-weighted two-cocycle (antisymmetric modulo exact forms)
            let w = -&ctx.mu * rat_int(mj) * rat_int(ni);
            if !w.is_zero() {
                out.add_term(Raw::KR { a: mm0, b: mm1, r: 0 }, &w * rat_int(*m0));
                out.add_term(Raw::KR { a: mm0, b: mm1, r: 1 }, &w * rat_int(*m1));
            }
        }
        _ => unreachable!("all raw sector pairs covered"),
    }
    out
}

/// Normalize a raw sum into the canonical basis.
///
/// Tensors and forms normalize term by term; the derivation sector must
/// regroup into `dt[..]` / shift keys, and anything else is a closure
/// violation (the twisted sector is a subalgebra, so a violation signals
/// corrupted input or an internal bug).
fn normalize(raw: RawSum, eps: i64) -> Result<Element, ToroidalError> {
    use std::collections::BTreeMap;
    let mut out = Element::zero();
    // accumulated derivation coefficients per (a, b): (d0 coeff, d1 coeff)
    let mut ders: BTreeMap<(i64, i64), (Rat, Rat)> = BTreeMap::new();
    for (k, coeff) in raw.into_iter() {
        match k {
            Raw::Tensor { a, b, u } => out.add_term(Key::Torus { a, b, u }, coeff),
            Raw::KR { a, b, r } => out.add_assign(&kform_normalize(a, b, r).scale(&coeff)),
            Raw::DR { a, b, r } => {
                let slot = ders.entry((a, b)).or_insert_with(|| (Rat::zero(), Rat::zero()));
                if r == 0 {
                    slot.0 += coeff;
                } else {
                    slot.1 += coeff;
                }
            }
        }
    }
    for ((a, b), (x, y)) in ders {
        if x.is_zero() && y.is_zero() {
            continue;
        }
        if (a, b) == (eps - 1, 0) {
            out.add_term(Key::D0Shift, x);
            out.add_term(Key::D1Shift, y);
        } else if b != 0 {
            // x d0raw + y d1raw = lambda dt[a,b] requires
            // lambda = -x/b and y = lambda (a - eps + 1).
            if &x * rat_int(a - eps + 1) + &y * rat_int(b) != Rat::zero() {
                return Err(ToroidalError::ClosureViolation {
                    witness: format!("({x}) t0^{a} t1^{b} d0 + ({y}) t0^{a} t1^{b} d1"),
                });
            }
            out.add_term(Key::DTilde { m0: a, m1: b }, -x / rat_int(b));
        } else {
            // b = 0, a != eps-1: only multiples of t0^a d1 lie in the sector
            if !x.is_zero() {
                return Err(ToroidalError::ClosureViolation {
                    witness: format!("({x}) t0^{a} d0"),
                });
            }
            out.add_term(Key::DTilde { m0: a, m1: 0 }, y / rat_int(a - eps + 1));
        }
    }
    Ok(out)
}

/// Bracket of two canonical basis keys.
pub fn bracket_keys(x: &Key, y: &Key, ctx: &ParamContext) -> Result<Element, ToroidalError> {
    x.check(ctx)?;
    y.check(ctx)?;
    let xs = expand(x, ctx.eps);
    let ys = expand(y, ctx.eps);
    let mut raw = RawSum::zero();
    for (rx, cx) in &xs {
        for (ry, cy) in &ys {
            raw.add_assign(&raw_bracket(rx, ry, ctx).scale(&(cx * cy)));
        }
    }
    normalize(raw, ctx.eps)
}

/// Bracket of two elements (bilinear extension of [`bracket_keys`]).
pub fn bracket(x: &Element, y: &Element, ctx: &ParamContext) -> Result<Element, ToroidalError> {
    let mut out = Element::zero();
    for (kx, cx) in x.iter() {
        for (ky, cy) in y.iter() {
            out.add_assign(&bracket_keys(kx, ky, ctx)?.scale(&(cx * cy)));
        }
    }
    Ok(out)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`; zero iff the Jacobi identity holds
/// on the triple.
pub fn jacobi_residual(
    x: &Element,
    y: &Element,
    z: &Element,
    ctx: &ParamContext,
) -> Result<Element, ToroidalError> {
    let mut out = bracket(x, &bracket(y, z, ctx)?, ctx)?;
    out.add_assign(&bracket(y, &bracket(z, x, ctx)?, ctx)?);
    out.add_assign(&bracket(z, &bracket(x, y, ctx)?, ctx)?);
    Ok(out)
}

/// Direction selector for [`d_eps_convert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DConvert {
    /// Expand the twisted-family element `d^eps[n,m]` in the canonical basis:
    /// `dt[n,m] + mu (1-eps) (n + (1-eps)/2) m^2 k[n,m]`.
    FromTilde,
    /// Express `dt[n,m]` as the twisted-family element minus the same
    /// correction (the inverse map, returned in the canonical basis).
    ToTilde,
}

/// Convert between `d^eps[n,m]` and the canonical `dt[n,m]` basis key.
///
/// For `m = 0` the family element is `(n - eps + 1) t0^n d1 = dt[n,0]`
/// (zero when `n = eps - 1`), so both directions coincide.
pub fn d_eps_convert(n: i64, m: i64, dir: DConvert, ctx: &ParamContext) -> Element {
    let eps = ctx.eps;
    let mut out = Element::zero();
    if (n, m) != (eps - 1, 0) {
        out.add_term(Key::DTilde { m0: n, m1: m }, rat_int(1));
    }
    if m != 0 {
        let half = rat(1, 2);
        let corr = &ctx.mu
            * rat_int(1 - eps)
            * (rat_int(n) + half * rat_int(1 - eps))
            * rat_int(m * m);
        let sign = match dir {
            DConvert::FromTilde => corr,
            DConvert::ToTilde => -corr,
        };
        out.add_term(Key::KForm { m0: n, m1: m }, sign);
    }
    out
}

/// The family element `d^eps[n,m]` in the canonical basis.
pub fn d_family(n: i64, m: i64, ctx: &ParamContext) -> Element {
    d_eps_convert(n, m, DConvert::FromTilde, ctx)
}

/// `t0^n d1` in the canonical basis.
pub fn t0_d1(n: i64, eps: i64) -> Element {
    if n == eps - 1 {
        Element::term(Key::D1Shift, rat_int(1))
    } else {
        Element::term(Key::DTilde { m0: n, m1: 0 }, rat(1, n - eps + 1))
    }
}

/// `t0^n k1` in the canonical basis.
pub fn t0_k1(n: i64) -> Element {
    if n == 0 {
        Element::term(Key::K1, rat_int(1))
    } else {
        Element::term(Key::KForm { m0: n, m1: 0 }, rat_int(-n))
    }
}
