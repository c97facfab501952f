//! Coefficient-wise checker for the twelve generating-series bracket
//! identities of the extended loop algebra.
//!
//! Each identity relates a bracket of two series to a finite sum of terms
//!
//! ```text
//! scalar * (D^r S)(w) * (D^s delta)      D = w^eps d/dw,
//! delta  = z^{eps-1} delta(w/z) = sum_t w^t z^{eps-1-t}.
//! ```
//!
//! The checker fixes one coefficient index on each side (`i` for the
//! `z`-series, `j` for the `w`-series), computes the bracket of the two
//! algebra elements, evaluates the finitely many right-hand contributions
//! at the matching `(z, w)`-powers, and returns the difference. A zero
//! residual at every index pair is equivalent to the series identity.
//!
//! Power conventions (series index `n` -> power of the variable):
//! torus currents, the `t0^n k1` current and the `t0^n d1` current sit at
//! `eps-1-n`; the twisted-derivation family at `2eps-2-n`; the two-index
//! form family at `-n`. The families with vanishing second index are the
//! zero series; the constant `k0` sits at power `0`.

use super::{bracket, d_family, kform_normalize, t0_d1, t0_k1, Element, Key, ToroidalError};
use crate::context::ParamContext;
use crate::factorial::eps_pochhammer;
use crate::scalars::{rat_int, Rat};
use num_traits::Zero;

/// A generating series over the algebra, identified by its kind and fixed
/// second (loop) index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesKind {
    /// `sum_n (t0^n t1^m (x) u) z^{eps-1-n}`.
    Torus { m: i64, u: usize },
    /// `sum_n (t0^n k1) z^{eps-1-n}`.
    KOne,
    /// `sum_n k[n,m] z^{-n}`; the zero series when `m = 0`.
    KBig { m: i64 },
    /// `sum_n (t0^n d1) z^{eps-1-n}`.
    DOne,
    /// `sum_n d^eps[n,m] z^{2eps-2-n}`; the zero series when `m = 0`.
    DBig { m: i64 },
    /// The constant series `k0` (at power `0`).
    ConstK0,
}

impl SeriesKind {
    /// Power of the formal variable carried by index `n`.
    pub fn z_power(&self, n: i64, eps: i64) -> i64 {
        match self {
            SeriesKind::Torus { .. } | SeriesKind::KOne | SeriesKind::DOne => eps - 1 - n,
            SeriesKind::KBig { .. } => -n,
            SeriesKind::DBig { .. } => 2 * eps - 2 - n,
            SeriesKind::ConstK0 => 0,
        }
    }

    /// Inverse of [`z_power`](Self::z_power); `None` when no index sits at `p`.
    pub fn index_for_power(&self, p: i64, eps: i64) -> Option<i64> {
        match self {
            SeriesKind::Torus { .. } | SeriesKind::KOne | SeriesKind::DOne => Some(eps - 1 - p),
            SeriesKind::KBig { .. } => Some(-p),
            SeriesKind::DBig { .. } => Some(2 * eps - 2 - p),
            SeriesKind::ConstK0 => (p == 0).then_some(0),
        }
    }

    /// The algebra element at series index `n`.
    pub fn coeff(&self, n: i64, ctx: &ParamContext) -> Element {
        match self {
            SeriesKind::Torus { m, u } => Element::term(Key::Torus { a: n, b: *m, u: *u }, rat_int(1)),
            SeriesKind::KOne => t0_k1(n),
            SeriesKind::KBig { m: 0 } | SeriesKind::DBig { m: 0 } => Element::zero(),
            SeriesKind::KBig { m } => Element::term(Key::KForm { m0: n, m1: *m }, rat_int(1)),
            SeriesKind::DOne => t0_d1(n, ctx.eps),
            SeriesKind::DBig { m } => d_family(n, *m, ctx),
            SeriesKind::ConstK0 => {
                if n == 0 {
                    kform_normalize(0, 0, 0)
                } else {
                    Element::zero()
                }
            }
        }
    }
}

/// Which label fields a relation reads (used by drivers to build grids
/// without redundant sweeps).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationLabels {
    /// Loop index of the first series (`m`, or `k` for a derivation family).
    pub m: i64,
    /// Loop index of the second series (`n`, or `l`).
    pub n: i64,
    /// Coefficient-algebra basis index for the first current.
    pub u: usize,
    /// Coefficient-algebra basis index for the second current.
    pub v: usize,
}

/// Usage mask for [`RelationLabels`] per relation id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelUsage {
    pub m: bool,
    pub n: bool,
    pub u: bool,
    pub v: bool,
}

/// The valid relation ids.
pub fn relation_ids() -> impl Iterator<Item = u32> {
    1..=12
}

/// Which label fields relation `id` reads.
pub fn relation_labels(id: u32) -> Result<LabelUsage, ToroidalError> {
    let mask = |m, n, u, v| LabelUsage { m, n, u, v };
    Ok(match id {
        1 => mask(true, true, true, true),
        2 | 3 => mask(true, true, true, false),
        4 => mask(false, true, true, false),
        5 | 6 | 10 => mask(true, true, false, false),
        7 => mask(true, false, false, false),
        8 | 11 => mask(false, true, false, false),
        9 => mask(false, false, false, false),
        12 => mask(true, false, true, false),
        _ => return Err(ToroidalError::UnknownRelation(id)),
    })
}

struct RhsTerm {
    kind: SeriesKind,
    /// Derivatives applied to the series factor.
    r: u32,
    /// Derivatives applied to the delta factor.
    s: u32,
    scalar: Rat,
}

struct Part {
    a: SeriesKind,
    b: SeriesKind,
    rhs: Vec<RhsTerm>,
}

fn term(kind: SeriesKind, r: u32, s: u32, scalar: Rat) -> RhsTerm {
    RhsTerm { kind, r, s, scalar }
}

fn ipow(base: i64, exp: u32) -> Rat {
    let mut out = rat_int(1);
    for _ in 0..exp {
        out = out * rat_int(base);
    }
    out
}

fn check_g_index(id: u32, idx: usize, ctx: &ParamContext) -> Result<(), ToroidalError> {
    if idx >= ctx.algebra.dim {
        return Err(ToroidalError::BadLabels {
            id,
            reason: format!(
                "coefficient index {idx} out of range for algebra of dimension {}",
                ctx.algebra.dim
            ),
        });
    }
    Ok(())
}

fn check_nonzero(id: u32, name: &str, value: i64) -> Result<(), ToroidalError> {
    if value == 0 {
        return Err(ToroidalError::BadLabels {
            id,
            reason: format!("label {name} must be nonzero for this relation"),
        });
    }
    Ok(())
}

/// The relation bodies. Labels follow the statement of each identity:
/// `m`/`n` are torus loop indices, `k = labels.m` and `l = labels.n` are
/// the (nonzero) loop indices of form/derivation families.
fn parts(id: u32, lab: &RelationLabels, ctx: &ParamContext) -> Result<Vec<Part>, ToroidalError> {
    use SeriesKind::*;
    let g = &ctx.algebra;
    let (m, n) = (lab.m, lab.n);
    let mu = ctx.mu.clone();
    Ok(match id {
        1 => {
            check_g_index(id, lab.u, ctx)?;
            check_g_index(id, lab.v, ctx)?;
            let mut rhs: Vec<RhsTerm> = g
                .bracket(lab.u, lab.v)
                .into_iter()
                .map(|(k, c)| term(Torus { m: m + n, u: k }, 0, 0, c))
                .collect();
            let gram = g.pairing(lab.u, lab.v);
            if !gram.is_zero() {
                rhs.push(term(KBig { m: m + n }, 1, 0, &gram * rat_int(m)));
                rhs.push(term(KBig { m: m + n }, 0, 1, &gram * rat_int(m + n)));
                if m + n == 0 {
                    rhs.push(term(KOne, 0, 0, &gram * rat_int(m)));
                    rhs.push(term(ConstK0, 0, 1, gram));
                }
            }
            vec![Part { a: Torus { m, u: lab.u }, b: Torus { m: n, u: lab.v }, rhs }]
        }
        2 => {
            check_g_index(id, lab.u, ctx)?;
            check_nonzero(id, "m", m)?;
            vec![
                Part { a: KOne, b: Torus { m: n, u: lab.u }, rhs: vec![] },
                Part { a: KBig { m }, b: Torus { m: n, u: lab.u }, rhs: vec![] },
            ]
        }
        3 => {
            check_g_index(id, lab.u, ctx)?;
            check_nonzero(id, "m", m)?;
            let s = Torus { m: m + n, u: lab.u };
            vec![Part {
                a: DBig { m },
                b: Torus { m: n, u: lab.u },
                rhs: vec![term(s.clone(), 1, 0, rat_int(m)), term(s, 0, 1, rat_int(m + n))],
            }]
        }
        4 => {
            check_g_index(id, lab.u, ctx)?;
            let s = Torus { m: n, u: lab.u };
            vec![Part { a: DOne, b: s.clone(), rhs: vec![term(s, 0, 0, rat_int(n))] }]
        }
        5 => {
            check_nonzero(id, "m", m)?;
            check_nonzero(id, "n", n)?;
            vec![
                Part { a: KOne, b: KOne, rhs: vec![] },
                Part { a: KBig { m }, b: KBig { m: n }, rhs: vec![] },
                Part { a: KOne, b: KBig { m: n }, rhs: vec![] },
            ]
        }
        6 => {
            check_nonzero(id, "m", m)?;
            check_nonzero(id, "n", n)?;
            let mut rhs = vec![
                term(KBig { m: m + n }, 1, 0, rat_int(m)),
                term(KBig { m: m + n }, 0, 1, rat_int(m + n)),
            ];
            if m + n == 0 {
                rhs.push(term(KOne, 0, 0, rat_int(m)));
                rhs.push(term(ConstK0, 0, 1, rat_int(1)));
            }
            vec![Part { a: DBig { m }, b: KBig { m: n }, rhs }]
        }
        7 => {
            check_nonzero(id, "m", m)?;
            vec![Part {
                a: DBig { m },
                b: KOne,
                rhs: vec![
                    term(KBig { m }, 2, 0, rat_int(m)),
                    term(KBig { m }, 1, 1, rat_int(2 * m)),
                    term(KBig { m }, 0, 2, rat_int(m)),
                ],
            }]
        }
        8 => {
            check_nonzero(id, "n", n)?;
            vec![Part {
                a: DOne,
                b: KBig { m: n },
                rhs: vec![term(KBig { m: n }, 0, 0, rat_int(n))],
            }]
        }
        9 => vec![
            Part { a: DOne, b: KOne, rhs: vec![term(ConstK0, 0, 1, rat_int(1))] },
            Part { a: DOne, b: DOne, rhs: vec![] },
        ],
        10 => {
            check_nonzero(id, "m", m)?;
            check_nonzero(id, "n", n)?;
            let mut rhs = vec![
                term(DBig { m: m + n }, 1, 0, rat_int(m)),
                term(DBig { m: m + n }, 0, 1, rat_int(m + n)),
            ];
            if m + n == 0 {
                rhs.push(term(DOne, 2, 0, rat_int(-m)));
                rhs.push(term(KOne, 2, 0, &mu * rat_int(m * m * m)));
            }
            for r in 0..=3u32 {
                let scalar = &mu
                    * crate::scalars::binomial_int(3, r)
                    * ipow(m, r)
                    * ipow(m + n, 3 - r);
                rhs.push(term(KBig { m: m + n }, r, 3 - r, scalar));
            }
            vec![Part { a: DBig { m }, b: DBig { m: n }, rhs }]
        }
        11 => {
            check_nonzero(id, "n", n)?;
            vec![Part {
                a: DOne,
                b: DBig { m: n },
                rhs: vec![
                    term(DBig { m: n }, 0, 0, rat_int(n)),
                    term(KBig { m: n }, 0, 2, &mu * rat_int(n * n * n)),
                ],
            }]
        }
        12 => {
            check_g_index(id, lab.u, ctx)?;
            check_nonzero(id, "m", m)?;
            // handled separately in the residual driver
            vec![]
        }
        _ => return Err(ToroidalError::UnknownRelation(id)),
    })
}

/// One right-hand contribution at fixed `(z, w)`-powers `(p_z, q_w)`.
///
/// The delta factor fixes `t = eps-1-p_z`; the series factor must then sit
/// at power `q_w - t - (r+s)(eps-1)`, and the two derivative stacks
/// contribute step-`eps-1` falling products of that power and of `t`.
fn eval_term(t: &RhsTerm, p_z: i64, q_w: i64, ctx: &ParamContext) -> Element {
    let eps = ctx.eps;
    let tt = eps - 1 - p_z;
    let q_pow = q_w - tt - i64::from(t.r + t.s) * (eps - 1);
    let Some(idx) = t.kind.index_for_power(q_pow, eps) else {
        return Element::zero();
    };
    let c = eps_pochhammer(&rat_int(q_pow), t.r, eps)
        * eps_pochhammer(&rat_int(tt), t.s, eps)
        * &t.scalar;
    if c.is_zero() {
        Element::zero()
    } else {
        t.kind.coeff(idx, ctx).scale(&c)
    }
}

/// Residual of relation `id` at series indices `(i, j)`, with the left-hand
/// bracket evaluated under `ctx_lhs` and the right-hand expansion under
/// `ctx_rhs`. Passing two different contexts is the fault-injection hook;
/// honest checks use [`relation_residual`].
pub fn relation_residual_with(
    id: u32,
    lab: &RelationLabels,
    i: i64,
    j: i64,
    ctx_lhs: &ParamContext,
    ctx_rhs: &ParamContext,
) -> Result<Element, ToroidalError> {
    if id == 12 {
        parts(id, lab, ctx_rhs)?; // label validation only
        let d0 = Element::term(Key::D0Shift, rat_int(1));
        let kinds = [
            SeriesKind::Torus { m: lab.m, u: lab.u },
            SeriesKind::KOne,
            SeriesKind::KBig { m: lab.m },
            SeriesKind::DOne,
            SeriesKind::DBig { m: lab.m },
        ];
        let eps_r = ctx_rhs.eps;
        let mut out = Element::zero();
        for kind in kinds {
            out.add_assign(&bracket(&d0, &kind.coeff(j, ctx_lhs), ctx_lhs)?);
            let c = rat_int(kind.z_power(j, eps_r) - eps_r + 1);
            out.add_assign(&kind.coeff(j + eps_r - 1, ctx_rhs).scale(&c));
        }
        return Ok(out);
    }
    let mut out = Element::zero();
    for part in parts(id, lab, ctx_rhs)? {
        out.add_assign(&bracket(
            &part.a.coeff(i, ctx_lhs),
            &part.b.coeff(j, ctx_lhs),
            ctx_lhs,
        )?);
        let p_z = part.a.z_power(i, ctx_rhs.eps);
        let q_w = part.b.z_power(j, ctx_rhs.eps);
        for t in &part.rhs {
            out.add_assign(&eval_term(t, p_z, q_w, ctx_rhs).neg());
        }
    }
    Ok(out)
}

/// Residual of relation `id` at series indices `(i, j)`; zero exactly when
/// the identity holds at that coefficient.
pub fn relation_residual(
    id: u32,
    lab: &RelationLabels,
    i: i64,
    j: i64,
    ctx: &ParamContext,
) -> Result<Element, ToroidalError> {
    relation_residual_with(id, lab, i, j, ctx, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::GAlgebra;
    use crate::scalars::rat;
    use std::sync::Arc;

    fn ctx(eps: i64, mu: Rat, g: Arc<GAlgebra>) -> ParamContext {
        ParamContext::new(eps, mu, rat_int(2), rat(1, 5), rat_int(7), g).unwrap()
    }

    fn labels(m: i64, n: i64, u: usize, v: usize) -> RelationLabels {
        RelationLabels { m, n, u, v }
    }

    #[test]
    fn all_relations_hold_on_small_box() {
        for g in [GAlgebra::abelian(), GAlgebra::sl2()] {
            for eps in [0i64, 1, 2] {
                for mu in [rat_int(0), rat(1, 3)] {
                    let c = ctx(eps, mu, g.clone());
                    for id in relation_ids() {
                        let usage = relation_labels(id).unwrap();
                        let ms: &[i64] = if usage.m { &[1, -2] } else { &[1] };
                        let ns: &[i64] = if usage.n { &[1, 2, -1] } else { &[1] };
                        let us: Vec<usize> =
                            if usage.u { (0..g.dim).collect() } else { vec![0] };
                        let vs: Vec<usize> =
                            if usage.v { (0..g.dim).collect() } else { vec![0] };
                        for &m in ms {
                            for &n in ns {
                                for &u in &us {
                                    for &v in &vs {
                                        let lab = labels(m, n, u, v);
                                        for i in -2..=2 {
                                            for j in -2..=2 {
                                                let r = relation_residual(id, &lab, i, j, &c)
                                                    .unwrap();
                                                assert!(
                                                    r.is_zero(),
                                                    "relation {id} eps={eps} lab=({m},{n},{u},{v}) \
                                                     (i,j)=({i},{j}): {r}"
                                                );
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relation_four_matches_direct_expansion() {
        let c = ctx(0, rat(1, 2), GAlgebra::abelian());
        for i in -2..=2i64 {
            for j in -2..=2i64 {
                for n in [-1i64, 0, 2] {
                    let lhs = bracket(
                        &t0_d1(i, c.eps),
                        &Element::term(Key::Torus { a: j, b: n, u: 0 }, rat_int(1)),
                        &c,
                    )
                    .unwrap();
                    let want =
                        Element::term(Key::Torus { a: i + j, b: n, u: 0 }, rat_int(n));
                    assert_eq!(lhs, want);
                }
            }
        }
    }

    #[test]
    fn relation_ten_delta_branch() {
        // opposite loop indices, including the mu-weighted central tail
        let c = ctx(2, rat(1, 2), GAlgebra::sl2());
        let lab = labels(3, -3, 0, 0);
        for i in -3..=3 {
            for j in -3..=3 {
                let r = relation_residual(10, &lab, i, j, &c).unwrap();
                assert!(r.is_zero(), "(i,j)=({i},{j}): {r}");
            }
        }
    }

    #[test]
    fn mismatched_contexts_leave_residual() {
        // The torus/form sector is insensitive to the series parameter (the
        // identities there hold uniformly in it, with both sides shifting
        // conventions together), so the fault must target a relation whose
        // elements live in the derivation sector.
        let g = GAlgebra::sl2();
        let c = ctx(0, rat(1, 3), g.clone());
        let c_off = ctx(1, rat(1, 3), g);
        let lab = labels(1, 1, 0, 1);
        for id in [3u32, 10, 11, 12] {
            let found = (-3..=3).any(|i| {
                (-3..=3).any(|j| {
                    !relation_residual_with(id, &lab, i, j, &c, &c_off)
                        .unwrap()
                        .is_zero()
                })
            });
            assert!(found, "shifting eps on one side must break relation {id}");
        }
        // ... while relation 1 genuinely stays zero under the same fault.
        let quiet = (-3..=3).all(|i| {
            (-3..=3).all(|j| {
                relation_residual_with(1, &lab, i, j, &c, &c_off)
                    .unwrap()
                    .is_zero()
            })
        });
        assert!(quiet);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let c = ctx(0, rat_int(0), GAlgebra::sl2());
        let lab = labels(1, 1, 0, 0);
        assert!(matches!(
            relation_residual(13, &lab, 0, 0, &c),
            Err(ToroidalError::UnknownRelation(13))
        ));
        assert!(matches!(
            relation_residual(10, &labels(0, 1, 0, 0), 0, 0, &c),
            Err(ToroidalError::BadLabels { id: 10, .. })
        ));
        assert!(matches!(
            relation_residual(1, &labels(1, 1, 5, 0), 0, 0, &c),
            Err(ToroidalError::BadLabels { id: 1, .. })
        ));
    }
}
