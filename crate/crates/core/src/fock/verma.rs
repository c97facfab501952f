//! The affine-Virasoro generalized Verma module.
//!
//! Basis words are normally ordered products of creation operators
//! `L(-n)`, `u_i(-n)` (`n >= 1`) applied to a `U`-basis vector. A generator
//! applied to a word is rewritten back into the basis with the commutation
//! rules
//!
//! ```text
//! [L(m), L(n)]   = (m - n) L(m+n) + (m^3 - m)/12 · δ_{m+n,0} · c
//! [L(m), u(n)]   = -n · u(m+n)
//! [u(m), v(n)]   = [u,v](m+n) + m · δ_{m+n,0} · <u,v> · ℓ
//! ```
//!
//! together with the boundary actions on the bottom layer `U`: positive
//! modes annihilate, `L(0)` acts as `β` (so as `β + degree` on a word),
//! `u_i(0)` acts by the attached matrices, `k` by `ℓ`, and the Virasoro
//! central element by `c = 24·μ·ℓ - 2`.

use super::{FockError, ModuleContext, VOp, VSpecies, VermaVector, VermaWord};
use crate::scalars::{rat, rat_int, Rat};
use num_traits::Zero;

/// A generator of the affine-Virasoro algebra acting on the Verma module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VGen {
    /// Virasoro mode `L(m)`.
    L(i64),
    /// Current mode `u_i(m)`.
    U(usize, i64),
    /// The level element (acts as the scalar `ℓ`).
    LevelK,
    /// The Virasoro central element (acts as the scalar `c`).
    CentralKVir,
}

/// Apply one generator to a vector, exactly.
pub fn verma_act(gen: &VGen, v: &VermaVector, ctx: &ModuleContext) -> Result<VermaVector, FockError> {
    let mut out = VermaVector::zero();
    for (w, coeff) in v.iter() {
        let part = match gen {
            VGen::L(m) => apply(&VSpecies::L, *m, &w.ops, w.ubase, ctx)?,
            VGen::U(i, m) => {
                if *i >= ctx.params.algebra.dim {
                    return Err(FockError::Algebra(
                        crate::toroidal::ToroidalError::BadCoefficientIndex(
                            *i,
                            ctx.params.algebra.dim,
                        ),
                    ));
                }
                apply(&VSpecies::U(*i), *m, &w.ops, w.ubase, ctx)?
            }
            VGen::LevelK => VermaVector::term(w.clone(), ctx.params.ell.clone()),
            VGen::CentralKVir => VermaVector::term(w.clone(), ctx.central_charge_g()),
        };
        out.add_assign(&part.scale(coeff));
    }
    Ok(out)
}

/// The Virasoro mode `L(m)` of the Verma slot.
pub fn vir_g_mode(m: i64, v: &VermaVector, ctx: &ModuleContext) -> VermaVector {
    verma_act(&VGen::L(m), v, ctx).expect("Virasoro mode is always valid")
}

/// The commutator `[X(mA), Y(mB)]` as generator terms plus a scalar.
fn gen_bracket(
    sa: &VSpecies,
    ma: i64,
    sb: &VSpecies,
    mb: i64,
    ctx: &ModuleContext,
) -> (Vec<(VSpecies, i64, Rat)>, Rat) {
    match (sa, sb) {
        (VSpecies::L, VSpecies::L) => {
            let terms = vec![(VSpecies::L, ma + mb, rat_int(ma - mb))];
            let scalar = if ma + mb == 0 {
                rat(ma * ma * ma - ma, 12) * ctx.central_charge_g()
            } else {
                Rat::zero()
            };
            (terms, scalar)
        }
        (VSpecies::L, VSpecies::U(i)) => {
            (vec![(VSpecies::U(*i), ma + mb, rat_int(-mb))], Rat::zero())
        }
        (VSpecies::U(i), VSpecies::L) => {
            (vec![(VSpecies::U(*i), ma + mb, rat_int(ma))], Rat::zero())
        }
        (VSpecies::U(i), VSpecies::U(j)) => {
            let terms = ctx
                .params
                .algebra
                .bracket(*i, *j)
                .into_iter()
                .map(|(k, c)| (VSpecies::U(k), ma + mb, c))
                .collect();
            let scalar = if ma + mb == 0 {
                rat_int(ma) * ctx.params.algebra.pairing(*i, *j) * &ctx.params.ell
            } else {
                Rat::zero()
            };
            (terms, scalar)
        }
    }
}

/// Apply `X(m)` to the normally ordered word `ops · w_{ubase}`, returning the
/// result in the basis. Recursion: a creation operator that is already in
/// position is prepended; otherwise `X g = g X + [X, g]` pushes `X` past the
/// leading operator and the two summands are straightened on the shorter
/// tail (the leading operator is re-applied recursively because bracket
/// terms may have produced deeper modes than it).
fn apply(
    species: &VSpecies,
    m: i64,
    ops: &[VOp],
    ubase: usize,
    ctx: &ModuleContext,
) -> Result<VermaVector, FockError> {
    if ops.is_empty() {
        return bottom(species, m, ubase, ctx);
    }
    let head = &ops[0];
    let x = VOp { mode: m, species: species.clone() };
    if m < 0 && x <= *head {
        let mut word = Vec::with_capacity(ops.len() + 1);
        word.push(x);
        word.extend_from_slice(ops);
        return Ok(VermaVector::term(VermaWord { ops: word, ubase }, rat_int(1)));
    }
    let mut out = VermaVector::zero();
    // X g1 rest = g1 (X rest) + [X, g1] rest
    let pushed = apply(species, m, &ops[1..], ubase, ctx)?;
    for (w, c) in pushed.into_iter() {
        let replaced = apply(&head.species, head.mode, &w.ops, w.ubase, ctx)?;
        out.add_assign(&replaced.scale(&c));
    }
    let (terms, scalar) = gen_bracket(species, m, &head.species, head.mode, ctx);
    for (sp, mode, c) in terms {
        if c.is_zero() {
            continue;
        }
        let part = apply(&sp, mode, &ops[1..], ubase, ctx)?;
        out.add_assign(&part.scale(&c));
    }
    if !scalar.is_zero() {
        out.add_term(VermaWord { ops: ops[1..].to_vec(), ubase }, scalar);
    }
    Ok(out)
}

/// Action of `X(m)` on the bottom layer `U`.
fn bottom(
    species: &VSpecies,
    m: i64,
    ubase: usize,
    ctx: &ModuleContext,
) -> Result<VermaVector, FockError> {
    if m > 0 {
        return Ok(VermaVector::zero());
    }
    if m < 0 {
        let word = VermaWord { ops: vec![VOp { mode: m, species: species.clone() }], ubase };
        return Ok(VermaVector::term(word, rat_int(1)));
    }
    match species {
        VSpecies::L => Ok(VermaVector::term(VermaWord::vacuum(ubase), ctx.params.beta.clone())),
        VSpecies::U(i) => {
            let mut out = VermaVector::zero();
            for (j, c) in ctx.u_act(*i, ubase) {
                out.add_term(VermaWord::vacuum(j), c);
            }
            Ok(out)
        }
    }
}
