//! Field expressions on the tensor module and exact coefficient extraction.
//!
//! A [`Field`] is a symbolic expression built from the realized generating
//! functions: currents, Virasoro fields (with their shift anomaly),
//! exponential charge-shift operators, logarithmic derivatives
//! `z^ε d/dz`, normally ordered products, scalar multiples, powers of `z`,
//! and sums. [`field_coeff`] extracts the exact operator coefficient of a
//! `z`-power and applies it to a finite vector.
//!
//! Conventions (fixed once, used everywhere):
//!
//! * a current with shift parameter `e` expands as `Σ_n a(n) z^{e-1-n}`, so
//!   the coefficient of `z^p` is the mode `a(e-1-p)`;
//! * a Virasoro field with shift `e` expands as
//!   `Σ_n L(n) z^{2e-2-n} + (e^2-2e)/24 · z^{2e-2} · (central scalar)`;
//! * the exponential operator is indexed directly by `z`-powers
//!   (its mode `E(j)` sits at `z^{-j}`);
//! * a normally ordered product splits by the sign of the `z`-power: the
//!   coefficients at `z^q`, `q >= 0` act on the left. For a current with
//!   shift `e` that puts exactly the modes `a(n)`, `n < e` on the left,
//!   reproducing the mode-index split of the underlying module
//!   construction.

use super::heisenberg::{act_word, e_coeff_word, vir_h_mode};
use super::verma::{verma_act, VGen};
use super::{FockError, FockVector, HGen, ModuleContext, ModuleVector, TensorWord};
use crate::scalars::{rat, rat_int, Rat};
use std::fmt;

/// Which current a [`Field::Current`] refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurrentKind {
    /// Coefficient-algebra current `u_i(z)` (acts on the Verma slot).
    G(usize),
    /// Heisenberg current `k(z)` (acts on the Fock slot).
    K,
    /// Heisenberg current `d(z)` (acts on the Fock slot).
    D,
}

/// Which Virasoro field a [`Field::Vir`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VirPart {
    /// Verma-slot Virasoro; anomaly share `(e²-2e)/24 · (24μℓ-2)`.
    G,
    /// Fock-slot Virasoro; anomaly share `(e²-2e)/24 · 2`.
    H,
    /// Their sum; total anomaly `(e²-2e) · μℓ`.
    Full,
}

/// A symbolic field expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    /// `a^{(e)}(z) = Σ a(n) z^{e-1-n}`.
    Current { kind: CurrentKind, e: i64 },
    /// `L^{(e)}(z) = Σ L(n) z^{2e-2-n} + (e²-2e)/24 · z^{2e-2} · center`.
    Vir { part: VirPart, e: i64 },
    /// The exponential charge-shift operator for charge `n·k`.
    Exp { n: i64 },
    /// `z^ε d/dz F(z)` (the ambient `ε` comes from the context).
    LogDeriv(Box<Field>),
    /// Normally ordered product, split by `z`-power sign.
    NormProd(Box<Field>, Box<Field>),
    /// Scalar multiple.
    Scaled(Rat, Box<Field>),
    /// `z^s · F(z)`.
    ZShift(i64, Box<Field>),
    /// Sum of fields.
    Sum(Vec<Field>),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Current { kind, e } => match kind {
                CurrentKind::G(i) => write!(f, "u{i}^({e})(z)"),
                CurrentKind::K => write!(f, "k^({e})(z)"),
                CurrentKind::D => write!(f, "d^({e})(z)"),
            },
            Field::Vir { part, e } => match part {
                VirPart::G => write!(f, "Lg^({e})(z)"),
                VirPart::H => write!(f, "Lh^({e})(z)"),
                VirPart::Full => write!(f, "Lf^({e})(z)"),
            },
            Field::Exp { n } => write!(f, "E{{{n}k}}(z)"),
            Field::LogDeriv(g) => write!(f, "z^eps d/dz {g}"),
            Field::NormProd(a, b) => write!(f, "°{a} {b}°"),
            Field::Scaled(c, g) => write!(f, "({c})·{g}"),
            Field::ZShift(s, g) => write!(f, "z^{s}·{g}"),
            Field::Sum(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Coefficient of `z^p` applied to a single word.
fn coeff_word(
    f: &Field,
    p: i64,
    w: &TensorWord,
    ctx: &ModuleContext,
) -> Result<ModuleVector, FockError> {
    let one_word = |w: &TensorWord| ModuleVector::term(w.clone(), rat_int(1));
    match f {
        Field::Current { kind, e } => {
            let mode = e - 1 - p;
            match kind {
                CurrentKind::G(i) => {
                    if *i >= ctx.params.algebra.dim {
                        return Err(FockError::Algebra(
                            crate::toroidal::ToroidalError::BadCoefficientIndex(
                                *i,
                                ctx.params.algebra.dim,
                            ),
                        ));
                    }
                    let v = super::on_verma_slot(&one_word(w), |vw| {
                        verma_act(
                            &VGen::U(*i, mode),
                            &super::VermaVector::term(vw.clone(), rat_int(1)),
                            ctx,
                        )
                        .expect("index checked above")
                    });
                    Ok(v)
                }
                CurrentKind::K => {
                    Ok(super::on_fock_slot(&one_word(w), |fw| act_word(HGen::K, mode, fw, ctx)))
                }
                CurrentKind::D => {
                    Ok(super::on_fock_slot(&one_word(w), |fw| act_word(HGen::D, mode, fw, ctx)))
                }
            }
        }
        Field::Vir { part, e } => {
            let mode = 2 * e - 2 - p;
            let mut out = ModuleVector::zero();
            if matches!(part, VirPart::G | VirPart::Full) {
                out.add_assign(&super::on_verma_slot(&one_word(w), |vw| {
                    super::verma::vir_g_mode(
                        mode,
                        &super::VermaVector::term(vw.clone(), rat_int(1)),
                        ctx,
                    )
                }));
            }
            if matches!(part, VirPart::H | VirPart::Full) {
                out.add_assign(&super::on_fock_slot(&one_word(w), |fw| {
                    vir_h_mode(mode, &FockVector::term(fw.clone(), rat_int(1)), ctx)
                }));
            }
            if p == 2 * e - 2 {
                let share = rat(e * e - 2 * e, 24);
                let center = match part {
                    VirPart::G => ctx.central_charge_g(),
                    VirPart::H => rat_int(2),
                    VirPart::Full => ctx.params.central_charge_total(),
                };
                out.add_term(w.clone(), share * center);
            }
            Ok(out)
        }
        Field::Exp { n } => Ok(super::on_fock_slot(&one_word(w), |fw| e_coeff_word(*n, p, fw, ctx))),
        Field::LogDeriv(g) => {
            let q = p + 1 - ctx.eps();
            let inner = coeff_word(g, q, w, ctx)?;
            Ok(inner.scale(&rat_int(q)))
        }
        Field::NormProd(a, b) => {
            let mut out = ModuleVector::zero();
            // Left part: coefficients of a at z^q, q >= 0, applied after b.
            let lb = lower_bound(b, w, ctx)
                .ok_or_else(|| FockError::UnboundedOperand(b.to_string()))?;
            for q in 0..=(p - lb) {
                let t = coeff_word(b, p - q, w, ctx)?;
                for (tw, tc) in t.iter() {
                    out.add_assign(&coeff_word(a, q, tw, ctx)?.scale(tc));
                }
            }
            // Right part: coefficients of a at z^q, q < 0, applied first.
            let la = lower_bound(a, w, ctx)
                .ok_or_else(|| FockError::UnboundedOperand(a.to_string()))?;
            for q in la..=-1 {
                let t = coeff_word(a, q, w, ctx)?;
                for (tw, tc) in t.iter() {
                    out.add_assign(&coeff_word(b, p - q, tw, ctx)?.scale(tc));
                }
            }
            Ok(out)
        }
        Field::Scaled(c, g) => Ok(coeff_word(g, p, w, ctx)?.scale(c)),
        Field::ZShift(s, g) => coeff_word(g, p - s, w, ctx),
        Field::Sum(parts) => {
            let mut out = ModuleVector::zero();
            for part in parts {
                out.add_assign(&coeff_word(part, p, w, ctx)?);
            }
            Ok(out)
        }
    }
}

/// A lower bound on the `z`-powers at which the field can act nontrivially
/// on the word: `coeff(f, q, w) = 0` for every `q` below the returned value.
/// `None` when no formula-level bound is available (nested normally ordered
/// products), in which case the expression cannot sit inside another
/// normally ordered product.
fn lower_bound(f: &Field, w: &TensorWord, ctx: &ModuleContext) -> Option<i64> {
    match f {
        Field::Current { kind, e } => {
            // a(mode) annihilates when mode > slot degree; mode = e-1-q.
            let deg = match kind {
                CurrentKind::G(_) => w.verma.degree(),
                CurrentKind::K | CurrentKind::D => w.fock.degree(),
            };
            Some(e - 1 - deg)
        }
        Field::Vir { part, e } => {
            let deg = match part {
                VirPart::G => w.verma.degree(),
                VirPart::H => w.fock.degree(),
                VirPart::Full => w.verma.degree().max(w.fock.degree()),
            };
            Some(2 * e - 2 - deg)
        }
        Field::Exp { n } => Some(if *n == 0 { 0 } else { -w.fock.d_degree() }),
        Field::LogDeriv(g) => Some(lower_bound(g, w, ctx)? + ctx.eps() - 1),
        Field::NormProd(..) => None,
        Field::Scaled(_, g) => lower_bound(g, w, ctx),
        Field::ZShift(s, g) => Some(lower_bound(g, w, ctx)? + s),
        Field::Sum(parts) => {
            let mut best = i64::MAX;
            for part in parts {
                best = best.min(lower_bound(part, w, ctx)?);
            }
            Some(if best == i64::MAX { 0 } else { best })
        }
    }
}

/// The exact coefficient of `z^p` of the field, applied to a vector.
pub fn field_coeff(
    f: &Field,
    p: i64,
    v: &ModuleVector,
    ctx: &ModuleContext,
) -> Result<ModuleVector, FockError> {
    let mut out = ModuleVector::zero();
    for (w, c) in v.iter() {
        out.add_assign(&coeff_word(f, p, w, ctx)?.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ParamContext;
    use crate::galgebra::GAlgebra;
    use crate::scalars::{rat, rat_int};

    fn ctx(eps: i64) -> ModuleContext {
        let params = ParamContext::new(
            eps,
            rat(1, 3),
            rat_int(2),
            rat(1, 5),
            rat_int(7),
            GAlgebra::sl2(),
        )
        .unwrap();
        ModuleContext::new(params).unwrap()
    }

    fn vac(u: usize, r: i64) -> ModuleVector {
        ModuleVector::term(TensorWord::vacuum(u, r), rat_int(1))
    }

    #[test]
    fn current_coefficient_is_the_expected_mode() {
        // Coefficient of z^p in a shifted current is the mode e-1-p: on a
        // vacuum, p = e-1+n must create with mode -n.
        for eps in [-1, 0, 2] {
            let c = ctx(eps);
            let v = vac(0, 0);
            let got = field_coeff(&Field::Current { kind: CurrentKind::D, e: eps }, eps, &v, &c)
                .unwrap();
            let expect = super::super::on_fock_slot(&v, |w| act_word(HGen::D, -1, w, &c));
            assert_eq!(got, expect, "eps={eps}");
        }
    }

    #[test]
    fn virasoro_anomaly_sits_at_its_single_power() {
        // On the double vacuum, the Fock Virasoro coefficient at z^{2e-2}
        // is the anomaly share alone: L_H(0) kills the isotropic vacuum.
        for eps in [-2, -1, 0, 1, 2, 3] {
            let c = ctx(eps);
            let v = vac(1, 0);
            let got =
                field_coeff(&Field::Vir { part: VirPart::H, e: eps }, 2 * eps - 2, &v, &c).unwrap();
            let expect = v.scale(&(rat(eps * eps - 2 * eps, 24) * rat_int(2)));
            assert_eq!(got, expect, "eps={eps}");
            // The Verma share adds L_G(0) = β on top of its anomaly.
            let got =
                field_coeff(&Field::Vir { part: VirPart::G, e: eps }, 2 * eps - 2, &v, &c).unwrap();
            let expect = v.scale(
                &(rat_int(7) + rat(eps * eps - 2 * eps, 24) * c.central_charge_g()),
            );
            assert_eq!(got, expect, "eps={eps}");
        }
    }

    #[test]
    fn full_virasoro_anomaly_is_mu_ell_weighted() {
        let eps = 3;
        let c = ctx(eps);
        let v = vac(0, 1);
        let full =
            field_coeff(&Field::Vir { part: VirPart::Full, e: eps }, 2 * eps - 2, &v, &c).unwrap();
        let g = field_coeff(&Field::Vir { part: VirPart::G, e: eps }, 2 * eps - 2, &v, &c).unwrap();
        let h = field_coeff(&Field::Vir { part: VirPart::H, e: eps }, 2 * eps - 2, &v, &c).unwrap();
        assert_eq!(full, g.add(&h));
        // (e²-2e)/24 · 24μℓ = (e²-2e)μℓ with μℓ = 2/3 here.
        let anomaly = rat(eps * eps - 2 * eps, 24) * c.params.central_charge_total();
        assert_eq!(anomaly, rat_int(eps * eps - 2 * eps) * rat(2, 3));
    }

    #[test]
    fn log_deriv_reindexes_and_scales() {
        // z^ε d/dz Σ F_q z^q has coefficient (p+1-ε) F_{p+1-ε} at z^p.
        let eps = 2;
        let c = ctx(eps);
        let v = vac(0, 0);
        let f = Field::LogDeriv(Box::new(Field::Exp { n: 1 }));
        for p in -2..=4 {
            let got = field_coeff(&f, p, &v, &c).unwrap();
            let inner = field_coeff(&Field::Exp { n: 1 }, p + 1 - eps, &v, &c).unwrap();
            assert_eq!(got, inner.scale(&rat_int(p + 1 - eps)));
        }
    }

    #[test]
    fn normal_product_against_plain_product_when_slots_commute() {
        // A Verma current and a Fock exponential act on different tensor
        // slots, so the normally ordered product must agree with the plain
        // product of coefficients summed over all splittings.
        let eps = 1;
        let c = ctx(eps);
        let mut v = vac(0, 0);
        // Seed with mixed creation content.
        v = super::super::on_fock_slot(&v, |w| act_word(HGen::D, -1, w, &c));
        v = super::super::on_verma_slot(&v, |w| {
            verma_act(
                &VGen::U(1, -1),
                &super::super::VermaVector::term(w.clone(), rat_int(1)),
                &c,
            )
            .unwrap()
        });
        let a = Field::Current { kind: CurrentKind::G(2), e: eps };
        let b = Field::Exp { n: 2 };
        let np = Field::NormProd(Box::new(a.clone()), Box::new(b.clone()));
        for p in -3..=3 {
            let got = field_coeff(&np, p, &v, &c).unwrap();
            // Plain product: Σ_q a[q] b[p-q] v over the finite window.
            let mut plain = ModuleVector::zero();
            for q in -8..=8 {
                let t = field_coeff(&b, p - q, &v, &c).unwrap();
                plain.add_assign(&field_coeff(&a, q, &t, &c).unwrap());
            }
            assert_eq!(got, plain, "p={p}");
        }
    }

    #[test]
    fn nested_normal_products_are_rejected() {
        let c = ctx(0);
        let inner = Field::NormProd(
            Box::new(Field::Current { kind: CurrentKind::K, e: 0 }),
            Box::new(Field::Exp { n: 1 }),
        );
        let f = Field::NormProd(Box::new(inner.clone()), Box::new(Field::Exp { n: 1 }));
        let err = field_coeff(&f, 0, &vac(0, 0), &c).unwrap_err();
        assert!(matches!(err, FockError::UnboundedOperand(_)));
    }

    #[test]
    fn lower_bounds_are_safe() {
        // Below the reported bound every coefficient application vanishes.
        let eps = -1;
        let c = ctx(eps);
        let mut v = vac(1, -1);
        v = super::super::on_fock_slot(&v, |w| act_word(HGen::D, -2, w, &c));
        v = super::super::on_fock_slot(&v, |w| act_word(HGen::K, -1, w, &c));
        let fields = vec![
            Field::Current { kind: CurrentKind::K, e: eps },
            Field::Current { kind: CurrentKind::G(0), e: eps },
            Field::Vir { part: VirPart::Full, e: eps },
            Field::Exp { n: -2 },
            Field::LogDeriv(Box::new(Field::Exp { n: 1 })),
            Field::ZShift(3, Box::new(Field::Current { kind: CurrentKind::D, e: eps })),
        ];
        for f in fields {
            for (w, _) in v.iter() {
                let lb = super::lower_bound(&f, w, &c).unwrap();
                for p in (lb - 4)..lb {
                    let got = coeff_word(&f, p, w, &c).unwrap();
                    assert!(got.is_zero(), "field {f} power {p}");
                }
            }
        }
    }
}
