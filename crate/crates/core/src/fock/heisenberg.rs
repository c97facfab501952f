//! The rank-two Heisenberg Fock module with lattice charges.
//!
//! Generators `k(m)`, `d(m)` obey `[a(m), b(n)] = m δ_{m+n,0} <a,b> ℓ` with
//! the isotropic pairing `<k,k> = <d,d> = 0`, `<k,d> = 1`. On the charged
//! vacuum `e^{(α+r)k}` the zero modes act by the pairing with the charge:
//! `k(0) ↦ 0` and `d(0) ↦ α + r`. Because creation operators commute, words
//! are plain multisets and no straightening is needed; annihilation modes
//! contract against the matching partner only.
//!
//! The module also hosts the two derived operators used by the realization:
//! the Fock-side Virasoro modes [`vir_h_mode`] and the coefficients of the
//! exponential charge-shift operator [`e_coeff_word`] / [`e_gamma_coeff`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{FockError, FockVector, HGen, HOp, FockWord, ModuleContext, ModuleVector};
use crate::phi::partitions;
use crate::scalars::{rat_int, Rat};
use num_traits::One;

pub use super::HGen as HSpecies;

/// Apply `gen(mode)` to a vector.
pub fn heisenberg_act(gen: HGen, mode: i64, v: &FockVector, ctx: &ModuleContext) -> FockVector {
    let mut out = FockVector::zero();
    for (w, c) in v.iter() {
        out.add_assign(&act_word(gen, mode, w, ctx).scale(c));
    }
    out
}

/// Apply `gen(mode)` to one basis word.
pub fn act_word(gen: HGen, mode: i64, w: &FockWord, ctx: &ModuleContext) -> FockVector {
    if mode < 0 {
        let mut ops = w.ops.clone();
        let op = HOp { mode, species: gen };
        let pos = ops.partition_point(|o| *o <= op);
        ops.insert(pos, op);
        return FockVector::term(FockWord { ops, charge: w.charge }, rat_int(1));
    }
    if mode == 0 {
        // <gen, (α+r)k>: zero for k (isotropic), α+r for d.
        return match gen {
            HGen::K => FockVector::zero(),
            HGen::D => {
                let scalar = &ctx.params.alpha + rat_int(w.charge);
                FockVector::term(w.clone(), scalar)
            }
        };
    }
    // Annihilation: contract against each partner occurrence d(-m) / k(-m).
    let partner = match gen {
        HGen::K => HGen::D,
        HGen::D => HGen::K,
    };
    let mut out = FockVector::zero();
    for (idx, op) in w.ops.iter().enumerate() {
        if op.species == partner && op.mode == -mode {
            let mut ops = w.ops.clone();
            ops.remove(idx);
            out.add_term(
                FockWord { ops, charge: w.charge },
                rat_int(mode) * &ctx.params.ell,
            );
        }
    }
    out
}

/// The Fock-side Virasoro mode: coefficient of the normally ordered product
/// `(1/ℓ) °k(z) d(z)°` at mode `n`, i.e.
/// `(1/ℓ) (Σ_{j<0} k(j) d(n-j) + Σ_{j>=0} d(n-j) k(j))`.
///
/// Both sums collapse to finitely many terms on a finite vector: in the
/// first, `d(n-j)` annihilates unless `j >= n - deg`; in the second, `k(j)`
/// contracts only against `d(-j)` factors so `j <= deg`.
pub fn vir_h_mode(n: i64, v: &FockVector, ctx: &ModuleContext) -> FockVector {
    let ell_inv = Rat::one() / &ctx.params.ell;
    let mut out = FockVector::zero();
    for (w, c) in v.iter() {
        let deg = w.degree();
        let scale = ell_inv.clone() * c;
        for j in (n - deg).min(-1)..=-1 {
            let t = act_word(HGen::D, n - j, w, ctx);
            out.add_assign(&heisenberg_act(HGen::K, j, &t, ctx).scale(&scale));
        }
        for j in 0..=deg {
            let t = act_word(HGen::K, j, w, ctx);
            out.add_assign(&heisenberg_act(HGen::D, n - j, &t, ctx).scale(&scale));
        }
    }
    out
}

thread_local! {
    /// The partition sums below depend only on `(n, p, sign, ℓ)` and recur
    /// once per surrounding word during coefficient extraction, so they are
    /// memoized per thread. The key space is tiny (small labels and degrees).
    static FACTOR_MEMO: RefCell<HashMap<(i64, i64, i64, Rat), Rc<Vec<(Vec<i64>, Rat)>>>> =
        RefCell::new(HashMap::new());
}

/// One exponential factor: the degree-`p` coefficient of
/// `exp(Σ_{m>=1} s·(n/(ℓ m)) k(∓m) z^{±m})` as a list of
/// `(multiset of modes, scalar)` pairs, i.e. a sum over partitions of `p`
/// with `r_m` parts of size `m` contributing `Π_m (s·n/(ℓ m))^{r_m} / r_m!`.
fn exp_factor_terms(n: i64, p: i64, sign: i64, ctx: &ModuleContext) -> Rc<Vec<(Vec<i64>, Rat)>> {
    debug_assert!(p >= 0);
    let key = (n, p, sign, ctx.params.ell.clone());
    FACTOR_MEMO.with(|memo| {
        if let Some(hit) = memo.borrow().get(&key) {
            return Rc::clone(hit);
        }
        let mut out = Vec::new();
        for lambda in partitions(p as u32) {
            let mut scalar = Rat::one();
            let mut modes = Vec::new();
            for (part, mult) in &lambda {
                let base = rat_int(sign * n) / (rat_int(*part as i64) * &ctx.params.ell);
                let mut factorial = Rat::one();
                for s in 1..=*mult {
                    factorial *= rat_int(s as i64);
                }
                for _ in 0..*mult {
                    scalar *= &base;
                    modes.push(*part as i64);
                }
                scalar /= factorial;
            }
            out.push((modes, scalar));
        }
        let entry = Rc::new(out);
        memo.borrow_mut().insert(key, Rc::clone(&entry));
        entry
    })
}

/// Coefficient of `z^p` of the exponential charge-shift operator attached
/// to the charge `n·k`, applied to one word.
///
/// The operator is a product of three commuting factors — a creation
/// exponential in the `k(-m)`, an annihilation exponential in the `k(m)`,
/// and the charge shift `r ↦ r + n`. Expanding both exponentials,
/// the `z^p` coefficient is `Σ_{Q>=0} A_{p+Q} B_Q` followed by the shift,
/// where `A_P`/`B_Q` are the degree-`P`/`Q` partition sums of the two
/// factors. `B_Q` annihilates the word unless `Q <=` its `d`-degree, which
/// makes the sum finite.
pub fn e_coeff_word(n: i64, p: i64, w: &FockWord, ctx: &ModuleContext) -> FockVector {
    if n == 0 {
        return if p == 0 {
            FockVector::term(w.clone(), rat_int(1))
        } else {
            FockVector::zero()
        };
    }
    let mut out = FockVector::zero();
    for q in 0..=w.d_degree() {
        let pp = p + q;
        if pp < 0 {
            continue;
        }
        // Annihilation part B_q: products of k(m), m > 0.
        let mut contracted = FockVector::zero();
        for (ann_modes, ann_scalar) in exp_factor_terms(n, q, -1, ctx).iter() {
            let mut cur = FockVector::term(w.clone(), ann_scalar.clone());
            for &m in ann_modes {
                cur = heisenberg_act(HGen::K, m, &cur, ctx);
                if cur.is_zero() {
                    break;
                }
            }
            contracted.add_assign(&cur);
        }
        if contracted.is_zero() {
            continue;
        }
        // Creation part A_{p+q}: products of k(-m). Creation factors cannot
        // contract, so each partition term is a plain multiset insertion.
        for (cre_modes, cre_scalar) in exp_factor_terms(n, pp, 1, ctx).iter() {
            for (cw, cc) in contracted.iter() {
                let mut ops = cw.ops.clone();
                ops.extend(cre_modes.iter().map(|&m| HOp { mode: -m, species: HGen::K }));
                ops.sort();
                out.add_term(FockWord { ops, charge: cw.charge }, cc * cre_scalar);
            }
        }
    }
    // Charge shift r ↦ r + n.
    out.map_keys(|w| FockWord { ops: w.ops.clone(), charge: w.charge + n })
}

/// Coefficient of `z^p` of the exponential operator on a Fock vector.
pub fn e_coeff(n: i64, p: i64, v: &FockVector, ctx: &ModuleContext) -> FockVector {
    let mut out = FockVector::zero();
    for (w, c) in v.iter() {
        out.add_assign(&e_coeff_word(n, p, w, ctx).scale(c));
    }
    out
}

/// The mode `E(j)` of the exponential operator (the coefficient of
/// `z^{-j}`), applied across the Fock slot of a tensor vector.
pub fn e_gamma_coeff(
    n: i64,
    j: i64,
    v: &ModuleVector,
    ctx: &ModuleContext,
) -> Result<ModuleVector, FockError> {
    Ok(super::on_fock_slot(v, |w| e_coeff_word(n, -j, w, ctx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ParamContext;
    use crate::galgebra::GAlgebra;
    use crate::scalars::rat;

    fn ctx() -> ModuleContext {
        let params = ParamContext::new(
            0,
            rat(1, 3),
            rat_int(2),
            rat(1, 5),
            rat_int(7),
            GAlgebra::abelian(),
        )
        .unwrap();
        ModuleContext::new(params).unwrap()
    }

    fn vac(r: i64) -> FockVector {
        FockVector::term(FockWord::vacuum(r), rat_int(1))
    }

    #[test]
    fn zero_modes_read_the_charge() {
        let c = ctx();
        for r in [-2, 0, 3] {
            assert!(heisenberg_act(HGen::K, 0, &vac(r), &c).is_zero());
            let got = act_word(HGen::D, 0, &FockWord::vacuum(r), &c);
            assert_eq!(got, vac(r).scale(&(rat(1, 5) + rat_int(r))));
        }
    }

    #[test]
    fn contraction_pairs_k_with_d_only() {
        let c = ctx();
        // k(2) d(-2) vac = [k(2), d(-2)] vac = 2<k,d>ℓ vac = 2ℓ vac.
        let created = heisenberg_act(HGen::D, -2, &vac(0), &c);
        let got = heisenberg_act(HGen::K, 2, &created, &c);
        assert_eq!(got, vac(0).scale(&rat_int(4)));
        // k(2) k(-2) vac = 0 (isotropic).
        let created = heisenberg_act(HGen::K, -2, &vac(0), &c);
        assert!(heisenberg_act(HGen::K, 2, &created, &c).is_zero());
        // d annihilates k-creations with the same bracket.
        let created = heisenberg_act(HGen::K, -3, &vac(1), &c);
        let got = heisenberg_act(HGen::D, 3, &created, &c);
        assert_eq!(got, vac(1).scale(&rat_int(6)));
    }

    #[test]
    fn heisenberg_commutator_on_words() {
        let c = ctx();
        // [k(m), d(n)] = m δ_{m+n,0} ℓ on every degree-≤3 word.
        for (m, n) in [(1i64, -1i64), (2, -2), (1, 2), (-1, -2), (3, -3)] {
            for d in 0..=3 {
                for w in super::super::fock_words(d, -1) {
                    let v = FockVector::term(w, rat_int(1));
                    let lhs = heisenberg_act(HGen::K, m, &heisenberg_act(HGen::D, n, &v, &c), &c)
                        .sub(&heisenberg_act(
                            HGen::D,
                            n,
                            &heisenberg_act(HGen::K, m, &v, &c),
                            &c,
                        ));
                    let expect = if m + n == 0 {
                        v.scale(&(rat_int(m) * &c.params.ell))
                    } else {
                        FockVector::zero()
                    };
                    assert_eq!(lhs, expect, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn fock_virasoro_satisfies_central_charge_two() {
        let c = ctx();
        // [L(m), L(-m)] = 2m L(0) + (m^3-m)/12 · 2 on charged vacua; with
        // the isotropic charge, L(0) vac = 0, so the bracket is pure center.
        for r in [-1, 0, 2] {
            let v = vac(r);
            for m in 1..=3 {
                let lhs = vir_h_mode(m, &vir_h_mode(-m, &v, &c), &c)
                    .sub(&vir_h_mode(-m, &vir_h_mode(m, &v, &c), &c));
                let expect = v.scale(&(rat(m * m * m - m, 12) * rat_int(2)));
                assert_eq!(lhs, expect, "m={m} r={r}");
            }
        }
    }

    #[test]
    fn fock_virasoro_and_currents() {
        let c = ctx();
        // [L(m), a(n)] = -n a(m+n) for a ∈ {k, d} on sampled words.
        for (m, n) in [(1i64, -1i64), (-1, -1), (2, -1), (0, -2), (-2, 1)] {
            for d in 0..=2 {
                for w in super::super::fock_words(d, 1) {
                    let v = FockVector::term(w, rat_int(1));
                    for gen in [HGen::K, HGen::D] {
                        let lhs = vir_h_mode(m, &heisenberg_act(gen, n, &v, &c), &c)
                            .sub(&heisenberg_act(gen, n, &vir_h_mode(m, &v, &c), &c));
                        let rhs = heisenberg_act(gen, m + n, &v, &c).scale(&rat_int(-n));
                        assert_eq!(lhs, rhs, "m={m} n={n} gen={gen:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn exponential_identity_operator_at_zero_charge() {
        let c = ctx();
        let w = act_word(HGen::D, -2, &FockWord::vacuum(1), &c);
        for p in -3..=3 {
            let got = e_coeff(0, p, &w, &c);
            if p == 0 {
                assert_eq!(got, w);
            } else {
                assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn exponential_zero_coefficient_is_the_charge_shift_on_vacua() {
        let c = ctx();
        for n in [-2i64, 1, 3] {
            for r in [-1i64, 0, 2] {
                assert_eq!(e_coeff(n, 0, &vac(r), &c), vac(r + n));
            }
        }
    }

    #[test]
    fn exponential_first_order_coefficients() {
        let c = ctx();
        let n = 3;
        // Coefficient of z^1 on a vacuum: (n/ℓ) k(-1) shifted.
        let got = e_coeff(n, 1, &vac(2), &c);
        let expect =
            heisenberg_act(HGen::K, -1, &vac(2 + n), &c).scale(&(rat_int(n) / &c.params.ell));
        assert_eq!(got, expect);
        // Coefficient of z^{-1} needs a d-creation to contract against:
        // E[-1] d(-1) vac = (-n/ℓ)·ℓ·1 · vac shifted = -n vac(r+n).
        let w = heisenberg_act(HGen::D, -1, &vac(0), &c);
        let got = e_coeff(n, -1, &w, &c);
        assert_eq!(got, vac(n).scale(&rat_int(-n)));
    }

    #[test]
    fn exponential_coefficient_shifts_degree_by_its_power() {
        let c = ctx();
        let mut v = vac(0);
        for (gen, m) in [(HGen::D, -2), (HGen::D, -1), (HGen::K, -1)] {
            v = heisenberg_act(gen, m, &v, &c);
        }
        for p in -4..=3 {
            let got = e_coeff(2, p, &v, &c);
            for (w, _) in got.iter() {
                assert_eq!(w.degree(), 4 + p, "p={p}");
                assert_eq!(w.charge, 2);
            }
            if p < -4 {
                assert!(got.is_zero());
            }
        }
        // Below minus the d-degree the coefficient annihilates.
        assert!(e_coeff(2, -4, &v, &c).is_zero());
        assert!(!e_coeff(2, -3, &v, &c).is_zero());
    }

    #[test]
    fn exponential_coefficients_commute_with_k_modes() {
        // [k(m), E(j)] = 0: the exponential is built from k-modes only and
        // <k,k> = 0.
        let c = ctx();
        let mut v = vac(1);
        for (gen, m) in [(HGen::D, -2), (HGen::K, -1)] {
            v = heisenberg_act(gen, m, &v, &c);
        }
        for m in [-2i64, -1, 1, 2] {
            for p in -2..=2 {
                let a = heisenberg_act(HGen::K, m, &e_coeff(3, p, &v, &c), &c);
                let b = e_coeff(3, p, &heisenberg_act(HGen::K, m, &v, &c), &c);
                assert_eq!(a, b, "m={m} p={p}");
            }
        }
    }
}
