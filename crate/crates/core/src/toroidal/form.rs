//! The invariant symmetric bilinear form on the algebra at `eps = 1`.
//!
//! At `eps = 1` the coefficient-algebra form extends to an invariant
//! symmetric bilinear form on the whole algebra. The nonzero pairings of
//! canonical basis keys are
//!
//! ```text
//! (t0^a t1^b (x) u, t0^{-a} t1^{-b} (x) v) = <u,v>
//! (k[n0,n1], dt[-n0,-n1])                  = 1
//! (k0, d0shift) = (k1, d1shift)            = 1
//! ```
//!
//! and the form is symmetric. Each basis key pairs against exactly one
//! partner class, so the form is nondegenerate whenever the coefficient
//! form is. Invariance `([x,y],z) = (x,[y,z])` determines the derivation
//! pairings from the torus block; the `(k, dt)` value `+1` is forced (the
//! triple `x = t0(x)u, y = t1(x)u, z = dt[-1,-1]` evaluates both sides).

use super::{bracket, Element, Key, ToroidalError};
use crate::context::ParamContext;
use crate::scalars::{rat_int, Rat};
use num_traits::Zero;

/// Value of the form on a pair of basis keys.
pub fn form_pair(x: &Key, y: &Key, ctx: &ParamContext) -> Result<Rat, ToroidalError> {
    if ctx.eps != 1 {
        return Err(ToroidalError::FormNeedsEpsOne(ctx.eps));
    }
    let val = match (x, y) {
        (Key::Torus { a, b, u }, Key::Torus { a: c, b: d, u: v }) => {
            if a + c == 0 && b + d == 0 {
                ctx.algebra.pairing(*u, *v)
            } else {
                Rat::zero()
            }
        }
        (Key::KForm { m0, m1 }, Key::DTilde { m0: n0, m1: n1 })
        | (Key::DTilde { m0: n0, m1: n1 }, Key::KForm { m0, m1 }) => {
            if m0 + n0 == 0 && m1 + n1 == 0 {
                rat_int(1)
            } else {
                Rat::zero()
            }
        }
        (Key::K0, Key::D0Shift) | (Key::D0Shift, Key::K0) => rat_int(1),
        (Key::K1, Key::D1Shift) | (Key::D1Shift, Key::K1) => rat_int(1),
        _ => Rat::zero(),
    };
    Ok(val)
}

/// Bilinear extension of [`form_pair`] to elements.
pub fn form_pair_elements(x: &Element, y: &Element, ctx: &ParamContext) -> Result<Rat, ToroidalError> {
    let mut out = Rat::zero();
    for (kx, cx) in x.iter() {
        for (ky, cy) in y.iter() {
            let v = form_pair(kx, ky, ctx)?;
            if !v.is_zero() {
                out += v * cx * cy;
            }
        }
    }
    Ok(out)
}

/// `([x,y],z) - (x,[y,z])`; zero on every triple iff the form is invariant.
pub fn form_invariance_residual(
    x: &Element,
    y: &Element,
    z: &Element,
    ctx: &ParamContext,
) -> Result<Rat, ToroidalError> {
    let left = form_pair_elements(&bracket(x, y, ctx)?, z, ctx)?;
    let right = form_pair_elements(x, &bracket(y, z, ctx)?, ctx)?;
    Ok(left - right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galgebra::GAlgebra;
    use crate::scalars::rat;

    fn ctx1() -> ParamContext {
        ParamContext::new(1, rat(1, 3), rat_int(2), rat(1, 5), rat_int(7), GAlgebra::sl2())
            .unwrap()
    }

    fn sample_keys() -> Vec<Key> {
        vec![
            Key::Torus { a: 1, b: 0, u: 0 },
            Key::Torus { a: -1, b: 0, u: 1 },
            Key::Torus { a: 0, b: 2, u: 2 },
            Key::Torus { a: 0, b: -2, u: 2 },
            Key::K0,
            Key::K1,
            Key::KForm { m0: 1, m1: 1 },
            Key::KForm { m0: -1, m1: -1 },
            Key::KForm { m0: 2, m1: 0 },
            Key::DTilde { m0: 1, m1: 1 },
            Key::DTilde { m0: -1, m1: -1 },
            Key::DTilde { m0: -2, m1: 0 },
            Key::D0Shift,
            Key::D1Shift,
        ]
    }

    #[test]
    fn table_values() {
        let c = ctx1();
        // dual torus pair carries the coefficient form: <e,f> = 1 for sl2
        assert_eq!(
            form_pair(&Key::Torus { a: 1, b: 0, u: 0 }, &Key::Torus { a: -1, b: 0, u: 1 }, &c)
                .unwrap(),
            rat_int(1)
        );
        // <h,h> = 2
        assert_eq!(
            form_pair(&Key::Torus { a: 0, b: 2, u: 2 }, &Key::Torus { a: 0, b: -2, u: 2 }, &c)
                .unwrap(),
            rat_int(2)
        );
        // non-dual exponents vanish
        assert_eq!(
            form_pair(&Key::Torus { a: 1, b: 0, u: 0 }, &Key::Torus { a: 1, b: 0, u: 1 }, &c)
                .unwrap(),
            rat_int(0)
        );
        assert_eq!(form_pair(&Key::K0, &Key::D0Shift, &c).unwrap(), rat_int(1));
        assert_eq!(form_pair(&Key::K1, &Key::D1Shift, &c).unwrap(), rat_int(1));
        assert_eq!(form_pair(&Key::K0, &Key::D1Shift, &c).unwrap(), rat_int(0));
        assert_eq!(form_pair(&Key::K0, &Key::K1, &c).unwrap(), rat_int(0));
        assert_eq!(
            form_pair(&Key::KForm { m0: 1, m1: 1 }, &Key::DTilde { m0: -1, m1: -1 }, &c).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            form_pair(&Key::KForm { m0: 1, m1: 1 }, &Key::DTilde { m0: 1, m1: 1 }, &c).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn rejects_other_eps() {
        let c = ParamContext::new(
            0,
            rat(1, 3),
            rat_int(2),
            rat(1, 5),
            rat_int(7),
            GAlgebra::sl2(),
        )
        .unwrap();
        assert!(matches!(
            form_pair(&Key::K0, &Key::D0Shift, &c),
            Err(ToroidalError::FormNeedsEpsOne(0))
        ));
    }

    #[test]
    fn symmetry_on_samples() {
        let c = ctx1();
        for x in sample_keys() {
            for y in sample_keys() {
                assert_eq!(
                    form_pair(&x, &y, &c).unwrap(),
                    form_pair(&y, &x, &c).unwrap(),
                    "({x},{y})"
                );
            }
        }
    }

    #[test]
    fn invariance_on_sampled_triples() {
        let c = ctx1();
        let keys = sample_keys();
        for x in &keys {
            for y in &keys {
                for z in &keys {
                    let ex = Element::term(x.clone(), rat_int(1));
                    let ey = Element::term(y.clone(), rat_int(1));
                    let ez = Element::term(z.clone(), rat_int(1));
                    let r = form_invariance_residual(&ex, &ey, &ez, &c).unwrap();
                    assert!(r.is_zero(), "({x},{y},{z}): {r}");
                }
            }
        }
    }
}
