//! Sparse linear combinations over an ordered basis-key type.
//!
//! The container is canonical by construction: keys are held in a
//! `BTreeMap`, and any coefficient that becomes zero is removed
//! immediately, so structural equality is linear-algebra equality.

use crate::scalars::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// A finite linear combination `sum c_k * k` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Combination { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(key: K, coeff: Rat) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coeff);
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Rat)>) -> Self {
        let mut c = Self::zero();
        for (k, r) in terms {
            c.add_term(k, r);
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn into_iter(self) -> impl Iterator<Item = (K, Rat)> {
        self.terms.into_iter()
    }

    /// Add `coeff * key`, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, r) in other.iter() {
            self.add_term(k.clone(), r.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, r) in other.iter() {
            out.add_term(k.clone(), -r.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-num_traits::one::<Rat>())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (k, r) in self.iter() {
            out.terms.insert(k.clone(), r * c);
        }
        out
    }

    pub fn scale_assign(&mut self, c: &Rat) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for r in self.terms.values_mut() {
            *r *= c;
        }
    }

    /// Map keys, re-accumulating (the map need not be injective).
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Combination<L> {
        let mut out = Combination::zero();
        for (k, r) in self.iter() {
            out.add_term(f(k), r.clone());
        }
        out
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for Combination<K> {
    /// Canonical ASCII form: terms in key order, `c*key` with explicit sign.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, r)) in self.iter().enumerate() {
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
            if a == num_traits::one::<Rat>() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{a}*{k}")?;
            }
        }
        Ok(())
    }
}

use num_traits::Signed;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn cancellation_removes_entries() {
        let mut c = Combination::term("x", rat(1, 2));
        c.add_term("x", rat(-1, 2));
        assert!(c.is_zero());
        assert_eq!(c.len(), 0);
    }

    #[test]
    fn normalization_merges_duplicates() {
        let c = Combination::from_terms(vec![
            ("b", rat_int(2)),
            ("a", rat(1, 3)),
            ("b", rat_int(-1)),
            ("c", rat_int(0)),
        ]);
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&"b"), rat_int(1));
        assert_eq!(c.to_string(), "1/3*a + b");
    }

    #[test]
    fn display_signs() {
        let c = Combination::from_terms(vec![("u", rat_int(-1)), ("v", rat(3, 4))]);
        assert_eq!(c.to_string(), "-u + 3/4*v");
        assert_eq!(Combination::<&str>::zero().to_string(), "0");
    }

    fn arb_comb() -> impl Strategy<Value = Combination<u8>> {
        proptest::collection::vec((0u8..6, -9i64..9), 0..6)
            .prop_map(|v| Combination::from_terms(v.into_iter().map(|(k, n)| (k, rat_int(n)))))
    }

    proptest! {
        #[test]
        fn vector_space_axioms(a in arb_comb(), b in arb_comb(), c in arb_comb()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.sub(&a), Combination::zero());
            let two = rat_int(2);
            prop_assert_eq!(a.add(&a), a.scale(&two));
            prop_assert_eq!(a.add(&b).scale(&two), a.scale(&two).add(&b.scale(&two)));
        }

        #[test]
        fn no_stored_zero_coefficients(a in arb_comb(), b in arb_comb()) {
            let s = a.sub(&b);
            for (_, r) in s.iter() {
                prop_assert!(!num_traits::Zero::is_zero(r));
            }
        }
    }
}
