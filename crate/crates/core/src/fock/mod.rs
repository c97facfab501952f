//! Concrete weight modules and the coefficient-extraction realization.
//!
//! Two building blocks are assembled here:
//!
//! * a generalized Verma module for the affine-Virasoro algebra attached to
//!   the coefficient algebra `g` — spanned by normally ordered words of
//!   creation operators `L(-n)`, `u_i(-n)` applied to a basis vector of the
//!   finite-dimensional `g`-module `U` ([`VermaWord`]);
//! * a Fock module for the rank-two Heisenberg algebra on the isotropic
//!   pair `(k, d)` with `<k,d> = 1`, extended by lattice charges
//!   `e^{(alpha+r)k}` ([`FockWord`]).
//!
//! The tensor product of the two ([`TensorWord`], [`ModuleVector`]) carries
//! an action of the full toroidal Lie algebra, realized by extracting exact
//! coefficients of formal-variable powers from currents, Virasoro fields,
//! exponential charge-shift operators, and their normally ordered
//! composites ([`fields`], [`action`]). Everything is a finite exact sum:
//! annihilation operators are bounded by the degree of their argument and
//! creation operators by the requested coefficient index, so no truncation
//! is ever involved.
//!
//! Submodules: [`verma`] (straightening of affine-Virasoro words),
//! [`heisenberg`] (Fock modes and exponential-operator coefficients),
//! [`fields`] (field expressions and coefficient extraction),
//! [`action`] (the basis-key dictionary, commutator residuals, and the
//! exponential-field conditions), [`loop_module`] (the degree-zero
//! comparison against the loop-module formulas).

use crate::combination::Combination;
use crate::context::ParamContext;
use crate::scalars::Rat;
use crate::toroidal::ToroidalError;
use std::fmt;

pub mod action;
pub mod fields;
pub mod heisenberg;
pub mod loop_module;
pub mod verma;

pub use action::{
    exp_field_conditions_residual, key_action, realization_commutator_residual, toroidal_action,
    vir_shift_residual, ExpConditionsResidual,
};
pub use fields::{field_coeff, CurrentKind, Field, VirPart};
pub use heisenberg::{e_gamma_coeff, heisenberg_act, vir_h_mode, HSpecies};
pub use loop_module::{degree_zero_module_compare, loop_action, LoopVector};
pub use verma::{verma_act, vir_g_mode, VGen};

/// Errors raised by module construction and the realization.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FockError {
    #[error("coefficient algebra `{0}` carries no module; attach explicit matrices")]
    MissingModule(String),
    #[error(transparent)]
    Algebra(#[from] ToroidalError),
    #[error("cannot bound the lower coefficient index of `{0}` inside a normally ordered product")]
    UnboundedOperand(String),
    #[error("the action of {key} left the charged weight-zero subspace: {witness}")]
    NotDegreeZero { key: String, witness: String },
}

/// Generator species on the Verma side. The derived order (`L` before every
/// `U(i)`, `U(i)` by index) is the species part of the normal-order key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VSpecies {
    /// Virasoro generator `L`.
    L,
    /// Coefficient-algebra generator `u_i`.
    U(usize),
}

/// One creation operator `X(mode)` (with `mode <= -1`) in a Verma word.
///
/// The derived lexicographic order on `(mode, species)` is exactly the
/// normal order: modes ascend left to right, so the most negative mode
/// (largest absolute value) stands leftmost, with `L` before `u_i` on ties.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VOp {
    pub mode: i64,
    pub species: VSpecies,
}

/// A normally ordered word of creation operators applied to the `U`-basis
/// vector `w_{ubase}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VermaWord {
    /// Creation operators, sorted ascending by `(mode, species)`.
    pub ops: Vec<VOp>,
    /// Index of the `U`-basis vector the word is applied to.
    pub ubase: usize,
}

impl VermaWord {
    /// The word with no creation operators.
    pub fn vacuum(ubase: usize) -> Self {
        VermaWord { ops: Vec::new(), ubase }
    }

    /// Sum of `|mode|` over the word.
    pub fn degree(&self) -> i64 {
        self.ops.iter().map(|op| -op.mode).sum()
    }

    /// Whether the op list is sorted in normal order with creation modes only.
    pub fn is_normal_ordered(&self) -> bool {
        self.ops.iter().all(|op| op.mode < 0) && self.ops.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Heisenberg generator species; `K` precedes `D` in the normal-order key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HGen {
    K,
    D,
}

/// One Heisenberg creation operator (`mode <= -1`) in a Fock word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HOp {
    pub mode: i64,
    pub species: HGen,
}

/// A Fock basis vector: a multiset of commuting creation operators applied
/// to the charged vacuum `e^{(alpha+charge)k}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockWord {
    /// Creation operators, sorted ascending by `(mode, species)`.
    pub ops: Vec<HOp>,
    /// Lattice charge `r` labeling the vacuum `e^{(alpha+r)k}`.
    pub charge: i64,
}

impl FockWord {
    /// The charged vacuum.
    pub fn vacuum(charge: i64) -> Self {
        FockWord { ops: Vec::new(), charge }
    }

    /// Sum of `|mode|` over the word.
    pub fn degree(&self) -> i64 {
        self.ops.iter().map(|op| -op.mode).sum()
    }

    /// Sum of `|mode|` over the `d`-type operators only. Because
    /// `<k,k> = 0`, annihilation by `k(m)` contracts against `d(-m)`
    /// factors alone, so this bounds every exponential-operator coefficient.
    pub fn d_degree(&self) -> i64 {
        self.ops.iter().filter(|op| op.species == HGen::D).map(|op| -op.mode).sum()
    }

    /// Whether the op list is sorted with creation modes only.
    pub fn is_normal_ordered(&self) -> bool {
        self.ops.iter().all(|op| op.mode < 0) && self.ops.windows(2).all(|w| w[0] <= w[1])
    }
}

/// A basis vector of the tensor module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorWord {
    pub verma: VermaWord,
    pub fock: FockWord,
}

impl TensorWord {
    /// Vacuum ⊗ charged vacuum.
    pub fn vacuum(ubase: usize, charge: i64) -> Self {
        TensorWord { verma: VermaWord::vacuum(ubase), fock: FockWord::vacuum(charge) }
    }

    /// Total creation degree (both tensor slots).
    pub fn degree(&self) -> i64 {
        self.verma.degree() + self.fock.degree()
    }
}

/// Finite linear combination of Verma words.
pub type VermaVector = Combination<VermaWord>;
/// Finite linear combination of Fock words.
pub type FockVector = Combination<FockWord>;
/// Finite linear combination of tensor words.
pub type ModuleVector = Combination<TensorWord>;

/// Immutable evaluation context for the tensor module: the parameter point
/// plus the dimension of the attached coefficient module `U`.
#[derive(Debug, Clone)]
pub struct ModuleContext {
    pub params: ParamContext,
    /// Dimension of `U` (cached from the algebra descriptor).
    pub udim: usize,
}

impl ModuleContext {
    /// Wrap a parameter context; the coefficient algebra must carry a module.
    pub fn new(params: ParamContext) -> Result<Self, FockError> {
        let udim = params
            .algebra
            .module
            .as_ref()
            .ok_or_else(|| FockError::MissingModule(params.algebra.name.clone()))?
            .dim;
        Ok(ModuleContext { params, udim })
    }

    pub fn eps(&self) -> i64 {
        self.params.eps
    }

    pub fn ell(&self) -> &Rat {
        &self.params.ell
    }

    /// Central charge of the Verma slot, `24*mu*ell - 2`.
    pub fn central_charge_g(&self) -> Rat {
        self.params.central_charge()
    }

    /// Apply `u_i` to the `U`-basis vector `w_c`.
    pub fn u_act(&self, i: usize, c: usize) -> Vec<(usize, Rat)> {
        self.params
            .algebra
            .module
            .as_ref()
            .expect("checked at construction")
            .act(i, c)
    }
}

/// Lift a Verma-slot operator to the tensor module.
pub(crate) fn on_verma_slot(
    v: &ModuleVector,
    mut op: impl FnMut(&VermaWord) -> VermaVector,
) -> ModuleVector {
    let mut out = ModuleVector::zero();
    for (w, c) in v.iter() {
        for (vw, vc) in op(&w.verma).into_iter() {
            out.add_term(TensorWord { verma: vw, fock: w.fock.clone() }, vc * c);
        }
    }
    out
}

/// Lift a Fock-slot operator to the tensor module.
pub(crate) fn on_fock_slot(
    v: &ModuleVector,
    mut op: impl FnMut(&FockWord) -> FockVector,
) -> ModuleVector {
    let mut out = ModuleVector::zero();
    for (w, c) in v.iter() {
        for (fw, fc) in op(&w.fock).into_iter() {
            out.add_term(TensorWord { verma: w.verma.clone(), fock: fw }, fc * c);
        }
    }
    out
}

/// All normally ordered creation-op lists of total degree exactly `d` over
/// the given species list, in canonical order.
fn creation_words<S: Clone>(species: &[S], d: i64) -> Vec<Vec<(i64, S)>> {
    // Choose ops with modes -d..=-1; recursion keeps (mode, species-index)
    // strictly nondecreasing so each multiset appears exactly once.
    fn rec<S: Clone>(
        species: &[S],
        remaining: i64,
        min_mode: i64,
        min_rank_at_min_mode: usize,
        acc: &mut Vec<(i64, S)>,
        out: &mut Vec<Vec<(i64, S)>>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for mode in min_mode..=-1 {
            if -mode > remaining {
                continue;
            }
            let rank0 = if mode == min_mode { min_rank_at_min_mode } else { 0 };
            for rank in rank0..species.len() {
                acc.push((mode, species[rank].clone()));
                rec(species, remaining + mode, mode, rank, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(species, d, -d, 0, &mut Vec::new(), &mut out);
    out
}

/// All Verma words of degree exactly `d` over every `U`-basis vector.
pub fn verma_words(ctx: &ModuleContext, d: i64) -> Vec<VermaWord> {
    let mut species = vec![VSpecies::L];
    species.extend((0..ctx.params.algebra.dim).map(VSpecies::U));
    let mut out = Vec::new();
    for ops in creation_words(&species, d) {
        for ubase in 0..ctx.udim {
            out.push(VermaWord {
                ops: ops.iter().map(|(m, s)| VOp { mode: *m, species: s.clone() }).collect(),
                ubase,
            });
        }
    }
    out
}

/// All Fock words of degree exactly `d` at the given charge.
pub fn fock_words(d: i64, charge: i64) -> Vec<FockWord> {
    creation_words(&[HGen::K, HGen::D], d)
        .into_iter()
        .map(|ops| FockWord {
            ops: ops.iter().map(|(m, s)| HOp { mode: *m, species: *s }).collect(),
            charge,
        })
        .collect()
}

/// All tensor words of total degree `<= cap` with charges drawn from `charges`.
pub fn tensor_basis(ctx: &ModuleContext, cap: i64, charges: &[i64]) -> Vec<TensorWord> {
    let mut out = Vec::new();
    for dv in 0..=cap {
        for vw in verma_words(ctx, dv) {
            for df in 0..=(cap - dv) {
                for r in charges {
                    for fw in fock_words(df, *r) {
                        out.push(TensorWord { verma: vw.clone(), fock: fw });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

impl fmt::Display for VOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.species {
            VSpecies::L => write!(f, "L({})", self.mode),
            VSpecies::U(i) => write!(f, "u{i}({})", self.mode),
        }
    }
}

impl fmt::Display for VermaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{op} ")?;
        }
        write!(f, "w{}", self.ubase)
    }
}

impl fmt::Display for HOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.species {
            HGen::K => write!(f, "k({})", self.mode),
            HGen::D => write!(f, "d({})", self.mode),
        }
    }
}

impl fmt::Display for FockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{op} ")?;
        }
        write!(f, "e[{}]", self.charge)
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (x) {}", self.verma, self.fock)
    }
}
