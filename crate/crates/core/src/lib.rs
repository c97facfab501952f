//! Exact-arithmetic models of a two-variable loop algebra with central and
//! derivation extensions, an oscillator realization of it on tensor-product
//! highest-weight spaces, and the identity suites that verify both against
//! closed-form expectations.
//!
//! Everything is computed over arbitrary-precision rationals; every check
//! is an exact zero test, never a floating-point comparison.
//!
//! Layout:
//! - [`scalars`]: rational arithmetic, parsing, binomials and factorials;
//! - [`combination`]: sparse linear combinations with exact coefficients;
//! - [`factorial`]: step-`eps-1` factorial products and their convolution
//!   and binomial identities;
//! - [`galgebra`]: finite-dimensional coefficient Lie algebras with an
//!   invariant form and an optional finite-dimensional module;
//! - [`context`]: the shared parameter pack `(eps, mu, ell, alpha, beta)`;
//! - [`toroidal`]: the extended loop algebra — basis, bracket, generating
//!   series relations, and the `eps = 1` invariant form;
//! - [`series`]: truncated two-variable power series over Laurent monomials;
//! - [`phi`]: the deformed-flow calculus — the flow series, its composition
//!   law, inverse-series coefficients, and normal-ordering corrections;
//! - [`fock`]: highest-weight and oscillator modules, field coefficients,
//!   and the operator dictionary realizing the extended loop algebra on
//!   their tensor product;
//! - [`report`]: deterministic pass/fail reporting for the check suites.

pub mod combination;
pub mod context;
pub mod factorial;
pub mod fock;
pub mod galgebra;
pub mod phi;
pub mod report;
pub mod scalars;
pub mod series;
pub mod toroidal;
