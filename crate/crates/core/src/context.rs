//! Ambient parameters shared by every structure in the crate.

use crate::galgebra::GAlgebra;
use crate::scalars::{rat_int, Rat};
use num_traits::Zero;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ContextError {
    #[error("the level `ell` must be nonzero")]
    ZeroLevel,
}

/// Exact ambient parameters: the integer twist `eps`, the cocycle weight
/// `mu`, the level `ell != 0`, and the two highest-weight parameters
/// `alpha` (lattice shift) and `beta` (Virasoro weight).
#[derive(Debug, Clone)]
pub struct ParamContext {
    pub eps: i64,
    pub mu: Rat,
    pub ell: Rat,
    pub alpha: Rat,
    pub beta: Rat,
    pub algebra: Arc<GAlgebra>,
}

impl ParamContext {
    pub fn new(
        eps: i64,
        mu: Rat,
        ell: Rat,
        alpha: Rat,
        beta: Rat,
        algebra: Arc<GAlgebra>,
    ) -> Result<Self, ContextError> {
        if ell.is_zero() {
            return Err(ContextError::ZeroLevel);
        }
        Ok(ParamContext { eps, mu, ell, alpha, beta, algebra })
    }

    /// Central charge of the Virasoro factor acting on the highest-weight
    /// side: `24 mu ell - 2`.
    pub fn central_charge(&self) -> Rat {
        rat_int(24) * &self.mu * &self.ell - rat_int(2)
    }

    /// Central charge of the combined Virasoro field: `24 mu ell`
    /// (the oscillator pair contributes `2`).
    pub fn central_charge_total(&self) -> Rat {
        rat_int(24) * &self.mu * &self.ell
    }
}
