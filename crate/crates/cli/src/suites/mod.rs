//! The identity suites: exhaustive index boxes over the configured grids,
//! exact residuals, one record per case.
//!
//! Case granularity is chosen so reports stay bounded on large boxes: cheap
//! scalar checks record one case per grid point, while cubic sweeps (Jacobi
//! triples, form invariance) aggregate an inner loop into one case and
//! record the first offending tuple as the witness. Every suite also has a
//! documented fault injection (enabled by naming it in `fault_inject`) that
//! corrupts one side of its identity; a fault run is expected to produce
//! failing cases — this guards the suites against vacuity.

use std::sync::Arc;

use toroidal_core::context::ParamContext;
use toroidal_core::galgebra::GAlgebra;
use toroidal_core::report::{CaseRecord, CheckReport};
use toroidal_core::scalars::{rat, rat_int, Rat};

use crate::config::{Suite, SuiteConfig};

mod algebraic;
mod modules;
mod series;

/// Run one suite over the configured plan.
pub fn run(suite: Suite, cfg: &SuiteConfig) -> CheckReport {
    let fault = cfg.fault_inject == Some(suite);
    let cases = match suite {
        Suite::Scalars => algebraic::scalars(cfg, fault),
        Suite::Lemma22 => algebraic::lemma22(cfg, fault),
        Suite::Newton => algebraic::newton(cfg, fault),
        Suite::Prop23 => algebraic::prop23(cfg, fault),
        Suite::Jacobi => algebraic::jacobi(cfg, fault),
        Suite::FormEps1 => algebraic::form_eps1(cfg, fault),
        Suite::Phi => series::phi(cfg, fault),
        Suite::HCoeffs => series::hcoeffs(cfg, fault),
        Suite::U1Corr => series::u1corr(cfg, fault),
        Suite::FockConditions => modules::fock_conditions(cfg, fault),
        Suite::Realization => modules::realization(cfg, fault),
        Suite::DegreeZero => modules::degree_zero(cfg, fault),
    };
    let mut report = CheckReport::new();
    for c in cases {
        report.push(c);
    }
    report
}

/// One record with the suite token filled in.
pub(crate) fn case(
    suite: Suite,
    case_id: String,
    params: String,
    witness: Option<String>,
) -> CaseRecord {
    CaseRecord {
        suite: suite.token().to_string(),
        case_id,
        params,
        pass: witness.is_none(),
        residual: witness,
    }
}

/// Witness for a scalar residual: `None` iff zero.
pub(crate) fn rat_witness(r: &Rat) -> Option<String> {
    if *r == rat_int(0) {
        None
    } else {
        Some(r.to_string())
    }
}

/// One evaluation context from the configured grid: a short stable tag for
/// case ids, the fully rendered parameter string, and the context itself.
pub(crate) struct Ctx {
    pub tag: String,
    pub params: String,
    pub ctx: ParamContext,
}

/// Every `(epsilon, parameter point)` context over the configured grid.
pub(crate) fn param_contexts(cfg: &SuiteConfig, algebra: &Arc<GAlgebra>) -> Vec<Ctx> {
    let mut out = Vec::new();
    for &eps in &cfg.epsilon_values {
        for (pi, p) in cfg.parameter_points.iter().enumerate() {
            let ctx = ParamContext::new(
                eps,
                p.mu.clone(),
                p.ell.clone(),
                p.alpha.clone(),
                p.beta.clone(),
                algebra.clone(),
            )
            .expect("configuration was validated");
            out.push(Ctx {
                tag: format!("eps={eps}/pt{pi}"),
                params: format!("eps={eps} {} algebra={}", p.render(), algebra.name),
                ctx,
            });
        }
    }
    out
}

/// The same context with `mu` shifted by one: the standard corrupted
/// evaluation side for fault injections that must disturb cocycle terms.
pub(crate) fn mu_shifted(ctx: &ParamContext) -> ParamContext {
    ParamContext::new(
        ctx.eps,
        ctx.mu.clone() + rat_int(1),
        ctx.ell.clone(),
        ctx.alpha.clone(),
        ctx.beta.clone(),
        ctx.algebra.clone(),
    )
    .expect("shifting mu preserves validity")
}

/// The same context with the convention shift moved by one: the standard
/// corrupted side for identities that are polynomial in `eps`.
pub(crate) fn eps_shifted(ctx: &ParamContext) -> ParamContext {
    ParamContext::new(
        ctx.eps + 1,
        ctx.mu.clone(),
        ctx.ell.clone(),
        ctx.alpha.clone(),
        ctx.beta.clone(),
        ctx.algebra.clone(),
    )
    .expect("shifting eps preserves validity")
}

/// The same context with `beta` shifted by one: used to perturb the
/// module-weight data that the degree-zero comparison is sensitive to.
pub(crate) fn beta_shifted(ctx: &ParamContext) -> ParamContext {
    ParamContext::new(
        ctx.eps,
        ctx.mu.clone(),
        ctx.ell.clone(),
        ctx.alpha.clone(),
        ctx.beta.clone() + rat_int(1),
        ctx.algebra.clone(),
    )
    .expect("shifting beta preserves validity")
}

/// Fixed five-point rational grid `(a, b, alpha, beta)` for the scalar
/// identity suites: mixed signs, integers and non-integers, including zero.
pub(crate) fn scalar_grid() -> Vec<(Rat, Rat, Rat, Rat)> {
    vec![
        (rat(1, 2), rat(-2, 3), rat_int(3), rat(-1, 5)),
        (rat_int(0), rat_int(1), rat(1, 7), rat(2, 5)),
        (rat_int(-1), rat(-1, 2), rat(2, 3), rat_int(4)),
        (rat(5, 3), rat(1, 4), rat_int(-2), rat(-3, 7)),
        (rat_int(2), rat_int(-3), rat(1, 2), rat(1, 6)),
    ]
}
