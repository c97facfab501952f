//! The ten end-to-end acceptance checks for the verifier, each pinned to
//! its coverage plan and wall-clock budget. Every check prints one
//! `criterion NN [PASS|FAIL]` line (visible with `--nocapture`) and then
//! asserts both exactness and the budget, so a regression in either
//! correctness or performance fails the build.
//!
//! Budgets are generous on purpose: they describe "desk scale", not a
//! benchmark. The suites are exact rational arithmetic throughout, so a
//! pass here is a zero-tolerance identity check, not an approximation.

use std::time::{Duration, Instant};

use toroidal_cli::config::ParamPoint;
use toroidal_cli::{run_suites, CheckReport, Suite, SuiteConfig};
use toroidal_core::scalars::{rat, rat_int};

fn base(suites: Vec<Suite>) -> SuiteConfig {
    SuiteConfig { suites, ..SuiteConfig::default() }
}

/// The `mu in {0, 1/3}` parameter grid shared by the bracket-identity
/// criteria; the remaining coordinates never enter the bracket.
fn mu_grid() -> Vec<ParamPoint> {
    vec![
        ParamPoint { mu: rat_int(0), ell: rat_int(2), alpha: rat(1, 5), beta: rat_int(7) },
        ParamPoint { mu: rat(1, 3), ell: rat_int(2), alpha: rat(1, 5), beta: rat_int(7) },
    ]
}

/// Run the configuration, print the per-criterion verdict line, and assert
/// exactness plus the runtime budget.
fn check(id: u32, desc: &str, cfg: &SuiteConfig, budget: Duration) -> CheckReport {
    let start = Instant::now();
    let report = run_suites(cfg);
    let elapsed = start.elapsed();
    let ok = report.all_passed() && elapsed <= budget;
    println!(
        "criterion {id:>2} [{}] {desc}: {} cases, {} failed, {:.2?} (budget {:.0?})",
        if ok { "PASS" } else { "FAIL" },
        report.total(),
        report.failed(),
        elapsed,
        budget,
    );
    for c in report.cases.iter().filter(|c| !c.pass).take(5) {
        println!("    offending case: {} / {} / {:?}", c.case_id, c.params, c.residual);
    }
    assert!(
        report.all_passed(),
        "criterion {id}: {} of {} cases failed",
        report.failed(),
        report.total()
    );
    assert!(elapsed <= budget, "criterion {id}: {elapsed:.2?} exceeds budget {budget:.0?}");
    report
}

fn has_case(report: &CheckReport, fragment: &str) -> bool {
    report.cases.iter().any(|c| c.case_id.contains(fragment))
}

/// Shifted-factorial expansion identities: residuals vanish for all
/// truncation degrees `p <= 6`, conventions `eps in {-2..3}`, over the
/// fixed five-point rational grid.
#[test]
fn criterion_01_expansion_identities() {
    let mut cfg = base(vec![Suite::Lemma22, Suite::Newton]);
    cfg.index_box = 6;
    check(1, "expansion + recurrence identities, p <= 6", &cfg, Duration::from_secs(10));
}

/// Jacobi identity on every basis triple from the box `|m| <= 3`, for
/// `eps in {-1,0,1,2}`, `mu in {0, 1/3}`, and both coefficient algebras.
#[test]
fn criterion_02_jacobi_box_three() {
    let mut cfg = base(vec![Suite::Jacobi]);
    cfg.epsilon_values = vec![-1, 0, 1, 2];
    cfg.parameter_points = mu_grid();
    cfg.index_box = 3;
    check(2, "Jacobi on all box-3 basis triples", &cfg, Duration::from_secs(120));
}

/// All twelve generating-series relations, coefficient residual zero over
/// the index box `|i|,|j| <= 4` with series labels capped at 3 (nonzero
/// where the relation requires it), on the criterion-2 grid.
#[test]
fn criterion_03_defining_relations() {
    let mut cfg = base(vec![Suite::Prop23]);
    cfg.epsilon_values = vec![-1, 0, 1, 2];
    cfg.parameter_points = mu_grid();
    cfg.index_box = 4;
    let report = check(3, "defining relations, index box 4", &cfg, Duration::from_secs(300));
    // Every relation id must actually be exercised.
    for id in 1..=12 {
        assert!(has_case(&report, &format!("rel={id} ")), "relation {id} missing");
    }
}

/// Flow axioms at truncation order 8 for `eps in {-2..3}`, including the
/// closed forms: translation at `eps = 0` and exponential rescaling at
/// `eps = 1`.
#[test]
fn criterion_04_flow_axioms() {
    let mut cfg = base(vec![Suite::Phi]);
    cfg.truncation_order = 8;
    let report = check(4, "flow axioms, order 8", &cfg, Duration::from_secs(5));
    assert!(has_case(&report, "eps=0 additive-closed-form"));
    assert!(has_case(&report, "eps=1 multiplicative-closed-form"));
}

/// Closed multinomial formula equals series inversion for `n <= 8` at
/// every grid `eps`; at `eps = 1` the values are the Bernoulli-series
/// coefficients.
#[test]
fn criterion_05_dual_coefficient_routes() {
    let mut cfg = base(vec![Suite::HCoeffs]);
    cfg.truncation_order = 8;
    let report = check(5, "dual coefficient routes, n <= 8", &cfg, Duration::from_secs(5));
    assert!(has_case(&report, "bernoulli"), "missing the eps=1 Bernoulli anchor");
}

/// The first three correction scalars match their closed polynomials in
/// `eps`, verified at six integer conventions.
#[test]
fn criterion_06_correction_scalars() {
    let cfg = base(vec![Suite::U1Corr]);
    assert_eq!(cfg.epsilon_values.len(), 6);
    check(6, "correction scalars at 6 conventions", &cfg, Duration::from_secs(1));
}

/// Normal-ordering shift identity and the exponential-field conditions,
/// coefficient-wise on all oscillator words of degree <= 4 with charges
/// `|r| <= 2`, over the full convention/parameter grid.
#[test]
fn criterion_07_operator_identities() {
    let mut cfg = base(vec![Suite::FockConditions]);
    cfg.degree_cap = 4;
    check(7, "operator identities, words to degree 4", &cfg, Duration::from_secs(120));
}

/// Flagship module axiom: the commutator residual vanishes for every
/// unordered dictionary generator pair — including the opposed
/// derivation-family pair — applied to every tensor basis vector of total
/// degree <= 3, with the natural-module coefficients and two parameter
/// points.
#[test]
fn criterion_08_module_axiom() {
    let mut cfg = base(vec![Suite::Realization]);
    cfg.epsilon_values = vec![0, 1, 2];
    cfg.degree_cap = 3;
    assert_eq!(cfg.parameter_points[0], ParamPoint {
        mu: rat(1, 3),
        ell: rat_int(2),
        alpha: rat(1, 5),
        beta: rat_int(7),
    });
    assert_eq!(cfg.parameter_points.len(), 2);
    let report = check(8, "module axiom, exhaustive to degree 3", &cfg, Duration::from_secs(900));
    assert!(has_case(&report, "x=d0[1] y=d0[-1]"), "opposed derivation pair missing");
}

/// Degree-zero comparison: the realized action restricted to the loop
/// slice matches the evaluation module for labels and charges in
/// `{-3..3}`, including the `eps = 1` distinguished generator.
#[test]
fn criterion_09_degree_zero_comparison() {
    let cfg = base(vec![Suite::DegreeZero]);
    assert_eq!(cfg.index_box, 3);
    let report = check(9, "degree-zero comparison, box 3", &cfg, Duration::from_secs(30));
    assert!(has_case(&report, "key=d0shift"), "eps=1 distinguished generator missing");
}

/// Fault injection: perturbing `mu` by one on exactly one side of the
/// criterion-8 commutator flips the suite to FAIL with a nonzero residual
/// witness — the flagship check is not vacuous.
#[test]
fn criterion_10_module_axiom_fault_sensitivity() {
    let mut cfg = base(vec![Suite::Realization]);
    cfg.epsilon_values = vec![0, 1, 2];
    cfg.degree_cap = 3;
    cfg.fault_inject = Some(Suite::Realization);
    let budget = Duration::from_secs(60);
    let start = Instant::now();
    let report = run_suites(&cfg);
    let elapsed = start.elapsed();
    let flipped = report.failed();
    let witnessed = report
        .cases
        .iter()
        .any(|c| !c.pass && c.residual.as_deref().is_some_and(|w| !w.is_empty()));
    let ok = flipped > 0 && witnessed && elapsed <= budget;
    println!(
        "criterion 10 [{}] one-sided parameter fault detected: {} cases, {} flipped, {:.2?} (budget {:.0?})",
        if ok { "PASS" } else { "FAIL" },
        report.total(),
        flipped,
        elapsed,
        budget,
    );
    assert!(flipped > 0, "criterion 10: fault injection produced no failing case");
    assert!(witnessed, "criterion 10: failing cases carry no residual witness");
    assert!(elapsed <= budget, "criterion 10: {elapsed:.2?} exceeds budget {budget:.0?}");
}
