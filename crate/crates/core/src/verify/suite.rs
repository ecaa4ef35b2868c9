use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::checks::*;
use super::{derive_seed, CheckReport};
use crate::cone::ConePoint;
use crate::error::Result;

/// Parameters of the full suite. Checks whose parameters are fixed by
/// design (normalization grid, sample mean, eigenpair density, pooled
/// estimate) ignore `m`, `m0` and `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Dimension of `W`.
    pub m: usize,
    /// Dimension of `W₀`.
    pub m0: usize,
    /// Shape.
    pub eta: f64,
    /// Master seed.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { m: 4, m0: 2, eta: 3.0, seed: 11 }
    }
}

fn power(mut r: CheckReport) -> CheckReport {
    r.details = format!("perturbed null (shape + 1), must be rejected; {}", r.details);
    r.name = format!("power_{}", r.name);
    r.passed = !r.passed;
    r
}

/// Runs every check in a fixed order. Seeds are derived per check name, so
/// a single check can be rerun in isolation with [`derive_seed`].
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let SuiteConfig { m, m0, eta, seed } = *cfg;
    let s = |name: &str| derive_seed(seed, name);
    let mut out = vec![
        run_beta_law_check(m, m0, eta, 20_000, s("beta_law"))?,
        run_independence_check(IndependenceKind::T1, m, Some(m0), eta, 20_000, s("independence_t1"))?,
        run_marginal_check(m, m0, eta, 20_000, s("marginal_t"))?,
    ];
    for mm in [1, 2] {
        for e in [1.75, 3.0] {
            let mut r = run_normalization_check(mm, e)?;
            r.name = format!("normalization_m{mm}_eta{e}");
            out.push(r);
        }
    }
    out.push(run_sample_mean_check(&ConePoint::new(2.0, vec![1.0, 0.0, 0.0]), 3.0, 50_000, s("sample_mean"))?);
    out.push(run_invariance_sweep(1000, s("invariance"))?);
    out.push(run_reverse_cs_sweep(100_000, s("reverse_cauchy_schwarz"))?);
    out.push(run_eigen_algebra_check(10_000, s("eigen_algebra"))?);
    out.push(run_lr_unit_check(m, eta, 1000, s("lr_unit"))?);
    out.push(run_independence_check(IndependenceKind::T2, m, None, eta, 20_000, s("independence_t2"))?);
    out.push(run_pivotality_check(m, eta, eta, 20_000, s("pivotality"))?);
    out.push(run_p_value_uniformity_check(m, eta, eta, 10_000, 200_000, s("p_value_uniformity"))?);
    out.push(run_eigen_constant_check(2, 3.0)?);
    out.push(run_eigenpair_check(2, 3.0, 3.0, 50_000, s("eigenpair_density"))?);
    out.push(run_pooled_mle_check(3, 2.0, 20_000, s("pooled_mle"))?);
    out.push(run_match_witness_check(500, s("match_witness"))?);

    let p = eta + 1.0;
    out.push(power(run_beta_law_check_with_null(m, m0, eta, p, 20_000, s("beta_law"))?));
    out.push(power(run_t1_independence_with_null(m, m0, eta, p, 20_000, s("independence_t1"))?));
    out.push(power(run_marginal_check_with_null(m, m0, eta, p, 20_000, s("marginal_t"))?));
    out.push(power(run_pivotality_check(m, eta, p, 20_000, s("pivotality"))?));
    out.push(power(run_p_value_uniformity_check(m, eta, p, 10_000, 200_000, s("p_value_uniformity"))?));
    out.push(power(run_eigenpair_check(2, 3.0, 4.0, 50_000, s("eigenpair_density"))?));
    Ok(out)
}
