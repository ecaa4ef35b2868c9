use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Write;

use rand::Rng;

use super::{new_rng, pow_root, random_cone_point, random_subcone_point, splitmix64, CheckReport};
use super::{calibrate_null, calibrate_null_at};
use super::stats::*;
use crate::cone::{AmbientSpace, ConePoint, SubconeSplit};
use crate::error::{Error, Result};
use crate::group::{
    form_residual, match_in_g0, random_g0_element, random_group_element, validate_g0, GroupElement,
};
use crate::hypothesis::{
    equality_test, generalized_eigenvalues, log_lr_from_eigen, lr_subcone, maximal_invariant_m,
    mle_pooled, reverse_cs_gap, subcone_null_beta, sufficient_t, EigenPair, EigenpairLaw,
};
use crate::math::{exp, ln, norm_sq, powf, sin, sqrt};
use crate::quadrature::tanh_sinh;
use crate::special::{beta_cdf, beta_quantile, ks_two_sample_p_value, ln_gamma};
use crate::wishart::WishartModel;

/// Significance level of the distributional checks.
pub const ALPHA: f64 = 0.01;

/// Rejection level for the losing candidate of the pooled-estimate check.
pub const POOLED_REJECT: f64 = 1e-4;

/// Tolerance of the invariance sweep.
pub const INVARIANCE_TOL: f64 = 1e-9;

/// Tolerance of the density normalization check.
pub const NORMALIZATION_TOL: f64 = 1e-3;

/// Distance tolerance of the pivotality check.
pub const PIVOTALITY_TOL: f64 = 0.02;

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    Ok(())
}

fn hyperbolic_scale(m: usize) -> ConePoint {
    let mut w = vec![0.0; m];
    w[0] = 1.0;
    ConePoint::new(2.0, w)
}

/// Null law of `m` and of `Q^{1/η}` under (T1): KS of both against the Beta
/// laws at shape `eta`; passes iff both distances are below `1.63/√n`.
pub fn run_beta_law_check(m: usize, m0: usize, eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    run_beta_law_check_with_null(m, m0, eta, eta, n, seed)
}

/// As [`run_beta_law_check`], with the reference Beta laws taken at
/// `null_eta` while the data are drawn at `eta`.
pub fn run_beta_law_check_with_null(
    m: usize,
    m0: usize,
    eta: f64,
    null_eta: f64,
    n: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_n(n)?;
    let split = SubconeSplit::new(m, m0)?;
    let (a, b) = subcone_null_beta(split, null_eta)?;
    let mut rng = new_rng(seed);
    let model = WishartModel::new(eta, random_subcone_point(&mut rng, split))?;
    let draws = model.sample(n, &mut rng)?;
    let mut ms = Vec::with_capacity(n);
    let mut qs = Vec::with_capacity(n);
    for x in &draws {
        ms.push(maximal_invariant_m(x, split)?);
        qs.push(pow_root(lr_subcone(x, split, eta)?, eta));
    }
    let d_m = ks_statistic(&ms, |u| beta_cdf(u.clamp(0.0, 1.0), a, b).unwrap_or(f64::NAN))?;
    let d_q = ks_statistic(&qs, |u| beta_cdf(u.clamp(0.0, 1.0), b, a).unwrap_or(f64::NAN))?;
    let statistic = d_m.max(d_q);
    let threshold = ks_threshold(n);
    Ok(CheckReport {
        name: "beta_law".into(),
        statistic,
        threshold,
        passed: statistic < threshold,
        n_samples: n,
        seed,
        details: format!(
            "m = {m}, m0 = {m0}, eta = {eta}; KS(m_stat, Beta({a}, {b})) = {d_m:.6}, \
             KS(Q^(1/eta), Beta({b}, {a})) = {d_q:.6}"
        ),
    })
}

/// Which independence claim to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndependenceKind {
    /// `det t(x)` against `m(x)` under (T1)'s null.
    T1,
    /// `det` of the pooled estimate against `ξ₁` under (T2)'s null.
    T2,
}

/// Chi-square independence on 4x4 empirical-quantile bins; passes iff not
/// rejected at `α = 0.01`. For (T1) the check also compares the `m(x)`
/// columns against the theoretical Beta quartiles within each `det t(x)` row
/// (df 12), and passes only if both tests pass.
pub fn run_independence_check(
    kind: IndependenceKind,
    m: usize,
    m0: Option<usize>,
    eta: f64,
    n: usize,
    seed: u64,
) -> Result<CheckReport> {
    match kind {
        IndependenceKind::T1 => {
            let m0 = m0.ok_or_else(|| Error::InvalidParameter("T1 independence needs m0".into()))?;
            run_t1_independence_with_null(m, m0, eta, eta, n, seed)
        }
        IndependenceKind::T2 => run_t2_independence(m, eta, n, seed),
    }
}

/// (T1) independence with the product-law columns built at `null_eta`.
pub fn run_t1_independence_with_null(
    m: usize,
    m0: usize,
    eta: f64,
    null_eta: f64,
    n: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_n(n)?;
    let split = SubconeSplit::new(m, m0)?;
    let (a, b) = subcone_null_beta(split, null_eta)?;
    let mut rng = new_rng(seed);
    let model = WishartModel::new(eta, random_subcone_point(&mut rng, split))?;
    let draws = model.sample(n, &mut rng)?;
    let mut dets = Vec::with_capacity(n);
    let mut ms = Vec::with_capacity(n);
    for x in &draws {
        dets.push(sufficient_t(x, split)?.det());
        ms.push(maximal_invariant_m(x, split)?);
    }
    let row_edges = empirical_edges(&dets, 4);
    let classic = chi_square_independence(&contingency(&dets, &ms, &row_edges, &empirical_edges(&ms, 4)))?;
    let beta_edges: Vec<f64> =
        (1..4).map(|k| beta_quantile(k as f64 / 4.0, a, b)).collect::<Result<_>>()?;
    let table = contingency(&dets, &ms, &row_edges, &beta_edges);
    let observed: Vec<f64> = table.iter().flatten().copied().collect();
    let expected: Vec<f64> = table
        .iter()
        .flat_map(|r| {
            let t: f64 = r.iter().sum();
            r.iter().map(move |_| t / 4.0)
        })
        .collect();
    let product = chi_square_gof(&observed, &expected, 5.0, 3)?;
    let statistic = classic.p_value.min(product.p_value);
    Ok(CheckReport {
        name: "independence_t1".into(),
        statistic,
        threshold: ALPHA,
        passed: classic.p_value > ALPHA && product.p_value > ALPHA && classic.min_expected >= 5.0,
        n_samples: n,
        seed,
        details: format!(
            "m = {m}, m0 = {m0}, eta = {eta}; statistic is the smaller p-value; \
             empirical 4x4: chi2 = {:.4}, df = {}, p = {:.4}; \
             product law with Beta({a}, {b}) quartiles: chi2 = {:.4}, df = {}, p = {:.4}",
            classic.statistic, classic.df, classic.p_value, product.statistic, product.df, product.p_value
        ),
    })
}

fn run_t2_independence(m: usize, eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let mut rng = new_rng(seed);
    let model = WishartModel::new(eta, random_cone_point(&mut rng, m))?;
    let a = model.sample(n, &mut rng)?;
    let b = model.sample(n, &mut rng)?;
    let mut dets = Vec::with_capacity(n);
    let mut xi1 = Vec::with_capacity(n);
    for (x, y) in a.iter().zip(&b) {
        dets.push(mle_pooled(x, y)?.det());
        xi1.push(generalized_eigenvalues(x, y)?.xi1);
    }
    let t = chi_square_independence(&contingency(
        &dets,
        &xi1,
        &empirical_edges(&dets, 4),
        &empirical_edges(&xi1, 4),
    ))?;
    Ok(CheckReport {
        name: "independence_t2".into(),
        statistic: t.p_value,
        threshold: ALPHA,
        passed: t.p_value > ALPHA && t.min_expected >= 5.0,
        n_samples: n,
        seed,
        details: format!(
            "m = {m}, eta = {eta}; statistic is the p-value; chi2 = {:.4}, df = {}, min expected = {:.1}",
            t.statistic, t.df, t.min_expected
        ),
    })
}

/// `det t(x)` under (T1)'s null against `det` of direct draws from the
/// subcone law `W^{L₀}_{η,σ₀}`; two-sample KS at `α = 0.01`.
pub fn run_marginal_check(m: usize, m0: usize, eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    run_marginal_check_with_null(m, m0, eta, eta, n, seed)
}

/// As [`run_marginal_check`], with the direct subcone draws at `null_eta`.
pub fn run_marginal_check_with_null(
    m: usize,
    m0: usize,
    eta: f64,
    null_eta: f64,
    n: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_n(n)?;
    let split = SubconeSplit::new(m, m0)?;
    let mut rng = new_rng(seed);
    let sigma0 = random_cone_point(&mut rng, m0);
    let model = WishartModel::new(eta, split.embed(&sigma0)?)?;
    let draws = model.sample(n, &mut rng)?;
    let t_dets: Vec<f64> = draws.iter().map(|x| sufficient_t(x, split).map(|t| t.det())).collect::<Result<_>>()?;
    let direct = WishartModel::new(null_eta, sigma0)?.sample(n, &mut rng)?;
    let d_dets: Vec<f64> = direct.iter().map(ConePoint::det).collect();
    let d = ks_two_sample(&t_dets, &d_dets)?;
    let threshold = ks_two_sample_threshold(n, n);
    Ok(CheckReport {
        name: "marginal_t".into(),
        statistic: d,
        threshold,
        passed: d < threshold,
        n_samples: n,
        seed,
        details: format!(
            "m = {m}, m0 = {m0}, eta = {eta}; two-sample KS p = {:.4}",
            ks_two_sample_p_value(d, n, n)
        ),
    })
}

/// Adjudicates the law of the pooled estimate `(τ₁+τ₂)/2`: two-sample KS of
/// its determinant against direct `W_{η,σ}` and `W_{2η,σ}` draws. Passes iff
/// exactly one candidate has `p > 0.01` and the other `p < 1e−4`.
pub fn run_pooled_mle_check(m: usize, eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let mut rng = new_rng(seed);
    let sigma = random_cone_point(&mut rng, m);
    let model = WishartModel::new(eta, sigma.clone())?;
    let a = model.sample(n, &mut rng)?;
    let b = model.sample(n, &mut rng)?;
    let pooled: Vec<f64> = a.iter().zip(&b).map(|(x, y)| mle_pooled(x, y).map(|s| s.det())).collect::<Result<_>>()?;
    let mut p = [0.0; 2];
    let mut d = [0.0; 2];
    for (k, shape) in [eta, 2.0 * eta].into_iter().enumerate() {
        let direct = WishartModel::new(shape, sigma.clone())?.sample(n, &mut rng)?;
        let dets: Vec<f64> = direct.iter().map(ConePoint::det).collect();
        d[k] = ks_two_sample(&pooled, &dets)?;
        p[k] = ks_two_sample_p_value(d[k], n, n);
    }
    let names = ["W_{eta,sigma}", "W_{2eta,sigma}"];
    let accepted: Vec<usize> = (0..2).filter(|&k| p[k] > ALPHA).collect();
    let rejected: Vec<usize> = (0..2).filter(|&k| p[k] < POOLED_REJECT).collect();
    let passed = accepted.len() == 1 && rejected.len() == 1;
    let mut details = format!(
        "m = {m}, eta = {eta}; {}: KS = {:.5}, p = {:.3e}; {}: KS = {:.5}, p = {:.3e}; ",
        names[0], d[0], p[0], names[1], d[1], p[1]
    );
    if passed {
        let _ = write!(details, "pooled estimate follows {}", names[accepted[0]]);
    } else {
        details.push_str("inconclusive");
    }
    Ok(CheckReport {
        name: "pooled_mle".into(),
        statistic: p[0].min(p[1]),
        threshold: POOLED_REJECT,
        passed,
        n_samples: n,
        seed,
        details,
    })
}

fn random_split<R: Rng + ?Sized>(rng: &mut R) -> SubconeSplit {
    let m = rng.random_range(2..=5);
    let m0 = rng.random_range(1..m);
    SubconeSplit::new(m, m0).expect("1 <= m0 < m")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Invariance of `m` under random `G₀` elements and of `(ξ₁, ξ₂)` under
/// random `G` elements, over `n_pairs` cases each with `m` in `2..=5`.
/// Passes iff the worst relative deviation is `≤ 1e−9` and every group
/// element built satisfies `‖AᵀΨA − Ψ‖_F ≤ 1e−10`.
pub fn run_invariance_sweep(n_pairs: usize, seed: u64) -> Result<CheckReport> {
    require_n(n_pairs)?;
    let mut rng = new_rng(seed);
    let (mut dev_m, mut dev_xi, mut residual) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n_pairs {
        let split = random_split(&mut rng);
        let x = random_cone_point(&mut rng, split.m());
        let g = random_g0_element(&mut rng, split);
        residual = residual.max(form_residual(g.matrix()));
        let before = maximal_invariant_m(&x, split)?;
        let after = maximal_invariant_m(&g.apply(&x)?, split)?;
        dev_m = dev_m.max(rel(after, before));

        let space = split.space();
        let s1 = random_cone_point(&mut rng, space.m());
        let s2 = random_cone_point(&mut rng, space.m());
        let h = random_group_element(&mut rng, space);
        residual = residual.max(form_residual(h.matrix()));
        let e0 = generalized_eigenvalues(&s1, &s2)?;
        let e1 = generalized_eigenvalues(&h.apply(&s1)?, &h.apply(&s2)?)?;
        dev_xi = dev_xi.max(rel(e1.xi1, e0.xi1)).max(rel(e1.xi2, e0.xi2));
    }
    let statistic = dev_m.max(dev_xi);
    Ok(CheckReport {
        name: "invariance".into(),
        statistic,
        threshold: INVARIANCE_TOL,
        passed: statistic <= INVARIANCE_TOL && residual <= crate::group::GROUP_TOL,
        n_samples: n_pairs,
        seed,
        details: format!(
            "max |m(gx) - m(x)|/(1+|m(x)|) = {dev_m:.3e}; max eigenpair deviation = {dev_xi:.3e}; \
             max group form residual = {residual:.3e}"
        ),
    })
}

fn sphere_area(k: usize) -> f64 {
    // Area of the unit sphere in R^k.
    let h = 0.5 * k as f64;
    2.0 * exp(h * ln(PI) - ln_gamma(h))
}

fn integrate_density(model: &WishartModel, level: usize) -> Result<f64> {
    let m = model.space().m();
    let rule = tanh_sinh(level);
    let mut total = 0.0;
    let mut x = ConePoint::new(1.0, vec![0.0; m]);
    for ny in &rule {
        // y = u/(1−u)
        let y = ny.x / ny.one_minus_x;
        let jy = 1.0 / (ny.one_minus_x * ny.one_minus_x);
        let mut inner_s = 0.0;
        for ns in &rule {
            let r = y * ns.x;
            let jr = powf(r, m as f64 - 1.0) * y;
            let val = if m == 1 {
                let mut v = 0.0;
                for sign in [1.0, -1.0] {
                    x.lambda = y;
                    x.w[0] = sign * r;
                    v += exp(model.log_density(&x)?);
                }
                v
            } else {
                let mut v = 0.0;
                for nt in &rule {
                    let theta = PI * nt.x;
                    x.lambda = y;
                    x.w[0] = r * libm::cos(theta);
                    x.w[1] = r * sin(theta);
                    v += nt.w * PI * powf(sin(theta), m as f64 - 2.0) * exp(model.log_density(&x)?);
                }
                v * sphere_area(m - 1)
            };
            if val.is_finite() {
                inner_s += ns.w * jr * val;
            }
        }
        total += ny.w * jy * inner_s;
    }
    Ok(total)
}

/// Deterministic quadrature of the density over the cone at
/// `σ = (1.5, (0.5, 0, …))`, in coordinates `y`, `r = ‖z‖` and the angle
/// between `z` and `w_σ`, refined until successive levels agree to 1e−7.
/// Passes iff `|∫f − 1| ≤ 1e−3`.
pub fn run_normalization_check(m: usize, eta: f64) -> Result<CheckReport> {
    let mut w = vec![0.0; m];
    w[0] = 0.5;
    let model = WishartModel::new(eta, ConePoint::new(1.5, w))?;
    let mut level = 3;
    let mut prev = integrate_density(&model, level)?;
    let mut value = prev;
    while level < 24 {
        level *= 2;
        value = integrate_density(&model, level)?;
        if (value - prev).abs() < 1e-7 {
            break;
        }
        prev = value;
    }
    let statistic = (value - 1.0).abs();
    Ok(CheckReport {
        name: "normalization".into(),
        statistic,
        threshold: NORMALIZATION_TOL,
        passed: statistic <= NORMALIZATION_TOL,
        n_samples: 0,
        seed: 0,
        details: format!("m = {m}, eta = {eta}; integral = {value:.10}, tanh-sinh level {level}"),
    })
}

/// Reverse Cauchy–Schwarz: the gap `Ψ(σ₁,σ₂)² − det σ₁ det σ₂` is
/// `≥ −1e−12` over `n` random interior pairs and within 1e−12 of zero on
/// 100 proportional pairs.
pub fn run_reverse_cs_sweep(n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let mut rng = new_rng(seed);
    let mut min_gap = f64::INFINITY;
    for _ in 0..n {
        let m = rng.random_range(1..=5);
        let s1 = random_cone_point(&mut rng, m);
        let s2 = random_cone_point(&mut rng, m);
        min_gap = min_gap.min(reverse_cs_gap(&s1, &s2)?);
    }
    let mut max_prop = 0.0f64;
    for _ in 0..100 {
        let m = rng.random_range(1..=5);
        let s = random_cone_point(&mut rng, m);
        let c = 0.5 + 1.5 * rng.random::<f64>();
        max_prop = max_prop.max(reverse_cs_gap(&s, &s.scale(c))?.abs());
    }
    Ok(CheckReport {
        name: "reverse_cauchy_schwarz".into(),
        statistic: min_gap,
        threshold: -1e-12,
        passed: min_gap >= -1e-12 && max_prop <= 1e-12,
        n_samples: n,
        seed,
        details: format!("min gap = {min_gap:.3e}; max |gap| on proportional pairs = {max_prop:.3e}"),
    })
}

/// Vieta identities `ξ₁+ξ₂ = 2Ψ(σ₁,σ₂)/det σ₁`, `ξ₁ξ₂ = det σ₂/det σ₁`
/// (relative error `≤ 1e−10`) on `n` random pairs, and the pair
/// `(e, (3, (1, 0)))` giving `(4, 2)` within 1e−12.
pub fn run_eigen_algebra_check(n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let mut rng = new_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let m = rng.random_range(1..=5);
        let s1 = random_cone_point(&mut rng, m);
        let s2 = random_cone_point(&mut rng, m);
        let e = generalized_eigenvalues(&s1, &s2)?;
        let sum = 2.0 * s1.psi(&s2)? / s1.det();
        let prod = s2.det() / s1.det();
        worst = worst.max(rel(e.xi1 + e.xi2, sum)).max(rel(e.xi1 * e.xi2, prod));
    }
    let e = generalized_eigenvalues(&ConePoint::identity(2), &ConePoint::new(3.0, vec![1.0, 0.0]))?;
    let worked = (e.xi1 - 4.0).abs().max((e.xi2 - 2.0).abs());
    Ok(CheckReport {
        name: "eigen_algebra".into(),
        statistic: worst,
        threshold: 1e-10,
        passed: worst <= 1e-10 && worked <= 1e-12,
        n_samples: n,
        seed,
        details: format!("worst Vieta deviation = {worst:.3e}; worked pair deviation = {worked:.3e}"),
    })
}

/// Equal observations give a likelihood ratio of one within 1e−12.
pub fn run_lr_unit_check(m: usize, eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let mut rng = new_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let s = random_cone_point(&mut rng, m);
        let pair = generalized_eigenvalues(&s, &s)?;
        worst = worst.max((exp(log_lr_from_eigen(pair, eta)) - 1.0).abs());
    }
    Ok(CheckReport {
        name: "lr_unit".into(),
        statistic: worst,
        threshold: 1e-12,
        passed: worst <= 1e-12,
        n_samples: n,
        seed,
        details: format!("m = {m}, eta = {eta}"),
    })
}

/// Null ratios simulated at `σ = e` (shape `eta`) and at
/// `σ = (2, (1, 0, …))` (shape `other_eta`) agree: two-sample KS `< 0.02`.
pub fn run_pivotality_check(m: usize, eta: f64, other_eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    let a = calibrate_null(m, eta, n, splitmix64(seed))?;
    let b = calibrate_null_at(&hyperbolic_scale(m), other_eta, n, splitmix64(seed ^ 1))?;
    let d = ks_two_sample(&a.sorted_lr_values, &b.sorted_lr_values)?;
    Ok(CheckReport {
        name: "pivotality".into(),
        statistic: d,
        threshold: PIVOTALITY_TOL,
        passed: d < PIVOTALITY_TOL,
        n_samples: n,
        seed,
        details: format!("m = {m}, eta = {eta}; two-sample KS p = {:.4}", ks_two_sample_p_value(d, n, n)),
    })
}

/// (T2) p-values of `n` null pairs at `σ = (2, (1, 0, …))`, computed from a
/// calibration of size `n_calib` at `σ = e` and shape `null_eta`, are
/// uniform: KS below `1.63/√n`.
pub fn run_p_value_uniformity_check(
    m: usize,
    eta: f64,
    null_eta: f64,
    n: usize,
    n_calib: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_n(n)?;
    let calib = calibrate_null(m, null_eta, n_calib, splitmix64(seed))?;
    let mut rng = new_rng(seed);
    let model = WishartModel::new(eta, hyperbolic_scale(m))?;
    let a = model.sample(n, &mut rng)?;
    let b = model.sample(n, &mut rng)?;
    let mut ps = Vec::with_capacity(n);
    for (x, y) in a.iter().zip(&b) {
        ps.push(equality_test(x, y, null_eta, &calib)?.p_value);
    }
    let d = ks_statistic(&ps, |u| u.clamp(0.0, 1.0))?;
    let threshold = ks_threshold(n);
    Ok(CheckReport {
        name: "p_value_uniformity".into(),
        statistic: d,
        threshold,
        passed: d < threshold,
        n_samples: n,
        seed,
        details: format!("m = {m}, eta = {eta}; calibration size {n_calib}"),
    })
}

/// Number of bins per axis of the eigenpair chi-square.
pub const EIGEN_BINS: usize = 10;

fn eigen_chi_square(law: &EigenpairLaw, v: &[f64], rho: &[f64]) -> Result<ChiSquare> {
    let (ve, re) = law.marginal_edges(EIGEN_BINS);
    let table = contingency(v, rho, &ve, &re);
    let n = v.len() as f64;
    let mut full_v = vec![0.0];
    full_v.extend_from_slice(&ve);
    full_v.push(1.0);
    let mut full_r = vec![0.0];
    full_r.extend_from_slice(&re);
    full_r.push(1.0);
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    for i in 0..=ve.len() {
        for j in 0..=re.len() {
            observed.push(table[i][j]);
            expected.push(n * law.cell_probability(full_v[i], full_v[i + 1], full_r[j], full_r[j + 1]));
        }
    }
    chi_square_gof(&observed, &expected, 5.0, 0)
}

/// Eigenpairs of `n` null pairs against the normalized eigenpair density at
/// shape `null_eta`: Pearson chi-square on a 10x10 grid in
/// `v = ξ₁/(1+ξ₁)`, `ρ = ξ₂/ξ₁`, cut at model marginal deciles, with exact
/// cell probabilities; passes iff not rejected at `α = 0.01`. The details
/// also report the fit of the kernel with the Vandermonde square.
pub fn run_eigenpair_check(m: usize, eta: f64, null_eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let space = AmbientSpace::new(m)?;
    let law = EigenpairLaw::new(space, null_eta)?;
    let mut rng = new_rng(seed);
    let model = WishartModel::new(eta, random_cone_point(&mut rng, m))?;
    let a = model.sample(n, &mut rng)?;
    let b = model.sample(n, &mut rng)?;
    let mut v = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    for (x, y) in a.iter().zip(&b) {
        let EigenPair { xi1, xi2 } = generalized_eigenvalues(x, y)?;
        v.push(xi1 / (1.0 + xi1));
        rho.push(xi2 / xi1);
    }
    let fit = eigen_chi_square(&law, &v, &rho)?;
    let mut details = format!(
        "m = {m}, eta = {eta}; Vandermonde power {}: chi2 = {:.3}, df = {}, p = {:.4}",
        law.vandermonde_power(),
        fit.statistic,
        fit.df,
        fit.p_value
    );
    if law.vandermonde_power() != 2.0 {
        let squared = EigenpairLaw::with_vandermonde_power(space, null_eta, 2.0)?;
        let alt = eigen_chi_square(&squared, &v, &rho)?;
        let _ = write!(
            details,
            "; Vandermonde power 2: chi2 = {:.3}, df = {}, p = {:.3e}",
            alt.statistic, alt.df, alt.p_value
        );
    }
    for a in law.anomalies() {
        let _ = write!(details, "; anomaly: {a}");
    }
    Ok(CheckReport {
        name: "eigenpair_density".into(),
        statistic: fit.p_value,
        threshold: ALPHA,
        passed: fit.p_value > ALPHA,
        n_samples: n,
        seed,
        details,
    })
}

/// Normalizing constant of the eigenpair law: passes iff the `Γ_L`/`B_L`
/// closed form integrates the kernel to one within 1e−2, or the fallback to
/// a numerical constant was logged as an anomaly.
pub fn run_eigen_constant_check(m: usize, eta: f64) -> Result<CheckReport> {
    let law = EigenpairLaw::new(AmbientSpace::new(m)?, eta)?;
    let statistic = match law.log_closed_form_constant() {
        Some(c) => (exp(c) * law.kernel_integral() - 1.0).abs(),
        None => f64::NAN,
    };
    let closed_ok = statistic <= crate::hypothesis::EIGEN_CONSTANT_TOL;
    let mut details = format!("m = {m}, eta = {eta}; kernel integral = {:.10e}", law.kernel_integral());
    for a in law.anomalies() {
        let _ = write!(details, "; anomaly: {a}");
    }
    Ok(CheckReport {
        name: "eigen_constant".into(),
        statistic,
        threshold: crate::hypothesis::EIGEN_CONSTANT_TOL,
        passed: closed_ok || !law.anomalies().is_empty(),
        n_samples: 0,
        seed: 0,
        details,
    })
}

/// Sample mean of `n` draws of `W_{η,σ}` lies within 4 standard errors of
/// `σ` in every coordinate.
pub fn run_sample_mean_check(sigma: &ConePoint, eta: f64, n: usize, seed: u64) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("sample mean check needs n >= 2".into()));
    }
    let model = WishartModel::new(eta, sigma.clone())?;
    let draws = model.sample(n, &mut new_rng(seed))?;
    let target = sigma.to_vec();
    let k = target.len();
    let mut sum = vec![0.0; k];
    let mut sq = vec![0.0; k];
    for x in &draws {
        for (j, v) in x.to_vec().into_iter().enumerate() {
            sum[j] += v;
            sq[j] += v * v;
        }
    }
    let nf = n as f64;
    let mut worst = 0.0f64;
    let mut details = String::from("z-scores:");
    for j in 0..k {
        let mean = sum[j] / nf;
        let var = (sq[j] - nf * mean * mean) / (nf - 1.0);
        let z = (mean - target[j]) / sqrt(var / nf);
        worst = worst.max(z.abs());
        let _ = write!(details, " {z:.3}");
    }
    Ok(CheckReport {
        name: "sample_mean".into(),
        statistic: worst,
        threshold: 4.0,
        passed: worst <= 4.0,
        n_samples: n,
        seed,
        details,
    })
}

/// For `n` pairs `(x, gx)` with random `g ∈ G₀`, [`match_in_g0`] returns a
/// valid `G₀` element mapping `x` to `gx` within 1e−8 relative.
pub fn run_match_witness_check(n: usize, seed: u64) -> Result<CheckReport> {
    require_n(n)?;
    let mut rng = new_rng(seed);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for _ in 0..n {
        let split = random_split(&mut rng);
        let x = random_cone_point(&mut rng, split.m());
        let g = random_g0_element(&mut rng, split);
        let y = g.apply(&x)?;
        match match_in_g0(&x, &y, split) {
            Ok(h) => {
                if !validate_g0(&h, split).passed() {
                    failures += 1;
                }
                worst = worst.max(mapping_error(&h, &x, &y)?);
            }
            Err(_) => failures += 1,
        }
    }
    Ok(CheckReport {
        name: "match_witness".into(),
        statistic: worst,
        threshold: 1e-8,
        passed: worst <= 1e-8 && failures == 0,
        n_samples: n,
        seed,
        details: format!("max relative mapping error = {worst:.3e}; construction failures = {failures}"),
    })
}

fn mapping_error(h: &GroupElement, x: &ConePoint, y: &ConePoint) -> Result<f64> {
    let hx = h.apply(x)?.to_vec();
    let yv = y.to_vec();
    let diff: Vec<f64> = hx.iter().zip(&yv).map(|(a, b)| a - b).collect();
    Ok(sqrt(norm_sq(&diff) / norm_sq(&yv)))
}
