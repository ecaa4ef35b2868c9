//! Invariant tests for the scale of a Lorentz Wishart law with known shape.
//!
//! (T1) `H₀: σ ∈ L₀` for the subcone `L₀` generated by `W₀`. The statistic
//! `m(λ, w) = ‖w − p(w)‖² / (λ² − ‖p(w)‖²)` is a maximal invariant under
//! `G₀`; under `H₀` it is independent of `t(x) = (λ, p(w))` and follows the
//! Beta law with density `∝ u^{m1/2 − 1} (1 − u)^{η − (m+1)/2}`. The
//! likelihood ratio is `Q = (1 − m)^η`, so large `m` rejects.
//!
//! (T2) `H₀: σ₁ = σ₂` from one draw of each law. The generalized eigenvalues
//! `ξ₁ ≥ ξ₂` of `τ₂` relative to `τ₁` form a maximal invariant under the
//! diagonal action of `G`, the pooled estimate is `(τ₁ + τ₂)/2`, and the
//! likelihood ratio is `(16 ξ₁ξ₂ / ((1+ξ₁)²(1+ξ₂)²))^η`. Small ratios reject;
//! the null law of the ratio is pivotal and is calibrated by simulation
//! (see [`crate::verify::calibrate_null`]).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use crate::cone::{project_w0, AmbientSpace, ConePoint, SubconeSplit};
use crate::error::{Error, Result};
use crate::math::{exp, ln, ln_1p, norm_sq, sqrt};
use crate::quadrature::{tanh_sinh, Node};
use crate::special::{beta_sf, ln_gamma};
use crate::verify::NullCalibration;
use crate::wishart::cone_gamma;

/// Tolerance below zero within which the eigenvalue discriminant is clamped.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

fn check_eta(m: usize, eta: f64) -> Result<()> {
    let threshold = 0.5 * (m as f64 - 1.0);
    if !(eta > threshold) || !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shape eta must exceed (m-1)/2 = {threshold}, got {eta}"
        )));
    }
    Ok(())
}

/// `m(x) = ‖w − p(w)‖² / (λ² − ‖p(w)‖²)`, in `[0, 1)` on the interior.
pub fn maximal_invariant_m(x: &ConePoint, split: SubconeSplit) -> Result<f64> {
    split.space().check(x)?;
    x.require_interior("observation")?;
    let (x0, rest) = project_w0(x, split)?;
    Ok(norm_sq(&rest) / x0.det())
}

/// `t(x) = (λ, p(w))` as a point of `L₀`.
pub fn sufficient_t(x: &ConePoint, split: SubconeSplit) -> Result<ConePoint> {
    split.space().check(x)?;
    x.require_interior("observation")?;
    Ok(project_w0(x, split)?.0)
}

/// Likelihood ratio `Q = ((y² − ‖z‖²) / (y² − ‖p(z)‖²))^η` for (T1).
pub fn lr_subcone(x: &ConePoint, split: SubconeSplit, eta: f64) -> Result<f64> {
    check_eta(split.m(), eta)?;
    let t = sufficient_t(x, split)?;
    Ok(exp(eta * ln(x.det() / t.det())))
}

/// Parameters `(α, β)` of the null Beta law of `m`: `(m1/2, η − (m−1)/2)`.
pub fn subcone_null_beta(split: SubconeSplit, eta: f64) -> Result<(f64, f64)> {
    check_eta(split.m(), eta)?;
    Ok((0.5 * split.m1() as f64, eta - 0.5 * (split.m() as f64 - 1.0)))
}

/// Maximum likelihood estimate of `σ` in the full model: the observation.
pub fn mle_full(x: &ConePoint) -> Result<ConePoint> {
    x.require_interior("observation")?;
    Ok(x.clone())
}

/// Maximum likelihood estimate of `σ` under `σ ∈ L₀`: `(y, p(z))`.
pub fn mle_subcone(x: &ConePoint, split: SubconeSplit) -> Result<ConePoint> {
    sufficient_t(x, split)
}

/// Outcome of the subcone test.
#[derive(Debug, Clone, PartialEq)]
pub struct SubconeTestResult {
    /// Maximal invariant `m(x)`.
    pub m_stat: f64,
    /// Likelihood ratio `Q`.
    pub q_lr: f64,
    /// `P(M ≥ m_stat)` under the null Beta law.
    pub p_value: f64,
    /// Null Beta parameters `(α, β)` of `m`.
    pub beta_params: (f64, f64),
    /// `t(x)`, also the restricted maximum likelihood estimate.
    pub t_stat: ConePoint,
    /// Shape used.
    pub eta: f64,
    /// Subcone split used.
    pub split: SubconeSplit,
}

/// Runs (T1) on one observation.
pub fn subcone_test(x: &ConePoint, split: SubconeSplit, eta: f64) -> Result<SubconeTestResult> {
    let beta_params = subcone_null_beta(split, eta)?;
    let m_stat = maximal_invariant_m(x, split)?;
    let t_stat = sufficient_t(x, split)?;
    let q_lr = lr_subcone(x, split, eta)?;
    let p_value = beta_sf(m_stat, beta_params.0, beta_params.1)?;
    Ok(SubconeTestResult { m_stat, q_lr, p_value, beta_params, t_stat, eta, split })
}

/// Ordered generalized eigenvalues `ξ₁ ≥ ξ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    /// Larger eigenvalue.
    pub xi1: f64,
    /// Smaller eigenvalue.
    pub xi2: f64,
}

impl EigenPair {
    /// Orders the two values.
    pub fn new(a: f64, b: f64) -> Self {
        if a >= b {
            Self { xi1: a, xi2: b }
        } else {
            Self { xi1: b, xi2: a }
        }
    }
}

/// `Ψ(σ₁,σ₂)² − Ψ(σ₁,σ₁)Ψ(σ₂,σ₂)`, nonnegative for interior pairs.
pub fn reverse_cs_gap(s1: &ConePoint, s2: &ConePoint) -> Result<f64> {
    s1.require_interior("first argument")?;
    s2.require_interior("second argument")?;
    let p = s1.psi(s2)?;
    Ok(p * p - s1.det() * s2.det())
}

/// Roots of `det(σ₂ − ℓσ₁) = ‖σ₁‖²ℓ² − 2(σ₁·σ₂)ℓ + ‖σ₂‖²`, where `·` is `Ψ`
/// and `‖σ‖² = Ψ(σ, σ)`.
pub fn generalized_eigenvalues(s1: &ConePoint, s2: &ConePoint) -> Result<EigenPair> {
    s1.require_interior("first argument")?;
    s2.require_interior("second argument")?;
    let p = s1.psi(s2)?;
    let d1 = s1.det();
    let d2 = s2.det();
    let mut disc = p * p - d1 * d2;
    let scale = p * p;
    if disc < 0.0 {
        if disc < -DISCRIMINANT_TOL * scale.max(1.0) {
            return Err(Error::Numerical(format!("negative eigenvalue discriminant {disc:e}")));
        }
        disc = 0.0;
    }
    let root = sqrt(disc);
    // Larger root first, smaller by Vieta.
    let xi1 = (p + root) / d1;
    let xi2 = d2 / (d1 * xi1);
    Ok(EigenPair::new(xi1, xi2))
}

/// `ln` of the (T2) likelihood ratio given the eigenvalues.
pub fn log_lr_from_eigen(pair: EigenPair, eta: f64) -> f64 {
    let term = |x: f64| ln(x) - 2.0 * ln_1p(x);
    let v = eta * (4.0 * LN_2 + term(pair.xi1) + term(pair.xi2));
    v.min(0.0)
}

/// Likelihood ratio `(16 ξ₁ξ₂ / ((1+ξ₁)²(1+ξ₂)²))^η` for (T2).
pub fn lr_equality(t1: &ConePoint, t2: &ConePoint, eta: f64) -> Result<f64> {
    check_eta(t1.m(), eta)?;
    let pair = generalized_eigenvalues(t1, t2)?;
    Ok(exp(log_lr_from_eigen(pair, eta)))
}

/// Pooled estimate `(τ₁ + τ₂)/2` under `σ₁ = σ₂`.
pub fn mle_pooled(t1: &ConePoint, t2: &ConePoint) -> Result<ConePoint> {
    t1.require_interior("first observation")?;
    t2.require_interior("second observation")?;
    Ok(t1.add(t2)?.scale(0.5))
}

/// Outcome of the equality test.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualityTestResult {
    /// Generalized eigenvalues of `τ₂` relative to `τ₁`.
    pub eigen: EigenPair,
    /// Likelihood ratio.
    pub lr: f64,
    /// Fraction of calibration ratios at or below `lr`.
    pub p_value: f64,
    /// Pooled estimate of the common scale.
    pub pooled_mle: ConePoint,
    /// Shape used.
    pub eta: f64,
}

/// Runs (T2) on a pair of observations against a null calibration built for
/// the same `(m, η)`.
pub fn equality_test(
    t1: &ConePoint,
    t2: &ConePoint,
    eta: f64,
    calib: &NullCalibration,
) -> Result<EqualityTestResult> {
    if t1.m() != t2.m() {
        return Err(Error::DimensionMismatch { expected: t1.m(), found: t2.m() });
    }
    if calib.m != t1.m() || (calib.eta - eta).abs() > 1e-12 * eta.abs().max(1.0) {
        return Err(Error::CalibrationMismatch(format!(
            "calibration built for (m = {}, eta = {}), test uses (m = {}, eta = {eta})",
            calib.m,
            calib.eta,
            t1.m()
        )));
    }
    check_eta(t1.m(), eta)?;
    let eigen = generalized_eigenvalues(t1, t2)?;
    let lr = exp(log_lr_from_eigen(eigen, eta));
    let pooled_mle = mle_pooled(t1, t2)?;
    let p_value = calib.p_value(lr);
    Ok(EqualityTestResult { eigen, lr, p_value, pooled_mle, eta })
}

/// Where the normalizing constant of an [`EigenpairLaw`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantSource {
    /// The `Γ_L`/`B_L` closed form integrated the kernel to one within 1e−2.
    ClosedForm,
    /// The closed form failed that check; the constant is the reciprocal of
    /// the numerically integrated kernel.
    Numerical,
}

/// Relative tolerance for accepting the `Γ_L`/`B_L` closed-form constant.
pub const EIGEN_CONSTANT_TOL: f64 = 1e-2;

/// Null law of `(ξ₁, ξ₂)` for two independent draws of `W_{η,σ}`.
///
/// Unnormalized kernel, with `n = m + 1`:
///
/// ```text
/// (ξ₁ − ξ₂)^p (ξ₁ξ₂)^{η − n/2} / ((1+ξ₁)(1+ξ₂))^{2η}
/// ```
///
/// The Vandermonde power `p` defaults to `n − 2 = m − 1`, the Peirce
/// multiplicity of the rank-two cone.
/// [`EigenpairLaw::with_vandermonde_power`] builds other variants, e.g. the
/// fixed square `p = 2`, for comparison.
#[derive(Debug, Clone)]
pub struct EigenpairLaw {
    space: AmbientSpace,
    eta: f64,
    power: f64,
    log_constant: f64,
    log_closed_form_constant: Option<f64>,
    numerical_integral: f64,
    source: ConstantSource,
    anomalies: Vec<String>,
}

const EIGEN_QUADRATURE_LEVEL: usize = 24;

impl EigenpairLaw {
    /// The law with the default Vandermonde power `m − 1`.
    pub fn new(space: AmbientSpace, eta: f64) -> Result<Self> {
        Self::with_vandermonde_power(space, eta, space.m() as f64 - 1.0)
    }

    /// The law with an explicit Vandermonde power.
    pub fn with_vandermonde_power(space: AmbientSpace, eta: f64, power: f64) -> Result<Self> {
        check_eta(space.m(), eta)?;
        let mut law = Self {
            space,
            eta,
            power,
            log_constant: 0.0,
            log_closed_form_constant: None,
            numerical_integral: f64::NAN,
            source: ConstantSource::Numerical,
            anomalies: Vec::new(),
        };
        let integral = law.integrate_kernel_cell(0.0, 1.0, 0.0, 1.0, EIGEN_QUADRATURE_LEVEL);
        law.numerical_integral = integral;
        law.log_closed_form_constant = closed_form_log_constant(space, eta);
        match law.log_closed_form_constant {
            Some(c) if (exp(c) * integral - 1.0).abs() <= EIGEN_CONSTANT_TOL => {
                law.log_constant = c;
                law.source = ConstantSource::ClosedForm;
            }
            Some(c) => {
                law.log_constant = -ln(integral);
                law.anomalies.push(format!(
                    "closed-form constant integrates the kernel to {:.6}; using numerical constant 1/{:.10e}",
                    exp(c) * integral,
                    integral
                ));
            }
            None => {
                law.log_constant = -ln(integral);
                law.anomalies.push(format!(
                    "closed-form constant undefined for m = {}; using numerical constant 1/{:.10e}",
                    space.m(),
                    integral
                ));
            }
        }
        Ok(law)
    }

    /// Ambient space.
    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    /// Shape.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Vandermonde power in use.
    pub fn vandermonde_power(&self) -> f64 {
        self.power
    }

    /// `ln` of the normalizing constant in use.
    pub fn log_constant(&self) -> f64 {
        self.log_constant
    }

    /// `ln` of the `Γ_L`/`B_L` closed-form constant, when defined.
    pub fn log_closed_form_constant(&self) -> Option<f64> {
        self.log_closed_form_constant
    }

    /// Numerically integrated kernel over `ξ₁ > ξ₂ > 0`.
    pub fn kernel_integral(&self) -> f64 {
        self.numerical_integral
    }

    /// Which constant is in use.
    pub fn constant_source(&self) -> ConstantSource {
        self.source
    }

    /// Logged discrepancies, e.g. the fallback to a numerical constant.
    pub fn anomalies(&self) -> &[String] {
        &self.anomalies
    }

    /// Log of the unnormalized kernel; `−inf` on the diagonal when the
    /// Vandermonde power is positive.
    pub fn log_kernel(&self, pair: EigenPair) -> f64 {
        eigenpair_log_kernel(pair, self.eta, self.space, self.power)
    }

    /// Normalized log-density at `(ξ₁, ξ₂)`.
    pub fn log_density(&self, pair: EigenPair) -> f64 {
        self.log_kernel(pair) + self.log_constant
    }

    // Kernel times Jacobian in coordinates v = ξ₁/(1+ξ₁), ρ = ξ₂/ξ₁ on the
    // unit square, with 1−v and 1−ρ supplied separately.
    fn log_kernel_vr(&self, v: f64, omv: f64, rho: f64, omr: f64) -> f64 {
        let n = self.space.dim() as f64;
        let ln_xi1 = ln(v) - ln(omv);
        let ln_xi2 = ln(rho) + ln_xi1;
        let ln_1p_xi1 = -ln(omv);
        let ln_1p_xi2 = ln_1p(rho * v / omv);
        let vander = if self.power == 0.0 { 0.0 } else { self.power * (ln_xi1 + ln(omr)) };
        vander + (self.eta - 0.5 * n) * (ln_xi1 + ln_xi2) - 2.0 * self.eta * (ln_1p_xi1 + ln_1p_xi2)
            + ln_xi1
            - 2.0 * ln(omv)
    }

    /// `∫∫` of the kernel over the cell `v ∈ [v0, v1], ρ ∈ [r0, r1]`.
    fn integrate_kernel_cell(&self, v0: f64, v1: f64, r0: f64, r1: f64, level: usize) -> f64 {
        let rule = tanh_sinh(level);
        let (dv, dr) = (v1 - v0, r1 - r0);
        let mut total = 0.0;
        for a in &rule {
            let v = v0 + dv * a.x;
            let omv = (1.0 - v1) + dv * a.one_minus_x;
            let mut inner = 0.0;
            for b in &rule {
                let rho = r0 + dr * b.x;
                let omr = (1.0 - r1) + dr * b.one_minus_x;
                let val = exp(self.log_kernel_vr(v, omv, rho, omr));
                if val.is_finite() {
                    inner += b.w * val;
                }
            }
            total += a.w * inner;
        }
        total * dv * dr
    }

    /// Probability of the cell `v ∈ [v0, v1], ρ ∈ [r0, r1]` in the
    /// coordinates `v = ξ₁/(1+ξ₁)`, `ρ = ξ₂/ξ₁`.
    pub fn cell_probability(&self, v0: f64, v1: f64, r0: f64, r1: f64) -> f64 {
        exp(self.log_constant) * self.integrate_kernel_cell(v0, v1, r0, r1, 12)
    }

    /// Approximate marginal quantiles of `v` and `ρ` at levels `k/bins`,
    /// `k = 1..bins−1`, from a tensor tanh-sinh table.
    pub fn marginal_edges(&self, bins: usize) -> (Vec<f64>, Vec<f64>) {
        let rule = tanh_sinh(EIGEN_QUADRATURE_LEVEL);
        let k = rule.len();
        let mut grid = alloc::vec![0.0; k * k];
        for (i, a) in rule.iter().enumerate() {
            for (j, b) in rule.iter().enumerate() {
                let val = exp(self.log_kernel_vr(a.x, a.one_minus_x, b.x, b.one_minus_x));
                grid[i * k + j] = if val.is_finite() { a.w * b.w * val } else { 0.0 };
            }
        }
        let v_marg: Vec<f64> = (0..k).map(|i| grid[i * k..(i + 1) * k].iter().sum()).collect();
        let r_marg: Vec<f64> = (0..k).map(|j| (0..k).map(|i| grid[i * k + j]).sum()).collect();
        (quantile_edges(&rule, &v_marg, bins), quantile_edges(&rule, &r_marg, bins))
    }
}

fn quantile_edges(rule: &[Node], mass: &[f64], bins: usize) -> Vec<f64> {
    let total: f64 = mass.iter().sum();
    let mut edges = Vec::with_capacity(bins.saturating_sub(1));
    let mut acc = 0.0;
    let mut target = 1;
    for (node, w) in rule.iter().zip(mass) {
        acc += w / total;
        while target < bins && acc >= target as f64 / bins as f64 {
            edges.push(node.x);
            target += 1;
        }
    }
    while edges.len() < bins.saturating_sub(1) {
        edges.push(rule.last().map(|n| n.x).unwrap_or(1.0));
    }
    edges
}

/// `(n−2) ln 2π − ln B_L(η, η) − ln Γ_L(n−2)` with `n = m + 1` and
/// `B_L(η, η) = Γ_L(η)² / Γ_L(2η)`; `None` where `Γ_L(n−2)` is undefined.
fn closed_form_log_constant(space: AmbientSpace, eta: f64) -> Option<f64> {
    let n = space.dim();
    let ln_b = 2.0 * cone_gamma(eta, n).ok()? - cone_gamma(2.0 * eta, n).ok()?;
    let ln_gamma_l = cone_gamma((n - 2) as f64, n).ok()?;
    Some((n as f64 - 2.0) * ln(2.0 * PI) - ln_b - ln_gamma_l)
}

/// Log of the unnormalized eigenvalue kernel
/// `p·ln(ξ₁−ξ₂) + (η − n/2)Σ ln ξ_j − 2η Σ ln(1+ξ_j)`, `n = m + 1`.
pub fn eigenpair_log_kernel(pair: EigenPair, eta: f64, space: AmbientSpace, power: f64) -> f64 {
    let n = space.dim() as f64;
    let EigenPair { xi1, xi2 } = pair;
    if !(xi2 > 0.0) || xi1 < xi2 {
        return f64::NEG_INFINITY;
    }
    let vander = if power == 0.0 {
        0.0
    } else if xi1 == xi2 {
        return f64::NEG_INFINITY;
    } else {
        power * ln(xi1 - xi2)
    };
    vander + (eta - 0.5 * n) * (ln(xi1) + ln(xi2)) - 2.0 * eta * (ln_1p(xi1) + ln_1p(xi2))
}

/// Normalized log-density of `(ξ₁, ξ₂)` under (T2)'s null. Builds an
/// [`EigenpairLaw`] on each call; reuse one for repeated evaluation.
pub fn eigenpair_log_density(pair: EigenPair, eta: f64, space: AmbientSpace) -> Result<f64> {
    Ok(EigenpairLaw::new(space, eta)?.log_density(pair))
}

/// `ln` of the kernel integral in closed form,
/// `ln B_L(η,η) + ((m−3)/2) ln 2 + ln Γ(m/2) − (m/2) ln π`, valid for the
/// default Vandermonde power.
pub fn log_kernel_integral_closed_form(space: AmbientSpace, eta: f64) -> Result<f64> {
    check_eta(space.m(), eta)?;
    let n = space.dim();
    let m = space.m() as f64;
    let ln_b = 2.0 * cone_gamma(eta, n)? - cone_gamma(2.0 * eta, n)?;
    Ok(ln_b + 0.5 * (m - 3.0) * LN_2 + ln_gamma(0.5 * m) - 0.5 * m * ln(PI))
}
