//! Wishart distributions `W_{η,σ}` on the Lorentz cone.
//!
//! With shape `η > (m−1)/2` and expectation `σ = (λ, w) ∈ L`, the law has
//! density on `L`
//!
//! ```text
//! f(y, z) = (y² − ‖z‖²)^{η − (m+1)/2} / (c(m, η) · det(σ)^η)
//!           · exp(−2η (λy − w·z) / det(σ))
//! ```
//!
//! with `c(m, η) = ½ π^{(m−1)/2} Γ(η) Γ(η − (m−1)/2) η^{−2η}`. The commonly
//! quoted closed form `k(m, η) = 2 π^{(m−1)/2} Γ(η) Γ(η − (m−1)/2) η^{−2η}`
//! is four times `c(m, η)`; [`normalizer_k`] returns it for reference while
//! [`log_normalizer`] is what the density uses. Everything is computed in
//! log space because `η^{−2η}` under- and overflows quickly.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};

use crate::cone::{phi_to_p2, AmbientSpace, ConePoint, P2Element};
use crate::error::{Error, Result};
use crate::group::boost_to;
use crate::math::{exp, ln, norm_sq, sqrt};
use crate::special::ln_gamma;

/// Shape `η` and expectation `σ` of a Wishart law on the Lorentz cone of
/// `R x R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct WishartModel {
    eta: f64,
    sigma: ConePoint,
    space: AmbientSpace,
}

fn check_shape(m: usize, eta: f64) -> Result<()> {
    let threshold = 0.5 * (m as f64 - 1.0);
    if !(eta > threshold) || !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shape eta must exceed (m-1)/2 = {threshold}, got {eta}"
        )));
    }
    Ok(())
}

impl WishartModel {
    /// Validates `η > (m−1)/2` and `σ ∈ L`; `m` is the length of `σ.w`.
    pub fn new(eta: f64, sigma: ConePoint) -> Result<Self> {
        let space = AmbientSpace::new(sigma.m())?;
        check_shape(space.m(), eta)?;
        sigma.require_interior("sigma")?;
        Ok(Self { eta, sigma, space })
    }

    /// The model with `σ = e`.
    pub fn standard(eta: f64, m: usize) -> Result<Self> {
        Self::new(eta, ConePoint::identity(m))
    }

    /// Shape parameter.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Expectation.
    pub fn sigma(&self) -> &ConePoint {
        &self.sigma
    }

    /// Ambient space.
    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    /// Same shape, another expectation.
    pub fn with_sigma(&self, sigma: ConePoint) -> Result<Self> {
        Self::new(self.eta, sigma)
    }

    /// Log-density at `x`; `−inf` outside the open cone.
    pub fn log_density(&self, x: &ConePoint) -> Result<f64> {
        log_density(self, x)
    }

    /// `n` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<ConePoint>> {
        sample(self, n, rng)
    }
}

/// `ln k(m, η)` for `k(m, η) = 2 π^{(m−1)/2} Γ(η) Γ(η − (m−1)/2) η^{−2η}`.
///
/// Note this is four times the constant that normalizes the density; see
/// [`log_normalizer`].
pub fn normalizer_k(m: usize, eta: f64) -> Result<f64> {
    AmbientSpace::new(m)?;
    check_shape(m, eta)?;
    let h = 0.5 * (m as f64 - 1.0);
    Ok(LN_2 + h * ln(PI) + ln_gamma(eta) + ln_gamma(eta - h) - 2.0 * eta * ln(eta))
}

/// Log of the constant that makes the density integrate to one:
/// `ln k(m, η) − ln 4`.
pub fn log_normalizer(m: usize, eta: f64) -> Result<f64> {
    Ok(normalizer_k(m, eta)? - 2.0 * LN_2)
}

/// `ln Γ_L(s)` for the Lorentz cone of total dimension `dim = m + 1`:
/// `((dim−2)/2) ln 2π + ln Γ(s) + ln Γ(s − (dim−2)/2)`.
pub fn cone_gamma(s: f64, dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("cone dimension must be at least 2, got {dim}")));
    }
    let h = 0.5 * (dim as f64 - 2.0);
    if !(s > h) {
        return Err(Error::InvalidParameter(format!(
            "cone gamma argument must exceed (dim-2)/2 = {h}, got {s}"
        )));
    }
    Ok(h * ln(2.0 * PI) + ln_gamma(s) + ln_gamma(s - h))
}

/// `ln f_{η,σ}(x)`; `−inf` when `x ∉ L`.
pub fn log_density(model: &WishartModel, x: &ConePoint) -> Result<f64> {
    model.space.check(x)?;
    if !x.contains() {
        return Ok(f64::NEG_INFINITY);
    }
    let m = model.space.m() as f64;
    let eta = model.eta;
    let det_s = model.sigma.det();
    let pairing = model.sigma.psi(x)?;
    Ok((eta - 0.5 * (m + 1.0)) * ln(x.det()) - eta * ln(det_s) - 2.0 * eta * pairing / det_s
        - log_normalizer(model.space.m(), eta)?)
}

/// `f_{η,σ}(x)` in linear space.
pub fn density(model: &WishartModel, x: &ConePoint) -> Result<f64> {
    Ok(exp(log_density(model, x)?))
}

/// Log-density of the Wishart law on the block cone `P₂(W)` with shape `η`
/// and expectation `Σ`:
///
/// ```text
/// η^{2η} det(S)^{η − (m+1)/2} exp(−η tr(Σ⁻¹S))
///   / (π^{(m−1)/2} Γ(η) Γ(η − (m−1)/2) det(Σ)^η)
/// ```
///
/// where `m = 1 + len(w₁)`. Requires `η > m/2`. Since `φ` has Jacobian
/// determinant `½`, `ln f_L(φ(S)) = p2_log_density(S) + ln 2`.
pub fn p2_log_density(eta: f64, sigma: &P2Element, s: &P2Element) -> Result<f64> {
    let m = sigma.w1.len() + 1;
    if s.w1.len() + 1 != m {
        return Err(Error::DimensionMismatch { expected: m - 1, found: s.w1.len() });
    }
    if !(eta > 0.5 * m as f64) || !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "block-cone shape eta must exceed m/2 = {}, got {eta}",
            0.5 * m as f64
        )));
    }
    if !sigma.is_interior() {
        return Err(Error::NotInCone { what: "P2 scale Sigma" });
    }
    if !s.is_interior() {
        return Ok(f64::NEG_INFINITY);
    }
    let mf = m as f64;
    let h = 0.5 * (mf - 1.0);
    let ln_const = h * ln(PI) + ln_gamma(eta) + ln_gamma(eta - h);
    Ok(2.0 * eta * ln(eta) + (eta - 0.5 * (mf + 1.0)) * ln(s.det())
        - eta * ln(sigma.det())
        - eta * sigma.trace_inverse_product(s)?
        - ln_const)
}

/// `ln f_{P₂}(φ⁻¹(x))` for the block-cone law with expectation `φ⁻¹(σ)`.
pub fn p2_log_density_at(model: &WishartModel, x: &ConePoint) -> Result<f64> {
    p2_log_density(model.eta, &phi_to_p2(&model.sigma)?, &phi_to_p2(x)?)
}

/// `n` independent draws from `W_{η,σ}`.
///
/// Under `σ = e` the density factors in polar coordinates `z = y√u·d`:
/// `y ~ Gamma(2η, rate 2η)`, `u ~ Beta(m/2, η − (m−1)/2)` and a uniform
/// direction `d` on the unit sphere of `W`, all independent. A general `σ`
/// is reached by pushing the draws through `boost_to(σ)`, under which the
/// family is equivariant.
pub fn sample<R: Rng + ?Sized>(model: &WishartModel, n: usize, rng: &mut R) -> Result<Vec<ConePoint>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    let m = model.space.m();
    let eta = model.eta;
    let radial = Gamma::new(2.0 * eta, 1.0 / (2.0 * eta))
        .map_err(|e| Error::InvalidParameter(format!("gamma law: {e}")))?;
    let angular = Beta::new(0.5 * m as f64, eta - 0.5 * (m as f64 - 1.0))
        .map_err(|e| Error::InvalidParameter(format!("beta law: {e}")))?;
    let g = boost_to(&model.sigma)?;
    let mut out = Vec::with_capacity(n);
    let mut dir = alloc::vec![0.0; m];
    for _ in 0..n {
        let y: f64 = radial.sample(rng);
        let u: f64 = angular.sample(rng);
        loop {
            dir.iter_mut().for_each(|d| *d = StandardNormal.sample(rng));
            let nd = norm_sq(&dir);
            if nd > 1e-300 {
                let s = 1.0 / sqrt(nd);
                dir.iter_mut().for_each(|d| *d *= s);
                break;
            }
        }
        let r = y * sqrt(u);
        let x = ConePoint::new(y, dir.iter().map(|d| r * d).collect());
        out.push(g.apply(&x)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::phi_from_p2;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalizer_k_examples() {
        assert!((normalizer_k(2, 2.0).unwrap() - ln(PI / 16.0)).abs() < 1e-14);
        assert!((normalizer_k(1, 1.0).unwrap() - LN_2).abs() < 1e-14);
        assert!(normalizer_k(3, 1.0).is_err());
        assert!(normalizer_k(3, 0.9).is_err());
        // The density's constant is a quarter of k.
        assert!((log_normalizer(2, 2.0).unwrap() - ln(PI / 64.0)).abs() < 1e-14);
    }

    #[test]
    fn cone_gamma_examples() {
        assert!(cone_gamma(1.0, 2).unwrap().abs() < 1e-15);
        let expected = ln(sqrt(2.0 * PI) * sqrt(PI) / 2.0);
        assert!((cone_gamma(2.0, 3).unwrap() - expected).abs() < 1e-14);
        assert!(cone_gamma(0.5, 3).is_err());
        assert!(cone_gamma(1.0, 1).is_err());
    }

    #[test]
    fn cone_gamma_relates_to_k() {
        // k(m, η) = 2^{1 − (m−1)/2} Γ_L(η) η^{−2η}
        for m in 1..6 {
            for &eta in &[2.75, 3.0, 4.5, 10.0] {
                let lhs = normalizer_k(m, eta).unwrap();
                let rhs = (1.0 - 0.5 * (m as f64 - 1.0)) * LN_2 + cone_gamma(eta, m + 1).unwrap()
                    - 2.0 * eta * ln(eta);
                assert!((lhs - rhs).abs() < 1e-12, "m = {m}, eta = {eta}");
            }
        }
    }

    #[test]
    fn log_density_at_identity() {
        let model = WishartModel::standard(2.0, 2).unwrap();
        let v = log_density(&model, &ConePoint::identity(2)).unwrap();
        assert!((v - ln(64.0 * exp(-4.0) / PI)).abs() < 1e-13);
        let outside = ConePoint::new(1.0, vec![2.0, 0.0]);
        assert_eq!(log_density(&model, &outside).unwrap(), f64::NEG_INFINITY);
        assert!(log_density(&model, &ConePoint::identity(3)).is_err());
    }

    #[test]
    fn model_validation() {
        assert!(WishartModel::new(1.0, ConePoint::identity(3)).is_err());
        assert!(WishartModel::new(1.01, ConePoint::identity(3)).is_ok());
        let bad = WishartModel::new(3.0, ConePoint::new(1.0, vec![1.0, 0.0]));
        assert_eq!(bad.unwrap_err(), Error::NotInCone { what: "sigma" });
    }

    #[test]
    fn p2_density_matches_cone_density() {
        let sigma = ConePoint::new(2.0, vec![0.5, -0.3, 0.2]);
        let model = WishartModel::new(2.5, sigma).unwrap();
        for x in [
            ConePoint::new(1.0, vec![0.1, 0.2, 0.3]),
            ConePoint::new(3.0, vec![-1.0, 2.0, 0.0]),
        ] {
            let a = log_density(&model, &x).unwrap();
            let b = p2_log_density_at(&model, &x).unwrap();
            assert!((a - (b + LN_2)).abs() < 1e-12);
        }
        let id = P2Element::new(1.0, 1.0, vec![0.0]);
        let v = p2_log_density(2.0, &id, &id).unwrap();
        // 16 · 1 · e^{−4} / (√π · Γ(2) Γ(3/2)) = 32 e^{−4} / π
        assert!((v - ln(32.0 * exp(-4.0) / PI)).abs() < 1e-13);
        let model = WishartModel::standard(2.0, 2).unwrap();
        let e = phi_from_p2(&id);
        assert!((log_density(&model, &e).unwrap() - v - LN_2).abs() < 1e-13);
        let outside = P2Element::new(1.0, -1.0, vec![0.0]);
        assert_eq!(p2_log_density(2.0, &id, &outside).unwrap(), f64::NEG_INFINITY);
        assert!(p2_log_density(1.0, &id, &id).is_err());
        assert!(p2_log_density(2.0, &outside, &id).is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_interior() {
        let model = WishartModel::new(1.2, ConePoint::new(2.0, vec![1.0, 0.0, 0.5])).unwrap();
        let a = sample(&model, 500, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = sample(&model, 500, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(ConePoint::contains));
        assert!(sample(&model, 0, &mut ChaCha8Rng::seed_from_u64(3)).is_err());
    }
}
