//! Lorentz cone geometry on `R x W` with `W = R^m`.
//!
//! The cone is `L = {(λ, w) : λ > 0, λ² − ‖w‖² > 0}`. The Minkowski form
//! `Ψ((λ, w), (μ, u)) = λμ − w·u` has signature `(1, m)` and its quadratic
//! form `Ψ(x, x)` is the rank-two Jordan determinant of `x`.
//!
//! Coordinates: the subspace `W₀` of a [`SubconeSplit`] is the span of the
//! first `m0` coordinates of `W`, and the unit vector `e` used by the
//! block-cone isomorphism is the first coordinate axis of `W`. Any other
//! choice reduces to this one by an orthogonal change of basis.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{dot, norm_sq};

/// Dimension data of `R x W`: `m = dim W`, total dimension `m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmbientSpace {
    m: usize,
}

impl AmbientSpace {
    /// `m` must be at least one.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("dimension m of W must be at least 1".into()));
        }
        Ok(Self { m })
    }

    /// `dim W`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `dim (R x W) = m + 1`.
    pub fn dim(&self) -> usize {
        self.m + 1
    }

    /// Checks that `x` lives in this space.
    pub fn check(&self, x: &ConePoint) -> Result<()> {
        if x.w.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: x.w.len() });
        }
        Ok(())
    }
}

/// An element `(λ, w)` of `R x W`.
///
/// No sign constraint is attached; use [`ConePoint::contains`] or
/// [`ConePoint::require_interior`] where membership in `L` matters.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    /// Scalar coordinate.
    pub lambda: f64,
    /// Coordinates in `W`.
    pub w: Vec<f64>,
}

impl ConePoint {
    /// Creates `(lambda, w)`.
    pub fn new(lambda: f64, w: Vec<f64>) -> Self {
        Self { lambda, w }
    }

    /// The Jordan identity `e = (1, 0)` of `R x R^m`.
    pub fn identity(m: usize) -> Self {
        Self { lambda: 1.0, w: vec![0.0; m] }
    }

    /// `dim W` for this point.
    pub fn m(&self) -> usize {
        self.w.len()
    }

    /// Stacked coordinates `(λ, w_1, …, w_m)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.w.len() + 1);
        v.push(self.lambda);
        v.extend_from_slice(&self.w);
        v
    }

    /// Inverse of [`ConePoint::to_vec`]. Returns `None` on an empty slice.
    pub fn from_slice(v: &[f64]) -> Option<Self> {
        let (&lambda, w) = v.split_first()?;
        Some(Self { lambda, w: w.to_vec() })
    }

    fn same_dim(&self, other: &ConePoint) -> Result<()> {
        if self.w.len() != other.w.len() {
            return Err(Error::DimensionMismatch { expected: self.w.len(), found: other.w.len() });
        }
        Ok(())
    }

    /// Minkowski form `Ψ(self, other) = λμ − w·u`.
    pub fn psi(&self, other: &ConePoint) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self.lambda * other.lambda - dot(&self.w, &other.w))
    }

    /// Jordan determinant `λ² − ‖w‖²`.
    pub fn det(&self) -> f64 {
        self.lambda * self.lambda - norm_sq(&self.w)
    }

    /// Strict membership in the open cone `L`; no tolerance is applied.
    pub fn contains(&self) -> bool {
        self.lambda > 0.0 && self.det() > 0.0
    }

    /// Errors with [`Error::NotInCone`] unless the point is interior.
    pub fn require_interior(&self, what: &'static str) -> Result<()> {
        if self.contains() && self.w.iter().all(|v| v.is_finite()) && self.lambda.is_finite() {
            Ok(())
        } else {
            Err(Error::NotInCone { what })
        }
    }

    /// Jordan inverse `(λ, −w) / det(x)` of an interior point.
    pub fn jordan_inverse(&self) -> Result<ConePoint> {
        self.require_interior("argument of jordan_inverse")?;
        let d = self.det();
        Ok(ConePoint { lambda: self.lambda / d, w: self.w.iter().map(|v| -v / d).collect() })
    }

    /// Jordan product `(λ, w)∘(μ, u) = (λμ + w·u, λu + μw)`.
    pub fn jordan_product(&self, other: &ConePoint) -> Result<ConePoint> {
        self.same_dim(other)?;
        Ok(ConePoint {
            lambda: self.lambda * other.lambda + dot(&self.w, &other.w),
            w: self.w.iter().zip(&other.w).map(|(a, b)| self.lambda * b + other.lambda * a).collect(),
        })
    }

    /// Euclidean inner product `λμ + w·u`; half the Jordan trace of `x∘y`.
    pub fn euclidean_inner(&self, other: &ConePoint) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self.lambda * other.lambda + dot(&self.w, &other.w))
    }

    /// Componentwise sum.
    pub fn add(&self, other: &ConePoint) -> Result<ConePoint> {
        self.same_dim(other)?;
        Ok(ConePoint {
            lambda: self.lambda + other.lambda,
            w: self.w.iter().zip(&other.w).map(|(a, b)| a + b).collect(),
        })
    }

    /// Scalar multiple `c·x`.
    pub fn scale(&self, c: f64) -> ConePoint {
        ConePoint { lambda: c * self.lambda, w: self.w.iter().map(|v| c * v).collect() }
    }
}

/// `Ψ(x, y)` with both arguments checked against `space`.
pub fn minkowski_form(x: &ConePoint, y: &ConePoint, space: AmbientSpace) -> Result<f64> {
    space.check(x)?;
    space.check(y)?;
    x.psi(y)
}

/// An element of the block cone `P₂(W)`: the symmetric block
/// `[[λ₁, w₁], [w₁, λ₂]]` with `w₁ ∈ W₁ = (Re)^⊥ ≅ R^{m−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct P2Element {
    /// Upper-left diagonal entry.
    pub lambda1: f64,
    /// Lower-right diagonal entry.
    pub lambda2: f64,
    /// Off-diagonal vector in `W₁`.
    pub w1: Vec<f64>,
}

impl P2Element {
    /// Creates the block element.
    pub fn new(lambda1: f64, lambda2: f64, w1: Vec<f64>) -> Self {
        Self { lambda1, lambda2, w1 }
    }

    /// Block determinant `λ₁λ₂ − ‖w₁‖²`.
    pub fn det(&self) -> f64 {
        self.lambda1 * self.lambda2 - norm_sq(&self.w1)
    }

    /// Strict interior of `P₂(W)`.
    pub fn is_interior(&self) -> bool {
        self.lambda1 > 0.0 && self.lambda2 > 0.0 && self.det() > 0.0
    }

    /// `tr(self⁻¹ s)` for interior `self`.
    pub fn trace_inverse_product(&self, s: &P2Element) -> Result<f64> {
        if self.w1.len() != s.w1.len() {
            return Err(Error::DimensionMismatch { expected: self.w1.len(), found: s.w1.len() });
        }
        if !self.is_interior() {
            return Err(Error::NotInCone { what: "P2 scale" });
        }
        let num = self.lambda2 * s.lambda1 + self.lambda1 * s.lambda2 - 2.0 * dot(&self.w1, &s.w1);
        Ok(num / self.det())
    }
}

/// `φ : P₂(W) → L`, `(λ₁, λ₂, w₁) ↦ ((λ₁+λ₂)/2, ((λ₁−λ₂)/2, w₁))`.
pub fn phi_from_p2(s: &P2Element) -> ConePoint {
    let mut w = Vec::with_capacity(s.w1.len() + 1);
    w.push(0.5 * (s.lambda1 - s.lambda2));
    w.extend_from_slice(&s.w1);
    ConePoint { lambda: 0.5 * (s.lambda1 + s.lambda2), w }
}

/// `φ⁻¹ : L → P₂(W)`, `(λ, (w_e, w₁)) ↦ (λ + w_e, λ − w_e, w₁)`.
///
/// Errors when `x` has `m = 0` coordinates in `W`.
pub fn phi_to_p2(x: &ConePoint) -> Result<P2Element> {
    let (&we, rest) = x
        .w
        .split_first()
        .ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
    Ok(P2Element { lambda1: x.lambda + we, lambda2: x.lambda - we, w1: rest.to_vec() })
}

/// A subspace `W₀ ⊂ W` spanned by the first `m0` coordinates, `1 ≤ m0 < m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubconeSplit {
    m: usize,
    m0: usize,
}

impl SubconeSplit {
    /// Validates `1 ≤ m0 < m`.
    pub fn new(m: usize, m0: usize) -> Result<Self> {
        if m0 == 0 || m0 >= m {
            return Err(Error::InvalidParameter(alloc::format!(
                "subcone dimension must satisfy 1 <= m0 < m, got m0 = {m0}, m = {m}"
            )));
        }
        Ok(Self { m, m0 })
    }

    /// `dim W`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `dim W₀`.
    pub fn m0(&self) -> usize {
        self.m0
    }

    /// `dim W₀^⊥ = m − m0`.
    pub fn m1(&self) -> usize {
        self.m - self.m0
    }

    /// Ambient space of the full cone.
    pub fn space(&self) -> AmbientSpace {
        AmbientSpace { m: self.m }
    }

    /// Ambient space of the subcone `L₀`.
    pub fn subspace(&self) -> AmbientSpace {
        AmbientSpace { m: self.m0 }
    }

    /// Inclusion `ι : R x W₀ → R x W`.
    pub fn embed(&self, x0: &ConePoint) -> Result<ConePoint> {
        self.subspace().check(x0)?;
        let mut w = x0.w.clone();
        w.resize(self.m, 0.0);
        Ok(ConePoint { lambda: x0.lambda, w })
    }
}

/// Splits `x = (λ, w)` into `((λ, p(w)), w − p(w))`, the first part as a
/// point of `R x W₀` and the second as a vector of `W₀^⊥ ≅ R^{m1}`.
pub fn project_w0(x: &ConePoint, split: SubconeSplit) -> Result<(ConePoint, Vec<f64>)> {
    split.space().check(x)?;
    let (w0, w1) = x.w.split_at(split.m0);
    Ok((ConePoint { lambda: x.lambda, w: w0.to_vec() }, w1.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(lambda: f64, w: &[f64]) -> ConePoint {
        ConePoint::new(lambda, w.to_vec())
    }

    #[test]
    fn form_examples() {
        let s = AmbientSpace::new(1).unwrap();
        let e = ConePoint::identity(1);
        assert_eq!(minkowski_form(&e, &e, s).unwrap(), 1.0);
        let s2 = AmbientSpace::new(2).unwrap();
        assert_eq!(minkowski_form(&pt(2.0, &[1.0, 0.0]), &pt(3.0, &[0.0, 2.0]), s2).unwrap(), 6.0);
        assert!(matches!(
            minkowski_form(&pt(2.0, &[1.0]), &pt(3.0, &[0.0, 2.0]), s2),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(pt(1.0, &[1.0]).psi(&pt(1.0, &[1.0, 2.0])).is_err());
    }

    #[test]
    fn det_and_membership_examples() {
        assert_eq!(pt(2.0, &[1.0, 1.0]).det(), 2.0);
        assert_eq!(ConePoint::identity(3).det(), 1.0);
        assert_eq!(pt(1.0, &[1.0, 0.0]).det(), 0.0);
        assert!(pt(1.0, &[0.0, 0.0]).contains());
        assert!(!pt(1.0, &[2.0, 0.0]).contains());
        assert!(pt(0.5, &[0.4, 0.2]).contains());
        assert!(!pt(1.0, &[1.0, 0.0]).contains());
        assert!(!pt(-2.0, &[1.0]).contains());
    }

    #[test]
    fn jordan_inverse_examples() {
        let e = ConePoint::identity(2);
        assert_eq!(e.jordan_inverse().unwrap(), e);
        let inv = pt(2.0, &[1.0, 0.0]).jordan_inverse().unwrap();
        assert!((inv.lambda - 2.0 / 3.0).abs() < 1e-15);
        assert!((inv.w[0] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(inv.w[1], 0.0);
        assert!(pt(1.0, &[1.0, 0.0]).jordan_inverse().is_err());
        assert!(pt(1.0, &[3.0]).jordan_inverse().is_err());
        // σ∘σ⁻¹ = e
        let s = pt(2.0, &[1.0, 0.5]);
        let prod = s.jordan_product(&s.jordan_inverse().unwrap()).unwrap();
        assert!((prod.lambda - 1.0).abs() < 1e-15);
        assert!(prod.w.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn phi_examples() {
        let id = phi_from_p2(&P2Element::new(1.0, 1.0, vec![0.0]));
        assert_eq!(id, pt(1.0, &[0.0, 0.0]));
        assert_eq!(phi_from_p2(&P2Element::new(3.0, 1.0, vec![1.0])), pt(2.0, &[1.0, 1.0]));
        assert_eq!(phi_to_p2(&pt(1.0, &[0.0, 0.0])).unwrap(), P2Element::new(1.0, 1.0, vec![0.0]));
        assert_eq!(phi_to_p2(&pt(2.0, &[1.0, 1.0])).unwrap(), P2Element::new(3.0, 1.0, vec![1.0]));
        assert!(phi_to_p2(&pt(1.0, &[])).is_err());
    }

    #[test]
    fn projection_examples() {
        let split = SubconeSplit::new(2, 1).unwrap();
        let (x0, rest) = project_w0(&pt(2.0, &[1.0, 1.0]), split).unwrap();
        assert_eq!(x0, pt(2.0, &[1.0]));
        assert_eq!(rest, vec![1.0]);
        let (x0, rest) = project_w0(&pt(3.0, &[1.0, 0.0]), split).unwrap();
        assert_eq!(split.embed(&x0).unwrap(), pt(3.0, &[1.0, 0.0]));
        assert_eq!(rest, vec![0.0]);
        assert!(project_w0(&pt(3.0, &[1.0]), split).is_err());
    }

    #[test]
    fn split_validation() {
        assert!(SubconeSplit::new(3, 0).is_err());
        assert!(SubconeSplit::new(3, 3).is_err());
        let s = SubconeSplit::new(4, 2).unwrap();
        assert_eq!((s.m(), s.m0(), s.m1()), (4, 2, 2));
        assert!(AmbientSpace::new(0).is_err());
    }
}
