//! The connected automorphism group `G = R++ x SO+(Ψ)` of the Lorentz cone,
//! acting by `(a, A)(λ, w) = a·A(λ, w)`, and its subgroup `G₀` of elements
//! that map the subcone `L₀` into itself.
//!
//! Elements of `G₀` are block diagonal, `A = diag(A₀, A_⊥)`, where `A₀`
//! preserves the form `Ψ₀` on `R x W₀` with positive top-left entry, `A_⊥`
//! is orthogonal on `W₀^⊥`, and `det(A_{W₀})·det(A_⊥) > 0` for the `W₀`
//! block `A_{W₀}` of `A₀`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cone::{project_w0, AmbientSpace, ConePoint, SubconeSplit};
use crate::error::{Error, Result};
use crate::hypothesis::maximal_invariant_m;
use crate::linalg::{det_rows, Matrix};
use crate::math::{dot, exp, norm_sq, sqrt};

/// Frobenius tolerance for `AᵀΨA = Ψ` and `|det A − 1|`.
pub const GROUP_TOL: f64 = 1e-10;

/// Largest hyperbolic norm `‖v‖` of the boosts drawn by the random samplers.
pub const MAX_RANDOM_BOOST: f64 = 2.0;

/// Relative tolerance on the invariant `m` when matching orbits.
pub const ORBIT_TOL: f64 = 1e-9;

/// A reason a matrix fails to be a valid group element.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationFailure {
    /// `a ≤ 0` or not finite.
    NonPositiveScale(f64),
    /// Matrix size differs from `m + 1`.
    WrongSize {
        /// Expected side length.
        expected: usize,
        /// Actual side length.
        found: usize,
    },
    /// `‖AᵀΨA − Ψ‖_F` above tolerance.
    NotFormPreserving(f64),
    /// `A[0,0] ≤ 0`.
    NotOrthochronous(f64),
    /// `det A` differs from one.
    DeterminantNotOne(f64),
    /// Blocks coupling `R x W₀` and `W₀^⊥` are not zero.
    OffDiagonalBlock(f64),
    /// `A₀` does not preserve `Ψ₀`.
    SubconeBlockNotFormPreserving(f64),
    /// `A_⊥` is not orthogonal.
    ComplementNotOrthogonal(f64),
    /// `det(A_{W₀})·det(A_⊥) ≤ 0`.
    DeterminantSign(f64),
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositiveScale(a) => write!(f, "scale {a} is not positive"),
            Self::WrongSize { expected, found } => {
                write!(f, "matrix is {found}x{found}, expected {expected}x{expected}")
            }
            Self::NotFormPreserving(r) => write!(f, "A^T Psi A != Psi (residual {r:e})"),
            Self::NotOrthochronous(a0) => write!(f, "not orthochronous (a0 = {a0})"),
            Self::DeterminantNotOne(d) => write!(f, "det(A) = {d}, expected 1"),
            Self::OffDiagonalBlock(v) => write!(f, "off-diagonal block nonzero (max {v:e})"),
            Self::SubconeBlockNotFormPreserving(r) => {
                write!(f, "A0 does not preserve Psi0 (residual {r:e})")
            }
            Self::ComplementNotOrthogonal(r) => {
                write!(f, "complement block not orthogonal (residual {r:e})")
            }
            Self::DeterminantSign(p) => write!(f, "det(A_W0) * det(A_W0perp) = {p} is not positive"),
        }
    }
}

/// Outcome of [`validate`] or [`validate_g0`]; never an error by itself.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    /// Every failed condition, in the order checked.
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    /// True when no condition failed.
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn describe(&self) -> String {
        let mut s = String::new();
        for (i, f) in self.failures.iter().enumerate() {
            if i > 0 {
                s.push_str("; ");
            }
            s.push_str(&format!("{f}"));
        }
        s
    }
}

/// `Ψ = diag(1, −I_m)` of size `n = m + 1`.
pub fn psi_matrix(n: usize) -> Matrix {
    let mut d = vec![-1.0; n];
    if n > 0 {
        d[0] = 1.0;
    }
    Matrix::diagonal(&d)
}

/// `‖AᵀΨA − Ψ‖_F` for a square matrix acting on `R x R^{n−1}`.
pub fn form_residual(a: &Matrix) -> f64 {
    let psi = psi_matrix(a.dim());
    a.transpose().mul(&psi).mul(a).sub(&psi).frobenius()
}

/// Checks the defining conditions of `G` for a raw pair `(a, A)`.
pub fn validate_parts(a: f64, matrix: &Matrix, space: AmbientSpace) -> ValidationReport {
    let mut failures = Vec::new();
    if !(a > 0.0 && a.is_finite()) {
        failures.push(ValidationFailure::NonPositiveScale(a));
    }
    if matrix.dim() != space.dim() {
        failures.push(ValidationFailure::WrongSize { expected: space.dim(), found: matrix.dim() });
        return ValidationReport { failures };
    }
    let r = form_residual(matrix);
    if !(r <= GROUP_TOL) {
        failures.push(ValidationFailure::NotFormPreserving(r));
    }
    if !(matrix[(0, 0)] > 0.0) {
        failures.push(ValidationFailure::NotOrthochronous(matrix[(0, 0)]));
    }
    let d = matrix.det();
    if !((d - 1.0).abs() <= GROUP_TOL) {
        failures.push(ValidationFailure::DeterminantNotOne(d));
    }
    ValidationReport { failures }
}

/// A validated element `(a, A)` of `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    a: f64,
    matrix: Matrix,
}

impl GroupElement {
    /// Validates `(a, A)` as an element of `G` acting on `R x R^m` with
    /// `m + 1 = A.dim()`.
    pub fn new(a: f64, matrix: Matrix) -> Result<Self> {
        let space = AmbientSpace::new(matrix.dim().saturating_sub(1))?;
        let report = validate_parts(a, &matrix, space);
        if !report.passed() {
            return Err(Error::InvalidGroupElement(report.describe()));
        }
        Ok(Self { a, matrix })
    }

    /// The identity of `G` on `R x R^m`.
    pub fn identity(m: usize) -> Self {
        Self { a: 1.0, matrix: Matrix::identity(m + 1) }
    }

    /// Pure scaling `(a, I)`.
    pub fn scaling(a: f64, m: usize) -> Result<Self> {
        Self::new(a, Matrix::identity(m + 1))
    }

    /// Positive scale factor.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// The linear part `A`.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `dim W` of the space acted on.
    pub fn m(&self) -> usize {
        self.matrix.dim() - 1
    }

    /// `a·A(λ, w)`.
    pub fn apply(&self, x: &ConePoint) -> Result<ConePoint> {
        if x.m() != self.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), found: x.m() });
        }
        let v = self.matrix.mul_vec(&x.to_vec());
        let mut out = ConePoint::from_slice(&v).expect("nonempty");
        out = out.scale(self.a);
        Ok(out)
    }

    /// `self ∘ other`, acting as `x ↦ self(other(x))`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), found: other.m() });
        }
        Ok(GroupElement { a: self.a * other.a, matrix: self.matrix.mul(&other.matrix) })
    }

    /// `(1/a, ΨAᵀΨ)`.
    pub fn inverse(&self) -> GroupElement {
        let psi = psi_matrix(self.matrix.dim());
        GroupElement { a: 1.0 / self.a, matrix: psi.mul(&self.matrix.transpose()).mul(&psi) }
    }

    /// Report of the `G` conditions for this element.
    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Report of the `G` conditions: `a > 0`, `AᵀΨA = Ψ`, `A[0,0] > 0`, `det A = 1`.
pub fn validate(g: &GroupElement) -> ValidationReport {
    validate_parts(g.a, &g.matrix, AmbientSpace::new(g.m()).expect("m >= 1"))
}

/// Report of the `G₀` conditions for the subcone of `split`, in addition to
/// those of [`validate`].
pub fn validate_g0(g: &GroupElement, split: SubconeSplit) -> ValidationReport {
    let mut report = validate(g);
    let a = &g.matrix;
    if a.dim() != split.m() + 1 {
        report.failures.push(ValidationFailure::WrongSize { expected: split.m() + 1, found: a.dim() });
        return report;
    }
    let k = split.m0() + 1;
    let n = a.dim();
    let mut off = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if (i < k) != (j < k) {
                off = off.max(a[(i, j)].abs());
            }
        }
    }
    if !(off <= GROUP_TOL) {
        report.failures.push(ValidationFailure::OffDiagonalBlock(off));
    }
    let a0 = Matrix::from_rows(&a.block(0..k, 0..k)).expect("square");
    let r0 = form_residual(&a0);
    if !(r0 <= GROUP_TOL) {
        report.failures.push(ValidationFailure::SubconeBlockNotFormPreserving(r0));
    }
    let ap = Matrix::from_rows(&a.block(k..n, k..n)).expect("square");
    let rp = ap.transpose().mul(&ap).sub(&Matrix::identity(n - k)).frobenius();
    if !(rp <= GROUP_TOL) {
        report.failures.push(ValidationFailure::ComplementNotOrthogonal(rp));
    }
    let det_w0 = det_rows(&a.block(1..k, 1..k));
    let product = det_w0 * ap.det();
    if !(product > 0.0) {
        report.failures.push(ValidationFailure::DeterminantSign(product));
    }
    report
}

/// `apply(compose(g, h), x) = apply(g, apply(h, x))`.
pub fn compose(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    g.compose(h)
}

/// Group inverse.
pub fn inverse(g: &GroupElement) -> GroupElement {
    g.inverse()
}

/// The boost `B(h) = [[c, vᵀ], [v, I + vvᵀ/(1+c)]]` for a point `h = (c, v)`
/// of the unit hyperboloid `c² − ‖v‖² = 1`, `c > 0`. It maps `e` to `h`.
pub fn boost_matrix(h: &ConePoint) -> Matrix {
    let n = h.m() + 1;
    let c = h.lambda;
    let v = &h.w;
    let mut b = Matrix::identity(n);
    b[(0, 0)] = c;
    for i in 0..v.len() {
        b[(0, i + 1)] = v[i];
        b[(i + 1, 0)] = v[i];
        for j in 0..v.len() {
            b[(i + 1, j + 1)] += v[i] * v[j] / (1.0 + c);
        }
    }
    b
}

/// Unit hyperboloid point `(√(1 + ‖v‖²), v)`.
pub fn hyperboloid_point(v: Vec<f64>) -> ConePoint {
    ConePoint::new(sqrt(1.0 + norm_sq(&v)), v)
}

fn normalize_to_hyperboloid(x: &ConePoint) -> ConePoint {
    let s = sqrt(x.det());
    ConePoint::new(sqrt(1.0 + norm_sq(&x.w) / (s * s)), x.w.iter().map(|v| v / s).collect())
}

/// The element `(√det σ, B(σ/√det σ))`, which maps `e` to `σ`.
pub fn boost_to(sigma: &ConePoint) -> Result<GroupElement> {
    sigma.require_interior("sigma")?;
    AmbientSpace::new(sigma.m())?;
    let h = normalize_to_hyperboloid(sigma);
    GroupElement::new(sqrt(sigma.det()), boost_matrix(&h))
}

/// Rotation in `span{u, v}` taking the unit vector `u` to the unit vector
/// `v` and fixing the orthogonal complement; `det = 1`.
///
/// Returns `None` in dimension one when `v = −u` (no rotation exists).
pub fn rotation_between(u: &[f64], v: &[f64]) -> Option<Matrix> {
    let k = u.len();
    let c = dot(u, v);
    if c >= 0.0 {
        return Some(plane_rotation(u, v, c));
    }
    if k == 1 {
        return None;
    }
    // Split through an intermediate unit vector orthogonal to u so both
    // half-steps have nonnegative cosine.
    let mut q: Vec<f64> = v.iter().zip(u).map(|(vi, ui)| vi - c * ui).collect();
    let nq = sqrt(norm_sq(&q));
    if nq > 1e-8 {
        q.iter_mut().for_each(|x| *x /= nq);
    } else {
        q = orthogonal_unit(u);
    }
    let first = plane_rotation(u, &q, dot(u, &q));
    let second = plane_rotation(&q, v, dot(&q, v));
    Some(second.mul(&first))
}

// I + K + K²/(1+c) with K = v uᵀ − u vᵀ.
fn plane_rotation(u: &[f64], v: &[f64], c: f64) -> Matrix {
    let k = u.len();
    let mut kk = Matrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            kk[(i, j)] = v[i] * u[j] - u[i] * v[j];
        }
    }
    let k2 = kk.mul(&kk);
    let mut r = Matrix::identity(k);
    for i in 0..k {
        for j in 0..k {
            r[(i, j)] += kk[(i, j)] + k2[(i, j)] / (1.0 + c);
        }
    }
    r
}

fn orthogonal_unit(u: &[f64]) -> Vec<f64> {
    let idx = (0..u.len())
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap_or(0);
    let mut q = vec![0.0; u.len()];
    q[idx] = 1.0;
    let c = dot(&q, u);
    q.iter_mut().zip(u).for_each(|(qi, ui)| *qi -= c * ui);
    let n = sqrt(norm_sq(&q));
    q.iter_mut().for_each(|x| *x /= n);
    q
}

fn lift_spatial(q: &Matrix) -> Matrix {
    let mut a = Matrix::identity(q.dim() + 1);
    a.set_block(1, q);
    a
}

/// A `g ∈ G₀` with `g·x = y`, for interior `x`, `y` sharing the value of the
/// maximal invariant `m`.
///
/// The scale is the ratio of hyperbolic norms of the `R x W₀` parts, the
/// `R x W₀` block maps the normalized parts onto each other through boosts,
/// and the complement block rotates the normalized complement parts onto
/// each other. When `m1 = 1` and the complement parts point in opposite
/// directions, the complement block is `−1` and a reflection of `W₀` is
/// inserted between the boosts to keep `det A = 1`.
pub fn match_in_g0(x: &ConePoint, y: &ConePoint, split: SubconeSplit) -> Result<GroupElement> {
    x.require_interior("x")?;
    y.require_interior("y")?;
    let mx = maximal_invariant_m(x, split)?;
    let my = maximal_invariant_m(y, split)?;
    if (mx - my).abs() > ORBIT_TOL * (1.0 + mx.abs().max(my.abs())) {
        return Err(Error::NotSameOrbit { left: mx, right: my });
    }
    let (x0, xp) = project_w0(x, split)?;
    let (y0, yp) = project_w0(y, split)?;
    let a = sqrt(y0.det() / x0.det());
    let hx = normalize_to_hyperboloid(&x0);
    let hy = normalize_to_hyperboloid(&y0);
    let bx_inv = boost_matrix(&ConePoint::new(hx.lambda, hx.w.iter().map(|v| -v).collect()));
    let by = boost_matrix(&hy);

    let nx = sqrt(norm_sq(&xp));
    let ny = sqrt(norm_sq(&yp));
    let m1 = split.m1();
    let (complement, flip) = if nx == 0.0 || ny == 0.0 {
        (Matrix::identity(m1), false)
    } else {
        let ux: Vec<f64> = xp.iter().map(|v| v / nx).collect();
        let uy: Vec<f64> = yp.iter().map(|v| v / ny).collect();
        match rotation_between(&ux, &uy) {
            Some(r) => (r, false),
            None => (Matrix::diagonal(&[-1.0]), true),
        }
    };
    let a0 = if flip {
        let mut reflect = vec![1.0; split.m0() + 1];
        reflect[1] = -1.0;
        by.mul(&Matrix::diagonal(&reflect)).mul(&bx_inv)
    } else {
        by.mul(&bx_inv)
    };
    let mut full = Matrix::identity(split.m() + 1);
    full.set_block(0, &a0);
    full.set_block(split.m0() + 1, &complement);
    let g = GroupElement::new(a, full)?;
    let report = validate_g0(&g, split);
    if !report.passed() {
        return Err(Error::InvalidGroupElement(report.describe()));
    }
    Ok(g)
}

fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    (0..k).map(|_| StandardNormal.sample(rng)).collect()
}

/// Haar-distributed orthogonal `k x k` matrix with determinant `sign`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, k: usize, sign: f64) -> Matrix {
    // Gram-Schmidt on Gaussian columns with positive R diagonal gives Haar on O(k).
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v = gaussian_vec(rng, k);
        for c in &cols {
            let p = dot(&v, c);
            v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= p * ci);
        }
        let n = sqrt(norm_sq(&v));
        if n < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        cols.push(v);
    }
    let mut q = Matrix::zeros(k);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..k {
            q[(i, j)] = c[i];
        }
    }
    if (q.det() > 0.0) != (sign > 0.0) {
        for i in 0..k {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

fn random_boost_vector<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let d = gaussian_vec(rng, k);
    let n = sqrt(norm_sq(&d));
    let r = MAX_RANDOM_BOOST * rng.random::<f64>();
    if n == 0.0 {
        return vec![0.0; k];
    }
    d.iter().map(|x| r * x / n).collect()
}

/// A random element of `G` on `R x R^m`: scale `exp(N(0,1))`, a Haar rotation
/// of `W`, then a boost of hyperbolic norm uniform in `[0, 2]` toward a
/// uniform direction.
pub fn random_group_element<R: Rng + ?Sized>(rng: &mut R, space: AmbientSpace) -> GroupElement {
    let m = space.m();
    let z: f64 = StandardNormal.sample(rng);
    let a = exp(z);
    let q = random_orthogonal(rng, m, 1.0);
    let h = hyperboloid_point(random_boost_vector(rng, m));
    let matrix = boost_matrix(&h).mul(&lift_spatial(&q));
    GroupElement::new(a, matrix).expect("constructed element is valid")
}

/// A random element of `G₀` for `split`: block diagonal with a boosted
/// orthogonal map on `R x W₀` and an orthogonal map on `W₀^⊥`, the two
/// spatial determinants sharing a random sign.
pub fn random_g0_element<R: Rng + ?Sized>(rng: &mut R, split: SubconeSplit) -> GroupElement {
    let z: f64 = StandardNormal.sample(rng);
    let a = exp(z);
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let q0 = random_orthogonal(rng, split.m0(), sign);
    let qp = random_orthogonal(rng, split.m1(), sign);
    let h0 = hyperboloid_point(random_boost_vector(rng, split.m0()));
    let a0 = boost_matrix(&h0).mul(&lift_spatial(&q0));
    let mut full = Matrix::identity(split.m() + 1);
    full.set_block(0, &a0);
    full.set_block(split.m0() + 1, &qp);
    GroupElement::new(a, full).expect("constructed element is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(lambda: f64, w: &[f64]) -> ConePoint {
        ConePoint::new(lambda, w.to_vec())
    }

    fn close_pt(a: &ConePoint, b: &ConePoint, tol: f64) -> bool {
        let scale = 1.0 + b.lambda.abs();
        (a.lambda - b.lambda).abs() <= tol * scale
            && a.w.iter().zip(&b.w).all(|(x, y)| (x - y).abs() <= tol * scale)
    }

    #[test]
    fn identity_and_scaling_act_as_expected() {
        let x = pt(3.0, &[1.0, -0.5]);
        assert_eq!(GroupElement::identity(2).apply(&x).unwrap(), x);
        let g = GroupElement::scaling(2.0, 1).unwrap();
        assert_eq!(g.apply(&pt(1.0, &[0.0])).unwrap(), pt(2.0, &[0.0]));
        let c = g.compose(&GroupElement::scaling(3.0, 1).unwrap()).unwrap();
        assert_eq!(c.a(), 6.0);
        assert_eq!(c.matrix(), &Matrix::identity(2));
        assert!(g.apply(&pt(1.0, &[0.0, 0.0])).is_err());
    }

    #[test]
    fn invalid_elements_are_rejected() {
        assert!(GroupElement::scaling(-1.0, 2).is_err());
        // Spatial reflection: Ψ-preserving but det = −1.
        let r = Matrix::diagonal(&[1.0, -1.0, 1.0]);
        assert!(GroupElement::new(1.0, r).is_err());
        // Time reversal composed with spatial reflection: det = 1, not orthochronous.
        let t = Matrix::diagonal(&[-1.0, -1.0, 1.0]);
        let err = GroupElement::new(1.0, t).unwrap_err();
        assert!(format!("{err}").contains("orthochronous"));
        let shear = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(GroupElement::new(1.0, shear).is_err());
    }

    #[test]
    fn boost_to_examples() {
        let e = ConePoint::identity(3);
        let g = boost_to(&e).unwrap();
        assert!(g.matrix().sub(&Matrix::identity(4)).max_abs() < 1e-15);
        assert_eq!(g.a(), 1.0);
        let g = boost_to(&pt(2.0, &[0.0, 0.0])).unwrap();
        assert_eq!(g.a(), 2.0);
        assert!(g.matrix().sub(&Matrix::identity(3)).max_abs() < 1e-15);
        let s = pt(2.0, &[1.0, -0.7, 0.3]);
        let g = boost_to(&s).unwrap();
        assert!(close_pt(&g.apply(&ConePoint::identity(3)).unwrap(), &s, 1e-12));
        assert!(boost_to(&pt(1.0, &[1.0])).is_err());
    }

    #[test]
    fn rotation_between_handles_antipodes() {
        let u = [1.0, 0.0, 0.0];
        let v = [-1.0, 0.0, 0.0];
        let r = rotation_between(&u, &v).unwrap();
        let ru = r.mul_vec(&u);
        assert!(ru.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-14));
        assert!((r.det() - 1.0).abs() < 1e-14);
        assert!(rotation_between(&[1.0], &[-1.0]).is_none());
        let r = rotation_between(&[1.0], &[1.0]).unwrap();
        assert_eq!(r, Matrix::identity(1));
        let w = [0.6, 0.8, 0.0];
        let r = rotation_between(&u, &w).unwrap();
        let ru = r.mul_vec(&u);
        assert!(ru.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn validate_g0_examples() {
        let split = SubconeSplit::new(3, 1).unwrap();
        assert!(validate_g0(&GroupElement::identity(3), split).passed());
        // Rotation in W0perp paired with the identity on R x W0.
        let mut a = Matrix::identity(4);
        let (c, s) = (0.6, 0.8);
        a[(2, 2)] = c;
        a[(2, 3)] = -s;
        a[(3, 2)] = s;
        a[(3, 3)] = c;
        let g = GroupElement::new(1.5, a).unwrap();
        assert!(g.validate().passed());
        assert!(validate_g0(&g, split).passed());
        // A boost toward a point with a W0perp component mixes the blocks.
        let g = boost_to(&pt(3.0, &[0.5, 1.0, 0.0])).unwrap();
        let report = validate_g0(&g, split);
        assert!(!report.passed());
        assert!(report
            .failures
            .iter()
            .any(|f| format!("{f}").contains("off-diagonal block nonzero")));
    }

    #[test]
    fn match_in_g0_examples() {
        let split = SubconeSplit::new(3, 1).unwrap();
        let x = pt(3.0, &[1.0, 0.5, -0.2]);
        let g = match_in_g0(&x, &x, split).unwrap();
        assert!(close_pt(&g.apply(&x).unwrap(), &x, 1e-12));
        let x = pt(2.0, &[1.0, 0.0, 0.0]);
        let y = pt(5.0, &[-3.0, 0.0, 0.0]);
        let g = match_in_g0(&x, &y, split).unwrap();
        assert!(close_pt(&g.apply(&x).unwrap(), &y, 1e-12));
        let err = match_in_g0(&pt(2.0, &[0.0, 1.0, 0.0]), &pt(2.0, &[1.0, 0.0, 0.0]), split);
        assert!(matches!(err, Err(Error::NotSameOrbit { .. })));
    }

    #[test]
    fn match_in_g0_with_one_dimensional_blocks() {
        let split = SubconeSplit::new(2, 1).unwrap();
        let x = pt(2.0, &[0.0, 1.0]);
        let y = pt(2.0, &[0.0, -1.0]);
        let g = match_in_g0(&x, &y, split).unwrap();
        assert!(validate_g0(&g, split).passed());
        assert!(close_pt(&g.apply(&x).unwrap(), &y, 1e-12));
    }

    #[test]
    fn random_elements_are_valid_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let space = AmbientSpace::new(4).unwrap();
        let split = SubconeSplit::new(4, 2).unwrap();
        for _ in 0..200 {
            let g = random_group_element(&mut rng, space);
            assert!(g.validate().passed());
            let h = random_g0_element(&mut rng, split);
            assert!(validate_g0(&h, split).passed(), "{:?}", validate_g0(&h, split));
        }
        let g1 = random_group_element(&mut ChaCha8Rng::seed_from_u64(9), space);
        let g2 = random_group_element(&mut ChaCha8Rng::seed_from_u64(9), space);
        assert_eq!(g1, g2);
    }
}
