//! Seeded Monte Carlo and quadrature checks.
//!
//! Every check is a pure function of its parameters and a 64-bit seed and
//! returns a [`CheckReport`]. Each check owns a [`ChaCha8Rng`] stream; the
//! suite derives the seed of a check from the master seed and the check's
//! name with [`derive_seed`], so checks can be reordered or run
//! concurrently without changing results.

mod checks;
mod stats;
mod suite;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::cone::{ConePoint, SubconeSplit};
use crate::error::{Error, Result};
use crate::hypothesis::{generalized_eigenvalues, log_lr_from_eigen};
use crate::math::{exp, norm_sq, powf, sqrt};
use crate::wishart::WishartModel;

pub use checks::*;
pub use stats::*;
pub use suite::{run_suite, SuiteConfig};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    /// Check name.
    pub name: String,
    /// Test statistic or worst-case deviation.
    pub statistic: f64,
    /// Pass threshold for `statistic`.
    pub threshold: f64,
    /// Whether the check passed.
    pub passed: bool,
    /// Number of draws or cases.
    pub n_samples: usize,
    /// Seed of the check's stream.
    pub seed: u64,
    /// Free-form diagnostics.
    pub details: String,
}

/// Sorted likelihood ratios of (T2) under its null, for empirical p-values.
#[derive(Debug, Clone, PartialEq)]
pub struct NullCalibration {
    /// Dimension of `W`.
    pub m: usize,
    /// Shape.
    pub eta: f64,
    /// Number of simulated pairs.
    pub n: usize,
    /// Ascending ratios in `(0, 1]`.
    pub sorted_lr_values: Vec<f64>,
    /// Seed of the simulation.
    pub seed: u64,
}

impl NullCalibration {
    /// Fraction of calibration ratios `≤ lr`.
    pub fn p_value(&self, lr: f64) -> f64 {
        let cut = lr * (1.0 + 1e-12);
        let k = self.sorted_lr_values.partition_point(|&v| v <= cut);
        k as f64 / self.sorted_lr_values.len().max(1) as f64
    }
}

/// Smallest calibration size accepted by [`calibrate_null`].
pub const MIN_CALIBRATION: usize = 1000;

/// `n` null likelihood ratios from pairs of independent `W_{η,e}` draws.
pub fn calibrate_null(m: usize, eta: f64, n: usize, seed: u64) -> Result<NullCalibration> {
    calibrate_null_at(&ConePoint::identity(m), eta, n, seed)
}

/// As [`calibrate_null`], simulating at an arbitrary common scale `σ`.
pub fn calibrate_null_at(sigma: &ConePoint, eta: f64, n: usize, seed: u64) -> Result<NullCalibration> {
    if n < MIN_CALIBRATION {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least {MIN_CALIBRATION} pairs, got {n}"
        )));
    }
    let model = WishartModel::new(eta, sigma.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = model.sample(n, &mut rng)?;
    let b = model.sample(n, &mut rng)?;
    let mut values = Vec::with_capacity(n);
    for (x, y) in a.iter().zip(&b) {
        let pair = generalized_eigenvalues(x, y)?;
        values.push(exp(log_lr_from_eigen(pair, eta)));
    }
    values.sort_by(f64::total_cmp);
    Ok(NullCalibration { m: sigma.m(), eta, n, sorted_lr_values: values, seed })
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a hash.
pub fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of the check called `name` under `master`:
/// `splitmix64(master ^ fnv1a(name))`.
pub fn derive_seed(master: u64, name: &str) -> u64 {
    splitmix64(master ^ fnv1a(name))
}

/// A random interior point of the cone of `R x R^m`: `λ = exp(N(0, ¼))`
/// and `w` of norm `λ·r`, `r` uniform on `[0, 0.95)`, in a uniform direction.
pub fn random_cone_point<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ConePoint {
    let z: f64 = StandardNormal.sample(rng);
    let lambda = exp(0.5 * z);
    let mut d: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
    let nd = sqrt(norm_sq(&d));
    let r = 0.95 * rng.random::<f64>();
    if nd > 0.0 {
        d.iter_mut().for_each(|v| *v *= lambda * r / nd);
    }
    ConePoint::new(lambda, d)
}

/// A random interior point of the subcone `L₀`, embedded in `R x W`.
pub fn random_subcone_point<R: Rng + ?Sized>(rng: &mut R, split: SubconeSplit) -> ConePoint {
    split.embed(&random_cone_point(rng, split.m0())).expect("dimensions match")
}

fn new_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pow_root(q: f64, eta: f64) -> f64 {
    powf(q, 1.0 / eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_splitting_is_name_sensitive() {
        assert_ne!(derive_seed(11, "beta_law"), derive_seed(11, "independence_t1"));
        assert_eq!(derive_seed(11, "beta_law"), derive_seed(11, "beta_law"));
        assert_ne!(derive_seed(11, "beta_law"), derive_seed(12, "beta_law"));
        assert_eq!(fnv1a(""), 0xcbf2_9ce4_8422_2325);
    }

    #[test]
    fn calibration_contract() {
        assert!(calibrate_null(2, 3.0, 999, 1).is_err());
        let c = calibrate_null(2, 3.0, 2000, 1).unwrap();
        assert_eq!(c.sorted_lr_values.len(), 2000);
        assert!(c.sorted_lr_values.windows(2).all(|w| w[0] <= w[1]));
        assert!(c.sorted_lr_values.iter().all(|&v| v > 0.0 && v <= 1.0));
        assert_eq!(c, calibrate_null(2, 3.0, 2000, 1).unwrap());
        assert_eq!(c.p_value(1.0), 1.0);
        assert_eq!(c.p_value(0.0), 0.0);
    }
}
