//! Sampler, special functions and closed forms against independent
//! numerical oracles written here from scratch.

use std::f64::consts::PI;

use lorentz_wishart::hypothesis::{log_kernel_integral_closed_form, EigenpairLaw};
use lorentz_wishart::special::{beta_cdf, beta_sf, chi_square_sf, ln_gamma};
use lorentz_wishart::verify::{ks_statistic, ks_threshold};
use lorentz_wishart::wishart::{log_density, normalizer_k};
use lorentz_wishart::{AmbientSpace, ConePoint, SubconeSplit, WishartModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Composite Simpson on [a, b].
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / (2 * n) as f64;
    let mut s = f(a) + f(b);
    for i in 1..2 * n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

// Gamma function by Stirling with upward recurrence, accurate to ~1e-13.
fn gamma_oracle(x: f64) -> f64 {
    let mut shift = 1.0;
    let mut z = x;
    while z < 60.0 {
        shift *= z;
        z += 1.0;
    }
    let series = 1.0 + 1.0 / (12.0 * z) + 1.0 / (288.0 * z * z) - 139.0 / (51840.0 * z.powi(3))
        - 571.0 / (2488320.0 * z.powi(4));
    (2.0 * PI / z).sqrt() * (z / std::f64::consts::E).powf(z) * series / shift
}

// Regularized lower gamma P(a, x) from the series
// γ(a, x) = x^a e^{-x} Σ x^n / (a (a+1) ... (a+n)).
fn gamma_cdf_oracle(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let (mut term, mut sum) = (1.0 / a, 1.0 / a);
    let mut n = 1.0;
    while term > 1e-17 * sum {
        term *= x / (a + n);
        sum += term;
        n += 1.0;
    }
    (a * x.ln() - x).exp() * sum / gamma_oracle(a)
}

// Regularized incomplete beta from B_x(a, b) = x^a Σ (1−b)_n x^n / (n! (a+n)).
fn beta_cdf_oracle(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut coef = 1.0;
    let mut sum = 1.0 / a;
    for n in 1..200_000 {
        let k = n as f64;
        coef *= (k - b) * x / k;
        let t = coef / (a + k);
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x.powf(a) * sum * gamma_oracle(a + b) / (gamma_oracle(a) * gamma_oracle(b))
}

#[test]
fn ln_gamma_matches_stirling_oracle() {
    for &x in &[0.3, 0.5, 1.0, 1.75, 2.5, 3.0, 7.25, 15.5] {
        assert!((ln_gamma(x) - gamma_oracle(x).ln()).abs() < 1e-11, "x = {x}");
    }
}

#[test]
fn beta_cdf_matches_quadrature_oracle() {
    for &(a, b) in &[(1.0, 1.5), (1.5, 1.0), (0.5, 2.5), (2.0, 3.5), (1.5, 2.5)] {
        for &x in &[0.05, 0.19, 0.5, 0.8, 0.97] {
            let got = beta_cdf(x, a, b).unwrap();
            let want = beta_cdf_oracle(x, a, b);
            assert!((got - want).abs() < 1e-10, "I_{x}({a}, {b}) = {got} vs {want}");
            assert!((got + beta_sf(x, a, b).unwrap() - 1.0).abs() < 1e-14);
        }
    }
    assert!((beta_cdf(0.19, 1.0, 1.5).unwrap() - 0.271).abs() < 1e-12);
    assert!((beta_cdf(0.5, 2.5, 2.5).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn chi_square_tail_matches_oracle() {
    for &(x, k) in &[(21.666, 9.0), (16.0, 12.0), (3.0, 2.0), (130.0, 99.0)] {
        let want = 1.0 - gamma_cdf_oracle(0.5 * k, 0.5 * x);
        assert!((chi_square_sf(x, k).unwrap() - want).abs() < 1e-10, "chi2({x}; {k})");
    }
}

#[test]
fn radial_marginal_is_gamma() {
    // Under σ = e the trace coordinate is Gamma(2η, rate 2η).
    for &(m, eta) in &[(1usize, 1.25), (3, 2.5), (5, 4.0)] {
        let model = WishartModel::standard(eta, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5 + m as u64);
        let ys: Vec<f64> = model.sample(5000, &mut rng).unwrap().iter().map(|x| x.lambda).collect();
        let d = ks_statistic(&ys, |y| gamma_cdf_oracle(2.0 * eta, 2.0 * eta * y)).unwrap();
        assert!(d < ks_threshold(ys.len()), "m = {m}, eta = {eta}: KS = {d}");
    }
}

#[test]
fn subcone_marginal_matches_direct_density_on_a_grid() {
    // Quadrature of the full density over the complement ball reproduces the
    // subcone density at a few points, for m = 2, m0 = 1.
    let split = SubconeSplit::new(2, 1).unwrap();
    let eta = 2.25;
    let sigma0 = ConePoint::new(1.3, vec![0.4]);
    let full = WishartModel::new(eta, split.embed(&sigma0).unwrap()).unwrap();
    let sub = WishartModel::new(eta, sigma0).unwrap();
    for &(y, z0) in &[(1.0, 0.2), (2.0, -0.5), (0.6, 0.1)] {
        let r = ((y * y - z0 * z0) as f64).sqrt();
        let marg = simpson(
            |z1: f64| {
                let x = ConePoint::new(y, vec![z0, z1]);
                if x.contains() { log_density(&full, &x).unwrap().exp() } else { 0.0 }
            },
            -r,
            r,
            20000,
        );
        let direct = log_density(&sub, &ConePoint::new(y, vec![z0])).unwrap().exp();
        assert!((marg / direct - 1.0).abs() < 1e-4, "({y}, {z0}): {marg} vs {direct}");
    }
}

#[test]
fn printed_normalizer_examples() {
    assert!((normalizer_k(2, 2.0).unwrap() - (PI / 16.0).ln()).abs() < 1e-14);
    assert!((normalizer_k(1, 1.0).unwrap() - 2f64.ln()).abs() < 1e-14);
    let model = WishartModel::standard(2.0, 2).unwrap();
    let v = log_density(&model, &ConePoint::identity(2)).unwrap();
    assert!((v - (64.0 * (-4f64).exp() / PI).ln()).abs() < 1e-13);
}

#[test]
fn one_dimensional_density_integrates_to_one() {
    // m = 1, η = 1 on the triangle 0 < |z| < y.
    let model = WishartModel::standard(1.0, 1).unwrap();
    let total = simpson(
        |y: f64| {
            if y == 0.0 {
                return 0.0;
            }
            simpson(|z| log_density(&model, &ConePoint::new(y, vec![z])).unwrap().exp(), -y * 0.999_999, y * 0.999_999, 400)
        },
        0.0,
        30.0,
        3000,
    );
    assert!((total - 1.0).abs() < 1e-4, "{total}");
}

#[test]
fn eigen_kernel_integral_closed_form() {
    // ∫∫_{ξ1>ξ2>0} kernel by plain Simpson in (ξ1, ξ2) after u = ξ/(1+ξ).
    let m = 2usize;
    let eta = 3.0;
    let n = (m + 1) as f64;
    let kernel = |a: f64, b: f64| {
        (a - b).powf(m as f64 - 1.0) * (a * b).powf(eta - n / 2.0) * ((1.0 + a) * (1.0 + b)).powf(-2.0 * eta)
    };
    let total = simpson(
        |u1| {
            if u1 <= 0.0 || u1 >= 1.0 {
                return 0.0;
            }
            let a = u1 / (1.0 - u1);
            simpson(
                |u2| {
                    let b = u2 / (1.0 - u2);
                    kernel(a, b) / ((1.0 - u1) * (1.0 - u2)).powi(2)
                },
                0.0,
                u1,
                200,
            )
        },
        0.0,
        1.0,
        400,
    );
    let closed = log_kernel_integral_closed_form(AmbientSpace::new(m).unwrap(), eta).unwrap();
    assert!((total.ln() - closed).abs() < 1e-6, "{} vs {}", total.ln(), closed);
    let law = EigenpairLaw::new(AmbientSpace::new(m).unwrap(), eta).unwrap();
    assert!((law.kernel_integral() / total - 1.0).abs() < 1e-6);
}

#[test]
fn beta_null_law_small_sample() {
    use lorentz_wishart::hypothesis::maximal_invariant_m;
    let split = SubconeSplit::new(3, 1).unwrap();
    let eta = 1.6;
    let model = WishartModel::new(eta, ConePoint::new(1.0, vec![0.3, 0.0, 0.0])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let ms: Vec<f64> =
        model.sample(8000, &mut rng).unwrap().iter().map(|x| maximal_invariant_m(x, split).unwrap()).collect();
    let d = ks_statistic(&ms, |u| beta_cdf_oracle(u.clamp(0.0, 1.0), 1.0, eta - 1.0)).unwrap();
    assert!(d < ks_threshold(ms.len()), "KS = {d}");
}
