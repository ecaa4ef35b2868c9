//! Goodness-of-fit statistics used by the checks.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::special::chi_square_sf;

/// Asymptotic `α = 0.01` Kolmogorov constant.
pub const KS_CRITICAL: f64 = 1.63;

/// One-sample critical distance `1.63/√n`.
pub fn ks_threshold(n: usize) -> f64 {
    KS_CRITICAL / sqrt(n as f64)
}

/// Two-sample critical distance `1.63·√((n₁+n₂)/(n₁n₂))`.
pub fn ks_two_sample_threshold(n1: usize, n2: usize) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    KS_CRITICAL * sqrt((a + b) / (a * b))
}

/// Two-sided Kolmogorov–Smirnov distance between the empirical CDF of
/// `samples` and `cdf`.
///
/// ```
/// use lorentz_wishart::verify::ks_statistic;
/// let d = ks_statistic(&[0.5, 0.5, 0.5], |u| u).unwrap();
/// assert!((d - 0.5).abs() < 1e-15);
/// ```
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("KS statistic needs at least one sample".into()));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("two-sample KS needs nonempty samples".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Interior cut points at the empirical `k/bins` quantiles.
pub fn empirical_edges(values: &[f64], bins: usize) -> Vec<f64> {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    (1..bins).map(|k| s[(k * s.len()) / bins]).collect()
}

/// Bin index of `x` given interior cut points.
pub fn bin_of(x: f64, edges: &[f64]) -> usize {
    edges.partition_point(|&e| e <= x)
}

/// Contingency table of paired values over the given cut points.
pub fn contingency(a: &[f64], b: &[f64], a_edges: &[f64], b_edges: &[f64]) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0; b_edges.len() + 1]; a_edges.len() + 1];
    for (&x, &y) in a.iter().zip(b) {
        table[bin_of(x, a_edges)][bin_of(y, b_edges)] += 1.0;
    }
    table
}

/// Outcome of a Pearson chi-square test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    /// Pearson statistic.
    pub statistic: f64,
    /// Degrees of freedom.
    pub df: f64,
    /// Upper-tail probability.
    pub p_value: f64,
    /// Smallest expected cell count.
    pub min_expected: f64,
}

/// Pearson test of independence on a contingency table, with expected
/// counts from the margins and `(r−1)(c−1)` degrees of freedom.
pub fn chi_square_independence(table: &[Vec<f64>]) -> Result<ChiSquare> {
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols = table.first().map(|r| r.len()).unwrap_or(0);
    let col_tot: Vec<f64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let total: f64 = rows.iter().sum();
    let mut stat = 0.0;
    let mut min_expected = f64::INFINITY;
    for (i, row) in table.iter().enumerate() {
        for (j, &obs) in row.iter().enumerate() {
            let e = rows[i] * col_tot[j] / total;
            min_expected = min_expected.min(e);
            let d = obs - e;
            stat += d * d / e;
        }
    }
    let df = ((table.len() - 1) * (cols - 1)) as f64;
    Ok(ChiSquare { statistic: stat, df, p_value: chi_square_sf(stat, df)?, min_expected })
}

/// Pearson goodness-of-fit of observed counts to expected counts; cells
/// with expected count below `min_count` are pooled into one cell.
/// Degrees of freedom are `cells − 1 − fitted`.
pub fn chi_square_gof(observed: &[f64], expected: &[f64], min_count: f64, fitted: usize) -> Result<ChiSquare> {
    let (mut po, mut pe) = (0.0, 0.0);
    let mut stat = 0.0;
    let mut cells = 0usize;
    let mut min_expected = f64::INFINITY;
    for (&o, &e) in observed.iter().zip(expected) {
        if e < min_count {
            po += o;
            pe += e;
        } else {
            stat += (o - e) * (o - e) / e;
            min_expected = min_expected.min(e);
            cells += 1;
        }
    }
    if pe > 0.0 {
        stat += (po - pe) * (po - pe) / pe;
        min_expected = min_expected.min(pe);
        cells += 1;
    }
    if cells < 2 + fitted {
        return Err(Error::InvalidParameter("too few chi-square cells".into()));
    }
    let df = (cells - 1 - fitted) as f64;
    Ok(ChiSquare { statistic: stat, df, p_value: chi_square_sf(stat, df)?, min_expected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_edge_cases() {
        assert!(ks_statistic(&[], |u| u).is_err());
        assert_eq!(ks_statistic(&[0.0], |u| u).unwrap(), 1.0);
        let grid: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&grid, |u| u).unwrap() - 0.005).abs() < 1e-12);
    }

    #[test]
    fn two_sample_ks() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
        assert!((ks_two_sample(&[1.0, 3.0], &[2.0, 4.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn contingency_counts_sum_to_n() {
        let a: Vec<f64> = (0..1000).map(|i| (i * 7 % 1000) as f64).collect();
        let b: Vec<f64> = (0..1000).map(|i| (i * 13 % 1000) as f64).collect();
        let t = contingency(&a, &b, &empirical_edges(&a, 4), &empirical_edges(&b, 4));
        let total: f64 = t.iter().flatten().sum();
        assert_eq!(total, 1000.0);
        for r in &t {
            assert_eq!(r.iter().sum::<f64>(), 250.0);
        }
    }

    #[test]
    fn chi_square_gof_pools_small_cells() {
        let r = chi_square_gof(&[10.0, 10.0, 1.0, 2.0], &[10.0, 10.0, 1.5, 1.5], 5.0, 0).unwrap();
        assert_eq!(r.df, 2.0);
        assert_eq!(r.statistic, 0.0);
    }
}
