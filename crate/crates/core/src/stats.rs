//! Empirical CDFs, exact Kolmogorov–Smirnov statistics, histograms, and a
//! deterministic one-step stationarity check.

use serde::Serialize;

use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::ifs::Ifsp;

/// Asymptotic KS coefficient `c(alpha)`: critical value `c(alpha) / sqrt(N)`.
///
/// The usual table values are returned for the common levels; other levels
/// use `sqrt(-ln(alpha / 2) / 2)`.
pub fn ks_coefficient(alpha: f64) -> Result<f64> {
    const TABLE: [(f64, f64); 6] = [
        (0.10, 1.224),
        (0.05, 1.358),
        (0.025, 1.480),
        (0.01, 1.628),
        (0.005, 1.731),
        (0.001, 1.949),
    ];
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("significance level must lie in (0, 1), got {alpha}")));
    }
    Ok(TABLE
        .iter()
        .find(|(a, _)| *a == alpha)
        .map(|(_, c)| *c)
        .unwrap_or_else(|| (-0.5 * (alpha / 2.0).ln()).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    #[serde(rename = "n")]
    pub sample_size: usize,
    /// Second sample size for two-sample tests.
    #[serde(rename = "m", skip_serializing_if = "Option::is_none")]
    pub second_sample_size: Option<usize>,
    pub alpha: f64,
    #[serde(rename = "critical")]
    pub critical_value: f64,
    pub pass: bool,
}

impl KsReport {
    pub fn one_sample(statistic: f64, n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("KS test needs at least one sample"));
        }
        let critical_value = ks_coefficient(alpha)? / (n as f64).sqrt();
        Ok(KsReport {
            statistic,
            sample_size: n,
            second_sample_size: None,
            alpha,
            critical_value,
            pass: statistic <= critical_value,
        })
    }

    /// Critical value `c(alpha) * sqrt((n + m) / (n m))`.
    pub fn two_sample(statistic: f64, n: usize, m: usize, alpha: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::domain("two-sample KS test needs two non-empty samples"));
        }
        let (nf, mf) = (n as f64, m as f64);
        let critical_value = ks_coefficient(alpha)? * ((nf + mf) / (nf * mf)).sqrt();
        Ok(KsReport {
            statistic,
            sample_size: n,
            second_sample_size: Some(m),
            alpha,
            critical_value,
            pass: statistic <= critical_value,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|v| !v.is_finite()) {
        Some(k) => Err(Error::domain(format!("sample {k} is not finite ({})", samples[k]))),
        None => Ok(()),
    }
}

fn sorted_copy(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// `#{samples <= x} / N` over an ascending sample.
pub fn ecdf_eval(sorted: &[f64], x: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::domain("empirical CDF of an empty sample"));
    }
    if let Some(k) = sorted.windows(2).position(|w| w[0].partial_cmp(&w[1]).is_none_or(|o| o.is_gt())) {
        return Err(Error::integrity(format!("samples not sorted at position {}", k + 1)));
    }
    Ok(sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64)
}

/// Exact one-sample KS distance `sup |F_N - F|` for a continuous `F`:
/// `max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N)`.
pub fn ks_distance(samples: &[f64], dist: &ContinuousDistribution) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("KS distance of an empty sample"));
    }
    check_finite(samples)?;
    let sorted = sorted_copy(samples);
    let n = sorted.len() as f64;
    Ok(sorted.iter().enumerate().fold(0.0, |d, (k, &x)| {
        let f = dist.cdf(x);
        let above = (k + 1) as f64 / n - f;
        let below = f - k as f64 / n;
        d.max(above).max(below)
    }))
}

/// Exact two-sample KS distance `sup |F_a - F_b|` by a merge scan over the
/// pooled order statistics.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("two-sample KS needs two non-empty samples"));
    }
    check_finite(a)?;
    check_finite(b)?;
    let (a, b) = (sorted_copy(a), sorted_copy(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
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

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    /// `counts[k] / N` with `N` the total number of samples, in range or not.
    pub frequencies: Vec<f64>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn edge(&self, k: usize) -> f64 {
        if k == self.bins() {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (k as f64 / self.bins() as f64)
        }
    }
}

/// Equal-width bins on `[lo, hi]`, each closed on the left and open on the
/// right except the last, which also holds `hi`.
pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!("histogram range [{lo}, {hi}] is empty or not finite")));
    }
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let mut hist = Histogram {
        lo,
        hi,
        counts: vec![0; bins],
        frequencies: vec![0.0; bins],
    };
    for &x in samples {
        if !(x >= lo && x <= hi) {
            continue;
        }
        let mut k = (((x - lo) / (hi - lo)) * bins as f64) as usize;
        k = k.min(bins - 1);
        // settle rounding at the edges against the edges themselves
        while k > 0 && x < hist.edge(k) {
            k -= 1;
        }
        while k + 1 < bins && x >= hist.edge(k + 1) {
            k += 1;
        }
        hist.counts[k] += 1;
    }
    if !samples.is_empty() {
        let n = samples.len() as f64;
        for (f, &c) in hist.frequencies.iter_mut().zip(&hist.counts) {
            *f = c as f64 / n;
        }
    }
    Ok(hist)
}

/// `sup |W - F|` for the step function `W` with weight `w` at each value.
/// Weights are expected to sum to one.
pub fn weighted_ks_distance(points: &[(f64, f64)], dist: &ContinuousDistribution) -> Result<f64> {
    let mut pts = points.to_vec();
    if let Some(p) = pts.iter().find(|(v, w)| !v.is_finite() || !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::integrity(format!("invalid weighted point {p:?}")));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut d = 0.0f64;
    let mut before = 0.0;
    let mut k = 0;
    while k < pts.len() {
        let v = pts[k].0;
        let mut after = before;
        while k < pts.len() && pts[k].0 == v {
            after += pts[k].1;
            k += 1;
        }
        let f = dist.cdf(v);
        d = d.max((f - before).abs()).max((after - f).abs());
        before = after;
    }
    Ok(d)
}

/// Pushes the quantile-stratified grid `x_j = F⁻¹((j - 1/2) / G)` through
/// every map once and measures how far the pooled, probability-weighted
/// image is from `F`.
///
/// For a theorem system the image is again a stratified grid, now with
/// `n G` points, so the distance is `1 / (2 n G)` up to rounding.
pub fn one_step_stationarity(
    ifsp: &Ifsp,
    dist: &ContinuousDistribution,
    grid_size: usize,
    alpha: f64,
) -> Result<KsReport> {
    if grid_size < 2 {
        return Err(Error::domain(format!("grid size must be at least 2, got {grid_size}")));
    }
    let g = grid_size as f64;
    let mut points = Vec::with_capacity(grid_size * ifsp.len());
    for j in 1..=grid_size {
        let level = (j as f64 - 0.5) / g;
        let x = dist.quantile(level);
        if !x.is_finite() {
            return Err(Error::numeric(format!("quantile at level {level} is {x}")));
        }
        for (map, &p) in ifsp.maps().iter().zip(ifsp.probs()) {
            if p > 0.0 {
                points.push((map.apply(x)?.value, p / g));
            }
        }
    }
    let statistic = weighted_ks_distance(&points, dist)?;
    KsReport::one_sample(statistic, points.len(), alpha)
}
