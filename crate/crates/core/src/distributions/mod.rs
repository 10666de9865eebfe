//! Continuous distributions on the real line, each presented by a CDF `F`
//! and its generalized inverse `F⁻¹(u) = inf{x : F(x) >= u}`.
//!
//! Every kind also exposes a survival function and its inverse so that
//! upper-tail quantiles can be computed without cancellation in `1 - u`.

mod cantor;
mod piecewise;
mod spec;

use std::path::Path;

pub use cantor::{cantor_cdf, cantor_quantile, TERNARY_DIGITS};
pub use piecewise::PiecewiseLinearCdf;

use crate::error::{Error, Result};

/// Default bracket-width tolerance for numeric inversion.
pub const BISECTION_TOL: f64 = 1e-12;
/// Iteration cap for numeric inversion (bracketing and bisection each).
pub const BISECTION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    Uniform01,
    Exponential { rate: f64 },
    /// Density `x` on `[0,1]` and `2 - x` on `[1,2]`.
    Triangular,
    /// Uniform measure on the middle-third Cantor set.
    CantorUniform,
    Tabulated(PiecewiseLinearCdf),
    /// Linear interpolation through `(x_(i), i / (N + 1))`; see
    /// [`ContinuousDistribution::empirical_smoothed`].
    EmpiricalSmoothed {
        samples: Vec<f64>,
        table: PiecewiseLinearCdf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousDistribution {
    kind: DistributionKind,
    support_lo: f64,
    support_hi: f64,
    continuous: bool,
    spec: String,
}

impl ContinuousDistribution {
    pub fn uniform() -> Self {
        Self::closed_form(DistributionKind::Uniform01, 0.0, 1.0, "uniform".into())
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::construction(format!(
                "exponential rate must be finite and positive, got {rate}"
            )));
        }
        Ok(Self::closed_form(
            DistributionKind::Exponential { rate },
            0.0,
            f64::INFINITY,
            format!("exp:{rate}"),
        ))
    }

    pub fn triangular() -> Self {
        Self::closed_form(DistributionKind::Triangular, 0.0, 2.0, "triangular".into())
    }

    pub fn cantor() -> Self {
        Self::closed_form(DistributionKind::CantorUniform, 0.0, 1.0, "cantor".into())
    }

    fn closed_form(kind: DistributionKind, lo: f64, hi: f64, spec: String) -> Self {
        ContinuousDistribution {
            kind,
            support_lo: lo,
            support_hi: hi,
            continuous: true,
            spec,
        }
    }

    /// A tabulated CDF. Tables whose first value exceeds 0 or whose last
    /// value falls short of 1 carry atoms and are flagged non-continuous.
    pub fn tabulated(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        let table = PiecewiseLinearCdf::new(xs, fs)?;
        let spec = format!("tabulated-inline:{}", spec::inline_table(&table));
        Ok(Self::from_table(table, spec))
    }

    fn from_table(table: PiecewiseLinearCdf, spec: String) -> Self {
        ContinuousDistribution {
            support_lo: table.support_lo(),
            support_hi: table.support_hi(),
            continuous: table.is_continuous(),
            kind: DistributionKind::Tabulated(table),
            spec,
        }
    }

    /// A continuous CDF through the sample order statistics.
    ///
    /// Each distinct value `v` becomes the knot `(v, r / (N + 1))` where `r`
    /// is the mid-rank of `v` among the `N` samples. The first and last
    /// segments are extended linearly until they reach 0 and 1, which fixes
    /// the support endpoints.
    pub fn empirical_smoothed(samples: &[f64], min_count: usize) -> Result<Self> {
        let table = smoothed_table(samples, min_count.max(2))?;
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let spec = format!("empirical-inline:{}", spec::inline_list(&sorted));
        Ok(Self::from_empirical(sorted, table, spec))
    }

    fn from_empirical(samples: Vec<f64>, table: PiecewiseLinearCdf, spec: String) -> Self {
        ContinuousDistribution {
            support_lo: table.support_lo(),
            support_hi: table.support_hi(),
            continuous: true,
            kind: DistributionKind::EmpiricalSmoothed { samples, table },
            spec,
        }
    }

    /// Parses a distribution specifier: `uniform`, `exp:<rate>`,
    /// `triangular`, `cantor`, `tabulated:<path.csv>`, `empirical:<path.csv>`,
    /// or the inline forms `tabulated-inline:x:F,...` and
    /// `empirical-inline:v,...` that [`spec`](Self::spec) emits for
    /// distributions built in memory.
    pub fn from_spec(text: &str) -> Result<Self> {
        spec::parse(text)
    }

    /// Loads a two-column `x,F` CSV.
    pub fn tabulated_from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let rows = spec::read_numeric_csv(path, 2)?;
        let (xs, fs) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
        let table = PiecewiseLinearCdf::new(xs, fs)?;
        Ok(Self::from_table(table, format!("tabulated:{}", path.display())))
    }

    /// Loads a one-column CSV of samples and smooths it.
    pub fn empirical_from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let rows = spec::read_numeric_csv(path, 1)?;
        let samples: Vec<f64> = rows.into_iter().map(|r| r[0]).collect();
        let table = smoothed_table(&samples, 2)?;
        let mut sorted = samples;
        sorted.sort_by(f64::total_cmp);
        Ok(Self::from_empirical(
            sorted,
            table,
            format!("empirical:{}", path.display()),
        ))
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    /// The specifier this distribution was built from (or an inline form).
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn support(&self) -> (f64, f64) {
        (self.support_lo, self.support_hi)
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    /// Closed-form kinds invert exactly; tabulated and empirical kinds go
    /// through bisection.
    pub fn is_closed_form(&self) -> bool {
        !matches!(
            self.kind,
            DistributionKind::Tabulated(_) | DistributionKind::EmpiricalSmoothed { .. }
        )
    }

    /// `F(x)`, unchecked. NaN in gives NaN out.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.kind {
            DistributionKind::Uniform01 => x.clamp(0.0, 1.0),
            DistributionKind::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            DistributionKind::Triangular => {
                if x <= 0.0 {
                    0.0
                } else if x <= 1.0 {
                    0.5 * x * x
                } else if x < 2.0 {
                    let r = 2.0 - x;
                    1.0 - 0.5 * r * r
                } else {
                    1.0
                }
            }
            DistributionKind::CantorUniform => cantor_cdf(x),
            DistributionKind::Tabulated(t) | DistributionKind::EmpiricalSmoothed { table: t, .. } => {
                t.cdf(x)
            }
        }
    }

    /// `1 - F(x)`, accurate in the upper tail for the closed-form kinds.
    pub fn sf(&self, x: f64) -> f64 {
        match &self.kind {
            DistributionKind::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            DistributionKind::Triangular if x >= 1.0 => {
                if x >= 2.0 {
                    0.0
                } else {
                    let r = 2.0 - x;
                    0.5 * r * r
                }
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    /// `F⁻¹(u)` with `u` clamped to `[0, 1]`.
    ///
    /// `F⁻¹(0)` is the left end of the support and `F⁻¹(1)` the right end,
    /// which is `+∞` for unbounded support.
    pub fn quantile(&self, u: f64) -> f64 {
        if u.is_nan() {
            return f64::NAN;
        }
        if u <= 0.0 {
            return self.support_lo;
        }
        if u >= 1.0 {
            return self.support_hi;
        }
        match &self.kind {
            DistributionKind::Uniform01 => u,
            DistributionKind::Exponential { rate } => self.snap(-(-u).ln_1p() / rate, u),
            DistributionKind::Triangular => {
                let q = if u <= 0.5 {
                    (2.0 * u).sqrt()
                } else {
                    2.0 - (2.0 * (1.0 - u)).sqrt()
                };
                self.snap(q, u)
            }
            DistributionKind::CantorUniform => cantor_quantile(u),
            DistributionKind::Tabulated(_) | DistributionKind::EmpiricalSmoothed { .. } => {
                // bounded support with F reaching 1 at support_hi, so the
                // bracket always exists
                match bisect(self, u, BISECTION_TOL) {
                    Ok((lo, hi)) => adjacent_floats(self, lo, hi, u),
                    Err(_) => self.support_hi,
                }
            }
        }
    }

    /// Moves a closed-form quantile to the smallest float with
    /// `cdf(q) >= u`, so that `quantile(u) <= x` and `u <= cdf(x)` agree for
    /// every float pair. In the tails `cdf` can be flat over hundreds of
    /// ulps, hence the exponential search.
    fn snap(&self, q: f64, u: f64) -> f64 {
        let reaches = |k: i128| self.cdf(key_float(k)) >= u;
        let floor = float_key(self.support_lo);
        let ceiling = float_key(f64::INFINITY);
        let start = float_key(q);
        let mut step = 1i128;
        let (lo, hi) = if reaches(start) {
            let mut hi = start;
            loop {
                let cand = (hi - step).max(floor);
                if !reaches(cand) {
                    break (cand, hi);
                }
                if cand == floor {
                    return self.support_lo;
                }
                hi = cand;
                step *= 2;
            }
        } else {
            let mut lo = start;
            loop {
                let cand = (lo + step).min(ceiling);
                if reaches(cand) {
                    break (lo, cand);
                }
                lo = cand;
                step *= 2;
            }
        };
        key_float(bisect_keys(lo, hi, reaches))
    }

    /// `F⁻¹(1 - s)`, evaluated without forming `1 - s` where possible.
    pub fn isf(&self, s: f64) -> f64 {
        if s.is_nan() {
            return f64::NAN;
        }
        if s <= 0.0 {
            return self.support_hi;
        }
        if s >= 1.0 {
            return self.support_lo;
        }
        match &self.kind {
            DistributionKind::Exponential { rate } => -s.ln() / rate,
            DistributionKind::Triangular if s <= 0.5 => 2.0 - (2.0 * s).sqrt(),
            _ => self.quantile(1.0 - s),
        }
    }

    /// Checked `F(x)`: rejects non-finite `x`.
    pub fn eval_cdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain(format!("CDF argument must be finite, got {x}")));
        }
        Ok(self.cdf(x))
    }

    /// Checked `F⁻¹(u)`: rejects `u` outside `[0, 1]`.
    pub fn eval_quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("quantile level must lie in [0, 1], got {u}")));
        }
        Ok(self.quantile(u))
    }
}

/// Numeric generalized inverse: the upper end of a bracket `[lo, hi]` with
/// `F(lo) < u <= F(hi)` whose width is at most `tol`.
///
/// Unbounded support ends are bracketed by doubling outward. The result
/// never undershoots the true infimum, so `F(x) >= u` always holds.
pub fn quantile_by_bisection(dist: &ContinuousDistribution, u: f64, tol: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("bisection level must lie in (0, 1), got {u}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("bisection tolerance must be positive, got {tol}")));
    }
    Ok(bisect(dist, u, tol)?.1)
}

/// Bracket `(lo, hi)` with `F(lo) < u <= F(hi)` and `hi - lo <= tol`, or
/// `lo == hi` when the left support end already reaches `u`.
fn bisect(dist: &ContinuousDistribution, u: f64, tol: f64) -> Result<(f64, f64)> {
    let (s_lo, s_hi) = dist.support();
    let f = |x: f64| dist.cdf(x);

    let mut lo = if s_lo.is_finite() {
        if f(s_lo) >= u {
            return Ok((s_lo, s_lo));
        }
        s_lo
    } else {
        let anchor = if s_hi.is_finite() { s_hi } else { 0.0 };
        expand(anchor, -1.0, |x| f(x) < u).ok_or_else(|| {
            Error::numeric(format!("could not bracket F^-1({u}) from below near {anchor}"))
        })?
    };

    let mut hi = if s_hi.is_finite() {
        if f(s_hi) < u {
            return Err(Error::numeric(format!(
                "F({s_hi}) = {} never reaches {u} on the support",
                f(s_hi)
            )));
        }
        s_hi
    } else {
        expand(lo.max(0.0), 1.0, |x| f(x) >= u).ok_or_else(|| {
            Error::numeric(format!("could not bracket F^-1({u}) from above past {lo}"))
        })?
    };

    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Shrinks a bracket from [`bisect`] to neighbouring floats and returns the
/// smallest float `x` with `F(x) >= u`.
fn adjacent_floats(dist: &ContinuousDistribution, lo: f64, hi: f64, u: f64) -> f64 {
    let reaches = |k: i128| dist.cdf(key_float(k)) >= u;
    key_float(bisect_keys(float_key(lo), float_key(hi), reaches))
}

/// Floats as integers in `total_cmp` order; flipping the non-sign bits of
/// negatives is its own inverse.
fn float_key(x: f64) -> i128 {
    let b = x.to_bits() as i64;
    (b ^ ((((b >> 63) as u64) >> 1) as i64)) as i128
}

fn key_float(k: i128) -> f64 {
    let b = k as i64;
    f64::from_bits((b ^ ((((b >> 63) as u64) >> 1) as i64)) as u64)
}

/// Given `!reaches(lo)` and `reaches(hi)`, the smallest key that reaches.
fn bisect_keys(mut lo: i128, mut hi: i128, reaches: impl Fn(i128) -> bool) -> i128 {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn expand(anchor: f64, direction: f64, accept: impl Fn(f64) -> bool) -> Option<f64> {
    let mut width = 1.0;
    for _ in 0..BISECTION_MAX_ITER {
        let x = anchor + direction * width;
        if !x.is_finite() {
            return None;
        }
        if accept(x) {
            return Some(x);
        }
        width *= 2.0;
    }
    None
}

fn smoothed_table(samples: &[f64], min_count: usize) -> Result<PiecewiseLinearCdf> {
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::construction("samples contain a non-finite value"));
    }
    if samples.len() < min_count {
        return Err(Error::construction(format!(
            "need at least {min_count} samples, got {}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n1 = (sorted.len() + 1) as f64;

    let mut xs = Vec::new();
    let mut fs = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let end = sorted[start..].partition_point(|&v| v == sorted[start]) + start;
        // ranks start+1 ..= end, averaged
        let mid_rank = (start + 1 + end) as f64 / 2.0;
        xs.push(sorted[start]);
        fs.push(mid_rank / n1);
        start = end;
    }
    if xs.len() < 2 {
        return Err(Error::construction(
            "all samples are identical; the smoothed CDF would be a point mass",
        ));
    }

    let m = xs.len();
    let lo = xs[0] - fs[0] * (xs[1] - xs[0]) / (fs[1] - fs[0]);
    let hi = xs[m - 1] + (1.0 - fs[m - 1]) * (xs[m - 1] - xs[m - 2]) / (fs[m - 1] - fs[m - 2]);
    xs.insert(0, lo);
    fs.insert(0, 0.0);
    xs.push(hi);
    fs.push(1.0);
    PiecewiseLinearCdf::new(xs, fs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exponential_cdf_and_quantile() {
        let d = ContinuousDistribution::exponential(1.0).unwrap();
        assert_eq!(d.eval_cdf(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(d.eval_cdf(1.0).unwrap(), 0.632_120_558_828_557_7, epsilon = 1e-15);
        let u = 1.0 - (-1.0f64).exp();
        assert_abs_diff_eq!(d.eval_quantile(u).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(d.eval_quantile(0.0).unwrap(), 0.0);
        assert_eq!(d.eval_quantile(1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn triangular_midpoint() {
        let d = ContinuousDistribution::triangular();
        assert_eq!(d.cdf(1.0), 0.5);
        assert_eq!(d.quantile(0.5), 1.0);
        assert_abs_diff_eq!(d.quantile(0.875), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn quantile_at_zero_is_support_lo() {
        for d in [
            ContinuousDistribution::uniform(),
            ContinuousDistribution::exponential(2.0).unwrap(),
            ContinuousDistribution::triangular(),
            ContinuousDistribution::cantor(),
        ] {
            assert_eq!(d.quantile(0.0), d.support().0);
        }
    }

    #[test]
    fn checked_evaluators_reject_bad_input() {
        let d = ContinuousDistribution::uniform();
        assert!(matches!(d.eval_cdf(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(d.eval_cdf(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(d.eval_quantile(1.5), Err(Error::Domain(_))));
        assert!(matches!(d.eval_quantile(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn bisection_examples() {
        let e = ContinuousDistribution::exponential(1.0).unwrap();
        let x = quantile_by_bisection(&e, 0.5, 1e-12).unwrap();
        assert_abs_diff_eq!(x, std::f64::consts::LN_2, epsilon = 1e-10);
        let t = ContinuousDistribution::triangular();
        assert_abs_diff_eq!(quantile_by_bisection(&t, 0.875, 1e-12).unwrap(), 1.5, epsilon = 1e-10);
        let uni = ContinuousDistribution::uniform();
        assert_abs_diff_eq!(quantile_by_bisection(&uni, 0.25, 1e-12).unwrap(), 0.25, epsilon = 1e-11);
    }

    #[test]
    fn bisection_rejects_endpoints() {
        let uni = ContinuousDistribution::uniform();
        assert!(quantile_by_bisection(&uni, 0.0, 1e-12).is_err());
        assert!(quantile_by_bisection(&uni, 1.0, 1e-12).is_err());
        assert!(quantile_by_bisection(&uni, 0.5, 0.0).is_err());
    }

    #[test]
    fn bisection_lands_on_right_atom() {
        let d = ContinuousDistribution::tabulated(vec![0.0, 1.0], vec![0.0, 0.6]).unwrap();
        // mass 0.4 sits at x = 1
        assert_eq!(quantile_by_bisection(&d, 0.9, 1e-12).unwrap(), 1.0);
        assert!(!d.is_continuous());
    }

    #[test]
    fn empirical_examples() {
        let d = ContinuousDistribution::empirical_smoothed(&[0.0, 1.0], 2).unwrap();
        assert_abs_diff_eq!(d.cdf(0.5), 0.5, epsilon = 1e-15);
        assert_eq!(d.support(), (-1.0, 2.0));
        let d = ContinuousDistribution::empirical_smoothed(&[3.0, 1.0, 0.0, 2.0], 2).unwrap();
        assert_abs_diff_eq!(d.cdf(1.5), 0.5, epsilon = 1e-15);
        assert!(d.is_continuous());
    }

    #[test]
    fn empirical_rejects_degenerate_input() {
        assert!(ContinuousDistribution::empirical_smoothed(&[5.0], 2).is_err());
        assert!(ContinuousDistribution::empirical_smoothed(&[5.0, 5.0, 5.0], 2).is_err());
        assert!(ContinuousDistribution::empirical_smoothed(&[1.0, 2.0], 3).is_err());
        assert!(ContinuousDistribution::empirical_smoothed(&[1.0, f64::NAN], 2).is_err());
    }

    #[test]
    fn empirical_ties_use_mid_ranks() {
        let d = ContinuousDistribution::empirical_smoothed(&[0.0, 1.0, 1.0, 2.0], 2).unwrap();
        // ranks 2 and 3 share x = 1, mid-rank 2.5 over N + 1 = 5
        assert_abs_diff_eq!(d.cdf(1.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn survival_matches_complement() {
        let e = ContinuousDistribution::exponential(0.5).unwrap();
        let t = ContinuousDistribution::triangular();
        for x in [0.1, 0.9, 1.0, 1.7, 3.0] {
            assert_abs_diff_eq!(e.sf(x), 1.0 - e.cdf(x), epsilon = 1e-15);
            assert_abs_diff_eq!(t.sf(x), 1.0 - t.cdf(x), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(e.isf(0.25), e.quantile(0.75), epsilon = 1e-12);
        assert_abs_diff_eq!(t.isf(0.125), t.quantile(0.875), epsilon = 1e-15);
        assert_eq!(e.isf(0.0), f64::INFINITY);
    }

    #[test]
    fn exponential_rate_must_be_positive() {
        assert!(ContinuousDistribution::exponential(0.0).is_err());
        assert!(ContinuousDistribution::exponential(-1.0).is_err());
        assert!(ContinuousDistribution::exponential(f64::NAN).is_err());
    }
}
