use serde::Serialize;

use super::{Ifsp, MonotoneMap};
use crate::distributions::{ContinuousDistribution, BISECTION_MAX_ITER, BISECTION_TOL};
use crate::error::{Error, Result};

/// Pointwise residuals of `F(y) = Σ p_i μ(f_i⁻¹((-inf, y]))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Evaluates the invariance equation on half-lines `(-inf, y]` for every
/// `y` in `grid`.
pub fn invariance_residual(
    ifsp: &Ifsp,
    dist: &ContinuousDistribution,
    grid: &[f64],
) -> Result<InvarianceReport> {
    let mut residuals = Vec::with_capacity(grid.len());
    for &y in grid {
        if !y.is_finite() {
            return Err(Error::domain(format!("grid point {y} is not finite")));
        }
        let mut pushed = 0.0;
        for (map, p) in ifsp.maps().iter().zip(ifsp.probs()) {
            pushed += p * preimage_mass(map, dist, y)?;
        }
        residuals.push((dist.cdf(y) - pushed).abs());
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(InvarianceReport {
        grid: grid.to_vec(),
        residuals,
        max_residual,
    })
}

/// `μ({x : f(x) <= y})`.
///
/// Theorem maps built over `dist` itself use the quantile-space identity
/// `clamp(n F(y) - (i - 1), 0, 1)`; every other map goes through
/// [`preimage_mass_by_bisection`].
pub fn preimage_mass(map: &MonotoneMap, dist: &ContinuousDistribution, y: f64) -> Result<f64> {
    match map {
        MonotoneMap::Theorem { dist: own, n, i, .. } if **own == *dist => {
            Ok((*n as f64 * dist.cdf(y) - (*i as f64 - 1.0)).clamp(0.0, 1.0))
        }
        _ => preimage_mass_by_bisection(map, dist, y),
    }
}

/// `μ({x : f(x) <= y})` by bisection over quantile levels.
///
/// The support is parametrised as `x = F⁻¹(t)`, `t ∈ [0, 1]`, which turns
/// the preimage of a half-line under a monotone `f` into an interval of
/// levels whose length is the wanted mass. Each bisection step checks that
/// `f ∘ F⁻¹` is still monotone on the current bracket.
pub fn preimage_mass_by_bisection(
    map: &MonotoneMap,
    dist: &ContinuousDistribution,
    y: f64,
) -> Result<f64> {
    let increasing = map.is_increasing();
    let g = |t: f64| map.eval(dist.quantile(t)).value;
    // orient so that `g` is nondecreasing in the bisection variable
    let h = |t: f64| if increasing { g(t) } else { g(1.0 - t) };

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (mut h_lo, mut h_hi) = (h(lo), h(hi));
    if h_lo.is_nan() || h_hi.is_nan() {
        return Err(Error::integrity("map produced NaN on the support"));
    }
    if h_lo > h_hi {
        return Err(Error::integrity(format!(
            "map is not monotone on the support: endpoint values {h_lo} and {h_hi}"
        )));
    }
    let level = if h_lo > y {
        0.0
    } else if h_hi <= y {
        1.0
    } else {
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= BISECTION_TOL {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let h_mid = h(mid);
            if !(h_lo <= h_mid && h_mid <= h_hi) {
                return Err(Error::integrity(format!(
                    "map is not monotone: value {h_mid} at level {mid} outside [{h_lo}, {h_hi}]"
                )));
            }
            if h_mid <= y {
                lo = mid;
                h_lo = h_mid;
            } else {
                hi = mid;
                h_hi = h_mid;
            }
        }
        0.5 * (lo + hi)
    };
    // for a decreasing map the levels {t : h(t) <= y} = [0, t*] correspond
    // to [1 - t*, 1] in the original parametrisation: same length
    Ok(level)
}
