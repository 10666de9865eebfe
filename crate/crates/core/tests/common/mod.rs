#![allow(dead_code)]

use ifsp::ContinuousDistribution;

/// One distribution of every kind, closed-form kinds first.
pub fn every_kind() -> Vec<ContinuousDistribution> {
    [
        "uniform",
        "exp:1",
        "exp:0.5",
        "triangular",
        "cantor",
        "tabulated-inline:-1:0,0:0.2,0.5:0.25,3:1",
        "empirical-inline:0.3,1.7,-0.4,2.2,0.9,0.31,5",
    ]
    .iter()
    .map(|s| ContinuousDistribution::from_spec(s).unwrap())
    .collect()
}

/// The distributions with built-in closed forms.
pub fn builtins() -> Vec<ContinuousDistribution> {
    every_kind().into_iter().filter(|d| d.is_closed_form()).collect()
}

/// A finite window containing the support, padded on both sides.
pub fn window(d: &ContinuousDistribution) -> (f64, f64) {
    let (lo, hi) = d.support();
    let lo = if lo.is_finite() { lo } else { d.quantile(1e-6) };
    let hi = if hi.is_finite() { hi } else { d.quantile(1.0 - 1e-12) };
    let pad = 0.1 * (hi - lo);
    (lo - pad, hi + pad)
}
