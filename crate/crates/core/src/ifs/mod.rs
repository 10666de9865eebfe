//! Monotone maps on the real line and finite systems of them with
//! selection probabilities.

mod builders;
mod invariance;
mod serial;

use std::sync::Arc;

pub use builders::{
    build_theorem_ifsp, cantor_ifsp, compose_ifsp, digit_map, identity_ifsp,
    symmetry_affine_ifsp, triangular_ifsp, triangular_piece,
};
pub use invariance::{
    invariance_residual, preimage_mass, preimage_mass_by_bisection, InvarianceReport,
};

use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};

/// Probabilities must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum MonotoneMap {
    /// `F⁻¹ ∘ u_i ∘ F` for the distribution `dist`, with `1 <= i <= n`.
    Theorem {
        dist: Arc<ContinuousDistribution>,
        n: usize,
        i: usize,
        /// `[F⁻¹((i - 1)/n), F⁻¹(i/n)]`, which holds the range of the map.
        strip: (f64, f64),
    },
    /// `a x + b`.
    Affine { a: f64, b: f64 },
    /// The closed-form maps of the triangular density on `[0, 2]`;
    /// `branch` is 1 or 2.
    TriangularClosedForm { branch: u8 },
    /// `outer ∘ inner`.
    Composed {
        outer: Box<MonotoneMap>,
        inner: Box<MonotoneMap>,
    },
}

/// The result of one map application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Applied {
    pub value: f64,
    /// The input (or an intermediate value) lay outside a map's domain and
    /// was moved onto its boundary.
    pub clamped: bool,
}

impl MonotoneMap {
    pub fn theorem(dist: Arc<ContinuousDistribution>, n: usize, i: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("theorem maps need n >= 2, got {n}")));
        }
        if !(1..=n).contains(&i) {
            return Err(Error::domain(format!("map index {i} outside 1..={n}")));
        }
        let strip = (
            dist.quantile((i - 1) as f64 / n as f64),
            dist.quantile(i as f64 / n as f64),
        );
        Ok(MonotoneMap::Theorem { dist, n, i, strip })
    }

    pub fn affine(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a == 0.0 {
            return Err(Error::domain(format!(
                "affine map needs finite a != 0 and finite b, got a={a}, b={b}"
            )));
        }
        Ok(MonotoneMap::Affine { a, b })
    }

    pub fn triangular(branch: u8) -> Result<Self> {
        if branch != 1 && branch != 2 {
            return Err(Error::domain(format!("triangular branch must be 1 or 2, got {branch}")));
        }
        Ok(MonotoneMap::TriangularClosedForm { branch })
    }

    pub fn compose(outer: MonotoneMap, inner: MonotoneMap) -> Self {
        MonotoneMap::Composed {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    /// The closed interval inputs are clamped to. `(-inf, inf)` means
    /// unconstrained.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            MonotoneMap::Theorem { dist, .. } => dist.support(),
            MonotoneMap::Affine { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            MonotoneMap::TriangularClosedForm { .. } => (0.0, 2.0),
            MonotoneMap::Composed { inner, .. } => inner.domain(),
        }
    }

    /// True for nondecreasing maps, false for nonincreasing ones.
    pub fn is_increasing(&self) -> bool {
        match self {
            MonotoneMap::Affine { a, .. } => *a > 0.0,
            MonotoneMap::Composed { outer, inner } => outer.is_increasing() == inner.is_increasing(),
            _ => true,
        }
    }

    /// `apply_map`: evaluates the map at a finite `x`, clamping `x` into the
    /// domain first.
    pub fn apply(&self, x: f64) -> Result<Applied> {
        if !x.is_finite() {
            return Err(Error::domain(format!("map argument must be finite, got {x}")));
        }
        Ok(self.eval(x))
    }

    /// Like [`apply`](Self::apply) but accepts `±inf`, which the quantile
    /// space parametrisation needs at `F⁻¹(1)` for unbounded support.
    pub(crate) fn eval(&self, x: f64) -> Applied {
        match self {
            MonotoneMap::Composed { outer, inner } => {
                let first = inner.eval(x);
                let second = outer.eval(first.value);
                Applied {
                    value: second.value,
                    clamped: first.clamped || second.clamped,
                }
            }
            _ => {
                let (lo, hi) = self.domain();
                let clamped = x < lo || x > hi;
                let x = x.clamp(lo, hi);
                let value = match self {
                    MonotoneMap::Theorem { dist, n, i, strip } => {
                        // rounding in the level can step one ulp past the strip
                        theorem_value(dist, *n, *i, x).clamp(strip.0, strip.1)
                    }
                    MonotoneMap::Affine { a, b } => a * x + b,
                    MonotoneMap::TriangularClosedForm { branch } => {
                        triangular_piece(*branch, x <= 1.0, x)
                    }
                    MonotoneMap::Composed { .. } => unreachable!(),
                };
                Applied { value, clamped }
            }
        }
    }
}

/// `F⁻¹((F(x) + i - 1) / n)`, switching to the survival function and its
/// inverse when the level is in the upper half so tail states keep their
/// precision.
fn theorem_value(dist: &ContinuousDistribution, n: usize, i: usize, x: f64) -> f64 {
    let (n_f, i_f) = (n as f64, i as f64);
    let u = dist.cdf(x);
    let (level, complement) = if u <= 0.5 {
        ((u + (i_f - 1.0)) / n_f, (n_f - i_f + (1.0 - u)) / n_f)
    } else {
        let s = dist.sf(x);
        ((i_f - s) / n_f, (n_f - i_f + s) / n_f)
    };
    if level <= 0.5 {
        dist.quantile(level)
    } else {
        dist.isf(complement)
    }
}

/// An iterated function system with probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Ifsp {
    maps: Vec<MonotoneMap>,
    probs: Vec<f64>,
    label: String,
}

impl Ifsp {
    pub fn new(maps: Vec<MonotoneMap>, probs: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::construction("an IFSp needs at least one map"));
        }
        if maps.len() != probs.len() {
            return Err(Error::construction(format!(
                "{} maps but {} probabilities",
                maps.len(),
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::construction(format!("probability {p} is not a finite non-negative number")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::construction(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        shared_domain(maps.iter().map(MonotoneMap::domain))?;
        Ok(Ifsp {
            maps,
            probs,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[MonotoneMap] {
        &self.maps
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The common domain of the maps.
    pub fn domain(&self) -> (f64, f64) {
        shared_domain(self.maps.iter().map(MonotoneMap::domain)).expect("validated at construction")
    }

    /// Applies map `index` (1-based).
    pub fn apply(&self, index: usize, x: f64) -> Result<Applied> {
        self.map(index)?.apply(x)
    }

    pub fn map(&self, index: usize) -> Result<&MonotoneMap> {
        index
            .checked_sub(1)
            .and_then(|k| self.maps.get(k))
            .ok_or_else(|| Error::domain(format!("map index {index} outside 1..={}", self.len())))
    }
}

fn unconstrained(d: (f64, f64)) -> bool {
    d.0 == f64::NEG_INFINITY && d.1 == f64::INFINITY
}

/// Domains must agree, except that unconstrained ones are compatible with
/// anything.
fn shared_domain(domains: impl Iterator<Item = (f64, f64)>) -> Result<(f64, f64)> {
    let mut shared = (f64::NEG_INFINITY, f64::INFINITY);
    for d in domains {
        if unconstrained(d) {
            continue;
        }
        if unconstrained(shared) {
            shared = d;
        } else if shared != d {
            return Err(Error::construction(format!(
                "maps disagree on their domain: [{}, {}] vs [{}, {}]",
                shared.0, shared.1, d.0, d.1
            )));
        }
    }
    Ok(shared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn affine_examples() {
        let f = MonotoneMap::affine(1.0 / 3.0, 0.0).unwrap();
        assert_abs_diff_eq!(f.apply(0.9).unwrap().value, 0.3, epsilon = 1e-15);
        assert!(MonotoneMap::affine(0.0, 1.0).is_err());
    }

    #[test]
    fn composed_applies_inner_first() {
        let g = MonotoneMap::compose(
            MonotoneMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
            MonotoneMap::affine(1.0 / 3.0, 0.0).unwrap(),
        );
        assert_abs_diff_eq!(g.apply(0.0).unwrap().value, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.apply(1.0).unwrap().value, 7.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn out_of_domain_inputs_are_clamped_and_flagged() {
        let f = MonotoneMap::triangular(1).unwrap();
        let r = f.apply(3.0).unwrap();
        assert!(r.clamped);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-15);
        assert!(!f.apply(1.5).unwrap().clamped);
        assert!(f.apply(f64::NAN).is_err());
        assert!(f.apply(f64::INFINITY).is_err());
    }

    #[test]
    fn theorem_map_tail_stays_finite() {
        let d = Arc::new(ContinuousDistribution::exponential(1.0).unwrap());
        let top = MonotoneMap::theorem(d, 2, 2).unwrap();
        // f_2(x) = x + ln 2 for the unit exponential
        for x in [1.0, 40.0, 500.0] {
            let v = top.apply(x).unwrap().value;
            assert_abs_diff_eq!(v, x + std::f64::consts::LN_2, epsilon = 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn theorem_map_rejects_bad_indices() {
        let d = Arc::new(ContinuousDistribution::uniform());
        assert!(MonotoneMap::theorem(d.clone(), 1, 1).is_err());
        assert!(MonotoneMap::theorem(d.clone(), 3, 0).is_err());
        assert!(MonotoneMap::theorem(d, 3, 4).is_err());
    }

    #[test]
    fn ifsp_validation() {
        let f = MonotoneMap::affine(0.5, 0.0).unwrap();
        assert!(Ifsp::new(vec![], vec![], "empty").is_err());
        assert!(Ifsp::new(vec![f.clone()], vec![0.5, 0.5], "mismatch").is_err());
        assert!(Ifsp::new(vec![f.clone(), f.clone()], vec![0.7, 0.7], "sum").is_err());
        assert!(Ifsp::new(vec![f.clone(), f.clone()], vec![1.5, -0.5], "neg").is_err());
        let tri = MonotoneMap::triangular(1).unwrap();
        let uni = MonotoneMap::theorem(Arc::new(ContinuousDistribution::uniform()), 2, 1).unwrap();
        assert!(Ifsp::new(vec![tri.clone(), uni], vec![0.5, 0.5], "domains").is_err());
        let ok = Ifsp::new(vec![tri, f], vec![0.5, 0.5], "mixed").unwrap();
        assert_eq!(ok.domain(), (0.0, 2.0));
        assert!(ok.apply(3, 0.0).is_err());
        assert!(ok.apply(0, 0.0).is_err());
    }

    #[test]
    fn decreasing_affine_is_tracked() {
        let f = MonotoneMap::affine(-0.5, 1.0).unwrap();
        assert!(!f.is_increasing());
        let g = MonotoneMap::compose(f.clone(), f);
        assert!(g.is_increasing());
    }
}
