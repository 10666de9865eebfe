use std::sync::Arc;

use super::{Ifsp, MonotoneMap};
use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};

/// `u_i(u) = u/n + (i-1)/n`, the `i`-th base-`n` digit map of `[0, 1]`.
pub fn digit_map(n: usize, i: usize, u: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("digit maps need n >= 2, got {n}")));
    }
    if !(1..=n).contains(&i) {
        return Err(Error::domain(format!("digit index {i} outside 1..={n}")));
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("digit map argument {u} outside [0, 1]")));
    }
    let n = n as f64;
    Ok(u / n + (i as f64 - 1.0) / n)
}

/// The system `f_i = F⁻¹ ∘ u_i ∘ F`, `i = 1..n`, with equal probabilities.
/// Its measure-attractor is `dist`.
pub fn build_theorem_ifsp(dist: &ContinuousDistribution, n: usize) -> Result<Ifsp> {
    if !dist.is_continuous() {
        return Err(Error::construction(format!(
            "{} has atoms; the quantile conjugation only reproduces continuous \
             distributions because F(X) is uniform only when F is continuous",
            dist.spec()
        )));
    }
    if n < 2 {
        return Err(Error::construction(format!("need n >= 2 maps, got {n}")));
    }
    let shared = Arc::new(dist.clone());
    let maps = (1..=n)
        .map(|i| MonotoneMap::theorem(shared.clone(), n, i))
        .collect::<Result<Vec<_>>>()?;
    Ifsp::new(maps, vec![1.0 / n as f64; n], format!("theorem({}, n={n})", dist.spec()))
}

/// `{a x + b, a x + 1 - a - b}` with probabilities `1/2` each.
///
/// If `F(1 - x) = 1 - F(x)` and `F(x)/2 = F(a x + b)` on `[0, 1]`, then `F`
/// is the stationary CDF of this pair.
pub fn symmetry_affine_ifsp(a: f64, b: f64) -> Result<Ifsp> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::construction(format!("a={a}, b={b} must be finite")));
    }
    if a == 0.0 {
        return Err(Error::construction("constraint a != 0 violated"));
    }
    if !(0.0..=0.5).contains(&b) {
        return Err(Error::construction(format!("constraint 0 <= b <= 1/2 violated (b={b})")));
    }
    if !(0.0..=0.5).contains(&(a + b)) {
        return Err(Error::construction(format!(
            "constraint 0 <= a + b <= 1/2 violated (a + b = {})",
            a + b
        )));
    }
    Ifsp::new(
        vec![MonotoneMap::affine(a, b)?, MonotoneMap::affine(a, 1.0 - a - b)?],
        vec![0.5, 0.5],
        format!("symmetric-affine(a={a}, b={b})"),
    )
}

/// `{x/3, x/3 + 2/3}`: the middle-third Cantor measure.
pub fn cantor_ifsp() -> Ifsp {
    symmetry_affine_ifsp(1.0 / 3.0, 0.0).expect("constants satisfy the constraints")
}

/// The two closed-form maps for the triangular density on `[0, 2]`.
pub fn triangular_ifsp() -> Ifsp {
    Ifsp::new(
        vec![
            MonotoneMap::TriangularClosedForm { branch: 1 },
            MonotoneMap::TriangularClosedForm { branch: 2 },
        ],
        vec![0.5, 0.5],
        "triangular-closed-form",
    )
    .expect("two maps on [0, 2] with probabilities 1/2")
}

/// One formula piece of a triangular closed-form map: the `[0, 1]` piece
/// when `left` is set, the `[1, 2]` piece otherwise. Both pieces are defined
/// at `x = 1`, where they agree.
pub fn triangular_piece(branch: u8, left: bool, x: f64) -> f64 {
    match (branch, left) {
        (1, true) => x / std::f64::consts::SQRT_2,
        (1, false) => (2.0 * x - x * x / 2.0 - 1.0).max(0.0).sqrt(),
        (_, true) => 2.0 - (1.0 - x * x / 2.0).max(0.0).sqrt(),
        (_, false) => 2.0 - (2.0 - 2.0 * x + x * x / 2.0).max(0.0).sqrt(),
    }
}

/// The system of all `outer_j ∘ inner_i`, enumerated with the inner index
/// varying fastest, with product probabilities.
pub fn compose_ifsp(outer: &Ifsp, inner: &Ifsp) -> Result<Ifsp> {
    super::shared_domain([outer.domain(), inner.domain()].into_iter())
        .map_err(|e| Error::construction(format!("cannot compose: {e}")))?;
    let mut maps = Vec::with_capacity(outer.len() * inner.len());
    let mut probs = Vec::with_capacity(maps.capacity());
    for (g, pg) in outer.maps().iter().zip(outer.probs()) {
        for (f, pf) in inner.maps().iter().zip(inner.probs()) {
            maps.push(MonotoneMap::compose(g.clone(), f.clone()));
            probs.push(pg * pf);
        }
    }
    Ifsp::new(maps, probs, format!("({}) o ({})", outer.label(), inner.label()))
}

/// A single identity map with probability 1.
pub fn identity_ifsp() -> Ifsp {
    Ifsp::new(vec![MonotoneMap::Affine { a: 1.0, b: 0.0 }], vec![1.0], "identity")
        .expect("single map with probability 1")
}
