//! Forward Markov-chain trajectories `X_{k+1} = f_{I_{k+1}}(X_k)` and the
//! reversed iterates `f_{I_1} ∘ … ∘ f_{I_k}(x)`.
//!
//! Every random entry point has a forced-index twin taking the index
//! sequence explicitly, so hand-computed examples can be replayed.

mod rng;

use rayon::prelude::*;
use serde::Serialize;

pub use rng::RngStream;

use crate::error::{Error, Result};
use crate::ifs::Ifsp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeedInfo {
    pub seed: u64,
    pub stream_index: u64,
}

impl From<&RngStream> for SeedInfo {
    fn from(r: &RngStream) -> Self {
        SeedInfo {
            seed: r.seed(),
            stream_index: r.stream_index(),
        }
    }
}

/// States `x_0, …, x_k` and the 1-based map indices that produced them:
/// `states[t + 1] = f_{indices[t]}(states[t])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<f64>,
    pub indices: Vec<usize>,
    /// `None` for forced-index runs.
    pub seed: Option<SeedInfo>,
    /// How many map applications (including the start point) had to clamp
    /// an argument into the domain.
    pub clamp_events: usize,
}

/// Independent values, value `j` drawn from stream `(base_seed, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub base_seed: u64,
}

/// Index for one uniform draw by cumulative-sum inversion: the first `i`
/// with `u < p_1 + … + p_i`. Rounding leftovers go to the last index with
/// positive probability.
pub fn index_for_uniform(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k + 1;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).map_or(probs.len(), |k| k + 1)
}

/// Draws a 1-based index with the given probabilities, consuming one
/// uniform variate.
pub fn draw_index(rng: &mut RngStream, probs: &[f64]) -> usize {
    index_for_uniform(probs, rng.next_uniform())
}

/// Smallest depth `d` with `n^-d <= 2^-53`, except 64 for `n = 2`.
pub fn default_depth(n: usize) -> usize {
    if n <= 2 {
        return 64;
    }
    let mut d = 0;
    let mut scale = 1.0f64;
    while scale > f64::EPSILON / 2.0 {
        scale /= n as f64;
        d += 1;
    }
    d
}

fn start_point(ifsp: &Ifsp, x0: f64) -> Result<(f64, bool)> {
    if !x0.is_finite() {
        return Err(Error::domain(format!("start point must be finite, got {x0}")));
    }
    let (lo, hi) = ifsp.domain();
    Ok((x0.clamp(lo, hi), x0 < lo || x0 > hi))
}

fn step(ifsp: &Ifsp, index: usize, x: f64, at: usize) -> Result<(f64, bool)> {
    let applied = ifsp.apply(index, x)?;
    if !applied.value.is_finite() {
        return Err(Error::integrity(format!(
            "map {index} sent {x} to {} at step {at}",
            applied.value
        )));
    }
    Ok((applied.value, applied.clamped))
}

/// Runs `steps` forward steps from `x0`.
pub fn simulate_forward(ifsp: &Ifsp, x0: f64, steps: usize, rng: &mut RngStream) -> Result<Trajectory> {
    let indices: Vec<usize> = (0..steps).map(|_| draw_index(rng, ifsp.probs())).collect();
    let mut traj = simulate_forward_with_indices(ifsp, x0, &indices)?;
    traj.seed = Some(SeedInfo::from(&*rng));
    Ok(traj)
}

/// Forward run along a given index sequence.
pub fn simulate_forward_with_indices(ifsp: &Ifsp, x0: f64, indices: &[usize]) -> Result<Trajectory> {
    let (mut x, clamped) = start_point(ifsp, x0)?;
    let mut clamp_events = clamped as usize;
    let mut states = Vec::with_capacity(indices.len() + 1);
    states.push(x);
    for (t, &i) in indices.iter().enumerate() {
        let (next, clamped) = step(ifsp, i, x, t + 1)?;
        clamp_events += clamped as usize;
        x = next;
        states.push(x);
    }
    Ok(Trajectory {
        states,
        indices: indices.to_vec(),
        seed: None,
        clamp_events,
    })
}

/// A reversed iterate together with the indices `I_1, …, I_depth` drawn
/// for it.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardDraw {
    pub value: f64,
    pub indices: Vec<usize>,
}

/// Draws `I_1, …, I_depth` and returns `f_{I_1} ∘ … ∘ f_{I_depth}(x0)`.
pub fn backward_iterate(ifsp: &Ifsp, x0: f64, depth: usize, rng: &mut RngStream) -> Result<f64> {
    backward_iterate_traced(ifsp, x0, depth, rng).map(|d| d.value)
}

pub fn backward_iterate_traced(
    ifsp: &Ifsp,
    x0: f64,
    depth: usize,
    rng: &mut RngStream,
) -> Result<BackwardDraw> {
    if depth == 0 {
        return Err(Error::domain("backward depth must be at least 1"));
    }
    let indices: Vec<usize> = (0..depth).map(|_| draw_index(rng, ifsp.probs())).collect();
    let value = backward_iterate_with_indices(ifsp, x0, &indices)?;
    Ok(BackwardDraw { value, indices })
}

/// `f_{I_1} ∘ … ∘ f_{I_k}(x0)` for `indices = [I_1, …, I_k]`: the last
/// index is applied first.
pub fn backward_iterate_with_indices(ifsp: &Ifsp, x0: f64, indices: &[usize]) -> Result<f64> {
    let (mut x, _) = start_point(ifsp, x0)?;
    for (t, &i) in indices.iter().rev().enumerate() {
        x = step(ifsp, i, x, t + 1)?.0;
    }
    Ok(x)
}

/// `|Ẑ_depth(xa) - Ẑ_depth(xb)|` for one shared index draw.
pub fn backward_gap(ifsp: &Ifsp, xa: f64, xb: f64, depth: usize, rng: &mut RngStream) -> Result<f64> {
    if depth == 0 {
        return Err(Error::domain("backward depth must be at least 1"));
    }
    let indices: Vec<usize> = (0..depth).map(|_| draw_index(rng, ifsp.probs())).collect();
    let a = backward_iterate_with_indices(ifsp, xa, &indices)?;
    let b = backward_iterate_with_indices(ifsp, xb, &indices)?;
    Ok((a - b).abs())
}

/// `count` independent reversed iterates; sample `j` uses stream
/// `(base_seed, j)`. Computed in parallel, returned in stream order.
pub fn backward_sample_batch(
    ifsp: &Ifsp,
    x0: f64,
    depth: usize,
    count: usize,
    base_seed: u64,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::domain("batch count must be at least 1"));
    }
    let values = (0..count as u64)
        .into_par_iter()
        .map(|j| backward_iterate(ifsp, x0, depth, &mut RngStream::new(base_seed, j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch { values, base_seed })
}

/// `count` independent forward endpoints `X_steps`, one stream per sample.
pub fn forward_endpoint_batch(
    ifsp: &Ifsp,
    x0: f64,
    steps: usize,
    count: usize,
    base_seed: u64,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::domain("batch count must be at least 1"));
    }
    let values = (0..count as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = RngStream::new(base_seed, j);
            let (mut x, _) = start_point(ifsp, x0)?;
            for t in 0..steps {
                let i = draw_index(&mut rng, ifsp.probs());
                x = step(ifsp, i, x, t + 1)?.0;
            }
            Ok(x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleBatch { values, base_seed })
}

/// `Σ_k (I_k - 1) n^-k`: the point of `[0, 1]` whose base-`n` digits are
/// `I_k - 1`.
pub fn digits_to_uniform(indices: &[usize], n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {n}")));
    }
    if indices.is_empty() {
        return Err(Error::domain("digit sequence is empty"));
    }
    let n_f = n as f64;
    indices.iter().rev().try_fold(0.0, |acc, &i| {
        if !(1..=n).contains(&i) {
            return Err(Error::domain(format!("digit index {i} outside 1..={n}")));
        }
        Ok((acc + (i - 1) as f64) / n_f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ContinuousDistribution;
    use crate::ifs::{build_theorem_ifsp, cantor_ifsp};
    use approx::assert_abs_diff_eq;

    fn uniform2() -> Ifsp {
        build_theorem_ifsp(&ContinuousDistribution::uniform(), 2).unwrap()
    }

    #[test]
    fn draw_index_examples() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            assert_eq!(draw_index(&mut rng, &[1.0]), 1);
        }
        assert_eq!(index_for_uniform(&[0.5, 0.5], 0.73), 2);
        assert_eq!(index_for_uniform(&[0.5, 0.5], 0.5), 2);
        assert_eq!(index_for_uniform(&[0.5, 0.5], 0.0), 1);
        // cumulative sum short of 1 by rounding
        assert_eq!(index_for_uniform(&[0.1; 10], 0.999_999_999_999_999_9), 10);
        assert_eq!(index_for_uniform(&[0.5, 0.5, 0.0], 1.0), 2);
    }

    #[test]
    fn draw_index_frequencies() {
        // 4 sigma of Binomial(10^6, 1/4) is 0.0017 in frequency
        let mut rng = RngStream::new(7, 3);
        let mut counts = [0usize; 4];
        let draws = 1_000_000;
        for _ in 0..draws {
            counts[draw_index(&mut rng, &[0.25; 4]) - 1] += 1;
        }
        for c in counts {
            assert!((c as f64 / draws as f64 - 0.25).abs() <= 0.002, "{counts:?}");
        }
    }

    #[test]
    fn forward_examples() {
        let sys = cantor_ifsp();
        let t = simulate_forward(&sys, 0.3, 0, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(t.states, vec![0.3]);
        assert!(t.indices.is_empty());

        let t = simulate_forward_with_indices(&sys, 0.0, &[2, 1]).unwrap();
        assert_abs_diff_eq!(t.states[1], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.states[2], 2.0 / 9.0, epsilon = 1e-15);

        let t = simulate_forward_with_indices(&uniform2(), 0.0, &[2; 30]).unwrap();
        assert!(t.states.windows(2).all(|w| w[1] > w[0]));
        assert_abs_diff_eq!(*t.states.last().unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn forward_replays_from_seed() {
        let sys = uniform2();
        let a = simulate_forward(&sys, 0.1, 500, &mut RngStream::new(5, 1)).unwrap();
        let b = simulate_forward(&sys, 0.1, 500, &mut RngStream::new(5, 1)).unwrap();
        assert_eq!(a, b);
        let replay = simulate_forward_with_indices(&sys, 0.1, &a.indices).unwrap();
        for (x, y) in a.states.iter().zip(&replay.states) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(a.seed, Some(SeedInfo { seed: 5, stream_index: 1 }));
    }

    #[test]
    fn start_point_is_clamped_and_flagged() {
        let sys = uniform2();
        let t = simulate_forward_with_indices(&sys, 4.0, &[1]).unwrap();
        assert_eq!(t.states[0], 1.0);
        assert_eq!(t.clamp_events, 1);
        assert!(simulate_forward_with_indices(&sys, f64::NAN, &[1]).is_err());
    }

    #[test]
    fn backward_examples() {
        let sys = uniform2();
        let v = backward_iterate_with_indices(&sys, 0.0, &[2, 1, 2]).unwrap();
        assert_abs_diff_eq!(v, 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(digits_to_uniform(&[2, 1, 2], 2).unwrap(), 0.625, epsilon = 1e-15);

        let mut a = RngStream::new(11, 0);
        let mut b = RngStream::new(11, 0);
        let back = backward_iterate(&sys, 0.3, 1, &mut a).unwrap();
        let fwd = simulate_forward(&sys, 0.3, 1, &mut b).unwrap();
        assert_eq!(back, fwd.states[1]);

        assert!(backward_iterate(&sys, 0.0, 0, &mut a).is_err());
    }

    #[test]
    fn backward_forgets_start_for_contractions() {
        let sys = cantor_ifsp();
        let gap = backward_gap(&sys, 0.0, 1.0, 64, &mut RngStream::new(3, 0)).unwrap();
        assert!(gap <= (1.0f64 / 3.0).powi(64) + 1e-16);
        assert_eq!(backward_gap(&sys, 0.4, 0.4, 10, &mut RngStream::new(3, 0)).unwrap(), 0.0);
        let one = backward_gap(&sys, 0.0, 1.0, 1, &mut RngStream::new(3, 0)).unwrap();
        assert_abs_diff_eq!(one, 1.0 / 3.0, epsilon = 1e-16);
    }

    #[test]
    fn exponential_backward_gap_is_tiny() {
        let sys = build_theorem_ifsp(&ContinuousDistribution::exponential(1.0).unwrap(), 2).unwrap();
        for s in 0..20 {
            let g = backward_gap(&sys, 0.0, 10.0, 64, &mut RngStream::new(s, 0)).unwrap();
            assert!(g <= 1e-9, "seed {s}: {g}");
        }
    }

    #[test]
    fn digits_examples() {
        // digits are I_k - 1, so (4, 2) reads 0.31 and (5, 3) reads 0.42
        assert_abs_diff_eq!(digits_to_uniform(&[4, 2], 10).unwrap(), 0.31, epsilon = 1e-16);
        assert_abs_diff_eq!(digits_to_uniform(&[5, 3], 10).unwrap(), 0.42, epsilon = 1e-16);
        let v = digits_to_uniform(&[3; 40], 3).unwrap();
        assert_abs_diff_eq!(v, 1.0 - 3f64.powi(-40), epsilon = 1e-15);
        assert!(digits_to_uniform(&[], 2).is_err());
        assert!(digits_to_uniform(&[3], 2).is_err());
        assert!(digits_to_uniform(&[0], 2).is_err());
    }

    #[test]
    fn batch_of_one_is_backward_iterate() {
        let sys = uniform2();
        let batch = backward_sample_batch(&sys, 0.0, 20, 1, 77).unwrap();
        let single = backward_iterate(&sys, 0.0, 20, &mut RngStream::new(77, 0)).unwrap();
        assert_eq!(batch.values, vec![single]);
        assert!(backward_sample_batch(&sys, 0.0, 20, 0, 77).is_err());
    }

    #[test]
    fn batches_are_order_stable() {
        let sys = uniform2();
        let a = backward_sample_batch(&sys, 0.0, 30, 1000, 9).unwrap();
        let b = backward_sample_batch(&sys, 0.0, 30, 1000, 9).unwrap();
        assert_eq!(a, b);
        for j in [0usize, 17, 999] {
            let v = backward_iterate(&sys, 0.0, 30, &mut RngStream::new(9, j as u64)).unwrap();
            assert_eq!(a.values[j], v);
        }
    }

    #[test]
    fn default_depths() {
        assert_eq!(default_depth(2), 64);
        assert_eq!(default_depth(3), 34);
        assert_eq!(default_depth(4), 27);
        assert!(10f64.powi(-(default_depth(10) as i32)) <= 2f64.powi(-53));
        assert!(10f64.powi(-(default_depth(10) as i32 - 1)) > 2f64.powi(-53));
    }
}
