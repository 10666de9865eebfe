use crate::error::{Error, Result};

/// A CDF given by linear interpolation between knots `(x_k, F_k)`.
///
/// Knot abscissae are strictly increasing and knot values nondecreasing in
/// `[0, 1]`. Below the first knot the CDF is 0; at and beyond the last knot
/// it is 1. A first value above 0 or a last value below 1 therefore encodes
/// an atom at that end of the table.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl PiecewiseLinearCdf {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() {
            return Err(Error::construction(format!(
                "table has {} abscissae but {} values",
                xs.len(),
                fs.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::construction("table needs at least two knots"));
        }
        if xs.iter().chain(fs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::construction("table contains a non-finite entry"));
        }
        if let Some(w) = xs.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::construction(format!(
                "abscissae not strictly increasing at row {}",
                w + 1
            )));
        }
        if let Some(w) = fs.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::construction(format!(
                "CDF values decrease at row {}",
                w + 1
            )));
        }
        if fs[0] < 0.0 || fs[fs.len() - 1] > 1.0 {
            return Err(Error::construction("CDF values must lie in [0, 1]"));
        }
        Ok(PiecewiseLinearCdf { xs, fs })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    /// True when the table has no atoms at either end.
    pub fn is_continuous(&self) -> bool {
        self.fs[0] == 0.0 && self.fs[self.fs.len() - 1] == 1.0
    }

    /// `sup{x : F(x) = 0}` for tables starting at 0, else the first knot.
    pub fn support_lo(&self) -> f64 {
        let zeros = self.fs.iter().take_while(|&&f| f == 0.0).count();
        self.xs[zeros.saturating_sub(1)]
    }

    /// `inf{x : F(x) = 1}` (the last knot when the table never reaches 1).
    pub fn support_hi(&self) -> f64 {
        self.fs
            .iter()
            .position(|&f| f >= 1.0)
            .map(|k| self.xs[k])
            .unwrap_or(self.xs[self.xs.len() - 1])
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x < self.xs[0] {
            return 0.0;
        }
        if x >= self.xs[last] {
            return 1.0;
        }
        // first knot strictly greater than x; lies in 1..=last
        let k = self.xs.partition_point(|&xk| xk <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (f0, f1) = (self.fs[k - 1], self.fs[k]);
        let v = f0 + (f1 - f0) * ((x - x0) / (x1 - x0));
        v.clamp(f0, f1)
    }
}
