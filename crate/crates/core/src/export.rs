//! CSV writers for trajectories, sample batches, histograms and CDF tables.
//!
//! Every file opens with `# key: value` comment lines echoing the run
//! configuration, followed by a single header row. Floats are written in
//! shortest round-trip form.

use std::io::Write;

use crate::chain::{SampleBatch, Trajectory};
use crate::error::Result;
use crate::stats::Histogram;

/// Ordered `key: value` pairs written as the comment block of a CSV file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEcho {
    entries: Vec<(String, String)>,
}

impl ConfigEcho {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        for (k, v) in &self.entries {
            // keep each entry on one line
            let v = v.replace(['\n', '\r'], " ");
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

fn csv_body<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

/// `step,index,state`; step 0 is the starting point and has an empty index.
pub fn write_trajectory_csv<W: Write>(mut w: W, echo: &ConfigEcho, traj: &Trajectory) -> Result<()> {
    echo.write_to(&mut w)?;
    let mut out = csv_body(w);
    out.write_record(["step", "index", "state"])?;
    for (k, state) in traj.states.iter().enumerate() {
        let index = if k == 0 { String::new() } else { traj.indices[k - 1].to_string() };
        out.write_record([k.to_string(), index, state.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// `stream_index,value`.
pub fn write_batch_csv<W: Write>(mut w: W, echo: &ConfigEcho, batch: &SampleBatch) -> Result<()> {
    echo.write_to(&mut w)?;
    let mut out = csv_body(w);
    out.write_record(["stream_index", "value"])?;
    for (j, v) in batch.values.iter().enumerate() {
        out.write_record([j.to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// `bin_lo,bin_hi,count,frequency`.
pub fn write_histogram_csv<W: Write>(mut w: W, echo: &ConfigEcho, hist: &Histogram) -> Result<()> {
    echo.write_to(&mut w)?;
    let mut out = csv_body(w);
    out.write_record(["bin_lo", "bin_hi", "count", "frequency"])?;
    for k in 0..hist.bins() {
        out.write_record([
            hist.edge(k).to_string(),
            hist.edge(k + 1).to_string(),
            hist.counts[k].to_string(),
            hist.frequencies[k].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `x,F`.
pub fn write_cdf_csv<W: Write>(mut w: W, echo: &ConfigEcho, points: &[(f64, f64)]) -> Result<()> {
    echo.write_to(&mut w)?;
    let mut out = csv_body(w);
    out.write_record(["x", "F"])?;
    for (x, f) in points {
        out.write_record([x.to_string(), f.to_string()])?;
    }
    out.flush()?;
    Ok(())
}
