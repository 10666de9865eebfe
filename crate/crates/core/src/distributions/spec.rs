use std::path::Path;

use super::{ContinuousDistribution, PiecewiseLinearCdf};
use crate::error::{Error, Result};

pub(super) fn parse(text: &str) -> Result<ContinuousDistribution> {
    let text = text.trim();
    let (head, arg) = match text.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (text, None),
    };
    match (head, arg) {
        ("uniform", None) => Ok(ContinuousDistribution::uniform()),
        ("triangular", None) => Ok(ContinuousDistribution::triangular()),
        ("cantor", None) => Ok(ContinuousDistribution::cantor()),
        ("exp", Some(rate)) => {
            let rate = parse_f64(rate)?;
            ContinuousDistribution::exponential(rate)
        }
        ("tabulated", Some(path)) => ContinuousDistribution::tabulated_from_csv(path),
        ("empirical", Some(path)) => ContinuousDistribution::empirical_from_csv(path),
        ("tabulated-inline", Some(body)) => {
            let mut xs = Vec::new();
            let mut fs = Vec::new();
            for pair in body.split(',') {
                let (x, f) = pair
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected x:F pair, got {pair:?}")))?;
                xs.push(parse_f64(x)?);
                fs.push(parse_f64(f)?);
            }
            ContinuousDistribution::tabulated(xs, fs)
        }
        ("empirical-inline", Some(body)) => {
            let samples = body.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
            ContinuousDistribution::empirical_smoothed(&samples, 2)
        }
        _ => Err(Error::Parse(format!(
            "unknown distribution specifier {text:?} (expected uniform, exp:<rate>, \
             triangular, cantor, tabulated:<csv> or empirical:<csv>)"
        ))),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("{s:?} is not a number: {e}")))
}

// `{}` on f64 prints the shortest string that parses back to the same bits.
pub(super) fn inline_table(t: &PiecewiseLinearCdf) -> String {
    t.xs()
        .iter()
        .zip(t.fs())
        .map(|(x, f)| format!("{x}:{f}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub(super) fn inline_list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Reads rows of `columns` numbers, skipping `#` comments and a single
/// non-numeric header row.
pub(super) fn read_numeric_csv(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() < columns {
            return Err(Error::Parse(format!(
                "{}: row {} has {} columns, expected {columns}",
                path.display(),
                line + 1,
                record.len()
            )));
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().take(columns).map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if line == 0 => continue,
            Err(e) => {
                return Err(Error::Parse(format!(
                    "{}: row {}: {e}",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_builtins() {
        assert_eq!(parse("uniform").unwrap(), ContinuousDistribution::uniform());
        assert_eq!(parse("cantor").unwrap().spec(), "cantor");
        assert_eq!(parse("exp:0.5").unwrap().spec(), "exp:0.5");
        assert_eq!(parse("exp:1").unwrap().spec(), "exp:1");
        assert!(parse("exp:zero").is_err());
        assert!(parse("exp:-2").is_err());
        assert!(parse("gamma:2").is_err());
        assert!(parse("uniform:3").is_err());
    }

    #[test]
    fn inline_forms_round_trip() {
        let d = ContinuousDistribution::tabulated(vec![0.0, 0.1, 2.0], vec![0.0, 1.0 / 3.0, 1.0])
            .unwrap();
        let back = parse(d.spec()).unwrap();
        assert_eq!(back, d);

        let e = ContinuousDistribution::empirical_smoothed(&[0.3, 0.7, 1e-7], 2).unwrap();
        assert_eq!(parse(e.spec()).unwrap(), e);
    }

    #[test]
    fn reads_csv_files() {
        let dir = tempfile::tempdir().unwrap();
        let tab = dir.path().join("tab.csv");
        let mut f = std::fs::File::create(&tab).unwrap();
        writeln!(f, "# comment\nx,F\n0,0\n1,0.25\n2,1").unwrap();
        let d = parse(&format!("tabulated:{}", tab.display())).unwrap();
        assert_eq!(d.cdf(1.0), 0.25);
        assert_eq!(d.support(), (0.0, 2.0));

        let emp = dir.path().join("emp.csv");
        std::fs::write(&emp, "value\n0\n1\n2\n3\n").unwrap();
        let d = parse(&format!("empirical:{}", emp.display())).unwrap();
        assert_eq!(d.cdf(1.5), 0.5);

        std::fs::write(&emp, "1\nfoo\n").unwrap();
        assert!(parse(&format!("empirical:{}", emp.display())).is_err());
        assert!(parse("tabulated:/nonexistent/file.csv").is_err());
    }
}
