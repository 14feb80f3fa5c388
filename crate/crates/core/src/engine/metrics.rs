//! Recorded time series and the statistics derived from them.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Occupancy counts and cooperation fraction at each sample time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunMetrics {
    pub sample_times: Vec<f64>,
    pub state_counts: Vec<Vec<usize>>,
    pub coop_fraction: Vec<f64>,
}

impl RunMetrics {
    pub fn len(&self) -> usize {
        self.sample_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample_times.is_empty()
    }

    pub fn state_count(&self) -> usize {
        self.state_counts.first().map_or(0, Vec::len)
    }

    pub fn push(&mut self, t: f64, counts: Vec<usize>, coop_fraction: f64) {
        self.sample_times.push(t);
        self.state_counts.push(counts);
        self.coop_fraction.push(coop_fraction);
    }

    /// Header `t,n_G0,...,n_Gn,f_c`.
    pub fn csv_header(state_count: usize) -> Vec<String> {
        let mut header = vec!["t".to_string()];
        header.extend((0..state_count).map(|i| format!("n_G{i}")));
        header.push("f_c".into());
        header
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(Self::csv_header(self.state_count()))?;
        for i in 0..self.len() {
            let mut row = vec![self.sample_times[i].to_string()];
            row.extend(self.state_counts[i].iter().map(ToString::to_string));
            row.push(self.coop_fraction[i].to_string());
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.clone();
        let states = header.len().checked_sub(2).filter(|&s| s > 0).ok_or_else(|| {
            Error::validation(path.display().to_string(), "timeseries needs t, n_G*, f_c columns")
        })?;
        if header != Self::csv_header(states) {
            return Err(Error::validation(path.display().to_string(), "unexpected timeseries header"));
        }
        let bad = |what: &str| Error::validation(path.display().to_string(), format!("malformed {what}"));
        let mut metrics = RunMetrics::default();
        for record in r.records() {
            let record = record?;
            let t: f64 = record[0].parse().map_err(|_| bad("time"))?;
            let counts = (1..=states)
                .map(|i| record[i].parse().map_err(|_| bad("count")))
                .collect::<Result<Vec<usize>>>()?;
            let fc: f64 = record[states + 1].parse().map_err(|_| bad("f_c"))?;
            metrics.push(t, counts, fc);
        }
        Ok(metrics)
    }
}

/// Mean cooperation fraction over the last `tail` samples.
pub fn cooperation_frequency(metrics: &RunMetrics, tail: usize) -> Result<f64> {
    let available = metrics.len();
    if tail == 0 || tail > available {
        return Err(Error::TailTooLarge { tail, available });
    }
    let window = &metrics.coop_fraction[available - tail..];
    Ok(window.iter().sum::<f64>() / tail as f64)
}

fn post_burn_in(metrics: &RunMetrics, burn_in: usize) -> Result<&[Vec<usize>]> {
    if burn_in >= metrics.len() {
        return Err(Error::BurnInTooLarge {
            burn_in,
            available: metrics.len(),
        });
    }
    Ok(&metrics.state_counts[burn_in..])
}

/// For every game state, the empirical distribution of its occupancy count
/// over the samples after the first `burn_in`.
pub fn state_count_histogram(metrics: &RunMetrics, burn_in: usize) -> Result<Vec<BTreeMap<usize, f64>>> {
    let rows = post_burn_in(metrics, burn_in)?;
    let mut hist: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); metrics.state_count()];
    for row in rows {
        for (state, &count) in row.iter().enumerate() {
            *hist[state].entry(count).or_default() += 1.0;
        }
    }
    let total = rows.len() as f64;
    for h in &mut hist {
        for p in h.values_mut() {
            *p /= total;
        }
    }
    Ok(hist)
}

/// Time-averaged occupancy per state after the first `burn_in` samples.
pub fn mean_state_counts(metrics: &RunMetrics, burn_in: usize) -> Result<Vec<f64>> {
    let rows = post_burn_in(metrics, burn_in)?;
    let mut sums = vec![0.0; metrics.state_count()];
    for row in rows {
        for (s, &c) in sums.iter_mut().zip(row) {
            *s += c as f64;
        }
    }
    Ok(sums.into_iter().map(|s| s / rows.len() as f64).collect())
}

/// Most frequent count in a histogram (smallest on ties).
pub fn histogram_mode(hist: &BTreeMap<usize, f64>) -> Option<usize> {
    hist.iter()
        .fold(None, |best: Option<(usize, f64)>, (&c, &p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((c, p)),
        })
        .map(|(c, _)| c)
}

/// `|theory - sim| / theory`.
pub fn relative_error(theory: f64, sim: f64) -> Result<f64> {
    if theory == 0.0 {
        return Err(Error::ZeroTheory);
    }
    Ok((theory - sim).abs() / theory.abs())
}

/// Writes histograms as `state,count,probability`, one row per observed count.
pub fn write_histogram_csv(path: &Path, hist: &[BTreeMap<usize, f64>], labels: &[String]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["state", "count", "probability"])?;
    for (label, h) in labels.iter().zip(hist) {
        for (count, p) in h {
            w.write_record([label.clone(), count.to_string(), p.to_string()])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}
