//! Load cleaning: temperature-binned IQR outlier detection and short-gap
//! imputation of the exogenous variables.
//!
//! Loads are grouped into 2.5 degC temperature bins (edges anchored at
//! integer multiples of 2.5) and flagged by the Tukey rule per bin. Load is
//! never imputed; only temperature and irradiation gaps of up to three
//! consecutive hours are filled by linear interpolation.

use serde::{Deserialize, Serialize};

use crate::calendar::Timestamp;
use crate::ingest::{HourlyObservation, Measurement, Quality};
use crate::stats::quantile_sorted;

/// Bins narrower than this many rows never flag anything; quartiles on tiny
/// samples are not meaningful.
pub const MIN_BIN_POPULATION: usize = 8;

/// Temperature bin width in degrees Celsius.
pub const BIN_WIDTH_C: f64 = 2.5;

/// Longest exogenous gap, in hours, that imputation will fill.
pub const MAX_IMPUTE_GAP_HOURS: usize = 3;

/// Per-bin quartile statistics and fences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinStats {
    /// Inclusive lower edge, a multiple of 2.5 degC.
    pub lower_c: f64,
    /// Exclusive upper edge.
    pub upper_c: f64,
    /// Rows with both load and temperature present that fell in this bin.
    pub count: usize,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    pub flagged: usize,
}

/// Outcome of outlier detection over one observation series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutlierReport {
    /// Indices into the observation series whose load was flagged.
    pub flagged_rows: Vec<usize>,
    /// Timestamps of the flagged rows, for reporting.
    pub flagged_timestamps: Vec<Timestamp>,
    pub bins: Vec<BinStats>,
    /// Flagged rows divided by the number of rows holding a load value.
    pub flagged_fraction: f64,
    /// Rows holding a load value (the fraction's denominator).
    pub load_rows: usize,
}

fn bin_index(temp: f64) -> i64 {
    (temp / BIN_WIDTH_C).floor() as i64
}

/// Flags loads outside `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]` within each 2.5 degC
/// temperature bin and marks them `Outlier` in place. Rows lacking load or
/// temperature do not participate; bins with fewer than
/// [`MIN_BIN_POPULATION`] rows flag nothing.
pub fn detect_outliers_iqr(obs: &mut [HourlyObservation]) -> OutlierReport {
    let mut by_bin: std::collections::BTreeMap<i64, Vec<usize>> = std::collections::BTreeMap::new();
    let mut load_rows = 0usize;
    for (i, o) in obs.iter().enumerate() {
        if o.load.value.is_some() {
            load_rows += 1;
        }
        if let (Some(_), Some(temp)) = (o.load.usable(), o.temperature.usable()) {
            by_bin.entry(bin_index(temp)).or_default().push(i);
        }
    }

    let mut bins = Vec::new();
    let mut flagged_rows = Vec::new();
    for (bin, members) in by_bin {
        let mut loads: Vec<f64> = members
            .iter()
            .map(|&i| obs[i].load.value.expect("binned rows have load"))
            .collect();
        loads.sort_by(f64::total_cmp);
        let count = loads.len();
        let mut stats = BinStats {
            lower_c: bin as f64 * BIN_WIDTH_C,
            upper_c: (bin + 1) as f64 * BIN_WIDTH_C,
            count,
            q1: f64::NAN,
            q3: f64::NAN,
            iqr: f64::NAN,
            lower_fence: f64::NAN,
            upper_fence: f64::NAN,
            flagged: 0,
        };
        if count >= MIN_BIN_POPULATION {
            let q1 = quantile_sorted(&loads, 0.25);
            let q3 = quantile_sorted(&loads, 0.75);
            let iqr = q3 - q1;
            let lower = q1 - 1.5 * iqr;
            let upper = q3 + 1.5 * iqr;
            stats.q1 = q1;
            stats.q3 = q3;
            stats.iqr = iqr;
            stats.lower_fence = lower;
            stats.upper_fence = upper;
            for &i in &members {
                let load = obs[i].load.value.expect("binned rows have load");
                if load < lower || load > upper {
                    obs[i].load.quality = Quality::Outlier;
                    flagged_rows.push(i);
                    stats.flagged += 1;
                }
            }
        }
        bins.push(stats);
    }

    flagged_rows.sort_unstable();
    let flagged_timestamps = flagged_rows.iter().map(|&i| obs[i].ts).collect();
    let flagged_fraction = if load_rows == 0 {
        0.0
    } else {
        flagged_rows.len() as f64 / load_rows as f64
    };
    OutlierReport {
        flagged_rows,
        flagged_timestamps,
        bins,
        flagged_fraction,
        load_rows,
    }
}

/// Linear interpolation of temperature and irradiation gaps of at most
/// [`MAX_IMPUTE_GAP_HOURS`] consecutive hours, flagged `Imputed`. Runs only
/// across contiguous hourly rows; load is never imputed. Expects outlier
/// detection to have run already.
pub fn impute(obs: &mut [HourlyObservation]) {
    impute_field(obs, |o| &mut o.temperature);
    impute_field(obs, |o| &mut o.irradiation);
}

fn impute_field<F>(obs: &mut [HourlyObservation], mut field: F)
where
    F: FnMut(&mut HourlyObservation) -> &mut Measurement,
{
    let n = obs.len();
    let mut i = 0;
    while i < n {
        if field(&mut obs[i]).usable().is_some() {
            i += 1;
            continue;
        }
        // Maximal run of missing values starting at i.
        let start = i;
        while i < n && field(&mut obs[i]).usable().is_none() {
            i += 1;
        }
        let end = i; // exclusive
        if start == 0 || end == n {
            continue; // no flanking value on one side
        }
        let gap = end - start;
        if gap > MAX_IMPUTE_GAP_HOURS {
            continue;
        }
        // The whole window including flanks must be contiguous hourly.
        let before = obs[start - 1].ts;
        let after = obs[end].ts;
        if after.hours_since(before) != (gap + 1) as i64 {
            continue;
        }
        let left = field(&mut obs[start - 1]).usable().expect("run is maximal");
        let right = field(&mut obs[end]).usable().expect("run is maximal");
        for (step, o) in obs[start..end].iter_mut().enumerate() {
            let frac = (step + 1) as f64 / (gap + 1) as f64;
            *field(o) = Measurement::new(left + frac * (right - left), Quality::Imputed);
        }
    }
}
