//! The error battery: MAE/RMSE/MAPE/ME, error quantiles, hour-of-day
//! profiles, per-month summaries and cross-scenario comparison tables.
//!
//! The error sign convention is `predicted - actual`: a positive error means
//! the forecast was too high. MAPE excludes targets below 0.1 kWh in
//! magnitude and reports how many samples that removed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::calendar::{SegmentKey, Timestamp};
use crate::error::{Error, Result};
use crate::features::{build_design_matrix, ScenarioLevel};
use crate::forecast::{forecast_recursive, ExogenousSeries, ForecastRequest};
use crate::ingest::HourlyObservation;
use crate::regression::FittedModel;
use crate::stats::{quantile, quantile_sorted};

/// Loads below this magnitude (kWh) are excluded from MAPE.
pub const MAPE_FLOOR_KWH: f64 = 0.1;

/// One scored hour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSample {
    pub ts: Timestamp,
    pub actual: f64,
    pub predicted: f64,
}

impl ErrorSample {
    /// Forecast error, positive when the forecast is too high.
    pub fn error(&self) -> f64 {
        self.predicted - self.actual
    }
}

/// Aggregate error metrics over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub n: usize,
    pub mae: f64,
    pub rmse: f64,
    /// Mean error (bias).
    pub me: f64,
    /// Mean absolute percentage error in percent; `None` when every sample
    /// fell under the exclusion floor.
    pub mape_percent: Option<f64>,
    pub n_excluded_from_mape: usize,
}

/// MAE, RMSE, ME and MAPE of a non-empty sample set.
pub fn metrics(samples: &[ErrorSample]) -> Result<MetricSet> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("metrics of an empty sample set".into()));
    }
    let n = samples.len();
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    let mut sum = 0.0;
    let mut mape_sum = 0.0;
    let mut mape_n = 0usize;
    for s in samples {
        let e = s.error();
        abs_sum += e.abs();
        sq_sum += e * e;
        sum += e;
        if s.actual.abs() >= MAPE_FLOOR_KWH {
            mape_sum += e.abs() / s.actual.abs();
            mape_n += 1;
        }
    }
    Ok(MetricSet {
        n,
        mae: abs_sum / n as f64,
        rmse: (sq_sum / n as f64).sqrt(),
        me: sum / n as f64,
        mape_percent: (mape_n > 0).then(|| 100.0 * mape_sum / mape_n as f64),
        n_excluded_from_mape: n - mape_n,
    })
}

/// Quantiles of an error set at the given probabilities (same interpolation
/// rule as the cleaning stage).
pub fn error_quantiles(errors: &[f64], probs: &[f64]) -> Result<Vec<f64>> {
    probs.iter().map(|&p| quantile(errors, p)).collect()
}

/// Metrics grouped by hour of day; empty hours are simply absent.
pub fn hourly_profile(samples: &[ErrorSample]) -> BTreeMap<u32, MetricSet> {
    let mut groups: BTreeMap<u32, Vec<ErrorSample>> = BTreeMap::new();
    for s in samples {
        groups.entry(s.ts.hour()).or_default().push(*s);
    }
    groups
        .into_iter()
        .map(|(hour, group)| {
            let m = metrics(&group).expect("groups are non-empty");
            (hour, m)
        })
        .collect()
}

/// One row of the per-month error summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonthlySummaryRow {
    pub model: String,
    /// Calendar month 1..=12, pooled across years.
    pub month: u32,
    pub n: usize,
    pub rmse: f64,
    pub me: f64,
    pub q01: f64,
    pub q10: f64,
    pub q90: f64,
    pub q99: f64,
}

/// RMSE, ME and the 1/10/90/99 % error quantiles per calendar month.
pub fn monthly_summary(samples: &[ErrorSample], model_id: &str) -> Vec<MonthlySummaryRow> {
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for s in samples {
        groups.entry(s.ts.month()).or_default().push(s.error());
    }
    groups
        .into_iter()
        .map(|(month, mut errors)| {
            let n = errors.len();
            let rmse = (errors.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt();
            let me = errors.iter().sum::<f64>() / n as f64;
            errors.sort_by(f64::total_cmp);
            MonthlySummaryRow {
                model: model_id.to_string(),
                month,
                n,
                rmse,
                me,
                q01: quantile_sorted(&errors, 0.01),
                q10: quantile_sorted(&errors, 0.10),
                q90: quantile_sorted(&errors, 0.90),
                q99: quantile_sorted(&errors, 0.99),
            }
        })
        .collect()
}

/// Which side of the odd/even-day split to score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitSide {
    /// Odd days of the month (the fitting rows).
    Train,
    /// Even days of the month (held-out rows).
    Test,
}

fn on_side(ts: Timestamp, side: SplitSide) -> bool {
    match side {
        SplitSide::Train => ts.day() % 2 == 1,
        SplitSide::Test => ts.day() % 2 == 0,
    }
}

/// One-step-ahead scoring with actual lagged loads: rebuilds the model's
/// design matrix over the series, keeps rows on the requested split side and
/// compares predictions against the targets.
pub fn one_step_samples(
    obs: &[HourlyObservation],
    model: &FittedModel,
    side: SplitSide,
) -> Result<Vec<ErrorSample>> {
    let dummies = model.dummy_hours().into_iter().collect();
    let matrix = build_design_matrix(obs, model.segment, model.spec, model.scenario, &dummies)?;
    let rows: Vec<usize> = (0..matrix.rows())
        .filter(|&i| on_side(matrix.timestamps[i], side))
        .collect();
    let selected = matrix.select_rows(&rows);
    let predictions = model.predict(&selected)?;
    Ok((0..selected.rows())
        .map(|i| ErrorSample {
            ts: selected.timestamps[i],
            actual: selected.y[i],
            predicted: predictions[i],
        })
        .collect())
}

/// Recursive day-ahead scoring: every day on the split side whose 24 hours
/// all belong to the model's segment is forecast from its own midnight with
/// measured history and exogenous inputs. Days lacking history or exogenous
/// coverage are skipped; the skip count comes back with the samples.
pub fn recursive_samples(
    obs: &[HourlyObservation],
    model: &FittedModel,
    side: SplitSide,
) -> Result<(Vec<ErrorSample>, usize)> {
    let exog = ExogenousSeries::from_observations(obs);
    let loads: BTreeMap<Timestamp, f64> = obs
        .iter()
        .filter_map(|o| o.load.usable().map(|v| (o.ts, v)))
        .collect();
    let max_load_lag = model
        .columns
        .iter()
        .filter_map(|c| match c {
            crate::features::ColumnDescriptor::LoadLag(k) => Some(*k),
            _ => None,
        })
        .max()
        .unwrap_or(0);

    // Candidate days: dates present in the series, on the split side, whose
    // midnight belongs to the segment (season and day type are constant
    // within a civil day).
    let mut days: BTreeMap<(i32, u32, u32), Timestamp> = BTreeMap::new();
    for o in obs {
        let midnight = Timestamp::new(o.ts.year(), o.ts.month(), o.ts.day(), 0)
            .expect("date of a valid timestamp");
        days.entry((o.ts.year(), o.ts.month(), o.ts.day()))
            .or_insert(midnight);
    }

    let mut samples = Vec::new();
    let mut skipped = 0usize;
    for (_, origin) in days {
        if !on_side(origin, side) || !model.segment.contains(origin) {
            continue;
        }
        let mut history = Vec::with_capacity(max_load_lag as usize);
        let mut complete = true;
        for k in (1..=max_load_lag as i64).rev() {
            let ts = origin.add_hours(-k);
            match loads.get(&ts) {
                Some(&v) => history.push((ts, v)),
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            skipped += 1;
            continue;
        }
        let req = ForecastRequest {
            model,
            origin,
            horizon: 24,
            history: &history,
            exog: &exog,
        };
        match forecast_recursive(&req) {
            Ok(result) => {
                for (h, pred) in result.predictions.iter().enumerate() {
                    let ts = origin.add_hours(h as i64);
                    if let Some(&actual) = loads.get(&ts) {
                        samples.push(ErrorSample {
                            ts,
                            actual,
                            predicted: *pred,
                        });
                    }
                }
            }
            Err(Error::MissingExogenous { .. }) | Err(Error::HistoryGap(_)) => {
                skipped += 1;
            }
            Err(other) => return Err(other),
        }
    }
    Ok((samples, skipped))
}

/// One cell of the scenario comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonCell {
    pub segment: SegmentKey,
    pub scenario: ScenarioLevel,
    /// Metrics of the held-out one-step scoring, absent when no model was
    /// supplied for the cell or its segment had no test rows.
    pub metrics: Option<MetricSet>,
}

/// Scores every supplied model one-step-ahead on held-out rows and lays the
/// results out on the full (segment x scenario) grid; cells without a model
/// or without test rows stay absent.
pub fn scenario_comparison(
    models: &[FittedModel],
    obs: &[HourlyObservation],
) -> Vec<ComparisonCell> {
    let levels = [
        ScenarioLevel::LoadOnly,
        ScenarioLevel::PlusTemperature,
        ScenarioLevel::PlusIrradiation,
        ScenarioLevel::PlusCalendar,
    ];
    let mut cells = Vec::new();
    for segment in SegmentKey::ALL {
        for scenario in levels {
            let model = models
                .iter()
                .find(|m| m.segment == segment && m.scenario == scenario);
            let metrics = model.and_then(|m| {
                let samples = one_step_samples(obs, m, SplitSide::Test).ok()?;
                metrics(&samples).ok()
            });
            cells.push(ComparisonCell {
                segment,
                scenario,
                metrics,
            });
        }
    }
    cells
}
