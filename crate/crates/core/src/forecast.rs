//! Recursive multi-step load forecasting from a fitted model.
//!
//! The recursion substitutes earlier predictions for load lags that fall
//! inside the forecast window; temperature and irradiation always come from
//! the caller-supplied exogenous series (the tool never forecasts weather)
//! and the noise term enters at its conditional mean of zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calendar::{HourOfWeek, Timestamp};
use crate::error::{Error, Result};
use crate::features::ColumnDescriptor;
use crate::ingest::HourlyObservation;
use crate::regression::FittedModel;

/// Whether a predicted hour drew its load lags from measured history,
/// previous predictions, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagSource {
    Actual,
    Mixed,
    Predicted,
}

impl fmt::Display for LagSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LagSource::Actual => "actual",
            LagSource::Mixed => "mixed",
            LagSource::Predicted => "predicted",
        };
        write!(f, "{s}")
    }
}

/// Hourly temperature and irradiation values keyed by timestamp. Gaps are
/// representable so coverage errors can name the first missing hour.
#[derive(Debug, Clone, Default)]
pub struct ExogenousSeries {
    temperature: BTreeMap<Timestamp, f64>,
    irradiation: BTreeMap<Timestamp, f64>,
}

impl ExogenousSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, ts: Timestamp, temperature: Option<f64>, irradiation: Option<f64>) {
        if let Some(t) = temperature {
            self.temperature.insert(ts, t);
        }
        if let Some(i) = irradiation {
            self.irradiation.insert(ts, i);
        }
    }

    /// Collects the usable temperature/irradiation values of an observation
    /// series.
    pub fn from_observations(obs: &[HourlyObservation]) -> Self {
        let mut series = Self::new();
        for o in obs {
            series.insert(o.ts, o.temperature.usable(), o.irradiation.usable());
        }
        series
    }

    pub fn temperature_at(&self, ts: Timestamp) -> Option<f64> {
        self.temperature.get(&ts).copied()
    }

    pub fn irradiation_at(&self, ts: Timestamp) -> Option<f64> {
        self.irradiation.get(&ts).copied()
    }
}

/// A forecast request: model, first predicted hour, horizon, measured load
/// history and exogenous inputs.
#[derive(Debug, Clone)]
pub struct ForecastRequest<'a> {
    pub model: &'a FittedModel,
    /// First hour to predict.
    pub origin: Timestamp,
    /// Number of hours to predict, at least 1.
    pub horizon: usize,
    /// Measured loads as (timestamp, kWh) pairs; must be contiguous hourly,
    /// end exactly one hour before the origin and reach back at least to the
    /// deepest load lag of the model.
    pub history: &'a [(Timestamp, f64)],
    pub exog: &'a ExogenousSeries,
}

/// Per-hour predictions plus the provenance of their load lags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastResult {
    pub origin: Timestamp,
    pub predictions: Vec<f64>,
    pub lag_sources: Vec<LagSource>,
}

impl ForecastResult {
    pub fn timestamps(&self) -> impl Iterator<Item = Timestamp> + '_ {
        (0..self.predictions.len()).map(|i| self.origin.add_hours(i as i64))
    }
}

fn lags_of(model: &FittedModel, pick: fn(&ColumnDescriptor) -> Option<u32>) -> Vec<u32> {
    model.columns.iter().filter_map(pick).collect()
}

fn load_lag(c: &ColumnDescriptor) -> Option<u32> {
    match c {
        ColumnDescriptor::LoadLag(k) => Some(*k),
        _ => None,
    }
}

fn temp_lag(c: &ColumnDescriptor) -> Option<u32> {
    match c {
        ColumnDescriptor::TempLag(k) => Some(*k),
        _ => None,
    }
}

fn irr_lag(c: &ColumnDescriptor) -> Option<u32> {
    match c {
        ColumnDescriptor::IrrLag(k) => Some(*k),
        _ => None,
    }
}

/// The raw recursion engine, shared by [`forecast_recursive`] and simulation
/// studies. `loads_before(k)` must return the measured load `k` hours before
/// the origin (`k >= 1`); `temp_at`/`irr_at` take signed offsets from the
/// origin; `dummy_active` decides whether a dummy column fires at an offset.
/// No calendar or coverage validation happens here.
pub fn recurse_unchecked(
    model: &FittedModel,
    loads_before: impl Fn(u32) -> f64,
    temp_at: impl Fn(i64) -> f64,
    irr_at: impl Fn(i64) -> f64,
    dummy_active: impl Fn(HourOfWeek, i64) -> bool,
    horizon: usize,
) -> Vec<f64> {
    let mut predictions: Vec<f64> = Vec::with_capacity(horizon);
    for h in 0..horizon as i64 {
        let mut value = 0.0;
        for (col, &coef) in model.columns.iter().zip(&model.coefficients) {
            let x = match col {
                ColumnDescriptor::Intercept => 1.0,
                ColumnDescriptor::LoadLag(k) => {
                    let offset = h - *k as i64;
                    if offset >= 0 {
                        predictions[offset as usize]
                    } else {
                        loads_before((-offset) as u32)
                    }
                }
                ColumnDescriptor::TempLag(k) => temp_at(h - *k as i64),
                ColumnDescriptor::IrrLag(k) => irr_at(h - *k as i64),
                ColumnDescriptor::CalendarDummy(hh) => {
                    if dummy_active(*hh, h) {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            value += coef * x;
        }
        predictions.push(value);
    }
    predictions
}

/// Validates a request and runs the recursion over real calendar time.
pub fn forecast_recursive(req: &ForecastRequest<'_>) -> Result<ForecastResult> {
    let model = req.model;
    if req.horizon == 0 {
        return Err(Error::InvalidInput("forecast horizon must be >= 1".into()));
    }

    // Every forecast hour must belong to the model's segment.
    for h in 0..req.horizon as i64 {
        let ts = req.origin.add_hours(h);
        if !model.segment.contains(ts) {
            return Err(Error::SegmentMismatch {
                timestamp: ts.to_string(),
                segment: model.segment.to_string(),
            });
        }
    }

    // History must be contiguous hourly and end right before the origin.
    let lags = lags_of(model, load_lag);
    let max_load_lag = lags.iter().copied().max().unwrap_or(0);
    if max_load_lag > 0 {
        if req.history.len() < max_load_lag as usize {
            return Err(Error::HistoryGap(format!(
                "need at least {max_load_lag} hours of history, got {}",
                req.history.len()
            )));
        }
        for pair in req.history.windows(2) {
            if pair[1].0.hours_since(pair[0].0) != 1 {
                return Err(Error::HistoryGap(format!(
                    "{} is not one hour after {}",
                    pair[1].0, pair[0].0
                )));
            }
        }
        let last = req.history.last().expect("length checked").0;
        if req.origin.hours_since(last) != 1 {
            return Err(Error::HistoryGap(format!(
                "history ends at {last}, expected {}",
                req.origin.add_hours(-1)
            )));
        }
    }

    // Exogenous coverage for every referenced (hour, lag) pair.
    for h in 0..req.horizon as i64 {
        for &k in &lags_of(model, temp_lag) {
            let ts = req.origin.add_hours(h - k as i64);
            if req.exog.temperature_at(ts).is_none() {
                return Err(Error::MissingExogenous {
                    timestamp: ts.to_string(),
                    variable: "temperature".into(),
                });
            }
        }
        for &k in &lags_of(model, irr_lag) {
            let ts = req.origin.add_hours(h - k as i64);
            if req.exog.irradiation_at(ts).is_none() {
                return Err(Error::MissingExogenous {
                    timestamp: ts.to_string(),
                    variable: "irradiation".into(),
                });
            }
        }
    }

    let history = req.history;
    let origin = req.origin;
    let exog = req.exog;
    let predictions = recurse_unchecked(
        model,
        |k| history[history.len() - k as usize].1,
        |off| {
            exog.temperature_at(origin.add_hours(off))
                .expect("coverage validated")
        },
        |off| {
            exog.irradiation_at(origin.add_hours(off))
                .expect("coverage validated")
        },
        |dummy, off| origin.add_hours(off).hour_of_week() == dummy,
        req.horizon,
    );

    let lag_sources = (0..req.horizon as i64)
        .map(|h| {
            if lags.is_empty() || lags.iter().all(|&k| (k as i64) > h) {
                LagSource::Actual
            } else if lags.iter().all(|&k| (k as i64) <= h) {
                LagSource::Predicted
            } else {
                LagSource::Mixed
            }
        })
        .collect();

    Ok(ForecastResult {
        origin: req.origin,
        predictions,
        lag_sources,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::SegmentKey;
    use crate::features::{LagSpec, ScenarioLevel};
    use approx::assert_abs_diff_eq;

    fn toy_model(columns: Vec<ColumnDescriptor>, coefficients: Vec<f64>) -> FittedModel {
        let k = columns.len();
        FittedModel {
            segment: SegmentKey::WINTER_WORKDAY,
            scenario: ScenarioLevel::PlusIrradiation,
            spec: LagSpec::new(1, 0, 0).unwrap(),
            columns,
            coefficients,
            standard_errors: vec![0.0; k],
            t_values: vec![0.0; k],
            p_values: vec![1.0; k],
            n: 100,
            k,
            rss: 0.0,
            sigma2: 0.0,
            r_squared: 1.0,
            adj_r_squared: 1.0,
            f_statistic: f64::NAN,
            prob_f: f64::NAN,
            aic: f64::NEG_INFINITY,
            bic: f64::NEG_INFINITY,
            residuals: Vec::new(),
            dropped_columns: Vec::new(),
        }
    }

    // 2019-01-07 is a Monday, deep in winter.
    fn monday() -> Timestamp {
        "2019-01-07T08:00".parse().unwrap()
    }

    fn history_before(origin: Timestamp, values: &[f64]) -> Vec<(Timestamp, f64)> {
        let n = values.len() as i64;
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| (origin.add_hours(i as i64 - n), v))
            .collect()
    }

    #[test]
    fn intercept_only_predicts_the_constant() {
        let model = toy_model(vec![ColumnDescriptor::Intercept], vec![5.0]);
        let exog = ExogenousSeries::new();
        let req = ForecastRequest {
            model: &model,
            origin: monday(),
            horizon: 3,
            history: &[],
            exog: &exog,
        };
        let result = forecast_recursive(&req).unwrap();
        assert_eq!(result.predictions, vec![5.0, 5.0, 5.0]);
        assert_eq!(result.lag_sources, vec![LagSource::Actual; 3]);
    }

    #[test]
    fn ar1_halving_recursion() {
        let model = toy_model(vec![ColumnDescriptor::LoadLag(1)], vec![0.5]);
        let origin = monday();
        let history = history_before(origin, &[8.0]);
        let exog = ExogenousSeries::new();
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 3,
            history: &history,
            exog: &exog,
        };
        let result = forecast_recursive(&req).unwrap();
        assert_eq!(result.predictions, vec![4.0, 2.0, 1.0]);
        assert_eq!(
            result.lag_sources,
            vec![LagSource::Actual, LagSource::Predicted, LagSource::Predicted]
        );
    }

    #[test]
    fn exogenous_passthrough() {
        let model = toy_model(vec![ColumnDescriptor::TempLag(0)], vec![1.0]);
        let origin = monday();
        let mut exog = ExogenousSeries::new();
        for (i, t) in [3.0, 7.0, 2.0].into_iter().enumerate() {
            exog.insert(origin.add_hours(i as i64), Some(t), None);
        }
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 3,
            history: &[],
            exog: &exog,
        };
        let result = forecast_recursive(&req).unwrap();
        assert_eq!(result.predictions, vec![3.0, 7.0, 2.0]);
    }

    #[test]
    fn segment_mismatch_names_the_hour() {
        let model = toy_model(vec![ColumnDescriptor::Intercept], vec![1.0]);
        // Friday 22:00 + horizon 4 crosses into Saturday.
        let origin: Timestamp = "2019-01-11T22:00".parse().unwrap();
        let exog = ExogenousSeries::new();
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 4,
            history: &[],
            exog: &exog,
        };
        let err = forecast_recursive(&req).unwrap_err();
        match err {
            Error::SegmentMismatch { timestamp, .. } => {
                assert_eq!(timestamp, "2019-01-12T00:00");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_exogenous_names_first_missing_hour() {
        let model = toy_model(vec![ColumnDescriptor::TempLag(1)], vec![1.0]);
        let origin = monday();
        let mut exog = ExogenousSeries::new();
        exog.insert(origin.add_hours(-1), Some(1.0), None);
        exog.insert(origin, Some(2.0), None);
        // hour 2 needs temperature at origin+1, which is absent
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 3,
            history: &[],
            exog: &exog,
        };
        let err = forecast_recursive(&req).unwrap_err();
        match err {
            Error::MissingExogenous { timestamp, variable } => {
                assert_eq!(variable, "temperature");
                assert_eq!(timestamp, origin.add_hours(1).to_string());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn history_gap_is_rejected() {
        let model = toy_model(vec![ColumnDescriptor::LoadLag(2)], vec![0.5]);
        let origin = monday();
        let exog = ExogenousSeries::new();
        // gap between the two history hours
        let history = vec![(origin.add_hours(-3), 1.0), (origin.add_hours(-1), 2.0)];
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 1,
            history: &history,
            exog: &exog,
        };
        assert!(matches!(forecast_recursive(&req), Err(Error::HistoryGap(_))));

        // history not ending right before origin
        let history = vec![(origin.add_hours(-4), 1.0), (origin.add_hours(-3), 2.0)];
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 1,
            history: &history,
            exog: &exog,
        };
        assert!(matches!(forecast_recursive(&req), Err(Error::HistoryGap(_))));

        // too short
        let history = vec![(origin.add_hours(-1), 2.0)];
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 1,
            history: &history,
            exog: &exog,
        };
        assert!(matches!(forecast_recursive(&req), Err(Error::HistoryGap(_))));
    }

    #[test]
    fn mixed_lag_sources_with_two_lags() {
        let model = toy_model(
            vec![ColumnDescriptor::LoadLag(1), ColumnDescriptor::LoadLag(2)],
            vec![0.3, 0.2],
        );
        let origin = monday();
        let history = history_before(origin, &[10.0, 20.0]);
        let exog = ExogenousSeries::new();
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 3,
            history: &history,
            exog: &exog,
        };
        let result = forecast_recursive(&req).unwrap();
        assert_eq!(
            result.lag_sources,
            vec![LagSource::Actual, LagSource::Mixed, LagSource::Predicted]
        );
        // hand recursion: p0 = 0.3*20 + 0.2*10 = 8; p1 = 0.3*8 + 0.2*20 = 6.4;
        // p2 = 0.3*6.4 + 0.2*8 = 3.52
        assert_abs_diff_eq!(result.predictions[0], 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(result.predictions[1], 6.4, epsilon = 1e-12);
        assert_abs_diff_eq!(result.predictions[2], 3.52, epsilon = 1e-12);
    }

    #[test]
    fn one_step_forecast_equals_in_sample_prediction() {
        // Model with every column kind; check h=1 equals the dot product of
        // the regressor row built by hand.
        let mon8 = HourOfWeek::from_day_hour(0, 8).unwrap();
        let model = toy_model(
            vec![
                ColumnDescriptor::Intercept,
                ColumnDescriptor::LoadLag(1),
                ColumnDescriptor::TempLag(0),
                ColumnDescriptor::TempLag(1),
                ColumnDescriptor::IrrLag(0),
                ColumnDescriptor::CalendarDummy(mon8),
            ],
            vec![2.0, 0.4, -0.3, -0.1, -0.002, 3.0],
        );
        let origin = monday(); // Monday 08:00, so the dummy fires
        let history = history_before(origin, &[25.0]);
        let mut exog = ExogenousSeries::new();
        exog.insert(origin.add_hours(-1), Some(-4.0), Some(10.0));
        exog.insert(origin, Some(-5.0), Some(50.0));
        let req = ForecastRequest {
            model: &model,
            origin,
            horizon: 1,
            history: &history,
            exog: &exog,
        };
        let result = forecast_recursive(&req).unwrap();
        let expected =
            2.0 + 0.4 * 25.0 + (-0.3) * (-5.0) + (-0.1) * (-4.0) + (-0.002) * 50.0 + 3.0;
        assert_abs_diff_eq!(result.predictions[0], expected, epsilon = 1e-12);
    }

    #[test]
    fn stable_recursion_converges_to_fixed_point() {
        // AR(2) with constant exogenous input and an always-active dummy.
        let mon8 = HourOfWeek::from_day_hour(0, 8).unwrap();
        let model = toy_model(
            vec![
                ColumnDescriptor::Intercept,
                ColumnDescriptor::LoadLag(1),
                ColumnDescriptor::LoadLag(2),
                ColumnDescriptor::TempLag(0),
                ColumnDescriptor::CalendarDummy(mon8),
            ],
            vec![2.0, 0.5, 0.2, -0.3, 1.5],
        );
        let temp = -5.0;
        let preds = recurse_unchecked(&model, |_| 40.0, |_| temp, |_| 0.0, |_, _| true, 500);
        let c_prime = 2.0 + (-0.3) * temp + 1.5;
        let fixed_point = c_prime / (1.0 - 0.5 - 0.2);
        assert_abs_diff_eq!(preds[499], fixed_point, epsilon = 1e-9);
        // geometric approach: the error keeps shrinking by orders of magnitude
        let e100 = (preds[99] - fixed_point).abs();
        let e200 = (preds[199] - fixed_point).abs();
        assert!(e200 < e100 * 1e-3 || e200 < 1e-12);
    }
}
