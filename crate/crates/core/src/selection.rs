//! Model selection: variance-threshold filtering, exhaustive BIC lag-order
//! search and p-value-gated forward selection of calendar dummies.
//!
//! Lag orders are searched on training rows restricted to those valid at the
//! maximal spec, so every candidate sees identical rows. The grid solves each
//! candidate in the reduced space of one thin QR factorization of the
//! maximal design matrix: for a column subset S, `RSS_S = ||(I-QQ')y||^2 +
//! min ||Q'y - R_S b||^2`, which turns thousands of n-row fits into
//! small-triangular solves with identical results.
//!
//! Selection consumes the full cleaned series and works on training rows
//! (odd days of month); the shipped model is one final refit on those rows.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::calendar::{HourOfWeek, SegmentKey, DAY_ABBREV};
use crate::error::{Error, Result};
use crate::features::{
    build_design_matrix, ColumnDescriptor, DesignMatrix, LagSpec, ScenarioLevel,
};
use crate::ingest::HourlyObservation;
use crate::regression::{fit_ols, fit_system, FittedModel};
use crate::stats;

/// Tuning knobs of the selection procedures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Entry p-value threshold for forward selection.
    pub p_entry: f64,
    /// Columns with sample variance below this are filtered out.
    pub variance_threshold: f64,
    /// Cap on admitted calendar dummies.
    pub max_dummies: usize,
    /// Load-lag pool upper bound (search covers `1..=na_max`).
    pub na_max: u32,
    /// Temperature-lag pool upper bound (search covers `0..=nb_max`).
    pub nb_max: u32,
    /// Irradiation-lag pool upper bound (search covers `0..=nc_max`).
    pub nc_max: u32,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            p_entry: 0.05,
            variance_threshold: 1e-12,
            max_dummies: 12,
            na_max: LagSpec::MAX_NA,
            nb_max: LagSpec::MAX_NB,
            nc_max: LagSpec::MAX_NC,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_entry > 0.0 && self.p_entry < 1.0) {
            return Err(Error::InvalidInput(format!(
                "p_entry must lie in (0, 1), got {}",
                self.p_entry
            )));
        }
        if self.variance_threshold < 0.0 {
            return Err(Error::InvalidInput("variance threshold must be >= 0".into()));
        }
        LagSpec::new(self.na_max, self.nb_max, self.nc_max)?;
        Ok(())
    }
}

/// One candidate evaluation during forward selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Forward-selection step, starting at 1.
    pub step: usize,
    pub candidate: ColumnDescriptor,
    /// p-value of the candidate's own coefficient in the tentative refit.
    pub p_value: f64,
    pub accepted: bool,
    /// BIC of the tentative model including the candidate.
    #[serde(with = "crate::serde_f64")]
    pub bic_after: f64,
}

/// Ordered log of every candidate evaluation, for audit.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub entries: Vec<TraceEntry>,
}

impl SelectionTrace {
    pub fn admitted(&self) -> Vec<ColumnDescriptor> {
        self.entries
            .iter()
            .filter(|e| e.accepted)
            .map(|e| e.candidate)
            .collect()
    }
}

/// Keeps the columns whose sample variance reaches `threshold`; the intercept
/// is always retained.
pub fn variance_filter(matrix: &DesignMatrix, threshold: f64) -> Vec<ColumnDescriptor> {
    (0..matrix.cols())
        .filter(|&j| {
            if matrix.columns[j] == ColumnDescriptor::Intercept {
                return true;
            }
            let col: Vec<f64> = matrix.x.column(j).iter().copied().collect();
            stats::sample_variance(&col) >= threshold
        })
        .map(|j| matrix.columns[j])
        .collect()
}

fn pools(scenario: ScenarioLevel, config: &SelectionConfig) -> (u32, u32) {
    let nb = if scenario.includes_temperature() { config.nb_max } else { 0 };
    let nc = if scenario.includes_irradiation() { config.nc_max } else { 0 };
    (nb, nc)
}

/// Column indices of a candidate `(na, nb, nc)` inside the maximal matrix
/// whose layout is `[const, Q1.., T0.., I0..]`.
fn candidate_indices(
    na: u32,
    nb: u32,
    nc: u32,
    max_spec: LagSpec,
    scenario: ScenarioLevel,
) -> Vec<usize> {
    let mut idx = vec![0usize];
    idx.extend((1..=na as usize).map(|k| k));
    let mut offset = 1 + max_spec.na as usize;
    if scenario.includes_temperature() {
        idx.extend((0..=nb as usize).map(|k| offset + k));
        offset += max_spec.nb as usize + 1;
    }
    if scenario.includes_irradiation() {
        idx.extend((0..=nc as usize).map(|k| offset + k));
    }
    idx
}

/// Exhaustive BIC grid over the lag pools applicable to the scenario, on
/// training rows valid at the maximal spec. Ties prefer fewer parameters,
/// then the lexicographically smallest `(na, nb, nc)`.
pub fn select_lag_orders(
    obs: &[HourlyObservation],
    segment: SegmentKey,
    scenario: ScenarioLevel,
    config: &SelectionConfig,
) -> Result<LagSpec> {
    config.validate()?;
    if scenario.includes_calendar() {
        return Err(Error::InvalidInput(
            "lag-order search runs at the load/temperature/irradiation levels; \
             calendar dummies are selected afterwards"
                .into(),
        ));
    }
    let (nb_max, nc_max) = pools(scenario, config);
    let max_spec = LagSpec::new(config.na_max, nb_max, nc_max)?;
    let matrix = build_design_matrix(obs, segment, max_spec, scenario, &BTreeSet::new())?;
    let (train, _) = matrix.split_train_test();
    let k_max = train.cols();
    if train.rows() <= k_max {
        return Err(Error::InvalidInput(format!(
            "{} training rows cannot support the maximal spec ({} columns); \
             reduce the lag pools",
            train.rows(),
            k_max
        )));
    }

    // One thin QR of the maximal training matrix; candidates solve in the
    // k_max-dimensional reduced space.
    let n = train.rows();
    let qr = train.x.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let qty = q.transpose() * &train.y;
    let rss_base = (&train.y - &q * &qty).norm_squared();

    let mut best: Option<(f64, usize, u32, u32, u32)> = None;
    for na in 1..=config.na_max {
        for nb in 0..=nb_max {
            for nc in 0..=nc_max {
                let idx = candidate_indices(na, nb, nc, max_spec, scenario);
                let r_s = DMatrix::from_fn(k_max, idx.len(), |i, j| r[(i, idx[j])]);
                let solution = crate::regression::solve_lstsq(&r_s, &qty);
                let k = solution.retained.len();
                let (_, bic) = stats::information_criteria(rss_base + solution.rss, n, k)?;
                let key = (bic, idx.len(), na, nb, nc);
                let better = match &best {
                    None => true,
                    Some(b) => match key.0.total_cmp(&b.0) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => (key.1, key.2, key.3, key.4) < (b.1, b.2, b.3, b.4),
                    },
                };
                if better {
                    best = Some(key);
                }
            }
        }
    }
    let (_, _, na, nb, nc) = best.expect("grid is never empty");
    LagSpec::new(na, nb, nc)
}

/// Greedy admission of calendar dummies: start from the plus-irradiation
/// model at `spec`, repeatedly refit with each remaining candidate, admit the
/// smallest entry p-value while it beats `p_entry`, stop at `max_dummies` or
/// when nothing qualifies. Ties on p prefer the earliest hour of week.
pub fn forward_select_calendar(
    obs: &[HourlyObservation],
    segment: SegmentKey,
    spec: LagSpec,
    config: &SelectionConfig,
) -> Result<(FittedModel, SelectionTrace)> {
    config.validate()?;
    let eligible: BTreeSet<HourOfWeek> =
        HourOfWeek::eligible_for(segment.daytype()).into_iter().collect();
    let full = build_design_matrix(obs, segment, spec, ScenarioLevel::PlusCalendar, &eligible)?;
    let (train, _) = full.split_train_test();

    let surviving = variance_filter(&train, config.variance_threshold);
    let mut candidates: Vec<ColumnDescriptor> = surviving
        .iter()
        .copied()
        .filter(ColumnDescriptor::is_dummy)
        .collect();

    let base_columns: Vec<usize> = (0..train.cols())
        .filter(|&j| !train.columns[j].is_dummy())
        .collect();

    let y_mean = train.y.mean();
    let tss: f64 = train.y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
    let n = train.rows();

    let select = |descriptors: &[ColumnDescriptor]| -> (DMatrix<f64>, Vec<ColumnDescriptor>) {
        let idx: Vec<usize> = descriptors
            .iter()
            .map(|d| train.column_index(d).expect("descriptor from this matrix"))
            .collect();
        let x = DMatrix::from_fn(n, idx.len(), |i, j| train.x[(i, idx[j])]);
        (x, descriptors.to_vec())
    };

    let column_set = |admitted: &BTreeSet<HourOfWeek>| -> Vec<ColumnDescriptor> {
        let mut cols: Vec<ColumnDescriptor> =
            base_columns.iter().map(|&j| train.columns[j]).collect();
        cols.extend(admitted.iter().map(|h| ColumnDescriptor::CalendarDummy(*h)));
        cols
    };

    let mut admitted: BTreeSet<HourOfWeek> = BTreeSet::new();
    let mut trace = SelectionTrace::default();
    let mut step = 0usize;

    loop {
        if admitted.len() >= config.max_dummies || candidates.is_empty() {
            break;
        }
        // A numerically exact fit has no residual variance left; entry
        // p-values would be rounding noise, so selection stops.
        let (x_cur, cols_cur) = select(&column_set(&admitted));
        let current = fit_system(&x_cur, &train.y, 0.0, n, tss, &cols_cur)?;
        if current.rss <= tss * 1e-20 {
            break;
        }

        step += 1;
        let mut best: Option<(f64, HourOfWeek)> = None;
        for candidate in &candidates {
            let ColumnDescriptor::CalendarDummy(hour) = candidate else {
                unreachable!("candidates are dummies")
            };
            let mut tentative = admitted.clone();
            tentative.insert(*hour);
            let (x_t, cols_t) = select(&column_set(&tentative));
            let fit = fit_system(&x_t, &train.y, 0.0, n, tss, &cols_t)?;
            // A candidate dropped by rank detection cannot be admitted.
            let p = fit
                .columns
                .iter()
                .position(|c| c == candidate)
                .map_or(1.0, |j| fit.p_values[j]);
            trace.entries.push(TraceEntry {
                step,
                candidate: *candidate,
                p_value: p,
                accepted: false,
                bic_after: fit.bic,
            });
            if p < config.p_entry {
                let better = match best {
                    None => true,
                    Some((bp, bh)) => p < bp || (p == bp && *hour < bh),
                };
                if better {
                    best = Some((p, *hour));
                }
            }
        }

        match best {
            None => break,
            Some((_, hour)) => {
                let winner = ColumnDescriptor::CalendarDummy(hour);
                for entry in trace.entries.iter_mut().rev() {
                    if entry.step == step && entry.candidate == winner {
                        entry.accepted = true;
                        break;
                    }
                }
                admitted.insert(hour);
                candidates.retain(|c| *c != winner);
            }
        }
    }

    // One final refit on training rows produces the shipped model.
    let final_matrix = {
        let descriptors = column_set(&admitted);
        let idx: Vec<usize> = descriptors
            .iter()
            .map(|d| train.column_index(d).expect("descriptor from this matrix"))
            .collect();
        DesignMatrix {
            columns: descriptors,
            x: DMatrix::from_fn(n, idx.len(), |i, j| train.x[(i, idx[j])]),
            y: train.y.clone(),
            timestamps: train.timestamps.clone(),
        }
    };
    let model = fit_ols(&final_matrix, segment, ScenarioLevel::PlusCalendar, spec)?;
    Ok((model, trace))
}

/// The full per-segment fitting pipeline on training rows: lag search, then
/// forward dummy selection when the scenario includes calendar data, then the
/// final refit. Returns the shipped model and the selection trace (empty for
/// non-calendar scenarios).
pub fn fit_segment(
    obs: &[HourlyObservation],
    segment: SegmentKey,
    scenario: ScenarioLevel,
    config: &SelectionConfig,
) -> Result<(FittedModel, SelectionTrace)> {
    let search_level = if scenario.includes_calendar() {
        ScenarioLevel::PlusIrradiation
    } else {
        scenario
    };
    let spec = select_lag_orders(obs, segment, search_level, config)?;
    if scenario.includes_calendar() {
        forward_select_calendar(obs, segment, spec, config)
    } else {
        let matrix = build_design_matrix(obs, segment, spec, scenario, &BTreeSet::new())?;
        let (train, _) = matrix.split_train_test();
        let model = fit_ols(&train, segment, scenario, spec)?;
        Ok((model, SelectionTrace::default()))
    }
}

/// Renders the model in the summary notation `Q{na}_T{nb}_I{nc} ({dummies})`
/// with dummies grouped per day Monday through Sunday, e.g.
/// `Q3_T1_I1 (MON_8h_TUE_1h_WED_3,7h)`. An empty dummy set drops the
/// parenthetical.
pub fn model_name(model: &FittedModel) -> String {
    let spec = model.spec;
    let mut name = format!("Q{}_T{}_I{}", spec.na, spec.nb, spec.nc);
    let dummies = model.dummy_hours();
    if dummies.is_empty() {
        return name;
    }
    let mut by_day: Vec<Vec<u32>> = vec![Vec::new(); 7];
    for h in &dummies {
        by_day[h.day_of_week() as usize].push(h.hour());
    }
    let groups: Vec<String> = by_day
        .iter()
        .enumerate()
        .filter(|(_, hours)| !hours.is_empty())
        .map(|(day, hours)| {
            let mut hours = hours.clone();
            hours.sort_unstable();
            let joined = hours
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            format!("{}_{joined}h", DAY_ABBREV[day])
        })
        .collect();
    name.push_str(&format!(" ({})", groups.join("_")));
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::Timestamp;
    use crate::ingest::{Measurement, Quality};
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_distr::{Distribution, Normal};

    /// Simulates an hourly series from a known linear process for the tests
    /// below. Dummy offsets apply at the named hours of week.
    fn simulate(
        seed: u64,
        start: &str,
        hours: usize,
        c: f64,
        a: &[f64],
        b: &[f64],
        g: &[f64],
        dummies: &[(HourOfWeek, f64)],
        noise_sd: f64,
    ) -> Vec<HourlyObservation> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, noise_sd.max(1e-300)).unwrap();
        let start: Timestamp = start.parse().unwrap();
        let mut temps = Vec::with_capacity(hours);
        let mut irrs = Vec::with_capacity(hours);
        for i in 0..hours {
            let ts = start.add_hours(i as i64);
            let h = ts.hour() as f64;
            let t = 2.0 - 6.0 * ((h - 14.0) * std::f64::consts::TAU / 24.0).cos()
                + rng.random_range(-1.5..1.5);
            let irr = (((h - 6.0) * std::f64::consts::PI / 12.0).sin()).max(0.0) * 300.0;
            temps.push(t);
            irrs.push(irr);
        }
        let mut loads = vec![c / (1.0 - a.iter().sum::<f64>()); hours];
        for i in 0..hours {
            let ts = start.add_hours(i as i64);
            let mut v = c;
            for (k, &ak) in a.iter().enumerate() {
                let lag = k + 1;
                if i >= lag {
                    v += ak * loads[i - lag];
                } else {
                    v += ak * loads[0];
                }
            }
            for (k, &bk) in b.iter().enumerate() {
                if i >= k {
                    v += bk * temps[i - k];
                }
            }
            for (k, &gk) in g.iter().enumerate() {
                if i >= k {
                    v += gk * irrs[i - k];
                }
            }
            for (hh, offset) in dummies {
                if ts.hour_of_week() == *hh {
                    v += offset;
                }
            }
            if noise_sd > 0.0 {
                v += noise.sample(&mut rng);
            }
            loads[i] = v;
        }
        (0..hours)
            .map(|i| HourlyObservation {
                ts: start.add_hours(i as i64),
                load: Measurement::new(loads[i], Quality::Observed),
                temperature: Measurement::new(temps[i], Quality::Resampled),
                irradiation: Measurement::new(irrs[i], Quality::Resampled),
            })
            .collect()
    }

    #[test]
    fn variance_filter_drops_constant_columns_but_not_intercept() {
        let base: Timestamp = "2019-01-07T00:00".parse().unwrap();
        let n = 20;
        let x = DMatrix::from_fn(n, 3, |i, j| match j {
            0 => 1.0,
            1 => if i % 2 == 0 { 0.0 } else { 1.0 },
            _ => 0.0, // all-zero dummy
        });
        let matrix = DesignMatrix {
            columns: vec![
                ColumnDescriptor::Intercept,
                ColumnDescriptor::CalendarDummy(HourOfWeek::new(8).unwrap()),
                ColumnDescriptor::CalendarDummy(HourOfWeek::new(9).unwrap()),
            ],
            x,
            y: DVector::zeros(n),
            timestamps: (0..n).map(|i| base.add_hours(i as i64)).collect(),
        };
        let retained = variance_filter(&matrix, 1e-12);
        assert!(retained.contains(&ColumnDescriptor::Intercept));
        assert!(retained.contains(&matrix.columns[1]));
        assert!(!retained.contains(&matrix.columns[2]));
    }

    #[test]
    fn lag_search_recovers_ar2() {
        // L_t = 2 + 0.5 L_{t-1} + 0.3 L_{t-2} + noise; load-only search.
        let obs = simulate(
            1,
            "2018-01-01T00:00",
            9000,
            2.0,
            &[0.5, 0.3],
            &[],
            &[],
            &[],
            1.0,
        );
        let config = SelectionConfig::default();
        let spec = select_lag_orders(
            &obs,
            SegmentKey::WINTER_WORKDAY,
            ScenarioLevel::LoadOnly,
            &config,
        )
        .unwrap();
        assert_eq!(spec.na, 2, "selected {spec:?}");
    }

    #[test]
    fn lag_search_on_white_noise_picks_minimal_order() {
        // Pure noise: BIC should settle on na = 1 nearly always.
        let mut minimal = 0;
        let runs = 100;
        for seed in 0..runs {
            let obs = simulate(
                1000 + seed,
                "2018-01-01T00:00",
                2500,
                10.0,
                &[],
                &[],
                &[],
                &[],
                1.0,
            );
            let config = SelectionConfig::default();
            let spec = select_lag_orders(
                &obs,
                SegmentKey::WINTER_WORKDAY,
                ScenarioLevel::LoadOnly,
                &config,
            )
            .unwrap();
            if spec.na == 1 {
                minimal += 1;
            }
        }
        assert!(minimal * 100 >= runs * 95, "minimal na in {minimal}/{runs} runs");
    }

    #[test]
    fn lag_search_recovers_structured_weather_process() {
        // Structure (2, 1, 1) with a reduced pool, full scenario.
        let obs = simulate(
            7,
            "2016-01-01T00:00",
            24 * 365 * 4,
            6.0,
            &[0.45, 0.25],
            &[-0.25, -0.1],
            &[-0.01, -0.006],
            &[],
            1.0,
        );
        let config = SelectionConfig {
            na_max: 4,
            nb_max: 3,
            nc_max: 3,
            ..SelectionConfig::default()
        };
        let spec = select_lag_orders(
            &obs,
            SegmentKey::WINTER_WORKDAY,
            ScenarioLevel::PlusIrradiation,
            &config,
        )
        .unwrap();
        assert_eq!((spec.na, spec.nb, spec.nc), (2, 1, 1));
    }

    #[test]
    fn grid_bic_matches_direct_fit() {
        // The reduced-space BIC must equal a direct fit at the same spec.
        let obs = simulate(
            3,
            "2018-01-01T00:00",
            6000,
            4.0,
            &[0.4],
            &[-0.2],
            &[],
            &[],
            1.0,
        );
        let config = SelectionConfig {
            na_max: 3,
            nb_max: 2,
            nc_max: 2,
            ..SelectionConfig::default()
        };
        let max_spec = LagSpec::new(3, 2, 2).unwrap();
        let matrix = build_design_matrix(
            &obs,
            SegmentKey::WINTER_WORKDAY,
            max_spec,
            ScenarioLevel::PlusIrradiation,
            &BTreeSet::new(),
        )
        .unwrap();
        let (train, _) = matrix.split_train_test();

        let qr = train.x.clone().qr();
        let q = qr.q();
        let r = qr.r();
        let qty = q.transpose() * &train.y;
        let rss_base = (&train.y - &q * &qty).norm_squared();

        for (na, nb, nc) in [(1u32, 0u32, 0u32), (2, 1, 1), (3, 2, 2)] {
            let idx = candidate_indices(na, nb, nc, max_spec, ScenarioLevel::PlusIrradiation);
            let r_s = DMatrix::from_fn(train.cols(), idx.len(), |i, j| r[(i, idx[j])]);
            let sol = crate::regression::solve_lstsq(&r_s, &qty);
            let (_, bic_reduced) =
                stats::information_criteria(rss_base + sol.rss, train.rows(), idx.len()).unwrap();

            // direct route: restrict matrix columns and fit
            let direct = DesignMatrix {
                columns: idx.iter().map(|&j| train.columns[j]).collect(),
                x: DMatrix::from_fn(train.rows(), idx.len(), |i, j| train.x[(i, idx[j])]),
                y: train.y.clone(),
                timestamps: train.timestamps.clone(),
            };
            let fitted = fit_ols(
                &direct,
                SegmentKey::WINTER_WORKDAY,
                ScenarioLevel::PlusIrradiation,
                LagSpec::new(na, nb, nc).unwrap(),
            )
            .unwrap();
            let rel = (bic_reduced - fitted.bic).abs() / fitted.bic.abs().max(1.0);
            assert!(rel < 1e-9, "({na},{nb},{nc}): {bic_reduced} vs {}", fitted.bic);
        }
        let _ = config;
    }

    #[test]
    fn forward_selection_admits_planted_dummy() {
        let mon8 = HourOfWeek::from_day_hour(0, 8).unwrap();
        for seed in [11, 12, 13] {
            let obs = simulate(
                seed,
                "2017-01-01T00:00",
                24 * 365 * 3,
                6.0,
                &[0.4],
                &[-0.2],
                &[],
                &[(mon8, 6.0)],
                1.0,
            );
            let config = SelectionConfig::default();
            let (model, trace) = forward_select_calendar(
                &obs,
                SegmentKey::WINTER_WORKDAY,
                LagSpec::new(1, 0, 0).unwrap(),
                &config,
            )
            .unwrap();
            assert!(
                model.dummy_hours().contains(&mon8),
                "seed {seed}: admitted {:?}",
                model.dummy_hours()
            );
            assert!(trace.admitted().contains(&ColumnDescriptor::CalendarDummy(mon8)));
        }
    }

    #[test]
    fn forward_selection_trace_is_consistent() {
        let obs = simulate(
            21,
            "2018-01-01T00:00",
            24 * 365 * 2,
            6.0,
            &[0.4],
            &[-0.2],
            &[],
            &[],
            1.0,
        );
        let config = SelectionConfig::default();
        let (model, trace) = forward_select_calendar(
            &obs,
            SegmentKey::WINTER_WORKDAY,
            LagSpec::new(1, 1, 1).unwrap(),
            &config,
        )
        .unwrap();
        let admitted = trace.admitted();
        assert!(admitted.len() <= config.max_dummies);
        for entry in trace.entries.iter().filter(|e| e.accepted) {
            assert!(entry.p_value < config.p_entry);
        }
        // admitted dummies all appear in the final model, in canonical order
        let model_dummies = model.dummy_hours();
        let mut sorted = model_dummies.clone();
        sorted.sort();
        assert_eq!(model_dummies, sorted);
        assert_eq!(model_dummies.len(), admitted.len());
    }

    #[test]
    fn max_dummies_zero_keeps_base_model() {
        let obs = simulate(
            31,
            "2018-01-01T00:00",
            24 * 200,
            6.0,
            &[0.4],
            &[-0.2],
            &[],
            &[],
            1.0,
        );
        let config = SelectionConfig {
            max_dummies: 0,
            ..SelectionConfig::default()
        };
        let spec = LagSpec::new(1, 1, 1).unwrap();
        let (model, trace) =
            forward_select_calendar(&obs, SegmentKey::WINTER_WORKDAY, spec, &config).unwrap();
        assert!(trace.entries.is_empty());
        assert!(model.dummy_hours().is_empty());

        // identical coefficients to the direct plus-irradiation fit
        let matrix = build_design_matrix(
            &obs,
            SegmentKey::WINTER_WORKDAY,
            spec,
            ScenarioLevel::PlusIrradiation,
            &BTreeSet::new(),
        )
        .unwrap();
        let (train, _) = matrix.split_train_test();
        let direct = fit_ols(
            &train,
            SegmentKey::WINTER_WORKDAY,
            ScenarioLevel::PlusIrradiation,
            spec,
        )
        .unwrap();
        assert_eq!(model.coefficients, direct.coefficients);
    }

    #[test]
    fn model_name_formats() {
        use crate::features::column_layout;
        let spec = LagSpec::new(3, 1, 1).unwrap();
        let dummies: BTreeSet<HourOfWeek> = [
            HourOfWeek::from_day_hour(1, 1).unwrap(),  // TUE_1h
            HourOfWeek::from_day_hour(2, 3).unwrap(),  // WED_3h
            HourOfWeek::from_day_hour(2, 7).unwrap(),  // WED_7h
            HourOfWeek::from_day_hour(0, 8).unwrap(),  // MON_8h
        ]
        .into_iter()
        .collect();
        let columns = column_layout(spec, ScenarioLevel::PlusCalendar, &dummies);
        let model = FittedModel {
            segment: SegmentKey::WINTER_WORKDAY,
            scenario: ScenarioLevel::PlusCalendar,
            spec,
            coefficients: vec![0.0; columns.len()],
            standard_errors: vec![0.0; columns.len()],
            t_values: vec![0.0; columns.len()],
            p_values: vec![1.0; columns.len()],
            columns,
            n: 10,
            k: 12,
            rss: 1.0,
            sigma2: 1.0,
            r_squared: 0.5,
            adj_r_squared: 0.5,
            f_statistic: 1.0,
            prob_f: 0.5,
            aic: 0.0,
            bic: 0.0,
            residuals: vec![],
            dropped_columns: vec![],
        };
        assert_eq!(model_name(&model), "Q3_T1_I1 (MON_8h_TUE_1h_WED_3,7h)");

        let mut no_dummies = model.clone();
        no_dummies.spec = LagSpec::new(1, 1, 1).unwrap();
        no_dummies.columns = column_layout(no_dummies.spec, ScenarioLevel::PlusIrradiation, &BTreeSet::new());
        assert_eq!(model_name(&no_dummies), "Q1_T1_I1");

        let mut weekend = model.clone();
        weekend.columns = column_layout(
            spec,
            ScenarioLevel::PlusCalendar,
            &[
                HourOfWeek::from_day_hour(5, 22).unwrap(), // SAT_22h
                HourOfWeek::from_day_hour(6, 15).unwrap(), // SUN_15h
            ]
            .into_iter()
            .collect(),
        );
        assert_eq!(model_name(&weekend), "Q3_T1_I1 (SAT_22h_SUN_15h)");
    }

    #[test]
    fn lag_search_rejects_calendar_scenario() {
        let obs = simulate(1, "2018-01-01T00:00", 2000, 2.0, &[0.5], &[], &[], &[], 1.0);
        assert!(select_lag_orders(
            &obs,
            SegmentKey::WINTER_WORKDAY,
            ScenarioLevel::PlusCalendar,
            &SelectionConfig::default(),
        )
        .is_err());
    }

    #[test]
    fn config_validation() {
        let mut config = SelectionConfig::default();
        config.p_entry = 1.5;
        assert!(config.validate().is_err());
        config.p_entry = 0.05;
        config.na_max = 20;
        assert!(config.validate().is_err());
    }
}
