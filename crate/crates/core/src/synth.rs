//! Seeded generator of district-heating-like hourly datasets from a known
//! linear process, used as the ground-truth oracle in tests.
//!
//! Loads follow the modeled equation exactly: intercept, load lags,
//! temperature lags, irradiation lags, hour-of-week offsets and white noise.
//! Temperature is a seasonal plus daily sinusoid with noise; irradiation a
//! clipped daily sinusoid, zero at night. The four quarter-hour weather
//! samples of an hour repeat the hourly value, so resampling recovers the
//! exact series that drove the load. A warmup stretch simulated before the
//! requested range keeps every emitted row on the process equation.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::calendar::{HourOfWeek, Timestamp};
use crate::error::{Error, Result};

/// The full truth behind one generated dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    /// Lag orders of the generating process (`na`, `nb`, `nc`).
    pub na: usize,
    pub nb: usize,
    pub nc: usize,
    /// True value per column label (`const`, `Q1`, `T0`, `MON_8h`, ...).
    pub coefficients: BTreeMap<String, f64>,
    pub dummy_hours: Vec<HourOfWeek>,
    pub noise_sd: f64,
    /// Hours whose written load carries an injected spike.
    pub outlier_timestamps: Vec<Timestamp>,
    /// Hours whose load row was withheld.
    pub load_gap_timestamps: Vec<Timestamp>,
    /// Hours whose weather quarters were withheld.
    pub weather_gap_timestamps: Vec<Timestamp>,
}

/// Generator configuration; deserializable from a TOML key=value file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub start: Timestamp,
    /// Last generated hour, inclusive.
    pub end: Timestamp,
    pub intercept: f64,
    /// Load-lag coefficients `a_1..a_na`; their absolute sum must stay
    /// below 1.
    pub load_coefficients: Vec<f64>,
    /// Temperature coefficients `b_0..b_nb` (lag 0 first).
    pub temperature_coefficients: Vec<f64>,
    /// Irradiation coefficients `c_0..c_nc`.
    pub irradiation_coefficients: Vec<f64>,
    /// Additive offsets at specific hours of the week.
    pub dummy_offsets: BTreeMap<HourOfWeek, f64>,
    /// Standard deviation of the load noise (kWh).
    pub noise_sd: f64,
    pub temp_mean_c: f64,
    pub temp_seasonal_amplitude_c: f64,
    pub temp_daily_amplitude_c: f64,
    pub temp_noise_sd_c: f64,
    pub irr_peak_wm2: f64,
    /// Probability that an hour's load is written with a spike.
    pub outlier_rate: f64,
    /// Spike magnitude (kWh), added on top of the true load.
    pub outlier_magnitude_kwh: f64,
    /// Probability that an hour's load row, or its weather quarters, are
    /// withheld (drawn independently).
    pub gap_rate: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 1,
            start: Timestamp::new(2016, 1, 1, 0).expect("valid date"),
            end: Timestamp::new(2019, 12, 31, 23).expect("valid date"),
            intercept: 8.0,
            load_coefficients: vec![0.45, 0.2, 0.1],
            temperature_coefficients: vec![-0.2, -0.1],
            irradiation_coefficients: vec![-0.006, -0.004],
            dummy_offsets: [
                (HourOfWeek::from_day_hour(1, 1), 3.0),
                (HourOfWeek::from_day_hour(2, 3), 2.5),
                (HourOfWeek::from_day_hour(2, 7), 3.5),
                (HourOfWeek::from_day_hour(0, 8), 4.0),
            ]
            .into_iter()
            .map(|(h, v)| (h.expect("valid hour"), v))
            .collect(),
            noise_sd: 1.0,
            temp_mean_c: 4.0,
            temp_seasonal_amplitude_c: 9.0,
            temp_daily_amplitude_c: 3.0,
            temp_noise_sd_c: 1.5,
            irr_peak_wm2: 450.0,
            outlier_rate: 0.0,
            outlier_magnitude_kwh: 40.0,
            gap_rate: 0.0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let ar_sum: f64 = self.load_coefficients.iter().map(|a| a.abs()).sum();
        if ar_sum >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "autoregressive coefficients must be stable (sum of |a| = {ar_sum} >= 1)"
            )));
        }
        if self.noise_sd < 0.0 || self.temp_noise_sd_c < 0.0 {
            return Err(Error::InvalidInput("noise standard deviations must be >= 0".into()));
        }
        for (name, rate) in [("outlier_rate", self.outlier_rate), ("gap_rate", self.gap_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidInput(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.end < self.start {
            return Err(Error::InvalidInput("end precedes start".into()));
        }
        Ok(())
    }

    fn truth(&self) -> GroundTruth {
        let mut coefficients = BTreeMap::new();
        coefficients.insert("const".to_string(), self.intercept);
        for (i, a) in self.load_coefficients.iter().enumerate() {
            coefficients.insert(format!("Q{}", i + 1), *a);
        }
        for (i, b) in self.temperature_coefficients.iter().enumerate() {
            coefficients.insert(format!("T{i}"), *b);
        }
        for (i, c) in self.irradiation_coefficients.iter().enumerate() {
            coefficients.insert(format!("I{i}"), *c);
        }
        for (h, v) in &self.dummy_offsets {
            coefficients.insert(h.label(), *v);
        }
        GroundTruth {
            seed: self.seed,
            na: self.load_coefficients.len(),
            nb: self.temperature_coefficients.len().saturating_sub(1),
            nc: self.irradiation_coefficients.len().saturating_sub(1),
            coefficients,
            dummy_hours: self.dummy_offsets.keys().copied().collect(),
            noise_sd: self.noise_sd,
            outlier_timestamps: Vec::new(),
            load_gap_timestamps: Vec::new(),
            weather_gap_timestamps: Vec::new(),
        }
    }
}

/// A generated dataset: the two CSV payloads plus the generating truth.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub load_csv: String,
    pub weather_csv: String,
    pub truth: GroundTruth,
}

fn day_of_year(ts: Timestamp) -> f64 {
    const CUM: [u32; 12] = [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334];
    (CUM[ts.month() as usize - 1] + ts.day()) as f64
}

/// Simulates the configured process and renders the ingestion CSV formats.
/// Deterministic per seed.
pub fn generate(config: &GeneratorConfig) -> Result<GeneratedData> {
    config.validate()?;

    let mut weather_rng = ChaCha8Rng::seed_from_u64(config.seed);
    weather_rng.set_stream(0);
    let mut load_rng = ChaCha8Rng::seed_from_u64(config.seed);
    load_rng.set_stream(1);
    let mut corruption_rng = ChaCha8Rng::seed_from_u64(config.seed);
    corruption_rng.set_stream(2);

    let temp_noise = Normal::new(0.0, config.temp_noise_sd_c.max(f64::MIN_POSITIVE)).unwrap();
    let load_noise = Normal::new(0.0, config.noise_sd.max(f64::MIN_POSITIVE)).unwrap();

    let na = config.load_coefficients.len();
    let nb = config.temperature_coefficients.len();
    let nc = config.irradiation_coefficients.len();
    let warmup = 48 + na.max(nb).max(nc);
    let sim_start = config.start.add_hours(-(warmup as i64));
    let hours = config.end.hours_since(sim_start) as usize + 1;

    let tau = std::f64::consts::TAU;
    let mut temps = Vec::with_capacity(hours);
    let mut irrs = Vec::with_capacity(hours);
    for i in 0..hours {
        let ts = sim_start.add_hours(i as i64);
        let doy = day_of_year(ts);
        let hour = ts.hour() as f64;
        let seasonal = -config.temp_seasonal_amplitude_c * (tau * (doy - 15.0) / 365.25).cos();
        let daily = -config.temp_daily_amplitude_c * (tau * (hour - 14.0) / 24.0).cos();
        let noise = if config.temp_noise_sd_c > 0.0 {
            temp_noise.sample(&mut weather_rng)
        } else {
            0.0
        };
        temps.push(config.temp_mean_c + seasonal + daily + noise);

        let solar_factor = 0.75 - 0.25 * (tau * (doy - 15.0) / 365.25).cos();
        let daylight = ((hour - 6.0) * std::f64::consts::PI / 12.0).sin().max(0.0);
        irrs.push(config.irr_peak_wm2 * solar_factor * daylight);
    }

    // Steady-state initialization, then the recursion takes over; the warmup
    // stretch is discarded so every emitted hour satisfies the equation.
    let ar_sum: f64 = config.load_coefficients.iter().sum();
    let mut loads = vec![config.intercept / (1.0 - ar_sum); hours];
    for i in 0..hours {
        let ts = sim_start.add_hours(i as i64);
        let mut value = config.intercept;
        for (j, &a) in config.load_coefficients.iter().enumerate() {
            let lag = j + 1;
            let lagged = if i >= lag { loads[i - lag] } else { loads[0] };
            value += a * lagged;
        }
        for (j, &b) in config.temperature_coefficients.iter().enumerate() {
            if i >= j {
                value += b * temps[i - j];
            }
        }
        for (j, &c) in config.irradiation_coefficients.iter().enumerate() {
            if i >= j {
                value += c * irrs[i - j];
            }
        }
        let how = ts.hour_of_week();
        if let Some(offset) = config.dummy_offsets.get(&how) {
            value += offset;
        }
        if config.noise_sd > 0.0 {
            value += load_noise.sample(&mut load_rng);
        }
        loads[i] = value;
    }

    let mut truth = config.truth();
    let mut load_csv = String::from("timestamp,load_kwh\n");
    let mut weather_csv = String::from("timestamp,temp_c,irr_wm2\n");
    for i in warmup..hours {
        let ts = sim_start.add_hours(i as i64);
        let load_gap = config.gap_rate > 0.0 && corruption_rng.random_bool(config.gap_rate);
        let weather_gap = config.gap_rate > 0.0 && corruption_rng.random_bool(config.gap_rate);
        let spike = config.outlier_rate > 0.0 && corruption_rng.random_bool(config.outlier_rate);

        if load_gap {
            truth.load_gap_timestamps.push(ts);
        } else {
            let mut value = loads[i];
            if spike {
                value += config.outlier_magnitude_kwh;
                truth.outlier_timestamps.push(ts);
            }
            load_csv.push_str(&format!("{ts},{value}\n"));
        }

        if weather_gap {
            truth.weather_gap_timestamps.push(ts);
        } else {
            for minute in [0, 15, 30, 45] {
                weather_csv.push_str(&format!(
                    "{:04}-{:02}-{:02}T{:02}:{minute:02},{},{}\n",
                    ts.year(),
                    ts.month(),
                    ts.day(),
                    ts.hour(),
                    temps[i],
                    irrs[i]
                ));
            }
        }
    }

    Ok(GeneratedData {
        load_csv,
        weather_csv,
        truth,
    })
}
