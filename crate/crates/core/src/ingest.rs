//! CSV ingestion and alignment of heat-meter and weather data.
//!
//! Two file formats come in: hourly meter loads (`timestamp,load_kwh`) and
//! quarter-hourly weather (`timestamp,temp_c,irr_wm2`). Weather is resampled
//! to hourly means and both series are outer-joined into one sorted hourly
//! observation series.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use chrono::{NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::calendar::Timestamp;
use crate::error::{Error, Result};

/// Per-field data quality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quality {
    /// Value as measured (hourly meter reading).
    Observed,
    /// Hourly mean of at least 3 of 4 quarter-hour weather samples.
    Resampled,
    /// Linearly interpolated across a short gap.
    Imputed,
    /// No usable value.
    Missing,
    /// Observed but excluded from modeling by outlier detection.
    Outlier,
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quality::Observed => "observed",
            Quality::Resampled => "resampled",
            Quality::Imputed => "imputed",
            Quality::Missing => "missing",
            Quality::Outlier => "outlier",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Quality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "observed" => Ok(Quality::Observed),
            "resampled" => Ok(Quality::Resampled),
            "imputed" => Ok(Quality::Imputed),
            "missing" => Ok(Quality::Missing),
            "outlier" => Ok(Quality::Outlier),
            other => Err(Error::InvalidInput(format!("unknown quality flag {other:?}"))),
        }
    }
}

/// One measured field with its quality flag. A `Missing` field has no value;
/// an `Outlier` field keeps the raw value for reporting but is unusable for
/// modeling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub value: Option<f64>,
    pub quality: Quality,
}

impl Measurement {
    pub const MISSING: Measurement = Measurement {
        value: None,
        quality: Quality::Missing,
    };

    pub fn new(value: f64, quality: Quality) -> Self {
        Measurement {
            value: Some(value),
            quality,
        }
    }

    /// The value if it may enter a model (observed, resampled or imputed).
    pub fn usable(&self) -> Option<f64> {
        match self.quality {
            Quality::Observed | Quality::Resampled | Quality::Imputed => self.value,
            Quality::Missing | Quality::Outlier => None,
        }
    }
}

/// One row of the aligned hourly series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyObservation {
    pub ts: Timestamp,
    pub load: Measurement,
    pub temperature: Measurement,
    pub irradiation: Measurement,
}

/// A parsed row of the hourly load CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RawLoadRecord {
    pub ts: Timestamp,
    pub load_kwh: f64,
}

/// A parsed row of the quarter-hourly weather CSV. Empty fields are kept as
/// `None` and simply count as absent samples during resampling.
#[derive(Debug, Clone, PartialEq)]
pub struct RawWeatherRecord {
    pub ts_quarter: NaiveDateTime,
    pub temp_c: Option<f64>,
    pub irr_wm2: Option<f64>,
}

fn csv_err(line: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        line,
        message: message.into(),
    }
}

fn split_fields(line: &str) -> Vec<&str> {
    line.trim_end_matches(['\r', '\n']).split(',').collect()
}

fn parse_number(field: &str, name: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| csv_err(line, format!("cannot parse {name} value {field:?} as a number")))
}

/// Parses the hourly load CSV (`timestamp,load_kwh`). Rows come back in file
/// order; any malformed row aborts with its line number.
pub fn parse_load_csv<R: BufRead>(reader: R) -> Result<Vec<RawLoadRecord>> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file, expected header `timestamp,load_kwh`"))?;
    let header = header?;
    if split_fields(&header) != ["timestamp", "load_kwh"] {
        return Err(csv_err(1, format!(
            "expected header `timestamp,load_kwh`, found {header:?}"
        )));
    }

    let mut records = Vec::new();
    let mut seen: BTreeMap<Timestamp, usize> = BTreeMap::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_fields(&line);
        if fields.len() != 2 {
            return Err(csv_err(line_no, format!("expected 2 fields, found {}", fields.len())));
        }
        let ts: Timestamp = fields[0]
            .trim()
            .parse()
            .map_err(|e| csv_err(line_no, format!("{e}")))?;
        if let Some(first) = seen.insert(ts, line_no) {
            let _ = first;
            return Err(Error::DuplicateTimestamp {
                line: line_no,
                timestamp: ts.to_string(),
            });
        }
        let load_kwh = parse_number(fields[1], "load_kwh", line_no)?;
        records.push(RawLoadRecord { ts, load_kwh });
    }
    Ok(records)
}

/// Parses the quarter-hourly weather CSV (`timestamp,temp_c,irr_wm2`).
/// Timestamps must sit on a 15-minute boundary; empty value fields are
/// treated as absent samples.
pub fn parse_weather_csv<R: BufRead>(reader: R) -> Result<Vec<RawWeatherRecord>> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file, expected header `timestamp,temp_c,irr_wm2`"))?;
    let header = header?;
    if split_fields(&header) != ["timestamp", "temp_c", "irr_wm2"] {
        return Err(csv_err(1, format!(
            "expected header `timestamp,temp_c,irr_wm2`, found {header:?}"
        )));
    }

    let mut records = Vec::new();
    let mut seen: BTreeMap<NaiveDateTime, usize> = BTreeMap::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_fields(&line);
        if fields.len() != 3 {
            return Err(csv_err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        let ts = NaiveDateTime::parse_from_str(fields[0].trim(), "%Y-%m-%dT%H:%M")
            .map_err(|e| csv_err(line_no, format!("invalid timestamp {:?}: {e}", fields[0])))?;
        if ts.minute() % 15 != 0 || ts.second() != 0 {
            return Err(csv_err(line_no, format!(
                "timestamp {} is not on a 15-minute boundary",
                fields[0].trim()
            )));
        }
        if seen.insert(ts, line_no).is_some() {
            return Err(Error::DuplicateTimestamp {
                line: line_no,
                timestamp: fields[0].trim().to_string(),
            });
        }
        let parse_opt = |field: &str, name: &str| -> Result<Option<f64>> {
            if field.trim().is_empty() {
                Ok(None)
            } else {
                parse_number(field, name, line_no).map(Some)
            }
        };
        records.push(RawWeatherRecord {
            ts_quarter: ts,
            temp_c: parse_opt(fields[1], "temp_c")?,
            irr_wm2: parse_opt(fields[2], "irr_wm2")?,
        });
    }
    Ok(records)
}

/// Hourly weather after resampling.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyWeather {
    pub ts: Timestamp,
    pub temperature: Measurement,
    pub irradiation: Measurement,
}

fn hour_mean(samples: &[f64]) -> Measurement {
    // At least 3 of the 4 quarter-hour samples must be present.
    if samples.len() >= 3 {
        Measurement::new(samples.iter().sum::<f64>() / samples.len() as f64, Quality::Resampled)
    } else {
        Measurement::MISSING
    }
}

/// Averages quarter-hour samples into hourly values. A quarter-hour sample at
/// H:00..H:45 belongs to hour H (left-closed attribution); hours with fewer
/// than 3 of 4 samples for a variable become `Missing` for that variable.
pub fn resample_weather(records: &[RawWeatherRecord]) -> Vec<HourlyWeather> {
    let mut by_hour: BTreeMap<Timestamp, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for rec in records {
        let d = rec.ts_quarter.date();
        let ts = Timestamp::new(
            chrono::Datelike::year(&d),
            chrono::Datelike::month(&d),
            chrono::Datelike::day(&d),
            rec.ts_quarter.hour(),
        )
        .expect("hour of a valid datetime is valid");
        let entry = by_hour.entry(ts).or_default();
        if let Some(t) = rec.temp_c {
            entry.0.push(t);
        }
        if let Some(i) = rec.irr_wm2 {
            entry.1.push(i);
        }
    }
    by_hour
        .into_iter()
        .map(|(ts, (temps, irrs))| HourlyWeather {
            ts,
            temperature: hour_mean(&temps),
            irradiation: hour_mean(&irrs),
        })
        .collect()
}

/// Writes the cleaned-series interchange CSV:
/// `timestamp,load_kwh,load_quality,temp_c,temp_quality,irr_wm2,irr_quality`.
/// Absent values render as empty fields; outlier loads keep their raw value
/// next to the `outlier` flag.
pub fn write_cleaned_csv<W: std::io::Write>(obs: &[HourlyObservation], mut w: W) -> Result<()> {
    writeln!(
        w,
        "timestamp,load_kwh,load_quality,temp_c,temp_quality,irr_wm2,irr_quality"
    )?;
    let field = |m: &Measurement| m.value.map(|v| v.to_string()).unwrap_or_default();
    for o in obs {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            o.ts,
            field(&o.load),
            o.load.quality,
            field(&o.temperature),
            o.temperature.quality,
            field(&o.irradiation),
            o.irradiation.quality
        )?;
    }
    Ok(())
}

/// Parses the cleaned-series interchange CSV back into observations.
pub fn parse_cleaned_csv<R: BufRead>(reader: R) -> Result<Vec<HourlyObservation>> {
    const HEADER: [&str; 7] = [
        "timestamp",
        "load_kwh",
        "load_quality",
        "temp_c",
        "temp_quality",
        "irr_wm2",
        "irr_quality",
    ];
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file, expected cleaned-series header"))?;
    let header = header?;
    if split_fields(&header) != HEADER {
        return Err(csv_err(1, format!("unexpected cleaned-series header {header:?}")));
    }

    let mut obs = Vec::new();
    let mut last_ts: Option<Timestamp> = None;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_fields(&line);
        if fields.len() != 7 {
            return Err(csv_err(line_no, format!("expected 7 fields, found {}", fields.len())));
        }
        let ts: Timestamp = fields[0]
            .trim()
            .parse()
            .map_err(|e| csv_err(line_no, format!("{e}")))?;
        if last_ts.is_some_and(|prev| ts <= prev) {
            return Err(csv_err(line_no, "timestamps must be strictly increasing"));
        }
        last_ts = Some(ts);
        let measurement = |value: &str, quality: &str| -> Result<Measurement> {
            let quality: Quality = quality
                .trim()
                .parse()
                .map_err(|e| csv_err(line_no, format!("{e}")))?;
            let value = if value.trim().is_empty() {
                None
            } else {
                Some(parse_number(value, "value", line_no)?)
            };
            if value.is_none() && quality != Quality::Missing {
                return Err(csv_err(line_no, format!(
                    "empty value cannot carry quality {quality}"
                )));
            }
            Ok(Measurement { value, quality })
        };
        obs.push(HourlyObservation {
            ts,
            load: measurement(fields[1], fields[2])?,
            temperature: measurement(fields[3], fields[4])?,
            irradiation: measurement(fields[5], fields[6])?,
        });
    }
    Ok(obs)
}

/// Parses an hourly exogenous CSV (`timestamp,temp_c,irr_wm2` at whole
/// hours), as consumed by forecasting. Empty fields are absent values.
pub fn parse_hourly_exog_csv<R: BufRead>(
    reader: R,
) -> Result<Vec<(Timestamp, Option<f64>, Option<f64>)>> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file, expected header `timestamp,temp_c,irr_wm2`"))?;
    let header = header?;
    if split_fields(&header) != ["timestamp", "temp_c", "irr_wm2"] {
        return Err(csv_err(1, format!(
            "expected header `timestamp,temp_c,irr_wm2`, found {header:?}"
        )));
    }
    let mut rows = Vec::new();
    let mut seen: BTreeMap<Timestamp, usize> = BTreeMap::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_fields(&line);
        if fields.len() != 3 {
            return Err(csv_err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        let ts: Timestamp = fields[0]
            .trim()
            .parse()
            .map_err(|e| csv_err(line_no, format!("{e}")))?;
        if seen.insert(ts, line_no).is_some() {
            return Err(Error::DuplicateTimestamp {
                line: line_no,
                timestamp: ts.to_string(),
            });
        }
        let parse_opt = |field: &str, name: &str| -> Result<Option<f64>> {
            if field.trim().is_empty() {
                Ok(None)
            } else {
                parse_number(field, name, line_no).map(Some)
            }
        };
        rows.push((ts, parse_opt(fields[1], "temp_c")?, parse_opt(fields[2], "irr_wm2")?));
    }
    Ok(rows)
}

/// Outer-joins hourly loads and hourly weather into one sorted observation
/// series; fields absent on either side are `Missing`.
pub fn align(loads: &[RawLoadRecord], weather: &[HourlyWeather]) -> Vec<HourlyObservation> {
    let mut merged: BTreeMap<Timestamp, HourlyObservation> = BTreeMap::new();
    for load in loads {
        merged.insert(
            load.ts,
            HourlyObservation {
                ts: load.ts,
                load: Measurement::new(load.load_kwh, Quality::Observed),
                temperature: Measurement::MISSING,
                irradiation: Measurement::MISSING,
            },
        );
    }
    for w in weather {
        let entry = merged.entry(w.ts).or_insert(HourlyObservation {
            ts: w.ts,
            load: Measurement::MISSING,
            temperature: Measurement::MISSING,
            irradiation: Measurement::MISSING,
        });
        entry.temperature = w.temperature;
        entry.irradiation = w.irradiation;
    }
    merged.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn ts(s: &str) -> Timestamp {
        s.parse().unwrap()
    }

    fn quarter(s: &str) -> NaiveDateTime {
        NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M").unwrap()
    }

    #[test]
    fn parses_load_rows_in_order() {
        let csv = "timestamp,load_kwh\n2019-01-01T00:00,23.5\n2019-01-01T01:00,24.0\n";
        let records = parse_load_csv(Cursor::new(csv)).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].ts, ts("2019-01-01T00:00"));
        assert_eq!(records[0].load_kwh, 23.5);
    }

    #[test]
    fn load_parse_error_carries_line_number() {
        let csv = "timestamp,load_kwh\n2019-01-01T00:00,abc\n";
        let err = parse_load_csv(Cursor::new(csv)).unwrap_err();
        match err {
            Error::Csv { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_duplicate_timestamp_rejected() {
        let csv = "timestamp,load_kwh\n2019-01-01T00:00,1\n2019-01-01T00:00,2\n";
        let err = parse_load_csv(Cursor::new(csv)).unwrap_err();
        match err {
            Error::DuplicateTimestamp { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn load_missing_header_rejected() {
        let csv = "time,load\n2019-01-01T00:00,1\n";
        assert!(matches!(
            parse_load_csv(Cursor::new(csv)).unwrap_err(),
            Error::Csv { line: 1, .. }
        ));
    }

    #[test]
    fn weather_rejects_off_grid_minutes() {
        let csv = "timestamp,temp_c,irr_wm2\n2019-01-01T00:10,1.0,0\n";
        assert!(parse_weather_csv(Cursor::new(csv)).is_err());
    }

    fn weather_records(samples: &[(&str, Option<f64>)]) -> Vec<RawWeatherRecord> {
        samples
            .iter()
            .map(|(s, t)| RawWeatherRecord {
                ts_quarter: quarter(s),
                temp_c: *t,
                irr_wm2: Some(0.0),
            })
            .collect()
    }

    #[test]
    fn resample_means_four_samples() {
        let recs = weather_records(&[
            ("2019-01-01T00:00", Some(1.0)),
            ("2019-01-01T00:15", Some(2.0)),
            ("2019-01-01T00:30", Some(3.0)),
            ("2019-01-01T00:45", Some(4.0)),
        ]);
        let hourly = resample_weather(&recs);
        assert_eq!(hourly.len(), 1);
        assert_eq!(hourly[0].temperature, Measurement::new(2.5, Quality::Resampled));
    }

    #[test]
    fn resample_means_three_samples() {
        let recs = weather_records(&[
            ("2019-01-01T00:00", Some(1.0)),
            ("2019-01-01T00:15", Some(2.0)),
            ("2019-01-01T00:30", Some(3.0)),
        ]);
        let hourly = resample_weather(&recs);
        assert_eq!(hourly[0].temperature, Measurement::new(2.0, Quality::Resampled));
    }

    #[test]
    fn resample_below_threshold_is_missing() {
        let recs = weather_records(&[
            ("2019-01-01T00:00", Some(1.0)),
            ("2019-01-01T00:15", Some(2.0)),
        ]);
        let hourly = resample_weather(&recs);
        assert_eq!(hourly[0].temperature, Measurement::MISSING);
    }

    #[test]
    fn resample_counts_variables_independently() {
        // Four irradiation samples but only two temperatures in the hour.
        let recs = vec![
            RawWeatherRecord { ts_quarter: quarter("2019-01-01T00:00"), temp_c: Some(1.0), irr_wm2: Some(10.0) },
            RawWeatherRecord { ts_quarter: quarter("2019-01-01T00:15"), temp_c: None, irr_wm2: Some(20.0) },
            RawWeatherRecord { ts_quarter: quarter("2019-01-01T00:30"), temp_c: Some(3.0), irr_wm2: Some(30.0) },
            RawWeatherRecord { ts_quarter: quarter("2019-01-01T00:45"), temp_c: None, irr_wm2: Some(40.0) },
        ];
        let hourly = resample_weather(&recs);
        assert_eq!(hourly[0].temperature, Measurement::MISSING);
        assert_eq!(hourly[0].irradiation, Measurement::new(25.0, Quality::Resampled));
    }

    #[test]
    fn resampled_mean_of_constant_series_is_constant() {
        let mut recs = Vec::new();
        for h in 0..24 {
            for m in [0, 15, 30, 45] {
                recs.push(RawWeatherRecord {
                    ts_quarter: quarter(&format!("2019-01-01T{h:02}:{m:02}")),
                    temp_c: Some(7.5),
                    irr_wm2: Some(100.0),
                });
            }
        }
        for h in resample_weather(&recs) {
            assert_eq!(h.temperature.value, Some(7.5));
            assert_eq!(h.irradiation.value, Some(100.0));
        }
    }

    #[test]
    fn align_outer_join() {
        let loads = vec![
            RawLoadRecord { ts: ts("2019-01-01T00:00"), load_kwh: 1.0 },
            RawLoadRecord { ts: ts("2019-01-01T01:00"), load_kwh: 2.0 },
        ];
        let weather = vec![
            HourlyWeather {
                ts: ts("2019-01-01T01:00"),
                temperature: Measurement::new(5.0, Quality::Resampled),
                irradiation: Measurement::new(0.0, Quality::Resampled),
            },
            HourlyWeather {
                ts: ts("2019-01-01T02:00"),
                temperature: Measurement::new(6.0, Quality::Resampled),
                irradiation: Measurement::new(0.0, Quality::Resampled),
            },
        ];
        let obs = align(&loads, &weather);
        assert_eq!(obs.len(), 3);
        assert_eq!(obs[0].load.value, Some(1.0));
        assert_eq!(obs[0].temperature.quality, Quality::Missing);
        assert_eq!(obs[1].load.value, Some(2.0));
        assert_eq!(obs[1].temperature.value, Some(5.0));
        assert_eq!(obs[2].load.quality, Quality::Missing);
        assert_eq!(obs[2].temperature.value, Some(6.0));
        // sorted ascending and keyed by the key union
        assert!(obs.windows(2).all(|w| w[0].ts < w[1].ts));
    }

    #[test]
    fn cleaned_csv_roundtrip_preserves_values_and_flags() {
        let obs = vec![
            HourlyObservation {
                ts: ts("2019-01-01T00:00"),
                load: Measurement::new(23.5, Quality::Observed),
                temperature: Measurement::new(-4.25, Quality::Resampled),
                irradiation: Measurement::MISSING,
            },
            HourlyObservation {
                ts: ts("2019-01-01T01:00"),
                load: Measurement::new(99.0, Quality::Outlier),
                temperature: Measurement::new(-4.0, Quality::Imputed),
                irradiation: Measurement::new(0.0, Quality::Resampled),
            },
        ];
        let mut buf = Vec::new();
        write_cleaned_csv(&obs, &mut buf).unwrap();
        let back = parse_cleaned_csv(Cursor::new(buf)).unwrap();
        assert_eq!(back, obs);
        assert!(back[1].load.usable().is_none());
        assert_eq!(back[1].load.value, Some(99.0));
    }

    #[test]
    fn cleaned_csv_rejects_value_with_missing_flag() {
        let csv = "timestamp,load_kwh,load_quality,temp_c,temp_quality,irr_wm2,irr_quality\n\
                   2019-01-01T00:00,,observed,1.0,resampled,0,resampled\n";
        assert!(parse_cleaned_csv(Cursor::new(csv)).is_err());
    }

    #[test]
    fn hourly_exog_csv_parses_gaps() {
        let csv = "timestamp,temp_c,irr_wm2\n2019-01-01T00:00,1.5,\n2019-01-01T01:00,,20\n";
        let rows = parse_hourly_exog_csv(Cursor::new(csv)).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].1, Some(1.5));
        assert_eq!(rows[0].2, None);
        assert_eq!(rows[1].1, None);
        assert_eq!(rows[1].2, Some(20.0));
    }

    #[test]
    fn align_empty_weather_leaves_weather_missing() {
        let loads = vec![RawLoadRecord { ts: ts("2019-01-01T00:00"), load_kwh: 1.0 }];
        let obs = align(&loads, &[]);
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].temperature.quality, Quality::Missing);
        assert_eq!(obs[0].irradiation.quality, Quality::Missing);
    }

    proptest::proptest! {
        #[test]
        fn resampled_mean_lies_within_sample_range(samples in proptest::collection::vec(-50.0f64..50.0, 3..=4)) {
            let recs: Vec<RawWeatherRecord> = samples
                .iter()
                .enumerate()
                .map(|(i, &t)| RawWeatherRecord {
                    ts_quarter: quarter(&format!("2019-01-01T00:{:02}", i * 15)),
                    temp_c: Some(t),
                    irr_wm2: None,
                })
                .collect();
            let hourly = resample_weather(&recs);
            let mean = hourly[0].temperature.value.unwrap();
            let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            proptest::prop_assert!(mean >= lo - 1e-12 && mean <= hi + 1e-12);
        }
    }
}
