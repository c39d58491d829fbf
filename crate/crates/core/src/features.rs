//! Regression design matrices: lagged load, lagged temperature, lagged
//! irradiation, hour-of-week dummies and an intercept, under a nested data
//! scenario.
//!
//! Row eligibility always uses the full lag specification (load lags 1..na,
//! temperature lags 0..nb, irradiation lags 0..nc) regardless of the
//! scenario, so nested scenario matrices built from the same data and spec
//! share exactly the same rows and differ only in columns. Lag windows may
//! cross the workday/weekend boundary (the physical history is continuous)
//! but never cross gaps: any missing or outlier value inside the window
//! drops the row.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::calendar::{DayType, HourOfWeek, SegmentKey, Timestamp};
use crate::error::{EmptyCause, Error, Result};
use crate::ingest::HourlyObservation;

/// Lag orders of the three dynamic variable groups: load lags `1..=na`,
/// temperature lags `0..=nb`, irradiation lags `0..=nc` (lag 0 is the
/// present value).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LagSpec {
    pub na: u32,
    pub nb: u32,
    pub nc: u32,
}

impl LagSpec {
    pub const MAX_NA: u32 = 12;
    pub const MAX_NB: u32 = 24;
    pub const MAX_NC: u32 = 24;

    pub fn new(na: u32, nb: u32, nc: u32) -> Result<Self> {
        if !(1..=Self::MAX_NA).contains(&na) {
            return Err(Error::InvalidInput(format!("na = {na} outside 1..=12")));
        }
        if nb > Self::MAX_NB {
            return Err(Error::InvalidInput(format!("nb = {nb} outside 0..=24")));
        }
        if nc > Self::MAX_NC {
            return Err(Error::InvalidInput(format!("nc = {nc} outside 0..=24")));
        }
        Ok(LagSpec { na, nb, nc })
    }

    /// Longest lag any variable reaches back.
    pub fn max_lag(&self) -> u32 {
        self.na.max(self.nb).max(self.nc)
    }
}

/// Nested regressor sets; each level strictly contains the previous one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioLevel {
    LoadOnly,
    PlusTemperature,
    PlusIrradiation,
    PlusCalendar,
}

impl ScenarioLevel {
    pub fn includes_temperature(&self) -> bool {
        *self >= ScenarioLevel::PlusTemperature
    }

    pub fn includes_irradiation(&self) -> bool {
        *self >= ScenarioLevel::PlusIrradiation
    }

    pub fn includes_calendar(&self) -> bool {
        *self >= ScenarioLevel::PlusCalendar
    }

    pub fn slug(&self) -> &'static str {
        match self {
            ScenarioLevel::LoadOnly => "load_only",
            ScenarioLevel::PlusTemperature => "plus_temperature",
            ScenarioLevel::PlusIrradiation => "plus_irradiation",
            ScenarioLevel::PlusCalendar => "plus_calendar",
        }
    }
}

impl fmt::Display for ScenarioLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.slug())
    }
}

impl FromStr for ScenarioLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "load_only" | "load-only" => Ok(ScenarioLevel::LoadOnly),
            "plus_temperature" | "plus-temperature" => Ok(ScenarioLevel::PlusTemperature),
            "plus_irradiation" | "plus-irradiation" => Ok(ScenarioLevel::PlusIrradiation),
            "plus_calendar" | "plus-calendar" => Ok(ScenarioLevel::PlusCalendar),
            other => Err(Error::InvalidInput(format!("unknown scenario {other:?}"))),
        }
    }
}

/// Identity of one design-matrix column. Labels follow the notation of the
/// fitted-model summaries: `const`, `Q3` (load lag 3), `T0` (present
/// temperature), `I1` (irradiation lag 1), `MON_8h` (calendar dummy). Labels
/// round-trip through [`FromStr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnDescriptor {
    Intercept,
    LoadLag(u32),
    TempLag(u32),
    IrrLag(u32),
    CalendarDummy(HourOfWeek),
}

impl ColumnDescriptor {
    pub fn label(&self) -> String {
        match self {
            ColumnDescriptor::Intercept => "const".to_string(),
            ColumnDescriptor::LoadLag(k) => format!("Q{k}"),
            ColumnDescriptor::TempLag(k) => format!("T{k}"),
            ColumnDescriptor::IrrLag(k) => format!("I{k}"),
            ColumnDescriptor::CalendarDummy(h) => h.label(),
        }
    }

    pub fn is_dummy(&self) -> bool {
        matches!(self, ColumnDescriptor::CalendarDummy(_))
    }
}

impl fmt::Display for ColumnDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for ColumnDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "const" {
            return Ok(ColumnDescriptor::Intercept);
        }
        if let Some(rest) = s.strip_prefix('Q') {
            if let Ok(k) = rest.parse() {
                return Ok(ColumnDescriptor::LoadLag(k));
            }
        }
        if let Some(rest) = s.strip_prefix('T') {
            if let Ok(k) = rest.parse() {
                return Ok(ColumnDescriptor::TempLag(k));
            }
        }
        if let Some(rest) = s.strip_prefix('I') {
            if let Ok(k) = rest.parse() {
                return Ok(ColumnDescriptor::IrrLag(k));
            }
        }
        s.parse::<HourOfWeek>()
            .map(ColumnDescriptor::CalendarDummy)
            .map_err(|_| Error::InvalidInput(format!("unknown column label {s:?}")))
    }
}

impl Serialize for ColumnDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for ColumnDescriptor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A fully dense regression system: regressor matrix, target vector, row
/// timestamps and per-column descriptors.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub columns: Vec<ColumnDescriptor>,
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub timestamps: Vec<Timestamp>,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn cols(&self) -> usize {
        self.x.ncols()
    }

    pub fn column_index(&self, descriptor: &ColumnDescriptor) -> Option<usize> {
        self.columns.iter().position(|c| c == descriptor)
    }

    /// A new matrix keeping only the given rows (indices must be in range).
    pub fn select_rows(&self, rows: &[usize]) -> DesignMatrix {
        let x = DMatrix::from_fn(rows.len(), self.cols(), |i, j| self.x[(rows[i], j)]);
        let y = DVector::from_fn(rows.len(), |i, _| self.y[rows[i]]);
        let timestamps = rows.iter().map(|&i| self.timestamps[i]).collect();
        DesignMatrix {
            columns: self.columns.clone(),
            x,
            y,
            timestamps,
        }
    }

    /// Splits rows into (train, test) matrices by target day-of-month parity:
    /// odd days train, even days test.
    pub fn split_train_test(&self) -> (DesignMatrix, DesignMatrix) {
        let train: Vec<usize> = (0..self.rows())
            .filter(|&i| self.timestamps[i].day() % 2 == 1)
            .collect();
        let test: Vec<usize> = (0..self.rows())
            .filter(|&i| self.timestamps[i].day() % 2 == 0)
            .collect();
        (self.select_rows(&train), self.select_rows(&test))
    }

    /// Writes the matrix as CSV for external verification: descriptor labels
    /// as header, plus leading `timestamp` and trailing `target` columns.
    pub fn to_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        write!(w, "timestamp")?;
        for c in &self.columns {
            write!(w, ",{}", c.label())?;
        }
        writeln!(w, ",target")?;
        for i in 0..self.rows() {
            write!(w, "{}", self.timestamps[i])?;
            for j in 0..self.cols() {
                write!(w, ",{}", self.x[(i, j)])?;
            }
            writeln!(w, ",{}", self.y[i])?;
        }
        Ok(())
    }
}

/// One-hot indicator over the dummy hours eligible for a day type (120
/// workday hours or 48 weekend hours). Errors when the timestamp's day type
/// does not match.
pub fn calendar_dummies(ts: Timestamp, daytype: DayType) -> Result<Vec<f64>> {
    if ts.daytype() != daytype {
        return Err(Error::InvalidInput(format!(
            "timestamp {ts} is a {} but dummies were requested for {daytype}",
            ts.daytype()
        )));
    }
    let eligible = HourOfWeek::eligible_for(daytype);
    let how = ts.hour_of_week();
    Ok(eligible
        .iter()
        .map(|h| if *h == how { 1.0 } else { 0.0 })
        .collect())
}

/// The column layout for a scenario: intercept, load lags, then temperature
/// and irradiation lags when the scenario includes them, then the given
/// dummies (calendar scenario only) in ascending hour-of-week order.
pub fn column_layout(
    spec: LagSpec,
    scenario: ScenarioLevel,
    dummies: &BTreeSet<HourOfWeek>,
) -> Vec<ColumnDescriptor> {
    let mut columns = vec![ColumnDescriptor::Intercept];
    for k in 1..=spec.na {
        columns.push(ColumnDescriptor::LoadLag(k));
    }
    if scenario.includes_temperature() {
        for k in 0..=spec.nb {
            columns.push(ColumnDescriptor::TempLag(k));
        }
    }
    if scenario.includes_irradiation() {
        for k in 0..=spec.nc {
            columns.push(ColumnDescriptor::IrrLag(k));
        }
    }
    if scenario.includes_calendar() {
        for h in dummies {
            columns.push(ColumnDescriptor::CalendarDummy(*h));
        }
    }
    columns
}

/// Observations re-indexed onto a dense hourly axis so lag lookups are plain
/// index arithmetic. Hours with no row at all become fully missing slots.
struct DenseSeries {
    load: Vec<Option<f64>>,
    temp: Vec<Option<f64>>,
    irr: Vec<Option<f64>>,
    timestamps: Vec<Timestamp>,
}

impl DenseSeries {
    fn build(obs: &[HourlyObservation]) -> Option<DenseSeries> {
        let first = obs.first()?.ts;
        let last = obs.last()?.ts;
        let len = last.hours_since(first) as usize + 1;
        let mut series = DenseSeries {
            load: vec![None; len],
            temp: vec![None; len],
            irr: vec![None; len],
            timestamps: (0..len).map(|i| first.add_hours(i as i64)).collect(),
        };
        for o in obs {
            let idx = o.ts.hours_since(first) as usize;
            series.load[idx] = o.load.usable();
            series.temp[idx] = o.temperature.usable();
            series.irr[idx] = o.irradiation.usable();
        }
        Some(series)
    }
}

/// Builds the design matrix for one segment under a scenario. Rows are the
/// timestamps that match the segment, hold a usable load, and whose full lag
/// window (per the spec, for all three variable groups) is usable at
/// consecutive hourly steps. Requires observations sorted by timestamp.
pub fn build_design_matrix(
    obs: &[HourlyObservation],
    segment: SegmentKey,
    spec: LagSpec,
    scenario: ScenarioLevel,
    dummies: &BTreeSet<HourOfWeek>,
) -> Result<DesignMatrix> {
    if let Some(bad) = dummies.iter().find(|h| h.daytype() != segment.daytype()) {
        return Err(Error::InvalidInput(format!(
            "dummy {bad} is not eligible for {} models",
            segment.daytype()
        )));
    }

    let empty = |cause: EmptyCause| Error::EmptySegment {
        segment: segment.to_string(),
        cause,
    };
    let dense = DenseSeries::build(obs).ok_or_else(|| empty(EmptyCause::SegmentFilter))?;

    let max_lag = spec.max_lag() as usize;
    let mut rows: Vec<usize> = Vec::new();
    let mut any_segment_match = false;
    for t in 0..dense.timestamps.len() {
        if !segment.contains(dense.timestamps[t]) {
            continue;
        }
        any_segment_match = true;
        if t < max_lag || dense.load[t].is_none() {
            continue;
        }
        let load_ok = (1..=spec.na as usize).all(|l| dense.load[t - l].is_some());
        let temp_ok = (0..=spec.nb as usize).all(|l| dense.temp[t - l].is_some());
        let irr_ok = (0..=spec.nc as usize).all(|l| dense.irr[t - l].is_some());
        if load_ok && temp_ok && irr_ok {
            rows.push(t);
        }
    }

    if rows.is_empty() {
        let cause = if any_segment_match {
            EmptyCause::Gaps
        } else {
            EmptyCause::SegmentFilter
        };
        return Err(empty(cause));
    }

    let columns = column_layout(spec, scenario, dummies);
    let mut x = DMatrix::zeros(rows.len(), columns.len());
    let mut y = DVector::zeros(rows.len());
    let mut timestamps = Vec::with_capacity(rows.len());
    for (i, &t) in rows.iter().enumerate() {
        y[i] = dense.load[t].expect("row filter checked load");
        timestamps.push(dense.timestamps[t]);
        let how = dense.timestamps[t].hour_of_week();
        for (j, col) in columns.iter().enumerate() {
            x[(i, j)] = match col {
                ColumnDescriptor::Intercept => 1.0,
                ColumnDescriptor::LoadLag(k) => {
                    dense.load[t - *k as usize].expect("row filter checked load lags")
                }
                ColumnDescriptor::TempLag(k) => {
                    dense.temp[t - *k as usize].expect("row filter checked temp lags")
                }
                ColumnDescriptor::IrrLag(k) => {
                    dense.irr[t - *k as usize].expect("row filter checked irr lags")
                }
                ColumnDescriptor::CalendarDummy(h) => {
                    if *h == how {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
        }
    }

    Ok(DesignMatrix {
        columns,
        x,
        y,
        timestamps,
    })
}
