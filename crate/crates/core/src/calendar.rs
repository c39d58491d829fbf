//! Timestamp semantics: seasons, day types, hour-of-week indexing and the
//! odd/even-day train/test split.
//!
//! Timestamps are naive local clock time at hourly resolution; the data
//! contract assumes a fixed-offset hourly series, so no DST modeling exists
//! anywhere in the pipeline. Day-of-week comes from the civil calendar and
//! weeks start on Monday (hour-of-week index 0 = Monday 00:00).

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A calendar date-hour in naive local time. Minutes and seconds are always
/// zero; arithmetic steps in whole hours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(NaiveDateTime);

impl Timestamp {
    /// Builds a timestamp from calendar fields, rejecting invalid dates and
    /// out-of-range hours.
    pub fn new(year: i32, month: u32, day: u32, hour: u32) -> Result<Self> {
        let date = NaiveDate::from_ymd_opt(year, month, day).ok_or_else(|| {
            Error::InvalidTimestamp(format!("{year:04}-{month:02}-{day:02} is not a valid date"))
        })?;
        let dt = date.and_hms_opt(hour, 0, 0).ok_or_else(|| {
            Error::InvalidTimestamp(format!("hour {hour} out of range 0..=23"))
        })?;
        Ok(Timestamp(dt))
    }

    pub fn year(&self) -> i32 {
        self.0.year()
    }

    pub fn month(&self) -> u32 {
        self.0.month()
    }

    pub fn day(&self) -> u32 {
        self.0.day()
    }

    pub fn hour(&self) -> u32 {
        self.0.hour()
    }

    /// The timestamp shifted by a signed number of hours.
    pub fn add_hours(&self, hours: i64) -> Self {
        Timestamp(self.0 + Duration::hours(hours))
    }

    /// Whole hours from `earlier` to `self` (negative if `self` is earlier).
    pub fn hours_since(&self, earlier: Timestamp) -> i64 {
        (self.0 - earlier.0).num_seconds() / 3600
    }

    pub fn season(&self) -> Season {
        classify_season(self.month()).expect("month of a valid date is in 1..=12")
    }

    pub fn daytype(&self) -> DayType {
        classify_daytype(*self)
    }

    pub fn hour_of_week(&self) -> HourOfWeek {
        hour_of_week(*self)
    }

    /// Day of week with Monday = 0 .. Sunday = 6.
    pub fn day_of_week(&self) -> u32 {
        self.0.weekday().num_days_from_monday()
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:04}-{:02}-{:02}T{:02}:00",
            self.year(),
            self.month(),
            self.day(),
            self.hour()
        )
    }
}

impl FromStr for Timestamp {
    type Err = Error;

    /// Parses the ISO-8601 form used in all files: `YYYY-MM-DDTHH:00`.
    fn from_str(s: &str) -> Result<Self> {
        let dt = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M")
            .map_err(|e| Error::InvalidTimestamp(format!("{s:?}: {e}")))?;
        if dt.minute() != 0 {
            return Err(Error::InvalidTimestamp(format!(
                "{s:?}: minutes must be 00 for hourly timestamps"
            )));
        }
        Ok(Timestamp(dt))
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Heating season of a month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Season {
    /// December, January, February.
    Winter,
    /// March, April, May, September, October, November.
    Shoulder,
    /// June, July, August; excluded from modeling for its low loads.
    Summer,
}

impl fmt::Display for Season {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Season::Winter => write!(f, "winter"),
            Season::Shoulder => write!(f, "shoulder"),
            Season::Summer => write!(f, "summer"),
        }
    }
}

/// Workday (Mon-Fri) or weekend (Sat-Sun).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayType {
    Workday,
    Weekend,
}

impl fmt::Display for DayType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DayType::Workday => write!(f, "workday"),
            DayType::Weekend => write!(f, "weekend"),
        }
    }
}

/// One of the four modeled (season, day-type) segments. Summer is not a valid
/// segment season.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SegmentKey {
    season: Season,
    daytype: DayType,
}

impl SegmentKey {
    pub const WINTER_WORKDAY: SegmentKey = SegmentKey {
        season: Season::Winter,
        daytype: DayType::Workday,
    };
    pub const WINTER_WEEKEND: SegmentKey = SegmentKey {
        season: Season::Winter,
        daytype: DayType::Weekend,
    };
    pub const SHOULDER_WORKDAY: SegmentKey = SegmentKey {
        season: Season::Shoulder,
        daytype: DayType::Workday,
    };
    pub const SHOULDER_WEEKEND: SegmentKey = SegmentKey {
        season: Season::Shoulder,
        daytype: DayType::Weekend,
    };

    /// All four segments in a fixed reporting order.
    pub const ALL: [SegmentKey; 4] = [
        SegmentKey::WINTER_WORKDAY,
        SegmentKey::WINTER_WEEKEND,
        SegmentKey::SHOULDER_WORKDAY,
        SegmentKey::SHOULDER_WEEKEND,
    ];

    pub fn new(season: Season, daytype: DayType) -> Result<Self> {
        if season == Season::Summer {
            return Err(Error::InvalidInput(
                "summer is not a modeled segment season".into(),
            ));
        }
        Ok(SegmentKey { season, daytype })
    }

    pub fn season(&self) -> Season {
        self.season
    }

    pub fn daytype(&self) -> DayType {
        self.daytype
    }

    /// True when `ts` falls in this segment.
    pub fn contains(&self, ts: Timestamp) -> bool {
        ts.season() == self.season && ts.daytype() == self.daytype
    }

    /// Filesystem-friendly identifier, e.g. `winter_workday`.
    pub fn slug(&self) -> String {
        format!("{}_{}", self.season, self.daytype)
    }
}

impl fmt::Display for SegmentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.season, self.daytype)
    }
}

/// Day abbreviations in week order, Monday first, as used by dummy labels.
pub const DAY_ABBREV: [&str; 7] = ["MON", "TUE", "WED", "THU", "FRI", "SAT", "SUN"];

/// One of the 168 hours of the week; index 0 is Monday 00:00, 167 is Sunday
/// 23:00. Rendered as `MON_8h`-style labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HourOfWeek(u8);

impl HourOfWeek {
    pub fn new(index: u8) -> Result<Self> {
        if index > 167 {
            return Err(Error::InvalidInput(format!(
                "hour-of-week index {index} out of range 0..=167"
            )));
        }
        Ok(HourOfWeek(index))
    }

    pub fn from_day_hour(day_of_week: u32, hour: u32) -> Result<Self> {
        if day_of_week > 6 || hour > 23 {
            return Err(Error::InvalidInput(format!(
                "invalid (day-of-week, hour) = ({day_of_week}, {hour})"
            )));
        }
        Ok(HourOfWeek((24 * day_of_week + hour) as u8))
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    /// Day of week, Monday = 0.
    pub fn day_of_week(&self) -> u32 {
        u32::from(self.0) / 24
    }

    pub fn hour(&self) -> u32 {
        u32::from(self.0) % 24
    }

    pub fn label(&self) -> String {
        format!("{}_{}h", DAY_ABBREV[self.day_of_week() as usize], self.hour())
    }

    /// The day type this hour belongs to.
    pub fn daytype(&self) -> DayType {
        if self.day_of_week() < 5 {
            DayType::Workday
        } else {
            DayType::Weekend
        }
    }

    /// The hour-of-week values eligible as calendar dummies for a day type:
    /// 120 workday hours or 48 weekend hours.
    pub fn eligible_for(daytype: DayType) -> Vec<HourOfWeek> {
        let range = match daytype {
            DayType::Workday => 0..120,
            DayType::Weekend => 120..168,
        };
        range.map(HourOfWeek).collect()
    }
}

impl fmt::Display for HourOfWeek {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for HourOfWeek {
    type Err = Error;

    /// Parses labels of the form `MON_8h`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("{s:?} is not a DDD_Hh hour-of-week label"));
        let (day, rest) = s.split_once('_').ok_or_else(bad)?;
        let dow = DAY_ABBREV
            .iter()
            .position(|&d| d == day)
            .ok_or_else(bad)? as u32;
        let hour: u32 = rest.strip_suffix('h').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        HourOfWeek::from_day_hour(dow, hour)
    }
}

impl Serialize for HourOfWeek {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HourOfWeek {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Maps a month number to its season.
pub fn classify_season(month: u32) -> Result<Season> {
    match month {
        12 | 1 | 2 => Ok(Season::Winter),
        3..=5 | 9..=11 => Ok(Season::Shoulder),
        6..=8 => Ok(Season::Summer),
        _ => Err(Error::InvalidInput(format!("month {month} out of range 1..=12"))),
    }
}

/// Workday/weekend classification from the civil calendar.
pub fn classify_daytype(ts: Timestamp) -> DayType {
    if ts.day_of_week() < 5 {
        DayType::Workday
    } else {
        DayType::Weekend
    }
}

/// Hour-of-week index of a timestamp: `24 * day_of_week + hour`.
pub fn hour_of_week(ts: Timestamp) -> HourOfWeek {
    HourOfWeek((24 * ts.day_of_week() + ts.hour()) as u8)
}

/// Splits rows into training (odd day-of-month) and testing (even day-of-month)
/// masks. The masks are complementary by construction.
pub fn split_train_test(timestamps: &[Timestamp]) -> (Vec<bool>, Vec<bool>) {
    let train: Vec<bool> = timestamps.iter().map(|ts| ts.day() % 2 == 1).collect();
    let test = train.iter().map(|t| !t).collect();
    (train, test)
}
