//! Hourly heat-load modeling and forecasting for buildings on district
//! heating networks.
//!
//! The pipeline: ingest meter and weather CSVs, clean them (temperature-binned
//! IQR outlier detection, short-gap imputation), build lagged design matrices
//! per (season, day-type) segment, fit OLS models with significance-driven
//! feature selection, forecast recursively and score the result with the full
//! error battery (MAE/RMSE/MAPE/ME, quantiles, hourly and monthly profiles).

pub mod calendar;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod forecast;
pub mod ingest;
pub mod preprocess;
pub mod regression;
pub mod selection;
pub mod serde_f64;
pub mod stats;
pub mod synth;

pub use calendar::{DayType, HourOfWeek, Season, SegmentKey, Timestamp};
pub use error::{Error, Result};
pub use features::{ColumnDescriptor, DesignMatrix, LagSpec, ScenarioLevel};
pub use ingest::{HourlyObservation, Measurement, Quality};
pub use regression::FittedModel;
