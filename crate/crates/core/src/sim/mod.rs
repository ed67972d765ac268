//! The closed control loop, its trajectory log, metrics and calibration.

mod calibrate;
mod config;
mod log;
mod metrics;
mod run;

pub use calibrate::{calibrate_scale, median, CALIBRATION_PAIRS, CALIBRATION_TARGET};
pub use config::{DumpFlags, MetricsSpec, Opening, Side, SimConfig, Span};
pub use log::{quantize, StepRecord, TrajectoryLog, CSV_HEADER};
pub use metrics::{axis_coords, metrics, MetricsReport, SegmentSpeed};
pub use run::{run, Simulation, StepView};
