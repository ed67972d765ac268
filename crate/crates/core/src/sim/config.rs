use std::fmt;
use std::str::FromStr;

use crate::flow::{EnhanceMode, FlowParams};
use crate::fuzzy::ControllerConfig;
use crate::geom::Vec2;
use crate::render::{CameraModel, Pose};
use crate::robot::{Constraints, Locomotion};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(format!("expected left or right, got '{other}'")),
        }
    }
}

/// A named interval of along-axis distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Span {
    pub name: String,
    pub start: f64,
    pub end: f64,
}

/// A gap in one corridor wall between two along-axis distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Opening {
    pub side: Side,
    pub start: f64,
    pub end: f64,
}

/// Measurement annotations a scenario declares for its metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSpec {
    /// Corridor centre line, start to end.
    pub axis: Option<(Vec2, Vec2)>,
    pub half_width: Option<f64>,
    /// Fraction of leading steps ignored by the centring statistics.
    pub transient: f64,
    pub segments: Vec<Span>,
    pub openings: Vec<Opening>,
}

impl Default for MetricsSpec {
    fn default() -> Self {
        Self {
            axis: None,
            half_width: None,
            transient: 0.2,
            segments: Vec::new(),
            openings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DumpFlags {
    pub frames: bool,
    pub flow: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub steps: usize,
    pub seed: u64,
    pub flow: FlowParams,
    pub enhance: EnhanceMode,
    pub controller: ControllerConfig,
    pub locomotion: Locomotion,
    pub constraints: Constraints,
    pub start: Pose,
    pub camera: CameraModel,
    /// Universe units per px/frame; calibrated on the scene when absent.
    pub scale_factor: Option<f64>,
    /// Control ticks between a decision and its actuation.
    pub latency: usize,
    pub metrics: MetricsSpec,
    pub dump: DumpFlags,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            steps: 500,
            seed: 0,
            flow: FlowParams::default(),
            enhance: EnhanceMode::Both,
            controller: ControllerConfig::default(),
            locomotion: Locomotion::Crab,
            constraints: Constraints::default(),
            start: Pose::new(0.0, 0.0, 0.0),
            camera: CameraModel::default(),
            scale_factor: None,
            latency: 0,
            metrics: MetricsSpec::default(),
            dump: DumpFlags::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::invalid("sim", "dt must be positive"));
        }
        if self.steps < 1 {
            return Err(Error::invalid("sim", "steps must be >= 1"));
        }
        if let Some(f) = self.scale_factor {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::invalid("sim", "scale_factor must be positive"));
            }
        }
        if !self.camera.is_valid() {
            return Err(Error::invalid("camera", "need 0 < hfov < pi, nonzero size, eye_height > 0"));
        }
        if self.camera.width < 3 {
            return Err(Error::invalid("camera", "width must be at least 3 for region split"));
        }
        if !(0.0..1.0).contains(&self.metrics.transient) {
            return Err(Error::invalid("metrics", "transient must lie in [0, 1)"));
        }
        if let Some((a, b)) = self.metrics.axis {
            if !((b - a).length() > 1e-9) {
                return Err(Error::invalid("metrics", "axis has zero length"));
            }
        }
        for s in &self.metrics.segments {
            if !(s.start < s.end) {
                return Err(Error::invalid(format!("segment {}", s.name), "start must be < end"));
            }
        }
        self.flow.validate()?;
        self.constraints.validate()?;
        Ok(())
    }
}
