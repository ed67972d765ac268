use std::fmt;

use super::log::TrajectoryLog;
use super::{MetricsSpec, Side};
use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSpeed {
    pub name: String,
    /// `None` when no record fell inside the span.
    pub mean_speed: Option<f64>,
    pub samples: usize,
}

/// Summary statistics recomputable from a trajectory log and the
/// scenario's metric annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub steps: usize,
    /// Mean and max |offset| from the axis after the transient.
    pub deviation_mean: Option<f64>,
    pub deviation_max: Option<f64>,
    pub final_offset: Option<f64>,
    /// Furthest along-axis distance reached.
    pub max_progress: Option<f64>,
    pub segment_speeds: Vec<SegmentSpeed>,
    /// Largest offset toward a declared opening side, never negative.
    pub max_excursion: Option<f64>,
    pub collisions: usize,
    pub contact_steps: usize,
    pub path_length: f64,
}

/// Along-axis distance and signed offset (positive = left of the axis).
pub fn axis_coords(axis: (Vec2, Vec2), p: Vec2) -> (f64, f64) {
    let (a, b) = axis;
    let dir = (b - a).normalized();
    let rel = p - a;
    (rel.dot(dir), dir.cross(rel))
}

pub fn metrics(log: &TrajectoryLog, spec: &MetricsSpec) -> MetricsReport {
    let n = log.records.len();
    let positions: Vec<Vec2> = log.records.iter().map(|r| Vec2::new(r.x, r.y)).collect();
    let coords: Option<Vec<(f64, f64)>> = spec
        .axis
        .map(|axis| positions.iter().map(|&p| axis_coords(axis, p)).collect());

    let skip = ((spec.transient * n as f64).round() as usize).min(n);
    let (deviation_mean, deviation_max, final_offset, max_progress) = match &coords {
        Some(c) => {
            let steady: Vec<f64> = c[skip..].iter().map(|&(_, off)| off.abs()).collect();
            let mean = if steady.is_empty() {
                None
            } else {
                Some(steady.iter().sum::<f64>() / steady.len() as f64)
            };
            let max = steady.iter().copied().reduce(f64::max);
            (
                mean,
                max,
                c.last().map(|&(_, off)| off),
                c.iter().map(|&(s, _)| s).reduce(f64::max),
            )
        }
        None => (None, None, None, None),
    };

    let along: Vec<f64> = match &coords {
        Some(c) => c.iter().map(|&(s, _)| s).collect(),
        None => positions.iter().map(|p| p.x).collect(),
    };
    let segment_speeds = spec
        .segments
        .iter()
        .map(|span| {
            let speeds: Vec<f64> = log
                .records
                .iter()
                .zip(&along)
                .filter(|(_, &s)| s >= span.start && s < span.end)
                .map(|(r, _)| r.forward_speed)
                .collect();
            SegmentSpeed {
                name: span.name.clone(),
                mean_speed: (!speeds.is_empty())
                    .then(|| speeds.iter().sum::<f64>() / speeds.len() as f64),
                samples: speeds.len(),
            }
        })
        .collect();

    let max_excursion = match (&coords, spec.openings.is_empty()) {
        (Some(c), false) => Some(
            spec.openings
                .iter()
                .flat_map(|o| {
                    c.iter().map(move |&(_, off)| match o.side {
                        Side::Left => off,
                        Side::Right => -off,
                    })
                })
                .fold(0.0, f64::max),
        ),
        _ => None,
    };

    let mut collisions = 0;
    let mut contact_steps = 0;
    let mut touching = false;
    for r in &log.records {
        let now = r.contact_wall.is_some();
        if now {
            contact_steps += 1;
            if !touching {
                collisions += 1;
            }
        }
        touching = now;
    }
    let path_length = positions.windows(2).map(|w| (w[1] - w[0]).length()).sum();

    MetricsReport {
        steps: n,
        deviation_mean,
        deviation_max,
        final_offset,
        max_progress,
        segment_speeds,
        max_excursion,
        collisions,
        contact_steps,
        path_length,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.8e}")).unwrap_or_else(|| "n/a".into())
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "steps = {}", self.steps)?;
        writeln!(f, "deviation_mean = {}", opt(self.deviation_mean))?;
        writeln!(f, "deviation_max = {}", opt(self.deviation_max))?;
        writeln!(f, "final_offset = {}", opt(self.final_offset))?;
        writeln!(f, "max_progress = {}", opt(self.max_progress))?;
        for s in &self.segment_speeds {
            writeln!(f, "segment_speed.{} = {} ({} samples)", s.name, opt(s.mean_speed), s.samples)?;
        }
        writeln!(f, "max_excursion = {}", opt(self.max_excursion))?;
        writeln!(f, "collisions = {}", self.collisions)?;
        writeln!(f, "contact_steps = {}", self.contact_steps)?;
        writeln!(f, "path_length = {:.8e}", self.path_length)
    }
}
