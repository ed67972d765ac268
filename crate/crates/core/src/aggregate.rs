//! Reduction of a dense flow field to the three region signals consumed by
//! the controllers.

use crate::flow::FlowField;
use crate::{Error, Result};

/// Upper end of every unsigned fuzzy universe.
pub const UNIVERSE_MAX: f64 = 10.0;

/// Values dropped from each end before averaging a region.
pub const TRIM: usize = 3;

/// Flow magnitudes of the left, middle and right column thirds.
#[derive(Debug, Clone, PartialEq)]
pub struct Regions {
    pub left: Vec<f64>,
    pub middle: Vec<f64>,
    pub right: Vec<f64>,
}

/// Column bounds `[0, a)`, `[a, b)`, `[b, width)` of the three regions.
pub fn region_bounds(width: usize) -> (usize, usize) {
    (width / 3, 2 * width / 3)
}

pub fn segment(flow: &FlowField) -> Regions {
    let (w, h) = (flow.width(), flow.height());
    let (a, b) = region_bounds(w);
    let mut regions = Regions {
        left: Vec::with_capacity(a * h),
        middle: Vec::with_capacity((b - a) * h),
        right: Vec::with_capacity((w - b) * h),
    };
    for y in 0..h {
        for x in 0..w {
            let m = flow.magnitude(x, y);
            if x < a {
                regions.left.push(m);
            } else if x < b {
                regions.middle.push(m);
            } else {
                regions.right.push(m);
            }
        }
    }
    regions
}

/// Mean after discarding the three largest and three smallest values.
pub fn trimmed_mean(mags: &[f64]) -> Result<f64> {
    if mags.len() < 2 * TRIM + 1 {
        return Err(Error::RegionTooSmall(mags.len()));
    }
    let mut sorted = mags.to_vec();
    sorted.sort_by(f64::total_cmp);
    let kept = &sorted[TRIM..sorted.len() - TRIM];
    Ok(kept.iter().sum::<f64>() / kept.len() as f64)
}

/// `raw * factor` clamped onto `[0, 10]`.
pub fn scale(raw: f64, factor: f64) -> f64 {
    (raw * factor).clamp(0.0, UNIVERSE_MAX)
}

/// Signed variant for differences, clamped onto `[-10, 10]`.
pub fn scale_signed(raw: f64, factor: f64) -> f64 {
    (raw * factor).clamp(-UNIVERSE_MAX, UNIVERSE_MAX)
}

/// Region signals for one frame pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RegionFlow {
    pub raw_l: f64,
    pub raw_m: f64,
    pub raw_r: f64,
    pub l: f64,
    pub m: f64,
    pub r: f64,
    pub l_minus_r: f64,
    pub l_plus_r: f64,
}

impl RegionFlow {
    pub fn from_raw(raw_l: f64, raw_m: f64, raw_r: f64, factor: f64) -> Self {
        Self {
            raw_l,
            raw_m,
            raw_r,
            l: scale(raw_l, factor),
            m: scale(raw_m, factor),
            r: scale(raw_r, factor),
            l_minus_r: scale_signed(raw_l - raw_r, factor),
            l_plus_r: scale(0.5 * (raw_l + raw_r), factor),
        }
    }
}

/// Raw trimmed means of the three regions.
pub fn raw_region_means(flow: &FlowField) -> Result<(f64, f64, f64)> {
    let regions = segment(flow);
    Ok((
        trimmed_mean(&regions.left)?,
        trimmed_mean(&regions.middle)?,
        trimmed_mean(&regions.right)?,
    ))
}

pub fn region_flow(flow: &FlowField, factor: f64) -> Result<RegionFlow> {
    let (l, m, r) = raw_region_means(flow)?;
    Ok(RegionFlow::from_raw(l, m, r, factor))
}
