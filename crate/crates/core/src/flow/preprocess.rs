//! Grayscale conversion and contrast enhancement.

use std::fmt;
use std::str::FromStr;

use crate::image::{ColorFrame, Frame};

/// ITU-R BT.601 luma.
pub fn to_grayscale(frame: &ColorFrame) -> Frame {
    let pixels = frame
        .pixels
        .map(|[r, g, b]| (0.299 * r + 0.587 * g + 0.114 * b).clamp(0.0, 1.0));
    Frame::new(pixels, frame.timestamp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnhanceMode {
    None,
    Stretch,
    Equalize,
    #[default]
    Both,
}

impl EnhanceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EnhanceMode::None => "none",
            EnhanceMode::Stretch => "stretch",
            EnhanceMode::Equalize => "equalize",
            EnhanceMode::Both => "both",
        }
    }
}

impl fmt::Display for EnhanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnhanceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(EnhanceMode::None),
            "stretch" => Ok(EnhanceMode::Stretch),
            "equalize" => Ok(EnhanceMode::Equalize),
            "both" => Ok(EnhanceMode::Both),
            other => Err(format!("unknown enhance mode '{other}'")),
        }
    }
}

pub fn enhance(frame: &Frame, mode: EnhanceMode) -> Frame {
    match mode {
        EnhanceMode::None => frame.clone(),
        EnhanceMode::Stretch => stretch(frame),
        EnhanceMode::Equalize => equalize(frame),
        EnhanceMode::Both => equalize(&stretch(frame)),
    }
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let idx = (q * (sorted.len() - 1) as f64).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

/// Linear map of the 1st..99th percentile range onto [0, 1].
pub fn stretch(frame: &Frame) -> Frame {
    let mut sorted = frame.pixels.data().to_vec();
    if sorted.is_empty() {
        return frame.clone();
    }
    sorted.sort_by(f64::total_cmp);
    let lo = percentile(&sorted, 0.01);
    let hi = percentile(&sorted, 0.99);
    if !(hi > lo) {
        return frame.clone();
    }
    let scale = 1.0 / (hi - lo);
    Frame::new(
        frame.pixels.map(|v| ((v - lo) * scale).clamp(0.0, 1.0)),
        frame.timestamp,
    )
}

const BINS: usize = 256;

fn bin(v: f64) -> usize {
    ((v * BINS as f64) as usize).min(BINS - 1)
}

/// 256-bin histogram equalization.
pub fn equalize(frame: &Frame) -> Frame {
    let n = frame.pixels.data().len();
    let mut cdf = [0usize; BINS];
    for &v in frame.pixels.data() {
        cdf[bin(v)] += 1;
    }
    for i in 1..BINS {
        cdf[i] += cdf[i - 1];
    }
    let cdf_min = cdf.iter().copied().find(|&c| c > 0).unwrap_or(0);
    if n == cdf_min {
        return frame.clone();
    }
    let denom = (n - cdf_min) as f64;
    let lut: Vec<f64> = cdf
        .iter()
        .map(|&c| (c.saturating_sub(cdf_min)) as f64 / denom)
        .collect();
    Frame::new(frame.pixels.map(|v| lut[bin(v)]), frame.timestamp)
}
