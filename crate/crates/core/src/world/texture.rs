//! Procedural wall and floor textures.

use std::fmt;
use std::str::FromStr;

/// Vertical extent, in metres, that a wall texture's `height_frac` spans.
pub const NOMINAL_WALL_HEIGHT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureKind {
    Checker,
    Stripes,
    ValueNoise,
    Uniform,
}

impl TextureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TextureKind::Checker => "checker",
            TextureKind::Stripes => "stripes",
            TextureKind::ValueNoise => "value-noise",
            TextureKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for TextureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TextureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "checker" => Ok(TextureKind::Checker),
            "stripes" => Ok(TextureKind::Stripes),
            "value-noise" | "noise" => Ok(TextureKind::ValueNoise),
            "uniform" => Ok(TextureKind::Uniform),
            other => Err(format!("unknown texture kind '{other}'")),
        }
    }
}

/// A procedural intensity pattern. `period` is the length of one full
/// light/dark cycle (checker, stripes) or the lattice spacing (value noise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Texture {
    pub kind: TextureKind,
    pub period: f64,
    pub contrast: f64,
    pub seed: u64,
}

impl Texture {
    pub fn uniform() -> Self {
        Self {
            kind: TextureKind::Uniform,
            period: 1.0,
            contrast: 0.0,
            seed: 0,
        }
    }

    pub fn checker(period: f64, contrast: f64) -> Self {
        Self {
            kind: TextureKind::Checker,
            period,
            contrast,
            seed: 0,
        }
    }

    pub fn stripes(period: f64, contrast: f64) -> Self {
        Self {
            kind: TextureKind::Stripes,
            period,
            contrast,
            seed: 0,
        }
    }

    pub fn value_noise(period: f64, contrast: f64, seed: u64) -> Self {
        Self {
            kind: TextureKind::ValueNoise,
            period,
            contrast,
            seed,
        }
    }

    /// Contrast actually applied; uniform textures have none.
    pub fn effective_contrast(&self) -> f64 {
        match self.kind {
            TextureKind::Uniform => 0.0,
            _ => self.contrast.clamp(0.0, 1.0),
        }
    }

    /// Wall sample: `coord` is metres along the wall, `height_frac` the
    /// fraction of the wall height (0 = floor).
    pub fn sample(&self, coord: f64, height_frac: f64) -> f64 {
        self.sample_plane(coord, height_frac * NOMINAL_WALL_HEIGHT)
    }

    /// Sample at planar coordinates in metres (used for the floor).
    pub fn sample_plane(&self, s: f64, t: f64) -> f64 {
        let c = self.effective_contrast();
        let level = match self.kind {
            TextureKind::Uniform => return 0.5,
            TextureKind::Checker => {
                let cell = self.period * 0.5;
                let parity = ((s / cell).floor() as i64 + (t / cell).floor() as i64).rem_euclid(2);
                parity as f64
            }
            TextureKind::Stripes => {
                let cell = self.period * 0.5;
                ((s / cell).floor() as i64).rem_euclid(2) as f64
            }
            TextureKind::ValueNoise => value_noise(self.seed, s / self.period, t / self.period),
        };
        0.5 + c * (level - 0.5)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes two seeds into a new one.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

fn lattice(seed: u64, ix: i64, iy: i64) -> f64 {
    let h = splitmix64(
        seed ^ (ix as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ (iy as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F),
    );
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// Smoothly interpolated lattice noise in [0, 1].
fn value_noise(seed: u64, x: f64, y: f64) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let (ix, iy) = (x0 as i64, y0 as i64);
    let fx = smoothstep(x - x0);
    let fy = smoothstep(y - y0);
    let a = lattice(seed, ix, iy);
    let b = lattice(seed, ix + 1, iy);
    let c = lattice(seed, ix, iy + 1);
    let d = lattice(seed, ix + 1, iy + 1);
    let top = a + (b - a) * fx;
    let bottom = c + (d - c) * fx;
    top + (bottom - top) * fy
}
