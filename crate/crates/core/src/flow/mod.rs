//! Dense optical flow between consecutive grayscale frames.

mod flo2;
mod preprocess;

pub use flo2::{read_flo2, write_flo2};
pub use preprocess::{enhance, equalize, stretch, to_grayscale, EnhanceMode};

use std::fmt;
use std::str::FromStr;

use crate::image::{Frame, Gray, Grid};
use crate::{Error, Result};

/// Horn-Schunck works in 8-bit grey-level units so that `alpha` keeps its
/// conventional magnitude; frames themselves stay in [0, 1].
pub const HS_INTENSITY_SCALE: f64 = 255.0;

/// Per-pixel motion in px/frame; `u` positive rightward, `v` positive
/// downward.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub u: Gray,
    pub v: Gray,
}

impl FlowField {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            u: Grid::filled(width, height, 0.0),
            v: Grid::filled(width, height, 0.0),
        }
    }

    pub fn width(&self) -> usize {
        self.u.width()
    }

    pub fn height(&self) -> usize {
        self.u.height()
    }

    pub fn magnitude(&self, x: usize, y: usize) -> f64 {
        self.u.get(x, y).hypot(self.v.get(x, y))
    }

    pub fn is_finite(&self) -> bool {
        self.u.data().iter().chain(self.v.data()).all(|v| v.is_finite())
    }

    /// Left-right mirror; horizontal components change sign.
    pub fn flip_horizontal(&self) -> Self {
        Self {
            u: self.u.flip_horizontal().map(|v| -v),
            v: self.v.flip_horizontal(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    HornSchunck,
    LucasKanade,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::HornSchunck => "hs",
            Algorithm::LucasKanade => "lk",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hs" | "horn_schunck" | "horn-schunck" => Ok(Algorithm::HornSchunck),
            "lk" | "lucas_kanade" | "lucas-kanade" => Ok(Algorithm::LucasKanade),
            other => Err(format!("unknown flow algorithm '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub algorithm: Algorithm,
    /// Smoothness weight, 8-bit grey-level units.
    pub alpha: f64,
    pub iterations: usize,
    /// Odd window side for Lucas-Kanade.
    pub window: usize,
    /// Minimum eigenvalue of the windowed structure tensor.
    pub eig_threshold: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::HornSchunck,
            alpha: 15.0,
            iterations: 100,
            window: 5,
            eig_threshold: 1e-4,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::invalid("flow", "alpha must be positive"));
        }
        if self.iterations < 1 {
            return Err(Error::invalid("flow", "iterations must be >= 1"));
        }
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::invalid("flow", "window must be odd and >= 3"));
        }
        if !(self.eig_threshold >= 0.0) {
            return Err(Error::invalid("flow", "eig_threshold must be >= 0"));
        }
        Ok(())
    }
}

/// Spatial and temporal derivatives of a frame pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub ix: Gray,
    pub iy: Gray,
    pub it: Gray,
}

/// Central differences of the temporal mean image (replicated border)
/// and the frame difference.
pub fn gradients(prev: &Frame, next: &Frame) -> Result<Gradients> {
    if prev.pixels.dims() != next.pixels.dims() {
        return Err(Error::Dimension(format!(
            "frames {:?} and {:?}",
            prev.pixels.dims(),
            next.pixels.dims()
        )));
    }
    let (w, h) = prev.pixels.dims();
    let a = prev.pixels.data();
    let b = next.pixels.data();
    let mean = Grid::from_vec(w, h, a.iter().zip(b).map(|(p, n)| 0.5 * (p + n)).collect())?;
    let it = Grid::from_vec(w, h, a.iter().zip(b).map(|(p, n)| n - p).collect())?;
    let ix = Grid::from_fn(w, h, |x, y| {
        let (x, y) = (x as isize, y as isize);
        0.5 * (mean.get_clamped(x + 1, y) - mean.get_clamped(x - 1, y))
    });
    let iy = Grid::from_fn(w, h, |x, y| {
        let (x, y) = (x as isize, y as isize);
        0.5 * (mean.get_clamped(x, y + 1) - mean.get_clamped(x, y - 1))
    });
    Ok(Gradients { ix, iy, it })
}

pub fn compute_flow(prev: &Frame, next: &Frame, params: &FlowParams) -> Result<FlowField> {
    match params.algorithm {
        Algorithm::HornSchunck => horn_schunck(prev, next, params),
        Algorithm::LucasKanade => lucas_kanade(prev, next, params),
    }
}

pub fn horn_schunck(prev: &Frame, next: &Frame, params: &FlowParams) -> Result<FlowField> {
    hs_solve(prev, next, params, None)
}

/// Neighbour mean with replicated borders. Left/right are added first so
/// the result is bit-exact under a horizontal mirror.
#[inline]
fn neighbour_mean(g: &[f64], w: usize, h: usize, x: usize, y: usize) -> f64 {
    let i = y * w + x;
    let l = if x > 0 { g[i - 1] } else { g[i] };
    let r = if x + 1 < w { g[i + 1] } else { g[i] };
    let u = if y > 0 { g[i - w] } else { g[i] };
    let d = if y + 1 < h { g[i + w] } else { g[i] };
    ((l + r) + (u + d)) * 0.25
}

/// Horn-Schunck Jacobi sweeps from zero flow. `observe` is called after
/// every sweep with the sweep number (1-based) and the current field.
pub fn horn_schunck_observed(
    prev: &Frame,
    next: &Frame,
    params: &FlowParams,
    mut observe: impl FnMut(usize, &FlowField),
) -> Result<FlowField> {
    hs_solve(prev, next, params, Some(&mut observe))
}

struct HsTerms {
    ix: Vec<f64>,
    iy: Vec<f64>,
    it: Vec<f64>,
    inv_den: Vec<f64>,
}

impl HsTerms {
    #[inline]
    fn update(&self, i: usize, ub: f64, vb: f64) -> (f64, f64) {
        let t = (self.ix[i] * ub + self.iy[i] * vb + self.it[i]) * self.inv_den[i];
        (ub - self.ix[i] * t, vb - self.iy[i] * t)
    }
}

/// Interior columns of one interior row.
fn sweep_row(t: &HsTerms, u: &[f64], v: &[f64], nu: &mut [f64], nv: &mut [f64], row: usize, w: usize) {
    let (s, e) = (row + 1, row + w - 1);
    let (ul, ur, uu, ud) = (&u[s - 1..e - 1], &u[s + 1..e + 1], &u[s - w..e - w], &u[s + w..e + w]);
    let (vl, vr, vu, vd) = (&v[s - 1..e - 1], &v[s + 1..e + 1], &v[s - w..e - w], &v[s + w..e + w]);
    let (ix, iy, it, inv) = (&t.ix[s..e], &t.iy[s..e], &t.it[s..e], &t.inv_den[s..e]);
    let (nu, nv) = (&mut nu[s..e], &mut nv[s..e]);
    for j in 0..e - s {
        let ub = ((ul[j] + ur[j]) + (uu[j] + ud[j])) * 0.25;
        let vb = ((vl[j] + vr[j]) + (vu[j] + vd[j])) * 0.25;
        let k = (ix[j] * ub + iy[j] * vb + it[j]) * inv[j];
        nu[j] = ub - ix[j] * k;
        nv[j] = vb - iy[j] * k;
    }
}

fn hs_solve(
    prev: &Frame,
    next: &Frame,
    params: &FlowParams,
    mut observe: Option<&mut dyn FnMut(usize, &FlowField)>,
) -> Result<FlowField> {
    let grads = gradients(prev, next)?;
    let (w, h) = grads.ix.dims();
    let k = HS_INTENSITY_SCALE;
    let ix: Vec<f64> = grads.ix.data().iter().map(|v| v * k).collect();
    let iy: Vec<f64> = grads.iy.data().iter().map(|v| v * k).collect();
    let it: Vec<f64> = grads.it.data().iter().map(|v| v * k).collect();
    let a2 = params.alpha * params.alpha;
    let inv_den = ix
        .iter()
        .zip(&iy)
        .map(|(gx, gy)| 1.0 / (a2 + gx * gx + gy * gy))
        .collect();
    let terms = HsTerms { ix, iy, it, inv_den };

    let n = w * h;
    let (mut u, mut v) = (vec![0.0; n], vec![0.0; n]);
    let (mut nu, mut nv) = (vec![0.0; n], vec![0.0; n]);
    let mut field = FlowField::zeros(w, h);
    for sweep in 1..=params.iterations {
        for y in 0..h {
            if y == 0 || y + 1 == h || w < 3 {
                for x in 0..w {
                    let i = y * w + x;
                    let (ub, vb) = (neighbour_mean(&u, w, h, x, y), neighbour_mean(&v, w, h, x, y));
                    (nu[i], nv[i]) = terms.update(i, ub, vb);
                }
                continue;
            }
            let row = y * w;
            for x in [0, w - 1] {
                let i = row + x;
                let (ub, vb) = (neighbour_mean(&u, w, h, x, y), neighbour_mean(&v, w, h, x, y));
                (nu[i], nv[i]) = terms.update(i, ub, vb);
            }
            sweep_row(&terms, &u, &v, &mut nu, &mut nv, row, w);
        }
        std::mem::swap(&mut u, &mut nu);
        std::mem::swap(&mut v, &mut nv);
        if let Some(obs) = observe.as_mut() {
            field.u.data_mut().copy_from_slice(&u);
            field.v.data_mut().copy_from_slice(&v);
            obs(sweep, &field);
        }
    }
    field.u.data_mut().copy_from_slice(&u);
    field.v.data_mut().copy_from_slice(&v);
    Ok(field)
}

/// The objective the Horn-Schunck sweeps descend, in the same 8-bit units:
/// data residual squared plus `alpha^2 / 4` times the squared difference
/// across every 4-neighbour edge. The quarter weight is what makes the
/// neighbour-mean update the exact per-pixel minimiser.
pub fn hs_energy(grads: &Gradients, flow: &FlowField, alpha: f64) -> f64 {
    let (w, h) = grads.ix.dims();
    let k = HS_INTENSITY_SCALE;
    let mut data = 0.0;
    let mut smooth = 0.0;
    for y in 0..h {
        for x in 0..w {
            let (u, v) = (flow.u.get(x, y), flow.v.get(x, y));
            let r = k * (grads.ix.get(x, y) * u + grads.iy.get(x, y) * v + grads.it.get(x, y));
            data += r * r;
            if x + 1 < w {
                smooth += (flow.u.get(x + 1, y) - u).powi(2) + (flow.v.get(x + 1, y) - v).powi(2);
            }
            if y + 1 < h {
                smooth += (flow.u.get(x, y + 1) - u).powi(2) + (flow.v.get(x, y + 1) - v).powi(2);
            }
        }
    }
    data + 0.25 * alpha * alpha * smooth
}

/// Horizontal window sum with replicated borders. Symmetric offsets are
/// paired before accumulation so a mirrored input gives a bit-exact
/// mirrored output.
fn box_sum(g: &[f64], w: usize, h: usize, radius: usize) -> Vec<f64> {
    let clamp_x = |x: isize| x.clamp(0, w as isize - 1) as usize;
    let clamp_y = |y: isize| y.clamp(0, h as isize - 1) as usize;
    let mut horiz = vec![0.0; w * h];
    for y in 0..h {
        let row = &g[y * w..(y + 1) * w];
        for x in 0..w {
            let mut s = row[x];
            for d in 1..=radius as isize {
                s += row[clamp_x(x as isize - d)] + row[clamp_x(x as isize + d)];
            }
            horiz[y * w + x] = s;
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut s = 0.0;
            for d in -(radius as isize)..=radius as isize {
                s += horiz[clamp_y(y as isize + d) * w + x];
            }
            out[y * w + x] = s;
        }
    }
    out
}

/// Smaller eigenvalue of the symmetric matrix [[a, b], [b, c]].
pub fn min_eigenvalue(a: f64, b: f64, c: f64) -> f64 {
    let mean = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    mean - (half_diff * half_diff + b * b).sqrt()
}

/// Windowed least-squares flow. Pixels whose structure tensor has a
/// smaller eigenvalue below `eig_threshold` get zero flow.
pub fn lucas_kanade(prev: &Frame, next: &Frame, params: &FlowParams) -> Result<FlowField> {
    let grads = gradients(prev, next)?;
    let (w, h) = grads.ix.dims();
    let ix = grads.ix.data();
    let iy = grads.iy.data();
    let it = grads.it.data();
    let prod = |f: &dyn Fn(usize) -> f64| (0..w * h).map(f).collect::<Vec<f64>>();
    let r = params.window / 2;
    let sxx = box_sum(&prod(&|i| ix[i] * ix[i]), w, h, r);
    let sxy = box_sum(&prod(&|i| ix[i] * iy[i]), w, h, r);
    let syy = box_sum(&prod(&|i| iy[i] * iy[i]), w, h, r);
    let sxt = box_sum(&prod(&|i| ix[i] * it[i]), w, h, r);
    let syt = box_sum(&prod(&|i| iy[i] * it[i]), w, h, r);

    let mut flow = FlowField::zeros(w, h);
    for i in 0..w * h {
        let (a, b, c) = (sxx[i], sxy[i], syy[i]);
        if !(min_eigenvalue(a, b, c) >= params.eig_threshold) {
            continue;
        }
        let det = a * c - b * b;
        if !(det > 0.0) {
            continue;
        }
        let p = -sxt[i];
        let q = -syt[i];
        flow.u.data_mut()[i] = (c * p - b * q) / det;
        flow.v.data_mut()[i] = (a * q - b * p) / det;
    }
    Ok(flow)
}
