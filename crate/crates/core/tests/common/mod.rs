#![allow(dead_code)]

use flownav::geom::Vec2;
use flownav::image::{Frame, Grid};
use flownav::world::{Texture, WallSegment, WorldScene};
use rand::Rng;

/// Value-noise image sampled on the pixel lattice, displaced `shift` px to
/// the right. Noise cells are `period` px wide.
pub fn noise_frame(w: usize, h: usize, shift: f64, period: f64, seed: u64) -> Frame {
    let tex = Texture::value_noise(period, 1.0, seed);
    Frame::new(
        Grid::from_fn(w, h, |x, y| tex.sample_plane(x as f64 - shift, y as f64)),
        0.0,
    )
}

pub fn random_frame(rng: &mut impl Rng, w: usize, h: usize) -> Frame {
    Frame::new(Grid::from_fn(w, h, |_, _| rng.gen::<f64>()), 0.0)
}

/// A scene of `n` random walls inside the square [-10, 10]^2.
pub fn random_scene(rng: &mut impl Rng, n: usize) -> WorldScene {
    let mut scene = WorldScene::new();
    let tex = scene.add_texture("t", Texture::value_noise(0.3, 0.5, 1));
    for _ in 0..n {
        let a = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let mut b = a;
        while (b - a).length() < 0.05 {
            b = Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        }
        scene.walls.push(WallSegment::new(a, b, tex));
    }
    scene
}

/// Nearest intersection by solving the 2x2 system
/// `o + t d = a + s (b - a)` with Cramer's rule. Returns (t, s, index).
pub fn brute_ray(scene: &WorldScene, o: Vec2, d: Vec2) -> Option<(f64, f64, usize)> {
    let mut best: Option<(f64, f64, usize)> = None;
    for (i, wall) in scene.walls.iter().enumerate() {
        let (a, b) = (wall.p0 + wall.offset, wall.p1 + wall.offset);
        // columns: d, -(b - a); rhs: a - o
        let (m00, m01, m10, m11) = (d.x, a.x - b.x, d.y, a.y - b.y);
        let (r0, r1) = (a.x - o.x, a.y - o.y);
        let det = m00 * m11 - m01 * m10;
        if det.abs() < 1e-12 {
            continue;
        }
        let t = (r0 * m11 - m01 * r1) / det;
        let s = (m00 * r1 - r0 * m10) / det;
        if t >= 0.0 && (0.0..=1.0).contains(&s) && best.map_or(true, |(bt, _, _)| t < bt) {
            best = Some((t, s, i));
        }
    }
    best
}

/// Distance from `p` to segment `ab` as the minimum of the two endpoint
/// distances and, when the foot of the perpendicular falls inside the
/// segment, the perpendicular distance.
pub fn brute_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let da = ((p.x - a.x).powi(2) + (p.y - a.y).powi(2)).sqrt();
    let db = ((p.x - b.x).powi(2) + (p.y - b.y).powi(2)).sqrt();
    let (ex, ey) = (b.x - a.x, b.y - a.y);
    let len2 = ex * ex + ey * ey;
    let along = ((p.x - a.x) * ex + (p.y - a.y) * ey) / len2;
    let mut d = da.min(db);
    if (0.0..=1.0).contains(&along) {
        let perp = ((p.x - a.x) * ey - (p.y - a.y) * ex).abs() / len2.sqrt();
        d = d.min(perp);
    }
    d
}

/// Deepest overlap `(wall, penetration)` of a disc, ties to the lowest
/// index.
pub fn brute_contact(scene: &WorldScene, p: Vec2, radius: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, wall) in scene.walls.iter().enumerate() {
        let d = brute_segment_distance(p, wall.p0 + wall.offset, wall.p1 + wall.offset);
        if d < radius && best.map_or(true, |(_, pen)| radius - d > pen) {
            best = Some((i, radius - d));
        }
    }
    best
}

/// Textbook quadratic S-spline.
pub fn smf_closed_form(a: f64, b: f64, x: f64) -> f64 {
    if x <= a {
        0.0
    } else if x <= (a + b) / 2.0 {
        2.0 * ((x - a) / (b - a)).powi(2)
    } else if x <= b {
        1.0 - 2.0 * ((x - b) / (b - a)).powi(2)
    } else {
        1.0
    }
}

pub fn zmf_closed_form(a: f64, b: f64, x: f64) -> f64 {
    if x <= a {
        1.0
    } else if x <= (a + b) / 2.0 {
        1.0 - 2.0 * ((x - a) / (b - a)).powi(2)
    } else if x <= b {
        2.0 * ((x - b) / (b - a)).powi(2)
    } else {
        0.0
    }
}

/// Sort, slice off three from each end, average.
pub fn trimmed_mean_oracle(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let kept = &v[3..v.len() - 3];
    kept.iter().sum::<f64>() / kept.len() as f64
}
