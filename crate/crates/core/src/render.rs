//! Column ray-caster: the robot's forward-looking camera.
//!
//! Each image column casts one ray into the wall set. Rows above and
//! below the wall slice see the ceiling and floor planes, which are
//! perspective-sampled with the world's floor texture out to
//! [`MAX_PLANE_DISTANCE`].

use crate::geom::Vec2;
use crate::image::{ColorFrame, Grid, Rgb};
use crate::world::{cast_ray, WorldScene};

/// Floor and ceiling beyond this range render as ambient.
pub const MAX_PLANE_DISTANCE: f64 = 12.0;

const FLOOR_TINT: Rgb = [0.85, 0.85, 0.8];
const CEILING_TINT: Rgb = [0.7, 0.72, 0.75];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    pub hfov: f64,
    pub width: usize,
    pub height: usize,
    pub eye_height: f64,
}

impl Default for CameraModel {
    fn default() -> Self {
        Self {
            hfov: std::f64::consts::FRAC_PI_2,
            width: 320,
            height: 200,
            eye_height: 1.0,
        }
    }
}

impl CameraModel {
    /// Focal length in pixels; pixels are square.
    pub fn focal_px(&self) -> f64 {
        self.width as f64 * 0.5 / (self.hfov * 0.5).tan()
    }

    pub fn is_valid(&self) -> bool {
        self.hfov > 0.0
            && self.hfov < std::f64::consts::PI
            && self.width > 0
            && self.height > 0
            && self.eye_height > 0.0
    }

    /// Horizontal image-plane offset of column `c`'s centre over focal
    /// length; negative on the left half.
    pub fn column_slope(&self, c: usize) -> f64 {
        ((c as f64 + 0.5) - self.width as f64 * 0.5) / self.focal_px()
    }
}

/// Camera position and heading (radians, counter-clockwise from +x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vec2,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            position: Vec2::new(x, y),
            heading,
        }
    }
}

fn tinted(intensity: f64, tint: Rgb) -> Rgb {
    let i = intensity.clamp(0.0, 1.0);
    [i * tint[0], i * tint[1], i * tint[2]]
}

/// Renders the view from `pose`. The timestamp is left at zero for the
/// caller to fill in.
pub fn render_frame(scene: &WorldScene, pose: Pose, camera: &CameraModel) -> ColorFrame {
    let (w, h) = (camera.width, camera.height);
    let f = camera.focal_px();
    let forward = Vec2::from_angle(pose.heading);
    let right = forward.right();
    let eye = camera.eye_height;
    let ceiling_height = scene.wall_height;
    let ambient = [scene.ambient_level; 3];
    let floor_tex = scene.texture(scene.floor_texture);

    let mut pixels = Grid::filled(w, h, ambient);
    for c in 0..w {
        let slope = camera.column_slope(c);
        let ray = forward + right * slope;
        let ray_len = ray.length();
        let hit = cast_ray(scene, pose.position, ray * (1.0 / ray_len));
        // depth measured along the optical axis
        let depth = hit.map(|hit| hit.distance / ray_len);

        for r in 0..h {
            let yoff = (r as f64 + 0.5) - h as f64 * 0.5;
            if let (Some(hit), Some(depth)) = (hit, depth) {
                let z = eye - yoff * depth / f;
                if (0.0..=scene.wall_height).contains(&z) {
                    let wall = &scene.walls[hit.wall_index];
                    let tex = scene.texture(wall.texture);
                    let value = tex.sample(hit.texture_coord, z / scene.wall_height);
                    pixels.set(c, r, tinted(value * wall.brightness, wall.tint));
                    continue;
                }
            }
            let (plane_depth, tint) = if yoff > 0.0 {
                (eye * f / yoff, FLOOR_TINT)
            } else if yoff < 0.0 && ceiling_height > eye {
                ((ceiling_height - eye) * f / -yoff, CEILING_TINT)
            } else {
                continue;
            };
            if plane_depth > MAX_PLANE_DISTANCE {
                continue;
            }
            let p = pose.position + ray * plane_depth;
            pixels.set(c, r, tinted(floor_tex.sample_plane(p.x, p.y), tint));
        }
    }
    ColorFrame {
        pixels,
        timestamp: 0.0,
    }
}
