//! Static geometry, textures and scripted dynamics of a test world.
//!
//! The world is 2.5-D: every wall is a vertical extrusion of a planar
//! segment between a flat floor and the wall top. Moving obstacles are
//! walls translated along a waypoint path; walls never rotate.

mod scenario;
mod texture;

pub use scenario::{bundled_scenario, bundled_scenarios, load_scenario, parse_scenario, Scenario};
pub use texture::{mix_seed, Texture, TextureKind, NOMINAL_WALL_HEIGHT};

use crate::geom::{point_segment_distance, Vec2};
use crate::image::Rgb;
use crate::{Error, Result};

/// Index into [`WorldScene::textures`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TextureId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct NamedTexture {
    pub name: String,
    pub texture: Texture,
}

/// A vertical wall. `p0`/`p1` are the rest positions; `offset` is the
/// current scripted displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct WallSegment {
    pub p0: Vec2,
    pub p1: Vec2,
    pub texture: TextureId,
    pub brightness: f64,
    pub tint: Rgb,
    pub offset: Vec2,
}

impl WallSegment {
    pub fn new(p0: Vec2, p1: Vec2, texture: TextureId) -> Self {
        Self {
            p0,
            p1,
            texture,
            brightness: 1.0,
            tint: [1.0, 1.0, 1.0],
            offset: Vec2::ZERO,
        }
    }

    /// Current endpoints, displacement applied.
    pub fn endpoints(&self) -> (Vec2, Vec2) {
        (self.p0 + self.offset, self.p1 + self.offset)
    }

    pub fn length(&self) -> f64 {
        (self.p1 - self.p0).length()
    }
}

/// Moves one wall along a polyline of displacements. The path starts at
/// zero displacement and visits `waypoints` in order; looping scripts
/// return to zero and repeat, others hold at the final waypoint.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicScript {
    pub wall_index: usize,
    pub waypoints: Vec<Vec2>,
    pub speed: f64,
    pub looped: bool,
}

impl DynamicScript {
    fn path(&self) -> Vec<Vec2> {
        let mut pts = Vec::with_capacity(self.waypoints.len() + 2);
        pts.push(Vec2::ZERO);
        pts.extend(self.waypoints.iter().copied());
        if self.looped {
            pts.push(Vec2::ZERO);
        }
        pts
    }

    /// Displacement of the scripted wall at absolute time `t`.
    pub fn displacement_at(&self, t: f64) -> Vec2 {
        let pts = self.path();
        let total: f64 = pts.windows(2).map(|w| (w[1] - w[0]).length()).sum();
        if total <= 0.0 || self.speed <= 0.0 {
            return Vec2::ZERO;
        }
        let mut s = self.speed * t.max(0.0);
        if self.looped {
            s %= total;
        } else if s >= total {
            return *pts.last().unwrap();
        }
        for w in pts.windows(2) {
            let len = (w[1] - w[0]).length();
            if s <= len {
                if len == 0.0 {
                    return w[0];
                }
                return w[0] + (w[1] - w[0]) * (s / len);
            }
            s -= len;
        }
        *pts.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldScene {
    pub walls: Vec<WallSegment>,
    pub scripts: Vec<DynamicScript>,
    pub textures: Vec<NamedTexture>,
    pub floor_texture: TextureId,
    pub ambient_level: f64,
    pub wall_height: f64,
}

/// Nearest ray intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub distance: f64,
    /// Metres along the wall from its `p0` end.
    pub texture_coord: f64,
    pub wall_index: usize,
}

/// Deepest wall overlap of a disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub wall_index: usize,
    pub penetration: f64,
}

impl WorldScene {
    /// An empty world with a default floor checker.
    pub fn new() -> Self {
        Self {
            walls: Vec::new(),
            scripts: Vec::new(),
            textures: vec![NamedTexture {
                name: "floor".into(),
                texture: Texture::checker(1.0, 0.5),
            }],
            floor_texture: TextureId(0),
            ambient_level: 0.2,
            wall_height: NOMINAL_WALL_HEIGHT,
        }
    }

    pub fn add_texture(&mut self, name: impl Into<String>, texture: Texture) -> TextureId {
        self.textures.push(NamedTexture {
            name: name.into(),
            texture,
        });
        TextureId(self.textures.len() - 1)
    }

    pub fn texture_id(&self, name: &str) -> Option<TextureId> {
        self.textures
            .iter()
            .position(|t| t.name == name)
            .map(TextureId)
    }

    pub fn texture(&self, id: TextureId) -> &Texture {
        &self.textures[id.0].texture
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ambient_level) {
            return Err(Error::invalid("world", "ambient must lie in [0, 1]"));
        }
        if !(self.wall_height > 0.0) {
            return Err(Error::invalid("world", "wall_height must be positive"));
        }
        if self.floor_texture.0 >= self.textures.len() {
            return Err(Error::invalid("world", "floor texture does not exist"));
        }
        for (i, t) in self.textures.iter().enumerate() {
            let tex = &t.texture;
            if !(tex.period > 0.0) {
                return Err(Error::invalid(
                    format!("texture {i} '{}'", t.name),
                    "period must be positive",
                ));
            }
            if !(0.0..=1.0).contains(&tex.contrast) {
                return Err(Error::invalid(
                    format!("texture {i} '{}'", t.name),
                    "contrast must lie in [0, 1]",
                ));
            }
            if tex.kind == TextureKind::Uniform && tex.contrast != 0.0 {
                return Err(Error::invalid(
                    format!("texture {i} '{}'", t.name),
                    "uniform textures have contrast 0",
                ));
            }
        }
        for (i, w) in self.walls.iter().enumerate() {
            if !(w.length() > 1e-9) {
                return Err(Error::invalid(format!("wall {i}"), "zero-length segment"));
            }
            if !(0.0..=1.0).contains(&w.brightness) {
                return Err(Error::invalid(
                    format!("wall {i}"),
                    "brightness must lie in [0, 1]",
                ));
            }
            if w.texture.0 >= self.textures.len() {
                return Err(Error::invalid(format!("wall {i}"), "unknown texture"));
            }
            if w.tint.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return Err(Error::invalid(format!("wall {i}"), "tint channels must lie in [0, 1]"));
            }
        }
        for (i, s) in self.scripts.iter().enumerate() {
            if s.wall_index >= self.walls.len() {
                return Err(Error::invalid(
                    format!("script {i}"),
                    format!(
                        "wall index {} out of range ({} walls)",
                        s.wall_index,
                        self.walls.len()
                    ),
                ));
            }
            if s.waypoints.is_empty() {
                return Err(Error::invalid(format!("script {i}"), "no waypoints"));
            }
            if !(s.speed >= 0.0) {
                return Err(Error::invalid(format!("script {i}"), "speed must be >= 0"));
            }
        }
        Ok(())
    }

    /// Re-derives every texture seed from `seed`, so one integer selects
    /// the whole family of texture realisations.
    pub fn reseeded(&self, seed: u64) -> WorldScene {
        let mut out = self.clone();
        for t in &mut out.textures {
            t.texture.seed = mix_seed(t.texture.seed, seed);
        }
        out
    }
}

impl Default for WorldScene {
    fn default() -> Self {
        Self::new()
    }
}

/// Scene snapshot at time `t + dt`. Scripted walls sit at their path
/// displacement for that time; everything else is copied unchanged.
pub fn step_world(scene: &WorldScene, t: f64, dt: f64) -> WorldScene {
    debug_assert!(dt > 0.0);
    let mut next = scene.clone();
    for script in &scene.scripts {
        next.walls[script.wall_index].offset = script.displacement_at(t + dt);
    }
    next
}

/// Nearest wall hit along a ray; ties go to the lowest wall index.
/// Rays parallel to a wall never hit it.
pub fn cast_ray(scene: &WorldScene, origin: Vec2, direction: Vec2) -> Option<Hit> {
    let mut best: Option<Hit> = None;
    for (i, wall) in scene.walls.iter().enumerate() {
        let (a, b) = wall.endpoints();
        let edge = b - a;
        let denom = direction.cross(edge);
        if denom.abs() < 1e-12 {
            continue;
        }
        let ao = a - origin;
        let t = ao.cross(edge) / denom;
        let s = ao.cross(direction) / denom;
        if t < 0.0 || !(0.0..=1.0).contains(&s) {
            continue;
        }
        if best.map_or(true, |h| t < h.distance) {
            best = Some(Hit {
                distance: t,
                texture_coord: s * edge.length(),
                wall_index: i,
            });
        }
    }
    best
}

/// Deepest wall within `radius` of `position`, if any.
pub fn disc_contact(scene: &WorldScene, position: Vec2, radius: f64) -> Option<Contact> {
    let mut best: Option<Contact> = None;
    for (i, wall) in scene.walls.iter().enumerate() {
        let (a, b) = wall.endpoints();
        let d = point_segment_distance(position, a, b);
        if d < radius {
            let penetration = radius - d;
            if best.map_or(true, |c| penetration > c.penetration) {
                best = Some(Contact {
                    wall_index: i,
                    penetration,
                });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corridor() -> WorldScene {
        let mut scene = WorldScene::new();
        let tex = scene.add_texture("wall", Texture::value_noise(0.2, 0.8, 1));
        scene
            .walls
            .push(WallSegment::new(Vec2::new(0.0, 2.0), Vec2::new(20.0, 2.0), tex));
        scene
            .walls
            .push(WallSegment::new(Vec2::new(0.0, -2.0), Vec2::new(20.0, -2.0), tex));
        scene
    }

    #[test]
    fn ray_straight_at_wall() {
        let mut scene = WorldScene::new();
        let tex = scene.add_texture("w", Texture::uniform());
        scene
            .walls
            .push(WallSegment::new(Vec2::new(1.0, -1.0), Vec2::new(1.0, 1.0), tex));
        let hit = cast_ray(&scene, Vec2::ZERO, Vec2::new(1.0, 0.0)).unwrap();
        assert!((hit.distance - 1.0).abs() < 1e-12);
        assert!((hit.texture_coord - 1.0).abs() < 1e-12);
        assert_eq!(hit.wall_index, 0);
    }

    #[test]
    fn parallel_ray_misses() {
        let scene = corridor();
        assert!(cast_ray(&scene, Vec2::ZERO, Vec2::new(1.0, 0.0)).is_none());
        assert!(cast_ray(&scene, Vec2::new(5.0, 0.0), Vec2::new(-1.0, 0.0)).is_none());
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let mut scene = WorldScene::new();
        let tex = scene.add_texture("w", Texture::uniform());
        for _ in 0..3 {
            scene
                .walls
                .push(WallSegment::new(Vec2::new(2.0, -1.0), Vec2::new(2.0, 1.0), tex));
        }
        let hit = cast_ray(&scene, Vec2::ZERO, Vec2::new(1.0, 0.0)).unwrap();
        assert_eq!(hit.wall_index, 0);
    }

    #[test]
    fn static_scene_steps_to_itself() {
        let scene = corridor();
        assert_eq!(step_world(&scene, 3.0, 0.25), scene);
    }

    #[test]
    fn scripted_wall_moves_linearly() {
        let mut scene = corridor();
        scene.scripts.push(DynamicScript {
            wall_index: 0,
            waypoints: vec![Vec2::new(10.0, 0.0)],
            speed: 0.5,
            looped: false,
        });
        let next = step_world(&scene, 0.0, 0.1);
        let (a, b) = next.walls[0].endpoints();
        assert!((a.x - 0.05).abs() < 1e-12 && (b.x - 20.05).abs() < 1e-12);
        assert_eq!(next.walls[1], scene.walls[1]);
    }

    #[test]
    fn non_looping_script_holds_final_waypoint() {
        let script = DynamicScript {
            wall_index: 0,
            waypoints: vec![Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)],
            speed: 1.0,
            looped: false,
        };
        assert_eq!(script.displacement_at(2.0), Vec2::new(1.0, 1.0));
        assert_eq!(script.displacement_at(50.0), Vec2::new(1.0, 1.0));
        assert_eq!(script.displacement_at(0.5), Vec2::new(0.5, 0.0));
    }

    #[test]
    fn looping_script_stays_in_waypoint_hull() {
        let mut scene = corridor();
        scene.scripts.push(DynamicScript {
            wall_index: 0,
            waypoints: vec![Vec2::new(0.0, -1.5), Vec2::new(1.0, -1.5)],
            speed: 0.7,
            looped: true,
        });
        let mut t = 0.0;
        let dt = 0.1;
        for _ in 0..1000 {
            scene = step_world(&scene, t, dt);
            t += dt;
            let o = scene.walls[0].offset;
            assert!(o.x >= -1e-12 && o.x <= 1.0 + 1e-12, "{o:?}");
            assert!(o.y >= -1.5 - 1e-12 && o.y <= 1e-12, "{o:?}");
        }
    }

    #[test]
    fn disc_contact_depth() {
        let scene = corridor();
        assert!(disc_contact(&scene, Vec2::new(5.0, 0.0), 0.2).is_none());
        let c = disc_contact(&scene, Vec2::new(5.0, 1.9), 0.2).unwrap();
        assert_eq!(c.wall_index, 0);
        assert!((c.penetration - 0.1).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_entities() {
        let mut scene = corridor();
        scene.scripts.push(DynamicScript {
            wall_index: 99,
            waypoints: vec![Vec2::new(1.0, 0.0)],
            speed: 1.0,
            looped: false,
        });
        let err = scene.validate().unwrap_err().to_string();
        assert!(err.contains("script 0"), "{err}");

        let mut scene = corridor();
        scene.walls[1].p1 = scene.walls[1].p0;
        assert!(scene.validate().unwrap_err().to_string().contains("wall 1"));
    }
}
