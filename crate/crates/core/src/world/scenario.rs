//! Scenario files: a world plus the simulation configuration that runs in it.
//!
//! Grammar, one item per line:
//!
//! ```text
//! # comment (also allowed after a value)
//! [section]
//! key = value
//! ```
//!
//! Sections and their keys:
//!
//! | section        | keys |
//! |----------------|------|
//! | `[world]`      | `ambient`, `wall_height`, `floor` (texture name) |
//! | `[texture]`    | `name`, `kind`, `period`, `contrast`, `seed` |
//! | `[wall]`       | `from = x, y`, `to = x, y`, `texture`, `brightness`, `tint = r, g, b` |
//! | `[script]`     | `wall` (index), `waypoint = dx, dy` (repeatable), `speed`, `loop` |
//! | `[robot]`      | `start = x, y`, `heading` (rad) or `heading_deg`, `locomotion`, `v_min`, `v_max`, `v_side_max`, `heading_slew_max`, `body_radius` |
//! | `[controller]` | `model`, `rules` (`prose`/`literal`), `w_angle`, `w_speed`, `cruise_speed`, any set name `= smf(a, b)` |
//! | `[sim]`        | `dt`, `steps`, `seed`, `flow`, `alpha`, `iterations`, `window`, `eig_threshold`, `enhance`, `scale_factor`, `latency`, `width`, `height`, `hfov` (rad) or `hfov_deg`, `eye_height`, `dump_frames`, `dump_flow` |
//! | `[metrics]`    | `axis = x0, y0, x1, y1`, `half_width`, `transient`, `segment = name start end`, `opening = side start end` |
//!
//! `[texture]`, `[wall]` and `[script]` may repeat; every other section
//! appears at most once. A texture named `floor` replaces the built-in floor
//! checker. Walls refer to textures by name; scripts refer to walls by their
//! zero-based order in the file.

use std::fmt::Write as _;
use std::path::Path;

use crate::fuzzy::{MembershipFunction, SetParams};
use crate::geom::Vec2;
use crate::render::Pose;
use crate::sim::{Opening, SimConfig, Span};
use crate::world::{DynamicScript, NamedTexture, Texture, TextureId, TextureKind, WallSegment, WorldScene};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub scene: WorldScene,
    pub config: SimConfig,
}

const BUNDLED: [(&str, &str); 8] = [
    ("straight_corridor", include_str!("../../scenarios/straight_corridor.scn")),
    ("narrowing", include_str!("../../scenarios/narrowing.scn")),
    ("bend", include_str!("../../scenarios/bend.scn")),
    ("side_opening", include_str!("../../scenarios/side_opening.scn")),
    ("maze", include_str!("../../scenarios/maze.scn")),
    ("moving_wall", include_str!("../../scenarios/moving_wall.scn")),
    ("dark_wall", include_str!("../../scenarios/dark_wall.scn")),
    ("dark_wall_lit", include_str!("../../scenarios/dark_wall_lit.scn")),
];

/// Names of the scenarios compiled into the library.
pub fn bundled_scenarios() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Parses a bundled scenario by name; a trailing `.scn` is ignored.
pub fn bundled_scenario(name: &str) -> Option<Result<Scenario>> {
    let name = name.strip_suffix(".scn").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_scenario(text))
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    World,
    Texture,
    Wall,
    Script,
    Robot,
    Controller,
    Sim,
    Metrics,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "world" => Section::World,
            "texture" => Section::Texture,
            "wall" => Section::Wall,
            "script" => Section::Script,
            "robot" => Section::Robot,
            "controller" => Section::Controller,
            "sim" => Section::Sim,
            "metrics" => Section::Metrics,
            _ => return None,
        })
    }

    fn repeatable(self) -> bool {
        matches!(self, Section::Texture | Section::Wall | Section::Script)
    }
}

struct PendingTexture {
    line: usize,
    name: Option<String>,
    texture: Texture,
}

struct PendingWall {
    line: usize,
    from: Option<Vec2>,
    to: Option<Vec2>,
    texture: Option<String>,
    brightness: f64,
    tint: [f64; 3],
}

struct PendingScript {
    line: usize,
    wall: Option<usize>,
    waypoints: Vec<Vec2>,
    speed: f64,
    looped: bool,
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| Error::parse(line, format!("{key}: cannot parse '{v}': {e}")))
}

fn floats(line: usize, key: &str, v: &str, n: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = v
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if parts.len() != n {
        return Err(Error::parse(line, format!("{key}: expected {n} numbers, got '{v}'")));
    }
    parts.iter().map(|p| num(line, key, p)).collect()
}

fn point(line: usize, key: &str, v: &str) -> Result<Vec2> {
    let p = floats(line, key, v, 2)?;
    Ok(Vec2::new(p[0], p[1]))
}

fn boolean(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::parse(line, format!("{key}: expected true or false, got '{v}'"))),
    }
}

fn parsed<T: std::str::FromStr<Err = String>>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse::<T>().map_err(|e| Error::parse(line, format!("{key}: {e}")))
}

fn span_parts(line: usize, key: &str, v: &str) -> Result<(String, f64, f64)> {
    let parts: Vec<&str> = v.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::parse(line, format!("{key}: expected 'name start end', got '{v}'")));
    }
    Ok((parts[0].to_string(), num(line, key, parts[1])?, num(line, key, parts[2])?))
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut scene = WorldScene::new();
    let mut config = SimConfig::default();
    let mut textures: Vec<PendingTexture> = Vec::new();
    let mut walls: Vec<PendingWall> = Vec::new();
    let mut scripts: Vec<PendingScript> = Vec::new();
    let mut floor_name: Option<(usize, String)> = None;
    let mut seen: Vec<Section> = Vec::new();
    let mut section: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(line, format!("malformed section header '{content}'")))?
                .trim();
            let s = Section::parse(name)
                .ok_or_else(|| Error::parse(line, format!("unknown section [{name}]")))?;
            if !s.repeatable() && seen.contains(&s) {
                return Err(Error::parse(line, format!("section [{name}] appears twice")));
            }
            seen.push(s);
            match s {
                Section::Texture => textures.push(PendingTexture {
                    line,
                    name: None,
                    texture: Texture::checker(1.0, 0.5),
                }),
                Section::Wall => walls.push(PendingWall {
                    line,
                    from: None,
                    to: None,
                    texture: None,
                    brightness: 1.0,
                    tint: [1.0; 3],
                }),
                Section::Script => scripts.push(PendingScript {
                    line,
                    wall: None,
                    waypoints: Vec::new(),
                    speed: 0.0,
                    looped: false,
                }),
                _ => {}
            }
            section = Some(s);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(line, format!("expected 'key = value', got '{content}'")))?;
        let section =
            section.ok_or_else(|| Error::parse(line, "key outside of any section"))?;
        let unknown = || Error::parse(line, format!("unknown key '{key}'"));

        match section {
            Section::World => match key {
                "ambient" => scene.ambient_level = num(line, key, value)?,
                "wall_height" => scene.wall_height = num(line, key, value)?,
                "floor" => floor_name = Some((line, value.to_string())),
                _ => return Err(unknown()),
            },
            Section::Texture => {
                let t = textures.last_mut().unwrap();
                match key {
                    "name" => t.name = Some(value.to_string()),
                    "kind" => {
                        t.texture.kind = parsed::<TextureKind>(line, key, value)?;
                        if t.texture.kind == TextureKind::Uniform {
                            t.texture.contrast = 0.0;
                        }
                    }
                    "period" => t.texture.period = num(line, key, value)?,
                    "contrast" => t.texture.contrast = num(line, key, value)?,
                    "seed" => t.texture.seed = num(line, key, value)?,
                    _ => return Err(unknown()),
                }
            }
            Section::Wall => {
                let w = walls.last_mut().unwrap();
                match key {
                    "from" => w.from = Some(point(line, key, value)?),
                    "to" => w.to = Some(point(line, key, value)?),
                    "texture" => w.texture = Some(value.to_string()),
                    "brightness" => w.brightness = num(line, key, value)?,
                    "tint" => {
                        let c = floats(line, key, value, 3)?;
                        w.tint = [c[0], c[1], c[2]];
                    }
                    _ => return Err(unknown()),
                }
            }
            Section::Script => {
                let s = scripts.last_mut().unwrap();
                match key {
                    "wall" => s.wall = Some(num(line, key, value)?),
                    "waypoint" => s.waypoints.push(point(line, key, value)?),
                    "speed" => s.speed = num(line, key, value)?,
                    "loop" => s.looped = boolean(line, key, value)?,
                    _ => return Err(unknown()),
                }
            }
            Section::Robot => {
                let c = &mut config.constraints;
                match key {
                    "start" => config.start.position = point(line, key, value)?,
                    "heading" => config.start.heading = num(line, key, value)?,
                    "heading_deg" => {
                        config.start.heading = num::<f64>(line, key, value)?.to_radians()
                    }
                    "locomotion" => config.locomotion = parsed(line, key, value)?,
                    "v_min" => c.v_min = num(line, key, value)?,
                    "v_max" => c.v_max = num(line, key, value)?,
                    "v_side_max" => c.v_side_max = num(line, key, value)?,
                    "heading_slew_max" => c.heading_slew_max = num(line, key, value)?,
                    "body_radius" => c.body_radius = num(line, key, value)?,
                    _ => return Err(unknown()),
                }
            }
            Section::Controller => {
                let c = &mut config.controller;
                match key {
                    "model" => c.model = parsed(line, key, value)?,
                    "rules" => c.variant = parsed(line, key, value)?,
                    "w_angle" => c.w_angle = num(line, key, value)?,
                    "w_speed" => c.w_speed = num(line, key, value)?,
                    "cruise_speed" => c.cruise_speed = num(line, key, value)?,
                    _ => match c.sets.get_mut(key) {
                        Some(mf) => *mf = parsed::<MembershipFunction>(line, key, value)?,
                        None => return Err(unknown()),
                    },
                }
            }
            Section::Sim => match key {
                "dt" => config.dt = num(line, key, value)?,
                "steps" => config.steps = num(line, key, value)?,
                "seed" => config.seed = num(line, key, value)?,
                "flow" => config.flow.algorithm = parsed(line, key, value)?,
                "alpha" => config.flow.alpha = num(line, key, value)?,
                "iterations" => config.flow.iterations = num(line, key, value)?,
                "window" => config.flow.window = num(line, key, value)?,
                "eig_threshold" => config.flow.eig_threshold = num(line, key, value)?,
                "enhance" => config.enhance = parsed(line, key, value)?,
                "scale_factor" => config.scale_factor = Some(num(line, key, value)?),
                "latency" => config.latency = num(line, key, value)?,
                "width" => config.camera.width = num(line, key, value)?,
                "height" => config.camera.height = num(line, key, value)?,
                "hfov" => config.camera.hfov = num(line, key, value)?,
                "hfov_deg" => config.camera.hfov = num::<f64>(line, key, value)?.to_radians(),
                "eye_height" => config.camera.eye_height = num(line, key, value)?,
                "dump_frames" => config.dump.frames = boolean(line, key, value)?,
                "dump_flow" => config.dump.flow = boolean(line, key, value)?,
                _ => return Err(unknown()),
            },
            Section::Metrics => {
                let m = &mut config.metrics;
                match key {
                    "axis" => {
                        let a = floats(line, key, value, 4)?;
                        m.axis = Some((Vec2::new(a[0], a[1]), Vec2::new(a[2], a[3])));
                    }
                    "half_width" => m.half_width = Some(num(line, key, value)?),
                    "transient" => m.transient = num(line, key, value)?,
                    "segment" => {
                        let (name, start, end) = span_parts(line, key, value)?;
                        m.segments.push(Span { name, start, end });
                    }
                    "opening" => {
                        let (side, start, end) = span_parts(line, key, value)?;
                        let side = parsed(line, key, &side)?;
                        m.openings.push(Opening { side, start, end });
                    }
                    _ => return Err(unknown()),
                }
            }
        }
    }

    for t in textures {
        let name = t
            .name
            .ok_or_else(|| Error::parse(t.line, "texture section without a name"))?;
        if name == "floor" {
            scene.textures[0].texture = t.texture;
        } else if scene.texture_id(&name).is_some() {
            return Err(Error::parse(t.line, format!("duplicate texture name '{name}'")));
        } else {
            scene.textures.push(NamedTexture { name, texture: t.texture });
        }
    }
    if let Some((line, name)) = floor_name {
        scene.floor_texture = scene
            .texture_id(&name)
            .ok_or_else(|| Error::parse(line, format!("unknown texture '{name}'")))?;
    }
    for w in walls {
        let from = w.from.ok_or_else(|| Error::parse(w.line, "wall without 'from'"))?;
        let to = w.to.ok_or_else(|| Error::parse(w.line, "wall without 'to'"))?;
        let texture = match &w.texture {
            Some(name) => scene
                .texture_id(name)
                .ok_or_else(|| Error::parse(w.line, format!("unknown texture '{name}'")))?,
            None => TextureId(0),
        };
        let mut seg = WallSegment::new(from, to, texture);
        seg.brightness = w.brightness;
        seg.tint = w.tint;
        scene.walls.push(seg);
    }
    for s in scripts {
        let wall_index = s.wall.ok_or_else(|| Error::parse(s.line, "script without 'wall'"))?;
        scene.scripts.push(DynamicScript {
            wall_index,
            waypoints: s.waypoints,
            speed: s.speed,
            looped: s.looped,
        });
    }

    scene.validate()?;
    config.validate()?;
    Ok(Scenario { scene, config })
}

fn mf_line(out: &mut String, name: &str, mf: MembershipFunction) {
    let _ = writeln!(out, "{name} = {mf}");
}

impl Scenario {
    /// Serialises to the scenario grammar. Parsing the result reproduces
    /// this value exactly, with headings and field of view kept in radians.
    pub fn to_text(&self) -> String {
        let scene = &self.scene;
        let cfg = &self.config;
        let mut out = String::new();
        let w = &mut out;

        let _ = writeln!(w, "[world]");
        let _ = writeln!(w, "ambient = {}", scene.ambient_level);
        let _ = writeln!(w, "wall_height = {}", scene.wall_height);
        let _ = writeln!(w, "floor = {}", scene.textures[scene.floor_texture.0].name);

        for t in &scene.textures {
            let tex = &t.texture;
            let _ = writeln!(w, "\n[texture]");
            let _ = writeln!(w, "name = {}", t.name);
            let _ = writeln!(w, "kind = {}", tex.kind);
            let _ = writeln!(w, "period = {}", tex.period);
            let _ = writeln!(w, "contrast = {}", tex.contrast);
            let _ = writeln!(w, "seed = {}", tex.seed);
        }
        for wall in &scene.walls {
            let _ = writeln!(w, "\n[wall]");
            let _ = writeln!(w, "from = {}, {}", wall.p0.x, wall.p0.y);
            let _ = writeln!(w, "to = {}, {}", wall.p1.x, wall.p1.y);
            let _ = writeln!(w, "texture = {}", scene.textures[wall.texture.0].name);
            let _ = writeln!(w, "brightness = {}", wall.brightness);
            let [r, g, b] = wall.tint;
            let _ = writeln!(w, "tint = {r}, {g}, {b}");
        }
        for s in &scene.scripts {
            let _ = writeln!(w, "\n[script]");
            let _ = writeln!(w, "wall = {}", s.wall_index);
            for p in &s.waypoints {
                let _ = writeln!(w, "waypoint = {}, {}", p.x, p.y);
            }
            let _ = writeln!(w, "speed = {}", s.speed);
            let _ = writeln!(w, "loop = {}", s.looped);
        }

        let c = &cfg.constraints;
        let _ = writeln!(w, "\n[robot]");
        let _ = writeln!(w, "start = {}, {}", cfg.start.position.x, cfg.start.position.y);
        let _ = writeln!(w, "heading = {}", cfg.start.heading);
        let _ = writeln!(w, "locomotion = {}", cfg.locomotion);
        let _ = writeln!(w, "v_min = {}", c.v_min);
        let _ = writeln!(w, "v_max = {}", c.v_max);
        let _ = writeln!(w, "v_side_max = {}", c.v_side_max);
        let _ = writeln!(w, "heading_slew_max = {}", c.heading_slew_max);
        let _ = writeln!(w, "body_radius = {}", c.body_radius);

        let k = &cfg.controller;
        let _ = writeln!(w, "\n[controller]");
        let _ = writeln!(w, "model = {}", k.model);
        let _ = writeln!(w, "rules = {}", k.variant);
        let _ = writeln!(w, "w_angle = {}", k.w_angle);
        let _ = writeln!(w, "w_speed = {}", k.w_speed);
        let _ = writeln!(w, "cruise_speed = {}", k.cruise_speed);
        for name in SetParams::NAMES {
            mf_line(w, name, k.sets.get(name).unwrap());
        }

        let f = &cfg.flow;
        let _ = writeln!(w, "\n[sim]");
        let _ = writeln!(w, "dt = {}", cfg.dt);
        let _ = writeln!(w, "steps = {}", cfg.steps);
        let _ = writeln!(w, "seed = {}", cfg.seed);
        let _ = writeln!(w, "flow = {}", f.algorithm);
        let _ = writeln!(w, "alpha = {}", f.alpha);
        let _ = writeln!(w, "iterations = {}", f.iterations);
        let _ = writeln!(w, "window = {}", f.window);
        let _ = writeln!(w, "eig_threshold = {}", f.eig_threshold);
        let _ = writeln!(w, "enhance = {}", cfg.enhance);
        if let Some(s) = cfg.scale_factor {
            let _ = writeln!(w, "scale_factor = {s}");
        }
        let _ = writeln!(w, "latency = {}", cfg.latency);
        let _ = writeln!(w, "width = {}", cfg.camera.width);
        let _ = writeln!(w, "height = {}", cfg.camera.height);
        let _ = writeln!(w, "hfov = {}", cfg.camera.hfov);
        let _ = writeln!(w, "eye_height = {}", cfg.camera.eye_height);
        let _ = writeln!(w, "dump_frames = {}", cfg.dump.frames);
        let _ = writeln!(w, "dump_flow = {}", cfg.dump.flow);

        let m = &cfg.metrics;
        let _ = writeln!(w, "\n[metrics]");
        if let Some((a, b)) = m.axis {
            let _ = writeln!(w, "axis = {}, {}, {}, {}", a.x, a.y, b.x, b.y);
        }
        if let Some(h) = m.half_width {
            let _ = writeln!(w, "half_width = {h}");
        }
        let _ = writeln!(w, "transient = {}", m.transient);
        for s in &m.segments {
            let _ = writeln!(w, "segment = {} {} {}", s.name, s.start, s.end);
        }
        for o in &m.openings {
            let _ = writeln!(w, "opening = {} {} {}", o.side, o.start, o.end);
        }
        out
    }

    /// The robot's starting pose.
    pub fn start(&self) -> Pose {
        self.config.start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
[texture]
name = bricks
kind = checker
period = 0.5
contrast = 0.8

[wall]
from = 0, 2
to = 20, 2
texture = bricks

[wall]
from = 0, -2   # trailing comment
to = 20, -2
texture = bricks
";

    #[test]
    fn minimal_file_parses() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.scene.walls.len(), 2);
        assert!(s.scene.scripts.is_empty());
        assert_eq!(s.scene.textures.len(), 2);
        assert_eq!(s.config, SimConfig::default());
    }

    #[test]
    fn parse_error_reports_line() {
        let text = "[world]\nambient = 0.2\nnonsense\n";
        match parse_scenario(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_scenario("[wall]\nfrom = 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_section_and_key() {
        assert!(matches!(parse_scenario("[bogus]\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_scenario("[sim]\nfoo = 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_scenario("[sim]\n[sim]\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn out_of_range_script_names_the_script() {
        let text = format!("{MINIMAL}\n[script]\nwall = 99\nwaypoint = 1, 0\nspeed = 0.5\n");
        let err = parse_scenario(&text).unwrap_err();
        assert!(matches!(err, Error::Validation { ref entity, .. } if entity == "script 0"));
        assert!(err.to_string().contains("99"));
    }

    #[test]
    fn controller_overrides() {
        let text = "[controller]\nmodel = turn_at_threshold\nrules = literal\nhigh = smf(5, 9)\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.config.controller.sets.high, MembershipFunction::smf(5.0, 9.0));
        assert_eq!(s.config.controller.variant, crate::fuzzy::RuleVariant::Literal);
    }

    #[test]
    fn floor_texture_override() {
        let text = "[world]\nfloor = floor\n[texture]\nname = floor\nkind = uniform\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.scene.textures.len(), 1);
        assert_eq!(s.scene.textures[0].texture.kind, TextureKind::Uniform);
    }

    #[test]
    fn bundled_round_trip() {
        for name in bundled_scenarios() {
            let s = bundled_scenario(name).unwrap().unwrap();
            let again = parse_scenario(&s.to_text()).unwrap();
            assert_eq!(s, again, "{name}");
        }
    }

    #[test]
    fn unknown_bundle() {
        assert!(bundled_scenario("nope").is_none());
        assert!(bundled_scenario("narrowing.scn").is_some());
    }
}
