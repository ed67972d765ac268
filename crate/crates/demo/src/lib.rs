//! Browser demo: drive the simulator from a static page.
//!
//! The page uses three operations: load a bundled scenario with a chosen
//! controller ([`Demo::new`]), advance the closed loop and read back the
//! camera, flow and map views ([`Demo::step`] and friends), and probe a
//! controller with hand-set region flows ([`infer`]).

use flownav::fuzzy::{denormalize, ControllerConfig, ControllerModel, ModelId};
use flownav::image::ColorFrame;
use flownav::flow::FlowField;
use flownav::sim::Simulation;
use flownav::world::{bundled_scenario, bundled_scenarios};
use wasm_bindgen::prelude::*;

/// Flow magnitude (px/frame) drawn at full brightness.
const FLOW_FULL_SCALE: f64 = 2.0;

/// Bundled scenario names, one per line.
#[wasm_bindgen]
pub fn scenario_names() -> String {
    bundled_scenarios().join("\n")
}

#[wasm_bindgen]
pub struct Demo {
    sim: Simulation,
    width: usize,
    height: usize,
    camera: Vec<u8>,
    flow: Vec<u8>,
    trail: Vec<f64>,
}

fn parse_model(name: &str) -> Result<Option<ModelId>, String> {
    if name.is_empty() || name == "default" {
        return Ok(None);
    }
    name.parse().map(Some)
}

fn color_rgba(frame: &ColorFrame, out: &mut Vec<u8>) {
    out.clear();
    for p in frame.pixels.data() {
        for c in p {
            out.push((c.clamp(0.0, 1.0) * 255.0).round() as u8);
        }
        out.push(255);
    }
}

fn flow_rgba(flow: &FlowField, out: &mut Vec<u8>) {
    out.clear();
    for (u, v) in flow.u.data().iter().zip(flow.v.data()) {
        let m = (u.hypot(*v) / FLOW_FULL_SCALE).min(1.0);
        // rightward motion tints red, leftward blue
        let (r, b) = if *u >= 0.0 { (1.0, 0.6) } else { (0.6, 1.0) };
        out.extend_from_slice(&[
            (255.0 * m * r) as u8,
            (255.0 * m * 0.8) as u8,
            (255.0 * m * b) as u8,
            255,
        ]);
    }
}

impl Demo {
    pub fn build(scenario: &str, controller: &str) -> Result<Demo, String> {
        let s = bundled_scenario(scenario)
            .ok_or_else(|| format!("unknown scenario '{scenario}'"))?
            .map_err(|e| e.to_string())?;
        let mut config = s.config;
        if let Some(m) = parse_model(controller)? {
            config.controller.model = m;
        }
        config.steps = usize::MAX;
        let sim = Simulation::new(&s.scene, &config).map_err(|e| e.to_string())?;
        let (width, height) = (config.camera.width, config.camera.height);
        Ok(Demo {
            sim,
            width,
            height,
            camera: vec![0; width * height * 4],
            flow: vec![0; width * height * 4],
            trail: Vec::new(),
        })
    }

    pub fn advance(&mut self, n: usize) -> Result<(), String> {
        for _ in 0..n {
            let (camera, flow) = (&mut self.camera, &mut self.flow);
            let record = self
                .sim
                .step_full(
                    |_| {},
                    |view| {
                        color_rgba(view.color, camera);
                        if let Some(f) = view.flow {
                            flow_rgba(f, flow);
                        }
                    },
                )
                .map_err(|e| e.to_string())?;
            self.trail.extend([record.x, record.y]);
        }
        Ok(())
    }
}

#[wasm_bindgen]
impl Demo {
    /// Loads a bundled scenario. `controller` may be empty to keep the
    /// scenario's own model.
    #[wasm_bindgen(constructor)]
    pub fn new(scenario: &str, controller: &str) -> Result<Demo, String> {
        Demo::build(scenario, controller)
    }

    /// Runs `n` control ticks.
    pub fn step(&mut self, n: usize) -> Result<(), String> {
        self.advance(n)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Last rendered camera frame, RGBA.
    pub fn camera_rgba(&self) -> Vec<u8> {
        self.camera.clone()
    }

    /// Last flow field as an RGBA magnitude image.
    pub fn flow_rgba(&self) -> Vec<u8> {
        self.flow.clone()
    }

    /// Current wall endpoints as `x0, y0, x1, y1` quadruples.
    pub fn walls(&self) -> Vec<f64> {
        self.sim
            .scene()
            .walls
            .iter()
            .flat_map(|w| {
                let (a, b) = w.endpoints();
                [a.x, a.y, b.x, b.y]
            })
            .collect()
    }

    /// Robot positions so far as `x, y` pairs.
    pub fn trail(&self) -> Vec<f64> {
        self.trail.clone()
    }

    /// Pose and the latest controller signals, as `key=value` lines.
    pub fn status(&self) -> String {
        let st = self.sim.state();
        let mut s = format!(
            "step={}\nx={:.2}\ny={:.2}\nheading_deg={:.1}\n",
            self.sim.steps_done(),
            st.position.x,
            st.position.y,
            st.heading.to_degrees()
        );
        if let Some(r) = self.sim.log().records.last() {
            s += &format!(
                "l={:.2}\nr={:.2}\nangle={:.2}\nlateral={:.3}\nforward={:.3}\ncollisions={}\n",
                r.l,
                r.r,
                r.angle_out,
                r.lateral_velocity,
                r.forward_speed,
                self.sim.log().records.iter().filter(|r| r.contact_wall.is_some()).count()
            );
        }
        s
    }
}

/// Runs a controller on explicit region flows (universe units, 0..10).
/// Returns `[angle, speed, lateral m/s, forward m/s]`; `speed` is NaN for
/// models without a speed output.
#[wasm_bindgen]
pub fn infer(controller: &str, l: f64, r: f64) -> Result<Vec<f64>, String> {
    let model = ControllerModel::new(ControllerConfig {
        model: parse_model(controller)?.unwrap_or_default(),
        ..ControllerConfig::default()
    })
    .map_err(|e| e.to_string())?;
    let inputs = match model.id() {
        ModelId::CenterFlying => vec![l - r],
        ModelId::CenterFlyingSpeed => vec![l - r, 0.5 * (l + r)],
        ModelId::TurnAtThreshold => vec![l, r],
    };
    let d = model.infer(&inputs);
    let cmd = denormalize(&d, &model);
    Ok(vec![
        d.angle,
        d.speed.unwrap_or(f64::NAN),
        cmd.lateral_velocity,
        cmd.forward_speed,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_fill_the_views() {
        let mut demo = Demo::build("straight_corridor", "").unwrap();
        demo.advance(2).unwrap();
        assert_eq!(demo.camera_rgba().len(), 320 * 200 * 4);
        assert!(demo.flow_rgba().iter().any(|&b| b != 0 && b != 255));
        assert_eq!(demo.trail().len(), 4);
        assert_eq!(demo.walls().len(), 8);
        assert!(demo.status().contains("step=2"));
    }

    #[test]
    fn unknown_names_are_reported() {
        assert!(Demo::build("nowhere", "").is_err());
        assert!(Demo::build("straight_corridor", "wobble").is_err());
        assert!(infer("wobble", 1.0, 1.0).is_err());
    }

    #[test]
    fn stronger_left_flow_steers_right() {
        let out = infer("center_flying", 8.0, 2.0).unwrap();
        assert!(out[0] > 0.0 && out[2] > 0.0);
        assert!(out[1].is_nan());
        let out = infer("turn_at_threshold", 2.0, 9.5).unwrap();
        assert!(out[0] < 0.0);
    }

    #[test]
    fn scenario_list_is_complete() {
        assert!(scenario_names().lines().any(|n| n == "moving_wall"));
    }
}
