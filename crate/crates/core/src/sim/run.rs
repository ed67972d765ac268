use std::collections::VecDeque;

use super::calibrate::calibrate_scale;
use super::log::{StepRecord, TrajectoryLog};
use super::SimConfig;
use crate::aggregate::{region_flow, RegionFlow};
use crate::flow::{compute_flow, enhance, to_grayscale, FlowField};
use crate::fuzzy::{denormalize, Command, ControllerModel};
use crate::image::{ColorFrame, Frame};
use crate::render::render_frame;
use crate::robot::{apply_command, check_collision, RobotState};
use crate::world::{step_world, WorldScene};
use crate::Result;

/// Intermediate products of one tick, for frame and flow dumps.
pub struct StepView<'a> {
    pub step: usize,
    pub color: &'a ColorFrame,
    pub gray: &'a Frame,
    pub flow: Option<&'a FlowField>,
}

/// The closed loop: render, preprocess, flow, aggregate, infer,
/// de-normalise, actuate, advance the world.
pub struct Simulation {
    config: SimConfig,
    model: ControllerModel,
    scale_factor: f64,
    scene: WorldScene,
    state: RobotState,
    prev: Option<Frame>,
    pending: VecDeque<Command>,
    step: usize,
    log: TrajectoryLog,
}

impl Simulation {
    /// Prepares a run. Textures are reseeded from `config.seed`; without an
    /// explicit scale factor the scene is calibrated first.
    pub fn new(scene: &WorldScene, config: &SimConfig) -> Result<Self> {
        scene.validate()?;
        config.validate()?;
        let model = ControllerModel::new(config.controller)?;
        let scale_factor = match config.scale_factor {
            Some(f) => f,
            None => calibrate_scale(scene, config, config.controller.cruise_speed)?,
        };
        let mut state = RobotState::at_rest(config.start);
        state.forward_speed = config.controller.cruise_speed;
        Ok(Self {
            config: config.clone(),
            model,
            scale_factor,
            scene: scene.reseeded(config.seed),
            state,
            prev: None,
            pending: VecDeque::new(),
            step: 0,
            log: TrajectoryLog {
                dt: config.dt,
                records: Vec::with_capacity(config.steps.min(1 << 12)),
            },
        })
    }

    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    pub fn state(&self) -> &RobotState {
        &self.state
    }

    pub fn scene(&self) -> &WorldScene {
        &self.scene
    }

    pub fn log(&self) -> &TrajectoryLog {
        &self.log
    }

    pub fn steps_done(&self) -> usize {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.config.steps
    }

    pub fn step(&mut self) -> Result<&StepRecord> {
        self.step_full(|_| {}, |_| {})
    }

    /// Runs one tick with `perturb` applied to the rendered frame before
    /// it enters the pipeline and `observe` called with the products.
    pub fn step_full(
        &mut self,
        perturb: impl FnOnce(&mut ColorFrame),
        mut observe: impl FnMut(&StepView),
    ) -> Result<&StepRecord> {
        let k = self.step;
        let t = k as f64 * self.config.dt;
        let mut color = render_frame(&self.scene, self.state.pose(), &self.config.camera);
        color.timestamp = t;
        perturb(&mut color);
        let gray = enhance(&to_grayscale(&color), self.config.enhance);

        let mut flow_field = None;
        let mut regions = RegionFlow::default();
        let mut decision = None;
        if let Some(prev) = &self.prev {
            let flow = compute_flow(prev, &gray, &self.config.flow)?;
            regions = region_flow(&flow, self.scale_factor)?;
            decision = Some(self.model.decide(&regions));
            flow_field = Some(flow);
        }
        observe(&StepView {
            step: k,
            color: &color,
            gray: &gray,
            flow: flow_field.as_ref(),
        });

        let command = match &decision {
            Some(d) => denormalize(d, &self.model),
            None => self.model.neutral_command(),
        };
        self.pending.push_back(command);
        let applied = if self.pending.len() > self.config.latency {
            self.pending.pop_front().unwrap()
        } else {
            self.model.neutral_command()
        };

        let contact = check_collision(&self.scene, &self.state, &self.config.constraints);
        let (next, clamps) = apply_command(
            &self.state,
            applied,
            &self.config.constraints,
            self.config.locomotion,
            self.config.dt,
        );

        let record = StepRecord {
            step: k,
            t,
            x: self.state.position.x,
            y: self.state.position.y,
            heading: self.state.heading,
            forward_speed: next.forward_speed,
            lateral_velocity: next.lateral_velocity,
            raw_l: regions.raw_l,
            raw_m: regions.raw_m,
            raw_r: regions.raw_r,
            l: regions.l,
            m: regions.m,
            r: regions.r,
            l_minus_r: regions.l_minus_r,
            l_plus_r: regions.l_plus_r,
            angle_out: decision.map_or(0.0, |d| d.angle),
            speed_out: decision.and_then(|d| d.speed),
            cmd_lateral: command.lateral_velocity,
            cmd_forward: command.forward_speed,
            neutral: decision.is_none(),
            clamp_forward: clamps.forward,
            clamp_lateral: clamps.lateral,
            zero_angle: decision.is_some_and(|d| d.zero_angle),
            zero_speed: decision.is_some_and(|d| d.zero_speed),
            contact_wall: contact.map(|c| c.wall_index),
            penetration: contact.map_or(0.0, |c| c.penetration),
        }
        .quantized();

        self.state = next;
        self.scene = step_world(&self.scene, t, self.config.dt);
        self.prev = Some(gray);
        self.step += 1;
        self.log.records.push(record);
        Ok(self.log.records.last().unwrap())
    }

    pub fn into_log(self) -> TrajectoryLog {
        self.log
    }
}

/// Runs `config.steps` ticks and returns the trajectory.
pub fn run(scene: &WorldScene, config: &SimConfig) -> Result<TrajectoryLog> {
    let mut sim = Simulation::new(scene, config)?;
    while !sim.is_finished() {
        sim.step()?;
    }
    Ok(sim.into_log())
}
