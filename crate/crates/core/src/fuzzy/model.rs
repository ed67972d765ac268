//! The three steering controllers and their de-normalisation into
//! velocity commands.

use std::fmt;
use std::str::FromStr;

use super::engine::{Antecedent, CrispOutput, FuzzyRule, RuleBase, Variable};
use super::MembershipFunction;
use crate::aggregate::RegionFlow;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModelId {
    /// Balance left and right flow.
    #[default]
    CenterFlying,
    /// Centre flying plus forward-speed control from total flow.
    CenterFlyingSpeed,
    /// Act only when one side's flow is high.
    TurnAtThreshold,
}

impl ModelId {
    pub const ALL: [ModelId; 3] = [
        ModelId::CenterFlying,
        ModelId::CenterFlyingSpeed,
        ModelId::TurnAtThreshold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::CenterFlying => "center_flying",
            ModelId::CenterFlyingSpeed => "center_flying_speed",
            ModelId::TurnAtThreshold => "turn_at_threshold",
        }
    }

    pub fn has_speed_output(self) -> bool {
        !matches!(self, ModelId::CenterFlying)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown controller model '{s}'"))
    }
}

/// Pairing of the total-flow speed rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RuleVariant {
    /// High total flow slows the robot down.
    #[default]
    Prose,
    /// Low total flow maps to slow and high to fast.
    Literal,
}

impl RuleVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleVariant::Prose => "prose",
            RuleVariant::Literal => "literal",
        }
    }
}

impl fmt::Display for RuleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "prose" => Ok(RuleVariant::Prose),
            "literal" => Ok(RuleVariant::Literal),
            other => Err(format!("unknown rule variant '{other}'")),
        }
    }
}

/// Membership parameters of every linguistic set the models use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetParams {
    pub l_close: MembershipFunction,
    pub r_close: MembershipFunction,
    pub high_flow: MembershipFunction,
    pub low_flow: MembershipFunction,
    pub high: MembershipFunction,
    pub turn_right: MembershipFunction,
    pub turn_left: MembershipFunction,
    pub fast: MembershipFunction,
    pub slow: MembershipFunction,
}

impl Default for SetParams {
    fn default() -> Self {
        Self {
            l_close: MembershipFunction::smf(-10.0, 10.0),
            r_close: MembershipFunction::zmf(-10.0, 10.0),
            high_flow: MembershipFunction::smf(3.0, 7.0),
            low_flow: MembershipFunction::zmf(3.0, 7.0),
            high: MembershipFunction::smf(8.0, 10.0),
            turn_right: MembershipFunction::smf(2.0, 8.0),
            turn_left: MembershipFunction::zmf(-8.0, -2.0),
            fast: MembershipFunction::smf(4.0, 8.0),
            slow: MembershipFunction::zmf(2.0, 6.0),
        }
    }
}

impl SetParams {
    pub const NAMES: [&'static str; 9] = [
        "l_close",
        "r_close",
        "high_flow",
        "low_flow",
        "high",
        "turn_right",
        "turn_left",
        "fast",
        "slow",
    ];

    pub fn get(&self, name: &str) -> Option<MembershipFunction> {
        Some(match name {
            "l_close" => self.l_close,
            "r_close" => self.r_close,
            "high_flow" => self.high_flow,
            "low_flow" => self.low_flow,
            "high" => self.high,
            "turn_right" => self.turn_right,
            "turn_left" => self.turn_left,
            "fast" => self.fast,
            "slow" => self.slow,
            _ => return None,
        })
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut MembershipFunction> {
        Some(match name {
            "l_close" => &mut self.l_close,
            "r_close" => &mut self.r_close,
            "high_flow" => &mut self.high_flow,
            "low_flow" => &mut self.low_flow,
            "high" => &mut self.high,
            "turn_right" => &mut self.turn_right,
            "turn_left" => &mut self.turn_left,
            "fast" => &mut self.fast,
            "slow" => &mut self.slow,
            _ => return None,
        })
    }
}

/// Everything needed to build a [`ControllerModel`]; this is what the
/// scenario file's `[controller]` section describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerConfig {
    pub model: ModelId,
    pub variant: RuleVariant,
    pub sets: SetParams,
    /// m/s of lateral velocity per unit of angle output.
    pub w_angle: f64,
    /// m/s of forward speed per unit of speed output away from mid-universe.
    pub w_speed: f64,
    pub cruise_speed: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            model: ModelId::CenterFlying,
            variant: RuleVariant::Prose,
            sets: SetParams::default(),
            w_angle: 0.012,
            w_speed: 0.04,
            cruise_speed: 0.5,
        }
    }
}

/// Actuation request: signed lateral velocity (+ is rightward) and forward
/// speed, both m/s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Command {
    pub lateral_velocity: f64,
    pub forward_speed: f64,
}

/// Crisp controller outputs in universe units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub angle: f64,
    /// `None` for models without a speed output.
    pub speed: Option<f64>,
    pub zero_angle: bool,
    pub zero_speed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerModel {
    pub config: ControllerConfig,
    pub rules: RuleBase,
}

const SIGNED: (f64, f64) = (-10.0, 10.0);
const UNSIGNED: (f64, f64) = (0.0, 10.0);

fn var(name: &str, (min, max): (f64, f64)) -> Variable {
    Variable::new(name, min, max)
}

impl ControllerModel {
    pub fn new(config: ControllerConfig) -> Result<Self> {
        if !(config.w_angle >= 0.0 && config.w_speed >= 0.0) {
            return Err(Error::invalid("controller", "weights must be >= 0"));
        }
        if !(config.cruise_speed >= 0.0) {
            return Err(Error::invalid("controller", "cruise_speed must be >= 0"));
        }
        let s = &config.sets;
        let angle = var("angle", SIGNED)
            .with_set("turn_left", s.turn_left)
            .with_set("turn_right", s.turn_right);
        let speed = var("speed", UNSIGNED)
            .with_set("slow", s.slow)
            .with_set("fast", s.fast);
        let steering = || {
            vec![
                FuzzyRule::new(vec![Antecedent::is("l_minus_r", "r_close")], "angle", "turn_left"),
                FuzzyRule::new(vec![Antecedent::is("l_minus_r", "l_close")], "angle", "turn_right"),
            ]
        };
        let l_minus_r = || {
            var("l_minus_r", SIGNED)
                .with_set("r_close", s.r_close)
                .with_set("l_close", s.l_close)
        };
        let rules = match config.model {
            ModelId::CenterFlying => RuleBase::new(vec![l_minus_r()], vec![angle], steering())?,
            ModelId::CenterFlyingSpeed => {
                let (on_low, on_high) = match config.variant {
                    RuleVariant::Prose => ("fast", "slow"),
                    RuleVariant::Literal => ("slow", "fast"),
                };
                let mut rules = steering();
                rules.push(FuzzyRule::new(vec![Antecedent::is("l_plus_r", "low_flow")], "speed", on_low));
                rules.push(FuzzyRule::new(vec![Antecedent::is("l_plus_r", "high_flow")], "speed", on_high));
                RuleBase::new(
                    vec![
                        l_minus_r(),
                        var("l_plus_r", UNSIGNED)
                            .with_set("low_flow", s.low_flow)
                            .with_set("high_flow", s.high_flow),
                    ],
                    vec![angle, speed],
                    rules,
                )?
            }
            ModelId::TurnAtThreshold => RuleBase::new(
                vec![
                    var("l", UNSIGNED).with_set("high", s.high),
                    var("r", UNSIGNED).with_set("high", s.high),
                ],
                vec![angle, speed],
                vec![
                    FuzzyRule::new(
                        vec![Antecedent::is("l", "high"), Antecedent::is_not("r", "high")],
                        "angle",
                        "turn_right",
                    ),
                    FuzzyRule::new(
                        vec![Antecedent::is_not("l", "high"), Antecedent::is("r", "high")],
                        "angle",
                        "turn_left",
                    ),
                    FuzzyRule::new(
                        vec![Antecedent::is("l", "high"), Antecedent::is("r", "high")],
                        "speed",
                        "slow",
                    ),
                    FuzzyRule::new(
                        vec![Antecedent::is_not("l", "high"), Antecedent::is_not("r", "high")],
                        "speed",
                        "fast",
                    ),
                ],
            )?,
        };
        Ok(Self { config, rules })
    }

    pub fn id(&self) -> ModelId {
        self.config.model
    }

    /// Input vector for this model, in rule-base order.
    pub fn inputs_from(&self, flow: &RegionFlow) -> Vec<f64> {
        match self.config.model {
            ModelId::CenterFlying => vec![flow.l_minus_r],
            ModelId::CenterFlyingSpeed => vec![flow.l_minus_r, flow.l_plus_r],
            ModelId::TurnAtThreshold => vec![flow.l, flow.r],
        }
    }

    /// Runs inference on explicit input values (rule-base order).
    pub fn infer(&self, inputs: &[f64]) -> Decision {
        let out: Vec<CrispOutput> = self.rules.infer(inputs);
        let speed = out.get(1).copied();
        Decision {
            angle: out[0].value,
            speed: speed.map(|s| s.value),
            zero_angle: out[0].zero_activation,
            zero_speed: speed.is_some_and(|s| s.zero_activation),
        }
    }

    pub fn decide(&self, flow: &RegionFlow) -> Decision {
        self.infer(&self.inputs_from(flow))
    }

    /// The command issued when no flow is available yet.
    pub fn neutral_command(&self) -> Command {
        Command {
            lateral_velocity: 0.0,
            forward_speed: self.config.cruise_speed,
        }
    }
}

/// Weight-factor scaling from universe units to velocities.
pub fn denormalize(decision: &Decision, model: &ControllerModel) -> Command {
    let c = &model.config;
    let forward_speed = match decision.speed {
        Some(s) if model.id().has_speed_output() => c.cruise_speed + c.w_speed * (s - 5.0),
        _ => c.cruise_speed,
    };
    Command {
        lateral_velocity: c.w_angle * decision.angle,
        forward_speed,
    }
}

impl fmt::Display for ControllerModel {
    /// Audit dump: weights, sets with membership tables, and rules.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "model = {}", c.model)?;
        if c.model == ModelId::CenterFlyingSpeed {
            writeln!(f, "rules = {}", c.variant)?;
        }
        writeln!(f, "w_angle = {}", c.w_angle)?;
        writeln!(f, "w_speed = {}", c.w_speed)?;
        writeln!(f, "cruise_speed = {}", c.cruise_speed)?;
        for (kind, vars) in [("input", &self.rules.inputs), ("output", &self.rules.outputs)] {
            for v in vars {
                writeln!(f, "\n{kind} {} [{}, {}]", v.name, v.min, v.max)?;
                let xs: Vec<f64> = (0..=10).map(|i| v.min + (v.max - v.min) * i as f64 / 10.0).collect();
                write!(f, "  {:<12}", "x")?;
                for x in &xs {
                    write!(f, "{x:>7.1}")?;
                }
                writeln!(f)?;
                for s in &v.sets {
                    write!(f, "  {:<12}", s.name)?;
                    for &x in &xs {
                        write!(f, "{:>7.3}", s.mf.eval(x))?;
                    }
                    writeln!(f, "   {}", s.mf)?;
                }
            }
        }
        writeln!(f, "\nrules:")?;
        for (i, r) in self.rules.rules.iter().enumerate() {
            writeln!(f, "  {}. {r}", i + 1)?;
        }
        Ok(())
    }
}
