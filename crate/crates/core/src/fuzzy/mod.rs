//! Spline-membership fuzzy inference and the steering controllers built on
//! it.

mod engine;
mod membership;
mod model;

pub use engine::{
    Antecedent, CrispOutput, FuzzyRule, FuzzySet, RuleBase, Variable, CENTROID_SAMPLES,
};
pub use membership::{membership, MembershipFunction, MfKind};
pub use model::{
    denormalize, Command, ControllerConfig, ControllerModel, Decision, ModelId, RuleVariant,
    SetParams,
};
