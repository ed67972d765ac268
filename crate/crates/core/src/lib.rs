//! Closed-loop simulator for a camera-only mobile robot.
//!
//! A holonomic robot drives through a ray-cast 2.5-D world. Every control
//! tick it renders its own camera frame, estimates dense optical flow
//! against the previous frame, reduces the flow to left/middle/right
//! region signals and feeds them through a spline-membership fuzzy
//! controller that decides lateral and forward velocity.
//!
//! The pipeline, stage by stage:
//!
//! * [`world`]: wall segments, procedural textures, scripted moving walls,
//!   ray queries and the scenario file format.
//! * [`render`]: column ray-caster producing 320x200 colour frames.
//! * [`flow`]: grayscale conversion, contrast enhancement, Horn-Schunck and
//!   Lucas-Kanade flow.
//! * [`aggregate`]: region segmentation, trimmed means, universe scaling.
//! * [`fuzzy`]: smf/zmf memberships, Mamdani inference, controller models.
//! * [`robot`]: kinematics under velocity constraints, collision checks.
//! * [`sim`]: the loop itself, trajectory CSV, metrics and calibration.

pub mod aggregate;
pub mod error;
pub mod flow;
pub mod fuzzy;
pub mod geom;
pub mod image;
pub mod pnm;
pub mod render;
pub mod robot;
pub mod sim;
pub mod world;

pub use error::{Error, Result};
