use super::SimConfig;
use crate::aggregate::raw_region_means;
use crate::flow::{compute_flow, enhance, to_grayscale};
use crate::geom::Vec2;
use crate::render::{render_frame, Pose};
use crate::world::{step_world, WorldScene};
use crate::{Error, Result};

/// Frame pairs rendered for a calibration.
pub const CALIBRATION_PAIRS: usize = 12;

/// Target universe value for the median side-region flow.
pub const CALIBRATION_TARGET: f64 = 5.0;

/// Start pose for calibration: on the declared axis at the robot's
/// along-axis position, looking down the axis; otherwise the robot start.
fn calibration_pose(config: &SimConfig) -> Pose {
    match config.metrics.axis {
        Some((a, b)) => {
            let dir = (b - a).normalized();
            let s = (config.start.position - a).dot(dir);
            let p = a + dir * s;
            Pose {
                position: p,
                heading: dir.angle(),
            }
        }
        None => config.start,
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Scale factor that maps the median side-region flow seen while driving
/// straight down the corridor at `cruise_speed` to mid-universe.
pub fn calibrate_scale(scene: &WorldScene, config: &SimConfig, cruise_speed: f64) -> Result<f64> {
    let mut scene = scene.reseeded(config.seed);
    let pose = calibration_pose(config);
    let forward = Vec2::from_angle(pose.heading);
    let dt = config.dt;
    let frame_at = |scene: &WorldScene, k: usize| {
        let p = Pose {
            position: pose.position + forward * (cruise_speed * dt * k as f64),
            heading: pose.heading,
        };
        enhance(&to_grayscale(&render_frame(scene, p, &config.camera)), config.enhance)
    };
    let mut prev = frame_at(&scene, 0);
    let mut sides = Vec::with_capacity(2 * CALIBRATION_PAIRS);
    for k in 1..=CALIBRATION_PAIRS {
        scene = step_world(&scene, (k - 1) as f64 * dt, dt);
        let next = frame_at(&scene, k);
        let flow = compute_flow(&prev, &next, &config.flow)?;
        let (l, _, r) = raw_region_means(&flow)?;
        sides.push(l);
        sides.push(r);
        prev = next;
    }
    let m = median(&mut sides);
    if !(m > 1e-9) {
        return Err(Error::Calibration(
            "no optical flow on the side regions: the world is featureless \
             (uniform surfaces or dark walls)"
                .into(),
        ));
    }
    Ok(CALIBRATION_TARGET / m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn factor_definition() {
        // median raw magnitude 2.5 px/frame maps to factor 2
        assert_eq!(CALIBRATION_TARGET / median(&mut [2.5, 2.0, 3.0]), 2.0);
    }
}
