use flownav::render::CameraModel;
use flownav::sim::{metrics, run, Simulation, SimConfig, TrajectoryLog};
use flownav::world::{bundled_scenario, Scenario};

/// The straight corridor with a small camera and a fixed scale so runs
/// are quick.
fn quick(steps: usize) -> Scenario {
    let mut s = bundled_scenario("straight_corridor").unwrap().unwrap();
    s.config.steps = steps;
    s.config.camera = CameraModel {
        width: 96,
        height: 60,
        ..s.config.camera
    };
    s.config.scale_factor = Some(6.0);
    s
}

fn run_with(s: &Scenario, config: &SimConfig) -> TrajectoryLog {
    run(&s.scene, config).unwrap()
}

#[test]
fn single_step_run_is_neutral() {
    let s = quick(1);
    let log = run_with(&s, &s.config);
    assert_eq!(log.len(), 1);
    let r = &log.records[0];
    assert!(r.neutral);
    assert_eq!(r.cmd_lateral, 0.0);
    assert_eq!(r.cmd_forward, s.config.controller.cruise_speed);
}

#[test]
fn only_the_first_step_is_neutral() {
    let s = quick(5);
    let log = run_with(&s, &s.config);
    let flags: Vec<bool> = log.records.iter().map(|r| r.neutral).collect();
    assert_eq!(flags, [true, false, false, false, false]);
}

#[test]
fn perturbing_a_frame_leaves_earlier_records_alone() {
    let s = quick(9);
    let k = 5;
    let reference = run_with(&s, &s.config);

    let mut sim = Simulation::new(&s.scene, &s.config).unwrap();
    while !sim.is_finished() {
        let step = sim.steps_done();
        sim.step_full(
            |frame| {
                if step == k {
                    for (i, p) in frame.pixels.data_mut().iter_mut().enumerate() {
                        if i % 7 == 0 {
                            *p = [1.0 - p[0], 1.0 - p[1], 1.0 - p[2]];
                        }
                    }
                }
            },
            |_| {},
        )
        .unwrap();
    }
    let perturbed = sim.into_log();
    assert_eq!(reference.records[..k], perturbed.records[..k]);
    assert_ne!(reference.records[k].raw_l, perturbed.records[k].raw_l);
}

#[test]
fn repeated_runs_write_identical_csv() {
    let s = quick(12);
    let a = run_with(&s, &s.config).to_csv_string();
    let b = run_with(&s, &s.config).to_csv_string();
    assert_eq!(a, b);
}

#[test]
fn different_seeds_change_the_textures() {
    let s = quick(6);
    let mut other = s.config.clone();
    other.seed = s.config.seed + 1;
    let a = run_with(&s, &s.config);
    let b = run_with(&s, &other);
    assert_ne!(a.records[3].raw_l, b.records[3].raw_l);
}

#[test]
fn metrics_from_csv_equal_in_process_metrics() {
    let s = quick(30);
    let log = run_with(&s, &s.config);
    let parsed = TrajectoryLog::read_csv(log.to_csv_string().as_bytes()).unwrap();
    assert_eq!(parsed, log);
    assert_eq!(
        metrics(&parsed, &s.config.metrics),
        metrics(&log, &s.config.metrics)
    );
}

#[test]
fn latency_delays_commands() {
    let s = quick(8);
    let mut delayed = s.config.clone();
    delayed.latency = 2;
    let log = run_with(&s, &delayed);
    for r in &log.records[..2] {
        assert_eq!(r.lateral_velocity, 0.0);
    }
    for k in 2..log.len() {
        assert_eq!(log.records[k].lateral_velocity, log.records[k - 2].cmd_lateral);
    }
}

#[test]
fn collisions_are_recorded_without_stopping_the_run() {
    let mut s = quick(15);
    s.config.start.position.y = 1.9;
    s.config.controller.w_angle = 0.0;
    let log = run_with(&s, &s.config);
    assert_eq!(log.len(), 15);
    assert!(log.records.iter().all(|r| r.contact_wall == Some(0)));
    let report = metrics(&log, &s.config.metrics);
    assert_eq!(report.collisions, 1);
    assert_eq!(report.contact_steps, 15);
}
