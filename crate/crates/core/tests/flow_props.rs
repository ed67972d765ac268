mod common;

use common::{noise_frame, random_frame};
use flownav::flow::{
    compute_flow, gradients, horn_schunck_observed, hs_energy, Algorithm, FlowField, FlowParams,
};
use flownav::image::Frame;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(algorithm: Algorithm) -> FlowParams {
    FlowParams {
        algorithm,
        ..FlowParams::default()
    }
}

fn flipped(f: &Frame) -> Frame {
    Frame::new(f.pixels.flip_horizontal(), f.timestamp)
}

fn max_abs_diff(a: &FlowField, b: &FlowField) -> f64 {
    a.u.data()
        .iter()
        .zip(b.u.data())
        .chain(a.v.data().iter().zip(b.v.data()))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identical_frames_give_exactly_zero_flow(seed in any::<u64>(), w in 3usize..40, h in 3usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_frame(&mut rng, w, h);
        for alg in [Algorithm::HornSchunck, Algorithm::LucasKanade] {
            let flow = compute_flow(&f, &f, &params(alg)).unwrap();
            prop_assert!(flow.u.data().iter().chain(flow.v.data()).all(|&x| x == 0.0));
        }
    }

    #[test]
    fn hs_energy_never_increases_across_sweeps(
        seed in any::<u64>(),
        shift in -1.5f64..1.5,
        alpha in 1.0f64..40.0,
    ) {
        let a = noise_frame(40, 30, 0.0, 6.0, seed);
        let b = noise_frame(40, 30, shift, 6.0, seed);
        let p = FlowParams { alpha, iterations: 60, ..FlowParams::default() };
        let grads = gradients(&a, &b).unwrap();
        let mut last = hs_energy(&grads, &FlowField::zeros(40, 30), alpha);
        let mut violations = Vec::new();
        horn_schunck_observed(&a, &b, &p, |sweep, field| {
            let e = hs_energy(&grads, field, alpha);
            if e > last * (1.0 + 1e-12) + 1e-12 {
                violations.push((sweep, last, e));
            }
            last = e;
        })
        .unwrap();
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn mirroring_inputs_mirrors_the_flow(seed in any::<u64>(), shift in -1.5f64..1.5) {
        let a = noise_frame(48, 24, 0.0, 5.0, seed);
        let b = noise_frame(48, 24, shift, 5.0, seed);
        let lk = params(Algorithm::LucasKanade);
        let direct = compute_flow(&a, &b, &lk).unwrap().flip_horizontal();
        let mirrored = compute_flow(&flipped(&a), &flipped(&b), &lk).unwrap();
        prop_assert_eq!(&direct, &mirrored);

        let hs = params(Algorithm::HornSchunck);
        let direct = compute_flow(&a, &b, &hs).unwrap().flip_horizontal();
        let mirrored = compute_flow(&flipped(&a), &flipped(&b), &hs).unwrap();
        prop_assert!(max_abs_diff(&direct, &mirrored) < 1e-6);
    }

    #[test]
    fn flow_is_finite_for_any_unit_range_input(seed in any::<u64>(), binary in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_frame(&mut rng, 30, 20);
        let mut b = random_frame(&mut rng, 30, 20);
        if binary {
            for f in [&mut a, &mut b] {
                for v in f.pixels.data_mut() {
                    *v = v.round();
                }
            }
        }
        for alg in [Algorithm::HornSchunck, Algorithm::LucasKanade] {
            let p = FlowParams { eig_threshold: 0.0, ..params(alg) };
            prop_assert!(compute_flow(&a, &b, &p).unwrap().is_finite());
        }
    }
}

#[test]
fn lk_recovers_a_known_subpixel_shift() {
    let a = noise_frame(120, 80, 0.0, 8.0, 3);
    let b = noise_frame(120, 80, 0.5, 8.0, 3);
    let flow = compute_flow(&a, &b, &params(Algorithm::LucasKanade)).unwrap();
    let (mut sum, mut n) = (0.0, 0);
    for y in 5..75 {
        for x in 5..115 {
            sum += flow.u.get(x, y);
            n += 1;
        }
    }
    let mean = sum / n as f64;
    assert!((mean - 0.5).abs() < 0.1, "mean u {mean}");
}

#[test]
fn hs_sign_follows_the_motion() {
    let a = noise_frame(80, 60, 0.0, 6.0, 9);
    for shift in [-1.0, 1.0] {
        let b = noise_frame(80, 60, shift, 6.0, 9);
        let flow = compute_flow(&a, &b, &params(Algorithm::HornSchunck)).unwrap();
        let mean: f64 = flow.u.data().iter().sum::<f64>() / flow.u.data().len() as f64;
        assert!(mean * shift > 0.3, "shift {shift}: mean u {mean}");
    }
}
