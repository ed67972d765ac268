mod common;

use common::{smf_closed_form, zmf_closed_form};
use flownav::fuzzy::{
    membership, ControllerConfig, ControllerModel, MembershipFunction, ModelId, RuleVariant,
    SetParams,
};
use proptest::prelude::*;

fn model(id: ModelId, sets: SetParams) -> ControllerModel {
    ControllerModel::new(ControllerConfig {
        model: id,
        sets,
        ..ControllerConfig::default()
    })
    .unwrap()
}

fn mf() -> impl Strategy<Value = (f64, f64)> {
    (-10.0f64..10.0, 0.01f64..10.0).prop_map(|(a, d)| (a, a + d))
}

/// Steering sets mirrored about zero so the rule base is symmetric.
fn mirrored_sets(l_close: (f64, f64), turn_right: (f64, f64)) -> SetParams {
    let l = MembershipFunction::smf(l_close.0, l_close.1);
    let tr = MembershipFunction::smf(turn_right.0, turn_right.1);
    SetParams {
        l_close: l,
        r_close: l.mirrored(),
        turn_right: tr,
        turn_left: tr.mirrored(),
        ..SetParams::default()
    }
}

proptest! {
    #[test]
    fn membership_matches_closed_form((a, b) in mf(), x in -15.0f64..15.0) {
        let s = membership(&MembershipFunction::smf(a, b), x);
        let z = membership(&MembershipFunction::zmf(a, b), x);
        prop_assert!((s - smf_closed_form(a, b, x)).abs() < 1e-12);
        prop_assert!((z - zmf_closed_form(a, b, x)).abs() < 1e-12);
        prop_assert!((s + z - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&z));
    }

    #[test]
    fn center_flying_steering_is_antisymmetric(
        l_close in (0.0f64..10.0, 0.5f64..10.0).prop_map(|(a, d)| (a - 10.0, a - 10.0 + d + 5.0)),
        turn_right in (0.0f64..6.0, 0.5f64..4.0).prop_map(|(a, d)| (a, a + d)),
        x in -10.0f64..10.0,
    ) {
        let m = model(ModelId::CenterFlying, mirrored_sets(l_close, turn_right));
        let a = m.infer(&[x]).angle;
        let b = m.infer(&[-x]).angle;
        prop_assert!((a + b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn threshold_model_is_swap_symmetric(l in 0.0f64..10.0, r in 0.0f64..10.0, (a, b) in (0.0f64..9.0, 0.1f64..5.0).prop_map(|(a, d)| (a, (a + d).min(10.0)))) {
        let sets = SetParams { high: MembershipFunction::smf(a, b.max(a + 0.01)), ..SetParams::default() };
        let m = model(ModelId::TurnAtThreshold, sets);
        let p = m.infer(&[l, r]);
        let q = m.infer(&[r, l]);
        prop_assert!((p.angle + q.angle).abs() < 1e-9);
        prop_assert!((p.speed.unwrap() - q.speed.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn crisp_outputs_stay_inside_their_universes(x in -12.0f64..12.0, y in -2.0f64..12.0) {
        for id in ModelId::ALL {
            let m = model(id, SetParams::default());
            let inputs = match id {
                ModelId::CenterFlying => vec![x],
                ModelId::CenterFlyingSpeed => vec![x, y],
                ModelId::TurnAtThreshold => vec![y, x.abs()],
            };
            let d = m.infer(&inputs);
            prop_assert!((-10.0..=10.0).contains(&d.angle));
            if let Some(s) = d.speed {
                prop_assert!((0.0..=10.0).contains(&s));
            }
        }
    }
}

#[test]
fn prose_speed_is_non_increasing_in_total_flow() {
    let m = model(ModelId::CenterFlyingSpeed, SetParams::default());
    let mut last = f64::INFINITY;
    for i in 0..=200 {
        let total = i as f64 * 0.05;
        let s = m.infer(&[0.0, total]).speed.unwrap();
        assert!(s <= last + 1e-12, "speed rose at l_plus_r = {total}");
        last = s;
    }
}

#[test]
fn literal_speed_is_non_decreasing_in_total_flow() {
    let m = ControllerModel::new(ControllerConfig {
        model: ModelId::CenterFlyingSpeed,
        variant: RuleVariant::Literal,
        ..ControllerConfig::default()
    })
    .unwrap();
    let mut last = f64::NEG_INFINITY;
    for i in 0..=200 {
        let s = m.infer(&[0.0, i as f64 * 0.05]).speed.unwrap();
        assert!(s >= last - 1e-12);
        last = s;
    }
}

#[test]
fn default_sets_are_mirror_pairs() {
    let s = SetParams::default();
    assert_eq!(s.r_close, s.l_close.mirrored());
    assert_eq!(s.turn_left, s.turn_right.mirrored());
}
