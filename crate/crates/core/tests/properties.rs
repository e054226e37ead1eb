use std::f64::consts::TAU;

use ebsim_core::analysis::{
    boole_triple_check, coincidence_count, delta_g_estimate, pair_events,
};
use ebsim_core::components::{hwp_transform, phase_shift, Splitter, SplitterKind};
use ebsim_core::data::StationEvent;
use ebsim_core::dlm::{AverageDlm, DirectionDlm, ScalarDlm};
use ebsim_core::experiments::delayed_choice::{run_delayed_choice, DelayedChoiceConfig};
use ebsim_core::experiments::eprb::{run_eprb, EprbConfig};
use ebsim_core::experiments::neutron::{run_neutron_mzi, NeutronMziConfig};
use ebsim_core::experiments::two_beam::{run_two_beam, TwoBeamConfig};
use ebsim_core::messengers::{Axis, Spinor};
use ebsim_core::Execution;
use num_complex::Complex64;
use proptest::prelude::*;

fn spinor() -> impl Strategy<Value = Spinor> {
    (0.0..TAU, 0.0..TAU, 0.0..TAU).prop_map(|(a, b, x)| Spinor::photon(a, b, x))
}

fn kind() -> impl Strategy<Value = SplitterKind> {
    prop_oneof![
        Just(SplitterKind::Photon5050),
        Just(SplitterKind::Polarizing),
        (0.0..=1.0f64).prop_map(|reflectivity| SplitterKind::Neutron { reflectivity }),
    ]
}

fn events(n: usize) -> impl Strategy<Value = Vec<StationEvent>> {
    prop::collection::vec(
        (prop::bool::ANY, 0.0..500.0f64, 0u8..2).prop_map(|(p, t, setting)| StationEvent {
            x: if p { 1 } else { -1 },
            t,
            setting,
        }),
        0..n,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rotations_preserve_norm(m in spinor(), a in -10.0..10.0f64, axis in 0usize..3) {
        let axis = [Axis::X, Axis::Y, Axis::Z][axis];
        prop_assert!((m.su2_rotate(axis, a).norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((hwp_transform(m, a).norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((phase_shift(m, a).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn splitter_outputs_share_unit_weight(
        k in kind(), v in 0.0..=1.0f64, r0 in spinor(), r1 in spinor()
    ) {
        let s = Splitter::with_state(k, 0.9, [v, 1.0 - v], [r0, r1]).unwrap();
        let (a, b) = s.amplitudes();
        prop_assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn splitter_output_is_normalized(
        k in kind(), msgs in prop::collection::vec((0u8..2, spinor(), 0.0..1.0f64), 1..50), seed in 0u64..1000
    ) {
        let mut rng = ebsim_core::RngStream::new(seed, 0);
        let mut s = Splitter::new(k, 0.95, &mut rng).unwrap();
        for (input, m, r) in msgs {
            let (ch, out) = s.process(input, m, r).unwrap();
            prop_assert!(ch < 2);
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
            prop_assert!((s.v[0] + s.v[1] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn scalar_state_stays_in_unit_interval(v in 0.0..=1.0f64, g in 0.0..0.999f64, us in prop::collection::vec(0.0..=1.0f64, 1..200)) {
        let mut m = ScalarDlm::new(v, g).unwrap();
        for u in us {
            let w = m.step(u).unwrap();
            prop_assert!(w == 1 || w == -1);
            prop_assert!((0.0..=1.0).contains(&m.v));
        }
    }

    #[test]
    fn direction_state_stays_unit(a in 0.0..TAU, g in 0.01..0.999f64, inputs in prop::collection::vec(0.0..TAU, 1..200)) {
        let mut m = DirectionDlm::new(a, g).unwrap();
        for x in inputs {
            m.step((x.cos(), x.sin())).unwrap();
            prop_assert!((m.v0.hypot(m.v1) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn average_of_unit_inputs_stays_in_unit_disc(g in 0.0..0.999f64, inputs in prop::collection::vec(0.0..TAU, 1..200)) {
        let mut m = AverageDlm::new([0.0, 0.0], g).unwrap();
        for x in inputs {
            m.update([x.cos(), x.sin()]);
            prop_assert!(m.norm_sqr() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn boole_bound_never_fails(triples in prop::collection::vec(prop::array::uniform3(prop::bool::ANY), 1..64)) {
        let t: Vec<[i8; 3]> = triples.iter().map(|t| t.map(|b| if b { 1 } else { -1 })).collect();
        prop_assert!(boole_triple_check(&t).unwrap().holds);
    }

    #[test]
    fn coincidences_grow_with_window(s1 in events(60), s2 in events(60), w1 in 0.0..50.0f64, dw in 0.0..50.0f64) {
        let a = coincidence_count(&s1, &s2, w1, 0.0).unwrap().total();
        let b = coincidence_count(&s1, &s2, w1 + dw, 0.0).unwrap().total();
        prop_assert!(a <= b);
        prop_assert!(b as usize <= s1.len().min(s2.len()));
    }

    #[test]
    fn pairs_use_each_event_once(s1 in events(60), s2 in events(60), w in 0.0..100.0f64, dg in -20.0..20.0f64) {
        let pairs = pair_events(&s1, &s2, w, dg).unwrap();
        let mut seen1 = vec![false; s1.len()];
        let mut seen2 = vec![false; s2.len()];
        for (i, j) in pairs {
            prop_assert!(!seen1[i] && !seen2[j]);
            seen1[i] = true;
            seen2[j] = true;
            prop_assert!((s1[i].t + dg - s2[j].t).abs() < w);
        }
    }

    #[test]
    fn constant_shift_is_recovered(ts in prop::collection::vec(0.0..1e6f64, 5..80), shift in -40.0..40.0f64) {
        let s2: Vec<StationEvent> = ts.iter().map(|&t| StationEvent { x: 1, t, setting: 0 }).collect();
        let s1: Vec<StationEvent> = ts.iter().map(|&t| StationEvent { x: 1, t: t + shift, setting: 0 }).collect();
        let d = delta_g_estimate(&s1, &s2, 1.0, 100.0).unwrap();
        prop_assert!((d.value + shift).abs() <= 1.0, "estimate {} for shift {}", d.value, shift);
    }
}

#[test]
fn ten_thousand_random_boole_data_sets() {
    let mut rng = ebsim_core::RngStream::new(3, 3);
    for _ in 0..10_000 {
        let n = 1 + (rng.next_uniform() * 30.0) as usize;
        let t: Vec<[i8; 3]> = (0..n)
            .map(|_| [0i8; 3].map(|_| if rng.bit() { 1 } else { -1 }))
            .collect();
        assert!(boole_triple_check(&t).unwrap().holds);
    }
}

#[test]
fn hundred_thousand_component_applications_keep_norm() {
    let mut rng = ebsim_core::RngStream::new(9, 9);
    let mut worst: f64 = 0.0;
    let mut s = Splitter::new(SplitterKind::Neutron { reflectivity: 0.3 }, 0.9, &mut rng).unwrap();
    for n in 0..100_000u32 {
        let m = Spinor::random(&mut rng);
        let a = rng.angle();
        let out = match n % 4 {
            0 => hwp_transform(m, a),
            1 => m.su2_rotate(Axis::Y, a),
            2 => m.apply(&[
                [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, a)],
            ]),
            _ => s.process((n % 8 == 3) as u8, m, rng.next_uniform()).unwrap().1,
        };
        worst = worst.max((out.norm_sqr() - 1.0).abs());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn reruns_are_bit_identical() {
    let tb = TwoBeamConfig {
        events: 50_000,
        seed: 4,
        ..Default::default()
    };
    assert_eq!(run_two_beam(&tb).unwrap(), run_two_beam(&tb).unwrap());

    let dc = DelayedChoiceConfig {
        events_per_point: 500,
        seed: 8,
        ..Default::default()
    };
    assert_eq!(
        run_delayed_choice(&dc, Execution::Sequential).unwrap(),
        run_delayed_choice(&dc, Execution::Parallel).unwrap()
    );

    let nm = NeutronMziConfig {
        events_per_point: 2000,
        noise_halfwidth: 0.5,
        ..Default::default()
    };
    assert_eq!(
        run_neutron_mzi(&nm, Execution::Sequential).unwrap(),
        run_neutron_mzi(&nm, Execution::Parallel).unwrap()
    );

    let ep = EprbConfig {
        pairs: 5000,
        seed: 1,
        ..Default::default()
    };
    assert_eq!(run_eprb(&ep).unwrap(), run_eprb(&ep).unwrap());
    let other = EprbConfig { seed: 2, ..ep };
    assert_ne!(run_eprb(&other).unwrap(), run_eprb(&ep).unwrap());
}
