use std::time::Instant;

use density_core::Rational;
use density_realline::LebesgueSet;
use density_spongy::variant::{zero_layout_gap_piece, zero_layout_right_ratio, zero_layout_scale};
use density_spongy::{
    build_level, g_values, node, spongy_measure, spongy_variant, verify, window_measure,
    EndpointOsc, Flavor, TriadicConfig,
};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[test]
fn standard_parameters_pass_to_depth_six() {
    let start = Instant::now();
    let r = verify(&TriadicConfig::standard(), 6).unwrap();
    assert!(
        r.all_pass,
        "{:?}",
        r.checks.iter().filter(|c| !c.pass()).collect::<Vec<_>>()
    );
    assert_eq!(r.measure, q(5, 9));
    assert_eq!(r.f, q(5, 18));
    assert!(r.f > q(1, 4));
    assert_eq!(r.g_bs, q(5, 27));
    assert_eq!(r.g_as1_upper, q(1, 25));
    assert_eq!(r.chain_bound, q(1, 23));
    let blur = r.checks.iter().find(|c| c.name == "blur_windows").unwrap();
    assert_eq!(
        blur.checked,
        (1..=6).map(|n| 2 * 3usize.pow(n - 1)).sum::<usize>()
    );
    assert!(start.elapsed().as_secs() < 10);
}

#[test]
fn g_at_bs_matches_truncated_series() {
    let cfg = TriadicConfig::standard();
    for s in [vec![], vec![-1i8], vec![0, 1], vec![1, 0, -1]] {
        let g = g_values(&cfg, &s).unwrap();
        let b = node(&cfg, &s).unwrap().b;
        let mut partial = Rational::zero();
        for n in 0..30 {
            let mut w = s.clone();
            w.extend(std::iter::repeat_n(0, n));
            w.push(1);
            partial += spongy_measure(&cfg, &w).unwrap();
        }
        let series = &partial / (&b - &g.b_z);
        assert!(series <= g.g_at_bs);
        assert!(&g.g_at_bs - &series < Rational::pow2(-90));
    }
}

#[test]
fn truncated_stages_decrease_to_the_closed_form() {
    let cfg = TriadicConfig::standard();
    let s = vec![0i8, -1];
    let exact = spongy_measure(&cfg, &s).unwrap();
    let k = node(&cfg, &s).unwrap();
    let mut prev: Option<Rational> = None;
    for d in 2..7usize {
        let stage: Rational = build_level(&cfg, d)
            .unwrap()
            .iter()
            .filter(|n| n.s.starts_with(&s))
            .map(|n| n.length())
            .sum();
        let rel = d - s.len();
        let bound = Rational::integer(4)
            * Rational::integer(3).pow(rel as i32)
            * cfg.eps.pow((s.len() + rel + 1) as i32)
            / (Rational::one() - Rational::integer(3) * &cfg.eps);
        assert!(stage >= exact);
        assert!(&stage - &exact <= bound);
        if let Some(p) = prev {
            assert!(stage < p);
        }
        prev = Some(stage);
    }
    let w = window_measure(&cfg, &k.a, &k.b, 8);
    assert!(w.contains(&exact));
}

#[test]
fn variants_converge_to_their_measure() {
    let cfg = TriadicConfig::standard();
    for m in [q(1, 5), q(5, 9), q(3, 4)] {
        for osc in [EndpointOsc::Positive, EndpointOsc::Zero] {
            let closed = spongy_variant(&cfg, &m, Flavor::Closed, osc, 4).unwrap();
            let open = spongy_variant(&cfg, &m, Flavor::Open, osc, 4).unwrap();
            assert_eq!(closed.stage_measure, open.stage_measure);
            assert!(closed.stage_measure >= m || osc == EndpointOsc::Zero);
            let deeper = spongy_variant(&cfg, &m, Flavor::Closed, osc, 6).unwrap();
            assert!((&deeper.stage_measure - &m).abs() < (&closed.stage_measure - &m).abs());
        }
    }
}

#[test]
fn zero_layout_endpoint_windows() {
    let cfg = TriadicConfig::standard();
    let m = q(1, 2);
    let v = spongy_variant(&cfg, &m, Flavor::Closed, EndpointOsc::Zero, 6).unwrap();
    let delta = v.delta.clone().unwrap();
    let ls = cfg.total_measure();
    for n in 1..6 {
        let r = zero_layout_right_ratio(&delta, &ls, n);
        assert!(r <= Rational::pow2(-(n as i64)));
        let e = zero_layout_scale(&delta, 2 * n);
        let staged = v.stage.measure_between(&Rational::zero(), &e) / &e;
        let present: Rational = (n..=6)
            .map(|k| &ls * &delta * Rational::pow2(-3 * k as i64 - 1))
            .sum();
        assert!(staged >= present / &e);
        assert!(staged <= r.clone() * Rational::integer(2));
        let (a, b) = zero_layout_gap_piece(&delta, n);
        assert!(a > zero_layout_scale(&delta, 2 * n + 1) && b < e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_and_additivity_for_admissible_parameters(mn in 3i64..12, md in 1i64..3, k in 2i64..20, s in prop::collection::vec(-1i8..=1, 0..4)) {
        let m = q(mn, md);
        prop_assume!(m > Rational::one());
        let eps = TriadicConfig::eps0(&m) * q(k, k + 1);
        let cfg = TriadicConfig::new(m, eps).unwrap();
        let g = g_values(&cfg, &s).unwrap();
        prop_assert!(g.chain_holds);
        let kids: Rational = [-1i8, 0, 1].iter().map(|c| {
            let mut w = s.clone();
            w.push(*c);
            spongy_measure(&cfg, &w).unwrap()
        }).sum();
        prop_assert_eq!(kids, spongy_measure(&cfg, &s).unwrap());
    }
}
