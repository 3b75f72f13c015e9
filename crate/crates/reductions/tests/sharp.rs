use density_cantor::CylinderSet;
use density_core::word::is_prefix;
use density_core::{CantorMeasure, Rational};
use density_reductions::{
    doubling_transform, gamma, good_tree, sharp_K_measure, sharp_reduction, sharp_trajectory,
    GoodNode, MatrixCode, Rho, SharpK,
};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn k38() -> SharpK {
    SharpK::new(q(3, 8)).unwrap()
}

#[test]
fn r_n_schedule_inside_band() {
    for r in [q(3, 8), q(1, 2), q(15, 16), q(1, 1024), q(1023, 1024)] {
        let k = SharpK::new(r.clone()).unwrap();
        for n in 0..48u32 {
            let rn = k.r_n(n);
            let d = (&rn - &r).abs();
            let p = |e: i64| Rational::pow2(e - n as i64);
            assert!(p(-2) + p(-4) <= d, "r = {r}, n = {n}");
            assert!(d < p(-1) - p(-4), "r = {r}, n = {n}");
            assert!(rn.is_dyadic() && rn.is_positive() && rn < Rational::one());
        }
    }
}

#[test]
fn rejects_bad_targets() {
    assert!(SharpK::new(q(1, 3)).is_err());
    assert!(SharpK::new(q(0, 1)).is_err());
    assert!(SharpK::new(q(1, 1)).is_err());
}

fn brute_measure(set: &CylinderSet, depth: usize) -> Rational {
    let hits = density_core::word::binary_words(depth)
        .filter(|w| set.decides(w) == Some(true))
        .count();
    Rational::integer(hits as i64) * Rational::pow2(-(depth as i64))
}

#[test]
fn e_n_measure_by_counting() {
    let k = k38();
    for n in 0..3u32 {
        let e = k.e_set(n);
        let depth = e.depth();
        assert!(depth <= 16);
        let expected = k.r_n(n) * (Rational::one() - Rational::pow2(-(n as i64) - 5));
        assert_eq!(brute_measure(&e, depth), expected);
        assert_eq!(brute_measure(&k.d_set(n), k.d_set(n).depth()), k.r_n(n));
    }
}

#[test]
fn good_tree_grammar() {
    let t = good_tree(5);
    for g in &t {
        assert_eq!(GoodNode::from_tilde(g.tilde()).unwrap(), *g);
        assert_eq!(g.sigma_string().parse::<GoodNode>().unwrap(), *g);
        let blocks = g.sigma();
        let runs = blocks
            .windows(2)
            .filter(|w| w[0].bit() != w[1].bit())
            .count();
        if !blocks.is_empty() {
            assert_eq!(g.is_positive(), runs % 2 == 0);
            let last = blocks.last().unwrap().index();
            let expected = if g.is_positive() { last + 1 } else { last - 1 };
            assert_eq!(g.nval(), expected);
        }
        assert_eq!(g.children().len(), if g.nval() > 0 { 2 } else { 1 });
    }
    let lens: Vec<usize> = (0..=5)
        .map(|d| t.iter().filter(|g| g.sigma().len() == d).count())
        .collect();
    let mut counts = vec![0usize; 8];
    counts[0] = 1;
    let mut expected = vec![1];
    for _ in 0..5 {
        let mut next = vec![0usize; 8];
        for (v, &c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            next[v + 1] += c;
            if v > 0 {
                next[v - 1] += c;
            }
        }
        counts = next;
        expected.push(counts.iter().sum());
    }
    assert_eq!(lens, expected);
}

#[test]
fn claim_for_good_nodes() {
    let k = k38();
    for g in good_tree(5) {
        let n = g.nval() as i64;
        for depth in [0, 2] {
            let m = sharp_K_measure(&k, g.tilde(), depth).unwrap();
            assert_eq!(m.rho, Rho::Band(g.nval()), "{}", g.sigma_string());
            let off = (m.bounds.center() - k.r_n(g.nval())).abs();
            assert!(off <= Rational::pow2(-n - 4));
            assert!(m.bounds.width() <= Rational::pow2(-n - 5));
        }
    }
    let root = sharp_K_measure(&k, &[], 3).unwrap();
    assert!(root.distance.lo >= q(1, 4) && root.distance.hi < q(1, 2));
}

/// `K_d = ⋃ s⌢E_{n(s)}` over good `σ` with `|σ| ≤ d`; the rest of `K⌞t` lies in
/// the cylinders of good nodes at level `d + 1`.
fn truncated_enclosure(k: &SharpK, t: &[u8], d: usize) -> (Rational, Rational) {
    let nodes = good_tree(d + 1);
    let mut gens = Vec::new();
    let mut rest = Rational::zero();
    for g in &nodes {
        if g.sigma().len() <= d {
            for e in k.e_set(g.nval()).generators() {
                let mut w = g.tilde().to_vec();
                w.extend(e);
                gens.push(w);
            }
        } else if is_prefix(t, g.tilde()) {
            rest += Rational::pow2(t.len() as i64 - g.tilde().len() as i64);
        }
    }
    let kd = CylinderSet::from_generators(gens);
    let lo = kd.localize(t).measure(&CantorMeasure);
    let hi = &lo + rest;
    (lo, hi)
}

#[test]
fn enclosures_agree_with_truncations() {
    let k = k38();
    let mut words = Vec::new();
    for g in good_tree(3) {
        words.push(g.tilde().to_vec());
        let n = g.nval() as usize;
        for bit in 0..2u8 {
            if bit == 1 && n == 0 {
                continue;
            }
            for j in 1..n + 6 {
                let mut w = g.tilde().to_vec();
                w.extend(std::iter::repeat_n(bit, j));
                words.push(w);
            }
        }
    }
    for t in words {
        let (lo, hi) = truncated_enclosure(&k, &t, 4);
        let m = sharp_K_measure(&k, &t, 3).unwrap();
        assert!(m.bounds.lo <= hi && lo <= m.bounds.hi);
    }
}

#[test]
fn intermediate_words_keep_their_band() {
    let k = k38();
    for g in good_tree(4) {
        let n = g.nval();
        for bit in 0..2u8 {
            if bit == 1 && n == 0 {
                continue;
            }
            let floor = if bit == 0 { n } else { n - 1 };
            for j in 1..n as usize + 6 {
                let mut w = g.tilde().to_vec();
                w.extend(std::iter::repeat_n(bit, j));
                let m = sharp_K_measure(&k, &w, 2).unwrap();
                assert!(
                    m.rho.at_least(floor),
                    "{} + {bit}^{j}: {}",
                    g.sigma_string(),
                    m.rho
                );
            }
        }
    }
}

#[test]
fn rejects_words_outside_the_tree() {
    let k = k38();
    assert!(sharp_K_measure(&k, &[1], 1).is_err());
    assert!(sharp_K_measure(&k, &[0, 1], 1).is_err());
    let mut w = vec![0; 6];
    w.extend([0, 0, 1]);
    assert!(sharp_K_measure(&k, &w, 1).is_err());
}

#[test]
fn all_zero_trajectory_climbs() {
    let k = k38();
    let rows = sharp_trajectory(&k, &MatrixCode::all_zero(8), 5).unwrap();
    let rho: Vec<Rho> = rows.iter().map(|r| r.rho).collect();
    assert_eq!(rho, (0..5).map(Rho::Band).collect::<Vec<_>>());
    for w in rows.windows(2) {
        assert!(is_prefix(w[0].node.tilde(), w[1].node.tilde()));
    }
}

#[test]
fn row_zero_trajectory_oscillates() {
    let k = k38();
    let rows = sharp_trajectory(&k, &MatrixCode::row_ones(0, 1), 8).unwrap();
    for r in &rows[1..] {
        assert_eq!(r.rho, Rho::Band(0));
        assert_eq!(r.peak as usize, r.stage);
    }
}

#[test]
fn doubled_row_zero_alternates() {
    let k = k38();
    let z = doubling_transform(&MatrixCode::row_ones(0, 1));
    let rows = sharp_trajectory(&k, &z, 9).unwrap();
    for r in &rows[1..] {
        let expected = if (r.stage - 1) % 2 == 0 { 0 } else { 1 };
        assert_eq!(r.rho, Rho::Band(expected), "stage {}", r.stage);
    }
}

fn square(bits: Vec<u8>, n: usize) -> Vec<Vec<u8>> {
    bits.chunks(n.max(1)).take(n).map(|c| c.to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_hits_gamma_and_is_monotone(n in 0usize..6, bits in prop::collection::vec(0u8..2, 36)) {
        let k = k38();
        let a = square(bits, n);
        let top = sharp_reduction(&k, &a).unwrap();
        prop_assert_eq!(top.rho, Rho::Band(gamma(&a) as u32));
        for m in 0..n {
            let sub: Vec<Vec<u8>> = a[..m].iter().map(|r| r[..m].to_vec()).collect();
            let s = sharp_reduction(&k, &sub).unwrap();
            prop_assert!(is_prefix(s.node.tilde(), top.node.tilde()));
        }
    }
}
