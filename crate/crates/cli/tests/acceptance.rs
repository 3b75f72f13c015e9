//! One line per acceptance criterion, each timed against its budget.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use density_cantor::{
    density_profile, density_tree, thick_cothick_sigma, thickness_certificate, ApproxSet,
    CylinderSet,
};
use density_core::word::{binary_words, index_to_word, word_to_index};
use density_core::{
    BernoulliMeasure, BinaryMeasure, CantorMeasure, MeasureBounds, Rational, TreeMeasure,
};
use density_embedding::{
    allocate_amphorae, allocate_barrels, amphora_bound, barrel_bound, embed_stages, embed_verify,
    RandomTree, StagePlan,
};
use density_realline::{
    fat_cantor, halfdensity_set, one_sided_ratio, window_ratio, Schedule, Side,
};
use density_reductions::{
    compactness_reduction, good_tree, sharp_K_measure, sharp_trajectory, CompactCertificate,
    MatrixCode, Rho, SharpK,
};
use density_spongy::{build_level, g_values, spongy_measure, verify, TriadicConfig};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn sum(v: &[Rational]) -> Rational {
    v.iter().sum()
}

fn c1_spongy_measure() -> Outcome {
    let cfg = TriadicConfig::standard();
    let (m, e) = (q(2, 1), q(1, 12));
    let closed = Rational::one() - q(2, 1) * &m * &e / (Rational::one() - q(3, 1) * &e);
    let got = spongy_measure(&cfg, &[]).map_err(|e| e.to_string())?;
    ensure!(closed == q(5, 9), "closed form gives {closed}");
    ensure!(got == closed, "spongy_measure(∅) = {got}");
    Ok(())
}

fn c2_oscillation_chain() -> Outcome {
    let cfg = TriadicConfig::standard();
    let (m, e) = (q(2, 1), q(1, 12));
    let one = Rational::one();
    let f = (&one - (q(3, 1) + q(2, 1) * &m) * &e) / (q(2, 1) - q(6, 1) * &e);
    let r = verify(&cfg, 6).map_err(|e| e.to_string())?;
    ensure!(
        r.all_pass,
        "failing checks: {:?}",
        r.checks.iter().filter(|c| !c.pass()).collect::<Vec<_>>()
    );
    ensure!(r.f == f && f == q(5, 18), "f = {}", r.f);
    ensure!(r.f > (q(2, 1) * &m).recip(), "f not above 1/(2M)");
    ensure!(
        r.g_bs == q(5, 27) && r.g_bs > q(1, 6),
        "g(b_s) = {}",
        r.g_bs
    );
    ensure!(r.g_as1_upper == q(1, 25), "upper = {}", r.g_as1_upper);
    let bound = (&m - &one) / (q(2, 1) * m.pow(3) + q(3, 1) * m.pow(2) - q(2, 1) * &m - &one);
    ensure!(
        bound == q(1, 23) && r.chain_bound == bound,
        "bound = {}",
        r.chain_bound
    );
    ensure!(r.g_as1_upper < r.chain_bound, "1/25 < 1/23 fails");
    for n in 0..=6 {
        for node in build_level(&cfg, n).map_err(|e| e.to_string())? {
            let g = g_values(&cfg, &node.s).map_err(|e| e.to_string())?;
            ensure!(g.chain_holds, "chain fails at {:?}", node.s);
            ensure!(
                g.g_at_as1 <= q(1, 25) && g.g_at_bs > q(1, 6),
                "values at {:?}",
                node.s
            );
        }
    }
    Ok(())
}

fn c3_fat_cantor() -> Outcome {
    let f = fat_cantor(&Schedule::standard(), 10).map_err(|e| e.to_string())?;
    ensure!(f.nodes.len() == (1 << 11) - 1, "{} nodes", f.nodes.len());
    for (w, node) in &f.nodes {
        let n = w.len() as i64;
        // Σ_{m ≥ n} 2^{m−n}·2^{−2m−1} = 2^{−2n}
        let limit = &node.length - Rational::pow2(-2 * n);
        ensure!(limit == Rational::pow2(-n), "closed form at {w}: {limit}");
        ensure!(
            node.limit_measure == Rational::pow2(-n),
            "λ(K ∩ U_{w}) = {}",
            node.limit_measure
        );
    }
    Ok(())
}

/// `λ(A ∩ (lo; hi))` for `A = ⋃_n (−2·4^{−n−1}; −4^{−n−1}) ∪ (4^{−n}/2; 4^{−n})`
/// when `(−4^{−k}; 4^{−k})` meets `(lo; hi)` in all of one or both sides.
fn half_density_measure(lo: &Rational, hi: &Rational, k: i64) -> Rational {
    let mut total = Rational::zero();
    for n in 0..k {
        let s = Rational::pow2(-2 * n);
        let t = Rational::pow2(-2 * n - 2);
        for (a, b) in [(-(&t * q(2, 1)), -t), (&s / q(2, 1), s)] {
            let l = a.max(lo.clone());
            let h = b.min(hi.clone());
            if l < h {
                total += h - l;
            }
        }
    }
    let tail = Rational::pow2(-2 * k);
    if lo < &Rational::zero() {
        total += &tail / q(3, 1);
    }
    if hi > &Rational::zero() {
        total += &tail * q(2, 3);
    }
    total
}

fn c4_half_density() -> Outcome {
    let a = halfdensity_set();
    let zero = Rational::zero();
    for k in 0..=8i64 {
        let e = Rational::pow2(-2 * k);
        let deep = 2 * k + 2;
        let oracle = |lo: &Rational, hi: &Rational| half_density_measure(lo, hi, deep);
        let w = window_ratio(&a, &zero, &e).map_err(|e| e.to_string())?;
        ensure!(
            w == oracle(&-&e, &e) / (&e * q(2, 1)) && w == q(1, 2),
            "window at 4^-{k}: {w}"
        );
        let h = &e / q(2, 1);
        for (eps, expect) in [(&e, q(2, 3)), (&h, q(1, 3))] {
            let r = one_sided_ratio(&a, &zero, eps, Side::Right).map_err(|e| e.to_string())?;
            let l = one_sided_ratio(&a, &zero, eps, Side::Left).map_err(|e| e.to_string())?;
            ensure!(
                r == oracle(&zero, eps) / eps && r == expect,
                "right at {eps}: {r}"
            );
            ensure!(
                l == oracle(&-eps, &zero) / eps && l == Rational::one() - &expect,
                "left at {eps}: {l}"
            );
        }
    }
    Ok(())
}

fn some_assignment_fits(b: &[Rational], a: &[Rational]) -> bool {
    let n = b.len();
    (0..n.pow(a.len() as u32)).any(|mut code| {
        let mut load = vec![Rational::zero(); n];
        for x in a {
            load[code % n] += x;
            code /= n;
        }
        load.iter().zip(b).all(|(l, c)| l < c)
    })
}

fn some_cut_fits(a: &[Rational], b: &[Rational]) -> bool {
    if a.len() == 1 {
        return !b.is_empty() && a[0] < sum(b);
    }
    (1..b.len()).any(|j| a[0] < sum(&b[..j]) && some_cut_fits(&a[1..], &b[j..]))
}

fn c5_allocation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut tries = 0;
    while done < 1000 {
        tries += 1;
        ensure!(tries < 1_000_000, "only {done} amphora instances found");
        let nb = rng.gen_range(1..=3);
        let na = rng.gen_range(0..=8);
        let b: Vec<Rational> = (0..nb).map(|_| q(rng.gen_range(4..40), 8)).collect();
        let a: Vec<Rational> = (0..na).map(|_| q(rng.gen_range(1..24), 64)).collect();
        if !(sum(&a) < sum(&b) && a.iter().all(|x| x <= &amphora_bound(&b, &a))) {
            continue;
        }
        done += 1;
        let parts = allocate_amphorae(&b, &a).map_err(|e| format!("{a:?} into {b:?}: {e}"))?;
        let mut seen = vec![false; a.len()];
        let mut left: Vec<usize> = (0..a.len()).collect();
        for (part, cap) in parts.iter().zip(&b) {
            let load: Rational = part.iter().map(|&i| &a[i]).sum();
            ensure!(&load < cap, "load {load} ≥ {cap}");
            for &i in part {
                ensure!(!seen[i], "item {i} placed twice");
                seen[i] = true;
            }
            left.retain(|i| !part.contains(i));
            for &i in &left {
                ensure!(&(&load + &a[i]) >= cap, "greedy skipped {i}");
            }
        }
        ensure!(seen.iter().all(|&s| s), "unplaced item");
        if a.len() <= 6 {
            ensure!(
                some_assignment_fits(&b, &a),
                "brute force disagrees on {a:?}"
            );
        }
    }
    let mut done = 0;
    while done < 1000 {
        tries += 1;
        ensure!(tries < 2_000_000, "only {done} barrel instances found");
        let na = rng.gen_range(1..=3);
        let nb = rng.gen_range(1..=8);
        let a: Vec<Rational> = (0..na).map(|_| q(rng.gen_range(1..16), 8)).collect();
        let b: Vec<Rational> = (0..nb).map(|_| q(rng.gen_range(1..12), 8)).collect();
        let pre =
            sum(&a) < sum(&b) && barrel_bound(&a, &b).is_none_or(|r| b.iter().all(|x| x < &r));
        if !pre {
            continue;
        }
        done += 1;
        let blocks = allocate_barrels(&a, &b).map_err(|e| format!("{a:?} over {b:?}: {e}"))?;
        ensure!(blocks.len() == a.len(), "block count");
        ensure!(
            blocks[0].start == 0 && blocks.last().unwrap().end == b.len(),
            "cover"
        );
        for (k, (blk, target)) in blocks.iter().zip(&a).enumerate() {
            ensure!(!blk.is_empty(), "empty block");
            if k > 0 {
                ensure!(blocks[k - 1].end == blk.start, "gap before block {k}");
            }
            ensure!(target < &sum(&b[blk.clone()]), "block {k} too light");
            if k + 1 < a.len() {
                ensure!(
                    target >= &sum(&b[blk.start..blk.end - 1]),
                    "block {k} not least"
                );
            }
        }
        if b.len() <= 6 {
            ensure!(some_cut_fits(&a, &b), "brute force disagrees on {b:?}");
        }
    }
    Ok(())
}

fn invariant_by_summation(plan: &StagePlan, w: &dyn TreeMeasure) -> Outcome {
    for (k, st) in plan.stages.iter().enumerate() {
        let mut fibers: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for i in 0..1u64 << st.l {
            let s = index_to_word(i, st.l);
            let t = plan.phi(&s).ok_or("φ undefined")?.to_vec();
            *fibers.entry(t).or_insert_with(Rational::zero) +=
                BinaryMeasure::weight(&CantorMeasure, &s);
        }
        for (t, mass) in &fibers {
            let wt = w.weight(t);
            ensure!(mass < &wt && wt < &st.delta + mass, "stage {k} at {t:?}");
        }
    }
    Ok(())
}

fn c6_embedding() -> Outcome {
    for seed in 0..50 {
        let t = RandomTree::new(seed);
        ensure!(
            BinaryMeasure::weight(&CantorMeasure, &[]) < t.weight(&[]),
            "seed {seed}: u(∅) ≥ w(∅)"
        );
        let plan = embed_stages(&CantorMeasure, &t, &t, None, 2)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(
            plan.stages.len() == 3,
            "seed {seed}: {} stages",
            plan.stages.len()
        );
        invariant_by_summation(&plan, &t).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(
            plan.is_monotone() && plan.choices_disjoint(),
            "seed {seed}: plan shape"
        );
        for h in 0..2 {
            let lh = plan.stages[h].l as i64;
            let width = Rational::pow2(lh + 1) * Rational::pow2(-2 * lh);
            for s in binary_words(plan.stages[h].l) {
                let sw = embed_verify(&plan, &CantorMeasure, &t, &s, h)
                    .map_err(|e| format!("seed {seed}: {e}"))?;
                ensure!(sw.width == width, "seed {seed}, h {h}: width {}", sw.width);
                ensure!(
                    sw.lower < sw.mass && sw.mass < sw.upper,
                    "seed {seed}: sandwich"
                );
            }
        }
    }
    Ok(())
}

fn band(x: &Rational) -> Option<i64> {
    (0..64i64).find(|&n| &Rational::pow2(-n - 2) <= x && x < &Rational::pow2(-n - 1))
}

fn c7_sharp_claim() -> Outcome {
    let r = q(3, 8);
    let k = SharpK::new(r.clone()).map_err(|e| e.to_string())?;
    let nodes = good_tree(5);
    for g in &nodes {
        let n = g.nval() as i64;
        let m = sharp_K_measure(&k, g.tilde(), 2).map_err(|e| e.to_string())?;
        let MeasureBounds { lo, hi } = &m.bounds;
        ensure!(
            !(lo <= &r && &r <= hi),
            "{}: enclosure straddles r",
            g.sigma_string()
        );
        let (bl, bh) = (band(&(lo - &r).abs()), band(&(hi - &r).abs()));
        ensure!(
            bl == Some(n) && bh == Some(n),
            "{}: bands {bl:?} {bh:?}",
            g.sigma_string()
        );
        ensure!(
            m.rho == Rho::Band(n as u32),
            "{}: ρ = {}",
            g.sigma_string(),
            m.rho
        );
        let off = (m.bounds.center() - k.r_n(n as u32)).abs();
        ensure!(
            off <= Rational::pow2(-n - 4),
            "{}: center off by {off}",
            g.sigma_string()
        );
    }
    ensure!(
        nodes.iter().any(|g| g.sigma().len() == 5),
        "tree too shallow"
    );
    Ok(())
}

fn c8_sharp_trajectories() -> Outcome {
    let k = SharpK::new(q(3, 8)).map_err(|e| e.to_string())?;
    let rows = sharp_trajectory(&k, &MatrixCode::all_zero(8), 5).map_err(|e| e.to_string())?;
    let rho: Vec<Rho> = rows.iter().map(|s| s.rho).collect();
    ensure!(
        rho == (0..5).map(Rho::Band).collect::<Vec<_>>(),
        "all-zero: {rho:?}"
    );
    let rows = sharp_trajectory(&k, &MatrixCode::row_ones(0, 1), 5).map_err(|e| e.to_string())?;
    for s in &rows[1..] {
        ensure!(
            s.rho == Rho::Band(0),
            "row 0, stage {}: ρ = {}",
            s.stage,
            s.rho
        );
        ensure!(
            s.peak as usize == s.stage && s.peak > 0,
            "row 0, stage {}: no ascent",
            s.stage
        );
    }
    Ok(())
}

fn c9_compactness() -> Outcome {
    let mu = |c: &CylinderSet| c.measure(&CantorMeasure);
    let z = MatrixCode::all_zero(9);
    let r = compactness_reduction(&z, 9).map_err(|e| e.to_string())?;
    for n in 0..=8usize {
        ensure!(
            r.increment_bound(n) <= Rational::pow2(-(n as i64) - 2),
            "increment at {n}"
        );
        for d in [4, 8] {
            let before = r.phi_stage(n, d).map_err(|e| e.to_string())?;
            let after = r.phi_stage(n + 1, d).map_err(|e| e.to_string())?;
            let inc = mu(&after.difference(&before));
            ensure!(
                inc <= Rational::pow2(-(n as i64) - 2),
                "stage increment {inc} at {n}"
            );
        }
    }
    let f = r.f();
    for d in 0..12 {
        let m = mu(&f.stage(d).map_err(|e| e.to_string())?);
        ensure!(m == Rational::pow2(-(d as i64)), "stage {d} measure {m}");
    }
    let z = MatrixCode::row_ones(1, 1);
    let r = compactness_reduction(&z, 24).map_err(|e| e.to_string())?;
    match r.certificate(&z, 6).map_err(|e| e.to_string())? {
        CompactCertificate::Thickness {
            home, certificate, ..
        } => {
            ensure!(home == [0, 0, 1], "home {home:?}");
            ensure!(
                certificate.thick,
                "not thick at {:?}",
                certificate.not_thick
            );
            ensure!(
                certificate.cothick,
                "not co-thick at {:?}",
                certificate.not_cothick
            );
        }
        other => return Err(format!("unexpected certificate {other:?}")),
    }
    Ok(())
}

fn c10_sigma() -> Outcome {
    let f = thick_cothick_sigma(Arc::new(CantorMeasure), 6).map_err(|e| e.to_string())?;
    ensure!(
        f.components.len() == 127,
        "{} components",
        f.components.len()
    );
    let cert = thickness_certificate(&f.approx(), &CylinderSet::full(), 6, &CantorMeasure)
        .map_err(|e| e.to_string())?;
    ensure!(
        cert.thick && cert.cothick,
        "thick {} co-thick {}",
        cert.thick,
        cert.cothick
    );
    ensure!(cert.checked == 127, "checked {}", cert.checked);
    let mass = f.mass_upper_bound(&CantorMeasure);
    ensure!(mass <= q(1, 2), "mass bound {mass}");
    Ok(())
}

const D: usize = 12;

fn bits_of(gens: &[Vec<u8>]) -> Vec<bool> {
    let mut v = vec![false; 1 << D];
    for g in gens {
        let lo = (word_to_index(g) as usize) << (D - g.len());
        for b in &mut v[lo..lo + (1 << (D - g.len()))] {
            *b = true;
        }
    }
    v
}

fn gens(max_len: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..2, 0..=max_len), 0..8)
}

fn c11_property_suites() -> Outcome {
    let bern = BernoulliMeasure::new(q(1, 3)).unwrap();
    let mut runner = TestRunner::new(Config::with_cases(200));
    runner
        .run(&(gens(D), gens(D)), |(a, b)| {
            let (ca, cb) = (
                CylinderSet::from_generators(&a),
                CylinderSet::from_generators(&b),
            );
            let (va, vb) = (bits_of(&a), bits_of(&b));
            let u: Vec<bool> = va.iter().zip(&vb).map(|(x, y)| *x || *y).collect();
            let i: Vec<bool> = va.iter().zip(&vb).map(|(x, y)| *x && *y).collect();
            let c: Vec<bool> = va.iter().map(|x| !x).collect();
            prop_assert_eq!(bits_of(&ca.union(&cb).generators()), u);
            prop_assert_eq!(bits_of(&ca.intersection(&cb).generators()), i);
            prop_assert_eq!(bits_of(&ca.complement().generators()), c);
            Ok(())
        })
        .map_err(|e| format!("boolean algebra: {e}"))?;
    let mut runner = TestRunner::new(Config::with_cases(200));
    runner
        .run(&(gens(D), gens(D)), |(a, b)| {
            let (ca, cb) = (
                CylinderSet::from_generators(&a),
                CylinderSet::from_generators(&b),
            );
            for w in [&CantorMeasure as &dyn BinaryMeasure, &bern] {
                let lhs = ca.union(&cb).measure(w) + ca.intersection(&cb).measure(w);
                prop_assert_eq!(lhs, ca.measure(w) + cb.measure(w));
            }
            let count = bits_of(&a).iter().filter(|x| **x).count() as i64;
            prop_assert_eq!(ca.measure(&CantorMeasure), Rational::new(count, 1 << D));
            Ok(())
        })
        .map_err(|e| format!("additivity: {e}"))?;
    let mut runner = TestRunner::new(Config::with_cases(200));
    runner
        .run(
            &(gens(D), prop::collection::vec(0u8..2, D..=D)),
            |(a, x)| {
                let ca = CylinderSet::from_generators(&a);
                let p = density_profile(&ca, &x, &CantorMeasure);
                let member = bits_of(&a)[word_to_index(&x) as usize];
                let want = if member {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                prop_assert!(p[ca.depth()..].iter().all(|r| *r == want));
                Ok(())
            },
        )
        .map_err(|e| format!("clopen profile: {e}"))?;
    let mut runner = TestRunner::new(Config::with_cases(200));
    runner
        .run(&gens(6), |a| {
            let ca = CylinderSet::from_generators(&a);
            let t = density_tree(&ApproxSet::clopen(ca.clone()), 6, &bern).unwrap();
            prop_assert!(t.is_tree());
            let body = t.body();
            prop_assert_eq!(bits_of(&body.generators()), bits_of(&a));
            let t2 = density_tree(&ApproxSet::clopen(body), 6, &bern).unwrap();
            prop_assert_eq!(t2.flags, t.flags);
            Ok(())
        })
        .map_err(|e| format!("density tree: {e}"))?;
    Ok(())
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "spongy measure", 1, c1_spongy_measure),
        (2, "spongy oscillation chain", 10, c2_oscillation_chain),
        (3, "fat Cantor measure preservation", 1, c3_fat_cantor),
        (4, "half-density example ratios", 1, c4_half_density),
        (5, "allocation lemmas", 30, c5_allocation),
        (6, "embedding invariant", 60, c6_embedding),
        (7, "sharp-point ρ certification", 30, c7_sharp_claim),
        (8, "sharp trajectories", 10, c8_sharp_trajectories),
        (9, "compactness reduction", 60, c9_compactness),
        (10, "thick-co-thick union", 10, c10_sigma),
        (11, "property suites", 60, c11_property_suites),
    ];
    let mut failed = Vec::new();
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        let in_time = took < Duration::from_secs(limit);
        let ok = result.is_ok() && in_time;
        let note = match (&result, in_time) {
            (Err(e), _) => format!(" ({e})"),
            (Ok(()), false) => " (over budget)".to_string(),
            _ => String::new(),
        };
        println!(
            "{} criterion {n:>2}: {name} [{:.2}s / {limit}s]{note}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
        );
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
