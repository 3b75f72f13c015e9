//! Spongy subsets of `[0; 1]` of any prescribed measure.

use density_core::{Error, Rational, Result};
use density_realline::{Interval, IntervalSet};
use serde::{Deserialize, Serialize};

use crate::triadic::{build_level, TriadicConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Open,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointOsc {
    Positive,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `S_{0,α} ∪ S_{1−α,1}`.
    Minus,
    /// `S_{0,α} ∪ [α; 1−α] ∪ S_{1−α,1}`.
    Plus,
}

/// One affine piece: a copy of `K` in `[lo; hi]`, or the plain interval.
#[derive(Debug, Clone, Serialize)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub solid: bool,
    pub measure: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpongyVariant {
    pub m: Rational,
    pub flavor: Flavor,
    pub endpoint_osc: EndpointOsc,
    pub shape: Shape,
    pub alpha: Rational,
    pub depth: usize,
    /// Central pieces, or all pieces when endpoint oscillation is positive.
    pub pieces: Vec<Piece>,
    /// `δ` and the scale sequence start for the zero-oscillation layout.
    pub delta: Option<Rational>,
    pub stage: IntervalSet,
    pub stage_measure: Rational,
}

fn shape_for(m: &Rational, ls: &Rational) -> (Shape, Rational) {
    let two = Rational::integer(2);
    if m <= ls {
        (Shape::Minus, m / (&two * ls))
    } else {
        (
            Shape::Plus,
            (Rational::one() - m) / (two * (Rational::one() - ls)),
        )
    }
}

fn shape_pieces(
    lo: &Rational,
    hi: &Rational,
    shape: Shape,
    alpha: &Rational,
    ls: &Rational,
) -> Vec<Piece> {
    let len = hi - lo;
    let at = |t: &Rational| lo + &len * t;
    let one = Rational::one();
    let a = at(alpha);
    let b = at(&(&one - alpha));
    let copy = |l: Rational, h: Rational| Piece {
        measure: (&h - &l) * ls,
        lo: l,
        hi: h,
        solid: false,
    };
    let mut v = vec![copy(lo.clone(), a.clone()), copy(b.clone(), hi.clone())];
    if shape == Shape::Plus && a < b {
        v.insert(
            1,
            Piece {
                measure: &b - &a,
                lo: a,
                hi: b,
                solid: true,
            },
        );
    }
    v
}

fn interval(lo: Rational, hi: Rational, flavor: Flavor) -> Option<Interval> {
    let c = flavor == Flavor::Closed;
    Interval::new(lo, hi, c, c).ok()
}

fn stage_of(pieces: &[Piece], unit: &[(Rational, Rational)], flavor: Flavor) -> IntervalSet {
    let mut parts = Vec::new();
    for p in pieces {
        let len = &p.hi - &p.lo;
        if p.solid {
            parts.extend(interval(p.lo.clone(), p.hi.clone(), flavor));
        } else {
            for (a, b) in unit {
                parts.extend(interval(&p.lo + &len * a, &p.lo + &len * b, flavor));
            }
        }
    }
    IntervalSet::from_parts(parts)
}

/// Builds the depth-`d` stage of a spongy set of measure `m` from copies of
/// `K(M, ε)`. With zero endpoint oscillation the set sits in
/// `[ε₁+δ; 1/2−δ]` and its mirror, plus copies of `K` of length
/// `2^{−n−1}(ε_{2n}−ε_{2n+1})` centered in `(ε_{2n+1}; ε_{2n})` and mirrored,
/// for `1 ≤ n ≤ d`, where `δ = min(m, 1−m)/8` and `ε_n = δ·2^{1−n}`.
pub fn spongy_variant(
    cfg: &TriadicConfig,
    m: &Rational,
    flavor: Flavor,
    endpoint_osc: EndpointOsc,
    depth: usize,
) -> Result<SpongyVariant> {
    let one = Rational::one();
    if !m.is_positive() || m >= &one {
        return Err(Error::pre(
            "spongy_variant",
            format!("m must lie in (0, 1), got {m}"),
        ));
    }
    let ls = cfg.total_measure();
    let unit: Vec<(Rational, Rational)> = build_level(cfg, depth)?
        .into_iter()
        .map(|n| (n.a, n.b))
        .collect();
    match endpoint_osc {
        EndpointOsc::Positive => {
            let (shape, alpha) = shape_for(m, &ls);
            let pieces = shape_pieces(&Rational::zero(), &one, shape, &alpha, &ls);
            let stage = stage_of(&pieces, &unit, flavor);
            Ok(SpongyVariant {
                m: m.clone(),
                flavor,
                endpoint_osc,
                shape,
                alpha,
                depth,
                pieces,
                delta: None,
                stage_measure: stage.lebesgue(),
                stage,
            })
        }
        EndpointOsc::Zero => {
            let eighth = Rational::new(1, 8);
            let delta = m.clone().min(&one - m) * eighth;
            let tail = zero_layout_tail_mass(&delta, &ls);
            let inner_len = Rational::new(1, 2) - Rational::integer(3) * &delta;
            let central = (m - &tail) / (Rational::integer(2) * &inner_len);
            let (shape, alpha) = shape_for(&central, &ls);
            let lo = &delta * Rational::integer(2);
            let hi = Rational::new(1, 2) - &delta;
            let mut pieces = shape_pieces(&lo, &hi, shape, &alpha, &ls);
            let mirrored: Vec<Piece> = pieces
                .iter()
                .map(|p| Piece {
                    lo: &one - &p.hi,
                    hi: &one - &p.lo,
                    solid: p.solid,
                    measure: p.measure.clone(),
                })
                .collect();
            pieces.extend(mirrored);
            let mut edge = Vec::new();
            for n in 1..=depth {
                let (a, b) = zero_layout_gap_piece(&delta, n);
                for (l, h) in [(a.clone(), b.clone()), (&one - &b, &one - &a)] {
                    edge.push(Piece {
                        measure: (&h - &l) * &ls,
                        lo: l,
                        hi: h,
                        solid: false,
                    });
                }
            }
            let mut all = pieces.clone();
            all.extend(edge);
            let stage = stage_of(&all, &unit, flavor);
            Ok(SpongyVariant {
                m: m.clone(),
                flavor,
                endpoint_osc,
                shape,
                alpha,
                depth,
                pieces,
                delta: Some(delta),
                stage_measure: stage.lebesgue(),
                stage,
            })
        }
    }
}

/// `ε_n = δ·2^{1−n}` for `n ≥ 1`.
pub fn zero_layout_scale(delta: &Rational, n: usize) -> Rational {
    if n == 0 {
        Rational::new(1, 2)
    } else {
        delta * Rational::pow2(1 - n as i64)
    }
}

/// The copy of `K` centered in `(ε_{2n+1}; ε_{2n})`, of length
/// `2^{−n−1}(ε_{2n} − ε_{2n+1})`.
pub fn zero_layout_gap_piece(delta: &Rational, n: usize) -> (Rational, Rational) {
    let top = zero_layout_scale(delta, 2 * n);
    let bottom = zero_layout_scale(delta, 2 * n + 1);
    let gap = &top - &bottom;
    let len = &gap * Rational::pow2(-(n as i64) - 1);
    let mid = (&top + &bottom) / Rational::integer(2);
    let half = &len / Rational::integer(2);
    (&mid - &half, mid + half)
}

/// Mass of all gap pieces on both sides, `λ(K)·δ/7`.
pub fn zero_layout_tail_mass(delta: &Rational, ls: &Rational) -> Rational {
    delta * ls / Rational::integer(7)
}

/// Exact `λ(X ∩ (0; ε_{2n}))/ε_{2n}` for the zero-oscillation layout with `n ≥ 1`.
pub fn zero_layout_right_ratio(delta: &Rational, ls: &Rational, n: usize) -> Rational {
    let mass = ls * delta * Rational::pow2(-3 * n as i64 - 1) * Rational::new(8, 7);
    mass / zero_layout_scale(delta, 2 * n)
}
