//! Explicit sets on the line with prescribed density behaviour at a point.

use density_core::{Error, Rational, Result};
use serde::Serialize;

use crate::interval::{Interval, IntervalSet, LebesgueSet};

/// `c + ⋃_{k ≥ 0} q^k·B` for a base set `B` avoiding `0`, whose scaled copies
/// are pairwise disjoint. Windows around `c` are summed in closed form.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricUnion {
    pub center: Rational,
    pub base: IntervalSet,
    pub ratio: Rational,
    pos: IntervalSet,
    neg: IntervalSet,
}

impl GeometricUnion {
    pub fn new(center: Rational, base: IntervalSet, ratio: Rational) -> Result<Self> {
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(Error::pre("GeometricUnion", "ratio must lie in (0, 1)"));
        }
        if base.contains(&Rational::zero()) {
            return Err(Error::pre("GeometricUnion", "base set contains 0"));
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for p in base.parts() {
            if p.lo.is_negative() && p.hi.is_positive() {
                return Err(Error::pre("GeometricUnion", "a base part straddles 0"));
            }
            if p.hi.is_positive() {
                pos.push(p.clone());
            } else {
                neg.push(Interval {
                    lo: -&p.hi,
                    hi: -&p.lo,
                    lo_closed: p.hi_closed,
                    hi_closed: p.lo_closed,
                });
            }
        }
        let pos = IntervalSet::from_parts(pos);
        let neg = IntervalSet::from_parts(neg);
        for side in [&pos, &neg] {
            if let (Some(first), Some(last)) = (side.parts().first(), side.parts().last()) {
                if &last.hi * &ratio > first.lo {
                    return Err(Error::pre(
                        "GeometricUnion",
                        "scaled copies of the base overlap",
                    ));
                }
            }
        }
        Ok(GeometricUnion {
            center,
            base,
            ratio,
            pos,
            neg,
        })
    }

    /// `Σ_k q^k λ(S ∩ (lo/q^k; hi/q^k))` for `0 ≤ lo < hi`.
    fn side_measure(&self, side: &IntervalSet, lo: &Rational, hi: &Rational) -> Rational {
        let Some(reach) = side.parts().last().map(|p| p.hi.clone()) else {
            return Rational::zero();
        };
        let total = side.lebesgue();
        let mut acc = Rational::zero();
        let mut scale = Rational::one();
        loop {
            let top = &reach * &scale;
            if lo.is_positive() && &top <= lo {
                return acc;
            }
            if lo.is_zero() && &top <= hi {
                return acc + &scale * &total / (Rational::one() - &self.ratio);
            }
            acc += &scale * side.measure_between(&(lo / &scale), &(hi / &scale));
            scale *= &self.ratio;
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let y = x - &self.center;
        if y.is_zero() {
            return false;
        }
        let (side, y) = if y.is_positive() {
            (&self.pos, y)
        } else {
            (&self.neg, -y)
        };
        let Some(reach) = side.parts().last().map(|p| p.hi.clone()) else {
            return false;
        };
        let mut scale = Rational::one();
        while &reach * &scale >= y {
            if side.contains(&(&y / &scale)) {
                return true;
            }
            scale *= &self.ratio;
        }
        false
    }

    /// The union truncated to `k < n`.
    pub fn truncate(&self, n: usize) -> IntervalSet {
        let mut parts = Vec::new();
        let mut scale = Rational::one();
        for _ in 0..n {
            for p in self.base.parts() {
                parts.push(Interval {
                    lo: &self.center + &p.lo * &scale,
                    hi: &self.center + &p.hi * &scale,
                    lo_closed: p.lo_closed,
                    hi_closed: p.hi_closed,
                });
            }
            scale *= &self.ratio;
        }
        IntervalSet::from_parts(parts)
    }
}

impl LebesgueSet for GeometricUnion {
    fn measure_between(&self, lo: &Rational, hi: &Rational) -> Rational {
        if lo >= hi {
            return Rational::zero();
        }
        let a = lo - &self.center;
        let b = hi - &self.center;
        let zero = Rational::zero();
        let mut m = Rational::zero();
        if b.is_positive() {
            m += self.side_measure(&self.pos, &a.clone().max(zero.clone()), &b);
        }
        if a.is_negative() {
            m += self.side_measure(&self.neg, &(-&b).max(zero), &(-&a));
        }
        m
    }
}

/// `⋃_n (−2^{−2n−1}; −2^{−2n−2}) ∪ (2^{−2n−1}; 2^{−2n})`, all `n`.
pub fn halfdensity_set() -> GeometricUnion {
    let base = IntervalSet::from_parts(vec![
        Interval::open(Rational::new(-1, 2), Rational::new(-1, 4)).expect("valid"),
        Interval::open(Rational::new(1, 2), Rational::one()).expect("valid"),
    ]);
    GeometricUnion::new(Rational::zero(), base, Rational::new(1, 4)).expect("valid")
}

/// The same union truncated to `n < N`.
pub fn example_halfdensity(n: usize) -> Result<IntervalSet> {
    if n == 0 {
        return Err(Error::pre("example_halfdensity", "N must be at least 1"));
    }
    Ok(halfdensity_set().truncate(n))
}

fn check_decreasing(op: &'static str, eps: &[Rational]) -> Result<()> {
    if eps.iter().any(|e| !e.is_positive()) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::pre(
            op,
            "scales must be positive and strictly decreasing",
        ));
    }
    Ok(())
}

fn annulus(x: &Rational, outer: &Rational, inner: &Rational, closed: bool) -> [Interval; 2] {
    [
        Interval {
            lo: x - outer,
            hi: x - inner,
            lo_closed: closed,
            hi_closed: closed,
        },
        Interval {
            lo: x + inner,
            hi: x + outer,
            lo_closed: closed,
            hi_closed: closed,
        },
    ]
}

/// `⋃_{n<N} B(x;δ_n) ∖ B(x;ε_{n+1})` with `δ_n = (ε_n+ε_{n+1})/2`, plus the
/// core `(x − ε_N/2; x + ε_N/2)` standing in for the omitted tail, so that
/// the ratio is `1/2` at every `ε_n` and `ε_n/(ε_n+ε_{n+1})` at every `δ_n`.
pub fn basis_counterexample(x: &Rational, eps: &[Rational], n: usize) -> Result<IntervalSet> {
    check_decreasing("basis_counterexample", eps)?;
    if n == 0 || n + 1 > eps.len() {
        return Err(Error::pre(
            "basis_counterexample",
            format!("need 1 ≤ N ≤ {} scales minus one", eps.len()),
        ));
    }
    let two = Rational::integer(2);
    let mut parts = Vec::new();
    for k in 0..n {
        let delta = (&eps[k] + &eps[k + 1]) / &two;
        parts.extend(annulus(x, &delta, &eps[k + 1], false));
    }
    let core = &eps[n] / &two;
    parts.push(Interval::open(x - &core, x + &core)?);
    Ok(IntervalSet::from_parts(parts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Open,
    Closed,
}

/// `⋃_{n<N} B(x;ε_{2n}) ∖ B(x;ε_{2n+1})`; the closed variant uses closed
/// annuli and adds `{x}`.
pub fn oscillation_example(
    x: &Rational,
    eps: &[Rational],
    n: usize,
    variant: Variant,
) -> Result<IntervalSet> {
    check_decreasing("oscillation_example", eps)?;
    if eps.len() < 2 * n {
        return Err(Error::pre(
            "oscillation_example",
            format!("need {} scales, got {}", 2 * n, eps.len()),
        ));
    }
    let quarter = Rational::new(1, 4);
    if eps.windows(2).any(|w| &w[1] / &w[0] > quarter) {
        return Err(Error::pre(
            "oscillation_example",
            "consecutive scale ratio exceeds 1/4",
        ));
    }
    let closed = variant == Variant::Closed;
    let mut parts = Vec::new();
    for k in 0..n {
        parts.extend(annulus(x, &eps[2 * k], &eps[2 * k + 1], closed));
    }
    if closed {
        parts.push(Interval::point(x.clone()));
    }
    Ok(IntervalSet::from_parts(parts))
}
