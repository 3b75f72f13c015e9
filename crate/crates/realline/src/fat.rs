//! A fat Cantor set on `[0; 2]` matching the Cantor measure node by node.

use std::collections::BTreeMap;

use density_core::word::{binary_words, format_binary};
use density_core::{Error, Rational, Result};
use serde::Serialize;

use crate::interval::{Interval, IntervalSet};

/// Gap lengths `ε_n` together with the closed form
/// `tail(n) = Σ_{m ≥ n} 2^m ε_m`.
pub struct Schedule {
    eps: Box<dyn Fn(usize) -> Rational + Send + Sync>,
    tail: Box<dyn Fn(usize) -> Rational + Send + Sync>,
}

impl Schedule {
    pub fn new<E, T>(eps: E, tail: T) -> Self
    where
        E: Fn(usize) -> Rational + Send + Sync + 'static,
        T: Fn(usize) -> Rational + Send + Sync + 'static,
    {
        Schedule {
            eps: Box::new(eps),
            tail: Box::new(tail),
        }
    }

    /// `ε_n = 2^{−2n−1}`, `tail(n) = 2^{−n}`.
    pub fn standard() -> Self {
        Schedule::new(
            |n| Rational::pow2(-2 * n as i64 - 1),
            |n| Rational::pow2(-(n as i64)),
        )
    }

    pub fn eps(&self, n: usize) -> Rational {
        (self.eps)(n)
    }

    pub fn tail(&self, n: usize) -> Rational {
        (self.tail)(n)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FatNode {
    pub lo: Rational,
    pub hi: Rational,
    pub length: Rational,
    /// `λ(K ∩ U_s)` from the closed-form tail.
    pub limit_measure: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct FatCantor {
    pub depth: usize,
    pub stage: IntervalSet,
    pub nodes: BTreeMap<String, FatNode>,
}

impl FatCantor {
    pub fn node(&self, s: &[u8]) -> Option<&FatNode> {
        self.nodes.get(&format_binary(s))
    }
}

/// `U_∅ = [0; 2]`; `U_s⌢0` and `U_s⌢1` are what remains of `U_s` after
/// removing the open centered interval of length `ε_{|s|}`.
pub fn fat_cantor(schedule: &Schedule, depth: usize) -> Result<FatCantor> {
    if depth > 20 {
        return Err(Error::pre("fat_cantor", "depth above 20"));
    }
    if schedule.tail(0) != Rational::one() {
        return Err(Error::pre(
            "fat_cantor",
            format!("Σ 2^n ε_n must be 1, declared {}", schedule.tail(0)),
        ));
    }
    for n in 0..depth {
        let step = schedule.tail(n) - schedule.tail(n + 1);
        if step != Rational::pow2(n as i64) * schedule.eps(n) || !schedule.eps(n).is_positive() {
            return Err(Error::pre(
                "fat_cantor",
                format!("tail closed form disagrees with ε at level {n}"),
            ));
        }
    }
    let two = Rational::integer(2);
    let mut nodes = BTreeMap::new();
    let mut level = vec![(Vec::<u8>::new(), Rational::zero(), two.clone())];
    for n in 0..=depth {
        let mut next = Vec::new();
        for (s, lo, hi) in level {
            let length = &hi - &lo;
            let limit = &length - Rational::pow2(-(n as i64)) * schedule.tail(n);
            if n < depth {
                let e = schedule.eps(n);
                if e >= length {
                    return Err(Error::pre(
                        "fat_cantor",
                        format!("ε_{n} = {e} does not fit in U_{}", format_binary(&s)),
                    ));
                }
                let mid_lo = (&lo + &hi - &e) / &two;
                let mid_hi = (&lo + &hi + &e) / &two;
                let mut s0 = s.clone();
                s0.push(0);
                let mut s1 = s.clone();
                s1.push(1);
                next.push((s0, lo.clone(), mid_lo));
                next.push((s1, mid_hi, hi.clone()));
            }
            nodes.insert(
                format_binary(&s),
                FatNode {
                    lo,
                    hi,
                    length,
                    limit_measure: limit,
                },
            );
        }
        level = next;
    }
    let stage = IntervalSet::from_parts(
        binary_words(depth)
            .map(|s| {
                let node = &nodes[&format_binary(&s)];
                Interval::closed(node.lo.clone(), node.hi.clone())
            })
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(FatCantor {
        depth,
        stage,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_and_first_level() {
        let f = fat_cantor(&Schedule::standard(), 3).unwrap();
        assert_eq!(f.node(&[]).unwrap().limit_measure, Rational::one());
        let n0 = f.node(&[0]).unwrap();
        assert_eq!(n0.length, Rational::new(3, 4));
        assert_eq!(n0.limit_measure, Rational::new(1, 2));
    }

    #[test]
    fn stage_measure_by_gap_sum() {
        let s = Schedule::standard();
        for d in 0..6 {
            let f = fat_cantor(&s, d).unwrap();
            let removed: Rational = (0..d).map(|m| Rational::pow2(m as i64) * s.eps(m)).sum();
            assert_eq!(f.stage.lebesgue(), Rational::integer(2) - removed);
        }
    }

    #[test]
    fn rejects_bad_schedule() {
        let bad = Schedule::new(|n| Rational::pow2(-2 * n as i64 - 1), |_| Rational::one());
        assert!(fat_cantor(&bad, 2).is_err());
    }
}
