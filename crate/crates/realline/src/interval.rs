//! Finite unions of rational intervals.

use std::fmt;

use density_core::{Error, Rational, Result};
use serde::{Deserialize, Serialize};

/// One interval; `lo == hi` only for a closed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(Error::pre(
                "Interval::new",
                format!("empty or inverted interval {lo}..{hi}"),
            ));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            &self.lo <= x
        } else {
            &self.lo < x
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed).ok()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}; {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorted, pairwise disjoint, non-touching intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalSetJson {
    parts: Vec<Interval>,
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = IntervalSetJson::deserialize(d)?;
        for p in &j.parts {
            Interval::new(p.lo.clone(), p.hi.clone(), p.lo_closed, p.hi_closed)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(IntervalSet::from_parts(j.parts))
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn single(i: Interval) -> Self {
        IntervalSet { parts: vec![i] }
    }

    /// Normalizes arbitrary (possibly overlapping) valid intervals.
    pub fn from_parts(mut parts: Vec<Interval>) -> Self {
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(cur) = out.last_mut() {
                let touches = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
                if touches {
                    match p.hi.cmp(&cur.hi) {
                        std::cmp::Ordering::Greater => {
                            cur.hi = p.hi;
                            cur.hi_closed = p.hi_closed;
                        }
                        std::cmp::Ordering::Equal => cur.hi_closed |= p.hi_closed,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(p);
        }
        IntervalSet { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn lebesgue(&self) -> Rational {
        self.parts.iter().map(|p| p.length()).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut v = self.parts.clone();
        v.extend(other.parts.iter().cloned());
        IntervalSet::from_parts(v)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut v = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    v.push(c);
                }
            }
        }
        IntervalSet::from_parts(v)
    }

    pub fn intersect_interval(&self, i: &Interval) -> IntervalSet {
        self.intersection(&IntervalSet::single(i.clone()))
    }

    /// `[lo; hi] ∖ A`.
    pub fn complement_in(&self, lo: &Rational, hi: &Rational) -> Result<IntervalSet> {
        let frame = Interval::closed(lo.clone(), hi.clone())?;
        let inside = self.intersect_interval(&frame);
        let mut out = Vec::new();
        let mut cursor = (lo.clone(), true);
        for p in inside.parts {
            if let Ok(g) = Interval::new(cursor.0.clone(), p.lo.clone(), cursor.1, !p.lo_closed) {
                out.push(g);
            }
            cursor = (p.hi.clone(), !p.hi_closed);
        }
        if let Ok(g) = Interval::new(cursor.0, hi.clone(), cursor.1, true) {
            out.push(g);
        }
        Ok(IntervalSet::from_parts(out))
    }

    /// All endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut e: Vec<Rational> = self
            .parts
            .iter()
            .flat_map(|p| [p.lo.clone(), p.hi.clone()])
            .collect();
        e.dedup();
        e
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(format!("interval set: {e}")))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(" ∪ "))
    }
}

/// A subset of ℝ whose Lebesgue measure inside any open interval is exact.
pub trait LebesgueSet {
    /// `λ(A ∩ (lo; hi))`.
    fn measure_between(&self, lo: &Rational, hi: &Rational) -> Rational;
}

impl LebesgueSet for IntervalSet {
    fn measure_between(&self, lo: &Rational, hi: &Rational) -> Rational {
        match Interval::open(lo.clone(), hi.clone()) {
            Ok(w) => self.intersect_interval(&w).lebesgue(),
            Err(_) => Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

fn check_scale(op: &'static str, eps: &Rational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::pre(op, format!("scale must be positive, got {eps}")));
    }
    Ok(())
}

/// `λ(A ∩ (x−ε; x+ε)) / 2ε`.
pub fn window_ratio(a: &dyn LebesgueSet, x: &Rational, eps: &Rational) -> Result<Rational> {
    check_scale("window_ratio", eps)?;
    Ok(a.measure_between(&(x - eps), &(x + eps)) / (eps * Rational::integer(2)))
}

/// `λ(A ∩ (x; x+ε)) / ε` or `λ(A ∩ (x−ε; x)) / ε`.
pub fn one_sided_ratio(
    a: &dyn LebesgueSet,
    x: &Rational,
    eps: &Rational,
    side: Side,
) -> Result<Rational> {
    check_scale("one_sided_ratio", eps)?;
    let m = match side {
        Side::Right => a.measure_between(x, &(x + eps)),
        Side::Left => a.measure_between(&(x - eps), x),
    };
    Ok(m / eps)
}

/// Two-sided density at every endpoint, read off at a scale below the
/// smallest gap between distinct endpoints, where the ratio is constant.
pub fn endpoint_density_check(a: &IntervalSet) -> Result<Vec<(Rational, Rational)>> {
    if a.is_empty() {
        return Err(Error::pre("endpoint_density_check", "empty set"));
    }
    let e = a.endpoints();
    let gap = e
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(Rational::one);
    let eps = gap / Rational::integer(2);
    e.into_iter()
        .map(|x| {
            let r = window_ratio(a, &x, &eps)?;
            Ok((x, r))
        })
        .collect()
}
