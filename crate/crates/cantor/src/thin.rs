//! Compact sets with empty interior and positive measure inside a cylinder.

use std::sync::Arc;

use density_core::word::{comparable, is_prefix};
use density_core::{BinaryMeasure, Error, Rational, Result};
use serde::Serialize;

use crate::approx::{Approximation, Mode};
use crate::cylinder::CylinderSet;

/// Deepest stage (relative to the home cylinder) that is enumerated.
pub const MAX_RELATIVE_DEPTH: usize = 24;

/// One step of the construction: the cylinder `V` with global index `index`
/// and the sub-cylinder removed from it, if `V` was not already removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Removal {
    pub index: u64,
    #[serde(serialize_with = "ser_word")]
    pub node: Vec<u8>,
    #[serde(serialize_with = "ser_opt_word")]
    pub removed: Option<Vec<u8>>,
    pub bound: Rational,
}

fn ser_word<S: serde::Serializer>(w: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&density_core::word::format_binary(w))
}

fn ser_opt_word<S: serde::Serializer>(
    w: &Option<Vec<u8>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(w) => s.serialize_some(&density_core::word::format_binary(w)),
        None => s.serialize_none(),
    }
}

/// `K = N_t ∖ ⋃ removals`. Every cylinder `V ⊆ N_t` in length-lex order gets
/// index `i` and, unless it already lies in a removal, loses the lex-first
/// cylinder of length `max(|V| + 1, N)` inside it that avoids the removals of
/// its prefixes, where `N` is the modulus of `w` at `ε·2^{-(i+2)}`.
pub struct ThinCompact {
    home: Vec<u8>,
    eps: Rational,
    w: Arc<dyn BinaryMeasure>,
}

pub fn compact_thin(t: &[u8], eps: Rational, w: Arc<dyn BinaryMeasure>) -> Result<ThinCompact> {
    let wt = w.weight(t);
    if !eps.is_positive() || eps >= wt {
        return Err(Error::pre(
            "compact_thin",
            format!("need 0 < eps < w(t) = {wt}, got {eps}"),
        ));
    }
    if w.modulus(&(&eps * Rational::pow2(-2))).is_none() {
        return Err(Error::ModulusExhausted(
            "measure declares no modulus".to_string(),
        ));
    }
    Ok(ThinCompact {
        home: t.to_vec(),
        eps,
        w,
    })
}

impl ThinCompact {
    pub fn home(&self) -> &[u8] {
        &self.home
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    pub fn measure_lower_bound(&self) -> Rational {
        self.w.weight(&self.home) - &self.eps / Rational::integer(2)
    }

    fn bound(&self, index: u64) -> Rational {
        &self.eps * Rational::pow2(-(index as i64) - 2)
    }

    fn removal_at(&self, v: &[u8], index: u64, relevant: &[Vec<u8>]) -> Result<Vec<u8>> {
        let bound = self.bound(index);
        let n = self
            .w
            .modulus(&bound)
            .ok_or_else(|| Error::ModulusExhausted(format!("no modulus at {bound}")))?;
        let len = n.max(v.len() + 1);
        if len > density_core::word::MAX_WORD_LEN {
            return Err(Error::ModulusExhausted(format!(
                "removal length {len} exceeds the word limit"
            )));
        }
        fn first(x: &mut Vec<u8>, len: usize, rel: &[Vec<u8>]) -> bool {
            if rel.iter().any(|r| is_prefix(r, x)) {
                return false;
            }
            if x.len() == len {
                return !rel.iter().any(|r| is_prefix(x, r));
            }
            for b in 0..2 {
                x.push(b);
                if first(x, len, rel) {
                    return true;
                }
                x.pop();
            }
            false
        }
        let mut x = v.to_vec();
        if first(&mut x, len, relevant) {
            Ok(x)
        } else {
            Err(Error::Inconclusive(format!(
                "no free cylinder of length {len} below the node"
            )))
        }
    }

    /// Number of cylinders processed by stage `d`.
    pub fn processed(&self, depth: usize) -> u64 {
        if depth < self.home.len() {
            0
        } else {
            let rel = (depth - self.home.len()).min(MAX_RELATIVE_DEPTH);
            (1u64 << (rel + 1)) - 1
        }
    }

    /// All steps for cylinders `V ⊇ t` with `|V| ≤ depth`.
    pub fn removals(&self, depth: usize) -> Result<Vec<Removal>> {
        if depth >= self.home.len() && depth - self.home.len() > MAX_RELATIVE_DEPTH {
            return Err(Error::pre(
                "compact_thin",
                format!("stage {depth} is too deep below the home cylinder"),
            ));
        }
        let mut out = Vec::new();
        let mut level: Vec<(Vec<u8>, Vec<Vec<u8>>, bool)> = if depth >= self.home.len() {
            vec![(self.home.clone(), Vec::new(), false)]
        } else {
            Vec::new()
        };
        let mut index = 0u64;
        while !level.is_empty() {
            let mut next = Vec::with_capacity(level.len() * 2);
            for (v, rel, voided) in level {
                let mut rec = Removal {
                    index,
                    node: v.clone(),
                    removed: None,
                    bound: self.bound(index),
                };
                index += 1;
                let mut rel2 = rel;
                if !voided {
                    let r = self.removal_at(&v, rec.index, &rel2)?;
                    rel2.push(r.clone());
                    rec.removed = Some(r);
                }
                if v.len() < depth {
                    for b in 0..2u8 {
                        let mut c = v.clone();
                        c.push(b);
                        let void_c = voided || rel2.iter().any(|r| is_prefix(r, &c));
                        let rel_c = if void_c {
                            Vec::new()
                        } else {
                            rel2.iter().filter(|r| is_prefix(&c, r)).cloned().collect()
                        };
                        next.push((c, rel_c, void_c));
                    }
                }
                out.push(rec);
            }
            level = next;
        }
        Ok(out)
    }

    /// Whether `N_u ∩ K = ∅` can be certified by walking the prefixes of `u`.
    pub fn certainly_disjoint(&self, u: &[u8]) -> Result<bool> {
        if !comparable(&self.home, u) {
            return Ok(true);
        }
        if is_prefix(u, &self.home) {
            return Ok(false);
        }
        let t = self.home.len();
        let mut rel: Vec<Vec<u8>> = Vec::new();
        for l in t..=u.len() {
            if l - t > 62 {
                return Ok(false);
            }
            let v = &u[..l];
            rel.retain(|r| is_prefix(v, r) && r.len() > v.len());
            let suffix = density_core::word::word_to_index(&v[t..]);
            let index = (1u64 << (l - t)) - 1 + suffix;
            let r = self.removal_at(v, index, &rel)?;
            if is_prefix(&r, u) {
                return Ok(true);
            }
            rel.push(r);
        }
        Ok(false)
    }
}

impl Approximation for ThinCompact {
    fn mode(&self) -> Mode {
        Mode::Decreasing
    }

    fn stage(&self, depth: usize) -> Result<CylinderSet> {
        let removed = CylinderSet::from_generators(
            self.removals(depth)?.into_iter().filter_map(|r| r.removed),
        );
        Ok(CylinderSet::cylinder(&self.home).difference(&removed))
    }

    /// Later removals have indices `i ≥ I_d` and weight below `ε·2^{-(i+2)}`.
    fn tail_bound(&self, depth: usize) -> Rational {
        &self.eps * Rational::pow2(-(self.processed(depth) as i64) - 1)
    }
}
