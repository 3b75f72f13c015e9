//! Seeded random finitely branching weighted trees.

use std::collections::HashMap;
use std::sync::RwLock;

use density_core::{PrunedTree, Rational, Successors, TreeMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A normal tree whose node `t` carries `p(t)` units worth `p(t)·2^{−|t|−2}`.
/// A node splits its `2p` units among at least two children, each child
/// getting between 1 and `max_units` units.
#[derive(Debug)]
pub struct RandomTree {
    seed: u64,
    root_units: u64,
    max_units: u64,
    cache: RwLock<HashMap<Vec<u32>, u64>>,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomTree {
    /// Root weight `w(∅) ∈ {3/2, 7/4, 2}` picked by the seed, at most two
    /// units per node below the root.
    pub fn new(seed: u64) -> Self {
        Self::with_max_units(seed, 2)
    }

    pub fn with_max_units(seed: u64, max_units: u64) -> Self {
        RandomTree {
            seed,
            root_units: 6 + splitmix(seed) % 3,
            max_units: max_units.max(1),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn rng(&self, t: &[u32]) -> ChaCha8Rng {
        let h = t.iter().fold(splitmix(self.seed ^ 0x5eed), |h, &i| {
            splitmix(h ^ (i as u64 + 1))
        });
        ChaCha8Rng::seed_from_u64(splitmix(h ^ t.len() as u64))
    }

    /// Units of each child of a node holding `p` units.
    fn split(&self, t: &[u32], p: u64) -> Vec<u64> {
        let mut rng = self.rng(t);
        let total = 2 * p;
        let cap = self.max_units;
        let lo = total.div_ceil(cap).max(2);
        let hi = lo.max(3).min(total);
        let b = rng.gen_range(lo..=hi);
        let mut rem = total;
        let mut parts = Vec::with_capacity(b as usize);
        for i in 0..b {
            let left = b - i - 1;
            let c = rng.gen_range(rem.saturating_sub(cap * left).max(1)..=(rem - left).min(cap));
            parts.push(c);
            rem -= c;
        }
        parts
    }

    /// Units at `t`, or `None` if `t` is not in the tree.
    pub fn units(&self, t: &[u32]) -> Option<u64> {
        let Some((&last, parent)) = t.split_last() else {
            return Some(self.root_units);
        };
        if let Some(&p) = self.cache.read().unwrap().get(t) {
            return Some(p);
        }
        let p = *self.split(parent, self.units(parent)?).get(last as usize)?;
        self.cache.write().unwrap().insert(t.to_vec(), p);
        Some(p)
    }
}

impl PrunedTree for RandomTree {
    fn successors(&self, t: &[u32]) -> Successors {
        let p = self.units(t).expect("node outside the tree");
        Successors::Normal(self.split(t, p).len() as u32)
    }
}

impl TreeMeasure for RandomTree {
    fn weight(&self, t: &[u32]) -> Rational {
        let p = self.units(t).expect("node outside the tree");
        Rational::integer(p as i64) * Rational::pow2(-(t.len() as i64) - 2)
    }

    /// Least `N` with `max_units·2^{−N−2} < ρ`, or `0` when the root already is.
    fn modulus(&self, rho: &Rational) -> Option<usize> {
        if !rho.is_positive() {
            return None;
        }
        if Rational::new(self.root_units as i64, 4) < *rho {
            return Some(0);
        }
        let cap = Rational::integer(self.max_units as i64);
        (1..4096usize).find(|&n| &cap * Rational::pow2(-(n as i64) - 2) < *rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use density_core::tree_measure_check;

    #[test]
    fn consistent_measure() {
        for seed in 0..10 {
            let t = RandomTree::new(seed);
            assert!(tree_measure_check(&t, &t, 6).is_ok());
        }
    }

    #[test]
    fn deterministic() {
        let (a, b) = (RandomTree::new(7), RandomTree::new(7));
        assert_eq!(a.weight(&[0, 1, 0]), b.weight(&[0, 1, 0]));
        assert_eq!(a.successors(&[1]), b.successors(&[1]));
    }
}
