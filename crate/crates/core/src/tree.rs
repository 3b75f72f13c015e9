//! Pruned trees on ω, tree measures and the Baire-space interval coding.

use std::collections::VecDeque;

use serde::Serialize;

use crate::rational::Rational;

/// Immediate successors of a tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Successors {
    /// `t⌢i` for `i < n`.
    Normal(u32),
    /// An explicit finite list of symbols.
    Explicit(Vec<u32>),
    /// `t⌢i` for every natural `i`.
    AllNaturals,
}

impl Successors {
    pub fn contains(&self, i: u32) -> bool {
        match self {
            Successors::Normal(n) => i < *n,
            Successors::Explicit(v) => v.contains(&i),
            Successors::AllNaturals => true,
        }
    }
}

/// A tree on ω given by a successor oracle. Callers only query members.
pub trait PrunedTree: Send + Sync {
    fn successors(&self, t: &[u32]) -> Successors;

    fn is_normal(&self) -> bool {
        true
    }

    fn contains(&self, t: &[u32]) -> bool {
        (0..t.len()).all(|k| self.successors(&t[..k]).contains(t[k]))
    }
}

/// A weight function on the nodes of a tree.
pub trait TreeMeasure: Send + Sync {
    fn weight(&self, t: &[u32]) -> Rational;

    fn root_mass(&self) -> Rational {
        self.weight(&[])
    }

    /// `Σ_{i ≥ from} w(t⌢i)` for infinitely branching nodes, when known in
    /// closed form.
    fn tail_mass(&self, _t: &[u32], _from: u32) -> Option<Rational> {
        None
    }

    /// A non-singularity modulus: some `N` such that every node of length `N`
    /// has weight `< rho`.
    fn modulus(&self, _rho: &Rational) -> Option<usize> {
        None
    }
}

/// A weight function on binary words (a measure on the Cantor space).
pub trait BinaryMeasure: Send + Sync {
    fn weight(&self, s: &[u8]) -> Rational;

    fn root_mass(&self) -> Rational {
        self.weight(&[])
    }

    fn modulus(&self, _rho: &Rational) -> Option<usize> {
        None
    }
}

/// The complete binary tree.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullBinaryTree;

impl PrunedTree for FullBinaryTree {
    fn successors(&self, _t: &[u32]) -> Successors {
        Successors::Normal(2)
    }
}

/// The complete ω-branching tree.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullBaireTree;

impl PrunedTree for FullBaireTree {
    fn successors(&self, _t: &[u32]) -> Successors {
        Successors::AllNaturals
    }
}

/// A normal tree whose branching number is given by a function.
pub struct FnTree<F>(pub F);

impl<F: Fn(&[u32]) -> u32 + Send + Sync> PrunedTree for FnTree<F> {
    fn successors(&self, t: &[u32]) -> Successors {
        Successors::Normal((self.0)(t))
    }
}

/// A tree measure given by a weight function.
pub struct FnMeasure<F>(pub F);

impl<F: Fn(&[u32]) -> Rational + Send + Sync> TreeMeasure for FnMeasure<F> {
    fn weight(&self, t: &[u32]) -> Rational {
        (self.0)(t)
    }
}

/// The uniform measure `w(s) = 2^{-|s|}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CantorMeasure;

impl CantorMeasure {
    fn modulus_for(rho: &Rational) -> Option<usize> {
        if !rho.is_positive() {
            return None;
        }
        let mut n = 0usize;
        while Rational::pow2(-(n as i64)) >= *rho {
            n += 1;
        }
        Some(n)
    }
}

impl BinaryMeasure for CantorMeasure {
    fn weight(&self, s: &[u8]) -> Rational {
        Rational::pow2(-(s.len() as i64))
    }

    fn modulus(&self, rho: &Rational) -> Option<usize> {
        Self::modulus_for(rho)
    }
}

impl TreeMeasure for CantorMeasure {
    fn weight(&self, t: &[u32]) -> Rational {
        Rational::pow2(-(t.len() as i64))
    }

    fn modulus(&self, rho: &Rational) -> Option<usize> {
        Self::modulus_for(rho)
    }
}

/// The product measure giving `0` probability `p` and `1` probability `1 - p`.
#[derive(Debug, Clone)]
pub struct BernoulliMeasure {
    p: Rational,
}

impl BernoulliMeasure {
    pub fn new(p: Rational) -> Option<Self> {
        (p.is_positive() && p < Rational::one()).then_some(BernoulliMeasure { p })
    }
}

impl BinaryMeasure for BernoulliMeasure {
    fn weight(&self, s: &[u8]) -> Rational {
        let q = Rational::one() - &self.p;
        let zeros = s.iter().filter(|&&b| b == 0).count() as i32;
        let ones = s.len() as i32 - zeros;
        self.p.pow(zeros) * q.pow(ones)
    }

    fn modulus(&self, rho: &Rational) -> Option<usize> {
        if !rho.is_positive() {
            return None;
        }
        let q = Rational::one() - &self.p;
        let top = self.p.clone().max(q);
        let mut n = 0usize;
        let mut x = Rational::one();
        while x >= *rho {
            x *= &top;
            n += 1;
        }
        Some(n)
    }
}

/// The measure `w(s) = Π_{i<|s|} 2^{-s(i)-1}` on the Baire space.
#[derive(Debug, Clone, Copy, Default)]
pub struct BaireMeasure;

impl TreeMeasure for BaireMeasure {
    fn weight(&self, t: &[u32]) -> Rational {
        let e: i64 = t.iter().map(|&k| k as i64 + 1).sum();
        Rational::pow2(-e)
    }

    fn tail_mass(&self, t: &[u32], from: u32) -> Option<Rational> {
        Some(self.weight(t) * Rational::pow2(-(from as i64)))
    }
}

/// Reason a node fails [`tree_measure_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NonPositive { weight: Rational },
    Additivity { expected: Rational, found: Rational },
    MissingTail,
    NotPruned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeCheck {
    Ok,
    Violation {
        node: Vec<u32>,
        violation: Violation,
    },
}

impl TreeCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, TreeCheck::Ok)
    }
}

/// Verifies positivity and additivity `w(t) = Σ w(t⌢i)` at every node of
/// length `< depth`, in length-lexicographic order. Infinitely branching
/// nodes are checked on their first `max(depth, 1)` children plus the
/// declared tail mass.
pub fn tree_measure_check(w: &dyn TreeMeasure, tree: &dyn PrunedTree, depth: usize) -> TreeCheck {
    let width = depth.max(1) as u32;
    let mut queue = VecDeque::from([Vec::<u32>::new()]);
    while let Some(t) = queue.pop_front() {
        let wt = w.weight(&t);
        if !wt.is_positive() {
            return TreeCheck::Violation {
                node: t,
                violation: Violation::NonPositive { weight: wt },
            };
        }
        if t.len() >= depth {
            continue;
        }
        let (children, tail) = match tree.successors(&t) {
            Successors::Normal(n) => ((0..n).collect::<Vec<_>>(), None),
            Successors::Explicit(v) => (v, None),
            Successors::AllNaturals => match w.tail_mass(&t, width) {
                Some(tail) => ((0..width).collect(), Some(tail)),
                None => {
                    return TreeCheck::Violation {
                        node: t,
                        violation: Violation::MissingTail,
                    }
                }
            },
        };
        if children.is_empty() {
            return TreeCheck::Violation {
                node: t,
                violation: Violation::NotPruned,
            };
        }
        let mut found = tail.unwrap_or_else(Rational::zero);
        let mut kids = Vec::with_capacity(children.len());
        for i in children {
            let mut c = t.clone();
            c.push(i);
            found += w.weight(&c);
            kids.push(c);
        }
        if found != wt {
            return TreeCheck::Violation {
                node: t,
                violation: Violation::Additivity {
                    expected: wt,
                    found,
                },
            };
        }
        queue.extend(kids);
    }
    TreeCheck::Ok
}

/// The closed dyadic interval `I(s)` coding a finite sequence of naturals:
/// `I(∅) = [0, 1]`; for `I(s) = [a, b]` and `k ∈ ω`, `I(s⌢k)` is
/// `[a + (b−a)2^{−k−1}, a + (b−a)2^{−k}]` when `|s|` is even and
/// `[b − (b−a)2^{−k}, b − (b−a)2^{−k−1}]` when `|s|` is odd.
pub fn baire_interval(s: &[u32]) -> (Rational, Rational) {
    let mut a = Rational::zero();
    let mut b = Rational::one();
    for (i, &k) in s.iter().enumerate() {
        let len = &b - &a;
        let far = &len * Rational::pow2(-(k as i64));
        let near = &len * Rational::pow2(-(k as i64) - 1);
        if i % 2 == 0 {
            let na = &a + &near;
            let nb = &a + &far;
            a = na;
            b = nb;
        } else {
            let na = &b - &far;
            let nb = &b - &near;
            a = na;
            b = nb;
        }
    }
    (a, b)
}
