//! Sets given by a sequence of clopen approximations with explicit error.

use std::fmt;
use std::sync::Arc;

use density_core::{BinaryMeasure, MeasureBounds, Rational, Result};
use serde::Serialize;

use crate::cylinder::CylinderSet;

/// How stage `d` relates to the approximated set `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `C_d ⊆ A` and `μ(A ∖ C_d) ≤ η_d`.
    Increasing,
    /// `A ⊆ C_d` and `μ(C_d ∖ A) ≤ η_d`.
    Decreasing,
    /// `μ(A Δ C_d) ≤ η_d`.
    General,
}

pub trait Approximation: Send + Sync {
    fn mode(&self) -> Mode;

    fn stage(&self, depth: usize) -> Result<CylinderSet>;

    fn tail_bound(&self, depth: usize) -> Rational;

    /// Enclosures of `μ(A ∩ N_v)` for each `v` in `nodes`.
    fn local_bounds(
        &self,
        nodes: &[Vec<u8>],
        depth: usize,
        w: &dyn BinaryMeasure,
    ) -> Result<Vec<MeasureBounds>> {
        let stage = self.stage(depth)?;
        Ok(default_local_bounds(
            self.mode(),
            &stage,
            &self.tail_bound(depth),
            nodes,
            w,
        ))
    }
}

pub fn default_local_bounds(
    mode: Mode,
    stage: &CylinderSet,
    eta: &Rational,
    nodes: &[Vec<u8>],
    w: &dyn BinaryMeasure,
) -> Vec<MeasureBounds> {
    nodes
        .iter()
        .map(|v| {
            let m = stage.measure_within(v, w);
            let wv = w.weight(v);
            let zero = Rational::zero();
            match mode {
                Mode::Increasing => MeasureBounds {
                    hi: (&m + eta).min(wv),
                    lo: m,
                },
                Mode::Decreasing => MeasureBounds {
                    lo: (&m - eta).max(zero),
                    hi: m,
                },
                Mode::General => MeasureBounds {
                    lo: (&m - eta).max(zero),
                    hi: (&m + eta).min(wv),
                },
            }
        })
        .collect()
}

struct Clopen(CylinderSet);

impl Approximation for Clopen {
    fn mode(&self) -> Mode {
        Mode::Decreasing
    }

    fn stage(&self, _depth: usize) -> Result<CylinderSet> {
        Ok(self.0.clone())
    }

    fn tail_bound(&self, _depth: usize) -> Rational {
        Rational::zero()
    }
}

struct FromFns<S, T> {
    mode: Mode,
    stage: S,
    tail: T,
}

impl<S, T> Approximation for FromFns<S, T>
where
    S: Fn(usize) -> CylinderSet + Send + Sync,
    T: Fn(usize) -> Rational + Send + Sync,
{
    fn mode(&self) -> Mode {
        self.mode
    }

    fn stage(&self, depth: usize) -> Result<CylinderSet> {
        Ok((self.stage)(depth))
    }

    fn tail_bound(&self, depth: usize) -> Rational {
        (self.tail)(depth)
    }
}

type Pending = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

/// Pairwise disjoint parts plus an optional not-yet-built remainder whose
/// total mass at stage `d` is at most `pending(d)`.
struct DisjointUnion {
    parts: Vec<ApproxSet>,
    pending: Option<Pending>,
}

impl Approximation for DisjointUnion {
    fn mode(&self) -> Mode {
        if self.pending.is_some() {
            return Mode::General;
        }
        let mut modes = self.parts.iter().map(|p| p.mode());
        match modes.next() {
            None => Mode::Decreasing,
            Some(first) => {
                if modes.all(|m| m == first) {
                    first
                } else {
                    Mode::General
                }
            }
        }
    }

    fn stage(&self, depth: usize) -> Result<CylinderSet> {
        let mut acc = CylinderSet::empty();
        for p in &self.parts {
            acc = acc.union(&p.stage(depth)?);
        }
        Ok(acc)
    }

    fn tail_bound(&self, depth: usize) -> Rational {
        let mut t: Rational = self.parts.iter().map(|p| p.tail_bound(depth)).sum();
        if let Some(f) = &self.pending {
            t += f(depth);
        }
        t
    }

    fn local_bounds(
        &self,
        nodes: &[Vec<u8>],
        depth: usize,
        w: &dyn BinaryMeasure,
    ) -> Result<Vec<MeasureBounds>> {
        let mut acc = vec![MeasureBounds::zero(); nodes.len()];
        for p in &self.parts {
            let b = p.local_bounds(nodes, depth, w)?;
            for (a, b) in acc.iter_mut().zip(b) {
                *a = a.add(&b);
            }
        }
        if let Some(f) = &self.pending {
            let extra = f(depth);
            for a in acc.iter_mut() {
                a.hi += &extra;
            }
        }
        for (a, v) in acc.iter_mut().zip(nodes) {
            *a = a.clamp(&Rational::zero(), &w.weight(v));
        }
        Ok(acc)
    }
}

/// A shared handle on an approximated subset of `2^ω`.
#[derive(Clone)]
pub struct ApproxSet(Arc<dyn Approximation>);

impl ApproxSet {
    pub fn new(a: impl Approximation + 'static) -> Self {
        ApproxSet(Arc::new(a))
    }

    pub fn from_arc(a: Arc<dyn Approximation>) -> Self {
        ApproxSet(a)
    }

    pub fn clopen(c: CylinderSet) -> Self {
        Self::new(Clopen(c))
    }

    pub fn from_fns<S, T>(mode: Mode, stage: S, tail: T) -> Self
    where
        S: Fn(usize) -> CylinderSet + Send + Sync + 'static,
        T: Fn(usize) -> Rational + Send + Sync + 'static,
    {
        Self::new(FromFns { mode, stage, tail })
    }

    /// Union of pairwise disjoint sets. Local bounds are summed part by part.
    pub fn disjoint_union(parts: Vec<ApproxSet>) -> Self {
        Self::new(DisjointUnion {
            parts,
            pending: None,
        })
    }

    pub fn disjoint_union_with_pending<F>(parts: Vec<ApproxSet>, pending: F) -> Self
    where
        F: Fn(usize) -> Rational + Send + Sync + 'static,
    {
        Self::new(DisjointUnion {
            parts,
            pending: Some(Arc::new(pending)),
        })
    }

    pub fn mode(&self) -> Mode {
        self.0.mode()
    }

    pub fn stage(&self, depth: usize) -> Result<CylinderSet> {
        self.0.stage(depth)
    }

    pub fn tail_bound(&self, depth: usize) -> Rational {
        self.0.tail_bound(depth)
    }

    pub fn local_bounds(
        &self,
        nodes: &[Vec<u8>],
        depth: usize,
        w: &dyn BinaryMeasure,
    ) -> Result<Vec<MeasureBounds>> {
        self.0.local_bounds(nodes, depth, w)
    }

    pub fn local_bound(
        &self,
        node: &[u8],
        depth: usize,
        w: &dyn BinaryMeasure,
    ) -> Result<MeasureBounds> {
        Ok(self
            .0
            .local_bounds(&[node.to_vec()], depth, w)?
            .pop()
            .unwrap_or_else(MeasureBounds::zero))
    }

    pub fn stage_report(&self, depth: usize) -> Result<StageReport> {
        let stage = self.stage(depth)?;
        Ok(StageReport {
            depth,
            mode: self.mode(),
            tail_bound: self.tail_bound(depth),
            set: stage,
        })
    }
}

impl fmt::Debug for ApproxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ApproxSet({:?})", self.mode())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub depth: usize,
    pub mode: Mode,
    pub tail_bound: Rational,
    pub set: CylinderSet,
}
