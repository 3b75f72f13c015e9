//! Densities, μ-interior/closure and thickness certificates.

use std::collections::BTreeMap;

use density_core::word::{binary_words, format_binary};
use density_core::{BinaryMeasure, Error, MeasureBounds, Rational, Result};
use serde::Serialize;

use crate::approx::ApproxSet;
use crate::cylinder::CylinderSet;

/// Largest depth accepted by the exhaustive tree scans.
pub const MAX_SCAN_DEPTH: usize = 20;

fn check_depth(op: &'static str, depth: usize) -> Result<()> {
    if depth > MAX_SCAN_DEPTH {
        return Err(Error::pre(
            op,
            format!("depth {depth} exceeds {MAX_SCAN_DEPTH}"),
        ));
    }
    Ok(())
}

/// `μ(A ∩ N_{z↾n}) / μ(N_{z↾n})` for `n = 0..=|z|`.
pub fn density_profile(a: &CylinderSet, z: &[u8], w: &dyn BinaryMeasure) -> Vec<Rational> {
    (0..=z.len())
        .map(|n| a.measure_within(&z[..n], w) / w.weight(&z[..n]))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityBounds {
    pub liminf: MeasureBounds,
    pub limsup: MeasureBounds,
    pub window: (usize, usize),
    pub ratios: Vec<MeasureBounds>,
}

/// Enclosures of the density ratios along `z` over the window
/// `n ∈ [depth/2, min(depth, |z|)]`, using stage `depth` of `a`.
pub fn density_bounds(
    a: &ApproxSet,
    z: &[u8],
    w: &dyn BinaryMeasure,
    depth: usize,
) -> Result<DensityBounds> {
    let hi_n = depth.min(z.len());
    let lo_n = (depth / 2).min(hi_n);
    let nodes: Vec<Vec<u8>> = (lo_n..=hi_n).map(|n| z[..n].to_vec()).collect();
    let bounds = a.local_bounds(&nodes, depth, w)?;
    let ratios: Vec<MeasureBounds> = bounds
        .iter()
        .zip(&nodes)
        .map(|(b, v)| b.scale(&w.weight(v).recip()))
        .collect();
    let limsup = MeasureBounds {
        lo: ratios
            .iter()
            .map(|r| r.lo.clone())
            .max()
            .unwrap_or_default(),
        hi: ratios
            .iter()
            .map(|r| r.hi.clone())
            .max()
            .unwrap_or_default(),
    };
    let liminf = MeasureBounds {
        lo: ratios
            .iter()
            .map(|r| r.lo.clone())
            .min()
            .unwrap_or_default(),
        hi: ratios
            .iter()
            .map(|r| r.hi.clone())
            .min()
            .unwrap_or_default(),
    };
    let trivial = |b: &MeasureBounds| b.lo.is_zero() && b.hi == Rational::one();
    if trivial(&liminf) && trivial(&limsup) {
        return Err(Error::Inconclusive(
            "every ratio enclosure is [0, 1]".to_string(),
        ));
    }
    Ok(DensityBounds {
        liminf,
        limsup,
        window: (lo_n, hi_n),
        ratios,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Positive,
    Null,
    Unknown,
}

/// Certified positivity of `μ(A ∩ N_s)` for every `|s| ≤ depth`.
#[derive(Debug, Clone, Serialize)]
pub struct DensityTree {
    pub depth: usize,
    pub flags: BTreeMap<String, Flag>,
}

impl DensityTree {
    pub fn flag(&self, s: &[u8]) -> Option<Flag> {
        self.flags.get(&format_binary(s)).copied()
    }

    /// Union of the positive nodes of length `depth`.
    pub fn body(&self) -> CylinderSet {
        CylinderSet::from_generators(
            self.flags
                .iter()
                .filter(|(k, f)| k.len() == self.depth && **f == Flag::Positive)
                .map(|(k, _)| k.bytes().map(|b| b - b'0').collect::<Vec<u8>>()),
        )
    }

    /// Positive nodes are closed under prefixes.
    pub fn is_tree(&self) -> bool {
        self.flags.iter().all(|(k, f)| {
            *f != Flag::Positive
                || (0..k.len()).all(|n| self.flags.get(&k[..n]) == Some(&Flag::Positive))
        })
    }
}

pub fn density_tree(a: &ApproxSet, depth: usize, w: &dyn BinaryMeasure) -> Result<DensityTree> {
    check_depth("density_tree", depth)?;
    let nodes: Vec<Vec<u8>> = (0..=depth).flat_map(binary_words).collect();
    let bounds = a.local_bounds(&nodes, depth, w)?;
    let flags = nodes
        .iter()
        .zip(bounds)
        .map(|(v, b)| {
            let f = if b.lo.is_positive() {
                Flag::Positive
            } else if b.hi.is_zero() {
                Flag::Null
            } else {
                Flag::Unknown
            };
            (format_binary(v), f)
        })
        .collect();
    Ok(DensityTree { depth, flags })
}

/// Certified parts of the μ-interior and the complement of the μ-closure at
/// resolution `depth`, plus the unresolved region and `μ(A ∩ region)`.
#[derive(Debug, Clone, Serialize)]
pub struct MuOperators {
    pub interior: CylinderSet,
    pub closure_complement: CylinderSet,
    pub frontier: CylinderSet,
    pub frontier_measure: MeasureBounds,
}

pub fn mu_operators(a: &ApproxSet, depth: usize, w: &dyn BinaryMeasure) -> Result<MuOperators> {
    check_depth("mu_operators", depth)?;
    let nodes: Vec<Vec<u8>> = binary_words(depth).collect();
    let bounds = a.local_bounds(&nodes, depth, w)?;
    let mut interior = Vec::new();
    let mut outside = Vec::new();
    let mut frontier = Vec::new();
    let mut fm = MeasureBounds::zero();
    for (v, b) in nodes.into_iter().zip(bounds) {
        if b.lo == w.weight(&v) {
            interior.push(v);
        } else if b.hi.is_zero() {
            outside.push(v);
        } else {
            fm = fm.add(&b);
            frontier.push(v);
        }
    }
    Ok(MuOperators {
        interior: CylinderSet::from_generators(interior),
        closure_complement: CylinderSet::from_generators(outside),
        frontier: CylinderSet::from_generators(frontier),
        frontier_measure: fm,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessCertificate {
    pub thick: bool,
    pub cothick: bool,
    pub checked: usize,
    pub not_thick: Vec<String>,
    pub not_cothick: Vec<String>,
}

/// Checks every `V ⊆ U` extending a generator `g` of `U` with
/// `|V| ≤ max(depth, |g|)`: thick needs a positive lower bound for
/// `μ(A ∩ N_V)`, co-thick needs an upper bound below `w(V)`.
pub fn thickness_certificate(
    a: &ApproxSet,
    u: &CylinderSet,
    depth: usize,
    w: &dyn BinaryMeasure,
) -> Result<ThicknessCertificate> {
    let mut nodes = Vec::new();
    for g in u.generators() {
        let top = depth.max(g.len());
        check_depth("thickness_certificate", top - g.len())?;
        for extra in 0..=top - g.len() {
            for tail in binary_words(extra) {
                let mut v = g.clone();
                v.extend(tail);
                nodes.push(v);
            }
        }
    }
    let bounds = a.local_bounds(&nodes, depth, w)?;
    let mut not_thick = Vec::new();
    let mut not_cothick = Vec::new();
    for (v, b) in nodes.iter().zip(&bounds) {
        if !b.lo.is_positive() {
            not_thick.push(format_binary(v));
        }
        if b.hi >= w.weight(v) {
            not_cothick.push(format_binary(v));
        }
    }
    Ok(ThicknessCertificate {
        thick: not_thick.is_empty(),
        cothick: not_cothick.is_empty(),
        checked: nodes.len(),
        not_thick,
        not_cothick,
    })
}
