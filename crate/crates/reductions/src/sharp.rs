//! A compact set whose sharp points encode `P₃`.
//!
//! Good nodes are concatenations of blocks `u_n = 0^{n+6}` and
//! `v_n = 1^{n+6}`. From a good node with value `n` the next block is `u_n`
//! (value `n + 1`) or, when `n > 0`, `v_n` (value `n − 1`). Below a good node
//! `s` with value `n` the set satisfies
//! `K⌞s = E_n ∪ u_n⌢K⌞(s⌢u_n) ∪ v_n⌢K⌞(s⌢v_n)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use density_cantor::CylinderSet;
use density_core::word::format_binary;
use density_core::{Error, MeasureBounds, Rational, Result};
use parking_lot::RwLock;
use serde::{Serialize, Serializer};

use crate::matrix::{gamma, MatrixCode};

/// Largest block value reached by any construction.
pub const MAX_NVAL: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    U(u32),
    V(u32),
}

impl Block {
    pub fn bit(self) -> u8 {
        match self {
            Block::U(_) => 0,
            Block::V(_) => 1,
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Block::U(n) | Block::V(n) => n,
        }
    }

    /// Number of bits, `index + 6`.
    pub fn width(self) -> usize {
        self.index() as usize + 6
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::U(n) => write!(f, "u{n}"),
            Block::V(n) => write!(f, "v{n}"),
        }
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |r: &str| {
            r.parse::<u32>()
                .map_err(|_| Error::parse(format!("bad block {s:?}")))
        };
        if let Some(r) = s.strip_prefix('u') {
            Ok(Block::U(num(r)?))
        } else if let Some(r) = s.strip_prefix('v') {
            Ok(Block::V(num(r)?))
        } else {
            Err(Error::parse(format!("bad block {s:?}")))
        }
    }
}

/// A node `σ` of the tree of good sequences together with `σ̃` and `n(σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoodNode {
    sigma: Vec<Block>,
    tilde: Vec<u8>,
    nval: u32,
}

impl Default for GoodNode {
    fn default() -> Self {
        Self::root()
    }
}

impl GoodNode {
    pub fn root() -> Self {
        GoodNode {
            sigma: Vec::new(),
            tilde: Vec::new(),
            nval: 0,
        }
    }

    pub fn sigma(&self) -> &[Block] {
        &self.sigma
    }

    pub fn tilde(&self) -> &[u8] {
        &self.tilde
    }

    pub fn nval(&self) -> u32 {
        self.nval
    }

    /// `s⌢u_n`.
    pub fn up(&self) -> GoodNode {
        self.push(Block::U(self.nval))
            .expect("ascending is always allowed")
    }

    /// `s⌢v_n`, if `n > 0`.
    pub fn down(&self) -> Option<GoodNode> {
        self.push(Block::V(self.nval))
    }

    pub fn children(&self) -> Vec<GoodNode> {
        let mut out = vec![self.up()];
        out.extend(self.down());
        out
    }

    pub fn push(&self, b: Block) -> Option<GoodNode> {
        let n = self.nval;
        let next = match b {
            Block::U(k) if k == n && n < MAX_NVAL => n + 1,
            Block::V(k) if k == n && n > 0 => n - 1,
            _ => return None,
        };
        let mut g = self.clone();
        g.sigma.push(b);
        g.tilde.extend(std::iter::repeat_n(b.bit(), b.width()));
        g.nval = next;
        Some(g)
    }

    pub fn from_sigma(sigma: &[Block]) -> Result<GoodNode> {
        let mut g = GoodNode::root();
        for (i, &b) in sigma.iter().enumerate() {
            g = g.push(b).ok_or_else(|| {
                Error::pre(
                    "GoodNode::from_sigma",
                    format!("block {b} cannot follow position {i} (value {})", g.nval),
                )
            })?;
        }
        Ok(g)
    }

    /// Reads back a good node from its binary word.
    pub fn from_tilde(t: &[u8]) -> Result<GoodNode> {
        match locate(t)? {
            Located {
                node,
                partial: None,
            } => Ok(node),
            _ => Err(Error::pre(
                "GoodNode::from_tilde",
                format!("{} ends inside a block", format_binary(t)),
            )),
        }
    }

    pub fn sigma_string(&self) -> String {
        self.sigma
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn is_positive(&self) -> bool {
        self.sigma.last().is_some_and(|b| matches!(b, Block::U(_)))
    }
}

impl FromStr for GoodNode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(GoodNode::root());
        }
        let sigma = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Block>>>()?;
        GoodNode::from_sigma(&sigma).map_err(|e| Error::parse(e.to_string()))
    }
}

impl Serialize for GoodNode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GoodNode", 3)?;
        st.serialize_field("sigma", &self.sigma_string())?;
        st.serialize_field("tilde", &format_binary(&self.tilde))?;
        st.serialize_field("nval", &self.nval)?;
        st.end()
    }
}

/// Every good sequence of length at most `depth`, parents before children.
pub fn good_tree(depth: usize) -> Vec<GoodNode> {
    let mut out = vec![GoodNode::root()];
    let mut level = vec![GoodNode::root()];
    for _ in 0..depth {
        level = level.iter().flat_map(GoodNode::children).collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// A word of `T`: the longest good prefix and, if the word stops inside
/// the next block, that block's bit and the number `k` of bits present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub node: GoodNode,
    pub partial: Option<(u8, usize)>,
}

pub fn locate(t: &[u8]) -> Result<Located> {
    let mut node = GoodNode::root();
    let mut pos = 0;
    while pos < t.len() {
        let bit = t[pos];
        let b = if bit == 0 {
            Block::U(node.nval)
        } else {
            Block::V(node.nval)
        };
        let rest = &t[pos..];
        let take = rest.len().min(b.width());
        let ok = bit <= 1 && rest[..take].iter().all(|&x| x == bit);
        let next = if ok { node.push(b) } else { None };
        let Some(next) = next else {
            return Err(Error::pre(
                "locate",
                format!("{} is not in the tree of good nodes", format_binary(t)),
            ));
        };
        if take < b.width() {
            return Ok(Located {
                node,
                partial: Some((bit, take)),
            });
        }
        node = next;
        pos += take;
    }
    Ok(Located {
        node,
        partial: None,
    })
}

/// The band `n` with `2^{−n−2} ≤ |μ(K⌞t) − r| < 2^{−n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rho {
    Band(u32),
    /// `μ(K⌞t) = r`.
    Omega,
    /// The enclosure is not inside a single band.
    Straddle,
}

impl Rho {
    /// Certified `ρ ≥ m`.
    pub fn at_least(self, m: u32) -> bool {
        match self {
            Rho::Band(n) => n >= m,
            Rho::Omega => true,
            Rho::Straddle => false,
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Band(n) => write!(f, "{n}"),
            Rho::Omega => write!(f, "omega"),
            Rho::Straddle => write!(f, "straddle"),
        }
    }
}

impl Serialize for Rho {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rho::Band(n) => s.serialize_u32(*n),
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

fn band_of(x: &Rational) -> Option<u32> {
    if !x.is_positive() || *x >= Rational::new(1, 2) {
        return None;
    }
    let mut n = 0u32;
    while Rational::pow2(-(n as i64) - 2) > *x {
        n += 1;
    }
    Some(n)
}

/// Band of every value enclosed by `b`, measured from `r`.
pub fn rho_of(b: &MeasureBounds, r: &Rational) -> Rho {
    let d = b.abs_diff(r);
    if d.hi.is_zero() {
        return Rho::Omega;
    }
    match (band_of(&d.lo), band_of(&d.hi)) {
        (Some(a), Some(c)) if a == c => Rho::Band(a),
        _ => Rho::Straddle,
    }
}

/// The compact set `K` for a dyadic target `r ∈ (0, 1)`.
pub struct SharpK {
    r: Rational,
    refine: usize,
    cache: RwLock<HashMap<(u32, usize), MeasureBounds>>,
}

/// Default recursion depth for measure enclosures.
pub const DEFAULT_REFINE: usize = 2;

impl SharpK {
    pub fn new(r: Rational) -> Result<Self> {
        if !r.is_dyadic() || !r.is_positive() || r >= Rational::one() {
            return Err(Error::pre(
                "SharpK::new",
                format!("r = {r} must be a dyadic rational in (0, 1)"),
            ));
        }
        Ok(SharpK {
            r,
            refine: DEFAULT_REFINE,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_refine(mut self, refine: usize) -> Self {
        self.refine = refine;
        self
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn refine(&self) -> usize {
        self.refine
    }

    /// `r + 6·2^{−n−4}`, or `r − 6·2^{−n−4}` when the former is not below 1.
    pub fn r_n(&self, n: u32) -> Rational {
        let step = Rational::integer(6) * Rational::pow2(-(n as i64) - 4);
        let up = &self.r + &step;
        if up < Rational::one() {
            up
        } else {
            &self.r - &step
        }
    }

    /// The clopen set of sequences lexicographically below the binary
    /// expansion of `r_n`, so `μ(D_n) = r_n`.
    pub fn d_set(&self, n: u32) -> CylinderSet {
        let digits = self
            .r_n(n)
            .dyadic_digits()
            .expect("r_n is dyadic in (0, 1)");
        CylinderSet::from_generators(digits.iter().enumerate().filter(|(_, &b)| b == 1).map(
            |(i, _)| {
                let mut w = digits[..i].to_vec();
                w.push(0);
                w
            },
        ))
    }

    /// `E_n = ⋃_{0<i≤n+5} (0^i 1 D_n ∪ 1^i 0 D_n)`.
    pub fn e_set(&self, n: u32) -> CylinderSet {
        let d = self.d_set(n);
        let mut gens = Vec::new();
        for i in 1..=n as usize + 5 {
            for bit in 0..2u8 {
                let mut head = vec![bit; i];
                head.push(1 - bit);
                for g in d.generators() {
                    let mut w = head.clone();
                    w.extend(g);
                    gens.push(w);
                }
            }
        }
        CylinderSet::from_generators(gens)
    }

    /// `r_n(1 − 2^{−n−5})`.
    pub fn e_measure(&self, n: u32) -> Rational {
        self.r_n(n) * (Rational::one() - Rational::pow2(-(n as i64) - 5))
    }

    /// Enclosure of `μ(K⌞s)` for a good node of value `n`, unfolding the
    /// recursion `depth` times and bounding deeper terms by `[0, 1]`.
    pub fn good_bounds(&self, n: u32, depth: usize) -> MeasureBounds {
        if let Some(b) = self.cache.read().get(&(n, depth)) {
            return b.clone();
        }
        let children = if depth == 0 {
            let c = if n > 0 { 2 } else { 1 };
            MeasureBounds {
                lo: Rational::zero(),
                hi: Rational::integer(c),
            }
        } else {
            let mut acc = self.good_bounds(n + 1, depth - 1);
            if n > 0 {
                acc = acc.add(&self.good_bounds(n - 1, depth - 1));
            }
            acc
        };
        let b = children
            .scale(&Rational::pow2(-(n as i64) - 6))
            .shift(&self.e_measure(n));
        self.cache.write().insert((n, depth), b.clone());
        b
    }

    /// Enclosure of `μ(K⌞s⌢i^k)` for `0 < k < n + 6`.
    fn partial_bounds(&self, n: u32, bit: u8, k: usize, depth: usize) -> MeasureBounds {
        let child = if bit == 0 { n + 1 } else { n - 1 };
        let f = Rational::pow2(k as i64 - n as i64 - 6);
        let rn = self.r_n(n);
        self.good_bounds(child, depth)
            .scale(&f)
            .shift(&(&rn * (Rational::one() - &f)))
    }

    fn measure_at(&self, n: u32, partial: Option<(u8, usize)>, depth: usize) -> SharpMeasure {
        let bounds = match partial {
            None => self.good_bounds(n, depth),
            Some((bit, k)) => self.partial_bounds(n, bit, k, depth),
        };
        SharpMeasure {
            rho: rho_of(&bounds, &self.r),
            distance: bounds.abs_diff(&self.r),
            bounds,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpMeasure {
    pub bounds: MeasureBounds,
    pub distance: MeasureBounds,
    pub rho: Rho,
}

/// Enclosure of `μ(K⌞t)` and the certified band, for `t ∈ T`.
#[allow(non_snake_case)]
pub fn sharp_K_measure(k: &SharpK, t: &[u8], depth: usize) -> Result<SharpMeasure> {
    let loc = locate(t)?;
    Ok(k.measure_at(loc.node.nval, loc.partial, depth))
}

/// `φ(a)` with the data checked along the way.
#[derive(Debug, Clone, Serialize)]
pub struct SharpStep {
    pub stage: usize,
    pub gamma: usize,
    pub node: GoodNode,
    pub rho: Rho,
    pub bounds: MeasureBounds,
    /// Largest block value visited while extending from the previous stage.
    pub peak: u32,
    /// Intermediate words whose band was certified.
    pub checked: usize,
}

impl SharpStep {
    fn start(k: &SharpK) -> Result<SharpStep> {
        let m = k.measure_at(0, None, k.refine);
        if m.rho != Rho::Band(0) {
            return Err(Error::Inconclusive(format!("ρ(∅) certified as {}", m.rho)));
        }
        Ok(SharpStep {
            stage: 0,
            gamma: 0,
            node: GoodNode::root(),
            rho: m.rho,
            bounds: m.bounds,
            peak: 0,
            checked: 1,
        })
    }
}

/// Appends block `b` to `node`, certifying `ρ ≥ floor` on every word from
/// `node` up to (not including) the new node.
fn certified_push(k: &SharpK, node: &GoodNode, b: Block, floor: u32) -> Result<(GoodNode, usize)> {
    let n = node.nval;
    for j in 0..b.width() {
        let partial = (j > 0).then_some((b.bit(), j));
        let m = k.measure_at(n, partial, k.refine);
        if !m.rho.at_least(floor) {
            return Err(Error::Inconclusive(format!(
                "ρ = {} below {floor} inside block {b} after {}",
                m.rho,
                node.sigma_string()
            )));
        }
    }
    let next = node
        .push(b)
        .ok_or_else(|| Error::pre("sharp_reduction", format!("block {b} not allowed here")))?;
    Ok((next, b.width()))
}

fn extend(k: &SharpK, prev: &SharpStep, a: &[Vec<u8>]) -> Result<SharpStep> {
    let n = a.len() - 1;
    let g = gamma(a);
    if n as u32 >= MAX_NVAL {
        return Err(Error::pre("sharp_reduction", "matrix too large"));
    }
    let mut node = prev.node.clone();
    let mut checked = 0;
    let floor_up = prev.gamma as u32;
    while (node.nval as usize) < n + 1 {
        let (next, c) = certified_push(k, &node, Block::U(node.nval), floor_up)?;
        node = next;
        checked += c;
    }
    let peak = node.nval;
    while (node.nval as usize) > g {
        let (next, c) = certified_push(k, &node, Block::V(node.nval), g as u32)?;
        node = next;
        checked += c;
    }
    let m = k.measure_at(node.nval, None, k.refine);
    if m.rho != Rho::Band(g as u32) {
        return Err(Error::Inconclusive(format!(
            "ρ(φ(a)) certified as {}, expected {g}",
            m.rho
        )));
    }
    Ok(SharpStep {
        stage: n + 1,
        gamma: g,
        node,
        rho: m.rho,
        bounds: m.bounds,
        peak,
        checked: checked + 1,
    })
}

/// `φ(a)` for a square bit matrix `a`, built stage by stage from `φ(∅) = ∅`.
pub fn sharp_reduction(k: &SharpK, a: &[Vec<u8>]) -> Result<SharpStep> {
    if let Some(i) = a.iter().position(|r| r.len() != a.len()) {
        return Err(Error::pre(
            "sharp_reduction",
            format!("row {i} is not of length {}", a.len()),
        ));
    }
    let mut step = SharpStep::start(k)?;
    for n in 1..=a.len() {
        let sub: Vec<Vec<u8>> = a[..n].iter().map(|r| r[..n].to_vec()).collect();
        step = extend(k, &step, &sub)?;
    }
    Ok(step)
}

/// `φ(z ↾ n × n)` for `n < n_max`.
pub fn sharp_trajectory(k: &SharpK, z: &MatrixCode, n_max: usize) -> Result<Vec<SharpStep>> {
    if n_max == 0 {
        return Err(Error::pre("sharp_trajectory", "need at least one stage"));
    }
    let mut out = vec![SharpStep::start(k)?];
    for n in 1..n_max {
        let next = extend(k, out.last().expect("nonempty"), &z.restrict(n))?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> SharpK {
        SharpK::new(Rational::new(3, 8)).unwrap()
    }

    #[test]
    fn first_levels() {
        let t = good_tree(1);
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].nval(), t[1].nval()), (0, 1));
        let s: GoodNode = "u0,v1".parse().unwrap();
        assert_eq!(s.nval(), 0);
        assert_eq!(s.children(), vec!["u0,v1,u0".parse().unwrap()]);
        assert!("u0,v0".parse::<GoodNode>().is_err());
    }

    #[test]
    fn locate_partial_blocks() {
        let s: GoodNode = "u0".parse().unwrap();
        let mut t = s.tilde().to_vec();
        t.extend([1, 1, 1]);
        let loc = locate(&t).unwrap();
        assert_eq!(loc.node, s);
        assert_eq!(loc.partial, Some((1, 3)));
        assert!(locate(&[1]).is_err());
        assert!(locate(&[0, 0, 1]).is_err());
    }

    #[test]
    fn e_set_measure() {
        let k = k();
        for n in 0..4 {
            let e = k.e_set(n);
            assert_eq!(e.measure(&density_core::CantorMeasure), k.e_measure(n));
            assert!(e.is_disjoint(&CylinderSet::cylinder(&vec![0; n as usize + 6])));
            assert!(e.is_disjoint(&CylinderSet::cylinder(&vec![1; n as usize + 6])));
        }
    }

    #[test]
    fn trivial_reductions() {
        let k = k();
        assert_eq!(sharp_reduction(&k, &[]).unwrap().node, GoodNode::root());
        let up = sharp_reduction(&k, &[vec![0]]).unwrap();
        assert_eq!(up.node.sigma_string(), "u0");
        assert_eq!(up.rho, Rho::Band(1));
        let down = sharp_reduction(&k, &[vec![1]]).unwrap();
        assert_eq!(down.node.sigma_string(), "u0,v1");
        assert_eq!(down.rho, Rho::Band(0));
    }
}
