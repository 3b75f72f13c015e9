//! The triadic construction `K(M, ε)` on `[0; 1]`.

use density_core::word::format_triadic;
use density_core::{Error, MeasureBounds, Rational, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriadicConfig {
    pub m: Rational,
    pub eps: Rational,
}

impl TriadicConfig {
    /// `ε₀(M) = (M−1)/(M(3+2M)−3)`.
    pub fn eps0(m: &Rational) -> Rational {
        let three = Rational::integer(3);
        (m - Rational::one()) / (m * (&three + m * Rational::integer(2)) - three)
    }

    pub fn new(m: Rational, eps: Rational) -> Result<Self> {
        if m <= Rational::one() {
            return Err(Error::pre(
                "TriadicConfig",
                format!("M must exceed 1, got {m}"),
            ));
        }
        let e0 = Self::eps0(&m);
        if !eps.is_positive() || eps >= e0 {
            return Err(Error::pre(
                "TriadicConfig",
                format!("need 0 < ε < ε₀ = {e0}, got {eps}"),
            ));
        }
        Ok(TriadicConfig { m, eps })
    }

    /// `M = 2`, `ε = 1/12`.
    pub fn standard() -> Self {
        TriadicConfig {
            m: Rational::integer(2),
            eps: Rational::new(1, 12),
        }
    }

    fn eps_pow(&self, k: usize) -> Rational {
        self.eps.pow(k as i32)
    }

    /// `2Mε^{L+1}/(1−3ε)`: total gap mass removed below a node of length `L`.
    fn gap_mass(&self, level: usize) -> Rational {
        Rational::integer(2) * &self.m * self.eps_pow(level + 1)
            / (Rational::one() - Rational::integer(3) * &self.eps)
    }

    /// `f(M, ε) = (1 − (3+2M)ε)/(2 − 6ε)`.
    pub fn f(&self) -> Rational {
        let one = Rational::one();
        (&one - (Rational::integer(3) + Rational::integer(2) * &self.m) * &self.eps)
            / (Rational::integer(2) - Rational::integer(6) * &self.eps)
    }

    /// `λ(K)`.
    pub fn total_measure(&self) -> Rational {
        Rational::one() - self.gap_mass(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriadicNode {
    #[serde(serialize_with = "ser_word")]
    pub s: Vec<i8>,
    pub a: Rational,
    pub b: Rational,
}

fn ser_word<S: serde::Serializer>(w: &[i8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_triadic(w))
}

impl TriadicNode {
    pub fn length(&self) -> Rational {
        &self.b - &self.a
    }

    pub fn children(&self, cfg: &TriadicConfig) -> [TriadicNode; 3] {
        let e = cfg.eps_pow(self.s.len() + 1);
        let inner = (Rational::one() + &cfg.m) * &e;
        let child = |sym: i8, a: Rational, b: Rational| {
            let mut s = self.s.clone();
            s.push(sym);
            TriadicNode { s, a, b }
        };
        [
            child(-1, self.a.clone(), &self.a + &e),
            child(0, &self.a + &inner, &self.b - &inner),
            child(1, &self.b - &e, self.b.clone()),
        ]
    }
}

pub fn root() -> TriadicNode {
    TriadicNode {
        s: Vec::new(),
        a: Rational::zero(),
        b: Rational::one(),
    }
}

pub const MAX_LEVEL: usize = 12;

/// The `3^n` nodes of `K^{(n)}` in lexicographic order (`−1 < 0 < 1`).
pub fn build_level(cfg: &TriadicConfig, n: usize) -> Result<Vec<TriadicNode>> {
    if n > MAX_LEVEL {
        return Err(Error::pre(
            "build_level",
            format!("level above {MAX_LEVEL}"),
        ));
    }
    let mut level = vec![root()];
    for _ in 0..n {
        level = level.iter().flat_map(|p| p.children(cfg)).collect();
    }
    Ok(level)
}

pub fn node(cfg: &TriadicConfig, s: &[i8]) -> Result<TriadicNode> {
    let mut cur = root();
    for &sym in s {
        let [l, m, r] = cur.children(cfg);
        cur = match sym {
            -1 => l,
            0 => m,
            1 => r,
            _ => return Err(Error::pre("node", format!("invalid symbol {sym}"))),
        };
    }
    Ok(cur)
}

/// `λ(K_s ∩ K) = |K_s| − 2Mε^{|s|+1}/(1−3ε)`.
pub fn spongy_measure(cfg: &TriadicConfig, s: &[i8]) -> Result<Rational> {
    let n = node(cfg, s)?;
    Ok(n.length() - cfg.gap_mass(s.len()))
}

fn node_measure(cfg: &TriadicConfig, n: &TriadicNode) -> Rational {
    n.length() - cfg.gap_mass(n.s.len())
}

/// Enclosure of `λ(K ∩ (lo; hi))`, exact unless a window edge cuts a node
/// at level `depth`.
pub fn window_measure(
    cfg: &TriadicConfig,
    lo: &Rational,
    hi: &Rational,
    depth: usize,
) -> MeasureBounds {
    fn go(
        cfg: &TriadicConfig,
        n: &TriadicNode,
        lo: &Rational,
        hi: &Rational,
        depth: usize,
    ) -> MeasureBounds {
        if &n.b <= lo || &n.a >= hi {
            return MeasureBounds::zero();
        }
        if lo <= &n.a && &n.b <= hi {
            return MeasureBounds::exact(node_measure(cfg, n));
        }
        if n.s.len() >= depth {
            let cut = n.b.clone().min(hi.clone()) - n.a.clone().max(lo.clone());
            return MeasureBounds {
                lo: Rational::zero(),
                hi: cut,
            };
        }
        n.children(cfg)
            .iter()
            .fold(MeasureBounds::zero(), |acc, c| {
                acc.add(&go(cfg, c, lo, hi, depth))
            })
    }
    if lo >= hi {
        return MeasureBounds::zero();
    }
    go(cfg, &root(), lo, hi, depth)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Code {
    Inside(#[serde(serialize_with = "ser_word")] Vec<i8>),
    Outside,
}

/// The word `s` of length `depth` with `x ∈ K_s`.
pub fn component_code(cfg: &TriadicConfig, x: &Rational, depth: usize) -> Code {
    let mut cur = root();
    if x < &cur.a || x > &cur.b {
        return Code::Outside;
    }
    for _ in 0..depth {
        match cur
            .children(cfg)
            .into_iter()
            .find(|c| &c.a <= x && x <= &c.b)
        {
            Some(c) => cur = c,
            None => return Code::Outside,
        }
    }
    Code::Inside(cur.s)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlurWindows {
    pub wide: Rational,
    pub narrow: Rational,
}

/// Exact ratios `λ(K ∩ B(x; Mε^{|s|}))/(2Mε^{|s|})` and
/// `λ(K ∩ B(x; ε^{|s|}))/(2ε^{|s|})`.
pub fn blur_windows(cfg: &TriadicConfig, s: &[i8], x: &Rational) -> Result<BlurWindows> {
    match s.last() {
        Some(-1) | Some(1) => {}
        _ => return Err(Error::pre("blur_windows", "word must end in -1 or 1")),
    }
    let check = s.len() + 6;
    match component_code(cfg, x, check) {
        Code::Inside(c) if c.starts_with(s) => {}
        _ => {
            return Err(Error::pre(
                "blur_windows",
                format!("{x} is not in K_{}", format_triadic(s)),
            ))
        }
    }
    let r = cfg.eps_pow(s.len());
    let ratio = |radius: Rational| -> Result<Rational> {
        let b = window_measure(cfg, &(x - &radius), &(x + &radius), s.len() + 24);
        if !b.is_exact() {
            return Err(Error::Inconclusive(format!(
                "window of radius {radius} around {x} is not resolved"
            )));
        }
        Ok(b.lo / (radius * Rational::integer(2)))
    };
    Ok(BlurWindows {
        wide: ratio(&cfg.m * &r)?,
        narrow: ratio(r)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GValues {
    pub b_z: Rational,
    pub g_at_bs: Rational,
    pub g_at_as1: Rational,
    pub g_at_as1_upper: Rational,
    pub chain_bound: Rational,
    pub mid_bound: Rational,
    pub chain_holds: bool,
}

/// `g(x) = λ(K ∩ (b_z; x))/|b_z − x|` for `z = s⌢0^ω`, at `x = b_s` and at
/// `x = a_{s⌢1}`, with the comparison chain
/// `ε/(M+ε) < (M−1)/(2M³+3M²−2M−1) < 1/(M(M+1)) < g(b_s)`.
pub fn g_values(cfg: &TriadicConfig, s: &[i8]) -> Result<GValues> {
    let n = node(cfg, s)?;
    let one = Rational::one();
    let level = s.len();
    let m = &cfg.m;
    let e = &cfg.eps;
    let e1 = cfg.eps_pow(level + 1);
    let b_z = &n.b - (&one + m) * &e1 / (&one - e);
    let shrink = &one - Rational::integer(2) * m * e / (&one - Rational::integer(3) * e);
    let right_mass = &e1 * &shrink / (&one - e);
    let g_at_bs = &right_mass / (&n.b - &b_z);
    let a_s1 = &n.b - &e1;
    let g_at_as1 = (&right_mass * e) / (&a_s1 - &b_z);
    let g_at_as1_upper = e / (m + e);
    let m2 = m * m;
    let m3 = &m2 * m;
    let chain_bound = (m - &one)
        / (Rational::integer(2) * &m3 + Rational::integer(3) * &m2
            - Rational::integer(2) * m
            - &one);
    let mid_bound = (m * (m + &one)).recip();
    let chain_holds = g_at_as1 <= g_at_as1_upper
        && g_at_as1_upper < chain_bound
        && chain_bound < mid_bound
        && mid_bound < g_at_bs;
    Ok(GValues {
        b_z,
        g_at_bs,
        g_at_as1,
        g_at_as1_upper,
        chain_bound,
        mid_bound,
        chain_holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, s: &[i8]) {
        self.checked += 1;
        if !ok {
            self.failures.push(format_triadic(s));
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub m: Rational,
    pub eps: Rational,
    pub depth: usize,
    pub measure: Rational,
    pub f: Rational,
    pub half_inverse_m: Rational,
    pub g_bs: Rational,
    pub g_as1_upper: Rational,
    pub chain_bound: Rational,
    pub mid_bound: Rational,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Runs every node-level certificate for all nodes of length `≤ depth`.
pub fn verify(cfg: &TriadicConfig, depth: usize) -> Result<VerifyReport> {
    if depth > 8 {
        return Err(Error::pre("verify", "depth above 8"));
    }
    let mut lengths = Check::new("component_length");
    let mut disjoint = Check::new("disjointness");
    let mut additive = Check::new("measure_additivity");
    let mut blur = Check::new("blur_windows");
    let mut chain = Check::new("g_chain");
    let f = cfg.f();
    let half_inv = (Rational::integer(2) * &cfg.m).recip();
    let mut g0 = None;
    for n in 0..=depth {
        let level = build_level(cfg, n)?;
        for (i, node) in level.iter().enumerate() {
            let s = &node.s;
            let en = cfg.eps_pow(s.len());
            let len = node.length();
            let ends_side = matches!(s.last(), Some(-1) | Some(1));
            lengths.record(len >= en && ((len == en) == ends_side || s.is_empty()), s);
            let radius = &cfg.m * &en;
            let left_free = i == 0 || level[i - 1].b <= &node.a - &radius;
            let right_free = i + 1 == level.len() || level[i + 1].a >= &node.b + &radius;
            disjoint.record(s.is_empty() || (left_free && right_free), s);
            let kids: Rational = node
                .children(cfg)
                .iter()
                .map(|c| node_measure(cfg, c))
                .sum();
            additive.record(kids == node_measure(cfg, node), s);
            if ends_side {
                let x = if s.last() == Some(&-1) {
                    node.a.clone()
                } else {
                    node.b.clone()
                };
                let ok = match blur_windows(cfg, s, &x) {
                    Ok(w) => w.narrow == f && w.wide < half_inv && f > half_inv,
                    Err(_) => false,
                };
                blur.record(ok, s);
            }
            let g = g_values(cfg, s)?;
            chain.record(g.chain_holds, s);
            if s.is_empty() {
                g0 = Some(g);
            }
        }
    }
    let g0 = g0.expect("root visited");
    let checks = vec![lengths, disjoint, additive, blur, chain];
    let all_pass = checks.iter().all(|c| c.pass());
    Ok(VerifyReport {
        m: cfg.m.clone(),
        eps: cfg.eps.clone(),
        depth,
        measure: cfg.total_measure(),
        f,
        half_inverse_m: half_inv,
        g_bs: g0.g_at_bs,
        g_as1_upper: g0.g_at_as1_upper,
        chain_bound: g0.chain_bound,
        mid_bound: g0.mid_bound,
        checks,
        all_pass,
    })
}
