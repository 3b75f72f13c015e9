//! The staged measure-preserving map `φ: 2^{<ω} → T`.

use density_core::word::{format_binary, format_naturals, index_to_word, word_to_index};
use density_core::{BinaryMeasure, Error, PrunedTree, Rational, Result, Successors, TreeMeasure};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::allocation::{allocate_amphorae, allocate_barrels};

/// Longest source level `L_k` a plan may reach.
pub const MAX_SOURCE_LEVEL: usize = 24;
/// Most target nodes examined while choosing `M_{k+1}`.
pub const MAX_TARGET_NODES: usize = 1 << 22;
/// Deepest target level scanned when `w` ships no modulus.
pub const MAX_TARGET_LEVEL: usize = 64;

/// The set `C_{s⌢i}` chosen for one child `s⌢i` of a stage-`k` word.
#[derive(Debug, Clone, Serialize)]
pub struct Choice {
    #[serde(serialize_with = "ser_binary")]
    pub word: Vec<u8>,
    #[serde(serialize_with = "ser_nat")]
    pub parent: Vec<u32>,
    #[serde(serialize_with = "ser_nat_list")]
    pub chosen: Vec<Vec<u32>>,
    /// `u(s⌢i)`.
    pub target: Rational,
    /// `Σ_{t′∈C} w(t′)`.
    pub mass: Rational,
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub l: usize,
    pub m: usize,
    pub delta: Rational,
    /// `φ(2^{L_k})` in lexicographic order.
    pub range: Vec<Vec<u32>>,
    /// `phi[i]` indexes `range` for the word of length `L_k` with index `i`.
    pub phi: Vec<u32>,
    /// The sets `C_{s⌢i}` built on the way from the previous stage.
    pub choices: Vec<Choice>,
}

impl Stage {
    /// `A_k(t)` for each `t` in `range`, words as indices in increasing order.
    pub fn fibers(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new(); self.range.len()];
        for (i, &t) in self.phi.iter().enumerate() {
            out[t as usize].push(i as u64);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct StagePlan {
    pub stages: Vec<Stage>,
}

/// One line of the stage invariant `Σ_{A_k(t)} u < w(t) < δ_k + Σ_{A_k(t)} u`.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantRow {
    #[serde(serialize_with = "ser_nat")]
    pub node: Vec<u32>,
    pub fiber_size: usize,
    pub fiber_mass: Rational,
    pub weight: Rational,
    pub upper: Rational,
    pub holds: bool,
}

impl StagePlan {
    /// Stage 0: `φ(∅) = ∅`, `L_0 = M_0 = 0`. `δ_0` defaults to `2(w(∅) − u(∅))`.
    pub fn start(
        u: &dyn BinaryMeasure,
        w: &dyn TreeMeasure,
        delta0: Option<Rational>,
    ) -> Result<StagePlan> {
        let (ur, wr) = (u.weight(&[]), w.weight(&[]));
        if ur >= wr {
            return Err(Error::pre(
                "embed_stage",
                format!("u(∅) = {ur} must be below w(∅) = {wr}"),
            ));
        }
        let delta = delta0.unwrap_or_else(|| Rational::integer(2) * (&wr - &ur));
        if wr >= &ur + &delta {
            return Err(Error::pre(
                "embed_stage",
                format!("w(∅) = {wr} must be below u(∅) + δ_0 = {}", &ur + &delta),
            ));
        }
        Ok(StagePlan {
            stages: vec![Stage {
                l: 0,
                m: 0,
                delta,
                range: vec![Vec::new()],
                phi: vec![0],
                choices: Vec::new(),
            }],
        })
    }

    pub fn last(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn l(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.l).collect()
    }

    pub fn m(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.m).collect()
    }

    pub fn delta(&self) -> Vec<Rational> {
        self.stages.iter().map(|s| s.delta.clone()).collect()
    }

    /// `φ(s)` for any `s` of length at most `L_last`.
    pub fn phi(&self, s: &[u8]) -> Option<&[u32]> {
        let stage = self.stages.iter().rev().find(|st| st.l <= s.len())?;
        if s.len() > self.stages[self.last()].l {
            return None;
        }
        let i = word_to_index(&s[..stage.l]) as usize;
        Some(&stage.range[stage.phi[i] as usize])
    }

    pub fn invariant(
        &self,
        u: &dyn BinaryMeasure,
        w: &dyn TreeMeasure,
        k: usize,
    ) -> Vec<InvariantRow> {
        let st = &self.stages[k];
        st.fibers()
            .into_iter()
            .zip(&st.range)
            .map(|(fiber, t)| {
                let fiber_mass: Rational = fiber
                    .iter()
                    .map(|&i| u.weight(&index_to_word(i, st.l)))
                    .sum();
                let weight = w.weight(t);
                let upper = &st.delta + &fiber_mass;
                InvariantRow {
                    node: t.clone(),
                    fiber_size: fiber.len(),
                    holds: fiber_mass < weight && weight < upper,
                    fiber_mass,
                    weight,
                    upper,
                }
            })
            .collect()
    }

    /// `s₁ ⊆ s₂ ⇒ φ(s₁) ⊆ φ(s₂)` across consecutive stages.
    pub fn is_monotone(&self) -> bool {
        self.stages.windows(2).all(|p| {
            let (a, b) = (&p[0], &p[1]);
            let shift = b.l - a.l;
            b.phi.iter().enumerate().all(|(i, &t)| {
                let parent = &a.range[a.phi[i >> shift] as usize];
                b.range[t as usize].starts_with(parent)
            })
        })
    }

    /// `C_{s′⌢i}` and `C_{s″⌢j}` are disjoint for distinct children.
    pub fn choices_disjoint(&self) -> bool {
        self.stages.iter().all(|st| {
            let mut seen = std::collections::BTreeSet::new();
            st.choices
                .iter()
                .flat_map(|c| c.chosen.iter())
                .all(|t| seen.insert(t.clone()))
        })
    }
}

fn children(tree: &dyn PrunedTree, t: &[u32]) -> Result<Vec<u32>> {
    match tree.successors(t) {
        Successors::Normal(0) => Err(Error::pre(
            "embed_stage",
            format!("node {} has no successors", format_naturals(t)),
        )),
        Successors::Normal(n) => Ok((0..n).collect()),
        Successors::Explicit(v) => {
            if v.is_empty() || v.iter().enumerate().any(|(i, &x)| x != i as u32) {
                Err(Error::pre(
                    "embed_stage",
                    format!("node {} is not normal", format_naturals(t)),
                ))
            } else {
                Ok(v)
            }
        }
        Successors::AllNaturals => Err(Error::pre(
            "embed_stage",
            format!("node {} is infinitely branching", format_naturals(t)),
        )),
    }
}

type Level = Vec<Vec<(Vec<u32>, Rational)>>;

/// Least level `M > M_k` at which every descendant of the range has weight
/// `< R`, certified by exhaustive scan and capped by the modulus of `w`.
fn next_level(
    tree: &dyn PrunedTree,
    w: &dyn TreeMeasure,
    range: &[Vec<u32>],
    mk: usize,
    r: &Rational,
) -> Result<(usize, Level)> {
    let cap = match w.modulus(r) {
        Some(n) => n.max(mk + 1),
        None => MAX_TARGET_LEVEL,
    };
    let mut level: Level = range
        .iter()
        .map(|t| vec![(t.clone(), w.weight(t))])
        .collect();
    let mut m = mk;
    loop {
        let mut count = 0usize;
        let mut next = Vec::with_capacity(level.len());
        for group in &level {
            let mut out = Vec::new();
            for (t, wt) in group {
                let mut total = Rational::zero();
                for i in children(tree, t)? {
                    let mut c = t.clone();
                    c.push(i);
                    let cw = w.weight(&c);
                    total += &cw;
                    out.push((c, cw));
                }
                if &total != wt {
                    return Err(Error::pre(
                        "embed_stage",
                        format!("children of {} do not add up to w", format_naturals(t)),
                    ));
                }
            }
            count += out.len();
            next.push(out);
        }
        if count > MAX_TARGET_NODES {
            return Err(Error::ModulusExhausted(format!(
                "more than {MAX_TARGET_NODES} target nodes at level {}",
                m + 1
            )));
        }
        level = next;
        m += 1;
        if level.iter().flatten().all(|(_, x)| x < r) {
            return Ok((m, level));
        }
        if m >= cap {
            return Err(Error::ModulusExhausted(format!(
                "weights at level {m} not all below {r}"
            )));
        }
    }
}

/// Chooses `C ⊆ J` inclusion-minimal with `Σ_C w > a`: the least prefix of
/// `J`, then elements dropped in order while the sum stays above `a`.
pub fn minimal_cover(block: &[Rational], a: &Rational) -> Option<Vec<usize>> {
    let mut total = Rational::zero();
    let mut keep = Vec::new();
    for (i, x) in block.iter().enumerate() {
        if &total > a {
            break;
        }
        total += x;
        keep.push(i);
    }
    if &total <= a {
        return None;
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in keep {
        let without = &total - &block[i];
        if &without > a {
            total = without;
        } else {
            out.push(i);
        }
    }
    Some(out)
}

/// Extends `plan` by one stage.
pub fn embed_stage(
    u: &dyn BinaryMeasure,
    tree: &dyn PrunedTree,
    w: &dyn TreeMeasure,
    plan: &StagePlan,
) -> Result<StagePlan> {
    const OP: &str = "embed_stage";
    let k = plan.last();
    let cur = &plan.stages[k];
    let bad: Vec<_> = plan
        .invariant(u, w, k)
        .into_iter()
        .filter(|r| !r.holds)
        .collect();
    if let Some(row) = bad.first() {
        return Err(Error::pre(
            OP,
            format!(
                "stage {k} invariant fails at {}: {} < {} < {}",
                format_naturals(&row.node),
                row.fiber_mass,
                row.weight,
                row.upper
            ),
        ));
    }
    let lk = cur.l;
    let delta = Rational::pow2(-2 * lk as i64);
    let fibers = cur.fibers();

    let mut r = delta.clone();
    let mut groups = Vec::with_capacity(fibers.len());
    for (fiber, t) in fibers.iter().zip(&cur.range) {
        let mut words = Vec::with_capacity(2 * fiber.len());
        for &s in fiber {
            for i in 0..2u8 {
                let mut c = index_to_word(s, lk);
                c.push(i);
                words.push(c);
            }
        }
        let targets: Vec<Rational> = words.iter().map(|c| u.weight(c)).collect();
        let a: Rational = targets.iter().sum();
        let rt = (w.weight(t) - &a) / Rational::integer(words.len() as i64 - 1);
        if rt < r {
            r = rt;
        }
        groups.push((words, targets));
    }

    let (m_next, level) = next_level(tree, w, &cur.range, cur.m, &r)?;

    let mut choices = Vec::new();
    for ((words, targets), (d, t)) in groups.iter().zip(level.iter().zip(&cur.range)) {
        let weights: Vec<Rational> = d.iter().map(|(_, x)| x.clone()).collect();
        let blocks = allocate_barrels(targets, &weights)?;
        for ((word, target), block) in words.iter().zip(targets).zip(blocks) {
            let picked = minimal_cover(&weights[block.clone()], target)
                .ok_or_else(|| Error::pre(OP, "barrel block too light"))?;
            let chosen: Vec<Vec<u32>> = picked
                .iter()
                .map(|&i| d[block.start + i].0.clone())
                .collect();
            let mass: Rational = picked.iter().map(|&i| &weights[block.start + i]).sum();
            if mass >= target + &delta {
                return Err(Error::pre(
                    OP,
                    format!("C for {} overshoots by δ", format_binary(word)),
                ));
            }
            choices.push(Choice {
                word: word.clone(),
                parent: t.clone(),
                chosen,
                target: target.clone(),
                mass,
            });
        }
    }

    let r_small = choices
        .iter()
        .map(|c| (&c.mass - &c.target) / Rational::integer(c.chosen.len() as i64))
        .min()
        .ok_or_else(|| Error::pre(OP, "empty stage"))?;
    let l_mod = u
        .modulus(&r_small)
        .ok_or_else(|| Error::ModulusExhausted(format!("u has no modulus for {r_small}")))?;
    let l_next = l_mod.max(lk + 1);
    if l_next > MAX_SOURCE_LEVEL {
        return Err(Error::ModulusExhausted(format!(
            "L_{} = {l_next} exceeds {MAX_SOURCE_LEVEL}",
            k + 1
        )));
    }

    let ext = l_next - lk - 1;
    let mut assigned: Vec<(u32, u32)> = vec![(0, 0); 1 << l_next];
    let mut used = vec![Vec::new(); choices.len()];
    for (ci, c) in choices.iter().enumerate() {
        let base = word_to_index(&c.word) << ext;
        let items: Vec<Rational> = (0..1u64 << ext)
            .map(|j| {
                let wd = index_to_word(base + j, l_next);
                let x = u.weight(&wd);
                if x >= r_small {
                    Err(Error::ModulusExhausted(format!(
                        "u({}) = {x} is not below {r_small}",
                        format_binary(&wd)
                    )))
                } else {
                    Ok(x)
                }
            })
            .collect::<Result<_>>()?;
        let barrels: Vec<Rational> = c.chosen.iter().map(|t| w.weight(t)).collect();
        let parts = allocate_amphorae(&barrels, &items)?;
        used[ci] = parts.iter().map(|p| !p.is_empty()).collect::<Vec<bool>>();
        for (ti, part) in parts.into_iter().enumerate() {
            for j in part {
                assigned[(base + j as u64) as usize] = (ci as u32, ti as u32);
            }
        }
    }

    let mut nodes: Vec<(&Vec<u32>, usize, usize)> = Vec::new();
    for (ci, c) in choices.iter().enumerate() {
        for (ti, t) in c.chosen.iter().enumerate() {
            if used[ci][ti] {
                nodes.push((t, ci, ti));
            }
        }
    }
    nodes.sort();
    let mut slot: Vec<Vec<u32>> = choices.iter().map(|c| vec![0; c.chosen.len()]).collect();
    for (i, &(_, ci, ti)) in nodes.iter().enumerate() {
        slot[ci][ti] = i as u32;
    }
    let range: Vec<Vec<u32>> = nodes.iter().map(|(t, _, _)| (*t).clone()).collect();
    let phi: Vec<u32> = assigned
        .iter()
        .map(|&(ci, ti)| slot[ci as usize][ti as usize])
        .collect();

    let mut next = plan.clone();
    next.stages.push(Stage {
        l: l_next,
        m: m_next,
        delta,
        range,
        phi,
        choices,
    });
    if let Some(row) = next.invariant(u, w, k + 1).into_iter().find(|r| !r.holds) {
        return Err(Error::pre(
            OP,
            format!(
                "stage {} invariant fails at {}",
                k + 1,
                format_naturals(&row.node)
            ),
        ));
    }
    Ok(next)
}

/// Runs `embed_stage` until the plan has `stages` stages past stage 0.
pub fn embed_stages(
    u: &dyn BinaryMeasure,
    tree: &dyn PrunedTree,
    w: &dyn TreeMeasure,
    delta0: Option<Rational>,
    stages: usize,
) -> Result<StagePlan> {
    let mut plan = StagePlan::start(u, w, delta0)?;
    for _ in 0..stages {
        plan = embed_stage(u, tree, w, &plan)?;
    }
    Ok(plan)
}

/// `ν(N_s)`, `Σ_{p ∈ X(h,s)} w(p)` and the upper end `ν(N_s) + 2^{L_h+1}δ_{h+1}`.
#[derive(Debug, Clone, Serialize)]
pub struct Sandwich {
    #[serde(serialize_with = "ser_binary")]
    pub word: Vec<u8>,
    pub h: usize,
    pub lower: Rational,
    pub mass: Rational,
    pub upper: Rational,
    pub width: Rational,
    pub holds: bool,
}

/// Checks `ν(N_s) < Σ_{p ∈ X(h,s)} w(p) < ν(N_s) + 2^{L_h+1}δ_{h+1}` where
/// `|s| = L_k`, `h ≥ k`, and `X(h,s)` collects the sets `C_{s′⌢i}` with
/// `s ⊆ s′ ∈ 2^{L_h}`. Needs the plan built through stage `h + 1`.
pub fn embed_verify(
    plan: &StagePlan,
    u: &dyn BinaryMeasure,
    w: &dyn TreeMeasure,
    s: &[u8],
    h: usize,
) -> Result<Sandwich> {
    const OP: &str = "embed_verify";
    let k = plan
        .stages
        .iter()
        .position(|st| st.l == s.len())
        .ok_or_else(|| Error::pre(OP, format!("|s| = {} is not a stage length", s.len())))?;
    if h < k {
        return Err(Error::pre(OP, format!("h = {h} is below k = {k}")));
    }
    if h + 1 > plan.last() {
        return Err(Error::pre(
            OP,
            format!("plan has {} stages, need {}", plan.last(), h + 1),
        ));
    }
    let next = &plan.stages[h + 1];
    let mass: Rational = next
        .choices
        .iter()
        .filter(|c| c.word.starts_with(s))
        .flat_map(|c| c.chosen.iter())
        .map(|t| w.weight(t))
        .sum();
    let lower = u.weight(s);
    let width = Rational::pow2(plan.stages[h].l as i64 + 1) * &next.delta;
    let upper = &lower + &width;
    Ok(Sandwich {
        word: s.to_vec(),
        h,
        holds: lower < mass && mass < upper,
        lower,
        mass,
        upper,
        width,
    })
}

fn ser_binary<S: Serializer>(w: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_binary(w))
}

fn ser_nat<S: Serializer>(w: &[u32], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_naturals(w))
}

fn ser_nat_list<S: Serializer>(v: &[Vec<u32>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|w| format_naturals(w)))
}

struct PhiMap<'a>(&'a Stage);

impl Serialize for PhiMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let st = self.0;
        let mut map = s.serialize_map(Some(st.phi.len()))?;
        for (i, &t) in st.phi.iter().enumerate() {
            map.serialize_entry(
                &format_binary(&index_to_word(i as u64, st.l)),
                &format_naturals(&st.range[t as usize]),
            )?;
        }
        map.end()
    }
}

impl Serialize for StagePlan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("L", &self.l())?;
        map.serialize_entry("M", &self.m())?;
        map.serialize_entry("delta", &self.delta())?;
        let phi: Vec<PhiMap> = self.stages.iter().map(PhiMap).collect();
        map.serialize_entry("phi", &phi)?;
        let choices: Vec<&Vec<Choice>> = self.stages.iter().map(|st| &st.choices).collect();
        map.serialize_entry("choices", &choices)?;
        map.end()
    }
}
