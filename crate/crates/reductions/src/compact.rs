//! A reduction of `P₃` to the compact measure classes.
//!
//! Row `j` owns the cylinder `N_{h_j}` with `h_j = 0^{j+1}⌢1`. Column `n`
//! adds a thin compact set of measure at most `2^{−(n+2)}·μ(N_s)` inside
//! the first extension `s` of `h_j` that misses everything built so far,
//! where `j` is the least row with `z(j, n) = 1`.

use std::sync::Arc;

use density_cantor::{
    compact_thin, thickness_certificate, ApproxSet, CylinderSet, ThicknessCertificate, ThinCompact,
};
use density_core::word::{format_binary, is_prefix, length_lex_unrank};
use density_core::{BinaryMeasure, CantorMeasure, Error, Rational, Result};
use serde::Serialize;

use crate::matrix::{p3_membership, MatrixCode};

/// Candidates `s^j_m` tried per column before giving up.
pub const MAX_CANDIDATES: u64 = 1 << 16;

/// Largest number of columns built.
pub const MAX_COLUMNS: usize = 256;

pub fn row_home(j: usize) -> Vec<u8> {
    let mut h = vec![0; j + 1];
    h.push(1);
    h
}

#[derive(Clone, Serialize)]
pub struct CompactStep {
    pub column: usize,
    pub row: usize,
    /// Position `k` of the chosen node in the enumeration of `h_j`'s extensions.
    pub k: u64,
    #[serde(serialize_with = "ser_word")]
    pub node: Vec<u8>,
    #[serde(serialize_with = "ser_word")]
    pub home: Vec<u8>,
    /// `μ(N_home)`, an upper bound for the added measure.
    pub increment_bound: Rational,
    #[serde(skip)]
    compact: Arc<ThinCompact>,
}

fn ser_word<S: serde::Serializer>(w: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_binary(w))
}

impl std::fmt::Debug for CompactStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompactStep")
            .field("column", &self.column)
            .field("row", &self.row)
            .field("k", &self.k)
            .field("home", &format_binary(&self.home))
            .finish()
    }
}

impl CompactStep {
    pub fn compact(&self) -> &Arc<ThinCompact> {
        &self.compact
    }
}

/// `φ(z ↾ n × n)` for `n ≤ columns`.
#[derive(Debug, Clone)]
pub struct CompactReduction {
    pub columns: usize,
    pub steps: Vec<CompactStep>,
    pub in_p3: bool,
}

fn certainly_null(s: &[u8], steps: &[CompactStep]) -> Result<bool> {
    for st in steps {
        if is_prefix(s, &st.home) {
            return Ok(false);
        }
        if is_prefix(&st.home, s) && !st.compact.certainly_disjoint(s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the steps for columns `0..columns`.
pub fn compactness_reduction(z: &MatrixCode, columns: usize) -> Result<CompactReduction> {
    if columns > MAX_COLUMNS {
        return Err(Error::pre(
            "compactness_reduction",
            format!("at most {MAX_COLUMNS} columns supported"),
        ));
    }
    let w: Arc<dyn BinaryMeasure> = Arc::new(CantorMeasure);
    let mut steps: Vec<CompactStep> = Vec::new();
    for n in 0..columns {
        let Some(j) = (0..=n).find(|&j| z.get(j, n) == 1) else {
            continue;
        };
        let h = row_home(j);
        let mut found = None;
        for m in 0..MAX_CANDIDATES {
            let mut s = h.clone();
            s.extend(length_lex_unrank(m));
            if certainly_null(&s, &steps)? {
                found = Some((m, s));
                break;
            }
        }
        let (k, node) = found.ok_or_else(|| {
            Error::Inconclusive(format!(
                "no certified null cylinder below {}",
                format_binary(&h)
            ))
        })?;
        let mut home = node.clone();
        home.extend(std::iter::repeat_n(0u8, n + 2));
        let wh = w.weight(&home);
        let compact = Arc::new(compact_thin(&home, &wh / Rational::integer(2), w.clone())?);
        steps.push(CompactStep {
            column: n,
            row: j,
            k,
            node,
            home,
            increment_bound: wh,
            compact,
        });
    }
    Ok(CompactReduction {
        columns,
        steps,
        in_p3: p3_membership(z),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Stabilization {
    pub row: usize,
    #[serde(serialize_with = "ser_word")]
    pub home: Vec<u8>,
    /// From this column on row `j` is zero, so nothing more is added inside
    /// `N_home`.
    pub settles_at: usize,
    pub pieces: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompactCertificate {
    Stabilization {
        rows: Vec<Stabilization>,
    },
    Thickness {
        row: usize,
        #[serde(serialize_with = "ser_word")]
        home: Vec<u8>,
        certificate: ThicknessCertificate,
    },
}

impl CompactReduction {
    /// Steps making up `φ(z ↾ n × n)`.
    pub fn steps_before(&self, n: usize) -> &[CompactStep] {
        let end = self.steps.partition_point(|s| s.column < n);
        &self.steps[..end]
    }

    /// `φ(z ↾ n × n)` as an approximated set.
    pub fn phi(&self, n: usize) -> ApproxSet {
        let mut parts = vec![point_zero()];
        parts.extend(
            self.steps_before(n)
                .iter()
                .map(|s| ApproxSet::from_arc(s.compact.clone())),
        );
        ApproxSet::disjoint_union(parts)
    }

    /// `f(z)`, with the unbuilt columns counted as pending mass
    /// `Σ_{n ≥ columns} 2^{−(n+2)}`.
    pub fn f(&self) -> ApproxSet {
        let mut parts = vec![point_zero()];
        parts.extend(
            self.steps
                .iter()
                .map(|s| ApproxSet::from_arc(s.compact.clone())),
        );
        let pending = Rational::pow2(-(self.columns as i64) - 1);
        ApproxSet::disjoint_union_with_pending(parts, move |_| pending.clone())
    }

    /// Clopen approximation of `φ(z ↾ n × n)` at `depth`.
    pub fn phi_stage(&self, n: usize, depth: usize) -> Result<CylinderSet> {
        self.phi(n).stage(depth)
    }

    /// Upper bound for `μ(φ(z ↾ (n+1) × (n+1)) ∖ φ(z ↾ n × n))`.
    pub fn increment_bound(&self, n: usize) -> Rational {
        self.steps
            .iter()
            .filter(|s| s.column == n)
            .map(|s| s.increment_bound.clone())
            .sum()
    }

    /// Upper bound for `μ(f(z) ∖ φ(z ↾ n × n))` over the built columns.
    pub fn mass_after(&self, n: usize) -> Rational {
        self.steps[self.steps_before(n).len()..]
            .iter()
            .map(|s| s.increment_bound.clone())
            .sum()
    }

    /// Stabilization of every row home when `z ∈ P₃`, otherwise the thickness
    /// certificate of `f(z)` inside the home of the least infinite row.
    pub fn certificate(&self, z: &MatrixCode, depth: usize) -> Result<CompactCertificate> {
        match z.least_infinite_row() {
            None => {
                let top = self.steps.iter().map(|s| s.row + 1).max().unwrap_or(0);
                let rows = (0..top.max(z.size()))
                    .map(|j| {
                        let mine: Vec<_> = self.steps.iter().filter(|s| s.row == j).collect();
                        Stabilization {
                            row: j,
                            home: row_home(j),
                            settles_at: z.row_settles_at(j).unwrap_or(0),
                            pieces: mine.len(),
                        }
                    })
                    .collect();
                Ok(CompactCertificate::Stabilization { rows })
            }
            Some(j) => {
                let home = row_home(j);
                let certificate = thickness_certificate(
                    &self.f(),
                    &CylinderSet::cylinder(&home),
                    depth,
                    &CantorMeasure,
                )?;
                Ok(CompactCertificate::Thickness {
                    row: j,
                    home,
                    certificate,
                })
            }
        }
    }
}

/// `{0^ω}`, approximated from above by `N_{0^d}`.
fn point_zero() -> ApproxSet {
    ApproxSet::from_fns(
        density_cantor::Mode::Decreasing,
        |d| CylinderSet::cylinder(&vec![0; d]),
        |d| Rational::pow2(-(d as i64)),
    )
}
