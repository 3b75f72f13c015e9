//! A closed set that is thick and co-thick in every basic cylinder.

use std::sync::Arc;

use density_core::word::length_lex_unrank;
use density_core::{BinaryMeasure, Error, Rational, Result};
use serde::Serialize;

use crate::approx::ApproxSet;
use crate::cylinder::CylinderSet;
use crate::thin::{compact_thin, ThinCompact};

/// Largest supported number of stages.
pub const MAX_SIGMA_STAGES: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct SigmaComponent {
    pub n: u64,
    pub target: String,
    pub chosen: String,
    pub home: String,
    pub eps: Rational,
}

/// `F = ⋃_n C_n` for every cylinder `U_n` with `|U_n| ≤ stages`.
pub struct ThickCothick {
    pub stages: usize,
    pub components: Vec<SigmaComponent>,
    compacts: Vec<Arc<ThinCompact>>,
}

impl ThickCothick {
    pub fn approx(&self) -> ApproxSet {
        ApproxSet::disjoint_union(
            self.compacts
                .iter()
                .map(|c| ApproxSet::from_arc(c.clone()))
                .collect(),
        )
    }

    pub fn compacts(&self) -> &[Arc<ThinCompact>] {
        &self.compacts
    }

    /// `Σ_n w(home_n)`, an upper bound for `μ(F)`.
    pub fn mass_upper_bound(&self, w: &dyn BinaryMeasure) -> Rational {
        self.compacts.iter().map(|c| w.weight(c.home())).sum()
    }
}

/// For each `U_n` in length-lex order, picks the first cylinder inside `U_n`
/// certified disjoint from the earlier compacts (at stage `|U_n|`), pads it
/// with zeros until its weight is at most `2^{-n-2}·min_{m≤n} w(Ũ_m)` and
/// places a thin compact there with `ε` half that weight.
pub fn thick_cothick_sigma(w: Arc<dyn BinaryMeasure>, stages: usize) -> Result<ThickCothick> {
    if stages > MAX_SIGMA_STAGES {
        return Err(Error::pre(
            "thick_cothick_sigma",
            format!("at most {MAX_SIGMA_STAGES} stages supported"),
        ));
    }
    let count = (1u64 << (stages + 1)) - 1;
    let mut covered = vec![CylinderSet::empty(); stages + 1];
    let mut compacts: Vec<Arc<ThinCompact>> = Vec::new();
    let mut components = Vec::new();
    let mut min_w: Option<Rational> = None;
    for n in 0..count {
        let u = length_lex_unrank(n);
        let free = CylinderSet::cylinder(&u).difference(&covered[u.len()]);
        let chosen = free.generators().into_iter().next().ok_or_else(|| {
            Error::Inconclusive(format!(
                "no certified free cylinder below {}",
                density_core::word::format_binary(&u)
            ))
        })?;
        let wc = w.weight(&chosen);
        let m = match min_w {
            Some(m) if m <= wc => m,
            _ => wc,
        };
        min_w = Some(m.clone());
        let target = m * Rational::pow2(-(n as i64) - 2);
        let mut home = chosen.clone();
        loop {
            home.push(0);
            if w.weight(&home) <= target {
                break;
            }
            if home.len() > density_core::word::MAX_WORD_LEN {
                return Err(Error::ModulusExhausted(
                    "home cylinder too long".to_string(),
                ));
            }
        }
        let eps = w.weight(&home) / Rational::integer(2);
        let c = Arc::new(compact_thin(&home, eps.clone(), w.clone())?);
        for (d, cov) in covered.iter_mut().enumerate() {
            *cov = cov.union(&crate::approx::Approximation::stage(c.as_ref(), d)?);
        }
        components.push(SigmaComponent {
            n,
            target: density_core::word::format_binary(&u),
            chosen: density_core::word::format_binary(&chosen),
            home: density_core::word::format_binary(&home),
            eps,
        });
        compacts.push(c);
    }
    Ok(ThickCothick {
        stages,
        components,
        compacts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use density_core::CantorMeasure;

    #[test]
    fn first_components() {
        let f = thick_cothick_sigma(Arc::new(CantorMeasure), 1).unwrap();
        assert_eq!(f.components.len(), 3);
        assert_eq!(f.components[0].home, "00");
        assert_eq!(f.components[1].chosen, "01");
        assert_eq!(f.components[1].home, "01000");
        assert!(f.mass_upper_bound(&CantorMeasure) <= Rational::new(1, 2));
    }
}
