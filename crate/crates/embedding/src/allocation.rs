//! Pouring amphorae into barrels.

use density_core::{Error, Rational, Result};

fn sum(v: &[Rational]) -> Rational {
    v.iter().sum()
}

fn check_positive(op: &'static str, name: &str, v: &[Rational]) -> Result<()> {
    match v.iter().position(|x| !x.is_positive()) {
        Some(i) => Err(Error::pre(
            op,
            format!("{name}[{}] = {} is not positive", i + 1, v[i]),
        )),
        None => Ok(()),
    }
}

/// The bound `(Σb − Σa)/n` under which every amphora fits.
pub fn amphora_bound(b: &[Rational], a: &[Rational]) -> Rational {
    (sum(b) - sum(a)) / Rational::integer(b.len() as i64)
}

/// Splits the amphorae `a` among the barrels `b` so that barrel `k` receives
/// strictly less than `b_k`. Each `I_k` is built greedily in input order from
/// the items left over by the earlier barrels. Indices are 0-based.
pub fn allocate_amphorae(b: &[Rational], a: &[Rational]) -> Result<Vec<Vec<usize>>> {
    const OP: &str = "allocate_amphorae";
    if b.is_empty() {
        return Err(Error::pre(OP, "no barrels"));
    }
    check_positive(OP, "b", b)?;
    check_positive(OP, "a", a)?;
    let (sb, sa) = (sum(b), sum(a));
    if sa >= sb {
        return Err(Error::pre(OP, format!("Σa = {sa} is not below Σb = {sb}")));
    }
    let r = amphora_bound(b, a);
    if let Some(i) = a.iter().position(|x| x > &r) {
        return Err(Error::pre(
            OP,
            format!("a[{}] = {} exceeds (Σb − Σa)/n = {r}", i + 1, a[i]),
        ));
    }
    let least = a.iter().min().cloned();
    let mut placed = vec![false; a.len()];
    let mut out = Vec::with_capacity(b.len());
    for cap in b {
        let mut got = Vec::new();
        let mut total = Rational::zero();
        for (i, x) in a.iter().enumerate() {
            if placed[i] {
                continue;
            }
            if let Some(m) = &least {
                if &(cap - &total) <= m {
                    break;
                }
            }
            let next = &total + x;
            if &next < cap {
                total = next;
                placed[i] = true;
                got.push(i);
            }
        }
        out.push(got);
    }
    if let Some(i) = placed.iter().position(|p| !p) {
        return Err(Error::pre(OP, format!("amphora {} left over", i + 1)));
    }
    Ok(out)
}

/// The bound `(ΣB − ΣA)/(N − 1)` for `N ≥ 2`.
pub fn barrel_bound(big_a: &[Rational], big_b: &[Rational]) -> Option<Rational> {
    (big_a.len() >= 2)
        .then(|| (sum(big_b) - sum(big_a)) / Rational::integer(big_a.len() as i64 - 1))
}

/// Cuts `B` into consecutive blocks `J_1, …, J_N` with `A_k < Σ_{J_k} B`.
/// Every block but the last is the shortest one that works. Returned as
/// 0-based half-open ranges. For `N ≥ 2` every `B_j` must be strictly below
/// `(ΣB − ΣA)/(N − 1)`: at equality `A = (7/8, 9/4)`, `B = (7/8, 9/8, 9/8, 9/8)`
/// admits no cut at all.
pub fn allocate_barrels(
    big_a: &[Rational],
    big_b: &[Rational],
) -> Result<Vec<std::ops::Range<usize>>> {
    const OP: &str = "allocate_barrels";
    if big_a.is_empty() {
        return Err(Error::pre(OP, "N must be at least 1"));
    }
    check_positive(OP, "A", big_a)?;
    check_positive(OP, "B", big_b)?;
    let (sa, sb) = (sum(big_a), sum(big_b));
    if sa >= sb {
        return Err(Error::pre(OP, format!("ΣA = {sa} is not below ΣB = {sb}")));
    }
    if let Some(r) = barrel_bound(big_a, big_b) {
        if let Some(j) = big_b.iter().position(|x| x >= &r) {
            return Err(Error::pre(
                OP,
                format!(
                    "B[{}] = {} is not below (ΣB − ΣA)/(N − 1) = {r}",
                    j + 1,
                    big_b[j]
                ),
            ));
        }
    }
    let n = big_a.len();
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for (k, target) in big_a.iter().enumerate() {
        if k + 1 == n {
            let rest = sum(&big_b[start..]);
            if start >= big_b.len() || &rest <= target {
                return Err(Error::pre(OP, format!("last block cannot exceed A[{n}]")));
            }
            out.push(start..big_b.len());
            break;
        }
        let mut total = Rational::zero();
        let mut end = start;
        while end < big_b.len() && &total <= target {
            total += &big_b[end];
            end += 1;
        }
        if &total <= target || end == big_b.len() {
            return Err(Error::pre(
                OP,
                format!("scan broke down at block {}", k + 1),
            ));
        }
        out.push(start..end);
        start = end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn six_quarters_into_two_barrels() {
        let b = vec![q(1, 1); 2];
        let a = vec![q(1, 4); 6];
        assert_eq!(amphora_bound(&b, &a), q(1, 4));
        assert_eq!(
            allocate_amphorae(&b, &a).unwrap(),
            vec![vec![0, 1, 2], vec![3, 4, 5]]
        );
    }

    #[test]
    fn single_barrel_takes_all() {
        let a = vec![q(1, 8), q(1, 4), q(1, 8)];
        assert_eq!(
            allocate_amphorae(&[q(1, 1)], &a).unwrap(),
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn amphora_too_large() {
        let err = allocate_amphorae(&[q(1, 1), q(1, 1)], &[q(1, 2), q(1, 1)]).unwrap_err();
        assert_eq!(err.kind(), "precondition");
    }

    #[test]
    fn barrels_half_example() {
        let a = vec![q(1, 2); 2];
        let b = vec![q(1, 2); 4];
        assert_eq!(barrel_bound(&a, &b), Some(q(1, 1)));
        assert!(b.iter().all(|x| x < &q(1, 1)));
        assert_eq!(allocate_barrels(&a, &b).unwrap(), vec![0..2, 2..4]);
    }

    #[test]
    fn single_block() {
        let b = vec![q(3, 1), q(1, 2)];
        assert_eq!(allocate_barrels(&[q(1, 1)], &b).unwrap(), vec![0..2]);
    }

    #[test]
    fn barrels_reject_oversized() {
        let a = vec![q(1, 2); 2];
        let b = vec![q(2, 1), q(1, 2)];
        assert!(allocate_barrels(&a, &b).is_err());
        assert!(allocate_barrels(&a, &[q(1, 2)]).is_err());
    }
}
