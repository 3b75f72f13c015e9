//! Finitely coded points of `2^{ω×ω}`.

use std::fmt;
use std::str::FromStr;

use density_core::{Error, Result};
use serde::Serialize;

/// Largest accepted matrix side and period.
pub const MAX_CODE_SIZE: usize = 1024;

/// How entries outside the `n × n` matrix are filled in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    Zero,
    /// Row `j` is all ones outside the matrix, every other entry is zero.
    RowOnes(usize),
    /// `z(i, k) = pattern[i][k mod p]` for rows listed in the pattern, zero below.
    Periodic(Vec<Vec<u8>>),
}

/// A point `z ∈ 2^{ω×ω}` given by its top-left `n × n` corner and a tail rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixCode {
    rows: Vec<Vec<u8>>,
    tail: TailRule,
}

fn check_bits(op: &'static str, rows: &[Vec<u8>]) -> Result<()> {
    if rows.iter().flatten().any(|&b| b > 1) {
        return Err(Error::pre(op, "entries must be 0 or 1"));
    }
    Ok(())
}

impl MatrixCode {
    pub fn new(rows: Vec<Vec<u8>>, tail: TailRule) -> Result<Self> {
        const OP: &str = "MatrixCode::new";
        let n = rows.len();
        if n > MAX_CODE_SIZE {
            return Err(Error::pre(
                OP,
                format!("matrix side {n} exceeds {MAX_CODE_SIZE}"),
            ));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::pre(
                OP,
                format!("row {i} has length {}, expected {n}", rows[i].len()),
            ));
        }
        check_bits(OP, &rows)?;
        if let TailRule::Periodic(p) = &tail {
            let len = p.first().map_or(0, |r| r.len());
            if p.is_empty() || len == 0 || p.iter().any(|r| r.len() != len) {
                return Err(Error::pre(OP, "periodic rows must share a positive length"));
            }
            if p.len() > MAX_CODE_SIZE || len > MAX_CODE_SIZE {
                return Err(Error::pre(OP, "periodic pattern too large"));
            }
            check_bits(OP, p)?;
        }
        Ok(MatrixCode { rows, tail })
    }

    pub fn all_zero(n: usize) -> Self {
        MatrixCode {
            rows: vec![vec![0; n]; n],
            tail: TailRule::Zero,
        }
    }

    /// Row `j` all ones, everything else zero.
    pub fn row_ones(j: usize, n: usize) -> Self {
        let rows = (0..n).map(|i| vec![u8::from(i == j); n]).collect();
        MatrixCode {
            rows,
            tail: TailRule::RowOnes(j),
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn tail(&self) -> &TailRule {
        &self.tail
    }

    pub fn get(&self, i: usize, k: usize) -> u8 {
        let n = self.rows.len();
        if i < n && k < n {
            return self.rows[i][k];
        }
        match &self.tail {
            TailRule::Zero => 0,
            TailRule::RowOnes(j) => u8::from(i == *j),
            TailRule::Periodic(p) => p.get(i).map_or(0, |row| row[k % row.len()]),
        }
    }

    /// `z ↾ n × n`.
    pub fn restrict(&self, n: usize) -> Vec<Vec<u8>> {
        (0..n)
            .map(|i| (0..n).map(|k| self.get(i, k)).collect())
            .collect()
    }

    /// Whether row `i` has only finitely many ones.
    pub fn row_eventually_zero(&self, i: usize) -> bool {
        match &self.tail {
            TailRule::Zero => true,
            TailRule::RowOnes(j) => i != *j,
            TailRule::Periodic(p) => p.get(i).is_none_or(|row| row.iter().all(|&b| b == 0)),
        }
    }

    /// Least row with infinitely many ones.
    pub fn least_infinite_row(&self) -> Option<usize> {
        match &self.tail {
            TailRule::Zero => None,
            TailRule::RowOnes(j) => Some(*j),
            TailRule::Periodic(p) => p.iter().position(|row| row.contains(&1)),
        }
    }

    /// `1 +` the last column holding a one in row `i`, for rows that are
    /// eventually zero.
    pub fn row_settles_at(&self, i: usize) -> Option<usize> {
        if !self.row_eventually_zero(i) {
            return None;
        }
        let n = self.rows.len();
        let last = if i < n {
            self.rows[i]
                .iter()
                .rposition(|&b| b == 1)
                .map_or(0, |k| k + 1)
        } else {
            0
        };
        Some(last)
    }

    /// Text form: a `tail=` line followed by the matrix rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("tail={}\n", self.tail);
        for row in &self.rows {
            s.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    /// Accepts `allzero:N`, `rowones:J:N`, or the text form.
    pub fn parse_arg(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("allzero:") {
            return Ok(Self::all_zero(parse_size(rest)?));
        }
        if let Some(rest) = t.strip_prefix("rowones:") {
            let (j, n) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse("expected rowones:J:N".into()))?;
            let (j, n) = (parse_size(j)?, parse_size(n)?);
            return Ok(Self::row_ones(j, n));
        }
        t.parse()
    }
}

fn parse_size(s: &str) -> Result<usize> {
    let n: usize = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad size {s:?}")))?;
    if n > MAX_CODE_SIZE {
        return Err(Error::Parse(format!("size {n} exceeds {MAX_CODE_SIZE}")));
    }
    Ok(n)
}

fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("bad matrix character {c:?}"))),
        })
        .collect()
}

impl fmt::Display for TailRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailRule::Zero => write!(f, "zero"),
            TailRule::RowOnes(j) => write!(f, "row-ones:{j}"),
            TailRule::Periodic(p) => {
                write!(f, "periodic:")?;
                for (i, row) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    for b in row {
                        write!(f, "{b}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for TailRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" {
            return Ok(TailRule::Zero);
        }
        if let Some(j) = s.strip_prefix("row-ones:") {
            return Ok(TailRule::RowOnes(parse_size(j)?));
        }
        if let Some(p) = s.strip_prefix("periodic:") {
            let rows = p
                .split(';')
                .map(|r| parse_bits(r.trim()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(TailRule::Periodic(rows));
        }
        Err(Error::Parse(format!("unknown tail rule {s:?}")))
    }
}

impl FromStr for MatrixCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix code".into()))?;
        let rule = head
            .strip_prefix("tail=")
            .ok_or_else(|| Error::Parse("first line must be tail=RULE".into()))?;
        let tail: TailRule = rule.parse()?;
        let mut rows = Vec::new();
        for l in lines {
            if rows.len() >= MAX_CODE_SIZE {
                return Err(Error::Parse("too many matrix rows".into()));
            }
            rows.push(parse_bits(l)?);
        }
        MatrixCode::new(rows, tail).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Whether every row of `z` is eventually zero.
pub fn p3_membership(z: &MatrixCode) -> bool {
    z.least_infinite_row().is_none()
}

/// Least `j` with `a(j, n − 1) = 1`, else `n`.
pub fn gamma(a: &[Vec<u8>]) -> usize {
    let n = a.len();
    if n == 0 {
        return 0;
    }
    (0..n).find(|&j| a[j][n - 1] == 1).unwrap_or(n)
}

/// `z′(2i, 2k) = z′(2i + 1, 2k + 1) = z(i, k)`, other entries zero.
pub fn doubling_transform(z: &MatrixCode) -> MatrixCode {
    let n = z.size();
    let rows = (0..2 * n)
        .map(|a| {
            (0..2 * n)
                .map(|b| {
                    if a % 2 == b % 2 {
                        z.get(a / 2, b / 2)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let tail = match z.tail() {
        TailRule::Zero => TailRule::Zero,
        TailRule::RowOnes(j) => {
            let mut p = vec![vec![0, 0]; 2 * j + 2];
            p[2 * j] = vec![1, 0];
            p[2 * j + 1] = vec![0, 1];
            TailRule::Periodic(p)
        }
        TailRule::Periodic(p) => {
            let len = p[0].len();
            let mut q = Vec::with_capacity(2 * p.len());
            for row in p {
                let even = (0..2 * len)
                    .map(|c| if c % 2 == 0 { row[c / 2] } else { 0 })
                    .collect();
                let odd = (0..2 * len)
                    .map(|c| if c % 2 == 1 { row[c / 2] } else { 0 })
                    .collect();
                q.push(even);
                q.push(odd);
            }
            TailRule::Periodic(q)
        }
    };
    MatrixCode { rows, tail }
}
