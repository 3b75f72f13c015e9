//! JSON and CSV rendering of command results.

use density_core::Rational;
use serde::Serialize;
use serde_json::Value;

/// Significant digits of the approximate decimal columns.
pub const DECIMAL_DIGITS: usize = 20;

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(i64),
    Exact(Rational),
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Exact(r)
    }
}

impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Exact(r.clone())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "pass" } else { "fail" }.to_string())
    }
}

/// Rows of cells. Exact columns are written as `p/q` followed by a column
/// `<name>_approx` with an approximate decimal.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let exact: Vec<bool> = (0..self.header.len())
            .map(|i| self.rows.iter().any(|r| matches!(r[i], Cell::Exact(_))))
            .collect();
        let mut head = Vec::new();
        for (h, e) in self.header.iter().zip(&exact) {
            head.push(h.clone());
            if *e {
                head.push(format!("{h}_approx"));
            }
        }
        let mut out = head.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut fields = Vec::new();
            for (c, e) in row.iter().zip(&exact) {
                match c {
                    Cell::Exact(r) => {
                        fields.push(r.to_string());
                        fields.push(r.to_decimal(DECIMAL_DIGITS));
                    }
                    Cell::Text(s) => {
                        fields.push(escape(s));
                        if *e {
                            fields.push(String::new());
                        }
                    }
                    Cell::Int(n) => {
                        fields.push(n.to_string());
                        if *e {
                            fields.push(String::new());
                        }
                    }
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut m = serde_json::Map::new();
                for (h, c) in self.header.iter().zip(row) {
                    let v = match c {
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Int(n) => Value::from(*n),
                        Cell::Exact(r) => Value::String(r.to_string()),
                    };
                    m.insert(h.clone(), v);
                }
                Value::Object(m)
            })
            .collect();
        Value::Array(rows)
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// What a command produced: always a JSON document, sometimes a table.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
}

impl Report {
    pub fn json<T: Serialize>(v: &T) -> Self {
        Report {
            json: serde_json::to_value(v).expect("serializable"),
            table: None,
        }
    }

    pub fn with_table<T: Serialize>(v: &T, table: Table) -> Self {
        Report {
            json: serde_json::to_value(v).expect("serializable"),
            table: Some(table),
        }
    }

    pub fn table(table: Table) -> Self {
        Report {
            json: table.to_json(),
            table: Some(table),
        }
    }
}
