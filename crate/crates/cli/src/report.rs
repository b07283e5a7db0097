//! Tables of exact values. Every rational column is followed by an advisory
//! decimal column, and every row names the operation that produced it.

use std::fmt::Write as _;

use harbourne::field::{render_decimal, render_rational, Rational};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

pub const DECIMAL_DIGITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Int(BigInt),
    Rat(Rational),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rat(r)
    }
}

impl From<BigInt> for Cell {
    fn from(n: BigInt) -> Self {
        Cell::Int(n)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(n: $t) -> Self {
                Cell::Int(BigInt::from(n))
            }
        }
    )*};
}
int_cell!(i64, u64, u32, usize);

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Rat(r) => render_rational(r),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => match i64::try_from(n) {
                Ok(v) => json!(v),
                Err(_) => json!(n.to_string()),
            },
            Cell::Bool(b) => json!(b),
            c => json!(c.text()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    columns: Vec<String>,
    rows: Vec<(Vec<Cell>, String)>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// Append a row; `provenance` names the generating operation.
    pub fn push(&mut self, cells: Vec<Cell>, provenance: impl Into<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width in table {}", self.title);
        self.rows.push((cells, provenance.into()));
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cell]> {
        self.rows.iter().map(|(c, _)| c.as_slice())
    }

    /// Look up a cell by row index and column name.
    pub fn get(&self, row: usize, column: &str) -> Option<&Cell> {
        let i = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row).map(|(r, _)| &r[i])
    }

    fn rational_columns(&self) -> Vec<bool> {
        (0..self.columns.len()).map(|i| self.rows.iter().any(|(r, _)| matches!(r[i], Cell::Rat(_)))).collect()
    }

    /// Rendered header and body, with the decimal and provenance columns
    /// spliced in.
    fn layout(&self) -> (Vec<String>, Vec<Vec<Cell>>) {
        let rat = self.rational_columns();
        let mut header = Vec::new();
        for (c, &r) in self.columns.iter().zip(&rat) {
            header.push(c.clone());
            if r {
                header.push(format!("{c}_decimal"));
            }
        }
        header.push("provenance".into());
        let body = self
            .rows
            .iter()
            .map(|(cells, prov)| {
                let mut out = Vec::new();
                for (c, &r) in cells.iter().zip(&rat) {
                    out.push(c.clone());
                    if r {
                        out.push(match c {
                            Cell::Rat(q) => Cell::Text(render_decimal(q, DECIMAL_DIGITS)),
                            _ => Cell::Text(String::new()),
                        });
                    }
                }
                out.push(Cell::Text(prov.clone()));
                out
            })
            .collect();
        (header, body)
    }

    fn to_json(&self) -> Value {
        let (header, body) = self.layout();
        let mut m = Map::new();
        m.insert("title".into(), json!(self.title));
        m.insert("columns".into(), json!(header));
        m.insert("rows".into(), Value::Array(body.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect()));
        Value::Object(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub tables: Vec<Table>,
}

impl Report {
    pub fn single(t: Table) -> Self {
        Report { tables: vec![t] }
    }

    pub fn table(&self, title: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.title == title)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = json!({ "tables": self.tables.iter().map(Table::to_json).collect::<Vec<_>>() });
                let mut s = serde_json::to_string_pretty(&v).expect("tables serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "# {}", t.title);
                    let (header, body) = t.layout();
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(&header).expect("in-memory write");
                    for r in &body {
                        w.write_record(r.iter().map(Cell::text)).expect("in-memory write");
                    }
                    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
                }
                out
            }
            Format::Md => {
                let mut out = String::new();
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    let (header, body) = t.layout();
                    let _ = writeln!(out, "### {}\n", t.title);
                    let _ = writeln!(out, "| {} |", header.join(" | "));
                    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
                    for r in &body {
                        let cells: Vec<_> = r.iter().map(|c| c.text().replace('|', "\\|")).collect();
                        let _ = writeln!(out, "| {} |", cells.join(" | "));
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use harbourne::field::q;

    fn sample() -> Report {
        let mut t = Table::new("h", &["k", "h", "ok"]);
        t.push(vec![2u32.into(), q(-12, 7).into(), true.into()], "fermat");
        Report::single(t)
    }

    #[test]
    fn decimal_and_provenance_columns() {
        let md = sample().render(Format::Md);
        assert!(md.contains("| k | h | h_decimal | ok | provenance |"));
        assert!(md.contains("| 2 | -12/7 | -1.714285714 | true | fermat |"));
        let csv = sample().render(Format::Csv);
        assert_eq!(csv, "# h\nk,h,h_decimal,ok,provenance\n2,-12/7,-1.714285714,true,fermat\n");
    }

    #[test]
    fn json_shape() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        let t = &v["tables"][0];
        assert_eq!(t["columns"], json!(["k", "h", "h_decimal", "ok", "provenance"]));
        assert_eq!(t["rows"][0], json!([2, "-12/7", "-1.714285714", true, "fermat"]));
    }
}
