//! Report tables and their CSV / JSON renderings.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn status(ok: bool) -> Self {
        Cell::text(if ok { "PASS" } else { "FAIL" })
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => sci(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub pass: bool,
    pub max_dev: f64,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            pass: true,
            max_dev: 0.0,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Fold a deviation into `max_dev`, ignoring non-finite values.
    pub fn dev(&mut self, d: f64) {
        if d.is_finite() {
            self.max_dev = self.max_dev.max(d);
        }
    }

    pub fn require(&mut self, ok: bool) {
        self.pass &= ok;
    }
}

/// C-style `%.12e`: `1.000000000000e+00`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&report.columns).expect("in-memory write");
    for row in &report.rows {
        w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

pub fn render_json(report: &Report, config: &BTreeMap<String, String>) -> String {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let mut m = Map::new();
            for (c, cell) in report.columns.iter().zip(row) {
                m.insert((*c).to_string(), cell.json());
            }
            Value::Object(m)
        })
        .collect();
    let doc = json!({
        "config": config,
        "rows": rows,
        "summary": {
            "pass": report.pass,
            "max_dev": Cell::Num(report.max_dev).json(),
        },
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_matches_printf() {
        assert_eq!(sci(1.0), "1.000000000000e+00");
        assert_eq!(sci(0.0), "0.000000000000e+00");
        assert_eq!(sci(-2.5e-10), "-2.500000000000e-10");
        assert_eq!(sci(6.02214076e123), "6.022140760000e+123");
        assert_eq!(sci(f64::NAN), "nan");
    }

    #[test]
    fn csv_has_one_header_row() {
        let mut r = Report::new(vec!["a", "b"]);
        r.push(vec![Cell::Num(1.0), Cell::text("x,y")]);
        assert_eq!(render_csv(&r), "a,b\n1.000000000000e+00,\"x,y\"\n");
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new(vec!["v"]);
        r.push(vec![Cell::Num(f64::NAN)]);
        r.dev(0.5);
        let cfg = BTreeMap::from([("tol".to_string(), "1e-8".to_string())]);
        let v: Value = serde_json::from_str(&render_json(&r, &cfg)).unwrap();
        assert_eq!(v["config"]["tol"], "1e-8");
        assert_eq!(v["rows"][0]["v"], Value::Null);
        assert_eq!(v["summary"]["pass"], true);
        assert_eq!(v["summary"]["max_dev"], 0.5);
    }
}
