//! Structured analysis reports with stable key paths.
//!
//! A report is an ordered list of `path = value` entries. The text form
//! prints one entry per line; the JSON form nests the dotted paths into
//! objects with identical content. Judged quantities always sit next to a
//! sibling `*_tolerance` entry recording the threshold they were compared
//! against.

use serde_json::{json, Map, Value as Json};

use crate::linalg::C64;

pub const REPORT_VERSION: u32 = 1;

/// One report value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    RealList(Vec<f64>),
    IntList(Vec<i64>),
    ComplexList(Vec<C64>),
    StrList(Vec<String>),
}

impl Value {
    fn to_text(&self) -> String {
        fn join<T, F: Fn(&T) -> String>(items: &[T], f: F) -> String {
            let cells: Vec<String> = items.iter().map(f).collect();
            format!("[{}]", cells.join(", "))
        }
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Real(x) => format!("{x}"),
            Value::Str(s) => s.clone(),
            Value::RealList(v) => join(v, |x| format!("{x}")),
            Value::IntList(v) => join(v, |x| x.to_string()),
            Value::ComplexList(v) => join(v, |z| format!("{}{:+}i", z.re, z.im)),
            Value::StrList(v) => join(v, |s| s.clone()),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Bool(b) => json!(b),
            Value::Int(i) => json!(i),
            Value::Real(x) => json!(x),
            Value::Str(s) => json!(s),
            Value::RealList(v) => json!(v),
            Value::IntList(v) => json!(v),
            Value::ComplexList(v) => {
                Json::Array(v.iter().map(|z| json!({"re": z.re, "im": z.im})).collect())
            }
            Value::StrList(v) => json!(v),
        }
    }
}

/// Ordered report tree, addressed by dotted paths.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub items: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Report {
        let mut r = Report::default();
        r.push_int("report.version", REPORT_VERSION as i64);
        r
    }

    pub fn push(&mut self, path: &str, value: Value) {
        self.items.push((path.to_string(), value));
    }

    pub fn push_bool(&mut self, path: &str, v: bool) {
        self.push(path, Value::Bool(v));
    }

    pub fn push_int(&mut self, path: &str, v: i64) {
        self.push(path, Value::Int(v));
    }

    pub fn push_real(&mut self, path: &str, v: f64) {
        self.push(path, Value::Real(v));
    }

    pub fn push_str(&mut self, path: &str, v: &str) {
        self.push(path, Value::Str(v.to_string()));
    }

    /// A judged quantity: the value plus the tolerance it was held to.
    pub fn push_judged(&mut self, path: &str, v: f64, tolerance: f64) {
        self.push_real(path, v);
        self.push_real(&format!("{path}_tolerance"), tolerance);
    }

    pub fn push_matrix(
        &mut self,
        path: &str,
        rows: usize,
        cols: usize,
        get: impl Fn(usize, usize) -> f64,
    ) {
        for r in 0..rows {
            let row: Vec<f64> = (0..cols).map(|c| get(r, c)).collect();
            self.push(&format!("{path}.row{r}"), Value::RealList(row));
        }
    }

    pub fn get(&self, path: &str) -> Option<&Value> {
        self.items.iter().find(|(p, _)| p == path).map(|(_, v)| v)
    }

    pub fn get_bool(&self, path: &str) -> Option<bool> {
        match self.get(path) {
            Some(Value::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn get_real(&self, path: &str) -> Option<f64> {
        match self.get(path) {
            Some(Value::Real(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn get_str(&self, path: &str) -> Option<&str> {
        match self.get(path) {
            Some(Value::Str(s)) => Some(s.as_str()),
            _ => None,
        }
    }

    /// One `path = value` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (path, value) in &self.items {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&value.to_text());
            out.push('\n');
        }
        out
    }

    /// Dotted paths nested into JSON objects.
    pub fn to_json(&self) -> Json {
        let mut root = Map::new();
        for (path, value) in &self.items {
            insert_path(
                &mut root,
                path.split('.').collect::<Vec<_>>().as_slice(),
                value.to_json(),
            );
        }
        Json::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }
}

fn insert_path(map: &mut Map<String, Json>, segments: &[&str], value: Json) {
    if segments.len() == 1 {
        map.insert(segments[0].to_string(), value);
        return;
    }
    let entry = map
        .entry(segments[0].to_string())
        .or_insert_with(|| Json::Object(Map::new()));
    if !entry.is_object() {
        // A leaf already sits here; keep both by nesting under "_value".
        let old = entry.take();
        let mut m = Map::new();
        m.insert("_value".to_string(), old);
        *entry = Json::Object(m);
    }
    if let Json::Object(m) = entry {
        insert_path(m, &segments[1..], value);
    }
}
