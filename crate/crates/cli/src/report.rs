//! Machine-readable output: JSON records and CSV tables.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const SIG_DIGITS: usize = 12;

/// `x` rounded to twelve significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// JSON value for a real result; non-finite values become strings.
pub fn num(x: f64) -> Value {
    let y = round_sig(x);
    match serde_json::Number::from_f64(y) {
        Some(n) => Value::Number(n),
        None if y.is_nan() => Value::String("nan".into()),
        None if y > 0.0 => Value::String("inf".into()),
        None => Value::String("-inf".into()),
    }
}

/// CSV field for a real value, twelve significant digits, `.` decimal separator.
pub fn field(x: f64) -> String {
    let y = round_sig(x);
    if y.is_nan() {
        "nan".into()
    } else if y.is_infinite() {
        if y > 0.0 { "inf".into() } else { "-inf".into() }
    } else if y == 0.0 || (1e-4..1e15).contains(&y.abs()) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Hash of the command line and the bytes of every input file, in order.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(argv: &[String]) -> Self {
        let mut h = Sha256::new();
        for a in argv {
            h.update(a.as_bytes());
            h.update([0u8]);
        }
        InputDigest(h)
    }

    pub fn add_file(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn hex(&self) -> String {
        hex::encode(self.0.clone().finalize())
    }
}

/// Envelope of every JSON report.
pub fn record(argv: &[String], digest: &InputDigest, seed: Option<u64>, results: Map<String, Value>) -> String {
    let mut m = Map::new();
    m.insert("command".into(), Value::Array(argv.iter().cloned().map(Value::String).collect()));
    m.insert("inputs_sha256".into(), Value::String(digest.hex()));
    if let Some(s) = seed {
        m.insert("seed".into(), Value::from(s));
    }
    m.insert("results".into(), Value::Object(results));
    m.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
    s.push('\n');
    s
}
