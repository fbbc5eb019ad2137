//! Deterministic CSV and JSON emitters. Field order is fixed by the record
//! builders; every float goes through the 12-significant-digit formatter, so
//! identical runs produce byte-identical output.

use entroq::fmt::sig12;

#[derive(Clone, Debug)]
pub enum Value {
    Float(f64),
    OptFloat(Option<f64>),
    Int(u64),
    Text(String),
}

pub type Record = Vec<(&'static str, Value)>;

#[derive(Clone, Debug, Default)]
pub struct Metadata {
    pub command: String,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub timestamp: u64,
}

/// Extra trailer attached after the records (the sweep's crossing bracket).
#[derive(Clone, Debug)]
pub enum Footer {
    None,
    Crossing(Option<(f64, f64)>),
}

pub struct Document {
    pub metadata: Option<Metadata>,
    pub records: Vec<Record>,
    pub footer: Footer,
}

impl Document {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(meta) = &self.metadata {
            out.push_str(&format!("# tool=entroq version={}\n", meta.version));
            out.push_str(&format!("# command={}\n", csv_safe(&meta.command)));
            if let Some(seed) = meta.seed {
                out.push_str(&format!("# seed={seed}\n"));
            }
            out.push_str(&format!("# timestamp={}\n", meta.timestamp));
        }
        if let Some(first) = self.records.first() {
            let header: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
            out.push_str(&header.join(","));
            out.push('\n');
        }
        for record in &self.records {
            let cells: Vec<String> = record.iter().map(|(_, v)| csv_cell(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        match &self.footer {
            Footer::None => {}
            Footer::Crossing(Some((lo, hi))) => {
                out.push_str(&format!(
                    "# crossing_lo={} crossing_hi={}\n",
                    sig12(*lo),
                    sig12(*hi)
                ));
            }
            Footer::Crossing(None) => out.push_str("# crossing=none\n"),
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        if let Some(meta) = &self.metadata {
            out.push_str(&format!(
                "\"meta\":{{\"tool\":\"entroq\",\"version\":{},\"command\":{},",
                json_string(meta.version),
                json_string(&meta.command)
            ));
            if let Some(seed) = meta.seed {
                out.push_str(&format!("\"seed\":{seed},"));
            }
            out.push_str(&format!("\"timestamp\":{}}},", meta.timestamp));
        }
        out.push_str("\"records\":[");
        for (i, record) in self.records.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"schema_version\":1");
            for (key, value) in record {
                out.push_str(&format!(",{}:{}", json_string(key), json_value(value)));
            }
            out.push('}');
        }
        out.push(']');
        if let Footer::Crossing(bracket) = &self.footer {
            match bracket {
                Some((lo, hi)) => out.push_str(&format!(
                    ",\"crossing\":{{\"lo\":{},\"hi\":{}}}",
                    json_float(*lo),
                    json_float(*hi)
                )),
                None => out.push_str(",\"crossing\":null"),
            }
        }
        out.push_str("}\n");
        out
    }
}

fn csv_cell(value: &Value) -> String {
    match value {
        Value::Float(x) => sig12(*x),
        Value::OptFloat(Some(x)) => sig12(*x),
        Value::OptFloat(None) => String::new(),
        Value::Int(n) => n.to_string(),
        Value::Text(s) => csv_safe(s),
    }
}

fn csv_safe(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_value(value: &Value) -> String {
    match value {
        Value::Float(x) => json_float(*x),
        Value::OptFloat(Some(x)) => json_float(*x),
        Value::OptFloat(None) => "null".to_string(),
        Value::Int(n) => n.to_string(),
        Value::Text(s) => json_string(s),
    }
}

/// Round to 12 significant digits, then emit a valid JSON number.
fn json_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    let text = sig12(x);
    // sig12 output is already a valid JSON number except for bare "nan"/"inf"
    // handled above.
    text
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            ch if (ch as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", ch as u32)),
            ch => out.push(ch),
        }
    }
    out.push('"');
    out
}
