use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Serializes with sorted keys (serde_json maps are ordered by key).
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("json value serializes")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Value,
    pub budget: Value,
    pub exit_code: i32,
    pub timing_ms: u64,
}

impl RunReport {
    fn body(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs_digest".into(), json!(self.inputs_digest));
        m.insert("results".into(), self.results.clone());
        m.insert("budget".into(), self.budget.clone());
        m.insert("exit_code".into(), json!(self.exit_code));
        m
    }

    /// Digest of everything except the timing.
    pub fn digest(&self) -> String {
        sha256_hex(canonical(&Value::Object(self.body())).as_bytes())
    }

    pub fn to_value(&self) -> Value {
        let mut m = self.body();
        m.insert("digest".into(), json!(self.digest()));
        m.insert("timing_ms".into(), json!(self.timing_ms));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command.join(" ")));
        if let Some(table) = self.results.get("rows").and_then(Value::as_array) {
            out.push_str(&table_text(table));
            if let Some(o) = self.results.get("orientation") {
                out.push_str(&format!("orientation: {}\n", scalar(o)));
            }
        } else {
            flatten("", &self.results, &mut out);
        }
        out.push_str(&format!("exit_code: {}\n", self.exit_code));
        out.push_str(&format!("inputs_digest: {}\n", self.inputs_digest));
        out.push_str(&format!("digest: {}\n", self.digest()));
        out.push_str(&format!("timing_ms: {}\n", self.timing_ms));
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar(other))),
    }
}

fn table_text(rows: &[Value]) -> String {
    let header = ["knot", "computed", "status", "range", "conjecture", "signature", "alternating", "unknotting", "agreement"];
    let mut lines: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let meta = &r["metadata"];
        let range = match (meta["range"][0].as_i64(), meta["range"][1].as_i64()) {
            (Some(a), Some(b)) if a == b => a.to_string(),
            (Some(a), Some(b)) => format!("[{a},{b}]"),
            _ => "-".into(),
        };
        lines.push(vec![
            scalar(&r["id"]),
            scalar(&r["computed"]),
            scalar(&r["status"]),
            range,
            scalar(&meta["conjecture"]),
            scalar(&meta["signature"]),
            scalar(&meta["alternating"]),
            scalar(&meta["unknotting"]),
            format!("{} ({})", scalar(&r["agreement"]), scalar(&r["orientation"])),
        ]);
    }
    let widths: Vec<usize> = (0..header.len()).map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap()).collect();
    let mut out = String::new();
    for l in lines {
        let cells: Vec<String> = l.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(timing: u64) -> RunReport {
        RunReport {
            command: vec!["table".into()],
            inputs_digest: sha256_hex(b"x"),
            results: json!({"b": 1, "a": [1, 2]}),
            budget: json!({}),
            exit_code: 0,
            timing_ms: timing,
        }
    }

    #[test]
    fn digest_ignores_timing() {
        assert_eq!(report(1).digest(), report(99).digest());
        assert_ne!(report(1).to_json(), report(99).to_json());
    }

    #[test]
    fn keys_are_sorted() {
        let s = report(0).to_json();
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"budget\"").unwrap() < s.find("\"command\"").unwrap());
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
