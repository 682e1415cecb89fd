//! Report rendering and provenance.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// An input file read once, so the bytes that are hashed are the bytes that
/// are parsed.
pub struct Input {
    pub name: &'static str,
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(name: &'static str, path: &std::path::Path) -> std::io::Result<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("{}: {e}", path.display()),
            )
        })?;
        Ok(Input { name, text, sha256 })
    }
}

#[derive(Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub seed: Option<u64>,
    /// Input name → SHA-256 of the file contents.
    pub inputs: Map<String, Value>,
}

impl Provenance {
    pub fn new(seed: Option<u64>, inputs: &[&Input]) -> Self {
        let inputs = inputs
            .iter()
            .map(|i| (i.name.to_owned(), Value::String(i.sha256.clone())))
            .collect();
        Provenance {
            version: env!("CARGO_PKG_VERSION"),
            seed,
            inputs,
        }
    }
}

/// Serializes `report` as one JSON line, or as a CSV header plus one row with
/// nested fields flattened to dotted column names.
pub fn render(report: &impl Serialize, format: Format) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => format!("{value}\n"),
        Format::Csv => {
            let mut cols = Vec::new();
            flatten("", &value, &mut cols);
            let header: Vec<String> = cols.iter().map(|(k, _)| csv_field(k)).collect();
            let row: Vec<String> = cols.iter().map(|(_, v)| csv_field(v)).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        Value::Null => out.push((prefix.to_owned(), String::new())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Inner {
        b: f64,
        c: Option<u8>,
    }

    #[derive(Serialize)]
    struct Outer {
        z: u32,
        a: Inner,
        list: Vec<u8>,
    }

    #[test]
    fn csv_flattens_in_field_order() {
        let r = Outer {
            z: 1,
            a: Inner { b: 0.5, c: None },
            list: vec![1, 2],
        };
        assert_eq!(
            render(&r, Format::Csv),
            "z,a.b,a.c,list\n1,0.5,,\"[1,2]\"\n"
        );
        assert_eq!(
            render(&r, Format::Json),
            "{\"z\":1,\"a\":{\"b\":0.5,\"c\":null},\"list\":[1,2]}\n"
        );
    }
}
