//! Output plumbing: format selection and the stdout-or-file sink. All
//! serialization here is deterministic — identical inputs produce identical
//! bytes.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub enum Sink {
    Stdout(Vec<u8>),
    File(std::path::PathBuf, Vec<u8>),
}

impl Sink {
    pub fn open(path: Option<&Path>) -> std::io::Result<Sink> {
        Ok(match path {
            Some(p) => Sink::File(p.to_path_buf(), Vec::new()),
            None => Sink::Stdout(Vec::new()),
        })
    }

    pub fn write_str(&mut self, s: &str) -> Result<(), String> {
        match self {
            Sink::Stdout(buf) | Sink::File(_, buf) => {
                buf.extend_from_slice(s.as_bytes());
                Ok(())
            }
        }
    }

    pub fn write_json<T: serde::Serialize>(&mut self, value: &T) -> Result<(), String> {
        let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        self.write_str(&text)?;
        self.write_str("\n")
    }

    pub fn finish(self) -> std::io::Result<()> {
        match self {
            Sink::Stdout(buf) => {
                std::io::stdout().write_all(&buf)?;
                std::io::stdout().flush()
            }
            Sink::File(path, buf) => std::fs::write(path, buf),
        }
    }
}

/// Key/value rows in the chosen format. For CSV the section name becomes a
/// comment-free two-column table; for tables a simple "key: value" listing.
pub fn write_named_rows(
    sink: &mut Sink,
    format: Format,
    section: &str,
    rows: &[(&str, String)],
) -> Result<(), String> {
    match format {
        Format::Json => {
            let mut map = serde_json::Map::new();
            map.insert(
                "section".to_string(),
                serde_json::Value::String(section.to_string()),
            );
            let mut items = Vec::new();
            for (k, v) in rows {
                items.push(serde_json::json!({ "key": k, "value": v }));
            }
            map.insert("rows".to_string(), serde_json::Value::Array(items));
            sink.write_json(&serde_json::Value::Object(map))
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            for (k, v) in rows {
                let escaped = if v.contains(',') || v.contains('"') {
                    format!("\"{}\"", v.replace('"', "\"\""))
                } else {
                    v.clone()
                };
                s.push_str(&format!("{k},{escaped}\n"));
            }
            sink.write_str(&s)
        }
        Format::Table => {
            let mut s = format!("[{section}]\n");
            for (k, v) in rows {
                s.push_str(&format!("{k}: {v}\n"));
            }
            sink.write_str(&s)
        }
    }
}
