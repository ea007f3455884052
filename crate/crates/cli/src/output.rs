//! Result files. Every file carries the resolved config hash; nothing
//! time-dependent is written so reruns are byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full-precision float formatting used in every CSV cell.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutputDir {
    root: PathBuf,
    hash: String,
}

impl OutputDir {
    pub fn create(root: &Path, hash: &str) -> std::io::Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            hash: hash.to_string(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_resolved_config(&self, toml_text: &str) -> std::io::Result<()> {
        let text = format!("# config_sha256={}\n{toml_text}", self.hash);
        fs::write(self.path("resolved_config.toml"), text)
    }

    /// `payload` must serialize to a JSON object; provenance keys are added
    /// in front of its fields.
    pub fn write_json<T: Serialize>(&self, name: &str, payload: &T) -> std::io::Result<()> {
        let mut obj = Map::new();
        obj.insert("config_sha256".into(), Value::String(self.hash.clone()));
        obj.insert("code_version".into(), Value::String(CODE_VERSION.into()));
        match serde_json::to_value(payload)? {
            Value::Object(fields) => obj.extend(fields),
            other => {
                obj.insert("data".into(), other);
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
        text.push('\n');
        fs::write(self.path(name), text)
    }

    /// A `# config_sha256=` comment line, then the header, then the rows.
    pub fn write_csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
        let mut file = fs::File::create(self.path(name))?;
        writeln!(file, "# config_sha256={}", self.hash)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Parses a CSV written by [`OutputDir::write_csv`], returning the hash, the
/// header and the rows.
#[allow(clippy::type_complexity)]
pub fn read_csv(path: &Path) -> std::io::Result<(String, Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let (first, body) = text.split_once('\n').unwrap_or((&text, ""));
    let hash = first
        .strip_prefix("# config_sha256=")
        .ok_or_else(|| std::io::Error::other("missing config hash line"))?
        .to_string();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok((hash, header, rows))
}
