use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use simapprox::Error;

pub fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let v = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(v)
}

/// A file holds one item or a JSON array of them.
pub struct Batch {
    pub items: Vec<Value>,
    pub is_array: bool,
}

impl Batch {
    pub fn load(path: &Path) -> anyhow::Result<Batch> {
        Ok(match read_json(path)? {
            Value::Array(items) => Batch { items, is_array: true },
            other => Batch { items: vec![other], is_array: false },
        })
    }

    /// Loads a file that must be shaped like `like`: a single SVP answer
    /// is itself an array, so the shape cannot be read off the file.
    pub fn load_like(path: &Path, like: &Batch) -> anyhow::Result<Batch> {
        let v = read_json(path)?;
        Ok(match v {
            Value::Array(items) if like.is_array => Batch { items, is_array: true },
            other if like.is_array => {
                return Err(Error::Parse(format!("{} must hold an array, got {other}", path.display())).into())
            }
            other => Batch { items: vec![other], is_array: false },
        })
    }

    /// Wraps results the same way the input was wrapped.
    pub fn shape(&self, mut out: Vec<Value>) -> Value {
        if self.is_array {
            Value::Array(out)
        } else {
            out.pop().unwrap_or(Value::Null)
        }
    }
}

pub fn write_json(path: Option<&PathBuf>, v: &Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
