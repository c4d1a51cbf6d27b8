use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Map, Value};

use mlc_meta::features::Catalogue;
use mlc_meta::stratify::RNG_NAME;

/// Artifacts of one invocation, kept in memory until the whole run has
/// succeeded.
pub struct Output {
    provenance: Value,
    artifacts: Vec<(String, String)>,
}

impl Output {
    pub fn new(subcommand: &str, seed: u64, inputs: &[(&str, &Path)], params: Value) -> Self {
        let inputs: Map<String, Value> = inputs
            .iter()
            .map(|(k, p)| (k.to_string(), Value::String(p.display().to_string())))
            .collect();
        let provenance = json!({
            "tool": concat!("mlc-meta ", env!("CARGO_PKG_VERSION")),
            "subcommand": subcommand,
            "inputs": inputs,
            "params": params,
            "seed": seed,
            "rng": RNG_NAME,
            "catalogue_version": Catalogue::default().version,
        });
        Output {
            provenance,
            artifacts: vec![],
        }
    }

    fn header(&self, prefix: &str) -> String {
        format!("{prefix} provenance: {}\n", self.provenance)
    }

    /// CSV body after a `#` provenance comment line.
    pub fn csv(&mut self, name: &str, body: &str) {
        let text = self.header("#") + body;
        self.artifacts.push((name.to_string(), text));
    }

    /// Plain text (rules listings) with the same comment line as CSV.
    pub fn text(&mut self, name: &str, body: &str) {
        self.csv(name, body);
    }

    pub fn dot(&mut self, name: &str, body: &str) {
        let text = self.header("//") + body;
        self.artifacts.push((name.to_string(), text));
    }

    /// JSON object with a `provenance` field; non-objects go under `data`.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let mut v = serde_json::to_value(value)?;
        match &mut v {
            Value::Object(map) => {
                map.insert("provenance".into(), self.provenance.clone());
            }
            _ => v = json!({ "data": v, "provenance": self.provenance }),
        }
        self.artifacts
            .push((name.to_string(), serde_json::to_string_pretty(&v)? + "\n"));
        Ok(())
    }

    /// Writes every artifact to a temporary name first, then renames them
    /// into place.
    pub fn write(self, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut staged = vec![];
        for (name, text) in &self.artifacts {
            let tmp = dir.join(format!(".{name}.partial"));
            if let Err(e) = std::fs::write(&tmp, text) {
                for (t, _) in &staged {
                    let _ = std::fs::remove_file(t);
                }
                return Err(e).with_context(|| format!("writing {}", tmp.display()));
            }
            staged.push((tmp, dir.join(name)));
        }
        let mut done = vec![];
        for (tmp, dest) in staged {
            std::fs::rename(&tmp, &dest).with_context(|| format!("writing {}", dest.display()))?;
            done.push(dest);
        }
        Ok(done)
    }
}
