use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use dioph::format::curve_to_text;
use dioph::polycurve::Curve;
use dioph::report::SCHEMA_VERSION;

/// What was run and on which inputs. Output locations are recorded by file
/// name only so that the same experiment written to two directories yields
/// identical bytes.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: &'static str,
    pub tool_version: &'static str,
    pub curve_source: Option<String>,
    pub curve: Option<Vec<String>>,
    pub real: Option<String>,
    pub params: BTreeMap<&'static str, String>,
    pub outputs: BTreeMap<&'static str, String>,
    pub input_digest: String,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    manifest: &'a Manifest,
    result: &'a T,
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| p.display().to_string())
}

pub struct ManifestBuilder {
    command: &'static str,
    curve_source: Option<String>,
    curve: Option<Vec<String>>,
    real: Option<String>,
    params: BTreeMap<&'static str, String>,
}

impl ManifestBuilder {
    pub fn new(command: &'static str) -> Self {
        ManifestBuilder {
            command,
            curve_source: None,
            curve: None,
            real: None,
            params: BTreeMap::new(),
        }
    }

    pub fn curve(mut self, path: &Path, curve: &Curve) -> Self {
        self.curve_source = Some(file_name(path));
        self.curve = Some(curve_to_text(curve).lines().map(str::to_owned).collect());
        self
    }

    pub fn real(mut self, spec: String) -> Self {
        self.real = Some(spec);
        self
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.params.insert(key, value.to_string());
        self
    }

    pub fn build(self, json: Option<&PathBuf>, csv: Option<&PathBuf>) -> Manifest {
        let digest_input = serde_json::to_vec(&(self.command, &self.curve, &self.real, &self.params))
            .expect("plain data serializes");
        let mut outputs = BTreeMap::new();
        if let Some(p) = json {
            outputs.insert("json", file_name(p));
        }
        if let Some(p) = csv {
            outputs.insert("csv", file_name(p));
        }
        Manifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION"),
            curve_source: self.curve_source,
            curve: self.curve,
            real: self.real,
            params: self.params,
            outputs,
            input_digest: hex::encode(Sha256::digest(&digest_input)),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(manifest: &Manifest, result: &T) -> String {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        manifest,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

/// Writes the report to `path`, or to stdout when the path is `-`.
pub fn write_json<T: Serialize>(path: Option<&PathBuf>, manifest: &Manifest, result: &T) -> std::io::Result<()> {
    match path {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            use std::io::Write;
            std::io::stdout().write_all(render(manifest, result).as_bytes())
        }
        Some(p) => fs::write(p, render(manifest, result)),
    }
}
