use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything needed to repeat a run and check that it produced the same bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    /// Arguments after the program name, including any auto-generated seed.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub elapsed_ms: u64,
    pub output: PathBuf,
    /// `sha256:<hex>` of the output file.
    pub result_digest: String,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl Manifest {
    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// `args` with the value of `--out` replaced (or appended).
pub fn with_out(args: &[String], out: &Path) -> Vec<String> {
    let out = out.display().to_string();
    let mut result = Vec::with_capacity(args.len() + 2);
    let mut replaced = false;
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        if a == "--out" {
            iter.next();
            result.push(a.clone());
            result.push(out.clone());
            replaced = true;
        } else if a.starts_with("--out=") {
            result.push(format!("--out={out}"));
            replaced = true;
        } else {
            result.push(a.clone());
        }
    }
    if !replaced {
        result.push("--out".into());
        result.push(out);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_replacement() {
        let args: Vec<String> = ["verify", "a.json", "--out", "x.json"].map(String::from).to_vec();
        assert_eq!(with_out(&args, Path::new("y.json")), ["verify", "a.json", "--out", "y.json"]);
        let args: Vec<String> = ["verify", "--out=x"].map(String::from).to_vec();
        assert_eq!(with_out(&args, Path::new("y")), ["verify", "--out=y"]);
        let args: Vec<String> = ["bounds"].map(String::from).to_vec();
        assert_eq!(with_out(&args, Path::new("y")), ["bounds", "--out", "y"]);
    }

    #[test]
    fn digest_format() {
        assert_eq!(digest(b"abc"), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert_eq!(manifest_path(Path::new("dir/code.json")), Path::new("dir/code.json.manifest.json"));
    }
}
