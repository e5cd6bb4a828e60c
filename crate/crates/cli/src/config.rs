//! Run configuration: defaults, then the JSON config file, then flags.
//!
//! The config file is a flat object holding the global keys (`seed`,
//! `output_dir`, `format`) next to the parameters of the command. Unknown
//! keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SEED_ENV: &str = "FRAMEQ_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Global settings after resolution.
#[derive(Debug, Clone)]
pub struct Global {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub format: Format,
}

/// Parameters of one command after merging, with the value they were
/// deserialized from and its hash.
pub struct Resolved<P> {
    pub global: Global,
    pub params: P,
    pub echo: Value,
    pub hash: String,
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn object(v: Value, what: &str) -> Result<Map<String, Value>> {
    match v {
        Value::Object(m) => Ok(m),
        _ => bail!("{what} must be a JSON object"),
    }
}

pub struct GlobalFlags {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Merges `defaults`, the config file and the non-null flags, in that order.
pub fn resolve<P: Serialize + DeserializeOwned>(
    command: &str,
    global: &GlobalFlags,
    defaults: Value,
    flags: &P,
) -> Result<Resolved<P>> {
    let mut file = match &global.config {
        Some(path) => object(read_json(path)?, "config file")?,
        None => Map::new(),
    };
    let file_seed = file.remove("seed").map(serde_json::from_value::<u64>).transpose().context("config seed")?;
    let file_dir = file.remove("output_dir").map(serde_json::from_value::<PathBuf>).transpose().context("config output_dir")?;
    let file_format = file.remove("format").map(serde_json::from_value::<Format>).transpose().context("config format")?;
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(s) => Some(s.trim().parse::<u64>().with_context(|| format!("{SEED_ENV}={s} is not a u64"))?),
        Err(_) => None,
    };
    let g = Global {
        seed: global.seed.or(file_seed).or(env_seed).unwrap_or(0),
        output_dir: global.output_dir.clone().or(file_dir).unwrap_or_else(|| PathBuf::from(".")),
        format: global.format.or(file_format).unwrap_or(Format::Json),
    };

    let mut merged = object(defaults, "defaults")?;
    merged.extend(file);
    for (k, v) in object(serde_json::to_value(flags)?, "flags")? {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    let echo = Value::Object(merged);
    let params: P = serde_json::from_value(echo.clone()).context("invalid configuration")?;
    // the output directory is left out so identical runs in different places hash alike
    let hashed = json!({ "command": command, "seed": g.seed, "format": g.format, "params": echo });
    let hash = hex::encode(Sha256::digest(serde_json::to_string(&hashed)?.as_bytes()));
    Ok(Resolved { global: g, params, echo, hash })
}

/// One file written by a command.
pub enum Output {
    Json(String, Value),
    Csv(String, String),
}

/// Writes the outputs, stamping each with the config hash, then the manifest.
pub fn write_outputs<P>(command: &str, r: &Resolved<P>, outputs: Vec<Output>) -> Result<Vec<PathBuf>> {
    let dir = &r.global.output_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut names = Vec::new();
    let mut paths = Vec::new();
    for out in outputs {
        let (name, body) = match out {
            Output::Json(name, mut v) => {
                if let Value::Object(m) = &mut v {
                    m.insert("config_hash".into(), Value::String(r.hash.clone()));
                }
                (name, serde_json::to_string_pretty(&v)? + "\n")
            }
            Output::Csv(name, body) => (name, format!("# config_hash: {}\n{body}", r.hash)),
        };
        let path = dir.join(&name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        names.push(name);
        paths.push(path);
    }
    let manifest = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": r.global.seed,
        "format": r.global.format,
        "config": r.echo,
        "config_hash": r.hash,
        "outputs": names,
    });
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(paths)
}
