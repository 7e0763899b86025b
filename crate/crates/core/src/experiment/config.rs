use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::surface::{CoefficientMatrix, MatrixFile};
use crate::{Error, Result};

pub const SEED_ENV: &str = "SURFCONV_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CheckStar,
    Typeset,
    BallScan,
    RestrictedScan,
    LemmaMc,
    TransformCheck,
    Plancherel,
    Ineq6,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CheckStar => "check-star",
            Self::Typeset => "typeset",
            Self::BallScan => "ball-scan",
            Self::RestrictedScan => "restricted-scan",
            Self::LemmaMc => "lemma-mc",
            Self::TransformCheck => "transform-check",
            Self::Plancherel => "plancherel",
            Self::Ineq6 => "ineq6",
        }
    }
}

/// Matrix given inline or as a path relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    File { file: PathBuf },
    Inline(MatrixFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Run identifier; names the output files.
    #[serde(default)]
    pub id: Option<String>,
    pub suite: Suite,
    pub matrix: MatrixRef,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub params: serde_json::Value,
}

/// A config with its matrix resolved and its seed fixed.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub matrix: CoefficientMatrix,
    pub matrix_id: String,
    pub seed: u64,
    /// sha256 of the canonical JSON of `config` with the seed filled in.
    pub config_hash: String,
}

impl ResolvedConfig {
    pub fn id(&self) -> String {
        self.config.id.clone().unwrap_or_else(|| self.config.suite.name().to_string())
    }
}

fn schema_error(path: String, message: String) -> Error {
    Error::Config { path: if path.is_empty() { ".".into() } else { path }, message }
}

/// Deserializes with the offending key path in the error.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| schema_error(e.path().to_string(), e.inner().to_string()))
}

/// Suite parameters, with `params.` prefixed to error paths.
pub fn parse_params<T: serde::de::DeserializeOwned + Default>(v: &serde_json::Value) -> Result<T> {
    if v.is_null() {
        return Ok(T::default());
    }
    serde_path_to_error::deserialize(v.clone()).map_err(|e| {
        let p = e.path().to_string();
        schema_error(if p == "." { "params".into() } else { format!("params.{p}") }, e.inner().to_string())
    })
}

/// Seed precedence: command line, then `SURFCONV_SEED`, then the config.
pub fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        return v
            .trim()
            .parse()
            .map_err(|_| schema_error(SEED_ENV.into(), format!("`{v}` is not an unsigned 64-bit integer")));
    }
    config.ok_or_else(|| schema_error("seed".into(), "missing seed (set it in the config, via --seed or SURFCONV_SEED)".into()))
}

pub fn load_matrix(path: &Path) -> Result<CoefficientMatrix> {
    let text = std::fs::read_to_string(path)?;
    let file: MatrixFile = parse_json(&text).map_err(|e| match e {
        Error::Config { path: p, message } => Error::Config { path: format!("{}:{p}", path.display()), message },
        other => other,
    })?;
    CoefficientMatrix::try_from(file)
}

pub fn load_config(path: &Path, seed_flag: Option<u64>) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: ExperimentConfig = parse_json(&text)?;
    resolve(config, path.parent().unwrap_or(Path::new(".")), seed_flag)
}

pub fn resolve(mut config: ExperimentConfig, base: &Path, seed_flag: Option<u64>) -> Result<ResolvedConfig> {
    let seed = resolve_seed(seed_flag, config.seed)?;
    config.seed = Some(seed);
    let (matrix, matrix_id) = match &config.matrix {
        MatrixRef::File { file } => {
            let p = if file.is_absolute() { file.clone() } else { base.join(file) };
            let id = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            (load_matrix(&p)?, id)
        }
        MatrixRef::Inline(m) => (CoefficientMatrix::try_from(m.clone())?, "inline".to_string()),
    };
    let canonical = serde_json::to_vec(&config)?;
    let config_hash = hex::encode(Sha256::digest(&canonical));
    Ok(ResolvedConfig { config, matrix, matrix_id, seed, config_hash })
}
