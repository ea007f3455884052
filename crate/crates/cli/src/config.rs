//! Experiment configuration: a flat TOML table with `--set` overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use noisyvqe::adapt::{AdaptConfig, DecisionRule, OptimizerKind};
use noisyvqe::ansatz::PoolKind;
use noisyvqe::sim::{NoiseModel, NoiseScheme, SimOptions, HARD_DENSITY_LIMIT};
use noisyvqe::FrozenCoreSpec;

/// Prefix selecting one of the FCIDUMP files compiled into the binary.
pub const BUNDLED_PREFIX: &str = "bundled:";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzChoice {
    Adapt,
    Uccsd,
    Kupccgsd,
}

/// Every key with its default. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Path to an FCIDUMP file, or `bundled:<name>`.
    pub fcidump: String,
    pub frozen_occupied: Vec<usize>,
    pub frozen_virtual: Vec<usize>,
    pub ansatz: AnsatzChoice,
    pub pool: PoolKind,
    /// Repetitions for `kupccgsd`.
    pub k: usize,
    pub rule: DecisionRule,
    pub subpool_size: usize,
    pub optimizer: OptimizerKind,
    pub eps_o: f64,
    pub eps: f64,
    pub eps_t: f64,
    /// Apply the `eps_t` halting rule during noiseless growth.
    pub use_eps_t: bool,
    pub max_iterations: usize,
    /// `0` keeps the optimizer's own cap.
    pub max_optimizer_iterations: usize,
    /// Gate-error probability during growth and optimization.
    pub growth_p: f64,
    pub scheme: NoiseScheme,
    pub p_values: Vec<f64>,
    pub zne_multiplier: f64,
    pub dense_limit: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            fcidump: format!("{BUNDLED_PREFIX}h2_0.7414"),
            frozen_occupied: Vec::new(),
            frozen_virtual: Vec::new(),
            ansatz: AnsatzChoice::Adapt,
            pool: PoolKind::Qeb,
            k: 1,
            rule: DecisionRule::Gradient,
            subpool_size: 10,
            optimizer: OptimizerKind::Bfgs,
            eps_o: 1e-6,
            eps: 1e-12,
            eps_t: 1e-4,
            use_eps_t: true,
            max_iterations: 30,
            max_optimizer_iterations: 0,
            growth_p: 0.0,
            scheme: NoiseScheme::GateByGate,
            p_values: vec![0.0, 1e-6, 1e-5, 1e-4, 1e-3],
            zne_multiplier: 3.0,
            dense_limit: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.key {
            Some(k) => write!(f, "config key `{k}`: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn key_error(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: Some(key.to_string()),
        message: message.into(),
    }
}

/// Parses the value of `--set key=value` as a TOML value, falling back to a
/// bare string.
fn parse_override(text: &str) -> Result<(String, toml::Value), ConfigError> {
    let (key, raw) = text.split_once('=').ok_or_else(|| ConfigError {
        key: None,
        message: format!("override {text:?} is not of the form key=value"),
    })?;
    let key = key.trim().to_string();
    if key.is_empty() {
        return Err(ConfigError {
            key: None,
            message: format!("override {text:?} has an empty key"),
        });
    }
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    Ok((key, value))
}

impl ExperimentConfig {
    /// File contents (if any) with overrides applied in order, then validated.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| ConfigError {
                    key: None,
                    message: format!("cannot read {}: {e}", p.display()),
                })?;
                toml::from_str::<toml::Table>(&text).map_err(|e| ConfigError {
                    key: None,
                    message: format!("{}: {e}", p.display()),
                })?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            let (k, v) = parse_override(o)?;
            table.insert(k, v);
        }
        Self::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Self, ConfigError> {
        let defaults = toml::Table::try_from(Self::default()).expect("defaults serialize");
        for key in table.keys() {
            if !defaults.contains_key(key) {
                return Err(key_error(key, "unknown key"));
            }
        }
        // deserialize key by key so a type error names its key
        let mut merged = defaults;
        for (k, v) in table {
            let mut probe = toml::Table::new();
            probe.insert(k.clone(), v.clone());
            toml::Value::Table(probe)
                .try_into::<ExperimentConfig>()
                .map_err(|e| key_error(&k, e.message().to_string()))?;
            merged.insert(k, v);
        }
        let config: ExperimentConfig = toml::Value::Table(merged)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError {
                key: None,
                message: e.to_string(),
            })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.fcidump.trim().is_empty() {
            return Err(key_error("fcidump", "must name a file"));
        }
        if let Some(name) = self.fcidump.strip_prefix(BUNDLED_PREFIX) {
            if !noisyvqe::bundled::ALL.iter().any(|(n, _)| *n == name) {
                let names: Vec<&str> = noisyvqe::bundled::ALL.iter().map(|(n, _)| *n).collect();
                return Err(key_error(
                    "fcidump",
                    format!("no bundled molecule {name:?}; available: {}", names.join(", ")),
                ));
            }
        }
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(key_error(key, format!("must be positive, got {v}")))
            }
        };
        positive("eps_o", self.eps_o)?;
        positive("eps", self.eps)?;
        positive("eps_t", self.eps_t)?;
        if self.subpool_size == 0 {
            return Err(key_error("subpool_size", "must be at least 1"));
        }
        if self.k == 0 {
            return Err(key_error("k", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.growth_p) {
            return Err(key_error("growth_p", format!("{} outside [0, 1]", self.growth_p)));
        }
        if self.ansatz == AnsatzChoice::Uccsd && self.pool == PoolKind::QubitPauli {
            return Err(key_error("pool", "uccsd needs a fermionic or qeb pool"));
        }
        if self.p_values.is_empty() {
            return Err(key_error("p_values", "must not be empty"));
        }
        for w in self.p_values.windows(2) {
            if !(w[0] < w[1]) {
                return Err(key_error("p_values", "must be strictly ascending"));
            }
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(key_error("p_values", format!("{p} outside [0, 1]")));
        }
        if !(self.zne_multiplier > 1.0) || !self.zne_multiplier.is_finite() {
            return Err(key_error(
                "zne_multiplier",
                format!("must exceed 1, got {}", self.zne_multiplier),
            ));
        }
        if self.dense_limit == 0 || self.dense_limit > HARD_DENSITY_LIMIT {
            return Err(key_error(
                "dense_limit",
                format!("must lie in 1..={HARD_DENSITY_LIMIT}, got {}", self.dense_limit),
            ));
        }
        Ok(())
    }

    /// Canonical TOML with every key explicit.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of [`Self::to_toml`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn frozen(&self) -> FrozenCoreSpec {
        FrozenCoreSpec {
            frozen_occupied: self.frozen_occupied.clone(),
            frozen_virtual: self.frozen_virtual.clone(),
        }
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            density_limit: self.dense_limit,
            force_density: false,
        }
    }

    pub fn adapt_config(&self) -> AdaptConfig {
        AdaptConfig {
            pool: self.pool,
            rule: self.rule,
            subpool_size: self.subpool_size,
            optimizer: self.optimizer,
            eps_o: self.eps_o,
            eps: self.eps,
            eps_t: self.use_eps_t.then_some(self.eps_t),
            max_iterations: self.max_iterations,
            max_optimizer_iterations: (self.max_optimizer_iterations > 0).then_some(self.max_optimizer_iterations),
            fd_step: 1e-4,
            noise: NoiseModel::new(self.growth_p, self.scheme),
            gradient_method: None,
            sim: self.sim_options(),
        }
    }
}
