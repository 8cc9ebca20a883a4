//! Run configuration: a JSON file plus per-flag overrides.
//!
//! Every run is reproducible from the resolved configuration and the tool
//! version; the resolved form is echoed verbatim into the report.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use opsim_core::dilation::RhoSeq;
use opsim_core::sequences::{AlphaSeq, AlphaSpec, BetaSpec, BetaWeight};
use opsim_core::Operator;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: String,
    /// Named input paths (matrix JSON files).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, String>,
    /// Numeric and string parameters, per subcommand.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        RunConfig {
            subcommand: subcommand.into(),
            inputs: BTreeMap::new(),
            params: BTreeMap::new(),
            seed: 0,
            out: None,
        }
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config `{path}`"))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| anyhow!("config `{path}` line {} column {}: {e}", e.line(), e.column()))?;
        Ok(cfg)
    }

    pub fn set_input(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.inputs.insert(key.into(), v);
        }
    }

    pub fn set_param_str(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.params.insert(key.into(), serde_json::Value::String(v));
        }
    }

    pub fn set_param_f64(&mut self, key: &str, value: Option<f64>) {
        if let Some(v) = value {
            self.params.insert(key.into(), serde_json::json!(v));
        }
    }

    pub fn set_param_usize(&mut self, key: &str, value: Option<usize>) {
        if let Some(v) = value {
            self.params.insert(key.into(), serde_json::json!(v));
        }
    }

    pub fn input(&self, key: &str) -> Result<&str> {
        self.inputs
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| anyhow!("inputs.{key}: missing required matrix path"))
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| anyhow!("params.{key}: expected a number, got {v}")),
        }
    }

    pub fn param_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| anyhow!("params.{key}: expected a nonnegative integer, got {v}")),
        }
    }

    pub fn param_str(&self, key: &str, default: &str) -> Result<String> {
        match self.params.get(key) {
            None => Ok(default.to_string()),
            Some(serde_json::Value::String(s)) => Ok(s.clone()),
            Some(v) => Err(anyhow!("params.{key}: expected a string, got {v}")),
        }
    }
}

pub fn load_matrix(path: &str) -> Result<Operator> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read matrix `{path}`"))?;
    let m: Operator = serde_json::from_str(&text)
        .map_err(|e| anyhow!("matrix `{path}` line {} column {}: {e}", e.line(), e.column()))?;
    Ok(m)
}

/// Weight rule shorthand: `sqrt`, `const:V`, `table:a,b,c`, or a path to a
/// weight-spec JSON file.
pub fn parse_beta(spec: &str) -> Result<BetaWeight> {
    let w = if spec == "sqrt" {
        BetaWeight::Sqrt
    } else if let Some(v) = spec.strip_prefix("const:") {
        BetaWeight::constant(v.parse::<f64>().with_context(|| format!("beta `{spec}`"))?)?
    } else if let Some(list) = spec.strip_prefix("table:") {
        let vals = parse_list(list).with_context(|| format!("beta `{spec}`"))?;
        BetaWeight::table(&vals)?
    } else if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)?;
        let parsed: BetaSpec = serde_json::from_str(&text)
            .map_err(|e| anyhow!("beta spec `{spec}`: {e}"))?;
        parsed.to_weight()?
    } else {
        bail!("beta `{spec}`: expected sqrt | const:V | table:a,b,c | path to a spec file");
    };
    Ok(w)
}

/// Sequence rule shorthand: `example32`, `pisier[:c]`, `geometric:c`,
/// `explicit:a,b,c`, or a path to a sequence-spec JSON file.
pub fn parse_alpha(spec: &str) -> Result<AlphaSeq> {
    let seq = if spec == "example32" {
        AlphaSeq::Example32
    } else if spec == "pisier" {
        AlphaSeq::pisier_literal()
    } else if let Some(c) = spec.strip_prefix("pisier:") {
        AlphaSeq::pisier(c.parse::<f64>().with_context(|| format!("alpha `{spec}`"))?)?
    } else if let Some(c) = spec.strip_prefix("geometric:") {
        AlphaSeq::geometric(c.parse::<f64>().with_context(|| format!("alpha `{spec}`"))?)?
    } else if let Some(list) = spec.strip_prefix("explicit:") {
        AlphaSeq::explicit(&parse_list(list).with_context(|| format!("alpha `{spec}`"))?)?
    } else if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)?;
        let parsed: AlphaSpec = serde_json::from_str(&text)
            .map_err(|e| anyhow!("alpha spec `{spec}`: {e}"))?;
        parsed.to_seq()?
    } else {
        bail!(
            "alpha `{spec}`: expected example32 | pisier[:c] | geometric:c | explicit:a,b,c | path"
        );
    };
    Ok(seq)
}

/// Coefficient sequence shorthand: `const:V` or `table:FILE` (JSON array).
pub fn parse_rho(spec: &str) -> Result<RhoSeq> {
    if let Some(v) = spec.strip_prefix("const:") {
        Ok(RhoSeq::constant(
            v.parse::<f64>().with_context(|| format!("rho `{spec}`"))?,
        )?)
    } else if let Some(path) = spec.strip_prefix("table:") {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("rho table `{path}`"))?;
        let vals: Vec<f64> = serde_json::from_str(&text)
            .map_err(|e| anyhow!("rho table `{path}`: {e}"))?;
        Ok(RhoSeq::table(&vals)?)
    } else {
        bail!("rho `{spec}`: expected const:V | table:FILE");
    }
}

fn parse_list(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("entry `{tok}`: {e}"))
        })
        .collect()
}
