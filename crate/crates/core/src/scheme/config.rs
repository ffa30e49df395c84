//! JSON scheme configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{CubicGenerator, ScalarMode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum F0Config {
    /// `"orthogonal"` (the complement of E) or `"internal"` (F0 = F).
    Named(String),
    /// Explicit spanning vectors, one k-vector per row.
    Vectors(Vec<Vec<String>>),
}

impl Default for F0Config {
    fn default() -> Self {
        F0Config::Named("orthogonal".into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    /// Integer generators of the window parallelotope inside F.
    pub generators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub k: usize,
    pub d: usize,
    /// `(k-d) x d` slope matrix; entries are number literals.
    pub alpha: Vec<Vec<String>>,
    pub shift: Vec<String>,
    pub window: WindowConfig,
    #[serde(default)]
    pub f0: F0Config,
    #[serde(default)]
    pub scalar_mode: ScalarMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<CubicGenerator>,
}

impl SchemeConfig {
    pub fn from_json(s: &str) -> Result<SchemeConfig> {
        serde_json::from_str(s).map_err(|e| Error::config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Unit-window scheme with one irrational slope (`d = 1`, `k = 2`).
    pub fn planar(alpha: &str, shift: &str) -> SchemeConfig {
        SchemeConfig {
            k: 2,
            d: 1,
            alpha: vec![vec![alpha.into()]],
            shift: vec!["0".into(), shift.into()],
            window: WindowConfig { generators: vec![vec![1]] },
            f0: F0Config::default(),
            scalar_mode: ScalarMode::ExactQuadratic,
            generator: None,
        }
    }
}
