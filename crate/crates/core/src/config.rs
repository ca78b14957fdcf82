//! Job configuration: seed, budgets, certificate primes and output format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::hom::IsoSearch;

/// Environment variable naming a default configuration file.
pub const CONFIG_ENV: &str = "QUIVER_FORMS_CONFIG";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobConfig {
    pub seed: u64,
    /// Cap on the product of per-vertex subspace counts in one enumeration.
    pub max_subspace_checks: u128,
    /// Cap on q^(number of matrix entries) for census enumeration.
    pub max_orbit_space: u64,
    /// Random trials in isomorphism searches over infinite fields.
    pub iso_trials: usize,
    /// Exhaustive isomorphism search over finite fields up to q^dim Hom.
    pub iso_enumeration: u128,
    /// Retries for randomized descent constructions.
    pub descent_attempts: usize,
    pub primes: Vec<u32>,
    pub format: OutputFormat,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            seed: 20240917,
            max_subspace_checks: 1_000_000,
            max_orbit_space: 5_000_000,
            iso_trials: 64,
            iso_enumeration: 1 << 20,
            descent_attempts: 64,
            primes: vec![2, 3, 5, 7, 11, 13],
            format: OutputFormat::Json,
        }
    }
}

impl JobConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_subspace_checks == 0
            || self.max_orbit_space == 0
            || self.iso_trials == 0
            || self.iso_enumeration == 0
            || self.descent_attempts == 0
        {
            return Err(Error::Argument("budgets must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: JobConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Explicit path, else the environment variable, else defaults.
    pub fn resolve(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) => Self::load(Path::new(&p)),
                None => Ok(Self::default()),
            },
        }
    }

    pub fn iso_search(&self) -> IsoSearch {
        IsoSearch {
            enumeration_budget: self.iso_enumeration,
            trials: self.iso_trials,
            seed: self.seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        JobConfig { seed, ..self.clone() }
    }
}
