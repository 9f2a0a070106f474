use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use reducible_car::modes::{build_lattice, LatticeSpec};
use reducible_car::oscillator::{ProfileShape, MAX_ORDER, SECTOR_MAX_N};
use reducible_car::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::checks::{self, SUITES};

/// Everything a run depends on. Missing fields take the values of
/// [`RunConfig::default`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeSpec,
    /// Oscillator counts, strictly ascending.
    pub n_list: Vec<usize>,
    /// Number of annihilators (and of creators) in the large-N suite.
    pub order: usize,
    pub profile: ProfileShape,
    pub e0: f64,
    /// Per-check tolerance overrides keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
    pub suites: Vec<String>,
    pub seed: u64,
    /// Draws per randomized check.
    pub samples: usize,
    /// Largest explicit N-oscillator dimension `(16M)^N` used by checks that
    /// build full tensor-product operators.
    pub explicit_max_dim: usize,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            lattice: LatticeSpec::rapidity(1.0, 2, 0.4),
            n_list: vec![2, 4, 8, 16],
            order: 2,
            profile: ProfileShape::Gaussian { center: 0.0, width: 1.0 },
            e0: 1.0,
            tolerances: BTreeMap::new(),
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            seed: 0,
            samples: 50,
            explicit_max_dim: 1 << 14,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        build_lattice(&self.lattice)?;
        if self.n_list.is_empty() {
            return Err(Error::Config("n_list is empty".into()));
        }
        if self.n_list[0] == 0 || *self.n_list.last().unwrap() > SECTOR_MAX_N {
            return Err(Error::Config(format!("n_list entries must lie in 1..={SECTOR_MAX_N}")));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n_list must be strictly ascending".into()));
        }
        if self.order == 0 || self.order > MAX_ORDER {
            return Err(Error::Config(format!("order must lie in 1..={MAX_ORDER}")));
        }
        if !self.e0.is_finite() {
            return Err(Error::Config("e0 must be finite".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        for (id, tol) in &self.tolerances {
            if checks::lookup(id).is_none() {
                return Err(Error::Config(format!("unknown check id in tolerances: {id}")));
            }
            if !(*tol > 0.0) || !tol.is_finite() {
                return Err(Error::Config(format!("tolerance for {id} must be positive")));
            }
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(Error::Config(format!("unknown suite {s:?}; known: {}", SUITES.join(", "))));
            }
        }
        Ok(())
    }

    /// Tolerance for `id`, with any override applied.
    pub fn tolerance(&self, id: &str) -> f64 {
        self.tolerances
            .get(id)
            .copied()
            .or_else(|| checks::lookup(id).map(|c| c.tolerance))
            .unwrap_or(0.0)
    }

    /// Selected suites in execution order.
    pub fn ordered_suites(&self) -> Vec<&'static str> {
        SUITES.iter().copied().filter(|s| self.suites.iter().any(|x| x == s)).collect()
    }
}
