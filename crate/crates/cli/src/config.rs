use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use jordan_kepler::jordan::TripleSpace;
use jordan_kepler::kernel::CoefficientSequence;
use jordan_kepler::partition::Partition;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A coefficient sequence as written in configs and on the command line
/// (`hardy`, `nu:6.5`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoefficientConfig {
    NuRule { nu: f64 },
    Hardy,
    Table { entries: Vec<TableEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub partition: Vec<usize>,
    pub rho: f64,
}

impl CoefficientConfig {
    pub fn sequence(&self) -> CliResult<CoefficientSequence> {
        match self {
            CoefficientConfig::NuRule { nu } => Ok(CoefficientSequence::nu_rule(*nu)),
            CoefficientConfig::Hardy => Ok(CoefficientSequence::hardy()),
            CoefficientConfig::Table { entries } => {
                let mut map = std::collections::HashMap::new();
                for e in entries {
                    let p = Partition::new(e.partition.clone())
                        .map_err(|e| CliError::Config(e.to_string()))?;
                    map.insert(p, e.rho);
                }
                CoefficientSequence::table(map).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }

    pub fn nu(&self) -> Option<f64> {
        match self {
            CoefficientConfig::NuRule { nu } => Some(*nu),
            _ => None,
        }
    }
}

impl fmt::Display for CoefficientConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientConfig::NuRule { nu } => write!(f, "nu:{nu}"),
            CoefficientConfig::Hardy => write!(f, "hardy"),
            CoefficientConfig::Table { entries } => write!(f, "table[{}]", entries.len()),
        }
    }
}

impl FromStr for CoefficientConfig {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("hardy") {
            return Ok(CoefficientConfig::Hardy);
        }
        if let Some(v) = s.strip_prefix("nu:").or_else(|| s.strip_prefix("nu=")) {
            let nu = v
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad nu value in generator `{s}`")))?;
            return Ok(CoefficientConfig::NuRule { nu });
        }
        Err(CliError::Config(format!(
            "unknown coefficient sequence `{s}` (expected `hardy` or `nu:<value>`)"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Points per axis; the scan covers `points²` values of one complex
    /// coordinate of `t`.
    pub points: usize,
    pub min: f64,
    pub max: f64,
    /// Fixed value of the `s` block (times the identity).
    pub s_value: f64,
    pub steps: (f64, f64),
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points: 11,
            min: -0.5,
            max: 0.5,
            s_value: 0.3,
            steps: jordan_kepler::blowup::DEFAULT_STEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub r: usize,
    pub s: usize,
    pub lambda: usize,
    pub coefficients: CoefficientConfig,
    /// Truncation weight `M`; each suite has its own default.
    pub max_weight: Option<usize>,
    pub seed: u64,
    /// Random cases per suite.
    pub cases: usize,
    pub mc_samples: usize,
    /// Ball dimension for the beta-integral suite; overrides `r`, `s`, `λ`
    /// with `1, d, 1` there.
    pub d: Option<usize>,
    /// Per-check tolerance overrides keyed `suite.case`.
    pub tolerances: BTreeMap<String, f64>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub grid: GridConfig,
    /// Generators for `recover`; empty means `coefficients`.
    pub generators: Vec<CoefficientConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r: 2,
            s: 3,
            lambda: 1,
            coefficients: CoefficientConfig::NuRule { nu: 6.0 },
            max_weight: None,
            seed: 0,
            cases: 20,
            mc_samples: 1_000_000,
            d: None,
            tolerances: BTreeMap::new(),
            workers: None,
            output: None,
            grid: GridConfig::default(),
            generators: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn space(&self) -> CliResult<TripleSpace> {
        TripleSpace::new(self.r, self.s, self.lambda).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn ball_space(&self) -> CliResult<Option<TripleSpace>> {
        match self.d {
            None => Ok(None),
            Some(d) => TripleSpace::ball(d)
                .map(Some)
                .map_err(|e| CliError::Config(format!("ball dimension {d}: {e}"))),
        }
    }

    pub fn max_weight_or(&self, default: usize) -> usize {
        self.max_weight.unwrap_or(default)
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn nu(&self) -> CliResult<f64> {
        self.coefficients.nu().ok_or_else(|| {
            CliError::Config("this suite needs a nu-rule coefficient sequence".into())
        })
    }

    /// Check everything that does not depend on the command.
    pub fn validate(&self) -> CliResult<()> {
        let space = self.space()?;
        self.ball_space()?;
        self.coefficients
            .sequence()?
            .validate(&space)
            .map_err(|e| CliError::Config(e.to_string()))?;
        for g in &self.generators {
            g.sequence()?
                .validate(&space)
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        if self.mc_samples == 0 {
            return Err(CliError::Config("mc_samples must be positive".into()));
        }
        if let Some(0) = self.workers {
            return Err(CliError::Config("workers must be positive".into()));
        }
        for (k, v) in &self.tolerances {
            if !(*v >= 0.0) {
                return Err(CliError::Config(format!(
                    "tolerance {k} = {v} is not a nonnegative number"
                )));
            }
        }
        let g = &self.grid;
        if !(g.min <= g.max) || !(g.steps.0 > 0.0 && g.steps.1 > 0.0) || g.steps.0 == g.steps.1 {
            return Err(CliError::Config(
                "grid needs min <= max and two distinct positive steps".into(),
            ));
        }
        Ok(())
    }
}
