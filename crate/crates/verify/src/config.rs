//! Scenario configuration: JSON schema and validation.

use std::fmt;
use std::str::FromStr;

use halfspin_core::{FieldElement, Rational, Tower, TowerSpec};
use serde::{Deserialize, Serialize};

use crate::serial::{parse_rational, parse_tower_element};

/// Suites in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "clifford")]
    Clifford,
    #[serde(rename = "forms")]
    Forms,
    #[serde(rename = "lie")]
    Lie,
    #[serde(rename = "spin")]
    Spin,
    #[serde(rename = "star")]
    Star,
    #[serde(rename = "L")]
    L,
    #[serde(rename = "rationality")]
    Rationality,
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "weights")]
    Weights,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Clifford,
        Suite::Forms,
        Suite::Lie,
        Suite::Spin,
        Suite::Star,
        Suite::L,
        Suite::Rationality,
        Suite::Real,
        Suite::Weights,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Forms => "forms",
            Suite::Lie => "lie",
            Suite::Spin => "spin",
            Suite::Star => "star",
            Suite::L => "L",
            Suite::Rationality => "rationality",
            Suite::Real => "real",
            Suite::Weights => "weights",
        }
    }

    /// Suites whose checks only make sense for even `n`.
    pub fn needs_even_n(self) -> bool {
        matches!(self, Suite::L | Suite::Rationality | Suite::Weights)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name or `all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSelector {
    All,
    One(Suite),
}

impl FromStr for SuiteSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(SuiteSelector::All);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(SuiteSelector::One)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for SuiteSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteSelector::All => f.write_str("all"),
            SuiteSelector::One(s) => s.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerConfig {
    /// Rational `m1`; absent for `E0 = ℚ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<String>,
    /// `m2 ∈ E0` as coordinates in `{1, √m1}`.
    pub m2: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermutationConfig {
    pub a: usize,
    pub r: usize,
}

/// On-disk scenario description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub tower: TowerConfig,
    pub n: usize,
    pub k: usize,
    /// `δ ∈ E0` as coordinates in `{1, √m1, √m2, √m1√m2}` (trailing zeros
    /// may be omitted).
    pub delta: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<PermutationConfig>,
    #[serde(default = "default_suites")]
    pub suites: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_suites() -> Vec<String> {
    vec!["all".into()]
}

fn default_trials() -> usize {
    100
}

/// Validation failure naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// A validated scenario ready to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub tower: Tower,
    pub n: usize,
    pub k: usize,
    pub delta: FieldElement,
    pub permutation: Option<(usize, usize)>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub trials: usize,
}

impl Scenario {
    /// The configured `(a, r)`, or the first admissible one (`a + s` even,
    /// `s = n − k − r`) in lexicographic order.
    pub fn permutation_or_default(&self) -> Option<(usize, usize)> {
        self.permutation.or_else(|| {
            (0..=self.k)
                .flat_map(|a| (0..=self.n - self.k).map(move |r| (a, r)))
                .find(|&(a, r)| (a + self.n - self.k - r) % 2 == 0)
        })
    }
}

/// Largest `n` accepted from a config.
pub const MAX_N: usize = 8;

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .filter(|_| msg.contains("field"))
            .unwrap_or("<root>")
            .to_string();
        ConfigError::new(field, msg)
    })
}

fn parse_rationals(field: &str, coords: &[String]) -> Result<Vec<Rational>, ConfigError> {
    coords
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| ConfigError::new(format!("{field}[{i}]"), e)))
        .collect()
}

/// Resolves suite selectors from the config, intersected with the command
/// line filter when one is given.
pub fn select_suites(config: &[String], filter: &[SuiteSelector]) -> Result<Vec<Suite>, ConfigError> {
    let expand = |sel: &[SuiteSelector]| -> Vec<Suite> {
        let mut v: Vec<Suite> = sel
            .iter()
            .flat_map(|s| match s {
                SuiteSelector::All => Suite::ALL.to_vec(),
                SuiteSelector::One(x) => vec![*x],
            })
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let mut from_config = Vec::new();
    for (i, s) in config.iter().enumerate() {
        from_config.push(s.parse().map_err(|e| ConfigError::new(format!("suites[{i}]"), e))?);
    }
    let mut chosen = expand(&from_config);
    if !filter.is_empty() {
        let keep = expand(filter);
        chosen.retain(|s| keep.contains(s));
    }
    Ok(chosen)
}

impl ScenarioConfig {
    pub fn validate(&self, filter: &[SuiteSelector]) -> Result<Scenario, ConfigError> {
        let m1 = match &self.tower.m1 {
            Some(s) => Some(parse_rational(s).map_err(|e| ConfigError::new("tower.m1", e))?),
            None => None,
        };
        let m2c = parse_rationals("tower.m2", &self.tower.m2)?;
        let m2 = match m2c.as_slice() {
            [p] => [p.clone(), Rational::from_integer(0.into())],
            [p, q] => [p.clone(), q.clone()],
            _ => return Err(ConfigError::new("tower.m2", "expected 1 or 2 coordinates")),
        };
        let tower = Tower::new(TowerSpec { m1, m2 }).map_err(|e| ConfigError::new("tower", e.to_string()))?;

        let suites = select_suites(&self.suites, filter)?;
        if self.n == 0 || self.n > MAX_N {
            return Err(ConfigError::new("n", format!("n must satisfy 1 <= n <= {MAX_N}")));
        }
        if self.n % 2 != 0 {
            if let Some(s) = suites.iter().find(|s| s.needs_even_n()) {
                return Err(ConfigError::new("n", format!("n must be even (required by suite {s})")));
            }
        }
        if self.k == 0 || self.k > self.n {
            return Err(ConfigError::new("k", "k must satisfy 1 <= k <= n"));
        }
        let delta = parse_tower_element(&tower, &self.delta).map_err(|e| ConfigError::new("delta", e))?;
        if delta.is_zero() {
            return Err(ConfigError::new("delta", "delta must be nonzero"));
        }
        if !delta.is_base() {
            return Err(ConfigError::new("delta", "delta must lie in E0"));
        }
        let permutation = match self.permutation {
            Some(p) => {
                if p.a > self.k {
                    return Err(ConfigError::new("permutation.a", "need a <= k"));
                }
                if p.r > self.n - self.k {
                    return Err(ConfigError::new("permutation.r", "need r <= n - k"));
                }
                if (p.a + self.n - self.k - p.r) % 2 != 0 {
                    return Err(ConfigError::new("permutation", "a + s must be even (s = n - k - r)"));
                }
                Some((p.a, p.r))
            }
            None => None,
        };
        if self.trials == 0 {
            return Err(ConfigError::new("trials", "trials must be positive"));
        }
        Ok(Scenario {
            tower,
            n: self.n,
            k: self.k,
            delta,
            permutation,
            suites,
            seed: self.seed,
            trials: self.trials,
        })
    }
}
