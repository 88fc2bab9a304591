use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::functional::GridSpec;
use crate::functional_entropy::{Quadrature, SLACK_C, SUBDIFF_SAMPLES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Operator,
    Functional,
    Crossbackend,
}

impl SuiteName {
    pub const ALL: [SuiteName; 3] = [SuiteName::Operator, SuiteName::Functional, SuiteName::Crossbackend];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Operator => "operator",
            SuiteName::Functional => "functional",
            SuiteName::Crossbackend => "crossbackend",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}` (expected operator, functional or crossbackend)")))
    }
}

/// Flat suite definition. Every key has a per-suite default, so a config file
/// only lists what it changes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    /// Random instances: matrix pairs, grid pairs, or quadratic pairs for the
    /// extension-principle check, depending on the suite.
    pub trials: usize,
    pub dims: Vec<usize>,
    pub p_values: Vec<f64>,
    pub seed: u64,
    pub cond_cap: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub mean_nodes: usize,
    pub entropy_nodes: usize,
    pub identity_tol: f64,
    pub order_tol: f64,
    pub crossbackend_tol: f64,
    pub slack_c: f64,
    /// Matrix triples for the congruence and `S(A|I)` checks.
    pub special_trials: usize,
    /// Random piecewise-linear functionals for the conjugation checks.
    pub conjugation_trials: usize,
    pub conjugation_n: usize,
    pub points_per_pair: usize,
    pub subdiff_samples: usize,
    /// Quadrature nodes of the functional definitions in the extension check.
    pub extension_nodes: usize,
    /// Scalars `a, b` of the sampled quadratics in the cross-backend table.
    pub cross_values: Vec<f64>,
    /// Half-width of the window `[−r, r]` of the cross-backend sup norm.
    pub cross_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn default_for(suite: SuiteName) -> Self {
        let base = SuiteConfig {
            suite,
            trials: 1000,
            dims: (1..=8).collect(),
            p_values: (1..=9).map(|k| k as f64 / 10.0).collect(),
            seed: 0,
            cond_cap: 100.0,
            x_min: -4.0,
            x_max: 4.0,
            n: 401,
            mean_nodes: 64,
            entropy_nodes: 128,
            identity_tol: 1e-9,
            order_tol: 1e-8,
            crossbackend_tol: 1e-3,
            slack_c: SLACK_C,
            special_trials: 200,
            conjugation_trials: 100,
            conjugation_n: 501,
            points_per_pair: 5,
            subdiff_samples: SUBDIFF_SAMPLES,
            extension_nodes: 256,
            cross_values: vec![0.5, 1.0, 2.0, 4.0],
            cross_radius: 2.0,
            report: None,
        };
        match suite {
            SuiteName::Operator => base,
            SuiteName::Functional => SuiteConfig { trials: 100, ..base },
            SuiteName::Crossbackend => SuiteConfig {
                trials: 20,
                x_min: -10.0,
                x_max: 10.0,
                n: 4001,
                ..base
            },
        }
    }

    /// Parses a flat JSON object. Keys absent from the file keep the defaults
    /// of the file's `suite`, or of `fallback` when the file names none.
    pub fn from_json_str(text: &str, fallback: Option<SuiteName>) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let Value::Object(overrides) = value else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        let suite = match overrides.get("suite") {
            Some(Value::String(s)) => s.parse()?,
            Some(other) => return Err(Error::Config(format!("`suite` must be a string, got {other}"))),
            None => fallback.ok_or_else(|| Error::Config("config names no suite".into()))?,
        };
        let Value::Object(mut merged) = serde_json::to_value(SuiteConfig::default_for(suite)).expect("config serializes")
        else {
            unreachable!("config serializes to an object")
        };
        merge(&mut merged, overrides);
        let config: SuiteConfig =
            serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>, fallback: Option<SuiteName>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SuiteConfig::from_json_str(&text, fallback).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return fail("dims must be a nonempty list of positive integers".into());
        }
        if self.p_values.is_empty() {
            return fail("p_values must not be empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return fail(format!("p = {p} is outside [0, 1]"));
        }
        if self.n < 2 || self.conjugation_n < 2 {
            return fail("grids need n >= 2".into());
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return fail(format!("invalid grid interval [{}, {}]", self.x_min, self.x_max));
        }
        if !(self.cond_cap >= 1.0) {
            return fail("cond_cap must be at least 1".into());
        }
        if self.mean_nodes < 2 || self.entropy_nodes < 2 || self.extension_nodes < 2 {
            return fail("quadrature node counts must be at least 2".into());
        }
        if self.subdiff_samples < 2 {
            return fail("subdiff_samples must be at least 2".into());
        }
        for (name, v) in [
            ("identity_tol", self.identity_tol),
            ("order_tol", self.order_tol),
            ("crossbackend_tol", self.crossbackend_tol),
            ("slack_c", self.slack_c),
            ("cross_radius", self.cross_radius),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return fail(format!("{name} must be a nonnegative number"));
            }
        }
        if self.cross_values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return fail("cross_values must be positive".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.x_min, self.x_max, self.n)
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature {
            mean_nodes: self.mean_nodes,
            entropy_nodes: self.entropy_nodes,
        }
    }
}

fn merge(base: &mut Map<String, Value>, overrides: Map<String, Value>) {
    for (k, v) in overrides {
        base.insert(k, v);
    }
}
