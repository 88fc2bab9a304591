//! Machine-readable outcome of one check on one instance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::functional::{GridFunctional, GridSpec};
use crate::matrix::{Matrix, PDMatrix};
use crate::weight::Weight;

/// Stable identifiers of every check, used as report keys and for replay.
pub mod checks {
    pub const MEAN_SYMMETRY: &str = "mean_symmetry";
    pub const AGH: &str = "agh";
    pub const EQP_IDENTITY: &str = "eqp_identity";
    pub const CONGRUENCE: &str = "congruence";
    pub const ENTROPY_AT_IDENTITY: &str = "entropy_at_identity";
    pub const ENTROPY_BOUNDS: &str = "entropy_bounds";
    pub const COROLLARY42: &str = "corollary42";
    pub const FURUTA_SKEW: &str = "furuta_skew";
    pub const GEOMETRIC_QUADRATURE: &str = "geometric_quadrature";
    pub const ENTROPY_QUADRATURE: &str = "entropy_quadrature";
    pub const JACOBI_WEIGHT_SUM: &str = "jacobi_weight_sum";
    pub const SCALAR_GOLDEN: &str = "scalar_golden";
    pub const CONJUGATE_EQUIVALENCE: &str = "conjugate_equivalence";
    pub const BICONJUGATE: &str = "biconjugate";
    pub const FENCHEL_YOUNG: &str = "fenchel_young";
    pub const FUNC_SYMMETRY: &str = "func_symmetry";
    pub const EQ25: &str = "eq25";
    pub const THEOREM31: &str = "theorem31";
    pub const PROP31: &str = "prop31";
    pub const THEOREM41: &str = "theorem41";
    pub const PROP41: &str = "prop41";
    pub const COROLLARY41: &str = "corollary41";
    pub const EXTENSION_PRINCIPLE: &str = "extension_principle";
    pub const CROSS_BACKEND: &str = "cross_backend";
    pub const FURUTA_HALVES: &str = "furuta_halves";
    pub const FURUTA_HALF_WEIGHT: &str = "furuta_half_weight";
    pub const CONVERGENCE: &str = "convergence";
}

/// A named margin; it passes iff `value ≥ −tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Margin {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Margin {
            name: name.into(),
            value,
            tolerance,
        }
    }

    /// Margin for an identity: the deviation must not exceed `tolerance`.
    pub fn deviation(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Margin::new(name, -deviation, tolerance)
    }

    pub fn passes(&self) -> bool {
        self.value >= -self.tolerance
    }

    /// `value + tolerance`: how far from failing, in absolute units.
    pub fn headroom(&self) -> f64 {
        self.value + self.tolerance
    }
}

/// Which instance a record was produced on.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Inputs of a check, serialized so a failing instance can be re-run alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessInputs {
    Matrices {
        a: Matrix,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<Matrix>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t: Option<Matrix>,
    },
    Grids {
        f: GridFunctional,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        g: Option<GridFunctional>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_point: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convex: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: WitnessInputs,
    #[serde(default)]
    pub params: CheckParams,
}

impl Witness {
    pub fn matrices(a: &PDMatrix, b: &PDMatrix, t: Option<&Matrix>) -> Self {
        Witness {
            inputs: WitnessInputs::Matrices {
                a: a.matrix().clone(),
                b: Some(b.matrix().clone()),
                t: t.cloned(),
            },
            params: CheckParams::default(),
        }
    }

    pub fn single_matrix(a: &PDMatrix) -> Self {
        Witness {
            inputs: WitnessInputs::Matrices {
                a: a.matrix().clone(),
                b: None,
                t: None,
            },
            params: CheckParams::default(),
        }
    }

    pub fn grids(f: &GridFunctional, g: Option<&GridFunctional>) -> Self {
        Witness {
            inputs: WitnessInputs::Grids {
                f: f.clone(),
                g: g.cloned(),
            },
            params: CheckParams::default(),
        }
    }

    pub fn with_p(mut self, p: Weight) -> Self {
        self.params.p = Some(p.value());
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.params.tol = Some(tol);
        self
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.params.index = Some(index);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.params.samples = Some(samples);
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.params.nodes = Some(nodes);
        self
    }

    pub fn with_entropy_nodes(mut self, nodes: usize) -> Self {
        self.params.entropy_nodes = Some(nodes);
        self
    }

    pub fn with_slack_c(mut self, c: f64) -> Self {
        self.params.slack_c = Some(c);
        self
    }

    pub fn with_dual_point(mut self, s: f64) -> Self {
        self.params.dual_point = Some(s);
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.params.radius = Some(r);
        self
    }

    pub fn with_convex(mut self, convex: bool) -> Self {
        self.params.convex = Some(convex);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub instance: Instance,
    pub margins: Vec<Margin>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Reported quantities that are not asserted.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationRecord {
    /// `pass` is derived from the margins; a record with no margins passes
    /// vacuously.
    pub fn new(check: &str, instance: Instance, margins: Vec<Margin>) -> Self {
        let pass = margins.iter().all(Margin::passes);
        VerificationRecord {
            check: check.to_string(),
            instance,
            margins,
            pass,
            witness: None,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_metric(mut self, name: impl Into<String>, value: f64) -> Self {
        self.metrics.insert(name.into(), value);
        self
    }

    pub fn with_trial(mut self, seed: u64, trial: u64) -> Self {
        self.instance.seed = Some(seed);
        self.instance.trial = Some(trial);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.instance.label = Some(label.into());
        self
    }

    pub fn margin(&self, name: &str) -> Option<&Margin> {
        self.margins.iter().find(|m| m.name == name)
    }

    /// The margin closest to failing.
    pub fn worst_margin(&self) -> Option<&Margin> {
        self.margins
            .iter()
            .min_by(|a, b| a.headroom().total_cmp(&b.headroom()))
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let worst = self
            .worst_margin()
            .map(|m| format!("{} = {:.3e} (tol {:.1e})", m.name, m.value, m.tolerance))
            .unwrap_or_else(|| "no margins".to_string());
        format!(
            "[{}] {} :: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            worst
        )
    }
}
