//! Problem spec files.
//!
//! ```toml
//! variables = ["x", "y", "z"]
//! polynomial = "x^2*y^2 + x*z^3 + y*z^3"
//!
//! [[singular_points]]
//! point = ["1", "0", "0"]
//! chart = "x"
//! weights = ["1/2", "1/3"]
//!
//! [family]
//! direction = "x*y*z"
//! samples = ["0", "1", "-1", "2"]
//!
//! [policy]
//! window = 2
//! max_power = 20
//! min_target_degree = 12
//! ```

use std::collections::HashSet;
use std::path::Path;

use brieskorn_core::brieskorn::{Hypersurface, StabilizationPolicy};
use brieskorn_core::families::{default_samples, Family};
use brieskorn_core::gradedpoly::{parse_poly, parse_rational};
use brieskorn_core::singularities::{build_chart, WeightedChart};
use brieskorn_core::{Poly, Rational, WeightVector};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub variables: Vec<String>,
    pub polynomial: String,
    #[serde(default)]
    pub singular_points: Vec<SingularPointSpec>,
    pub family: Option<FamilySpec>,
    pub policy: Option<PolicySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPointSpec {
    pub point: Vec<String>,
    /// Variable set to 1; defaults to the first nonzero coordinate.
    pub chart: Option<String>,
    pub weights: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    /// `g` in the pencil `f + s g`.
    pub direction: String,
    pub samples: Option<Vec<String>>,
    /// Base point of the connection matrix, default `0`.
    pub s0: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub window: Option<usize>,
    pub max_power: Option<u32>,
    pub min_target_degree: Option<i64>,
}

impl ProblemSpec {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("spec file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// A validated problem.
pub struct Problem {
    pub spec: ProblemSpec,
    pub hypersurface: Hypersurface,
    pub charts: Vec<WeightedChart>,
    pub family: Option<Family>,
    pub samples: Vec<Rational>,
    pub s0: Rational,
    pub policy: StabilizationPolicy,
}

fn rationals(what: &str, items: &[String]) -> Result<Vec<Rational>, CliError> {
    items
        .iter()
        .map(|s| parse_rational(s).map_err(|e| CliError::Input(format!("{what}: {e}"))))
        .collect()
}

fn poly(what: &str, text: &str, vars: &[String]) -> Result<Poly, CliError> {
    parse_poly(text, vars).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

/// Command-line overrides applied on top of the spec file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub samples: Option<Vec<String>>,
    pub window: Option<usize>,
    pub max_power: Option<u32>,
}

impl Problem {
    pub fn new(spec: ProblemSpec, overrides: &Overrides) -> Result<Self, CliError> {
        let vars = &spec.variables;
        let distinct: HashSet<&String> = vars.iter().collect();
        if distinct.len() != vars.len() {
            return Err(CliError::Input("variables must be distinct".into()));
        }
        if vars.len() < 3 {
            return Err(CliError::Input(format!(
                "need at least 3 variables (n >= 2), got {}",
                vars.len()
            )));
        }
        let f = poly("polynomial", &spec.polynomial, vars)?;
        let hypersurface =
            Hypersurface::new(f).map_err(|e| CliError::Input(format!("polynomial: {e}")))?;
        let f = hypersurface.poly();

        let mut charts = Vec::new();
        for (i, sp) in spec.singular_points.iter().enumerate() {
            let what = format!("singular_points[{i}]");
            let point = rationals(&what, &sp.point)?;
            if point.len() != vars.len() {
                return Err(CliError::Input(format!(
                    "{what}: point has {} coordinates, expected {}",
                    point.len(),
                    vars.len()
                )));
            }
            let chart = match &sp.chart {
                Some(name) => vars.iter().position(|v| v == name).ok_or_else(|| {
                    CliError::Input(format!("{what}: unknown chart variable {name}"))
                })?,
                None => point
                    .iter()
                    .position(|c| c != &Rational::from_integer(0.into()))
                    .ok_or_else(|| CliError::Input(format!("{what}: point is zero")))?,
            };
            let weights = WeightVector::new(rationals(&what, &sp.weights)?)
                .ok_or_else(|| CliError::Input(format!("{what}: weights must be positive")))?;
            let chart = build_chart(f, &point, chart, weights)
                .map_err(|e| CliError::Input(format!("{what}: {e}")))?;
            charts.push(chart);
        }

        let sample_text = overrides
            .samples
            .clone()
            .or_else(|| spec.family.as_ref().and_then(|fam| fam.samples.clone()));
        let samples = match sample_text {
            Some(s) => rationals("samples", &s)?,
            None => default_samples(),
        };
        let (family, s0) = match &spec.family {
            Some(fam) => {
                let g = poly("family.direction", &fam.direction, vars)?;
                let family = Family::pencil(f.clone(), g)
                    .map_err(|e| CliError::Input(format!("family: {e}")))?;
                let s0 = match &fam.s0 {
                    Some(s) => rationals("family.s0", std::slice::from_ref(s))?.remove(0),
                    None => Rational::from_integer(0.into()),
                };
                (Some(family), s0)
            }
            None => (None, Rational::from_integer(0.into())),
        };

        let mut policy = StabilizationPolicy::default_for(hypersurface.n(), hypersurface.degree());
        let ps = spec.policy.unwrap_or_default();
        if let Some(w) = overrides.window.or(ps.window) {
            policy.window = w;
        }
        if let Some(m) = overrides.max_power.or(ps.max_power) {
            policy.max_power = m;
        }
        if let Some(t) = ps.min_target_degree {
            policy.min_target_degree = t;
        }
        policy
            .validate()
            .map_err(|e| CliError::Input(format!("policy: {e}")))?;

        Ok(Problem {
            spec,
            hypersurface,
            charts,
            family,
            samples,
            s0,
            policy,
        })
    }
}
