//! The run configuration: one JSON document per run.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use fracsys::energy::{Nonlinearity, PowerParams, Source};
use fracsys::solvers::SolveOptions;
use fracsys::spectral::{Basis, Domain};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainConfig,
    /// Sine modes per axis.
    pub modes: usize,
    /// Nodal points per axis; `2 * modes` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub solver: SolverName,
    pub params: ParamsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<NonlinearityConfig>,
    #[serde(default)]
    pub init: InitKind,
    #[serde(default)]
    pub options: OptionsConfig,
    #[serde(default)]
    pub field_format: FieldFormat,
    /// Not echoed into the report, so moving the output leaves it unchanged.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub dim: usize,
    pub lengths: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverName {
    Direct,
    Picard,
    MountainPass,
    General,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub s: f64,
    pub p: f64,
    /// Required by the power solvers, unused by `general`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    /// `re^r`, `r^q`, `r^<number>` or `polynomial`.
    pub name: String,
    pub theta: f64,
    #[serde(default)]
    pub r0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// `c_0, c_1, ...` of `Σ c_k r^k`, for `polynomial`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    #[default]
    GroundState,
    /// Seeded positive random field.
    Random,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldFormat {
    #[default]
    Csv,
    Binary,
}

impl FieldFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FieldFormat::Csv => "csv",
            FieldFormat::Binary => "bin",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptionsConfig {
    pub max_iters: usize,
    pub grad_tol: f64,
    pub armijo_c: f64,
    pub backtrack: f64,
    pub initial_step: f64,
    pub max_halvings: usize,
    pub seed: u64,
}

impl Default for OptionsConfig {
    fn default() -> Self {
        let o = SolveOptions::<f64>::default();
        Self {
            max_iters: o.max_iters,
            grad_tol: o.grad_tol,
            armijo_c: o.armijo_c,
            backtrack: o.backtrack,
            initial_step: o.initial_step,
            max_halvings: o.max_halvings,
            seed: o.seed,
        }
    }
}

impl OptionsConfig {
    pub fn solve_options(&self) -> SolveOptions<f64> {
        SolveOptions {
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            armijo_c: self.armijo_c,
            backtrack: self.backtrack,
            initial_step: self.initial_step,
            max_halvings: self.max_halvings,
            seed: self.seed,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))
    }

    pub fn basis(&self) -> Result<Arc<Basis<f64>>, Failure> {
        let d = &self.domain;
        if d.lengths.len() != d.dim {
            return Err(config_err(format!(
                "domain.dim = {} but {} lengths given",
                d.dim,
                d.lengths.len()
            )));
        }
        let domain = Domain::new(d.dim, d.lengths.clone()).map_err(|e| config_err(e.to_string()))?;
        let grid = self.grid.unwrap_or(2 * self.modes);
        Basis::new(domain, self.modes, grid).map_err(|e| config_err(e.to_string()))
    }

    pub fn options(&self) -> Result<SolveOptions<f64>, Failure> {
        let o = self.options.solve_options();
        o.validate().map_err(|e| config_err(e.to_string()))?;
        Ok(o)
    }

    /// Power-system exponents with `q` taken from the config.
    pub fn power_params(&self) -> Result<PowerParams<f64>, Failure> {
        let q = self
            .params
            .q
            .ok_or_else(|| config_err("params.q is required by the power solvers"))?;
        self.power_params_with_q(q)
    }

    pub fn power_params_with_q(&self, q: f64) -> Result<PowerParams<f64>, Failure> {
        PowerParams::new(self.domain.dim, self.params.s, self.params.p, q)
            .map_err(|e| config_err(e.to_string()))
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity<f64>, Failure> {
        let nl = self
            .nonlinearity
            .as_ref()
            .ok_or_else(|| config_err("the general solver needs a nonlinearity"))?;
        let source = match nl.name.as_str() {
            "re^r" => Source::ExpLinear,
            "r^q" => Source::PositivePower(
                nl.q.ok_or_else(|| config_err("nonlinearity r^q needs a value for q"))?,
            ),
            "polynomial" => Source::Polynomial(
                nl.coefficients
                    .clone()
                    .filter(|c| !c.is_empty())
                    .ok_or_else(|| config_err("polynomial nonlinearity needs coefficients"))?,
            ),
            other => match other.strip_prefix("r^").map(str::parse::<f64>) {
                Some(Ok(q)) if q > 0.0 && q.is_finite() => Source::PositivePower(q),
                _ => return Err(config_err(format!("unknown nonlinearity {other:?}"))),
            },
        };
        if let Source::Polynomial(c) = &source {
            if c.iter().any(|x| !x.is_finite()) {
                return Err(config_err("polynomial coefficients must be finite"));
            }
        }
        Nonlinearity::new(source, nl.theta, nl.r0).map_err(|e| config_err(e.to_string()))
    }

    /// Checks that the fields the chosen solver needs are present and that
    /// nothing is given that it would silently ignore.
    pub fn check_shape(&self) -> Result<(), Failure> {
        match self.solver {
            SolverName::General => {
                if self.params.q.is_some() {
                    return Err(config_err("params.q is not used by the general solver"));
                }
                if self.init != InitKind::GroundState {
                    return Err(config_err("the general solver always starts from the ground state"));
                }
                self.nonlinearity()?;
            }
            _ => {
                if self.nonlinearity.is_some() {
                    return Err(config_err(
                        "nonlinearity is only used by the general solver",
                    ));
                }
            }
        }
        Ok(())
    }
}
