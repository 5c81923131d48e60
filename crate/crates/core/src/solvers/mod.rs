//! Solution procedures for the coupled system.
//!
//! Every descent solver works in the stage variable `v` (see
//! [`crate::energy::phi_conjugate`]): `u = 𝒜⁻ˢP[|v|^{p−1}v]` and the step
//! direction is the fixed-point residual `𝒜⁻ˢP[f(u)] − v`, which for `p = 1` is
//! the `𝒜⁻²ˢ`-preconditioned gradient of the reduced energy. Convergence is
//! declared a posteriori from the residuals of both equations in the
//! `Θ⁻ˢ` dual norm.

mod descent;
mod picard;

use std::io::Write;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

pub use descent::{minimize_direct, mountain_pass, mountain_pass_from, solve_general};
pub use picard::picard_sublinear;

use crate::energy::{HyperbolaClass, PowerParams, Reaction};
use crate::error::{Error, Result};
use crate::scalar::{pos_pow, signed_pow, Real};
use crate::spectral::{Basis, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub max_iters: usize,
    /// Target for both dual residuals.
    pub grad_tol: T,
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo_c: T,
    /// Step reduction factor per backtrack.
    pub backtrack: T,
    pub initial_step: T,
    /// Backtracks allowed per iteration before declaring stagnation.
    pub max_halvings: usize,
    pub seed: u64,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: T::lit(1e-8),
            armijo_c: T::lit(1e-4),
            backtrack: T::lit(0.5),
            initial_step: T::one(),
            max_halvings: 60,
            seed: 0,
        }
    }
}

impl<T: Real> SolveOptions<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: T| Err(Error::Parameter(format!("{what} = {v} out of range")));
        if self.max_iters == 0 {
            return Err(Error::Parameter("max_iters must be at least 1".into()));
        }
        if !(self.grad_tol > T::zero() && self.grad_tol.is_finite()) {
            return bad("grad_tol", self.grad_tol);
        }
        if !(self.armijo_c > T::zero() && self.armijo_c < T::one()) {
            return bad("armijo_c", self.armijo_c);
        }
        if !(self.backtrack > T::zero() && self.backtrack < T::one()) {
            return bad("backtrack", self.backtrack);
        }
        if !(self.initial_step > T::zero() && self.initial_step.is_finite()) {
            return bad("initial_step", self.initial_step);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Direct,
    Picard,
    MountainPass,
    General,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Direct => "direct",
            SolverKind::Picard => "picard",
            SolverKind::MountainPass => "mountain-pass",
            SolverKind::General => "general",
        })
    }
}

/// One row of the iteration trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<T> {
    pub iter: usize,
    pub energy: T,
    /// Larger of the two dual residuals at the start of the iteration.
    pub residual: T,
    /// Accepted step length (Picard: `Θ²ˢ` size of the update).
    pub step: T,
    /// Largest negative nodal value removed by positive-part clamping.
    pub clamp: T,
}

#[derive(Debug, Clone)]
pub struct SolverReport<T: Real> {
    pub solver: SolverKind,
    pub u: SpectralField<T>,
    pub v: SpectralField<T>,
    /// Stage energy `Ψ(v)`; equals the reduced energy `Φ(u)` when `p = 1`.
    pub energy: T,
    pub residual_u: T,
    pub residual_v: T,
    pub iterations: usize,
    pub trace: Vec<TraceRow<T>>,
    pub converged: bool,
    /// True when the start (or the iterate) is the trivial solution.
    pub degenerate: bool,
    pub classification: Option<HyperbolaClass<T>>,
    pub notes: Vec<String>,
}

/// Scalar part of a [`SolverReport`], as written to `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub solver: SolverKind,
    pub converged: bool,
    pub degenerate: bool,
    pub iterations: usize,
    pub energy: f64,
    pub residual_u: f64,
    pub residual_v: f64,
    pub u_theta2s_norm: f64,
    pub u_sup_norm: f64,
    pub u_min: f64,
    pub regime: Option<String>,
    pub hyperbola_value: Option<f64>,
    pub threshold: Option<f64>,
    pub notes: Vec<String>,
}

impl<T: Real> SolverReport<T> {
    pub fn residual(&self) -> T {
        self.residual_u.max(self.residual_v)
    }

    pub fn summary(&self, s: T) -> ReportSummary {
        let nodal = self.u.to_nodal();
        ReportSummary {
            solver: self.solver,
            converged: self.converged,
            degenerate: self.degenerate,
            iterations: self.iterations,
            energy: self.energy.as_f64(),
            residual_u: self.residual_u.as_f64(),
            residual_v: self.residual_v.as_f64(),
            u_theta2s_norm: self.u.theta_norm(s + s).as_f64(),
            u_sup_norm: nodal.sup_norm().as_f64(),
            u_min: nodal.min().as_f64(),
            regime: self.classification.as_ref().map(|c| c.regime.to_string()),
            hyperbola_value: self.classification.as_ref().map(|c| c.hyperbola_value.as_f64()),
            threshold: self.classification.as_ref().map(|c| c.threshold.as_f64()),
            notes: self.notes.clone(),
        }
    }

    /// Trace as CSV with header `iter,energy,residual,step,clamp`.
    pub fn write_trace_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["iter", "energy", "residual", "step", "clamp"])?;
        for r in &self.trace {
            out.write_record([
                r.iter.to_string(),
                r.energy.as_f64().to_string(),
                r.residual.as_f64().to_string(),
                r.step.as_f64().to_string(),
                r.clamp.as_f64().to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `v = 𝒜⁻ˢP[(u⁺)^q]`, defined for every `u`.
pub fn recover_v<T: Real>(u: &SpectralField<T>, params: &PowerParams<T>) -> SpectralField<T> {
    let q = params.q;
    u.to_nodal()
        .map(|x| pos_pow(x, q))
        .to_spectral()
        .invert_power(params.s)
}

/// `v = P[|𝒜ˢu|^{1/p−1}𝒜ˢu]`, the route through the first equation.
pub fn recover_v_direct<T: Real>(u: &SpectralField<T>, params: &PowerParams<T>) -> SpectralField<T> {
    let e = T::one() / params.p;
    u.apply_power(params.s)
        .to_nodal()
        .map(|x| signed_pow(x, e))
        .to_spectral()
}

/// Positive start for multi-start runs: `|Gaussian|` coefficients smoothed by
/// `𝒜⁻ˢ`, then the nodal positive part projected back.
pub fn random_positive_start<T: Real>(basis: &Arc<Basis<T>>, s: T, seed: u64) -> SpectralField<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l1 = basis.first_eigenvalue();
    let coeffs: Vec<T> = basis
        .eigenvalues()
        .iter()
        .map(|&l| {
            let g: f64 = StandardNormal.sample(&mut rng);
            T::lit(g.abs()) * (l / l1).powf(-s)
        })
        .collect();
    let smooth = SpectralField::new(basis.clone(), coeffs).expect("finite draws");
    smooth.to_nodal().map(|x| x.max(T::zero())).to_spectral()
}

/// Dual residuals of `𝒜ˢu = g(v)`, `𝒜ˢv = f(u)` where `g(v) = (v⁺)^p` when
/// `positive_part` is set and `|v|^{p−1}v` otherwise.
pub(crate) fn residuals<T: Real, R: Reaction<T>>(
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    p: T,
    s: T,
    src: &R,
    positive_part: bool,
) -> Result<(T, T)> {
    if !u.basis().same_as(v.basis()) {
        return Err(Error::BasisMismatch("u and v use different bases".into()));
    }
    let gv = v
        .to_nodal()
        .map(|x| {
            if positive_part {
                pos_pow(x, p)
            } else {
                signed_pow(x, p)
            }
        })
        .to_spectral();
    let fu = u.to_nodal().map(|x| src.value(x)).to_spectral();
    let ru = (&u.apply_power(s) - &gv).dual_norm(s);
    let rv = (&v.apply_power(s) - &fu).dual_norm(s);
    Ok((ru, rv))
}

pub(crate) fn check_basis<T: Real>(u: &SpectralField<T>, params: &PowerParams<T>) -> Result<()> {
    if u.basis().dim() != params.n {
        return Err(Error::BasisMismatch(format!(
            "field lives in dimension {}, parameters say n = {}",
            u.basis().dim(),
            params.n
        )));
    }
    Ok(())
}
