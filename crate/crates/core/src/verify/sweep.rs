use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::energy::{classify, PowerParams, Regime};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solvers::{
    minimize_direct, mountain_pass, picard_sublinear, random_positive_start, SolveOptions,
    SolverKind, SolverReport,
};
use crate::spectral::{Basis, SpectralField};

/// Spread below which the multi-start runs count as one solution.
pub const UNIQUENESS_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct UniqueRun {
    pub seed: u64,
    pub solver: SolverKind,
    pub converged: bool,
    pub iterations: usize,
    pub energy: f64,
    pub residual: f64,
    pub min_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub runs: Vec<UniqueRun>,
    /// Largest pairwise `Θ²ˢ` distance among converged runs.
    pub spread: f64,
    pub passed: bool,
    /// Some run did not converge.
    pub inconclusive: bool,
    /// A single start cannot witness uniqueness.
    pub weak_evidence: bool,
    #[serde(skip)]
    pub solutions: Vec<Vec<f64>>,
}

impl UniquenessReport {
    pub const HEADER: [&'static str; 7] = [
        "seed",
        "solver",
        "converged",
        "iterations",
        "energy",
        "residual",
        "min_value",
    ];

    /// One row per run, in seed order with the direct run first.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(Self::HEADER)?;
        for r in &self.runs {
            out.write_record([
                r.seed.to_string(),
                r.solver.to_string(),
                r.converged.to_string(),
                r.iterations.to_string(),
                r.energy.to_string(),
                r.residual.to_string(),
                r.min_value.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn refuse_unless_sublinear<T: Real>(params: &PowerParams<T>) -> Result<()> {
    if params.pq() < T::one() {
        return Ok(());
    }
    Err(Error::Refused {
        reason: "uniqueness harness needs pq < 1".into(),
        violations: vec![format!("pq = {}", params.pq())],
    })
}

/// Runs direct minimization and Picard iteration from `k_starts` seeded
/// positive starts (seeds `opts.seed + i`) and measures how far apart the
/// limits are.
pub fn uniqueness_harness<T: Real>(
    basis: &Arc<Basis<T>>,
    params: &PowerParams<T>,
    k_starts: usize,
    opts: &SolveOptions<T>,
) -> Result<UniquenessReport> {
    let seeds: Vec<u64> = (0..k_starts as u64).map(|i| opts.seed + i).collect();
    uniqueness_harness_seeds(basis, params, &seeds, opts)
}

/// [`uniqueness_harness`] with an explicit list of start seeds.
pub fn uniqueness_harness_seeds<T: Real>(
    basis: &Arc<Basis<T>>,
    params: &PowerParams<T>,
    seeds: &[u64],
    opts: &SolveOptions<T>,
) -> Result<UniquenessReport> {
    refuse_unless_sublinear(params)?;
    opts.validate()?;
    let k_starts = seeds.len();
    let jobs: Vec<(u64, SolverKind)> = seeds
        .iter()
        .flat_map(|&seed| [(seed, SolverKind::Direct), (seed, SolverKind::Picard)])
        .collect();
    let reports: Vec<(u64, SolverReport<T>)> = jobs
        .par_iter()
        .map(|&(seed, kind)| {
            let init = random_positive_start(basis, params.s, seed);
            let rep = match kind {
                SolverKind::Direct => minimize_direct(params, &init, opts),
                _ => picard_sublinear(params, &init, opts),
            }?;
            Ok((seed, rep))
        })
        .collect::<Result<_>>()?;

    let two_s = params.s + params.s;
    let good: Vec<&SpectralField<T>> = reports
        .iter()
        .filter(|(_, r)| r.converged)
        .map(|(_, r)| &r.u)
        .collect();
    let mut spread = T::zero();
    for (i, a) in good.iter().enumerate() {
        for b in &good[i + 1..] {
            spread = spread.max((*a - *b).theta_norm(two_s));
        }
    }
    let inconclusive = good.len() != reports.len();
    let spread = spread.as_f64();
    Ok(UniquenessReport {
        runs: reports
            .iter()
            .map(|(seed, r)| UniqueRun {
                seed: *seed,
                solver: r.solver,
                converged: r.converged,
                iterations: r.iterations,
                energy: r.energy.as_f64(),
                residual: r.residual().as_f64(),
                min_value: r.u.to_nodal().min().as_f64(),
            })
            .collect(),
        spread,
        passed: !inconclusive && spread <= UNIQUENESS_TOL,
        inconclusive,
        weak_evidence: k_starts <= 1,
        solutions: reports
            .iter()
            .map(|(_, r)| r.u.coeffs().iter().map(|c| c.as_f64()).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub q: f64,
    pub energy: f64,
    pub sup_norm: f64,
    pub theta2s_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub const HEADER: [&'static str; 6] =
        ["q", "energy", "sup_norm", "theta2s_norm", "iterations", "converged"];

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    /// Observation only: the sup norm does not decrease along the rows.
    pub fn sup_nondecreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].sup_norm >= w[0].sup_norm)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(Self::HEADER)?;
        for r in &self.rows {
            out.write_record([
                r.q.to_string(),
                r.energy.to_string(),
                r.sup_norm.to_string(),
                r.theta2s_norm.to_string(),
                r.iterations.to_string(),
                r.converged.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Runs the mountain pass for each `q` with the other exponents of `base`.
/// Every `q` is classified before any run starts.
pub fn critical_sweep<T: Real>(
    basis: &Arc<Basis<T>>,
    base: &PowerParams<T>,
    q_values: &[T],
    opts: &SolveOptions<T>,
) -> Result<SweepTable> {
    let mut params = Vec::with_capacity(q_values.len());
    let mut violations = Vec::new();
    for &q in q_values {
        match PowerParams::new(base.n, base.s, base.p, q) {
            Ok(pr) => {
                let c = classify(&pr);
                if c.regime == Regime::SuperlinearSubcritical {
                    params.push(pr);
                } else {
                    violations.push(format!(
                        "q = {q}: {} (1/(p+1)+1/(q+1) = {} vs (n-2s)/n = {})",
                        c.regime, c.hyperbola_value, c.threshold
                    ));
                }
            }
            Err(e) => violations.push(format!("q = {q}: {e}")),
        }
    }
    if !violations.is_empty() {
        return Err(Error::Refused {
            reason: "sweep contains exponents outside the superlinear subcritical range".into(),
            violations,
        });
    }
    let two_s = base.s + base.s;
    let rows = params
        .par_iter()
        .map(|pr| {
            let r = mountain_pass(basis, pr, opts)?;
            Ok(SweepRow {
                q: pr.q.as_f64(),
                energy: r.energy.as_f64(),
                sup_norm: r.u.to_nodal().sup_norm().as_f64(),
                theta2s_norm: r.u.theta_norm(two_s).as_f64(),
                iterations: r.iterations,
                converged: r.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}
