use super::{check_basis, residuals, SolveOptions, SolverKind, SolverReport, TraceRow};
use crate::energy::{phi_conjugate, PowerParams, Source};
use crate::error::{Error, Result};
use crate::scalar::{pos_pow, Real};
use crate::spectral::SpectralField;

/// `𝒜⁻ˢP[(w⁺)^e]` and the largest negative nodal value of `w`.
fn green_stage<T: Real>(w: &SpectralField<T>, e: T, s: T) -> (SpectralField<T>, T) {
    let nodal = w.to_nodal();
    let clamp = (-nodal.min()).max(T::zero());
    (nodal.map(|x| pos_pow(x, e)).to_spectral().invert_power(s), clamp)
}

/// Fixed-point iteration `u ↦ 𝒜⁻ˢ((𝒜⁻ˢ(u⁺)^q)⁺)^p` for `pq < 1`.
///
/// Stops once the `Θ²ˢ` size of the update and both dual residuals are at most
/// `grad_tol` and no clamping was needed in the last sweep. The returned `v`
/// is the inner stage `𝒜⁻ˢP[(u⁺)^q]` of the returned `u`.
pub fn picard_sublinear<T: Real>(
    params: &PowerParams<T>,
    init: &SpectralField<T>,
    opts: &SolveOptions<T>,
) -> Result<SolverReport<T>> {
    opts.validate()?;
    check_basis(init, params)?;
    let class = crate::energy::classify(params);
    if !(params.pq() < T::one()) {
        return Err(Error::Parameter(format!(
            "Picard iteration needs pq < 1, got pq = {}",
            params.pq()
        )));
    }
    let (p, q, s) = (params.p, params.q, params.s);
    let two_s = s + s;
    let src = Source::PositivePower(q);
    let clamp_tol = T::lit(1e-8);

    let mut u = init.clone();
    let mut trace = Vec::new();
    let mut notes = Vec::new();
    let mut converged = false;
    let mut degenerate = false;
    let mut iterations = 0;
    let (v, energy, ru, rv) = loop {
        let (v, clamp_u) = green_stage(&u, q, s);
        let energy = phi_conjugate(&v, &src, p, s)?;
        let (ru, rv) = residuals(&u, &v, p, s, &src, true)?;
        if v.l2_norm() == T::zero() {
            degenerate = true;
            notes.push("iterate has no positive part: stuck at the trivial fixed point".into());
            trace.push(TraceRow {
                iter: iterations,
                energy,
                residual: ru.max(rv),
                step: T::zero(),
                clamp: clamp_u,
            });
            break (v, energy, ru, rv);
        }
        let (next, clamp_v) = green_stage(&v, p, s);
        let step = (&next - &u).theta_norm(two_s);
        let clamp = clamp_u.max(clamp_v);
        trace.push(TraceRow {
            iter: iterations,
            energy,
            residual: ru.max(rv),
            step,
            clamp,
        });
        let settled = ru.max(rv) <= opts.grad_tol && clamp <= clamp_tol;
        if settled && step <= opts.grad_tol {
            converged = true;
            break (v, energy, ru, rv);
        }
        if iterations == opts.max_iters {
            notes.push(format!("no convergence within {} sweeps", opts.max_iters));
            break (v, energy, ru, rv);
        }
        u = next;
        iterations += 1;
    };
    if converged {
        if let Some(last) = trace.last() {
            if last.clamp > T::zero() {
                notes.push(format!("final clamp magnitude {:e}", last.clamp));
            }
        }
    }

    Ok(SolverReport {
        solver: SolverKind::Picard,
        u,
        v,
        energy,
        residual_u: ru,
        residual_v: rv,
        iterations,
        trace,
        converged,
        degenerate,
        classification: Some(class),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::minimize_direct;
    use crate::spectral::{build_basis, Domain};

    #[test]
    fn agrees_with_direct_minimization() {
        let b = build_basis(Domain::unit(2).unwrap(), 12).unwrap();
        let pr = PowerParams::new(2, 0.75, 0.5, 0.5).unwrap();
        let o = SolveOptions::default();
        let phi = SpectralField::ground_state(&b);
        let a = picard_sublinear(&pr, &phi, &o).unwrap();
        let d = minimize_direct(&pr, &phi, &o).unwrap();
        assert!(a.converged && d.converged);
        assert!((&a.u - &d.u).theta_norm(1.5) < 1e-6);
        let big = picard_sublinear(&pr, &phi.scaled(100.0), &o).unwrap();
        let small = picard_sublinear(&pr, &phi.scaled(0.01), &o).unwrap();
        assert!((&big.u - &small.u).theta_norm(1.5) < 1e-6);
        assert!(a.trace.last().unwrap().clamp <= 1e-8);
    }

    #[test]
    fn zero_start_stays_put() {
        let b = build_basis(Domain::unit(2).unwrap(), 8).unwrap();
        let pr = PowerParams::new(2, 0.75, 0.5, 0.5).unwrap();
        let r = picard_sublinear(&pr, &SpectralField::zeros(&b), &SolveOptions::default()).unwrap();
        assert!(r.degenerate && !r.converged);
        assert_eq!(r.u.l2_norm(), 0.0);
    }

    #[test]
    fn rejects_superlinear() {
        let b = build_basis(Domain::unit(2).unwrap(), 8).unwrap();
        let pr = PowerParams::new(2, 0.5, 1.0, 1.0).unwrap();
        let phi = SpectralField::ground_state(&b);
        assert!(picard_sublinear(&pr, &phi, &SolveOptions::default()).is_err());
    }
}
