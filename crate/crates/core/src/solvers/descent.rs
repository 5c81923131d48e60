use std::sync::Arc;

use super::{check_basis, recover_v_direct, residuals, SolveOptions, SolverKind, SolverReport, TraceRow};
use crate::energy::{
    ar_check_with, classify, lift_stage, phi_conjugate, stage_direction, ArCheckOptions,
    Nonlinearity, PowerParams, Reaction, Regime, Source,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{Basis, SpectralField};
use crate::verify::{hypothesis_gate, GateInput, Theorem};

/// Below this `L²` size an iterate counts as the trivial solution.
const COLLAPSE: f64 = 1e-10;
/// Relative size of energy changes treated as rounding noise.
const ENERGY_NOISE: f64 = 1e-10;

struct Problem<'a, T, R> {
    src: &'a R,
    p: T,
    s: T,
    /// Use `(v⁺)^p` in the first residual (power system) instead of `|v|^{p−1}v`.
    positive_part: bool,
    /// Rescale every iterate to the maximum of the energy along its ray.
    nehari: bool,
}

impl<T: Real, R: Reaction<T>> Problem<'_, T, R> {
    /// Maximizer `τ*` of `τ ↦ Ψ(τw)` and the maximum, or `None` when the
    /// energy does not turn down along the ray.
    fn ray_max(&self, w: &SpectralField<T>) -> Result<Option<(T, T)>> {
        let (p, one) = (self.p, T::one());
        let wn = w.to_nodal();
        let un = lift_stage(w, p, self.s).to_nodal();
        let a = p / (p + one) * wn.integrate_with(|x| x.abs().powf(p + one));
        if !(a > T::zero()) {
            return Ok(None);
        }
        let energy = |tau: T| {
            let scale = tau.powf(p);
            tau.powf(p + one) * a - un.integrate_with(|x| self.src.primitive(scale * x))
        };

        if let Some(q) = self.src.homogeneity() {
            let alpha = p + one;
            let beta = p * (q + one);
            if !(beta > alpha) {
                return Err(Error::Parameter(format!(
                    "no ray maximum: p(q+1) = {beta} does not exceed p+1 = {alpha}"
                )));
            }
            let b = un.integrate_with(|x| self.src.primitive(x));
            if !(b > T::zero()) {
                return Ok(None);
            }
            let tau = (alpha * a / (beta * b)).powf(one / (beta - alpha));
            return Ok(Some((tau, energy(tau))));
        }

        // Sign of ψ′(τ)·τ^{1−p}: positive while the energy still rises.
        let rising = |tau: T| {
            let scale = tau.powf(p);
            let load = un.integrate_with(|x| self.src.value(scale * x) * x);
            (p + one) * tau * a - p * load > T::zero()
        };
        let two = T::lit(2.0);
        let mut lo = one;
        let mut tries = 0;
        while !rising(lo) {
            lo = lo / two;
            tries += 1;
            if tries > 200 {
                return Ok(None);
            }
        }
        let mut hi = lo * two;
        tries = 0;
        while rising(hi) {
            lo = hi;
            hi = hi * two;
            tries += 1;
            if tries > 200 {
                return Ok(None);
            }
        }
        for _ in 0..200 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if rising(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // the bracket has shrunk to adjacent floats; take the better end
        let (el, eh) = (energy(lo), energy(hi));
        let (tau, e) = if el >= eh { (lo, el) } else { (hi, eh) };
        if !e.is_finite() {
            return Err(Error::NonFinite(format!("ray energy at τ = {tau}")));
        }
        Ok(Some((tau, e)))
    }

    fn energy(&self, v: &SpectralField<T>) -> Result<T> {
        phi_conjugate(v, self.src, self.p, self.s)
    }

    /// Fallback once energy differences drop below roundoff and no backtrack
    /// passes the Armijo test: take the full step if it strictly lowers the
    /// residual and changes the energy only at noise level (never upward when
    /// minimizing).
    fn noise_step(
        &self,
        v: &SpectralField<T>,
        d: &SpectralField<T>,
        energy: T,
        residual: T,
        opts: &SolveOptions<T>,
    ) -> Result<Option<(SpectralField<T>, T)>> {
        let mut cand = v.axpy(opts.initial_step, d);
        let e = if self.nehari {
            match self.ray_max(&cand)? {
                Some((tau, e)) => {
                    cand = cand.scaled(tau);
                    e
                }
                None => return Ok(None),
            }
        } else {
            self.energy(&cand)?
        };
        let noise = T::lit(ENERGY_NOISE) * energy.abs().max(T::one());
        if (e - energy).abs() > noise || (!self.nehari && e > energy) {
            return Ok(None);
        }
        let step = stage_direction(&cand, self.src, self.p, self.s)?;
        let v_out = &cand + &step.direction;
        let (ru, rv) = residuals(&step.u, &v_out, self.p, self.s, self.src, self.positive_part)?;
        Ok((ru.max(rv) < residual).then_some((cand, e)))
    }

    fn run(
        &self,
        kind: SolverKind,
        v0: SpectralField<T>,
        opts: &SolveOptions<T>,
    ) -> Result<SolverReport<T>> {
        let mut notes = Vec::new();
        let (mut v, mut energy) = if self.nehari {
            match self.ray_max(&v0)? {
                Some((tau, e)) => (v0.scaled(tau), e),
                None => {
                    return Err(Error::Parameter(
                        "initial direction has no positive ray maximum".into(),
                    ))
                }
            }
        } else {
            let e = self.energy(&v0)?;
            (v0, e)
        };

        let mut trace = Vec::new();
        let mut iterations = 0;
        let mut converged = false;
        let mut degenerate = false;
        let (u, v_out, residual_u, residual_v) = loop {
            let step = stage_direction(&v, self.src, self.p, self.s)?;
            let v_out = &v + &step.direction;
            let (ru, rv) =
                residuals(&step.u, &v_out, self.p, self.s, self.src, self.positive_part)?;
            let residual = ru.max(rv);
            let mut row = TraceRow {
                iter: iterations,
                energy,
                residual,
                step: T::zero(),
                clamp: T::zero(),
            };
            if step.u.l2_norm() < T::lit(COLLAPSE) {
                degenerate = true;
                notes.push(format!("iterate collapsed to zero at iteration {iterations}"));
                trace.push(row);
                break (step.u, v_out, ru, rv);
            }
            if residual <= opts.grad_tol {
                converged = true;
                trace.push(row);
                break (step.u, v_out, ru, rv);
            }
            if iterations == opts.max_iters {
                notes.push(format!("no convergence within {} iterations", opts.max_iters));
                trace.push(row);
                break (step.u, v_out, ru, rv);
            }

            let mut t = opts.initial_step;
            let mut accepted = None;
            for _ in 0..=opts.max_halvings {
                // once the demanded decrease vanishes in rounding the test
                // would accept steps that change nothing
                if energy - opts.armijo_c * t * step.slope >= energy {
                    break;
                }
                let mut cand = v.axpy(t, &step.direction);
                let e = if self.nehari {
                    match self.ray_max(&cand)? {
                        Some((tau, e)) => {
                            cand = cand.scaled(tau);
                            Some(e)
                        }
                        None => None,
                    }
                } else {
                    Some(self.energy(&cand)?)
                };
                if let Some(e) = e {
                    if e <= energy - opts.armijo_c * t * step.slope {
                        accepted = Some((cand, e));
                        break;
                    }
                }
                t = t * opts.backtrack;
            }
            if accepted.is_none() {
                accepted = self.noise_step(&v, &step.direction, energy, residual, opts)?;
                if accepted.is_some() {
                    t = opts.initial_step;
                }
            }
            let Some((cand, e)) = accepted else {
                notes.push(format!(
                    "line search stagnated at iteration {iterations} with residual {residual:e}"
                ));
                trace.push(row);
                break (step.u, v_out, ru, rv);
            };
            row.step = t;
            trace.push(row);
            v = cand;
            energy = e;
            iterations += 1;
        };

        Ok(SolverReport {
            solver: kind,
            u,
            v: v_out,
            energy,
            residual_u,
            residual_v,
            iterations,
            trace,
            converged: converged && !degenerate,
            degenerate,
            classification: None,
            notes,
        })
    }
}

fn degenerate_report<T: Real>(
    kind: SolverKind,
    init: &SpectralField<T>,
    note: &str,
) -> SolverReport<T> {
    let zero = SpectralField::zeros(init.basis());
    SolverReport {
        solver: kind,
        u: zero.clone(),
        v: zero,
        energy: T::zero(),
        residual_u: T::zero(),
        residual_v: T::zero(),
        iterations: 0,
        trace: Vec::new(),
        converged: false,
        degenerate: true,
        classification: None,
        notes: vec![note.to_string()],
    }
}

/// Minimizes the energy of the sublinear power system (`pq < 1`) by Armijo
/// descent from `init`.
pub fn minimize_direct<T: Real>(
    params: &PowerParams<T>,
    init: &SpectralField<T>,
    opts: &SolveOptions<T>,
) -> Result<SolverReport<T>> {
    opts.validate()?;
    check_basis(init, params)?;
    let class = classify(params);
    if class.regime != Regime::Sublinear {
        return Err(Error::Parameter(format!(
            "direct minimization needs pq < 1, got pq = {} ({})",
            params.pq(),
            class.regime
        )));
    }
    let v0 = recover_v_direct(init, params);
    let mut report = if v0.l2_norm() == T::zero() {
        degenerate_report(
            SolverKind::Direct,
            init,
            "zero start: the trivial solution is a critical point",
        )
    } else {
        let src = Source::PositivePower(params.q);
        let problem = Problem {
            src: &src,
            p: params.p,
            s: params.s,
            positive_part: true,
            nehari: false,
        };
        problem.run(SolverKind::Direct, v0, opts)?
    };
    report.classification = Some(class);
    Ok(report)
}

/// Mountain-pass solution of the superlinear power system from the ground
/// state direction.
pub fn mountain_pass<T: Real>(
    basis: &Arc<Basis<T>>,
    params: &PowerParams<T>,
    opts: &SolveOptions<T>,
) -> Result<SolverReport<T>> {
    mountain_pass_from(params, &SpectralField::ground_state(basis), opts)
}

/// Mountain-pass descent on the rescaled iterates, starting along `direction`.
pub fn mountain_pass_from<T: Real>(
    params: &PowerParams<T>,
    direction: &SpectralField<T>,
    opts: &SolveOptions<T>,
) -> Result<SolverReport<T>> {
    opts.validate()?;
    check_basis(direction, params)?;
    let class = classify(params);
    if class.regime != Regime::SuperlinearSubcritical {
        return Err(Error::Parameter(format!(
            "mountain pass needs a superlinear subcritical pair, got {} \
             (1/(p+1)+1/(q+1) = {} vs (n-2s)/n = {})",
            class.regime, class.hyperbola_value, class.threshold
        )));
    }
    if params.p > T::one() {
        return Err(Error::Parameter(format!("mountain pass needs p <= 1, got {}", params.p)));
    }
    let src = Source::PositivePower(params.q);
    let problem = Problem {
        src: &src,
        p: params.p,
        s: params.s,
        positive_part: true,
        nehari: true,
    };
    let mut report = problem.run(SolverKind::MountainPass, recover_v_direct(direction, params), opts)?;
    report.classification = Some(class);
    Ok(report)
}

/// Mountain-pass solution of `𝒜ˢu = |v|^{p−1}v`, `𝒜ˢv = f(u)` for `p ≤ 1`.
///
/// Refuses when the superlinearity samples fail or when `f` is not small
/// enough at the origin for it to be a strict local minimum: for `p = 1`
/// that means `|f(δ)|/δ < λ₁^{2s}`, for `p < 1` the ratio
/// `|f(δ)|/δ^{1/p}` must fall below the default threshold.
pub fn solve_general<T: Real>(
    basis: &Arc<Basis<T>>,
    nl: &Nonlinearity<T>,
    p: T,
    s: T,
    opts: &SolveOptions<T>,
) -> Result<SolverReport<T>> {
    opts.validate()?;
    if !(p > T::zero() && p <= T::one()) {
        return Err(Error::Parameter(format!("general solver needs 0 < p <= 1, got {p}")));
    }
    let gate = hypothesis_gate(Theorem::T1, basis.dim(), s, p, GateInput::None);
    if !gate.satisfied {
        return Err(Error::Parameter(format!(
            "outside the existence window: {}",
            gate.violation_list().join("; ")
        )));
    }
    let mut ar_opts = ArCheckOptions::default();
    if p == T::one() {
        ar_opts.threshold = basis.first_eigenvalue().powf(s + s);
    }
    let ar = ar_check_with(nl, p, nl.r0 + T::lit(10.0), 200, ar_opts)?;
    if !ar.passed() {
        let mut violations = Vec::new();
        if let Some((r, lhs, rhs)) = ar.ar_witness {
            violations.push(format!("theta*F(r) = {lhs} is not below f(r)*r = {rhs} at r = {r}"));
        }
        if !ar.smallness_holds {
            violations.push(format!(
                "near-zero ratio {} is not below {}",
                ar.smallness_ratio, ar_opts.threshold
            ));
        }
        return Err(Error::Refused {
            reason: format!("nonlinearity {} fails the superlinearity check", nl.source.name()),
            violations,
        });
    }
    let problem = Problem {
        src: nl,
        p,
        s,
        positive_part: false,
        nehari: true,
    };
    let ground = SpectralField::ground_state(basis);
    // 𝒜ˢφ₁ = λ₁ˢφ₁, so the stage of the ground state is a multiple of it
    problem.run(SolverKind::General, ground, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::phi_power;
    use crate::solvers::recover_v;
    use crate::spectral::{build_basis, Domain};
    use std::f64::consts::PI;

    fn square(n: usize) -> Arc<Basis<f64>> {
        build_basis(Domain::unit(2).unwrap(), n).unwrap()
    }

    #[test]
    fn closed_form_ray_matches_bisection() {
        let b = square(8);
        let w = SpectralField::ground_state(&b);
        let closed = Source::PositivePower(3.0);
        let poly = Source::Polynomial(vec![0.0, 0.0, 0.0, 1.0]);
        for (p, s) in [(1.0, 0.5), (0.8, 0.75)] {
            let mk = |src| Problem {
                src,
                p,
                s,
                positive_part: true,
                nehari: true,
            };
            let (t1, e1) = mk(&closed).ray_max(&w).unwrap().unwrap();
            let (t2, e2) = mk(&poly).ray_max(&w).unwrap().unwrap();
            assert!((t1 - t2).abs() < 1e-12 * t1, "{t1} vs {t2}");
            assert!((e1 - e2).abs() < 1e-10 * e1);
        }
        // ground-state ray of the unit square at s = 1/2: (2π²)²/9
        let pb = Problem {
            src: &closed,
            p: 1.0,
            s: 0.5,
            positive_part: true,
            nehari: true,
        };
        let (_, e) = pb.ray_max(&w).unwrap().unwrap();
        assert!((e - (2.0 * PI * PI).powi(2) / 9.0).abs() < 1e-9);
        assert!(pb.ray_max(&(-&w)).unwrap().is_none());
    }

    #[test]
    fn direct_minimization_small_grid() {
        let b = square(12);
        let pr = PowerParams::new(2, 0.75, 0.5, 0.5).unwrap();
        let r = minimize_direct(&pr, &SpectralField::ground_state(&b), &SolveOptions::default())
            .unwrap();
        assert!(r.converged, "{:?}", r.notes);
        assert!(r.energy < 0.0);
        assert!(r.trace.windows(2).all(|w| w[1].energy <= w[0].energy));
        assert!(r.u.to_nodal().min() > 0.0);
        assert!(r.residual() <= 1e-8);
        // v is the default recovery of u
        assert!((&r.v - &recover_v(&r.u, &pr)).l2_norm() < 1e-14);
    }

    #[test]
    fn zero_start_is_degenerate() {
        let b = square(8);
        let pr = PowerParams::new(2, 0.75, 0.5, 0.5).unwrap();
        let r = minimize_direct(&pr, &SpectralField::zeros(&b), &SolveOptions::default()).unwrap();
        assert!(r.degenerate && !r.converged);
        assert_eq!(r.u.l2_norm(), 0.0);
    }

    #[test]
    fn regime_preconditions() {
        let b = square(8);
        let phi = SpectralField::ground_state(&b);
        let o = SolveOptions::default();
        let sup = PowerParams::new(2, 0.5, 1.0, 3.0).unwrap();
        assert!(minimize_direct(&sup, &phi, &o).is_err());
        let sub = PowerParams::new(2, 0.75, 0.5, 0.5).unwrap();
        assert!(mountain_pass(&b, &sub, &o).is_err());
        let big_p = PowerParams::new(2, 0.75, 2.0, 2.0).unwrap();
        assert!(mountain_pass(&b, &big_p, &o).is_err());
        let crit = PowerParams::new(3, 0.5, 2.0, 2.0).unwrap();
        let b3 = build_basis(Domain::unit(3).unwrap(), 4).unwrap();
        assert!(mountain_pass(&b3, &crit, &o).is_err());
    }

    #[test]
    fn mountain_pass_small_grid() {
        let b = square(16);
        let pr = PowerParams::new(2, 0.5, 1.0, 3.0).unwrap();
        let r = mountain_pass(&b, &pr, &SolveOptions::default()).unwrap();
        assert!(r.converged, "{:?} {:?}", r.notes, r.trace.last());
        let ray = (2.0 * PI * PI).powi(2) / 9.0;
        assert!(r.energy > 0.0 && r.energy <= ray + 1e-6);
        assert!((phi_power(&r.u, &pr).unwrap() - r.energy).abs() < 1e-9 * r.energy);
        assert!(r.u.to_nodal().min() > -1e-8);
    }

    #[test]
    fn general_refuses_linear_source() {
        let b = square(8);
        let nl = Nonlinearity::new(Source::Polynomial(vec![0.0, 1.0]), 2.0, 0.0).unwrap();
        match solve_general(&b, &nl, 1.0, 0.75, &SolveOptions::default()) {
            Err(Error::Refused { violations, .. }) => assert!(!violations.is_empty()),
            other => panic!("expected refusal, got {other:?}"),
        }
        let cubic = Nonlinearity::cubic(3.0, 0.0).unwrap();
        // n = 2 needs s > 1/2
        assert!(matches!(
            solve_general(&b, &cubic, 1.0, 0.4, &SolveOptions::default()),
            Err(Error::Parameter(_))
        ));
        assert!(solve_general(&b, &cubic, 1.5, 0.75, &SolveOptions::default()).is_err());
    }

    #[test]
    fn general_cubic_matches_power_system() {
        let b = square(12);
        let o = SolveOptions::default();
        let nl = Nonlinearity::cubic(3.0, 0.0).unwrap();
        let g = solve_general(&b, &nl, 1.0, 0.75, &o).unwrap();
        let pr = PowerParams::new(2, 0.75, 1.0, 3.0).unwrap();
        let m = mountain_pass(&b, &pr, &o).unwrap();
        assert!(g.converged && m.converged);
        assert!((g.energy - m.energy).abs() < 1e-8, "{} vs {}", g.energy, m.energy);
    }
}
