//! Hypothesis gates, residual and shape checks, multi-start uniqueness runs,
//! regularity surrogates and parameter sweeps.

mod gate;
mod regularity;
mod sweep;

pub use gate::{alpha_range, hypothesis_gate, hypothesis_gate_nl, GateInput, HypothesisReport, Theorem, Violation};
pub use regularity::{decay_exponent, regularity_probe, tail_fraction, RegularityProbe};
pub use sweep::{
    critical_sweep, uniqueness_harness, uniqueness_harness_seeds, SweepRow, SweepTable, UniqueRun,
    UniquenessReport, UNIQUENESS_TOL,
};

use crate::energy::{PowerParams, Source};
use crate::error::Result;
use crate::scalar::Real;
use crate::spectral::{NodalField, SpectralField};

/// `(‖𝒜ˢu − P[(v⁺)^p]‖_{Θ⁻ˢ}, ‖𝒜ˢv − P[(u⁺)^q]‖_{Θ⁻ˢ})`.
pub fn residual_pair<T: Real>(
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    params: &PowerParams<T>,
) -> Result<(T, T)> {
    crate::solvers::residuals(u, v, params.p, params.s, &Source::PositivePower(params.q), true)
}

/// True when no grid value falls below `-tol`.
pub fn positivity_check<T: Real>(u: &NodalField<T>, tol: T) -> bool {
    u.min() >= -tol
}

/// True when every coefficient carrying an even mode index is at most `tol`
/// in magnitude, i.e. `u` is even about each midplane of the box.
pub fn symmetry_check<T: Real>(u: &SpectralField<T>, tol: T) -> bool {
    let b = u.basis();
    u.coeffs().iter().enumerate().all(|(k, c)| {
        b.multi_index(k).iter().all(|m| m % 2 == 1) || c.abs() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_basis, Domain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn manufactured_residual_vanishes() {
        let b = build_basis(Domain::unit(2).unwrap(), 10).unwrap();
        let pr = PowerParams::new(2, 0.6, 1.0, 2.0).unwrap();
        // p = 1 and v in band: (v⁺)^p = v wherever v > 0; take v = φ₁ > 0
        let v = SpectralField::ground_state(&b).scaled(2.0);
        let u = v.invert_power(0.6);
        let (r1, _) = residual_pair(&u, &v, &pr).unwrap();
        assert!(r1 <= 1e-12, "{r1}");
        let z = SpectralField::zeros(&b);
        assert_eq!(residual_pair(&z, &z, &pr).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn random_pair_has_positive_residuals() {
        let b = build_basis(Domain::unit(2).unwrap(), 8).unwrap();
        let pr = PowerParams::new(2, 0.6, 1.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut draw = || {
            let c = (0..b.size()).map(|_| rng.random_range(-1.0..1.0)).collect();
            SpectralField::new(b.clone(), c).unwrap()
        };
        let (u, v) = (draw(), draw());
        let (r1, r2) = residual_pair(&u, &v, &pr).unwrap();
        assert!(r1 > 0.0 && r2 > 0.0);
    }

    #[test]
    fn positivity_examples() {
        let b = build_basis(Domain::unit(2).unwrap(), 6).unwrap();
        let g = SpectralField::ground_state(&b).to_nodal();
        assert!(positivity_check(&g, 0.0));
        let m = SpectralField::mode(&b, &[2, 1]).unwrap().to_nodal();
        assert!(!positivity_check(&m, 1e-8));
    }

    #[test]
    fn symmetry_examples() {
        let b = build_basis(Domain::unit(2).unwrap(), 6).unwrap();
        let g = SpectralField::ground_state(&b);
        assert!(symmetry_check(&g, 1e-10));
        let mixed = g.axpy(0.1, &SpectralField::mode(&b, &[2, 1]).unwrap());
        assert!(!symmetry_check(&mixed, 1e-10));
        assert!(symmetry_check(&SpectralField::mode(&b, &[3, 5]).unwrap(), 0.0));
    }
}
