use serde::Serialize;

use crate::error::Result;
use crate::scalar::Real;
use crate::spectral::SpectralField;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityProbe {
    /// Grid maximum of `|u|` on the working grid `M`.
    pub sup_norm: f64,
    /// Same on the nested grid with `2M+1` points per axis, which contains
    /// every node of the working grid.
    pub sup_norm_refined: f64,
    /// `|sup_norm_refined − sup_norm| / sup_norm_refined` (0 for `u = 0`).
    pub sup_change: f64,
    /// Share of the `Θˢ` energy carried by the upper half of the spectrum.
    pub tail_fraction_s: f64,
    /// Same for `Θ²ˢ`.
    pub tail_fraction_2s: f64,
    /// Slope of `log|ξ_k|` against `log λ_k`; `None` with fewer than two
    /// resolvable coefficients.
    pub decay_exponent: Option<f64>,
    /// Set when the coefficients do not decay faster than `λ⁻¹`.
    pub rough: bool,
}

/// Fraction of `Σ λ_k^α ξ_k²` in the modes above the spectral median.
pub fn tail_fraction<T: Real>(u: &SpectralField<T>, alpha: T) -> T {
    let mut terms: Vec<(T, T)> = u
        .basis()
        .eigenvalues()
        .iter()
        .zip(u.coeffs())
        .map(|(&l, &c)| (l, l.powf(alpha) * c * c))
        .collect();
    terms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    let total: T = terms.iter().map(|t| t.1).sum();
    if total == T::zero() {
        return T::zero();
    }
    let half = terms.len() / 2;
    terms[half..].iter().map(|t| t.1).sum::<T>() / total
}

/// Least-squares slope of `log|ξ_k|` against `log λ_k` over coefficients
/// above `1e-14·max|ξ|`.
pub fn decay_exponent<T: Real>(u: &SpectralField<T>) -> Option<f64> {
    let max = u.max_abs_coeff().as_f64();
    if max == 0.0 {
        return None;
    }
    let pts: Vec<(f64, f64)> = u
        .basis()
        .eigenvalues()
        .iter()
        .zip(u.coeffs())
        .filter(|(_, c)| c.abs().as_f64() > 1e-14 * max)
        .map(|(l, c)| (l.as_f64().ln(), c.abs().as_f64().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Computable stand-ins for boundedness and smoothness of `u`.
pub fn regularity_probe<T: Real>(u: &SpectralField<T>, s: T) -> Result<RegularityProbe> {
    let b = u.basis();
    let sup = u.to_nodal().sup_norm().as_f64();
    let fine = b.with_grid(2 * b.grid() + 1)?;
    let refined = SpectralField::new(fine, u.coeffs().to_vec())?
        .to_nodal()
        .sup_norm()
        .as_f64();
    let sup_change = if refined == 0.0 {
        0.0
    } else {
        (refined - sup).abs() / refined
    };
    let decay = decay_exponent(u);
    Ok(RegularityProbe {
        sup_norm: sup,
        sup_norm_refined: refined,
        sup_change,
        tail_fraction_s: tail_fraction(u, s).as_f64(),
        tail_fraction_2s: tail_fraction(u, s + s).as_f64(),
        decay_exponent: decay,
        rough: !decay.is_some_and(|d| d < -1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_basis, Basis, Domain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_mode() {
        // odd M puts a node on the midline, where φ₁ peaks
        let b = Basis::new(Domain::unit(2).unwrap(), 6, 9).unwrap();
        let phi = SpectralField::ground_state(&b);
        let probe = regularity_probe(&phi, 0.5).unwrap();
        assert_eq!(probe.tail_fraction_s, 0.0);
        assert_eq!(probe.tail_fraction_2s, 0.0);
        assert!((probe.sup_norm - 2.0).abs() < 1e-14);
        assert!(probe.sup_change < 1e-14);
        assert_eq!(probe.decay_exponent, None);
    }

    #[test]
    fn white_noise_is_flagged() {
        let b = build_basis(Domain::unit(2).unwrap(), 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = (0..b.size()).map(|_| rng.random_range(0.5..1.5)).collect();
        let u = SpectralField::new(b, c).unwrap();
        let probe = regularity_probe(&u, 0.5).unwrap();
        assert!(probe.decay_exponent.unwrap().abs() < 0.1);
        assert!(probe.rough);
        assert!(probe.tail_fraction_2s > 0.5);
    }

    #[test]
    fn power_law_decay_is_recovered() {
        let b = build_basis(Domain::unit(2).unwrap(), 16).unwrap();
        let c = b.eigenvalues().iter().map(|l: &f64| l.powf(-1.7)).collect();
        let u = SpectralField::new(b, c).unwrap();
        let probe = regularity_probe(&u, 0.5).unwrap();
        assert!((probe.decay_exponent.unwrap() + 1.7).abs() < 1e-10);
        assert!(!probe.rough);
        assert!((0.0..=1.0).contains(&probe.tail_fraction_s));
    }
}
