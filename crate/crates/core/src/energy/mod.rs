//! Reduced energies of the coupled system, their Gateaux derivatives,
//! nonlinearities, and exponent classification.

mod classify;
mod conjugate;
mod functional;
mod nonlinearity;

pub use classify::{classify, HyperbolaClass, Regime};
pub use conjugate::{lift_stage, phi_conjugate, stage_direction, StageStep};
pub use functional::{
    grad_phi_general, grad_phi_power, hamiltonian, lagrangian, phi_general, phi_power,
};
pub use nonlinearity::{ar_check, ar_check_with, ArCheckOptions, ArReport, Nonlinearity, Reaction, Source};

use crate::error::{Error, Result};
use crate::scalar::Ordered;

/// Exponents of the power system `𝒜ˢu = vᵖ, 𝒜ˢv = u^q` in dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerParams<T> {
    pub n: usize,
    pub s: T,
    pub p: T,
    pub q: T,
}

impl<T: Ordered> PowerParams<T> {
    pub fn new(n: usize, s: T, p: T, q: T) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Parameter(format!("dimension n = {n} not in 1..=3")));
        }
        if !(s > T::zero() && s < T::one()) {
            return Err(Error::Parameter(format!("s = {s} not in (0, 1)")));
        }
        if !(p > T::zero()) {
            return Err(Error::Parameter(format!("p = {p} must be positive")));
        }
        if !(q > T::zero()) {
            return Err(Error::Parameter(format!("q = {q} must be positive")));
        }
        Ok(Self { n, s, p, q })
    }

    /// `1/(p+1) + 1/(q+1)`.
    pub fn hyperbola_value(&self) -> T {
        T::one() / (self.p.clone() + T::one()) + T::one() / (self.q.clone() + T::one())
    }

    /// `(n - 2s)/n`.
    pub fn critical_threshold(&self) -> T {
        let n = T::int(self.n);
        (n.clone() - T::int(2) * self.s.clone()) / n
    }

    pub fn pq(&self) -> T {
        self.p.clone() * self.q.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PowerParams::new(2, 0.5, 1.0, 3.0).is_ok());
        assert!(PowerParams::new(0, 0.5, 1.0, 3.0).is_err());
        assert!(PowerParams::new(4, 0.5, 1.0, 3.0).is_err());
        assert!(PowerParams::new(2, 1.0, 1.0, 3.0).is_err());
        assert!(PowerParams::new(2, 0.0, 1.0, 3.0).is_err());
        assert!(PowerParams::new(2, 0.5, 0.0, 3.0).is_err());
        assert!(PowerParams::new(2, 0.5, 1.0, -1.0).is_err());
        assert!(PowerParams::new(2, f64::NAN, 1.0, 1.0).is_err());
    }
}
