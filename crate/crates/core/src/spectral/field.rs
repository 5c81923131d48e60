use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{increment, Basis};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A field `u = Σ ξ_k φ_k` given by its truncated eigen-coefficients.
#[derive(Clone, Debug)]
pub struct SpectralField<T: Real> {
    basis: Arc<Basis<T>>,
    coeffs: Vec<T>,
}

/// Point values of a field on the interior collocation grid.
#[derive(Clone, Debug)]
pub struct NodalField<T: Real> {
    basis: Arc<Basis<T>>,
    values: Vec<T>,
}

fn check_finite<T: Real>(what: &str, xs: &[T]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::NonFinite(format!("{what}[{i}] = {}", xs[i]))),
        None => Ok(()),
    }
}

impl<T: Real> SpectralField<T> {
    pub fn new(basis: Arc<Basis<T>>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != basis.size() {
            return Err(Error::BasisMismatch(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                basis.size()
            )));
        }
        check_finite("coefficient", &coeffs)?;
        Ok(Self { basis, coeffs })
    }

    pub(crate) fn from_parts(basis: Arc<Basis<T>>, coeffs: Vec<T>) -> Self {
        debug_assert_eq!(coeffs.len(), basis.size());
        Self { basis, coeffs }
    }

    pub fn zeros(basis: &Arc<Basis<T>>) -> Self {
        Self::from_parts(basis.clone(), vec![T::zero(); basis.size()])
    }

    /// The normalized eigenfunction with 1-based multi-index `m`.
    pub fn mode(basis: &Arc<Basis<T>>, m: &[usize]) -> Result<Self> {
        let k = basis
            .index_of(m)
            .ok_or_else(|| Error::Basis(format!("mode {m:?} is outside the basis")))?;
        let mut f = Self::zeros(basis);
        f.coeffs[k] = T::one();
        Ok(f)
    }

    /// `φ_1`, the positive ground state.
    pub fn ground_state(basis: &Arc<Basis<T>>) -> Self {
        let mut f = Self::zeros(basis);
        f.coeffs[0] = T::one();
        f
    }

    pub fn basis(&self) -> &Arc<Basis<T>> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.basis.same_as(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis, other.basis
            )))
        }
    }

    fn map_with_eigen(&self, f: impl Fn(T, T) -> T) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.basis.eigenvalues())
            .map(|(&c, &l)| f(c, l))
            .collect();
        Self::from_parts(self.basis.clone(), coeffs)
    }

    /// `𝒜ˢu = Σ λ_k^s ξ_k φ_k`. Negative `s` gives the inverse power.
    pub fn apply_power(&self, s: T) -> Self {
        if s == T::zero() {
            return self.clone();
        }
        self.map_with_eigen(|c, l| c * l.powf(s))
    }

    /// Green operator `𝒜⁻ˢ`.
    pub fn invert_power(&self, s: T) -> Self {
        self.apply_power(-s)
    }

    /// `(Σ λ_k^α ξ_k²)^{1/2}`; `α = 0` is the L² norm.
    pub fn theta_norm(&self, alpha: T) -> T {
        self.coeffs
            .iter()
            .zip(self.basis.eigenvalues())
            .map(|(&c, &l)| l.powf(alpha) * c * c)
            .sum::<T>()
            .sqrt()
    }

    /// `⟨u, v⟩_{Θˢ} = Σ λ_k^s ξ_k η_k`.
    pub fn inner_theta(&self, other: &Self, s: T) -> Result<T> {
        self.check_same(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(self.basis.eigenvalues())
            .map(|((&a, &b), &l)| l.powf(s) * a * b)
            .sum())
    }

    /// Norm of the dual of `Θˢ`, `(Σ λ_k^{-s} c_k²)^{1/2}`.
    pub fn dual_norm(&self, s: T) -> T {
        self.theta_norm(-s)
    }

    /// Plain coefficient inner product (the L² pairing).
    pub fn dot(&self, other: &Self) -> Result<T> {
        self.inner_theta(other, T::zero())
    }

    pub fn l2_norm(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, &c| acc.max(c.abs()))
    }

    pub fn scaled(&self, a: T) -> Self {
        Self::from_parts(self.basis.clone(), self.coeffs.iter().map(|&c| a * c).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: T, other: &Self) -> Self {
        assert!(self.basis.same_as(&other.basis), "basis mismatch in axpy");
        Self::from_parts(
            self.basis.clone(),
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| x + a * y)
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Synthesis on the collocation grid.
    pub fn to_nodal(&self) -> NodalField<T> {
        let b = &self.basis;
        let (n, m, dim) = (b.modes(), b.grid(), b.dim());
        let mut data = vec![T::zero(); b.grid_size()];
        let mut idx = vec![0usize; dim];
        for &c in &self.coeffs {
            let slot = idx.iter().fold(0, |acc, &i| acc * m + i);
            data[slot] = c;
            increment(&mut idx, n);
        }
        b.sine().apply_all(&mut data, dim);
        let amp = b.amplitude();
        data.iter_mut().for_each(|x| *x = *x * amp);
        NodalField {
            basis: b.clone(),
            values: data,
        }
    }
}

impl<T: Real> NodalField<T> {
    pub fn new(basis: Arc<Basis<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != basis.grid_size() {
            return Err(Error::BasisMismatch(format!(
                "{} nodal values for a grid of {} points",
                values.len(),
                basis.grid_size()
            )));
        }
        check_finite("nodal value", &values)?;
        Ok(Self { basis, values })
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(basis: &Arc<Basis<T>>, f: impl Fn(&[T]) -> T) -> Result<Self> {
        let dim = basis.dim();
        let axes: Vec<Vec<T>> = (0..dim).map(|a| basis.grid_points(a)).collect();
        let mut idx = vec![0usize; dim];
        let mut x = vec![T::zero(); dim];
        let mut values = Vec::with_capacity(basis.grid_size());
        for _ in 0..basis.grid_size() {
            for a in 0..dim {
                x[a] = axes[a][idx[a]];
            }
            values.push(f(&x));
            increment(&mut idx, basis.grid());
        }
        Self::new(basis.clone(), values)
    }

    pub fn basis(&self) -> &Arc<Basis<T>> {
        &self.basis
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Pointwise map. The result may hold non-finite values if `f` produces them;
    /// check with [`NodalField::is_finite`] where that matters.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            basis: self.basis.clone(),
            values: self.values.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert!(self.basis.same_as(&other.basis), "basis mismatch in zip_map");
        Self {
            basis: self.basis.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|x| x.is_finite())
    }

    /// Grid quadrature `∫ u ≈ Π h_j Σ_i u(x_i)`.
    pub fn integrate(&self) -> T {
        self.basis.cell_volume() * self.values.iter().copied().sum::<T>()
    }

    /// Grid quadrature of `g(u)`.
    pub fn integrate_with(&self, g: impl Fn(T) -> T) -> T {
        self.basis.cell_volume() * self.values.iter().map(|&x| g(x)).sum::<T>()
    }

    pub fn l2_norm(&self) -> T {
        self.integrate_with(|x| x * x).sqrt()
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Quadrature projection onto the retained modes,
    /// `ξ_k = Π h_j Σ_i u(x_i) φ_k(x_i)`. Exact for in-band sine sums.
    pub fn to_spectral(&self) -> SpectralField<T> {
        let b = &self.basis;
        let (n, m, dim) = (b.modes(), b.grid(), b.dim());
        let mut data = self.values.clone();
        b.sine().apply_all(&mut data, dim);
        let scale = b.amplitude() * b.cell_volume();
        let mut coeffs = Vec::with_capacity(b.size());
        let mut idx = vec![0usize; dim];
        for _ in 0..b.size() {
            let slot = idx.iter().fold(0, |acc, &i| acc * m + i);
            coeffs.push(data[slot] * scale);
            increment(&mut idx, n);
        }
        SpectralField::from_parts(b.clone(), coeffs)
    }
}

impl<T: Real> Add for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn add(self, rhs: Self) -> SpectralField<T> {
        self.axpy(T::one(), rhs)
    }
}

impl<T: Real> Sub for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn sub(self, rhs: Self) -> SpectralField<T> {
        self.axpy(-T::one(), rhs)
    }
}

impl<T: Real> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn neg(self) -> SpectralField<T> {
        self.scaled(-T::one())
    }
}

impl<T: Real> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn mul(self, a: T) -> SpectralField<T> {
        self.scaled(a)
    }
}
