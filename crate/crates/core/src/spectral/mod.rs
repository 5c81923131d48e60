//! Dirichlet eigenbasis of `-Δ` on axis-aligned boxes, the spectral
//! fractional powers it induces, and the Hilbert-scale norms.
//!
//! On the box `Π_j (0, L_j)` the eigenpairs are products of sines,
//!
//! ```text
//! φ_m(x) = Π_j sqrt(2/L_j) sin(m_j π x_j / L_j),   λ_m = π² Σ_j (m_j / L_j)²,
//! ```
//!
//! with multi-indices `m ∈ {1..N}^dim`. Coefficients are stored in row-major
//! multi-index order (first axis slowest). Nodal values live on the interior
//! grid `x_i = i L / (M+1)`, `i = 1..M`, with `M ≥ N`.

mod field;
pub mod io;
pub mod transform;

use std::sync::Arc;

pub use field::{NodalField, SpectralField};

use crate::error::{Error, Result};
use crate::scalar::Real;
use transform::SineTransform;

/// An axis-aligned box `Π_j (0, L_j)` in one to three dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<T> {
    lengths: Vec<T>,
}

impl<T: Real> Domain<T> {
    pub fn new(dim: usize, lengths: Vec<T>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Domain(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if lengths.len() != dim {
            return Err(Error::Domain(format!(
                "expected {dim} side lengths, got {}",
                lengths.len()
            )));
        }
        if let Some(bad) = lengths.iter().find(|l| !(l.is_finite() && **l > T::zero())) {
            return Err(Error::Domain(format!("side length {bad} is not positive")));
        }
        Ok(Self { lengths })
    }

    /// `(0,1)^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, vec![T::one(); dim])
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }
}

/// Truncated Dirichlet eigenbasis with its collocation grid and transform plan.
pub struct Basis<T: Real> {
    domain: Domain<T>,
    modes: usize,
    grid: usize,
    axis_eigenvalues: Vec<Vec<T>>,
    eigenvalues: Vec<T>,
    sine: Arc<dyn SineTransform<T>>,
}

impl<T: Real> std::fmt::Debug for Basis<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Basis")
            .field("domain", &self.domain)
            .field("modes", &self.modes)
            .field("grid", &self.grid)
            .finish()
    }
}

/// Builds the basis with the default collocation grid `M = 2N`.
pub fn build_basis<T: Real>(domain: Domain<T>, modes_per_axis: usize) -> Result<Arc<Basis<T>>> {
    Basis::new(domain, modes_per_axis, 2 * modes_per_axis)
}

impl<T: Real> Basis<T> {
    pub fn new(domain: Domain<T>, modes: usize, grid: usize) -> Result<Arc<Self>> {
        if modes < 2 {
            return Err(Error::Basis(format!("need at least 2 modes per axis, got {modes}")));
        }
        if grid < modes {
            return Err(Error::Basis(format!(
                "grid size {grid} is smaller than the mode count {modes}"
            )));
        }
        let pi = T::PI();
        let axis_eigenvalues: Vec<Vec<T>> = domain
            .lengths()
            .iter()
            .map(|&l| {
                (1..=modes)
                    .map(|m| {
                        let w = pi * T::from_usize_lossy(m) / l;
                        w * w
                    })
                    .collect()
            })
            .collect();
        let dim = domain.dim();
        let size = modes.pow(dim as u32);
        let mut eigenvalues = Vec::with_capacity(size);
        let mut idx = vec![0usize; dim];
        for _ in 0..size {
            eigenvalues.push(
                idx.iter()
                    .enumerate()
                    .map(|(a, &i)| axis_eigenvalues[a][i])
                    .fold(T::zero(), |acc, x| acc + x),
            );
            increment(&mut idx, modes);
        }
        Ok(Arc::new(Self {
            domain,
            modes,
            grid,
            axis_eigenvalues,
            eigenvalues,
            sine: T::sine_transform(grid),
        }))
    }

    /// Same modes and domain on a different collocation grid.
    pub fn with_grid(&self, grid: usize) -> Result<Arc<Self>> {
        Self::new(self.domain.clone(), self.modes, grid)
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `N`, modes per axis.
    pub fn modes(&self) -> usize {
        self.modes
    }

    /// `M`, interior grid points per axis.
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Number of spectral coefficients, `N^dim`.
    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Number of nodal values, `M^dim`.
    pub fn grid_size(&self) -> usize {
        self.grid.pow(self.dim() as u32)
    }

    /// Eigenvalues in storage (multi-index) order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn sorted_eigenvalues(&self) -> Vec<T> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        v
    }

    /// `λ_1 = π² Σ_j 1/L_j²`.
    pub fn first_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn axis_eigenvalues(&self, axis: usize) -> &[T] {
        &self.axis_eigenvalues[axis]
    }

    /// 1-based multi-index of storage slot `k`.
    pub fn multi_index(&self, k: usize) -> Vec<usize> {
        let dim = self.dim();
        let mut out = vec![0; dim];
        let mut rest = k;
        for a in (0..dim).rev() {
            out[a] = rest % self.modes + 1;
            rest /= self.modes;
        }
        out
    }

    /// Storage slot of a 1-based multi-index, if it is in band.
    pub fn index_of(&self, m: &[usize]) -> Option<usize> {
        if m.len() != self.dim() || m.iter().any(|&mi| mi == 0 || mi > self.modes) {
            return None;
        }
        Some(m.iter().fold(0, |acc, &mi| acc * self.modes + (mi - 1)))
    }

    /// Interior grid coordinates along `axis`.
    pub fn grid_points(&self, axis: usize) -> Vec<T> {
        let l = self.domain.lengths()[axis];
        let denom = T::from_usize_lossy(self.grid + 1);
        (1..=self.grid)
            .map(|i| T::from_usize_lossy(i) * l / denom)
            .collect()
    }

    /// Quadrature weight `Π_j L_j / (M+1)` of every grid point.
    pub fn cell_volume(&self) -> T {
        let denom = T::from_usize_lossy(self.grid + 1);
        self.domain
            .lengths()
            .iter()
            .fold(T::one(), |acc, &l| acc * l / denom)
    }

    /// True when both bases describe the same discretization.
    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.modes == other.modes && self.grid == other.grid && self.domain == other.domain)
    }

    pub(crate) fn sine(&self) -> &dyn SineTransform<T> {
        self.sine.as_ref()
    }

    /// `Π_j sqrt(2/L_j)`, the amplitude of every basis function.
    pub(crate) fn amplitude(&self) -> T {
        let two = T::lit(2.0);
        self.domain
            .lengths()
            .iter()
            .fold(T::one(), |acc, &l| acc * (two / l).sqrt())
    }
}

/// Odometer increment over `{0..n}^d`, last axis fastest.
pub(crate) fn increment(idx: &mut [usize], n: usize) {
    for a in (0..idx.len()).rev() {
        idx[a] += 1;
        if idx[a] < n {
            return;
        }
        idx[a] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_square_ground_state() {
        let b = build_basis(Domain::<f64>::unit(2).unwrap(), 4).unwrap();
        assert!((b.first_eigenvalue() - 2.0 * PI * PI).abs() < 1e-12);
        assert!((b.first_eigenvalue() - 19.7392).abs() < 1e-4);
        assert_eq!(b.size(), 16);
        assert_eq!(b.grid(), 8);
    }

    #[test]
    fn interval_spectrum() {
        let b = build_basis(Domain::<f64>::unit(1).unwrap(), 3).unwrap();
        let expect = [PI * PI, 4.0 * PI * PI, 9.0 * PI * PI];
        for (a, e) in b.eigenvalues().iter().zip(expect) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_eigenvalue() {
        let b = build_basis(Domain::new(2, vec![1.0, 2.0]).unwrap(), 2).unwrap();
        let k = b.index_of(&[1, 1]).unwrap();
        assert!((b.eigenvalues()[k] - 1.25 * PI * PI).abs() < 1e-12);
        let k = b.index_of(&[1, 2]).unwrap();
        assert!((b.eigenvalues()[k] - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn first_eigenvalue_is_minimal() {
        let b = build_basis(Domain::new(3, vec![1.0, 0.7, 2.3]).unwrap(), 5).unwrap();
        let l1 = b.first_eigenvalue();
        assert!(b.eigenvalues().iter().all(|&l| l >= l1 && l > 0.0));
        let sorted = b.sorted_eigenvalues();
        assert_eq!(sorted[0], l1);
        assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn multi_index_roundtrip() {
        let b = build_basis(Domain::<f64>::unit(3).unwrap(), 3).unwrap();
        for k in 0..b.size() {
            assert_eq!(b.index_of(&b.multi_index(k)), Some(k));
        }
        assert_eq!(b.multi_index(0), vec![1, 1, 1]);
        assert_eq!(b.index_of(&[0, 1, 1]), None);
        assert_eq!(b.index_of(&[4, 1, 1]), None);
    }

    #[test]
    fn construction_errors() {
        assert!(Domain::<f64>::new(4, vec![1.0; 4]).is_err());
        assert!(Domain::<f64>::new(0, vec![]).is_err());
        assert!(Domain::<f64>::new(2, vec![1.0]).is_err());
        assert!(Domain::<f64>::new(2, vec![1.0, 0.0]).is_err());
        assert!(Domain::<f64>::new(1, vec![-2.0]).is_err());
        let d = Domain::<f64>::unit(2).unwrap();
        assert!(build_basis(d.clone(), 1).is_err());
        assert!(Basis::new(d, 8, 7).is_err());
    }
}
