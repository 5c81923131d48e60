use super::nonlinearity::{Nonlinearity, Reaction, Source};
use super::PowerParams;
use crate::error::{Error, Result};
use crate::scalar::{signed_pow, Real};
use crate::spectral::{NodalField, SpectralField};

pub(crate) fn check_dim<T: Real>(u: &SpectralField<T>, n: usize) -> Result<()> {
    if u.basis().dim() != n {
        return Err(Error::BasisMismatch(format!(
            "field lives in dimension {}, parameters say n = {n}",
            u.basis().dim()
        )));
    }
    Ok(())
}

pub(crate) fn check_exponents<T: Real>(p: T, s: T) -> Result<()> {
    if !(p > T::zero() && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::Parameter(format!("s = {s} not in (0, 1)")));
    }
    Ok(())
}

fn finite(x: impl Real, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} evaluated to {x}")))
    }
}

/// `p/(p+1) ∫|𝒜ˢu|^{(p+1)/p} − ∫F(u)` by grid quadrature.
fn reduced<T: Real, R: Reaction<T>>(u: &SpectralField<T>, r: &R, p: T, s: T) -> Result<T> {
    let w = u.apply_power(s).to_nodal();
    let e = (p + T::one()) / p;
    let kinetic = p / (p + T::one()) * w.integrate_with(|x| x.abs().powf(e));
    let potential = u.to_nodal().integrate_with(|x| r.primitive(x));
    let value = kinetic - potential;
    finite(value, "reduced energy")?;
    Ok(value)
}

/// L²-representative of the derivative of [`reduced`]:
/// `𝒜ˢ P[|𝒜ˢu|^{1/p−1} 𝒜ˢu] − P[f(u)]`.
fn reduced_grad<T: Real, R: Reaction<T>>(
    u: &SpectralField<T>,
    r: &R,
    p: T,
    s: T,
) -> Result<SpectralField<T>> {
    let e = T::one() / p;
    let flux = u
        .apply_power(s)
        .to_nodal()
        .map(|x| signed_pow(x, e))
        .to_spectral()
        .apply_power(s);
    let source = u.to_nodal().map(|x| r.value(x)).to_spectral();
    let g = &flux - &source;
    if !g.is_finite() {
        return Err(Error::NonFinite("reduced gradient".into()));
    }
    Ok(g)
}

/// Reduced energy of the power system,
/// `Φ(u) = p/(p+1) ∫|𝒜ˢu|^{(p+1)/p} − 1/(q+1) ∫(u⁺)^{q+1}`.
pub fn phi_power<T: Real>(u: &SpectralField<T>, params: &PowerParams<T>) -> Result<T> {
    check_dim(u, params.n)?;
    reduced(u, &Source::PositivePower(params.q), params.p, params.s)
}

/// Coefficients `g` with `Φ′(u)φ = Σ g_k η_k`. The `Θ²ˢ` gradient is
/// `g.invert_power(2s)`.
pub fn grad_phi_power<T: Real>(
    u: &SpectralField<T>,
    params: &PowerParams<T>,
) -> Result<SpectralField<T>> {
    check_dim(u, params.n)?;
    reduced_grad(u, &Source::PositivePower(params.q), params.p, params.s)
}

/// `Φ(u) = p/(p+1) ∫|𝒜ˢu|^{(p+1)/p} − ∫F(u)`.
pub fn phi_general<T: Real>(u: &SpectralField<T>, nl: &Nonlinearity<T>, p: T, s: T) -> Result<T> {
    check_exponents(p, s)?;
    reduced(u, nl, p, s)
}

pub fn grad_phi_general<T: Real>(
    u: &SpectralField<T>,
    nl: &Nonlinearity<T>,
    p: T,
    s: T,
) -> Result<SpectralField<T>> {
    check_exponents(p, s)?;
    reduced_grad(u, nl, p, s)
}

fn nodal_pair<T: Real>(
    u: &SpectralField<T>,
    v: &SpectralField<T>,
) -> Result<(NodalField<T>, NodalField<T>)> {
    if !u.basis().same_as(v.basis()) {
        return Err(Error::BasisMismatch("u and v use different bases".into()));
    }
    Ok((u.to_nodal(), v.to_nodal()))
}

/// `ℋ(u, v) = ∫ |v|^{p+1}/(p+1) + F(u)`.
pub fn hamiltonian<T: Real>(
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    p: T,
    nl: &Nonlinearity<T>,
) -> Result<T> {
    let (un, vn) = nodal_pair(u, v)?;
    let e = p + T::one();
    let value = vn.integrate_with(|x| x.abs().powf(e) / e) + un.integrate_with(|x| nl.F(x));
    finite(value, "hamiltonian")?;
    Ok(value)
}

/// `𝒥(u, v) = Σ λ_k^s ξ_k η_k − ℋ(u, v)`.
pub fn lagrangian<T: Real>(
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    s: T,
    p: T,
    nl: &Nonlinearity<T>,
) -> Result<T> {
    let h = hamiltonian(u, v, p, nl)?;
    Ok(u.inner_theta(v, s)? - h)
}
