//! Energy in the stage variable `v`.
//!
//! With `u = 𝒜⁻ˢ P[|v|^{p−1} v]` the first equation of the system holds by
//! construction, and
//!
//! ```text
//! Ψ(v) = p/(p+1) ∫|v|^{p+1} − ∫F(u)
//! ```
//!
//! has `Ψ′(v)h = p ∫|v|^{p−1} (v − 𝒜⁻ˢP[f(u)]) h`, so its critical points are
//! exactly the discrete fixed points `v = 𝒜⁻ˢP[f(u)]`. For `p = 1` this is the
//! reduced functional written in `v = 𝒜ˢu`.

use super::nonlinearity::Reaction;
use crate::error::{Error, Result};
use crate::scalar::{signed_pow, Real};
use crate::spectral::SpectralField;

/// `u = 𝒜⁻ˢ P[|v|^{p−1} v]`.
pub fn lift_stage<T: Real>(v: &SpectralField<T>, p: T, s: T) -> SpectralField<T> {
    if p == T::one() {
        return v.invert_power(s);
    }
    v.to_nodal()
        .map(|x| signed_pow(x, p))
        .to_spectral()
        .invert_power(s)
}

/// `Ψ(v)` by grid quadrature.
pub fn phi_conjugate<T: Real, R: Reaction<T>>(
    v: &SpectralField<T>,
    r: &R,
    p: T,
    s: T,
) -> Result<T> {
    let e = p + T::one();
    let kinetic = p / e * v.to_nodal().integrate_with(|x| x.abs().powf(e));
    let u = lift_stage(v, p, s);
    let value = kinetic - u.to_nodal().integrate_with(|x| r.primitive(x));
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("stage energy evaluated to {value}")));
    }
    Ok(value)
}

/// Fixed-point residual `d = 𝒜⁻ˢP[f(u)] − v` together with the lifted `u`
/// and the decrease rate `−Ψ′(v)d = p ∫|v|^{p−1} d²`.
#[derive(Debug, Clone)]
pub struct StageStep<T: Real> {
    pub u: SpectralField<T>,
    pub direction: SpectralField<T>,
    pub slope: T,
}

pub fn stage_direction<T: Real, R: Reaction<T>>(
    v: &SpectralField<T>,
    r: &R,
    p: T,
    s: T,
) -> Result<StageStep<T>> {
    let u = lift_stage(v, p, s);
    let target = u.to_nodal().map(|x| r.value(x)).to_spectral().invert_power(s);
    let direction = &target - v;
    if !direction.is_finite() {
        return Err(Error::NonFinite("stage direction".into()));
    }
    let slope = if p == T::one() {
        direction.dot(&direction)?
    } else {
        let vn = v.to_nodal();
        // |v|^{p−1} blows up at nodal zeros of v when p < 1; floor it
        let floor = vn.sup_norm() * T::lit(1e-12);
        if floor == T::zero() {
            return Ok(StageStep {
                u,
                direction,
                slope: T::zero(),
            });
        }
        let weight = vn.map(|x| x.abs().max(floor).powf(p - T::one()));
        let dn = direction.to_nodal();
        p * weight.zip_map(&dn, |w, d| w * d * d).integrate()
    };
    Ok(StageStep {
        u,
        direction,
        slope,
    })
}
