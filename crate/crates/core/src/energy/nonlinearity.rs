use crate::error::{Error, Result};
use crate::scalar::{pos_pow, Real};

/// A reaction term `f` with its primitive `F(r) = ∫_0^r f`.
pub trait Reaction<T: Real> {
    fn value(&self, r: T) -> T;
    fn primitive(&self, r: T) -> T;

    /// `Some(q)` when `f(τr) = τ^q f(r)` for all `τ > 0`.
    fn homogeneity(&self) -> Option<T> {
        None
    }
}

/// Built-in reaction terms.
#[derive(Debug, Clone, PartialEq)]
pub enum Source<T> {
    /// `f(r) = r e^r`, `F(r) = (r-1)e^r + 1`.
    ExpLinear,
    /// `f(r) = (r⁺)^q`, the reaction of the power system.
    PositivePower(T),
    /// `f(r) = Σ c_k r^k`.
    Polynomial(Vec<T>),
}

fn horner<T: Real>(coeffs: impl DoubleEndedIterator<Item = T>, r: T) -> T {
    coeffs.rev().fold(T::zero(), |acc, c| acc * r + c)
}

impl<T: Real> Reaction<T> for Source<T> {
    fn value(&self, r: T) -> T {
        match self {
            Source::ExpLinear => r * r.exp(),
            Source::PositivePower(q) => pos_pow(r, *q),
            Source::Polynomial(c) => horner(c.iter().copied(), r),
        }
    }

    fn homogeneity(&self) -> Option<T> {
        match self {
            Source::PositivePower(q) => Some(*q),
            _ => None,
        }
    }

    fn primitive(&self, r: T) -> T {
        match self {
            Source::ExpLinear => {
                // (r-1)e^r + 1 = Σ_{k≥2} (k-1) r^k / k!, summed directly near 0
                if r.abs() < T::lit(0.5) {
                    let mut term = r; // r^k / k! at k = 1
                    let mut acc = T::zero();
                    for k in 2..30 {
                        let kf = T::from_usize_lossy(k);
                        term = term * r / kf;
                        acc = acc + (kf - T::one()) * term;
                    }
                    acc
                } else {
                    (r - T::one()) * r.exp() + T::one()
                }
            }
            Source::PositivePower(q) => pos_pow(r, *q + T::one()) / (*q + T::one()),
            Source::Polynomial(c) => {
                let lifted = std::iter::once(T::zero()).chain(
                    c.iter()
                        .enumerate()
                        .map(|(k, &ck)| ck / T::from_usize_lossy(k + 1)),
                );
                horner(lifted.collect::<Vec<_>>().into_iter(), r)
            }
        }
    }
}

impl<T: Real> Source<T> {
    pub fn name(&self) -> String {
        match self {
            Source::ExpLinear => "re^r".into(),
            Source::PositivePower(q) => format!("r^{q}"),
            Source::Polynomial(c) => format!("polynomial{c:?}"),
        }
    }
}

/// Reaction term together with the superlinearity data `(θ, r₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity<T> {
    pub source: Source<T>,
    pub theta: T,
    pub r0: T,
}

impl<T: Real> Nonlinearity<T> {
    pub fn new(source: Source<T>, theta: T, r0: T) -> Result<Self> {
        if !(theta.is_finite() && theta > T::zero()) {
            return Err(Error::Parameter(format!("theta = {theta} must be positive")));
        }
        if !(r0.is_finite() && r0 >= T::zero()) {
            return Err(Error::Parameter(format!("r0 = {r0} must be non-negative")));
        }
        Ok(Self { source, theta, r0 })
    }

    pub fn exp_linear(theta: T, r0: T) -> Result<Self> {
        Self::new(Source::ExpLinear, theta, r0)
    }

    /// `f(r) = r³` (signed), `F(r) = r⁴/4`.
    pub fn cubic(theta: T, r0: T) -> Result<Self> {
        let z = T::zero();
        Self::new(Source::Polynomial(vec![z, z, z, T::one()]), theta, r0)
    }

    pub fn f(&self, r: T) -> T {
        self.source.value(r)
    }

    #[allow(non_snake_case)]
    pub fn F(&self, r: T) -> T {
        self.source.primitive(r)
    }
}

impl<T: Real> Reaction<T> for Nonlinearity<T> {
    fn value(&self, r: T) -> T {
        self.source.value(r)
    }
    fn primitive(&self, r: T) -> T {
        self.source.primitive(r)
    }
    fn homogeneity(&self) -> Option<T> {
        self.source.homogeneity()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ArCheckOptions<T> {
    /// Where the small-`r` ratio is probed.
    pub probe: T,
    /// The ratio `|f(±probe)| / probe^e` must fall below this.
    pub threshold: T,
    /// Also sample the inequality on `[-r_max, -r₀)`.
    pub both_sides: bool,
}

impl<T: Real> Default for ArCheckOptions<T> {
    fn default() -> Self {
        Self {
            probe: T::lit(1e-6),
            threshold: T::lit(0.01),
            both_sides: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArReport<T> {
    /// `θF(r) < f(r) r` at every sample.
    pub ar_holds: bool,
    /// First failing sample `(r, θF(r), f(r) r)`.
    pub ar_witness: Option<(T, T, T)>,
    /// `max_± |f(±δ)| / δ^e` with `e = 1/p` for `p ≤ 1` and `e = 1` otherwise.
    pub smallness_ratio: T,
    pub smallness_holds: bool,
}

impl<T> ArReport<T> {
    pub fn passed(&self) -> bool {
        self.ar_holds && self.smallness_holds
    }
}

/// Samples the superlinearity condition `θF(r) ≤ f(r) r` for `r ≥ r₀` and the
/// smallness of `f` near zero, with default [`ArCheckOptions`].
///
/// The inequality is tested strictly on `(r₀, r_max]`: when `θ` sits exactly at
/// its lower bound, a strict margin is what separates a superlinear `f` from
/// the linear `f(r) = r`.
pub fn ar_check<T: Real>(
    nl: &Nonlinearity<T>,
    p: T,
    r_max: T,
    grid_points: usize,
) -> Result<ArReport<T>> {
    ar_check_with(nl, p, r_max, grid_points, ArCheckOptions::default())
}

pub fn ar_check_with<T: Real>(
    nl: &Nonlinearity<T>,
    p: T,
    r_max: T,
    grid_points: usize,
    opts: ArCheckOptions<T>,
) -> Result<ArReport<T>> {
    if !(r_max > nl.r0) {
        return Err(Error::Parameter(format!(
            "r_max = {r_max} must exceed r0 = {}",
            nl.r0
        )));
    }
    if grid_points < 100 {
        return Err(Error::Parameter(format!(
            "need at least 100 sample points, got {grid_points}"
        )));
    }
    if !(p > T::zero()) {
        return Err(Error::Parameter(format!("p = {p} must be positive")));
    }

    let span = r_max - nl.r0;
    let count = T::from_usize_lossy(grid_points);
    let mut ar_witness = None;
    'outer: for i in 1..=grid_points {
        let r = nl.r0 + span * T::from_usize_lossy(i) / count;
        let signs: &[T] = if opts.both_sides {
            &[T::one(), -T::one()]
        } else {
            &[T::one()]
        };
        for &sign in signs {
            let r = sign * r;
            let lhs = nl.theta * nl.F(r);
            let rhs = nl.f(r) * r;
            if !(lhs < rhs) {
                ar_witness = Some((r, lhs, rhs));
                break 'outer;
            }
        }
    }

    let e = if p <= T::one() { T::one() / p } else { T::one() };
    let d = opts.probe;
    let smallness_ratio = nl.f(d).abs().max(nl.f(-d).abs()) / d.powf(e);
    Ok(ArReport {
        ar_holds: ar_witness.is_none(),
        ar_witness,
        smallness_holds: smallness_ratio < opts.threshold,
        smallness_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitives_match_quadrature() {
        let sources = [
            Source::ExpLinear,
            Source::PositivePower(2.5),
            Source::Polynomial(vec![0.3, -1.0, 0.0, 2.0]),
        ];
        for src in &sources {
            for &r in &[-2.0, -0.3, 0.0, 1e-3, 0.49, 0.51, 1.7] {
                // composite Simpson on [0, r]
                let n = 2000;
                let h = r / n as f64;
                let mut acc = src.value(0.0) + src.value(r);
                for i in 1..n {
                    let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                    acc += w * src.value(i as f64 * h);
                }
                let quad = acc * h / 3.0;
                let got = src.primitive(r);
                assert!((got - quad).abs() < 1e-9, "{src:?} r={r}: {got} vs {quad}");
            }
            assert_eq!(src.primitive(0.0), 0.0);
        }
    }

    #[test]
    fn exp_linear_series_is_continuous() {
        let s = Source::<f64>::ExpLinear;
        let below = s.primitive(0.5 - 1e-12);
        let above = s.primitive(0.5 + 1e-12);
        assert!((below - above).abs() < 1e-11);
        let want = 0.5e-12 + 1e-18 / 3.0;
        assert!((s.primitive(1e-6) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn exp_linear_superlinearity_on_positive_half_line() {
        let nl = Nonlinearity::exp_linear(2.0f64, 0.0).unwrap();
        let rep = ar_check(&nl, 1.0, 10.0, 200).unwrap();
        assert!(rep.ar_holds, "{rep:?}");
        // f(r)/r = e^r -> 1 at the origin: not o(r)
        assert!((rep.smallness_ratio - 1.0).abs() < 1e-5);
        assert!(!rep.smallness_holds);
        assert!(!rep.passed());
    }

    #[test]
    fn exp_linear_fails_on_negative_side() {
        let nl = Nonlinearity::exp_linear(2.0f64, 0.0).unwrap();
        let opts = ArCheckOptions {
            both_sides: true,
            ..Default::default()
        };
        let rep = ar_check_with(&nl, 1.0, 10.0, 200, opts).unwrap();
        let (r, lhs, rhs) = rep.ar_witness.unwrap();
        assert!(r < 0.0 && lhs >= rhs);
    }

    #[test]
    fn linear_source_fails_both_conditions() {
        let nl = Nonlinearity::new(Source::Polynomial(vec![0.0f64, 1.0]), 2.0, 0.0).unwrap();
        let rep = ar_check(&nl, 1.0, 10.0, 100).unwrap();
        assert!(!rep.ar_holds);
        let (r, lhs, rhs) = rep.ar_witness.unwrap();
        assert!((r - 0.1).abs() < 1e-15);
        assert_eq!(lhs, rhs);
        assert!(!rep.smallness_holds);
    }

    #[test]
    fn cubic_passes() {
        let nl = Nonlinearity::cubic(3.0, 0.0).unwrap();
        let rep = ar_check(&nl, 1.0, 10.0, 100).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let opts = ArCheckOptions {
            both_sides: true,
            ..Default::default()
        };
        assert!(ar_check_with(&nl, 1.0, 10.0, 100, opts).unwrap().passed());
        assert!(ar_check(&nl, 0.5, 10.0, 100).unwrap().passed());
    }

    #[test]
    fn smallness_exponent_switches_at_one() {
        // f = r^2: o(r) but not o(r^2) (p = 1/2 needs o(r^{1/p}) = o(r^2))
        let nl = Nonlinearity::new(Source::Polynomial(vec![0.0, 0.0, 1.0]), 3.0, 0.0).unwrap();
        assert!(ar_check(&nl, 2.0, 5.0, 100).unwrap().smallness_holds);
        assert!(ar_check(&nl, 1.0, 5.0, 100).unwrap().smallness_holds);
        assert!(!ar_check(&nl, 0.5, 5.0, 100).unwrap().smallness_holds);
    }

    #[test]
    fn precondition_errors() {
        let nl = Nonlinearity::cubic(3.0, 1.0).unwrap();
        assert!(ar_check(&nl, 1.0, 0.5, 100).is_err());
        assert!(ar_check(&nl, 1.0, 5.0, 99).is_err());
        assert!(Nonlinearity::cubic(-1.0, 0.0).is_err());
        assert!(Nonlinearity::cubic(3.0, -1.0).is_err());
    }
}
