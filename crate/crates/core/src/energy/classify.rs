use serde::Serialize;

use super::PowerParams;
use crate::scalar::Ordered;

/// Regime of the power system relative to `pq = 1` and the critical hyperbola.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `pq < 1`.
    Sublinear,
    /// `pq = 1`.
    Resonant,
    /// `pq > 1` and strictly below the hyperbola.
    SuperlinearSubcritical,
    /// `pq > 1` on the hyperbola.
    Critical,
    /// `pq > 1` above the hyperbola.
    Supercritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Sublinear => "sublinear",
            Regime::Resonant => "resonant",
            Regime::SuperlinearSubcritical => "superlinear-subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolaClass<T> {
    pub regime: Regime,
    /// `1/(p+1) + 1/(q+1)`.
    pub hyperbola_value: T,
    /// `(n - 2s)/n`.
    pub threshold: T,
}

/// Classifies `(p, q)`; exact when `T` is a rational type.
pub fn classify<T: Ordered>(params: &PowerParams<T>) -> HyperbolaClass<T> {
    let hyperbola_value = params.hyperbola_value();
    let threshold = params.critical_threshold();
    let pq = params.pq();
    let regime = if pq < T::one() {
        Regime::Sublinear
    } else if pq == T::one() {
        Regime::Resonant
    } else if hyperbola_value > threshold {
        Regime::SuperlinearSubcritical
    } else if hyperbola_value == threshold {
        Regime::Critical
    } else {
        Regime::Supercritical
    };
    HyperbolaClass {
        regime,
        hyperbola_value,
        threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn resonant_diagonal() {
        let c = classify(&PowerParams::new(2, 0.6f64, 1.0, 1.0).unwrap());
        assert_eq!(c.regime, Regime::Resonant);
        assert_eq!(c.hyperbola_value, 1.0);
        assert!((c.threshold - 0.4).abs() < 1e-15);
    }

    #[test]
    fn critical_point_exact() {
        let c = classify(&PowerParams::new(3, r(1, 2), r(2, 1), r(2, 1)).unwrap());
        assert_eq!(c.regime, Regime::Critical);
        assert_eq!(c.hyperbola_value, r(2, 3));
        assert_eq!(c.threshold, r(2, 3));
    }

    #[test]
    fn sublinear_and_supercritical() {
        assert_eq!(
            classify(&PowerParams::new(2, 0.5, 0.5, 0.5).unwrap()).regime,
            Regime::Sublinear
        );
        let c = classify(&PowerParams::new(3, r(1, 2), r(3, 1), r(9, 1)).unwrap());
        assert_eq!(c.regime, Regime::Supercritical);
        assert_eq!(c.hyperbola_value, r(7, 20));
        assert_eq!(
            classify(&PowerParams::new(2, 0.5, 1.0, 3.0).unwrap()).regime,
            Regime::SuperlinearSubcritical
        );
    }

    #[test]
    fn symmetric_in_p_and_q() {
        for (p, q) in [(r(1, 3), r(5, 2)), (r(2, 1), r(7, 3)), (r(1, 4), r(4, 1))] {
            for n in 1..=3 {
                let a = classify(&PowerParams::new(n, r(3, 5), p, q).unwrap());
                let b = classify(&PowerParams::new(n, r(3, 5), q, p).unwrap());
                assert_eq!(a, b);
            }
        }
    }
}
