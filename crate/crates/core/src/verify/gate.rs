use serde::Serialize;

use crate::energy::{ar_check, Nonlinearity};
use crate::scalar::{max_of, Ordered, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Scalar-coupled system with a general reaction `f`.
    T1,
    /// Power system `𝒜ˢu = vᵖ`, `𝒜ˢv = u^q`.
    T2,
}

/// What accompanies `(n, s, p)` in a gate query.
#[derive(Debug, Clone, PartialEq)]
pub enum GateInput<T> {
    None,
    /// Second exponent of the power system.
    Q(T),
    /// Superlinearity exponent `θ` of a reaction term.
    Theta(T),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub actual: String,
    pub required: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub theorem: Theorem,
    pub satisfied: bool,
    pub violations: Vec<Violation>,
}

impl HypothesisReport {
    fn new(theorem: Theorem, violations: Vec<Violation>) -> Self {
        Self {
            theorem,
            satisfied: violations.is_empty(),
            violations,
        }
    }

    pub fn violation_list(&self) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| format!("{}: {} (required {})", v.condition, v.actual, v.required))
            .collect()
    }
}

struct Checks(Vec<Violation>);

impl Checks {
    fn require(&mut self, ok: bool, condition: &str, actual: String, required: String) {
        if !ok {
            self.0.push(Violation {
                condition: condition.into(),
                actual,
                required,
            });
        }
    }
}

/// Checks the stated inequalities of either existence theorem; exact when
/// `T` is a rational type.
///
/// * `T1`: `2 ≤ n < 4s`, `0 < p < 2s/(n−2s)`, and `θ > max(2, 1+1/p)` when a
///   `θ` is supplied.
/// * `T2`: `n ≥ 4s`, `0 < p ≤ 1`, and `q < (n+4s)/(n−4s)` if `n > 4s`,
///   `q > 0` if `n = 4s`.
pub fn hypothesis_gate<T: Ordered>(
    theorem: Theorem,
    n: usize,
    s: T,
    p: T,
    input: GateInput<T>,
) -> HypothesisReport {
    let zero = T::zero();
    let one = T::one();
    let nn = T::int(n);
    let two_s = T::int(2) * s.clone();
    let four_s = T::int(4) * s.clone();
    let mut c = Checks(Vec::new());
    c.require(
        s > zero && s < one,
        "0 < s < 1",
        format!("s = {s}"),
        "(0, 1)".into(),
    );
    match theorem {
        Theorem::T1 => {
            c.require(n >= 2, "n >= 2", format!("n = {n}"), ">= 2".into());
            c.require(
                nn < four_s,
                "n < 4s",
                format!("n = {n}, 4s = {four_s}"),
                format!("s > {}", nn.clone() / T::int(4)),
            );
            c.require(p > zero, "p > 0", format!("p = {p}"), "> 0".into());
            let gap = nn.clone() - two_s.clone();
            if gap > zero {
                let bound = two_s / gap;
                c.require(
                    p < bound,
                    "p < 2s/(n-2s)",
                    format!("p = {p}"),
                    format!("< {bound}"),
                );
            }
            if let GateInput::Theta(theta) = input {
                if p > zero {
                    let bound = max_of(T::int(2), one.clone() + one / p.clone());
                    c.require(
                        theta > bound,
                        "theta > max(2, 1+1/p)",
                        format!("theta = {theta}"),
                        format!("> {bound}"),
                    );
                }
            }
        }
        Theorem::T2 => {
            c.require(
                nn >= four_s,
                "n >= 4s",
                format!("n = {n}, 4s = {four_s}"),
                format!("s <= {}", nn.clone() / T::int(4)),
            );
            c.require(
                p > zero && p <= one,
                "0 < p <= 1",
                format!("p = {p}"),
                "(0, 1]".into(),
            );
            match input {
                GateInput::Q(q) => {
                    if nn > four_s {
                        let bound = (nn.clone() + four_s.clone()) / (nn - four_s);
                        c.require(
                            q > zero && q < bound,
                            "q < (n+4s)/(n-4s)",
                            format!("q = {q}"),
                            format!("(0, {bound})"),
                        );
                    } else {
                        c.require(q > zero, "q > 0", format!("q = {q}"), "> 0".into());
                    }
                }
                _ => c.require(false, "q supplied", "missing".into(), "a value of q".into()),
            }
        }
    }
    HypothesisReport::new(theorem, c.0)
}

/// `T1` with a concrete reaction term: the exponent window, the strict `θ`
/// bound, and sampled superlinearity plus smallness at the default threshold.
pub fn hypothesis_gate_nl<T: Real>(n: usize, s: T, p: T, nl: &Nonlinearity<T>) -> HypothesisReport {
    let mut report = hypothesis_gate(Theorem::T1, n, s, p, GateInput::Theta(nl.theta));
    if p > T::zero() {
        if let Ok(ar) = ar_check(nl, p, nl.r0 + T::lit(10.0), 200) {
            if let Some((r, lhs, rhs)) = ar.ar_witness {
                report.violations.push(Violation {
                    condition: "theta*F(r) <= f(r)*r for r >= r0".into(),
                    actual: format!("{lhs} vs {rhs} at r = {r}"),
                    required: "strict inequality on (r0, r0+10]".into(),
                });
            }
            if !ar.smallness_holds {
                let class = if p > T::one() { "o(r)" } else { "o(r^(1/p))" };
                report.violations.push(Violation {
                    condition: format!("f(r) = {class} near 0"),
                    actual: format!("ratio {}", ar.smallness_ratio),
                    required: "< 0.01 at r = 1e-6".into(),
                });
            }
        }
    }
    report.satisfied = report.violations.is_empty();
    report
}

/// Open interval `(max(n/2, s), 2s)` of admissible embedding exponents, or
/// `None` when it is empty.
pub fn alpha_range<T: Ordered>(n: usize, s: T, _p: T) -> Option<(T, T)> {
    let lo = max_of(T::int(n) / T::int(2), s.clone());
    let hi = T::int(2) * s;
    (lo < hi).then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Nonlinearity;
    use num_rational::Ratio;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn general_source_gate_examples() {
        let g = hypothesis_gate(Theorem::T1, 2, 0.75, 1.0, GateInput::None);
        assert!(g.satisfied, "{g:?}");
        let g = hypothesis_gate(Theorem::T1, 3, 0.6, 1.0, GateInput::None);
        assert!(!g.satisfied);
        assert_eq!(g.violations[0].condition, "n < 4s");
        // p bound 2s/(n-2s) = 3 at n = 2, s = 3/4
        assert!(hypothesis_gate(Theorem::T1, 2, r(3, 4), r(3, 1), GateInput::None)
            .violations
            .iter()
            .any(|v| v.condition == "p < 2s/(n-2s)"));
        assert!(hypothesis_gate(Theorem::T1, 2, r(3, 4), r(29, 10), GateInput::None).satisfied);
        assert!(!hypothesis_gate(Theorem::T1, 1, 0.9, 0.5, GateInput::None).satisfied);
    }

    #[test]
    fn theta_bound_is_strict() {
        let at = hypothesis_gate(Theorem::T1, 2, 0.75, 1.0, GateInput::Theta(2.0));
        assert!(!at.satisfied);
        assert!(hypothesis_gate(Theorem::T1, 2, 0.75, 1.0, GateInput::Theta(2.5)).satisfied);
        // p = 1/2 needs θ > 3
        assert!(!hypothesis_gate(Theorem::T1, 2, 0.75, 0.5, GateInput::Theta(2.5)).satisfied);
    }

    #[test]
    fn power_system_gate_examples() {
        let g = hypothesis_gate(Theorem::T2, 2, 0.5, 1.0, GateInput::Q(3.0));
        assert!(g.satisfied, "{g:?}");
        // n > 4s: q < (n+4s)/(n-4s) = (3+2)/(3-2) = 5
        assert!(hypothesis_gate(Theorem::T2, 3, r(1, 2), r(1, 1), GateInput::Q(r(49, 10))).satisfied);
        assert!(!hypothesis_gate(Theorem::T2, 3, r(1, 2), r(1, 1), GateInput::Q(r(5, 1))).satisfied);
        assert!(!hypothesis_gate(Theorem::T2, 2, 0.5, 1.5, GateInput::Q(3.0)).satisfied);
        assert!(!hypothesis_gate(Theorem::T2, 2, 0.75, 1.0, GateInput::Q(3.0)).satisfied);
        assert!(!hypothesis_gate(Theorem::T2, 2, 0.5, 1.0, GateInput::None).satisfied);
    }

    #[test]
    fn concrete_nonlinearities() {
        let cubic = Nonlinearity::cubic(3.0, 0.0).unwrap();
        assert!(hypothesis_gate_nl(2, 0.75, 1.0, &cubic).satisfied);
        let exp = Nonlinearity::exp_linear(2.0, 0.0).unwrap();
        let g = hypothesis_gate_nl(2, 0.75, 1.0, &exp);
        let names: Vec<_> = g.violations.iter().map(|v| v.condition.as_str()).collect();
        assert_eq!(names, ["theta > max(2, 1+1/p)", "f(r) = o(r^(1/p)) near 0"]);
    }

    #[test]
    fn alpha_range_examples() {
        assert_eq!(alpha_range(2, r(3, 4), r(1, 1)), Some((r(1, 1), r(3, 2))));
        assert_eq!(alpha_range(3, r(4, 5), r(1, 1)), Some((r(3, 2), r(8, 5))));
        assert_eq!(alpha_range(3, r(7, 10), r(1, 1)), None);
        assert_eq!(alpha_range(2, r(1, 2), r(1, 1)), None);
    }
}
