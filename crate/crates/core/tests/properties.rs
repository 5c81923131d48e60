use std::sync::Arc;

use fracsys::energy::{classify, grad_phi_power, phi_power, PowerParams};
use fracsys::solvers::{minimize_direct, random_positive_start, recover_v, SolveOptions};
use fracsys::spectral::{build_basis, Basis, Domain, SpectralField};
use fracsys::verify::{alpha_range, hypothesis_gate, residual_pair, GateInput, Theorem};
use fracsys::Rational;
use proptest::prelude::*;

fn basis(dim: usize, n: usize, stretch: f64) -> Arc<Basis<f64>> {
    let lengths = (0..dim).map(|a| 1.0 + stretch * a as f64).collect();
    build_basis(Domain::new(dim, lengths).unwrap(), n).unwrap()
}

fn field_strategy() -> impl Strategy<Value = SpectralField<f64>> {
    (1usize..=3, 2usize..=6, 0.0..1.5f64).prop_flat_map(|(dim, n, stretch)| {
        let b = basis(dim, n, stretch);
        prop::collection::vec(-1.0..1.0f64, b.size())
            .prop_map(move |c| SpectralField::new(b.clone(), c).unwrap())
    })
}

fn pair_strategy() -> impl Strategy<Value = (SpectralField<f64>, SpectralField<f64>)> {
    field_strategy().prop_flat_map(|u| {
        let b = u.basis().clone();
        prop::collection::vec(-1.0..1.0f64, b.size())
            .prop_map(move |c| (u.clone(), SpectralField::new(b.clone(), c).unwrap()))
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_roundtrip(u in field_strategy()) {
        let back = u.to_nodal().to_spectral();
        prop_assert!((&back - &u).l2_norm() <= 1e-12 * u.l2_norm().max(1.0));
    }

    #[test]
    fn parseval(u in field_strategy()) {
        prop_assert!((u.theta_norm(0.0) - u.to_nodal().l2_norm()).abs() <= 1e-10);
    }

    #[test]
    fn semigroup(u in field_strategy(), s1 in -1.0..1.0f64, s2 in -1.0..1.0f64) {
        let a = u.apply_power(s1).apply_power(s2);
        let b = u.apply_power(s1 + s2);
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-13 * y.abs().max(1e-300) || x == y);
        }
    }

    #[test]
    fn self_adjoint((u, v) in pair_strategy(), s in -1.0..1.0f64) {
        let a = u.apply_power(s).dot(&v).unwrap();
        let b = u.dot(&v.apply_power(s)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!((u.inner_theta(&v, s).unwrap() - v.inner_theta(&u, s).unwrap()).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn norm_compatibility(u in field_strategy(), s in 0.0..1.0f64) {
        let sq = u.theta_norm(s).powi(2);
        prop_assert!(rel(sq, u.dot(&u.apply_power(s)).unwrap()) <= 1e-12);
        prop_assert!(rel(u.apply_power(s).dual_norm(s), u.theta_norm(s)) <= 1e-12);
    }

    #[test]
    fn first_eigenvalue_is_smallest(dim in 1usize..=3, n in 2usize..=6, stretch in 0.0..2.0f64) {
        let b = basis(dim, n, stretch);
        let l1 = b.first_eigenvalue();
        prop_assert!(l1 > 0.0);
        prop_assert!(b.eigenvalues().iter().all(|&l| l >= l1));
    }

    #[test]
    fn classify_symmetric(n in 1usize..=3, a in 1i64..40, b in 1i64..40, c in 1i64..20) {
        let s = Rational::new(c, 20);
        let p = Rational::new(a, 8);
        let q = Rational::new(b, 8);
        let x = classify(&PowerParams::new(n, s, p, q).unwrap());
        let y = classify(&PowerParams::new(n, s, q, p).unwrap());
        prop_assert_eq!(x, y);
    }

    #[test]
    fn alpha_range_matches_window(n in 2usize..=3, c in 1i64..60) {
        let s = Rational::new(c, 60);
        let nonempty = alpha_range(n, s, Rational::new(1, 1)).is_some();
        let window = (n == 2 && s > Rational::new(1, 2)) || (n == 3 && s > Rational::new(3, 4));
        prop_assert_eq!(nonempty, window);
    }

    #[test]
    fn gates_are_total(n in 0usize..6, s in -2.0..2.0f64, p in -2.0..5.0f64, q in -2.0..9.0f64, t in 0.0..6.0f64) {
        for g in [
            hypothesis_gate(Theorem::T1, n, s, p, GateInput::Theta(t)),
            hypothesis_gate(Theorem::T2, n, s, p, GateInput::Q(q)),
            hypothesis_gate(Theorem::T1, n, s, p, GateInput::None),
        ] {
            prop_assert_eq!(g.satisfied, g.violations.is_empty());
        }
    }

    #[test]
    fn origin_is_critical_for_superlinear_source(s in 0.1..0.9f64, p in 0.3..1.5f64, q in 1.1..5.0f64) {
        let b = basis(2, 6, 0.0);
        let z = SpectralField::zeros(&b);
        let pr = PowerParams::new(2, s, p, q).unwrap();
        prop_assert_eq!(phi_power(&z, &pr).unwrap(), 0.0);
        prop_assert!(grad_phi_power(&z, &pr).unwrap().l2_norm() <= 1e-10);
    }

    #[test]
    fn manufactured_first_residual_vanishes(s in 0.1..0.9f64, amp in 0.1..5.0f64) {
        let b = basis(2, 8, 0.5);
        let v = SpectralField::ground_state(&b).scaled(amp);
        let u = v.invert_power(s);
        let pr = PowerParams::new(2, s, 1.0, 2.0).unwrap();
        let (r1, _) = residual_pair(&u, &v, &pr).unwrap();
        prop_assert!(r1 <= 1e-12 * amp);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn minimization_is_monotone_and_sound(seed in 0u64..1000, p in 0.4..0.9f64, q in 0.3..1.0f64) {
        prop_assume!(p * q < 1.0);
        let b = basis(2, 10, 0.0);
        let pr = PowerParams::new(2, 0.75, p, q).unwrap();
        let opts = SolveOptions::default();
        let r = minimize_direct(&pr, &random_positive_start(&b, 0.75, seed), &opts).unwrap();
        prop_assert!(r.trace.windows(2).all(|w| w[1].energy <= w[0].energy));
        if r.converged {
            let (r1, r2) = residual_pair(&r.u, &recover_v(&r.u, &pr), &pr).unwrap();
            prop_assert!(r1 <= 10.0 * opts.grad_tol && r2 <= 10.0 * opts.grad_tol);
        }
    }
}
