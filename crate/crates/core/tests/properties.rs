use aklt_hqmm::channels::{aklt_channel, KrausChannel};
use aklt_hqmm::hqmm::{GenerativeTriplet, ObservableWord};
use aklt_hqmm::operators::{kron, partial_trace, von_neumann_entropy, ComplexMatrix};
use aklt_hqmm::spt::{check_covariance, check_equivariance, SymmetryElement};
use aklt_hqmm::transitions::{e_h, e_h_dual, e_oh, e_oh_dual};
use aklt_hqmm::{random, Complex64};
use proptest::prelude::*;

fn min_eig(m: &ComplexMatrix) -> f64 {
    m.hermitian_eigenvalues().unwrap()[0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative_and_multiplicative(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b, c) = (random::ginibre(&mut rng, 2, 3), random::ginibre(&mut rng, 3, 2), random::ginibre(&mut rng, 2, 2));
        prop_assert!(kron(&kron(&a, &b), &c).approx_eq(&kron(&a, &kron(&b, &c)), 1e-12));
        let (d, e) = (random::ginibre(&mut rng, 3, 2), random::ginibre(&mut rng, 2, 3));
        let lhs = &kron(&a, &b) * &kron(&d, &e);
        prop_assert!(lhs.approx_eq(&kron(&(&a * &d), &(&b * &e)), 1e-11));
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let m = random::ginibre(&mut rng, 12, 12);
        let full = partial_trace(&m, &[2, 3, 2], &[0]).unwrap();
        let staged = partial_trace(&partial_trace(&m, &[2, 3, 2], &[0, 1]).unwrap(), &[2, 3], &[0]).unwrap();
        prop_assert!(full.approx_eq(&staged, 1e-11));
        prop_assert!((full.trace() - m.trace()).norm() < 1e-11);
        let (a, b) = (random::ginibre(&mut rng, 2, 2), random::ginibre(&mut rng, 3, 3));
        let reduced = partial_trace(&kron(&a, &b), &[2, 3], &[0]).unwrap();
        prop_assert!(reduced.approx_eq(&a.scale(b.trace()), 1e-11));
    }

    #[test]
    fn entropy_is_bounded(seed in any::<u64>(), dim in 2usize..6) {
        let mut rng = random::rng(seed);
        let rho = random::density(&mut rng, dim);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= 0.0 && s <= (dim as f64).log2() + 1e-10);
        let u = random::unitary(&mut rng, dim);
        prop_assert!((von_neumann_entropy(&u.conjugate(&rho)).unwrap() - s).abs() < 1e-9);
    }

    #[test]
    fn channel_and_dual_are_adjoint(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let phi = aklt_channel();
        let rho = random::ginibre(&mut rng, 2, 2);
        let x = random::ginibre(&mut rng, 2, 2);
        let lhs = phi.apply(&rho).unwrap().hs_inner(&x);
        let rhs = rho.hs_inner(&phi.dual_apply(&x).unwrap());
        prop_assert!((lhs - rhs).norm() < 1e-11);

        let sigma = random::ginibre(&mut rng, 2, 2);
        let y = random::ginibre(&mut rng, 4, 4);
        prop_assert!((e_h_dual(&sigma).unwrap().hs_inner(&y) - sigma.hs_inner(&e_h(&y).unwrap())).norm() < 1e-11);
        let (xa, yb) = (random::ginibre(&mut rng, 2, 2), random::ginibre(&mut rng, 3, 3));
        let lhs = e_oh_dual(&sigma).unwrap().hs_inner(&kron(&xa, &yb));
        prop_assert!((lhs - sigma.hs_inner(&e_oh(&xa, &yb).unwrap())).norm() < 1e-11);
    }

    #[test]
    fn duals_map_states_to_states(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let sigma = random::density(&mut rng, 2);
        for out in [aklt_channel().apply(&sigma).unwrap(), e_h_dual(&sigma).unwrap(), e_oh_dual(&sigma).unwrap()] {
            prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(out.hermiticity_residual() < 1e-12);
            prop_assert!(min_eig(&out) > -1e-12);
        }
    }

    #[test]
    fn aklt_channel_contracts_to_the_fixed_point(seed in any::<u64>(), steps in 1usize..6) {
        let mut rng = random::rng(seed);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let rho = random::density(&mut rng, 2);
        let phi = aklt_channel();
        let mut out = rho.clone();
        for _ in 0..steps {
            out = phi.apply(&out).unwrap();
        }
        let bound = 3f64.powi(-(steps as i32)) * rho.max_abs_diff(&half);
        prop_assert!(out.max_abs_diff(&half) <= bound + 1e-14);
    }

    #[test]
    fn hqmm_is_positive_on_positive_words(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = random::rng(seed);
        let t = GenerativeTriplet::aklt(random::density(&mut rng, 2)).unwrap();
        let xs = (0..n).map(|_| random::psd(&mut rng, 2)).collect();
        let ys = (0..n).map(|_| random::psd(&mut rng, 3)).collect();
        let v = t.evaluate(&ObservableWord::new(xs, ys).unwrap()).unwrap();
        prop_assert!(v.re >= -1e-12 && v.im.abs() < 1e-10 * (1.0 + v.re));
    }

    #[test]
    fn hqmm_is_linear_in_each_observed_slot(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = random::rng(seed);
        let t = GenerativeTriplet::aklt_stationary();
        let xs: Vec<_> = (0..n).map(|_| random::ginibre(&mut rng, 2, 2)).collect();
        let ys: Vec<_> = (0..n).map(|_| random::ginibre(&mut rng, 3, 3)).collect();
        let slot = (seed as usize) % n;
        let extra = random::ginibre(&mut rng, 3, 3);
        let a = Complex64::new(0.7, -0.4);
        let with = |y: ComplexMatrix| {
            let mut ys = ys.clone();
            ys[slot] = y;
            t.evaluate(&ObservableWord::new(xs.clone(), ys).unwrap()).unwrap()
        };
        let lhs = with(&ys[slot].scale(a) + &extra);
        let rhs = with(ys[slot].clone()) * a + with(extra.clone());
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn choi_round_trip_preserves_action(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let kraus: Vec<_> = (0..3).map(|_| random::ginibre(&mut rng, 3, 2)).collect();
        let ch = KrausChannel::new(kraus, 2, 3).unwrap();
        let back = KrausChannel::from_choi(&ch.choi_matrix(), 2, 3).unwrap();
        let rho = random::ginibre(&mut rng, 2, 2);
        prop_assert!(ch.apply(&rho).unwrap().approx_eq(&back.apply(&rho).unwrap(), 1e-9));
    }

    #[test]
    fn tensors_are_rotation_covariant(ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0, angle in -10.0f64..10.0) {
        let norm = (ax * ax + ay * ay + az * az).sqrt();
        prop_assume!(norm > 1e-3);
        let g = SymmetryElement::new([ax / norm, ay / norm, az / norm], angle).unwrap();
        prop_assert!(check_covariance(&g) < 1e-10);
        let mut rng = random::rng(angle.to_bits());
        let (x, y) = (random::ginibre(&mut rng, 2, 2), random::ginibre(&mut rng, 3, 3));
        prop_assert!(check_equivariance(&g, &x, &y).unwrap() < 1e-10);
    }
}
