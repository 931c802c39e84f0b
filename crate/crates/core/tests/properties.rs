use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use floquet_core::chain::KitaevParams;
use floquet_core::kitaev_bdg::{
    bdg_diagonalize, jordan_wigner_check_kitaev, particle_hole_residual,
};
use floquet_core::qubit_floquet::{
    autocorrelation_period, closed_form_quasienergy, closed_form_residual,
    detect_period_multiplicity, floquet_eigensystem, lab_frame_quasienergy, monodromy_matrix,
    stroboscopic_sigma_x, Op2, RwaQubit, Spinor,
};
use floquet_core::spin_chain_ed::{
    parity_diagonal, rwa_hamiltonian, stroboscopic_series, DEFAULT_L_MAX,
};
use floquet_core::C64;

fn qubit() -> impl Strategy<Value = (RwaQubit, f64)> {
    (
        0.1..10.0f64,
        0.0..4.0 * PI,
        0.0..4.0 * PI,
        -0.5 * PI..0.5 * PI,
    )
        .prop_map(|(t, wt, g, theta)| (RwaQubit::from_kick(wt / t, g, theta), t))
}

fn phase_distance(a: f64, b: f64, period: f64) -> f64 {
    let x = (a - b) * period;
    (x - 2.0 * PI * (x / (2.0 * PI)).round()).abs() / period
}

fn chain(max_l: usize) -> impl Strategy<Value = KitaevParams> {
    (2..=max_l).prop_flat_map(|l| {
        (
            prop::collection::vec(-3.0..3.0f64, l),
            prop::collection::vec(-1.5..1.5f64, l - 1),
            prop::collection::vec(-1.5..1.5f64, l - 1),
        )
            .prop_map(|(mu, hopping, pairing)| KitaevParams {
                mu,
                hopping,
                pairing,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_agrees_with_monodromy((q, t) in qubit(), frac in 0.01..0.99f64) {
        prop_assert!(closed_form_residual(&q, t, frac * t).unwrap() <= 1e-10);
    }

    #[test]
    fn monodromy_is_unitary((q, t) in qubit(), frac in 0.0..1.0f64) {
        let u = monodromy_matrix(&q, t, frac * t).unwrap();
        prop_assert!((u.adjoint() * u - Op2::identity()).norm() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn quasienergies_do_not_depend_on_t0((q, t) in qubit()) {
        let base = floquet_eigensystem(&q, t, 0.1 * t).unwrap().eps;
        for f in [0.5, 0.9] {
            let e = floquet_eigensystem(&q, t, f * t).unwrap().eps;
            for i in 0..2 {
                prop_assert!(phase_distance(e[i], base[i], t) <= 1e-10);
            }
        }
    }

    #[test]
    fn kick_area_has_period_4pi((q, t) in qubit()) {
        let shifted = RwaQubit::from_kick(q.omega, q.g + 4.0 * PI, q.theta);
        let a = closed_form_quasienergy(&q, t).unwrap().0;
        let b = closed_form_quasienergy(&shifted, t).unwrap().0;
        prop_assert!((a - b).abs() * t <= 1e-11);
    }

    #[test]
    fn rabi_frequency_has_period_4pi_over_t((q, t) in qubit()) {
        let shifted = RwaQubit::from_kick(q.omega + 4.0 * PI / t, q.g, q.theta);
        let a = closed_form_quasienergy(&q, t).unwrap().0;
        let b = closed_form_quasienergy(&shifted, t).unwrap().0;
        prop_assert!((a - b).abs() * t <= 1e-10);
    }

    #[test]
    fn brillouin_folding(eps_t in -PI..PI, t in 0.2..5.0f64, n in 1u64..50) {
        let eps = eps_t / t;
        prop_assert!((lab_frame_quasienergy(eps, t, 2 * n) - eps).abs() <= 1e-12);
        let odd = lab_frame_quasienergy(eps, t, 2 * n + 1);
        prop_assert!(odd >= -PI / t && odd < PI / t);
        prop_assert!((lab_frame_quasienergy(odd, t, 1) - eps).abs() <= 1e-12);
    }

    #[test]
    fn floquet_states_are_orthonormal((q, t) in qubit(), frac in 0.0..1.0f64) {
        let fp = floquet_eigensystem(&q, t, frac * t).unwrap();
        prop_assume!(!fp.degenerate);
        let [a, b] = fp.states;
        prop_assert!((a.norm() - 1.0).abs() <= 1e-12);
        prop_assert!((b.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(a.dotc(&b).norm() <= 1e-12);
    }

    #[test]
    fn ed_matches_bdg(k in chain(8)) {
        let r = jordan_wigner_check_kitaev(&k, None, 1e-9).unwrap();
        prop_assert!(r.passed, "{:?}", r.diff);
    }

    #[test]
    fn particle_hole_symmetry(k in chain(30)) {
        prop_assert!(particle_hole_residual(&k).unwrap() <= 1e-12);
        let s = bdg_diagonalize(&k).unwrap();
        prop_assert!(s.energies.iter().all(|&e| e >= 0.0));
    }

    #[test]
    fn parity_commutes_and_is_conserved(
        k in chain(6),
        re in prop::collection::vec(-1.0..1.0f64, 64),
        im in prop::collection::vec(-1.0..1.0f64, 64),
        t in 0.1..5.0f64,
    ) {
        let l = k.len();
        let dim = 1 << l;
        let h = rwa_hamiltonian(&k, DEFAULT_L_MAX).unwrap();
        let p = DMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            parity_diagonal(l).into_iter().map(f64::from),
        ));
        prop_assert!((&p * &h - &h * &p).norm() <= 1e-12);

        let psi = DVector::from_fn(dim, |i, _| C64::new(re[i], im[i]));
        prop_assume!(psi.norm() > 1e-3);
        let psi = &psi / C64::from(psi.norm());
        let series = stroboscopic_series(&k, t, &psi, &p.map(C64::from), 12).unwrap();
        for x in &series {
            prop_assert!((x - series[0]).abs() <= 1e-10);
        }
    }

    #[test]
    fn rational_splitting_gives_period_n(n in 2u64..9, m_seed in 1u64..100, theta in 0.2..1.2f64, t in 0.5..3.0f64) {
        let coprime: Vec<u64> = (1..n).filter(|&m| (1..=m).filter(|d| m % d == 0 && n % d == 0).count() == 1).collect();
        let m = coprime[(m_seed as usize) % coprime.len()];
        // no free precession: the splitting is the kick angle alone
        let q = RwaQubit::from_kick(0.0, 2.0 * PI * m as f64 / n as f64, theta);
        let (e1, e2) = closed_form_quasienergy(&q, t).unwrap();
        let found = detect_period_multiplicity(e1, e2, t, 12, 1e-9).unwrap();
        prop_assert_eq!(found.1, n);
        let psi0 = Spinor::new(C64::from(1.0), C64::from(0.0));
        let series = stroboscopic_sigma_x(&q, t, 0.3 * t, psi0, 8 * n as usize).unwrap();
        prop_assert_eq!(autocorrelation_period(&series, 2 * n as usize), Some(n as usize));
    }
}
