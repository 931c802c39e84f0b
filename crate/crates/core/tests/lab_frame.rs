use std::f64::consts::PI;

use floquet_core::qubit_floquet::{lab_frame_integrate, PulseTrain, Spinor, RAMSEY_T_START};
use floquet_core::C64;

/// Detuned pulse train with `ω_F = 1`, `n` carrier periods per pulse period and
/// detuning `Δ = delta_t / T`.
fn train(n: u32, delta_t: f64, nu1: f64, f1: f64) -> PulseTrain {
    let period = 2.0 * PI * f64::from(n);
    PulseTrain {
        omega0: 1.0 + delta_t / period,
        omega_f: 1.0,
        periods_per_t: n,
        nu1,
        f1,
        f0: 0.0,
        sigma: period.sqrt(),
    }
}

fn infidelity(p: &PulseTrain, periods: f64) -> f64 {
    let ground = Spinor::new(C64::from(0.0), C64::from(1.0));
    let t0 = RAMSEY_T_START * p.period();
    let run = lab_frame_integrate(p, ground, t0, periods * p.period(), 0.05).unwrap();
    1.0 - run.rwa_fidelity
}

#[test]
fn rwa_error_halves_when_omega0_t_doubles() {
    for (delta_t, nu1, f1, periods) in [(0.5, 0.4, 1.3, 3.0), (1.0, 0.0, 2.1, 2.0)] {
        let errs: Vec<f64> = [100, 200, 400]
            .iter()
            .map(|&n| infidelity(&train(n, delta_t, nu1, f1), periods))
            .collect();
        assert!(errs[0] < 1e-2, "{errs:?}");
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.5..2.5).contains(&ratio), "{errs:?}");
        }
    }
}

#[test]
fn level_spacing_pulses_alone_follow_rwa_closely() {
    // pulses along σᶻ commute with the free precession, so only the
    // stepping error remains
    let p = train(100, 0.7, 1.1, 0.0);
    assert!(infidelity(&p, 4.0) < 1e-9);
}
