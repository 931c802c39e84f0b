//! Lab-frame integration of the pulsed qubit, used as an independent check
//! of the rotating-wave description.
//!
//! `δ̄` is a unit-area Gaussian of width `σ`. Each step is a symmetric split:
//! half a step of `½ω₀σᶻ`, a full step of the pulse and drive terms sampled
//! at the midpoint, then another half step of `½ω₀σᶻ`. Every factor is an
//! exact 2×2 exponential so the norm is preserved for any `dt`.

use std::f64::consts::PI;

use super::{derive_rwa, rwa_propagate, Op2, PulseTrain, Spinor};
use crate::{Error, Result, C64};

/// Protocol start time as a fraction of the period, halfway between pulses.
pub const RAMSEY_T_START: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct LabFrameRun {
    /// Sample times: the start, every full period after it, and the end.
    pub times: Vec<f64>,
    pub states: Vec<Spinor>,
    /// Final state predicted by the rotating-wave monodromy, in the lab frame.
    pub rwa_prediction: Spinor,
    /// `|⟨ψ_RWA|ψ_lab⟩|²` at the final time.
    pub rwa_fidelity: f64,
}

fn gaussian_train(t: f64, period: f64, sigma: f64) -> f64 {
    let n0 = (t / period).round();
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    (-2..=2)
        .map(|dn| {
            let x = t - (n0 + f64::from(dn)) * period;
            norm * (-0.5 * (x / sigma).powi(2)).exp()
        })
        .sum()
}

/// `exp(−iτ(a σᶻ + b σˣ))`.
fn spin_rotation(a: f64, b: f64, tau: f64) -> Op2 {
    let r = a.hypot(b);
    if r == 0.0 {
        return Op2::identity();
    }
    let (s, c) = (r * tau).sin_cos();
    let (az, bx) = (a / r * s, b / r * s);
    Op2::new(
        C64::new(c, -az),
        C64::new(0.0, -bx),
        C64::new(0.0, -bx),
        C64::new(c, az),
    )
}

/// `U(t) = exp(−iω_F t σᶻ/2)`, mapping rotating-frame states to the lab frame.
fn frame(omega_f: f64, t: f64) -> Op2 {
    spin_rotation(0.5 * omega_f, 0.0, t)
}

/// Integrates the lab-frame Schrödinger equation from `t_start` over `t_span`.
pub fn lab_frame_integrate(
    p: &PulseTrain,
    psi_init: Spinor,
    t_start: f64,
    t_span: f64,
    dt: f64,
) -> Result<LabFrameRun> {
    p.validate_for_integration()?;
    let dt_max = 0.05 * (2.0 * PI / p.omega0.abs()).min(p.sigma);
    if !(dt > 0.0 && dt < dt_max) {
        return Err(Error::Precondition(format!(
            "dt = {dt:.3e} must lie in (0, {dt_max:.3e})"
        )));
    }
    if ((psi_init.norm()) - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(
            "initial state is not normalized".into(),
        ));
    }
    if !(t_span >= 0.0) {
        return Err(Error::Precondition("t_span must be non-negative".into()));
    }

    let period = p.period();
    let free_half = |h: f64| spin_rotation(0.5 * p.omega0, 0.0, 0.5 * h);
    let step = |psi: Spinor, t: f64, h: f64| {
        let tm = t + 0.5 * h;
        let pulse = gaussian_train(tm, period, p.sigma);
        let a = 0.5 * p.nu1 * pulse;
        let b = (p.f0 + p.f1 * pulse) * (p.omega_f * tm).cos();
        let half = free_half(h);
        half * (spin_rotation(a, b, h) * (half * psi))
    };

    let mut times = vec![t_start];
    let mut states = vec![psi_init];
    let mut psi = psi_init;
    let mut t = t_start;
    let t_end = t_start + t_span;
    while t < t_end - 1e-12 * period {
        let seg = period.min(t_end - t);
        let n = (seg / dt).ceil().max(1.0) as usize;
        let h = seg / n as f64;
        for i in 0..n {
            psi = step(psi, t + i as f64 * h, h);
        }
        t += seg;
        times.push(t);
        states.push(psi);
    }

    let q = derive_rwa(p);
    let w = q.tilde_to_plain();
    let tilde0 = w.adjoint() * (frame(p.omega_f, t_start).adjoint() * psi_init);
    let tilde_end = rwa_propagate(&q, period, t_start, t_end, tilde0);
    let rwa_prediction = frame(p.omega_f, t_end) * (w * tilde_end);
    let rwa_fidelity = rwa_prediction.dotc(&psi).norm_sqr();

    Ok(LabFrameRun {
        times,
        states,
        rwa_prediction,
        rwa_fidelity,
    })
}

/// `exp(−iπσˣ/4)`, an ideal resonant π/2 pulse in the rotating frame.
fn half_pi_pulse() -> Op2 {
    spin_rotation(0.0, 1.0, PI / 4.0)
}

/// Ramsey protocol in the lab frame: ideal π/2 pulse, `k` periods of
/// level-spacing pulses, ideal π/2 pulse. Returns the excited population.
pub fn simulate_ramsey(p: &PulseTrain, k: u32, dt: f64) -> Result<f64> {
    let period = p.period();
    let t0 = RAMSEY_T_START * period;
    let ground = Spinor::new(C64::from(0.0), C64::from(1.0));
    let psi0 = frame(p.omega_f, t0) * (half_pi_pulse() * ground);
    let run = lab_frame_integrate(p, psi0, t0, f64::from(k) * period, dt)?;
    let t_end = *run.times.last().unwrap();
    let rotated = frame(p.omega_f, t_end).adjoint() * *run.states.last().unwrap();
    Ok((half_pi_pulse() * rotated)[0].norm_sqr())
}

/// Resonant-pulse protocol: start in `|0⟩`, return the excited population
/// after `k` periods.
pub fn simulate_resonant(p: &PulseTrain, k: u32, dt: f64) -> Result<f64> {
    let period = p.period();
    let t0 = RAMSEY_T_START * period;
    let ground = Spinor::new(C64::from(0.0), C64::from(1.0));
    let run = lab_frame_integrate(p, ground, t0, f64::from(k) * period, dt)?;
    Ok(run.states.last().unwrap()[0].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit_floquet::{ramsey_population, resonant_population};

    fn pulses(omega_t: f64, nu1: f64, f1: f64) -> PulseTrain {
        let omega0 = 1.0;
        let n = (omega_t / (2.0 * PI)).round() as u32;
        let period = 2.0 * PI * f64::from(n) / omega0;
        PulseTrain {
            omega0,
            omega_f: omega0,
            periods_per_t: n,
            nu1,
            f1,
            f0: 0.0,
            sigma: (period / omega0).sqrt(),
        }
    }

    #[test]
    fn free_precession_only_adds_phase() {
        let p = pulses(200.0 * PI, 0.0, 0.0);
        let ground = Spinor::new(C64::from(0.0), C64::from(1.0));
        let run = lab_frame_integrate(&p, ground, 0.0, 2.0 * p.period(), 0.02).unwrap();
        for (t, s) in run.times.iter().zip(&run.states) {
            assert!(s[0].norm() < 1e-12);
            let want = C64::from_polar(1.0, 0.5 * p.omega0 * t);
            assert!((s[1] - want).norm() < 1e-9, "t = {t}");
        }
        assert!(
            (run.rwa_fidelity - 1.0).abs() < 1e-10,
            "{}",
            run.rwa_fidelity
        );
    }

    #[test]
    fn norm_is_preserved_with_coarse_steps() {
        let p = pulses(200.0 * PI, 0.7, 1.3);
        let psi = Spinor::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let run = lab_frame_integrate(&p, psi, 0.3, 1.5 * p.period(), 0.3).unwrap();
        for s in &run.states {
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn preconditions() {
        let p = pulses(200.0 * PI, 0.0, 1.0);
        let ground = Spinor::new(C64::from(0.0), C64::from(1.0));
        assert!(matches!(
            lab_frame_integrate(&p, ground, 0.0, 1.0, 0.5),
            Err(Error::Precondition(_))
        ));
        let bad = Spinor::new(C64::from(1.0), C64::from(1.0));
        assert!(lab_frame_integrate(&p, bad, 0.0, 1.0, 0.01).is_err());
        let mut narrow = p;
        narrow.sigma = 5.0 / p.omega_f;
        assert!(lab_frame_integrate(&narrow, ground, 0.0, 1.0, 0.01).is_err());
        let mut wide = p;
        wide.sigma = p.period() / 5.0;
        assert!(lab_frame_integrate(&wide, ground, 0.0, 1.0, 0.01).is_err());
    }

    #[test]
    fn ramsey_third_matches_rwa() {
        let p = pulses(200.0 * PI, 2.0 * PI / 3.0, 0.0);
        for k in 0..4 {
            let pop = simulate_ramsey(&p, k, 0.05).unwrap();
            assert!(
                (pop - ramsey_population(p.nu1, k.into())).abs() < 1e-2,
                "k = {k}: {pop}"
            );
        }
    }

    #[test]
    fn resonant_pi_pulse_flips() {
        let p = pulses(200.0 * PI, 0.0, PI);
        let pop = simulate_resonant(&p, 1, 0.05).unwrap();
        assert!((pop - resonant_population(PI, 1)).abs() < 1e-2, "{pop}");
    }
}
