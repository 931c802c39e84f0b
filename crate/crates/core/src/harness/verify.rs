//! Cross-oracle verification suite run by `floquet verify`.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::scenarios::FIG3_THRESHOLDS;
use super::Check;
use crate::chain::KitaevParams;
use crate::kitaev_bdg::{
    bdg_diagonalize, jordan_wigner_check_kitaev, mu_sweep, particle_hole_residual, JwMutation,
};
use crate::qubit_floquet::{
    closed_form_residual, floquet_eigensystem, lab_frame_quasienergy, monodromy_matrix, Op2,
    RwaQubit,
};
use crate::spin_chain_ed::{
    crossing_amplitude, diagonalize_chain, parity_diagonal, parity_operator, rwa_hamiltonian,
    stroboscopic_series, DEFAULT_L_MAX,
};
use crate::{Result, C64};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Replaces every numerical tolerance (not the quoted physical bounds).
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: None, seed: 1 }
    }
}

fn random_qubit(rng: &mut ChaCha8Rng) -> (RwaQubit, f64, f64) {
    let period = rng.random_range(0.2..5.0);
    let omega = rng.random_range(0.0..4.0 * PI) / period;
    let g = rng.random_range(0.0..4.0 * PI);
    let theta = rng.random_range(-0.5 * PI..0.5 * PI);
    let t0 = period * rng.random_range(0.01..0.99);
    (RwaQubit::from_kick(omega, g, theta), period, t0)
}

fn random_chain(rng: &mut ChaCha8Rng, l: usize, disordered: bool) -> KitaevParams {
    if disordered {
        KitaevParams {
            mu: (0..l).map(|_| rng.random_range(-3.0..3.0)).collect(),
            hopping: (0..l - 1).map(|_| rng.random_range(-1.5..1.5)).collect(),
            pairing: (0..l - 1).map(|_| rng.random_range(-1.5..1.5)).collect(),
        }
    } else {
        KitaevParams::uniform(
            l,
            rng.random_range(-3.0..3.0),
            rng.random_range(-1.5..1.5),
            rng.random_range(-1.5..1.5),
        )
    }
}

/// Runs every cross-check; the caller decides the exit status from `passed`.
pub fn verify_all(opts: VerifyOptions) -> Result<Vec<Check>> {
    let tol = |default: f64| opts.tol.unwrap_or(default);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();

    // single qubit
    let draws: Vec<_> = (0..1000).map(|_| random_qubit(&mut rng)).collect();
    let mut cf: f64 = 0.0;
    let mut unit: f64 = 0.0;
    let mut t0_dep: f64 = 0.0;
    for (q, period, t0) in &draws {
        cf = cf.max(closed_form_residual(q, *period, *t0)?);
        let u = monodromy_matrix(q, *period, *t0)?;
        unit = unit.max((u.adjoint() * u - Op2::identity()).norm());
        let e: Vec<[f64; 2]> = [0.1, 0.5, 0.9]
            .iter()
            .map(|f| floquet_eigensystem(q, *period, f * period).map(|p| p.eps))
            .collect::<Result<_>>()?;
        for pair in &e[1..] {
            for i in 0..2 {
                let d =
                    crate::qubit_floquet::wrap_phase((pair[i] - e[0][i]) * period).abs() / period;
                t0_dep = t0_dep.max(d);
            }
        }
    }
    checks.push(Check::bound(
        "closed-form-vs-monodromy (1000 draws)",
        cf,
        tol(1e-10),
    ));
    checks.push(Check::bound("monodromy-unitarity", unit, tol(1e-12)));
    checks.push(Check::bound("t0-independence", t0_dep, tol(1e-10)));

    let mut fold: f64 = 0.0;
    for _ in 0..1000 {
        let period = rng.random_range(0.2..5.0);
        let eps = rng.random_range(-PI..PI) / period;
        let n = rng.random_range(1..50u64);
        let even = lab_frame_quasienergy(eps, period, 2 * n);
        let twice = lab_frame_quasienergy(lab_frame_quasienergy(eps, period, 2 * n + 1), period, 1);
        fold = fold.max((even - eps).abs()).max((twice - eps).abs());
    }
    checks.push(Check::bound("brillouin-folding", fold, tol(1e-12)));

    // chain: ED against BdG, parity
    let chains: Vec<KitaevParams> = (0..200)
        .map(|i| {
            let l = rng.random_range(2..=8);
            random_chain(&mut rng, l, i % 2 == 1)
        })
        .collect();
    let jw = chains
        .par_iter()
        .map(|k| jordan_wigner_check_kitaev(k, None, 1e-9).map(|r| r.max_abs_diff))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::bound("ed-vs-bdg (200 draws, L<=8)", jw, tol(1e-9)));

    let mut comm: f64 = 0.0;
    for k in chains.iter().take(40) {
        let h = rwa_hamiltonian(k, DEFAULT_L_MAX)?;
        let p = parity_operator(k.len());
        comm = comm.max((&p * &h - &h * &p).norm());
    }
    checks.push(Check::bound("parity-commutation", comm, tol(1e-12)));

    let k = random_chain(&mut rng, 5, true);
    let dim = 1 << 5;
    let psi = DVector::from_fn(dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let psi = &psi / C64::from(psi.norm());
    let p = DVector::from_iterator(
        dim,
        parity_diagonal(5)
            .into_iter()
            .map(|x| C64::from(f64::from(x))),
    );
    let series = stroboscopic_series(&k, 0.37, &psi, &nalgebra::DMatrix::from_diagonal(&p), 20)?;
    let drift = series
        .iter()
        .map(|x| (x - series[0]).abs())
        .fold(0.0, f64::max);
    checks.push(Check::bound("parity-conservation", drift, tol(1e-10)));

    let mut ph: f64 = 0.0;
    for i in 0..20 {
        let l = 2 + 2 * i;
        ph = ph.max(particle_hole_residual(&random_chain(&mut rng, l, true))?);
    }
    checks.push(Check::bound("particle-hole-symmetry", ph, tol(1e-12)));

    let mutated = jordan_wigner_check_kitaev(
        &KitaevParams::uniform(4, 0.3, 1.0, 0.6),
        Some(JwMutation::FlipHoppingSign { bond: 1 }),
        1e-9,
    )?;
    checks.push(
        Check::bound(
            "corrupted-jw-sign-detected",
            f64::from(u8::from(mutated.passed)),
            0.0,
        )
        .with_detail(mutated.diff.first().cloned().unwrap_or_default()),
    );

    let s = bdg_diagonalize(&KitaevParams::uniform(16, 0.0, 1.0, 1.0))?;
    checks.push(Check::bound(
        "sweet-spot-zero-mode",
        s.energies[0] / s.scale,
        tol(1e-14),
    ));

    let (mu, j) = (0.6, 1.0);
    let fs = crossing_amplitude(mu, j).unwrap_or(f64::NAN);
    let spec = diagonalize_chain(&KitaevParams::uniform(2, mu, j, fs), DEFAULT_L_MAX)?;
    let gap = spec
        .eigenvalues
        .iter()
        .zip(&spec.parities)
        .filter(|(_, &p)| p == 1)
        .flat_map(|(&a, _)| {
            spec.eigenvalues
                .iter()
                .zip(&spec.parities)
                .filter(|(_, &p)| p == -1)
                .map(move |(&b, _)| (a - b).abs())
        })
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::bound("two-qubit-crossing-gap", gap, tol(1e-10)));

    // quoted bounds for the 16-site chain; not affected by --tol
    let mus: Vec<f64> = (1..200)
        .map(|i| -1.0 + 2.0 * f64::from(i) / 200.0)
        .collect();
    for (f, bound) in FIG3_THRESHOLDS {
        let worst = mu_sweep(16, 1.0, f, &mus)?
            .iter()
            .map(|p| p.eps1)
            .fold(0.0, f64::max);
        checks.push(Check::bound(
            format!("fig3 eps1/J bound, F/J={f}, |mu/J|<1"),
            worst,
            bound,
        ));
    }
    Ok(checks)
}

pub fn format_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = format!(
        "{:<width$}  result  {:>10}  {:>10}\n",
        "check", "worst", "tol"
    );
    for c in checks {
        out += &format!(
            "{:<width$}  {}    {:>10.3e}  {:>10.3e}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.worst_residual,
            c.tol
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    out += &format!("{} checks, {} failed\n", checks.len(), failed);
    out
}
