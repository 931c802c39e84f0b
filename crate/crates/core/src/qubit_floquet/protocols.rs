//! Period-N observables: Brillouin-zone projection, the Ramsey and
//! resonant-pulse population sequences, and rational detection of the
//! quasienergy splitting.

use std::f64::consts::PI;

/// Projects a rotating-frame quasienergy onto the lab-frame Brillouin zone
/// when `T` spans `n` carrier periods.
///
/// Even `n` leaves `ε` unchanged; odd `n` shifts it by half a zone toward
/// the other sign, with `sgn 0 = +1`.
pub fn lab_frame_quasienergy(eps: f64, period: f64, n: u64) -> f64 {
    if n % 2 == 0 {
        eps
    } else {
        let sgn = if eps >= 0.0 { 1.0 } else { -1.0 };
        eps - sgn * PI / period
    }
}

/// Excited-state population after `k` level-spacing pulses in the Ramsey protocol.
pub fn ramsey_population(nu1: f64, k: u64) -> f64 {
    (0.5 * nu1 * k as f64).cos().powi(2)
}

/// Excited-state population after `k` resonant pulses of area `F₁`.
pub fn resonant_population(f1: f64, k: u64) -> f64 {
    (0.5 * f1 * k as f64).sin().powi(2)
}

pub fn ramsey_series(nu1: f64, k_max: u64) -> Vec<f64> {
    (0..=k_max).map(|k| ramsey_population(nu1, k)).collect()
}

pub fn resonant_series(f1: f64, k_max: u64) -> Vec<f64> {
    (0..=k_max).map(|k| resonant_population(f1, k)).collect()
}

/// Smallest shift `p` with `|x[i+p] − x[i]| ≤ tol` for every `i`.
///
/// Only shifts up to half the sequence length are tried so that every
/// candidate is tested on at least one full repetition.
pub fn fundamental_period(series: &[f64], tol: f64) -> Option<usize> {
    (1..=series.len() / 2).find(|&p| {
        series
            .iter()
            .zip(&series[p..])
            .all(|(a, b)| (a - b).abs() <= tol)
    })
}

/// Period of a population sequence compared with the nominal `N` of `2πM/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PeriodReport {
    pub nominal: u64,
    pub fundamental: Option<usize>,
    /// The measured period is half the nominal one.
    pub halved: bool,
}

impl PeriodReport {
    pub fn new(nominal: u64, series: &[f64], tol: f64) -> Self {
        let fundamental = fundamental_period(series, tol);
        Self {
            nominal,
            fundamental,
            halved: fundamental.is_some_and(|p| 2 * p as u64 == nominal),
        }
    }
}

/// Lag in `1..=max_lag` maximizing the correlation between the
/// mean-subtracted series and its shifted copy; ties go to the smallest lag.
pub fn autocorrelation_period(series: &[f64], max_lag: usize) -> Option<usize> {
    let n = series.len();
    if n < 2 || max_lag == 0 {
        return None;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let var: f64 = centered.iter().map(|x| x * x).sum::<f64>() / n as f64;
    if var < 1e-24 {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for lag in 1..=max_lag.min(n - 1) {
        // Pearson correlation over the overlap, so exact periods score 1
        let (a, b) = (&centered[..n - lag], &centered[lag..]);
        let norm =
            (a.iter().map(|x| x * x).sum::<f64>() * b.iter().map(|x| x * x).sum::<f64>()).sqrt();
        if norm == 0.0 {
            continue;
        }
        let r = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / norm;
        match best {
            Some((_, b)) if r <= b + 1e-9 => {}
            _ => best = Some((lag, r)),
        }
    }
    best.map(|(lag, _)| lag)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Detects a splitting `ε₁ − ε₂ = 2πM/(NT)` with coprime `N > |M| ≥ 1`.
///
/// Returns the match with the smallest `N ≤ max_n`; for that `N` the `M`
/// closest to the target wins.
pub fn detect_period_multiplicity(
    eps1: f64,
    eps2: f64,
    period: f64,
    max_n: u64,
    tol: f64,
) -> Option<(i64, u64)> {
    let x = (eps1 - eps2) * period / (2.0 * PI);
    if !x.is_finite() {
        return None;
    }
    for n in 2..=max_n {
        let nf = n as f64;
        let lo = ((x - tol) * nf).ceil() as i64;
        let hi = ((x + tol) * nf).floor() as i64;
        let best = (lo..=hi)
            .filter(|&m| m != 0 && m.unsigned_abs() < n && gcd(m.unsigned_abs(), n) == 1)
            .filter(|&m| (x - m as f64 / nf).abs() <= tol)
            .min_by(|&a, &b| {
                let da = (x - a as f64 / nf).abs();
                let db = (x - b as f64 / nf).abs();
                da.total_cmp(&db)
            });
        if let Some(m) = best {
            return Some((m, n));
        }
    }
    None
}
