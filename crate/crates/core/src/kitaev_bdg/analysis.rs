//! Edge-mode diagnostics, phase classification, length scans, μ sweeps and
//! disorder ensembles built on [`bdg_diagonalize`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{bdg_diagonalize, BdgSpectrum};
use crate::chain::KitaevParams;
use crate::{Error, Result};

/// Half-width of the band treated as the phase boundary `|μ| = 2|J|`.
pub const BOUNDARY_BAND: f64 = 1e-12;
/// Fraction of weight within the outer quarters that marks an edge mode.
pub const EDGE_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, Serialize)]
pub struct EdgeProfile {
    /// Per-site weight `u² + v² = (φ² + ψ²)/2` of the lowest mode; sums to 1.
    pub weights: Vec<f64>,
    /// Decay length of the amplitude from the nearer end; `0` for a mode
    /// confined to the end sites, `None` when no decay is seen.
    pub xi: Option<f64>,
    /// Weight on the first site over weight on the last.
    pub end_ratio: f64,
    /// Weight within `max(1, L/4)` sites of either end.
    pub outer_fraction: f64,
    pub is_edge: bool,
}

pub fn edge_mode_profile(spec: &BdgSpectrum) -> EdgeProfile {
    let l = spec.len();
    let weights: Vec<f64> = (0..l)
        .map(|n| spec.u[(n, 0)].powi(2) + spec.v[(n, 0)].powi(2))
        .collect();
    // fold onto the distance from the nearer end
    let half = l.div_ceil(2);
    let folded: Vec<f64> = (0..half)
        .map(|d| {
            if l - 1 - d == d {
                weights[d]
            } else {
                weights[d] + weights[l - 1 - d]
            }
        })
        .collect();
    let quarter = (l / 4).max(1);
    let outer_fraction: f64 = folded[..quarter.min(half)].iter().sum();

    // fit the decreasing upper envelope: nodes of an oscillating tail and the
    // empty sublattice at μ = 0 would otherwise drag the slope
    let mut pts = Vec::new();
    let mut floor: f64 = 0.0;
    for (d, &w) in folded.iter().enumerate().rev() {
        if w > 1e-28 && w >= floor {
            pts.push((d as f64, w.ln()));
            floor = w;
        }
    }
    pts.reverse();
    let xi = match pts.len() {
        0 => None,
        1 if pts[0].0 == 0.0 => Some(0.0),
        1 => None,
        _ => {
            let (slope, _, _) = linear_fit(&pts);
            (slope < 0.0).then(|| -2.0 / slope)
        }
    };
    EdgeProfile {
        end_ratio: weights[0] / weights[l - 1],
        weights,
        xi,
        outer_fraction,
        is_edge: outer_fraction > EDGE_FRACTION,
    }
}

/// Least squares `y = a x + b`; returns `(a, b, R²)`.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let a = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (a, my - a * mx, r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Topological,
    Trivial,
    Boundary,
}

/// Classifies a uniform chain by `|μ|` against `2|J|`.
///
/// A chain without pairing is gapless for `|μ| < 2|J|` and is reported as
/// `Boundary`.
pub fn phase_classifier(k: &KitaevParams) -> Result<Phase> {
    k.validate()?;
    let (mu, j, f) = k.as_uniform().ok_or_else(|| {
        Error::Precondition(
            "phase classifier needs uniform parameters; use spectral gap scan".into(),
        )
    })?;
    let d = mu.abs() - 2.0 * j.abs();
    Ok(if d.abs() < BOUNDARY_BAND {
        Phase::Boundary
    } else if d > 0.0 {
        Phase::Trivial
    } else if f == 0.0 {
        Phase::Boundary
    } else {
        Phase::Topological
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapRow {
    pub l: usize,
    pub eps1: f64,
    pub eps2: f64,
    /// `ε₁` signed by the vacuum parity, see [`BdgSpectrum::signed_splitting`].
    pub signed_eps1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapScan {
    pub rows: Vec<GapRow>,
    /// `κ` in `ε₁ ∝ e^{−κL}`; infinite when every `ε₁` is zero.
    pub decay_rate: f64,
    /// Quality of the log-linear fit, when one was made.
    pub r_squared: Option<f64>,
    /// Sign changes of the signed splitting along the list.
    pub sign_changes: usize,
}

fn gap_row(l: usize, mu: f64, j: f64, f: f64) -> Result<(GapRow, f64)> {
    let s = bdg_diagonalize(&KitaevParams::uniform(l, mu, j, f))?;
    Ok((
        GapRow {
            l,
            eps1: s.energies[0],
            eps2: s.energies[1],
            signed_eps1: s.signed_splitting(),
        },
        s.scale,
    ))
}

fn sign_changes(xs: impl Iterator<Item = f64>) -> usize {
    let signs: Vec<bool> = xs.filter(|x| *x != 0.0).map(|x| x > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `ε₁` against chain length, with an exponential fit.
pub fn gap_scaling_scan(j: f64, f: f64, mu: f64, l_list: &[usize]) -> Result<GapScan> {
    if phase_classifier(&KitaevParams::uniform(2, mu, j, f))? != Phase::Topological {
        return Err(Error::Precondition(format!(
            "gap scan needs topological parameters, got mu={mu}, J={j}, F={f}"
        )));
    }
    let rows: Vec<(GapRow, f64)> = l_list
        .par_iter()
        .map(|&l| gap_row(l, mu, j, f))
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(r, scale)| r.eps1 > 1e-14 * scale)
        .map(|(r, _)| (r.l as f64, r.eps1.ln()))
        .collect();
    let (decay_rate, r_squared) = match pts.len() {
        0 => (f64::INFINITY, None),
        1 => (f64::NAN, None),
        _ => {
            let (a, _, r2) = linear_fit(&pts);
            (-a, Some(r2))
        }
    };
    let rows: Vec<GapRow> = rows.into_iter().map(|x| x.0).collect();
    Ok(GapScan {
        sign_changes: sign_changes(rows.iter().map(|r| r.signed_eps1)),
        rows,
        decay_rate,
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepPoint {
    pub mu: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub signed_eps1: f64,
}

/// Lowest two excitation energies of a uniform chain over a list of `μ`.
pub fn mu_sweep(l: usize, j: f64, f: f64, mus: &[f64]) -> Result<Vec<SweepPoint>> {
    mus.par_iter()
        .map(|&mu| {
            let (r, _) = gap_row(l, mu, j, f)?;
            Ok(SweepPoint {
                mu,
                eps1: r.eps1,
                eps2: r.eps2,
                signed_eps1: r.signed_eps1,
            })
        })
        .collect()
}

/// Number of sign changes of the signed splitting along a sweep.
pub fn sweep_sign_changes(points: &[SweepPoint]) -> usize {
    sign_changes(points.iter().map(|p| p.signed_eps1))
}

#[derive(Debug, Clone, Serialize)]
pub struct DisorderSample {
    pub seed: u64,
    pub eps1: f64,
    pub xi: Option<f64>,
    pub is_edge: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Quantiles {
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisorderStats {
    pub samples: Vec<DisorderSample>,
    pub eps1: Quantiles,
    /// Over the samples with a finite decay length.
    pub xi: Option<Quantiles>,
    pub edge_fraction: f64,
    /// Edge classification differs between seeds.
    pub unstable: bool,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

fn quantiles(mut xs: Vec<f64>) -> Option<Quantiles> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    Some(Quantiles {
        q10: quantile(&xs, 0.1),
        median: quantile(&xs, 0.5),
        q90: quantile(&xs, 0.9),
    })
}

/// `base` with Gaussian noise: `site_sigma` on every `μₙ`, `bond_sigma` on
/// every hopping and pairing, drawn from a ChaCha8 stream seeded by `seed`.
pub fn disordered_params(
    base: &KitaevParams,
    site_sigma: f64,
    bond_sigma: f64,
    seed: u64,
) -> KitaevParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |s: f64| -> f64 {
        let z: f64 = StandardNormal.sample(&mut rng);
        s * z
    };
    let mut k = base.clone();
    k.mu.iter_mut().for_each(|m| *m += draw(site_sigma));
    k.hopping.iter_mut().for_each(|j| *j += draw(bond_sigma));
    k.pairing.iter_mut().for_each(|f| *f += draw(bond_sigma));
    k
}

pub fn disorder_ensemble(
    base: &KitaevParams,
    site_sigma: f64,
    bond_sigma: f64,
    seeds: &[u64],
) -> Result<DisorderStats> {
    base.validate()?;
    if !(site_sigma >= 0.0 && bond_sigma >= 0.0) {
        return Err(Error::Precondition(
            "disorder widths must be non-negative".into(),
        ));
    }
    if seeds.is_empty() {
        return Err(Error::Precondition("seed list is empty".into()));
    }
    let samples: Vec<DisorderSample> = seeds
        .par_iter()
        .map(|&seed| {
            let s = bdg_diagonalize(&disordered_params(base, site_sigma, bond_sigma, seed))?;
            let e = edge_mode_profile(&s);
            Ok(DisorderSample {
                seed,
                eps1: s.energies[0],
                xi: e.xi,
                is_edge: e.is_edge,
            })
        })
        .collect::<Result<_>>()?;
    let n_edge = samples.iter().filter(|s| s.is_edge).count();
    Ok(DisorderStats {
        eps1: quantiles(samples.iter().map(|s| s.eps1).collect()).unwrap(),
        xi: quantiles(samples.iter().filter_map(|s| s.xi).collect()),
        edge_fraction: n_edge as f64 / samples.len() as f64,
        unstable: n_edge != 0 && n_edge != samples.len(),
        samples,
    })
}
