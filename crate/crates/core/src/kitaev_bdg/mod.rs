//! Bogoliubov–de Gennes solver for the fermionic (Kitaev) image of the chain.
//!
//! With `H = Σ a†Aa + ½Σ(a†Ba† + h.c.) − ½ tr A`, the chain has
//! `A = −μ δ − J (nearest neighbours)` and the antisymmetric
//! `B_{n,n+1} = −F = −B_{n+1,n}`. Writing a quasiparticle as
//! `u·a + v·a†` with `φ = u + v`, `ψ = u − v` gives
//! `(A − B)ψ = Λφ` and `(A + B)φ = Λψ`, so the excitation energies are the
//! singular values of `A − B`, with `φ` and `ψ` its left and right singular
//! vectors. Taking the SVD directly (rather than eigenvalues of the product)
//! keeps near-zero modes accurate. Then `H = Σ Λₘ(nₘ − ½)`.

mod analysis;

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::chain::{ChainParams, KitaevParams};
use crate::spin_chain_ed::{diagonalize_chain, DEFAULT_L_MAX};
use crate::{Error, Result};

pub use analysis::*;

/// Largest chain for which the `2^L` many-body reconstruction is attempted.
pub const JW_L_MAX: usize = 10;

#[derive(Debug, Clone)]
pub struct BdgSpectrum {
    /// Non-negative excitation energies, ascending.
    pub energies: Vec<f64>,
    /// Particle amplitudes, one column per mode.
    pub u: DMatrix<f64>,
    /// Hole amplitudes, one column per mode.
    pub v: DMatrix<f64>,
    /// `−½ Σ Λₘ`.
    pub ground_energy: f64,
    /// Fermion parity of the quasiparticle vacuum, `sign det(A − B)`.
    pub vacuum_parity: i8,
    /// Frobenius norm of `A − B`, the scale for "zero" energies.
    pub scale: f64,
}

impl BdgSpectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// The two Majorana components `φ = u + v`, `ψ = u − v` of mode `m`.
    pub fn majorana(&self, m: usize) -> (DVector<f64>, DVector<f64>) {
        let (u, v) = (self.u.column(m), self.v.column(m));
        (u + v, u - v)
    }

    /// `E_odd − E_even` between the lowest states of the two parity sectors,
    /// i.e. the lowest excitation energy signed by the vacuum parity.
    pub fn signed_splitting(&self) -> f64 {
        f64::from(self.vacuum_parity) * self.energies[0]
    }
}

/// `A − B` for the chain (diagonal `−μ`, superdiagonal `F − J`,
/// subdiagonal `−(J + F)`).
pub fn a_minus_b(k: &KitaevParams) -> DMatrix<f64> {
    let l = k.len();
    let mut m = DMatrix::zeros(l, l);
    for n in 0..l {
        m[(n, n)] = -k.mu[n];
    }
    for n in 0..l - 1 {
        m[(n, n + 1)] = k.pairing[n] - k.hopping[n];
        m[(n + 1, n)] = -k.hopping[n] - k.pairing[n];
    }
    m
}

/// Full `2L × 2L` BdG matrix `[[A, B], [−B, −A]]` in the `(a, a†)` basis.
pub fn bdg_matrix(k: &KitaevParams) -> DMatrix<f64> {
    let l = k.len();
    let mut h = DMatrix::zeros(2 * l, 2 * l);
    for n in 0..l {
        h[(n, n)] = -k.mu[n];
        h[(l + n, l + n)] = k.mu[n];
    }
    for n in 0..l - 1 {
        let (j, f) = (k.hopping[n], k.pairing[n]);
        for (r, c) in [(n, n + 1), (n + 1, n)] {
            h[(r, c)] = -j;
            h[(l + r, l + c)] = j;
        }
        h[(n, l + n + 1)] = -f;
        h[(n + 1, l + n)] = f;
        h[(l + n, n + 1)] = f;
        h[(l + n + 1, n)] = -f;
    }
    h
}

pub fn bdg_diagonalize(k: &KitaevParams) -> Result<BdgSpectrum> {
    k.validate()?;
    let m = a_minus_b(k);
    let l = m.nrows();
    let scale = m.norm();
    let svd = m.clone().svd(true, true);
    let (uu, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a]
            .total_cmp(&svd.singular_values[b])
            .then(a.cmp(&b))
    });

    let det_sign = |q: &DMatrix<f64>| if q.determinant() >= 0.0 { 1i8 } else { -1 };
    let vacuum_parity = det_sign(&uu) * det_sign(&vt);

    let mut modes: Vec<(f64, DVector<f64>, DVector<f64>)> = order
        .iter()
        .map(|&i| {
            (
                svd.singular_values[i],
                uu.column(i).into(),
                vt.row(i).transpose(),
            )
        })
        .collect();
    refine_near_zero(&m, scale, &mut modes);

    let mut u = DMatrix::zeros(l, l);
    let mut v = DMatrix::zeros(l, l);
    let mut energies = Vec::with_capacity(l);
    for (c, (e, phi, psi)) in modes.iter().enumerate() {
        u.set_column(c, &((phi + psi) * 0.5));
        v.set_column(c, &((phi - psi) * 0.5));
        energies.push(*e);
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::Numerical("non-finite BdG energy".into()));
    }
    Ok(BdgSpectrum {
        ground_energy: -0.5 * energies.iter().sum::<f64>(),
        energies,
        u,
        v,
        vacuum_parity,
        scale,
    })
}

/// Recomputes the smallest singular triplets from the largest ones of
/// `(A − B)⁻¹`. The direct SVD resolves `Λᵢ` to about `ε‖A − B‖` absolute,
/// the inverse to about `ε Λᵢ/Λ₀` relative, so the inverse is used for every
/// mode with `Λᵢ² < Λ₀‖A − B‖`. Exactly singular inputs keep the direct
/// result.
fn refine_near_zero(m: &DMatrix<f64>, scale: f64, modes: &mut [(f64, DVector<f64>, DVector<f64>)]) {
    let floor = modes[0].0;
    if floor == 0.0 {
        return;
    }
    let k = modes
        .iter()
        .take_while(|x| x.0 * x.0 < floor * scale)
        .count();
    if k == 0 {
        return;
    }
    let Some(inv) = m.clone().lu().try_inverse() else {
        return;
    };
    if inv.iter().any(|x| !x.is_finite()) {
        return;
    }
    let w = inv.svd(true, true);
    let (wu, wvt) = (w.u.unwrap(), w.v_t.unwrap());
    let mut order: Vec<usize> = (0..w.singular_values.len()).collect();
    order.sort_by(|&a, &b| w.singular_values[b].total_cmp(&w.singular_values[a]));
    // M⁻¹ = Σ s x yᵀ  ⇔  M x = s⁻¹ y
    let refined: Vec<_> = order[..k]
        .iter()
        .map(|&i| {
            (
                1.0 / w.singular_values[i],
                wvt.row(i).transpose(),
                wu.column(i).into(),
            )
        })
        .collect();
    if refined.iter().all(|r| r.0.is_finite()) {
        modes[..k].clone_from_slice(&refined);
        modes[..k].sort_by(|a, b| a.0.total_cmp(&b.0));
    }
}

/// Largest violation of `λᵢ = −λ_{2L−1−i}` in the sorted 2L spectrum, relative
/// to the matrix norm.
pub fn particle_hole_residual(k: &KitaevParams) -> Result<f64> {
    k.validate()?;
    let h = bdg_matrix(k);
    let norm = h.norm().max(f64::MIN_POSITIVE);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let n = ev.len();
    Ok((0..n / 2)
        .map(|i| (ev[i] + ev[n - 1 - i]).abs())
        .fold(0.0, f64::max)
        / norm)
}

/// All `2^L` many-body energies `Σ Λₘ(nₘ − ½)` with their fermion parity.
pub fn many_body_levels(spec: &BdgSpectrum) -> Result<Vec<(f64, i8)>> {
    let l = spec.len();
    if l > 20 {
        return Err(Error::Capacity {
            what: "many-body reconstruction length",
            requested: l,
            limit: 20,
        });
    }
    Ok((0..1usize << l)
        .map(|occ| {
            let e = spec
                .energies
                .iter()
                .enumerate()
                .map(|(m, &x)| if occ >> m & 1 == 1 { 0.5 * x } else { -0.5 * x })
                .sum();
            let p = if occ.count_ones() % 2 == 0 { 1 } else { -1 };
            (e, spec.vacuum_parity * p)
        })
        .collect())
}

/// Deliberate corruption of the fermion side, used to show the check bites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JwMutation {
    /// Reverse the sign of the hopping on one bond only.
    FlipHoppingSign { bond: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct JwReport {
    pub l: usize,
    pub tol: f64,
    /// Largest energy difference over both parity sectors.
    pub max_abs_diff: f64,
    pub passed: bool,
    /// One line per mismatching level (capped).
    pub diff: Vec<String>,
}

impl JwReport {
    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::Mismatch(self.diff.join("\n")))
        }
    }
}

/// Compares the spin-chain ED spectrum with the BdG reconstruction, sector by
/// sector in parity.
pub fn jordan_wigner_check(c: &ChainParams) -> Result<JwReport> {
    c.validate()?;
    jordan_wigner_check_kitaev(&c.kitaev_params(), None, 1e-9)
}

pub fn jordan_wigner_check_kitaev(
    k: &KitaevParams,
    mutation: Option<JwMutation>,
    tol: f64,
) -> Result<JwReport> {
    k.validate()?;
    let l = k.len();
    if l > JW_L_MAX {
        return Err(Error::Capacity {
            what: "Jordan-Wigner check length",
            requested: l,
            limit: JW_L_MAX,
        });
    }
    let ed = diagonalize_chain(k, DEFAULT_L_MAX)?;
    let mut fermion = k.clone();
    match mutation {
        Some(JwMutation::FlipHoppingSign { bond }) if bond < l - 1 => {
            fermion.hopping[bond] = -fermion.hopping[bond];
        }
        Some(JwMutation::FlipHoppingSign { bond }) => {
            return Err(Error::Precondition(format!("bond {bond} out of range")));
        }
        None => {}
    }
    let mb = many_body_levels(&bdg_diagonalize(&fermion)?)?;

    let mut max_abs_diff: f64 = 0.0;
    let mut diff = Vec::new();
    for parity in [1i8, -1] {
        let sector = |v: Vec<f64>| {
            let mut v = v;
            v.sort_by(f64::total_cmp);
            v
        };
        let a = sector(
            ed.eigenvalues
                .iter()
                .zip(&ed.parities)
                .filter(|(_, &p)| p == parity)
                .map(|(&e, _)| e)
                .collect(),
        );
        let b = sector(mb.iter().filter(|x| x.1 == parity).map(|x| x.0).collect());
        if a.len() != b.len() {
            diff.push(format!(
                "parity {parity:+}: ED has {} levels, BdG has {}",
                a.len(),
                b.len()
            ));
            max_abs_diff = f64::INFINITY;
            continue;
        }
        for (i, (x, y)) in a.iter().zip(&b).enumerate() {
            let d = (x - y).abs();
            max_abs_diff = max_abs_diff.max(d);
            if d > tol && diff.len() < 32 {
                diff.push(format!(
                    "parity {parity:+} level {i}: ED {x:.12e} vs BdG {y:.12e} (diff {d:.3e})"
                ));
            }
        }
    }
    Ok(JwReport {
        l,
        tol,
        max_abs_diff,
        passed: max_abs_diff <= tol,
        diff,
    })
}

/// Binary dump of the BdG modes: `L` as little-endian `u64`, then `L` energies,
/// then `u` and `v`, each stored mode by mode (`L` site values per mode), all
/// little-endian `f64`.
pub fn write_modes_dump<W: Write>(mut w: W, spec: &BdgSpectrum) -> std::io::Result<()> {
    let l = spec.len();
    w.write_all(&(l as u64).to_le_bytes())?;
    for e in &spec.energies {
        w.write_all(&e.to_le_bytes())?;
    }
    for block in [&spec.u, &spec.v] {
        for m in 0..l {
            for n in 0..l {
                w.write_all(&block[(n, m)].to_le_bytes())?;
            }
        }
    }
    Ok(())
}
