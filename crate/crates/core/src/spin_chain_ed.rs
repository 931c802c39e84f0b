//! Exact diagonalization of the rotating-frame qubit chain.
//!
//! Basis states are bit strings with site 0 as the least significant bit;
//! a set bit is the excited state `|1⟩` (`σᶻ = +1`). The Hamiltonian is real
//! and commutes with the parity `P = (−1)^(number of excitations)`, so it is
//! diagonalized one parity block at a time and every eigenvector returned is
//! an exact parity eigenstate.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::chain::{ChainParams, KitaevParams};
use crate::{Error, Result, C64};

/// Default memory guard on the chain length for dense `2^L` matrices.
pub const DEFAULT_L_MAX: usize = 14;

/// `H_RWA` for a lab-frame chain description, guarded by [`DEFAULT_L_MAX`].
pub fn build_rwa_chain_hamiltonian(c: &ChainParams) -> Result<DMatrix<f64>> {
    c.validate()?;
    rwa_hamiltonian(&c.kitaev_params(), DEFAULT_L_MAX)
}

/// Dense `2^L × 2^L` rotating-frame Hamiltonian
/// `−½Σμσᶻ − Σ J(s⁺s⁻ + h.c.) − Σ F(s⁺s⁺ + h.c.)` with `s± = σ±/2`.
pub fn rwa_hamiltonian(k: &KitaevParams, l_max: usize) -> Result<DMatrix<f64>> {
    k.validate()?;
    let l = k.len();
    if l > l_max {
        return Err(Error::Capacity {
            what: "chain length",
            requested: l,
            limit: l_max,
        });
    }
    let dim = 1usize << l;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim {
        let diag: f64 = (0..l)
            .map(|n| {
                if s >> n & 1 == 1 {
                    -0.5 * k.mu[n]
                } else {
                    0.5 * k.mu[n]
                }
            })
            .sum();
        h[(s, s)] = diag;
        for n in 0..l - 1 {
            let (a, b) = (s >> n & 1, s >> (n + 1) & 1);
            let flipped = s ^ (0b11 << n);
            match (a, b) {
                // s⁺ₙ s⁻ₙ₊₁ and its conjugate
                (0, 1) | (1, 0) => h[(flipped, s)] -= k.hopping[n],
                // s⁺ₙ s⁺ₙ₊₁ and s⁻ₙ₊₁ s⁻ₙ
                _ => h[(flipped, s)] -= k.pairing[n],
            }
        }
    }
    Ok(h)
}

/// Parity eigenvalue of a basis state.
pub fn parity_of(state: usize) -> i8 {
    if state.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Diagonal of `P` as ±1 entries.
pub fn parity_diagonal(l: usize) -> Vec<i8> {
    (0..1usize << l).map(parity_of).collect()
}

/// Dense diagonal parity matrix; intended for small `L`.
pub fn parity_operator(l: usize) -> DMatrix<f64> {
    let d = parity_diagonal(l);
    DMatrix::from_diagonal(&DVector::from_iterator(
        d.len(),
        d.iter().map(|&p| f64::from(p)),
    ))
}

#[derive(Debug, Clone)]
pub struct ChainSpectrum {
    /// Rotating-frame energies, ascending.
    pub eigenvalues: Vec<f64>,
    /// Parity of each eigenstate.
    pub parities: Vec<i8>,
    /// Eigenvectors as columns, in the same order.
    pub eigenvectors: DMatrix<f64>,
}

impl ChainSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Lowest level within a parity sector.
    pub fn lowest_in_sector(&self, parity: i8) -> Option<(usize, f64)> {
        self.parities
            .iter()
            .position(|&p| p == parity)
            .map(|i| (i, self.eigenvalues[i]))
    }
}

/// Diagonalizes the chain block by block in the parity sectors.
pub fn diagonalize_chain(k: &KitaevParams, l_max: usize) -> Result<ChainSpectrum> {
    let h = rwa_hamiltonian(k, l_max)?;
    Ok(diagonalize_by_parity(&h))
}

pub(crate) fn diagonalize_by_parity(h: &DMatrix<f64>) -> ChainSpectrum {
    let dim = h.nrows();
    let mut levels: Vec<(f64, i8, DVector<f64>)> = Vec::with_capacity(dim);
    for parity in [1i8, -1] {
        let idx: Vec<usize> = (0..dim).filter(|&s| parity_of(s) == parity).collect();
        let block = DMatrix::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])]);
        let eig = SymmetricEigen::new(block);
        for (c, &e) in eig.eigenvalues.iter().enumerate() {
            let mut v = DVector::zeros(dim);
            for (i, &s) in idx.iter().enumerate() {
                v[s] = eig.eigenvectors[(i, c)];
            }
            levels.push((e, parity, v));
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (c, (_, _, v)) in levels.iter().enumerate() {
        eigenvectors.set_column(c, v);
    }
    ChainSpectrum {
        eigenvalues: levels.iter().map(|l| l.0).collect(),
        parities: levels.iter().map(|l| l.1).collect(),
        eigenvectors,
    }
}

/// Analytic eigensystem of two coupled qubits.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TwoQubitSolution {
    /// `ε₁,₂ = ±(μ² + F²)^{1/2}` (even parity), `ε₃,₄ = ∓J` (odd parity).
    pub eps: [f64; 4],
    /// Mixing angles with `tan φ₁,₂ = (μ − ε₁,₂)/F`.
    pub phi12: [f64; 2],
}

impl TwoQubitSolution {
    /// `ψ₁,₂ = cos φ|00⟩ + sin φ|11⟩`, `ψ₃,₄ = (|01⟩ ± |10⟩)/√2`, where the
    /// first label is site 0.
    pub fn states(&self) -> [DVector<f64>; 4] {
        let even = |phi: f64| DVector::from_vec(vec![phi.cos(), 0.0, 0.0, phi.sin()]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [
            even(self.phi12[0]),
            even(self.phi12[1]),
            DVector::from_vec(vec![0.0, s, s, 0.0]),
            DVector::from_vec(vec![0.0, -s, s, 0.0]),
        ]
    }

    pub fn parities(&self) -> [i8; 4] {
        [1, 1, -1, -1]
    }
}

pub fn two_qubit_eigensystem(mu: f64, f: f64, j: f64) -> TwoQubitSolution {
    let r = mu.hypot(f);
    let eps = [r, -r, -j, j];
    let angle = |e: f64| {
        if f != 0.0 {
            ((mu - e) / f).atan()
        } else if (e > 0.0) == (mu > 0.0) || mu == 0.0 && e >= 0.0 {
            // ε = μ belongs to |00⟩
            0.0
        } else {
            std::f64::consts::FRAC_PI_2
        }
    };
    TwoQubitSolution {
        eps,
        phi12: [angle(eps[0]), angle(eps[1])],
    }
}

/// Modulation amplitude at which an even and an odd two-qubit level cross,
/// `F* = (J² − μ²)^{1/2}`; exists only for `|μ| < |J|`.
pub fn crossing_amplitude(mu: f64, j: f64) -> Option<f64> {
    (mu.abs() < j.abs()).then(|| (j * j - mu * mu).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Dense product of single-site Pauli matrices.
pub fn pauli_string(l: usize, factors: &[(usize, Pauli)]) -> DMatrix<C64> {
    let dim = 1usize << l;
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let mut target = s;
        let mut amp = C64::from(1.0);
        for &(site, p) in factors {
            let up = target >> site & 1 == 1;
            match p {
                Pauli::X => target ^= 1 << site,
                Pauli::Y => {
                    // σʸ|0⟩ = −i|1⟩, σʸ|1⟩ = i|0⟩
                    amp *= if up {
                        C64::new(0.0, 1.0)
                    } else {
                        C64::new(0.0, -1.0)
                    };
                    target ^= 1 << site;
                }
                Pauli::Z => {
                    if !up {
                        amp = -amp;
                    }
                }
            }
        }
        m[(target, s)] += amp;
    }
    m
}

/// Stroboscopic lab-frame expectation values at `t = kT`, `T = 2π/ω_F`.
pub fn stroboscopic_observables(
    c: &ChainParams,
    psi_init: &DVector<C64>,
    observable: &DMatrix<C64>,
    k_max: usize,
) -> Result<Vec<f64>> {
    c.validate()?;
    stroboscopic_series(&c.kitaev_params(), c.period(), psi_init, observable, k_max)
}

/// `⟨ψ|e^{iHkT} Pᵏ O Pᵏ e^{−iHkT}|ψ⟩` for `k = 0..=k_max`.
///
/// The factor `Pᵏ` is the rotating-to-lab frame change evaluated at `t = kT`.
pub fn stroboscopic_series(
    k: &KitaevParams,
    period: f64,
    psi_init: &DVector<C64>,
    observable: &DMatrix<C64>,
    k_max: usize,
) -> Result<Vec<f64>> {
    let spec = diagonalize_chain(k, DEFAULT_L_MAX)?;
    let dim = spec.len();
    if psi_init.len() != dim || observable.nrows() != dim || observable.ncols() != dim {
        return Err(Error::Precondition(format!(
            "state and observable must have dimension {dim}"
        )));
    }
    if (psi_init.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(
            "initial state is not normalized".into(),
        ));
    }
    if (observable - observable.adjoint()).norm() > 1e-12 * observable.norm().max(1.0) {
        return Err(Error::Precondition("observable is not Hermitian".into()));
    }
    let v = spec.eigenvectors.map(C64::from);
    let coeffs = v.adjoint() * psi_init;
    let parity = parity_diagonal(k.len());
    let mut out = Vec::with_capacity(k_max + 1);
    for step in 0..=k_max {
        let t = step as f64 * period;
        let phased = DVector::from_iterator(
            dim,
            coeffs
                .iter()
                .zip(&spec.eigenvalues)
                .map(|(c, &e)| c * C64::from_polar(1.0, -e * t)),
        );
        let mut psi = &v * phased;
        if step % 2 == 1 {
            for (amp, &p) in psi.iter_mut().zip(&parity) {
                if p < 0 {
                    *amp = -*amp;
                }
            }
        }
        out.push(psi.dotc(&(observable * &psi)).re);
    }
    Ok(out)
}

/// Writes a matrix as row-major `(re, im)` pairs of little-endian `f64`,
/// preceded by the row and column counts as little-endian `u64`.
pub fn write_matrix_dump<W: Write>(mut w: W, m: &DMatrix<C64>) -> std::io::Result<()> {
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}
