//! Parameters of a resonantly modulated qubit chain and of its rotating-frame
//! (Kitaev) image.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lab-frame parameters of an open qubit chain with `xx` coupling modulated
/// as `Jxx = Jxx⁽⁰⁾ + 2F cos ω_F t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    /// Per-site transition frequencies ω₀ (length L).
    pub omega0: Vec<f64>,
    /// Static `xx` coupling per bond (length L−1).
    pub jxx0: Vec<f64>,
    /// `yy` coupling per bond (length L−1).
    pub jyy: Vec<f64>,
    /// Modulation amplitude F per bond (length L−1).
    pub f_amp: Vec<f64>,
    /// Modulation frequency ω_F ≈ 2ω₀.
    pub omega_f: f64,
}

impl ChainParams {
    pub fn uniform(l: usize, omega0: f64, jxx0: f64, jyy: f64, f_amp: f64, omega_f: f64) -> Self {
        let bonds = l.saturating_sub(1);
        Self {
            omega0: vec![omega0; l],
            jxx0: vec![jxx0; bonds],
            jyy: vec![jyy; bonds],
            f_amp: vec![f_amp; bonds],
            omega_f,
        }
    }

    pub fn len(&self) -> usize {
        self.omega0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega0.is_empty()
    }

    /// Modulation period `T = 2π/ω_F`.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega_f
    }

    /// Checks lengths and finiteness; returns RWA-validity warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let l = self.len();
        if l < 2 {
            return Err(Error::Precondition(format!("chain needs L >= 2, got {l}")));
        }
        for (name, v) in [
            ("jxx0", &self.jxx0),
            ("jyy", &self.jyy),
            ("f_amp", &self.f_amp),
        ] {
            if v.len() != l - 1 {
                return Err(Error::Precondition(format!(
                    "{name} has length {}, expected {}",
                    v.len(),
                    l - 1
                )));
            }
        }
        let all = self
            .omega0
            .iter()
            .chain(&self.jxx0)
            .chain(&self.jyy)
            .chain(&self.f_amp)
            .chain(std::iter::once(&self.omega_f));
        if all.clone().any(|x| !x.is_finite()) {
            return Err(Error::Precondition(
                "chain parameters must be finite".into(),
            ));
        }
        let w_min = self
            .omega0
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b.abs()));
        let c_max = self
            .jxx0
            .iter()
            .chain(&self.jyy)
            .chain(&self.f_amp)
            .fold(0.0_f64, |a, &b| a.max(b.abs()));
        let mut warnings = Vec::new();
        if c_max > 0.1 * w_min {
            warnings.push(format!(
                "coupling {c_max:.3e} is not small compared to omega0 {w_min:.3e}; RWA may be poor"
            ));
        }
        Ok(warnings)
    }

    /// Rotating-frame coefficients: `μₙ = ω_F/2 − ω₀ₙ`, `Jₙ = Jxx⁽⁰⁾ₙ + Jyyₙ`, `Fₙ`.
    pub fn kitaev_params(&self) -> KitaevParams {
        KitaevParams {
            mu: self.omega0.iter().map(|w| 0.5 * self.omega_f - w).collect(),
            hopping: self
                .jxx0
                .iter()
                .zip(&self.jyy)
                .map(|(a, b)| a + b)
                .collect(),
            pairing: self.f_amp.clone(),
        }
    }
}

/// Rotating-frame chain coefficients, shared by the spin and fermion pictures:
///
/// ```text
/// H = −½ Σ μₙ σₙᶻ − ¼ Σ Jₙ (σₙ⁺σₙ₊₁⁻ + h.c.) − ¼ Σ Fₙ (σₙ⁺σₙ₊₁⁺ + h.c.)
///   = −Σ μₙ (aₙ†aₙ − ½) − Σ Jₙ (aₙ†aₙ₊₁ + h.c.) − Σ Fₙ (aₙ†aₙ₊₁† + aₙ₊₁aₙ)
/// ```
///
/// with unnormalized `σ± = σˣ ± iσʸ`, so the fermion coefficients equal the
/// spin ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KitaevParams {
    /// Chemical potential per site (length L).
    pub mu: Vec<f64>,
    /// Hopping per bond (length L−1).
    pub hopping: Vec<f64>,
    /// Pairing per bond (length L−1).
    pub pairing: Vec<f64>,
}

impl KitaevParams {
    pub fn uniform(l: usize, mu: f64, hopping: f64, pairing: f64) -> Self {
        let bonds = l.saturating_sub(1);
        Self {
            mu: vec![mu; l],
            hopping: vec![hopping; bonds],
            pairing: vec![pairing; bonds],
        }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.len();
        if l < 2 {
            return Err(Error::Precondition(format!("chain needs L >= 2, got {l}")));
        }
        if self.hopping.len() != l - 1 || self.pairing.len() != l - 1 {
            return Err(Error::Precondition(format!(
                "bond arrays must have length {}, got hopping {} / pairing {}",
                l - 1,
                self.hopping.len(),
                self.pairing.len()
            )));
        }
        if self
            .mu
            .iter()
            .chain(&self.hopping)
            .chain(&self.pairing)
            .any(|x| !x.is_finite())
        {
            return Err(Error::Precondition(
                "chain coefficients must be finite".into(),
            ));
        }
        Ok(())
    }

    /// `Some((μ, J, F))` when every site and bond carries the same value.
    pub fn as_uniform(&self) -> Option<(f64, f64, f64)> {
        let same = |v: &[f64]| v.windows(2).all(|w| w[0] == w[1]);
        if same(&self.mu) && same(&self.hopping) && same(&self.pairing) {
            Some((
                self.mu[0],
                self.hopping.first().copied().unwrap_or(0.0),
                self.pairing.first().copied().unwrap_or(0.0),
            ))
        } else {
            None
        }
    }
}
