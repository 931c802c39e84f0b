//! Floquet states of a single qubit driven by periodic short pulses.
//!
//! The lab-frame Hamiltonian is `½[ω₀ + ν(t)]σᶻ + F(t)σˣ cos ω_F t` with
//! `ν(t) = ν₁ Σ δ̄(t − nT)` and `F(t) = F₀ + F₁ Σ δ̄(t − nT)`. In the frame
//! rotating at `ω_F` (and after a rotation `φ` that aligns `z̃` with the
//! static effective field) it becomes
//!
//! ```text
//! H = ½ Ω σ̃ᶻ + ½ g̃·σ̃ Σₙ δ(t − nT),     Ω = (Δ² + F₀²)^{1/2},  Δ = ω₀ − ω_F
//! ```
//!
//! Vectors are written in the ordered basis `(|1̃⟩, |0̃⟩)`, i.e. the first
//! component is the `σ̃ᶻ = +1` amplitude.

mod lab_frame;
mod protocols;

pub use lab_frame::{
    lab_frame_integrate, simulate_ramsey, simulate_resonant, LabFrameRun, RAMSEY_T_START,
};
pub use protocols::{
    autocorrelation_period, detect_period_multiplicity, fundamental_period, lab_frame_quasienergy,
    ramsey_population, ramsey_series, resonant_population, resonant_series, PeriodReport,
};

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::{Error, Result, C64};

/// Slack allowed on the arccos argument before it counts as a numerical error.
pub const ARCCOS_SLACK: f64 = 1e-12;
/// Two monodromy eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A qubit state in the `(|1⟩, |0⟩)` ordered basis.
pub type Spinor = Vector2<C64>;
/// A 2×2 complex operator.
pub type Op2 = Matrix2<C64>;

/// The periodic drive protocol of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PulseTrain {
    /// Qubit transition frequency ω₀.
    pub omega0: f64,
    /// Drive carrier frequency ω_F.
    pub omega_f: f64,
    /// Number of carrier periods per pulse period, `T = 2π n / ω_F`.
    pub periods_per_t: u32,
    /// Level-spacing pulse area ν₁.
    pub nu1: f64,
    /// Drive-amplitude pulse area F₁.
    pub f1: f64,
    /// Static resonant drive amplitude F₀.
    pub f0: f64,
    /// Width of the Gaussian that realizes δ̄; only used by the lab-frame integrator.
    pub sigma: f64,
}

impl PulseTrain {
    pub fn period(&self) -> f64 {
        2.0 * PI * f64::from(self.periods_per_t) / self.omega_f
    }

    /// Checks the hard invariants and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.periods_per_t < 1 {
            return Err(Error::Precondition("periods_per_t must be >= 1".into()));
        }
        if !(self.omega_f > 0.0 && self.omega_f.is_finite()) {
            return Err(Error::Precondition(
                "omega_f must be positive and finite".into(),
            ));
        }
        for (name, v) in [
            ("omega0", self.omega0),
            ("nu1", self.nu1),
            ("f1", self.f1),
            ("f0", self.f0),
            ("sigma", self.sigma),
        ] {
            if !v.is_finite() {
                return Err(Error::Precondition(format!("{name} is not finite")));
            }
        }
        let mut warnings = Vec::new();
        if (self.omega_f - self.omega0).abs() > 0.1 * self.omega_f {
            warnings.push(format!(
                "|omega_f - omega0| = {:.3e} is not small compared to omega_f = {:.3e}; RWA may be poor",
                (self.omega_f - self.omega0).abs(),
                self.omega_f
            ));
        }
        Ok(warnings)
    }

    /// Additional constraints for the lab-frame integrator: `1/ω_F ≪ σ ≪ T`.
    pub fn validate_for_integration(&self) -> Result<Vec<String>> {
        let warnings = self.validate()?;
        if !(self.sigma * self.omega_f > 10.0) {
            return Err(Error::Precondition(format!(
                "sigma * omega_f = {:.3} must exceed 10",
                self.sigma * self.omega_f
            )));
        }
        if !(self.sigma < self.period() / 10.0) {
            return Err(Error::Precondition(format!(
                "sigma = {:.3e} must be below T/10 = {:.3e}",
                self.sigma,
                self.period() / 10.0
            )));
        }
        Ok(warnings)
    }
}

/// Rotating-frame parameters derived from a [`PulseTrain`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RwaQubit {
    pub delta: f64,
    pub f0: f64,
    /// Rabi frequency Ω.
    pub omega: f64,
    /// Rotation angle φ of the static field, `tan φ = F₀/Δ`.
    pub phi: f64,
    /// Rotated kick vector `(g̃ˣ, g̃ᶻ)`.
    pub g_vec: [f64; 2],
    /// Kick magnitude `|g|`.
    pub g: f64,
    /// Kick-basis angle θ, `tan θ = g̃ˣ/(g + g̃ᶻ)`.
    pub theta: f64,
}

/// Rotating-frame parameters of a pulse train.
///
/// φ is the full polar angle of the static field `(Δ, F₀)` so that `Ω ≥ 0`
/// always multiplies `+σ̃ᶻ/2`; it is 0 when both components vanish.
pub fn derive_rwa(p: &PulseTrain) -> RwaQubit {
    let delta = p.omega0 - p.omega_f;
    let omega = delta.hypot(p.f0);
    let phi = if delta == 0.0 && p.f0 == 0.0 {
        0.0
    } else {
        p.f0.atan2(delta)
    };
    // g̃ᶻ + i g̃ˣ = e^{-iφ} (ν₁ + i F₁)
    let rotated = C64::new(p.nu1, p.f1) * C64::from_polar(1.0, -phi);
    let g_vec = [rotated.im, rotated.re];
    let g = p.nu1.hypot(p.f1);
    RwaQubit {
        delta,
        f0: p.f0,
        omega,
        phi,
        g_vec,
        g,
        theta: kick_angle(g_vec[0], g_vec[1]),
    }
}

/// θ as half the polar angle of `(g̃ˣ, g̃ᶻ)` measured from `z̃`.
///
/// Anti-aligned kicks (`g̃ᶻ = −g`) map to `+π/2`; a vanishing kick maps to 0.
fn kick_angle(gx: f64, gz: f64) -> f64 {
    if gx == 0.0 && gz == 0.0 {
        return 0.0;
    }
    let half = 0.5 * gx.atan2(gz);
    if half <= -0.5 * PI {
        0.5 * PI
    } else {
        half
    }
}

impl RwaQubit {
    /// Builds the rotating-frame description directly from `(Ω, g, θ)`,
    /// with the static field along `z` (Δ = Ω, F₀ = 0, φ = 0).
    pub fn from_kick(omega: f64, g: f64, theta: f64) -> Self {
        let g_vec = [g * (2.0 * theta).sin(), g * (2.0 * theta).cos()];
        Self {
            delta: omega,
            f0: 0.0,
            omega,
            phi: 0.0,
            g_vec,
            g: g.abs(),
            theta: if g < 0.0 {
                kick_angle(g_vec[0], g_vec[1])
            } else {
                theta
            },
        }
    }

    pub fn kick_basis(&self) -> KickBasis {
        KickBasis::new(self.theta)
    }

    /// The instantaneous kick `exp(−i g̃·σ̃/2)` expanded over the kick basis.
    pub fn kick_operator(&self) -> Op2 {
        let kb = self.kick_basis();
        let plus = Vector2::new(C64::from(kb.zeta_plus), C64::from(kb.eta_plus));
        let minus = Vector2::new(C64::from(kb.zeta_minus), C64::from(kb.eta_minus));
        let half = 0.5 * self.g;
        plus * plus.adjoint() * C64::from_polar(1.0, -half)
            + minus * minus.adjoint() * C64::from_polar(1.0, half)
    }

    /// Free evolution `exp(−iΩτσ̃ᶻ/2)`.
    pub fn free_evolution(&self, tau: f64) -> Op2 {
        let half = 0.5 * self.omega * tau;
        Op2::new(
            C64::from_polar(1.0, -half),
            C64::from(0.0),
            C64::from(0.0),
            C64::from_polar(1.0, half),
        )
    }

    /// Basis change from `(|1̃⟩, |0̃⟩)` to the unrotated `(|1⟩, |0⟩)`.
    pub fn tilde_to_plain(&self) -> Op2 {
        let (s, c) = (0.5 * self.phi).sin_cos();
        Op2::new(C64::from(c), C64::from(-s), C64::from(s), C64::from(c))
    }
}

/// Real coefficients of the eigenvectors `ψ± = ζ±|1̃⟩ + η±|0̃⟩` of `g̃·σ̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickBasis {
    pub zeta_plus: f64,
    pub zeta_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
}

impl KickBasis {
    /// `ζ₊ + iζ₋ = e^{−iθ}`, `iη₊ + η₋ = e^{iθ}`.
    pub fn new(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            zeta_plus: c,
            zeta_minus: -s,
            eta_plus: s,
            eta_minus: c,
        }
    }
}

/// Closed-form rotating-frame quasienergies `(ε₁, ε₂)` with `ε₁ = −ε₂ ∈ [0, π/T]`.
pub fn closed_form_quasienergy(q: &RwaQubit, period: f64) -> Result<(f64, f64)> {
    if !(period > 0.0) {
        return Err(Error::Domain(format!(
            "period must be positive, got {period}"
        )));
    }
    let half_g = 0.5 * q.g;
    let half_rabi = 0.5 * q.omega * period;
    let x = half_g.cos() * half_rabi.cos() - (2.0 * q.theta).cos() * half_g.sin() * half_rabi.sin();
    if x.abs() > 1.0 + ARCCOS_SLACK {
        return Err(Error::Numerical(format!(
            "arccos argument {x} outside [-1, 1]"
        )));
    }
    let eps = x.clamp(-1.0, 1.0).acos() / period;
    Ok((eps, -eps))
}

/// One-period evolution operator from `t₀` to `T + t₀`, `0 < t₀ < T`.
///
/// Free evolution over `T − t₀`, the kick at `T`, then free evolution over `t₀`.
pub fn monodromy_matrix(q: &RwaQubit, period: f64, t0: f64) -> Result<Op2> {
    if !(t0 > 0.0 && t0 < period) {
        return Err(Error::Domain(format!(
            "reference instant t0 = {t0} must lie in (0, T = {period})"
        )));
    }
    Ok(q.free_evolution(t0) * q.kick_operator() * q.free_evolution(period - t0))
}

/// Rotating-frame Floquet eigenstates at a reference instant.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FloquetPair {
    /// Quasienergies folded into `[−π/T, π/T)`, `eps[0] ≥ eps[1]`.
    pub eps: [f64; 2],
    /// Coefficients `(α, β)` of each state in the `(|1̃⟩, |0̃⟩)` basis.
    #[serde(skip)]
    pub states: [Spinor; 2],
    pub t0: f64,
    /// Set when the two monodromy eigenvalues coincide; states are then `|1̃⟩, |0̃⟩`.
    pub degenerate: bool,
}

/// Folds `x` into `[−π, π)`.
pub(crate) fn wrap_phase(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Diagonalizes the monodromy matrix at `t₀`.
pub fn floquet_eigensystem(q: &RwaQubit, period: f64, t0: f64) -> Result<FloquetPair> {
    let u = monodromy_matrix(q, period, t0)?;
    let (lambdas, vectors) = eig2(&u);
    let degenerate = (lambdas[0] - lambdas[1]).norm() < DEGENERACY_TOL;
    let quasi = |l: C64| {
        let x = wrap_phase(-l.arg());
        x / period
    };
    let mut pairs = [
        (quasi(lambdas[0]), vectors[0]),
        (quasi(lambdas[1]), vectors[1]),
    ];
    if degenerate {
        pairs[0].1 = Spinor::new(C64::from(1.0), C64::from(0.0));
        pairs[1].1 = Spinor::new(C64::from(0.0), C64::from(1.0));
    }
    if pairs[1].0 > pairs[0].0 {
        pairs.swap(0, 1);
    }
    Ok(FloquetPair {
        eps: [pairs[0].0, pairs[1].0],
        states: [pairs[0].1, pairs[1].1],
        t0,
        degenerate,
    })
}

/// Eigen-decomposition of a 2×2 complex matrix.
///
/// The discriminant is formed as `((a−d)/2)² + bc`, which has no cancellation
/// for unitary input. Eigenvectors are normalized with their largest
/// component real and positive.
pub(crate) fn eig2(m: &Op2) -> ([C64; 2], [Spinor; 2]) {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let s = (half_diff * half_diff + b * c).sqrt();
    let lambdas = [mean + s, mean - s];
    let vec_for = |l: C64| {
        let v1 = Spinor::new(b, l - a);
        let v2 = Spinor::new(l - d, c);
        let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
        let n = v.norm();
        if n == 0.0 {
            // m is a multiple of the identity
            return Spinor::new(C64::from(1.0), C64::from(0.0));
        }
        normalize_phase(v / C64::from(n))
    };
    let mut vectors = [vec_for(lambdas[0]), vec_for(lambdas[1])];
    if vectors[1].dotc(&vectors[0]).norm() > 1.0 - 1e-8 {
        // both candidates collapsed onto one line (degenerate input)
        vectors[1] = Spinor::new(-vectors[0][1].conj(), vectors[0][0].conj());
    }
    (lambdas, vectors)
}

pub(crate) fn normalize_phase(v: Spinor) -> Spinor {
    let pivot = if v[0].norm() >= v[1].norm() {
        v[0]
    } else {
        v[1]
    };
    if pivot.norm() == 0.0 {
        return v;
    }
    v * (pivot.conj() / C64::from(pivot.norm()))
}

/// Distance between the closed-form pair `±ε₁` and the monodromy eigenphase
/// pair at `t₀`, measured modulo `2π/T`.
pub fn closed_form_residual(q: &RwaQubit, period: f64, t0: f64) -> Result<f64> {
    let (e1, e2) = closed_form_quasienergy(q, period)?;
    let fp = floquet_eigensystem(q, period, t0)?;
    let d = |a: f64, b: f64| wrap_phase((a - b) * period).abs() / period;
    let direct = d(e1, fp.eps[0]).max(d(e2, fp.eps[1]));
    let swapped = d(e1, fp.eps[1]).max(d(e2, fp.eps[0]));
    Ok(direct.min(swapped))
}

/// Propagates a rotating-frame state (tilde basis) from `t_from` to `t_to`,
/// applying a kick at every multiple of the period in `(t_from, t_to]`.
pub fn rwa_propagate(q: &RwaQubit, period: f64, t_from: f64, t_to: f64, psi: Spinor) -> Spinor {
    let kick = q.kick_operator();
    let mut psi = psi;
    let mut t = t_from;
    let mut n = (t_from / period).floor() + 1.0;
    while n * period <= t_to {
        let t_kick = n * period;
        psi = kick * (q.free_evolution(t_kick - t) * psi);
        t = t_kick;
        n += 1.0;
    }
    q.free_evolution(t_to - t) * psi
}

/// Stroboscopic `⟨σ̃ˣ⟩` at `t₀ + kT`, `k = 0..k_max`, for an initial state at `t₀`.
pub fn stroboscopic_sigma_x(
    q: &RwaQubit,
    period: f64,
    t0: f64,
    psi0: Spinor,
    k_max: usize,
) -> Result<Vec<f64>> {
    let u = monodromy_matrix(q, period, t0)?;
    let sx = Op2::new(
        C64::from(0.0),
        C64::from(1.0),
        C64::from(1.0),
        C64::from(0.0),
    );
    let mut psi = psi0;
    let mut out = Vec::with_capacity(k_max + 1);
    for _ in 0..=k_max {
        out.push(psi.dotc(&(sx * psi)).re);
        psi = u * psi;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn train(delta: f64, f0: f64, nu1: f64, f1: f64) -> PulseTrain {
        PulseTrain {
            omega0: 100.0 + delta,
            omega_f: 100.0,
            periods_per_t: 50,
            nu1,
            f1,
            f0,
            sigma: 0.2,
        }
    }

    #[test]
    fn resonant_pulse_only() {
        let q = derive_rwa(&train(0.0, 0.0, 0.0, 2.0 * PI));
        assert_eq!(q.omega, 0.0);
        assert_eq!(q.phi, 0.0);
        assert!(close(q.g, 2.0 * PI, 1e-15));
        assert!(close(q.theta, PI / 4.0, 1e-15));
    }

    #[test]
    fn no_kick() {
        let q = derive_rwa(&train(0.7, 0.2, 0.0, 0.0));
        assert_eq!(q.g, 0.0);
        assert_eq!(q.theta, 0.0);
        let u = monodromy_matrix(&q, 1.0, 0.3).unwrap();
        assert!((u - q.free_evolution(1.0)).norm() < 1e-15);
    }

    #[test]
    fn pythagorean_rabi() {
        let q = derive_rwa(&train(3.0, 4.0, 0.3, 0.4));
        assert!(close(q.omega, 5.0, 1e-13));
        assert!(close(q.phi.tan(), 4.0 / 3.0, 1e-12));
    }

    #[test]
    fn phi_conventions_at_zero_detuning() {
        let q = derive_rwa(&train(0.0, -2.0, 0.0, 0.0));
        assert!(close(q.phi, -PI / 2.0, 1e-15));
        let q = derive_rwa(&train(0.0, 2.0, 0.0, 0.0));
        assert!(close(q.phi, PI / 2.0, 1e-15));
    }

    #[test]
    fn theta_for_antialigned_kick() {
        // ν₁ < 0, F₁ = 0, no rotation: g̃ᶻ = −g
        let q = derive_rwa(&train(0.5, 0.0, -1.3, 0.0));
        assert!(close(q.theta, PI / 2.0, 1e-15));
        let kb = q.kick_basis();
        assert!(close(kb.zeta_plus, 0.0, 1e-15));
    }

    #[test]
    fn rotation_consistency() {
        let q = derive_rwa(&train(-1.1, 0.6, 0.9, -0.4));
        let lhs = C64::new(q.g_vec[1], q.g_vec[0]);
        let rhs = C64::from_polar(1.0, -q.phi) * C64::new(0.9, -0.4);
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(close(q.g_vec[0].hypot(q.g_vec[1]), q.g, 1e-14));
        assert!(close(
            q.omega.powi(2),
            q.delta.powi(2) + q.f0.powi(2),
            1e-14
        ));
    }

    #[test]
    fn kick_basis_diagonalizes_kick_vector() {
        for &(gx, gz) in &[
            (0.3, 0.9),
            (-1.2, 0.1),
            (0.5, -2.0),
            (0.0, -1.0),
            (2.0, 0.0),
        ] {
            let theta = kick_angle(gx, gz);
            let g = f64::hypot(gx, gz);
            let kb = KickBasis::new(theta);
            let m = nalgebra::Matrix2::new(gz, gx, gx, -gz);
            let p = nalgebra::Vector2::new(kb.zeta_plus, kb.eta_plus);
            let n = nalgebra::Vector2::new(kb.zeta_minus, kb.eta_minus);
            assert!((m * p - p * g).norm() < 1e-14, "{gx} {gz}");
            assert!((m * n + n * g).norm() < 1e-14);
            assert!(p.dot(&n).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_special_cases() {
        let t = 1.7;
        let f1: f64 = 2.3;
        let q = RwaQubit::from_kick(0.0, f1, PI / 4.0);
        let (e1, e2) = closed_form_quasienergy(&q, t).unwrap();
        assert!(close(e1, (f1 / 2.0).cos().acos() / t, 1e-15));
        assert_eq!(e1, -e2);

        let q = RwaQubit::from_kick(1.9, 0.0, 0.37);
        let (e1, _) = closed_form_quasienergy(&q, t).unwrap();
        assert!(close(e1, (1.9 * t / 2.0).cos().acos() / t, 1e-15));

        assert!(closed_form_quasienergy(&q, 0.0).is_err());
    }

    #[test]
    fn monodromy_free_and_pure_kick() {
        let q = RwaQubit::from_kick(0.8, 0.0, 0.0);
        let u = monodromy_matrix(&q, 2.0, 0.5).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, -0.8)).norm() < 1e-15);
        assert!((u[(1, 1)] - C64::from_polar(1.0, 0.8)).norm() < 1e-15);
        assert!(u[(0, 1)].norm() < 1e-15);

        let q = RwaQubit::from_kick(0.0, PI, PI / 4.0);
        let u = monodromy_matrix(&q, 1.0, 0.5).unwrap();
        // exp(−iπσˣ/2) = −iσˣ
        assert!(u[(0, 0)].norm() < 1e-15 && u[(1, 1)].norm() < 1e-15);
        assert!((u[(0, 1)] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((u[(1, 0)] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn monodromy_rejects_t0_outside_period() {
        let q = RwaQubit::from_kick(1.0, 1.0, 0.2);
        for t0 in [0.0, 1.0, -0.1, 1.5] {
            assert!(matches!(
                monodromy_matrix(&q, 1.0, t0),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn generic_monodromy_matches_closed_form() {
        let t = 1.0;
        let q = RwaQubit::from_kick(1.3 / t, 2.1, 0.4);
        let fp = floquet_eigensystem(&q, t, 0.35).unwrap();
        let (e1, e2) = closed_form_quasienergy(&q, t).unwrap();
        assert!(close(fp.eps[0], e1, 1e-10));
        assert!(close(fp.eps[1], e2, 1e-10));
    }

    #[test]
    fn free_states_are_basis_vectors() {
        let t = 1.0;
        let q = RwaQubit::from_kick(1.2, 0.0, 0.0);
        let fp = floquet_eigensystem(&q, t, 0.5).unwrap();
        // |1̃⟩ has ε = +Ω/2
        assert!(close(fp.eps[0], 0.6, 1e-14));
        assert!((fp.states[0][0].norm() - 1.0).abs() < 1e-14);
        assert!((fp.states[1][1].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn resonant_states_are_symmetric_superpositions() {
        let q = RwaQubit::from_kick(0.0, 1.0, PI / 4.0);
        let fp = floquet_eigensystem(&q, 1.0, 0.5).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for state in fp.states {
            assert!((state[0].norm() - s).abs() < 1e-14);
            assert!((state[1].norm() - s).abs() < 1e-14);
        }
        // ψ₊ = (|1̃⟩ + |0̃⟩)/√2 has e^{−ig/2}: ε = g/(2T)
        assert!(close(fp.eps[0], 0.5, 1e-14));
        assert!((fp.states[0][0] - fp.states[0][1]).norm() < 1e-14);
    }

    #[test]
    fn degenerate_monodromy_is_flagged() {
        // Ω = 0, g = 2π: kick is −1
        let q = RwaQubit::from_kick(0.0, 2.0 * PI, 0.3);
        let fp = floquet_eigensystem(&q, 1.0, 0.5).unwrap();
        assert!(fp.degenerate);
        assert!(wrap_phase(fp.eps[0] - PI).abs() < 1e-12);
        assert!(fp.states[0].dotc(&fp.states[1]).norm() < 1e-15);
    }

    #[test]
    fn wrap_phase_is_half_open() {
        assert_eq!(wrap_phase(PI), -PI);
        assert_eq!(wrap_phase(-PI), -PI);
        assert!(close(wrap_phase(3.0 * PI + 0.1), -PI + 0.1, 1e-14));
    }

    #[test]
    fn rwa_propagate_matches_monodromy_power() {
        let q = RwaQubit::from_kick(0.7, 1.9, -0.3);
        let psi = Spinor::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let u = monodromy_matrix(&q, 1.0, 0.25).unwrap();
        let a = rwa_propagate(&q, 1.0, 0.25, 3.25, psi);
        let b = u * u * u * psi;
        assert!((a - b).norm() < 1e-13);
    }
}
