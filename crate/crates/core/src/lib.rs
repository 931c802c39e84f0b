//! Multiple-period (broken discrete time-translation symmetry) states of
//! periodically modulated qubits.
//!
//! The crate has three physics layers and a driver:
//!
//! * [`qubit_floquet`]: a single qubit kicked by periodic pulses of its level
//!   spacing and of a resonant drive. Rotating-frame monodromy matrix,
//!   quasienergies in closed form and by diagonalization, the Ramsey and
//!   resonant-pulse period-`N` protocols, and a lab-frame integrator used as
//!   an oracle for the rotating-wave approximation.
//! * [`spin_chain_ed`]: exact diagonalization of the rotating-frame
//!   Hamiltonian of a qubit chain whose `xx` coupling is modulated near twice
//!   the qubit frequency, with its parity symmetry and the analytic
//!   two-qubit solution.
//! * [`kitaev_bdg`]: the Jordan–Wigner image of the same chain, a Kitaev
//!   chain, solved as a free-fermion (Bogoliubov–de Gennes) problem.
//! * [`harness`]: scenario configs, sweeps, CSV/JSON output and the
//!   cross-oracle verification suite behind the `floquet` binary.
//!
//! Units: `ħ = 1`, angles in radians.

pub mod chain;
pub mod error;
pub mod harness;
pub mod kitaev_bdg;
pub mod qubit_floquet;
pub mod spin_chain_ed;

pub use error::{Error, Result};

pub use nalgebra::Complex;
pub type C64 = Complex<f64>;
