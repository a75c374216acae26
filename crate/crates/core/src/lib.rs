//! Thermal states and real-time quantum dynamics of spin-1/2 lattices with
//! variational Monte Carlo on thermofield purifications.
//!
//! # Physical picture
//!
//! A mixed thermal state of `N` spins is represented as a *pure* state in a
//! doubled Hilbert space: every lattice site carries a physical spin σ and an
//! auxiliary partner s̃.  Thermal expectation values become pure-state ones,
//!
//! ```text
//! ⟨Ô⟩_β = ⟨Ω(β)| Ô ⊗ 1̃ |Ω(β)⟩ / ⟨Ω(β)|Ω(β)⟩ ,
//! ```
//!
//! where the (unnormalized) thermal vacuum
//!
//! ```text
//! |Ω(β)⟩ = exp(−β/2 Ĥ₀ ⊗ 1̃) |𝕀⟩ ,       |𝕀⟩ = ⊗ᵢ Σ_σ |σᵢ, σ̃ᵢ⟩
//! ```
//!
//! starts from the maximally entangled identity state at infinite temperature
//! and is cooled in imaginary time.  Real-time dynamics of the thermal
//! ensemble is generated by the doubled-space Hamiltonian
//! `Ĥᵗʰ = Ĥ ⊗ 1̃ − 1̂ ⊗ H̃`, whose auxiliary part is the tilde conjugate
//! (complex conjugate in the computational basis) of the physical one.
//!
//! The vacuum is parameterized by neural-network wave functions over the
//! doubled configurations (σ, s̃) and evolved variationally:
//!
//! * imaginary time via projected imaginary-time evolution (`p-ITE`, an
//!   infidelity minimization robust to the vanishing gradients at β = 0) and
//!   stochastic reconfiguration (`SR`),
//! * real time via the time-dependent variational principle (`t-VMC`).
//!
//! Built-in exact-diagonalization and METTS oracles provide reference values
//! for validation at small sizes.
//!
//! # Module map
//!
//! | module | contents |
//! |---|---|
//! | [`lattice`] | chain / square-lattice geometry, transverse-field Ising Hamiltonians |
//! | [`pauli`] | sparse Pauli-string operators and their sparse rows |
//! | [`thermofield`] | doubled configurations, identity state, tilde conjugation, doubled operators |
//! | [`ansatz`] | RBM and autoregressive purification ansätze over (σ, s̃) |
//! | [`sampling`] | Metropolis / direct / prior samplers and exact enumeration |
//! | [`evolution`] | local energy, QGT and forces, SR / p-ITE / t-VMC steps |
//! | [`observables`] | Monte Carlo estimators with binning error analysis |
//! | [`oracles`] | dense exact diagonalization and METTS reference implementations |
//! | [`io`] | run configs, JSONL time series, checkpoints, comparison |
//! | [`run`] | preparation / evolution drivers tying the pieces together |

#![forbid(unsafe_code)]

pub mod ansatz;
pub mod error;
pub mod evolution;
pub mod io;
pub mod lattice;
pub mod observables;
pub mod oracles;
pub mod pauli;
pub mod run;
pub mod sampling;
pub mod thermofield;

pub use error::{Error, Result};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;
