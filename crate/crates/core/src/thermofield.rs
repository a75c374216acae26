//! The doubled (thermofield) Hilbert space.
//!
//! Every lattice site carries a physical spin σᵢ and an auxiliary partner
//! s̃ᵢ.  Thermal states are purifications in this doubled space, rooted in
//! the maximally entangled identity state
//!
//! ```text
//! |𝕀⟩ = ⊗ᵢ Σ_{σ} |σᵢ, σ̃ᵢ⟩ ,
//! ```
//!
//! whose amplitudes are 1 on configurations with σᵢ = s̃ᵢ at every site and 0
//! elsewhere (the state is kept unnormalized; its squared norm is `2^N`).
//!
//! Real-time evolution of the ensemble is generated by
//! `Ĥᵗʰ = Ĥ ⊗ 1̃ − 1̂ ⊗ H̃`, where the *tilde conjugate* `H̃` is the complex
//! conjugate of `Ĥ` in the computational basis: `X → X`, `Y → −Y`, `Z → Z`
//! with conjugated coefficients.
//!
//! The auxiliary register may be expressed either in its Z eigenbasis
//! ([`AuxBasis::AuxZ`]) or, to lift the exact zeros of the identity state, in
//! the X eigenbasis ([`AuxBasis::AuxX`]) reached by a Hadamard on every
//! auxiliary spin.  In the rotated frame the identity amplitudes become
//! `(1/√2)^N` with a sign flip on every (σᵢ = ↓, s̃ᵢ = −) pair, so no
//! configuration has zero weight.  Operators follow along via
//! [`ThermofieldOperator::rotate_auxiliary`], which conjugates the auxiliary
//! part by the Hadamard: `X ↔ Z`, `Y → −Y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{basis_index, spins_from_index, validate_spins, PauliAxis, PauliOperator, PauliTerm, Space};
use crate::C64;

/// Basis in which the auxiliary register of a configuration (or the
/// auxiliary part of an operator) is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxBasis {
    /// Auxiliary spins are Z eigenvalues, |↑⟩ ↦ +1.
    AuxZ,
    /// Auxiliary spins are X eigenvalues, |+⟩ ↦ +1.
    AuxX,
}

/// A joint assignment (σ, s̃) of the doubled register, with the basis tag for
/// the auxiliary half.  Physical spins are always Z eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoubledConfiguration {
    physical: Vec<i8>,
    auxiliary: Vec<i8>,
    basis: AuxBasis,
}

impl DoubledConfiguration {
    pub fn new(physical: Vec<i8>, auxiliary: Vec<i8>, basis: AuxBasis) -> Result<Self> {
        validate_spins(&physical)?;
        validate_spins(&auxiliary)?;
        if physical.len() != auxiliary.len() {
            return Err(Error::InvalidConfig(format!(
                "physical register has {} sites, auxiliary {}",
                physical.len(),
                auxiliary.len()
            )));
        }
        Ok(Self { physical, auxiliary, basis })
    }

    /// Number of lattice sites (the doubled register holds `2 n_sites`
    /// spins).
    pub fn n_sites(&self) -> usize {
        self.physical.len()
    }

    pub fn basis(&self) -> AuxBasis {
        self.basis
    }

    pub fn physical(&self) -> &[i8] {
        &self.physical
    }

    pub fn auxiliary(&self) -> &[i8] {
        &self.auxiliary
    }

    /// Local four-state index of site `i`: `2·[σᵢ=↓] + [s̃ᵢ=−]`, i.e. the
    /// ordering (↑+), (↑−), (↓+), (↓−) with ↑/+ ↦ +1.
    pub fn local_index(&self, site: usize) -> usize {
        2 * usize::from(self.physical[site] < 0) + usize::from(self.auxiliary[site] < 0)
    }

    pub fn flip_physical(&mut self, site: usize) {
        self.physical[site] = -self.physical[site];
    }

    pub fn flip_auxiliary(&mut self, site: usize) {
        self.auxiliary[site] = -self.auxiliary[site];
    }

    /// Index into the doubled basis, physical register most significant:
    /// `index = basis_index(σ) · 2^N + basis_index(s̃)`.  Matches the
    /// Kronecker order `physical ⊗ auxiliary` of dense oracles.
    pub fn doubled_index(&self) -> usize {
        (basis_index(&self.physical) << self.n_sites()) | basis_index(&self.auxiliary)
    }

    /// Inverse of [`DoubledConfiguration::doubled_index`].
    pub fn from_doubled_index(index: usize, n_sites: usize, basis: AuxBasis) -> Self {
        let aux_mask = (1usize << n_sites) - 1;
        Self {
            physical: spins_from_index(index >> n_sites, n_sites),
            auxiliary: spins_from_index(index & aux_mask, n_sites),
            basis,
        }
    }
}

/// Amplitude ⟨σ, s̃|𝕀⟩ of the unnormalized identity state in the AuxZ basis:
/// 1 when σᵢ = s̃ᵢ at every site, 0 otherwise.
pub fn identity_amplitude(config: &DoubledConfiguration) -> Result<C64> {
    if config.basis() != AuxBasis::AuxZ {
        return Err(Error::BasisMismatch(
            "identity_amplitude expects the auxiliary register in the Z basis".into(),
        ));
    }
    let matched = config
        .physical
        .iter()
        .zip(&config.auxiliary)
        .all(|(&s, &a)| s == a);
    Ok(C64::new(if matched { 1.0 } else { 0.0 }, 0.0))
}

/// Amplitude of the identity state after the Hadamard rotation of the
/// auxiliary register (AuxX basis): `(1/√2)^N` with a sign flip on every
/// (σᵢ = ↓, s̃ᵢ = −) pair.  Every configuration has nonzero weight.
pub fn rotated_identity_amplitude(config: &DoubledConfiguration) -> Result<C64> {
    if config.basis() != AuxBasis::AuxX {
        return Err(Error::BasisMismatch(
            "rotated_identity_amplitude expects the auxiliary register in the X basis".into(),
        ));
    }
    let n = config.n_sites() as i32;
    let minus_pairs = config
        .physical
        .iter()
        .zip(&config.auxiliary)
        .filter(|&(&s, &a)| s < 0 && a < 0)
        .count();
    let sign = if minus_pairs % 2 == 0 { 1.0 } else { -1.0 };
    Ok(C64::new(sign * 0.5f64.powi(n).sqrt(), 0.0))
}

/// Tilde conjugation `Õ = Ô^*` (complex conjugate in the computational
/// basis): coefficients are conjugated and each Y factor contributes a sign
/// flip, so `X̃ = X`, `Ỹ = −Y`, `Z̃ = Z`.  The acting-register tag is
/// swapped; applying the map twice returns the original operator.
pub fn tilde_conjugate(op: &PauliOperator) -> PauliOperator {
    let flipped_space = match op.space() {
        Space::Physical => Space::Auxiliary,
        Space::Auxiliary => Space::Physical,
    };
    let terms = op
        .terms()
        .iter()
        .map(|t| {
            let y_count = t
                .string
                .factors()
                .iter()
                .filter(|&&(_, axis)| axis == PauliAxis::Y)
                .count();
            let sign = if y_count % 2 == 0 { 1.0 } else { -1.0 };
            (t.coeff.conj() * sign, t.string.factors().to_vec())
        })
        .collect();
    PauliOperator::from_terms(op.n_sites(), flipped_space, terms)
        .expect("tilde conjugation preserves well-formedness")
}

/// How the physical and auxiliary parts of a doubled operator combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combination {
    /// `Ô ⊗ 1̃` — physical part only (observables, imaginary-time cooling).
    PhysicalOnly,
    /// `Ô ⊗ 1̃ − 1̂ ⊗ Õ′` — the thermofield generator of real-time dynamics.
    Difference,
}

/// An operator on the doubled space, stored as separate physical and
/// auxiliary Pauli parts plus the combination rule.  `aux_frame` records the
/// auxiliary basis the auxiliary part is currently expressed in; local
/// estimators check it against the state's configuration basis.
#[derive(Clone, Debug)]
pub struct ThermofieldOperator {
    physical: PauliOperator,
    auxiliary: Option<PauliOperator>,
    combination: Combination,
    aux_frame: AuxBasis,
}

/// Lifts a physical operator to the doubled space as `Ô ⊗ 1̃`.  Valid in
/// either auxiliary basis since the auxiliary register is untouched.
pub fn lift_physical(op: PauliOperator) -> ThermofieldOperator {
    ThermofieldOperator {
        physical: op,
        auxiliary: None,
        combination: Combination::PhysicalOnly,
        aux_frame: AuxBasis::AuxZ,
    }
}

/// Builds the thermofield Hamiltonian `Ĥᵗʰ = Ĥ ⊗ 1̃ − 1̂ ⊗ H̃` from a
/// Hermitian physical Hamiltonian.
pub fn thermofield_hamiltonian(hamiltonian: PauliOperator) -> Result<ThermofieldOperator> {
    let scale: f64 = hamiltonian
        .terms()
        .iter()
        .map(|t| t.coeff.norm())
        .fold(0.0, f64::max);
    if !hamiltonian.is_hermitian(1e-12 * scale.max(1.0)) {
        return Err(Error::InvalidConfig(
            "thermofield Hamiltonian requires a Hermitian physical part".into(),
        ));
    }
    let auxiliary = tilde_conjugate(&hamiltonian);
    Ok(ThermofieldOperator {
        physical: hamiltonian,
        auxiliary: Some(auxiliary),
        combination: Combination::Difference,
        aux_frame: AuxBasis::AuxZ,
    })
}

impl ThermofieldOperator {
    pub fn physical_part(&self) -> &PauliOperator {
        &self.physical
    }

    /// The auxiliary part (absent for `PhysicalOnly` operators).
    pub fn auxiliary_part(&self) -> Option<&PauliOperator> {
        self.auxiliary.as_ref()
    }

    pub fn combination(&self) -> Combination {
        self.combination
    }

    pub fn aux_frame(&self) -> AuxBasis {
        self.aux_frame
    }

    pub fn n_sites(&self) -> usize {
        self.physical.n_sites()
    }

    /// True when local estimators may evaluate this operator on
    /// configurations expressed in `basis`.
    pub fn compatible_with(&self, basis: AuxBasis) -> bool {
        match self.combination {
            Combination::PhysicalOnly => true,
            Combination::Difference => self.aux_frame == basis,
        }
    }

    /// Conjugates the auxiliary part by the Hadamard on every auxiliary
    /// spin (`X ↔ Z`, `Y → −Y`) and toggles the recorded auxiliary frame.
    /// The physical part is untouched.  Applying the rotation twice returns
    /// the original operator.
    pub fn rotate_auxiliary(&self) -> Self {
        let rotate = |op: &PauliOperator| -> PauliOperator {
            let terms = op
                .terms()
                .iter()
                .map(|t: &PauliTerm| {
                    let mut sign = 1.0;
                    let factors = t
                        .string
                        .factors()
                        .iter()
                        .map(|&(site, axis)| {
                            let new_axis = match axis {
                                PauliAxis::X => PauliAxis::Z,
                                PauliAxis::Z => PauliAxis::X,
                                PauliAxis::Y => {
                                    sign = -sign;
                                    PauliAxis::Y
                                }
                            };
                            (site, new_axis)
                        })
                        .collect();
                    (t.coeff * sign, factors)
                })
                .collect();
            PauliOperator::from_terms(op.n_sites(), op.space(), terms)
                .expect("Hadamard conjugation preserves well-formedness")
        };
        Self {
            physical: self.physical.clone(),
            auxiliary: self.auxiliary.as_ref().map(rotate),
            combination: self.combination,
            aux_frame: match self.aux_frame {
                AuxBasis::AuxZ => AuxBasis::AuxX,
                AuxBasis::AuxX => AuxBasis::AuxZ,
            },
        }
    }
}
