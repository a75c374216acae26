//! Sparse Pauli-string operators on spin-1/2 registers.
//!
//! Operators are stored as sums of Pauli strings `c · Π_i P_i` with complex
//! coefficients.  Spins take values ±1 with ↑ ↦ +1, and the matrix
//! conventions are
//!
//! ```text
//! Z|s⟩ = s|s⟩ ,    X|s⟩ = |−s⟩ ,    Y|s⟩ = i·s |−s⟩ ,
//! ```
//!
//! i.e. `Y|↑⟩ = i|↓⟩` and `Y|↓⟩ = −i|↑⟩`.  The only dense object this module
//! produces is [`PauliOperator::to_dense`], built row by row from
//! [`PauliOperator::operator_row`]; independent tensor-product constructions
//! live in the tests as oracles.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Single-site Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Which register of the doubled space an operator acts on.  Plain physical
/// Hamiltonians are tagged `Physical`; tilde conjugation produces operators
/// tagged `Auxiliary`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Space {
    Physical,
    Auxiliary,
}

/// A product of single-site Paulis, at most one axis per site, sites strictly
/// increasing.  The empty string is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    factors: Vec<(usize, PauliAxis)>,
}

impl PauliString {
    /// Builds a string from (site, axis) factors, sorting by site.  Fails if
    /// a site appears twice (products like `X₀X₀` are not Pauli strings).
    pub fn new(mut factors: Vec<(usize, PauliAxis)>) -> Result<Self> {
        factors.sort_by_key(|&(site, axis)| (site, axis as u8));
        for pair in factors.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidConfig(format!(
                    "duplicate site {} in Pauli string",
                    pair[0].0
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn identity() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(usize, PauliAxis)] {
        &self.factors
    }

    fn sort_key(&self) -> Vec<(usize, u8)> {
        self.factors.iter().map(|&(s, a)| (s, a as u8)).collect()
    }
}

/// One term `coeff · string` of a sparse Pauli operator.
#[derive(Clone, Debug)]
pub struct PauliTerm {
    pub coeff: C64,
    pub string: PauliString,
}

/// A sparse sum of Pauli strings acting on `n_sites` spins of one register.
///
/// Construction canonicalizes: terms are sorted, identical strings merged,
/// and exactly cancelled terms dropped, so equality of operators can be
/// checked term by term.
#[derive(Clone, Debug)]
pub struct PauliOperator {
    n_sites: usize,
    space: Space,
    terms: Vec<PauliTerm>,
}

impl PauliOperator {
    /// Builds an operator from `(coefficient, factors)` pairs.
    pub fn from_terms(
        n_sites: usize,
        space: Space,
        terms: Vec<(C64, Vec<(usize, PauliAxis)>)>,
    ) -> Result<Self> {
        let mut built = Vec::with_capacity(terms.len());
        for (coeff, factors) in terms {
            if !coeff.re.is_finite() || !coeff.im.is_finite() {
                return Err(Error::InvalidConfig("non-finite Pauli coefficient".into()));
            }
            let string = PauliString::new(factors)?;
            if let Some(&(site, _)) = string.factors.iter().max_by_key(|&&(s, _)| s) {
                if site >= n_sites {
                    return Err(Error::InvalidConfig(format!(
                        "Pauli site {site} out of range for {n_sites} sites"
                    )));
                }
            }
            built.push(PauliTerm { coeff, string });
        }
        Ok(Self::canonicalize(n_sites, space, built))
    }

    /// The zero operator.
    pub fn zero(n_sites: usize, space: Space) -> Self {
        Self { n_sites, space, terms: Vec::new() }
    }

    fn canonicalize(n_sites: usize, space: Space, mut terms: Vec<PauliTerm>) -> Self {
        terms.sort_by(|a, b| a.string.sort_key().cmp(&b.string.sort_key()));
        let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) if last.string == term.string => last.coeff += term.coeff,
                _ => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != C64::new(0.0, 0.0));
        Self { n_sites, space, terms: merged }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Re-tags the acting register without touching the matrix content.
    pub fn with_space(mut self, space: Space) -> Self {
        self.space = space;
        self
    }

    /// Sum of two operators on the same register.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_sites != other.n_sites || self.space != other.space {
            return Err(Error::BasisMismatch(
                "cannot add operators on different registers".into(),
            ));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::canonicalize(self.n_sites, self.space, terms))
    }

    /// Scalar multiple of the operator.
    pub fn scale(&self, factor: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm { coeff: t.coeff * factor, string: t.string.clone() })
            .collect();
        Self::canonicalize(self.n_sites, self.space, terms)
    }

    /// True when the operator equals its adjoint, i.e. all canonical
    /// coefficients are real to within `tol` (Pauli strings are Hermitian).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() <= tol)
    }

    /// Streams the sparse row ⟨x|Ô|x′⟩ for the basis assignment `x = spins`:
    /// calls `visit(flipped_sites, amplitude)` once per term with a nonzero
    /// matrix element, where `x′` equals `x` with `flipped_sites` negated.
    /// Different terms may yield the same `x′`; callers that need a merged
    /// row should use [`PauliOperator::operator_row`].
    pub fn for_each_row_entry(&self, spins: &[i8], mut visit: impl FnMut(&[usize], C64)) {
        debug_assert_eq!(spins.len(), self.n_sites);
        let mut flips: Vec<usize> = Vec::with_capacity(self.n_sites);
        for term in &self.terms {
            flips.clear();
            let mut amp = term.coeff;
            for &(site, axis) in term.string.factors() {
                let s = f64::from(spins[site]);
                match axis {
                    PauliAxis::X => flips.push(site),
                    PauliAxis::Y => {
                        // ⟨s|Y|−s⟩ = −i·s for the convention Y|s⟩ = i·s|−s⟩.
                        flips.push(site);
                        amp *= C64::new(0.0, -s);
                    }
                    PauliAxis::Z => amp *= s,
                }
            }
            visit(&flips, amp);
        }
    }

    /// The merged sparse row: all assignments `x′` with ⟨x|Ô|x′⟩ ≠ 0 together
    /// with their amplitudes.  Input spins must be ±1.
    pub fn operator_row(&self, spins: &[i8]) -> Result<Vec<(Vec<i8>, C64)>> {
        validate_spins(spins)?;
        if spins.len() != self.n_sites {
            return Err(Error::InvalidConfig(format!(
                "assignment has {} spins, operator acts on {}",
                spins.len(),
                self.n_sites
            )));
        }
        let mut row: BTreeMap<Vec<i8>, C64> = BTreeMap::new();
        self.for_each_row_entry(spins, |flips, amp| {
            let mut flipped = spins.to_vec();
            for &site in flips {
                flipped[site] = -flipped[site];
            }
            *row.entry(flipped).or_insert(C64::new(0.0, 0.0)) += amp;
        });
        row.retain(|_, amp| *amp != C64::new(0.0, 0.0));
        Ok(row.into_iter().collect())
    }

    /// Dense matrix assembled from the sparse rows, `M[x, x′] = ⟨x|Ô|x′⟩`.
    /// Exact-capacity guarded; intended for oracles and tests.
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        let dim = checked_dim(self.n_sites)?;
        let mut dense = DMatrix::zeros(dim, dim);
        for x in 0..dim {
            let spins = spins_from_index(x, self.n_sites);
            for (flipped, amp) in self.operator_row(&spins)? {
                dense[(x, basis_index(&flipped))] += amp;
            }
        }
        Ok(dense)
    }
}

/// Checks all spins are ±1.
pub fn validate_spins(spins: &[i8]) -> Result<()> {
    if spins.iter().all(|&s| s == 1 || s == -1) {
        Ok(())
    } else {
        Err(Error::InvalidConfig("spins must be ±1".into()))
    }
}

/// Basis index of a spin assignment, site 0 most significant, ↑ ↦ bit 0.
/// Matches the tensor-product order `P₀ ⊗ P₁ ⊗ …`.
pub fn basis_index(spins: &[i8]) -> usize {
    spins.iter().fold(0, |idx, &s| (idx << 1) | usize::from(s < 0))
}

/// Inverse of [`basis_index`].
pub fn spins_from_index(index: usize, n_sites: usize) -> Vec<i8> {
    (0..n_sites)
        .map(|site| if index >> (n_sites - 1 - site) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// `2^n_sites` with an overflow/capacity guard for dense work.
pub fn checked_dim(n_sites: usize) -> Result<usize> {
    if n_sites > 24 {
        return Err(Error::Capacity(format!(
            "dense dimension 2^{n_sites} exceeds supported range"
        )));
    }
    Ok(1usize << n_sites)
}
