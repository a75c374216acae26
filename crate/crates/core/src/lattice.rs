//! Lattice geometry and the transverse-field Ising Hamiltonian.
//!
//! Supported geometries are 1D chains and 2D square lattices with open or
//! periodic boundaries.  Sites are numbered row-major; edges are unordered
//! nearest-neighbor pairs `(i, j)` with `i < j`, stored without duplicates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliOperator, Space};
use crate::C64;

/// Critical transverse field of the chain model, in units of the coupling.
pub const CHAIN_CRITICAL_FIELD: f64 = 1.0;
/// Critical transverse field of the square-lattice model, in units of the
/// coupling (quantum Monte Carlo value, accurate to the digits shown).
pub const SQUARE_CRITICAL_FIELD: f64 = 3.04438;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Chain,
    Square,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

/// A finite lattice: geometry kind, extents, boundary and the derived edge
/// list.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    kind: LatticeKind,
    extents: Vec<usize>,
    boundary: Boundary,
    n_sites: usize,
    edges: Vec<(usize, usize)>,
}

/// Builds a chain (`extents = [l]`) or square lattice (`extents = [rows,
/// cols]`).  Open boundaries need extents ≥ 2; periodic boundaries need
/// extents ≥ 3, because a two-site ring would carry a double bond and the
/// edge list stores each neighbor pair once.
pub fn build_lattice(kind: LatticeKind, extents: &[usize], boundary: Boundary) -> Result<Lattice> {
    let expected_rank = match kind {
        LatticeKind::Chain => 1,
        LatticeKind::Square => 2,
    };
    if extents.len() != expected_rank {
        return Err(Error::InvalidGeometry(format!(
            "{kind:?} lattice needs {expected_rank} extent(s), got {}",
            extents.len()
        )));
    }
    let min_extent = match boundary {
        Boundary::Open => 2,
        Boundary::Periodic => 3,
    };
    if extents.iter().any(|&l| l < min_extent) {
        return Err(Error::InvalidGeometry(format!(
            "{boundary:?} boundary requires every extent ≥ {min_extent}, got {extents:?}"
        )));
    }

    let mut edges = Vec::new();
    let mut push = |a: usize, b: usize| {
        let edge = (a.min(b), a.max(b));
        if !edges.contains(&edge) {
            edges.push(edge);
        }
    };
    let n_sites;
    match kind {
        LatticeKind::Chain => {
            let l = extents[0];
            n_sites = l;
            for i in 0..l - 1 {
                push(i, i + 1);
            }
            if boundary == Boundary::Periodic {
                push(l - 1, 0);
            }
        }
        LatticeKind::Square => {
            let (rows, cols) = (extents[0], extents[1]);
            n_sites = rows * cols;
            let site = |r: usize, c: usize| r * cols + c;
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        push(site(r, c), site(r, c + 1));
                    } else if boundary == Boundary::Periodic {
                        push(site(r, c), site(r, 0));
                    }
                    if r + 1 < rows {
                        push(site(r, c), site(r + 1, c));
                    } else if boundary == Boundary::Periodic {
                        push(site(r, c), site(0, c));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(Lattice { kind, extents: extents.to_vec(), boundary, n_sites, edges })
}

impl Lattice {
    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Unordered nearest-neighbor pairs, each listed once, `(i, j)` with
    /// `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sites adjacent to `site`.
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == site {
                    Some(b)
                } else if b == site {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// The transverse-field Ising Hamiltonian
///
/// ```text
/// Ĥ(h_T, h_L) = J Σ_⟨i,j⟩ σ̂ᶻᵢ σ̂ᶻⱼ − h_T Σᵢ σ̂ˣᵢ + h_L Σᵢ σ̂ᶻᵢ
/// ```
///
/// on the given lattice, as a sparse Pauli operator on the physical register.
pub fn build_tfim(lattice: &Lattice, j: f64, h_t: f64, h_l: f64) -> Result<PauliOperator> {
    let mut terms: Vec<(C64, Vec<(usize, PauliAxis)>)> = Vec::new();
    for &(a, b) in lattice.edges() {
        terms.push((C64::new(j, 0.0), vec![(a, PauliAxis::Z), (b, PauliAxis::Z)]));
    }
    for site in 0..lattice.n_sites() {
        terms.push((C64::new(-h_t, 0.0), vec![(site, PauliAxis::X)]));
        if h_l != 0.0 {
            terms.push((C64::new(h_l, 0.0), vec![(site, PauliAxis::Z)]));
        }
    }
    PauliOperator::from_terms(lattice.n_sites(), Space::Physical, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_edge_counts() {
        let open = build_lattice(LatticeKind::Chain, &[6], Boundary::Open).unwrap();
        assert_eq!(open.n_sites(), 6);
        assert_eq!(open.edges().len(), 5);

        let periodic = build_lattice(LatticeKind::Chain, &[6], Boundary::Periodic).unwrap();
        assert_eq!(periodic.edges().len(), 6);
        assert!(periodic.edges().contains(&(0, 5)));
    }

    #[test]
    fn square_edge_counts_and_duplicates() {
        // Open r×c lattice: r(c−1) + c(r−1) edges.
        let open = build_lattice(LatticeKind::Square, &[3, 4], Boundary::Open).unwrap();
        assert_eq!(open.n_sites(), 12);
        assert_eq!(open.edges().len(), 3 * 3 + 4 * 2);

        // Torus: 2·L² edges, all distinct.
        let torus = build_lattice(LatticeKind::Square, &[3, 3], Boundary::Periodic).unwrap();
        assert_eq!(torus.edges().len(), 18);
        let mut dedup = torus.edges().to_vec();
        dedup.dedup();
        assert_eq!(dedup.len(), 18);
    }

    #[test]
    fn neighbors_on_torus_wrap_around() {
        let torus = build_lattice(LatticeKind::Square, &[3, 3], Boundary::Periodic).unwrap();
        // Corner site 0 = (0,0): right (0,1)=1, left wraps to (0,2)=2,
        // down (1,0)=3, up wraps to (2,0)=6.
        assert_eq!(torus.neighbors(0), vec![1, 2, 3, 6]);
    }

    #[test]
    fn degenerate_geometries_are_rejected() {
        assert!(build_lattice(LatticeKind::Chain, &[1], Boundary::Open).is_err());
        assert!(build_lattice(LatticeKind::Chain, &[2], Boundary::Periodic).is_err());
        assert!(build_lattice(LatticeKind::Square, &[2, 5], Boundary::Periodic).is_err());
        assert!(build_lattice(LatticeKind::Square, &[3], Boundary::Open).is_err());
        assert!(build_lattice(LatticeKind::Chain, &[3, 3], Boundary::Open).is_err());
    }

    #[test]
    fn tfim_term_structure() {
        let lattice = build_lattice(LatticeKind::Chain, &[4], Boundary::Open).unwrap();
        let h = build_tfim(&lattice, 1.0, 2.0, 0.0).unwrap();
        // 3 ZZ bonds + 4 X fields, no longitudinal terms.
        assert_eq!(h.terms().len(), 7);
        assert!(h.is_hermitian(0.0));

        let h = build_tfim(&lattice, 1.0, 2.0, 0.5).unwrap();
        assert_eq!(h.terms().len(), 11);

        // Field signs: −h_T on X, +h_L on Z, +J on ZZ.
        for term in h.terms() {
            let axes: Vec<_> = term.string.factors().iter().map(|&(_, a)| a).collect();
            match axes.as_slice() {
                [PauliAxis::X] => assert_eq!(term.coeff.re, -2.0),
                [PauliAxis::Z] => assert_eq!(term.coeff.re, 0.5),
                [PauliAxis::Z, PauliAxis::Z] => assert_eq!(term.coeff.re, 1.0),
                other => panic!("unexpected term {other:?}"),
            }
        }
    }
}
