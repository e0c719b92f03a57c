//! Periodic cell complexes: a finite quotient complex with free Z^d deck
//! action, presented by per-cell boundary lists with shifts.
//!
//! The document format is JSON with fields `deck_rank`, `cells` and
//! `boundary`; see [`PeriodicComplex::load_str`].  Loading validates the
//! chain-complex condition (the composite boundary vanishes as a group-ring
//! matrix) and produces exact coboundary and Laplacian matrices over the
//! integral group ring.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, LaurentPoly};

#[derive(Deserialize)]
struct CellDecl {
    id: String,
    dim: usize,
}

#[derive(Deserialize)]
struct ComplexDoc {
    deck_rank: usize,
    cells: Vec<CellDecl>,
    #[serde(default)]
    boundary: BTreeMap<String, Vec<(String, Vec<i64>, i64)>>,
}

/// One face incidence: (face index within its dimension, deck shift, integer
/// incidence coefficient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRef {
    pub face: usize,
    pub shift: Vec<i64>,
    pub coeff: i64,
}

/// A finite cell complex X with free Z^d deck action, generating the periodic
/// cover Y.  Cells are grouped per dimension and indexed in document order.
#[derive(Clone, Debug)]
pub struct PeriodicComplex {
    deck_rank: usize,
    /// Cell ids per dimension.
    cells: Vec<Vec<String>>,
    /// boundary[j][i]: faces of the i-th j-cell, for j >= 1.
    boundary: Vec<Vec<Vec<FaceRef>>>,
}

impl PeriodicComplex {
    /// Parses and validates a periodic-complex document.
    pub fn load_str(text: &str) -> Result<Self> {
        let doc: ComplexDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn load_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::load_str(&text)
    }

    fn from_doc(doc: ComplexDoc) -> Result<Self> {
        if doc.deck_rank == 0 {
            return Err(Error::Parse("deck_rank must be at least 1".into()));
        }
        let top = doc.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); top + 1];
        let mut index: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for c in &doc.cells {
            if index.contains_key(&c.id) {
                return Err(Error::Parse(format!("duplicate cell id `{}`", c.id)));
            }
            index.insert(c.id.clone(), (c.dim, cells[c.dim].len()));
            cells[c.dim].push(c.id.clone());
        }
        let mut boundary: Vec<Vec<Vec<FaceRef>>> = (0..=top)
            .map(|j| vec![Vec::new(); cells[j].len()])
            .collect();
        for (cell_id, faces) in &doc.boundary {
            let &(dim, idx) = index
                .get(cell_id)
                .ok_or_else(|| Error::Parse(format!("boundary lists unknown cell `{cell_id}`")))?;
            if dim == 0 {
                if !faces.is_empty() {
                    return Err(Error::Parse(format!(
                        "0-cell `{cell_id}` must have empty boundary"
                    )));
                }
                continue;
            }
            for (face_id, shift, coeff) in faces {
                let &(fdim, fidx) = index.get(face_id).ok_or_else(|| Error::DanglingFace {
                    cell: cell_id.clone(),
                    face: face_id.clone(),
                })?;
                if fdim + 1 != dim {
                    return Err(Error::FaceDimension {
                        cell: cell_id.clone(),
                        dim,
                        face: face_id.clone(),
                        face_dim: fdim,
                    });
                }
                if shift.len() != doc.deck_rank {
                    return Err(Error::ShiftLength {
                        cell: cell_id.clone(),
                        expected: doc.deck_rank,
                        got: shift.len(),
                    });
                }
                boundary[dim][idx].push(FaceRef {
                    face: fidx,
                    shift: shift.clone(),
                    coeff: *coeff,
                });
            }
        }
        let complex = PeriodicComplex {
            deck_rank: doc.deck_rank,
            cells,
            boundary,
        };
        complex.validate_chain_condition()?;
        Ok(complex)
    }

    /// Checks that the composite boundary vanishes exactly over the group
    /// ring, reporting the offending cell on failure.
    fn validate_chain_condition(&self) -> Result<()> {
        for j in 2..=self.top_dim() {
            let b_hi = self.boundary_matrix(j);
            let b_lo = self.boundary_matrix(j - 1);
            let composite = b_lo.multiply(&b_hi)?;
            let first = composite
                .entries()
                .next()
                .map(|((fi, ci), p)| (*fi, *ci, format!("{p:?}")));
            if let Some((fi, ci, entry)) = first {
                return Err(Error::ChainComplex {
                    cell: self.cells[j][ci].clone(),
                    face: self.cells[j - 2][fi].clone(),
                    entry,
                });
            }
        }
        Ok(())
    }

    pub fn deck_rank(&self) -> usize {
        self.deck_rank
    }

    /// Top dimension of the quotient complex.
    pub fn top_dim(&self) -> usize {
        self.cells.len() - 1
    }

    /// Number of j-cells of the quotient (0 when j exceeds the top dimension).
    pub fn num_cells(&self, j: usize) -> usize {
        self.cells.get(j).map_or(0, Vec::len)
    }

    pub fn cell_id(&self, j: usize, i: usize) -> &str {
        &self.cells[j][i]
    }

    /// Faces of the i-th j-cell (empty for 0-cells).
    pub fn faces(&self, j: usize, i: usize) -> &[FaceRef] {
        &self.boundary[j][i]
    }

    /// Cell counts per dimension, `dims()[j] == num_cells(j)`.
    pub fn dims(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// The boundary operator in degree j as a group-ring matrix with rows the
    /// (j-1)-cells and columns the j-cells.  Shifts enter negated so that the
    /// coboundary below is its adjoint.
    pub fn boundary_matrix(&self, j: usize) -> LaurentMatrix {
        self.coboundary(j - 1).adjoint()
    }

    /// The coboundary d_j : C^j -> C^{j+1} as a group-ring matrix with rows
    /// the (j+1)-cells and columns the j-cells.  Entry (c, f) collects
    /// coeff * t^shift over the face incidences of c.  Out-of-range degrees
    /// give an empty matrix of the correct shape.
    pub fn coboundary(&self, j: usize) -> LaurentMatrix {
        let rows = self.num_cells(j + 1);
        let cols = self.num_cells(j);
        let mut m = LaurentMatrix::zeros(rows, cols, self.deck_rank);
        if j + 1 > self.top_dim() {
            return m;
        }
        for (ci, faces) in self.boundary[j + 1].iter().enumerate() {
            for f in faces {
                let term = LaurentPoly::monomial(self.deck_rank, &f.shift, f.coeff);
                let sum = m.get(ci, f.face).add(&term);
                m.set(ci, f.face, sum);
            }
        }
        m
    }

    /// Computes all Laplacians with their locality and norm constants.
    pub fn laplacians(&self) -> Result<LaplacianFamily> {
        let mut degrees = Vec::new();
        for j in 0..=self.top_dim() {
            let d_j = self.coboundary(j);
            let delta = if j == 0 {
                d_j.adjoint().multiply(&d_j)?
            } else {
                let d_prev = self.coboundary(j - 1);
                let down = d_prev.multiply(&d_prev.adjoint())?;
                let up = d_j.adjoint().multiply(&d_j)?;
                down.add(&up)?
            };
            let k_sq = delta.row_sum_bound().max(1.0);
            let c_max = delta.max_abs_coeff();
            let b_local = delta.max_row_terms();
            degrees.push(DegreeData {
                j,
                coboundary: d_j,
                laplacian: delta,
                k_sq,
                c_max,
                b_local,
            });
        }
        Ok(LaplacianFamily { degrees })
    }
}

/// Coboundary, Laplacian and constants for one degree.
#[derive(Clone, Debug)]
pub struct DegreeData {
    pub j: usize,
    /// d_j : C^j -> C^{j+1}.
    pub coboundary: LaurentMatrix,
    /// Delta_j = d_{j-1} d_{j-1}* + d_j* d_j.
    pub laplacian: LaurentMatrix,
    /// Row-sum bound K_j^2 >= max(1, ||Delta_j||); also dominates every
    /// finite-piece Laplacian in this degree.
    pub k_sq: f64,
    /// Largest absolute matrix coefficient of Delta_j (locality constant C).
    pub c_max: BigInt,
    /// Largest number of monomial terms in a row of Delta_j; bounds the
    /// number of j-cells within distance one (local finiteness constant b).
    pub b_local: usize,
}

/// Laplacian data for every degree 0..=top of a complex.
#[derive(Clone, Debug)]
pub struct LaplacianFamily {
    pub degrees: Vec<DegreeData>,
}

impl LaplacianFamily {
    pub fn degree(&self, j: usize) -> &DegreeData {
        &self.degrees[j]
    }
}
