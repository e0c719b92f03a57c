//! Finite Laplacians of the pieces of the exhaustion, their exact kernels,
//! spectra and counting functions.
//!
//! Zero-eigenvalue multiplicity is always decided by exact integer rank,
//! never by a floating threshold.  Full spectra come from a dense symmetric
//! eigendecomposition up to a size limit; beyond it, eigenvalue counts are
//! answered by banded inertia queries.

pub mod charpoly;
pub mod exact;
pub mod inertia;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::complex::PeriodicComplex;
use crate::error::{Error, Result};
use crate::folner::{FinitePiece, LiftedCell};
use inertia::BandedSymmetric;

/// Which cochain space the finite Laplacian acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundaryCondition {
    /// C^j(Y_m): all j-cells of the piece.
    Absolute,
    /// C^j(Y_m, boundary): interior j-cells only.
    Relative,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Absolute => write!(f, "absolute"),
            BoundaryCondition::Relative => write!(f, "relative"),
        }
    }
}

/// Tuning knobs for the spectral backends.
#[derive(Clone, Debug)]
pub struct SpectraConfig {
    /// Dimension above which exact characteristic polynomials are skipped.
    pub char_poly_limit: usize,
    /// Dimension above which full dense eigendecompositions are skipped and
    /// counting queries go through the banded inertia backend.
    pub dense_limit: usize,
    /// Threshold separating numerically-zero eigenvalues for the floating
    /// det' mirror.  A mismatch with the exact kernel dimension is a test
    /// failure, never silently patched.
    pub zero_split: f64,
    /// Tolerance for the positive-semidefiniteness assertion.
    pub tol_psd: f64,
    /// Comparison slack for eigenvalue counting at a threshold.
    pub count_tol: f64,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        SpectraConfig {
            char_poly_limit: 400,
            dense_limit: 4000,
            zero_split: 1e-8,
            tol_psd: 1e-9,
            count_tol: 1e-9,
        }
    }
}

/// Sparse integer matrix with row-major storage, used for the finite
/// coboundaries and Laplacians.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    /// Per row: sorted (col, value) pairs with nonzero values.
    data: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn from_row_maps(rows: usize, cols: usize, maps: Vec<BTreeMap<usize, i64>>) -> Self {
        assert_eq!(maps.len(), rows);
        IntMatrix {
            rows,
            cols,
            data: maps
                .into_iter()
                .map(|m| m.into_iter().filter(|(_, v)| *v != 0).collect())
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.data[i][k].1)
            .unwrap_or(0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut maps = vec![BTreeMap::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                maps[j].insert(i, v);
            }
        }
        IntMatrix::from_row_maps(self.cols, self.rows, maps)
    }

    pub fn matmul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut maps: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &other.data[k] {
                    let e = maps[i].entry(j).or_insert(0);
                    *e = e
                        .checked_add(a.checked_mul(b).expect("integer overflow in matmul"))
                        .expect("integer overflow in matmul");
                }
            }
        }
        IntMatrix::from_row_maps(self.rows, other.cols, maps)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut maps: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                *maps[i].entry(j).or_insert(0) += v;
            }
        }
        for (i, row) in other.data.iter().enumerate() {
            for &(j, v) in row {
                *maps[i].entry(j).or_insert(0) += v;
            }
        }
        IntMatrix::from_row_maps(self.rows, self.cols, maps)
    }

    pub fn trace(&self) -> i128 {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i) as i128)
            .sum()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v as f64;
            }
        }
        m
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                m[i][j] = v;
            }
        }
        m
    }

    pub fn to_bigint_rows(&self) -> Vec<exact::SparseRow> {
        self.data
            .iter()
            .map(|row| row.iter().map(|&(j, v)| (j, BigInt::from(v))).collect())
            .collect()
    }

    /// Plain-text sparse triple export: one `row col value` line per nonzero,
    /// in row-major order.
    pub fn export_triples(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.data.iter().enumerate() {
            for &(j, v) in row {
                out.push_str(&format!("{i} {j} {v}\n"));
            }
        }
        out
    }
}

/// Selects the cochain basis for (piece, j, bc): indices into the piece's
/// j-cell list, in cell enumeration order.
fn basis(piece: &FinitePiece, j: usize, bc: BoundaryCondition) -> Vec<usize> {
    match bc {
        BoundaryCondition::Absolute => (0..piece.num_cells(j)).collect(),
        BoundaryCondition::Relative => piece.interior_indices(j),
    }
}

/// The finite coboundary d_j^(m) : C^j -> C^{j+1} for the chosen boundary
/// condition, with rows the selected (j+1)-cells and columns the selected
/// j-cells.
pub fn finite_coboundary(
    x: &PeriodicComplex,
    piece: &FinitePiece,
    j: usize,
    bc: BoundaryCondition,
) -> IntMatrix {
    let row_cells = basis(piece, j + 1, bc);
    let col_cells = basis(piece, j, bc);
    let col_pos: BTreeMap<usize, usize> = col_cells
        .iter()
        .enumerate()
        .map(|(pos, &idx)| (idx, pos))
        .collect();
    let mut maps: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); row_cells.len()];
    if j < piece.top_dim() {
        for (r, &cell_idx) in row_cells.iter().enumerate() {
            let cell = &piece.cells(j + 1)[cell_idx];
            for f in x.faces(j + 1, cell.base) {
                let face = LiftedCell {
                    shift: cell.shift.iter().zip(&f.shift).map(|(a, b)| a + b).collect(),
                    base: f.face,
                };
                let fi = piece
                    .cell_index(j, &face)
                    .expect("piece is closed under faces");
                if let Some(&c) = col_pos.get(&fi) {
                    *maps[r].entry(c).or_insert(0) += f.coeff;
                }
            }
        }
    }
    IntMatrix::from_row_maps(row_cells.len(), col_cells.len(), maps)
}

/// The Laplacian of one (j, m, bc) job, with its exact and numeric backends.
pub struct FiniteLaplacian {
    pub j: usize,
    pub bc: BoundaryCondition,
    pub n_m: usize,
    /// Norm bound K_j^2 inherited from the periodic Laplacian; dominates this
    /// matrix as well.
    pub k_sq: f64,
    matrix: IntMatrix,
    d_prev: IntMatrix,
    d_cur: IntMatrix,
    kernel: OnceLock<usize>,
    eigen: OnceLock<Vec<f64>>,
    banded: OnceLock<BandedSymmetric>,
}

/// Assembles Delta_j^(m) = d_{j-1} d_{j-1}^T + d_j^T d_j on the selected
/// cochain space.
pub fn assemble(
    x: &PeriodicComplex,
    piece: &FinitePiece,
    j: usize,
    bc: BoundaryCondition,
) -> Result<FiniteLaplacian> {
    let d_cur = finite_coboundary(x, piece, j, bc);
    let up = d_cur.transpose().matmul(&d_cur);
    let d_prev = if j == 0 {
        IntMatrix::zeros(up.rows(), 0)
    } else {
        finite_coboundary(x, piece, j - 1, bc)
    };
    let matrix = if j == 0 {
        up
    } else {
        d_prev.matmul(&d_prev.transpose()).add(&up)
    };
    let k_sq = if j <= x.top_dim() {
        x.laplacians()?.degree(j).k_sq
    } else {
        1.0
    };
    Ok(FiniteLaplacian {
        j,
        bc,
        n_m: piece.n_m(),
        k_sq,
        matrix,
        d_prev,
        d_cur,
        kernel: OnceLock::new(),
        eigen: OnceLock::new(),
        banded: OnceLock::new(),
    })
}

impl FiniteLaplacian {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn d_prev(&self) -> &IntMatrix {
        &self.d_prev
    }

    pub fn d_cur(&self) -> &IntMatrix {
        &self.d_cur
    }

    /// dim C^j(Y_m) / N_m, the constant `a` of the tail bound.
    pub fn a(&self) -> f64 {
        self.dim() as f64 / self.n_m as f64
    }

    /// Exact kernel dimension via the Hodge identity
    /// nullity(Delta) = dim - rank(d_{j-1}) - rank(d_j),
    /// valid because im d_{j-1} and im d_j^T intersect trivially (d d = 0
    /// plus positive semidefiniteness).  The incidence matrices keep small
    /// entries under exact elimination, unlike Delta itself.
    pub fn kernel_dim(&self) -> usize {
        *self.kernel.get_or_init(|| {
            let rank_cur = exact::rank_sparse(self.d_cur.to_bigint_rows());
            let rank_prev = exact::rank_sparse(self.d_prev.to_bigint_rows());
            self.dim() - rank_cur - rank_prev
        })
    }

    /// Independent recomputation: integer rank deficiency of the Laplacian
    /// matrix itself.  Exponentially growing pivots make this slow beyond a
    /// few hundred cells; it exists as a cross-check.
    pub fn kernel_dim_direct(&self) -> usize {
        self.dim() - exact::rank_sparse(self.matrix.to_bigint_rows())
    }

    /// Full sorted eigenvalue list via the dense symmetric backend.
    pub fn eigenvalues(&self, cfg: &SpectraConfig) -> Result<&[f64]> {
        if self.dim() > cfg.dense_limit {
            return Err(Error::Invalid(format!(
                "dimension {} exceeds dense_limit {}",
                self.dim(),
                cfg.dense_limit
            )));
        }
        if self.eigen.get().is_none() {
            let dense = self.matrix.to_dense_f64();
            let eig = nalgebra::SymmetricEigen::try_new(dense, f64::EPSILON, 0).ok_or(
                Error::EigenFailure {
                    rows: self.matrix.rows(),
                    cols: self.matrix.cols(),
                },
            )?;
            let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
            vals.sort_by(f64::total_cmp);
            let scale = self.k_sq.max(1.0);
            if let Some(min) = vals.first() {
                if *min < -1e3 * f64::EPSILON * scale * self.dim() as f64 - self.psd_tol() {
                    return Err(Error::Invalid(format!(
                        "matrix is not positive semidefinite: min eigenvalue {min}"
                    )));
                }
            }
            let _ = self.eigen.set(vals);
        }
        Ok(self.eigen.get().unwrap())
    }

    fn psd_tol(&self) -> f64 {
        1e-9 * self.k_sq.max(1.0)
    }

    fn banded(&self) -> &BandedSymmetric {
        self.banded.get_or_init(|| {
            let mut trip = Vec::new();
            for i in 0..self.matrix.rows() {
                for &(jc, v) in self.matrix.row(i) {
                    if jc <= i {
                        trip.push((i, jc, v as f64));
                    }
                }
            }
            BandedSymmetric::from_lower_triplets(self.matrix.rows(), &trip)
        })
    }

    /// E_m(lambda): eigenvalues <= lambda counted with multiplicity.  The
    /// zero eigenvalue is counted by the exact kernel dimension; positive
    /// eigenvalues by the configured backend.
    pub fn count_leq(&self, lambda: f64, cfg: &SpectraConfig) -> Result<usize> {
        if lambda < 0.0 {
            return Ok(0);
        }
        if lambda == 0.0 {
            return Ok(self.kernel_dim());
        }
        let tol = cfg.count_tol * self.k_sq.max(1.0);
        if self.dim() <= cfg.dense_limit {
            let kernel = self.kernel_dim();
            let eigs = self.eigenvalues(cfg)?;
            let positives = eigs[kernel..].iter().filter(|&&e| e <= lambda + tol).count();
            Ok(kernel + positives)
        } else {
            // The inertia count already includes the zero eigenvalues; the
            // exact kernel is only consulted as a floor when it has been
            // computed (never force the integer elimination here).
            let count = self.banded().count_leq(lambda, tol);
            Ok(count.max(self.kernel.get().copied().unwrap_or(0)))
        }
    }

    /// F_m(lambda) = E_m(lambda) / N_m.
    pub fn f_m(&self, lambda: f64, cfg: &SpectraConfig) -> Result<f64> {
        Ok(self.count_leq(lambda, cfg)? as f64 / self.n_m as f64)
    }

    /// F_m(0), exact: kernel dimension over N_m.
    pub fn f_m_zero(&self) -> f64 {
        self.kernel_dim() as f64 / self.n_m as f64
    }

    /// Trace of the k-th power, exact.
    pub fn trace_power(&self, k: u32) -> i128 {
        if k == 0 {
            return self.dim() as i128;
        }
        let mut acc = self.matrix.clone();
        for _ in 1..k {
            acc = acc.matmul(&self.matrix);
        }
        acc.trace()
    }

    /// Diagonal of the k-th power, exact.
    pub fn diag_power(&self, k: u32) -> Vec<i64> {
        if k == 0 {
            return vec![1; self.dim()];
        }
        let mut acc = self.matrix.clone();
        for _ in 1..k {
            acc = acc.matmul(&self.matrix);
        }
        acc.diagonal()
    }

    /// Full spectral summary for this Laplacian.
    pub fn spectrum(&self, cfg: &SpectraConfig) -> Result<SpectrumSummary> {
        let eigenvalues = self.eigenvalues(cfg)?.to_vec();
        let kernel_dim = self.kernel_dim();
        let numeric_zero_count = eigenvalues
            .iter()
            .filter(|e| e.abs() < cfg.zero_split)
            .count();
        let char_poly = if self.dim() <= cfg.char_poly_limit {
            Some(charpoly::char_poly(
                &self.matrix.to_dense_i64(),
                self.k_sq,
            ))
        } else {
            None
        };
        let (r_m, q0) = match &char_poly {
            Some(coeffs) => {
                let r = coeffs
                    .iter()
                    .position(|c| !c.is_zero())
                    .unwrap_or(coeffs.len() - 1);
                (r, Some(coeffs[r].clone()))
            }
            None => (kernel_dim, None),
        };
        let log_det_prime = eigenvalues
            .iter()
            .filter(|&&e| e > cfg.zero_split)
            .map(|e| e.ln())
            .sum();
        Ok(SpectrumSummary {
            j: self.j,
            bc: self.bc,
            n_m: self.n_m,
            dim: self.dim(),
            k_sq: self.k_sq,
            eigenvalues,
            kernel_dim,
            numeric_zero_count,
            char_poly,
            r_m,
            q0,
            log_det_prime,
        })
    }
}

/// Exact kernel dimension of the (j, bc) Laplacian of a piece: the finite
/// Betti number b^j(Y_m) resp. b^j(Y_m, boundary).
pub fn finite_betti(
    x: &PeriodicComplex,
    piece: &FinitePiece,
    j: usize,
    bc: BoundaryCondition,
) -> Result<usize> {
    Ok(assemble(x, piece, j, bc)?.kernel_dim())
}

/// Eigenvalue data of one finite Laplacian.
#[derive(Clone, Debug)]
pub struct SpectrumSummary {
    pub j: usize,
    pub bc: BoundaryCondition,
    pub n_m: usize,
    pub dim: usize,
    pub k_sq: f64,
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Exact multiplicity of the zero eigenvalue (integer rank deficiency).
    pub kernel_dim: usize,
    /// Eigenvalues below the zero_split threshold; must equal kernel_dim.
    pub numeric_zero_count: usize,
    /// Integer coefficients c_0..c_n of det(tI - Delta), if computed.
    pub char_poly: Option<Vec<BigInt>>,
    /// Order of vanishing of the characteristic polynomial at zero.
    pub r_m: usize,
    /// q_m(0), the first nonzero characteristic coefficient.
    pub q0: Option<BigInt>,
    /// log of the product of eigenvalues above zero_split (floating mirror).
    pub log_det_prime: f64,
}

impl SpectrumSummary {
    /// (E(lambda), F(lambda)); zero eigenvalues counted exactly.
    pub fn counting(&self, lambda: f64) -> (usize, f64) {
        let e = if lambda < 0.0 {
            0
        } else {
            let tol = 1e-9 * self.k_sq.max(1.0);
            let positives = self.eigenvalues[self.kernel_dim..]
                .iter()
                .filter(|&&v| v <= lambda + tol)
                .count();
            self.kernel_dim + positives
        };
        (e, e as f64 / self.n_m as f64)
    }

    /// dim C^j(Y_m) / N_m.
    pub fn a(&self) -> f64 {
        self.dim as f64 / self.n_m as f64
    }

    /// Exact det': |q_m(0)|, when the characteristic polynomial is available.
    pub fn det_prime_exact(&self) -> Option<BigInt> {
        self.q0.as_ref().map(Signed::abs)
    }

    /// (1/N_m) log det', from the floating mirror.
    pub fn normalized_log_det_prime(&self) -> f64 {
        self.log_det_prime / self.n_m as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::folner::{build_piece, FolnerBox};

    fn circle_piece(m: usize) -> crate::folner::FinitePiece {
        build_piece(&fixtures::circle(), &FolnerBox::new(m, 1)).unwrap()
    }

    #[test]
    fn circle_m1_absolute_laplacian() {
        let x = fixtures::circle();
        let piece = circle_piece(1);
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
        assert_eq!(lap.matrix().to_dense_i64(), vec![vec![1, -1], vec![-1, 1]]);
    }

    #[test]
    fn circle_m1_relative_is_empty() {
        let x = fixtures::circle();
        let piece = circle_piece(1);
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Relative).unwrap();
        assert_eq!(lap.dim(), 0);
        assert_eq!(lap.kernel_dim(), 0);
    }

    #[test]
    fn torus_m2_vertex_laplacian_is_grid_patch() {
        let x = fixtures::torus();
        let piece = build_piece(&x, &FolnerBox::new(2, 2)).unwrap();
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
        assert_eq!(lap.dim(), 9);
        assert!(lap.matrix().is_symmetric());
        // Diagonal equals vertex degrees in the 3x3 grid patch:
        // 4 corners of degree 2, 4 side vertices of degree 3, 1 center 4.
        let mut diag = lap.matrix().diagonal();
        diag.sort_unstable();
        assert_eq!(diag, vec![2, 2, 2, 2, 3, 3, 3, 3, 4]);
        assert_eq!(lap.kernel_dim(), 1);
    }

    #[test]
    fn path_2_spectrum() {
        let x = fixtures::circle();
        let piece = circle_piece(1);
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
        let s = lap.spectrum(&SpectraConfig::default()).unwrap();
        assert_eq!(s.kernel_dim, 1);
        assert_eq!(s.r_m, 1);
        assert!((s.eigenvalues[0]).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-12);
        // char poly t^2 - 2t
        assert_eq!(
            s.char_poly.as_ref().unwrap(),
            &vec![BigInt::zero(), BigInt::from(-2), BigInt::from(1)]
        );
        assert_eq!(s.q0, Some(BigInt::from(-2)));
        assert_eq!(s.det_prime_exact(), Some(BigInt::from(2)));
        assert!((s.log_det_prime - 2.0f64.ln()).abs() < 1e-12);
        // Counting at the endpoints.
        assert_eq!(s.counting(0.0), (1, 1.0));
        assert_eq!(s.counting(2.0).0, 2);
    }

    #[test]
    fn path_3_spectrum() {
        let x = fixtures::circle();
        let piece = circle_piece(2);
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
        let s = lap.spectrum(&SpectraConfig::default()).unwrap();
        // Path on 3 vertices: eigenvalues 0, 1, 3; det' = 3.
        assert_eq!(s.kernel_dim, 1);
        for (ev, expect) in s.eigenvalues.iter().zip([0.0, 1.0, 3.0]) {
            assert!((ev - expect).abs() < 1e-10);
        }
        assert_eq!(s.det_prime_exact(), Some(BigInt::from(3)));
    }

    #[test]
    fn circle_path_eigenvalues_match_closed_form() {
        // Path on m+1 vertices: eigenvalues 4 sin^2(k pi / (2(m+1))), k=0..m.
        let m = 10;
        let x = fixtures::circle();
        let piece = circle_piece(m);
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
        let cfg = SpectraConfig::default();
        let eigs = lap.eigenvalues(&cfg).unwrap();
        for (k, ev) in eigs.iter().enumerate() {
            let expect =
                4.0 * (k as f64 * std::f64::consts::PI / (2.0 * (m as f64 + 1.0))).sin().powi(2);
            assert!((ev - expect).abs() < 1e-9, "k={k}");
        }
        // E(0.1) counts k=0,1 for m=10.
        let (e, _) = lap.spectrum(&cfg).unwrap().counting(0.1);
        assert_eq!(e, 2);
    }

    #[test]
    fn kernel_matches_hodge_and_numeric() {
        let cfg = SpectraConfig::default();
        for (name, x) in fixtures::all() {
            let piece = build_piece(&x, &FolnerBox::new(3, x.deck_rank())).unwrap();
            for j in 0..=x.top_dim() {
                for bc in [BoundaryCondition::Absolute, BoundaryCondition::Relative] {
                    let lap = assemble(&x, &piece, j, bc).unwrap();
                    assert_eq!(
                        lap.kernel_dim(),
                        lap.kernel_dim_direct(),
                        "{name} j={j} {bc}"
                    );
                    if lap.dim() > 0 {
                        let s = lap.spectrum(&cfg).unwrap();
                        assert_eq!(s.numeric_zero_count, s.kernel_dim, "{name} j={j} {bc}");
                        assert_eq!(s.r_m, s.kernel_dim, "{name} j={j} {bc}");
                    }
                }
            }
        }
    }

    #[test]
    fn finite_betti_examples() {
        let x = fixtures::circle();
        for m in [1, 5, 17] {
            let piece = circle_piece(m);
            assert_eq!(
                finite_betti(&x, &piece, 0, BoundaryCondition::Absolute).unwrap(),
                1
            );
        }
        let w = fixtures::wedge();
        for m in [1, 4, 9] {
            let piece = build_piece(&w, &FolnerBox::new(m, 1)).unwrap();
            assert_eq!(
                finite_betti(&w, &piece, 1, BoundaryCondition::Absolute).unwrap(),
                m
            );
        }
        let t = fixtures::torus();
        let piece = build_piece(&t, &FolnerBox::new(3, 2)).unwrap();
        assert_eq!(
            finite_betti(&t, &piece, 2, BoundaryCondition::Absolute).unwrap(),
            0
        );
        assert_eq!(
            finite_betti(&t, &piece, 1, BoundaryCondition::Absolute).unwrap(),
            0
        );
    }

    #[test]
    fn euler_characteristic_consistency() {
        for (name, x) in fixtures::all() {
            let piece = build_piece(&x, &FolnerBox::new(3, x.deck_rank())).unwrap();
            let mut chi_cells: i64 = 0;
            let mut chi_betti: i64 = 0;
            for j in 0..=x.top_dim() {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                chi_cells += sign * piece.num_cells(j) as i64;
                chi_betti += sign
                    * finite_betti(&x, &piece, j, BoundaryCondition::Absolute).unwrap() as i64;
            }
            assert_eq!(chi_cells, chi_betti, "{name}");
        }
    }

    #[test]
    fn norm_bound_holds_for_finite_spectra() {
        let cfg = SpectraConfig::default();
        for (name, x) in fixtures::all() {
            let fam = x.laplacians().unwrap();
            let piece = build_piece(&x, &FolnerBox::new(4, x.deck_rank())).unwrap();
            for j in 0..=x.top_dim() {
                let lap = assemble(&x, &piece, j, BoundaryCondition::Absolute).unwrap();
                if lap.dim() == 0 {
                    continue;
                }
                let eigs = lap.eigenvalues(&cfg).unwrap();
                let max = eigs.last().unwrap();
                assert!(
                    *max <= fam.degree(j).k_sq + 1e-9,
                    "{name} j={j}: {max} > {}",
                    fam.degree(j).k_sq
                );
            }
        }
    }

    #[test]
    fn deep_interior_diagonal_matches_group_ring_power() {
        // Locality: far from the boundary the finite power's
        // diagonal equals the periodic one.
        let x = fixtures::circle();
        let fam = x.laplacians().unwrap();
        let piece = circle_piece(12);
        for k in 1u32..=3 {
            let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
            let diag = lap.diag_power(k);
            let ring_value = fam
                .degree(0)
                .laplacian
                .pow(k)
                .unwrap()
                .get(0, 0)
                .constant_coeff();
            for (i, cell) in piece.cells(0).iter().enumerate() {
                let dist = piece.translate_boundary_distance(&cell.shift).unwrap_or(0);
                if dist > k as i64 {
                    assert_eq!(BigInt::from(diag[i]), ring_value, "k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn inertia_and_dense_counts_agree() {
        let x = fixtures::torus();
        let piece = build_piece(&x, &FolnerBox::new(4, 2)).unwrap();
        let dense_cfg = SpectraConfig::default();
        let inertia_cfg = SpectraConfig {
            dense_limit: 0,
            ..SpectraConfig::default()
        };
        for j in 0..=2 {
            let lap = assemble(&x, &piece, j, BoundaryCondition::Absolute).unwrap();
            let lap2 = assemble(&x, &piece, j, BoundaryCondition::Absolute).unwrap();
            for lambda in [0.05, 0.3, 1.0, 2.5, 4.0, 7.9] {
                let a = lap.count_leq(lambda, &dense_cfg).unwrap();
                let b = lap2.count_leq(lambda, &inertia_cfg).unwrap();
                assert_eq!(a, b, "j={j} lambda={lambda}");
            }
        }
    }

    #[test]
    fn export_triples_is_deterministic() {
        let x = fixtures::circle();
        let piece = circle_piece(2);
        let lap = assemble(&x, &piece, 0, BoundaryCondition::Absolute).unwrap();
        let text = lap.matrix().export_triples();
        assert_eq!(text, "0 0 1\n0 1 -1\n1 0 -1\n1 1 2\n1 2 -1\n2 1 -1\n2 2 1\n");
    }
}
