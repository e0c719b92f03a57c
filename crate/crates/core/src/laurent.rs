//! Exact arithmetic for matrices over the integral group ring of Z^d.
//!
//! Elements of the group ring are finitely supported Laurent polynomials in d
//! commuting variables with arbitrary-precision integer coefficients.  A shift
//! vector g in Z^d stands for the monomial t_1^{g_1} ... t_d^{g_d}.  Matrices
//! over this ring carry the coboundary and Laplacian operators of a periodic
//! complex; evaluation on the d-torus realizes their Fourier transform.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A group element of Z^d, i.e. a monomial exponent vector.
pub type Shift = Vec<i64>;

/// Finitely supported integer Laurent polynomial in d variables.
///
/// Invariant: no stored coefficient is zero and every shift has length `rank`.
/// The support map is a `BTreeMap`, so iteration is lexicographic in the
/// shift, which keeps serialized output deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    support: BTreeMap<Shift, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            support: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(&vec![0; rank], c.into());
        p
    }

    /// The monomial c * t^shift.
    pub fn monomial(rank: usize, shift: &[i64], c: impl Into<BigInt>) -> Self {
        assert_eq!(shift.len(), rank, "shift length must equal rank");
        let mut p = Self::zero(rank);
        p.add_term(shift, c.into());
        p
    }

    /// Builds a polynomial from (shift, coefficient) terms, merging duplicates.
    pub fn from_terms(rank: usize, terms: &[(&[i64], i64)]) -> Self {
        let mut p = Self::zero(rank);
        for (shift, c) in terms {
            assert_eq!(shift.len(), rank, "shift length must equal rank");
            p.add_term(shift, BigInt::from(*c));
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Shift, &BigInt)> {
        self.support.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.support.len()
    }

    /// Coefficient at a given shift (zero if absent).
    pub fn coeff(&self, shift: &[i64]) -> BigInt {
        self.support.get(shift).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient at the identity of the group, i.e. the constant term.
    /// This is the von Neumann trace of a 1x1 group-ring matrix.
    pub fn constant_coeff(&self) -> BigInt {
        self.coeff(&vec![0; self.rank])
    }

    fn add_term(&mut self, shift: &[i64], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.support.entry(shift.to_vec()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.support.remove(shift);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (s, c) in &other.support {
            out.add_term(s, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (s, c) in &other.support {
            out.add_term(s, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = Self::zero(self.rank);
        for (s, c) in &self.support {
            out.support.insert(s.clone(), -c.clone());
        }
        out
    }

    /// Exact product: convolution of the two supports.
    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, other.rank);
        let mut out = Self::zero(self.rank);
        let mut shift = vec![0i64; self.rank];
        for (sa, ca) in &self.support {
            for (sb, cb) in &other.support {
                for k in 0..self.rank {
                    shift[k] = sa[k] + sb[k];
                }
                out.add_term(&shift, ca * cb);
            }
        }
        out
    }

    /// The group-ring star: coefficient at g moves to -g.  Coefficients are
    /// integers, so no conjugation is involved.
    pub fn adjoint(&self) -> LaurentPoly {
        let mut out = Self::zero(self.rank);
        for (s, c) in &self.support {
            out.support.insert(s.iter().map(|x| -x).collect(), c.clone());
        }
        out
    }

    /// Substitutes t_k -> exp(2 pi i theta_k).
    pub fn evaluate(&self, theta: &[f64]) -> Complex64 {
        assert_eq!(theta.len(), self.rank, "theta must have rank coordinates");
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, c) in &self.support {
            let mut phase = 0.0;
            for k in 0..self.rank {
                phase += theta[k] * s[k] as f64;
            }
            let angle = 2.0 * std::f64::consts::PI * phase;
            let cf = c.to_f64().expect("coefficient too large for f64 evaluation");
            acc += Complex64::new(angle.cos(), angle.sin()) * cf;
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn abs_coeff_sum(&self) -> BigInt {
        self.support.values().map(|c| c.abs()).sum()
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.support
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest |g_k| over the support, the "bandwidth" of the polynomial.
    pub fn shift_span(&self) -> i64 {
        self.support
            .keys()
            .flat_map(|s| s.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in &self.support {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*t^{:?}", c, s)?;
        }
        Ok(())
    }
}

/// Sparse matrix over the integral group ring of Z^d.
///
/// Invariant: no identically-zero polynomial is stored and every entry shares
/// the same rank d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    rank: usize,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize, rank: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            rank,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, rank: usize) -> Self {
        let mut m = Self::zeros(n, n, rank);
        for i in 0..n {
            m.set(i, i, LaurentPoly::constant(rank, 1));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert_eq!(p.rank(), self.rank);
        if p.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), p);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> LaurentPoly {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.rank))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &LaurentPoly)> {
        self.entries.iter()
    }

    pub fn add(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for ((i, j), p) in &other.entries {
            let sum = out.get(*i, *j).add(p);
            out.set(*i, *j, sum);
        }
        Ok(out)
    }

    /// Exact product in the group ring.
    pub fn multiply(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "multiply: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch(format!(
                "multiply: rank {} vs {}",
                self.rank, other.rank
            )));
        }
        // Group entries of `other` by row for sparse accumulation.
        let mut by_row: BTreeMap<usize, Vec<(usize, &LaurentPoly)>> = BTreeMap::new();
        for ((k, j), p) in &other.entries {
            by_row.entry(*k).or_default().push((*j, p));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.rank);
        for ((i, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (j, b) in row {
                    let prod = a.mul(b);
                    if !prod.is_zero() {
                        let sum = out.get(*i, *j).add(&prod);
                        out.set(*i, *j, sum);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Transpose with each entry starred: the Hilbert-space adjoint of the
    /// operator the matrix represents on square-summable cochains.
    pub fn adjoint(&self) -> LaurentMatrix {
        let mut out = Self::zeros(self.cols, self.rows, self.rank);
        for ((i, j), p) in &self.entries {
            out.entries.insert((*j, *i), p.adjoint());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.adjoint() == *self
    }

    /// Evaluates every entry at a point of the d-torus.
    pub fn evaluate(&self, theta: &[f64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for ((i, j), p) in &self.entries {
            m[(*i, *j)] = p.evaluate(theta);
        }
        m
    }

    /// Exact k-th power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Result<LaurentMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "pow of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        let mut acc = Self::identity(self.rows, self.rank);
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Von Neumann trace: the sum of constant coefficients on the diagonal.
    pub fn vn_trace(&self) -> BigInt {
        let mut t = BigInt::zero();
        for i in 0..self.rows.min(self.cols) {
            if let Some(p) = self.entries.get(&(i, i)) {
                t += p.constant_coeff();
            }
        }
        t
    }

    /// Exact von Neumann trace of the k-th power, as an integer.
    pub fn vn_trace_power(&self, k: u32) -> Result<BigInt> {
        Ok(self.pow(k)?.vn_trace())
    }

    /// Row-sum bound on the operator norm: max over rows of the summed
    /// absolute coefficients.  For a self-adjoint matrix this dominates the
    /// spectral radius on the torus.
    pub fn row_sum_bound(&self) -> f64 {
        let mut sums = vec![BigInt::zero(); self.rows];
        for ((i, _), p) in &self.entries {
            sums[*i] += p.abs_coeff_sum();
        }
        sums.iter()
            .map(|s| s.to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Largest absolute coefficient over all entries (the locality constant
    /// for the matrix coefficients).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.entries
            .values()
            .map(|p| p.max_abs_coeff())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest number of monomial terms in any row, counted over all entries
    /// of the row.  Bounds the number of cells within distance one.
    pub fn max_row_terms(&self) -> usize {
        let mut counts = vec![0usize; self.rows];
        for ((i, _), p) in &self.entries {
            counts[*i] += p.num_terms();
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Largest |g_k| over all entry supports.
    pub fn shift_span(&self) -> i64 {
        self.entries
            .values()
            .map(|p| p.shift_span())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn t_minus_1() -> LaurentMatrix {
        let mut m = LaurentMatrix::zeros(1, 1, 1);
        m.set(0, 0, LaurentPoly::from_terms(1, &[(&[1], 1), (&[0], -1)]));
        m
    }

    fn circle_laplacian() -> LaurentMatrix {
        // (t-1)(t^-1 - 1) = 2 - t - t^-1
        t_minus_1().multiply(&t_minus_1().adjoint()).unwrap()
    }

    #[test]
    fn product_of_conjugate_factors() {
        let p = t_minus_1().get(0, 0);
        let q = p.mul(&p.adjoint());
        assert_eq!(q.coeff(&[0]), BigInt::from(2));
        assert_eq!(q.coeff(&[1]), BigInt::from(-1));
        assert_eq!(q.coeff(&[-1]), BigInt::from(-1));
        assert_eq!(q.num_terms(), 3);
    }

    #[test]
    fn multiply_by_identity() {
        let a = circle_laplacian();
        let id = LaurentMatrix::identity(1, 1);
        assert_eq!(a.multiply(&id).unwrap(), a);
        assert_eq!(id.multiply(&a).unwrap(), a);
    }

    #[test]
    fn square_constant_coefficient() {
        // (2 - t - t^-1)^2 has constant coefficient 6.
        let d = circle_laplacian();
        let sq = d.multiply(&d).unwrap();
        assert_eq!(sq.get(0, 0).constant_coeff(), BigInt::from(6));
    }

    #[test]
    fn adjoint_negates_shifts() {
        let p = LaurentPoly::from_terms(1, &[(&[1], 1), (&[0], -1)]);
        let a = p.adjoint();
        assert_eq!(a.coeff(&[-1]), BigInt::from(1));
        assert_eq!(a.coeff(&[0]), BigInt::from(-1));
        assert_eq!(p.adjoint().adjoint(), p);
    }

    #[test]
    fn adjoint_of_constant_matrix_is_transpose() {
        let mut m = LaurentMatrix::zeros(2, 3, 1);
        m.set(0, 1, LaurentPoly::constant(1, 5));
        m.set(1, 2, LaurentPoly::constant(1, -3));
        let a = m.adjoint();
        assert_eq!(a.rows(), 3);
        assert_eq!(a.cols(), 2);
        assert_eq!(a.get(1, 0), LaurentPoly::constant(1, 5));
        assert_eq!(a.get(2, 1), LaurentPoly::constant(1, -3));
    }

    #[test]
    fn evaluate_circle_laplacian() {
        let d = circle_laplacian();
        // 2 - 2cos(2 pi theta); at theta = 1/4 this is exactly 2.
        let m = d.evaluate(&[0.25]);
        assert!((m[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!(m[(0, 0)].im.abs() < 1e-12);
        // At theta = 0 evaluation is the coefficient sum.
        let z = d.evaluate(&[0.0]);
        assert!(z[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn evaluate_adjoint_is_conjugate_transpose() {
        let mut m = LaurentMatrix::zeros(2, 2, 1);
        m.set(0, 1, LaurentPoly::from_terms(1, &[(&[2], 3), (&[-1], 1)]));
        m.set(1, 0, LaurentPoly::from_terms(1, &[(&[0], -2)]));
        let theta = [0.37];
        let e = m.evaluate(&theta);
        let ea = m.adjoint().evaluate(&theta);
        let diff = (ea - e.adjoint()).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn vn_trace_powers_of_circle() {
        let d = circle_laplacian();
        assert_eq!(d.vn_trace_power(0).unwrap(), BigInt::from(1));
        assert_eq!(d.vn_trace_power(1).unwrap(), BigInt::from(2));
        assert_eq!(d.vn_trace_power(2).unwrap(), BigInt::from(6));
        assert_eq!(d.vn_trace_power(3).unwrap(), BigInt::from(20));
        // Central binomial C(2k, k) continues: 70, 252.
        assert_eq!(d.vn_trace_power(4).unwrap(), BigInt::from(70));
        assert_eq!(d.vn_trace_power(5).unwrap(), BigInt::from(252));
    }

    #[test]
    fn trace_of_adjoint_product_is_coefficient_norm() {
        let mut m = LaurentMatrix::zeros(2, 2, 2);
        m.set(0, 0, LaurentPoly::from_terms(2, &[(&[1, 0], 2), (&[0, -1], -3)]));
        m.set(1, 0, LaurentPoly::from_terms(2, &[(&[0, 0], 1)]));
        let gram = m.adjoint().multiply(&m).unwrap();
        // 2^2 + 3^2 + 1^2 = 14
        assert_eq!(gram.vn_trace(), BigInt::from(14));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = LaurentMatrix::zeros(2, 3, 1);
        let b = LaurentMatrix::zeros(2, 2, 1);
        assert!(a.multiply(&b).is_err());
    }
}
