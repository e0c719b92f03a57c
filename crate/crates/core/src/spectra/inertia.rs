//! Eigenvalue counting by Sylvester inertia.
//!
//! For a symmetric matrix A and a shift s, the number of eigenvalues below s
//! equals the number of negative pivots in an LDL^T factorization of A - sI.
//! The factorization works on banded storage, so counting costs n*b^2 per
//! query instead of a full eigendecomposition.

/// Symmetric banded matrix in lower-band storage: band[i][k] = A[i][i-k].
pub struct BandedSymmetric {
    n: usize,
    bandwidth: usize,
    band: Vec<f64>,
}

impl BandedSymmetric {
    /// Builds banded storage from symmetric triplets (i, j, value), i >= j.
    pub fn from_lower_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let bandwidth = triplets
            .iter()
            .map(|&(i, j, _)| i - j)
            .max()
            .unwrap_or(0);
        let mut band = vec![0.0; n * (bandwidth + 1)];
        for &(i, j, v) in triplets {
            band[i * (bandwidth + 1) + (i - j)] = v;
        }
        BandedSymmetric { n, bandwidth, band }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Number of eigenvalues strictly below `shift`.
    ///
    /// Plain banded LDL^T without pivoting; a vanishing pivot is handled by
    /// nudging the shift, which cannot change the count unless the shift sits
    /// numerically on an eigenvalue.
    pub fn count_below(&self, shift: f64) -> usize {
        let scale = self
            .band
            .iter()
            .fold(1.0f64, |acc, v| acc.max(v.abs()))
            .max(shift.abs());
        let mut nudge = 0.0;
        for _ in 0..8 {
            if let Some(count) = self.try_count_below(shift + nudge, scale) {
                return count;
            }
            nudge = if nudge == 0.0 {
                scale * 1e-11
            } else {
                nudge * 16.0
            };
        }
        // Last resort: accept the factorization with the largest nudge.
        self.try_count_below(shift + nudge, 0.0).unwrap_or(0)
    }

    fn try_count_below(&self, shift: f64, scale: f64) -> Option<usize> {
        let w = self.bandwidth;
        let stride = w + 1;
        // Working copy of the shifted band.
        let mut a = self.band.clone();
        for i in 0..self.n {
            a[i * stride] -= shift;
        }
        let breakdown = scale * 1e-280;
        let mut negatives = 0;
        let mut col = vec![0.0f64; w];
        for k in 0..self.n {
            let d = a[k * stride];
            if d == 0.0 || d.abs() <= breakdown {
                return None;
            }
            if d < 0.0 {
                negatives += 1;
            }
            let last = (k + w).min(self.n - 1);
            for i in k + 1..=last {
                col[i - k - 1] = a[i * stride + (i - k)];
            }
            // Schur-complement update of the trailing block within the band.
            for i in k + 1..=last {
                let ci = col[i - k - 1];
                if ci == 0.0 {
                    continue;
                }
                let f = ci / d;
                for j in k + 1..=i {
                    a[i * stride + (i - j)] -= f * col[j - k - 1];
                }
            }
        }
        Some(negatives)
    }

    /// Number of eigenvalues <= lambda, up to the counting tolerance.
    pub fn count_leq(&self, lambda: f64, tol: f64) -> usize {
        self.count_below(lambda + tol)
    }
}
