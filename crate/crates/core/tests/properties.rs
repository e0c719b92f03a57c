//! Property-based and cross-module invariant tests.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use amena::analysis::logspace;
use amena::oracle;
use amena::spectra::{self, exact, BoundaryCondition, SpectraConfig};
use amena::{assemble, build_piece, fixtures, FolnerBox, LaurentMatrix, LaurentPoly};

fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
    let shift = prop::collection::vec(-2i64..=2, rank);
    prop::collection::vec((shift, -5i64..=5), 0..4).prop_map(move |terms| {
        let refs: Vec<(&[i64], i64)> = terms.iter().map(|(s, c)| (s.as_slice(), *c)).collect();
        LaurentPoly::from_terms(rank, &refs)
    })
}

fn arb_matrix(rank: usize, rows: usize, cols: usize) -> impl Strategy<Value = LaurentMatrix> {
    prop::collection::vec(arb_poly(rank), rows * cols).prop_map(move |entries| {
        let mut m = LaurentMatrix::zeros(rows, cols, rank);
        for (k, p) in entries.into_iter().enumerate() {
            m.set(k / cols, k % cols, p);
        }
        m
    })
}

proptest! {
    #[test]
    fn adjoint_is_involution(a in arb_matrix(2, 2, 3)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn multiply_is_associative(
        a in arb_matrix(1, 2, 2),
        b in arb_matrix(1, 2, 2),
        c in arb_matrix(1, 2, 2),
    ) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn gram_trace_is_coefficient_norm(a in arb_matrix(2, 2, 2)) {
        // vn_trace(A* A) equals the sum of squared coefficients of A.
        let gram = a.adjoint().multiply(&a).unwrap();
        let trace = gram.vn_trace();
        let mut expect = BigInt::zero();
        for (_, p) in a.entries() {
            for (_, c) in p.support() {
                expect += c * c;
            }
        }
        prop_assert!(trace >= BigInt::zero());
        prop_assert_eq!(trace, expect);
    }

    #[test]
    fn evaluation_is_multiplicative(
        a in arb_matrix(1, 2, 2),
        b in arb_matrix(1, 2, 2),
        theta in 0.0f64..1.0,
    ) {
        let prod = a.multiply(&b).unwrap().evaluate(&[theta]);
        let sep = a.evaluate(&[theta]) * b.evaluate(&[theta]);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((prod[(i, j)] - sep[(i, j)]).norm() < 1e-9);
            }
        }
    }
}

// Random integer rectangular d; A = d^T d is PSD with exactly
// (cols - rank d) zero eigenvalues.  Cross-checks the exact rank, the
// characteristic polynomial's vanishing order, and the inertia counter
// against a dense eigendecomposition.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn gram_matrix_spectral_consistency(
        entries in prop::collection::vec(-3i64..=3, 30),
        rows in 2usize..=5,
    ) {
        let cols = 6;
        let d: Vec<Vec<i64>> = (0..rows)
            .map(|i| entries[i * cols..(i + 1) * cols].to_vec())
            .collect();
        // A = d^T d, integer PSD.
        let mut a = vec![vec![0i64; cols]; cols];
        for r in &d {
            for i in 0..cols {
                for j in 0..cols {
                    a[i][j] += r[i] * r[j];
                }
            }
        }
        let d_rows: Vec<exact::SparseRow> = d
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, BigInt::from(*v)))
                    .collect()
            })
            .collect();
        let nullity = cols - exact::rank_sparse(d_rows);

        let bound: f64 = a
            .iter()
            .map(|r| r.iter().map(|v| v.abs() as f64).sum::<f64>())
            .fold(1.0, f64::max);
        let cp = spectra::charpoly::char_poly(&a, bound);
        let r_m = cp.iter().position(|c| !c.is_zero()).unwrap();
        prop_assert_eq!(r_m, nullity);

        let dense = DMatrix::from_fn(cols, cols, |i, j| a[i][j] as f64);
        let mut eigs: Vec<f64> = dense.symmetric_eigenvalues().iter().cloned().collect();
        eigs.sort_by(f64::total_cmp);
        prop_assert_eq!(eigs.iter().filter(|e| e.abs() < 1e-7).count(), nullity);

        // det' = |q(0)| matches the floating product of positive eigenvalues.
        let q0 = cp[r_m].magnitude().to_f64().unwrap();
        let float_det: f64 = eigs.iter().filter(|&&e| e > 1e-7).map(|e| e.ln()).sum();
        prop_assert!((q0.ln() - float_det).abs() < 1e-6 * q0.ln().abs().max(1.0));

        // Inertia counts agree with the dense spectrum away from eigenvalues.
        let mut trip = Vec::new();
        for i in 0..cols {
            for j in 0..=i {
                if a[i][j] != 0 {
                    trip.push((i, j, a[i][j] as f64));
                }
            }
        }
        let band = spectra::inertia::BandedSymmetric::from_lower_triplets(cols, &trip);
        for lambda in [0.25, 1.3, 5.7, 17.21] {
            let expected = eigs.iter().filter(|&&e| e <= lambda + 1e-9).count();
            prop_assert_eq!(band.count_leq(lambda, 1e-9), expected);
        }
    }
}

#[test]
fn locality_norm_bound_is_dominated_by_product_form() {
    // K^2 (row-sum) never exceeds the coarser C * b product bound.
    for (name, x) in fixtures::all() {
        let fam = x.laplacians().unwrap();
        for deg in &fam.degrees {
            let product = deg.c_max.to_f64().unwrap() * deg.b_local as f64;
            assert!(deg.k_sq <= product.max(1.0) + 1e-12, "{name} j={}", deg.j);
        }
    }
}

#[test]
fn oracle_kernel_tolerance_stability() {
    // b2 computed with kernel_tol and kernel_tol/10 agree.
    let grid = 64;
    for (name, x) in fixtures::all() {
        let fam = x.laplacians().unwrap();
        for deg in &fam.degrees {
            let a = oracle::density(&deg.laplacian, &[], grid, oracle::KERNEL_TOL).unwrap();
            let b = oracle::density(&deg.laplacian, &[], grid, oracle::KERNEL_TOL / 10.0).unwrap();
            let tol = 1.0 / (grid as f64).sqrt();
            assert!((a.b2 - b.b2).abs() <= tol, "{name} j={}", deg.j);
        }
    }
}

#[test]
fn oracle_error_estimate_shrinks_with_refinement() {
    for (name, x) in fixtures::all() {
        let fam = x.laplacians().unwrap();
        for deg in &fam.degrees {
            let coarse =
                oracle::fk_determinant(&deg.laplacian, 16, oracle::KERNEL_TOL).unwrap();
            let fine =
                oracle::fk_determinant(&deg.laplacian, 256, oracle::KERNEL_TOL).unwrap();
            assert!(
                fine.error_estimate <= coarse.error_estimate + 1e-12,
                "{name} j={}: {} vs {}",
                deg.j,
                fine.error_estimate,
                coarse.error_estimate
            );
        }
    }
}

#[test]
fn absolute_and_relative_kernels_converge_together() {
    // |F_m^abs(0) - F_m^rel(0)| <= c/m with c = 2 frozen for the fixtures.
    for (name, x) in fixtures::all() {
        for m in [2usize, 4, 8, 16] {
            let piece = build_piece(&x, &FolnerBox::new(m, x.deck_rank())).unwrap();
            for j in 0..=x.top_dim() {
                let abs = assemble(&x, &piece, j, BoundaryCondition::Absolute).unwrap();
                let rel = assemble(&x, &piece, j, BoundaryCondition::Relative).unwrap();
                let fa = abs.kernel_dim() as f64 / piece.n_m() as f64;
                let fr = rel.kernel_dim() as f64 / piece.n_m() as f64;
                assert!(
                    (fa - fr).abs() <= 2.0 / m as f64 + 1e-12,
                    "{name} j={j} m={m}: |{fa} - {fr}|"
                );
            }
        }
    }
}

#[test]
fn density_counts_are_monotone_in_lambda() {
    let cfg = SpectraConfig::default();
    let lambdas = logspace(1e-3, 8.0, 12);
    for (name, x) in fixtures::all() {
        let piece = build_piece(&x, &FolnerBox::new(4, x.deck_rank())).unwrap();
        for j in 0..=x.top_dim() {
            let lap = assemble(&x, &piece, j, BoundaryCondition::Absolute).unwrap();
            let mut prev = lap.kernel_dim();
            for &l in &lambdas {
                let e = lap.count_leq(l, &cfg).unwrap();
                assert!(e >= prev, "{name} j={j} lambda={l}");
                prev = e;
            }
            assert_eq!(prev, lap.dim(), "{name} j={j}: top count misses cells");
        }
    }
}
