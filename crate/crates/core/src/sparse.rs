//! Sparse matrix assembly and direct linear solves.
//!
//! Matrices are built from triplets (duplicates sum) and factored with a
//! sparse LU. Parallelism is pinned to sequential so repeated solves are
//! bitwise reproducible and timings compare cleanly across problem sizes.

use crate::error::{Error, Result};
use faer::prelude::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet as FaerTriplet};
use faer::{Mat, Par};
use std::sync::Once;

/// Floor for the denominator of relative residuals, so a zero right-hand
/// side does not divide by zero.
const TINY: f64 = 1e-300;

/// One coordinate-format matrix entry. Entries with equal (row, col) sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl Triplet {
    pub fn new(row: usize, col: usize, value: f64) -> Triplet {
        Triplet { row, col, value }
    }
}

/// Immutable sparse matrix in compressed-column form, retaining its source
/// triplets for matrix-vector products and residual checks.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    triplets: Vec<Triplet>,
    mat: SparseColMat<usize, f64>,
}

impl SparseMatrix {
    /// Assemble from coordinate triplets, summing duplicates.
    pub fn from_triplets(triplets: Vec<Triplet>, n_rows: usize, n_cols: usize) -> Result<SparseMatrix> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::AssemblyFailed(
                "matrix must have at least one row and one column".into(),
            ));
        }
        for t in &triplets {
            if t.row >= n_rows || t.col >= n_cols {
                return Err(Error::TripletOutOfRange {
                    row: t.row,
                    col: t.col,
                    n_rows,
                    n_cols,
                });
            }
            if !t.value.is_finite() {
                return Err(Error::AssemblyFailed(format!(
                    "non-finite entry {} at ({}, {})",
                    t.value, t.row, t.col
                )));
            }
        }
        let faer_trips: Vec<FaerTriplet<usize, usize, f64>> = triplets
            .iter()
            .map(|t| FaerTriplet::new(t.row, t.col, t.value))
            .collect();
        let mat = SparseColMat::try_new_from_triplets(n_rows, n_cols, &faer_trips)
            .map_err(|e| Error::AssemblyFailed(format!("{e:?}")))?;
        Ok(SparseMatrix {
            n_rows,
            n_cols,
            triplets,
            mat,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// y = A x, accumulated straight from the triplets.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                what: "matvec operand length",
                expected: self.n_cols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n_rows];
        for t in &self.triplets {
            y[t.row] += t.value * x[t.col];
        }
        Ok(y)
    }
}

/// Outcome of a successful linear solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// ||Ax - b||_2 / max(||b||_2, tiny), measured on the returned solution.
    pub relative_residual: f64,
    /// Which backend produced the solution.
    pub method_tag: &'static str,
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn init_backend() {
    static INIT: Once = Once::new();
    INIT.call_once(|| faer::set_global_parallelism(Par::Seq));
}

/// Solve A x = b with sparse LU and verify the residual after the fact.
///
/// The factorization has no rank revelation, so singularity is detected by
/// the solution itself: non-finite entries or a relative residual above
/// `tol` reject the solve.
pub fn solve_linear(a: &SparseMatrix, b: &[f64], tol: f64) -> Result<SolveReport> {
    if a.n_rows != a.n_cols {
        return Err(Error::DimensionMismatch {
            what: "square system matrix (rows vs cols)",
            expected: a.n_rows,
            got: a.n_cols,
        });
    }
    if b.len() != a.n_rows {
        return Err(Error::DimensionMismatch {
            what: "right-hand side length",
            expected: a.n_rows,
            got: b.len(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::BadTolerance { tol });
    }
    init_backend();
    let n = a.n_rows;
    let sym = SymbolicLu::try_new(a.mat.symbolic()).map_err(|_| Error::SingularMatrix {
        achieved_residual: f64::NAN,
    })?;
    let lu = Lu::try_new_with_symbolic(sym, a.mat.as_ref()).map_err(|_| Error::SingularMatrix {
        achieved_residual: f64::NAN,
    })?;
    let mut x = Mat::from_fn(n, 1, |i, _| b[i]);
    lu.solve_in_place(x.as_mut());
    let solution: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if solution.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix {
            achieved_residual: f64::NAN,
        });
    }
    let ax = a.matvec(&solution)?;
    let r: Vec<f64> = ax.iter().zip(b).map(|(axi, bi)| axi - bi).collect();
    let relative_residual = l2(&r) / l2(b).max(TINY);
    if relative_residual > tol {
        return Err(Error::SingularMatrix {
            achieved_residual: relative_residual,
        });
    }
    Ok(SolveReport {
        solution,
        relative_residual,
        method_tag: "sparse-lu",
    })
}

/// Plain residual norm ||A x - b||_2.
pub fn residual_norm(a: &SparseMatrix, x: &[f64], b: &[f64]) -> Result<f64> {
    if b.len() != a.n_rows {
        return Err(Error::DimensionMismatch {
            what: "right-hand side length",
            expected: a.n_rows,
            got: b.len(),
        });
    }
    let ax = a.matvec(x)?;
    Ok(l2(&ax.iter().zip(b).map(|(axi, bi)| axi - bi).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;
    use proptest::prelude::*;

    fn diag(values: &[f64]) -> SparseMatrix {
        let trips = values
            .iter()
            .enumerate()
            .map(|(i, v)| Triplet::new(i, i, *v))
            .collect();
        SparseMatrix::from_triplets(trips, values.len(), values.len()).unwrap()
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = diag(&[1.0, 1.0, 1.0]);
        let rep = solve_linear(&a, &[3.0, -1.0, 0.5], DEFAULT_TOL).unwrap();
        assert_eq!(rep.solution, vec![3.0, -1.0, 0.5]);
        assert!(rep.relative_residual <= DEFAULT_TOL);
        assert_eq!(rep.method_tag, "sparse-lu");
    }

    #[test]
    fn diagonal_solve_divides_componentwise() {
        let a = diag(&[2.0, 4.0, -8.0]);
        let rep = solve_linear(&a, &[2.0, 2.0, 2.0], DEFAULT_TOL).unwrap();
        assert_eq!(rep.solution, vec![1.0, 0.5, -0.25]);
    }

    #[test]
    fn duplicate_triplets_sum() {
        let trips = vec![Triplet::new(0, 0, 1.0), Triplet::new(0, 0, 2.0)];
        let a = SparseMatrix::from_triplets(trips, 1, 1).unwrap();
        let rep = solve_linear(&a, &[6.0], DEFAULT_TOL).unwrap();
        assert!((rep.solution[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_triplet_reports_its_indices() {
        let trips = vec![Triplet::new(2, 0, 1.0)];
        match SparseMatrix::from_triplets(trips, 2, 2) {
            Err(Error::TripletOutOfRange { row, col, n_rows, n_cols }) => {
                assert_eq!((row, col, n_rows, n_cols), (2, 0, 2, 2));
            }
            other => panic!("expected TripletOutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_entry_is_rejected_at_assembly() {
        let trips = vec![Triplet::new(0, 0, f64::NAN)];
        assert!(matches!(
            SparseMatrix::from_triplets(trips, 1, 1),
            Err(Error::AssemblyFailed(_))
        ));
    }

    #[test]
    fn rank_deficient_system_is_reported_singular() {
        // [[1, 1], [1, 1]] with inconsistent rhs has no solution; either the
        // factorization fails or the residual check rejects the output.
        let trips = vec![
            Triplet::new(0, 0, 1.0),
            Triplet::new(0, 1, 1.0),
            Triplet::new(1, 0, 1.0),
            Triplet::new(1, 1, 1.0),
        ];
        let a = SparseMatrix::from_triplets(trips, 2, 2).unwrap();
        assert!(matches!(
            solve_linear(&a, &[1.0, 2.0], DEFAULT_TOL),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn residual_norm_at_zero_is_the_rhs_norm() {
        let a = diag(&[1.0, 1.0]);
        let r = residual_norm(&a, &[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert!((r - 5.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let a = diag(&[1.0, 1.0]);
        assert!(matches!(
            solve_linear(&a, &[1.0], DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.matvec(&[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let rect = SparseMatrix::from_triplets(vec![Triplet::new(0, 0, 1.0)], 2, 3).unwrap();
        assert!(matches!(
            solve_linear(&rect, &[1.0, 2.0], DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bad_tolerances_are_rejected() {
        let a = diag(&[1.0]);
        for tol in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                solve_linear(&a, &[1.0], tol),
                Err(Error::BadTolerance { .. })
            ));
        }
    }

    #[test]
    fn triplet_order_does_not_change_the_solution() {
        // Same 3x3 matrix assembled in two entry orders must factor to
        // solutions that agree to roundoff.
        let fwd = vec![
            Triplet::new(0, 0, 4.0),
            Triplet::new(0, 1, 1.0),
            Triplet::new(1, 0, 1.0),
            Triplet::new(1, 1, 5.0),
            Triplet::new(1, 2, 2.0),
            Triplet::new(2, 1, 2.0),
            Triplet::new(2, 2, 6.0),
        ];
        let mut rev = fwd.clone();
        rev.reverse();
        let a1 = SparseMatrix::from_triplets(fwd, 3, 3).unwrap();
        let a2 = SparseMatrix::from_triplets(rev, 3, 3).unwrap();
        let b = [1.0, -2.0, 0.5];
        let x1 = solve_linear(&a1, &b, DEFAULT_TOL).unwrap().solution;
        let x2 = solve_linear(&a2, &b, DEFAULT_TOL).unwrap().solution;
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn matvec_matches_dense_accumulation() {
        let n = 20;
        let mut trips = Vec::new();
        let mut dense = vec![vec![0.0; n]; n];
        // deterministic pseudo-random pattern
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                if (i + 3 * j) % 5 == 0 {
                    let v = next();
                    trips.push(Triplet::new(i, j, v));
                    dense[i][j] += v;
                }
            }
        }
        let a = SparseMatrix::from_triplets(trips, n, n).unwrap();
        let x: Vec<f64> = (0..n).map(|k| (k as f64).sin()).collect();
        let y = a.matvec(&x).unwrap();
        for i in 0..n {
            let want: f64 = (0..n).map(|j| dense[i][j] * x[j]).sum();
            assert!((y[i] - want).abs() < 1e-12);
        }
    }

    /// Dense Gaussian elimination with partial pivoting, as an independent
    /// reference for the property test.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let piv = (k..n).max_by(|&r, &s| a[r][k].abs().total_cmp(&a[s][k].abs())).unwrap();
            a.swap(k, piv);
            b.swap(k, piv);
            for r in k + 1..n {
                let f = a[r][k] / a[k][k];
                for c in k..n {
                    a[r][c] -= f * a[k][c];
                }
                b[r] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
            x[k] = (b[k] - s) / a[k][k];
        }
        x
    }

    proptest! {
        #[test]
        fn diagonally_dominant_systems_solve_to_tolerance(
            n in 2usize..8,
            seed in 0u64..1000,
        ) {
            let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let mut dense = vec![vec![0.0; n]; n];
            let mut trips = Vec::new();
            for i in 0..n {
                let mut off = 0.0;
                for j in 0..n {
                    if i != j {
                        let v = next();
                        dense[i][j] = v;
                        off += v.abs();
                        trips.push(Triplet::new(i, j, v));
                    }
                }
                let d = off + 1.0 + next().abs();
                dense[i][i] = d;
                trips.push(Triplet::new(i, i, d));
            }
            let b: Vec<f64> = (0..n).map(|_| next()).collect();
            let a = SparseMatrix::from_triplets(trips, n, n).unwrap();
            let rep = solve_linear(&a, &b, DEFAULT_TOL).unwrap();
            prop_assert!(rep.relative_residual <= DEFAULT_TOL);
            let want = dense_solve(dense, b);
            for (got, want) in rep.solution.iter().zip(&want) {
                prop_assert!((got - want).abs() < 1e-9);
            }
        }
    }
}
