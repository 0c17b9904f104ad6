//! Extremal eigenvalues of dense symmetric matrices.
//!
//! Small matrices go straight to a dense symmetric eigensolver. Larger
//! ones use Lanczos with full reorthogonalization: the matrix only
//! enters through matrix-vector products, the Ritz value at the low end
//! converges geometrically, and the returned pair is certified by an
//! explicit residual check `‖Av − λv‖ ≤ tol·max(1, |λ|)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Below this dimension a full dense solve is cheaper than iterating.
const SMALL_DENSE: usize = 200;

const MAX_LANCZOS_ITER: usize = 500;

/// Matrix-vector product, data-parallel over column chunks when the
/// `parallel` feature is enabled. Partial results are reduced in chunk
/// order, so the outcome is deterministic either way.
pub(crate) fn sym_gemv(a: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    #[cfg(feature = "parallel")]
    {
        let n = a.ncols();
        if n >= 4096 {
            use rayon::prelude::*;
            const CHUNK: usize = 1024;
            let starts: Vec<usize> = (0..n).step_by(CHUNK).collect();
            let partials: Vec<DVector<f64>> = starts
                .par_iter()
                .map(|&start| {
                    let mut y = DVector::zeros(n);
                    for j in start..(start + CHUNK).min(n) {
                        let xj = x[j];
                        if xj != 0.0 {
                            y.axpy(xj, &a.column(j), 1.0);
                        }
                    }
                    y
                })
                .collect();
            let mut y = DVector::zeros(n);
            for p in partials {
                y += p;
            }
            return y;
        }
    }
    a * x
}

fn smallest_by_dense(a: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(a.clone());
    let mut best = 0;
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < eig.eigenvalues[best] {
            best = i;
        }
    }
    (eig.eigenvalues[best], eig.eigenvectors.column(best).into_owned())
}

/// Minimal eigenvalue of a symmetric matrix with residual below
/// `tol·max(1, |λ|)`.
pub fn smallest_eigenvalue(matrix: &DMatrix<f64>, tol: f64) -> Result<f64> {
    smallest_eigenpair(matrix, tol).map(|(value, _)| value)
}

/// Minimal eigenpair of a symmetric matrix.
pub fn smallest_eigenpair(matrix: &DMatrix<f64>, tol: f64) -> Result<(f64, DVector<f64>)> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::InvalidParameter(format!(
            "matrix must be square, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = matrix.nrows();
    if n < SMALL_DENSE {
        return Ok(smallest_by_dense(matrix));
    }

    // Start close to the lowest product-basis state but with enough
    // noise to overlap any ground state.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c616e63);
    let mut v = DVector::from_fn(n, |_, _| 0.01 * (rng.random::<f64>() - 0.5));
    v[0] += 1.0;
    v /= v.norm();

    let mut basis: Vec<DVector<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let max_iter = MAX_LANCZOS_ITER.min(n);

    for k in 0..max_iter {
        let mut w = sym_gemv(matrix, &basis[k]);
        let alpha = basis[k].dot(&w);
        alphas.push(alpha);
        // Full reorthogonalization, two passes.
        for _ in 0..2 {
            for q in &basis {
                let overlap = q.dot(&w);
                w.axpy(-overlap, q, 1.0);
            }
        }
        let beta = w.norm();
        let scale = alphas.iter().fold(0.0f64, |acc, a| acc.max(a.abs()))
            + betas.iter().fold(0.0f64, |acc, b| acc.max(b.abs()));
        let exhausted = beta <= 1e-14 * scale.max(1.0);

        let check_now = exhausted || k + 1 == max_iter || (k >= 8 && (k + 1) % 10 == 0);
        if check_now {
            let m = alphas.len();
            let mut tri = DMatrix::zeros(m, m);
            for i in 0..m {
                tri[(i, i)] = alphas[i];
                if i + 1 < m {
                    tri[(i, i + 1)] = betas[i];
                    tri[(i + 1, i)] = betas[i];
                }
            }
            let (theta, s) = smallest_by_dense(&tri);
            let residual_estimate = beta * s[m - 1].abs();
            if exhausted || residual_estimate <= tol * theta.abs().max(1.0) {
                let mut ritz = DVector::zeros(n);
                for (i, q) in basis.iter().enumerate() {
                    ritz.axpy(s[i], q, 1.0);
                }
                ritz /= ritz.norm();
                let residual = (sym_gemv(matrix, &ritz) - theta * &ritz).norm();
                if residual <= tol * theta.abs().max(1.0) {
                    return Ok((theta, ritz));
                }
                if exhausted {
                    // Invariant subspace reached but the residual check
                    // failed; nothing more Lanczos can do.
                    return Err(Error::NoConvergence(k + 1));
                }
            }
        }
        if exhausted {
            break;
        }
        betas.push(beta);
        basis.push(w / beta);
    }
    Err(Error::NoConvergence(max_iter))
}
