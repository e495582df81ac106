//! Krylov approximation of exp(−iHτ)·v for Hermitian H, used by the time
//! integrator. Builds a short Lanczos basis with full reorthogonalization and
//! exponentiates the small tridiagonal projection.

use num_complex::Complex64;

use crate::algebra::{inner_product_raw, l2_norm};

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let coeff = inner_product_raw(b, v);
        axpy(v, -coeff, b);
    }
}

/// Eigen decomposition of the real symmetric tridiagonal (alpha, beta),
/// returned as ascending (eigenvalue, eigenvector-column) pairs.
fn tridiag_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, nalgebra::DMatrix<f64>) {
    let m = alpha.len();
    let mut t = nalgebra::DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let evecs = nalgebra::DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    (evals, evecs)
}

/// Krylov approximation of exp(−i·τ·H)·v for Hermitian H.
///
/// Builds a Lanczos basis until the subspace exponential stabilizes (or the
/// cap is hit) and maps the small exponential back to the full space. Exactly
/// norm-preserving up to orthogonality loss of the basis.
pub fn expm_multiply<F>(matvec: F, v: &[Complex64], tau: f64, tol: f64) -> Vec<Complex64>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let dim = v.len();
    let vnorm = l2_norm(v);
    if vnorm == 0.0 || tau == 0.0 {
        return v.to_vec();
    }
    let max_m = dim.min(40);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(max_m);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    basis.push(v.iter().map(|a| a / vnorm).collect());

    let mut prev: Option<Vec<Complex64>> = None;
    for j in 0..max_m {
        let mut w = matvec(&basis[j]);
        if j > 0 {
            axpy(&mut w, Complex64::new(-beta[j - 1], 0.0), &basis[j - 1]);
        }
        let a = inner_product_raw(&basis[j], &w).re;
        alpha.push(a);
        axpy(&mut w, Complex64::new(-a, 0.0), &basis[j]);
        orthogonalize(&mut w, &basis);
        let b = l2_norm(&w);

        let happy = b < 1e-13;
        let m = alpha.len();
        if happy || m == max_m || m >= 4 {
            let small = tridiag_expm_e1(&alpha, &beta, tau);
            if happy || m == max_m {
                return assemble(&basis, &small, vnorm, dim);
            }
            if let Some(p) = &prev {
                let diff: f64 = small
                    .iter()
                    .zip(p.iter().chain(std::iter::repeat(&Complex64::ZERO)))
                    .map(|(x, y)| (x - y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if diff < tol {
                    return assemble(&basis, &small, vnorm, dim);
                }
            }
            prev = Some(small);
        }
        beta.push(b);
        let mut next = w;
        for x in &mut next {
            *x /= b;
        }
        basis.push(next);
    }
    unreachable!("loop returns at m == max_m");
}

/// exp(−i·τ·T)·e₁ for the real symmetric tridiagonal T.
fn tridiag_expm_e1(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<Complex64> {
    let (evals, evecs) = tridiag_eigen(alpha, beta);
    let m = alpha.len();
    let mut out = vec![Complex64::ZERO; m];
    for k in 0..m {
        let phase = Complex64::from_polar(1.0, -tau * evals[k]);
        let weight = evecs[(0, k)];
        for r in 0..m {
            out[r] += phase * weight * evecs[(r, k)];
        }
    }
    out
}

fn assemble(
    basis: &[Vec<Complex64>],
    small: &[Complex64],
    vnorm: f64,
    dim: usize,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; dim];
    for (j, b) in basis.iter().enumerate().take(small.len()) {
        axpy(&mut out, small[j] * vnorm, b);
    }
    out
}
