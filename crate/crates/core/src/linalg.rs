//! Dense symmetric eigensolver for the small normal-equation systems.
//!
//! The Gram matrices here are at most a few hundred rows, so a cyclic Jacobi
//! iteration is plenty: it is unconditionally stable on symmetric input and
//! gives the orthonormal eigenbasis needed for the pseudoinverse.

/// Eigendecomposition of a symmetric matrix in row-major order.
/// Returns `(eigenvalues, eigenvectors)` with eigenvector `i` stored in
/// column `i`: `a = V diag(lambda) V^T`.
pub(crate) fn jacobi_eigh(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[p * n + q].abs();
            }
        }
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // t = sign(theta) / (|theta| + sqrt(theta^2 + 1)): the
                // smaller-angle root, which keeps the iteration stable.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    m[i * n + p] = c * aip - s * aiq;
                    m[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = m[p * n + i];
                    let aqi = m[q * n + i];
                    m[p * n + i] = c * api - s * aqi;
                    m[q * n + i] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| m[i * n + i]).collect();
    (eig, v)
}

/// Minimum-norm solution of the (possibly singular) symmetric system
/// `a x = b` via the eigendecomposition pseudoinverse. Eigenvalues below
/// `rel_cutoff * max|lambda|` are treated as zero, which makes rank-deficient
/// least-squares problems deterministic.
pub(crate) fn psd_min_norm_solve(a: &[f64], b: &[f64], n: usize, rel_cutoff: f64) -> Vec<f64> {
    let (eig, v) = jacobi_eigh(a, n);
    let max_abs = eig.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let cutoff = rel_cutoff * max_abs;
    let mut x = vec![0.0; n];
    for (i, &lambda) in eig.iter().enumerate() {
        if lambda.abs() <= cutoff || lambda == 0.0 {
            continue;
        }
        // projection of b on eigenvector i
        let mut dot = 0.0;
        for r in 0..n {
            dot += v[r * n + i] * b[r];
        }
        let w = dot / lambda;
        for r in 0..n {
            x[r] += w * v[r * n + i];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{CounterRng, RngSeed};

    fn mat_vec(a: &[f64], x: &[f64], n: usize) -> Vec<f64> {
        (0..n)
            .map(|r| (0..n).map(|c| a[r * n + c] * x[c]).sum())
            .collect()
    }

    #[test]
    fn eigh_reconstructs_matrix() {
        let mut rng = CounterRng::new(RngSeed::new(0x11, 0));
        for n in [1usize, 2, 3, 8, 16] {
            // random symmetric PSD: B^T B
            let b: Vec<f64> = (0..n * n).map(|_| rng.next_in(-1.0, 1.0)).collect();
            let mut a = vec![0.0; n * n];
            for r in 0..n {
                for c in 0..n {
                    a[r * n + c] = (0..n).map(|k| b[k * n + r] * b[k * n + c]).sum();
                }
            }
            let (eig, v) = jacobi_eigh(&a, n);
            // V diag V^T == A
            for r in 0..n {
                for c in 0..n {
                    let recon: f64 = (0..n).map(|i| v[r * n + i] * eig[i] * v[c * n + i]).sum();
                    assert!((recon - a[r * n + c]).abs() < 1e-10);
                }
            }
            // V orthonormal
            for i in 0..n {
                for j in 0..n {
                    let dot: f64 = (0..n).map(|r| v[r * n + i] * v[r * n + j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn solve_full_rank() {
        let a = [4.0, 1.0, 1.0, 3.0];
        let b = [1.0, 2.0];
        let x = psd_min_norm_solve(&a, &b, 2, 1e-10);
        let ax = mat_vec(&a, &x, 2);
        assert!((ax[0] - b[0]).abs() < 1e-12 && (ax[1] - b[1]).abs() < 1e-12);
    }

    #[test]
    fn solve_singular_gives_min_norm() {
        // rank-1: a = u u^T with u = (1, 1); b in range
        let a = [1.0, 1.0, 1.0, 1.0];
        let b = [2.0, 2.0];
        let x = psd_min_norm_solve(&a, &b, 2, 1e-10);
        // minimum-norm solution of u u^T x = b is (1, 1)
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_solves_to_zero() {
        let a = [0.0; 9];
        let b = [1.0, 2.0, 3.0];
        let x = psd_min_norm_solve(&a, &b, 3, 1e-10);
        assert_eq!(x, vec![0.0; 3]);
    }
}
