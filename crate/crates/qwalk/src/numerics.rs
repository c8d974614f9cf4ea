//! Dense complex linear-algebra kernel: Hermitian eigendecomposition and the
//! entropy functionals used by every other module.
//!
//! Matrices are `ndarray::Array2<Complex64>` in row-major order. The
//! eigensolver is LAPACK's Hermitian driver behind a deterministic
//! post-processing step: eigenvalues sorted descending and each eigenvector
//! rephased so its first nonzero component is real and positive, which makes
//! results reproducible bit-for-bit for identical input.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::{Error, Result};

/// Max entrywise deviation tolerated by the Hermitian-input contract.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Eigenvalues of a PSD matrix in `[-PSD_CLAMP, 0)` are treated as roundoff
/// and clamped to zero before taking logs.
pub const PSD_CLAMP: f64 = 1e-9;
/// Spectrum weights below this threshold contribute zero entropy.
pub const ENTROPY_CLAMP: f64 = 1e-12;
/// Trace deviation beyond this is a contract violation for density matrices.
pub const TRACE_TOL: f64 = 1e-6;

pub type CMat = Array2<Complex64>;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted descending; `eigenvectors` holds the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: CMat,
}

/// Max entrywise deviation from `M = M^dag`.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > defect {
                defect = d;
            }
        }
    }
    defect
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

fn check_square_hermitian(m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Eigendecompose a Hermitian matrix.
///
/// Returns eigenvalues descending with orthonormal eigenvectors, rephased so
/// the first component of each eigenvector with magnitude above 1e-12 is real
/// and positive.
pub fn hermitian_eigendecompose(m: &CMat) -> Result<Spectrum> {
    check_square_hermitian(m)?;
    // Pin the memory layout: the LAPACK driver sees the row-major buffer as
    // its transpose conj(M), so its eigenvector columns come back conjugated.
    let mc = m.as_standard_layout().into_owned();
    let (vals, vecs) = mc
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver { detail: e.to_string() })?;
    let n = vals.len();
    // LAPACK returns ascending order; reverse to descending.
    let mut eigenvalues = Array1::zeros(n);
    let mut eigenvectors = CMat::zeros((n, n));
    for out in 0..n {
        let src = n - 1 - out;
        eigenvalues[out] = vals[src];
        let col = vecs.column(src);
        let phase = col
            .iter()
            .find(|z| z.norm() > 1e-12)
            .map(|z| z / z.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        for i in 0..n {
            eigenvectors[(i, out)] = col[i].conj() * phase;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (descending), for PSD checks where vectors are not needed.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Array1<f64>> {
    check_square_hermitian(m)?;
    let mc = m.as_standard_layout().into_owned();
    let (vals, _) = mc
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver { detail: e.to_string() })?;
    Ok(Array1::from_iter(vals.iter().rev().copied()))
}

/// Von Neumann entropy of a density matrix, in bits.
///
/// `-sum_i lambda_i log2 lambda_i`, with eigenvalues in `[-1e-9, 0)` clamped
/// to zero and weights below 1e-12 contributing nothing.
pub fn von_neumann_entropy(rho: &CMat) -> Result<f64> {
    check_square_hermitian(rho)?;
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidTrace { trace: tr.re });
    }
    let vals = hermitian_eigenvalues(rho)?;
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(entropy_of_weights(vals.iter().copied()))
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &v in p {
        if v < -1e-12 {
            return Err(Error::InvalidProbabilities {
                detail: format!("negative entry {v:.3e}"),
            });
        }
        sum += v;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilities {
            detail: format!("sum is {sum:.12}, expected 1"),
        });
    }
    Ok(entropy_of_weights(p.iter().copied()))
}

fn entropy_of_weights(weights: impl Iterator<Item = f64>) -> f64 {
    let mut h = 0.0;
    for w in weights {
        if w > ENTROPY_CLAMP {
            h -= w * w.log2();
        }
    }
    // A weight one ulp above 1 would otherwise leave -eps behind.
    h.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMat {
        let mut m = CMat::zeros((n, n));
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    fn random_density(n: usize, rng: &mut ChaCha8Rng) -> CMat {
        // A^dag A normalized to trace one is PSD with trace 1.
        let mut a = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let g = a.t().mapv(|z| z.conj()).dot(&a);
        let tr = trace(&g);
        g.mapv(|z| z / tr.re)
    }

    #[test]
    fn identity_eigenvalues() {
        let m = CMat::eye(2);
        let s = hermitian_eigendecompose(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_z_eigenvalues() {
        let m = array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        let s = hermitian_eigendecompose(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn hadamard_eigenvalues() {
        // Characteristic polynomial of H is lambda^2 - 1, so eigenvalues are +-1.
        let r = 1.0 / 2.0f64.sqrt();
        let m = array![[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]];
        let s = hermitian_eigendecompose(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let m = CMat::zeros((2, 3));
        assert!(matches!(
            hermitian_eigendecompose(&m),
            Err(Error::NotSquare { .. })
        ));
        let m = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.5, 0.0), c(0.0, 0.0)]];
        assert!(matches!(
            hermitian_eigendecompose(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn reconstruction_residual_random_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[2usize, 3, 8, 64, 512] {
            let m = random_hermitian(n, &mut rng);
            let s = hermitian_eigendecompose(&m).unwrap();
            // ||M V - V Lambda||_max
            let mv = m.dot(&s.eigenvectors);
            let mut resid = 0.0f64;
            for j in 0..n {
                for i in 0..n {
                    let d = (mv[(i, j)] - s.eigenvectors[(i, j)] * s.eigenvalues[j]).norm();
                    resid = resid.max(d);
                }
            }
            assert!(resid <= 1e-9, "n={n}: residual {resid:.3e}");
            // Orthonormality of the eigenvector columns.
            let gram = s.eigenvectors.t().mapv(|z| z.conj()).dot(&s.eigenvectors);
            let mut ortho = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((gram[(i, j)] - c(want, 0.0)).norm());
                }
            }
            assert!(ortho <= 1e-10, "n={n}: orthonormality {ortho:.3e}");
        }
    }

    #[test]
    fn deterministic_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_hermitian(17, &mut rng);
        let a = hermitian_eigendecompose(&m).unwrap();
        let b = hermitian_eigendecompose(&m).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn entropy_pure_and_mixed() {
        // |+><+| is pure.
        let m = array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        assert!(von_neumann_entropy(&m).unwrap().abs() < 1e-12);
        // Maximally mixed qubit.
        let m = array![[c(0.5, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!((von_neumann_entropy(&m).unwrap() - 1.0).abs() < 1e-12);
        // diag(1/4, 3/4): direct evaluation of -sum lambda log2 lambda.
        let m = array![[c(0.25, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.75, 0.0)]];
        assert!((von_neumann_entropy(&m).unwrap() - 0.8112781244591329).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_trace() {
        let m = array![[c(0.6, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.6, 0.0)]];
        assert!(matches!(
            von_neumann_entropy(&m),
            Err(Error::InvalidTrace { .. })
        ));
    }

    #[test]
    fn shannon_cases() {
        assert!(shannon_entropy(&[0.0, 1.0, 0.0]).unwrap().abs() < 1e-15);
        assert!((shannon_entropy(&[0.25; 4]).unwrap() - 2.0).abs() < 1e-14);
        assert!((shannon_entropy(&[0.25, 0.5, 0.25]).unwrap() - 1.5).abs() < 1e-14);
        assert!(shannon_entropy(&[-0.1, 1.1]).is_err());
        assert!(shannon_entropy(&[0.4, 0.4]).is_err());
    }

    #[test]
    fn entropy_basis_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let rho = random_density(12, &mut rng);
            // Eigenvectors of a random Hermitian matrix form a random unitary.
            let u = hermitian_eigendecompose(&random_hermitian(12, &mut rng))
                .unwrap()
                .eigenvectors;
            let rotated = u.dot(&rho).dot(&u.t().mapv(|z| z.conj()));
            let s0 = von_neumann_entropy(&rho).unwrap();
            let s1 = von_neumann_entropy(&rotated).unwrap();
            assert!((s0 - s1).abs() <= 1e-9, "|{s0} - {s1}|");
        }
    }

    #[test]
    fn entropy_additive_on_tensor_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_density(3, &mut rng);
        let b = random_density(4, &mut rng);
        let mut prod = CMat::zeros((12, 12));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..4 {
                    for l in 0..4 {
                        prod[(4 * i + k, 4 * j + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        let s = von_neumann_entropy(&prod).unwrap();
        let sa = von_neumann_entropy(&a).unwrap();
        let sb = von_neumann_entropy(&b).unwrap();
        assert!((s - sa - sb).abs() <= 1e-9);
    }
}
