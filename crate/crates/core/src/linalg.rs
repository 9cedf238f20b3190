//! Small dense complex kernels: Gram matrix, mat-vec and a cyclic Jacobi
//! eigensolver for Hermitian matrices.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal stopping threshold relative to ‖A‖_F.
pub const JACOBI_REL_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Tᴴ·T
pub fn gram(t: &Array2<Complex64>) -> Array2<Complex64> {
    let n = t.ncols();
    let mut g = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let s: Complex64 = t.column(i).iter().zip(t.column(j).iter()).map(|(a, b)| a.conj() * b).sum();
            g[[i, j]] = s;
            g[[j, i]] = s.conj();
        }
        g[[i, i]].im = 0.0;
    }
    g
}

pub fn matvec(a: &Array2<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    a.rows().into_iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨x, y⟩ = xᴴ·y
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn frobenius(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(a: &Array2<Complex64>) -> f64 {
    let mut s = 0.0;
    for ((i, j), z) in a.indexed_iter() {
        if i != j {
            s += z.norm_sqr();
        }
    }
    s.sqrt()
}

/// Parameters of the unitary plane rotation that annihilates a Hermitian
/// off-diagonal pair with diagonal (alpha, beta) and coupling gamma.
///
/// The rotation maps column p to c·e_p − s·ē·e_q and column q to
/// s·e_p + c·ē·e_q, where e = γ/|γ|.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub c: f64,
    pub s: f64,
    /// conj(γ/|γ|)
    pub phase: Complex64,
}

impl Rotation {
    pub(crate) fn annihilating(alpha: f64, beta: f64, gamma: Complex64) -> Rotation {
        let g = gamma.norm();
        let zeta = (beta - alpha) / (2.0 * g);
        let t = if zeta >= 0.0 {
            1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
        } else {
            -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        Rotation { c, s: t * c, phase: (gamma / g).conj() }
    }

    /// (x, y) → (c·x − s·ē·y, s·x + c·ē·y)
    #[inline]
    pub(crate) fn apply(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let y = self.phase * y;
        (self.c * x - self.s * y, self.s * x + self.c * y)
    }

    /// Same as `apply` with the conjugate phase, for left multiplication by Jᴴ.
    #[inline]
    fn apply_adjoint(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let y = self.phase.conj() * y;
        (self.c * x - self.s * y, self.s * x + self.c * y)
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Unsorted eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: Array2<Complex64>,
    pub sweeps: usize,
}

/// Cyclic Jacobi on a Hermitian matrix. Stops once the off-diagonal norm is
/// at most `rel_tol`·‖A‖_F.
pub fn hermitian_jacobi(a: &Array2<Complex64>, rel_tol: f64, max_sweeps: usize) -> Result<HermitianEigen> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.ncols() });
    }
    let mut a = a.clone();
    let mut v = Array2::<Complex64>::eye(n);
    let threshold = rel_tol * frobenius(&a);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&a);
        if off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let gamma = a[[p, q]];
                if gamma.norm() == 0.0 {
                    continue;
                }
                let rot = Rotation::annihilating(a[[p, p]].re, a[[q, q]].re, gamma);
                for k in 0..n {
                    let (x, y) = rot.apply(a[[k, p]], a[[k, q]]);
                    a[[k, p]] = x;
                    a[[k, q]] = y;
                }
                for k in 0..n {
                    let (x, y) = rot.apply_adjoint(a[[p, k]], a[[q, k]]);
                    a[[p, k]] = x;
                    a[[q, k]] = y;
                }
                a[[p, q]] = Complex64::new(0.0, 0.0);
                a[[q, p]] = Complex64::new(0.0, 0.0);
                a[[p, p]].im = 0.0;
                a[[q, q]].im = 0.0;
                for k in 0..n {
                    let (x, y) = rot.apply(v[[k, p]], v[[k, q]]);
                    v[[k, p]] = x;
                    v[[k, q]] = y;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[[i, i]].re).collect();
    Ok(HermitianEigen { values, vectors: v, sweeps })
}
