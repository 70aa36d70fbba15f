//! Dense complex linear algebra for small dimensions (d <= ~16).
//!
//! Everything here is spectral: Hermitian eigendecomposition backed by
//! nalgebra's `SymmetricEigen`, plus the matrix functions built on top of it
//! (exponential of a skew-symmetric generator, logarithm of a positive
//! semidefinite matrix). Dimensions stay in the single digits for the
//! uncertainty computations, so the eigendecomposition route is both accurate
//! and fast enough.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = nalgebra::DVector<C64>;
pub type RMat = DMatrix<f64>;

/// Entrywise tolerance for |A - A^dag| when a Hermitian input is required.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Entrywise tolerance for |S + S^T| on skew-symmetric generators.
pub const SKEW_TOL: f64 = 1e-12;

/// Eigenvalues in [-PSD_CLIP, 0] are treated as exactly zero; anything below
/// is a genuine negativity and gets rejected.
pub const PSD_CLIP: f64 = 1e-12;

/// Hermitian eigendecomposition with eigenvalues sorted ascending and
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

impl EigDecomposition {
    /// Rebuild V diag(f(lambda)) V^dag.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMat {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for k in 0..d {
            let fk = f(self.eigenvalues[k]);
            for i in 0..d {
                scaled[(i, k)] *= fk;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }
}

/// Max entrywise modulus of a complex matrix.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Max entrywise |A - A^dag|.
pub fn hermiticity_residual(a: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let diff = a[(i, j)] - a[(j, i)].conj();
            worst = worst.max(diff.norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within [`HERMITICITY_TOL`] entrywise; it is
/// symmetrized before factoring so the decomposition is exact for the
/// (A + A^dag)/2 part.
pub fn eig_hermitian(a: &CMat) -> Result<EigDecomposition> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(a.nrows(), a.ncols()));
    }
    let resid = hermiticity_residual(a);
    if resid > HERMITICITY_TOL {
        return Err(Error::NotHermitian(resid));
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();

    let d = a.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMat::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(k));
    }
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// exp(theta * S) for a real skew-symmetric generator S.
///
/// iS is Hermitian, so the exponential is evaluated spectrally; the result is
/// a real orthogonal matrix with determinant +1.
pub fn expm_skew(s: &RMat, theta: f64) -> Result<RMat> {
    let d = s.nrows();
    if d != s.ncols() {
        return Err(Error::DimensionMismatch(d, s.ncols()));
    }
    let mut resid = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            resid = resid.max((s[(i, j)] + s[(j, i)]).abs());
        }
    }
    if resid > SKEW_TOL {
        return Err(Error::NotSkew(resid));
    }

    // h = iS is Hermitian; exp(theta S) = exp(-i theta h).
    let h = CMat::from_fn(d, d, |i, j| C64::new(0.0, s[(i, j)]));
    let eig = eig_hermitian(&h)?;
    let rot = eig.apply(|lam| (C64::new(0.0, -theta * lam)).exp());
    Ok(RMat::from_fn(d, d, |i, j| rot[(i, j)].re))
}

/// Natural logarithm of a positive semidefinite Hermitian matrix, taken on
/// its support: zero modes contribute nothing to the output, matching the
/// 0 ln 0 = 0 convention used by every entropy in this crate.
pub fn matrix_log_psd(a: &CMat) -> Result<CMat> {
    let eig = eig_hermitian(a)?;
    if let Some(&min) = eig
        .eigenvalues
        .first()
        .filter(|&&min| min < -PSD_CLIP)
    {
        return Err(Error::NegativeEigenvalue(min));
    }
    Ok(eig.apply(|lam| {
        if lam > PSD_CLIP {
            C64::new(lam.ln(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// exp(A) for Hermitian A, evaluated spectrally.
pub fn expm_hermitian(a: &CMat) -> Result<CMat> {
    let eig = eig_hermitian(a)?;
    Ok(eig.apply(|lam| C64::new(lam.exp(), 0.0)))
}

/// exp(iH) for Hermitian H: a unitary matrix. This is the workhorse for
/// parametrizing basis searches.
pub fn unitary_from_hermitian(h: &CMat) -> Result<CMat> {
    let eig = eig_hermitian(h)?;
    Ok(eig.apply(|lam| C64::new(0.0, lam).exp()))
}

/// Re Tr(A B), the Hilbert-Schmidt pairing restricted to its real part.
pub fn real_trace_product(a: &CMat, b: &CMat) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}
