//! Quantum states, observable eigenbases and projective measurements,
//! plus the random ensembles and the fixed basis pairs used throughout.

use nalgebra::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, CMat, CVec, RMat};

/// Validation tolerance shared by trace, Hermiticity and orthonormality checks.
pub const STATE_TOL: f64 = 1e-10;

/// A d x d density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validate an arbitrary complex matrix as a quantum state.
    ///
    /// Eigenvalues in [-1e-12, 0] are clipped to zero (with the trace
    /// renormalized); below that the matrix is rejected as not PSD.
    pub fn new(mat: CMat) -> Result<Self> {
        validate_density(&mat)
    }

    /// Rank-1 projector onto a (normalized copy of) the given vector.
    pub fn from_pure(psi: &CVec) -> Self {
        let norm = psi.norm();
        let unit = psi.unscale(norm);
        let mat = &unit * unit.adjoint();
        Self {
            dim: psi.len(),
            mat,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mat = CMat::identity(dim, dim).scale(1.0 / dim as f64);
        Self { dim, mat }
    }

    /// Construct without validation. Callers guarantee PSD and unit trace.
    pub(crate) fn trusted(mat: CMat) -> Self {
        let dim = mat.nrows();
        Self { dim, mat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        linalg::real_trace_product(&self.mat, &self.mat)
    }

    /// Convex mixture p * I/d + (1-p) * rho.
    pub fn mix_with_maximally_mixed(&self, p: f64) -> Self {
        let d = self.dim;
        let mat = self.mat.scale(1.0 - p) + CMat::identity(d, d).scale(p / d as f64);
        Self::trusted(mat)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.mat)
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        Self::new(json.to_matrix()?)
    }
}

/// Validate Hermiticity, unit trace and positivity of a candidate state.
pub fn validate_density(m: &CMat) -> Result<DensityMatrix> {
    let d = m.nrows();
    if d != m.ncols() {
        return Err(Error::DimensionMismatch(d, m.ncols()));
    }
    let herm = linalg::hermiticity_residual(m);
    if herm > STATE_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let tr = sym.trace().re;
    if (tr - 1.0).abs() > STATE_TOL {
        return Err(Error::NotUnitTrace(tr));
    }
    let eig = linalg::eig_hermitian(&sym)?;
    let min = eig.eigenvalues[0];
    if min < -linalg::PSD_CLIP {
        return Err(Error::NotPsd(min));
    }
    if min < 0.0 {
        // clip the numerically negative tail and renormalize the trace drift
        let clipped = eig.apply(|lam| C64::new(lam.max(0.0), 0.0));
        let tr = clipped.trace().re;
        return Ok(DensityMatrix::trusted(clipped.unscale(tr)));
    }
    Ok(DensityMatrix::trusted(sym))
}

/// An orthonormal eigenbasis of a nondegenerate observable. The optional
/// eigenvalue labels exist for display only: every uncertainty quantity in
/// this crate is a function of the outcome distribution alone, never of the
/// eigenvalues.
#[derive(Debug, Clone)]
pub struct ObservableBasis {
    dim: usize,
    vectors: CMat,
    labels: Option<Vec<f64>>,
}

impl ObservableBasis {
    /// Validate that the columns form an orthonormal basis.
    pub fn new(vectors: CMat) -> Result<Self> {
        let d = vectors.nrows();
        if d != vectors.ncols() {
            return Err(Error::DimensionMismatch(d, vectors.ncols()));
        }
        let gram = vectors.adjoint() * &vectors;
        let resid = linalg::max_abs(&(gram - CMat::identity(d, d)));
        if resid > STATE_TOL {
            return Err(Error::NotHermitian(resid));
        }
        Ok(Self {
            dim: d,
            vectors,
            labels: None,
        })
    }

    pub fn with_labels(vectors: CMat, labels: Vec<f64>) -> Result<Self> {
        if labels.len() != vectors.nrows() {
            return Err(Error::DimensionMismatch(labels.len(), vectors.nrows()));
        }
        let mut basis = Self::new(vectors)?;
        basis.labels = Some(labels);
        Ok(basis)
    }

    /// The computational basis |0>, ..., |d-1>.
    pub fn computational(dim: usize) -> Self {
        Self {
            dim,
            vectors: CMat::identity(dim, dim),
            labels: None,
        }
    }

    /// Basis whose columns are the columns of a real orthogonal matrix.
    pub fn from_real_orthogonal(r: &RMat) -> Result<Self> {
        let vectors = CMat::from_fn(r.nrows(), r.ncols(), |i, j| C64::new(r[(i, j)], 0.0));
        Self::new(vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Matrix whose columns are the basis vectors.
    pub fn vectors(&self) -> &CMat {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> CVec {
        CVec::from_column_slice(self.vectors.column(i).as_slice())
    }

    /// Display-only eigenvalue labels.
    pub fn labels(&self) -> Option<&[f64]> {
        self.labels.as_deref()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.vectors)
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        Self::new(json.to_matrix()?)
    }
}

/// A complete family of orthogonal projectors, possibly degenerate.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    dim: usize,
    projectors: Vec<CMat>,
}

impl ProjectiveMeasurement {
    /// Validate idempotency, mutual orthogonality and completeness, all
    /// within 1e-10 entrywise.
    pub fn new(projectors: Vec<CMat>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidMeasurement("no projectors".into()));
        }
        let d = projectors[0].nrows();
        let mut sum = CMat::zeros(d, d);
        for (i, p) in projectors.iter().enumerate() {
            if p.nrows() != d || p.ncols() != d {
                return Err(Error::DimensionMismatch(p.nrows(), d));
            }
            let herm = linalg::hermiticity_residual(p);
            if herm > STATE_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} not Hermitian (residual {herm:.3e})"
                )));
            }
            let idem = linalg::max_abs(&(p * p - p));
            if idem > STATE_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} not idempotent (residual {idem:.3e})"
                )));
            }
            let rank = p.trace().re;
            if rank < 0.5 {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} has rank {rank:.3}"
                )));
            }
            for (j, q) in projectors.iter().enumerate().take(i) {
                let cross = linalg::max_abs(&(p * q));
                if cross > STATE_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {j} and {i} overlap (residual {cross:.3e})"
                    )));
                }
            }
            sum += p;
        }
        let complete = linalg::max_abs(&(sum - CMat::identity(d, d)));
        if complete > STATE_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "projectors do not sum to identity (residual {complete:.3e})"
            )));
        }
        Ok(Self {
            dim: d,
            projectors,
        })
    }

    /// The rank-1 measurement associated with a nondegenerate basis.
    pub fn from_basis(basis: &ObservableBasis) -> Self {
        let projectors = (0..basis.dim())
            .map(|i| {
                let v = basis.vector(i);
                &v * v.adjoint()
            })
            .collect();
        Self {
            dim: basis.dim(),
            projectors,
        }
    }

    /// Coarse-grain a basis into projectors onto groups of basis vectors.
    pub fn from_basis_groups(basis: &ObservableBasis, groups: &[Vec<usize>]) -> Result<Self> {
        let d = basis.dim();
        let mut seen = vec![false; d];
        let mut projectors = Vec::with_capacity(groups.len());
        for group in groups {
            let mut p = CMat::zeros(d, d);
            for &i in group {
                if i >= d || seen[i] {
                    return Err(Error::InvalidMeasurement(format!(
                        "bad basis index {i} in grouping"
                    )));
                }
                seen[i] = true;
                let v = basis.vector(i);
                p += &v * v.adjoint();
            }
            projectors.push(p);
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidMeasurement(
                "grouping does not cover the basis".into(),
            ));
        }
        Self::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[CMat] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }
}

/// Bloch-ball parametrization of a qubit state: radius and spherical angles.
#[derive(Debug, Clone, Copy)]
pub struct BlochState {
    pub r: f64,
    pub alpha: f64,
    pub phi: f64,
}

impl BlochState {
    pub fn new(r: f64, alpha: f64, phi: f64) -> Self {
        Self { r, alpha, phi }
    }
}

/// rho = (I + r . sigma)/2 with r = r (sin a cos phi, sin a sin phi, cos a).
pub fn bloch_to_density(s: &BlochState) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&s.r) {
        return Err(Error::RadiusOutOfRange(s.r));
    }
    let (x, y, z) = (
        s.r * s.alpha.sin() * s.phi.cos(),
        s.r * s.alpha.sin() * s.phi.sin(),
        s.r * s.alpha.cos(),
    );
    let mat = CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5 * (1.0 + z), 0.0),
            C64::new(0.5 * x, -0.5 * y),
            C64::new(0.5 * x, 0.5 * y),
            C64::new(0.5 * (1.0 - z), 0.0),
        ],
    );
    Ok(DensityMatrix::trusted(mat))
}

/// Qubit state with the given Cartesian Bloch vector (|v| <= 1).
pub fn qubit_from_bloch_vector(v: [f64; 3]) -> Result<DensityMatrix> {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if r > 1.0 + 1e-12 {
        return Err(Error::RadiusOutOfRange(r));
    }
    let mat = CMat::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5 * (1.0 + v[2]), 0.0),
            C64::new(0.5 * v[0], -0.5 * v[1]),
            C64::new(0.5 * v[0], 0.5 * v[1]),
            C64::new(0.5 * (1.0 - v[2]), 0.0),
        ],
    );
    Ok(DensityMatrix::trusted(mat))
}

/// A pair of qubit observables a.sigma and b.sigma with a = (0,0,1) and
/// b = (sin gamma, 0, cos gamma); the Bloch angle gamma fixes the basis
/// overlap c_AB = cos(gamma/2).
#[derive(Debug, Clone, Copy)]
pub struct QubitObservablePair {
    gamma: f64,
}

impl QubitObservablePair {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&gamma) {
            return Err(Error::OutOfRange(format!(
                "gamma = {gamma} outside [0, pi/2]"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Maximal eigenbasis overlap cos(gamma/2).
    pub fn overlap(&self) -> f64 {
        (self.gamma / 2.0).cos()
    }

    /// Eigenbasis of Z, labelled (+1, -1).
    pub fn basis_a(&self) -> ObservableBasis {
        ObservableBasis::with_labels(CMat::identity(2, 2), vec![1.0, -1.0])
            .expect("identity basis")
    }

    /// Eigenbasis of b.sigma, labelled (+1, -1).
    pub fn basis_b(&self) -> ObservableBasis {
        let h = self.gamma / 2.0;
        let vectors = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(h.cos(), 0.0),
                C64::new(-h.sin(), 0.0),
                C64::new(h.sin(), 0.0),
                C64::new(h.cos(), 0.0),
            ],
        );
        ObservableBasis::with_labels(vectors, vec![1.0, -1.0]).expect("rotation basis")
    }
}

/// Complex standard normal vector, normalized: Haar-distributed pure state
/// direction.
pub fn haar_vector(dim: usize, rng: &mut impl Rng) -> CVec {
    loop {
        let v = CVec::from_fn(dim, |_, _| {
            C64::new(sample_std_normal(rng), sample_std_normal(rng))
        });
        let n = v.norm();
        if n > 1e-6 {
            return v.unscale(n);
        }
    }
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// the R diagonal absorbed into Q.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        C64::new(sample_std_normal(rng), sample_std_normal(rng))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Hilbert-Schmidt-distributed mixed state G G^dag / Tr(G G^dag).
pub fn ginibre_state(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = CMat::from_fn(dim, dim, |_, _| {
        C64::new(sample_std_normal(rng), sample_std_normal(rng))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::trusted(m.unscale(tr))
}

/// Real-Ginibre analogue of [`ginibre_state`]; useful for exploring the
/// real-symmetric corner of state space.
pub fn ginibre_state_real(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = RMat::from_fn(dim, dim, |_, _| sample_std_normal(rng));
    let m = &g * g.transpose();
    let tr = m.trace();
    let mat = CMat::from_fn(dim, dim, |i, j| C64::new(m[(i, j)] / tr, 0.0));
    DensityMatrix::trusted(mat)
}

/// Haar-random pure state, deterministic in the seed.
pub fn sample_pure(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DensityMatrix::from_pure(&haar_vector(dim, &mut rng))
}

/// Hilbert-Schmidt-random mixed state, deterministic in the seed.
pub fn sample_mixed(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ginibre_state(dim, &mut rng)
}

fn sample_std_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; two uniforms per normal keeps the stream layout obvious.
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// The fixed skew generator with +1 above the diagonal and -1 below.
pub fn skew_generator(dim: usize) -> RMat {
    RMat::from_fn(dim, dim, |i, j| {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => 1.0,
            Greater => -1.0,
            Equal => 0.0,
        }
    })
}

/// Rotation angles linking the two reference bases in d = 3, 4, 5.
pub fn counterexample_angle(dim: usize) -> Result<f64> {
    use std::f64::consts::PI;
    match dim {
        3 => Ok(4.0 * PI / 7.0),
        4 => Ok(PI / 2.0),
        5 => Ok(PI),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// The reference basis pairs in d = 3, 4, 5: the computational basis and its
/// image under exp(theta_d S_d) with S_d the all-ones skew generator.
pub fn counterexample_bases(dim: usize) -> Result<(ObservableBasis, ObservableBasis)> {
    let theta = counterexample_angle(dim)?;
    let rot = linalg::expm_skew(&skew_generator(dim), theta)?;
    let a = ObservableBasis::computational(dim);
    let b = ObservableBasis::from_real_orthogonal(&rot)?;
    Ok((a, b))
}

/// Discrete-Fourier basis vectors as the columns of a d x d unitary.
pub fn fourier_basis_matrix(dim: usize) -> CMat {
    let scale = 1.0 / (dim as f64).sqrt();
    CMat::from_fn(dim, dim, |i, j| {
        let phase = 2.0 * std::f64::consts::PI * (i * j) as f64 / dim as f64;
        C64::new(phase.cos() * scale, phase.sin() * scale)
    })
}

/// Extend the d = 3 reference pair to dimension d >= 6: the 3-dimensional
/// block keeps the rotated pair, the orthogonal complement carries a mutually
/// unbiased pair (computational vs discrete Fourier), and the d = 3 reference
/// state is embedded by zero padding.
pub fn embed_counterexample(
    dim: usize,
) -> Result<(ObservableBasis, ObservableBasis, DensityMatrix)> {
    if dim < 6 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let rot3 = linalg::expm_skew(&skew_generator(3), counterexample_angle(3)?)?;
    let rest = dim - 3;
    let fourier = fourier_basis_matrix(rest);

    let mut b = CMat::zeros(dim, dim);
    for i in 0..3 {
        for j in 0..3 {
            b[(i, j)] = C64::new(rot3[(i, j)], 0.0);
        }
    }
    for i in 0..rest {
        for j in 0..rest {
            b[(3 + i, 3 + j)] = fourier[(i, j)];
        }
    }

    let small = crate::counterexample::hardcoded_state(3)?;
    let mut padded = CMat::zeros(dim, dim);
    for i in 0..3 {
        for j in 0..3 {
            padded[(i, j)] = small.matrix()[(i, j)];
        }
    }

    Ok((
        ObservableBasis::computational(dim),
        ObservableBasis::new(b)?,
        DensityMatrix::trusted(padded),
    ))
}

/// Qutrit basis pair: the computational basis and its image under the real
/// rotation about the (1,1,1) axis by the given angle.
pub fn qutrit_rotation_pair(alpha: f64) -> Result<(ObservableBasis, ObservableBasis)> {
    let n = 1.0 / 3.0f64.sqrt();
    let k = RMat::from_row_slice(3, 3, &[0.0, -n, n, n, 0.0, -n, -n, n, 0.0]);
    let outer = RMat::from_element(3, 3, n * n);
    let rot = RMat::identity(3, 3).scale(alpha.cos())
        + k.scale(alpha.sin())
        + outer.scale(1.0 - alpha.cos());
    Ok((
        ObservableBasis::computational(3),
        ObservableBasis::from_real_orthogonal(&rot)?,
    ))
}

/// Row-major JSON form of a complex matrix: `{dim, re: [[..]], im: [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let d = m.nrows();
        let re = (0..d)
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..d)
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
            .collect();
        Self { dim: d, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let d = self.dim;
        if self.re.len() != d || self.im.len() != d {
            return Err(Error::DimensionMismatch(self.re.len(), d));
        }
        for row in self.re.iter().chain(self.im.iter()) {
            if row.len() != d {
                return Err(Error::DimensionMismatch(row.len(), d));
            }
        }
        Ok(CMat::from_fn(d, d, |i, j| {
            Complex::new(self.re[i][j], self.im[i][j])
        }))
    }
}
