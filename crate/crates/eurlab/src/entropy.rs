//! Scalar entropy functionals: Shannon, binary, von Neumann, and the quantum
//! relative entropy. Everything is in nats.

use crate::error::{Error, Result};
use crate::linalg;
use crate::states::DensityMatrix;

/// Probabilities below this are treated as exact zeros before any logarithm.
pub const PROB_CLIP: f64 = 1e-12;

/// A probability vector over measurement outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    /// Validate normalization (within 1e-10) and non-negativity; entries in
    /// [-1e-12, 0] are clipped to zero.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            if *p < 0.0 {
                if *p < -PROB_CLIP {
                    return Err(Error::InvalidDistribution(format!(
                        "negative probability {p:.3e}"
                    )));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// -sum p ln p with the 0 ln 0 = 0 convention.
pub fn shannon(dist: &OutcomeDistribution) -> f64 {
    shannon_of(dist.probs())
}

pub(crate) fn shannon_of(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > PROB_CLIP)
        .map(|&p| -p * p.ln())
        .sum()
}

/// H2(p) = -p ln p - (1-p) ln(1-p).
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} outside [0, 1]")));
    }
    Ok(shannon_of(&[p, 1.0 - p]))
}

/// S(rho) = -Tr rho ln rho, the Shannon entropy of the spectrum.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    let eig = linalg::eig_hermitian(rho.matrix()).expect("density matrices are Hermitian");
    shannon_of(&eig.eigenvalues)
}

/// S(rho || sigma) = Tr rho (ln rho - ln sigma), evaluated on the supports.
///
/// Returns +infinity when the support of rho leaks outside the support of
/// sigma (eigenvalue threshold 1e-12).
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let er = linalg::eig_hermitian(rho.matrix()).expect("valid state");
    let es = linalg::eig_hermitian(sigma.matrix()).expect("valid state");
    let d = rho.dim();

    // overlaps |<v_i|w_j>|^2 between the two eigenbases
    let cross = er.eigenvectors.adjoint() * &es.eigenvectors;

    let mut value: f64 = er
        .eigenvalues
        .iter()
        .filter(|&&r| r > PROB_CLIP)
        .map(|&r| r * r.ln())
        .sum();

    for j in 0..d {
        let s = es.eigenvalues[j];
        let mass: f64 = (0..d)
            .filter(|&i| er.eigenvalues[i] > PROB_CLIP)
            .map(|i| er.eigenvalues[i] * cross[(i, j)].norm_sqr())
            .sum();
        if s > PROB_CLIP {
            value -= mass * s.ln();
        } else if mass > 1e-10 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(value)
}
