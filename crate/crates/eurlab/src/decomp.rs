//! The quantum/classical split of measurement uncertainty.
//!
//! For a nondegenerate observable O and a state rho the total uncertainty
//! H_O(rho) (Shannon entropy of the outcome distribution) decomposes
//! additively as
//!
//! ```text
//! H_O(rho) = Q(O, rho) + C(O, rho)
//! ```
//!
//! with Q(O, rho) = S(rho || D_O(rho)) = S(D_O(rho)) - S(rho) the relative
//! entropy to the dephased state and C(O, rho) = S(rho) the von Neumann
//! entropy. Q is a coherence measure with respect to the eigenbasis of O;
//! C is observable-independent because sharp measurements expose only the
//! classical mixedness of the state. Degenerate projective measurements get
//! the generalized split with C_Pi(rho) = S(rho) - sum_i p_i S(rho_i), the
//! QC-mutual information.

use crate::entropy::{self, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::linalg::{self, C64, CMat};
use crate::states::{DensityMatrix, ObservableBasis, ProjectiveMeasurement};

/// One measurement context on one state: total, quantum and classical parts.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct UncertaintySplit {
    pub total: f64,
    pub quantum: f64,
    pub classical: f64,
}

/// Outcome probabilities together with the normalized post-measurement
/// states; branches with p_i <= 1e-12 carry no state.
#[derive(Debug, Clone)]
pub struct MeasurementBranches {
    pub probs: Vec<f64>,
    pub post_states: Vec<Option<DensityMatrix>>,
}

fn zero_floor(x: f64) -> f64 {
    if x < 0.0 && x > -1e-10 {
        0.0
    } else {
        x
    }
}

/// p_i = <o_i| rho |o_i>.
pub fn outcome_distribution(
    basis: &ObservableBasis,
    rho: &DensityMatrix,
) -> Result<OutcomeDistribution> {
    if basis.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(basis.dim(), rho.dim()));
    }
    let d = basis.dim();
    let m = rho.matrix();
    let v = basis.vectors();
    let mut probs = Vec::with_capacity(d);
    for k in 0..d {
        let mut p = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                p += v[(i, k)].conj() * m[(i, j)] * v[(j, k)];
            }
        }
        probs.push(p.re);
    }
    OutcomeDistribution::new(probs)
}

/// D_O(rho): kill every off-diagonal element in the eigenbasis of O.
pub fn dephase(basis: &ObservableBasis, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let probs = outcome_distribution(basis, rho)?;
    let d = basis.dim();
    let v = basis.vectors();
    let mut out = CMat::zeros(d, d);
    for (k, &p) in probs.probs().iter().enumerate() {
        let col = v.column(k);
        out += (col * col.adjoint()).scale(p);
    }
    Ok(DensityMatrix::trusted(out))
}

/// D_Pi(rho) = sum_i Pi_i rho Pi_i, the unselective measurement map.
pub fn dephase_projective(
    m: &ProjectiveMeasurement,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(m.dim(), rho.dim()));
    }
    let mut out = CMat::zeros(m.dim(), m.dim());
    for p in m.projectors() {
        out += p * rho.matrix() * p;
    }
    Ok(DensityMatrix::trusted(out))
}

/// Outcome probabilities and normalized post-measurement branches
/// rho_i = Pi_i rho Pi_i / p_i.
pub fn measure(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<MeasurementBranches> {
    if m.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(m.dim(), rho.dim()));
    }
    let mut probs = Vec::with_capacity(m.outcomes());
    let mut post_states = Vec::with_capacity(m.outcomes());
    for p in m.projectors() {
        let branch = p * rho.matrix() * p;
        let weight = branch.trace().re.max(0.0);
        probs.push(weight);
        if weight > 1e-12 {
            post_states.push(Some(DensityMatrix::trusted(branch.unscale(weight))));
        } else {
            post_states.push(None);
        }
    }
    Ok(MeasurementBranches { probs, post_states })
}

/// Q(O, rho) = S(D_O(rho)) - S(rho).
///
/// The dephased state is diagonal in the eigenbasis of O, so its entropy is
/// just the Shannon entropy of the outcome distribution; the relative-entropy
/// form S(rho || D_O(rho)) is kept in the tests as an independent route.
pub fn quantum_uncertainty(basis: &ObservableBasis, rho: &DensityMatrix) -> Result<f64> {
    let h = entropy::shannon(&outcome_distribution(basis, rho)?);
    Ok(zero_floor(h - entropy::von_neumann(rho)))
}

/// C(O, rho) = S(rho), independent of the observable.
pub fn classical_uncertainty(rho: &DensityMatrix) -> f64 {
    entropy::von_neumann(rho)
}

/// The additive split (H, Q, C) for a nondegenerate observable.
pub fn split(basis: &ObservableBasis, rho: &DensityMatrix) -> Result<UncertaintySplit> {
    let total = entropy::shannon(&outcome_distribution(basis, rho)?);
    let classical = entropy::von_neumann(rho);
    let quantum = zero_floor(total - classical);
    Ok(UncertaintySplit {
        total,
        quantum,
        classical,
    })
}

/// The split for a general (possibly degenerate) projective measurement:
/// Q_Pi = S(D_Pi(rho)) - S(rho), C_Pi = S(rho) - sum_i p_i S(rho_i),
/// H_Pi = Shannon of the outcome probabilities.
pub fn degenerate_split(
    m: &ProjectiveMeasurement,
    rho: &DensityMatrix,
) -> Result<UncertaintySplit> {
    let branches = measure(m, rho)?;
    let total = entropy::shannon(&OutcomeDistribution::new(branches.probs.clone()).map_err(
        |e| Error::InvalidMeasurement(format!("branch probabilities invalid: {e}")),
    )?);
    let s_rho = entropy::von_neumann(rho);

    let dephased = dephase_projective(m, rho)?;
    let quantum = zero_floor(entropy::von_neumann(&dephased) - s_rho);

    let branch_entropy: f64 = branches
        .probs
        .iter()
        .zip(&branches.post_states)
        .filter_map(|(&p, state)| state.as_ref().map(|s| p * entropy::von_neumann(s)))
        .sum();
    let classical = zero_floor(s_rho - branch_entropy);

    Ok(UncertaintySplit {
        total,
        quantum,
        classical,
    })
}

/// True iff every projector of `coarse` is a sum of projectors of `fine`.
pub fn measurement_refines(
    fine: &ProjectiveMeasurement,
    coarse: &ProjectiveMeasurement,
) -> Result<bool> {
    if fine.dim() != coarse.dim() {
        return Err(Error::DimensionMismatch(fine.dim(), coarse.dim()));
    }
    let tol = 1e-10;
    let mut assigned = vec![false; fine.outcomes()];
    for big in coarse.projectors() {
        let mut sum = CMat::zeros(coarse.dim(), coarse.dim());
        for (k, small) in fine.projectors().iter().enumerate() {
            let rank = small.trace().re;
            let inside = linalg::real_trace_product(big, small);
            if (inside - rank).abs() <= tol {
                if assigned[k] {
                    return Ok(false);
                }
                assigned[k] = true;
                sum += small;
            } else if inside.abs() > tol {
                // partial overlap: not a refinement
                return Ok(false);
            }
        }
        if linalg::max_abs(&(sum - big)) > tol {
            return Ok(false);
        }
    }
    Ok(assigned.into_iter().all(|a| a))
}
