//! Lower bounds on total and quantum uncertainty sums for a pair of
//! observables: the Maassen-Uffink relation, its purity-refined forms, the
//! dephasing-based right-hand sides they weaken, and the qubit-only strong
//! purity-based bound.

use crate::decomp;
use crate::entropy::{self, PROB_CLIP};
use crate::error::{Error, Result};
use crate::states::{DensityMatrix, ObservableBasis, QubitObservablePair};

/// Which inequality a [`BoundReport`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// H_A + H_B >= -2 ln c_AB
    MaassenUffink,
    /// Q_A + Q_B >= ln d - S for mutually unbiased pairs
    MubPurity,
    /// Q_A + Q_B >= -2 ln c_AB - S
    OverlapPurity,
    /// Q_A + Q_B >= -2 ln c_AB (1 - S/ln 2), d = 2 only
    QubitSpb,
    /// the weakest linear candidate -2 ln c_AB (1 - S/ln d)
    WeakestLinear,
    /// Q_A + Q_B >= -S - Tr[rho ln D_B(D_A(rho))]
    DephasingRhsAb,
    /// Q_A + Q_B >= -S - Tr[rho ln D_A(D_B(rho))]
    DephasingRhsBa,
    /// H_A + H_B >= -2 ln c_AB + S
    ImprovedEur,
}

/// Result of evaluating one bound on one state: left-hand side, right-hand
/// side and their difference. The slack is reported, never asserted here.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl BoundReport {
    pub fn new(kind: BoundKind, lhs: f64, rhs: f64) -> Self {
        Self {
            kind,
            lhs,
            rhs,
            slack: lhs - rhs,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// The matrix of overlaps c_ij = |<a_i|b_j>| together with its maximum.
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    pub dim: usize,
    pub c: nalgebra::DMatrix<f64>,
    pub c_max: f64,
}

/// Overlaps between two eigenbases. Rows index the first basis.
pub fn overlap(a: &ObservableBasis, b: &ObservableBasis) -> Result<OverlapMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let cross = a.vectors().adjoint() * b.vectors();
    let c = nalgebra::DMatrix::from_fn(a.dim(), a.dim(), |i, j| cross[(i, j)].norm());
    let c_max = c.iter().fold(0.0f64, |acc, &x| acc.max(x));
    Ok(OverlapMatrix {
        dim: a.dim(),
        c,
        c_max,
    })
}

/// H_A + H_B >= -2 ln c_AB.
pub fn maassen_uffink(
    a: &ObservableBasis,
    b: &ObservableBasis,
    rho: &DensityMatrix,
) -> Result<BoundReport> {
    let c = overlap(a, b)?;
    let h_a = entropy::shannon(&decomp::outcome_distribution(a, rho)?);
    let h_b = entropy::shannon(&decomp::outcome_distribution(b, rho)?);
    Ok(BoundReport::new(
        BoundKind::MaassenUffink,
        h_a + h_b,
        -2.0 * c.c_max.ln(),
    ))
}

/// Order of the dephasing maps in the contractivity-derived right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingOrder {
    /// rhs = -S - Tr[rho ln D_B(D_A(rho))]
    Ab,
    /// rhs = -S - Tr[rho ln D_A(D_B(rho))]
    Ba,
}

/// The tighter, state-dependent lower bound on Q_A + Q_B obtained from
/// contractivity of the relative entropy:
///
/// ```text
/// Q_A + Q_B >= -S(rho) - sum_i p_i(B) ln( sum_j |c_ji|^2 p_j(A) )
/// ```
///
/// (indices as for order AB; swap the roles of A and B for BA). When the
/// doubly dephased state fails to support rho the bound degenerates to
/// -infinity.
pub fn dephasing_rhs(
    a: &ObservableBasis,
    b: &ObservableBasis,
    rho: &DensityMatrix,
    order: DephasingOrder,
) -> Result<BoundReport> {
    let (first, second, kind) = match order {
        DephasingOrder::Ab => (a, b, BoundKind::DephasingRhsAb),
        DephasingOrder::Ba => (b, a, BoundKind::DephasingRhsBa),
    };
    let c = overlap(first, second)?;
    let s = entropy::von_neumann(rho);
    let q_sum = decomp::quantum_uncertainty(a, rho)? + decomp::quantum_uncertainty(b, rho)?;

    let p_first = decomp::outcome_distribution(first, rho)?;
    let p_second = decomp::outcome_distribution(second, rho)?;

    let mut rhs = -s;
    for (j, &pj) in p_second.probs().iter().enumerate() {
        // weight of the doubly dephased state on |second_j>
        let w: f64 = p_first
            .probs()
            .iter()
            .enumerate()
            .map(|(i, &pi)| c.c[(i, j)].powi(2) * pi)
            .sum();
        if pj > PROB_CLIP {
            if w > PROB_CLIP {
                rhs -= pj * w.ln();
            } else {
                rhs = f64::NEG_INFINITY;
                break;
            }
        }
    }
    Ok(BoundReport::new(kind, q_sum, rhs))
}

/// ln d - S, the purity bound for mutually unbiased pairs.
pub fn mub_purity_bound(dim: usize, s: f64) -> Result<f64> {
    let ln_d = (dim as f64).ln();
    if !(0.0..=ln_d + 1e-12).contains(&s) {
        return Err(Error::OutOfRange(format!("S = {s} outside [0, ln {dim}]")));
    }
    Ok(ln_d - s)
}

/// -2 ln c_max - S, the purity bound for arbitrary pairs. Expanded form of
/// -2 ln c [1 + S/(2 ln c)], which stays finite at c = 1.
pub fn overlap_purity_bound(c_max: f64, s: f64) -> Result<f64> {
    check_overlap_and_entropy(c_max, s)?;
    Ok(-2.0 * c_max.ln() - s)
}

/// -2 ln c_max + S, the purity-improved Maassen-Uffink right-hand side.
pub fn improved_eur_rhs(c_max: f64, s: f64) -> Result<f64> {
    check_overlap_and_entropy(c_max, s)?;
    Ok(-2.0 * c_max.ln() + s)
}

/// The weakest linear candidate -2 ln c_max (1 - S/ln d): any linear bound
/// that implies Maassen-Uffink and vanishes at S = ln d dominates this one,
/// so a single violation of it rules out every linear strong purity-based
/// bound in that dimension.
pub fn weakest_linear_spb(c_max: f64, s: f64, dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    check_overlap_and_entropy(c_max, s)?;
    let ln_d = (dim as f64).ln();
    if s > ln_d + 1e-12 {
        return Err(Error::OutOfRange(format!("S = {s} exceeds ln {dim}")));
    }
    Ok(-2.0 * c_max.ln() * (1.0 - s / ln_d))
}

fn check_overlap_and_entropy(c_max: f64, s: f64) -> Result<()> {
    if !(c_max > 0.0 && c_max <= 1.0 + 1e-12) {
        return Err(Error::OutOfRange(format!("c_max = {c_max} outside (0, 1]")));
    }
    if s < -1e-12 {
        return Err(Error::OutOfRange(format!("S = {s} negative")));
    }
    Ok(())
}

/// The qubit strong purity-based bound
/// Q_A + Q_B >= -2 ln cos(gamma/2) [1 - S/ln 2] for the standard pair at
/// Bloch angle gamma.
pub fn qubit_spb(gamma: f64, rho: &DensityMatrix) -> Result<BoundReport> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    let pair = QubitObservablePair::new(gamma)?;
    let q_sum = decomp::quantum_uncertainty(&pair.basis_a(), rho)?
        + decomp::quantum_uncertainty(&pair.basis_b(), rho)?;
    let s = entropy::von_neumann(rho);
    let rhs = weakest_linear_spb(pair.overlap(), s.min(std::f64::consts::LN_2), 2)?;
    Ok(BoundReport::new(BoundKind::QubitSpb, q_sum, rhs))
}

/// Right-hand side of the strengthened total-uncertainty form of the qubit
/// bound: H_A + H_B >= -2 ln c + 2S [1 + ln c / ln 2].
pub fn strengthened_mu_rhs(c_max: f64, s: f64) -> Result<f64> {
    check_overlap_and_entropy(c_max, s)?;
    let lc = c_max.ln();
    Ok(-2.0 * lc + 2.0 * s * (1.0 + lc / std::f64::consts::LN_2))
}

/// The qubit bound gap as an explicit function of the Bloch parametrization:
///
/// ```text
/// F(alpha, phi, gamma, r) = H2((1 + r cos alpha)/2) + H2((1 + r cos beta)/2)
///     + 2 ln cos(gamma/2) - 2 H2((1+r)/2) (1 + ln cos(gamma/2) / ln 2)
/// ```
///
/// with cos beta = cos phi sin alpha sin gamma + cos alpha cos gamma. The
/// bound holds iff F >= 0 everywhere.
pub fn qubit_f(alpha: f64, phi: f64, gamma: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange(format!("r = {r} outside [0, 1]")));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&gamma) {
        return Err(Error::OutOfRange(format!(
            "gamma = {gamma} outside [0, pi/2]"
        )));
    }
    let cos_beta = phi.cos() * alpha.sin() * gamma.sin() + alpha.cos() * gamma.cos();
    let lc = (gamma / 2.0).cos().ln();
    let h_a = entropy::binary_entropy(0.5 * (1.0 + r * alpha.cos()))?;
    let h_b = entropy::binary_entropy(0.5 * (1.0 + r * cos_beta))?;
    let s = entropy::binary_entropy(0.5 * (1.0 + r))?;
    Ok(h_a + h_b + 2.0 * lc - 2.0 * s * (1.0 + lc / std::f64::consts::LN_2))
}
