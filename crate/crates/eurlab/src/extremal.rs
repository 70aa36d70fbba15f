//! Extremal states of the quantum uncertainty sum: pure minimal-uncertainty
//! states and their bifurcation, fixed-purity minimizers, the maximal
//! uncertainty family built on a doubly unbiased pure state, and the one-way
//! discord identity on pure bipartite states.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomp;
use crate::entropy;
use crate::error::{Error, Result};
use crate::linalg::{self, C64, CMat, CVec};
use crate::optim::{self, NelderMeadOptions};
use crate::states::{DensityMatrix, ObservableBasis, ProjectiveMeasurement};

/// One point of a fixed-purity minimal-uncertainty curve.
#[derive(Debug, Clone)]
pub struct MusCurvePoint {
    pub target_s: f64,
    pub achieved_s: f64,
    pub q_sum: f64,
    pub state: DensityMatrix,
    pub converged: bool,
}

/// Minimizers of H_A + H_B over pure states for the standard qubit pair at
/// Bloch angle gamma: one vector below the bifurcation angle, two above.
#[derive(Debug, Clone)]
pub struct PureMusResult {
    pub gamma: f64,
    /// Angular displacement of the minimizers from the bisector gamma/2.
    pub beta: f64,
    pub bloch_vectors: Vec<[f64; 3]>,
}

fn total_h_in_plane(theta: f64, gamma: f64) -> f64 {
    let pa = 0.5 * (1.0 + theta.cos());
    let pb = 0.5 * (1.0 + (theta - gamma).cos());
    entropy::binary_entropy(pa).expect("probability in range")
        + entropy::binary_entropy(pb).expect("probability in range")
}

/// Minimize H_A + H_B over pure states in the a-b plane for the standard
/// qubit pair. The landscape is symmetric about the bisector theta = gamma/2;
/// the bisector flips from minimum to maximum at the bifurcation angle, which
/// is detected through the curvature there.
pub fn pure_mus(gamma: f64) -> Result<PureMusResult> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&gamma) || gamma <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "gamma = {gamma} outside (0, pi/2]"
        )));
    }
    let mid = gamma / 2.0;
    let h = 1e-5;
    let curvature = (total_h_in_plane(mid + h, gamma) - 2.0 * total_h_in_plane(mid, gamma)
        + total_h_in_plane(mid - h, gamma))
        / (h * h);

    let bloch = |theta: f64| [theta.sin(), 0.0, theta.cos()];

    if curvature >= 0.0 {
        let (theta, _) = optim::golden_section(
            |t| total_h_in_plane(t, gamma),
            mid - std::f64::consts::FRAC_PI_4,
            mid + std::f64::consts::FRAC_PI_4,
            1e-10,
        );
        Ok(PureMusResult {
            gamma,
            beta: 0.0,
            bloch_vectors: vec![bloch(theta)],
        })
    } else {
        let (theta, _) = optim::golden_section(
            |t| total_h_in_plane(t, gamma),
            mid - std::f64::consts::FRAC_PI_2,
            mid,
            1e-10,
        );
        let beta = mid - theta;
        Ok(PureMusResult {
            gamma,
            beta,
            bloch_vectors: vec![bloch(mid - beta), bloch(mid + beta)],
        })
    }
}

/// Bisection on the minimizer count of [`pure_mus`]: the Bloch angle where
/// the single in-plane minimum splits in two.
pub fn bifurcation_angle() -> f64 {
    optim::bisect_predicate(
        |gamma| pure_mus(gamma).map(|r| r.bloch_vectors.len() == 1).unwrap_or(true),
        1.0,
        1.4,
        50,
    )
}

fn bloch_axis_of(basis: &ObservableBasis) -> Result<[f64; 3]> {
    if basis.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: basis.dim(),
        });
    }
    let v = basis.vector(0);
    let cross = v[0].conj() * v[1];
    Ok([
        2.0 * cross.re,
        2.0 * cross.im,
        v[0].norm_sqr() - v[1].norm_sqr(),
    ])
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Minimize Q_A + Q_B over states with S(rho) equal to `target_s`.
///
/// Qubits use the in-plane structure: the radius follows from the entropy
/// constraint by bisection and the direction from a dense scan plus
/// golden-section refinement. Higher dimensions search the full state space
/// with a spectrum + unitary parametrization (the spectrum pinned to the
/// entropy constraint by bisection inside the objective) under multistart
/// Nelder-Mead, floored by the mixing-line candidate.
pub fn mus_fixed_purity(
    a: &ObservableBasis,
    b: &ObservableBasis,
    target_s: f64,
    seed: u64,
) -> Result<MusCurvePoint> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let ln_d = (d as f64).ln();
    if !(0.0..=ln_d + 1e-12).contains(&target_s) {
        return Err(Error::OutOfRange(format!(
            "target S = {target_s} outside [0, ln {d}]"
        )));
    }

    if d == 2 {
        return qubit_mus_fixed_purity(a, b, target_s);
    }

    // pure minimizer feeding the mixing-line floor
    let psi = pure_state_minimizing_total(a, b, seed)?;
    let floor = mixing_line(a, b, &psi, target_s)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    let n_spec = d - 1;
    let n_unitary = d * d;
    let dims = n_spec + n_unitary;

    let mut best: Option<(f64, DensityMatrix, f64)> = None;
    for _ in 0..20 {
        let x0: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let objective = |x: &[f64]| match state_from_params(x, d, target_s) {
            Ok((rho, _)) => {
                let h_a = entropy::shannon(
                    &decomp::outcome_distribution(a, &rho).expect("dims match"),
                );
                let h_b = entropy::shannon(
                    &decomp::outcome_distribution(b, &rho).expect("dims match"),
                );
                h_a + h_b
            }
            Err(_) => f64::INFINITY,
        };
        let (x, _) = optim::nelder_mead(
            objective,
            &x0,
            0.4,
            NelderMeadOptions {
                max_iters: 3000,
                f_tol: 1e-12,
            },
        );
        if let Ok((rho, achieved)) = state_from_params(&x, d, target_s) {
            let q = decomp::quantum_uncertainty(a, &rho)? + decomp::quantum_uncertainty(b, &rho)?;
            if best.as_ref().is_none_or(|(bq, _, _)| q < *bq) {
                best = Some((q, rho, achieved));
            }
        }
    }

    let (q, state, achieved) = best.ok_or_else(|| {
        Error::ConvergenceFailure("no multistart produced a feasible state".into())
    })?;
    if (achieved - target_s).abs() > 1e-6 {
        return Err(Error::ConvergenceFailure(format!(
            "entropy constraint residual {:.3e}",
            (achieved - target_s).abs()
        )));
    }
    // never report worse than the mixing-line candidate
    if floor.q_sum < q {
        return Ok(floor);
    }
    Ok(MusCurvePoint {
        target_s,
        achieved_s: achieved,
        q_sum: q,
        state,
        converged: true,
    })
}

fn qubit_mus_fixed_purity(
    a: &ObservableBasis,
    b: &ObservableBasis,
    target_s: f64,
) -> Result<MusCurvePoint> {
    let n_a = bloch_axis_of(a)?;
    let n_b = bloch_axis_of(b)?;
    // in-plane frame: n_a and the component of n_b orthogonal to it
    let proj = dot3(n_b, n_a);
    let mut m = [
        n_b[0] - proj * n_a[0],
        n_b[1] - proj * n_a[1],
        n_b[2] - proj * n_a[2],
    ];
    let norm = dot3(m, m).sqrt();
    if norm < 1e-9 {
        // commuting pair: any orthogonal direction completes the frame
        m = orthogonal_to(n_a);
    } else {
        for c in m.iter_mut() {
            *c /= norm;
        }
    }

    // radius from the entropy constraint
    let r = optim::bisect_predicate(
        |r| entropy::binary_entropy(0.5 * (1.0 + r)).expect("in range") >= target_s,
        0.0,
        1.0,
        80,
    );
    let s_of_r = entropy::binary_entropy(0.5 * (1.0 + r)).expect("in range");

    let q_of_theta = |theta: f64| {
        let v = [
            r * (theta.cos() * n_a[0] + theta.sin() * m[0]),
            r * (theta.cos() * n_a[1] + theta.sin() * m[1]),
            r * (theta.cos() * n_a[2] + theta.sin() * m[2]),
        ];
        let pa = 0.5 * (1.0 + dot3(v, n_a));
        let pb = 0.5 * (1.0 + dot3(v, n_b));
        entropy::binary_entropy(pa).expect("in range")
            + entropy::binary_entropy(pb).expect("in range")
            - 2.0 * s_of_r
    };

    // dense scan, then golden refinement around every grid-local minimum
    let grid = 1440usize;
    let step = 2.0 * std::f64::consts::PI / grid as f64;
    let values: Vec<f64> = (0..grid).map(|k| q_of_theta(k as f64 * step)).collect();
    let mut best_theta = 0.0;
    let mut best_q = f64::INFINITY;
    for k in 0..grid {
        let prev = values[(k + grid - 1) % grid];
        let next = values[(k + 1) % grid];
        if values[k] <= prev && values[k] <= next {
            let center = k as f64 * step;
            let (theta, q) = optim::golden_section(
                q_of_theta,
                center - step,
                center + step,
                1e-12,
            );
            if q < best_q {
                best_q = q;
                best_theta = theta;
            }
        }
    }

    // antipodal Bloch vectors give identical entropies; report the
    // representative on the bisector side of the two axes
    let theta_bisector = norm.atan2(1.0 + proj);
    if (best_theta - theta_bisector).cos() < 0.0 {
        best_theta += std::f64::consts::PI;
    }

    let v = [
        r * (best_theta.cos() * n_a[0] + best_theta.sin() * m[0]),
        r * (best_theta.cos() * n_a[1] + best_theta.sin() * m[1]),
        r * (best_theta.cos() * n_a[2] + best_theta.sin() * m[2]),
    ];
    Ok(MusCurvePoint {
        target_s,
        achieved_s: s_of_r,
        q_sum: best_q.max(0.0),
        state: crate::states::qubit_from_bloch_vector(v).expect("radius in range"),
        converged: (s_of_r - target_s).abs() <= 1e-6,
    })
}

fn orthogonal_to(n: [f64; 3]) -> [f64; 3] {
    let trial = if n[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let proj = dot3(trial, n);
    let mut m = [
        trial[0] - proj * n[0],
        trial[1] - proj * n[1],
        trial[2] - proj * n[2],
    ];
    let norm = dot3(m, m).sqrt();
    for c in m.iter_mut() {
        *c /= norm;
    }
    m
}

/// Spectrum with prescribed entropy plus unitary conjugation, both read off
/// an unconstrained parameter vector. Returns the state and its achieved
/// spectral entropy.
fn state_from_params(x: &[f64], d: usize, target_s: f64) -> Result<(DensityMatrix, f64)> {
    let n_spec = d - 1;
    let q = softmax_with_anchor(&x[..n_spec]);
    let lambda = spectrum_with_entropy(&q, target_s);
    let achieved = entropy::shannon_of(&lambda);
    let h = hermitian_from_params(&x[n_spec..], d);
    let u = linalg::unitary_from_hermitian(&h)?;
    let mut diag = CMat::zeros(d, d);
    for (k, &l) in lambda.iter().enumerate() {
        diag[(k, k)] = C64::new(l, 0.0);
    }
    let mat = &u * diag * u.adjoint();
    Ok((DensityMatrix::trusted(mat), achieved))
}

fn softmax_with_anchor(z: &[f64]) -> Vec<f64> {
    let mut logits: Vec<f64> = z.to_vec();
    logits.push(0.0);
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Move along a straight line in the simplex (toward the uniform point or
/// toward the dominant vertex) until the Shannon entropy hits the target.
/// Entropy is concave along either segment, so a predicate bisection finds
/// the crossing.
fn spectrum_with_entropy(q: &[f64], target_s: f64) -> Vec<f64> {
    let d = q.len();
    let hq = entropy::shannon_of(q);
    let mix = |p: f64, towards: &dyn Fn(usize) -> f64| -> Vec<f64> {
        (0..d)
            .map(|i| (1.0 - p) * q[i] + p * towards(i))
            .collect()
    };
    if (hq - target_s).abs() <= 1e-13 {
        return q.to_vec();
    }
    if hq < target_s {
        let uniform = 1.0 / d as f64;
        let p = optim::bisect_predicate(
            |p| entropy::shannon_of(&mix(p, &|_| uniform)) < target_s,
            0.0,
            1.0,
            90,
        );
        mix(p, &|_| uniform)
    } else {
        let peak = (0..d)
            .max_by(|&i, &j| q[i].total_cmp(&q[j]))
            .expect("nonempty");
        let vertex = move |i: usize| if i == peak { 1.0 } else { 0.0 };
        let p = optim::bisect_predicate(
            |p| entropy::shannon_of(&mix(p, &vertex)) >= target_s,
            0.0,
            1.0,
            90,
        );
        mix(p, &vertex)
    }
}

fn hermitian_from_params(w: &[f64], d: usize) -> CMat {
    let mut h = CMat::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = C64::new(w[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in (i + 1)..d {
            let re = w[k];
            let im = w[k + 1];
            k += 2;
            h[(i, j)] = C64::new(re, im);
            h[(j, i)] = C64::new(re, -im);
        }
    }
    h
}

/// Reference curve: mix the pure minimal-uncertainty state with the
/// maximally mixed state until the entropy matches, then evaluate the
/// quantum uncertainty sum there. No optimization involved.
pub fn mixing_line(
    a: &ObservableBasis,
    b: &ObservableBasis,
    pure_mus_state: &DensityMatrix,
    target_s: f64,
) -> Result<MusCurvePoint> {
    if a.dim() != b.dim() || a.dim() != pure_mus_state.dim() {
        return Err(Error::DimensionMismatch(a.dim(), pure_mus_state.dim()));
    }
    let d = a.dim() as f64;
    let ln_d = d.ln();
    if !(0.0..=ln_d + 1e-12).contains(&target_s) {
        return Err(Error::OutOfRange(format!(
            "target S = {target_s} outside [0, ln {d}]"
        )));
    }
    // spectrum of p I/d + (1-p) psi is {p/d + 1 - p, p/d, ..., p/d}
    let entropy_at = |p: f64| {
        let main = p / d + 1.0 - p;
        let rest = p / d;
        let mut probs = vec![rest; a.dim()];
        probs[0] = main;
        entropy::shannon_of(&probs)
    };
    let p = optim::bisect_predicate(|p| entropy_at(p) <= target_s, 0.0, 1.0, 90);
    let state = pure_mus_state.mix_with_maximally_mixed(p);
    let achieved = entropy::von_neumann(&state);
    if (achieved - target_s).abs() > 1e-6 {
        return Err(Error::ConvergenceFailure(format!(
            "mixing-line entropy residual {:.3e}",
            (achieved - target_s).abs()
        )));
    }
    let q_sum =
        decomp::quantum_uncertainty(a, &state)? + decomp::quantum_uncertainty(b, &state)?;
    Ok(MusCurvePoint {
        target_s,
        achieved_s: achieved,
        q_sum,
        state,
        converged: true,
    })
}

/// Minimize H_A + H_B over pure states by multistart Nelder-Mead on the
/// real parametrization of the state vector.
pub fn pure_state_minimizing_total(
    a: &ObservableBasis,
    b: &ObservableBasis,
    seed: u64,
) -> Result<DensityMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut best: Option<(f64, DensityMatrix)> = None;
    for _ in 0..20 {
        let x0: Vec<f64> = (0..2 * d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let objective = |x: &[f64]| {
            let psi = vector_from_params(x, d);
            let rho = DensityMatrix::from_pure(&psi);
            let h_a =
                entropy::shannon(&decomp::outcome_distribution(a, &rho).expect("dims match"));
            let h_b =
                entropy::shannon(&decomp::outcome_distribution(b, &rho).expect("dims match"));
            h_a + h_b
        };
        let (x, v) = optim::nelder_mead(
            objective,
            &x0,
            0.5,
            NelderMeadOptions {
                max_iters: 3000,
                f_tol: 1e-13,
            },
        );
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, DensityMatrix::from_pure(&vector_from_params(&x, d))));
        }
    }
    best.map(|(_, s)| s)
        .ok_or_else(|| Error::ConvergenceFailure("no multistart converged".into()))
}

fn vector_from_params(x: &[f64], d: usize) -> CVec {
    let mut v = CVec::from_fn(d, |i, _| C64::new(x[2 * i], x[2 * i + 1]));
    let n = v.norm();
    if n < 1e-12 {
        v[0] = C64::new(1.0, 0.0);
        return v;
    }
    v.unscale(n)
}

/// Member of the maximal-uncertainty family p I/d + (1-p) |psi*><psi*| with
/// psi* unbiased in both eigenbases; every member keeps both outcome
/// distributions exactly uniform, so H_A + H_B stays at 2 ln d.
pub fn max_uncertainty_family(
    a: &ObservableBasis,
    b: &ObservableBasis,
    p: f64,
    seed: u64,
) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let psi = find_unbiased(a, b, seed).map_err(|e| {
        Error::UnbiasedStateUnavailable(format!("unbiased-state search failed: {e}"))
    })?;
    Ok(psi.mix_with_maximally_mixed(p))
}

/// Find a pure state unbiased in both eigenbases by projected gradient
/// descent (with backtracking) on the squared deviation of both outcome
/// distributions from uniform. Such a state exists for every basis pair;
/// failure indicates insufficient search effort, so the search multistarts.
pub fn find_unbiased(a: &ObservableBasis, b: &ObservableBasis, seed: u64) -> Result<DensityMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let uniform = 1.0 / d as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0bad_5eed);

    let residual_and_grad = |psi: &CVec| -> (f64, CVec) {
        let mut grad = CVec::zeros(d);
        let mut residual = 0.0;
        for basis in [a, b] {
            let v = basis.vectors();
            for k in 0..d {
                let mut amp = C64::new(0.0, 0.0);
                for i in 0..d {
                    amp += v[(i, k)].conj() * psi[i];
                }
                let p = amp.norm_sqr();
                let dev = p - uniform;
                residual += dev * dev;
                for i in 0..d {
                    grad[i] += v[(i, k)] * amp * C64::new(2.0 * dev, 0.0);
                }
            }
        }
        (residual, grad)
    };

    for _ in 0..50 {
        let mut psi = crate::states::haar_vector(d, &mut rng);
        let mut eta = 0.5;
        let (mut res, mut grad) = residual_and_grad(&psi);
        for _ in 0..6000 {
            if res <= 1e-24 {
                break;
            }
            // project out the radial component, step, retract to the sphere
            let radial = psi.dotc(&grad);
            let tangent = &grad - &psi * radial;
            let mut accepted = false;
            for _ in 0..40 {
                let trial_raw = &psi - &tangent * C64::new(eta, 0.0);
                let norm = trial_raw.norm();
                if norm < 1e-12 {
                    eta *= 0.5;
                    continue;
                }
                let trial = trial_raw.unscale(norm);
                let (trial_res, trial_grad) = residual_and_grad(&trial);
                if trial_res < res {
                    psi = trial;
                    res = trial_res;
                    grad = trial_grad;
                    eta = (eta * 1.3).min(4.0);
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if res <= 1e-12 {
            return Ok(DensityMatrix::from_pure(&psi));
        }
    }
    Err(Error::ConvergenceFailure(
        "unbiased-state residual stayed above 1e-12 after 50 starts".into(),
    ))
}

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of a state on a d1 x d2 tensor product.
pub fn partial_trace(
    rho: &DensityMatrix,
    d1: usize,
    d2: usize,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    if d1 * d2 != rho.dim() {
        return Err(Error::DimensionMismatch(d1 * d2, rho.dim()));
    }
    let m = rho.matrix();
    let reduced = match keep {
        Subsystem::First => CMat::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Subsystem::Second => CMat::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| m[(k * d2 + i, k * d2 + j)]).sum()
        }),
    };
    Ok(DensityMatrix::trusted(reduced))
}

/// One-way discord of a pure bipartite state: the minimum over local
/// eigenbases on the first factor of the quantum uncertainty of the
/// corresponding degenerate measurement. On pure states this equals the
/// entanglement entropy S(Tr_2 psi).
pub fn one_way_discord(psi12: &DensityMatrix, d1: usize, d2: usize, seed: u64) -> Result<f64> {
    let d = d1 * d2;
    if d != psi12.dim() {
        return Err(Error::DimensionMismatch(d, psi12.dim()));
    }
    if d > 9 {
        return Err(Error::UnsupportedDimension(d));
    }
    if (psi12.purity() - 1.0).abs() > 1e-8 {
        return Err(Error::OutOfRange(format!(
            "state purity {:.6} is not pure",
            psi12.purity()
        )));
    }

    let q_of_local_basis = |u: &CMat| -> f64 {
        let mut projectors = Vec::with_capacity(d1);
        for k in 0..d1 {
            let col = u.column(k);
            let local = col * col.adjoint();
            let mut lifted = CMat::zeros(d, d);
            for i in 0..d1 {
                for j in 0..d1 {
                    for m in 0..d2 {
                        lifted[(i * d2 + m, j * d2 + m)] = local[(i, j)];
                    }
                }
            }
            projectors.push(lifted);
        }
        let measurement = ProjectiveMeasurement::new(projectors).expect("lifted basis");
        decomp::degenerate_split(&measurement, psi12)
            .expect("dims match")
            .quantum
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd15c_0c0d);
    let params = d1 * d1;
    let mut best = f64::INFINITY;
    for start in 0..12 {
        let x0: Vec<f64> = if start == 0 {
            vec![0.0; params]
        } else {
            (0..params).map(|_| rng.gen_range(-1.5..1.5)).collect()
        };
        let objective = |x: &[f64]| {
            let h = hermitian_from_params(x, d1);
            match linalg::unitary_from_hermitian(&h) {
                Ok(u) => q_of_local_basis(&u),
                Err(_) => f64::INFINITY,
            }
        };
        let (_, v) = optim::nelder_mead(
            objective,
            &x0,
            0.4,
            NelderMeadOptions {
                max_iters: 2000,
                f_tol: 1e-12,
            },
        );
        best = best.min(v);
    }
    if !best.is_finite() {
        return Err(Error::ConvergenceFailure(
            "local-basis search produced no finite value".into(),
        ));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{haar_vector, QubitObservablePair};

    const PI: f64 = std::f64::consts::PI;
    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn pure_mus_below_bifurcation_sits_on_the_bisector() {
        let res = pure_mus(PI / 3.0).unwrap();
        assert_eq!(res.bloch_vectors.len(), 1);
        let expected = [(PI / 6.0).sin(), 0.0, (PI / 6.0).cos()];
        for (got, want) in res.bloch_vectors[0].iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-6);
        }
    }

    #[test]
    fn pure_mus_at_right_angle_reaches_the_eigenstates() {
        let res = pure_mus(PI / 2.0).unwrap();
        assert_eq!(res.bloch_vectors.len(), 2);
        assert!((res.beta - PI / 4.0).abs() < 1e-5);
        // displaced by beta = gamma/2: the a and b axes themselves
        let thetas: Vec<f64> = res
            .bloch_vectors
            .iter()
            .map(|v| v[0].atan2(v[2]))
            .collect();
        assert!(thetas.iter().any(|t| t.abs() < 1e-5));
        assert!(thetas.iter().any(|t| (t - PI / 2.0).abs() < 1e-5));
    }

    #[test]
    fn bifurcation_angle_matches_reference() {
        let gc = bifurcation_angle();
        assert!(
            (gc - 1.17056).abs() < 1e-3,
            "bifurcation angle {gc:.6} drifted from 1.17056"
        );
    }

    #[test]
    fn mixing_line_endpoints() {
        let pair = QubitObservablePair::new(PI / 3.0).unwrap();
        let (a, b) = (pair.basis_a(), pair.basis_b());
        let psi = crate::states::qubit_from_bloch_vector(
            pure_mus(PI / 3.0).unwrap().bloch_vectors[0],
        )
        .unwrap();
        let bottom = mixing_line(&a, &b, &psi, 0.0).unwrap();
        assert!(linalg::max_abs(&(bottom.state.matrix() - psi.matrix())) < 1e-9);
        let top = mixing_line(&a, &b, &psi, LN2).unwrap();
        assert!(
            linalg::max_abs(&(top.state.matrix() - DensityMatrix::maximally_mixed(2).matrix())) < 1e-9
        );
        assert!(top.q_sum.abs() < 1e-9);
    }

    #[test]
    fn qubit_mus_matches_mixing_line_below_bifurcation() {
        let gamma = PI / 3.0; // 60 degrees
        let pair = QubitObservablePair::new(gamma).unwrap();
        let (a, b) = (pair.basis_a(), pair.basis_b());
        let psi =
            crate::states::qubit_from_bloch_vector(pure_mus(gamma).unwrap().bloch_vectors[0])
                .unwrap();
        for target in [0.0, 0.1, 0.3, 0.5, LN2 * 0.95, LN2] {
            let opt = mus_fixed_purity(&a, &b, target, 3).unwrap();
            let line = mixing_line(&a, &b, &psi, target).unwrap();
            assert!(
                (opt.q_sum - line.q_sum).abs() <= 1e-5,
                "S={target:.3}: opt {:.8} vs line {:.8}",
                opt.q_sum,
                line.q_sum
            );
            assert!(opt.q_sum <= line.q_sum + 1e-6);
            assert!(opt.converged);
            // below the bifurcation the optimum direction stays on the bisector
            if target < LN2 * 0.99 {
                let m = opt.state.matrix();
                let theta = (2.0 * m[(0, 1)].re).atan2(m[(0, 0)].re - m[(1, 1)].re);
                assert!(
                    (theta - gamma / 2.0).abs() < 1e-4,
                    "S={target:.3}: theta {theta:.6} vs {:.6}",
                    gamma / 2.0
                );
            }
        }
    }

    #[test]
    fn mus_curve_monotone_with_pinned_endpoints() {
        let gamma = 75.0 * PI / 180.0;
        let pair = QubitObservablePair::new(gamma).unwrap();
        let (a, b) = (pair.basis_a(), pair.basis_b());
        let pure = pure_mus(gamma).unwrap();
        let pure_value = {
            let rho = crate::states::qubit_from_bloch_vector(pure.bloch_vectors[0]).unwrap();
            decomp::quantum_uncertainty(&a, &rho).unwrap()
                + decomp::quantum_uncertainty(&b, &rho).unwrap()
        };
        let mut previous = f64::INFINITY;
        for k in 0..=20 {
            let target = LN2 * k as f64 / 20.0;
            let point = mus_fixed_purity(&a, &b, target, 9).unwrap();
            assert!(
                point.q_sum <= previous + 1e-6,
                "q_sum not monotone at S={target:.3}"
            );
            previous = point.q_sum;
            if k == 0 {
                assert!((point.q_sum - pure_value).abs() < 1e-8);
            }
            if k == 20 {
                assert!(point.q_sum.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn qubit_mus_beats_mixing_line_above_bifurcation() {
        let gamma = 75.0 * PI / 180.0;
        let pair = QubitObservablePair::new(gamma).unwrap();
        let (a, b) = (pair.basis_a(), pair.basis_b());
        let psi =
            crate::states::qubit_from_bloch_vector(pure_mus(gamma).unwrap().bloch_vectors[0])
                .unwrap();
        let target = 0.3;
        let opt = mus_fixed_purity(&a, &b, target, 3).unwrap();
        let line = mixing_line(&a, &b, &psi, target).unwrap();
        assert!(
            opt.q_sum < line.q_sum - 1e-4,
            "expected separation: opt {:.8} vs line {:.8}",
            opt.q_sum,
            line.q_sum
        );
    }

    #[test]
    fn qutrit_mus_beats_mixing_line_at_large_rotation() {
        let (a, b) = crate::states::qutrit_rotation_pair(PI / 3.0).unwrap();
        let psi = pure_state_minimizing_total(&a, &b, 7).unwrap();
        let ln3 = 3.0f64.ln();
        let mut separated = false;
        for k in [0usize, 3, 5, 7, 10] {
            let target = ln3 * k as f64 / 10.0;
            let opt = mus_fixed_purity(&a, &b, target, 7).unwrap();
            let line = mixing_line(&a, &b, &psi, target).unwrap();
            assert!(opt.converged);
            assert!(
                opt.q_sum <= line.q_sum + 1e-6,
                "S={target:.3}: optimizer above mixing line"
            );
            if line.q_sum - opt.q_sum > 1e-3 {
                separated = true;
            }
        }
        assert!(separated, "expected the qutrit curves to separate");
    }

    #[test]
    fn mus_at_maximum_entropy_is_maximally_mixed() {
        let pair = QubitObservablePair::new(PI / 2.0).unwrap();
        let point = mus_fixed_purity(&pair.basis_a(), &pair.basis_b(), LN2, 1).unwrap();
        assert!(point.q_sum.abs() < 1e-9);
        assert!(
            linalg::max_abs(&(point.state.matrix() - DensityMatrix::maximally_mixed(2).matrix())) < 1e-6
        );
    }

    #[test]
    fn mub_curve_reproduces_the_purity_line() {
        let pair = QubitObservablePair::new(PI / 2.0).unwrap();
        let (a, b) = (pair.basis_a(), pair.basis_b());
        for k in 0..=10 {
            let target = LN2 * k as f64 / 10.0;
            let point = mus_fixed_purity(&a, &b, target, 7).unwrap();
            let expected = LN2 - target;
            assert!(
                (point.q_sum - expected).abs() < 1e-5,
                "S={target:.4}: q={:.8} expected {expected:.8}",
                point.q_sum
            );
        }
    }

    #[test]
    fn find_unbiased_qubit_mub_lands_on_y_axis() {
        let pair = QubitObservablePair::new(PI / 2.0).unwrap();
        let psi = find_unbiased(&pair.basis_a(), &pair.basis_b(), 5).unwrap();
        // unbiased to both Z and the rotated basis: the +-y axis states
        let y = 2.0 * psi.matrix()[(1, 0)].im.abs();
        assert!((y - 1.0).abs() < 1e-5, "|<sigma_y>| = {y:.6}");
    }

    #[test]
    fn find_unbiased_commuting_pair_lands_on_equator() {
        let a = ObservableBasis::computational(2);
        let psi = find_unbiased(&a, &a, 5).unwrap();
        let z = psi.matrix()[(0, 0)].re - psi.matrix()[(1, 1)].re;
        assert!(z.abs() < 1e-5);
    }

    #[test]
    fn find_unbiased_on_reference_qutrit_pair() {
        let (a, b) = crate::states::counterexample_bases(3).unwrap();
        let psi = find_unbiased(&a, &b, 11).unwrap();
        for basis in [&a, &b] {
            let p = decomp::outcome_distribution(basis, &psi).unwrap();
            for &prob in p.probs() {
                assert!((prob - 1.0 / 3.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn max_uncertainty_family_keeps_distributions_uniform() {
        let (a, b) = crate::states::counterexample_bases(3).unwrap();
        for k in 0..=4 {
            let p = k as f64 / 4.0;
            let rho = max_uncertainty_family(&a, &b, p, 11).unwrap();
            for basis in [&a, &b] {
                let probs = decomp::outcome_distribution(basis, &rho).unwrap();
                for &prob in probs.probs() {
                    assert!((prob - 1.0 / 3.0).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let psi = DensityMatrix::from_pure(&haar_vector(6, &mut rng));
        for keep in [Subsystem::First, Subsystem::Second] {
            let red = partial_trace(&psi, 2, 3, keep).unwrap();
            assert!((red.matrix().trace().re - 1.0).abs() < 1e-12);
            let eig = linalg::eig_hermitian(red.matrix()).unwrap();
            assert!(eig.eigenvalues[0] > -1e-12);
        }
    }

    #[test]
    fn discord_of_product_state_vanishes() {
        let mut v = CVec::zeros(4);
        v[0] = C64::new(1.0, 0.0);
        let psi = DensityMatrix::from_pure(&v);
        let q = one_way_discord(&psi, 2, 2, 1).unwrap();
        assert!(q.abs() < 1e-8, "discord of |00> = {q:.3e}");
    }

    #[test]
    fn discord_of_bell_state_is_ln_two() {
        let mut v = CVec::zeros(4);
        v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = DensityMatrix::from_pure(&v);
        let q = one_way_discord(&psi, 2, 2, 1).unwrap();
        assert!((q - LN2).abs() < 1e-6, "discord of Bell state = {q:.8}");
    }

    #[test]
    fn discord_matches_entanglement_entropy_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let psi = DensityMatrix::from_pure(&haar_vector(4, &mut rng));
            let q = one_way_discord(&psi, 2, 2, 3).unwrap();
            let e = entropy::von_neumann(&partial_trace(&psi, 2, 2, Subsystem::Second).unwrap());
            assert!((q - e).abs() < 1e-5, "discord {q:.8} vs entropy {e:.8}");
        }
    }
}
