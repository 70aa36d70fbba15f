//! Implementations of the subcommands. Exit-code contract: 0 when every
//! verified claim holds, 1 when a claim fails, 2 for configuration or
//! runtime errors (mapped in main).

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use eurlab::bounds::{self, BoundKind, DephasingOrder};
use eurlab::decomp;
use eurlab::entropy;
use eurlab::extremal::{self, Subsystem};
use eurlab::states::{
    self, haar_vector, DensityMatrix, ObservableBasis, ProjectiveMeasurement,
    QubitObservablePair,
};

use crate::config::{OutputFormat, RunConfig};

pub enum CmdError {
    Config(String),
    Runtime(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Config(msg) => write!(f, "configuration error: {msg}"),
            CmdError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl From<eurlab::Error> for CmdError {
    fn from(e: eurlab::Error) -> Self {
        CmdError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Runtime(format!("io: {e}"))
    }
}

pub type CmdResult = Result<i32, CmdError>;

const SLACK_TOL: f64 = 1e-9;

fn write_output(out: &str, content: &str) -> Result<(), CmdError> {
    if out == "-" {
        std::io::stdout().write_all(content.as_bytes())?;
    } else {
        std::fs::write(out, content)?;
    }
    Ok(())
}

fn require_format(cfg: &RunConfig, expected: OutputFormat) -> Result<(), CmdError> {
    if cfg.format != expected {
        return Err(CmdError::Config(format!(
            "{} only emits {expected}",
            cfg.command
        )));
    }
    Ok(())
}

/// Resolve the basis pair from (dim, gamma, alpha, preset).
fn build_basis_pair(cfg: &RunConfig) -> Result<(ObservableBasis, ObservableBasis), CmdError> {
    if let Some(preset) = &cfg.preset {
        if preset != "counterexample" {
            return Err(CmdError::Config(format!("unknown preset `{preset}`")));
        }
        return match cfg.dim {
            3..=5 => Ok(states::counterexample_bases(cfg.dim)?),
            d if d >= 6 => {
                let (a, b, _) = states::embed_counterexample(d)?;
                Ok((a, b))
            }
            d => Err(CmdError::Config(format!(
                "counterexample preset needs dim >= 3, got {d}"
            ))),
        };
    }
    match cfg.dim {
        2 => {
            let gamma = cfg.gamma.ok_or_else(|| {
                CmdError::Config("--gamma is required for dim 2 without a preset".into())
            })?;
            let pair = QubitObservablePair::new(gamma)?;
            Ok((pair.basis_a(), pair.basis_b()))
        }
        3 => {
            let alpha = cfg.alpha.ok_or_else(|| {
                CmdError::Config("--alpha is required for dim 3 without a preset".into())
            })?;
            Ok(states::qutrit_rotation_pair(alpha)?)
        }
        d => Err(CmdError::Config(format!(
            "dim {d} needs --preset counterexample"
        ))),
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Scatter data for quantum-vs-classical uncertainty plots, with the bound
/// curves evaluated on the S-grid in companion columns.
pub fn cmd_qc_plot(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Csv)?;
    if cfg.s_grid < 2 {
        return Err(CmdError::Config("--s-grid must be at least 2".into()));
    }
    let (a, b) = build_basis_pair(cfg)?;
    let c_ab = bounds::overlap(&a, &b)?.c_max;
    let d = cfg.dim;
    let ln_d = (d as f64).ln();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut scatter = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let rho = states::ginibre_state(d, &mut rng);
        let s = entropy::von_neumann(&rho);
        let h_a = entropy::shannon(&decomp::outcome_distribution(&a, &rho)?);
        let h_b = entropy::shannon(&decomp::outcome_distribution(&b, &rho)?);
        scatter.push((2.0 * s, h_a + h_b - 2.0 * s));
    }

    let grid: Vec<f64> = (0..cfg.s_grid)
        .map(|k| ln_d * k as f64 / (cfg.s_grid - 1) as f64)
        .collect();

    let mut body = String::new();
    body.push_str("c_sum,q_sum,grid_c_sum,mu_bound,spb_bound,mub_bound\n");
    let rows = scatter.len().max(grid.len());
    for i in 0..rows {
        let (c_sum, q_sum) = scatter
            .get(i)
            .map(|&(c, q)| (Some(c), Some(q)))
            .unwrap_or((None, None));
        let (grid_c, mu, spb, mub) = match grid.get(i) {
            Some(&s) => {
                let mu = -2.0 * c_ab.ln() - 2.0 * s;
                let spb = (d == 2)
                    .then(|| -2.0 * c_ab.ln() * (1.0 - s / std::f64::consts::LN_2));
                let mub = ln_d - s;
                (Some(2.0 * s), Some(mu), spb, Some(mub))
            }
            None => (None, None, None, None),
        };
        body.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_opt(c_sum),
            fmt_opt(q_sum),
            fmt_opt(grid_c),
            fmt_opt(mu),
            fmt_opt(spb),
            fmt_opt(mub)
        ));
    }

    let meta = cfg.metadata_block(&[("c_ab", c_ab.to_string())]);
    write_output(&cfg.out, &format!("{meta}{body}"))?;
    Ok(0)
}

struct SlackTracker {
    kind: BoundKind,
    min_slack: f64,
    samples: usize,
}

impl SlackTracker {
    fn new(kind: BoundKind) -> Self {
        Self {
            kind,
            min_slack: f64::INFINITY,
            samples: 0,
        }
    }

    fn record(&mut self, slack: f64) {
        self.min_slack = self.min_slack.min(slack);
        self.samples += 1;
    }
}

/// Sweep every applicable bound over random states and report the minimum
/// slack per bound.
pub fn cmd_bounds_check(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Json)?;
    let (a, b) = build_basis_pair(cfg)?;
    let d = cfg.dim;
    let c_ab = bounds::overlap(&a, &b)?.c_max;
    let is_mub = (c_ab - 1.0 / (d as f64).sqrt()).abs() < 1e-9;
    let qubit_gamma = (d == 2 && cfg.preset.is_none()).then_some(cfg.gamma).flatten();

    let mut trackers = vec![
        SlackTracker::new(BoundKind::MaassenUffink),
        SlackTracker::new(BoundKind::ImprovedEur),
        SlackTracker::new(BoundKind::OverlapPurity),
        SlackTracker::new(BoundKind::DephasingRhsAb),
        SlackTracker::new(BoundKind::DephasingRhsBa),
    ];
    if is_mub {
        trackers.push(SlackTracker::new(BoundKind::MubPurity));
    }
    if qubit_gamma.is_some() {
        trackers.push(SlackTracker::new(BoundKind::QubitSpb));
    }

    let offset = cfg.bound_offset;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let rho = states::ginibre_state(d, &mut rng);
        let s = entropy::von_neumann(&rho);
        let h_a = entropy::shannon(&decomp::outcome_distribution(&a, &rho)?);
        let h_b = entropy::shannon(&decomp::outcome_distribution(&b, &rho)?);
        let h_sum = h_a + h_b;
        let q_sum = h_sum - 2.0 * s;

        for tracker in trackers.iter_mut() {
            let slack = match tracker.kind {
                BoundKind::MaassenUffink => h_sum - (-2.0 * c_ab.ln()),
                BoundKind::ImprovedEur => h_sum - bounds::improved_eur_rhs(c_ab, s)?,
                BoundKind::OverlapPurity => q_sum - bounds::overlap_purity_bound(c_ab, s)?,
                BoundKind::DephasingRhsAb => {
                    bounds::dephasing_rhs(&a, &b, &rho, DephasingOrder::Ab)?.slack
                }
                BoundKind::DephasingRhsBa => {
                    bounds::dephasing_rhs(&a, &b, &rho, DephasingOrder::Ba)?.slack
                }
                BoundKind::MubPurity => {
                    q_sum - bounds::mub_purity_bound(d, s.min((d as f64).ln()))?
                }
                BoundKind::QubitSpb => {
                    bounds::qubit_spb(qubit_gamma.expect("tracker only added with gamma"), &rho)?
                        .slack
                }
                BoundKind::WeakestLinear => unreachable!("not part of the sweep"),
            };
            tracker.record(slack - offset);
        }
    }

    #[derive(Serialize)]
    struct BoundResult {
        bound: BoundKind,
        samples: usize,
        min_slack: f64,
        holds: bool,
    }

    let results: Vec<BoundResult> = trackers
        .iter()
        .map(|t| BoundResult {
            bound: t.kind,
            samples: t.samples,
            min_slack: t.min_slack,
            holds: t.min_slack >= -SLACK_TOL,
        })
        .collect();
    let all_hold = results.iter().all(|r| r.holds);

    let report = json!({
        "config": cfg,
        "c_ab": c_ab,
        "results": results,
        "all_hold": all_hold,
    });
    write_output(&cfg.out, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
    Ok(if all_hold { 0 } else { 1 })
}

/// Emit the reference violation of the weakest linear purity bound.
pub fn cmd_counterexample(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Json)?;
    let case = eurlab::counterexample::verify_violation(cfg.dim)?;
    let report = json!({
        "config": cfg,
        "dim": case.dim,
        "c_max": case.c_max,
        "s_rho": case.s_rho,
        "q_sum": case.q_sum,
        "f_w": case.f_w,
        "margin": case.margin,
        "violated": case.margin > 0.0,
        "basis_a": case.basis_a.to_json(),
        "basis_b": case.basis_b.to_json(),
        "state": case.state.to_json(),
    });
    write_output(&cfg.out, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
    Ok(if case.margin > 0.0 { 0 } else { 1 })
}

/// Fixed-purity minimal-uncertainty curve against the mixing-line reference.
pub fn cmd_mus(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Csv)?;
    if cfg.s_grid < 2 {
        return Err(CmdError::Config("--s-grid must be at least 2".into()));
    }
    let (a, b) = build_basis_pair(cfg)?;
    let d = cfg.dim;
    let ln_d = (d as f64).ln();

    let pure_mus_state = if d == 2 {
        let gamma = cfg.gamma.expect("checked by build_basis_pair");
        states::qubit_from_bloch_vector(extremal::pure_mus(gamma)?.bloch_vectors[0])?
    } else {
        extremal::pure_state_minimizing_total(&a, &b, cfg.seed)?
    };

    let mut body = String::new();
    body.push_str("S,q_opt,q_mixline,theta_or_params,converged\n");
    for k in 0..cfg.s_grid {
        let target = ln_d * k as f64 / (cfg.s_grid - 1) as f64;
        let opt = extremal::mus_fixed_purity(&a, &b, target, cfg.seed);
        let line = extremal::mixing_line(&a, &b, &pure_mus_state, target);
        let (q_opt, descriptor, converged) = match &opt {
            Ok(point) => (
                Some(point.q_sum),
                state_descriptor(d, &point.state),
                point.converged,
            ),
            Err(_) => (None, String::new(), false),
        };
        let q_mix = line.as_ref().ok().map(|p| p.q_sum);
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            target,
            fmt_opt(q_opt),
            fmt_opt(q_mix),
            descriptor,
            converged
        ));
    }

    let meta = cfg.metadata_block(&[(
        "c_ab",
        bounds::overlap(&a, &b)?.c_max.to_string(),
    )]);
    write_output(&cfg.out, &format!("{meta}{body}"))?;
    Ok(0)
}

fn state_descriptor(d: usize, state: &DensityMatrix) -> String {
    if d == 2 {
        let m = state.matrix();
        let x = 2.0 * m[(0, 1)].re;
        let z = m[(0, 0)].re - m[(1, 1)].re;
        x.atan2(z).to_string()
    } else {
        let eig = eurlab::linalg::eig_hermitian(state.matrix()).expect("valid state");
        eig.eigenvalues
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// The maximal-uncertainty family p I/d + (1-p) |psi*><psi*|.
pub fn cmd_maxus(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Csv)?;
    if cfg.s_grid < 2 {
        return Err(CmdError::Config("--s-grid must be at least 2".into()));
    }
    let (a, b) = build_basis_pair(cfg)?;
    let d = cfg.dim;
    let psi = extremal::find_unbiased(&a, &b, cfg.seed)?;

    let mut body = String::new();
    body.push_str("p,S,h_sum,q_sum\n");
    let mut worst = 0.0f64;
    for k in 0..cfg.s_grid {
        let p = k as f64 / (cfg.s_grid - 1) as f64;
        let rho = psi.mix_with_maximally_mixed(p);
        let s = entropy::von_neumann(&rho);
        let h_a = entropy::shannon(&decomp::outcome_distribution(&a, &rho)?);
        let h_b = entropy::shannon(&decomp::outcome_distribution(&b, &rho)?);
        let h_sum = h_a + h_b;
        worst = worst.max((h_sum - 2.0 * (d as f64).ln()).abs());
        body.push_str(&format!("{},{},{},{}\n", p, s, h_sum, h_sum - 2.0 * s));
    }

    let meta = cfg.metadata_block(&[("max_h_deviation", worst.to_string())]);
    write_output(&cfg.out, &format!("{meta}{body}"))?;
    Ok(if worst <= 1e-7 { 0 } else { 1 })
}

/// Find a pure state unbiased in both eigenbases and emit it as JSON.
pub fn cmd_unbiased(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Json)?;
    let (a, b) = build_basis_pair(cfg)?;
    let d = cfg.dim as f64;
    let psi = extremal::find_unbiased(&a, &b, cfg.seed)?;
    let probs_a = decomp::outcome_distribution(&a, &psi)?;
    let probs_b = decomp::outcome_distribution(&b, &psi)?;
    let residual: f64 = probs_a
        .probs()
        .iter()
        .chain(probs_b.probs().iter())
        .map(|&p| (p - 1.0 / d).powi(2))
        .sum();
    let report = json!({
        "config": cfg,
        "residual": residual,
        "probs_a": probs_a.probs(),
        "probs_b": probs_b.probs(),
        "state": psi.to_json(),
    });
    write_output(&cfg.out, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
    Ok(if residual <= 1e-12 { 0 } else { 1 })
}

/// One-way discord of random pure bipartite states against the entanglement
/// entropy of the reduced state.
pub fn cmd_discord(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Json)?;
    let (d1, d2) = match cfg.dim {
        4 => (2usize, 2usize),
        6 => (2, 3),
        9 => (3, 3),
        d => {
            return Err(CmdError::Config(format!(
                "discord needs dim in {{4, 6, 9}} (d1 x d2), got {d}"
            )))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.samples);
    let mut worst = 0.0f64;
    for k in 0..cfg.samples {
        let psi = DensityMatrix::from_pure(&haar_vector(d1 * d2, &mut rng));
        let discord = extremal::one_way_discord(&psi, d1, d2, cfg.seed.wrapping_add(k as u64))?;
        let ent = entropy::von_neumann(&extremal::partial_trace(&psi, d1, d2, Subsystem::First)?);
        let delta = discord - ent;
        worst = worst.max(delta.abs());
        rows.push(json!({
            "discord": discord,
            "entanglement_entropy": ent,
            "delta": delta,
        }));
    }
    let all_match = worst <= 1e-5;
    let report = json!({
        "config": cfg,
        "d1": d1,
        "d2": d2,
        "results": rows,
        "max_abs_delta": worst,
        "all_match": all_match,
    });
    write_output(&cfg.out, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
    Ok(if all_match { 0 } else { 1 })
}

/// The coarse-grained qutrit example: a degenerate measurement can carry
/// zero classical uncertainty even on a mixed state, and refining it brings
/// the classical part back.
pub fn cmd_degenerate_demo(cfg: &RunConfig) -> CmdResult {
    require_format(cfg, OutputFormat::Json)?;
    let basis = ObservableBasis::computational(3);
    let coarse = ProjectiveMeasurement::from_basis_groups(&basis, &[vec![0, 1], vec![2]])?;
    let fine = ProjectiveMeasurement::from_basis(&basis);

    let mut mat = eurlab::CMat::zeros(3, 3);
    mat[(0, 0)] = eurlab::C64::new(0.5, 0.0);
    mat[(1, 1)] = eurlab::C64::new(0.5, 0.0);
    let xi = DensityMatrix::new(mat)?;

    let coarse_split = decomp::degenerate_split(&coarse, &xi)?;
    let fine_split = decomp::degenerate_split(&fine, &xi)?;
    let refines = decomp::measurement_refines(&fine, &coarse)?;

    let coarse_vanishes = coarse_split.total.abs() <= 1e-12
        && coarse_split.quantum.abs() <= 1e-12
        && coarse_split.classical.abs() <= 1e-12;
    let monotone = coarse_split.classical <= fine_split.classical + 1e-9;
    let ok = coarse_vanishes && refines && monotone;

    let report = json!({
        "config": cfg,
        "state": xi.to_json(),
        "coarse_split": coarse_split,
        "fine_split": fine_split,
        "refines": refines,
        "coarse_uncertainty_vanishes": coarse_vanishes,
        "classical_monotone_under_refinement": monotone,
        "all_hold": ok,
    });
    write_output(&cfg.out, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
    Ok(if ok { 0 } else { 1 })
}
