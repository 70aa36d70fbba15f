//! End-to-end tests of the `eurlab` binary: exit codes, output formats,
//! determinism, and the metadata round-trip.

use std::process::{Command, Output};

use eurlab_cli::config::{OutputFormat, RunConfig};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eurlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

#[test]
fn qc_plot_is_byte_identical_for_identical_configs() {
    let args = [
        "qc-plot", "--dim", "2", "--gamma", "0.9", "--samples", "200", "--seed", "11",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn qc_plot_metadata_round_trips_to_the_config() {
    let out = run(&[
        "qc-plot", "--dim", "2", "--gamma", "0.7", "--samples", "50", "--seed", "3",
        "--s-grid", "11",
    ]);
    let text = stdout_of(&out);
    let cfg = RunConfig::from_metadata(&text).expect("parsable metadata");
    assert_eq!(cfg.command, "qc-plot");
    assert_eq!(cfg.dim, 2);
    assert_eq!(cfg.gamma, Some(0.7));
    assert_eq!(cfg.alpha, None);
    assert_eq!(cfg.samples, 50);
    assert_eq!(cfg.seed, 3);
    assert_eq!(cfg.s_grid, 11);
    assert_eq!(cfg.out, "-");
    assert_eq!(cfg.format, OutputFormat::Csv);
}

#[test]
fn qc_plot_mub_cloud_stays_above_the_purity_line() {
    let out = run(&[
        "qc-plot", "--dim", "2", "--gamma", "1.5707963267948966", "--samples", "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let ln2 = std::f64::consts::LN_2;
    let mut checked = 0;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("c_sum") {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells[0].is_empty() {
            continue;
        }
        let c_sum: f64 = cells[0].parse().unwrap();
        let q_sum: f64 = cells[1].parse().unwrap();
        assert!(
            q_sum >= ln2 - c_sum / 2.0 - 1e-9,
            "point below the purity line: ({c_sum}, {q_sum})"
        );
        checked += 1;
    }
    assert_eq!(checked, 1000);
}

#[test]
fn qc_plot_qutrit_records_overlap_in_metadata() {
    let out = run(&[
        "qc-plot", "--dim", "3", "--alpha", "0.5235987755982988", "--samples", "10",
    ]);
    let text = stdout_of(&out);
    let c_line = text
        .lines()
        .find(|l| l.starts_with("# c_ab="))
        .expect("c_ab in metadata");
    let c: f64 = c_line.trim_start_matches("# c_ab=").parse().unwrap();
    assert!((c - 0.9107).abs() < 1e-3);
}

#[test]
fn qc_plot_rejects_json_format() {
    let out = run(&["qc-plot", "--gamma", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_check_passes_on_qubit_pair() {
    let out = run(&[
        "bounds-check", "--dim", "2", "--gamma", "1.0471975511965976", "--samples", "2000",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out.stderr);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["all_hold"], true);
    let kinds: Vec<&str> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["bound"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"maassen_uffink"));
    assert!(kinds.contains(&"improved_eur"));
    assert!(kinds.contains(&"qubit_spb"));
    assert!(!kinds.contains(&"mub_purity"));
}

#[test]
fn bounds_check_counterexample_preset_skips_qubit_bounds() {
    let out = run(&[
        "bounds-check", "--dim", "3", "--preset", "counterexample", "--samples", "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let kinds: Vec<&str> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["bound"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"maassen_uffink"));
    assert!(kinds.contains(&"improved_eur"));
    assert!(!kinds.contains(&"qubit_spb"));
}

#[test]
fn bounds_check_detects_injected_offset() {
    let out = run(&[
        "bounds-check", "--dim", "2", "--gamma", "0.9", "--samples", "200",
        "--bound-offset", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_check_mub_pair_includes_purity_bound() {
    let out = run(&[
        "bounds-check", "--dim", "2", "--gamma", "1.5707963267948966", "--samples", "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let kinds: Vec<&str> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["bound"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"mub_purity"));
}

#[test]
fn counterexample_certifies_small_and_embedded_dimensions() {
    for dim in ["3", "8"] {
        let out = run(&["counterexample", "--dim", dim]);
        assert_eq!(out.status.code(), Some(0), "dim {dim}");
        let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(report["violated"], true);
        assert!(report["margin"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn counterexample_rejects_dimension_two() {
    let out = run(&["counterexample", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mus_curves_coincide_below_bifurcation() {
    let out = run(&[
        "mus", "--dim", "2", "--gamma", "1.0471975511965976", "--s-grid", "21",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out.stderr);
    let text = stdout_of(&out);
    let mut max_gap = 0.0f64;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with('S') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let q_opt: f64 = cells[1].parse().unwrap();
        let q_mix: f64 = cells[2].parse().unwrap();
        assert_eq!(cells[4], "true");
        max_gap = max_gap.max((q_opt - q_mix).abs());
        assert!(q_opt <= q_mix + 1e-6);
    }
    assert!(max_gap <= 1e-5, "curves split by {max_gap:.3e}");
}

#[test]
fn mus_curves_separate_above_bifurcation() {
    let out = run(&[
        "mus", "--dim", "2", "--gamma", "1.3089969389957472", "--s-grid", "21",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut separated = false;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with('S') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let q_opt: f64 = cells[1].parse().unwrap();
        let q_mix: f64 = cells[2].parse().unwrap();
        assert!(q_opt <= q_mix + 1e-6);
        if q_opt < q_mix - 1e-4 {
            separated = true;
        }
    }
    assert!(separated, "expected the optimizer to beat the mixing line");
}

#[test]
fn mus_qutrit_never_exceeds_the_mixing_line() {
    let out = run(&[
        "mus", "--dim", "3", "--alpha", "1.0471975511965976", "--s-grid", "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out.stderr);
    let text = stdout_of(&out);
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with('S') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let q_opt: f64 = cells[1].parse().unwrap();
        let q_mix: f64 = cells[2].parse().unwrap();
        assert!(q_opt <= q_mix + 1e-6, "{line}");
        assert_eq!(cells[4], "true");
    }
}

#[test]
fn maxus_family_keeps_total_uncertainty_maximal() {
    let out = run(&[
        "maxus", "--dim", "3", "--alpha", "1.0471975511965976", "--s-grid", "11",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out.stderr);
    let text = stdout_of(&out);
    let target = 2.0 * 3.0f64.ln();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with('p') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        let h_sum: f64 = cells[2].parse().unwrap();
        assert!((h_sum - target).abs() <= 1e-7);
    }
}

#[test]
fn unbiased_reports_uniform_distributions() {
    let out = run(&["unbiased", "--dim", "2", "--gamma", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["residual"].as_f64().unwrap() <= 1e-12);
    for key in ["probs_a", "probs_b"] {
        for p in report[key].as_array().unwrap() {
            assert!((p.as_f64().unwrap() - 0.5).abs() < 1e-6);
        }
    }
}

#[test]
fn discord_matches_entanglement_entropy() {
    let out = run(&["discord", "--dim", "4", "--samples", "3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out.stderr);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["max_abs_delta"].as_f64().unwrap() <= 1e-5);
}

#[test]
fn discord_rejects_non_bipartite_dimension() {
    let out = run(&["discord", "--dim", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_demo_identities_hold() {
    let out = run(&["degenerate-demo"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["all_hold"], true);
    assert_eq!(report["refines"], true);
}

#[test]
fn missing_angle_is_a_config_error() {
    let out = run(&["qc-plot", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bounds-check", "--dim", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_writing_matches_stdout() {
    let dir = std::env::temp_dir().join("eurlab_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("plot.csv");
    let path_str = path.to_str().unwrap();
    let to_file = run(&[
        "qc-plot", "--gamma", "0.8", "--samples", "20", "--out", path_str,
    ]);
    assert_eq!(to_file.status.code(), Some(0));
    let on_disk = std::fs::read_to_string(&path).unwrap();
    let to_stdout = run(&["qc-plot", "--gamma", "0.8", "--samples", "20"]);
    // the out field differs in the metadata; everything below it must match
    let tail = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("# out="))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(tail(&on_disk), tail(&stdout_of(&to_stdout)));
    std::fs::remove_file(&path).ok();
}
