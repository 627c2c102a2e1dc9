#![allow(clippy::excessive_precision)] // frozen oracle values, digits kept verbatim

//! End-to-end tests of the `dasa` binary: presets, CSV/record emission,
//! config round-trip reproducibility, comparison tables, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dasa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dasa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Parse a trajectory CSV into (header, rows of f64).
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).expect("csv exists");
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

#[test]
fn dasa2_preset_reproduces_reference_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dasa(&["run", "--preset", "dasa2", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let (header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(header, ["t", "re0", "im0", "re1", "im1", "pop0", "pop1", "norm"]);

    // Populations sum to the norm on every row.
    for row in &rows {
        assert!((row[5] + row[6] - row[7]).abs() <= 1e-12);
    }

    // Row at the protocol end (the tail extends past it).
    let end = rows
        .iter()
        .find(|r| (r[0] - -11.358).abs() < 1e-9)
        .expect("protocol end sampled");
    // Frozen endpoint intensities from the independent oracle.
    assert!((end[5] - 0.99895283488775743).abs() < 1e-9, "pop0 {}", end[5]);
    assert!((end[6] - 0.071539908263045238).abs() < 1e-9, "pop1 {}", end[6]);
    assert!((end[5] - 1.0).abs() <= 0.05);

    // The identity tail freezes populations to the emitted horizon.
    let last = rows.last().unwrap();
    assert!((last[0] - -10.0).abs() < 1e-9);
    assert!((last[5] - end[5]).abs() < 1e-12);

    // Start state is the bare (0,1)^T.
    assert!((rows[0][6] - 1.0).abs() < 1e-12);

    let svg = fs::read_to_string(dir.path().join("populations.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn run_record_digests_and_snapshot_round_trip() {
    let dir_a = tempfile::tempdir().unwrap();
    let cfg = dir_a.path().join("scenario.toml");
    fs::write(
        &cfg,
        "schema_version = 1\nmode = \"dasa2\"\n\n[dasa2]\ntail_until = -10.5\n",
    )
    .unwrap();
    let out_a = dir_a.path().join("out");
    let run = dasa(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));

    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("run_record.json")).unwrap()).unwrap();
    assert_eq!(record["schema_version"], 1);
    assert_eq!(record["mode"], "dasa2");

    // Every listed output exists with a matching digest.
    use sha2::{Digest, Sha256};
    let outputs = record["outputs"].as_array().unwrap();
    assert!(!outputs.is_empty());
    for entry in outputs {
        let name = entry["path"].as_str().unwrap();
        let bytes = fs::read(out_a.join(name)).unwrap();
        assert_eq!(bytes.len() as u64, entry["bytes"].as_u64().unwrap());
        let digest: String =
            Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(digest, entry["sha256"].as_str().unwrap(), "digest of {name}");
    }

    // The snapshot re-runs to bit-identical CSV output.
    let dir_b = tempfile::tempdir().unwrap();
    let snap = dir_b.path().join("snapshot.toml");
    fs::write(&snap, record["config_snapshot"].as_str().unwrap()).unwrap();
    let out_b = dir_b.path().join("out");
    let rerun = dasa(&[
        "run",
        "--config",
        snap.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert!(rerun.status.success(), "{}", stderr(&rerun));
    let a = fs::read(out_a.join("trajectory.csv")).unwrap();
    let b = fs::read(out_b.join("trajectory.csv")).unwrap();
    assert_eq!(a, b, "snapshot re-run must be bit-identical");
}

#[test]
fn dasa3_preset_and_switch_search() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.toml");
    fs::write(
        &cfg,
        "schema_version = 1\nmode = \"dasa3\"\n\n[dasa3]\nfind_switch = true\n",
    )
    .unwrap();
    let out = dasa(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.contains("switch search cut"))
        .expect("switch line present");
    let cut: f64 = line.rsplit('=').next().unwrap().trim().parse().unwrap();
    assert!((cut - -10.7374).abs() <= 0.05, "cut {cut}");

    let (header, rows) = read_csv(&dir.path().join("out/trajectory.csv"));
    assert_eq!(header.len(), 1 + 6 + 3 + 1, "3-level column contract");
    let last = rows.last().unwrap();
    assert!((last[7] - 1.0).abs() <= 0.1, "final (1,0,0) intensity {}", last[7]);
    assert!(last[8] <= 1e-2 && last[9] <= 1e-2);
}

#[test]
fn lz_mode_report_matches_analytic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lz.toml");
    fs::write(
        &cfg,
        "schema_version = 1\nmode = \"lz\"\n\n[propagation]\nmethod = \"rk4\"\nsample_stride = 500\n\n[lz]\nepsilons = [0.5]\n\n[output]\nreport_txt = \"report.txt\"\n",
    )
    .unwrap();
    let outdir = dir.path().join("out");
    let out = dasa(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report = fs::read_to_string(outdir.join("report.txt")).unwrap();
    assert!(report.contains("eps = 0.5"), "{report}");
    // "simulated transfer X, analytic Y, |diff| Z"
    let line = report.lines().next().unwrap();
    let sim: f64 = line
        .split("simulated transfer ")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    let analytic = 1.0 - (-std::f64::consts::PI / 0.25).exp();
    assert!((sim - analytic).abs() < 0.02);
    assert!(outdir.join("trajectory.csv").exists());
}

#[test]
fn roots_mode_emits_validated_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("roots.toml");
    fs::write(
        &cfg,
        "schema_version = 1\nmode = \"roots\"\n\n[roots]\ngamma2_min = -3.0\ngamma2_max = -0.05\ngamma2_steps = 30\ndelta_omegas = [1.0, 4.0]\n",
    )
    .unwrap();
    let outdir = dir.path().join("out");
    let out = dasa(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = read_csv(&outdir.join("roots.csv"));
    assert_eq!(header, ["gamma2", "delta_omega", "gamma1", "sigma_gamma", "residual", "valid"]);
    assert!(rows.len() >= 60, "at least one real root per grid point");
    let text = fs::read_to_string(outdir.join("roots.csv")).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let dw: f64 = cols[1].parse().unwrap();
        let g1: f64 = cols[2].parse().unwrap();
        let g2: f64 = cols[0].parse().unwrap();
        let res: f64 = cols[4].parse().unwrap();
        assert!(res <= 1e-9 * dw.powi(2).max(1.0));
        // sigma_gamma column is consistent with its parts.
        let sigma: f64 = cols[3].parse().unwrap();
        assert!((sigma - (g1 + g2)).abs() < 1e-12);
    }
}

#[test]
fn optimizer_mode_is_reproducible() {
    let body = "schema_version = 1\nmode = \"optimize\"\n\n[optimize]\nbudget = 40\nseed = 11\n";
    let mut histories = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("opt.toml");
        fs::write(&cfg, body).unwrap();
        let outdir = dir.path().join("out");
        let out = dasa(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            outdir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(stdout(&out).contains("best cost"));
        histories.push(fs::read(outdir.join("history.csv")).unwrap());
    }
    assert_eq!(histories[0], histories[1], "same seed, same history bytes");
}

#[test]
fn compare_identical_configs_gives_identical_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a.toml");
    fs::write(&cfg, "schema_version = 1\nmode = \"dasa2\"\n").unwrap();
    let out = dasa(&["compare", cfg.to_str().unwrap(), cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    for line in stdout(&out).lines().skip(2) {
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        assert_eq!(cells[1], cells[2], "row {line}");
    }
}

#[test]
fn compare_two_and_three_level_reports_same_segment_gammas() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.toml");
    let b = dir.path().join("b.toml");
    fs::write(&a, "schema_version = 1\nmode = \"dasa2\"\n").unwrap();
    fs::write(&b, "schema_version = 1\nmode = \"dasa3\"\n").unwrap();
    let outdir = dir.path().join("out");
    let out = dasa(&[
        "compare",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = stdout(&out);

    // Both protocols use the same decay/amplify gain-loss pairs; the
    // three-level rows add the zero-gamma middle site between them.
    for (seg, gammas) in [(0, ["0.009234", "-0.950000"]), (1, ["3.999972", "-0.250000"])] {
        let row = table
            .lines()
            .find(|l| l.starts_with(&format!("segment {seg} site gammas")))
            .expect("segment row");
        let cells: Vec<&str> = row.split('|').map(str::trim).collect();
        for g in gammas {
            assert!(cells[1].contains(g), "A column {}", cells[1]);
            assert!(cells[2].contains(g), "B column {}", cells[2]);
        }
        assert!(cells[2].contains("0.000000"), "middle site has zero gamma");
    }

    // DASA active duration beats a 6-coupling-unit adiabatic window.
    let dur_row = table.lines().find(|l| l.starts_with("active duration")).unwrap();
    let dur_a: f64 = dur_row.split('|').nth(1).unwrap().trim().parse().unwrap();
    assert!((dur_a - 3.642).abs() < 1e-9);
    assert!(dur_a < 6.0);
    assert!(outdir.join("compare.txt").exists());
}

#[test]
fn compare_against_a_six_unit_adiabatic_window() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.toml");
    let b = dir.path().join("b.toml");
    fs::write(&a, "schema_version = 1\nmode = \"dasa2\"\n").unwrap();
    // eps chosen so the [-3, 3] window satisfies eps^2 * |t| >= 50.
    fs::write(
        &b,
        "schema_version = 1\nmode = \"lz\"\n\n[propagation]\nmethod = \"rk4\"\nsample_stride = 500\n\n[lz]\nepsilons = [4.0824829046386304]\nwindow = { t_start = -3.0, t_end = 3.0 }\n",
    )
    .unwrap();
    let out = dasa(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = stdout(&out);
    let dur_row = table.lines().find(|l| l.starts_with("active duration")).unwrap();
    let cells: Vec<&str> = dur_row.split('|').map(str::trim).collect();
    let dasa_dur: f64 = cells[1].parse().unwrap();
    let lz_dur: f64 = cells[2].parse().unwrap();
    assert!((dasa_dur - 3.642).abs() < 1e-9);
    assert!((lz_dur - 6.0).abs() < 1e-9);
    assert!(dasa_dur < lz_dur, "the protocol beats the six-unit window");
}

#[test]
fn exit_codes_follow_the_contract() {
    // Unknown key: invalid config, exit 1.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "schema_version = 1\nmode = \"dasa2\"\nbogus = 1\n").unwrap();
    let out = dasa(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bogus"));

    // Degenerate detuning: infeasible physics, exit 2, diagnostic names the
    // failing precondition.
    let inf = dir.path().join("inf.toml");
    fs::write(
        &inf,
        "schema_version = 1\nmode = \"dasa2\"\n\n[dasa2]\ndecay = { delta_omega = 0.0, gamma2 = -0.95 }\n",
    )
    .unwrap();
    let out = dasa(&[
        "run",
        "--config",
        inf.to_str().unwrap(),
        "--out",
        dir.path().join("x").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("delta_omega"), "{}", stderr(&out));

    // Missing subcommand input: exit 1.
    let out = dasa(&["run"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn presets_list_and_show() {
    let out = dasa(&["presets", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["dasa2", "dasa3", "lz", "roots", "optimize"] {
        assert!(text.contains(name), "{text}");
    }

    let out = dasa(&["presets", "show", "dasa2"]);
    assert!(out.status.success());
    let shown = stdout(&out);
    assert!(shown.contains("schema_version"));

    // The shown preset is itself a runnable config.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("preset.toml");
    fs::write(&cfg, &shown).unwrap();
    let run = dasa(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));

    let out = dasa(&["presets", "show", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}
