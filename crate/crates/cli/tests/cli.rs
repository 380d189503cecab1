use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use brl_core::csv::Table;
use tempfile::TempDir;

fn brl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brl"))
        .args(args)
        .env_remove("BRL_TOLERANCE_SCALE")
        .output()
        .expect("brl runs")
}

fn out_arg(dir: &Path) -> String {
    dir.display().to_string()
}

fn read_table(path: &Path) -> Table {
    Table::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn default_preset_writes_trajectory_and_summary() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let res = brl(&["simulate", "--out", &out_arg(&out)]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let table = read_table(&out.join("trajectory.csv"));
    assert_eq!(table.header, ["t", "q", "qdot", "Q"]);
    assert_eq!(table.rows.len(), 10_001);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("final_q = "));
    assert!(summary.contains("plastic_limit = "));
}

#[test]
fn wide_preset_reports_growth_rate_near_lambda1() {
    let tmp = TempDir::new().unwrap();
    let res = brl(&[
        "simulate",
        "--preset",
        "wide",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let summary = fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
    let value = |key: &str| -> f64 {
        summary
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("missing {key}"))
            .parse()
            .unwrap()
    };
    let lambda1 = value("lambda1");
    assert!((lambda1 - 0.682_327_803_828_019_3).abs() < 1e-12);
    assert!((value("fitted_rate") - lambda1).abs() < 1e-3);
    let roots = read_table(&tmp.path().join("roots.csv"));
    assert_eq!(roots.rows[0][3], 1.0);
}

#[test]
fn every_preset_simulates() {
    let tmp = TempDir::new().unwrap();
    for preset in [
        "oscillator",
        "habitual",
        "concentrated",
        "wide",
        "model-b",
        "resonant",
        "off-resonant",
    ] {
        let out = tmp.path().join(preset);
        let res = brl(&["simulate", "--preset", preset, "--out", &out_arg(&out)]);
        assert_eq!(
            res.status.code(),
            Some(0),
            "{preset}: {}",
            String::from_utf8_lossy(&res.stderr)
        );
        assert!(out.join("summary.txt").exists(), "{preset}");
    }
}

#[test]
fn reflect_verdicts() {
    let tmp = TempDir::new().unwrap();
    let on = brl(&[
        "reflect",
        "--preset",
        "resonant",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(on.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&on.stdout).contains("complete reflection"));
    let table = read_table(&tmp.path().join("rejection.csv"));
    assert_eq!(table.header, ["t", "Q", "shadow_max"]);
    let q_max = table
        .column("Q")
        .unwrap()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(q_max < 5e-3, "max |Q| = {q_max}");

    let off = brl(&[
        "reflect",
        "--preset",
        "off-resonant",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(off.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&off.stdout).contains("not completely reflected"));
}

#[test]
fn reflect_without_incident_wave_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let res = brl(&["reflect", "--out", &out_arg(tmp.path())]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn bad_configs_exit_2() {
    let tmp = TempDir::new().unwrap();
    let conf = tmp.path().join("bad.conf");
    let out = out_arg(&tmp.path().join("out"));
    for text in [
        "omega = fast",
        "colour = blue",
        "omega",
        "c = -1",
        "outputs =",
        "preset = nope",
    ] {
        fs::write(&conf, text).unwrap();
        let res = brl(&[
            "simulate",
            "--config",
            conf.to_str().unwrap(),
            "--out",
            &out,
        ]);
        assert_eq!(res.status.code(), Some(2), "{text}");
    }
    let res = brl(&[
        "simulate",
        "--config",
        "/nonexistent/brl.conf",
        "--out",
        &out,
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(
        brl(&["simulate", "--dt", "-1", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        brl(&["simulate", "--set", "gamma", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(brl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn blowup_exits_3() {
    let tmp = TempDir::new().unwrap();
    let res = brl(&[
        "simulate",
        "--preset",
        "wide",
        "--horizon",
        "2000",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("effective-dynamics"));
}

#[test]
fn roots_prints_regime() {
    let res = brl(&["roots", "--preset", "wide"]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8_lossy(&res.stdout);
    assert!(text.contains("regime = self-accelerating"));
    let res = brl(&["roots", "--preset", "wide", "--set", "gamma2=-0.5"]);
    assert!(String::from_utf8_lossy(&res.stdout).contains("regime = decaying only"));
}

#[test]
fn sweep_over_five_values_gives_five_rows() {
    let tmp = TempDir::new().unwrap();
    let res = brl(&[
        "sweep",
        "--param",
        "gamma",
        "--range",
        "0.05:0.25:5",
        "--horizon",
        "20",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(
        res.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let table = read_table(&tmp.path().join("sweep.csv"));
    assert_eq!(
        table.header,
        [
            "value",
            "final_q",
            "max_abs_q",
            "fitted_rate",
            "self_accelerating"
        ]
    );
    assert_eq!(
        table.column("value").unwrap(),
        [0.05, 0.1, 0.15000000000000002, 0.2, 0.25]
    );
}

#[test]
fn sweep_regime_column_flips_with_gamma2() {
    // Habitual preset: friction 0.2, omega 1.5, so the flip sits at gamma2 = 2.25.
    let tmp = TempDir::new().unwrap();
    let res = brl(&[
        "sweep",
        "--preset",
        "habitual",
        "--param",
        "gamma2",
        "--values",
        "0,1,2,2.2,2.3,3",
        "--horizon",
        "10",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let table = read_table(&tmp.path().join("sweep.csv"));
    assert_eq!(
        table.column("self_accelerating").unwrap(),
        [0.0, 0.0, 0.0, 0.0, 1.0, 1.0]
    );
}

#[test]
fn sweep_usage_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let out = out_arg(tmp.path());
    for args in [
        vec!["sweep", "--param", "gamma", "--range", "0:1:0"],
        vec!["sweep", "--param", "gamma", "--values", ""],
        vec!["sweep", "--param", "gamma", "--range", "0:1"],
        vec!["sweep", "--param", "model", "--values", "1"],
        vec!["sweep", "--param", "gamma"],
    ] {
        let mut full = args.clone();
        full.extend(["--out", &out]);
        assert_eq!(brl(&full).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let res = brl(&[
            "simulate",
            "--set",
            "lattice=on",
            "--set",
            "outputs=trajectory,snapshots",
            "--set",
            "snapshots=2",
            "--set",
            "field=gaussian",
            "--horizon",
            "4",
            "--out",
            &out_arg(dir),
        ]);
        assert_eq!(
            res.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    for name in [
        "trajectory.csv",
        "snapshot_000.csv",
        "lattice_trajectory.csv",
        "lattice_snapshot_000.csv",
        "summary.txt",
    ] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

fn csv_files(dir: &Path, found: &mut Vec<std::path::PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            csv_files(&path, found);
        } else if path.extension().is_some_and(|e| e == "csv") {
            found.push(path);
        }
    }
}

#[test]
fn verify_is_deterministic_and_round_trips() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("nested/a"), tmp.path().join("b"));
    let first = brl(&["verify", "--out", &out_arg(&a)]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    let second = brl(&["verify", "--sequential", "--out", &out_arg(&b)]);
    assert_eq!(second.status.code(), Some(0));

    let stdout = String::from_utf8_lossy(&first.stdout);
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("[PASS]")).count(),
        10
    );

    let mut files = Vec::new();
    csv_files(&a, &mut files);
    assert!(files.len() >= 10);
    for path in files {
        let rel = path.strip_prefix(&a).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            fs::read_to_string(b.join(rel)).unwrap(),
            "{}",
            rel.display()
        );
        assert_eq!(
            Table::parse(&text).unwrap().to_csv(),
            text,
            "{}",
            rel.display()
        );
    }
    let index = read_table(&a.join("criteria.csv"));
    assert_eq!(index.column("passed").unwrap(), vec![1.0; 10]);
}

#[test]
fn verify_rejects_bad_tolerance_scale() {
    let tmp = TempDir::new().unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_brl"))
        .args(["verify", "--out", &out_arg(tmp.path())])
        .env("BRL_TOLERANCE_SCALE", "-2")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_with_scaled_tolerances_reports_every_criterion() {
    let tmp = TempDir::new().unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_brl"))
        .args(["verify", "--out", &out_arg(tmp.path())])
        .env("BRL_TOLERANCE_SCALE", "4")
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&res.stdout);
    for id in 1..=10 {
        assert!(
            stdout.contains(&format!("criterion {id:>2} ")),
            "criterion {id} missing"
        );
    }
    assert!(stdout.contains("tolerance scale 4"));
}
