//! End-to-end runs of the `kirchhoff` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kirchhoff_harness::run::TIME_SERIES_HEADER;

const PARAMS: &str = "[parameters]\nlength = 3.141592653589793\ndamping = 0.3\na_sq = 1\nb = 1\n";

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn kirchhoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kirchhoff"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.toml",
        &format!("{PARAMS}[initial]\npreset = \"random_modes\"\nseed = 3\n[solver]\nmodes = 8\nt_end = 2\n"),
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = kirchhoff(&["simulate", s(&cfg), "--out", s(out)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(String::from_utf8_lossy(&o.stdout).contains("decay_verdict = pass"));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), TIME_SERIES_HEADER.join(","));

    let c = dir.path().join("c.csv");
    kirchhoff(&["simulate", s(&cfg), "--out", s(&c), "--seed", "4"]);
    assert_ne!(text, fs::read_to_string(&c).unwrap());
}

#[test]
fn simulate_to_stdout_keeps_summary_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.toml",
        &format!("{PARAMS}[initial]\npreset = \"single_mode\"\n[solver]\nmodes = 4\n"),
    );
    let o = kirchhoff(&["simulate", s(&cfg), "--t-end", "0.5", "--dt", "1e-3"]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("t,E,G,V,"));
    let rows = stdout.lines().count() - 1;
    assert!(rows > 2);
    let last: f64 = stdout
        .lines()
        .last()
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(last, 0.5);
    assert!(String::from_utf8(o.stderr).unwrap().contains("E0 = "));
}

#[test]
fn certify_writes_report_and_row() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let cfg = write_config(
        dir.path(),
        "run.toml",
        &format!(
            "{PARAMS}[initial]\npreset = \"polynomial_bump\"\namplitude = 0.5\n[solver]\nmodes = 16\n[output]\nreport = \"{}\"\n",
            s(&report)
        ),
    );
    let row = dir.path().join("row.csv");
    let o = kirchhoff(&["certify", s(&cfg), "--out", s(&row)]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("amplitude_verdict = pass"));
    assert_eq!(fs::read_to_string(&report).unwrap(), stdout);
    let csv = fs::read_to_string(&row).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().contains(",pass,"));
}

#[test]
fn certify_without_damping_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "run.toml",
        &format!(
            "{}[initial]\npreset = \"single_mode\"\n",
            PARAMS.replace("damping = 0.3", "damping = 0")
        ),
    );
    let o = kirchhoff(&["certify", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("delta > 0"));
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let negative = write_config(
        dir.path(),
        "neg.toml",
        &format!(
            "{}[initial]\npreset = \"single_mode\"\n",
            PARAMS.replace("0.3", "-1")
        ),
    );
    let o = kirchhoff(&["simulate", s(&negative)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("parameters.damping"));

    let unknown = write_config(
        dir.path(),
        "unknown.toml",
        &format!("{PARAMS}[initial]\npreset = \"single_mode\"\nwobble = 1\n"),
    );
    assert_eq!(kirchhoff(&["simulate", s(&unknown)]).status.code(), Some(2));

    let missing = dir.path().join("missing.toml");
    assert_eq!(
        kirchhoff(&["constants", s(&missing)]).status.code(),
        Some(2)
    );

    let ok = write_config(
        dir.path(),
        "ok.toml",
        &format!("{PARAMS}[initial]\npreset = \"single_mode\"\n"),
    );
    assert_eq!(
        kirchhoff(&["constants", s(&ok), "--kappa", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn unstable_finite_difference_step_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fd.toml",
        &format!("{PARAMS}[initial]\npreset = \"single_mode\"\n[solver]\nkind = \"fd\"\nfd_points = 63\nfd_dt = 0.2\nt_end = 1\nsample_interval = 0.5\n"),
    );
    let o = kirchhoff(&["simulate", s(&cfg), "--out", s(&dir.path().join("x.csv"))]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("stability limit"));
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let body = |workers: usize| {
        format!(
            "{PARAMS}[initial]\npreset = \"random_modes\"\nseed = 1\n[solver]\nmodes = 8\ndt = 2e-3\n\
             [sweep]\ndamping = [0.1, 0.4, 1.5]\nb = [0, 0.5, 2]\nworkers = {workers}\n"
        )
    };
    let mut outputs = Vec::new();
    for workers in [1, 3] {
        let cfg = write_config(dir.path(), &format!("sweep{workers}.toml"), &body(workers));
        let out = dir.path().join(format!("sweep{workers}.csv"));
        let o = kirchhoff(&["sweep", s(&cfg), "--out", s(&out)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(String::from_utf8(o.stdout).unwrap().contains("passed = 9"));
        outputs.push(fs::read_to_string(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].lines().count(), 10);
    let strong: Vec<&str> = outputs[0]
        .lines()
        .filter(|l| l.contains("delta exceeds"))
        .collect();
    assert_eq!(strong.len(), 3);
}

#[test]
fn constants_matches_library_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        &format!("{PARAMS}[initial]\npreset = \"single_mode\"\n"),
    );
    let o = kirchhoff(&["constants", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let parsed = kirchhoff_harness::parse_config(&fs::read_to_string(&cfg).unwrap()).unwrap();
    let table = kirchhoff_harness::run::constants_table(&parsed).unwrap();
    assert_eq!(text, kirchhoff_harness::run::render_constants(&table));
    for key in ["mu0", "epsilon", "mu", "M", "mu_max", "mu_max_cap"] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{key} = "))),
            "{key}"
        );
    }
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let certify = fs::read_to_string(dir.join("certify.toml")).unwrap();
    kirchhoff_harness::parse_config(&certify).unwrap();
    let sweep = fs::read_to_string(dir.join("sweep.toml")).unwrap();
    assert_eq!(
        kirchhoff_harness::parse_sweep(&sweep).unwrap().num_cells(),
        18
    );
}
