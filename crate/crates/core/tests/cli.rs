use std::path::Path;
use std::process::{Command, Output};

use otto_engine::*;

const BIN: &str = env!("CARGO_BIN_EXE_otto-sweep");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let i = header.iter().position(|h| h == name).unwrap();
    row[i].parse().unwrap()
}

#[test]
fn identical_invocations_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&[
            "qutrit-meas",
            "--angle-set",
            "all",
            "--j-steps",
            "41",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 1 + 3 * 41);
    let meta = std::fs::read_to_string(dir.path().join("a.csv.meta")).unwrap();
    assert!(meta.contains("command=qutrit-meas\n"));
    assert!(meta.contains("beta-c=1\n"));
}

#[test]
fn rows_reproduce_run_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let o = run(&[
        "qutrit-contour",
        "--theta-steps",
        "21",
        "--j-steps",
        "25",
        "--beta-c",
        "0.8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&out);
    assert_eq!(rows.len(), 21 * 25);
    for row in rows.iter().step_by(37) {
        let theta = field(&header, row, "theta");
        let j = field(&header, row, "j");
        let ch = su3_projective_channel(&Su3Angles {
            theta,
            phi: theta,
            chi: std::f64::consts::FRAC_PI_2,
            psi: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        let rec = run_cycle(
            &CycleConfig::measurement(SubstanceSpec::Qutrit { j }, 3.0, 4.0, 0.8, ch).unwrap(),
        )
        .unwrap();
        assert_eq!(field(&header, row, "qh"), rec.qh);
        assert_eq!(field(&header, row, "qc"), rec.qc);
        assert_eq!(field(&header, row, "w"), rec.w);
        let eta_cell = &row[header.iter().position(|h| h == "eta").unwrap()];
        match rec.eta {
            Some(e) => assert_eq!(eta_cell.parse::<f64>().unwrap(), e),
            None => assert!(eta_cell.is_empty()),
        }
        for l in &rec.levels {
            assert_eq!(
                field(&header, row, &format!("q_hot_{}", l.label.key())),
                l.q_hot
            );
        }
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sweep\nbi = 2\nbf = 5\nj-steps = 3\n").unwrap();
    let out = dir.path().join("x.csv");
    let o = run(&[
        "qutrit-two-bath",
        "--config",
        cfg.to_str().unwrap(),
        "--bf",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(rows.len(), 3);
    assert!((field(&header, &rows[0], "eta0") - (1.0 - 2.0 / 6.0)).abs() < 1e-15);
}

#[test]
fn stdout_output_and_angle_flags() {
    let o = run(&[
        "qutrit-meas",
        "--theta",
        "0.75pi",
        "--phi",
        "0.75pi",
        "--chi",
        "0.5pi",
        "--psi",
        "0.5pi",
        "--j-min",
        "2.99",
        "--j-max",
        "3",
        "--j-steps",
        "2",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("set,theta,phi,chi,psi,j,"));
    assert!(lines.next().unwrap().starts_with("custom,"));
}

#[test]
fn xxz_measurement_directions() {
    let o = run(&[
        "xxz",
        "--model",
        "ising",
        "--protocol",
        "measurement",
        "--n",
        "1,0,0",
        "--m",
        "0,0,1",
        "--j-min",
        "-1",
        "--j-max",
        "1",
        "--j-steps",
        "5",
    ]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 6);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["qutrit-two-bath", "--bi", "5"],
        vec!["qutrit-two-bath", "--j-steps", "1"],
        vec!["qutrit-meas", "--theta", "1"],
        vec!["xxz", "--n", "1,1,0"],
        vec!["theorem1", "--dims", "7"],
        vec!["no-such-command"],
        vec!["qutrit-extreme", "--bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn io_errors_exit_two() {
    let o = run(&["qutrit-extreme", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["qutrit-extreme", "--config", "/nonexistent-dir/run.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theorem1_reports_minimum() {
    let o = run(&["theorem1", "--samples", "1000", "--seed", "1"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("min unital energy change"));
    assert!(err.contains("expected negative"));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("identity"));
}
