use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn trombe(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trombe"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn scenario(dir: &Path, body: &str) -> String {
    let path = dir.join("case.toml");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SHORT: &str = "[numerics]\nspin_up_days = 1\nreport_days = 1\ndt = 300\n";

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|v| v.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), SHORT);
    let out = trombe(&["run", &s, "--out", "res"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let res = dir.path().join("res");
    let (header, rows) = read_csv(&res.join("timeseries.csv"));
    assert_eq!(header[..3], ["time_s", "q_s_wm2", "t_ambient_c"]);
    assert_eq!(header.len(), 9);
    assert_eq!(rows.len(), 288);
    assert!(rows
        .iter()
        .all(|r| r.len() == 9 && r.iter().all(|v| v.is_finite())));

    let (header, rows) = read_csv(&res.join("energy.csv"));
    assert_eq!(
        header,
        [
            "time_s",
            "q_t_wm2",
            "q_f_wm2",
            "q_r_wm2",
            "absorbed_wm2",
            "stored_wm2"
        ]
    );
    assert_eq!(rows.len(), 288);

    let summary = fs::read_to_string(res.join("summary.txt")).unwrap();
    for key in ["q_t", "q_f", "q_r", "fixpoint", "unconverged     none"] {
        assert!(summary.contains(key), "{summary}");
    }
    assert!(res.join("plot.gp").exists());
}

#[test]
fn zero_report_days_gives_header_only_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), SHORT);
    let out = trombe(&["run", &s, "--out", "res", "--days", "0"], dir.path());
    assert!(out.status.success());
    for f in ["timeseries.csv", "energy.csv"] {
        let text = fs::read_to_string(dir.path().join("res").join(f)).unwrap();
        assert_eq!(text.lines().count(), 1, "{f}: {text}");
    }
}

#[test]
fn missing_climate_file_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "[climate]\npath = \"nowhere.csv\"\n");
    let out = trombe(&["run", &s, "--out", "res"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere.csv"));
}

#[test]
fn invalid_value_exits_with_validation_status() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), "[wall]\nheight = 3\nconductivity = 0\n");
    let out = trombe(&["run", &s], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("case.toml:3") && err.contains("wall.conductivity"),
        "{err}"
    );
}

#[test]
fn climate_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("time_s,q_s_wm2,t_ambient_c\n");
    for h in 0..=30 {
        let q = if (8..16).contains(&(h % 24)) { 400 } else { 0 };
        csv.push_str(&format!("{},{q},2.5\n", h * 3600));
    }
    fs::write(dir.path().join("site.csv"), csv).unwrap();
    let s = scenario(
        dir.path(),
        "[numerics]\nspin_up_days = 0\nreport_days = 1\n[climate]\npath = \"site.csv\"\n",
    );
    let out = trombe(&["run", &s, "--out", "res"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, rows) = read_csv(&dir.path().join("res/energy.csv"));
    assert_eq!(rows.len(), 1440);
}

#[test]
fn short_climate_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("site.csv"),
        "time_s,q_s_wm2,t_ambient_c\n0,0,1\n3600,0,1\n",
    )
    .unwrap();
    let s = scenario(dir.path(), "[climate]\npath = \"site.csv\"\n");
    let out = trombe(&["run", &s], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unconverged_run_reports_first_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(
        dir.path(),
        "[numerics]\nspin_up_days = 0\nreport_days = 0.5\nfixpoint_max_iter = 1\n",
    );
    let out = trombe(&["run", &s, "--out", "res"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("first at t = 60 s"));
}

#[test]
fn runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), SHORT);
    for out in ["a", "b"] {
        assert!(trombe(&["run", &s, "--out", out], dir.path())
            .status
            .success());
    }
    for f in ["timeseries.csv", "energy.csv", "summary.txt"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn sweep_matches_sequential_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, vents) in [("open", "open"), ("shut", "closed")] {
        fs::write(
            dir.path().join(format!("{name}.toml")),
            format!("name = \"{name}\"\n{SHORT}[gap]\nvents = \"{vents}\"\n"),
        )
        .unwrap();
    }
    let args = |out: &'static str, sweep: bool| {
        let mut a = vec!["run", "open.toml", "shut.toml", "--out", out];
        if sweep {
            a.push("--sweep");
        }
        a
    };
    assert!(trombe(&args("seq", false), dir.path()).status.success());
    assert!(trombe(&args("par", true), dir.path()).status.success());
    for name in ["open", "shut"] {
        let a = fs::read(dir.path().join("seq").join(name).join("energy.csv")).unwrap();
        let b = fs::read(dir.path().join("par").join(name).join("energy.csv")).unwrap();
        assert!(a == b);
    }
    let (_, shut) = read_csv(&dir.path().join("par/shut/energy.csv"));
    assert!(shut.iter().all(|r| r[2] == 0.0));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario(dir.path(), SHORT);
    let out = trombe(
        &["run", &s, "--out", "res", "--dt", "600", "--sigma", "1"],
        dir.path(),
    );
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("res/timeseries.csv"));
    assert_eq!(rows.len(), 144);
    assert_eq!(rows[1][0] - rows[0][0], 600.0);
}

#[test]
fn verify_passes_and_catches_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let ok = trombe(&["verify", "--level", "quick"], dir.path());
    assert!(ok.status.success());
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(
        !text.contains("FAIL") && text.contains("all 8 checks passed"),
        "{text}"
    );

    let bad = trombe(&["verify", "--perturb", "1e-6"], dir.path());
    assert!(!bad.status.success());
    let text = String::from_utf8_lossy(&bad.stdout);
    assert!(
        text.lines()
            .any(|l| l.starts_with("FAIL") && l.contains("extended sweep")),
        "{text}"
    );
}

#[test]
fn converge_prints_order_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = trombe(&["converge", "--problem", "slab"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for label in ["time, sigma = 0.5", "time, sigma = 1", "space, sigma = 0.5"] {
        assert!(text.contains(label), "{text}");
    }
}

#[test]
fn help_documents_climate_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = trombe(&["--help"], dir.path());
    assert!(String::from_utf8_lossy(&out.stdout).contains("time_s,q_s_wm2,t_ambient_c"));
}
