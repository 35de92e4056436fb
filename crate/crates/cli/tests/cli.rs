use std::path::Path;
use std::process::{Command, Output};

fn sflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sflab")).args(args).output().expect("spawn sflab")
}

fn ok(args: &[&str]) -> String {
    let out = sflab(args);
    assert!(
        out.status.success(),
        "sflab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn formula_rows(csv_text: &str) -> Vec<csv::StringRecord> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["quantity", "value", "exact", "formula"]);
    rdr.records().map(|r| r.unwrap()).collect()
}

fn value<'a>(rows: &'a [csv::StringRecord], name: &str) -> &'a str {
    &rows.iter().find(|r| &r[0] == name).unwrap_or_else(|| panic!("no row {name}"))[2]
}

#[test]
fn schur_run_reports_a_sum_free_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = ok(&["run", "--instance", "schur", "--n", "1000", "--seed", "7", "--out", out]);
    assert!(stdout.contains("instance=schur:1000 seed=7 size="));
    for f in ["set.txt", "runlog.jsonl", "summary.json", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    let set = dir.path().join("set.txt");
    let verdict = ok(&["verify", "--instance", "schur", "--input", set.to_str().unwrap()]);
    assert!(verdict.starts_with("sum_free=true maximal=true"));
}

#[test]
fn sunflower_run_is_maximal_and_free() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["run", "--instance", "sunflower", "--n", "12", "--w", "2", "--r", "3", "--seed", "1", "--out", out]);
    let fam = dir.path().join("family.txt");
    assert!(read(&fam).starts_with("12 2 3\n"));
    let verdict = ok(&["verify", "--input", fam.to_str().unwrap()]);
    assert!(verdict.starts_with("sunflower_free=true maximal=true"));
}

#[test]
fn verify_rejects_a_bad_family() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("bad.txt");
    // three disjoint pairs: a 3-sunflower with empty kernel
    std::fs::write(&fam, "6 2 3\n0 1\n2 3\n4 5\n").unwrap();
    let out = sflab(&["verify", "--input", fam.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("first_violation=2"));
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (inst, extra) in [
        ("schur", vec!["--n", "300"]),
        ("sunflower", vec!["--n", "10", "--w", "2"]),
        ("hfree:triangle", vec!["--n", "9"]),
        ("blowup", vec!["--base-vertices", "20", "--base-edges", "30"]),
    ] {
        for d in [&a, &b] {
            let mut args = vec!["run", "--instance", inst, "--seed", "5", "--out", d.path().to_str().unwrap()];
            args.extend(&extra);
            ok(&args);
        }
        for entry in std::fs::read_dir(a.path()).unwrap() {
            let name = entry.unwrap().file_name();
            if name == "manifest.json" {
                continue;
            }
            assert_eq!(read(&a.path().join(&name)), read(&b.path().join(&name)), "{inst}: {name:?}");
        }
    }
}

#[test]
fn manifest_reproduces_outputs() {
    let a = tempfile::tempdir().unwrap();
    ok(&["run", "--instance", "schur", "--n", "400", "--seed", "11", "--out", a.path().to_str().unwrap()]);
    let b = tempfile::tempdir().unwrap();
    let manifest = a.path().join("manifest.json");
    ok(&["run", "--config", manifest.to_str().unwrap(), "--out", b.path().to_str().unwrap()]);
    assert_eq!(read(&a.path().join("set.txt")), read(&b.path().join("set.txt")));
    assert_eq!(read(&a.path().join("runlog.jsonl")), read(&b.path().join("runlog.jsonl")));
}

#[test]
fn toml_config_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "n = 6\nw = 2\nr = 4\n").unwrap();
    let rows = formula_rows(&ok(&["formulas", "--config", cfg.to_str().unwrap(), "--r", "3"]));
    assert_eq!(value(&rows, "D"), "15");
    std::fs::write(&cfg, "n = 6\nbogus = 1\n").unwrap();
    assert_eq!(sflab(&["formulas", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn formulas_parse_back_as_csv() {
    let rows = formula_rows(&ok(&["formulas", "--n", "6", "--w", "2", "--r", "3"]));
    assert_eq!(value(&rows, "N"), "15");
    assert_eq!(value(&rows, "D"), "15");
    let kappa: f64 = rows.iter().find(|r| &r[0] == "kappa").unwrap()[1].parse().unwrap();
    assert!((kappa - 0.21082).abs() < 5e-6);
    assert_eq!(value(&rows, "dominant_kernel_size"), "1");
    assert!(rows.iter().all(|r| r.len() == 4));

    let rows = formula_rows(&ok(&["formulas", "--n", "5", "--w", "1", "--r", "3"]));
    assert_eq!(value(&rows, "D"), "6");

    let dir = tempfile::tempdir().unwrap();
    ok(&["formulas", "--n", "6", "--out", dir.path().to_str().unwrap()]);
    formula_rows(&read(&dir.path().join("formulas.csv")));
}

#[test]
fn threshold_column_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "threshold", "--n", "30", "--w", "3", "--r", "3", "--trials", "60", "--multipliers", "0.1,1,10",
        "--out", dir.path().to_str().unwrap(),
    ]);
    let text = read(&dir.path().join("threshold.csv"));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["c", "p", "trials", "successes", "p_hat", "ci_lo", "ci_hi"]);
    let p_hat: Vec<f64> = rdr.records().map(|r| r.unwrap()[4].parse().unwrap()).collect();
    assert_eq!(p_hat.len(), 3);
    assert!(p_hat.windows(2).all(|w| w[0] <= w[1]), "{p_hat:?}");
}

#[test]
fn trajectory_table_satisfies_the_difference_identity() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&["trajectories", "--r", "3", "--n", "1000", "--grid", "200", "--out", dir.path().to_str().unwrap()]);
    assert!(stdout.contains("certificate holds=true"));
    assert!(dir.path().join("certificate.json").exists());
    let text = read(&dir.path().join("trajectories.csv"));
    let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    let (s2, p2, m2) = (col("s_2"), col("s_plus_2"), col("s_minus_2"));
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let x = |i: usize| rec[i].parse::<f64>().unwrap();
        assert!((x(s2) - (x(p2) - x(m2))).abs() <= 1e-6 * x(s2).abs().max(1e-12), "{rec:?}");
        rows += 1;
    }
    assert_eq!(rows, 200);
}

#[test]
fn goodevent_on_a_recorded_run_starts_at_minus_n_phi_delta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let n = 200u64;
    ok(&["run", "--instance", "schur", "--n", "200", "--seed", "3", "--snapshot-every", "2", "--cap-steps", "12", "--out", out]);
    let log = dir.path().join("runlog.jsonl");
    let ge = dir.path().join("ge");
    ok(&["goodevent", "--input", log.to_str().unwrap(), "--out", ge.to_str().unwrap()]);
    let report = read(&ge.join("goodevent.txt"));
    let line = report.lines().find(|l| l.starts_with("step=0 t=0 ")).expect("step 0 row");
    let z: f64 = line
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("z_v="))
        .unwrap()
        .parse()
        .unwrap();
    let big_n = (2 * n - 1) as f64;
    let phi = (n as f64).powf(-1.0 / 3.0);
    assert_eq!(z, -big_n * phi.powf(0.1));
    assert!(read(&ge.join("deviation.csv")).starts_with("i,t,resid_V,"));
}

#[test]
fn conditions_report_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&["conditions", "--instance", "hfree:triangle", "--n", "8", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("condition ")).count(), 5);
    let json: serde_json::Value = serde_json::from_str(&read(&dir.path().join("conditions.json"))).unwrap();
    assert_eq!(json["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn invalid_input_exits_nonzero() {
    assert_eq!(sflab(&["run", "--instance", "nope"]).status.code(), Some(2));
    assert_eq!(sflab(&["formulas", "--n", "3", "--w", "3"]).status.code(), Some(2));
    assert_eq!(sflab(&["verify"]).status.code(), Some(2));
    assert_ne!(sflab(&["bogus"]).status.code(), Some(0));
}
