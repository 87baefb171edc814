//! Command-line behavior: exit codes, file formats, config echo, resume.

use std::fs;
use std::path::Path;

use weilscan_cli::{run, EXIT_INVALID, EXIT_OK, EXIT_PARTIAL};

fn weilscan(args: &[&str]) -> i32 {
    let mut argv = vec!["weilscan"];
    argv.extend_from_slice(args);
    run(argv)
}

fn json_result(path: &Path) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["tool"], "weilscan");
    assert!(doc["version"].is_string());
    assert!(doc["config"].is_object(), "config echo present");
    doc["result"].clone()
}

#[test]
fn rejects_composite_prime_arguments() {
    assert_eq!(
        weilscan(&["search-pointless", "--genus", "2", "--prime", "12"]),
        EXIT_INVALID
    );
    assert_eq!(
        weilscan(&["kloosterman", "vertical", "--prime", "4"]),
        EXIT_INVALID
    );
}

#[test]
fn rejects_unknown_flags_and_subcommands() {
    assert_eq!(weilscan(&["search-pointless", "--bogus"]), EXIT_INVALID);
    assert_eq!(weilscan(&["no-such-command"]), EXIT_INVALID);
}

#[test]
fn search_pointless_reports_witnesses_at_11_and_none_at_13() {
    let dir = tempfile::tempdir().unwrap();
    let out11 = dir.path().join("p11.json");
    assert_eq!(
        weilscan(&[
            "search-pointless",
            "--genus",
            "2",
            "--prime",
            "11",
            "--out",
            out11.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let r11 = json_result(&out11);
    assert!(!r11["pointless_found"].as_array().unwrap().is_empty());
    assert_eq!(r11["all_have_points"], false);

    let out13 = dir.path().join("p13.json");
    assert_eq!(
        weilscan(&[
            "search-pointless",
            "--genus",
            "2",
            "--prime",
            "13",
            "--out",
            out13.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let r13 = json_result(&out13);
    assert!(r13["pointless_found"].as_array().unwrap().is_empty());
    assert_eq!(r13["all_have_points"], true);
    assert_eq!(r13["total_equations_examined"], serde_json::json!(371293));
}

#[test]
fn vertical_csv_matches_the_hand_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v5.csv");
    assert_eq!(
        weilscan(&[
            "kloosterman",
            "vertical",
            "--prime",
            "5",
            "--out",
            out.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# family: vertical p=5 diagonal (c,d)=(1,a)"));
    assert!(text.contains("# config: prime=5 full-grid=false"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("p,"))
        .collect();
    assert_eq!(rows.len(), 4);
    let expected = [0.381966, -3.236068, 1.236068, 2.618034];
    for (row, want) in rows.iter().zip(expected) {
        let t: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!((t - want).abs() < 1e-6, "{row}");
    }
}

#[test]
fn horizontal_csv_covers_primes_up_to_13() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    assert_eq!(
        weilscan(&[
            "kloosterman",
            "horizontal",
            "--c",
            "1",
            "--d",
            "1",
            "--max-prime",
            "13",
            "--out",
            out.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let text = fs::read_to_string(&out).unwrap();
    let ps: Vec<u64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("p,"))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ps, vec![3, 5, 7, 11, 13]);
    assert!(text.contains("skipped-primes: count=0"));
}

#[test]
fn equidist_reports_and_guards() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v101.csv");
    assert_eq!(
        weilscan(&[
            "kloosterman",
            "vertical",
            "--prime",
            "101",
            "--out",
            csv.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let out = dir.path().join("gof.json");
    assert_eq!(
        weilscan(&[
            "equidist",
            "--input",
            csv.to_str().unwrap(),
            "--bins",
            "8",
            "--out",
            out.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let r = json_result(&out);
    assert_eq!(r["family"], "vertical p=101 diagonal (c,d)=(1,a)");
    assert_eq!(r["N"], 100);
    assert!(r["ks"].as_f64().unwrap() > 0.0);
    assert!(r["chi2"]["dof"] == 7);
    assert!(r["moments"]["expected_mean_cos_sq"].as_f64().unwrap() == 0.25);

    // ks-only selection drops the optional sections
    let slim = dir.path().join("slim.json");
    assert_eq!(
        weilscan(&[
            "equidist",
            "--input",
            csv.to_str().unwrap(),
            "--tests",
            "ks",
            "--out",
            slim.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let r = json_result(&slim);
    assert!(r.get("chi2").is_none());
    assert!(r.get("moments").is_none());

    assert_eq!(
        weilscan(&["equidist", "--input", csv.to_str().unwrap(), "--tests", "anova"]),
        EXIT_INVALID
    );

    // chi-square floor: 100 samples cannot feed 64 bins
    assert_eq!(
        weilscan(&["equidist", "--input", csv.to_str().unwrap(), "--bins", "64"]),
        EXIT_INVALID
    );
}

#[test]
fn equidist_rejects_empty_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "p,c,d,t_value,theta\n").unwrap();
    assert_eq!(
        weilscan(&["equidist", "--input", empty.to_str().unwrap()]),
        EXIT_INVALID
    );

    let malformed = dir.path().join("bad.csv");
    fs::write(
        &malformed,
        "p,c,d,t_value,theta\n5,1,1,3.81966011250e-1,1.48528194463e0\n5,0,1,zzz,0\n",
    )
    .unwrap();
    assert_eq!(
        weilscan(&["equidist", "--input", malformed.to_str().unwrap()]),
        EXIT_INVALID
    );

    let missing = dir.path().join("nope.csv");
    assert_eq!(
        weilscan(&["equidist", "--input", missing.to_str().unwrap()]),
        EXIT_INVALID
    );
}

#[test]
fn comparison_mode_emits_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.csv");
    let h = dir.path().join("h.csv");
    assert_eq!(
        weilscan(&["kloosterman", "vertical", "--prime", "401", "--out", v.to_str().unwrap()]),
        EXIT_OK
    );
    assert_eq!(
        weilscan(&[
            "kloosterman",
            "horizontal",
            "--max-prime",
            "3000",
            "--out",
            h.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let out = dir.path().join("cmp.json");
    assert_eq!(
        weilscan(&[
            "equidist",
            "--input",
            h.to_str().unwrap(),
            "--compare-with",
            v.to_str().unwrap(),
            "--equal-n",
            "--bins",
            "16",
            "--out",
            out.to_str().unwrap(),
        ]),
        EXIT_OK
    );
    let r = json_result(&out);
    // family roles recognized from descriptors regardless of argument order
    assert!(r["vertical"]["family"]
        .as_str()
        .unwrap()
        .starts_with("vertical"));
    assert!(r["horizontal"]["family"]
        .as_str()
        .unwrap()
        .starts_with("horizontal"));
    assert_eq!(r["vertical"]["N"], r["horizontal"]["N"]);
    assert!(r["ks_normalized_ratio"].as_f64().unwrap() > 0.0);
    assert!(r["verdict"].as_str().unwrap().contains("normalized KS"));
}

#[test]
fn interrupted_scan_exits_2_and_resumes_to_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("scan.ckpt");
    let straight = dir.path().join("straight.json");
    let partial = dir.path().join("partial.json");
    let resumed = dir.path().join("resumed.json");

    let base = [
        "search-pointless",
        "--genus",
        "2",
        "--prime",
        "7",
        "--block-size",
        "64",
    ];
    let with = |extra: &[&str], out: &Path| -> i32 {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        let out_str = out.to_str().unwrap().to_owned();
        let mut owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        owned.push("--out".into());
        owned.push(out_str);
        let mut argv = vec!["weilscan".to_string()];
        argv.extend(owned);
        run(argv)
    };

    assert_eq!(with(&[], &straight), EXIT_OK);
    assert_eq!(
        with(
            &["--checkpoint", ckpt.to_str().unwrap(), "--max-blocks", "11"],
            &partial
        ),
        EXIT_PARTIAL
    );
    assert!(ckpt.exists());
    let partial_result = json_result(&partial);
    assert_eq!(partial_result["complete"], false);
    assert_eq!(partial_result["all_have_points"], false);

    assert_eq!(with(&["--checkpoint", ckpt.to_str().unwrap()], &resumed), EXIT_OK);
    assert_eq!(
        fs::read_to_string(&straight).unwrap(),
        fs::read_to_string(&resumed).unwrap()
    );
}

#[test]
fn timing_sidecar_written_next_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    assert_eq!(
        weilscan(&["search-pointless", "--genus", "1", "--prime", "5", "--out", out.to_str().unwrap()]),
        EXIT_OK
    );
    let sidecar = dir.path().join("r.json.timing");
    let text = fs::read_to_string(sidecar).unwrap();
    assert!(text.contains("wall-time-ms:"));
    assert!(text.contains("workers:"));
}

#[test]
fn selftest_passes() {
    assert_eq!(weilscan(&["selftest"]), EXIT_OK);
}

#[test]
fn genus4_sweep_is_available_but_capped_runs_stay_partial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g4.json");
    assert_eq!(
        weilscan(&[
            "verify-precise-bound",
            "--genus",
            "4",
            "--max-prime",
            "5",
            "--out",
            out.to_str().unwrap(),
        ]),
        EXIT_PARTIAL
    );
    let r = json_result(&out);
    assert_eq!(r["status"], "partial");
    assert_eq!(r["p0"], serde_json::Value::Null);
    assert_eq!(r["verdicts"][0]["p"], 3);
    assert_eq!(r["verdicts"][0]["complete"], true);
}
