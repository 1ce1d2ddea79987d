use std::path::PathBuf;
use std::process::{Command, Output};

use regge_core::complex::format_gluing_text;
use regge_core::GluedTriangulation;

fn regge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regge")).args(args).env_remove("REGGE_MAX_TETS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regge-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &PathBuf, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

#[test]
fn analyze_reports() {
    let dir = scratch("analyze");
    let b = write(&dir, "b.txt", &format_gluing_text(&GluedTriangulation::boundary_4_simplex()));
    let o = regge(&["analyze", &b]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = stdout(&o);
    assert_eq!(value(&r, "f_vector"), "5 10 10 5");
    assert_eq!(value(&r, "mu"), "30/10");
    assert_eq!(value(&r, "mu_decimal"), "3");
    assert_eq!(value(&r, "action_normalized"), "0.874535889606");
    assert_eq!(value(&r, "automorphisms"), "120");
    assert_eq!(value(&r, "simplicial"), "true");
    assert_eq!(value(&r, "valid"), "true");

    let o = regge(&["analyze", &b, "--ell", "2"]);
    assert_eq!(value(&stdout(&o), "action_normalized"), "0.218633972401");

    let d = write(&dir, "d.txt", &format_gluing_text(&GluedTriangulation::doubled_tetrahedron()));
    let r = stdout(&regge(&["analyze", &d]));
    assert_eq!(value(&r, "simplicial"), "false");
    assert_eq!(value(&r, "signature"), "cdt1-2-2o3c404o000o1c20");
    assert_eq!(value(&r, "automorphisms"), "48");

    let bad = write(&dir, "bad.txt", "tets 1\n0 0 : 0 1 1023\n");
    let o = regge(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unglued face (0,2)"), "{}", stderr(&o));
    assert_eq!(regge(&["analyze", dir.join("missing").to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bracket_and_lambda() {
    let o = regge(&["bracket", "--tets", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    assert_eq!(value(&r, "mu_minus"), "27/5 (5.400)");
    assert_eq!(value(&r, "mu_plus"), "54/11 (4.909)");
    assert_eq!(value(&r, "guaranteed"), "false");

    let o = regge(&["bracket", "--tets", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("K = 5"));

    let o = regge(&["lambda", "--ell-m", "1.6e-35", "--vol-m3", "3.5e80", "--ratio", "2.5"]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout(&o);
    assert_eq!(value(&r, "delta_A"), "1.46285714286e-186");
    assert_eq!(value(&r, "lambda"), "1.56734693878e-187");
    assert_eq!(value(&r, "beta_g"), "74.6666666667");

    let o = regge(&["lambda", "--ell-m", "-1", "--vol-m3", "3.5e80"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_output_is_stable() {
    let o = regge(&["enumerate", "--tets", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = "\
# cdt1-1-0u06211d
tets 1
0 0 : 0 1 1023
0 2 : 0 3 0132
---
# cdt1-1-0u06291u
tets 1
0 0 : 0 1 1023
0 2 : 0 3 1230
---
# cdt1-1-0x0i291u
tets 1
0 0 : 0 1 1230
0 2 : 0 3 1230
---
# cdt1-1-0x0i2d1m
tets 1
0 0 : 0 1 1230
0 2 : 0 3 2031
K,N1,class,orientable,simplicial,count
1,2,S3,true,false,1
1,2,other(Z/4),true,false,1
1,2,other(Z/5),true,false,1
1,3,S3,true,false,1
";
    assert_eq!(stdout(&o), expected);
    let manifest: serde_json::Value = serde_json::from_str(&stderr(&o)).unwrap();
    assert_eq!(manifest["subcommand"], "enumerate");

    let dir = scratch("enumerate");
    let read = |d: &PathBuf, f: &str| std::fs::read(d.join(f)).unwrap();
    let a = dir.join("a");
    let b = dir.join("b");
    for d in [&a, &b] {
        let o = regge(&["--out", d.to_str().unwrap(), "enumerate", "--tets", "2", "--filter", "s3"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(read(&a, "census.txt"), read(&b, "census.txt"));
    assert_eq!(read(&a, "histogram.csv"), read(&b, "histogram.csv"));
    assert!(a.join("manifest.json").exists());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn enumeration_budget_is_enforced() {
    let o = regge(&["enumerate", "--tets", "12"]);
    assert_eq!(o.status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_regge"))
        .args(["enumerate", "--tets", "3"])
        .env("REGGE_MAX_TETS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn histogram_and_probe() {
    let dir = scratch("hist");
    let fixture = write(&dir, "t1.csv", &regge_core::census::DegeneracyHistogram::table1_fixture().to_csv());
    let o = regge(&["histogram", &fixture, "--class", "S3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("K,N1,mu,mu_decimal,count\n"));
    assert!(out.contains("6,7,36/7,5.143,13660\n"));
    assert!(out.contains("# ratio K=6 N1-=7 N1+=8: 2.77022916244\n"));

    let o = regge(&["probe", &fixture, "--tets", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("ell,Z_re,Z_im\n"));
    assert_eq!(out.lines().count(), 6);

    let dup = write(&dir, "dup.csv", "K,N1,class,orientable,simplicial,count\n6,7,S3,true,*,1\n6,7,S3,true,*,2\n");
    let o = regge(&["histogram", &dup]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn sample_writes_outputs() {
    let dir = scratch("sample");
    let args = ["--seed", "3", "--out", dir.to_str().unwrap(), "sample", "--tets", "6", "--steps", "20000", "--ratio-at", "6"];
    let o = regge(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["steps"], 20000);
    assert_eq!(summary["ratio"]["N1_plus"], 8);
    let visits = std::fs::read_to_string(dir.join("visits.csv")).unwrap();
    assert!(visits.starts_with("K,N1,class,orientable,simplicial,count\n"));
    let first = std::fs::read(dir.join("summary.json")).unwrap();
    assert_eq!(regge(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(dir.join("summary.json")).unwrap(), first);

    let o = regge(&["sample", "--tets", "6", "--steps", "100", "--burn-in", "100"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}
