use std::process::{Command, Output};

fn perm132(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perm132"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_brute_csv() {
    let o = perm132(&[
        "table", "--k", "3", "--n", "3", "--n-min", "3", "--mode", "brute",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,r,count\n3,0,4\n3,1,1\n");
}

#[test]
fn table_catalan_column_for_long_pattern() {
    let o = perm132(&[
        "table", "--k", "9", "--n", "4", "--mode", "cf", "--format", "json",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        concat!(
            r#"{"k":9,"rows":[{"n":0,"r":0,"count":"1"},{"n":1,"r":0,"count":"1"},"#,
            r#"{"n":2,"r":0,"count":"2"},{"n":3,"r":0,"count":"5"},{"n":4,"r":0,"count":"14"}]}"#,
            "\n"
        )
    );
}

#[test]
fn big_counts_are_strings() {
    let o = perm132(&[
        "table", "--k", "1", "--n", "40", "--r", "40", "--format", "json",
    ]);
    assert!(o.status.success());
    // Catalan(40) is far beyond 2^63
    assert!(stdout(&o).contains(r#"{"n":40,"r":40,"count":"2622127042276492108820"}"#));
}

#[test]
fn out_of_range_closed_is_usage_error() {
    let o = perm132(&[
        "table", "--k", "2", "--n", "5", "--mode", "closed", "--r", "9",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("k(k+3)/2 = 5"), "{err}");
}

#[test]
fn brute_bound_is_usage_error() {
    let o = perm132(&["table", "--k", "2", "--n", "15", "--mode", "brute"]);
    assert_eq!(o.status.code(), Some(2));
    let o = perm132(&["table", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn closed_prints_formula_and_expansion() {
    let o = perm132(&["closed", "--k", "3", "--r", "1", "--order", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,r,count\n3,1,1\n4,1,4\n5,1,12\n6,1,32\n");
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("(1*x^3) / (1 - 4*x + 4*x^2)"), "{err}");
    let o = perm132(&[
        "closed", "--k", "3", "--which", "phi0", "--order", "5", "--format", "json",
    ]);
    assert_eq!(
        stdout(&o),
        concat!(
            r#"{"k":3,"r":0,"numerator":["0","0","0","1"],"denominator":["1","-4","4"],"#,
            r#""rows":[{"n":3,"r":0,"count":"1"},{"n":4,"r":0,"count":"4"},{"n":5,"r":0,"count":"12"}]}"#,
            "\n"
        )
    );
}

#[test]
fn series_and_phi() {
    let g = perm132(&["series", "--k", "2", "--order", "1", "--which", "g"]);
    assert_eq!(stdout(&g), "n,r,count\n0,1,1\n1,3,1\n");
    let phi = perm132(&["phi", "--k", "3", "--n", "4", "--mode", "brute"]);
    let phi_cf = perm132(&["phi", "--k", "3", "--n", "4", "--mode", "cf"]);
    assert_eq!(stdout(&phi), stdout(&phi_cf));
    assert!(stdout(&phi).starts_with("n,r,count\n3,0,1\n"));
}

#[test]
fn verify_passes_and_reports() {
    let o = perm132(&["verify", "--k", "3", "--n-max", "8", "--order", "20"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS enumeration vs fraction"));
    assert!(!text.contains("FAIL"));
    let o = perm132(&["verify", "--k", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn verify_detects_injected_fault() {
    for fault in ["level-exponent", "drop-prefix-term", "closed-exponent"] {
        let o = perm132(&[
            "verify", "--k", "3", "--n-max", "6", "--order", "12", "--inject", fault,
        ]);
        assert_eq!(o.status.code(), Some(1), "{fault}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains("first mismatch at"), "{err}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("perm132-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let o = perm132(&[
        "table",
        "--k",
        "2",
        "--n",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "n,r,count\n0,0,1\n1,0,1\n2,0,1\n2,1,1\n"
    );
    std::fs::remove_dir_all(dir).unwrap();
}
