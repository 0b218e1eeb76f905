use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermitian")).args(args).env_remove("HERMITIAN_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_examples() {
    let o = run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "2", "--method", "closed"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{\"p\":3,\"k\":1,\"t\":1,\"n\":2,\"count\":\"28\",\"method\":\"closed\"}\n");
    let o = run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "3", "--method", "closed"]);
    assert!(stdout(&o).contains("\"count\":\"28\""));
    let o = run(&["count", "--p", "2", "--k", "1", "--t", "0", "--n", "5", "--method", "closed", "--format", "csv"]);
    assert_eq!(stdout(&o), "p,k,t,n,count,method\n2,1,0,5,33,closed\n");
}

#[test]
fn count_methods_agree() {
    let mut outputs = Vec::new();
    for m in ["brute", "fiber", "subgroup", "closed"] {
        let o = run(&["count", "--p", "2", "--k", "2", "--t", "1", "--n-max", "6", "--method", m, "--format", "csv"]);
        assert!(o.status.success());
        let counts: Vec<String> =
            stdout(&o).lines().skip(1).map(|l| l.split(',').nth(4).unwrap().to_string()).collect();
        outputs.push(counts);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let o = run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "2", "--method", "corollary12"]);
    assert!(stdout(&o).contains("\"count\":\"28\",\"method\":\"formula\""));
}

#[test]
fn printed_formula_violating_the_bound_is_an_error() {
    let o = run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "2", "--method", "theorem11"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Hasse-Weil"));
}

#[test]
fn error_exit_codes() {
    assert_eq!(run(&["count", "--p", "4", "--k", "1", "--t", "1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "40", "--method", "brute"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--p", "3", "--k", "1", "--t", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--p", "3", "--k", "1", "--t", "1", "--n", "2", "--budget-brute", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["lpoly", "--p", "3", "--k", "3", "--t", "1"]).status.code(), Some(3));
}

#[test]
fn lpoly_examples() {
    for (t, k, p, expect) in [
        ("0", "1", "3", r#""coeffs":["1","0","3"]"#),
        ("1", "1", "2", r#""coeffs":["1","0","2"]"#),
        ("1", "1", "3", r#"{"q":"3","genus":3,"coeffs":["1","0","9","0","27","0","27"]}"#),
    ] {
        let o = run(&["lpoly", "--p", p, "--k", k, "--t", t]);
        assert!(o.status.success());
        assert!(stdout(&o).contains(expect), "{}", stdout(&o));
    }
    let o = run(&["lpoly", "--p", "3", "--k", "1", "--t", "1", "--format", "table"]);
    assert!(stdout(&o).contains("L(T) = 1 + 9T^2 + 27T^4 + 27T^6"));
}

#[test]
fn divides_examples() {
    let get = |a: &str, b: &str| {
        let o = run(&["divides", "--a", a, "--b", b]);
        assert!(o.status.success());
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap()
    };
    let v = get("3,1,1", "3,3,1");
    assert_eq!((v["divides"].as_bool(), v["period_filter"].as_bool()), (Some(true), Some(true)));
    let v = get("2,2,1", "2,3,1");
    assert_eq!((v["divides"].as_bool(), v["period_filter"].as_bool()), (Some(false), Some(false)));
    let v = get("2,1,1", "2,2,1");
    assert_eq!((v["divides"].as_bool(), v["period_filter"].as_bool()), (Some(false), Some(true)));
    assert_eq!(run(&["divides", "--a", "2,1,1", "--b", "3,1,1"]).status.code(), Some(2));
}

#[test]
fn verify_single_config_and_report_file() {
    let dir = std::env::temp_dir().join(format!("hermitian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let o = run(&[
        "verify",
        "--p",
        "3",
        "--k",
        "1",
        "--t",
        "1",
        "--n-max",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let report = std::fs::read_to_string(&path).unwrap();
    let counts: Vec<&str> =
        report.lines().skip(1).take_while(|l| !l.is_empty()).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(counts, ["4", "28", "28", "28"]);
    assert!(report.contains("3,1,1,2,-16,-6,false"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "--p", "2", "--k", "1", "--t", "0-2", "--n-max", "5", "--format", "json", "--threads", "1"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let json_end = text.rfind("}\n").unwrap() + 1;
    let v: serde_json::Value = serde_json::from_str(&text[..json_end]).unwrap();
    assert_eq!(v["passed"], true);
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn verify_empty_range() {
    let o = run(&["verify", "--n-max", "0", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("p,k,t,n,count,brute,fiber,subgroup,agree\n\n"));
}

#[test]
fn threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hermitian"))
        .args(["count", "--p", "2", "--k", "1", "--t", "1", "--n", "8", "--method", "fiber"])
        .env("HERMITIAN_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_hermitian"))
        .args(["count", "--p", "2", "--k", "1", "--t", "1", "--n", "8"])
        .env("HERMITIAN_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_rows() {
    let o = run(&[
        "bench",
        "--p",
        "2",
        "--k",
        "2",
        "--t",
        "1",
        "--n-min",
        "2",
        "--n-max",
        "14",
        "--format",
        "csv",
        "--budget-brute",
        "1048576",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,n,field_size,seconds"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.iter().filter(|r| r[0] == "closed").count(), 13);
    // Brute force stops once p^(2n) leaves the budget.
    assert!(rows.iter().filter(|r| r[0] == "brute").all(|r| r[1].parse::<u32>().unwrap() <= 10));
}
