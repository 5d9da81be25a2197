use linecfg::cli::run_with;
use linecfg::stab::FdrtPoint;
use linecfg::trees::StratumType;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("linecfg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("linecfg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn euler_values() {
    assert_eq!(ok(&["euler", "-s", "P", "-n", "4"]), "27\n");
    assert_eq!(ok(&["euler", "-s", "L", "-n", "5"]), "120\n");
}

#[test]
fn table_matches_euler() {
    let table = ok(&["table", "--max-n", "7"]);
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "space,1,2,3,4,5,6,7");
    assert_eq!(lines[1], "P,1,2,6,27,170,1390,13979");
    assert_eq!(lines[2], "L,1,2,6,24,120,720,5040");
    for (row, space) in lines[1..].iter().zip(["P", "L"]) {
        let values: Vec<String> = (1..=7)
            .map(|n| ok(&["euler", "-s", space, "-n", &n.to_string()]).trim().to_string())
            .collect();
        assert_eq!(*row, format!("{space},{}", values.join(",")));
    }
}

#[test]
fn strata_formats() {
    let json = ok(&["strata", "-s", "P", "-n", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["strata"].as_array().unwrap().len(), 8);
    assert_eq!(v["total_chi"], 6);
    assert_eq!(v["total_epoly"], serde_json::json!([1, 4, 1]));

    let csv = ok(&["strata", "-s", "L", "-n", "3", "--csv"]);
    assert_eq!(csv.lines().count(), 14);

    let dot = ok(&["strata", "-s", "P", "-n", "2", "--dot"]);
    assert_eq!(dot.matches("graph").count(), 2);

    let table = ok(&["strata", "-s", "L", "-n", "2"]);
    assert!(table.contains("chi = 2"));
}

#[test]
fn epoly_and_universal() {
    assert_eq!(ok(&["epoly", "-s", "P", "-n", "3"]), "q^2 + 4q + 1\n");
    assert_eq!(ok(&["epoly", "-s", "L", "-n", "3"]), "q^2 + 4q + 1\n");
    assert!(ok(&["check-universal", "-s", "P", "-n", "4"]).ends_with("equal\n"));
}

#[test]
fn limit_from_marks_and_file() {
    let out = ok(&["limit", "--marks", "t^-1, 2*t^-1, 0"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ty: StratumType = v["type"].as_str().unwrap().parse().unwrap();
    assert_eq!(ty.component_count(), 4);

    let path = temp_file("limit.json", r#"{"marks": ["1", "2", "t + 1"], "chart": "multiplicative"}"#);
    let out = ok(&["limit", "--input", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 1);

    assert!(ok(&["limit", "--marks", "0, 1", "--dot"]).contains("graph"));
}

#[test]
fn degenerate_reports_seeds_and_is_deterministic() {
    let args = ["degenerate", "-n", "3", "--stratum", "(1|2,3)"];
    let out = ok(&args);
    let header = out.lines().next().unwrap();
    assert!(header.contains("seeds 11,23,37,41,53"), "{header}");
    let types: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(types.len(), 2, "{out}");
    assert_eq!(ok(&args), out);

    let mut single = vec!["--jobs", "1"];
    single.extend(args);
    let mut many = vec!["--jobs", "3"];
    many.extend(args);
    assert_eq!(ok(&single), ok(&many));

    let custom = ok(&["degenerate", "-n", "3", "--stratum", "(1,2,3)", "--seeds", "5,6", "--all"]);
    assert!(custom.lines().next().unwrap().contains("seeds 5,6"));
}

#[test]
fn jobs_do_not_change_catalogs() {
    let a = ok(&["--jobs", "1", "strata", "-s", "P", "-n", "5", "--csv"]);
    let b = ok(&["--jobs", "4", "strata", "-s", "P", "-n", "5", "--csv"]);
    assert_eq!(a, b);
}

#[test]
fn insert_and_forget() {
    let seed = r#"{"t": "0", "tree": {"n": 1, "root": {"kind": "leaf", "speed": "1", "marks": [1], "positions": {"1": "0"}}}}"#;
    let path = temp_file("seed.json", seed);
    let (code, out, err) = run(&["insert", "--point", path.to_str().unwrap(), "--at", r#"{"vertex": [], "at": "infinity"}"#]);
    assert_eq!(code, 0, "{err}");
    let two = FdrtPoint::from_json(&out).unwrap();
    assert_eq!(two.canonical_type().to_string(), "⟨∞: {1},{2}⟩");

    let path = temp_file("two.json", &out);
    let out = ok(&["forget", "--point", path.to_str().unwrap(), "--mark", "2"]);
    let one = FdrtPoint::from_json(&out).unwrap();
    assert_eq!(one.n(), 1);
    assert_eq!(one.canonical_type().component_count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["euler", "-s", "Q", "-n", "3"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["limit"]).0, 2);
    assert_eq!(run(&["degenerate", "-n", "3", "--stratum", "(1|2)"]).0, 2);

    let (code, _, err) = run(&["euler", "-s", "P", "-n", "12"]);
    assert_eq!(code, 4);
    assert!(err.contains("12"));
    assert_eq!(run(&["table", "--max-n", "9"]).0, 4);

    // a mark known only modulo t^0 cannot be placed
    let (code, _, err) = run(&["limit", "--marks", "O(t^0), 1"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("linecfg-out-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    assert_eq!(ok(&["euler", "-s", "P", "-n", "3", "-o", p]), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "6\n");
}
