use dlal::cli::{run, Outcome};
use dlal::stdlib;

fn dlal(args: &[&str]) -> Outcome {
    run(std::iter::once("dlal").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> serde_json::Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn parse_and_size() {
    let out = dlal(&["parse", "(\\f.\\x.f (f x))"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "\\f.\\x.f (f x)\n");
    assert_eq!(dlal(&["size", "\\f.\\x.f (f x)"]).stdout, "7\n");
    let v = json(&dlal(&["--format", "json", "parse", "x y"]));
    assert_eq!(v["size"], 3);
    assert_eq!(v["free"], serde_json::json!(["x", "y"]));
}

#[test]
fn bad_input_exits_1() {
    let out = dlal(&["parse", "\\x."]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error:"));
    assert_eq!(dlal(&["check", "stdlib:nothing"]).code, 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dlal(&["frobnicate"]).code, 2);
    assert_eq!(dlal(&["normalize", "x", "--strategy", "sideways"]).code, 2);
    let help = dlal(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("infer"));
}

#[test]
fn normalize_add() {
    let out = dlal(&["normalize", "(\\n.\\m.\\f.\\x.n f (m f x)) (\\f.\\x.f x) (\\f.\\x.f (f x))", "--strategy", "ri"]);
    assert_eq!(out.code, 0);
    let nf = out.stdout.lines().next().unwrap();
    assert_eq!(nf.parse::<dlal::term::Term>().unwrap().church_value(), Some(3));
    let v = json(&dlal(&["--format", "json", "normalize", "(\\x.x) y"]));
    assert_eq!(v["count"], 1);
    assert_eq!(v["normal"], true);
}

#[test]
fn normalize_out_of_fuel() {
    let out = dlal(&["normalize", "(\\x.x x) (\\x.x x)", "--fuel", "50"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("50"));
}

#[test]
fn check_square() {
    let v = json(&dlal(&["--format", "json", "check", "stdlib:square"]));
    let ty: dlal::types::Type = v["type"].as_str().unwrap().parse().unwrap();
    assert!(ty.alpha_eq(&dlal::types::lin(dlal::types::nat(), dlal::types::par_n(4, dlal::types::nat()))));
}

#[test]
fn check_lal_counterexample() {
    assert_eq!(dlal(&["check", "stdlib:counterexample_2", "--lal"]).code, 0);
    // only a LAL certificate exists, so the DLAL checker must reject it
    assert_eq!(dlal(&["check", "stdlib:counterexample_2"]).code, 1);
}

#[test]
fn check_file_and_translate() {
    let dir = std::env::temp_dir().join(format!("dlal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("add.cert.json");
    std::fs::write(&path, stdlib::arithmetic().add.certificate.unwrap().to_json()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(dlal(&["check", p]).code, 0);
    let out = dlal(&["--format", "json", "translate", p]);
    assert_eq!(out.code, 0);
    let lal = dlal::deriv::DerivScript::from_json(&out.stdout).unwrap();
    assert!(dlal::deriv::check_nlal(&lal).is_ok());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn stratify_csv() {
    let out = dlal(&["stratify", "stdlib:add_2_3", "--csv"]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("level,entry_size,steps,exit_size"));
    assert!(lines.count() >= 1);
}

#[test]
fn infer_json() {
    let out = dlal(&["infer", "\\f.\\x.f (f x)"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    let types: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["type"].as_str().unwrap()).collect();
    assert!(types.contains(&"(a -o a) => $ (a -o a)"), "{types:?}");
    assert!(v[0]["certificate"].is_object());
}

#[test]
fn infer_counterexample_fails() {
    let t = stdlib::counterexample(2).term.to_string();
    let out = dlal(&["--format", "human", "infer", &t]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("rejected"));
    assert_eq!(dlal(&["infer", "\\x.x x"]).code, 1);
}

#[test]
fn lla_simulation() {
    let out = dlal(&["lla", "stdlib:mult_2_3", "--strategy", "random", "--seed", "4"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("strategy random(4): 19 beta steps"), "{}", out.stdout);
}

#[test]
fn bench_stdlib_and_directory() {
    let out = dlal(&["bench", "--seeds", "2"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(!out.stdout.contains("FAIL"));
    let dir = std::env::temp_dir().join(format!("dlal-bench-{}", std::process::id()));
    stdlib::write_corpus(&dir, &stdlib::corpus()[..4]).unwrap();
    let v = json(&dlal(&["--format", "json", "bench", "--corpus", dir.to_str().unwrap(), "--strategy", "lo"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["status"] == "PASS"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bench_flags_uncertified_program() {
    let dir = std::env::temp_dir().join(format!("dlal-bench-bare-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("id.lam"), "(\\x.x) (\\y.y)\n").unwrap();
    let out = dlal(&["bench", "--corpus", dir.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("no NDLAL certificate"));
    std::fs::remove_dir_all(dir).unwrap();
}
