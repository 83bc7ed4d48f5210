//! End-to-end behaviour of the command-line front end.

use donaldson::cli::{self, catalog, doc};
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], input: &str) -> Out {
    let mut argv = vec!["donaldson"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn ok(args: &[&str], input: &str) -> String {
    let o = run(args, input);
    assert_eq!(o.code, 0, "{args:?} failed: {}", o.stderr);
    o.stdout
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn classes(basic: &str) -> Vec<Vec<i64>> {
    json(basic)
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["K"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        .collect()
}

#[test]
fn catalog_fixtures_round_trip_byte_identically() {
    let names: Vec<String> = catalog::catalog().unwrap().into_iter().map(|f| f.name.to_string()).collect();
    let listing = json(&ok(&["catalog"], ""));
    let listed: Vec<&str> =
        listing["fixtures"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert_eq!(listed, names);
    for name in &names {
        let text = ok(&["catalog", name], "");
        let series = doc::series_from(&json(&text)).unwrap();
        let again = serde_json::to_string_pretty(&doc::series_value(&series)).unwrap();
        assert_eq!(again.trim_end(), text.trim_end(), "{name}");
    }
}

#[test]
fn basic_classes_of_two_class_fixture() {
    let doc = ok(&["catalog", "two-class"], "");
    assert_eq!(classes(&ok(&["basic-classes"], &doc)), vec![vec![-1, -1], vec![1, 1]]);
    let order = json(&ok(&["order"], &doc));
    assert_eq!(order["order"], 1);
    assert_eq!(order["closed_form"], 1);
}

#[test]
fn cosh_blow_up_gives_k_plus_minus_e() {
    let doc = ok(&["catalog", "two-class"], "");
    let blown = ok(&["blowup", "--variant", "cosh"], &doc);
    let got = classes(&ok(&["basic-classes"], &blown));
    assert_eq!(got, vec![vec![-1, -1, -1], vec![-1, -1, 1], vec![1, 1, -1], vec![1, 1, 1]]);
    let basic = json(&ok(&["basic-classes"], &blown));
    assert!(basic.as_array().unwrap().iter().all(|e| e["poly"]["0,0,0,0"] == "1/4"));
}

#[test]
fn expand_then_fit_recovers_fixture() {
    let doc = ok(&["catalog", "rank4"], "");
    let g = ok(&["expand", "--cutoff", "9", "--lambda-cutoff", "3"], &doc);
    let fit = json(&ok(&["fit"], &g));
    assert_eq!(fit["residual"]["nonzero"], 0);
    assert_eq!(fit["series"], json(&doc));
}

#[test]
fn fixtures_pass_symmetry_check() {
    for f in catalog::catalog().unwrap() {
        let doc = ok(&["catalog", f.name], "");
        ok(&["symmetry-check", "--cutoff", "6", "--lambda-cutoff", "2"], &doc);
    }
}

#[test]
fn validation_errors_exit_with_two() {
    let o = run(&["order"], "{}");
    assert_eq!(o.code, 2);
    assert_eq!(json(&o.stderr)["error"]["kind"], "parse");
    assert!(o.stdout.is_empty());
    assert_eq!(run(&["catalog", "no-such-fixture"], "").code, 2);
    assert_eq!(run(&["min-genus", "--surface", "1"], &ok(&["catalog", "two-class"], "")).code, 2);
}

#[test]
fn broken_symmetry_exits_with_three() {
    let mut doc = json(&ok(&["catalog", "two-class"], ""));
    doc.as_object_mut().unwrap().remove("flags");
    let terms = doc["terms"].as_array_mut().unwrap();
    let minus = terms.iter_mut().find(|t| t["sector"] == "minus").unwrap();
    minus["poly"] = json(r#"{"0,0,0": "7"}"#);
    let o = run(&["symmetry-check"], &doc.to_string());
    assert_eq!(o.code, 3, "{}", o.stderr);
}

#[test]
fn off_grid_data_is_rejected_by_fit() {
    let doc = ok(&["catalog", "two-class"], "");
    let g = ok(&["expand", "--cutoff", "10", "--lambda-cutoff", "3"], &doc);
    let o = run(&["fit", "--bound", "0"], &g);
    assert_eq!(o.code, 3, "{}", o.stderr);
}
