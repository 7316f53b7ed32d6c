use proptest::prelude::*;

use super::*;
use crate::gw::from_json;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errout = Vec::new();
    let argv = std::iter::once("quadenum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut errout);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(errout).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out.trim_end().to_string()
}

fn ok_json(args: &[&str]) -> Value {
    let mut v = args.to_vec();
    v.push("--json");
    serde_json::from_str(&ok(&v)).unwrap()
}

#[test]
fn chi_commands() {
    assert_eq!(ok(&["chi", "pn", "2"]), "⟨1⟩ + h");
    assert_eq!(ok(&["chi", "diagonal", "--m", "3", "--coeffs", "1,1,1,1"]), "⟨3⟩ + 4h");
    assert_eq!(ok(&["chi", "diagonal", "--m", "3", "--coeffs", "1,1,1,1", "--recursive"]), "⟨3⟩ + 4h");
    let v = ok_json(&["chi", "diagonal", "--m", "3", "--coeffs", "1,1,1,1"]);
    assert_eq!(v["invariants"]["rank"], 9);
    assert_eq!(ok(&["chi", "curve", "--genus", "3"]), "-2h");
    assert_eq!(ok(&["chi", "cellular", "--counts", "1,2,1"]), "2h");
    assert_eq!(ok(&["chi", "quadric", "--coeffs", "1,1,1,-1"]), "2⟨2⟩ + h");
    assert_eq!(ok(&["chi", "dinv", "--twisted", "4", "--untwisted", "-2"]), "3");
    assert_eq!(call(&["chi", "dinv", "--twisted", "9", "--untwisted", "8"]).0, 1);
    assert_eq!(ok(&["--field", "R", "chi", "quadric", "--coeffs", "1,1,1,-1"]), "2⟨+⟩ + h");
    assert_eq!(ok(&["chi", "pn", "3", "--field", "Fp:7"]), "2h");
}

#[test]
fn rh_commands() {
    let (code, out, _) = call(&["rh", "verify", "--map", "t^2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("lhs = h\nrhs = h\nholds = true"), "{out}");
    let (code, out, _) = call(&["rh", "verify", "--map", "t^2", "--plus-inverse"]);
    assert_eq!(code, 2);
    assert!(out.contains("holds = false"));
    let v = ok_json(&["rh", "verify", "--map", "t + 1/t"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["lhs"]["invariants"]["rank"], 2);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert!(ok(&["rh", "hyperelliptic", "--poly", "x*(x-1)*(x-2)*(x-3)"]).starts_with("lhs = 2h\nrhs = 2h"));
    assert!(ok(&["--field", "Fp:7", "--seed", "3", "rh", "verify", "--map", "t^3 - 3*t"]).contains("holds = true"));
    // an inseparable map is an input error, not a failed identity
    assert_eq!(call(&["--field", "Fp:3", "rh", "verify", "--map", "t^3"]).0, 1);
}

#[test]
fn gw_and_local_commands() {
    assert_eq!(ok(&["gw", "eval", "--expr", "<1> + <1> + <-1>"]), "⟨1⟩ + h");
    assert_eq!(ok(&["gw", "equal", "--lhs", "<1,1>", "--rhs", "<2,2>"]), "true");
    assert_eq!(ok(&["gw", "equal", "--lhs", "<1,1>", "--rhs", "<3,3>"]), "false");
    let inv = ok(&["gw", "invariants", "--diag", "-1,-1"]);
    assert!(inv.contains("signature = -2"));
    assert!(inv.contains("hasse = [inf:-1, 2:-1]"), "{inv}");
    let v = ok_json(&["gw", "invariants", "--diag", "1,1,-1,-3"]);
    assert_eq!(v["invariants"]["witt_index"], 1);
    assert_eq!(v["invariants"]["disc"], 3);
    assert_eq!(ok(&["trace", "--modulus", "T^2 + 1"]), "h");
    assert_eq!(ok(&["trace", "--modulus", "T^2 - 2"]), "⟨1⟩ + ⟨2⟩");
    assert_eq!(ok(&["trace", "--modulus", "T^2 - 2", "--unit", "T"]), "h");
    assert_eq!(ok(&["index", "hessian", "--jet", "0,1,0"]), "⟨-1⟩");
    assert_eq!(ok(&["index", "hessian", "--jet", "1,0,1"]), "⟨1⟩");
    assert_eq!(ok(&["index", "diag", "--units", "3,5", "--exponents", "1,1"]), "⟨15⟩");
    assert_eq!(ok(&["index", "diag", "--units", "3", "--exponents", "2"]), "h");
    assert_eq!(ok(&["index", "diag", "--modulus", "T^2 - 2", "--units", "1", "--exponents", "1"]), "⟨1⟩ + ⟨2⟩");
}

#[test]
fn input_errors_exit_one() {
    for args in [
        vec!["gw", "eval", "--expr", "<1> + k"],
        vec!["--field", "Fp:9", "chi", "pn", "2"],
        vec!["--field", "Fp:2", "chi", "pn", "2"],
        vec!["chi", "quadric", "--coeffs", "1,0,1"],
        vec!["trace", "--modulus", "T^2"],
        vec!["index", "hessian", "--jet", "1,2"],
        vec!["rh", "verify", "--map", "3"],
        vec!["frobnicate"],
        vec![],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

fn element_text() -> impl Strategy<Value = String> {
    let class = prop::sample::select(vec![-30i64, -15, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 11, 13]);
    prop::collection::vec((class, -3i64..=3), 0..6).prop_map(|ts| {
        ts.iter().fold("0".to_string(), |acc, (a, c)| {
            let sign = if *c < 0 { '-' } else { '+' };
            format!("{acc} {sign} {}<{a}>", c.abs())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn json_output_round_trips(text in element_text()) {
        let x = parse_gw(Field::Rational, &text).unwrap();
        let v = ok_json(&["gw", "eval", "--expr", &text]);
        prop_assert_eq!(from_json(&v).unwrap(), x.clone());
        prop_assert_eq!(&v["invariants"]["rank"], &json!(x.rank()));
        let printed = ok(&["gw", "eval", "--expr", &text]);
        prop_assert!(gw_equal(&parse_gw(Field::Rational, &printed).unwrap(), &x).unwrap());
    }

    #[test]
    fn verify_exit_code_tracks_holds(c in prop::collection::vec(-3i64..=3, 2..5), plus in any::<bool>()) {
        prop_assume!(c[1..].iter().any(|&a| a != 0));
        let f = Poly::from_i64s(&Rationals, &c);
        let text = f.to_string_in("t");
        let mut args = vec!["rh", "verify", "--map", text.as_str(), "--json"];
        if plus {
            args.push("--plus-inverse");
        }
        let (code, out, _) = call(&args);
        let v: Value = serde_json::from_str(&out).unwrap();
        prop_assert_eq!(code == 2, v["holds"] == false);
        prop_assert!(code == 0 || code == 2);
    }
}
