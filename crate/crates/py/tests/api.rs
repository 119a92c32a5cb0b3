use pyspackle::{analyze_json, concatenate_json, epsilon_json, gadget_json, sparsify_json};

fn s(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

#[test]
fn analyze_422() {
    let v = analyze_json(&s(&["XXXX", "ZZZZ"]), None).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["distance"], "2");
}

#[test]
fn sparsify_422_keeps_parameters() {
    let v = sparsify_json(&s(&["XXXX", "ZZZZ"]), "complete", 0, None).unwrap();
    assert_eq!(v["k_preserved"], true);
    assert_eq!(v["d_preserved"], true);
    assert!(v["circuit"].as_str().unwrap().contains("POST"));
}

#[test]
fn gadget_and_concat() {
    let g = gadget_json("ZZZ", "complete", 0).unwrap();
    assert_eq!(g["edges"].as_array().unwrap().len(), 3);
    let c = concatenate_json(&s(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]), 2).unwrap();
    assert_eq!(c["n"], 25);
    assert_eq!(c["rank"], 24);
    assert_eq!(c["structurally_valid"], true);
}

#[test]
fn epsilon_and_errors() {
    let e = epsilon_json(5, 3, 5, 1, 15).unwrap();
    assert_eq!(e["n"], "375");
    assert_eq!(e["d"], "3");
    assert!(epsilon_json(5, 1, 0, 1, 15).is_err());
    assert!(analyze_json(&s(&["XQ"]), None).is_err());
    assert!(sparsify_json(&s(&["XXXX"]), "bogus", 0, None).is_err());
}
