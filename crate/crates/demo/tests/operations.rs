use mwknot_demo::{diagram_svgs, identify_json, specimen_json, writhe_json};

#[test]
fn twisted_cubic_round_trip() {
    let src = specimen_json(3).unwrap();
    let w: serde_json::Value = serde_json::from_str(&writhe_json(&src, 0).unwrap()).unwrap();
    assert_eq!(w["report"]["w"], 1);
    let [a, b] = diagram_svgs(&src, 0).unwrap();
    assert!(a.starts_with("<svg") && b.starts_with("<svg"));
    let r: serde_json::Value = serde_json::from_str(&identify_json(&src, 0, 24).unwrap()).unwrap();
    assert_eq!(r["verdict"], "CONSISTENT");
}

#[test]
fn quartic_specimen_identifies() {
    let src = specimen_json(4).unwrap();
    let r: serde_json::Value = serde_json::from_str(&identify_json(&src, 1, 24).unwrap()).unwrap();
    assert_eq!(r["verdict"], "CONSISTENT");
    assert_eq!(r["components"], 2);
}

#[test]
fn bad_input_is_reported() {
    assert!(writhe_json("{", 0).is_err());
    let cusp = r#"{"degree":4,"coeffs":[["1"],["0","0","1"],["0","0","0","1"],["0","0","0","0","1"]]}"#;
    assert!(writhe_json(cusp, 0).unwrap_err().contains("not smooth"));
}
