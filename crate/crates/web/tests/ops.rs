use serde_json::Value;
use tradeoff_web::{boundaries_json, curves_json, simulate_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn boundaries_for_table1() {
    let v = parse(boundaries_json(0.0, 9.0, 9.0, 4.0, 0.5, 1.0).unwrap());
    let roots: Vec<f64> = v["roots"].as_array().unwrap().iter().map(|r| r.as_f64().unwrap()).collect();
    assert!((roots[0] - 3.65).abs() < 0.01 && (roots[1] - 18.78).abs() < 0.01);
    assert!((v["accuracy"].as_f64().unwrap() - 0.7891).abs() < 5e-4);
    assert!((v["sensitivity_inf"].as_f64().unwrap() - 0.0334).abs() < 1e-3);
    assert_eq!(v["xs"].as_array().unwrap().len(), 400);
    assert_eq!(v["weighted_f1"].as_array().unwrap().len(), 400);
}

#[test]
fn invalid_inputs_are_errors() {
    assert!(boundaries_json(0.0, -1.0, 9.0, 4.0, 0.5, 1.0).is_err());
    assert!(boundaries_json(0.0, 9.0, 9.0, 4.0, 1.5, 1.0).is_err());
    assert!(curves_json(0.0, 9.0, 9.0, 4.0, 0.5, "one", 10, 100).is_err());
    assert!(curves_json(0.0, 9.0, 9.0, 4.0, 0.5, "inf", 0, 100).is_err());
    assert!(simulate_json(0.0, 9.0, 9.0, 4.0, 0.5, 1.0, [0.0, 0.0, 0.0, -5.0], 10, 1, 0).is_err());
}

#[test]
fn curves_end_at_the_ml_optimum() {
    let v = parse(curves_json(0.0, 9.0, 9.0, 4.0, 0.5, "inf", 15, 150).unwrap());
    let general = v["general"].as_array().unwrap();
    assert!(general.len() >= 10);
    let last = general.last().unwrap();
    let opt = &v["ml_optimum"];
    assert!((last[0].as_f64().unwrap() - opt[0].as_f64().unwrap()).abs() < 1e-6);
    assert!((last[1].as_f64().unwrap() - opt[1].as_f64().unwrap()).abs() < 1e-3);
    assert!(!v["ml"].as_array().unwrap().is_empty() && !v["linear"].as_array().unwrap().is_empty());
}

#[test]
fn simulation_is_seeded() {
    let run = || simulate_json(0.0, 9.0, 9.0, 4.0, 0.5, 1.0, [0.0, 0.0, 0.0, 3.0], 2000, 10, 42).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v = parse(a);
    assert!((v["mean_accuracy"].as_f64().unwrap() - 0.6857).abs() < 0.02);
    assert_eq!(v["per_trial_accuracy"].as_array().unwrap().len(), 10);
}
