use predrisk_web::{arm_curves_inner, pvalue_inner, split_curves_inner};

#[test]
fn la_arms_match_library() {
    let r = arm_curves_inner(2_000_000, 2_000_000, 2e-7, 1e-7, 0.0).unwrap();
    assert!((r.exposed.masses[0] - 0.670320046).abs() < 1e-6);
    assert!((r.p_exposed_more - 0.2801).abs() < 1e-3);
    assert!((r.effective_rr.unwrap() - 1.8187).abs() < 1e-3);
}

#[test]
fn concentration_switches_to_predictive() {
    let plug = arm_curves_inner(2_000_000, 2_000_000, 2.0034e-4, 1.89e-4, 0.0).unwrap();
    let pred = arm_curves_inner(2_000_000, 2_000_000, 2.0034e-4, 1.89e-4, 6.6e5).unwrap();
    assert!(pred.exposed.masses.len() > plug.exposed.masses.len());
    assert!(pred.p_exposed_more < plug.p_exposed_more);
}

#[test]
fn split_and_pvalue() {
    let r = split_curves_inner(2_000_000, 2_000_000, 2.0034e-4, 1.89e-4, 0.0, 0.9999).unwrap();
    assert_eq!((r.split.mode, r.all_low.mode), (778, 756));
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"best_case\":239"));
    let p = pvalue_inner(15, 1000, 5, 1000, true).unwrap();
    assert!((p.p_value - 0.0431).abs() < 1e-3);
    assert_eq!(p.relative_risk, Some(3.0));
}

#[test]
fn bad_input_is_a_message() {
    let err = arm_curves_inner(10, 10, 1.5, 0.1, 0.0).err().unwrap();
    assert!(err.contains("p_exposed"), "{err}");
    assert!(pvalue_inner(3, 2, 0, 1, true).is_err());
}
