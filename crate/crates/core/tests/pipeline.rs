use num_bigint::BigInt;

use k3poor::period::{classify_period, in_hyperplane, poor_witness_period, rationalize_plane};
use k3poor::torus::{build_example_torus, ns_exclusion};
use k3poor::{CmTorusSpec, LatticeVector, NsStatus, PeriodPlane, Verdict, WreathElement};

fn delta() -> LatticeVector {
    // a1 + e2 − 3f2, of norm −8
    let mut v = vec![0i64; 22];
    v[0] = 1;
    v[18] = 1;
    v[19] = -3;
    LatticeVector::new(v)
}

#[test]
fn witness_survives_serialization_and_rationalization_breaks_it() {
    let d = delta();
    let plane = poor_witness_period(&d, 17, 10).unwrap();
    assert!(in_hyperplane(&plane, &d).unwrap());

    let text = serde_json::to_string(&plane).unwrap();
    let back: PeriodPlane = serde_json::from_str(&text).unwrap();
    let report = classify_period(&back);
    assert_eq!(report, classify_period(&plane));
    assert_eq!(report.verdict, Verdict::PoorNegativeDefinite);
    assert_eq!(report.pic_gram, vec![vec![BigInt::from(-8)]]);

    let r = rationalize_plane(&plane, &BigInt::from(100)).unwrap();
    let after = classify_period(&r);
    assert!(after.pic_rank >= 20);
    assert_eq!(after.verdict, Verdict::NotPoor);
    assert!(after.projective);
}

#[test]
fn torus_certificate_serializes_with_schema_names() {
    let pm = build_example_torus(&CmTorusSpec::example()).unwrap();
    let cert = ns_exclusion(&pm, 100);
    assert_eq!(cert.status, NsStatus::Excluded);
    let v = serde_json::to_value(&cert).unwrap();
    assert_eq!(v["status"], "excluded");
    assert_eq!(v["H"], 100);
    assert!(v["candidate"].is_null());
    assert!(v["lll_b1_norm"].is_string());
}

#[test]
fn wreath_json_is_one_based() {
    let w: WreathElement = serde_json::from_str(r#"{"n":2,"m":2,"sigma":[2,1],"components":[[2,1],[1,2]]}"#).unwrap();
    assert_eq!(w.sigma(), &[1, 0]);
    // the 2-cycle composes to the transposition, which has no fixed point
    assert!(!w.has_fixed_point());
    assert!(!w.has_fixed_point_bruteforce(100).unwrap());
    assert!(serde_json::from_str::<WreathElement>(r#"{"n":2,"m":1,"sigma":[0],"components":[[1,2]]}"#).is_err());
}
