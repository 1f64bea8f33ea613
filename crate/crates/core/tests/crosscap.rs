use sigmaint::crosscap::{analyze, crosscap_sum, singular_census, CrossCapMode, CrossCapProblem, OnlyCrossCaps};
use sigmaint::numeric::OracleConfig;
use sigmaint::poly::{parse_polynomial, MonomialOrder, Ring};

/// `(x1^2, x2, ..., xm, x1 x2, ..., x1 xm)` on the unit ball of `t = 0`.
fn model_crosscap(m: usize) -> CrossCapProblem {
    let mut names: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    names.push("t".into());
    let ring = Ring::new(&names);
    let p = |s: &str| parse_polynomial(s, &ring).unwrap();
    let mut f = vec![p("x1^2")];
    f.extend((2..=m).map(|i| p(&format!("x{i}"))));
    f.extend((2..=m).map(|i| p(&format!("x1*x{i}"))));
    let ball = (1..=m).map(|i| format!("-x{i}^2")).collect::<String>();
    CrossCapProblem::new(vec![p("t")], p(&format!("1{ball}-t^2")), f).unwrap()
}

#[test]
fn model_crosscap_in_three_dimensions_is_one_crosscap() {
    let p = model_crosscap(3);
    let cfg = OracleConfig::default();
    let census = singular_census(&p, &cfg).unwrap();
    assert_eq!(census.len(), 1);
    assert!(census[0].is_crosscap(&p));
    assert!(census[0].x.iter().all(|c| c.abs() < 1e-9));
    let report = analyze(&p, &cfg, 1, MonomialOrder::DegRevLex, 64).unwrap();
    assert_eq!(report.mode, CrossCapMode::SignedSum);
    assert!(report.only_crosscaps.is_verified());
    assert_eq!(report.value.abs(), 1);
    // the exact parity agrees with the signed sum
    assert_eq!(report.algebraic.map(|r| r.parity), Some(1));
}

#[test]
fn model_crosscap_in_five_dimensions_is_one_crosscap() {
    let p = model_crosscap(5);
    let cfg = OracleConfig {
        seeds: 600,
        ..OracleConfig::default()
    };
    let census = singular_census(&p, &cfg).unwrap();
    assert_eq!(census.len(), 1);
    assert!(census[0].is_crosscap(&p));
    assert_eq!(crosscap_sum(&p, &cfg).unwrap().abs(), 1);
}

#[test]
fn even_dimensional_model_gives_odd_parity() {
    let p = model_crosscap(2);
    let cfg = OracleConfig::default();
    let report = analyze(&p, &cfg, 1, MonomialOrder::DegRevLex, 64).unwrap();
    assert_eq!(report.mode, CrossCapMode::Parity);
    assert_eq!(report.only_crosscaps, OnlyCrossCaps::VerifiedExact);
    assert_eq!(report.value, 1);
}
