use num_traits::One;

use super::*;
use crate::dsl::{self, Environment};
use crate::series::{GradedSeries, Rational};

const IDS: &[&str] = &[
    "R1", "R2", "R3", "M1", "M2", "M3", "L1", "L2", "L3", "D1", "D2", "D3", "D4", "A1", "C1", "Y1",
    "K1", "K2", "S1", "S2", "S3", "S4", "S5", "G1", "G2", "G3", "G4", "G5", "H1", "H2", "H3", "H4",
    "T1", "T2", "T3", "T4", "T5", "T6", "T7", "B1", "B2", "B3", "X1", "J1", "G6",
];

#[test]
fn registry_has_every_id_in_order() {
    let got: Vec<&str> = registry().iter().map(|x| x.id.as_str()).collect();
    assert_eq!(got, IDS);
    for id in IDS {
        assert!(metadata(id).is_some(), "{id} has no metadata");
    }
    assert_eq!(lookup("G1").unwrap().equations.len(), 3);
    assert_eq!(lookup("B3").unwrap().equations.len(), 3);
    assert!(metadata("X1").unwrap().supplementary);
}

#[test]
fn registry_parse_errors() {
    assert!(matches!(
        parse_registry("A1 := x == y"),
        Err(IdentityError::Registry { line: 1, .. })
    ));
    assert!(matches!(
        parse_registry("# c\nA1 ::= x"),
        Err(IdentityError::Registry { line: 2, .. })
    ));
    assert!(matches!(
        parse_registry("A1 ::= x == (y"),
        Err(IdentityError::Registry { line: 1, .. })
    ));
    let ok = parse_registry("a ::= x == y # trailing\n\na ::= y == x").unwrap();
    assert_eq!(ok.len(), 1);
    assert_eq!(ok[0].equations.len(), 2);
}

#[test]
fn every_side_is_nonzero() {
    let env = environment(4);
    for x in registry() {
        for eq in &x.equations {
            for side in [&eq.lhs, &eq.rhs] {
                let v = dsl::eval(&dsl::parse(side).unwrap(), &env).unwrap();
                assert!(!v.body.is_zero(), "{}: `{side}` is zero", x.id);
            }
        }
    }
}

#[test]
fn spot_checks_at_64() {
    for id in ["D1", "A1"] {
        let r = verify(id, 64).unwrap();
        assert_eq!(r.status, Status::Pass, "{id}: {:?}", r.error);
        assert!(r.checked_to >= 64 * 24);
    }
}

#[test]
fn all_pass_at_small_order_and_parallel_matches_sequential() {
    let env = environment(10);
    let par = verify_all_in(registry(), &env, 10, true);
    let seq = verify_all_in(registry(), &env, 10, false);
    for (a, b) in par.iter().zip(&seq) {
        assert_eq!(
            a.status,
            Status::Pass,
            "{}: {:?} {:?}",
            a.id,
            a.error,
            a.mismatch
        );
        assert_eq!(
            (&a.id, a.status, a.checked_to),
            (&b.id, b.status, b.checked_to)
        );
    }
}

#[test]
fn printed_k2_is_rejected() {
    let env = environment(12);
    let d = |k: usize| {
        let mut s = "Dcal".to_string();
        for _ in 0..k {
            s = format!("delta({s})");
        }
        s
    };
    // coefficients as printed: +8 on D3^2 D^4 and -48 on D2^2 D1^2 D^2
    let lhs = format!(
        "{d4}*(8*{d2}*Dcal^4 - 10*{d1}^2*Dcal^3) + 8*{d3}^2*Dcal^4 + {d3}*(10*{d1}^3*Dcal^2 + 16*{d2}*{d1}*Dcal^3) - 20*{d2}^3*Dcal^3 - 48*{d2}^2*{d1}^2*Dcal^2 - 60*{d2}*{d1}^4*Dcal + 25*{d1}^6",
        d1 = d(1),
        d2 = d(2),
        d3 = d(3),
        d4 = d(4)
    );
    let v = dsl::eval(&dsl::parse(&lhs).unwrap(), &env).unwrap();
    assert!(!v.body.is_zero());
    assert_eq!(
        verify_in(lookup("K2").unwrap(), &env, 12).status,
        Status::Pass
    );
}

#[test]
fn fault_injection_e2_q5() {
    let order = 16;
    let env = environment(order);
    let e2 = dsl::eval(&dsl::parse("E2").unwrap(), &env).unwrap();
    let bumped = e2
        .body
        .with_coeff(120, e2.body.coeff(120).unwrap() + Rational::one())
        .unwrap();
    let env = env.with_binding("E2", GradedSeries::ungraded(bumped));
    let r = verify_in(lookup("L1").unwrap(), &env, order);
    assert_eq!(r.status, Status::Fail);
    assert_eq!(r.mismatch.unwrap().exponent, 120);
}

#[test]
fn every_catalog_coefficient_is_load_bearing() {
    let order = 8;
    let base = environment(order);
    for name in base.names() {
        let v = base.get(name).unwrap().unwrap().clone();
        let (e, c) = v.body.terms().nth(1).map(|(e, c)| (e, c.clone())).unwrap();
        let env = base.clone().with_binding(
            name,
            GradedSeries::new(
                v.lambda_degree,
                v.body.with_coeff(e, c + Rational::one()).unwrap(),
            ),
        );
        let users: Vec<_> = registry()
            .iter()
            .filter(|x| {
                x.equations.iter().any(|eq| {
                    [&eq.lhs, &eq.rhs]
                        .iter()
                        .any(|s| dsl::parse(s).unwrap().names().contains(&name))
                })
            })
            .cloned()
            .collect();
        let reports = verify_all_in(&users, &env, order, true);
        assert!(
            reports.iter().any(|r| r.status != Status::Pass),
            "perturbing {name} at {e} went unnoticed"
        );
    }
}

#[test]
fn unknown_id_and_shortfall() {
    assert!(matches!(verify("Z9", 8), Err(IdentityError::UnknownId(_))));
    let env = Environment::catalog(8);
    let r = verify_in(lookup("R1").unwrap(), &env, 12);
    assert_eq!(r.status, Status::Error);
    assert!(r.error.unwrap().contains("requires order >= 12"));
}

#[test]
fn record_shape() {
    let r = verify("L2", 8).unwrap();
    let rec = r.record();
    assert_eq!(rec.id, "L2");
    assert_eq!(rec.order, 8);
    assert!(rec.mismatch.is_none());
    let json = serde_json::to_value(&rec).unwrap();
    assert_eq!(json["status"], "pass");
    assert!(json["mismatch"].is_null());
    assert!(json["ms"].is_number());
}
