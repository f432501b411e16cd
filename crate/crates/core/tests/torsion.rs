mod common;

use common::{bar_tuples, torsion_fixture};
use morseward::morse::reduce_filtered_complex;
use morseward::oracle::direct_persistence;
use morseward::persist::{barcode, field_mu, Barcode, Persistence};

#[test]
fn bars() {
    let bc = barcode(&torsion_fixture()).unwrap();
    let deg1: Vec<_> = bar_tuples(&bc).into_iter().filter(|b| b.0 == 1).collect();
    assert_eq!(deg1, vec![(1, 1, Some(2), "Z".to_string()), (1, 1, None, "Z_2".to_string())]);
}

#[test]
fn rational_multiplicity() {
    assert_eq!(field_mu(&torsion_fixture(), 1, Some(2), 1, 0).unwrap(), 1);
    assert_eq!(field_mu(&torsion_fixture(), 1, None, 1, 0).unwrap(), 0);
}

#[test]
fn groups() {
    let p = Persistence::new(torsion_fixture());
    assert_eq!(p.homology_at(2, 1).unwrap().to_string(), "Z/2");
    assert_eq!(p.triple_group(1, 1, 2, 1).unwrap().to_string(), "Z");
    assert_eq!(p.bd_group(1, Some(2), 1).unwrap().to_string(), "Z");
    assert_eq!(p.bd_group(1, None, 1).unwrap().to_string(), "Z/2");
}

#[test]
fn oracle_agrees() {
    let c = torsion_fixture();
    assert_eq!(bar_tuples(&barcode(&c).unwrap()), direct_persistence(&c).unwrap());
}

#[test]
fn reduction_keeps_torsion() {
    let red = reduce_filtered_complex(torsion_fixture()).unwrap();
    assert_eq!(bar_tuples(&barcode(&red.reduction.dst).unwrap()), bar_tuples(&barcode(&torsion_fixture()).unwrap()));
}

#[test]
fn json_carries_torsion_label() {
    let bc = Persistence::new(torsion_fixture()).barcode(true).unwrap();
    let text = bc.to_json_string();
    assert!(text.contains("\"Z_2\""));
    assert_eq!(Barcode::from_json_str(&text).unwrap(), bc);
}
