use std::collections::BTreeSet;

use qra::algebra::{self, commutative_to_qra, validate, validate_dqra};
use qra::catalog::{catalog, catalog_entry, diagram_isos, MatchKind};
use qra::data::{diagrams, representability};
use qra::enumerate::{count_algebras, Signature};
use qra::frame::roundtrip_algebra;

#[test]
fn sizes_agree_with_counts() {
    let c = catalog(6).unwrap();
    for n in 1..=6 {
        let d = c
            .iter()
            .filter(|e| e.size == n && e.signature == Signature::DInFL)
            .count();
        let q = c
            .iter()
            .filter(|e| e.size == n && e.signature == Signature::DqRA)
            .count();
        assert_eq!((d, q), count_algebras(n).unwrap(), "size {n}");
    }
}

#[test]
fn every_diagram_names_exactly_one_algebra() {
    let c = catalog(6).unwrap();
    let dinfl: Vec<_> = c
        .iter()
        .filter(|e| e.signature == Signature::DInFL)
        .collect();
    assert!(dinfl.iter().all(|e| e.matched == MatchKind::Exact));
    let names: BTreeSet<&str> = dinfl.iter().map(|e| e.name.as_str()).collect();
    let expected: BTreeSet<String> = diagrams().into_iter().map(|d| d.name).collect();
    assert_eq!(names.len(), dinfl.len());
    assert_eq!(names, expected.iter().map(|s| s.as_str()).collect());
}

#[test]
fn every_variant_note_names_exactly_one_dqra() {
    let c = catalog(6).unwrap();
    let dqra: Vec<_> = c
        .iter()
        .filter(|e| e.signature == Signature::DqRA)
        .collect();
    let names: BTreeSet<&str> = dqra.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names.len(), dqra.len());
    let notes: BTreeSet<String> = representability().into_iter().map(|n| n.name).collect();
    assert_eq!(names, notes.iter().map(|s| s.as_str()).collect());
    let inexact: Vec<&str> = dqra
        .iter()
        .filter(|e| e.matched != MatchKind::Exact)
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(inexact, vec!["D6_2_9_2[a=b]"]);
    assert!(matches!(
        catalog_entry("D6_2_9_2[a=b]", None).unwrap().matched,
        MatchKind::Deduced(_)
    ));
}

#[test]
fn small_rows() {
    let c = catalog(4).unwrap();
    let q4: Vec<&str> = c
        .iter()
        .filter(|e| e.size == 4 && e.signature == Signature::DqRA)
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(q4.len(), 10);
    assert!(q4.contains(&"D4_2_1_2") && q4.contains(&"D4_2_1_2[a=a]"));
    let one: Vec<&str> = c
        .iter()
        .filter(|e| e.size == 1)
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(one, vec!["D1_1_1", "D1_1_1"]);
    let l3 = algebra::lukasiewicz_chain(3).unwrap().without_neg();
    let s3 = algebra::sugihara_chain(3).unwrap().without_neg();
    let d311 = catalog_entry("D3_1_1", Some(Signature::DInFL)).unwrap();
    let d312 = catalog_entry("D3_1_2", Some(Signature::DInFL)).unwrap();
    assert!(algebra::algebra_iso(&l3, &d311.algebra).unwrap().is_some());
    assert!(algebra::algebra_iso(&s3, &d312.algebra).unwrap().is_some());
}

#[test]
fn entries_validate_and_round_trip() {
    for e in catalog(6).unwrap() {
        let r = validate(&e.algebra);
        assert!(r.ok(), "{}: {r}", e.name);
        assert!(roundtrip_algebra(&e.algebra).is_ok(), "{}", e.name);
        if e.signature == Signature::DInFL {
            let d = diagrams().into_iter().find(|d| d.name == e.name).unwrap();
            assert!(!diagram_isos(&d, &e.algebra).is_empty());
        }
    }
}

#[test]
fn commutative_entries_extend_with_tilde() {
    let mut seen = 0;
    for e in catalog(6)
        .unwrap()
        .into_iter()
        .filter(|e| e.signature == Signature::DInFL)
    {
        let a = &e.algebra;
        let commutative = a
            .elements()
            .all(|x| a.elements().all(|y| a.mul(x, y) == a.mul(y, x)));
        if commutative {
            seen += 1;
            let q = commutative_to_qra(a).unwrap();
            assert!(validate_dqra(&q).unwrap().ok(), "{}", e.name);
        }
    }
    assert!(seen > 40);
}
