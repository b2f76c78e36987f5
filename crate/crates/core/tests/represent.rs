use std::time::{Duration, Instant};

use qra::algebra::{self, boolean2, sugihara_chain, validate_dinfl};
use qra::catalog::catalog;
use qra::data::RepClass;
use qra::enumerate::Signature;
use qra::error::Error;
use qra::morphisms::{enumerate_homs, homomorphism_report};
use qra::poset::{self, PosetShape};
use qra::represent::{
    build_dq, dq_laws, embed_search, no_finite_rep_filter, representation_search, search_bases,
    verify_certificate, RepBase, RepCheckpoint, RepOptions, RepOutcome,
};

fn chain2_base() -> RepBase {
    RepBase::full(
        PosetShape::chain(2).leq_matrix(),
        vec![0, 1],
        Some(vec![1, 0]),
    )
    .unwrap()
}

/// Every base on at most three points with E = X²: α over automorphisms,
/// β over order-reversing involutions with β = α;β;α, or no β.
fn full_bases() -> Vec<RepBase> {
    let mut out = vec![];
    for p in poset::enumerate_posets(3) {
        let n = p.size;
        for alpha in p.automorphisms() {
            out.push(RepBase::full(p.leq_matrix(), alpha.clone(), None).unwrap());
            for beta in poset::order_reversing_bijections(&p.up) {
                if (0..n).all(|x| beta[beta[x]] == x && beta[x] == alpha[beta[alpha[x]]]) {
                    out.push(RepBase::full(p.leq_matrix(), alpha.clone(), Some(beta)).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn dq_sweep_on_three_points() {
    let t = Instant::now();
    let bases = full_bases();
    assert!(bases
        .iter()
        .any(|b| b.beta().is_some() && b.alpha() != [0, 1, 2]));
    for b in &bases {
        let r = dq_laws(b).unwrap();
        assert!(r.ok(), "{:?}: {r}", b.to_file());
    }
    println!("{} bases in {:?}", bases.len(), t.elapsed());
}

#[test]
fn bases_without_beta_give_dinfl_algebras() {
    let p = PosetShape::from_covers(3, &[(0, 2), (1, 2)]);
    let b = RepBase::full(p.leq_matrix(), vec![1, 0, 2], None).unwrap();
    let dq = build_dq(&b).unwrap();
    assert!(validate_dinfl(&dq.algebra).ok());
    assert!(dq
        .algebra
        .elements()
        .any(|x| dq.algebra.tilde(x) != dq.algebra.minus(x)));
}

fn brute_force_embeds(a: &algebra::FinAlgebra, b: &algebra::FinAlgebra) -> bool {
    let n = a.size();
    let mut h = vec![0; n];
    loop {
        let injective = (0..n).all(|x| (0..x).all(|y| h[x] != h[y]));
        if injective && homomorphism_report(a, b, &h).ok() {
            return true;
        }
        let mut i = 0;
        while i < n && h[i] + 1 == b.size() {
            h[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        h[i] += 1;
    }
}

#[test]
fn embed_search_agrees_with_brute_force() {
    let dq = build_dq(&chain2_base()).unwrap().algebra;
    let s3 = sugihara_chain(3).unwrap();
    let found = embed_search(&s3, &dq).unwrap();
    assert_eq!(found.is_some(), brute_force_embeds(&s3, &dq));
    for e in catalog(4)
        .unwrap()
        .iter()
        .filter(|e| e.signature == Signature::DqRA)
    {
        let got = embed_search(&e.algebra, &dq).unwrap();
        assert_eq!(
            got.is_some(),
            brute_force_embeds(&e.algebra, &dq),
            "{}",
            e.name
        );
        if let Some(h) = got {
            assert!(h.report().ok() && h.is_injective());
        }
    }
    assert!(embed_search(&dq, &dq).unwrap().is_some());
}

#[test]
fn embed_search_agrees_with_hom_enumeration() {
    let targets: Vec<_> = full_bases()
        .into_iter()
        .filter(|b| b.points() == 3 && b.beta().is_some())
        .map(|b| build_dq(&b).unwrap().algebra)
        .filter(|a| a.size() <= 40)
        .collect();
    assert!(!targets.is_empty());
    for b in &targets {
        for e in catalog(4)
            .unwrap()
            .iter()
            .filter(|e| e.signature == Signature::DqRA)
        {
            let homs = enumerate_homs(&e.algebra, b, None).unwrap();
            let any = homs.iter().any(|h| h.is_injective());
            assert_eq!(
                embed_search(&e.algebra, b).unwrap().is_some(),
                any,
                "{}",
                e.name
            );
        }
    }
}

#[test]
fn two_point_algebra_represents_itself() {
    let dq = build_dq(&chain2_base()).unwrap().algebra;
    let out = representation_search(&dq, 2, &RepOptions::default()).unwrap();
    let RepOutcome::Certificate(c) = out else {
        panic!("{out:?}")
    };
    assert_eq!(c.base.points, 2);
    assert!(verify_certificate(&dq, &c).unwrap().ok());
    let json = serde_json::to_string(&c).unwrap();
    let back: qra::represent::Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, c);
    let mut bad = c.clone();
    bad.embedding.swap(0, 1);
    assert!(!verify_certificate(&dq, &bad).unwrap().ok());
}

#[test]
fn boolean_certificate_on_one_point() {
    let out = representation_search(&boolean2(), 1, &RepOptions::default()).unwrap();
    let RepOutcome::Certificate(c) = out else {
        panic!("{out:?}")
    };
    assert!(c.base.points <= 1);
    assert!(verify_certificate(&boolean2(), &c).unwrap().ok());
}

#[test]
fn filter_matches_annotations() {
    let c = catalog(6).unwrap();
    for e in c.iter().filter(|e| e.signature == Signature::DqRA) {
        let rep = e.representability.as_ref().unwrap();
        let flagged = no_finite_rep_filter(&e.algebra).is_some();
        match rep.class {
            RepClass::MustBeInfinite => assert!(flagged, "{}", e.name),
            RepClass::Known => assert!(!flagged, "{}", e.name),
            RepClass::NoKnown => {}
        }
    }
    for name in ["D3_1_1", "D4_1_1", "D4_1_2"] {
        let e = c
            .iter()
            .find(|e| e.name == name && e.signature == Signature::DqRA)
            .unwrap();
        assert!(no_finite_rep_filter(&e.algebra).is_some());
    }
}

#[test]
fn flagged_algebras_have_no_small_representation() {
    let opts = RepOptions {
        ignore_filter: true,
        ..Default::default()
    };
    for e in catalog(4)
        .unwrap()
        .iter()
        .filter(|e| e.signature == Signature::DqRA)
    {
        if no_finite_rep_filter(&e.algebra).is_some() {
            let skipped = representation_search(&e.algebra, 2, &RepOptions::default()).unwrap();
            assert!(matches!(skipped, RepOutcome::NoFiniteRepresentation { .. }));
            let out = representation_search(&e.algebra, 2, &opts).unwrap();
            assert!(
                matches!(out, RepOutcome::Exhausted(_)),
                "{}: {out:?}",
                e.name
            );
        }
    }
}

#[test]
fn search_respects_options_and_budget() {
    let all = search_bases(2, true, &RepOptions::default()).unwrap();
    let full = search_bases(
        2,
        true,
        &RepOptions {
            full_e_only: true,
            ..Default::default()
        },
    )
    .unwrap();
    let cyclic = search_bases(
        2,
        true,
        &RepOptions {
            alpha_id_only: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(full.len() < all.len() && cyclic.len() <= all.len());
    assert!(full
        .iter()
        .all(|b| b.e_rel().count_ones() as usize == b.points() * b.points()));
    assert!(cyclic
        .iter()
        .all(|b| b.alpha().iter().enumerate().all(|(i, &x)| i == x)));

    let s3 = sugihara_chain(3).unwrap();
    let past = RepOptions {
        deadline: Some(Instant::now() - Duration::from_millis(1)),
        ..Default::default()
    };
    let Err(Error::Budget {
        checkpoint: Some(cp),
        ..
    }) = representation_search(&s3, 2, &past)
    else {
        panic!("expected a budget error")
    };
    let cp: RepCheckpoint = serde_json::from_str(&cp).unwrap();
    assert_eq!(cp.next_base, 0);
    let resumed = representation_search(
        &s3,
        2,
        &RepOptions {
            resume_from: cp.next_base,
            ..Default::default()
        },
    );
    assert!(matches!(resumed.unwrap(), RepOutcome::Certificate(_)));
}
