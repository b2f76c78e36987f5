use qra::algebra::{self, algebra_iso};
use qra::catalog::catalog;
use qra::filters::{
    check_filter_preimage, filter_frame, filter_frame_matches_dual, filter_unaries,
    gen_prime_filters, priestley_roundtrip, space_algebra, validate_pointed_frame,
};
use qra::morphisms::enumerate_homs;

#[test]
fn catalog_round_trips_through_filter_frames() {
    for e in catalog(6).unwrap() {
        let p = filter_frame(&e.algebra).unwrap();
        let r = validate_pointed_frame(&p);
        assert!(r.ok(), "{}: {r}", e.name);
        let b = space_algebra(&p).unwrap();
        assert_eq!(b.size(), e.algebra.size());
        assert!(algebra_iso(&e.algebra, &b).unwrap().is_some(), "{}", e.name);
        assert!(priestley_roundtrip(&e.algebra).is_ok(), "{}", e.name);
        assert!(filter_frame_matches_dual(&e.algebra).is_ok(), "{}", e.name);
    }
}

#[test]
fn unaries_reverse_inclusion_and_invert() {
    for e in catalog(6).unwrap() {
        let a = &e.algebra;
        let fs = gen_prime_filters(a).unwrap();
        let sub = |f: &qra::filters::GenPrimeFilter, g: &qra::filters::GenPrimeFilter| {
            f.elements.iter().all(|&x| g.contains(x))
        };
        for f in &fs {
            let (t, _, _) = filter_unaries(a, f).unwrap();
            assert_eq!(&filter_unaries(a, &t).unwrap().1, f);
            for g in &fs {
                if sub(f, g) {
                    let gt = filter_unaries(a, g).unwrap().0;
                    assert!(sub(&gt, &t));
                }
            }
        }
    }
}

#[test]
fn small_examples() {
    assert_eq!(
        filter_frame(&algebra::trivial_algebra(true))
            .unwrap()
            .frame
            .size(),
        2
    );
    let b = filter_frame(&algebra::boolean2()).unwrap();
    assert!((0..3).all(|x| (0..3).all(|y| b.frame.le(x, y) || b.frame.le(y, x))));
    assert_eq!(space_algebra(&b).unwrap().size(), 2);
    let s3 = algebra::sugihara_chain(3).unwrap();
    assert!(
        algebra_iso(&s3, &space_algebra(&filter_frame(&s3).unwrap()).unwrap())
            .unwrap()
            .is_some()
    );
}

#[test]
fn preimages_are_pointed_frame_morphisms() {
    let c: Vec<_> = catalog(4).unwrap();
    let mut homs = 0;
    for a in &c {
        for b in &c {
            if a.signature != b.signature {
                continue;
            }
            for h in enumerate_homs(&a.algebra, &b.algebra, Some(1 << 16)).unwrap() {
                homs += 1;
                let r = check_filter_preimage(&h).unwrap();
                assert!(r.ok(), "{} -> {}: {r}", a.name, b.name);
            }
        }
    }
    assert!(homs > 20);
}
