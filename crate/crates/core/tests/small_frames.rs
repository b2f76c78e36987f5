use qra::algebra::{classify, validate_dqra};
use qra::data;
use qra::frame::{self, complex_algebra, frame_iso, roundtrip_frame, validate_dqra_frame};

#[test]
fn every_small_frame_validates_and_roundtrips() {
    for w in data::small_frames() {
        let r = validate_dqra_frame(&w).unwrap();
        assert!(r.ok(), "{}: {}", w.name().unwrap(), r);
        let a = complex_algebra(&w).unwrap();
        assert!(validate_dqra(&a).unwrap().ok(), "{}", w.name().unwrap());
        assert!(roundtrip_frame(&w).is_ok());
        // minus coincides with tilde in all of these frames
        assert_eq!(w.tilde_perm(), w.minus_perm());
    }
}

#[test]
fn upset_counts_match_names() {
    for w in data::small_frames() {
        let name = w.name().unwrap().to_string();
        let n: usize = name[1..2].parse().unwrap();
        assert_eq!(complex_algebra(&w).unwrap().size(), n, "{name}");
    }
}

#[test]
fn antichain_pair_differs_only_by_neg() {
    let a = data::small_frame("W4_2_1a").unwrap();
    let b = data::small_frame("W4_2_1b").unwrap();
    assert!(frame_iso(&a.without_neg(), &b.without_neg())
        .unwrap()
        .is_some());
    assert!(frame_iso(&a, &b).unwrap().is_none());
}

#[test]
fn named_chains() {
    // W3_1_2 and W4_1_3 are the Sugihara chains: odd and symmetric
    for name in ["W3_1_2", "W4_1_3"] {
        let a = complex_algebra(&data::small_frame(name).unwrap()).unwrap();
        let f = classify(&a);
        assert!(f.symmetric && f.commutative, "{name}");
    }
    assert!(classify(&complex_algebra(&data::small_frame("W3_1_2").unwrap()).unwrap()).odd);
    // W3_1_1 and W4_1_2 are MV-chains: integral, 1 is the top
    for name in ["W3_1_1", "W4_1_2"] {
        let a = complex_algebra(&data::small_frame(name).unwrap()).unwrap();
        assert_eq!(a.one(), a.top(), "{name}");
        assert_eq!(a.zero(), a.bottom(), "{name}");
    }
    let _ = frame::validate_frame;
}
