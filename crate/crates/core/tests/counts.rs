use std::time::Instant;

use qra::enumerate::{count_algebras, enumerate_frames, Signature};
use qra::poset::poset_by_name;

fn counts(name: &str) -> (usize, usize) {
    let p = poset_by_name(name).unwrap();
    (
        enumerate_frames(&p, Signature::DInFL).unwrap().count,
        enumerate_frames(&p, Signature::DqRA).unwrap().count,
    )
}

#[test]
fn per_poset_counts_up_to_four_points() {
    let t = Instant::now();
    let names = ["1", "2", "1+1", "3", "4", "1+2", "2x2", "bowtie"];
    let dinfl = [1, 2, 5, 4, 8, 10, 16, 11];
    let dqra = [1, 2, 6, 4, 8, 10, 23, 12];
    for (i, name) in names.iter().enumerate() {
        assert_eq!(counts(name), (dinfl[i], dqra[i]), "{name}");
    }
    eprintln!("per-poset counts: {:?}", t.elapsed());
}

#[test]
fn algebra_counts_up_to_six() {
    let t = Instant::now();
    let got: Vec<(usize, usize)> = (1..=6).map(|n| count_algebras(n).unwrap()).collect();
    assert_eq!(got, vec![(1, 1), (1, 1), (2, 2), (9, 10), (8, 8), (43, 50)]);
    eprintln!("algebra counts: {:?}", t.elapsed());
}

#[test]
fn four_element_dqras_split_by_poset() {
    assert_eq!(counts("3").1 + counts("1+1").1, 10);
    assert_eq!(counts("3").1, 4);
}

#[test]
fn per_poset_counts_for_seven_and_eight_elements() {
    let rows: Vec<(&str, usize, usize)> = vec![
        ("5", 17, 17),
        ("bowtie", 11, 12),
        ("6", 38, 36),
        ("1+1+1", 25, 31),
        ("1+3", 25, 25),
        ("N", 22, 22),
        ("X", 21, 23),
        ("P", 28, 26),
        ("d(2x2)", 70, 106),
        ("7", 91, 81),
    ];
    for (name, d, q) in rows {
        assert_eq!(counts(name), (d, q), "{name}");
    }
    assert_eq!(count_algebras(7).unwrap(), (49, 48));
    assert_eq!(count_algebras(8).unwrap(), (282, 314));
}
