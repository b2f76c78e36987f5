use qra::poset::{enumerate_posets, self_dual_posets_by_upsets};

#[test]
fn unlabelled_poset_counts() {
    let ps = enumerate_posets(6);
    let by_size: Vec<usize> = (1..=6)
        .map(|k| ps.iter().filter(|p| p.size == k).count())
        .collect();
    assert_eq!(by_size, vec![1, 2, 5, 16, 63, 318]);
}

#[test]
fn self_dual_shapes_with_few_upsets() {
    let got: Vec<(usize, String)> = self_dual_posets_by_upsets(8)
        .into_iter()
        .map(|p| (p.upset_count(), p.name))
        .collect();
    let want = [
        (1, "0"),
        (2, "1"),
        (3, "2"),
        (4, "1+1"),
        (4, "3"),
        (5, "4"),
        (6, "1+2"),
        (6, "2x2"),
        (6, "5"),
        (7, "bowtie"),
        (7, "6"),
    ];
    for (k, name) in want {
        assert!(
            got.contains(&(k, name.to_string())),
            "{name} missing from {got:?}"
        );
    }
    let eight: Vec<&str> = got
        .iter()
        .filter(|(k, _)| *k == 8)
        .map(|(_, n)| n.as_str())
        .collect();
    let mut eight_sorted = eight.clone();
    eight_sorted.sort();
    assert_eq!(
        eight_sorted,
        vec!["1+1+1", "1+3", "7", "N", "P", "X", "d(2x2)"]
    );
    assert_eq!(got.len(), 18);
}
