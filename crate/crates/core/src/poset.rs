//! Finite posets up to isomorphism, stored as principal-upset masks.

use std::collections::HashSet;

use serde::Serialize;

use crate::sets::{self, bit, has, members, Mask};

/// A poset on `0..size`; `up[x]` is the set of points above or equal to x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetShape {
    pub name: String,
    pub size: usize,
    pub up: Vec<Mask>,
    /// Principal upsets in canonical labelling; equal for isomorphic posets.
    pub certificate: Vec<Mask>,
    pub self_dual: bool,
    /// An order-reversing bijection, when one exists.
    pub duality: Option<Vec<usize>>,
}

impl PosetShape {
    pub fn from_up(up: Vec<Mask>) -> Self {
        let (certificate, _) = canonical(&up);
        let duality = order_reversing_bijection(&up);
        let mut p = PosetShape {
            name: String::new(),
            size: up.len(),
            up,
            certificate,
            self_dual: duality.is_some(),
            duality,
        };
        p.name = shape_name(&p.up);
        p
    }

    /// Builds a poset from covering pairs `(lower, upper)`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Self {
        Self::from_up(up_from_covers(n, covers))
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &covers)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_covers(n, &[])
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        has(self.up[x], y)
    }

    pub fn upset_count(&self) -> usize {
        sets::upsets(&self.up).len()
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.le(x, y)).collect())
            .collect()
    }

    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        automorphisms(&self.up)
    }
}

pub fn up_from_covers(n: usize, covers: &[(usize, usize)]) -> Vec<Mask> {
    let mut up: Vec<Mask> = (0..n).map(bit).collect();
    loop {
        let mut changed = false;
        for &(a, b) in covers {
            let new = up[a] | up[b];
            if new != up[a] {
                up[a] = new;
                changed = true;
            }
        }
        for x in 0..n {
            let new = sets::up_closure(up[x], &up);
            if new != up[x] {
                up[x] = new;
                changed = true;
            }
        }
        if !changed {
            return up;
        }
    }
}

/// Reverses the order.
pub fn dual(up: &[Mask]) -> Vec<Mask> {
    let n = up.len();
    (0..n)
        .map(|x| (0..n).filter(|&y| has(up[y], x)).fold(0, |m, y| m | bit(y)))
        .collect()
}

fn relabel(up: &[Mask], perm: &[usize]) -> Vec<Mask> {
    let mut out = vec![0; up.len()];
    for (x, &m) in up.iter().enumerate() {
        out[perm[x]] = members(m).fold(0, |acc, y| acc | bit(perm[y]));
    }
    out
}

/// Isomorphism-invariant signature of a point.
fn point_invariant(up: &[Mask], x: usize) -> (u32, u32, u32, u32) {
    let down = up.iter().filter(|&&m| has(m, x)).count() as u32;
    let above = up[x].count_ones();
    let nbr_up: u32 = members(up[x]).map(|y| up[y].count_ones()).sum();
    let nbr_down: u32 = (0..up.len())
        .filter(|&y| has(up[y], x))
        .map(|y| up[y].count_ones())
        .sum();
    (above, down, nbr_up, nbr_down)
}

/// Calls `f` on every bijection that maps points of each invariant class
/// onto the slots reserved for that class.
fn class_perms(up: &[Mask], f: &mut dyn FnMut(&[usize])) {
    let n = up.len();
    let inv: Vec<_> = (0..n).map(|x| point_invariant(up, x)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut sorted_inv: Vec<_> = inv.clone();
    sorted_inv.sort();
    fn go(
        i: usize,
        n: usize,
        inv: &[(u32, u32, u32, u32)],
        sorted_inv: &[(u32, u32, u32, u32)],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if i == n {
            f(perm);
            return;
        }
        for slot in 0..n {
            if !used[slot] && sorted_inv[slot] == inv[i] {
                used[slot] = true;
                perm[i] = slot;
                go(i + 1, n, inv, sorted_inv, perm, used, f);
                used[slot] = false;
            }
        }
    }
    go(0, n, &inv, &sorted_inv, &mut perm, &mut used, f);
}

/// Lexicographically least relabelled upset list and a permutation
/// achieving it.
pub fn canonical(up: &[Mask]) -> (Vec<Mask>, Vec<usize>) {
    let mut best: Option<(Vec<Mask>, Vec<usize>)> = None;
    class_perms(up, &mut |perm| {
        let cand = relabel(up, perm);
        if best.as_ref().is_none_or(|(b, _)| cand < *b) {
            best = Some((cand, perm.to_vec()));
        }
    });
    best.unwrap_or((vec![], vec![]))
}

pub fn automorphisms(up: &[Mask]) -> Vec<Vec<usize>> {
    let n = up.len();
    let inv: Vec<_> = (0..n).map(|x| point_invariant(up, x)).collect();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    fn go(
        i: usize,
        up: &[Mask],
        inv: &[(u32, u32, u32, u32)],
        perm: &mut Vec<usize>,
        used: Mask,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = up.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if has(used, c) || inv[c] != inv[i] {
                continue;
            }
            if (0..i).all(|j| {
                has(up[i], j) == has(up[c], perm[j]) && has(up[j], i) == has(up[perm[j]], c)
            }) {
                perm[i] = c;
                go(i + 1, up, inv, perm, used | bit(c), out);
            }
        }
    }
    go(0, up, &inv, &mut perm, 0, &mut out);
    out
}

/// All order-reversing bijections of the poset.
pub fn order_reversing_bijections(up: &[Mask]) -> Vec<Vec<usize>> {
    let d = dual(up);
    let n = up.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    fn go(
        i: usize,
        up: &[Mask],
        d: &[Mask],
        perm: &mut Vec<usize>,
        used: Mask,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = up.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if has(used, c) || up[i].count_ones() != d[c].count_ones() {
                continue;
            }
            // x ≤ y ⇔ perm(y) ≤ perm(x), i.e. perm is an isomorphism up → d
            let ok = (0..i).all(|j| {
                has(up[i], j) == has(d[c], perm[j]) && has(up[j], i) == has(d[perm[j]], c)
            });
            if ok {
                perm[i] = c;
                go(i + 1, up, d, perm, used | bit(c), out);
            }
        }
        perm[i] = usize::MAX;
    }
    go(0, up, &d, &mut perm, 0, &mut out);
    out
}

fn order_reversing_bijection(up: &[Mask]) -> Option<Vec<usize>> {
    let (c1, p1) = canonical(up);
    let (c2, p2) = canonical(&dual(up));
    if c1 != c2 {
        return None;
    }
    // p1: up → c, p2: dual → c; so p2⁻¹ ∘ p1 is an isomorphism up → dual.
    let mut inv2 = vec![0; up.len()];
    for (i, &p) in p2.iter().enumerate() {
        inv2[p] = i;
    }
    Some(p1.iter().map(|&c| inv2[c]).collect())
}

fn components(up: &[Mask]) -> Vec<Mask> {
    let n = up.len();
    let mut seen: Mask = 0;
    let mut out = Vec::new();
    for x in 0..n {
        if has(seen, x) {
            continue;
        }
        let mut comp = bit(x);
        loop {
            let grown =
                members(comp).fold(comp, |acc, y| acc | up[y] | sets::down_closure(bit(y), up));
            if grown == comp {
                break;
            }
            comp = grown;
        }
        seen |= comp;
        out.push(comp);
    }
    out
}

fn restrict(up: &[Mask], comp: Mask) -> Vec<Mask> {
    let pts: Vec<usize> = members(comp).collect();
    pts.iter()
        .map(|&x| {
            pts.iter()
                .enumerate()
                .filter(|(_, &y)| has(up[x], y))
                .fold(0, |m, (j, _)| m | bit(j))
        })
        .collect()
}

/// Named connected shapes, by covering pairs.
pub fn named_shapes() -> Vec<(&'static str, usize, Vec<(usize, usize)>)> {
    vec![
        ("2x2", 4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]),
        ("bowtie", 4, vec![(0, 2), (0, 3), (1, 2), (1, 3)]),
        ("N", 4, vec![(0, 2), (1, 2), (1, 3)]),
        ("X", 5, vec![(0, 2), (1, 2), (2, 3), (2, 4)]),
        ("P", 5, vec![(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]),
        (
            "d(2x2)",
            6,
            vec![(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)],
        ),
        ("V", 3, vec![(0, 1), (0, 2)]),
        ("Lambda", 3, vec![(0, 2), (1, 2)]),
    ]
}

fn connected_name(up: &[Mask]) -> String {
    let n = up.len();
    let is_chain = (0..n).all(|x| (0..n).all(|y| has(up[x], y) || has(up[y], x)));
    if is_chain {
        return n.to_string();
    }
    let cert = canonical(up).0;
    for (name, k, covers) in named_shapes() {
        if k == n && canonical(&up_from_covers(k, &covers)).0 == cert {
            return name.to_string();
        }
    }
    let hex: Vec<String> = cert.iter().map(|m| format!("{m:x}")).collect();
    format!("p{n}[{}]", hex.join("."))
}

/// A readable name: chains are their length, known shapes have their
/// usual names, and disjoint unions are joined with `+`.
pub fn shape_name(up: &[Mask]) -> String {
    if up.is_empty() {
        return "0".into();
    }
    let mut parts: Vec<(usize, String)> = components(up)
        .into_iter()
        .map(|c| {
            let r = restrict(up, c);
            (r.len(), connected_name(&r))
        })
        .collect();
    parts.sort();
    parts
        .into_iter()
        .map(|(_, s)| s)
        .collect::<Vec<_>>()
        .join("+")
}

/// All posets with at most `max_points` points (the empty poset excluded),
/// optionally only those with at most `max_upsets` upsets. Sorted by size
/// and then certificate.
pub fn enumerate_posets_bounded(max_points: usize, max_upsets: Option<usize>) -> Vec<PosetShape> {
    let fits = |up: &[Mask]| max_upsets.is_none_or(|b| sets::upsets(up).len() <= b);
    let mut level: Vec<Vec<Mask>> = vec![vec![]];
    let mut all: Vec<Vec<Mask>> = Vec::new();
    for _ in 0..max_points {
        let mut seen: HashSet<Vec<Mask>> = HashSet::new();
        let mut next = Vec::new();
        for p in &level {
            let n = p.len();
            // the strict downset of the new maximal point is any downset of p
            let downsets: Vec<Mask> = sets::upsets(&dual(p));
            for d in downsets {
                let mut up: Vec<Mask> = p
                    .iter()
                    .enumerate()
                    .map(|(x, &m)| if has(d, x) { m | bit(n) } else { m })
                    .collect();
                up.push(bit(n));
                if !fits(&up) {
                    continue;
                }
                let (cert, _) = canonical(&up);
                if seen.insert(cert.clone()) {
                    next.push(cert);
                }
            }
        }
        next.sort();
        all.extend(next.iter().cloned());
        level = next;
        if level.is_empty() {
            break;
        }
    }
    all.into_iter().map(PosetShape::from_up).collect()
}

pub fn enumerate_posets(k: usize) -> Vec<PosetShape> {
    enumerate_posets_bounded(k, None)
}

/// Self-dual posets whose upset lattice has at most `max_upsets` elements,
/// including the empty poset.
pub fn self_dual_posets_by_upsets(max_upsets: usize) -> Vec<PosetShape> {
    let max_points = max_upsets.saturating_sub(1);
    let mut out = vec![PosetShape::from_up(vec![])];
    out.extend(
        enumerate_posets_bounded(max_points, Some(max_upsets))
            .into_iter()
            .filter(|p| p.self_dual),
    );
    out.sort_by_key(|p| (p.upset_count(), p.size, p.certificate.clone()));
    out
}

/// Looks up a poset by its name among posets with at most 7 points.
pub fn poset_by_name(name: &str) -> Option<PosetShape> {
    if name == "0" {
        return Some(PosetShape::from_up(vec![]));
    }
    if let Ok(k) = name.parse::<usize>() {
        return (k <= 64).then(|| PosetShape::chain(k));
    }
    for (n, k, covers) in named_shapes() {
        if n == name {
            return Some(PosetShape::from_covers(k, &covers));
        }
    }
    // disjoint unions of chains and named shapes
    if name.contains('+') {
        let mut up: Vec<Mask> = Vec::new();
        for part in name.split('+') {
            let p = poset_by_name(part)?;
            let off = up.len();
            if off + p.size > 64 {
                return None;
            }
            up.extend(p.up.iter().map(|&m| m << off));
        }
        return Some(PosetShape::from_up(up));
    }
    enumerate_posets(7).into_iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_poset_counts() {
        let ps = enumerate_posets(4);
        let by_size: Vec<usize> = (1..=4)
            .map(|k| ps.iter().filter(|p| p.size == k).count())
            .collect();
        assert_eq!(by_size, vec![1, 2, 5, 16]);
        assert_eq!(enumerate_posets(2).len(), 3);
        assert!(enumerate_posets(2).iter().all(|p| p.self_dual));
    }

    #[test]
    fn size_three_self_dual() {
        let mut names: Vec<String> = enumerate_posets(3)
            .into_iter()
            .filter(|p| p.size == 3 && p.self_dual)
            .map(|p| p.name)
            .collect();
        names.sort();
        assert_eq!(names, vec!["1+1+1", "1+2", "3"]);
    }

    #[test]
    fn named_shapes_recognised() {
        let ps = enumerate_posets(4);
        for name in ["bowtie", "2x2", "N", "1+3", "1+1+2"] {
            assert!(ps.iter().any(|p| p.name == name), "{name}");
        }
        assert!(ps.iter().find(|p| p.name == "N").unwrap().self_dual);
        assert!(!ps.iter().find(|p| p.name == "V").unwrap().self_dual);
    }

    #[test]
    fn duality_witness_reverses_order() {
        for p in enumerate_posets(4).into_iter().filter(|p| p.self_dual) {
            let d = p.duality.as_ref().unwrap();
            for x in 0..p.size {
                for y in 0..p.size {
                    assert_eq!(p.le(x, y), p.le(d[y], d[x]));
                }
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(
            PosetShape::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
                .automorphisms()
                .len(),
            2
        );
        assert_eq!(PosetShape::antichain(3).automorphisms().len(), 6);
        assert_eq!(PosetShape::chain(5).automorphisms().len(), 1);
    }
}
