//! Frame morphisms, algebra homomorphisms and their duals.

use std::sync::OnceLock;

use crate::algebra::{self, FinAlgebra};
use crate::error::{Error, Result};
use crate::frame::{self, Frame};
use crate::report::ValidationReport;
use crate::sets::{self, bit, has, members, Family, Mask};

/// A map between the points of two frames.
#[derive(Clone, Debug)]
pub struct FrameMap {
    pub source: Frame,
    pub target: Frame,
    pub map: Vec<usize>,
    report: OnceLock<ValidationReport>,
}

/// A map between two finite algebras. A finite homomorphism is complete
/// exactly when it also preserves the bounds (the empty join and meet).
#[derive(Clone, Debug)]
pub struct AlgHom {
    pub source: FinAlgebra,
    pub target: FinAlgebra,
    pub map: Vec<usize>,
    report: OnceLock<ValidationReport>,
}

fn check_map(map: &[usize], n: usize, m: usize) -> Result<()> {
    if map.len() != n {
        return Err(Error::Structural(format!(
            "map has {} entries for a source of size {n}",
            map.len()
        )));
    }
    if let Some((i, &x)) = map.iter().enumerate().find(|(_, &x)| x >= m) {
        return Err(Error::Structural(format!(
            "map[{i}] = {x} is outside a target of size {m}"
        )));
    }
    Ok(())
}

impl FrameMap {
    pub fn new(source: Frame, target: Frame, map: Vec<usize>) -> Result<Self> {
        check_map(&map, source.size(), target.size())?;
        if source.has_neg() != target.has_neg() {
            return Err(Error::Signature(
                "source and target frames differ in signature".into(),
            ));
        }
        Ok(FrameMap {
            source,
            target,
            map,
            report: OnceLock::new(),
        })
    }

    /// Validation report, computed once.
    pub fn report(&self) -> &ValidationReport {
        self.report.get_or_init(|| frame_morphism_report(self))
    }

    pub fn is_surjective(&self) -> bool {
        let hit = self.map.iter().fold(0, |m, &x| m | bit(x));
        hit == sets::full(self.target.size())
    }

    pub fn is_injective(&self) -> bool {
        let hit = self.map.iter().fold(0, |m, &x| m | bit(x));
        hit.count_ones() as usize == self.map.len()
    }

    pub fn is_order_embedding(&self) -> bool {
        let (w, v, f) = (&self.source, &self.target, &self.map);
        w.points()
            .all(|x| w.points().all(|y| w.le(x, y) == v.le(f[x], f[y])))
    }

    fn preimage(&self, u: Mask) -> Mask {
        self.map
            .iter()
            .enumerate()
            .filter(|(_, &y)| has(u, y))
            .fold(0, |m, (x, _)| m | bit(x))
    }
}

impl AlgHom {
    pub fn new(source: FinAlgebra, target: FinAlgebra, map: Vec<usize>) -> Result<Self> {
        check_map(&map, source.size(), target.size())?;
        if source.has_neg() != target.has_neg() {
            return Err(Error::Signature(
                "source and target algebras differ in signature".into(),
            ));
        }
        Ok(AlgHom {
            source,
            target,
            map,
            report: OnceLock::new(),
        })
    }

    pub fn report(&self) -> &ValidationReport {
        self.report
            .get_or_init(|| homomorphism_report(&self.source, &self.target, &self.map))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// h(⊥) = ⊥ and h(⊤) = ⊤.
    pub fn is_complete(&self) -> bool {
        let (a, b) = (&self.source, &self.target);
        self.map[a.bottom()] == b.bottom() && self.map[a.top()] == b.top()
    }

    /// ⋀ h⁻¹[↑b], with the empty meet equal to the top.
    pub fn lower_adjoint(&self, b: usize) -> usize {
        let (a, t) = (&self.source, &self.target);
        a.meet_all(a.elements().filter(|&x| t.le(b, self.map[x])))
    }
}

fn frame_morphism_report(f: &FrameMap) -> ValidationReport {
    let (w, v, m) = (&f.source, &f.target, &f.map);
    let mut r = ValidationReport::new();
    for x in w.points() {
        for y in w.points() {
            if w.le(x, y) {
                r.check(v.le(m[x], m[y]), "x ≼ y ⇒ f(x) ≼ f(y)", &[x, y]);
            }
            let img = v.comp(m[x], m[y]);
            for z in members(w.comp(x, y)) {
                r.check(has(img, m[z]), "z ∈ x∘y ⇒ f(z) ∈ f(x)∘f(y)", &[x, y, z]);
            }
        }
    }
    // (3): for each z and u, v with f(z) ∈ u∘v there are x, y above in the image
    for z in w.points() {
        for u in v.points() {
            for t in v.points() {
                if !has(v.comp(u, t), m[z]) {
                    continue;
                }
                let found = w.points().any(|x| {
                    v.le(u, m[x]) && w.points().any(|y| v.le(t, m[y]) && has(w.comp(x, y), z))
                });
                r.check(found, "back condition", &[z, u, t]);
            }
        }
    }
    for x in w.points() {
        r.check(m[w.tilde(x)] == v.tilde(m[x]), "f(x~) = f(x)~", &[x]);
        r.check(m[w.minus(x)] == v.minus(m[x]), "f(x-) = f(x)-", &[x]);
        r.check(
            has(w.identity(), x) == has(v.identity(), m[x]),
            "I₁ = f⁻¹[I₂]",
            &[x],
        );
        if w.has_neg() {
            r.check(m[w.neg_of(x)] == v.neg_of(m[x]), "f(x¬) = f(x)¬", &[x]);
        }
    }
    r
}

/// Checks the order, composition, unary and I conditions, and ¬ when both
/// frames carry it.
pub fn validate_frame_morphism(f: &FrameMap) -> ValidationReport {
    f.report().clone()
}

pub fn homomorphism_report(a: &FinAlgebra, b: &FinAlgebra, h: &[usize]) -> ValidationReport {
    let mut r = ValidationReport::new();
    r.check(h[a.one()] == b.one(), "preserves 1", &[a.one()]);
    for x in a.elements() {
        r.check(h[a.tilde(x)] == b.tilde(h[x]), "preserves ~", &[x]);
        r.check(h[a.minus(x)] == b.minus(h[x]), "preserves -", &[x]);
        if a.has_neg() {
            r.check(h[a.neg_of(x)] == b.neg_of(h[x]), "preserves ¬", &[x]);
        }
        for y in a.elements() {
            r.check(
                h[a.join(x, y)] == b.join(h[x], h[y]),
                "preserves ∨",
                &[x, y],
            );
            r.check(
                h[a.meet(x, y)] == b.meet(h[x], h[y]),
                "preserves ∧",
                &[x, y],
            );
            r.check(h[a.mul(x, y)] == b.mul(h[x], h[y]), "preserves ·", &[x, y]);
        }
    }
    r
}

/// Checks preservation of ∧, ∨, ·, 1, ∼, − and ¬ when present.
pub fn validate_homomorphism(h: &AlgHom) -> ValidationReport {
    h.report().clone()
}

fn require_ok(r: &ValidationReport) -> Result<()> {
    if r.ok() {
        Ok(())
    } else {
        Err(Error::Law(r.clone()))
    }
}

/// f⁺ : (W₂)⁺ → (W₁)⁺, U ↦ f⁻¹[U].
pub fn frame_morphism_dual(f: &FrameMap) -> Result<AlgHom> {
    require_ok(f.report())?;
    let (b, carrier2) = frame::complex_algebra_with_carrier(&f.target)?;
    let (a, carrier1) = frame::complex_algebra_with_carrier(&f.source)?;
    let fam1 = Family::new(carrier1);
    let map = carrier2
        .iter()
        .map(|&u| fam1.find(f.preimage(u), "preimage of an upset"))
        .collect::<Result<Vec<_>>>()?;
    AlgHom::new(b, a, map)
}

/// h₊ : (B)₊ → (A)₊, b ↦ ⋀ h⁻¹[↑b], on the dual frames built by
/// `dual_frame`.
pub fn hom_dual(h: &AlgHom) -> Result<FrameMap> {
    require_ok(h.report())?;
    if !h.is_complete() {
        return Err(Error::Precondition(
            "h₊ needs a complete homomorphism (bounds preserved)".into(),
        ));
    }
    let (wb, jb) = frame::dual_frame_with_points(&h.target)?;
    let (wa, ja) = frame::dual_frame_with_points(&h.source)?;
    let map = jb
        .iter()
        .map(|&b| {
            let c = h.lower_adjoint(b);
            ja.iter()
                .position(|&j| j == c)
                .ok_or_else(|| Error::Internal(format!("⋀h⁻¹[↑{b}] = {c} is not join-irreducible")))
        })
        .collect::<Result<Vec<_>>>()?;
    FrameMap::new(wb, wa, map)
}

/// The adjoint identities between h and b ↦ ⋀h⁻¹[↑b].
pub fn check_adjoint(h: &AlgHom) -> ValidationReport {
    let (a, b) = (&h.source, &h.target);
    let js_a = algebra::join_irreducibles(a);
    let js_b = algebra::join_irreducibles(b);
    let mut r = ValidationReport::new();
    for y in b.elements() {
        let c = h.lower_adjoint(y);
        r.check(b.le(y, h.map[c]), "adjoint: b ≤ h(⋀h⁻¹[↑b])", &[y]);
        for x in a.elements() {
            if b.le(y, h.map[x]) {
                r.check(a.le(c, x), "adjoint: b ≤ h(a) ⇒ ⋀h⁻¹[↑b] ≤ a", &[y, x]);
            }
        }
    }
    for &j in &js_b {
        let c = h.lower_adjoint(j);
        r.check(
            js_a.contains(&c),
            "adjoint: ⋀h⁻¹[↑j] is join-irreducible",
            &[j, c],
        );
        for x in a.elements() {
            if a.le(c, x) {
                r.check(
                    b.le(j, h.map[x]),
                    "adjoint: ⋀h⁻¹[↑j] ≤ a ⇒ j ≤ h(a)",
                    &[j, x],
                );
            }
        }
    }
    r
}

/// For a valid frame morphism: f⁺ is a homomorphism, injective when f is
/// surjective and surjective when f is an order-embedding.
pub fn check_frame_morphism_duality(f: &FrameMap) -> Result<ValidationReport> {
    let d = frame_morphism_dual(f)?;
    let mut r = ValidationReport::new();
    r.merge(d.report().clone());
    if f.is_surjective() {
        r.check(d.is_injective(), "surjective f ⇒ injective f⁺", &[]);
    }
    if f.is_order_embedding() {
        r.check(d.is_surjective(), "order-embedding f ⇒ surjective f⁺", &[]);
    }
    Ok(r)
}

/// For a valid homomorphism: h₊ is a frame morphism, surjective when h is
/// injective and an order-embedding when h is surjective; the adjoint
/// identities hold; and (h₊)⁺ agrees with h through the canonical
/// isomorphisms A ≅ (A₊)⁺ and B ≅ (B₊)⁺.
pub fn check_hom_duality(h: &AlgHom) -> Result<ValidationReport> {
    let d = hom_dual(h)?;
    let mut r = check_adjoint(h);
    r.merge(d.report().clone());
    if h.is_injective() {
        r.check(d.is_surjective(), "injective h ⇒ surjective h₊", &[]);
    }
    if h.is_surjective() {
        r.check(
            d.is_order_embedding(),
            "surjective h ⇒ h₊ order-embedding",
            &[],
        );
    }
    if d.report().ok() {
        let dd = frame_morphism_dual(&d)?;
        let psi_a = frame::roundtrip_algebra(&h.source)?;
        let psi_b = frame::roundtrip_algebra(&h.target)?;
        for x in h.source.elements() {
            r.check(
                dd.map[psi_a[x]] == psi_b[h.map[x]],
                "(h₊)⁺ ∘ ψ = ψ ∘ h",
                &[x],
            );
        }
    }
    Ok(r)
}

/// All homomorphisms A → B in lexicographic order of their maps. Images
/// are chosen for join-irreducibles and extended by joins; `budget` caps
/// the number of candidate assignments tried.
pub fn enumerate_homs(a: &FinAlgebra, b: &FinAlgebra, budget: Option<u64>) -> Result<Vec<AlgHom>> {
    if a.has_neg() != b.has_neg() {
        return Err(Error::Signature(
            "source and target algebras differ in signature".into(),
        ));
    }
    if a.lattice().is_none() || b.lattice().is_none() {
        return Err(Error::Precondition("order is not a lattice".into()));
    }
    let mut maps: Vec<Vec<usize>> = Vec::new();
    if a.size() == 1 {
        for y in b.elements() {
            let h = vec![y];
            if homomorphism_report(a, b, &h).ok() {
                maps.push(h);
            }
        }
    } else {
        let js = algebra::join_irreducibles(a);
        let below: Vec<Vec<usize>> = a
            .elements()
            .map(|x| (0..js.len()).filter(|&i| a.le(js[i], x)).collect())
            .collect();
        let mut img = vec![0usize; js.len()];
        let mut tried = 0u64;
        fn go(
            i: usize,
            a: &FinAlgebra,
            b: &FinAlgebra,
            js: &[usize],
            below: &[Vec<usize>],
            img: &mut Vec<usize>,
            tried: &mut u64,
            budget: Option<u64>,
            maps: &mut Vec<Vec<usize>>,
        ) -> Result<()> {
            if i == js.len() {
                *tried += 1;
                if budget.is_some_and(|lim| *tried > lim) {
                    return Err(Error::Budget {
                        message: format!(
                            "homomorphism search exceeded {} candidates",
                            budget.unwrap_or(0)
                        ),
                        checkpoint: None,
                    });
                }
                let top_img = b.join_all(below[a.top()].iter().map(|&k| img[k]));
                let h: Vec<usize> = a
                    .elements()
                    .map(|x| {
                        if x == a.bottom() {
                            b.tilde(top_img)
                        } else {
                            b.join_all(below[x].iter().map(|&k| img[k]))
                        }
                    })
                    .collect();
                if homomorphism_report(a, b, &h).ok() {
                    maps.push(h);
                }
                return Ok(());
            }
            for y in b.elements() {
                // order among join-irreducibles already assigned
                let ok = (0..i).all(|k| {
                    (!a.le(js[k], js[i]) || b.le(img[k], y))
                        && (!a.le(js[i], js[k]) || b.le(y, img[k]))
                });
                if ok {
                    img[i] = y;
                    go(i + 1, a, b, js, below, img, tried, budget, maps)?;
                }
            }
            Ok(())
        }
        go(
            0, a, b, &js, &below, &mut img, &mut tried, budget, &mut maps,
        )?;
    }
    maps.sort();
    maps.dedup();
    maps.into_iter()
        .map(|m| AlgHom::new(a.clone(), b.clone(), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean2, sugihara_chain, trivial_algebra};
    use crate::data::small_frame;

    #[test]
    fn identity_frame_map_is_valid() {
        let w = small_frame("W4_2_1a").unwrap();
        let f = FrameMap::new(w.clone(), w.clone(), (0..w.size()).collect()).unwrap();
        assert!(f.report().ok());
        let d = frame_morphism_dual(&f).unwrap();
        assert!(d.report().ok());
        assert!(d.map.iter().enumerate().all(|(i, &x)| i == x));
    }

    #[test]
    fn empty_frame_maps_anywhere_the_conditions_allow() {
        let f = FrameMap::new(Frame::empty(), small_frame("W2_1_1").unwrap(), vec![]).unwrap();
        assert!(f.report().ok());
    }

    #[test]
    fn collapsing_map_breaks_identity_condition() {
        let w3 = small_frame("W3_1_2").unwrap();
        let w2 = small_frame("W2_1_1").unwrap();
        let f = FrameMap::new(w3, w2, vec![0, 0]).unwrap();
        assert!(f.report().has("I₁ = f⁻¹[I₂]"));
    }

    #[test]
    fn boolean_has_only_the_identity() {
        let b = boolean2();
        let hs = enumerate_homs(&b, &b, None).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].map, vec![0, 1]);
    }

    #[test]
    fn trivial_source_maps_to_fixed_points() {
        let hs = enumerate_homs(&trivial_algebra(true), &sugihara_chain(3).unwrap(), None).unwrap();
        // only the middle element is fixed by ∼ and idempotent with 1 = middle
        assert_eq!(
            hs.iter().map(|h| h.map.clone()).collect::<Vec<_>>(),
            vec![vec![1]]
        );
        assert!(enumerate_homs(&trivial_algebra(true), &boolean2(), None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sugihara_embedding_and_its_dual() {
        let s2 = sugihara_chain(2).unwrap();
        let s4 = sugihara_chain(4).unwrap();
        let hs = enumerate_homs(&s2, &s4, None).unwrap();
        let emb = hs
            .iter()
            .find(|h| h.map == vec![1, 2])
            .expect("a_{-1} ↦ a_{-1}, a_1 ↦ a_1");
        assert!(emb.report().ok());
        // ↑a_2 has empty preimage; its lower adjoint is the top of S2
        assert_eq!(emb.lower_adjoint(3), 1);
        // it misses ⊥, so ⋀h⁻¹[↑a_{-1}] = ⊥ and h₊ is undefined
        assert!(!emb.is_complete());
        assert!(matches!(hom_dual(emb), Err(Error::Precondition(_))));
    }

    #[test]
    fn complete_embedding_has_surjective_dual() {
        let s3 = sugihara_chain(3).unwrap();
        let s5 = sugihara_chain(5).unwrap();
        let hs = enumerate_homs(&s3, &s5, None).unwrap();
        let emb = hs
            .iter()
            .find(|h| h.map == vec![0, 2, 4])
            .expect("bounds-preserving embedding");
        assert!(emb.is_complete());
        let d = hom_dual(emb).unwrap();
        assert!(d.report().ok());
        assert!(d.is_surjective());
        assert!(check_hom_duality(emb).unwrap().ok());
    }

    #[test]
    fn constant_map_is_rejected_with_witness() {
        let b = boolean2();
        let h = AlgHom::new(b.clone(), b.clone(), vec![1, 1]).unwrap();
        let r = h.report();
        assert!(r.has("preserves ~"));
        assert!(matches!(hom_dual(&h), Err(Error::Law(_))));
    }
}
