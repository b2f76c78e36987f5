//! Generalised prime filters (∅, A and the prime filters) and the
//! doubly-pointed filter frame. Finite carriers make every set clopen, so
//! the topological conditions hold trivially and are only noted.

use crate::algebra::{self, FinAlgebra};
use crate::error::{Error, Result};
use crate::frame::{self, Frame};
use crate::io::PointedFrame;
use crate::morphisms::{AlgHom, FrameMap};
use crate::report::ValidationReport;
use crate::sets::{self, bit, has, members, Family, Mask, SetOps};

/// A generalised prime filter as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenPrimeFilter {
    pub elements: Vec<usize>,
}

impl GenPrimeFilter {
    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    fn from_pred(a: &FinAlgebra, p: impl Fn(usize) -> bool) -> Self {
        GenPrimeFilter {
            elements: a.elements().filter(|&x| p(x)).collect(),
        }
    }
}

/// Checks the definition directly: ∅, A, or a proper non-empty upset
/// closed under ∧ whose complement is closed under ∨.
pub fn is_gen_prime_filter(a: &FinAlgebra, f: &GenPrimeFilter) -> bool {
    let n = a.size();
    if f.elements.is_empty() || f.elements.len() == n {
        return true;
    }
    a.elements().all(|x| {
        a.elements().all(|y| {
            let (fx, fy) = (f.contains(x), f.contains(y));
            (!fx || !a.le(x, y) || fy)
                && (!(fx && fy) || f.contains(a.meet(x, y)))
                && (fx || fy || !f.contains(a.join(x, y)))
        })
    })
}

/// All generalised prime filters: ∅, A and ↑j for j ∈ J∞(A), sorted by
/// size and then elements.
pub fn gen_prime_filters(a: &FinAlgebra) -> Result<Vec<GenPrimeFilter>> {
    if a.lattice().is_none() {
        return Err(Error::Precondition("order is not a lattice".into()));
    }
    let mut out = vec![
        GenPrimeFilter { elements: vec![] },
        GenPrimeFilter::from_pred(a, |_| true),
    ];
    for j in algebra::join_irreducibles(a) {
        out.push(GenPrimeFilter::from_pred(a, |x| a.le(j, x)));
    }
    out.sort_by(|f, g| (f.elements.len(), &f.elements).cmp(&(g.elements.len(), &g.elements)));
    out.dedup();
    Ok(out)
}

fn image_of_complement(
    a: &FinAlgebra,
    f: &GenPrimeFilter,
    op: impl Fn(usize) -> usize,
) -> GenPrimeFilter {
    let mut elements: Vec<usize> = a.elements().filter(|&x| !f.contains(x)).map(op).collect();
    elements.sort_unstable();
    GenPrimeFilter { elements }
}

/// (F^∼, F^−, F^¬) with F^∼ = {∼a | a ∉ F} and likewise for − and ¬;
/// F^¬ is `None` without ¬.
pub fn filter_unaries(
    a: &FinAlgebra,
    f: &GenPrimeFilter,
) -> Result<(GenPrimeFilter, GenPrimeFilter, Option<GenPrimeFilter>)> {
    let t = image_of_complement(a, f, |x| a.tilde(x));
    let m = image_of_complement(a, f, |x| a.minus(x));
    let g = a
        .has_neg()
        .then(|| image_of_complement(a, f, |x| a.neg_of(x)));
    for h in [Some(&t), Some(&m), g.as_ref()].into_iter().flatten() {
        if !is_gen_prime_filter(a, h) {
            return Err(Error::Internal(
                "a filter unary left the generalised prime filters".into(),
            ));
        }
    }
    Ok((t, m, g))
}

/// F•G as indices into `filters`: all H with a·b ∈ H for a ∈ F, b ∈ G.
pub fn filter_product(
    a: &FinAlgebra,
    filters: &[GenPrimeFilter],
    f: &GenPrimeFilter,
    g: &GenPrimeFilter,
) -> Vec<usize> {
    let products: Vec<usize> = {
        let mut v: Vec<usize> = f
            .elements
            .iter()
            .flat_map(|&x| g.elements.iter().map(move |&y| a.mul(x, y)))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    (0..filters.len())
        .filter(|&h| products.iter().all(|&p| filters[h].contains(p)))
        .collect()
}

/// The doubly-pointed frame 𝔉(A) together with its points.
pub fn filter_frame_with_points(a: &FinAlgebra) -> Result<(PointedFrame, Vec<GenPrimeFilter>)> {
    let fs = gen_prime_filters(a)?;
    let k = fs.len();
    if k > sets::MAX_POINTS {
        return Err(Error::SizeCap {
            count: k,
            cap: sets::MAX_POINTS,
        });
    }
    let index = |f: &GenPrimeFilter| -> Result<usize> {
        fs.iter()
            .position(|g| g == f)
            .ok_or_else(|| Error::Internal("filter not in the list".into()))
    };
    let subset = |f: &GenPrimeFilter, g: &GenPrimeFilter| f.elements.iter().all(|&x| g.contains(x));
    let up: Vec<Mask> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| subset(&fs[i], &fs[j]))
                .fold(0, |m, j| m | bit(j))
        })
        .collect();
    let identity = (0..k)
        .filter(|&i| fs[i].contains(a.one()))
        .fold(0, |m, i| m | bit(i));
    let mut comp = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            comp[i * k + j] = filter_product(a, &fs, &fs[i], &fs[j])
                .into_iter()
                .fold(0, |m, h| m | bit(h));
        }
    }
    let mut tilde = Vec::with_capacity(k);
    let mut minus = Vec::with_capacity(k);
    let mut neg = a.has_neg().then(Vec::new);
    for f in &fs {
        let (t, m, g) = filter_unaries(a, f)?;
        tilde.push(index(&t)?);
        minus.push(index(&m)?);
        if let (Some(v), Some(g)) = (neg.as_mut(), g) {
            v.push(index(&g)?);
        }
    }
    let mut w = Frame::from_masks(up, identity, comp, tilde, minus, neg)?;
    if let Some(name) = a.name() {
        w.set_name(Some(format!("F({name})")));
    }
    let bottom = index(&GenPrimeFilter { elements: vec![] })?;
    let top = index(&GenPrimeFilter::from_pred(a, |_| true))?;
    Ok((
        PointedFrame {
            frame: w,
            bottom,
            top,
        },
        fs,
    ))
}

pub fn filter_frame(a: &FinAlgebra) -> Result<PointedFrame> {
    filter_frame_with_points(a).map(|(p, _)| p)
}

/// Frame conditions plus boundedness and I proper and non-empty.
pub fn validate_pointed_frame(p: &PointedFrame) -> ValidationReport {
    let w = &p.frame;
    let mut r = frame::validate_frame(w);
    let all = sets::full(w.size());
    r.check(
        w.up(p.bottom) == all,
        "pointed: bottom is least",
        &[p.bottom],
    );
    r.check(
        w.points().all(|x| w.le(x, p.top)),
        "pointed: top is greatest",
        &[p.top],
    );
    r.check(w.identity() != 0, "pointed: I non-empty", &[]);
    r.check(w.identity() != all, "pointed: I proper", &[]);
    r.note("finite space: topology discrete, every upset clopen");
    r
}

/// 𝔄(W): the proper non-empty upsets under ∩, ∪, ∘, I and the negations,
/// with the carrier masks.
pub fn space_algebra_with_carrier(p: &PointedFrame) -> Result<(FinAlgebra, Vec<Mask>)> {
    let w = &p.frame;
    let n = w.size();
    let all = sets::full(n);
    let carrier: Vec<Mask> = sets::upsets(w.ups())
        .into_iter()
        .filter(|&u| u != 0 && u != all)
        .collect();
    if carrier.is_empty() {
        return Err(Error::Precondition(
            "pointed frame has no proper non-empty upsets".into(),
        ));
    }
    let fam = Family::new(carrier);
    let pre = |perm: &[usize], u: Mask| {
        (0..n)
            .filter(|&x| !has(u, perm[x]))
            .fold(0, |m, x| m | bit(x))
    };
    let minus_p = w.minus_perm().to_vec();
    let tilde_p = w.tilde_perm().to_vec();
    let tilde = |u: Mask| pre(&minus_p, u);
    let minus = |u: Mask| pre(&tilde_p, u);
    let neg_p = w.neg_perm().map(|g| g.to_vec());
    let neg_fn = |u: Mask| pre(neg_p.as_deref().unwrap_or(&[]), u);
    let neg: Option<&(dyn Fn(Mask) -> Mask + Sync)> =
        if neg_p.is_some() { Some(&neg_fn) } else { None };
    let mul = |u: Mask, v: Mask| w.comp_sets(u, v);
    let ops = SetOps {
        mul: &mul,
        one: w.identity(),
        tilde: &tilde,
        minus: &minus,
        neg,
    };
    let alg = sets::set_algebra(&fam, &ops)?;
    Ok((alg, fam.masks))
}

pub fn space_algebra(p: &PointedFrame) -> Result<FinAlgebra> {
    space_algebra_with_carrier(p).map(|(a, _)| a)
}

/// a ↦ X_a = {F | a ∈ F} as a map A → 𝔄(𝔉(A)), verified to be an
/// isomorphism.
pub fn priestley_roundtrip(a: &FinAlgebra) -> Result<Vec<usize>> {
    let (p, fs) = filter_frame_with_points(a)?;
    let (b, carrier) = space_algebra_with_carrier(&p)?;
    let fam = Family::new(carrier);
    let map: Vec<usize> = a
        .elements()
        .map(|x| {
            let m = (0..fs.len())
                .filter(|&i| fs[i].contains(x))
                .fold(0, |m, i| m | bit(i));
            fam.find(m, "X_a")
        })
        .collect::<Result<_>>()?;
    if algebra::is_isomorphism(a, &b, &map) {
        Ok(map)
    } else {
        Err(Error::Internal("a ↦ X_a is not an isomorphism".into()))
    }
}

/// Deletes the bounds ∅ and A from 𝔉(A) and checks that ↑j ↦ j is an
/// isomorphism onto `dual_frame(A)`. Returns the point map.
pub fn filter_frame_matches_dual(a: &FinAlgebra) -> Result<Vec<usize>> {
    let (p, fs) = filter_frame_with_points(a)?;
    let (d, js) = frame::dual_frame_with_points(a)?;
    let inner: Vec<usize> = (0..fs.len())
        .filter(|&i| i != p.bottom && i != p.top)
        .collect();
    let w = &p.frame;
    let keep = inner.iter().fold(0, |m, &i| m | bit(i));
    let shrink = |m: Mask| {
        inner
            .iter()
            .enumerate()
            .filter(|(_, &i)| has(m, i))
            .fold(0, |acc, (k, _)| acc | bit(k))
    };
    let pos = |i: usize| {
        inner
            .iter()
            .position(|&x| x == i)
            .ok_or_else(|| Error::Internal("unary hit a bound".into()))
    };
    let up = inner.iter().map(|&i| shrink(w.up(i) & keep)).collect();
    let comp = inner
        .iter()
        .flat_map(|&i| inner.iter().map(move |&j| (i, j)))
        .map(|(i, j)| shrink(w.comp(i, j) & keep))
        .collect();
    let tilde = inner
        .iter()
        .map(|&i| pos(w.tilde(i)))
        .collect::<Result<Vec<_>>>()?;
    let minus = inner
        .iter()
        .map(|&i| pos(w.minus(i)))
        .collect::<Result<Vec<_>>>()?;
    let neg = match w.neg_perm() {
        Some(g) => Some(
            inner
                .iter()
                .map(|&i| pos(g[i]))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let v = Frame::from_masks(up, shrink(w.identity() & keep), comp, tilde, minus, neg)?;
    // ↑j is the filter whose least element is j
    let map = inner
        .iter()
        .map(|&i| {
            let least = fs[i]
                .elements
                .iter()
                .copied()
                .find(|&x| fs[i].elements.iter().all(|&y| a.le(x, y)));
            least
                .and_then(|j| js.iter().position(|&k| k == j))
                .ok_or_else(|| {
                    Error::Internal("proper filter is not principal on a join-irreducible".into())
                })
        })
        .collect::<Result<Vec<_>>>()?;
    if frame::is_frame_isomorphism(&v, &d, &map) {
        Ok(map)
    } else {
        Err(Error::Internal("↑j ↦ j is not a frame isomorphism".into()))
    }
}

/// For a homomorphism h: A → B, F ↦ h⁻¹[F] maps 𝔉(B) to 𝔉(A); checks
/// that it lands in the generalised prime filters, is a frame morphism and
/// preserves the bounds.
pub fn check_filter_preimage(h: &AlgHom) -> Result<ValidationReport> {
    let (a, b) = (&h.source, &h.target);
    let (pb, fb) = filter_frame_with_points(b)?;
    let (pa, fa) = filter_frame_with_points(a)?;
    let mut r = ValidationReport::new();
    let mut map = Vec::with_capacity(fb.len());
    for (i, f) in fb.iter().enumerate() {
        let pre = GenPrimeFilter::from_pred(a, |x| f.contains(h.map[x]));
        match fa.iter().position(|g| *g == pre) {
            Some(k) => map.push(k),
            None => {
                r.fail("h⁻¹[F] is a generalised prime filter", &[i]);
                return Ok(r);
            }
        }
    }
    r.check(
        map[pb.bottom] == pa.bottom,
        "h⁻¹ preserves the bottom",
        &[pb.bottom],
    );
    r.check(map[pb.top] == pa.top, "h⁻¹ preserves the top", &[pb.top]);
    let f = FrameMap::new(pb.frame, pa.frame, map)?;
    r.merge(f.report().clone());
    Ok(r)
}

/// Members of a mask, for callers printing filter sets.
pub fn filter_indices(m: Mask) -> Vec<usize> {
    members(m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean2, lukasiewicz_chain, sugihara_chain, trivial_algebra};
    use crate::morphisms::enumerate_homs;

    fn brute_force_filters(a: &FinAlgebra) -> usize {
        (0u64..1 << a.size())
            .filter(|&m| {
                is_gen_prime_filter(
                    a,
                    &GenPrimeFilter {
                        elements: members(m).collect(),
                    },
                )
            })
            .count()
    }

    #[test]
    fn filter_counts() {
        assert_eq!(gen_prime_filters(&boolean2()).unwrap().len(), 3);
        assert_eq!(gen_prime_filters(&trivial_algebra(true)).unwrap().len(), 2);
        assert_eq!(
            gen_prime_filters(&lukasiewicz_chain(4).unwrap())
                .unwrap()
                .len(),
            5
        );
        for a in [
            boolean2(),
            lukasiewicz_chain(4).unwrap(),
            sugihara_chain(5).unwrap(),
        ] {
            assert_eq!(
                gen_prime_filters(&a).unwrap().len(),
                brute_force_filters(&a)
            );
        }
    }

    #[test]
    fn unaries_swap_bounds() {
        let a = sugihara_chain(3).unwrap();
        let all = GenPrimeFilter::from_pred(&a, |_| true);
        let empty = GenPrimeFilter { elements: vec![] };
        assert_eq!(filter_unaries(&a, &all).unwrap().0, empty);
        assert_eq!(filter_unaries(&a, &empty).unwrap().0, all);
        // ↑1 = {1, 2} has complement {0} and ∼0 = 2
        let up1 = GenPrimeFilter {
            elements: vec![1, 2],
        };
        assert_eq!(
            filter_unaries(&a, &up1).unwrap().0,
            GenPrimeFilter { elements: vec![2] }
        );
    }

    #[test]
    fn products_on_boolean() {
        let a = boolean2();
        let fs = gen_prime_filters(&a).unwrap();
        let top = GenPrimeFilter { elements: vec![1] };
        let got: Vec<&GenPrimeFilter> = filter_product(&a, &fs, &top, &top)
            .into_iter()
            .map(|i| &fs[i])
            .collect();
        assert_eq!(
            got,
            vec![
                &top,
                &GenPrimeFilter {
                    elements: vec![0, 1]
                }
            ]
        );
        let empty = GenPrimeFilter { elements: vec![] };
        assert_eq!(filter_product(&a, &fs, &empty, &top).len(), fs.len());
    }

    #[test]
    fn small_filter_frames() {
        let p = filter_frame(&trivial_algebra(true)).unwrap();
        assert_eq!(p.frame.size(), 2);
        assert!(validate_pointed_frame(&p).ok());
        let p = filter_frame(&boolean2()).unwrap();
        assert_eq!(p.frame.size(), 3);
        assert!(
            validate_pointed_frame(&p).ok(),
            "{}",
            validate_pointed_frame(&p)
        );
        for a in [
            trivial_algebra(true),
            boolean2(),
            sugihara_chain(3).unwrap(),
            lukasiewicz_chain(4).unwrap(),
        ] {
            assert!(priestley_roundtrip(&a).is_ok());
            assert!(filter_frame_matches_dual(&a).is_ok());
        }
    }

    #[test]
    fn preimages_of_incomplete_hom_stay_generalised() {
        let s2 = sugihara_chain(2).unwrap();
        let s4 = sugihara_chain(4).unwrap();
        for h in enumerate_homs(&s2, &s4, None).unwrap() {
            let r = check_filter_preimage(&h).unwrap();
            assert!(r.ok(), "{r}");
        }
    }
}
