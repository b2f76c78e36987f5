//! DInFL- and DqRA-frames, their complex algebras and the dual frames of
//! finite algebras.

use crate::algebra::{self, FinAlgebra};
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::sets::{self, bit, has, members, Family, Mask, SetOps};

/// A finite frame. `up[x]` is the principal upset of x and `comp[x][y]`
/// is the set x∘y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    name: Option<String>,
    n: usize,
    up: Vec<Mask>,
    identity: Mask,
    comp: Vec<Mask>,
    tilde: Vec<usize>,
    minus: Vec<usize>,
    neg: Option<Vec<usize>>,
}

fn perm_ok(name: &str, p: &[usize], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Structural(format!(
            "{name} has length {} (expected {n})",
            p.len()
        )));
    }
    let mut seen = 0u64;
    for &x in p {
        if x >= n || has(seen, x) {
            return Err(Error::Structural(format!("{name} is not a permutation")));
        }
        seen |= bit(x);
    }
    Ok(())
}

impl Frame {
    /// Builds a frame from masks; only shape and ranges are checked.
    pub fn from_masks(
        up: Vec<Mask>,
        identity: Mask,
        comp: Vec<Mask>,
        tilde: Vec<usize>,
        minus: Vec<usize>,
        neg: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = up.len();
        if n > sets::MAX_POINTS {
            return Err(Error::Structural(format!(
                "frames are limited to {} points",
                sets::MAX_POINTS
            )));
        }
        let all = sets::full(n);
        if comp.len() != n * n {
            return Err(Error::Structural("comp is not a size×size table".into()));
        }
        if up
            .iter()
            .chain(comp.iter())
            .chain(std::iter::once(&identity))
            .any(|&m| m & !all != 0)
        {
            return Err(Error::Structural(
                "a set mentions a point outside the carrier".into(),
            ));
        }
        perm_ok("tilde", &tilde, n)?;
        perm_ok("minus", &minus, n)?;
        if let Some(g) = &neg {
            perm_ok("neg", g, n)?;
        }
        Ok(Frame {
            name: None,
            n,
            up,
            identity,
            comp,
            tilde,
            minus,
            neg,
        })
    }

    /// Builds a frame from the order matrix and index lists.
    pub fn new(
        leq: Vec<Vec<bool>>,
        identity: Vec<usize>,
        comp: Vec<Vec<Vec<usize>>>,
        tilde: Vec<usize>,
        minus: Vec<usize>,
        neg: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = leq.len();
        if n > sets::MAX_POINTS {
            return Err(Error::Structural(format!(
                "frames are limited to {} points",
                sets::MAX_POINTS
            )));
        }
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("leq is not a square matrix".into()));
        }
        if comp.len() != n || comp.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("comp is not a size×size table".into()));
        }
        let idx = |xs: &[usize], what: &str| -> Result<Mask> {
            match xs.iter().find(|&&x| x >= n) {
                Some(x) => Err(Error::Structural(format!(
                    "{what} mentions point {x} outside the carrier"
                ))),
                None => Ok(sets::from_indices(xs)),
            }
        };
        let up = leq
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .fold(0, |m, (j, _)| m | bit(j))
            })
            .collect();
        let identity = idx(&identity, "identity")?;
        let mut cm = Vec::with_capacity(n * n);
        for row in &comp {
            for cell in row {
                cm.push(idx(cell, "comp")?);
            }
        }
        Self::from_masks(up, identity, cm, tilde, minus, neg)
    }

    pub fn empty() -> Self {
        Frame {
            name: None,
            n: 0,
            up: vec![],
            identity: 0,
            comp: vec![],
            tilde: vec![],
            minus: vec![],
            neg: Some(vec![]),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        has(self.up[x], y)
    }

    pub fn up(&self, x: usize) -> Mask {
        self.up[x]
    }

    pub fn ups(&self) -> &[Mask] {
        &self.up
    }

    pub fn identity(&self) -> Mask {
        self.identity
    }

    pub fn comp(&self, x: usize, y: usize) -> Mask {
        self.comp[x * self.n + y]
    }

    /// R x y z, i.e. z ∈ x∘y.
    pub fn r(&self, x: usize, y: usize, z: usize) -> bool {
        has(self.comp(x, y), z)
    }

    /// U∘V = ⋃{x∘y | x ∈ U, y ∈ V}.
    pub fn comp_sets(&self, u: Mask, v: Mask) -> Mask {
        let mut out = 0;
        for x in members(u) {
            for y in members(v) {
                out |= self.comp(x, y);
            }
        }
        out
    }

    pub fn tilde(&self, x: usize) -> usize {
        self.tilde[x]
    }

    pub fn minus(&self, x: usize) -> usize {
        self.minus[x]
    }

    pub fn neg(&self, x: usize) -> Option<usize> {
        self.neg.as_ref().map(|g| g[x])
    }

    pub fn neg_of(&self, x: usize) -> usize {
        self.neg.as_ref().expect("frame has no ¬")[x]
    }

    pub fn has_neg(&self) -> bool {
        self.neg.is_some()
    }

    pub fn tilde_perm(&self) -> &[usize] {
        &self.tilde
    }

    pub fn minus_perm(&self) -> &[usize] {
        &self.minus
    }

    pub fn neg_perm(&self) -> Option<&[usize]> {
        self.neg.as_deref()
    }

    pub fn comp_masks(&self) -> &[Mask] {
        &self.comp
    }

    pub fn without_neg(&self) -> Self {
        let mut f = self.clone();
        f.neg = None;
        f
    }

    pub fn with_neg(&self, neg: Option<Vec<usize>>) -> Result<Self> {
        if let Some(g) = &neg {
            perm_ok("neg", g, self.n)?;
        }
        let mut f = self.clone();
        f.neg = neg;
        Ok(f)
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        self.points()
            .map(|x| self.points().map(|y| self.le(x, y)).collect())
            .collect()
    }

    /// The image of this frame under the relabelling `x ↦ perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        perm_ok("relabelling", perm, self.n)?;
        let n = self.n;
        let map = |m: Mask| members(m).fold(0, |acc, x| acc | bit(perm[x]));
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let up = (0..n).map(|x| map(self.up[inv[x]])).collect();
        let mut comp = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                comp[perm[x] * n + perm[y]] = map(self.comp(x, y));
            }
        }
        let un = |p: &[usize]| (0..n).map(|x| perm[p[inv[x]]]).collect::<Vec<_>>();
        let mut f = Frame::from_masks(
            up,
            map(self.identity),
            comp,
            un(&self.tilde),
            un(&self.minus),
            self.neg.as_deref().map(un),
        )?;
        f.name = self.name.clone();
        Ok(f)
    }
}

/// Checks the DInFL-frame conditions and the derived properties
/// of the negations and of ∘.
pub fn validate_dinfl_frame(w: &Frame) -> ValidationReport {
    let n = w.n;
    let mut r = ValidationReport::new();
    r.note("finite frame: topology discrete");
    let up = &w.up;
    // partial order
    for x in 0..n {
        r.check(w.le(x, x), "partial order: reflexive", &[x]);
        for y in 0..n {
            if x != y && w.le(x, y) && w.le(y, x) {
                r.fail("partial order: antisymmetric", &[x, y]);
            }
            if w.le(x, y) && up[y] & !up[x] != 0 {
                r.fail(
                    "partial order: transitive",
                    &[x, y, (up[y] & !up[x]).trailing_zeros() as usize],
                );
            }
        }
    }
    // (2)
    r.check(
        sets::is_upset(w.identity, up),
        "I is an upset",
        &sets::to_indices(w.identity),
    );
    for x in 0..n {
        for y in 0..n {
            // (3)
            let c = w.comp(x, y);
            r.check(sets::is_upset(c, up), "x∘y is an upset", &[x, y]);
        }
        // I is a two-sided identity for ≼
        let left = w.comp_sets(w.identity, bit(x));
        let right = w.comp_sets(bit(x), w.identity);
        for y in 0..n {
            r.check(w.le(x, y) == has(left, y), "x ≼ y ⇔ y ∈ I∘x", &[x, y]);
            r.check(w.le(x, y) == has(right, y), "x ≼ y ⇔ y ∈ x∘I", &[x, y]);
        }
    }
    // associativity
    for x in 0..n {
        for y in 0..n {
            let xy = w.comp(x, y);
            for z in 0..n {
                let lhs = w.comp_sets(xy, bit(z));
                let rhs = w.comp_sets(bit(x), w.comp(y, z));
                r.check(lhs == rhs, "associativity", &[x, y, z]);
            }
        }
    }
    // z^∼ ∈ x∘y ⇔ y^− ∈ z∘x
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                r.check(
                    w.r(x, y, w.tilde(z)) == w.r(z, x, w.minus(y)),
                    "z~ ∈ x∘y ⇔ y- ∈ z∘x",
                    &[x, y, z],
                );
            }
        }
    }
    // (6)
    for x in 0..n {
        r.check(w.le(w.minus(w.tilde(x)), x), "x~- ≼ x", &[x]);
        r.check(w.le(w.tilde(w.minus(x)), x), "x-~ ≼ x", &[x]);
    }
    // derived properties
    for x in 0..n {
        r.check(
            w.minus(w.tilde(x)) == x && w.tilde(w.minus(x)) == x,
            "derived: ~ and - are inverse",
            &[x],
        );
        for y in 0..n {
            if w.le(x, y) {
                r.check(
                    w.le(w.minus(y), w.minus(x)),
                    "derived: - order-reversing",
                    &[x, y],
                );
                r.check(
                    w.le(w.tilde(y), w.tilde(x)),
                    "derived: ~ order-reversing",
                    &[x, y],
                );
                for v in 0..n {
                    r.check(
                        w.comp(y, v) & !w.comp(x, v) == 0,
                        "derived: ∘ antitone on the left",
                        &[x, y, v],
                    );
                    r.check(
                        w.comp(v, y) & !w.comp(v, x) == 0,
                        "derived: ∘ antitone on the right",
                        &[x, y, v],
                    );
                }
            }
        }
    }
    r
}

/// Checks the ¬ conditions on top of the DInFL-frame conditions, plus the derived
/// identities x^∼¬ = x^¬− and x^−¬ = x^¬∼.
pub fn validate_dqra_frame(w: &Frame) -> Result<ValidationReport> {
    if !w.has_neg() {
        return Err(Error::Signature(
            "validate_dqra_frame needs a frame with ¬".into(),
        ));
    }
    let mut r = validate_dinfl_frame(w);
    r.merge(check_neg_conditions(w));
    for x in w.points() {
        r.check(
            w.neg_of(w.tilde(x)) == w.minus(w.neg_of(x)),
            "derived: x~¬ = x¬-",
            &[x],
        );
        r.check(
            w.neg_of(w.minus(x)) == w.tilde(w.neg_of(x)),
            "derived: x-¬ = x¬~",
            &[x],
        );
    }
    Ok(r)
}

/// The ¬ conditions alone: involution, order reversal and the R law.
pub(crate) fn check_neg_conditions(w: &Frame) -> ValidationReport {
    let mut r = ValidationReport::new();
    let n = w.n;
    let g = |x| w.neg_of(x);
    for x in 0..n {
        r.check(g(g(x)) == x, "x¬¬ = x", &[x]);
        for y in 0..n {
            if w.le(x, y) {
                r.check(w.le(g(y), g(x)), "¬ order-reversing", &[x, y]);
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = w.r(x, y, w.minus(z));
                let rhs = w.r(g(w.tilde(y)), g(w.tilde(x)), g(z));
                r.check(lhs == rhs, "R x y z- ⇔ R y~¬ x~¬ z¬", &[x, y, z]);
            }
        }
    }
    r
}

/// Validates with the signature the frame carries.
pub fn validate_frame(w: &Frame) -> ValidationReport {
    match validate_dqra_frame(w) {
        Ok(r) => r,
        Err(_) => validate_dinfl_frame(w),
    }
}

/// The complex algebra together with its carrier of upsets.
pub fn complex_algebra_with_carrier(w: &Frame) -> Result<(FinAlgebra, Vec<Mask>)> {
    let fam = Family::new(sets::upsets(&w.up));
    let n = w.n;
    let all = sets::full(n);
    // ∼U = {x | x^− ∉ U}, −U = {x | x^∼ ∉ U}, ¬U = {x | x^¬ ∉ U}
    let pre =
        |p: &[usize], u: Mask| (0..n).filter(|&x| !has(u, p[x])).fold(0, |m, x| m | bit(x)) & all;
    let tilde = |u: Mask| pre(&w.minus, u);
    let minus = |u: Mask| pre(&w.tilde, u);
    let neg_fn;
    let neg: Option<&(dyn Fn(Mask) -> Mask + Sync)> = match &w.neg {
        Some(g) => {
            neg_fn = move |u: Mask| pre(g, u);
            Some(&neg_fn)
        }
        None => None,
    };
    let mul = |u: Mask, v: Mask| w.comp_sets(u, v);
    let ops = SetOps {
        mul: &mul,
        one: w.identity,
        tilde: &tilde,
        minus: &minus,
        neg,
    };
    let mut a = sets::set_algebra(&fam, &ops)?;
    if let Some(name) = &w.name {
        a.set_name(Some(format!("{name}+")));
    }
    Ok((a, fam.masks))
}

/// The algebra of upsets of the frame.
pub fn complex_algebra(w: &Frame) -> Result<FinAlgebra> {
    complex_algebra_with_carrier(w).map(|(a, _)| a)
}

/// The frame on J∞(A) with the reversed order. Point `i` of the result is
/// the join-irreducible `points[i]`.
pub fn dual_frame_with_points(a: &FinAlgebra) -> Result<(Frame, Vec<usize>)> {
    if a.lattice().is_none() {
        return Err(Error::Precondition("order is not a lattice".into()));
    }
    let js = algebra::join_irreducibles(a);
    let k = js.len();
    if k > sets::MAX_POINTS {
        return Err(Error::SizeCap {
            count: k,
            cap: sets::MAX_POINTS,
        });
    }
    let pos = |e: usize| js.iter().position(|&j| j == e);
    let ks: Vec<usize> = js
        .iter()
        .map(|&j| algebra::kappa(a, j))
        .collect::<Result<_>>()?;
    let to_point = |e: usize, what: &str| -> Result<usize> {
        pos(e).ok_or_else(|| {
            Error::Internal(format!(
                "{what} of a join-irreducible is not join-irreducible"
            ))
        })
    };
    let up: Vec<Mask> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| a.le(js[j], js[i]))
                .fold(0, |m, j| m | bit(j))
        })
        .collect();
    let identity = (0..k)
        .filter(|&i| a.le(js[i], a.one()))
        .fold(0, |m, i| m | bit(i));
    let mut comp = vec![0; k * k];
    for x in 0..k {
        for y in 0..k {
            let p = a.mul(js[x], js[y]);
            comp[x * k + y] = (0..k)
                .filter(|&z| a.le(js[z], p))
                .fold(0, |m, z| m | bit(z));
        }
    }
    let tilde = (0..k)
        .map(|i| to_point(a.tilde(ks[i]), "~κ"))
        .collect::<Result<Vec<_>>>()?;
    let minus = (0..k)
        .map(|i| to_point(a.minus(ks[i]), "-κ"))
        .collect::<Result<Vec<_>>>()?;
    let neg = if a.has_neg() {
        Some(
            (0..k)
                .map(|i| to_point(a.neg_of(ks[i]), "¬κ"))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let mut w = Frame::from_masks(up, identity, comp, tilde, minus, neg)?;
    if let Some(name) = a.name() {
        w.name = Some(format!("{name}+"));
    }
    Ok((w, js))
}

pub fn dual_frame(a: &FinAlgebra) -> Result<Frame> {
    dual_frame_with_points(a).map(|(w, _)| w)
}

/// ψ(a) = {j ∈ J∞ | j ≤ a} as a map A → (A₊)⁺, verified to be an
/// isomorphism.
pub fn roundtrip_algebra(a: &FinAlgebra) -> Result<Vec<usize>> {
    let (w, js) = dual_frame_with_points(a)?;
    let (b, carrier) = complex_algebra_with_carrier(&w)?;
    let fam = Family::new(carrier);
    let psi: Vec<usize> = a
        .elements()
        .map(|x| {
            let m = (0..js.len())
                .filter(|&i| a.le(js[i], x))
                .fold(0, |m, i| m | bit(i));
            fam.find(m, "ψ(a)")
        })
        .collect::<Result<_>>()?;
    if algebra::is_isomorphism(a, &b, &psi) {
        Ok(psi)
    } else {
        Err(Error::Internal("ψ is not an isomorphism onto (A₊)⁺".into()))
    }
}

/// x ↦ ↑x as a map W → (W⁺)₊, verified to be a frame isomorphism.
pub fn roundtrip_frame(w: &Frame) -> Result<Vec<usize>> {
    let (a, carrier) = complex_algebra_with_carrier(w)?;
    let (v, js) = dual_frame_with_points(&a)?;
    let f: Vec<usize> = w
        .points()
        .map(|x| {
            js.iter()
                .position(|&j| carrier[j] == w.up(x))
                .ok_or_else(|| Error::Internal(format!("↑{x} is not join-irreducible in W⁺")))
        })
        .collect::<Result<_>>()?;
    if is_frame_isomorphism(w, &v, &f) {
        Ok(f)
    } else {
        Err(Error::Internal("x ↦ ↑x is not a frame isomorphism".into()))
    }
}

/// Checks that `f` is a bijection preserving ≼, I, ∘ and the unary maps.
pub fn is_frame_isomorphism(w: &Frame, v: &Frame, f: &[usize]) -> bool {
    let n = w.n;
    if v.n != n || f.len() != n || w.has_neg() != v.has_neg() {
        return false;
    }
    let mut seen = 0u64;
    for &y in f {
        if y >= n || has(seen, y) {
            return false;
        }
        seen |= bit(y);
    }
    let map = |m: Mask| members(m).fold(0, |acc, x| acc | bit(f[x]));
    map(w.identity) == v.identity
        && w.points().all(|x| {
            v.tilde(f[x]) == f[w.tilde(x)]
                && v.minus(f[x]) == f[w.minus(x)]
                && (!w.has_neg() || v.neg_of(f[x]) == f[w.neg_of(x)])
                && map(w.up(x)) == v.up(f[x])
                && w.points().all(|y| map(w.comp(x, y)) == v.comp(f[x], f[y]))
        })
}

/// Searches for a frame isomorphism, returning the lexicographically least
/// image sequence.
pub fn frame_iso(w: &Frame, v: &Frame) -> Result<Option<Vec<usize>>> {
    if w.has_neg() != v.has_neg() {
        return Err(Error::Signature(
            "one frame has ¬ and the other does not".into(),
        ));
    }
    if w.n != v.n {
        return Ok(None);
    }
    let inv = |fr: &Frame, x: usize| {
        (
            fr.up(x).count_ones(),
            (0..fr.n).filter(|&y| fr.le(y, x)).count(),
            has(fr.identity, x),
            fr.comp(x, x).count_ones(),
            fr.tilde(x) == x,
        )
    };
    let mut f = vec![usize::MAX; w.n];
    let mut used = 0u64;
    fn go(
        w: &Frame,
        v: &Frame,
        x: usize,
        f: &mut Vec<usize>,
        used: &mut u64,
        inv: &dyn Fn(&Frame, usize) -> (u32, usize, bool, u32, bool),
    ) -> bool {
        if x == w.n {
            return is_frame_isomorphism(w, v, f);
        }
        for c in 0..v.n {
            if has(*used, c) || inv(w, x) != inv(v, c) {
                continue;
            }
            f[x] = c;
            let ok = (0..=x).all(|y| {
                let fy = f[y];
                w.le(x, y) == v.le(c, fy)
                    && w.le(y, x) == v.le(fy, c)
                    && (w.tilde(y) > x || f[w.tilde(y)] == v.tilde(fy))
                    && (w.minus(y) > x || f[w.minus(y)] == v.minus(fy))
                    && (0..=x).all(|z| {
                        w.r(x, y, z) == v.r(c, fy, f[z]) && w.r(y, x, z) == v.r(fy, c, f[z])
                    })
            });
            if ok {
                *used |= bit(c);
                if go(w, v, x + 1, f, used, inv) {
                    return true;
                }
                *used &= !bit(c);
            }
        }
        f[x] = usize::MAX;
        false
    }
    if go(w, v, 0, &mut f, &mut used, &inv) {
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean2, trivial_algebra, validate_dqra};

    fn w3_1_2() -> Frame {
        // u ≼ e, I = {e}
        Frame::new(
            vec![vec![true, true], vec![false, true]],
            vec![1],
            vec![vec![vec![0, 1], vec![0, 1]], vec![vec![0, 1], vec![1]]],
            vec![1, 0],
            vec![1, 0],
            Some(vec![1, 0]),
        )
        .unwrap()
    }

    #[test]
    fn sugihara_frame_validates() {
        let w = w3_1_2();
        assert!(
            validate_dqra_frame(&w).unwrap().ok(),
            "{}",
            validate_dqra_frame(&w).unwrap()
        );
        let a = complex_algebra(&w).unwrap();
        assert_eq!(a.size(), 3);
        assert!(validate_dqra(&a).unwrap().ok());
        assert_eq!(a.one(), a.zero());
        assert!(roundtrip_frame(&w).is_ok());
    }

    #[test]
    fn wrong_identity_breaks_condition_one() {
        let mut w = w3_1_2();
        w.identity = bit(0);
        assert!(validate_dinfl_frame(&w).has("x ≼ y ⇔ y ∈ I∘x"));
    }

    #[test]
    fn empty_frame_gives_trivial_algebra() {
        let w = Frame::empty();
        assert!(validate_dqra_frame(&w).unwrap().ok());
        let a = complex_algebra(&w).unwrap();
        assert_eq!(a.size(), 1);
        assert!(crate::algebra::is_isomorphism(
            &a,
            &trivial_algebra(true),
            &[0]
        ));
    }

    #[test]
    fn boolean_duals() {
        let b = boolean2();
        let w = dual_frame(&b).unwrap();
        assert_eq!(w.size(), 1);
        assert_eq!(w.identity(), 1);
        assert_eq!(w.comp(0, 0), 1);
        assert_eq!(roundtrip_algebra(&b).unwrap(), vec![0, 1]);
    }

    #[test]
    fn relabel_and_iso() {
        let w = w3_1_2();
        let v = w.relabel(&[1, 0]).unwrap();
        assert_eq!(frame_iso(&w, &v).unwrap(), Some(vec![1, 0]));
        assert_eq!(frame_iso(&w, &w).unwrap(), Some(vec![0, 1]));
    }
}
