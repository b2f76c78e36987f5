//! Concrete DqRAs of binary relations: Dq(E) over a partially ordered
//! equivalence relation, embedding search into them, and the search for
//! finite representations.
//!
//! Relations on X (|X| ≤ 8) are bit masks with bit x·n + y for the pair
//! (x, y).

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, FinAlgebra};
use crate::error::{Error, Result};
use crate::io::BaseFile;
use crate::morphisms::{homomorphism_report, AlgHom};
use crate::poset::{self, PosetShape};
use crate::report::ValidationReport;
use crate::sets::{self, bit, has, Family, Mask, SetOps};

pub const MAX_BASE_POINTS: usize = 8;

/// Default bound on |Up(E, ≼)|. The algebra stores a dense product table,
/// so the bound is kept well below what the upset enumeration could reach.
pub const DEFAULT_CAP: usize = 4096;

/// Relation = set of pairs.
pub type Rel = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepBase {
    n: usize,
    le: Rel,
    e: Rel,
    alpha: Vec<usize>,
    beta: Option<Vec<usize>>,
}

fn pair(n: usize, x: usize, y: usize) -> Rel {
    1 << (x * n + y)
}

fn is_perm(p: &[usize], n: usize) -> bool {
    let mut seen = 0u64;
    p.len() == n
        && p.iter().all(|&x| {
            x < n && !has(seen, x) && {
                seen |= bit(x);
                true
            }
        })
}

impl RepBase {
    /// Checks: ≤ a partial order, E an equivalence containing ≤, α an order
    /// automorphism inside E, β (when given) an order-reversing involution
    /// inside E with β = α;β;α.
    pub fn new(
        le: Vec<Vec<bool>>,
        e: Vec<Vec<bool>>,
        alpha: Vec<usize>,
        beta: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = le.len();
        if n == 0 || n > MAX_BASE_POINTS {
            return Err(Error::Structural(format!(
                "bases have 1 to {MAX_BASE_POINTS} points"
            )));
        }
        if le.iter().chain(e.iter()).any(|r| r.len() != n) || e.len() != n {
            return Err(Error::Structural(
                "leq and E must be square of the same size".into(),
            ));
        }
        let rel = |m: &[Vec<bool>]| {
            (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| m[x][y])
                .fold(0, |r, (x, y)| r | pair(n, x, y))
        };
        let b = RepBase {
            n,
            le: rel(&le),
            e: rel(&e),
            alpha,
            beta,
        };
        let ops = b.ops();
        let id = ops.graph(&(0..n).collect::<Vec<_>>());
        if b.le & id != id || b.le & ops.converse(b.le) != id || ops.compose(b.le, b.le) != b.le {
            return Err(Error::Structural("leq is not a partial order".into()));
        }
        if b.e & id != id || ops.converse(b.e) != b.e || ops.compose(b.e, b.e) != b.e {
            return Err(Error::Structural("E is not an equivalence relation".into()));
        }
        if b.le & !b.e != 0 {
            return Err(Error::Structural("leq is not contained in E".into()));
        }
        if !is_perm(&b.alpha, n) {
            return Err(Error::Structural("alpha is not a permutation".into()));
        }
        if (0..n).any(|x| (0..n).any(|y| b.leq(x, y) != b.leq(b.alpha[x], b.alpha[y]))) {
            return Err(Error::Structural(
                "alpha is not an order automorphism".into(),
            ));
        }
        if ops.graph(&b.alpha) & !b.e != 0 {
            return Err(Error::Structural("alpha leaves E".into()));
        }
        if let Some(g) = &b.beta {
            if !is_perm(g, n) {
                return Err(Error::Structural("beta is not a permutation".into()));
            }
            if (0..n).any(|x| (0..n).any(|y| b.leq(x, y) != b.leq(g[y], g[x]))) {
                return Err(Error::Structural("beta is not order-reversing".into()));
            }
            if (0..n).any(|x| g[g[x]] != x) {
                return Err(Error::Structural("beta is not an involution".into()));
            }
            if ops.graph(g) & !b.e != 0 {
                return Err(Error::Structural("beta leaves E".into()));
            }
            if (0..n).any(|x| g[x] != b.alpha[g[b.alpha[x]]]) {
                return Err(Error::Structural(
                    "beta differs from alpha;beta;alpha".into(),
                ));
            }
        }
        Ok(b)
    }

    /// E = X².
    pub fn full(le: Vec<Vec<bool>>, alpha: Vec<usize>, beta: Option<Vec<usize>>) -> Result<Self> {
        let n = le.len();
        RepBase::new(le, vec![vec![true; n]; n], alpha, beta)
    }

    pub fn from_file(f: &BaseFile) -> Result<Self> {
        let m = |v: &[Vec<u8>]| {
            v.iter()
                .map(|r| r.iter().map(|&b| b == 1).collect())
                .collect()
        };
        if f.leq.len() != f.points || f.e.len() != f.points {
            return Err(Error::Structural("matrix size differs from points".into()));
        }
        RepBase::new(m(&f.leq), m(&f.e), f.alpha.clone(), f.beta.clone())
    }

    pub fn to_file(&self) -> BaseFile {
        let m = |r: Rel| {
            (0..self.n)
                .map(|x| (0..self.n).map(|y| has(r, x * self.n + y) as u8).collect())
                .collect()
        };
        BaseFile {
            points: self.n,
            leq: m(self.le),
            e: m(self.e),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
        }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        has(self.le, x * self.n + y)
    }

    pub fn le_rel(&self) -> Rel {
        self.le
    }

    pub fn e_rel(&self) -> Rel {
        self.e
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn beta(&self) -> Option<&[usize]> {
        self.beta.as_deref()
    }

    pub fn ops(&self) -> RelOps {
        RelOps {
            n: self.n,
            e: self.e,
        }
    }

    /// The pairs of E in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| has(self.e, x * n + y))
            .collect()
    }
}

/// Relation algebra on subsets of E; complements are taken inside E.
#[derive(Clone, Copy, Debug)]
pub struct RelOps {
    pub n: usize,
    pub e: Rel,
}

impl RelOps {
    fn row(&self, r: Rel, x: usize) -> Mask {
        (r >> (x * self.n)) & sets::full(self.n)
    }

    pub fn contains(&self, r: Rel, x: usize, y: usize) -> bool {
        has(r, x * self.n + y)
    }

    pub fn converse(&self, r: Rel) -> Rel {
        let n = self.n;
        sets::members(r).fold(0, |acc, i| acc | pair(n, i % n, i / n))
    }

    pub fn compose(&self, r: Rel, s: Rel) -> Rel {
        let n = self.n;
        (0..n).fold(0, |acc, x| {
            let row = sets::members(self.row(r, x)).fold(0, |m, z| m | self.row(s, z));
            acc | (row << (x * n))
        })
    }

    pub fn complement(&self, r: Rel) -> Rel {
        self.e & !r
    }

    pub fn graph(&self, f: &[usize]) -> Rel {
        f.iter()
            .enumerate()
            .fold(0, |acc, (x, &y)| acc | pair(self.n, x, y))
    }
}

/// The order ≼ on E: (u, v) ≼ (x, y) iff x ≤ u and v ≤ y. Returns the pairs
/// and, for each, the mask of pairs above it.
pub fn twist_order(base: &RepBase) -> (Vec<(usize, usize)>, Vec<Mask>) {
    let ps = base.pairs();
    let up = ps
        .iter()
        .map(|&(u, v)| {
            ps.iter()
                .enumerate()
                .filter(|(_, &(x, y))| base.leq(x, u) && base.leq(v, y))
                .fold(0, |m, (i, _)| m | bit(i))
        })
        .collect();
    (ps, up)
}

/// Number of upsets, or `None` once it passes `cap`.
pub fn count_upsets(up: &[Mask], cap: usize) -> Option<usize> {
    let mut order: Vec<usize> = (0..up.len()).collect();
    order.sort_by_key(|&x| up[x].count_ones());
    fn go(
        i: usize,
        cur: Mask,
        order: &[usize],
        up: &[Mask],
        count: &mut usize,
        cap: usize,
    ) -> bool {
        if i == order.len() {
            *count += 1;
            return *count <= cap;
        }
        let x = order[i];
        if !go(i + 1, cur, order, up, count, cap) {
            return false;
        }
        if up[x] & !bit(x) & !cur == 0 {
            return go(i + 1, cur | bit(x), order, up, count, cap);
        }
        true
    }
    let mut count = 0;
    go(0, 0, &order, up, &mut count, cap).then_some(count)
}

/// Dq(E) with each element's relation.
#[derive(Clone, Debug)]
pub struct DqAlgebra {
    pub algebra: FinAlgebra,
    pub relations: Vec<Rel>,
}

impl DqAlgebra {
    pub fn index_of(&self, r: Rel) -> Option<usize> {
        self.relations.iter().position(|&s| s == r)
    }
}

pub fn build_dq(base: &RepBase) -> Result<DqAlgebra> {
    build_dq_capped(base, DEFAULT_CAP)
}

/// Upsets of (E, ≼) under ∩, ∪, ;, unit ≤, ∼R = R^{c⌣};α, −R = α;R^{c⌣}
/// and, with β, ¬R = α;β;R^c;β.
pub fn build_dq_capped(base: &RepBase, cap: usize) -> Result<DqAlgebra> {
    let (ps, up) = twist_order(base);
    let Some(_) = count_upsets(&up, cap) else {
        let count = sets::upsets(&up).len();
        return Err(Error::SizeCap { count, cap });
    };
    let ops = base.ops();
    let n = base.n;
    let to_rel = |m: Mask| sets::members(m).fold(0, |r, i| r | pair(n, ps[i].0, ps[i].1));
    let index: std::collections::HashMap<Rel, usize> = ps
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| (pair(n, x, y), i))
        .collect();
    let from_rel = |r: Rel| sets::members(r).fold(0, |m, b| m | bit(index[&(1u64 << b)]));
    let fam = Family::new(sets::upsets(&up));
    let alpha = ops.graph(&base.alpha);
    let beta = base.beta.as_ref().map(|g| ops.graph(g));
    let mul = |u: Mask, v: Mask| from_rel(ops.compose(to_rel(u), to_rel(v)));
    let tilde = |u: Mask| from_rel(ops.compose(ops.converse(ops.complement(to_rel(u))), alpha));
    let minus = |u: Mask| from_rel(ops.compose(alpha, ops.converse(ops.complement(to_rel(u)))));
    let neg_fn = |u: Mask| {
        let b = beta.unwrap_or(0);
        from_rel(ops.compose(
            ops.compose(ops.compose(alpha, b), ops.complement(to_rel(u))),
            b,
        ))
    };
    let neg: Option<&(dyn Fn(Mask) -> Mask + Sync)> =
        if beta.is_some() { Some(&neg_fn) } else { None };
    let set_ops = SetOps {
        mul: &mul,
        one: from_rel(base.le),
        tilde: &tilde,
        minus: &minus,
        neg,
    };
    let mut algebra = sets::set_algebra(&fam, &set_ops)?;
    algebra.set_name(Some(format!("Dq(E) on {} points", n)));
    let relations = fam.masks.iter().map(|&m| to_rel(m)).collect();
    Ok(DqAlgebra { algebra, relations })
}

/// Evaluates (γ;R)^c = γ;R^c and (R;γ)^c = R^c;γ.
pub fn complement_identities_check(
    base: &RepBase,
    gamma: &[usize],
    r: Rel,
) -> Result<(bool, bool)> {
    let ops = base.ops();
    if !is_perm(gamma, base.n) {
        return Err(Error::Precondition("gamma is not a bijection of X".into()));
    }
    let g = ops.graph(gamma);
    let id = ops.graph(&(0..base.n).collect::<Vec<_>>());
    if g & !base.e != 0
        || ops.compose(ops.converse(g), g) != id
        || ops.compose(g, ops.converse(g)) != id
    {
        return Err(Error::Precondition(
            "gamma must be a bijection inside E".into(),
        ));
    }
    if r & !base.e != 0 {
        return Err(Error::Precondition("R is not contained in E".into()));
    }
    let left = ops.complement(ops.compose(g, r)) == ops.compose(g, ops.complement(r));
    let right = ops.complement(ops.compose(r, g)) == ops.compose(ops.complement(r), g);
    Ok((left, right))
}

/// The structural facts about Dq(E) for one base: validity, unit ≤, zero
/// α;≤^{c⌣}, cyclic iff α = id, and the complement identities for
/// γ ∈ {α, β, α;β} over every R ⊆ E when |E| ≤ 16.
pub fn dq_laws(base: &RepBase) -> Result<ValidationReport> {
    let dq = build_dq(base)?;
    let a = &dq.algebra;
    let ops = base.ops();
    let mut r = if base.beta.is_some() {
        algebra::validate_dqra(a)?
    } else {
        algebra::validate_dinfl(a)
    };
    r.check(dq.relations[a.one()] == base.le, "unit is ≤", &[a.one()]);
    let zero = ops.compose(
        ops.graph(&base.alpha),
        ops.converse(ops.complement(base.le)),
    );
    r.check(
        dq.relations[a.zero()] == zero,
        "zero is α;≤^{c⌣}",
        &[a.zero()],
    );
    let cyclic = a.elements().all(|x| a.tilde(x) == a.minus(x));
    let alpha_id = base.alpha.iter().enumerate().all(|(i, &x)| i == x);
    r.check(cyclic == alpha_id, "cyclic iff α = id", &[]);
    let mut gammas = vec![base.alpha.clone()];
    if let Some(b) = &base.beta {
        gammas.push(b.clone());
        gammas.push((0..base.n).map(|x| b[base.alpha[x]]).collect());
    }
    let pairs = base.pairs();
    if pairs.len() <= 16 {
        for g in &gammas {
            for m in 0u64..1 << pairs.len() {
                let rel =
                    sets::members(m).fold(0, |acc, i| acc | pair(base.n, pairs[i].0, pairs[i].1));
                let (x, y) = complement_identities_check(base, g, rel)?;
                r.check(x, "(γ;R)^c = γ;R^c", &[]);
                r.check(y, "(R;γ)^c = R^c;γ", &[]);
            }
        }
    } else {
        r.note("complement identities skipped: |E| > 16");
    }
    Ok(r)
}

/// An element a with 0 < a < 1 and a·a ≤ 0; such an algebra has no finite
/// representation.
pub fn no_finite_rep_filter(a: &FinAlgebra) -> Option<usize> {
    let (zero, one) = (a.zero(), a.one());
    a.elements()
        .find(|&x| a.lt(zero, x) && a.lt(x, one) && a.le(a.mul(x, x), zero))
}

/// An injective homomorphism A → B, or `None` when none exists. Images of
/// join-irreducibles are chosen along a linear extension; an element is
/// checked as soon as all join-irreducibles below it have images.
pub fn embed_search(a: &FinAlgebra, b: &FinAlgebra) -> Result<Option<AlgHom>> {
    if a.has_neg() != b.has_neg() {
        return Err(Error::Signature(
            "source and target algebras differ in signature".into(),
        ));
    }
    if a.lattice().is_none() || b.lattice().is_none() {
        return Err(Error::Precondition("order is not a lattice".into()));
    }
    if a.size() > b.size() {
        return Ok(None);
    }
    let found = if a.size() == 1 {
        b.elements()
            .map(|y| vec![y])
            .find(|h| homomorphism_report(a, b, h).ok())
    } else {
        Embedder::new(a, b).run()
    };
    found
        .map(|m| AlgHom::new(a.clone(), b.clone(), m))
        .transpose()
}

struct Embedder<'a> {
    a: &'a FinAlgebra,
    b: &'a FinAlgebra,
    js: Vec<usize>,
    below: Vec<Mask>,
    /// elements that become determined at each step
    ready: Vec<Vec<usize>>,
}

impl<'a> Embedder<'a> {
    fn new(a: &'a FinAlgebra, b: &'a FinAlgebra) -> Self {
        let mut js = algebra::join_irreducibles(a);
        js.sort_by_key(|&j| a.elements().filter(|&x| a.le(x, j)).count());
        let below: Vec<Mask> = a
            .elements()
            .map(|x| {
                (0..js.len())
                    .filter(|&i| a.le(js[i], x))
                    .fold(0, |m, i| m | bit(i))
            })
            .collect();
        let mut ready = vec![vec![]; js.len()];
        for x in a.elements() {
            if x != a.bottom() {
                ready[63 - below[x].leading_zeros() as usize].push(x);
            }
        }
        Embedder {
            a,
            b,
            js,
            below,
            ready,
        }
    }

    fn run(&self) -> Option<Vec<usize>> {
        let mut h = vec![usize::MAX; self.a.size()];
        let mut img = vec![usize::MAX; self.js.len()];
        self.go(0, &mut img, &mut h)
    }

    fn value(&self, x: usize, img: &[usize]) -> usize {
        self.b
            .join_all(sets::members(self.below[x]).map(|k| img[k]))
    }

    /// Checks every law instance among determined elements that involves a
    /// newly determined one.
    fn consistent(&self, h: &[usize], fresh: &[usize]) -> bool {
        let (a, b) = (self.a, self.b);
        let known = |x: usize| h[x] != usize::MAX;
        let eq = |x: usize, v: usize| !known(x) || h[x] == v;
        for &x in fresh {
            let hx = h[x];
            if !eq(a.tilde(x), b.tilde(hx)) || !eq(a.minus(x), b.minus(hx)) {
                return false;
            }
            if a.has_neg() && !eq(a.neg_of(x), b.neg_of(hx)) {
                return false;
            }
            if x == a.one() && hx != b.one() {
                return false;
            }
            for y in a.elements().filter(|&y| known(y)) {
                let hy = h[y];
                if (x != y && hx == hy) || a.le(x, y) != b.le(hx, hy) || a.le(y, x) != b.le(hy, hx)
                {
                    return false;
                }
                if !eq(a.mul(x, y), b.mul(hx, hy))
                    || !eq(a.mul(y, x), b.mul(hy, hx))
                    || !eq(a.meet(x, y), b.meet(hx, hy))
                {
                    return false;
                }
                if known(a.tilde(y)) && a.tilde(y) == x && b.tilde(hy) != hx {
                    return false;
                }
                if known(a.minus(y)) && a.minus(y) == x && b.minus(hy) != hx {
                    return false;
                }
                if a.has_neg() && a.neg_of(y) == x && b.neg_of(hy) != hx {
                    return false;
                }
            }
        }
        true
    }

    fn go(&self, i: usize, img: &mut Vec<usize>, h: &mut Vec<usize>) -> Option<Vec<usize>> {
        let (a, b) = (self.a, self.b);
        if i == self.js.len() {
            let mut full = h.clone();
            full[a.bottom()] = b.tilde(h[a.top()]);
            return homomorphism_report(a, b, &full).ok().then_some(full);
        }
        for y in b.elements() {
            img[i] = y;
            for &x in &self.ready[i] {
                h[x] = self.value(x, img);
            }
            if self.consistent(h, &self.ready[i]) {
                if let Some(found) = self.go(i + 1, img, h) {
                    return Some(found);
                }
            }
            for &x in &self.ready[i] {
                h[x] = usize::MAX;
            }
        }
        img[i] = usize::MAX;
        None
    }
}

#[derive(Clone, Debug, Default)]
pub struct RepOptions {
    /// only E = X²
    pub full_e_only: bool,
    /// only α = id
    pub alpha_id_only: bool,
    /// skip the a² ≤ 0 test and search anyway
    pub ignore_filter: bool,
    pub cap: Option<usize>,
    pub deadline: Option<Instant>,
    /// index of the first base to try, from a checkpoint
    pub resume_from: usize,
}

/// A finite representation: the base and, for each element of A, its
/// relation as a sorted pair list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub base: BaseFile,
    pub embedding: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub max_points: usize,
    pub bases: usize,
    pub searched: usize,
    pub over_cap: usize,
    pub too_small: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum RepOutcome {
    Certificate(Certificate),
    /// the a² ≤ 0 test fired; nothing was searched
    NoFiniteRepresentation {
        witness: usize,
    },
    Exhausted(SearchSummary),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCheckpoint {
    pub max_points: usize,
    pub next_base: usize,
}

/// Equivalence relations on the points containing the comparability
/// components, finest first.
fn admissible_equivalences(p: &PosetShape) -> Vec<Vec<usize>> {
    let n = p.size;
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for x in 0..n {
        for y in 0..n {
            if p.le(x, y) {
                let (rx, ry) = (find(&mut comp, x), find(&mut comp, y));
                comp[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut comp, x)).collect();
    let mut comps: Vec<usize> = roots.clone();
    comps.sort_unstable();
    comps.dedup();
    // set partitions of the components as restricted growth strings
    let k = comps.len();
    let mut out = vec![];
    fn go(i: usize, cur: &mut Vec<usize>, max: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if i == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(i + 1, cur, max.max(b), k, out);
            cur.pop();
        }
    }
    if k > 0 {
        let mut cur = vec![0];
        go(1, &mut cur, 0, k, &mut out);
    }
    let mut blocks: Vec<Vec<usize>> = out
        .into_iter()
        .map(|rgs| {
            roots
                .iter()
                .map(|r| rgs[comps.iter().position(|c| c == r).unwrap_or(0)])
                .collect()
        })
        .collect();
    blocks.sort_by_key(|b: &Vec<usize>| {
        (
            std::cmp::Reverse(b.iter().max().copied().unwrap_or(0)),
            b.clone(),
        )
    });
    blocks
}

/// Bases with at most `max_points` points in search order: posets by size
/// and certificate, E finest first, then α, then β.
pub fn search_bases(max_points: usize, with_beta: bool, opts: &RepOptions) -> Result<Vec<RepBase>> {
    if max_points == 0 || max_points > MAX_BASE_POINTS {
        return Err(Error::Precondition(format!(
            "max_points must be 1 to {MAX_BASE_POINTS}"
        )));
    }
    let mut out = vec![];
    for p in poset::enumerate_posets(max_points) {
        if with_beta && !p.self_dual {
            continue;
        }
        let n = p.size;
        let le = p.leq_matrix();
        let mut es = admissible_equivalences(&p);
        if opts.full_e_only {
            es.retain(|b| b.iter().all(|&x| x == 0));
        }
        let id: Vec<usize> = (0..n).collect();
        let alphas = if opts.alpha_id_only {
            vec![id]
        } else {
            p.automorphisms()
        };
        let betas: Vec<Option<Vec<usize>>> = if with_beta {
            poset::order_reversing_bijections(&p.up)
                .into_iter()
                .filter(|g| (0..n).all(|x| g[g[x]] == x))
                .map(Some)
                .collect()
        } else {
            vec![None]
        };
        for blocks in &es {
            let e: Vec<Vec<bool>> = (0..n)
                .map(|x| (0..n).map(|y| blocks[x] == blocks[y]).collect())
                .collect();
            for alpha in &alphas {
                if (0..n).any(|x| blocks[alpha[x]] != blocks[x]) {
                    continue;
                }
                for beta in &betas {
                    if let Some(g) = beta {
                        if (0..n).any(|x| blocks[g[x]] != blocks[x] || g[x] != alpha[g[alpha[x]]]) {
                            continue;
                        }
                    }
                    out.push(RepBase::new(
                        le.clone(),
                        e.clone(),
                        alpha.clone(),
                        beta.clone(),
                    )?);
                }
            }
        }
    }
    Ok(out)
}

enum Step {
    Found(Certificate),
    OverCap,
    TooSmall,
    Searched,
}

/// Looks for an embedding of A into some Dq(E) with at most `max_points`
/// points.
pub fn representation_search(
    a: &FinAlgebra,
    max_points: usize,
    opts: &RepOptions,
) -> Result<RepOutcome> {
    if !opts.ignore_filter {
        if let Some(witness) = no_finite_rep_filter(a) {
            return Ok(RepOutcome::NoFiniteRepresentation { witness });
        }
    }
    let bases = search_bases(max_points, a.has_neg(), opts)?;
    let cap = opts.cap.unwrap_or(DEFAULT_CAP);
    let start = opts.resume_from.min(bases.len());
    let (searched, over_cap, too_small) = (
        AtomicUsize::new(0),
        AtomicUsize::new(0),
        AtomicUsize::new(0),
    );
    let run = |i: usize, base: &RepBase| -> Result<Step> {
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            let cp = RepCheckpoint {
                max_points,
                next_base: i,
            };
            return Err(Error::Budget {
                message: format!(
                    "representation search stopped at base {i} of {}",
                    bases.len()
                ),
                checkpoint: serde_json::to_string(&cp).ok(),
            });
        }
        let (_, up) = twist_order(base);
        match count_upsets(&up, cap) {
            None => return Ok(Step::OverCap),
            Some(c) if c < a.size() => return Ok(Step::TooSmall),
            _ => {}
        }
        let dq = build_dq_capped(base, cap)?;
        Ok(match embed_search(a, &dq.algebra)? {
            Some(h) => Step::Found(certificate(base, &dq, &h.map)),
            None => Step::Searched,
        })
    };
    // the first certificate or error in base order wins
    let hit = bases[start..]
        .par_iter()
        .enumerate()
        .find_map_first(|(k, base)| match run(start + k, base) {
            Ok(Step::Found(c)) => Some(Ok(c)),
            Err(e) => Some(Err(e)),
            Ok(s) => {
                let counter = match s {
                    Step::OverCap => &over_cap,
                    Step::TooSmall => &too_small,
                    _ => &searched,
                };
                counter.fetch_add(1, Ordering::Relaxed);
                None
            }
        });
    if let Some(h) = hit {
        return h.map(RepOutcome::Certificate);
    }
    let summary = SearchSummary {
        max_points,
        bases: bases.len(),
        searched: searched.into_inner(),
        over_cap: over_cap.into_inner(),
        too_small: too_small.into_inner(),
    };
    Ok(RepOutcome::Exhausted(summary))
}

fn certificate(base: &RepBase, dq: &DqAlgebra, map: &[usize]) -> Certificate {
    let n = base.n;
    let embedding = map
        .iter()
        .map(|&k| {
            sets::members(dq.relations[k])
                .map(|b| (b / n, b % n))
                .collect()
        })
        .collect();
    Certificate {
        base: base.to_file(),
        embedding,
    }
}

/// Re-checks a certificate from scratch on boolean matrices: every image is
/// a ≼-upset inside E, the map is injective, and it preserves ∧, ∨, ·, 1,
/// ∼, − and ¬ computed directly on relations.
pub fn verify_certificate(a: &FinAlgebra, cert: &Certificate) -> Result<ValidationReport> {
    let base = &cert.base;
    let n = base.points;
    if base.leq.len() != n || base.e.len() != n || base.alpha.len() != n {
        return Err(Error::Structural(
            "base matrices do not match the point count".into(),
        ));
    }
    if cert.embedding.len() != a.size() {
        return Err(Error::Structural(
            "embedding length differs from the algebra size".into(),
        ));
    }
    type M = Vec<Vec<bool>>;
    let le: M = base
        .leq
        .iter()
        .map(|r| r.iter().map(|&b| b == 1).collect())
        .collect();
    let e: M = base
        .e
        .iter()
        .map(|r| r.iter().map(|&b| b == 1).collect())
        .collect();
    let graph = |f: &[usize]| -> M {
        (0..n)
            .map(|x| (0..n).map(|y| f[x] == y).collect())
            .collect()
    };
    let comp = |r: &M, s: &M| -> M {
        (0..n)
            .map(|x| (0..n).map(|y| (0..n).any(|z| r[x][z] && s[z][y])).collect())
            .collect()
    };
    let conv = |r: &M| -> M { (0..n).map(|x| (0..n).map(|y| r[y][x]).collect()).collect() };
    let cmpl = |r: &M| -> M {
        (0..n)
            .map(|x| (0..n).map(|y| e[x][y] && !r[x][y]).collect())
            .collect()
    };
    let zip = |r: &M, s: &M, f: fn(bool, bool) -> bool| -> M {
        (0..n)
            .map(|x| (0..n).map(|y| f(r[x][y], s[x][y])).collect())
            .collect()
    };
    let alpha = graph(&base.alpha);
    let beta = base.beta.as_ref().map(|b| graph(b));
    let mut rels: Vec<M> = vec![];
    for ps in &cert.embedding {
        let mut m = vec![vec![false; n]; n];
        for &(x, y) in ps {
            if x >= n || y >= n {
                return Err(Error::Structural("pair outside the base".into()));
            }
            m[x][y] = true;
        }
        rels.push(m);
    }
    let mut r = ValidationReport::new();
    for (i, m) in rels.iter().enumerate() {
        let inside = (0..n).all(|x| (0..n).all(|y| !m[x][y] || e[x][y]));
        r.check(inside, "image inside E", &[i]);
        let upset = (0..n).all(|u| {
            (0..n).all(|v| {
                !m[u][v]
                    || (0..n).all(|x| (0..n).all(|y| !(e[x][y] && le[x][u] && le[v][y]) || m[x][y]))
            })
        });
        r.check(upset, "image is a ≼-upset", &[i]);
    }
    for x in a.elements() {
        for y in a.elements() {
            if x < y {
                r.check(rels[x] != rels[y], "injective", &[x, y]);
            }
            r.check(
                comp(&rels[x], &rels[y]) == rels[a.mul(x, y)],
                "preserves ·",
                &[x, y],
            );
            r.check(
                zip(&rels[x], &rels[y], |p, q| p && q) == rels[a.meet(x, y)],
                "preserves ∧",
                &[x, y],
            );
            r.check(
                zip(&rels[x], &rels[y], |p, q| p || q) == rels[a.join(x, y)],
                "preserves ∨",
                &[x, y],
            );
        }
        let cc = conv(&cmpl(&rels[x]));
        r.check(comp(&cc, &alpha) == rels[a.tilde(x)], "preserves ∼", &[x]);
        r.check(comp(&alpha, &cc) == rels[a.minus(x)], "preserves −", &[x]);
        match (&beta, a.neg(x)) {
            (Some(b), Some(g)) => {
                let v = comp(&comp(&comp(&alpha, b), &cmpl(&rels[x])), b);
                r.check(v == rels[g], "preserves ¬", &[x]);
            }
            (None, None) => {}
            _ => r.fail("signature: ¬ on one side only", &[x]),
        }
    }
    r.check(rels[a.one()] == le, "preserves 1", &[a.one()]);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean2, lukasiewicz_chain, sugihara_chain, validate_dqra};

    fn chain2() -> Vec<Vec<bool>> {
        vec![vec![true, true], vec![false, true]]
    }

    #[test]
    fn twisted_order_on_small_bases() {
        let one = RepBase::full(vec![vec![true]], vec![0], Some(vec![0])).unwrap();
        assert_eq!(twist_order(&one).1, vec![1]);
        let b = RepBase::full(chain2(), vec![0, 1], Some(vec![1, 0])).unwrap();
        let (ps, up) = twist_order(&b);
        let ix = |p: (usize, usize)| ps.iter().position(|&q| q == p).unwrap();
        assert_eq!(up[ix((1, 0))], 0b1111);
        assert_eq!(up[ix((0, 1))], bit(ix((0, 1))));
        assert!(!has(up[ix((0, 0))], ix((1, 1))) && !has(up[ix((1, 1))], ix((0, 0))));
        let anti = vec![vec![true, false], vec![false, true]];
        let d = RepBase::full(anti, vec![0, 1], None).unwrap();
        assert!(twist_order(&d).1.iter().all(|m| m.count_ones() == 1));
    }

    #[test]
    fn small_dq_algebras() {
        let one = RepBase::full(vec![vec![true]], vec![0], Some(vec![0])).unwrap();
        let dq = build_dq(&one).unwrap();
        assert!(algebra::algebra_iso(&dq.algebra, &boolean2())
            .unwrap()
            .is_some());
        let b = RepBase::full(chain2(), vec![0, 1], Some(vec![1, 0])).unwrap();
        let dq = build_dq(&b).unwrap();
        let a = &dq.algebra;
        assert_eq!(a.size(), 6);
        assert!(validate_dqra(a).unwrap().ok());
        assert_eq!(algebra::upper_covers(a, a.one()), vec![a.top()]);
        assert!(dq_laws(&b).unwrap().ok());
    }

    #[test]
    fn invalid_bases_rejected() {
        assert!(RepBase::full(chain2(), vec![1, 0], None).is_err());
        assert!(RepBase::full(chain2(), vec![0, 1], Some(vec![0, 1])).is_err());
        let anti = vec![vec![true, false], vec![false, true]];
        let disc = vec![vec![true, false], vec![false, true]];
        assert!(RepBase::new(anti, disc, vec![1, 0], None).is_err());
        let b = RepBase::full(chain2(), vec![0, 1], None).unwrap();
        assert!(matches!(
            complement_identities_check(&b, &[0, 0], 0),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            complement_identities_check(&b, &[0, 1], 0b0110).unwrap(),
            (true, true)
        );
    }

    #[test]
    fn filter_examples() {
        let l3 = lukasiewicz_chain(3).unwrap();
        assert_eq!(no_finite_rep_filter(&l3), Some(1));
        assert_eq!(no_finite_rep_filter(&boolean2()), None);
        assert_eq!(no_finite_rep_filter(&sugihara_chain(3).unwrap()), None);
    }

    #[test]
    fn boolean_has_one_point_certificate() {
        let out = representation_search(&boolean2(), 1, &RepOptions::default()).unwrap();
        let RepOutcome::Certificate(c) = out else {
            panic!("{out:?}")
        };
        assert_eq!(c.base.points, 1);
        assert!(verify_certificate(&boolean2(), &c).unwrap().ok());
    }

    #[test]
    fn counting_stops_at_cap() {
        let up: Vec<Mask> = (0..10).map(bit).collect();
        assert_eq!(count_upsets(&up, 2000), Some(1024));
        assert_eq!(count_upsets(&up, 1000), None);
    }
}
