//! Isomorphism-free enumeration of DInFL- and DqRA-frames over a fixed
//! self-dual poset, and algebra counts by size.
//!
//! The search fixes I, then ^∼, then decides the bits of the ternary
//! relation. Bits tied together by z^∼ ∈ x∘y ⇔ y^− ∈ z∘x are decided as one
//! variable; the I laws, upward closure and antitonicity of ∘ propagate as implications, and
//! associativity is checked on lower/upper bounds of both sides after
//! every propagation step. Frames are kept only when lexicographically
//! least among their images under poset automorphisms.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::poset::{self, PosetShape};
use crate::sets::{self, bit, has, members, Mask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Signature {
    #[serde(rename = "dinfl")]
    DInFL,
    #[serde(rename = "dqra")]
    DqRA,
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Signature::DInFL => "dinfl",
            Signature::DqRA => "dqra",
        })
    }
}

impl std::str::FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dinfl" => Ok(Signature::DInFL),
            "dqra" => Ok(Signature::DqRA),
            _ => Err(Error::Precondition(format!(
                "unknown signature {s:?} (dinfl or dqra)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Stats {
    pub branches: usize,
    pub nodes: u64,
    pub prunes: u64,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub poset: String,
    pub signature: Signature,
    pub frames: Vec<Frame>,
    pub count: usize,
    pub stats: Stats,
}

/// Frame data relative to a known poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFrame {
    pub identity: Mask,
    pub tilde: Vec<usize>,
    pub comp: Vec<Mask>,
    pub neg: Option<Vec<usize>>,
}

/// Resumable state of an interrupted enumeration: the finished branches
/// and their frames.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub poset: Vec<Mask>,
    pub signature: Signature,
    pub branches: usize,
    pub done: BTreeMap<usize, Vec<RawFrame>>,
}

#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    pub deadline: Option<Instant>,
    pub node_budget: Option<u64>,
    pub resume: Option<Checkpoint>,
    pub sequential: bool,
}

impl EnumOptions {
    pub fn with_time_budget(ms: u64) -> Self {
        EnumOptions {
            deadline: Some(Instant::now() + Duration::from_millis(ms)),
            ..Default::default()
        }
    }
}

fn relabel_mask(m: Mask, p: &[usize]) -> Mask {
    members(m).fold(0, |acc, x| acc | bit(p[x]))
}

fn conj(t: &[usize], p: &[usize]) -> Vec<usize> {
    // p ∘ t ∘ p⁻¹
    let mut out = vec![0; t.len()];
    for x in 0..t.len() {
        out[p[x]] = p[t[x]];
    }
    out
}

fn relabel_comp(comp: &[Mask], n: usize, p: &[usize]) -> Vec<Mask> {
    let mut out = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            out[p[x] * n + p[y]] = relabel_mask(comp[x * n + y], p);
        }
    }
    out
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

/// One (I, ^∼) choice together with its stabiliser in Aut(P).
struct Branch {
    identity: Mask,
    tilde: Vec<usize>,
    stab: Vec<Vec<usize>>,
}

fn branches(up: &[Mask], auts: &[Vec<usize>]) -> Vec<Branch> {
    let n = up.len();
    let revs = poset::order_reversing_bijections(up);
    let mut out = Vec::new();
    for &i in sets::upsets(up).iter().filter(|&&m| m != 0 || n == 0) {
        if auts.iter().any(|p| relabel_mask(i, p) < i) {
            continue;
        }
        let stab_i: Vec<&Vec<usize>> = auts.iter().filter(|p| relabel_mask(i, p) == i).collect();
        for t in &revs {
            if stab_i.iter().any(|p| conj(t, p) < *t) {
                continue;
            }
            let stab = stab_i
                .iter()
                .filter(|p| conj(t, p) == *t)
                .map(|p| p.to_vec())
                .collect();
            out.push(Branch {
                identity: i,
                tilde: t.clone(),
                stab,
            });
        }
    }
    out
}

const UNK: i8 = -1;

/// Static data of one branch.
struct Model<'a> {
    n: usize,
    up: &'a [Mask],
    members: Vec<Vec<usize>>,
    imp1: Vec<Vec<usize>>,
    imp0: Vec<Vec<usize>>,
    /// each clause needs one of its orbits set
    clauses: Vec<Vec<usize>>,
    forced0: Vec<usize>,
}

struct Search<'a> {
    m: &'a Model<'a>,
    val: Vec<i8>,
    must1: Vec<Mask>,
    poss: Vec<Mask>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    nodes: u64,
    prunes: u64,
}

impl<'a> Model<'a> {
    fn new(up: &'a [Mask], identity: Mask, tilde: &[usize]) -> Self {
        let n = up.len();
        let minus = inverse(tilde);
        let idx = |x: usize, y: usize, w: usize| (x * n + y) * n + w;
        let total = n * n * n;
        // union-find over triples: bit(x,y,w) = bit(w^−, x, y^−)
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for x in 0..n {
            for y in 0..n {
                for w in 0..n {
                    let a = find(&mut parent, idx(x, y, w));
                    let b = find(&mut parent, idx(minus[w], x, minus[y]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut orbit = vec![0; total];
        let mut id_of = vec![usize::MAX; total];
        let mut members_v: Vec<Vec<usize>> = Vec::new();
        for t in 0..total {
            let r = find(&mut parent, t);
            if id_of[r] == usize::MAX {
                id_of[r] = members_v.len();
                members_v.push(Vec::new());
            }
            orbit[t] = id_of[r];
            members_v[id_of[r]].push(t);
        }
        let k = members_v.len();
        let lower_covers: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| y != x && has(up[y], x) && covers(up, y, x))
                    .collect()
            })
            .collect();
        let upper_covers: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| y != x && has(up[x], y) && covers(up, x, y))
                    .collect()
            })
            .collect();
        let mut imp1 = vec![Vec::new(); k];
        let mut imp0 = vec![Vec::new(); k];
        for x in 0..n {
            for y in 0..n {
                for w in 0..n {
                    let o = orbit[idx(x, y, w)];
                    // cells are upsets; ∘ is antitone in both arguments
                    for &w2 in &upper_covers[w] {
                        imp1[o].push(orbit[idx(x, y, w2)]);
                    }
                    for &x2 in &lower_covers[x] {
                        imp1[o].push(orbit[idx(x2, y, w)]);
                    }
                    for &y2 in &lower_covers[y] {
                        imp1[o].push(orbit[idx(x, y2, w)]);
                    }
                    for &w2 in &lower_covers[w] {
                        imp0[o].push(orbit[idx(x, y, w2)]);
                    }
                    for &x2 in &upper_covers[x] {
                        imp0[o].push(orbit[idx(x2, y, w)]);
                    }
                    for &y2 in &upper_covers[y] {
                        imp0[o].push(orbit[idx(x, y2, w)]);
                    }
                }
            }
        }
        for v in imp1.iter_mut().chain(imp0.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        // I laws: i∘x and x∘i lie inside ↑x for i ∈ I, and x ∈ I∘x, x ∈ x∘I
        let mut forced0 = Vec::new();
        let mut clauses = Vec::new();
        let min_i: Vec<usize> = members(identity)
            .filter(|&i| {
                up.iter()
                    .enumerate()
                    .all(|(j, &u)| j == i || !has(identity, j) || !has(u, i))
            })
            .collect();
        for x in 0..n {
            for i in members(identity) {
                for w in 0..n {
                    if !has(up[x], w) {
                        forced0.push(orbit[idx(i, x, w)]);
                        forced0.push(orbit[idx(x, i, w)]);
                    }
                }
            }
            clauses.push(min_i.iter().map(|&i| orbit[idx(i, x, x)]).collect());
            clauses.push(min_i.iter().map(|&i| orbit[idx(x, i, x)]).collect());
        }
        Model {
            n,
            up,
            members: members_v,
            imp1,
            imp0,
            clauses,
            forced0,
        }
    }
}

/// y covers x (x < y with nothing between), given x ≤ y.
fn covers(up: &[Mask], x: usize, y: usize) -> bool {
    let between = up[x] & !bit(x) & !bit(y);
    members(between).all(|z| !has(up[z], y))
}

impl<'a> Search<'a> {
    fn new(m: &'a Model<'a>) -> Self {
        let n = m.n;
        let all = sets::full(n);
        Search {
            m,
            val: vec![UNK; m.members.len()],
            must1: vec![0; n * n],
            poss: vec![all; n * n],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            prunes: 0,
        }
    }

    fn assign(&mut self, o: usize, v: i8) -> bool {
        match self.val[o] {
            UNK => {
                self.val[o] = v;
                self.trail.push(o);
                let n = self.m.n;
                for &t in &self.m.members[o] {
                    let (c, w) = (t / n, t % n);
                    if v == 1 {
                        self.must1[c] |= bit(w);
                    } else {
                        self.poss[c] &= !bit(w);
                    }
                }
                self.queue.push(o);
                true
            }
            old => old == v,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        let n = self.m.n;
        while self.trail.len() > mark {
            let o = self.trail.pop().unwrap();
            let v = self.val[o];
            self.val[o] = UNK;
            for &t in &self.m.members[o] {
                let (c, w) = (t / n, t % n);
                if v == 1 {
                    self.must1[c] &= !bit(w);
                } else {
                    self.poss[c] |= bit(w);
                }
            }
        }
        self.queue.clear();
    }

    fn propagate(&mut self) -> bool {
        loop {
            while let Some(o) = self.queue.pop() {
                let (list, v) = if self.val[o] == 1 {
                    (&self.m.imp1[o], 1)
                } else {
                    (&self.m.imp0[o], 0)
                };
                for k in 0..list.len() {
                    let p = list[k];
                    if !self.assign(p, v) {
                        return false;
                    }
                }
            }
            for ci in 0..self.m.clauses.len() {
                let clause = &self.m.clauses[ci];
                let mut unknown = None;
                let mut n_unknown = 0;
                let mut sat = false;
                for &o in clause {
                    match self.val[o] {
                        1 => {
                            sat = true;
                            break;
                        }
                        UNK => {
                            n_unknown += 1;
                            unknown = Some(o);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match n_unknown {
                    0 => return false,
                    1 => {
                        let o = unknown.unwrap();
                        self.assign(o, 1);
                    }
                    _ => {}
                }
            }
            if self.queue.is_empty() {
                return self.assoc_bounds_ok();
            }
        }
    }

    /// (x∘y)∘z and x∘(y∘z) must be compatible given what is decided.
    fn assoc_bounds_ok(&mut self) -> bool {
        let n = self.m.n;
        let (lo, hi) = (&self.must1, &self.poss);
        let unite = |cells: &[Mask], s: Mask, row: Option<usize>, col: Option<usize>| {
            members(s).fold(0, |acc, u| {
                acc | match (row, col) {
                    (None, Some(z)) => cells[u * n + z],
                    (Some(x), None) => cells[x * n + u],
                    _ => unreachable!(),
                }
            })
        };
        for x in 0..n {
            for y in 0..n {
                let (xy_lo, xy_hi) = (lo[x * n + y], hi[x * n + y]);
                for z in 0..n {
                    let (yz_lo, yz_hi) = (lo[y * n + z], hi[y * n + z]);
                    let l_lo = unite(lo, xy_lo, None, Some(z));
                    let r_hi = unite(hi, yz_hi, Some(x), None);
                    if l_lo & !r_hi != 0 {
                        return false;
                    }
                    let r_lo = unite(lo, yz_lo, Some(x), None);
                    let l_hi = unite(hi, xy_hi, None, Some(z));
                    if r_lo & !l_hi != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn next_unknown(&self) -> Option<usize> {
        self.val.iter().position(|&v| v == UNK)
    }
}

struct BranchOutcome {
    frames: Vec<RawFrame>,
    nodes: u64,
    prunes: u64,
    complete: bool,
}

struct Limits<'a> {
    interval: u64,
    deadline: Option<Instant>,
    node_budget: Option<u64>,
    nodes_total: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Limits<'_> {
    fn exceeded(&self, local: u64) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        let total = self.nodes_total.fetch_add(local, Ordering::Relaxed) + local;
        let over = self.node_budget.is_some_and(|b| total > b)
            || self.deadline.is_some_and(|d| Instant::now() > d);
        if over {
            self.stop.store(true, Ordering::Relaxed);
        }
        over
    }
}

fn run_branch(
    up: &[Mask],
    b: &Branch,
    sig: Signature,
    negs: &[Vec<usize>],
    limits: &Limits<'_>,
) -> BranchOutcome {
    let n = up.len();
    let mut out = BranchOutcome {
        frames: Vec::new(),
        nodes: 0,
        prunes: 0,
        complete: true,
    };
    if n == 0 {
        out.frames.push(RawFrame {
            identity: 0,
            tilde: vec![],
            comp: vec![],
            neg: (sig == Signature::DqRA).then(Vec::new),
        });
        return out;
    }
    let model = Model::new(up, b.identity, &b.tilde);
    let mut s = Search::new(&model);
    let mut ok = true;
    for &o in &model.forced0 {
        ok &= s.assign(o, 0);
    }
    if !ok || !s.propagate() {
        return out;
    }
    let mut since_check = 0u64;
    // explicit DFS stack of (trail mark, orbit, next value to try)
    let mut stack: Vec<(usize, usize, i8)> = Vec::new();
    let mut descend = true;
    loop {
        if descend {
            s.nodes += 1;
            since_check += 1;
            if since_check >= limits.interval {
                if limits.exceeded(since_check) {
                    out.complete = false;
                    break;
                }
                since_check = 0;
            }
            match s.next_unknown() {
                None => {
                    leaf(&s, b, sig, negs, &mut out.frames);
                    descend = false;
                }
                Some(o) => {
                    stack.push((s.trail.len(), o, 0));
                    descend = false;
                }
            }
            continue;
        }
        // try the next value at the top of the stack
        let Some(top) = stack.last_mut() else { break };
        let (mark, o, v) = *top;
        s.undo_to(mark);
        if v > 1 {
            stack.pop();
            continue;
        }
        top.2 = v + 1;
        if s.assign(o, v) && s.propagate() {
            descend = true;
        } else {
            s.prunes += 1;
        }
    }
    limits.nodes_total.fetch_add(since_check, Ordering::Relaxed);
    out.nodes = s.nodes;
    out.prunes = s.prunes;
    out
}

fn leaf(
    s: &Search<'_>,
    b: &Branch,
    sig: Signature,
    negs: &[Vec<usize>],
    frames: &mut Vec<RawFrame>,
) {
    let n = s.m.n;
    let comp = &s.must1;
    let mut stab_f = Vec::new();
    for p in &b.stab {
        let image = relabel_comp(comp, n, p);
        match image.cmp(comp) {
            std::cmp::Ordering::Less => return,
            std::cmp::Ordering::Equal => stab_f.push(p),
            std::cmp::Ordering::Greater => {}
        }
    }
    let base = RawFrame {
        identity: b.identity,
        tilde: b.tilde.clone(),
        comp: comp.clone(),
        neg: None,
    };
    match sig {
        Signature::DInFL => frames.push(base),
        Signature::DqRA => {
            let minus = inverse(&b.tilde);
            for g in negs {
                if !condition_9(s.m.up, comp, &b.tilde, &minus, g) {
                    continue;
                }
                if stab_f.iter().any(|p| conj(g, p) < *g) {
                    continue;
                }
                frames.push(RawFrame {
                    neg: Some(g.clone()),
                    ..base.clone()
                });
            }
        }
    }
}

/// R x y z^− ⇔ R y^∼¬ x^∼¬ z^¬.
fn condition_9(up: &[Mask], comp: &[Mask], tilde: &[usize], minus: &[usize], g: &[usize]) -> bool {
    let n = up.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let a = comp[x * n + y];
            let b = comp[g[tilde[y]] * n + g[tilde[x]]];
            (0..n).all(|z| has(a, minus[z]) == has(b, g[z]))
        })
    })
}

fn to_frame(up: &[Mask], r: &RawFrame) -> Result<Frame> {
    Frame::from_masks(
        up.to_vec(),
        r.identity,
        r.comp.clone(),
        r.tilde.clone(),
        inverse(&r.tilde),
        r.neg.clone(),
    )
}

/// All frames on `p` up to isomorphism.
pub fn enumerate_frames(p: &PosetShape, sig: Signature) -> Result<EnumerationResult> {
    enumerate_frames_with(p, sig, &EnumOptions::default())
}

pub fn enumerate_frames_with(
    p: &PosetShape,
    sig: Signature,
    opts: &EnumOptions,
) -> Result<EnumerationResult> {
    let start = Instant::now();
    let up = &p.up;
    let n = up.len();
    let auts = poset::automorphisms(up);
    let bs = if p.self_dual || n == 0 {
        branches(up, &auts)
    } else {
        Vec::new()
    };
    let negs: Vec<Vec<usize>> = match sig {
        Signature::DInFL => Vec::new(),
        Signature::DqRA => poset::order_reversing_bijections(up)
            .into_iter()
            .filter(|g| (0..n).all(|x| g[g[x]] == x))
            .collect(),
    };
    let mut done: BTreeMap<usize, Vec<RawFrame>> = BTreeMap::new();
    if let Some(cp) = &opts.resume {
        if cp.poset != *up || cp.signature != sig || cp.branches != bs.len() {
            return Err(Error::Precondition(
                "checkpoint belongs to a different enumeration".into(),
            ));
        }
        done = cp.done.clone();
    }
    let todo: Vec<usize> = (0..bs.len()).filter(|i| !done.contains_key(i)).collect();
    let nodes_total = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let interval = opts.node_budget.map_or(4096, |b| b.clamp(1, 4096));
    let limits = Limits {
        interval,
        deadline: opts.deadline,
        node_budget: opts.node_budget,
        nodes_total: &nodes_total,
        stop: &stop,
    };
    let work = |&i: &usize| (i, run_branch(up, &bs[i], sig, &negs, &limits));
    let results: Vec<(usize, BranchOutcome)> = if opts.sequential {
        todo.iter().map(work).collect()
    } else {
        todo.par_iter().map(work).collect()
    };
    let mut stats = Stats {
        branches: bs.len(),
        ..Default::default()
    };
    let mut complete = true;
    for (i, r) in results {
        stats.nodes += r.nodes;
        stats.prunes += r.prunes;
        if r.complete {
            done.insert(i, r.frames);
        } else {
            complete = false;
        }
    }
    stats.wall = start.elapsed();
    if !complete {
        let cp = Checkpoint {
            poset: up.clone(),
            signature: sig,
            branches: bs.len(),
            done,
        };
        let finished = cp.done.len();
        return Err(Error::Budget {
            message: format!(
                "enumeration of {} ({sig}) stopped after {} of {} branches",
                p.name,
                finished,
                bs.len()
            ),
            checkpoint: Some(serde_json::to_string(&cp).expect("serializable")),
        });
    }
    let mut frames = Vec::new();
    for raw in done.values().flatten() {
        frames.push(to_frame(up, raw)?);
    }
    Ok(EnumerationResult {
        poset: p.name.clone(),
        signature: sig,
        count: frames.len(),
        frames,
        stats,
    })
}

pub fn parse_checkpoint(text: &str, path: &str) -> Result<Checkpoint> {
    serde_json::from_str(text).map_err(|source| Error::Parse {
        path: path.to_string(),
        source,
    })
}

/// Self-dual posets (the empty one included) with exactly `n` upsets.
pub fn posets_with_upsets(n: usize) -> Vec<PosetShape> {
    poset::self_dual_posets_by_upsets(n)
        .into_iter()
        .filter(|p| p.upset_count() == n)
        .collect()
}

/// Per-poset frame counts for algebras of size `n`: (poset, dinfl, dqra).
pub fn count_by_poset(n: usize, opts: &EnumOptions) -> Result<Vec<(String, usize, usize)>> {
    posets_with_upsets(n)
        .iter()
        .map(|p| {
            let d = enumerate_frames_with(p, Signature::DInFL, opts)?.count;
            let q = enumerate_frames_with(p, Signature::DqRA, opts)?.count;
            Ok((p.name.clone(), d, q))
        })
        .collect()
}

/// Number of DInFL-algebras and DqRAs with `n` elements, up to isomorphism.
pub fn count_algebras(n: usize) -> Result<(usize, usize)> {
    count_algebras_with(n, &EnumOptions::default())
}

pub fn count_algebras_with(n: usize, opts: &EnumOptions) -> Result<(usize, usize)> {
    if n == 0 {
        return Err(Error::Precondition(
            "algebras have at least one element".into(),
        ));
    }
    let rows = count_by_poset(n, opts)?;
    Ok(rows.iter().fold((0, 0), |(a, b), (_, d, q)| (a + d, b + q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::validate_frame;

    fn count(p: &PosetShape) -> (usize, usize) {
        (
            enumerate_frames(p, Signature::DInFL).unwrap().count,
            enumerate_frames(p, Signature::DqRA).unwrap().count,
        )
    }

    #[test]
    fn tiny_posets() {
        assert_eq!(count(&PosetShape::from_up(vec![])), (1, 1));
        assert_eq!(count(&PosetShape::chain(1)), (1, 1));
        assert_eq!(count(&PosetShape::chain(2)), (2, 2));
        assert_eq!(count(&PosetShape::antichain(2)), (5, 6));
    }

    #[test]
    fn emitted_frames_validate() {
        for p in [PosetShape::chain(3), PosetShape::antichain(2)] {
            for f in enumerate_frames(&p, Signature::DqRA).unwrap().frames {
                let r = validate_frame(&f);
                assert!(r.ok(), "{r}");
            }
        }
    }

    #[test]
    fn non_self_dual_is_empty() {
        let v = PosetShape::from_covers(3, &[(0, 1), (0, 2)]);
        assert_eq!(count(&v), (0, 0));
    }

    #[test]
    fn node_budget_gives_checkpoint_that_resumes() {
        let p = poset::poset_by_name("2x2").unwrap();
        let opts = EnumOptions {
            node_budget: Some(1),
            sequential: true,
            ..Default::default()
        };
        let err = enumerate_frames_with(&p, Signature::DInFL, &opts).unwrap_err();
        let Error::Budget {
            checkpoint: Some(cp),
            ..
        } = err
        else {
            panic!("expected budget error")
        };
        let cp = parse_checkpoint(&cp, "mem").unwrap();
        let resumed = enumerate_frames_with(
            &p,
            Signature::DInFL,
            &EnumOptions {
                resume: Some(cp),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(resumed.count, 16);
    }
}
