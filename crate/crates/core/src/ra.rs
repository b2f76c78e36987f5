//! Finite integral relation algebras given by atom structures, the 37
//! nonsymmetric 4-atom tables, and their {∨, ·, 1, ∼}-subreducts that are
//! proper quasi relation algebras.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{self, FinAlgebra};
use crate::data;
use crate::error::{Error, Result};
use crate::frame;
use crate::poset;
use crate::report::ValidationReport;
use crate::sets::{bit, has, members, Mask};

/// Atoms 0..k with atom 0 the identity; `comp[x][y]` is a mask of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomStructure {
    pub index: Option<usize>,
    pub atoms: Vec<char>,
    pub converse: Vec<usize>,
    pub comp: Vec<Vec<Mask>>,
}

/// The shape of the 37 nonsymmetric tables.
pub type AtomStructure4 = AtomStructure;

impl AtomStructure {
    pub fn size(&self) -> usize {
        self.atoms.len()
    }

    pub fn name(&self) -> String {
        match self.index {
            Some(i) => format!("RA{i}"),
            None => format!("RA[{}]", self.atoms.iter().collect::<String>()),
        }
    }

    /// Lifted composition of atom sets.
    pub fn compose(&self, x: Mask, y: Mask) -> Mask {
        members(x).fold(0, |m, i| members(y).fold(m, |m, j| m | self.comp[i][j]))
    }

    pub fn conv(&self, x: Mask) -> Mask {
        members(x).fold(0, |m, i| m | bit(self.converse[i]))
    }

    pub fn is_symmetric(&self) -> bool {
        self.converse.iter().enumerate().all(|(i, &j)| i == j)
    }
}

fn parse_atoms(s: &str, atoms: &[char]) -> Result<Mask> {
    s.chars()
        .try_fold(0, |m, c| match atoms.iter().position(|&a| a == c) {
            Some(i) => Ok(m | bit(i)),
            None => Err(Error::Structural(format!("unknown atom {c:?} in {s:?}"))),
        })
}

/// Builds a structure from rows of atom strings for the non-identity atoms;
/// the identity row and column are forced.
pub fn atom_structure(
    atoms: &[char],
    converse: Vec<usize>,
    rows: &[Vec<&str>],
    index: Option<usize>,
) -> Result<AtomStructure> {
    let k = atoms.len();
    if k == 0
        || k > 6
        || rows.len() + 1 != k
        || rows.iter().any(|r| r.len() + 1 != k)
        || converse.len() != k
    {
        return Err(Error::Structural("atom table has the wrong shape".into()));
    }
    let mut comp = vec![vec![0; k]; k];
    for x in 0..k {
        comp[0][x] = bit(x);
        comp[x][0] = bit(x);
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            comp[i + 1][j + 1] = parse_atoms(s, atoms)?;
        }
    }
    Ok(AtomStructure {
        index,
        atoms: atoms.to_vec(),
        converse,
        comp,
    })
}

/// The 37 nonsymmetric integral relation algebras with atoms 1, a, r, s
/// where a is symmetric and r, s are converses.
pub fn builtin_atom_tables() -> Result<Vec<AtomStructure>> {
    let atoms = ['1', 'a', 'r', 's'];
    data::atom_table_entries()
        .into_iter()
        .map(|e| {
            let rows: Vec<Vec<&str>> = [&e.a, &e.r, &e.s]
                .iter()
                .map(|r| r.iter().map(|s| s.as_str()).collect())
                .collect();
            atom_structure(&atoms, vec![0, 1, 3, 2], &rows, Some(e.index))
        })
        .collect()
}

pub fn atom_table(index: usize) -> Result<AtomStructure> {
    builtin_atom_tables()?
        .into_iter()
        .find(|s| s.index == Some(index))
        .ok_or_else(|| Error::NotFound(format!("no atom structure with index {index}")))
}

/// Identity, converse and associativity laws on atoms, plus the cycle law.
pub fn validate_atom_structure(s: &AtomStructure) -> ValidationReport {
    let k = s.size();
    let mut r = ValidationReport::new();
    r.check(
        s.converse.len() == k && s.converse.iter().all(|&c| c < k),
        "converse is a map on atoms",
        &[],
    );
    if !r.ok() {
        return r;
    }
    r.check(s.converse[0] == 0, "identity is symmetric", &[0]);
    for x in 0..k {
        r.check(
            s.converse[s.converse[x]] == x,
            "converse is involutive",
            &[x],
        );
        r.check(
            s.comp[0][x] == bit(x) && s.comp[x][0] == bit(x),
            "identity law",
            &[x],
        );
        for y in 0..k {
            r.check(
                s.conv(s.comp[x][y]) == s.compose(bit(s.converse[y]), bit(s.converse[x])),
                "(x;y)⌣ = y⌣;x⌣",
                &[x, y],
            );
            for z in 0..k {
                let left = s.compose(s.comp[x][y], bit(z));
                let right = s.compose(bit(x), s.comp[y][z]);
                r.check(left == right, "associativity", &[x, y, z]);
                if has(s.comp[x][y], z) {
                    r.check(has(s.comp[z][s.converse[y]], x), "cycle law", &[x, y, z]);
                }
            }
        }
    }
    r
}

/// The relation algebra of atom sets.
#[derive(Clone, Debug)]
pub struct RelationAlgebra {
    pub structure: AtomStructure,
    /// element i is the atom set with mask i
    pub algebra: FinAlgebra,
}

pub type RA16 = RelationAlgebra;

/// All atom sets with Boolean order, lifted composition, unit {1},
/// ∼x = −x = complement of the converse and ¬ = complement.
pub fn ra_from_atoms(s: &AtomStructure) -> Result<RelationAlgebra> {
    let r = validate_atom_structure(s);
    if !r.ok() {
        return Err(Error::Law(r));
    }
    let n = 1usize << s.size();
    let all = (n - 1) as Mask;
    let leq = (0..n)
        .map(|x| (0..n).map(|y| x & !y == 0).collect())
        .collect();
    let product = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| s.compose(x as Mask, y as Mask) as usize)
                .collect()
        })
        .collect();
    let tilde: Vec<usize> = (0..n)
        .map(|x| (all & !s.conv(x as Mask)) as usize)
        .collect();
    let neg: Vec<usize> = (0..n).map(|x| (all & !(x as Mask)) as usize).collect();
    let a = FinAlgebra::new(leq, product, 1, tilde.clone(), tilde, Some(neg))?.named(s.name());
    Ok(RelationAlgebra {
        structure: s.clone(),
        algebra: a,
    })
}

type Subset = u64;

fn closure(a: &FinAlgebra, start: Subset) -> Subset {
    let mut cur = start;
    loop {
        let mut next = cur;
        for x in members(cur) {
            next |= bit(a.tilde(x)) | bit(a.minus(x));
            for y in members(cur) {
                next |= bit(a.join(x, y)) | bit(a.mul(x, y));
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Every subset containing 1 and closed under ∨, · and ∼ (and −).
pub fn closed_subreducts(a: &FinAlgebra) -> Result<Vec<Subset>> {
    if a.size() > 64 {
        return Err(Error::SizeCap {
            count: a.size(),
            cap: 64,
        });
    }
    let first = closure(a, bit(a.one()));
    let mut seen = HashSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(c) = queue.pop_front() {
        for x in a.elements().filter(|&x| !has(c, x)) {
            let d = closure(a, c | bit(x));
            if seen.insert(d) {
                queue.push_back(d);
            }
        }
    }
    let mut out: Vec<Subset> = seen.into_iter().collect();
    out.sort_by_key(|&m| (m.count_ones(), m));
    Ok(out)
}

fn complement_closed(a: &FinAlgebra, c: Subset) -> bool {
    members(c).all(|x| has(c, a.neg_of(x)))
}

/// The algebra on a closed subset, elements in increasing index order,
/// with ¬ dropped.
pub fn restrict(a: &FinAlgebra, c: Subset) -> Result<FinAlgebra> {
    let els: Vec<usize> = members(c).collect();
    let pos = |x: usize| {
        els.iter()
            .position(|&y| y == x)
            .ok_or_else(|| Error::Precondition("subset is not closed".into()))
    };
    let leq = els
        .iter()
        .map(|&x| els.iter().map(|&y| a.le(x, y)).collect())
        .collect();
    let product = els
        .iter()
        .map(|&x| {
            els.iter()
                .map(|&y| pos(a.mul(x, y)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let tilde = els
        .iter()
        .map(|&x| pos(a.tilde(x)))
        .collect::<Result<Vec<_>>>()?;
    let minus = els
        .iter()
        .map(|&x| pos(a.minus(x)))
        .collect::<Result<Vec<_>>>()?;
    FinAlgebra::new(leq, product, pos(a.one())?, tilde, minus, None)
}

/// Order-reversing involutions ¬ that make `a` a DqRA.
pub fn neg_completions(a: &FinAlgebra) -> Result<Vec<Vec<usize>>> {
    let n = a.size();
    let mut out = vec![];
    let mut g = vec![usize::MAX; n];
    fn go(i: usize, a: &FinAlgebra, g: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
        let n = a.size();
        if i == n {
            let cand = a.with_neg(Some(g.clone()))?;
            if algebra::validate_dqra(&cand)?.ok() {
                out.push(g.clone());
            }
            return Ok(());
        }
        if g[i] != usize::MAX {
            return go(i + 1, a, g, out);
        }
        for y in i..n {
            if g[y] != usize::MAX {
                continue;
            }
            g[i] = y;
            g[y] = i;
            let ok = (0..n).filter(|&x| g[x] != usize::MAX).all(|x| {
                [i, y]
                    .iter()
                    .all(|&z| a.le(x, z) == a.le(g[z], g[x]) && a.le(z, x) == a.le(g[x], g[z]))
            });
            if ok {
                go(i + 1, a, g, out)?;
            }
            g[y] = usize::MAX;
            g[i] = usize::MAX;
        }
        Ok(())
    }
    go(0, a, &mut g, &mut out)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SubreductFamily {
    /// 12 elements over the frame poset 1+1+2
    A12,
    /// 8 elements over the frame poset 1+3
    B8,
    None,
    /// a maximal proper subreduct of any other shape
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct Subreduct {
    /// atom-set masks of the elements
    pub elements: Vec<usize>,
    #[serde(skip)]
    pub algebra: FinAlgebra,
    /// all admissible ¬, as permutations of the subreduct
    pub neg_completions: Vec<Vec<usize>>,
    pub poset: String,
    pub commutative: bool,
    /// number of maximal proper subreducts (they are isomorphic when > 1)
    pub maximal: usize,
}

impl Subreduct {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn family(&self) -> SubreductFamily {
        match (self.size(), self.poset.as_str()) {
            (12, "1+1+2") => SubreductFamily::A12,
            (8, "1+3") => SubreductFamily::B8,
            _ => SubreductFamily::Other,
        }
    }
}

pub fn family_of(s: Option<&Subreduct>) -> SubreductFamily {
    s.map_or(SubreductFamily::None, |s| s.family())
}

/// The largest {∨, ·, 1, ∼}-closed subset that is not closed under the
/// Boolean complement, as a DqRA (¬ = ∼ when admissible, otherwise the
/// first completion; plain DInFL when none exists).
pub fn max_proper_qra_subreduct(ra: &RelationAlgebra) -> Result<Option<Subreduct>> {
    let a = &ra.algebra;
    let proper: Vec<Subset> = closed_subreducts(a)?
        .into_iter()
        .filter(|&c| !complement_closed(a, c))
        .collect();
    let maximal: Vec<Subset> = proper
        .iter()
        .copied()
        .filter(|&c| !proper.iter().any(|&d| d != c && d & c == c))
        .collect();
    let Some(&best) = maximal
        .iter()
        .max_by_key(|&&c| (c.count_ones(), std::cmp::Reverse(c)))
    else {
        return Ok(None);
    };
    let base = restrict(a, best)?;
    for &other in &maximal {
        if other != best && algebra::algebra_iso(&base, &restrict(a, other)?)?.is_none() {
            return Err(Error::Internal(format!(
                "{}: maximal proper subreducts differ",
                ra.structure.name()
            )));
        }
    }
    let negs = neg_completions(&base)?;
    let tilde = base.tilde_perm();
    let chosen = negs.iter().find(|g| **g == tilde).or(negs.first()).cloned();
    let up = frame::dual_frame(&base)?.ups().to_vec();
    let commutative = base
        .elements()
        .all(|x| base.elements().all(|y| base.mul(x, y) == base.mul(y, x)));
    let mut alg = base.with_neg(chosen)?;
    alg.set_name(Some(format!("{} subreduct", ra.structure.name())));
    Ok(Some(Subreduct {
        elements: members(best).collect(),
        algebra: alg,
        neg_completions: negs,
        poset: poset::shape_name(&up),
        commutative,
        maximal: maximal
            .iter()
            .filter(|c| c.count_ones() == best.count_ones())
            .count(),
    }))
}

/// The closed-form tests for the two families, each also tried with r and s
/// exchanged.
pub fn family_criteria(s: &AtomStructure) -> Result<SubreductFamily> {
    if s.atoms != ['1', 'a', 'r', 's'] {
        return Err(Error::Precondition(
            "criteria are stated for atoms 1, a, r, s".into(),
        ));
    }
    let test = |a: Mask, r: Mask, s_: Mask| {
        let le = |x: Mask, y: Mask| x & !y == 0;
        let fam_a = [a, r, r | s_].iter().all(|&x| {
            [a, r, r | s_].iter().all(|&y| {
                let p = s.compose(x, y);
                !le(s_, p) || le(r, p)
            })
        });
        let fam_b = [r, a | r, a | r | s_].iter().all(|&x| {
            [r, a | r, a | r | s_].iter().all(|&y| {
                let p = s.compose(x, y);
                (!le(s_, p) || le(a | r, p)) && (!le(a, p) || le(r, p))
            })
        });
        (fam_a, fam_b)
    };
    let (a, r, s_) = (bit(1), bit(2), bit(3));
    let (a1, b1) = test(a, r, s_);
    let (a2, b2) = test(a, s_, r);
    Ok(if a1 || a2 {
        SubreductFamily::A12
    } else if b1 || b2 {
        SubreductFamily::B8
    } else {
        SubreductFamily::None
    })
}

/// Every {∨, ·, 1, ∼}-closed subset of a symmetric RA is closed under
/// complement, so it is again a relation algebra.
pub fn symmetric_subreduct_check(ra: &RelationAlgebra) -> Result<bool> {
    if !ra.structure.is_symmetric() {
        return Err(Error::Precondition(format!(
            "{} is not symmetric",
            ra.structure.name()
        )));
    }
    let a = &ra.algebra;
    Ok(closed_subreducts(a)?
        .into_iter()
        .all(|c| complement_closed(a, c)))
}

/// One row of the subreduct table.
#[derive(Clone, Debug, Serialize)]
pub struct SubreductRow {
    pub index: usize,
    pub family: SubreductFamily,
    pub criteria: SubreductFamily,
    pub subreduct: Option<Subreduct>,
    pub ra_representable: Option<bool>,
    pub subreduct_status: Option<String>,
}

/// All 37 rows, computed in parallel.
pub fn subreduct_table() -> Result<Vec<SubreductRow>> {
    let notes = data::subreduct_notes();
    builtin_atom_tables()?
        .par_iter()
        .map(|s| {
            let ra = ra_from_atoms(s)?;
            let sub = max_proper_qra_subreduct(&ra)?;
            let index = s.index.unwrap_or(0);
            let note = notes.iter().find(|n| n.index == index);
            Ok(SubreductRow {
                index,
                family: family_of(sub.as_ref()),
                criteria: family_criteria(s)?,
                subreduct: sub,
                ra_representable: note.map(|n| n.ra_representable),
                subreduct_status: note.and_then(|n| n.subreduct.clone()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_table_spot_checks() {
        let t = builtin_atom_tables().unwrap();
        assert_eq!(t.len(), 37);
        let (a, r, s) = (bit(1), bit(2), bit(3));
        assert_eq!(t[0].compose(a, a), bit(0));
        assert_eq!(t[0].compose(r, s), 0b1111);
        assert_eq!(t[12].compose(a, r), a | r);
        assert_eq!(t[12].compose(r, a), a);
        assert_eq!(t[17].compose(a, r), s);
    }

    #[test]
    fn broken_identity_is_rejected() {
        let mut s = atom_table(1).unwrap();
        s.comp[0][1] = bit(2);
        assert!(!validate_atom_structure(&s).ok());
        assert!(matches!(ra_from_atoms(&s), Err(Error::Law(_))));
    }

    #[test]
    fn tilde_of_a_is_1rs() {
        for s in builtin_atom_tables().unwrap() {
            let ra = ra_from_atoms(&s).unwrap();
            assert_eq!(ra.algebra.tilde(0b0010), 0b1101);
        }
    }

    #[test]
    fn symmetric_precondition() {
        let ra = ra_from_atoms(&atom_table(3).unwrap()).unwrap();
        assert!(matches!(
            symmetric_subreduct_check(&ra),
            Err(Error::Precondition(_))
        ));
    }
}
