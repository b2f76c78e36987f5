//! Named catalog of the DInFL-algebras and DqRAs with at most six
//! elements. Enumerated algebras are matched against the bundled Hasse
//! diagrams by lattice shape, node style and the product labels; DqRAs then
//! take the name of the ¬-variant whose stated equation they satisfy.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::{self, FinAlgebra};
use crate::data::{self, Diagram, RepNote};
use crate::enumerate::{self, Signature};
use crate::error::{Error, Result};
use crate::frame;
use crate::poset;
use crate::sets::has;

pub const MAX_CATALOG_SIZE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementClass {
    CentralIdempotent,
    Central,
    NoncentralIdempotent,
    Noncentral,
}

impl ElementClass {
    /// The node style used in the bundled diagrams.
    pub fn style(self) -> &'static str {
        match self {
            ElementClass::CentralIdempotent => "i",
            ElementClass::Central => "",
            ElementClass::NoncentralIdempotent => "nci",
            ElementClass::Noncentral => "nc",
        }
    }
}

/// Central means commuting with every element; idempotent means x·x = x.
pub fn classify_elements(a: &FinAlgebra) -> Vec<ElementClass> {
    a.elements()
        .map(|x| {
            let central = a.elements().all(|y| a.mul(x, y) == a.mul(y, x));
            match (central, a.mul(x, x) == x) {
                (true, true) => ElementClass::CentralIdempotent,
                (true, false) => ElementClass::Central,
                (false, true) => ElementClass::NoncentralIdempotent,
                (false, false) => ElementClass::Noncentral,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "candidates", rename_all = "snake_case")]
pub enum MatchKind {
    /// exactly one diagram (and ¬-variant) fits
    Exact,
    /// several fit; the name is the first in catalog order
    Ambiguous(Vec<String>),
    /// the stated equation fails but only one ¬-variant name is left for
    /// the reduct; the reason is recorded
    Deduced(String),
    /// nothing fits; the name is synthesised
    Unmatched,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub signature: Signature,
    pub size: usize,
    #[serde(skip)]
    pub algebra: FinAlgebra,
    pub poset: String,
    pub classes: Vec<ElementClass>,
    pub matched: MatchKind,
    pub representability: Option<RepNote>,
}

impl CatalogEntry {
    pub fn idempotents(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| {
                matches!(
                    c,
                    ElementClass::CentralIdempotent | ElementClass::NoncentralIdempotent
                )
            })
            .count()
    }

    pub fn central(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| matches!(c, ElementClass::CentralIdempotent | ElementClass::Central))
            .count()
    }
}

fn label_value(label: &str, env: &HashMap<char, usize>, a: &FinAlgebra) -> Option<usize> {
    let cs: Vec<char> = label.chars().collect();
    match cs.as_slice() {
        [x] => env.get(x).copied(),
        [x, '^', '2'] => env.get(x).map(|&v| a.mul(v, v)),
        [x, y] => Some(a.mul(*env.get(x)?, *env.get(y)?)),
        _ => None,
    }
}

/// Letters bind to the node carrying them; every label must then evaluate
/// to its node. `1`, `0` and `T` are the unit, ∼1 and the top.
fn labels_hold(d: &Diagram, a: &FinAlgebra, f: &[usize]) -> bool {
    let mut env = HashMap::from([('1', a.one()), ('0', a.zero()), ('T', a.top())]);
    for (node, labels) in d.labels.iter().enumerate() {
        for l in labels {
            let mut cs = l.chars();
            if let (Some(c), None) = (cs.next(), cs.next()) {
                if c.is_ascii_lowercase() {
                    env.insert(c, f[node]);
                }
            }
        }
    }
    d.labels.iter().enumerate().all(|(node, labels)| {
        labels
            .iter()
            .all(|l| label_value(l, &env, a) == Some(f[node]))
    })
}

/// Order isomorphisms from the diagram onto the lattice of `a` that respect
/// node styles and labels.
pub fn diagram_isos(d: &Diagram, a: &FinAlgebra) -> Vec<Vec<usize>> {
    let n = d.size;
    if n != a.size() || a.lattice().is_none() {
        return vec![];
    }
    let covers: Vec<(usize, usize)> = d.covers.iter().map(|c| (c[0], c[1])).collect();
    let up = poset::up_from_covers(n, &covers);
    let classes = classify_elements(a);
    let mut out = vec![];
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ctx: (&Diagram, &FinAlgebra, &[u64], &[ElementClass]),
        out: &mut Vec<Vec<usize>>,
    ) {
        let (d, a, up, classes) = ctx;
        if i == d.size {
            if labels_hold(d, a, f) {
                out.push(f.clone());
            }
            return;
        }
        for x in a.elements() {
            if used[x] || classes[x].style() != d.styles[i] {
                continue;
            }
            if (0..i).any(|j| has(up[j], i) != a.le(f[j], x) || has(up[i], j) != a.le(x, f[j])) {
                continue;
            }
            f[i] = x;
            used[x] = true;
            go(i + 1, f, used, ctx, out);
            used[x] = false;
        }
        f[i] = usize::MAX;
    }
    go(0, &mut f, &mut used, (d, a, &up, &classes), &mut out);
    out
}

/// Whether ¬ on `q` fits a variant note: `~` means ¬ = ∼, and `x=y` means
/// ¬x = y for the diagram letters under some admissible isomorphism.
fn neg_fits(note: &RepNote, d: &Diagram, q: &FinAlgebra) -> bool {
    let is_tilde = q.elements().all(|x| q.neg(x) == Some(q.tilde(x)));
    if note.neg == "~" || is_tilde {
        return note.neg == "~" && is_tilde;
    }
    let Some((x, y)) = note.neg.split_once('=') else {
        return false;
    };
    let letter = |f: &[usize], c: &str| {
        d.labels
            .iter()
            .position(|ls| ls.iter().any(|l| l == c))
            .map(|node| f[node])
    };
    diagram_isos(d, &q.without_neg())
        .iter()
        .any(|f| match (letter(f, x), letter(f, y)) {
            (Some(u), Some(v)) => q.neg(u) == Some(v),
            _ => false,
        })
}

fn base_name(note: &RepNote) -> &str {
    note.name.split('[').next().unwrap_or(&note.name)
}

fn build(max: usize) -> Result<Vec<CatalogEntry>> {
    let diagrams = data::diagrams();
    let notes = data::representability();
    let mut out = vec![];
    for size in 1..=max {
        let mut dinfl = vec![];
        let mut dqra = vec![];
        for p in enumerate::posets_with_upsets(size) {
            for (sig, bucket) in [(Signature::DInFL, &mut dinfl), (Signature::DqRA, &mut dqra)] {
                for w in enumerate::enumerate_frames(&p, sig)?.frames {
                    bucket.push((frame::complex_algebra(&w)?, p.name.clone()));
                }
            }
        }
        let ds: Vec<&Diagram> = diagrams.iter().filter(|d| d.size == size).collect();
        let mut named: Vec<(CatalogEntry, Option<&Diagram>)> = vec![];
        for (k, (a, poset)) in dinfl.into_iter().enumerate() {
            let fits: Vec<&Diagram> = ds
                .iter()
                .copied()
                .filter(|d| !diagram_isos(d, &a).is_empty())
                .collect();
            let (name, matched) = match fits.as_slice() {
                [d] => (d.name.clone(), MatchKind::Exact),
                [] => (format!("D{size}_?_{}", k + 1), MatchKind::Unmatched),
                many => (
                    many[0].name.clone(),
                    MatchKind::Ambiguous(many.iter().map(|d| d.name.clone()).collect()),
                ),
            };
            let mut a = a;
            a.set_name(Some(name.clone()));
            let entry = CatalogEntry {
                name,
                signature: Signature::DInFL,
                size,
                classes: classify_elements(&a),
                algebra: a,
                poset,
                matched,
                representability: None,
            };
            named.push((entry, fits.first().copied()));
        }
        let order = |name: &str| {
            diagrams
                .iter()
                .position(|d| d.name == name)
                .unwrap_or(usize::MAX)
        };
        named.sort_by_key(|(e, _)| (order(&e.name), e.name.clone()));
        let mut qs = vec![];
        for (q, poset) in dqra {
            let base = q.without_neg();
            let mut parent = None;
            for (e, d) in &named {
                if algebra::algebra_iso(&base, &e.algebra)?.is_some() {
                    parent = Some((e, *d));
                    break;
                }
            }
            let Some((parent, diagram)) = parent else {
                return Err(Error::Internal(
                    "a DqRA reduct is missing from the DInFL list".into(),
                ));
            };
            let fits: Vec<&RepNote> = match diagram {
                Some(d) => notes
                    .iter()
                    .filter(|n| base_name(n) == parent.name && neg_fits(n, d, &q))
                    .collect(),
                None => vec![],
            };
            let variants: Vec<&RepNote> = notes
                .iter()
                .filter(|n| base_name(n) == parent.name && n.neg != "~")
                .collect();
            let (name, matched, rep) = match fits.as_slice() {
                [n] => (n.name.clone(), MatchKind::Exact, Some((*n).clone())),
                [] if variants.len() == 1 && diagram.is_some() => {
                    let n = variants[0];
                    let why = format!(
                        "¬{} fails under every labelling; {} is the only ¬-variant left",
                        n.neg, n.name
                    );
                    (n.name.clone(), MatchKind::Deduced(why), Some(n.clone()))
                }
                [] => (format!("{}[?]", parent.name), MatchKind::Unmatched, None),
                many => (
                    many[0].name.clone(),
                    MatchKind::Ambiguous(many.iter().map(|n| n.name.clone()).collect()),
                    Some(many[0].clone()),
                ),
            };
            let mut q = q;
            q.set_name(Some(name.clone()));
            qs.push(CatalogEntry {
                name,
                signature: Signature::DqRA,
                size,
                classes: classify_elements(&q),
                algebra: q,
                poset,
                matched,
                representability: rep,
            });
        }
        let note_order = |name: &str| {
            notes
                .iter()
                .position(|n| n.name == name)
                .unwrap_or(usize::MAX)
        };
        qs.sort_by_key(|e| {
            (
                order(e.name.split('[').next().unwrap_or("")),
                note_order(&e.name),
                e.name.clone(),
            )
        });
        out.extend(named.into_iter().map(|(e, _)| e));
        out.extend(qs);
    }
    Ok(out)
}

static FULL: OnceLock<Vec<CatalogEntry>> = OnceLock::new();

/// All DInFL-algebras and DqRAs with at most `n` elements, DInFL entries
/// first within each size.
pub fn catalog(n: usize) -> Result<Vec<CatalogEntry>> {
    if n > MAX_CATALOG_SIZE {
        return Err(Error::Precondition(format!(
            "catalog sizes stop at {MAX_CATALOG_SIZE}"
        )));
    }
    let full = match FULL.get() {
        Some(v) => v,
        None => {
            let v = build(MAX_CATALOG_SIZE)?;
            FULL.get_or_init(|| v)
        }
    };
    Ok(full.iter().filter(|e| e.size <= n).cloned().collect())
}

/// Looks an entry up by name; DqRA entries win when both signatures share
/// the name unless `sig` says otherwise.
pub fn catalog_entry(name: &str, sig: Option<Signature>) -> Result<CatalogEntry> {
    let all = catalog(MAX_CATALOG_SIZE)?;
    let pick = |s: Signature| {
        all.iter()
            .find(|e| e.name == name && e.signature == s)
            .cloned()
    };
    let found = match sig {
        Some(s) => pick(s),
        None => pick(Signature::DqRA).or_else(|| pick(Signature::DInFL)),
    };
    found.ok_or_else(|| Error::NotFound(format!("no catalog algebra named {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_of_small_chains() {
        let s3 = algebra::sugihara_chain(3).unwrap();
        assert!(classify_elements(&s3)
            .iter()
            .all(|&c| c == ElementClass::CentralIdempotent));
        let l3 = algebra::lukasiewicz_chain(3).unwrap();
        assert_eq!(classify_elements(&l3)[1], ElementClass::Central);
    }

    #[test]
    fn three_element_names() {
        let c = catalog(3).unwrap();
        let l3 = algebra::lukasiewicz_chain(3).unwrap();
        let s3 = algebra::sugihara_chain(3).unwrap();
        let find = |a: &FinAlgebra| {
            c.iter()
                .find(|e| {
                    e.signature == Signature::DqRA
                        && algebra::algebra_iso(a, &e.algebra).unwrap().is_some()
                })
                .map(|e| e.name.clone())
        };
        assert_eq!(find(&l3).as_deref(), Some("D3_1_1"));
        assert_eq!(find(&s3).as_deref(), Some("D3_1_2"));
        assert_eq!(catalog_entry("D1_1_1", None).unwrap().size, 1);
        assert!(matches!(
            catalog_entry("D9_9_9", None),
            Err(Error::NotFound(_))
        ));
    }
}
