//! Bit-mask sets over at most 64 points, and algebras of set families.

use std::collections::HashMap;

use crate::algebra::{FinAlgebra, Lattice};
use crate::error::{Error, Result};

pub type Mask = u64;

pub const MAX_POINTS: usize = 64;

pub fn bit(i: usize) -> Mask {
    1 << i
}

pub fn has(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn full(n: usize) -> Mask {
    if n >= 64 {
        !0
    } else {
        (1 << n) - 1
    }
}

pub fn members(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn from_indices(xs: &[usize]) -> Mask {
    xs.iter().fold(0, |m, &i| m | bit(i))
}

pub fn to_indices(m: Mask) -> Vec<usize> {
    members(m).collect()
}

/// Upward closure, given `up[x]` = the principal upset of x.
pub fn up_closure(m: Mask, up: &[Mask]) -> Mask {
    members(m).fold(0, |acc, x| acc | up[x])
}

pub fn down_closure(m: Mask, up: &[Mask]) -> Mask {
    (0..up.len())
        .filter(|&y| up[y] & m != 0)
        .fold(0, |acc, y| acc | bit(y))
}

pub fn is_upset(m: Mask, up: &[Mask]) -> bool {
    up_closure(m, up) == m
}

/// All upsets of the order, sorted by size and then by mask value.
pub fn upsets(up: &[Mask]) -> Vec<Mask> {
    let n = up.len();
    // Visit points from the top down so that every point above x is
    // decided before x.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| up[x].count_ones());
    let mut out = Vec::new();
    fn go(i: usize, cur: Mask, order: &[usize], up: &[Mask], out: &mut Vec<Mask>) {
        if i == order.len() {
            out.push(cur);
            return;
        }
        let x = order[i];
        go(i + 1, cur, order, up, out);
        if up[x] & !bit(x) & !cur == 0 {
            go(i + 1, cur | bit(x), order, up, out);
        }
    }
    go(0, 0, &order, up, &mut out);
    out.sort_by_key(|&m| (m.count_ones(), m));
    out
}

/// Index lookup for a family of masks.
pub struct Family {
    pub masks: Vec<Mask>,
    index: HashMap<Mask, usize>,
}

impl Family {
    pub fn new(masks: Vec<Mask>) -> Self {
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Family { masks, index }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn get(&self, m: Mask) -> Option<usize> {
        self.index.get(&m).copied()
    }

    pub fn find(&self, m: Mask, what: &str) -> Result<usize> {
        self.get(m)
            .ok_or_else(|| Error::Internal(format!("{what} {m:#b} is not in the set family")))
    }
}

/// Operations of an algebra whose elements are sets ordered by inclusion.
pub struct SetOps<'a> {
    pub mul: &'a (dyn Fn(Mask, Mask) -> Mask + Sync),
    pub one: Mask,
    pub tilde: &'a (dyn Fn(Mask) -> Mask + Sync),
    pub minus: &'a (dyn Fn(Mask) -> Mask + Sync),
    pub neg: Option<&'a (dyn Fn(Mask) -> Mask + Sync)>,
}

/// Builds the algebra on a family closed under ∩ and ∪ (a distributive
/// lattice of sets), with operations given on masks.
pub fn set_algebra(fam: &Family, ops: &SetOps<'_>) -> Result<FinAlgebra> {
    let n = fam.len();
    if n == 0 {
        return Err(Error::Internal("empty set family".into()));
    }
    let m = &fam.masks;
    let mut join = vec![0u32; n * n];
    let mut meet = vec![0u32; n * n];
    let mut product = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            join[a * n + b] = fam.find(m[a] | m[b], "union")? as u32;
            meet[a * n + b] = fam.find(m[a] & m[b], "intersection")? as u32;
            product[a][b] = fam.find((ops.mul)(m[a], m[b]), "product")?;
        }
    }
    let top_mask = m.iter().fold(0, |acc, &x| acc | x);
    let bottom_mask = m.iter().fold(!0, |acc, &x| acc & x);
    let bottom = fam.find(bottom_mask, "bottom")?;
    let top = fam.find(top_mask, "top")?;
    let unary = |f: &(dyn Fn(Mask) -> Mask + Sync), what: &str| -> Result<Vec<usize>> {
        m.iter().map(|&x| fam.find(f(x), what)).collect()
    };
    let tilde = unary(ops.tilde, "~")?;
    let minus = unary(ops.minus, "-")?;
    let neg = match ops.neg {
        Some(g) => Some(unary(g, "¬")?),
        None => None,
    };
    let leq = (0..n)
        .map(|a| (0..n).map(|b| m[a] & !m[b] == 0).collect())
        .collect();
    let alg = FinAlgebra::new(leq, product, fam.find(ops.one, "unit")?, tilde, minus, neg)?;
    let lat: Lattice = FinAlgebra::lattice_from_tables(n, join, meet, bottom, top);
    Ok(alg.with_known_lattice(lat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upsets_of_small_orders() {
        // antichain of 3: all 8 subsets
        let up = vec![bit(0), bit(1), bit(2)];
        assert_eq!(upsets(&up).len(), 8);
        // chain 0 < 1 < 2
        let up = vec![0b111, 0b110, 0b100];
        assert_eq!(upsets(&up), vec![0, 0b100, 0b110, 0b111]);
        assert!(is_upset(0b110, &up));
        assert!(!is_upset(0b011, &up));
        assert_eq!(down_closure(0b010, &up), 0b011);
    }
}
