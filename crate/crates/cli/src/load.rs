//! Resolving command arguments: a JSON file path or a bundled name.

use std::path::Path;

use qra::algebra;
use qra::catalog::catalog_entry;
use qra::data;
use qra::enumerate::Signature;
use qra::io::{self, BaseFile, FileKind, MorphismFile, ObjectRef, PointedFrame};
use qra::poset::{poset_by_name, PosetShape};
use qra::ra::{self, AtomStructure};
use qra::{Error, FinAlgebra, Frame, Result};

pub enum Object {
    Algebra(FinAlgebra),
    Frame(Frame),
    Pointed(PointedFrame),
    Morphism(MorphismFile),
    Base(BaseFile),
    Atoms(AtomStructure),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Algebra(_) => "algebra",
            Object::Frame(_) => "frame",
            Object::Pointed(_) => "pointed frame",
            Object::Morphism(_) => "morphism",
            Object::Base(_) => "base",
            Object::Atoms(_) => "atom structure",
        }
    }
}

fn from_text(text: &str, path: &str) -> Result<Object> {
    parse_object(text, path).map_err(|e| match e {
        Error::Structural(m) if !m.starts_with(path) => Error::Structural(format!("{path}: {m}")),
        e => e,
    })
}

fn parse_object(text: &str, path: &str) -> Result<Object> {
    let v = io::parse_value(text, path)?;
    Ok(match io::detect_kind(&v) {
        Some(FileKind::Algebra) => Object::Algebra(io::algebra_from_value(v, path)?),
        Some(FileKind::Frame) => Object::Frame(io::frame_from_value(v, path)?),
        Some(FileKind::PointedFrame) => Object::Pointed(io::parse_pointed_frame(text, path)?),
        Some(FileKind::Morphism) => Object::Morphism(io::parse_morphism(text, path)?),
        Some(FileKind::Base) => Object::Base(io::parse_base_file(text, path)?),
        None => return Err(Error::Structural(format!("{path}: unrecognised object"))),
    })
}

/// Bundled names: W… frames, D… catalog algebras (suffix `:dinfl` selects
/// the DInFL entry), RA<k> atom structures, and the chains S<n> (Sugihara),
/// L<n> (Łukasiewicz) and B2.
fn bundled(name: &str) -> Result<Object> {
    if name == "B2" {
        return Ok(Object::Algebra(algebra::boolean2()));
    }
    let chain = |k: &str| k.parse::<usize>().ok().filter(|&n| (1..=64).contains(&n));
    if let Some(n) = name.strip_prefix('S').and_then(chain) {
        return algebra::sugihara_chain(n).map(Object::Algebra);
    }
    if let Some(n) = name.strip_prefix('L').and_then(chain) {
        return algebra::lukasiewicz_chain(n).map(Object::Algebra);
    }
    if name.starts_with('W') {
        return data::small_frame(name).map(Object::Frame);
    }
    if let Some(k) = name.strip_prefix("RA") {
        let k: usize = k.parse().map_err(|_| Error::NotFound(name.to_string()))?;
        return ra::atom_table(k).map(Object::Atoms);
    }
    let (base, sig) = match name.split_once(':') {
        Some((b, "dinfl")) => (b, Some(Signature::DInFL)),
        Some((b, "dqra")) => (b, Some(Signature::DqRA)),
        Some(_) => return Err(Error::NotFound(name.to_string())),
        None => (name, None),
    };
    catalog_entry(base, sig).map(|e| Object::Algebra(e.algebra))
}

fn looks_like_path(arg: &str) -> bool {
    Path::new(arg).exists() || arg.ends_with(".json") || arg.contains('/')
}

pub fn object(arg: &str) -> Result<Object> {
    if looks_like_path(arg) {
        from_text(&io::read_file(arg)?, arg)
    } else {
        bundled(arg)
    }
}

pub fn algebra(arg: &str) -> Result<FinAlgebra> {
    match object(arg)? {
        Object::Algebra(a) => Ok(a),
        Object::Atoms(s) => Ok(ra::ra_from_atoms(&s)?.algebra),
        o => Err(Error::Structural(format!(
            "{arg}: expected an algebra, found a {}",
            o.kind()
        ))),
    }
}

/// Morphism endpoints: a name or path string, or an inline object.
pub fn endpoint(r: &ObjectRef) -> Result<Object> {
    match r {
        ObjectRef::Name(n) => object(n),
        ObjectRef::Inline(v) => from_text(&v.to_string(), "<inline>"),
    }
}

/// A poset by name, or a JSON file with an "leq" matrix (any frame file).
pub fn poset(arg: &str) -> Result<PosetShape> {
    if !looks_like_path(arg) {
        return poset_by_name(arg).ok_or_else(|| Error::NotFound(format!("poset {arg}")));
    }
    let v = io::parse_value(&io::read_file(arg)?, arg)?;
    let leq: Vec<Vec<u8>> = v
        .get("leq")
        .cloned()
        .map(serde_json::from_value)
        .transpose()
        .map_err(|source| Error::Parse {
            path: arg.to_string(),
            source,
        })?
        .ok_or_else(|| Error::Structural(format!("{arg}: no \"leq\" matrix")))?;
    let n = leq.len();
    if n > 64 || leq.iter().any(|r| r.len() != n || r.iter().any(|&b| b > 1)) {
        return Err(Error::Structural(format!(
            "{arg}: leq is not a 0/1 square matrix of size ≤ 64"
        )));
    }
    let le = |x: usize, y: usize| leq[x][y] == 1;
    let order_ok = (0..n).all(|x| le(x, x))
        && (0..n).all(|x| (0..n).all(|y| x == y || !(le(x, y) && le(y, x))))
        && (0..n).all(|x| (0..n).all(|y| !le(x, y) || (0..n).all(|z| !le(y, z) || le(x, z))));
    if !order_ok {
        return Err(Error::Structural(format!(
            "{arg}: leq is not a partial order"
        )));
    }
    let up = leq
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, &b)| b == 1)
                .fold(0, |m, (j, _)| m | 1 << j)
        })
        .collect();
    Ok(PosetShape::from_up(up))
}
