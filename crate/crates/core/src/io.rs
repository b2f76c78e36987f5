//! JSON file formats. Output is canonical: fixed key order, one key per
//! line, compact values, sorted index arrays.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::sets::{self, Mask};

fn canonical(fields: &[(&str, String)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("  \"{k}\":{v}"))
        .collect();
    format!("{{\n{}\n}}\n", body.join(",\n"))
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Writes a list with one compact item per line.
pub fn canonical_list<T: Serialize>(items: &[T]) -> String {
    if items.is_empty() {
        return "[]\n".into();
    }
    let body: Vec<String> = items.iter().map(|x| format!("  {}", compact(x))).collect();
    format!("[\n{}\n]\n", body.join(",\n"))
}

fn parse_err(path: &str, source: serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_string(),
        source,
    }
}

fn bool_matrix(m: &[Vec<u8>], n: usize, what: &str) -> Result<Vec<Vec<bool>>> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::Structural(format!("{what} is not a {n}×{n} matrix")));
    }
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(Error::Structural(format!("{what} entries must be 0 or 1"))),
                })
                .collect()
        })
        .collect()
}

fn to_bits(m: &[Vec<bool>]) -> Vec<Vec<u8>> {
    m.iter()
        .map(|r| r.iter().map(|&b| b as u8).collect())
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    #[serde(default)]
    name: Option<String>,
    size: usize,
    leq: Vec<Vec<u8>>,
    product: Vec<Vec<usize>>,
    one: usize,
    tilde: Vec<usize>,
    minus: Vec<usize>,
    neg: Option<Vec<usize>>,
}

pub fn algebra_from_value(v: Value, path: &str) -> Result<FinAlgebra> {
    let f: AlgebraFile = serde_json::from_value(v).map_err(|e| parse_err(path, e))?;
    let leq = bool_matrix(&f.leq, f.size, "leq")?;
    let mut a = FinAlgebra::new(leq, f.product, f.one, f.tilde, f.minus, f.neg)?;
    a.set_name(f.name);
    Ok(a)
}

pub fn parse_algebra(text: &str, path: &str) -> Result<FinAlgebra> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    algebra_from_value(v, path)
}

pub fn algebra_to_json(a: &FinAlgebra) -> String {
    let mut fields = Vec::new();
    if let Some(n) = a.name() {
        fields.push(("name", compact(n)));
    }
    fields.push(("size", a.size().to_string()));
    fields.push(("leq", compact(&to_bits(&a.leq_matrix()))));
    fields.push(("product", compact(&a.product_table())));
    fields.push(("one", a.one().to_string()));
    fields.push(("tilde", compact(&a.tilde_perm())));
    fields.push(("minus", compact(&a.minus_perm())));
    fields.push(("neg", compact(&a.neg_perm())));
    canonical(&fields)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameFile {
    #[serde(default)]
    name: Option<String>,
    size: usize,
    leq: Vec<Vec<u8>>,
    identity: Vec<usize>,
    comp: Vec<Vec<Vec<usize>>>,
    tilde: Vec<usize>,
    minus: Vec<usize>,
    neg: Option<Vec<usize>>,
    #[serde(default)]
    bottom: Option<usize>,
    #[serde(default)]
    top: Option<usize>,
}

/// A frame with designated least and greatest points.
#[derive(Clone, Debug)]
pub struct PointedFrame {
    pub frame: Frame,
    pub bottom: usize,
    pub top: usize,
}

fn frame_from_file(f: FrameFile) -> Result<(Frame, Option<(usize, usize)>)> {
    let leq = bool_matrix(&f.leq, f.size, "leq")?;
    let mut w = Frame::new(leq, f.identity, f.comp, f.tilde, f.minus, f.neg)?;
    w.set_name(f.name);
    let bounds = match (f.bottom, f.top) {
        (Some(b), Some(t)) if b < f.size && t < f.size => Some((b, t)),
        (None, None) => None,
        _ => {
            return Err(Error::Structural(
                "bottom/top must both be given and in range".into(),
            ))
        }
    };
    Ok((w, bounds))
}

pub fn frame_from_value(v: Value, path: &str) -> Result<Frame> {
    let f: FrameFile = serde_json::from_value(v).map_err(|e| parse_err(path, e))?;
    Ok(frame_from_file(f)?.0)
}

pub fn parse_frame(text: &str, path: &str) -> Result<Frame> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    frame_from_value(v, path)
}

pub fn parse_pointed_frame(text: &str, path: &str) -> Result<PointedFrame> {
    let f: FrameFile = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    match frame_from_file(f)? {
        (frame, Some((bottom, top))) => Ok(PointedFrame { frame, bottom, top }),
        _ => Err(Error::Structural(format!(
            "{path}: pointed frame needs bottom and top"
        ))),
    }
}

fn frame_fields(w: &Frame) -> Vec<(&'static str, String)> {
    let n = w.size();
    let mut fields = Vec::new();
    if let Some(name) = w.name() {
        fields.push(("name", compact(name)));
    }
    let comp: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| (0..n).map(|y| sets::to_indices(w.comp(x, y))).collect())
        .collect();
    fields.push(("size", n.to_string()));
    fields.push(("leq", compact(&to_bits(&w.leq_matrix()))));
    fields.push(("identity", compact(&sets::to_indices(w.identity()))));
    fields.push(("comp", compact(&comp)));
    fields.push(("tilde", compact(w.tilde_perm())));
    fields.push(("minus", compact(w.minus_perm())));
    fields.push(("neg", compact(&w.neg_perm())));
    fields
}

pub fn frame_to_json(w: &Frame) -> String {
    canonical(&frame_fields(w))
}

pub fn pointed_frame_to_json(p: &PointedFrame) -> String {
    let mut fields = frame_fields(&p.frame);
    fields.push(("bottom", p.bottom.to_string()));
    fields.push(("top", p.top.to_string()));
    canonical(&fields)
}

/// Source or target of a morphism file: a bundled name or an inline object.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectRef {
    Name(String),
    Inline(Value),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub source: ObjectRef,
    pub target: ObjectRef,
    pub map: Vec<usize>,
}

pub fn parse_morphism(text: &str, path: &str) -> Result<MorphismFile> {
    serde_json::from_str(text).map_err(|e| parse_err(path, e))
}

pub fn morphism_to_json(m: &MorphismFile) -> String {
    canonical(&[
        ("source", compact(&m.source)),
        ("target", compact(&m.target)),
        ("map", compact(&m.map)),
    ])
}

/// Base of a Dq(E) construction as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFile {
    pub points: usize,
    pub leq: Vec<Vec<u8>>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<u8>>,
    pub alpha: Vec<usize>,
    pub beta: Option<Vec<usize>>,
}

pub fn base_file_to_json(b: &BaseFile) -> String {
    canonical(&[
        ("points", b.points.to_string()),
        ("leq", compact(&b.leq)),
        ("E", compact(&b.e)),
        ("alpha", compact(&b.alpha)),
        ("beta", compact(&b.beta)),
    ])
}

pub fn parse_base_file(text: &str, path: &str) -> Result<BaseFile> {
    let b: BaseFile = serde_json::from_str(text).map_err(|e| parse_err(path, e))?;
    bool_matrix(&b.leq, b.points, "leq")?;
    bool_matrix(&b.e, b.points, "E")?;
    Ok(b)
}

/// Kind of object stored in a JSON file, detected from its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Algebra,
    Frame,
    PointedFrame,
    Morphism,
    Base,
}

pub fn detect_kind(v: &Value) -> Option<FileKind> {
    let o = v.as_object()?;
    let k = |s: &str| o.contains_key(s);
    if k("map") && k("source") {
        Some(FileKind::Morphism)
    } else if k("product") {
        Some(FileKind::Algebra)
    } else if k("comp") && k("bottom") {
        Some(FileKind::PointedFrame)
    } else if k("comp") {
        Some(FileKind::Frame)
    } else if k("points") && k("E") {
        Some(FileKind::Base)
    } else {
        None
    }
}

pub fn parse_value(text: &str, path: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(path, e))
}

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_string(),
        source,
    })
}

/// Mask of an index list, for callers holding index data.
pub fn mask_of(xs: &[usize]) -> Mask {
    sets::from_indices(xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::boolean2;

    #[test]
    fn algebra_roundtrip_is_byte_identical() {
        let a = boolean2().named("B2");
        let s = algebra_to_json(&a);
        let b = parse_algebra(&s, "mem").unwrap();
        assert_eq!(algebra_to_json(&b), s);
    }

    #[test]
    fn ragged_and_out_of_range_rejected() {
        let bad = r#"{"size":2,"leq":[[1,1],[0]],"product":[[0,0],[0,1]],"one":1,"tilde":[1,0],"minus":[1,0],"neg":null}"#;
        assert!(matches!(
            parse_algebra(bad, "mem"),
            Err(Error::Structural(_))
        ));
        let bad = r#"{"size":2,"leq":[[1,1],[0,1]],"product":[[0,0],[0,7]],"one":1,"tilde":[1,0],"minus":[1,0],"neg":null}"#;
        assert!(matches!(
            parse_algebra(bad, "mem"),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn parse_errors_carry_location() {
        let e = parse_algebra("{\n\"size\": ", "x.json").unwrap_err();
        assert!(e.to_string().contains("x.json"));
        assert!(e.to_string().contains("line"));
    }
}
