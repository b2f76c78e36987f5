//! Bundled data: the small DqRA-frames, the 4-atom relation algebra
//! tables, the drawn catalog of algebras up to size six, and
//! representability annotations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::io;

/// Raw bundled files as (name, contents).
pub const FRAME_FILES: &[(&str, &str)] = &[
    ("W1_1_1", include_str!("../data/frames/W1_1_1.json")),
    ("W2_1_1", include_str!("../data/frames/W2_1_1.json")),
    ("W3_1_1", include_str!("../data/frames/W3_1_1.json")),
    ("W3_1_2", include_str!("../data/frames/W3_1_2.json")),
    ("W4_1_1", include_str!("../data/frames/W4_1_1.json")),
    ("W4_1_2", include_str!("../data/frames/W4_1_2.json")),
    ("W4_1_3", include_str!("../data/frames/W4_1_3.json")),
    ("W4_1_4", include_str!("../data/frames/W4_1_4.json")),
    ("W4_2_1a", include_str!("../data/frames/W4_2_1a.json")),
    ("W4_2_1b", include_str!("../data/frames/W4_2_1b.json")),
    ("W4_2_2", include_str!("../data/frames/W4_2_2.json")),
    ("W4_2_3", include_str!("../data/frames/W4_2_3.json")),
    ("W4_3_1", include_str!("../data/frames/W4_3_1.json")),
    ("W4_3_2", include_str!("../data/frames/W4_3_2.json")),
];

pub const ATOM_TABLES_FILE: &str = include_str!("../data/atom_tables.json");
pub const CATALOG_FILE: &str = include_str!("../data/catalog6.json");
pub const REPRESENTABILITY_FILE: &str = include_str!("../data/representability.json");
pub const SUBREDUCT_NOTES_FILE: &str = include_str!("../data/subreduct_notes.json");

/// The DqRA-frames of all algebras with at most four elements.
pub fn small_frames() -> Vec<Frame> {
    FRAME_FILES
        .iter()
        .map(|(name, text)| io::parse_frame(text, name).expect("bundled frame parses"))
        .collect()
}

pub fn small_frame(name: &str) -> Result<Frame> {
    FRAME_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| io::parse_frame(text, n).expect("bundled frame parses"))
        .ok_or_else(|| Error::NotFound(name.to_string()))
}

/// One row of a 4-atom table: products of `a`, `r`, `s` with `a`, `r`, `s`,
/// each a string of atom letters (`1`, `a`, `r`, `s`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomTableEntry {
    pub index: usize,
    pub a: Vec<String>,
    pub r: Vec<String>,
    pub s: Vec<String>,
}

pub fn atom_table_entries() -> Vec<AtomTableEntry> {
    serde_json::from_str(ATOM_TABLES_FILE).expect("bundled table parses")
}

/// A drawn Hasse diagram: node styles (`i` central idempotent, empty
/// central, `nci` noncentral idempotent, `nc` noncentral), label terms
/// and covering pairs `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagram {
    pub name: String,
    pub size: usize,
    pub m: usize,
    pub i: usize,
    pub k: usize,
    pub styles: Vec<String>,
    pub labels: Vec<Vec<String>>,
    pub covers: Vec<[usize; 2]>,
}

pub fn diagrams() -> Vec<Diagram> {
    serde_json::from_str(CATALOG_FILE).expect("bundled catalog parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepClass {
    Known,
    MustBeInfinite,
    NoKnown,
}

/// Representability status of a named DqRA. `neg` is `~` when ¬ = ∼, and
/// otherwise an equation such as `a=a` in the diagram's letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepNote {
    pub name: String,
    pub neg: String,
    pub status: String,
    pub class: RepClass,
}

pub fn representability() -> Vec<RepNote> {
    serde_json::from_str(REPRESENTABILITY_FILE).expect("bundled annotations parse")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubreductNote {
    pub index: usize,
    pub ra_representable: bool,
    pub subreduct: Option<String>,
}

pub fn subreduct_notes() -> Vec<SubreductNote> {
    serde_json::from_str(SUBREDUCT_NOTES_FILE).expect("bundled notes parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_reserialize_identically() {
        for (name, text) in FRAME_FILES {
            let w = io::parse_frame(text, name).unwrap();
            assert_eq!(&io::frame_to_json(&w), text, "{name}");
        }
        assert_eq!(io::canonical_list(&atom_table_entries()), ATOM_TABLES_FILE);
        assert_eq!(io::canonical_list(&diagrams()), CATALOG_FILE);
        assert_eq!(
            io::canonical_list(&representability()),
            REPRESENTABILITY_FILE
        );
        assert_eq!(io::canonical_list(&subreduct_notes()), SUBREDUCT_NOTES_FILE);
    }

    #[test]
    fn lookup() {
        assert_eq!(small_frame("W4_1_3").unwrap().size(), 3);
        assert!(matches!(small_frame("W9_9_9"), Err(Error::NotFound(_))));
        assert_eq!(atom_table_entries().len(), 37);
        assert_eq!(diagrams().len(), 64);
    }
}
