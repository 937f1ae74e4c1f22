//! Bundled knot presentations with their Alexander polynomials.

use crate::knotio::braid::Braid;
use crate::knotio::presentation::{parse_presentation, Presentation};

pub struct CorpusEntry {
    pub name: &'static str,
    /// Closed-braid representative the shipped presentation was read from.
    pub braid_strands: usize,
    pub braid_word: &'static [i32],
    /// Canonical Alexander polynomial, coefficients from degree 0 up.
    pub alexander: &'static [i64],
    pub json: &'static str,
}

impl CorpusEntry {
    pub fn presentation(&self) -> Presentation {
        parse_presentation(self.json).expect("bundled presentation parses")
    }

    pub fn braid(&self) -> Braid {
        Braid::new(self.braid_strands, self.braid_word.to_vec()).expect("bundled braid is valid")
    }
}

macro_rules! entry {
    ($name:literal, $strands:expr, $word:expr, $alex:expr) => {
        CorpusEntry {
            name: $name,
            braid_strands: $strands,
            braid_word: &$word,
            alexander: &$alex,
            json: include_str!(concat!("../../data/knots/", $name, ".json")),
        }
    };
}

pub static CORPUS: &[CorpusEntry] = &[
    entry!("0_1", 1, [], [1]),
    entry!("3_1", 2, [1, 1, 1], [1, -1, 1]),
    entry!("4_1", 3, [1, -2, 1, -2], [1, -3, 1]),
    entry!("5_1", 2, [1, 1, 1, 1, 1], [1, -1, 1, -1, 1]),
    entry!("5_2", 3, [1, 1, 1, 2, -1, 2], [2, -3, 2]),
    entry!("6_1", 4, [1, 1, 2, -1, -3, 2, -3], [2, -5, 2]),
    entry!("6_2", 3, [1, 1, 1, -2, 1, -2], [1, -3, 3, -3, 1]),
    entry!("6_3", 3, [1, 1, -2, 1, -2, -2], [1, -3, 5, -3, 1]),
    entry!("7_4", 4, [1, 1, 2, -1, 2, 2, 3, -2, 3], [4, -7, 4]),
    entry!("8_20", 3, [1, 1, 1, -2, -1, -1, -1, -2], [1, -2, 3, -2, 1]),
    entry!("3_1#3_1", 3, [1, 1, 1, 2, 2, 2], [1, -2, 3, -2, 1]),
    entry!("3_1#-3_1", 3, [1, 1, 1, -2, -2, -2], [1, -2, 3, -2, 1]),
];

/// All bundled presentations.
pub fn corpus() -> Vec<Presentation> {
    CORPUS.iter().map(|e| e.presentation()).collect()
}

pub fn corpus_entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::braid::wirtinger_from_braid;

    /// The shipped files are exactly the diagram presentations of the
    /// listed braids. Set `KNOTREP_REGEN_CORPUS=1` to rewrite them.
    #[test]
    fn files_match_braid_diagrams() {
        let regen = std::env::var_os("KNOTREP_REGEN_CORPUS").is_some();
        for e in CORPUS {
            let p = wirtinger_from_braid(e.name, &e.braid()).unwrap();
            let text = p.to_json();
            if regen {
                let path = format!("{}/data/knots/{}.json", env!("CARGO_MANIFEST_DIR"), e.name);
                std::fs::write(path, &text).unwrap();
            } else {
                assert_eq!(text, e.json, "{} differs from its braid diagram", e.name);
            }
        }
    }

    #[test]
    fn every_entry_parses() {
        for e in CORPUS {
            let p = e.presentation();
            assert_eq!(p.name, e.name);
            assert!(p.warnings.is_empty(), "{}: {:?}", e.name, p.warnings);
        }
    }
}
