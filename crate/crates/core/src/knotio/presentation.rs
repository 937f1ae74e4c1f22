//! Group presentations with a meridian and a degree map, and their JSON
//! file format.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::knotio::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub meridian: usize,
    /// Degree of each generator under the abelianization map to `Z`.
    pub h: Vec<i64>,
    /// Whether `h` was given explicitly (otherwise every generator has
    /// degree 1, as in a Wirtinger presentation).
    pub h_explicit: bool,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileIn {
    name: String,
    generators: Vec<String>,
    relators: Vec<String>,
    meridian: String,
    #[serde(default)]
    h: Option<BTreeMap<String, i64>>,
}

#[derive(Serialize)]
struct FileOut<'a> {
    name: &'a str,
    generators: &'a [String],
    relators: Vec<String>,
    meridian: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<DegreeMap<'a>>,
}

/// Serializes as a JSON object in generator order.
struct DegreeMap<'a>(&'a [String], &'a [i64]);

impl Serialize for DegreeMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (g, d) in self.0.iter().zip(self.1) {
            m.serialize_entry(g, d)?;
        }
        m.end()
    }
}

impl Presentation {
    /// Validate and assemble. Relators are freely reduced on the way in.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        relators: Vec<Word>,
        meridian: usize,
        h: Option<Vec<i64>>,
    ) -> Result<Self> {
        let g = generators.len();
        if g == 0 {
            return Err(Error::Parse("presentation needs at least one generator".into()));
        }
        for (i, name) in generators.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c.is_uppercase()) {
                return Err(Error::Parse(format!(
                    "generator name `{name}` must be nonempty, lowercase and without spaces"
                )));
            }
            if generators[..i].contains(name) {
                return Err(Error::Parse(format!("duplicate generator `{name}`")));
            }
        }
        if meridian >= g {
            return Err(Error::UnknownGenerator(format!("meridian index {meridian}")));
        }
        if relators.is_empty() && g > 1 {
            return Err(Error::EmptyRelators);
        }
        for w in &relators {
            if let Some(l) = w.letters().iter().find(|l| l.gen >= g) {
                return Err(Error::UnknownGenerator(format!("index {}", l.gen)));
            }
        }
        let h_explicit = h.is_some();
        let h = h.unwrap_or_else(|| vec![1; g]);
        assert_eq!(h.len(), g);
        if h[meridian] != 1 {
            return Err(Error::Parse(format!(
                "meridian `{}` must have degree 1, got {}",
                generators[meridian], h[meridian]
            )));
        }
        if !h_explicit && relators.len() + 1 != g {
            return Err(Error::Parse(format!(
                "{} generators with {} relators: a presentation without explicit `h` must have deficiency one",
                g,
                relators.len()
            )));
        }
        for (index, w) in relators.iter().enumerate() {
            let sum = w.degree(&h);
            if sum != 0 {
                return Err(Error::InconsistentDegree { index, sum });
            }
        }
        let relators: Vec<Word> = relators.into_iter().map(|w| Word::from_letters(w.letters().iter().copied())).collect();
        let mut warnings = Vec::new();
        for (i, w) in relators.iter().enumerate() {
            let c = w.cyclically_reduced();
            if c.len() <= 2 {
                warnings.push(format!(
                    "relator {i} cyclically reduces to `{}` (length {}), which collapses generators",
                    c.display_with(&generators),
                    c.len()
                ));
            }
        }
        Ok(Presentation { name: name.into(), generators, relators, meridian, h, h_explicit, warnings })
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parse one whitespace-separated relator string.
    pub fn parse_word(generators: &[String], text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let letter = if let Some(i) = generators.iter().position(|g| g == tok) {
                Letter::new(i, 1)
            } else {
                let lower = tok.to_lowercase();
                match generators.iter().position(|g| *g == lower) {
                    Some(i) if lower != tok => Letter::new(i, -1),
                    _ => return Err(Error::UnknownGenerator(tok.to_string())),
                }
            };
            letters.push(letter);
        }
        Ok(Word::from_letters(letters))
    }

    /// Canonical JSON (two-space indentation, trailing newline).
    pub fn to_json(&self) -> String {
        let out = FileOut {
            name: &self.name,
            generators: &self.generators,
            relators: self.relators.iter().map(|w| w.display_with(&self.generators)).collect(),
            meridian: &self.generators[self.meridian],
            h: self.h_explicit.then_some(DegreeMap(&self.generators, &self.h)),
        };
        let mut s = serde_json::to_string_pretty(&out).expect("serializable");
        s.push('\n');
        s
    }

    /// The presentation with relators permuted and each rotated, as used by
    /// invariance checks.
    pub fn with_relators(&self, relators: Vec<Word>) -> Result<Self> {
        let h = self.h_explicit.then(|| self.h.clone());
        Presentation::new(self.name.clone(), self.generators.clone(), relators, self.meridian, h)
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let file: FileIn = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let gens = file.generators;
    let mut relators = Vec::with_capacity(file.relators.len());
    for (i, r) in file.relators.iter().enumerate() {
        let w = Presentation::parse_word(&gens, r).map_err(|e| match e {
            Error::UnknownGenerator(tok) => Error::UnknownGenerator(format!("{tok} (relator {i})")),
            other => other,
        })?;
        relators.push(w);
    }
    let meridian = gens
        .iter()
        .position(|g| *g == file.meridian)
        .ok_or_else(|| Error::UnknownGenerator(format!("{} (meridian)", file.meridian)))?;
    let h = match file.h {
        None => None,
        Some(map) => {
            if let Some(k) = map.keys().find(|k| !gens.contains(k)) {
                return Err(Error::UnknownGenerator(format!("{k} (degree map)")));
            }
            let mut v = Vec::with_capacity(gens.len());
            for g in &gens {
                match map.get(g) {
                    Some(&d) => v.push(d),
                    None => return Err(Error::Parse(format!("degree map is missing generator `{g}`"))),
                }
            }
            Some(v)
        }
    };
    Presentation::new(file.name, gens, relators, meridian, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = r#"{"name": "3_1", "generators": ["a", "b"], "relators": ["a b a B A B"], "meridian": "a"}"#;

    #[test]
    fn parses_trefoil() {
        let p = parse_presentation(TREFOIL).unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.num_relators(), 1);
        assert_eq!(p.h, vec![1, 1]);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn unknot_has_no_relators() {
        let p = parse_presentation(r#"{"name": "0_1", "generators": ["a"], "relators": [], "meridian": "a"}"#).unwrap();
        assert_eq!(p.num_relators(), 0);
    }

    #[test]
    fn collapsing_relator_is_a_warning() {
        let p = parse_presentation(r#"{"name": "u", "generators": ["a", "b"], "relators": ["a b A A"], "meridian": "a"}"#)
            .unwrap();
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn errors() {
        let bad_gen = r#"{"name": "x", "generators": ["a", "b"], "relators": ["a c"], "meridian": "a"}"#;
        assert!(matches!(parse_presentation(bad_gen), Err(Error::UnknownGenerator(_))));
        let bad_h = r#"{"name": "x", "generators": ["a", "b"], "relators": ["a b"], "meridian": "a"}"#;
        assert!(matches!(parse_presentation(bad_h), Err(Error::InconsistentDegree { index: 0, sum: 2 })));
        let empty = r#"{"name": "x", "generators": ["a", "b"], "relators": [], "meridian": "a", "h": {"a": 1, "b": 0}}"#;
        assert!(matches!(parse_presentation(empty), Err(Error::EmptyRelators)));
        let syntax = "{\"name\": \"x\",\n \"generators\": [\"a\"] \"relators\": []}";
        match parse_presentation(syntax) {
            Err(Error::Parse(msg)) => assert!(msg.starts_with("line 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_degree_map() {
        // Z x Z/2 style: h(b) = 0 kills b^2
        let text = r#"{"name": "x", "generators": ["a", "b"], "relators": ["b b", "a b A B"], "meridian": "a", "h": {"a": 1, "b": 0}}"#;
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.h, vec![1, 0]);
        let again = parse_presentation(&p.to_json()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn canonical_roundtrip() {
        let p = parse_presentation(TREFOIL).unwrap();
        let s = p.to_json();
        assert_eq!(parse_presentation(&s).unwrap().to_json(), s);
        assert!(s.contains("\"a b a B A B\""));
    }
}
