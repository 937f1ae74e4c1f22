//! Knot group presentations: words, the JSON file format, closed braids
//! and the bundled corpus.

pub mod braid;
pub mod corpus;
pub mod presentation;
pub mod word;

pub use braid::{presentation_from_braid, wirtinger_from_braid, Braid};
pub use corpus::{corpus, corpus_entry, CorpusEntry, CORPUS};
pub use presentation::{parse_presentation, Presentation};
pub use word::{random_word, Letter, Word};
