//! Command-line front end for `arcgrid`: renderers and the bundled corpus.

pub mod corpus;
pub mod render;

pub use corpus::{load_corpus, CorpusEntry, CorpusError};
pub use render::{render_ascii, render_svg};
