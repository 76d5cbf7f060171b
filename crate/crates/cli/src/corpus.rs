//! The bundled corpus: Morse words listed in `corpus.toml`, converted to
//! grids on load.

use std::fs;
use std::path::{Path, PathBuf};

use arcgrid::{morse_to_grid, parse_morse, GridDiagram, MorseError, MorseStats, MorseWord, Verdict};
use serde::Deserialize;
use thiserror::Error;

pub const MANIFEST: &str = "corpus.toml";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad manifest: {0}")]
    Manifest(#[from] toml::de::Error),
    #[error("entry `{name}`: {source}")]
    Morse { name: String, source: MorseError },
    #[error("entry `{name}`: recorded {recorded} but word has {actual}")]
    StatsMismatch { name: String, recorded: MorseStats, actual: MorseStats },
    #[error("entry `{name}`: unknown verdict `{verdict}`")]
    Verdict { name: String, verdict: String },
}

#[derive(Deserialize)]
struct Manifest {
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    morse: String,
    b: usize,
    cr: usize,
    m: usize,
    verdict: String,
    provenance: String,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub path: PathBuf,
    pub word: MorseWord,
    pub stats: MorseStats,
    pub verdict: Verdict,
    pub provenance: String,
}

impl CorpusEntry {
    pub fn grid(&self) -> GridDiagram {
        morse_to_grid(&self.word)
    }
}

/// The corpus directory shipped at the workspace root.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let read = |path: PathBuf| fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source });
    let manifest: Manifest = toml::from_str(&read(dir.join(MANIFEST))?)?;
    manifest
        .entry
        .into_iter()
        .map(|raw| {
            let path = dir.join(&raw.morse);
            let word = parse_morse(&read(path.clone())?)
                .map_err(|source| CorpusError::Morse { name: raw.name.clone(), source })?;
            let actual = word.stats();
            let recorded = MorseStats { b: raw.b, cr: raw.cr, m: raw.m };
            if actual != recorded {
                return Err(CorpusError::StatsMismatch { name: raw.name, recorded, actual });
            }
            let verdict = raw
                .verdict
                .parse()
                .map_err(|_| CorpusError::Verdict { name: raw.name.clone(), verdict: raw.verdict.clone() })?;
            Ok(CorpusEntry { name: raw.name, path, word, stats: actual, verdict, provenance: raw.provenance })
        })
        .collect()
}
