//! Exhaustive enumeration of arc-presentations of a fixed complexity.
//!
//! Every `(X, O)` permutation pair without collisions is generated, reduced
//! to its unoriented key, and the connected classes are classified as
//! unknots or not. Classification shares work between classes: an exchange
//! closure visited once is never revisited, and every diagram met during a
//! closure inherits the verdict of the closure.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::bounds;
use crate::grid::{GridDiagram, UnorientedKey};
use crate::moves::{apply_unchecked, destabilizations, legal_moves, MoveClasses};
use crate::simplify::Verdict;

pub const DEFAULT_CEILING: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    /// Largest complexity accepted.
    pub ceiling: usize,
    pub threads: usize,
    pub cyclic: bool,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig { ceiling: DEFAULT_CEILING, threads: 1, cyclic: true }
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("complexity {n} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("complexity must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("failed to build thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub key: UnorientedKey,
    pub crossings: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub n: usize,
    /// Oriented `(X, O)` placements enumerated.
    pub placements: usize,
    /// Unoriented classes of any component count.
    pub classes: usize,
    pub connected: usize,
    pub multi_component: usize,
    pub unknots: usize,
    pub irreducible: usize,
    pub inconclusive: usize,
    pub max_crossings: usize,
    pub n_bound: BigUint,
    pub crossing_bound: usize,
    pub violations: Vec<String>,
    /// Connected classes, sorted by key.
    pub records: Vec<CensusRecord>,
}

impl CensusReport {
    pub fn unknot_fraction(&self) -> f64 {
        if self.connected == 0 {
            0.0
        } else {
            self.unknots as f64 / self.connected as f64
        }
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# census n={} (unoriented classes; bound compared against connected classes only)", self.n)?;
        let rows: [(&str, String); 11] = [
            ("placements", self.placements.to_string()),
            ("classes", self.classes.to_string()),
            ("connected", self.connected.to_string()),
            ("multi_component", self.multi_component.to_string()),
            ("N_bound", self.n_bound.to_string()),
            ("unknots", self.unknots.to_string()),
            ("irreducible", self.irreducible.to_string()),
            ("inconclusive", self.inconclusive.to_string()),
            ("unknot_fraction", format!("{:.6}", self.unknot_fraction())),
            ("max_crossings", self.max_crossings.to_string()),
            ("crossing_bound", self.crossing_bound.to_string()),
        ];
        for (name, value) in rows {
            writeln!(f, "{name:<16} {value}")?;
        }
        writeln!(f, "{:<16} {}", "violations", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl CensusRecord {
    /// One line of the structured record file (JSON object per line).
    pub fn to_json_line(&self) -> String {
        let pairs: Vec<String> = self.key.row_pairs().map(|(a, b)| format!("[{a},{b}]")).collect();
        format!(
            "{{\"n\":{},\"key\":[{}],\"crossings\":{},\"verdict\":\"{}\"}}",
            self.key.size(),
            pairs.join(","),
            self.crossings,
            self.verdict
        )
    }
}

/// Heap's algorithm, collecting every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut a: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// All valid diagrams of complexity `n`, as `(X, O)` column sequences.
pub fn enumerate_placements(n: usize) -> impl ParallelIterator<Item = GridDiagram> {
    let perms = permutations(n);
    let perms_o = perms.clone();
    perms.into_par_iter().flat_map_iter(move |x| {
        perms_o
            .iter()
            .filter(|o| x.iter().zip(o.iter()).all(|(a, b)| a != b))
            .map(|o| GridDiagram::from_bytes(x.clone(), o.clone()))
            .collect::<Vec<_>>()
    })
}

/// Knot-type classifier with memoized closures.
///
/// `classify` returns `Trivialized` when a monotone sequence reaches the
/// trivial diagram and `Irreducible` when the exchange closure at some
/// complexity holds no destabilizable diagram.
pub struct Classifier {
    memo: FxHashMap<UnorientedKey, Verdict>,
    classes: MoveClasses,
}

impl Classifier {
    pub fn new(cyclic: bool) -> Self {
        Classifier { memo: FxHashMap::default(), classes: MoveClasses { exchange: true, cyclic, ..Default::default() } }
    }

    pub fn classify(&mut self, g: &GridDiagram) -> Verdict {
        let mut chain: Vec<Vec<UnorientedKey>> = Vec::new();
        let mut cur = g.clone();
        let verdict = loop {
            if cur.is_trivial() {
                break Verdict::Trivialized;
            }
            let key = cur.unoriented_key();
            if let Some(&v) = self.memo.get(&key) {
                break v;
            }
            let (members, outcome) = self.explore(&cur);
            chain.push(members);
            match outcome {
                Outcome::Known(v) => break v,
                Outcome::Descend(next) => cur = next,
                Outcome::Exhausted => break Verdict::Irreducible,
            }
        };
        for members in chain {
            for k in members {
                self.memo.insert(k, verdict);
            }
        }
        verdict
    }

    fn explore(&self, root: &GridDiagram) -> (Vec<UnorientedKey>, Outcome) {
        let mut seen = FxHashSet::default();
        let mut members = vec![root.unoriented_key()];
        seen.insert(members[0].clone());
        let mut frontier = vec![root.clone()];
        while !frontier.is_empty() {
            for d in &frontier {
                if let Some(&mv) = destabilizations(d).first() {
                    return (members, Outcome::Descend(apply_unchecked(d, mv)));
                }
            }
            let mut next = Vec::new();
            for d in &frontier {
                for mv in legal_moves(d, self.classes) {
                    let e = apply_unchecked(d, mv);
                    let key = e.unoriented_key();
                    if !seen.insert(key.clone()) {
                        continue;
                    }
                    if let Some(&v) = self.memo.get(&key) {
                        return (members, Outcome::Known(v));
                    }
                    members.push(key);
                    next.push(e);
                }
            }
            frontier = next;
        }
        (members, Outcome::Exhausted)
    }
}

enum Outcome {
    Known(Verdict),
    Descend(GridDiagram),
    Exhausted,
}

pub fn census(n: usize, cfg: &CensusConfig) -> Result<CensusReport, CensusError> {
    if n < 2 {
        return Err(CensusError::TooSmall(n));
    }
    if n > cfg.ceiling {
        return Err(CensusError::CeilingExceeded { n, ceiling: cfg.ceiling });
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads.max(1)).build()?;
    let crossing_bound = (n - 2) * (n - 2);

    let (placements, max_crossings, mut keys) = pool.install(|| {
        let all: Vec<(UnorientedKey, usize)> =
            enumerate_placements(n).map(|g| (g.unoriented_key(), g.crossing_count())).collect();
        let placements = all.len();
        let max_crossings = all.iter().map(|p| p.1).max().unwrap_or(0);
        let mut keys: Vec<UnorientedKey> = all.into_iter().map(|p| p.0).collect();
        keys.par_sort_unstable();
        keys.dedup();
        (placements, max_crossings, keys)
    });
    let classes = keys.len();
    keys.retain(|k| GridDiagram::from_key(k).component_count() == 1);
    let connected = keys.len();

    let mut classifier = Classifier::new(cfg.cyclic);
    let records: Vec<CensusRecord> = keys
        .into_iter()
        .map(|key| {
            let g = GridDiagram::from_key(&key);
            let verdict = classifier.classify(&g);
            CensusRecord { crossings: g.crossing_count(), key, verdict }
        })
        .collect();

    let n_bound = bounds::bound_n(n as u64).expect("n >= 2");
    let mut violations = Vec::new();
    if BigUint::from(connected) > n_bound {
        violations.push(format!("connected classes {connected} exceed N_bound {n_bound}"));
    }
    if max_crossings > crossing_bound {
        violations.push(format!("max crossings {max_crossings} exceed (n-2)^2 = {crossing_bound}"));
    }
    let count = |v: Verdict| records.iter().filter(|r| r.verdict == v).count();
    Ok(CensusReport {
        n,
        placements,
        classes,
        connected,
        multi_component: classes - connected,
        unknots: count(Verdict::Trivialized),
        irreducible: count(Verdict::Irreducible),
        inconclusive: count(Verdict::Inconclusive),
        max_crossings,
        n_bound,
        crossing_bound,
        violations,
        records,
    })
}
