//! Monotonic simplification search.
//!
//! The search never stabilizes, so complexity never rises above the input's.
//! Each complexity level is explored breadth-first under exchanges (and
//! cyclic translations when enabled), one layer at a time. As soon as a
//! layer holds a destabilizable diagram the first one in layer order is
//! destabilized and the next level starts from the result. Committing to that
//! destabilization does not change the link type, so if the input is the
//! unknot (or split, or composite) the smaller diagram again admits a
//! monotone sequence to the target.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::bounds;
use crate::grid::{inline_grid, parse_grid, GridDiagram, GridError, UnorientedKey};
use crate::moves::{
    apply_sequence, apply_unchecked, destabilizations, legal_moves, Ledger, LedgerTotals, Move,
    MoveClasses, MoveFileError, ParseMoveError,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Target {
    #[default]
    Trivial,
    Split,
    Composite,
}

impl Target {
    fn reached(self, g: &GridDiagram) -> bool {
        match self {
            Target::Trivial => g.is_trivial(),
            Target::Split => g.is_split_form().is_some(),
            Target::Composite => g.is_composite_form().is_some(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    #[default]
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub target: Target,
    pub mode: Mode,
    pub cyclic: bool,
    /// Stop with an inconclusive verdict after visiting this many diagrams.
    pub max_nodes: Option<usize>,
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { target: Target::Trivial, mode: Mode::Exhaustive, cyclic: true, max_nodes: None, threads: 1 }
    }
}

/// Step cap used by greedy mode when none is configured.
pub const GREEDY_DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Verdict {
    Trivialized,
    Irreducible,
    TargetFound,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trivialized => "TRIVIALIZED",
            Verdict::Irreducible => "IRREDUCIBLE",
            Verdict::TargetFound => "TARGET_FOUND",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown verdict `{0}`")]
pub struct ParseVerdictError(pub String);

impl FromStr for Verdict {
    type Err = ParseVerdictError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "TRIVIALIZED" => Ok(Verdict::Trivialized),
            "IRREDUCIBLE" => Ok(Verdict::Irreducible),
            "TARGET_FOUND" => Ok(Verdict::TargetFound),
            "INCONCLUSIVE" => Ok(Verdict::Inconclusive),
            _ => Err(ParseVerdictError(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_visited: usize,
    /// `(complexity, diagrams visited at that complexity)` per level.
    pub levels: Vec<(usize, usize)>,
    pub max_crossings: usize,
    pub ledger: LedgerTotals,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SimplificationResult {
    pub verdict: Verdict,
    pub certificate: Vec<Move>,
    pub final_diagram: GridDiagram,
    pub ledger: Ledger,
    pub stats: SearchStats,
}

impl SimplificationResult {
    /// Certificate file text: header lines followed by one move per line.
    pub fn certificate_text(&self, from: &GridDiagram) -> String {
        Certificate { from: Some(from.clone()), verdict: Some(self.verdict), moves: self.certificate.clone() }
            .to_string()
    }
}

#[derive(Debug, Error)]
pub enum SimplifyError {
    #[error("failed to build thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

struct Level {
    /// `(parent index, move)` for every visited diagram; index 0 is the root.
    arena: Vec<(u32, Move)>,
    visited: FxHashSet<UnorientedKey>,
}

impl Level {
    fn path_to(&self, mut idx: usize) -> Vec<Move> {
        let mut path = Vec::new();
        while idx != 0 {
            let (parent, mv) = self.arena[idx];
            path.push(mv);
            idx = parent as usize;
        }
        path.reverse();
        path
    }
}

/// Complexity-preserving successors of `g` with their keys.
fn successors(g: &GridDiagram, classes: MoveClasses) -> Vec<(Move, GridDiagram, UnorientedKey)> {
    legal_moves(g, classes)
        .into_iter()
        .map(|mv| {
            let next = apply_unchecked(g, mv);
            let key = next.unoriented_key();
            (mv, next, key)
        })
        .collect()
}

pub fn simplify(g: &GridDiagram, cfg: &SearchConfig) -> Result<SimplificationResult, SimplifyError> {
    let start = Instant::now();
    let threads = cfg.threads.max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let (verdict, certificate, mut stats) = pool.install(|| match cfg.mode {
        Mode::Exhaustive => exhaustive(g, cfg, threads > 1),
        Mode::Greedy => greedy(g, cfg),
    });
    let replay = apply_sequence(g, &certificate).expect("search emits legal certificates");
    stats.max_crossings = replay.max_crossings;
    stats.ledger = replay.ledger.totals();
    stats.elapsed = start.elapsed();
    Ok(SimplificationResult { verdict, certificate, final_diagram: replay.diagram, ledger: replay.ledger, stats })
}

fn reached_verdict(target: Target) -> Verdict {
    match target {
        Target::Trivial => Verdict::Trivialized,
        _ => Verdict::TargetFound,
    }
}

fn exhaustive(g: &GridDiagram, cfg: &SearchConfig, parallel: bool) -> (Verdict, Vec<Move>, SearchStats) {
    let classes = MoveClasses { exchange: true, cyclic: cfg.cyclic, ..Default::default() };
    let mut stats = empty_stats();
    let mut certificate = Vec::new();
    let mut root = g.clone();

    loop {
        if cfg.target.reached(&root) {
            return (reached_verdict(cfg.target), certificate, stats);
        }
        let mut level = Level { arena: vec![(0, Move::RowExchange(0))], visited: FxHashSet::default() };
        level.visited.insert(root.unoriented_key());
        stats.nodes_visited += 1;
        stats.levels.push((root.size(), 1));
        let mut frontier: Vec<(u32, GridDiagram)> = vec![(0, root.clone())];

        let descent = loop {
            let first_destab = |(idx, d): &(u32, GridDiagram)| destabilizations(d).first().map(|&m| (*idx, m));
            let found = if parallel {
                frontier.par_iter().map(first_destab).collect::<Vec<_>>().into_iter().flatten().next()
            } else {
                frontier.iter().find_map(first_destab)
            };
            if let Some(found) = found {
                break Some(found);
            }

            let expanded: Vec<Vec<(Move, GridDiagram, UnorientedKey)>> = if parallel {
                frontier.par_iter().map(|(_, d)| successors(d, classes)).collect()
            } else {
                frontier.iter().map(|(_, d)| successors(d, classes)).collect()
            };
            let mut next = Vec::new();
            for ((parent, _), succ) in frontier.iter().zip(expanded) {
                for (mv, d, key) in succ {
                    if !level.visited.insert(key) {
                        continue;
                    }
                    level.arena.push((*parent, mv));
                    let idx = level.arena.len() - 1;
                    stats.nodes_visited += 1;
                    stats.levels.last_mut().unwrap().1 += 1;
                    if cfg.target != Target::Trivial && cfg.target.reached(&d) {
                        certificate.extend(level.path_to(idx));
                        return (Verdict::TargetFound, certificate, stats);
                    }
                    if cfg.max_nodes.is_some_and(|cap| stats.nodes_visited >= cap) {
                        return (Verdict::Inconclusive, certificate, stats);
                    }
                    next.push((idx as u32, d));
                }
            }
            if next.is_empty() {
                break None;
            }
            frontier = next;
        };

        match descent {
            Some((idx, destab)) => {
                let path = level.path_to(idx as usize);
                let mut d = root;
                for &mv in &path {
                    d = apply_unchecked(&d, mv);
                }
                root = apply_unchecked(&d, destab);
                certificate.extend(path);
                certificate.push(destab);
            }
            None => return (Verdict::Irreducible, certificate, stats),
        }
    }
}

fn empty_stats() -> SearchStats {
    SearchStats {
        nodes_visited: 0,
        levels: Vec::new(),
        max_crossings: 0,
        ledger: LedgerTotals::default(),
        elapsed: Duration::ZERO,
    }
}

/// Follows a single path: destabilize whenever possible, otherwise take the
/// unvisited neighbour with fewest crossings. Never concludes irreducibility.
fn greedy(g: &GridDiagram, cfg: &SearchConfig) -> (Verdict, Vec<Move>, SearchStats) {
    let classes = MoveClasses { exchange: true, cyclic: cfg.cyclic, ..Default::default() };
    let cap = cfg.max_nodes.unwrap_or(GREEDY_DEFAULT_CAP);
    let mut stats = empty_stats();
    let mut certificate = Vec::new();
    let mut cur = g.clone();
    let mut visited = FxHashSet::default();
    visited.insert(cur.unoriented_key());
    stats.nodes_visited = 1;
    stats.levels.push((cur.size(), 1));

    loop {
        if cfg.target.reached(&cur) {
            return (reached_verdict(cfg.target), certificate, stats);
        }
        if stats.nodes_visited >= cap {
            return (Verdict::Inconclusive, certificate, stats);
        }
        if let Some(&mv) = destabilizations(&cur).first() {
            cur = apply_unchecked(&cur, mv);
            certificate.push(mv);
            visited.clear();
            visited.insert(cur.unoriented_key());
            stats.nodes_visited += 1;
            stats.levels.push((cur.size(), 1));
            continue;
        }
        let best = successors(&cur, classes)
            .into_iter()
            .filter(|(_, _, key)| !visited.contains(key))
            .min_by_key(|(_, d, _)| d.crossing_count());
        match best {
            Some((mv, d, key)) => {
                visited.insert(key);
                certificate.push(mv);
                cur = d;
                stats.nodes_visited += 1;
                stats.levels.last_mut().unwrap().1 += 1;
            }
            None => return (Verdict::Inconclusive, certificate, stats),
        }
    }
}

/// Outcome of replaying and checking a claimed certificate.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claimed: Verdict,
    /// Replay error, if a move was illegal.
    pub replay_error: Option<String>,
    pub monotone: bool,
    pub final_matches: bool,
    pub final_diagram: Option<GridDiagram>,
    pub m: usize,
    pub ledger: LedgerTotals,
    pub max_crossings: usize,
    pub initial_complexity: usize,
    pub sequence_length_bound: num_bigint::BigUint,
    pub reidemeister_total_bound: num_bigint::BigUint,
    pub max_crossings_bound: u64,
    pub within_sequence_bound: bool,
    pub within_reidemeister_bound: bool,
    pub within_crossing_bound: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.replay_error.is_none()
            && self.monotone
            && self.final_matches
            && self.within_sequence_bound
            && self.within_reidemeister_bound
            && self.within_crossing_bound
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(f, "claimed {}", self.claimed)?;
        match &self.replay_error {
            Some(e) => writeln!(f, "replay FAIL {e}")?,
            None => writeln!(f, "replay ok")?,
        }
        writeln!(f, "monotone {}", yn(self.monotone))?;
        writeln!(f, "final {}", yn(self.final_matches))?;
        writeln!(f, "m={}", self.m)?;
        writeln!(
            f,
            "reidemeister r1={} r2={} r3={} total={} unmodeled={} flagged={}",
            self.ledger.r1,
            self.ledger.r2,
            self.ledger.r3,
            self.ledger.reidemeister(),
            self.ledger.unmodeled,
            self.ledger.flagged
        )?;
        writeln!(f, "max_crossings={}", self.max_crossings)?;
        writeln!(f, "sequence_length {} <= {} {}", self.m, self.sequence_length_bound, yn(self.within_sequence_bound))?;
        writeln!(
            f,
            "reidemeister_total {} <= {} {}",
            self.ledger.reidemeister(),
            self.reidemeister_total_bound,
            yn(self.within_reidemeister_bound)
        )?;
        writeln!(
            f,
            "max_crossings {} <= {} {}",
            self.max_crossings,
            self.max_crossings_bound,
            yn(self.within_crossing_bound)
        )?;
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn verify_certificate(g: &GridDiagram, seq: &[Move], claimed: Verdict) -> VerificationReport {
    let n0 = g.size() as u64;
    let sequence_length_bound = bounds::bound_sequence_length(n0).unwrap();
    let reidemeister_total_bound = bounds::bound_reidemeister_total(n0).unwrap();
    let max_crossings_bound = bounds::bound_max_crossings(n0).unwrap();
    let mut report = VerificationReport {
        claimed,
        replay_error: None,
        monotone: false,
        final_matches: false,
        final_diagram: None,
        m: seq.len(),
        ledger: LedgerTotals::default(),
        max_crossings: g.crossing_count(),
        initial_complexity: g.size(),
        within_sequence_bound: num_bigint::BigUint::from(seq.len()) <= sequence_length_bound,
        sequence_length_bound,
        reidemeister_total_bound,
        max_crossings_bound,
        within_reidemeister_bound: false,
        within_crossing_bound: false,
    };

    let mut cur = g.clone();
    let mut monotone = true;
    for (i, &mv) in seq.iter().enumerate() {
        match crate::moves::apply_move(&cur, mv) {
            Ok(next) => {
                monotone &= next.size() <= cur.size();
                cur = next;
            }
            Err(e) => {
                report.replay_error = Some(format!("move {i}: {e}"));
                return report;
            }
        }
    }
    let replay = apply_sequence(g, seq).expect("replayed above");
    report.monotone = monotone;
    report.ledger = replay.ledger.totals();
    report.max_crossings = replay.max_crossings;
    report.within_reidemeister_bound =
        num_bigint::BigUint::from(report.ledger.reidemeister()) <= report.reidemeister_total_bound;
    report.within_crossing_bound = replay.max_crossings as u64 <= max_crossings_bound;
    report.final_matches = match claimed {
        Verdict::Trivialized => cur.is_trivial(),
        Verdict::TargetFound => cur.is_split_form().is_some() || cur.is_composite_form().is_some(),
        Verdict::Irreducible => {
            let cfg = SearchConfig::default();
            simplify(&cur, &cfg).map(|r| r.verdict == Verdict::Irreducible).unwrap_or(false)
        }
        Verdict::Inconclusive => true,
    };
    report.final_diagram = Some(cur);
    report
}

/// A certificate file: optional `from` and `verdict` header lines, then moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub from: Option<GridDiagram>,
    pub verdict: Option<Verdict>,
    pub moves: Vec<Move>,
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("line {line}: bad `from` header: {source}")]
    From { line: usize, source: GridError },
    #[error("line {line}: {source}")]
    Verdict { line: usize, source: ParseVerdictError },
    #[error(transparent)]
    Move(#[from] MoveFileError),
}

impl FromStr for Certificate {
    type Err = CertificateError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut cert = Certificate { from: None, verdict: None, moves: Vec::new() };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("from ") {
                let grid = parse_grid(&rest.replace(" / ", "\n"))
                    .map_err(|source| CertificateError::From { line: i + 1, source })?;
                cert.from = Some(grid);
            } else if let Some(rest) = line.strip_prefix("verdict ") {
                cert.verdict =
                    Some(rest.trim().parse().map_err(|source| CertificateError::Verdict { line: i + 1, source })?);
            } else {
                let mv = line
                    .parse()
                    .map_err(|source: ParseMoveError| MoveFileError { line: i + 1, source })?;
                cert.moves.push(mv);
            }
        }
        Ok(cert)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.from {
            writeln!(f, "from {}", inline_grid(g))?;
        }
        if let Some(v) = self.verdict {
            writeln!(f, "verdict {v}")?;
        }
        for m in &self.moves {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}
