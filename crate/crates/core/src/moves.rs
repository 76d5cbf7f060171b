//! Elementary moves on arc-presentations and their Reidemeister accounting.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::grid::{GridDiagram, Marker};

/// Corner of a 2x2 block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Corner {
    NW,
    NE,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::NE, Corner::SW, Corner::SE];

    /// `(row offset, col offset)` inside the block.
    fn offset(self) -> (usize, usize) {
        match self {
            Corner::NW => (0, 0),
            Corner::NE => (0, 1),
            Corner::SW => (1, 0),
            Corner::SE => (1, 1),
        }
    }

    fn from_offset(dr: usize, dc: usize) -> Corner {
        match (dr, dc) {
            (0, 0) => Corner::NW,
            (0, 1) => Corner::NE,
            (1, 0) => Corner::SW,
            _ => Corner::SE,
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corner::NW => "nw",
            Corner::NE => "ne",
            Corner::SW => "sw",
            Corner::SE => "se",
        })
    }
}

/// Direction of a cyclic translation. `Forward` moves the top row to the
/// bottom (or the leftmost column to the right).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Shift {
    Forward,
    Backward,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Move {
    /// Swap rows `r` and `r + 1`.
    RowExchange(usize),
    /// Swap columns `c` and `c + 1`.
    ColExchange(usize),
    /// Merge the 2x2 block whose top-left cell is `(row, col)`.
    Destabilize { row: usize, col: usize },
    /// Split the row and column through the marker at `(row, col)`; `empty`
    /// names the corner of the new block left without a marker.
    Stabilize { row: usize, col: usize, empty: Corner },
    CyclicRow(Shift),
    CyclicCol(Shift),
}

impl Move {
    pub fn class(&self) -> MoveClass {
        match self {
            Move::RowExchange(_) | Move::ColExchange(_) => MoveClass::Exchange,
            Move::Destabilize { .. } => MoveClass::Destabilize,
            Move::Stabilize { .. } => MoveClass::Stabilize,
            Move::CyclicRow(_) | Move::CyclicCol(_) => MoveClass::Cyclic,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: &Shift| match s {
            Shift::Forward => '+',
            Shift::Backward => '-',
        };
        match self {
            Move::RowExchange(r) => write!(f, "rx {r}"),
            Move::ColExchange(c) => write!(f, "cx {c}"),
            Move::Destabilize { row, col } => write!(f, "ds {row} {col}"),
            Move::Stabilize { row, col, empty } => write!(f, "st {row} {col} {empty}"),
            Move::CyclicRow(s) => write!(f, "cyr {}", sign(s)),
            Move::CyclicCol(s) => write!(f, "cyc {}", sign(s)),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse move `{0}`")]
pub struct ParseMoveError(pub String);

impl FromStr for Move {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMoveError(s.to_string());
        let toks: Vec<&str> = s.split_whitespace().collect();
        let idx = |i: usize| toks.get(i).and_then(|t| t.parse::<usize>().ok()).ok_or_else(err);
        let shift = |i: usize| match toks.get(i) {
            Some(&"+") => Ok(Shift::Forward),
            Some(&"-") => Ok(Shift::Backward),
            _ => Err(err()),
        };
        let (mv, arity) = match toks.first().copied() {
            Some("rx") => (Move::RowExchange(idx(1)?), 2),
            Some("cx") => (Move::ColExchange(idx(1)?), 2),
            Some("ds") => (Move::Destabilize { row: idx(1)?, col: idx(2)? }, 3),
            Some("st") => {
                let empty = match toks.get(3).copied() {
                    Some("nw") => Corner::NW,
                    Some("ne") => Corner::NE,
                    Some("sw") => Corner::SW,
                    Some("se") => Corner::SE,
                    _ => return Err(err()),
                };
                (Move::Stabilize { row: idx(1)?, col: idx(2)?, empty }, 4)
            }
            Some("cyr") => (Move::CyclicRow(shift(1)?), 2),
            Some("cyc") => (Move::CyclicCol(shift(1)?), 2),
            _ => return Err(err()),
        };
        if toks.len() != arity {
            return Err(err());
        }
        Ok(mv)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MoveClass {
    Exchange,
    Destabilize,
    Stabilize,
    Cyclic,
}

/// A set of move classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct MoveClasses {
    pub exchange: bool,
    pub destabilize: bool,
    pub stabilize: bool,
    pub cyclic: bool,
}

impl MoveClasses {
    pub const ALL: MoveClasses = MoveClasses { exchange: true, destabilize: true, stabilize: true, cyclic: true };
    /// Moves that never increase complexity.
    pub const MONOTONE: MoveClasses = MoveClasses { exchange: true, destabilize: true, stabilize: false, cyclic: true };

    pub fn only(class: MoveClass) -> MoveClasses {
        let mut c = MoveClasses::default();
        match class {
            MoveClass::Exchange => c.exchange = true,
            MoveClass::Destabilize => c.destabilize = true,
            MoveClass::Stabilize => c.stabilize = true,
            MoveClass::Cyclic => c.cyclic = true,
        }
        c
    }

    pub fn contains(&self, class: MoveClass) -> bool {
        match class {
            MoveClass::Exchange => self.exchange,
            MoveClass::Destabilize => self.destabilize,
            MoveClass::Stabilize => self.stabilize,
            MoveClass::Cyclic => self.cyclic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IllegalReason {
    /// The two arcs' spans interleave.
    Interleaved,
    /// The two arcs share an endpoint row or column.
    SharedEndpoint,
    /// The 2x2 block does not hold exactly three markers.
    BlockMarkers(usize),
    /// The stabilization cell holds no marker.
    EmptyCell,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IllegalReason::Interleaved => f.write_str("arc spans interleave"),
            IllegalReason::SharedEndpoint => f.write_str("arcs share an endpoint"),
            IllegalReason::BlockMarkers(k) => write!(f, "block holds {k} markers, not 3"),
            IllegalReason::EmptyCell => f.write_str("cell holds no marker"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("move `{mv}` out of range for complexity {n}")]
    OutOfRange { mv: Move, n: usize },
    #[error("move `{mv}` is illegal: {reason}")]
    Illegal { mv: Move, reason: IllegalReason },
}

fn span_relation(a: (usize, usize), b: (usize, usize)) -> Result<(), IllegalReason> {
    let (a, b) = if a.0 <= b.0 { (a, b) } else { (b, a) };
    if a.0 == b.0 || a.1 == b.1 || a.1 == b.0 {
        Err(IllegalReason::SharedEndpoint)
    } else if a.1 < b.0 || b.1 < a.1 {
        Ok(())
    } else {
        Err(IllegalReason::Interleaved)
    }
}

fn block_markers(g: &GridDiagram, row: usize, col: usize) -> usize {
    let mut k = 0;
    for r in row..row + 2 {
        for c in col..col + 2 {
            if g.marker_at(r, c).is_some() {
                k += 1;
            }
        }
    }
    k
}

/// Checks a move against a diagram.
pub fn legality(g: &GridDiagram, mv: Move) -> Result<(), MoveError> {
    let n = g.size();
    let in_range = match mv {
        Move::RowExchange(i) | Move::ColExchange(i) => i + 1 < n,
        Move::Destabilize { row, col } => row + 1 < n && col + 1 < n,
        Move::Stabilize { row, col, .. } => row < n && col < n,
        Move::CyclicRow(_) | Move::CyclicCol(_) => true,
    };
    if !in_range {
        return Err(MoveError::OutOfRange { mv, n });
    }
    let verdict = match mv {
        Move::RowExchange(r) => span_relation(g.row_span(r), g.row_span(r + 1)),
        Move::ColExchange(c) => {
            let spans = g.column_spans();
            span_relation(spans[c], spans[c + 1])
        }
        Move::Destabilize { row, col } => match block_markers(g, row, col) {
            3 => Ok(()),
            k => Err(IllegalReason::BlockMarkers(k)),
        },
        Move::Stabilize { row, col, .. } => {
            if g.marker_at(row, col).is_some() {
                Ok(())
            } else {
                Err(IllegalReason::EmptyCell)
            }
        }
        Move::CyclicRow(_) | Move::CyclicCol(_) => Ok(()),
    };
    verdict.map_err(|reason| MoveError::Illegal { mv, reason })
}

pub fn is_legal(g: &GridDiagram, mv: Move) -> bool {
    legality(g, mv).is_ok()
}

/// Applies a legal move.
pub fn apply_move(g: &GridDiagram, mv: Move) -> Result<GridDiagram, MoveError> {
    legality(g, mv)?;
    Ok(apply_unchecked(g, mv))
}

pub(crate) fn apply_unchecked(g: &GridDiagram, mv: Move) -> GridDiagram {
    let n = g.size();
    let mut x = g.x_bytes().to_vec();
    let mut o = g.o_bytes().to_vec();
    match mv {
        Move::RowExchange(r) => {
            x.swap(r, r + 1);
            o.swap(r, r + 1);
        }
        Move::ColExchange(c) => {
            let (a, b) = (c as u8, c as u8 + 1);
            let swap = |v: &mut u8| {
                if *v == a {
                    *v = b
                } else if *v == b {
                    *v = a
                }
            };
            x.iter_mut().for_each(swap);
            o.iter_mut().for_each(swap);
        }
        Move::CyclicRow(Shift::Forward) => {
            x.rotate_left(1);
            o.rotate_left(1);
        }
        Move::CyclicRow(Shift::Backward) => {
            x.rotate_right(1);
            o.rotate_right(1);
        }
        Move::CyclicCol(s) => {
            let n = n as u8;
            let f = |v: &mut u8| {
                *v = match s {
                    Shift::Forward => (*v + n - 1) % n,
                    Shift::Backward => (*v + 1) % n,
                }
            };
            x.iter_mut().for_each(f);
            o.iter_mut().for_each(f);
        }
        Move::Destabilize { row, col } => return destabilize(g, row, col),
        Move::Stabilize { row, col, empty } => return stabilize(g, row, col, empty),
    }
    GridDiagram::from_bytes(x, o)
}

struct Placement {
    x: Vec<u8>,
    o: Vec<u8>,
}

impl Placement {
    fn new(n: usize) -> Self {
        Placement { x: vec![u8::MAX; n], o: vec![u8::MAX; n] }
    }

    fn put(&mut self, row: usize, col: usize, m: Marker) {
        match m {
            Marker::X => self.x[row] = col as u8,
            Marker::O => self.o[row] = col as u8,
        }
    }

    fn finish(self) -> GridDiagram {
        GridDiagram::from_bytes(self.x, self.o)
    }
}

fn markers(g: &GridDiagram) -> impl Iterator<Item = (usize, usize, Marker)> + '_ {
    (0..g.size()).flat_map(move |r| [(r, g.x_col(r), Marker::X), (r, g.o_col(r), Marker::O)])
}

fn destabilize(g: &GridDiagram, row: usize, col: usize) -> GridDiagram {
    let n = g.size();
    let empty = (0..2)
        .flat_map(|dr| (0..2).map(move |dc| (dr, dc)))
        .find(|&(dr, dc)| g.marker_at(row + dr, col + dc).is_none())
        .expect("legal destabilization has an empty corner");
    let row_e = row + empty.0;
    let col_e = col + empty.1;
    // The corner sharing the empty corner's row carries the doubled type.
    let doubled = g.marker_at(row_e, col + 1 - empty.1).unwrap();
    let in_block = |r: usize, c: usize| (row..row + 2).contains(&r) && (col..col + 2).contains(&c);
    let map_row = |r: usize| if r <= row { r } else { r - 1 };
    let map_col = |c: usize| if c <= col { c } else { c - 1 };

    let mut out = Placement::new(n - 1);
    out.put(row, col, doubled);
    for (r, c, m) in markers(g) {
        if in_block(r, c) {
            continue;
        }
        if r == row_e {
            out.put(row, map_col(c), m);
        } else if c == col_e {
            out.put(map_row(r), col, m);
        } else if r != row && r != row + 1 && c != col && c != col + 1 {
            out.put(map_row(r), map_col(c), m);
        }
    }
    out.finish()
}

fn stabilize(g: &GridDiagram, row: usize, col: usize, empty: Corner) -> GridDiagram {
    let n = g.size();
    let kind = g.marker_at(row, col).unwrap();
    let (er, ec) = empty.offset();
    let row_e = row + er;
    let col_e = col + ec;
    let other_row = row + 1 - er;
    let other_col = col + 1 - ec;
    let map_row = |r: usize| if r <= row { r } else { r + 1 };
    let map_col = |c: usize| if c <= col { c } else { c + 1 };

    let mut out = Placement::new(n + 1);
    out.put(row_e, other_col, kind);
    out.put(other_row, col_e, kind);
    out.put(other_row, other_col, kind.opposite());
    for (r, c, m) in markers(g) {
        if r == row && c == col {
            continue;
        }
        if r == row {
            out.put(row_e, map_col(c), m);
        } else if c == col {
            out.put(map_row(r), col_e, m);
        } else {
            out.put(map_row(r), map_col(c), m);
        }
    }
    out.finish()
}

/// Every legal move of the requested classes, ordered by class
/// (exchange, destabilize, stabilize, cyclic) and then by index.
pub fn legal_moves(g: &GridDiagram, classes: MoveClasses) -> Vec<Move> {
    let n = g.size();
    let mut out = Vec::new();
    if classes.exchange {
        for r in 0..n - 1 {
            if span_relation(g.row_span(r), g.row_span(r + 1)).is_ok() {
                out.push(Move::RowExchange(r));
            }
        }
        let spans = g.column_spans();
        for c in 0..n - 1 {
            if span_relation(spans[c], spans[c + 1]).is_ok() {
                out.push(Move::ColExchange(c));
            }
        }
    }
    if classes.destabilize {
        out.extend(destabilizations(g));
    }
    if classes.stabilize {
        for r in 0..n {
            let mut cols = [g.x_col(r), g.o_col(r)];
            cols.sort_unstable();
            for c in cols {
                for empty in Corner::ALL {
                    out.push(Move::Stabilize { row: r, col: c, empty });
                }
            }
        }
    }
    if classes.cyclic {
        out.extend([
            Move::CyclicRow(Shift::Forward),
            Move::CyclicRow(Shift::Backward),
            Move::CyclicCol(Shift::Forward),
            Move::CyclicCol(Shift::Backward),
        ]);
    }
    out
}

/// Legal destabilizations in row-major block order.
pub fn destabilizations(g: &GridDiagram) -> Vec<Move> {
    let n = g.size();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    // A legal block always contains a row with both markers in adjacent columns.
    for r in 0..n {
        let (lo, hi) = g.row_span(r);
        if hi != lo + 1 {
            continue;
        }
        for top in [r.wrapping_sub(1), r] {
            if top < n - 1 && block_markers(g, top, lo) == 3 {
                out.push(Move::Destabilize { row: top, col: lo });
            }
        }
    }
    out.sort_unstable_by_key(|m| match m {
        Move::Destabilize { row, col } => (*row, *col),
        _ => unreachable!(),
    });
    out.dedup();
    out
}

/// The stabilization undoing a destabilization at `(row, col)` of `g`,
/// expressed on the destabilized diagram.
pub fn inverse_stabilization(g: &GridDiagram, row: usize, col: usize) -> Option<Move> {
    if block_markers(g, row, col) != 3 {
        return None;
    }
    let (dr, dc) = (0..2)
        .flat_map(|dr| (0..2).map(move |dc| (dr, dc)))
        .find(|&(dr, dc)| g.marker_at(row + dr, col + dc).is_none())?;
    Some(Move::Stabilize { row, col, empty: Corner::from_offset(dr, dc) })
}

/// Reidemeister moves attributed to one grid move.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ReidemeisterCost {
    pub r1: u32,
    pub r2: u32,
    pub r3: u32,
    pub crossing_delta: i64,
    /// Cyclic translations are not covered by the cost model.
    pub unmodeled: bool,
    /// Set when a destabilization removes more than one crossing.
    pub flagged: bool,
}

impl ReidemeisterCost {
    pub fn total(&self) -> u64 {
        (self.r1 + self.r2 + self.r3) as u64
    }
}

/// Number of vertical arcs crossing both rows `r` and `r + 1` (or, for a
/// column exchange, horizontal arcs crossing both columns).
fn shared_transversals(g: &GridDiagram, mv: Move) -> u32 {
    let crossings = g.crossings();
    match mv {
        Move::RowExchange(r) => {
            let upper: Vec<usize> = crossings.iter().filter(|c| c.0 == r).map(|c| c.1).collect();
            crossings.iter().filter(|c| c.0 == r + 1 && upper.contains(&c.1)).count() as u32
        }
        Move::ColExchange(c) => {
            let left: Vec<usize> = crossings.iter().filter(|x| x.1 == c).map(|x| x.0).collect();
            crossings.iter().filter(|x| x.1 == c + 1 && left.contains(&x.0)).count() as u32
        }
        _ => 0,
    }
}

pub fn reidemeister_cost(g: &GridDiagram, mv: Move) -> Result<ReidemeisterCost, MoveError> {
    let after = apply_move(g, mv)?;
    Ok(cost_between(g, &after, mv))
}

pub(crate) fn cost_between(before: &GridDiagram, after: &GridDiagram, mv: Move) -> ReidemeisterCost {
    let delta = after.crossing_count() as i64 - before.crossing_count() as i64;
    let mut cost = ReidemeisterCost { crossing_delta: delta, ..Default::default() };
    match mv.class() {
        MoveClass::Exchange => {
            cost.r3 = shared_transversals(before, mv);
            cost.r2 = (delta.abs() == 2) as u32;
        }
        MoveClass::Destabilize => {
            cost.r1 = (delta < 0) as u32;
            cost.flagged = delta < -1;
        }
        MoveClass::Stabilize => cost.r1 = (delta > 0) as u32,
        MoveClass::Cyclic => cost.unmodeled = true,
    }
    cost
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub mv: Move,
    pub cost: ReidemeisterCost,
}

/// Per-move Reidemeister accounting along a sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LedgerTotals {
    pub moves: usize,
    pub crossing_delta: i64,
    pub r1: u64,
    pub r2: u64,
    pub r3: u64,
    pub unmodeled: usize,
    pub flagged: usize,
}

impl LedgerTotals {
    pub fn reidemeister(&self) -> u64 {
        self.r1 + self.r2 + self.r3
    }
}

impl Ledger {
    pub fn totals(&self) -> LedgerTotals {
        let mut t = LedgerTotals { moves: self.entries.len(), ..Default::default() };
        for e in &self.entries {
            t.crossing_delta += e.cost.crossing_delta;
            t.r1 += e.cost.r1 as u64;
            t.r2 += e.cost.r2 as u64;
            t.r3 += e.cost.r3 as u64;
            t.unmodeled += e.cost.unmodeled as usize;
            t.flagged += e.cost.flagged as usize;
        }
        t
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let c = &e.cost;
            write!(f, "{} dcr={:+} r1={} r2={} r3={}", e.mv, c.crossing_delta, c.r1, c.r2, c.r3)?;
            if c.unmodeled {
                write!(f, " unmodeled")?;
            }
            if c.flagged {
                write!(f, " flagged")?;
            }
            writeln!(f)?;
        }
        let t = self.totals();
        writeln!(
            f,
            "total moves={} dcr={:+} r1={} r2={} r3={} unmodeled={} flagged={}",
            t.moves, t.crossing_delta, t.r1, t.r2, t.r3, t.unmodeled, t.flagged
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub diagram: GridDiagram,
    pub ledger: Ledger,
    pub max_crossings: usize,
    pub max_complexity: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("move {index}: {source}")]
pub struct SequenceError {
    pub index: usize,
    #[source]
    pub source: MoveError,
}

pub fn apply_sequence(g: &GridDiagram, seq: &[Move]) -> Result<Replay, SequenceError> {
    let mut cur = g.clone();
    let mut ledger = Ledger::default();
    let mut max_crossings = cur.crossing_count();
    let mut max_complexity = cur.size();
    for (index, &mv) in seq.iter().enumerate() {
        let next = apply_move(&cur, mv).map_err(|source| SequenceError { index, source })?;
        let cost = cost_between(&cur, &next, mv);
        max_crossings = max_crossings.max(next.crossing_count());
        max_complexity = max_complexity.max(next.size());
        ledger.entries.push(LedgerEntry { mv, cost });
        cur = next;
    }
    Ok(Replay { diagram: cur, ledger, max_crossings, max_complexity })
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {source}")]
pub struct MoveFileError {
    pub line: usize,
    #[source]
    pub source: ParseMoveError,
}

/// Parses a move-sequence file, one move per line; `#` comments skipped.
pub fn parse_moves(text: &str) -> Result<Vec<Move>, MoveFileError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| l.trim().parse().map_err(|source| MoveFileError { line: i + 1, source }))
        .collect()
}

pub fn serialize_moves(seq: &[Move]) -> String {
    seq.iter().map(|m| format!("{m}\n")).collect()
}
