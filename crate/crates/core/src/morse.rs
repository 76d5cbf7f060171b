//! Morse-form diagrams as event words, and their conversion to grids.
//!
//! Events are listed from the bottom of the diagram upwards. Positions count
//! the strands alive at that height from the left, starting at zero. A cup
//! opens two strands at `p, p + 1`, a cap closes them, and a crossing swaps
//! strands `p` and `p + 1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::grid::GridDiagram;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MorseEvent {
    Cup(usize),
    Cap(usize),
    /// Strand `p` passes over strand `p + 1`.
    CrossOver(usize),
    /// Strand `p` passes under strand `p + 1`.
    CrossUnder(usize),
}

impl fmt::Display for MorseEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseEvent::Cup(p) => write!(f, "cup {p}"),
            MorseEvent::Cap(p) => write!(f, "cap {p}"),
            MorseEvent::CrossOver(p) => write!(f, "xo {p}"),
            MorseEvent::CrossUnder(p) => write!(f, "xu {p}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("event {index} (`{event}`): position out of range for {strands} live strands")]
    Position { index: usize, event: MorseEvent, strands: usize },
    #[error("word ends with {0} live strands")]
    Unclosed(usize),
    #[error("word has no events")]
    Empty,
}

/// A validated Morse word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MorseWord {
    events: Vec<MorseEvent>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MorseStats {
    /// Number of maxima.
    pub b: usize,
    /// Number of crossings.
    pub cr: usize,
    /// `2b + cr`.
    pub m: usize,
}

impl fmt::Display for MorseStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b={} cr={} M={}", self.b, self.cr, self.m)
    }
}

impl MorseWord {
    pub fn new(events: Vec<MorseEvent>) -> Result<Self, MorseError> {
        if events.is_empty() {
            return Err(MorseError::Empty);
        }
        let mut strands = 0usize;
        for (index, &event) in events.iter().enumerate() {
            let ok = match event {
                MorseEvent::Cup(p) => p <= strands,
                MorseEvent::Cap(p) | MorseEvent::CrossOver(p) | MorseEvent::CrossUnder(p) => p + 2 <= strands,
            };
            if !ok {
                return Err(MorseError::Position { index, event, strands });
            }
            match event {
                MorseEvent::Cup(_) => strands += 2,
                MorseEvent::Cap(_) => strands -= 2,
                _ => {}
            }
        }
        if strands != 0 {
            return Err(MorseError::Unclosed(strands));
        }
        Ok(MorseWord { events })
    }

    pub fn events(&self) -> &[MorseEvent] {
        &self.events
    }

    pub fn stats(&self) -> MorseStats {
        let b = self.events.iter().filter(|e| matches!(e, MorseEvent::Cap(_))).count();
        let cr = self
            .events
            .iter()
            .filter(|e| matches!(e, MorseEvent::CrossOver(_) | MorseEvent::CrossUnder(_)))
            .count();
        MorseStats { b, cr, m: 2 * b + cr }
    }

    /// Components of the closed diagram, counted from the cup/cap pairing
    /// with crossings acting as transpositions of strand positions.
    pub fn component_count(&self) -> usize {
        // Each cup creates a strand pair; union-find over strand identities.
        let mut parent: Vec<usize> = Vec::new();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut live: Vec<usize> = Vec::new();
        for &e in &self.events {
            match e {
                MorseEvent::Cup(p) => {
                    let id = parent.len();
                    parent.push(id);
                    live.insert(p, id);
                    live.insert(p + 1, id);
                }
                MorseEvent::Cap(p) => {
                    let a = find(&mut parent, live[p]);
                    let b = find(&mut parent, live[p + 1]);
                    parent[a] = b;
                    live.drain(p..p + 2);
                }
                MorseEvent::CrossOver(p) | MorseEvent::CrossUnder(p) => live.swap(p, p + 1),
            }
        }
        (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
    }
}

impl fmt::Display for MorseWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

pub fn parse_morse(text: &str) -> Result<MorseWord, MorseError> {
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| MorseError::Syntax { line: i + 1, message };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(format!("expected `<event> <position>`, found `{line}`")));
        }
        let p: usize = toks[1].parse().map_err(|_| syntax(format!("bad position `{}`", toks[1])))?;
        events.push(match toks[0] {
            "cup" => MorseEvent::Cup(p),
            "cap" => MorseEvent::Cap(p),
            "xo" => MorseEvent::CrossOver(p),
            "xu" => MorseEvent::CrossUnder(p),
            other => return Err(syntax(format!("unknown event `{other}`"))),
        });
    }
    MorseWord::new(events)
}

impl FromStr for MorseWord {
    type Err = MorseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_morse(s)
    }
}

pub fn morse_stats(w: &MorseWord) -> MorseStats {
    w.stats()
}

/// Builds an arc-presentation of complexity exactly `2b + cr`.
///
/// Every event gets its own row, the first event at the bottom. Cups open
/// two fresh adjacent columns, caps join their two columns, and at each
/// crossing the over strand keeps its column while the under strand jogs
/// horizontally to a fresh column placed just beyond the over strand. The
/// jog is the only arc meeting the over strand at that height, so each
/// crossing of the word becomes exactly one grid crossing.
pub fn morse_to_grid(w: &MorseWord) -> GridDiagram {
    let events = w.events();
    let n = events.len();
    // Columns are identified by creation order; `order` lists them left to right.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut live: Vec<usize> = Vec::new();
    let mut next_id = 0usize;
    // Two corner columns per row, by column id.
    let mut rows: Vec<[usize; 2]> = vec![[0, 0]; n];

    let position = |order: &[usize], id: usize| order.iter().position(|&c| c == id).unwrap();

    for (i, &event) in events.iter().enumerate() {
        let row = n - 1 - i;
        match event {
            MorseEvent::Cup(p) => {
                let at = if p > 0 {
                    position(&order, live[p - 1]) + 1
                } else if let Some(&first) = live.first() {
                    position(&order, first)
                } else {
                    order.len()
                };
                let (a, b) = (next_id, next_id + 1);
                next_id += 2;
                order.insert(at, b);
                order.insert(at, a);
                live.insert(p, b);
                live.insert(p, a);
                rows[row] = [a, b];
            }
            MorseEvent::Cap(p) => {
                rows[row] = [live[p], live[p + 1]];
                live.drain(p..p + 2);
            }
            MorseEvent::CrossOver(p) => {
                let (over, under) = (live[p], live[p + 1]);
                let fresh = next_id;
                next_id += 1;
                order.insert(position(&order, over), fresh);
                live[p] = fresh;
                live[p + 1] = over;
                rows[row] = [under, fresh];
            }
            MorseEvent::CrossUnder(p) => {
                let (under, over) = (live[p], live[p + 1]);
                let fresh = next_id;
                next_id += 1;
                order.insert(position(&order, over) + 1, fresh);
                live[p] = over;
                live[p + 1] = fresh;
                rows[row] = [under, fresh];
            }
        }
    }

    let mut col_of = vec![0usize; next_id];
    for (pos, &id) in order.iter().enumerate() {
        col_of[id] = pos;
    }
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
    let corners: Vec<[usize; 2]> = rows.iter().map(|r| [col_of[r[0]], col_of[r[1]]]).collect();
    for (r, pair) in corners.iter().enumerate() {
        col_rows[pair[0]].push(r);
        col_rows[pair[1]].push(r);
    }

    // Orient each component: walk rows X -> O, then down the O's column.
    let mut x = vec![usize::MAX; n];
    let mut o = vec![usize::MAX; n];
    for start in 0..n {
        if x[start] != usize::MAX {
            continue;
        }
        let mut r = start;
        let mut x_col = corners[r][0].min(corners[r][1]);
        while x[r] == usize::MAX {
            let pair = corners[r];
            let o_col = if pair[0] == x_col { pair[1] } else { pair[0] };
            x[r] = x_col;
            o[r] = o_col;
            let rs = &col_rows[o_col];
            r = if rs[0] == r { rs[1] } else { rs[0] };
            x_col = o_col;
        }
    }
    GridDiagram::new(x, o).expect("jog construction yields a valid grid")
}
