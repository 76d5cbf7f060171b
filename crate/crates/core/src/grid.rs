//! Arc-presentations stored as grid diagrams.
//!
//! A diagram of complexity `n` has one X and one O marker in every row and
//! every column. Row `r` carries a horizontal arc between its two markers and
//! column `c` a vertical arc between its two markers; wherever the two kinds
//! of arcs meet transversally the vertical arc passes over. Rows are indexed
//! top to bottom, columns left to right, both from zero.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest complexity representable (columns are stored as bytes).
pub const MAX_SIZE: usize = 255;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Marker {
    X,
    O,
}

impl Marker {
    pub fn opposite(self) -> Marker {
        match self {
            Marker::X => Marker::O,
            Marker::O => Marker::X,
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::X => "X",
            Marker::O => "O",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    TooSmall { n: usize },
    TooLarge { n: usize },
    LengthMismatch { marker: Marker, expected: usize, found: usize },
    ColumnOutOfRange { marker: Marker, row: usize, col: usize },
    NotPermutation { marker: Marker, missing: Vec<usize> },
    MarkerCollision { row: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooSmall { n } => write!(f, "complexity {n} is below 2"),
            Violation::TooLarge { n } => write!(f, "complexity {n} exceeds {MAX_SIZE}"),
            Violation::LengthMismatch { marker, expected, found } => {
                write!(f, "{marker} row has {found} entries, expected {expected}")
            }
            Violation::ColumnOutOfRange { marker, row, col } => {
                write!(f, "{marker} marker in row {row} has column {col} out of range")
            }
            Violation::NotPermutation { marker, missing } => {
                write!(f, "{marker} columns are not a permutation (missing {missing:?})")
            }
            Violation::MarkerCollision { row } => {
                write!(f, "X and O share a cell in row {row}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid grid: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("connected sum needs {0}")]
    CornerPrecondition(&'static str),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks the grid invariants for raw column sequences.
pub fn validate(x_cols: &[usize], o_cols: &[usize]) -> Vec<Violation> {
    let n = x_cols.len();
    let mut out = Vec::new();
    if n < 2 {
        out.push(Violation::TooSmall { n });
    }
    if n > MAX_SIZE {
        out.push(Violation::TooLarge { n });
    }
    if o_cols.len() != n {
        out.push(Violation::LengthMismatch { marker: Marker::O, expected: n, found: o_cols.len() });
        return out;
    }
    for (marker, cols) in [(Marker::X, x_cols), (Marker::O, o_cols)] {
        let mut seen = vec![false; n];
        for (row, &col) in cols.iter().enumerate() {
            if col >= n {
                out.push(Violation::ColumnOutOfRange { marker, row, col });
            } else {
                seen[col] = true;
            }
        }
        let missing: Vec<usize> = (0..n).filter(|&c| !seen[c]).collect();
        if !missing.is_empty() {
            out.push(Violation::NotPermutation { marker, missing });
        }
    }
    for row in 0..n {
        if x_cols[row] == o_cols[row] {
            out.push(Violation::MarkerCollision { row });
        }
    }
    out
}

/// An arc-presentation. Immutable once constructed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GridDiagram {
    x: Box<[u8]>,
    o: Box<[u8]>,
}

impl GridDiagram {
    pub fn new(x_cols: Vec<usize>, o_cols: Vec<usize>) -> Result<Self, GridError> {
        let violations = validate(&x_cols, &o_cols);
        if !violations.is_empty() {
            return Err(GridError::Invalid(violations));
        }
        Ok(Self::from_bytes(
            x_cols.iter().map(|&c| c as u8).collect(),
            o_cols.iter().map(|&c| c as u8).collect(),
        ))
    }

    /// The complexity-2 diagram of the unknot.
    pub fn trivial() -> Self {
        Self::from_bytes(vec![0, 1], vec![1, 0])
    }

    pub(crate) fn from_bytes(x: Vec<u8>, o: Vec<u8>) -> Self {
        debug_assert!(validate(
            &x.iter().map(|&c| c as usize).collect::<Vec<_>>(),
            &o.iter().map(|&c| c as usize).collect::<Vec<_>>()
        )
        .is_empty());
        Self { x: x.into_boxed_slice(), o: o.into_boxed_slice() }
    }

    pub(crate) fn x_bytes(&self) -> &[u8] {
        &self.x
    }

    pub(crate) fn o_bytes(&self) -> &[u8] {
        &self.o
    }

    pub fn size(&self) -> usize {
        self.x.len()
    }

    pub fn x_col(&self, row: usize) -> usize {
        self.x[row] as usize
    }

    pub fn o_col(&self, row: usize) -> usize {
        self.o[row] as usize
    }

    pub fn x_cols(&self) -> Vec<usize> {
        self.x.iter().map(|&c| c as usize).collect()
    }

    pub fn o_cols(&self) -> Vec<usize> {
        self.o.iter().map(|&c| c as usize).collect()
    }

    pub fn marker_at(&self, row: usize, col: usize) -> Option<Marker> {
        if self.x[row] as usize == col {
            Some(Marker::X)
        } else if self.o[row] as usize == col {
            Some(Marker::O)
        } else {
            None
        }
    }

    /// Column span `(left, right)` of the horizontal arc in `row`.
    pub fn row_span(&self, row: usize) -> (usize, usize) {
        let (a, b) = (self.x[row] as usize, self.o[row] as usize);
        (a.min(b), a.max(b))
    }

    /// Row of the X marker and row of the O marker in each column.
    pub fn column_rows(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.size();
        let mut xr = vec![0; n];
        let mut or = vec![0; n];
        for r in 0..n {
            xr[self.x[r] as usize] = r;
            or[self.o[r] as usize] = r;
        }
        (xr, or)
    }

    /// Row span `(top, bottom)` of every vertical arc.
    pub fn column_spans(&self) -> Vec<(usize, usize)> {
        let (xr, or) = self.column_rows();
        xr.iter().zip(&or).map(|(&a, &b)| (a.min(b), a.max(b))).collect()
    }

    /// All crossings as `(row, col)` cells, row-major.
    pub fn crossings(&self) -> Vec<(usize, usize)> {
        let spans = self.column_spans();
        let mut out = Vec::new();
        for r in 0..self.size() {
            let (lo, hi) = self.row_span(r);
            for (c, &(top, bottom)) in spans.iter().enumerate().take(hi).skip(lo + 1) {
                if top < r && r < bottom {
                    out.push((r, c));
                }
            }
        }
        out
    }

    pub fn crossing_count(&self) -> usize {
        let spans = self.column_spans();
        let mut count = 0;
        for r in 0..self.size() {
            let (lo, hi) = self.row_span(r);
            count += spans[lo + 1..hi].iter().filter(|&&(top, bottom)| top < r && r < bottom).count();
        }
        count
    }

    pub fn component_count(&self) -> usize {
        let n = self.size();
        let (xr, _) = self.column_rows();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut r = start;
            while !seen[r] {
                seen[r] = true;
                r = xr[self.o[r] as usize];
            }
        }
        cycles
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 2
    }

    /// Reverses the orientation of every component.
    pub fn swap_xo(&self) -> Self {
        Self { x: self.o.clone(), o: self.x.clone() }
    }

    pub fn unoriented_key(&self) -> UnorientedKey {
        let mut pairs = Vec::with_capacity(2 * self.size());
        for (&a, &b) in self.x.iter().zip(self.o.iter()) {
            pairs.push(a.min(b));
            pairs.push(a.max(b));
        }
        UnorientedKey(pairs.into_boxed_slice())
    }

    /// Rebuilds an oriented diagram from its key. Each component is oriented
    /// so that its topmost row carries X on the left.
    pub fn from_key(key: &UnorientedKey) -> Self {
        let n = key.size();
        let pairs = &key.0;
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
        for r in 0..n {
            col_rows[pairs[2 * r] as usize].push(r);
            col_rows[pairs[2 * r + 1] as usize].push(r);
        }
        let mut x = vec![u8::MAX; n];
        let mut o = vec![u8::MAX; n];
        for start in 0..n {
            if x[start] != u8::MAX {
                continue;
            }
            let mut r = start;
            let mut x_col = pairs[2 * r];
            while x[r] == u8::MAX {
                let o_col = if pairs[2 * r] == x_col { pairs[2 * r + 1] } else { pairs[2 * r] };
                x[r] = x_col;
                o[r] = o_col;
                let rows = &col_rows[o_col as usize];
                r = if rows[0] == r { rows[1] } else { rows[0] };
                x_col = o_col;
            }
        }
        Self::from_bytes(x, o)
    }

    /// Arcs crossing each gap between adjacent columns (`h`) and rows (`v`).
    fn cut_counts(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.size();
        let mut h = vec![0usize; n];
        for r in 0..n {
            let (lo, hi) = self.row_span(r);
            h[lo..hi].iter_mut().for_each(|k| *k += 1);
        }
        let mut v = vec![0usize; n];
        for (top, bottom) in self.column_spans() {
            v[top..bottom].iter_mut().for_each(|k| *k += 1);
        }
        (h, v)
    }

    /// A separating grid line crossed by no arc, if any.
    pub fn is_split_form(&self) -> Option<GridLine> {
        let n = self.size();
        let (h_cut, v_cut) = self.cut_counts();
        if let Some(k) = (0..n - 1).find(|&k| h_cut[k] == 0) {
            return Some(GridLine::Vertical(k));
        }
        (0..n - 1).find(|&k| v_cut[k] == 0).map(GridLine::Horizontal)
    }

    /// A grid line met by exactly two arcs with at least one crossing on
    /// each side, if any.
    pub fn is_composite_form(&self) -> Option<Decomposition> {
        let n = self.size();
        let crossings = self.crossings();
        let (h_cut, v_cut) = self.cut_counts();
        let split = |line: GridLine, before: usize| {
            let after = crossings.len() - before;
            (before > 0 && after > 0).then_some(Decomposition { line, before, after })
        };
        let vertical = (0..n - 1).filter(|&k| h_cut[k] == 2).find_map(|k| {
            split(GridLine::Vertical(k), crossings.iter().filter(|&&(_, c)| c <= k).count())
        });
        vertical.or_else(|| {
            (0..n - 1).filter(|&k| v_cut[k] == 2).find_map(|k| {
                split(GridLine::Horizontal(k), crossings.iter().filter(|&&(r, _)| r <= k).count())
            })
        })
    }

    /// Places `other` block-diagonally below and to the right of `self`.
    pub fn disjoint_union(&self, other: &GridDiagram) -> Result<GridDiagram, GridError> {
        let n1 = self.size();
        let x = self.x_cols().into_iter().chain(other.x_cols().into_iter().map(|c| c + n1)).collect();
        let o = self.o_cols().into_iter().chain(other.o_cols().into_iter().map(|c| c + n1)).collect();
        GridDiagram::new(x, o)
    }

    /// Connected sum through the bottom-right corner of `self` and the
    /// top-left corner of `other`.
    ///
    /// `self` must carry an X at `(n1-1, n1-1)` and `other` a marker at
    /// `(0, 0)`. If that marker is an X, `other` is used with reversed
    /// orientation so the merged row and column get one marker of each kind.
    pub fn connect_sum(&self, other: &GridDiagram) -> Result<GridDiagram, GridError> {
        let n1 = self.size();
        if self.marker_at(n1 - 1, n1 - 1) != Some(Marker::X) {
            return Err(GridError::CornerPrecondition("an X marker at the bottom-right corner of the first diagram"));
        }
        let other = match other.marker_at(0, 0) {
            Some(Marker::O) => other.clone(),
            Some(Marker::X) => other.swap_xo(),
            None => {
                return Err(GridError::CornerPrecondition("a marker at the top-left corner of the second diagram"))
            }
        };
        let n2 = other.size();
        let off = n1 - 1;
        let n = n1 + n2 - 1;
        let mut x = vec![usize::MAX; n];
        let mut o = vec![usize::MAX; n];
        for r in 0..n1 {
            if r != n1 - 1 {
                x[r] = self.x_col(r);
            }
            o[r] = self.o_col(r);
        }
        for r in 0..n2 {
            if r != 0 {
                o[r + off] = other.o_col(r) + off;
            }
            x[r + off] = other.x_col(r) + off;
        }
        GridDiagram::new(x, o)
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid {}", self.size())?;
        write!(f, "X")?;
        for c in self.x.iter() {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        write!(f, "O")?;
        for c in self.o.iter() {
            write!(f, " {c}")?;
        }
        writeln!(f)
    }
}

pub fn serialize_grid(g: &GridDiagram) -> String {
    g.to_string()
}

/// Single-line form used in certificate headers: `grid n / X ... / O ...`.
pub fn inline_grid(g: &GridDiagram) -> String {
    g.to_string().trim_end().replace('\n', " / ")
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GridError {
    GridError::Syntax { line, column, message: message.into() }
}

/// Parses the three-line grid format. Blank lines and `#` comments are skipped.
pub fn parse_grid(text: &str) -> Result<GridDiagram, GridError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let mut next = |what: &str| {
        lines.next().ok_or_else(|| syntax(text.lines().count().max(1), 1, format!("missing {what} line")))
    };

    let (ln, header) = next("header")?;
    let tokens = tokens(header);
    if tokens.len() != 2 || tokens[0].1 != "grid" {
        return Err(syntax(ln, 1, "expected `grid <n>`"));
    }
    let n = parse_index(ln, tokens[1])?;

    let (lx, xl) = next("X")?;
    let x = parse_row(lx, xl, "X", n)?;
    let (lo, ol) = next("O")?;
    let o = parse_row(lo, ol, "O", n)?;
    if let Some((ln, _)) = lines.next() {
        return Err(syntax(ln, 1, "unexpected content after O line"));
    }
    GridDiagram::new(x, o)
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_index(line: usize, (col, tok): (usize, &str)) -> Result<usize, GridError> {
    tok.parse::<usize>().map_err(|_| syntax(line, col, format!("expected a non-negative integer, found `{tok}`")))
}

fn parse_row(line: usize, text: &str, tag: &str, n: usize) -> Result<Vec<usize>, GridError> {
    let toks = tokens(text);
    if toks.first().map(|t| t.1) != Some(tag) {
        return Err(syntax(line, 1, format!("expected line starting with `{tag}`")));
    }
    if toks.len() != n + 1 {
        let col = toks.get(n + 1).map(|t| t.0).unwrap_or(text.len() + 1);
        return Err(syntax(line, col, format!("expected {n} columns, found {}", toks.len() - 1)));
    }
    toks[1..].iter().map(|&t| parse_index(line, t)).collect()
}

impl FromStr for GridDiagram {
    type Err = GridError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grid(s)
    }
}

/// Canonical form of an unoriented arc-presentation: the sorted column pair
/// of every row. Two diagrams share a key iff they are combinatorially
/// equivalent as unoriented drawings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UnorientedKey(Box<[u8]>);

impl UnorientedKey {
    pub fn size(&self) -> usize {
        self.0.len() / 2
    }

    pub fn row_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.chunks_exact(2).map(|p| (p[0] as usize, p[1] as usize))
    }
}

impl fmt::Display for UnorientedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.size())?;
        for (i, (a, b)) in self.row_pairs().enumerate() {
            write!(f, "{}{a}-{b}", if i == 0 { "" } else { "," })?;
        }
        Ok(())
    }
}

/// A line between two adjacent grid rows or columns.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GridLine {
    /// Between columns `k` and `k + 1`.
    Vertical(usize),
    /// Between rows `k` and `k + 1`.
    Horizontal(usize),
}

impl fmt::Display for GridLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridLine::Vertical(k) => write!(f, "vertical line between columns {} and {}", k, k + 1),
            GridLine::Horizontal(k) => write!(f, "horizontal line between rows {} and {}", k, k + 1),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub line: GridLine,
    /// Crossings left of (or above) the line.
    pub before: usize,
    pub after: usize,
}
