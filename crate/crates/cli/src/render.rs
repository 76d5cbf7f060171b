//! Text and SVG drawings of grid diagrams. Vertical arcs are always drawn on
//! top; horizontal arcs are broken where they pass underneath.

use std::fmt::Write;

use arcgrid::{GridDiagram, Marker};

/// `(2n - 1)`-square character raster. Grid cell `(r, c)` sits at raster
/// position `(2r, 2c)`; row 0 is the top line.
pub fn render_ascii(g: &GridDiagram) -> String {
    let n = g.size();
    let w = 2 * n - 1;
    let mut cells = vec![vec![' '; w]; w];
    for r in 0..n {
        let (a, b) = g.row_span(r);
        cells[2 * r][2 * a + 1..2 * b].fill('-');
    }
    for (c, &(top, bottom)) in g.column_spans().iter().enumerate() {
        for row in cells.iter_mut().take(2 * bottom).skip(2 * top + 1) {
            row[2 * c] = '|';
        }
    }
    for r in 0..n {
        cells[2 * r][2 * g.x_col(r)] = 'x';
        cells[2 * r][2 * g.o_col(r)] = 'o';
    }
    let mut out = String::with_capacity(w * (w + 1));
    for row in cells {
        out.extend(row);
        out.push('\n');
    }
    out
}

const CELL: usize = 20;
const GAP: usize = 4;

/// Standalone SVG document: one `path` per arc, markers drawn on top.
pub fn render_svg(g: &GridDiagram) -> String {
    let n = g.size();
    let side = CELL * (n + 1);
    let at = |i: usize| CELL * (i + 1);
    let crossings = g.crossings();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(s, r#"<rect width="{side}" height="{side}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="2" fill="none">"#);
    for r in 0..n {
        let (a, b) = g.row_span(r);
        let y = at(r);
        let mut d = format!("M{} {y}", at(a));
        for &(_, c) in crossings.iter().filter(|&&(cr, _)| cr == r) {
            let _ = write!(d, " H{} M{} {y}", at(c) - GAP, at(c) + GAP);
        }
        let _ = write!(d, " H{}", at(b));
        let _ = writeln!(s, r#"<path class="row" d="{d}"/>"#);
    }
    for (c, &(top, bottom)) in g.column_spans().iter().enumerate() {
        let x = at(c);
        let _ = writeln!(s, r#"<path class="col" d="M{x} {} V{}"/>"#, at(top), at(bottom));
    }
    let _ = writeln!(s, "</g>");
    for r in 0..n {
        for (col, m) in [(g.x_col(r), Marker::X), (g.o_col(r), Marker::O)] {
            let (x, y) = (at(col), at(r));
            let h = CELL / 4;
            match m {
                Marker::X => {
                    let _ = writeln!(
                        s,
                        r#"<path class="x" d="M{} {} L{} {} M{} {} L{} {}" stroke="black" stroke-width="2"/>"#,
                        x - h, y - h, x + h, y + h, x - h, y + h, x + h, y - h
                    );
                }
                Marker::O => {
                    let _ = writeln!(
                        s,
                        r#"<circle class="o" cx="{x}" cy="{y}" r="{h}" fill="white" stroke="black" stroke-width="2"/>"#
                    );
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
