//! Chart rendering for pages: a labeled text grid or an SVG drawing with
//! differential arrows.

use specseq::indexing::Convention;
use specseq::pages::{Page, PageIndex};
use std::collections::BTreeMap;
use std::fmt::Write as _;

fn compact_label(m: &specseq::FgModule) -> String {
    m.to_string().replace(' ', "")
}

struct Layout {
    cells: BTreeMap<(i64, i64), String>,
    arrows: Vec<((i64, i64), (i64, i64), usize)>,
    s_range: (i64, i64),
    t_range: (i64, i64),
}

fn layout(page: &Page, convention: Convention) -> Option<Layout> {
    if page.terms.is_empty() {
        return None;
    }
    let mut cells = BTreeMap::new();
    let mut arrows = Vec::new();
    for (&(s, t), term) in &page.terms {
        let pos = convention.from_internal(s, t);
        cells.insert(pos, compact_label(term.module()));
        if let (PageIndex::R(r), Some(d)) = (page.index, &term.differential) {
            if !d.is_zero() {
                let target = convention.from_internal(s - r as i64, t + r as i64 - 1);
                arrows.push((pos, target, d.cols().max(d.rows())));
            }
        }
    }
    let s_lo = cells.keys().map(|k| k.0).min().unwrap();
    let s_hi = cells.keys().map(|k| k.0).max().unwrap();
    let t_lo = cells.keys().map(|k| k.1).min().unwrap();
    let t_hi = cells.keys().map(|k| k.1).max().unwrap();
    // Arrow endpoints may stick out of the nonzero support.
    let (s_lo, s_hi, t_lo, t_hi) = arrows.iter().fold((s_lo, s_hi, t_lo, t_hi), |acc, a| {
        (acc.0.min(a.1 .0), acc.1.max(a.1 .0), acc.2.min(a.1 .1), acc.3.max(a.1 .1))
    });
    Some(Layout { cells, arrows, s_range: (s_lo, s_hi), t_range: (t_lo, t_hi) })
}

/// Text chart: rows are `t` descending, columns `s` ascending; zero terms
/// print as dots; arrows are listed below the grid.
pub fn render_ascii(page: &Page, convention: Convention) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "E^{} page ({})", page.index, convention.name());
    let Some(l) = layout(page, convention) else {
        let _ = writeln!(out, "  (empty)");
        return out;
    };
    let (s_lo, s_hi) = l.s_range;
    let (t_lo, t_hi) = l.t_range;
    let width = (s_lo..=s_hi)
        .map(|s| {
            (t_lo..=t_hi)
                .filter_map(|t| l.cells.get(&(s, t)).map(String::len))
                .max()
                .unwrap_or(1)
                .max(format!("{s}").len())
        })
        .max()
        .unwrap_or(1)
        .max(2);
    let t_label_width = format!("{}", t_lo.min(t_hi)).len().max(format!("{t_hi}").len()).max(2);
    for t in (t_lo..=t_hi).rev() {
        let _ = write!(out, "{t:>t_label_width$} |");
        for s in s_lo..=s_hi {
            let label = l.cells.get(&(s, t)).cloned().unwrap_or_else(|| ".".into());
            let _ = write!(out, " {label:^width$}");
        }
        let _ = writeln!(out);
    }
    let _ = write!(out, "{:>t_label_width$} +", "");
    for _ in s_lo..=s_hi {
        let _ = write!(out, "-{}", "-".repeat(width));
    }
    let _ = writeln!(out);
    let _ = write!(out, "{:>t_label_width$}  ", "");
    for s in s_lo..=s_hi {
        let _ = write!(out, " {s:^width$}");
    }
    let _ = writeln!(out);
    if let PageIndex::R(r) = page.index {
        if !l.arrows.is_empty() {
            let bidegree = convention.differential_bidegree(r);
            let _ = writeln!(out, "d{r} arrows (bidegree ({}, {})):", bidegree.0, bidegree.1);
            for (from, to, _) in &l.arrows {
                let _ = writeln!(out, "  ({}, {}) -> ({}, {})", from.0, from.1, to.0, to.1);
            }
        }
    }
    out
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG chart with one text node per nonzero term and arrows for nonzero
/// differentials. The output is a single well-formed `<svg>` document.
pub fn render_svg(page: &Page, convention: Convention) -> String {
    const CELL: i64 = 72;
    const PAD: i64 = 48;
    let l = layout(page, convention);
    let (s_range, t_range) = match &l {
        Some(l) => (l.s_range, l.t_range),
        None => ((0, 0), (0, 0)),
    };
    let cols = s_range.1 - s_range.0 + 1;
    let rows = t_range.1 - t_range.0 + 1;
    let width = cols * CELL + 2 * PAD;
    let height = rows * CELL + 2 * PAD;
    let x_of = |s: i64| PAD + (s - s_range.0) * CELL + CELL / 2;
    let y_of = |t: i64| PAD + (t_range.1 - t) * CELL + CELL / 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"  <defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>"#
    );
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" font-size="13">E^{} ({})</text>"#,
        8,
        16,
        page.index,
        escape_xml(&convention.name())
    );
    // Grid lines.
    for i in 0..=cols {
        let x = PAD + i * CELL;
        let _ = writeln!(
            out,
            r##"  <line x1="{x}" y1="{PAD}" x2="{x}" y2="{}" stroke="#ccc"/>"##,
            PAD + rows * CELL
        );
    }
    for i in 0..=rows {
        let y = PAD + i * CELL;
        let _ = writeln!(
            out,
            r##"  <line x1="{PAD}" y1="{y}" x2="{}" y2="{y}" stroke="#ccc"/>"##,
            PAD + cols * CELL
        );
    }
    // Axis labels.
    for s in s_range.0..=s_range.1 {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="11" text-anchor="middle">{s}</text>"#,
            x_of(s),
            PAD + rows * CELL + 18
        );
    }
    for t in t_range.0..=t_range.1 {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="11" text-anchor="end">{t}</text>"#,
            PAD - 8,
            y_of(t) + 4
        );
    }
    if let Some(l) = &l {
        for (&(s, t), label) in &l.cells {
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
                x_of(s),
                y_of(t) + 4,
                escape_xml(label)
            );
        }
        for (from, to, _) in &l.arrows {
            let _ = writeln!(
                out,
                r##"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333" marker-end="url(#arrow)"/>"##,
                x_of(from.0) + 10,
                y_of(from.1) - 6,
                x_of(to.0) - 10,
                y_of(to.1) + 6
            );
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}
