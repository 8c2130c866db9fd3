use std::fmt::Write;

use thiserror::Error;

use crate::comod::{ExtEntry, ExtTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("the Ext table has no nonzero entries")]
    EmptyTable,
}

const CELL: i32 = 48;
const MARGIN: i32 = 48;

/// Group label for a dot: the order for finite groups, Z^r (plus torsion) otherwise.
pub fn group_label(invariants: &[u64]) -> String {
    let free = invariants.iter().filter(|&&d| d == 0).count();
    let torsion: u64 = invariants.iter().filter(|&&d| d != 0).product();
    match (free, torsion) {
        (0, t) => t.to_string(),
        (1, 1) => "Z".into(),
        (f, 1) => format!("Z^{f}"),
        (1, t) => format!("Z+{t}"),
        (f, t) => format!("Z^{f}+{t}"),
    }
}

/// A chart with one dot per nonzero Ext^{s,t}: x = t − s (ticks labeled 2(t − s)), y = s.
pub fn emit_chart(table: &ExtTable) -> Result<String, ChartError> {
    let mut dots: Vec<&ExtEntry> = table.entries.iter().filter(|e| !e.invariants.is_empty()).collect();
    if dots.is_empty() {
        return Err(ChartError::EmptyTable);
    }
    dots.sort_by_key(|e| (e.s, e.t));
    let stem = |e: &ExtEntry| e.t - e.s as i32;
    let x_min = dots.iter().map(|e| stem(e)).min().unwrap_or(0).min(0);
    let x_max = dots.iter().map(|e| stem(e)).max().unwrap_or(0);
    let s_max = dots.iter().map(|e| e.s as i32).max().unwrap_or(0);
    let width = (x_max - x_min + 1) * CELL + 2 * MARGIN;
    let height = (s_max + 1) * CELL + 2 * MARGIN;
    let px = |x: i32| MARGIN + (x - x_min) * CELL + CELL / 2;
    let py = |s: i32| height - MARGIN - s * CELL - CELL / 2;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">"#);
    let title = table.p.map_or("Ext".to_string(), |p| format!("Ext at p = {p}"));
    let _ = writeln!(out, r#"<title>{title}</title>"#);
    let axis_y = height - MARGIN;
    let _ = writeln!(out, r#"<line x1="{MARGIN}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#, width - MARGIN);
    let _ = writeln!(out, r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{axis_y}" stroke="black"/>"#);
    for x in x_min..=x_max {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, px(x), axis_y + 16, 2 * x);
    }
    for s in 0..=s_max {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{s}</text>"#, MARGIN - 6, py(s) + 4);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">2(t-s)</text>"#, width / 2, height - 8);
    let _ = writeln!(out, r#"<text x="12" y="{}" text-anchor="middle">s</text>"#, height / 2);
    for e in dots {
        let (x, y) = (px(stem(e)), py(e.s as i32));
        let label = group_label(&e.invariants);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="4" fill="black"><title>Ext^({},{}) = {label}</title></circle>"#, e.s, e.t);
        let _ = writeln!(out, r#"<text x="{}" y="{}">{label}</text>"#, x + 6, y - 6);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: Vec<ExtEntry>) -> ExtTable {
        ExtTable { p: Some(3), grading: "algebraic".into(), entries }
    }

    #[test]
    fn charts() {
        let one = table(vec![ExtEntry { s: 1, t: 2, invariants: vec![3] }]);
        let svg = emit_chart(&one).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(">3</text>"));
        assert_eq!(svg, emit_chart(&one).unwrap());
        let zeros = table(vec![ExtEntry { s: 0, t: 1, invariants: vec![] }]);
        assert_eq!(emit_chart(&zeros), Err(ChartError::EmptyTable));
        assert_eq!(emit_chart(&table(vec![])), Err(ChartError::EmptyTable));
        assert_eq!(group_label(&[0]), "Z");
        assert_eq!(group_label(&[3, 3]), "9");
    }
}
