//! Charts in the (stem, filtration) plane, rendered as SVG or TikZ.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::adams::{computed_region, install_hidden_rho_extensions};
use crate::catalog::Catalog;
use crate::engine::BocksteinRun;
use crate::error::{Error, Result};
use crate::monomial::{module_action, Cone, Element, Generator, Monomial};

pub const DEFAULT_KO_CHART: &str = include_str!("../data/ko_chart.txt");

/// Offset between dots sharing a grid point, in chart units.
pub const FAN_OFFSET: (f64, f64) = (0.18, -0.18);

/// Preamble a TikZ fragment needs when included in a LaTeX document.
pub const TIKZ_PREAMBLE: &str = "\\usepackage{tikz}\n";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartKind {
    E2,
    Einf,
    Ko,
}

impl FromStr for ChartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e2" => Ok(ChartKind::E2),
            "einf" => Ok(ChartKind::Einf),
            "ko" => Ok(ChartKind::Ko),
            other => Err(Error::InvalidArgument(format!(
                "unknown chart kind `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Tikz,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Format::Svg),
            "tikz" => Ok(Format::Tikz),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LineKind {
    Rho,
    H0,
    H1,
    Hidden,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dot {
    pub s: i64,
    pub f: i64,
    /// Position among the dots at `(s, f)`.
    pub slot: usize,
    pub negative: bool,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub kind: LineKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartDocument {
    pub title: String,
    pub stems: (i64, i64),
    pub filtrations: (i64, i64),
    pub dots: Vec<Dot>,
    pub segments: Vec<Segment>,
    /// Dots carrying an infinite h0 tower beyond the top of the chart.
    pub arrows: Vec<usize>,
    /// Region `f ≤ s/2 - 1` clipped to the chart, as a polygon.
    pub shading: Vec<(f64, f64)>,
}

impl ChartDocument {
    pub fn empty(title: &str, stems: (i64, i64), filtrations: (i64, i64)) -> Self {
        let mut doc = ChartDocument {
            title: title.to_string(),
            stems,
            filtrations,
            dots: Vec::new(),
            segments: Vec::new(),
            arrows: Vec::new(),
            shading: Vec::new(),
        };
        doc.shading = shading_polygon(stems, filtrations);
        doc
    }

    /// Position of a dot, fanned out when several share a grid point.
    pub fn position(&self, i: usize) -> (f64, f64) {
        let d = &self.dots[i];
        let n = self
            .dots
            .iter()
            .filter(|e| e.s == d.s && e.f == d.f)
            .count();
        let shift = d.slot as f64 - (n as f64 - 1.0) / 2.0;
        (
            d.s as f64 + shift * FAN_OFFSET.0,
            d.f as f64 + shift * FAN_OFFSET.1,
        )
    }

    /// Dot counts per grid point.
    pub fn census(&self) -> BTreeMap<(i64, i64), usize> {
        self.census_where(|_| true)
    }

    /// Dot counts per grid point strictly above `f = s/2 - 1`.
    pub fn region_census(&self) -> BTreeMap<(i64, i64), usize> {
        self.census_where(|d| 2 * d.f > d.s - 2)
    }

    fn census_where(&self, keep: impl Fn(&Dot) -> bool) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for d in self.dots.iter().filter(|d| keep(d)) {
            *out.entry((d.s, d.f)).or_insert(0) += 1;
        }
        out
    }

    pub fn segments_of(&self, kind: LineKind) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(move |s| s.kind == kind)
    }

    fn push_dot(&mut self, s: i64, f: i64, negative: bool, label: String) -> usize {
        let slot = self.dots.iter().filter(|d| d.s == s && d.f == f).count();
        self.dots.push(Dot {
            s,
            f,
            slot,
            negative,
            label,
        });
        self.dots.len() - 1
    }
}

fn shading_polygon(stems: (i64, i64), filtrations: (i64, i64)) -> Vec<(f64, f64)> {
    let (x0, x1) = (stems.0 as f64, stems.1 as f64);
    let y0 = filtrations.0 as f64;
    let line = |x: f64| x / 2.0 - 1.0;
    let start = (2.0 * (y0 + 1.0)).max(x0);
    if start >= x1 {
        return Vec::new();
    }
    let top = line(x1).min(filtrations.1 as f64);
    let mut pts = vec![(start, y0), (x1, y0), (x1, top)];
    if top < line(x1) {
        pts.push((2.0 * (top + 1.0), top));
    }
    pts
}

/// E₂ or E∞ chart of the coweight-0 region above `f = s/2 - 1`, plus the
/// classes on that line.
pub fn chart_from_page(
    run: &BocksteinRun,
    cat: &Catalog,
    kind: ChartKind,
) -> Result<ChartDocument> {
    let w = run.window;
    let title = match kind {
        ChartKind::E2 => "Adams E2, coweight 0",
        ChartKind::Einf => "Adams E-infinity, coweight 0",
        ChartKind::Ko => return ko_chart(DEFAULT_KO_CHART),
    };
    let mut region = computed_region(run);
    for (&d, state) in &run.e_inf {
        if d.coweight() == 0 && 2 * d.f == d.s - 2 && w.in_census(d) && state.dim() > 0 {
            region.insert(d, run.survivors(d));
        }
    }
    let top = region.keys().map(|d| d.f).max().unwrap_or(0);
    let mut doc = ChartDocument::empty(title, (w.census_min, w.census_max), (0, top));
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for (d, classes) in &region {
        for e in classes {
            let negative = e.terms().any(|m| m.cone.is_negative());
            let i = doc.push_dot(d.s, d.f, negative, e.name(cat));
            if let [m] = e.terms().collect::<Vec<_>>()[..] {
                index.insert(*m, i);
            }
        }
    }
    let mut monomials: Vec<(Monomial, usize)> = index.iter().map(|(m, i)| (*m, *i)).collect();
    monomials.sort_by_key(|&(_, i)| i);
    for &(m, i) in &monomials {
        for (g, kind) in [
            (Generator::Rho, LineKind::Rho),
            (Generator::H0, LineKind::H0),
            (Generator::H1, LineKind::H1),
        ] {
            let Some(p) = module_action(cat, g, &m) else {
                continue;
            };
            if let Some(&j) = index.get(&p) {
                doc.segments.push(Segment {
                    from: i,
                    to: j,
                    kind,
                });
            } else if g == Generator::H0 && m.cone == Cone::Positive && p.degree(cat).f > top {
                doc.arrows.push(i);
            }
        }
    }
    if kind == ChartKind::Einf {
        for h in install_hidden_rho_extensions(run, cat).hidden {
            if let (Some(&a), Some(&b)) = (index.get(&h.source), index.get(&h.target)) {
                doc.segments.push(Segment {
                    from: a,
                    to: b,
                    kind: LineKind::Hidden,
                });
            }
        }
    }
    Ok(doc)
}

/// Builds a chart from static `dot`/`line`/`arrow` data.
pub fn ko_chart(text: &str) -> Result<ChartDocument> {
    let mut doc = ChartDocument::empty(
        "Adams E-infinity for ko, coweight 0 (reference data)",
        (0, 0),
        (0, 0),
    );
    let mut by_label: HashMap<String, usize> = HashMap::new();
    let mut pending = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: &str| Error::Parse {
            line: n + 1,
            msg: msg.to_string(),
        };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        match fields[..] {
            ["dot", sf, cone, label] => {
                let (s, f) = sf.split_once(' ').ok_or_else(|| perr("expected `s f`"))?;
                let s: i64 = s.trim().parse().map_err(|_| perr("bad stem"))?;
                let f: i64 = f.trim().parse().map_err(|_| perr("bad filtration"))?;
                let negative = match cone {
                    "pos" => false,
                    "neg" => true,
                    _ => return Err(perr("cone must be pos or neg")),
                };
                let i = doc.push_dot(s, f, negative, label.to_string());
                if by_label.insert(label.to_string(), i).is_some() {
                    return Err(perr("duplicate label"));
                }
            }
            ["line", a, b, kind] => {
                let kind = match kind {
                    "rho" => LineKind::Rho,
                    "h0" => LineKind::H0,
                    "h1" => LineKind::H1,
                    "hidden" => LineKind::Hidden,
                    _ => return Err(perr("unknown line kind")),
                };
                pending.push((n + 1, Some(b.to_string()), a.to_string(), kind));
            }
            ["arrow", a] => pending.push((n + 1, None, a.to_string(), LineKind::H0)),
            _ => return Err(perr("expected dot, line or arrow")),
        }
    }
    let find = |line: usize, l: &str| {
        by_label.get(l).copied().ok_or_else(|| Error::Parse {
            line,
            msg: format!("unknown label `{l}`"),
        })
    };
    for (line, b, a, kind) in pending {
        let from = find(line, &a)?;
        match b {
            Some(b) => {
                let to = find(line, &b)?;
                doc.segments.push(Segment { from, to, kind });
            }
            None => doc.arrows.push(from),
        }
    }
    let smax = doc.dots.iter().map(|d| d.s).max().unwrap_or(0);
    let fmax = doc.dots.iter().map(|d| d.f).max().unwrap_or(0);
    doc.stems = (0, smax);
    doc.filtrations = (0, fmax);
    doc.shading = shading_polygon(doc.stems, doc.filtrations);
    Ok(doc)
}

const UNIT: f64 = 30.0;
const MARGIN: f64 = 40.0;
const BLUE: &str = "#1f5fbf";
const GRAY: &str = "#8c8c8c";

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn render_svg(doc: &ChartDocument) -> String {
    let (x0, x1) = doc.stems;
    let (y0, y1) = doc.filtrations;
    let width = (x1 - x0) as f64 * UNIT + 2.0 * MARGIN;
    let height = (y1 - y0 + 1) as f64 * UNIT + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0 as f64) * UNIT;
    let py = |y: f64| height - MARGIN - (y - y0 as f64) * UNIT;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", esc(&doc.title));
    if !doc.shading.is_empty() {
        let pts: Vec<String> = doc
            .shading
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#e6e6e6" stroke="none"/>"##,
            pts.join(" ")
        );
    }
    let _ = writeln!(out, r##"<g stroke="#f0f0f0" stroke-width="0.5">"##);
    for x in x0..=x1 {
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            px(x as f64),
            py(y0 as f64),
            px(x as f64),
            py(y1 as f64 + 0.5)
        );
    }
    for y in y0..=y1 {
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            px(x0 as f64),
            py(y as f64),
            px(x1 as f64),
            py(y as f64)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="9" fill="black">"#
    );
    for x in (x0..=x1).filter(|x| x % 2 == 0) {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{x}</text>"#,
            px(x as f64),
            py(y0 as f64) + 14.0
        );
    }
    for y in (y0..=y1).filter(|y| y % 2 == 0) {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{y}</text>"#,
            px(x0 as f64) - 8.0,
            py(y as f64) + 3.0
        );
    }
    let _ = writeln!(out, "</g>");
    for seg in &doc.segments {
        let (a, b) = (doc.position(seg.from), doc.position(seg.to));
        let dash = if seg.kind == LineKind::Hidden {
            r#" stroke-dasharray="4,3""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<line class="{:?}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1"{dash}/>"#,
            seg.kind,
            px(a.0),
            py(a.1),
            px(b.0),
            py(b.1)
        );
    }
    for &i in &doc.arrows {
        let (x, y) = doc.position(i);
        let (x, y) = (px(x), py(y));
        let _ = writeln!(
            out,
            r#"<line class="Arrow" x1="{x:.3}" y1="{y:.3}" x2="{x:.3}" y2="{:.3}" stroke="black" stroke-width="1"/>"#,
            y - 0.8 * UNIT
        );
        let _ = writeln!(
            out,
            r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="black"/>"#,
            x - 3.0,
            y - 0.8 * UNIT + 5.0,
            x + 3.0,
            y - 0.8 * UNIT + 5.0,
            x,
            y - 0.8 * UNIT
        );
    }
    for (i, d) in doc.dots.iter().enumerate() {
        let (x, y) = doc.position(i);
        let color = if d.negative { GRAY } else { BLUE };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{color}"><title>{} ({}, {})</title></circle>"#,
            px(x),
            py(y),
            esc(&d.label),
            d.s,
            d.f
        );
    }
    out.push_str("</svg>\n");
    out
}

fn render_tikz(doc: &ChartDocument) -> String {
    let (x0, x1) = doc.stems;
    let (y0, y1) = doc.filtrations;
    let mut out = String::new();
    let _ = writeln!(out, "% {}", doc.title);
    let _ = writeln!(out, "\\begin{{tikzpicture}}[x=0.5cm,y=0.5cm]");
    if !doc.shading.is_empty() {
        let pts: Vec<String> = doc
            .shading
            .iter()
            .map(|&(x, y)| format!("({x:.3},{y:.3})"))
            .collect();
        let _ = writeln!(out, "\\fill[black!10] {} -- cycle;", pts.join(" -- "));
    }
    let _ = writeln!(
        out,
        "\\draw[black!8,very thin] ({x0},{y0}) grid ({x1},{y1});"
    );
    for x in (x0..=x1).filter(|x| x % 2 == 0) {
        let _ = writeln!(out, "\\node[below] at ({x},{y0}) {{\\tiny {x}}};");
    }
    for y in (y0..=y1).filter(|y| y % 2 == 0) {
        let _ = writeln!(out, "\\node[left] at ({x0},{y}) {{\\tiny {y}}};");
    }
    for seg in &doc.segments {
        let (a, b) = (doc.position(seg.from), doc.position(seg.to));
        let style = if seg.kind == LineKind::Hidden {
            "[dashed]"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "\\draw{style} ({:.3},{:.3}) -- ({:.3},{:.3});",
            a.0, a.1, b.0, b.1
        );
    }
    for &i in &doc.arrows {
        let (x, y) = doc.position(i);
        let _ = writeln!(
            out,
            "\\draw[->] ({x:.3},{y:.3}) -- ({x:.3},{:.3});",
            y + 0.8
        );
    }
    for (i, d) in doc.dots.iter().enumerate() {
        let (x, y) = doc.position(i);
        let color = if d.negative {
            "black!45"
        } else {
            "blue!75!black"
        };
        let _ = writeln!(out, "\\fill[{color}] ({x:.3},{y:.3}) circle (2pt);");
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

pub fn render(doc: &ChartDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Svg => render_svg(doc),
        Format::Tikz => render_tikz(doc),
    }
    .into_bytes()
}

pub fn write_chart(doc: &ChartDocument, format: Format, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render(doc, format))?;
    Ok(())
}

/// The label of an E∞ class as shown on charts.
pub fn label(cat: &Catalog, e: &Element) -> String {
    e.name(cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chart_has_grid_and_shading_only() {
        let doc = ChartDocument::empty("empty", (0, 10), (0, 6));
        assert!(doc.dots.is_empty() && doc.segments.is_empty());
        assert_eq!(doc.shading, vec![(2.0, 0.0), (10.0, 0.0), (10.0, 4.0)]);
        let svg = String::from_utf8(render(&doc, Format::Svg)).unwrap();
        assert!(svg.contains("<polygon") && !svg.contains("<circle"));
    }

    #[test]
    fn shading_is_clipped_at_the_top() {
        let doc = ChartDocument::empty("clip", (0, 20), (0, 4));
        assert_eq!(
            doc.shading,
            vec![(2.0, 0.0), (20.0, 0.0), (20.0, 4.0), (10.0, 4.0)]
        );
    }

    #[test]
    fn ko_reference_chart_parses() {
        let doc = ko_chart(DEFAULT_KO_CHART).unwrap();
        assert!(doc.segments_of(LineKind::Hidden).count() >= 5);
        assert_eq!(doc.census()[&(4, 2)], 1);
        assert!(!doc.arrows.is_empty());
    }

    #[test]
    fn unknown_format_is_rejected() {
        assert!(matches!(
            "pdf".parse::<Format>(),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn fanned_dots_are_symmetric() {
        let mut doc = ChartDocument::empty("fan", (0, 4), (0, 4));
        doc.push_dot(1, 1, false, "a".into());
        doc.push_dot(1, 1, true, "b".into());
        let (a, b) = (doc.position(0), doc.position(1));
        assert!((a.0 + b.0 - 2.0).abs() < 1e-12 && (a.1 + b.1 - 2.0).abs() < 1e-12);
    }
}
