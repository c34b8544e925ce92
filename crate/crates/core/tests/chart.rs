use rhobock_core::chart::{
    chart_from_page, ko_chart, render, ChartKind, Format, LineKind, DEFAULT_KO_CHART,
};
use rhobock_core::{run_bockstein, seed_rules, BocksteinRun, Catalog, EngineOptions, Window};

fn run(max_stem: i64) -> (Catalog, BocksteinRun) {
    let c = Catalog::default();
    let rules = seed_rules(&c).unwrap();
    let r = run_bockstein(
        &c,
        &rules,
        Window::new(max_stem, (-2, 1)).unwrap(),
        &EngineOptions::default(),
    )
    .unwrap();
    (c, r)
}

#[test]
fn rendering_is_deterministic() {
    let (c, r) = run(12);
    let a = chart_from_page(&r, &c, ChartKind::Einf).unwrap();
    let b = chart_from_page(&r, &c, ChartKind::Einf).unwrap();
    assert_eq!(a, b);
    for f in [Format::Svg, Format::Tikz] {
        assert_eq!(render(&a, f), render(&b, f));
    }
}

#[test]
fn svg_is_well_formed_xml() {
    let (c, r) = run(12);
    for kind in [ChartKind::E2, ChartKind::Einf] {
        let svg = String::from_utf8(render(&chart_from_page(&r, &c, kind).unwrap(), Format::Svg))
            .unwrap();
        let doc = roxmltree::Document::parse(&svg).expect("well-formed");
        assert_eq!(doc.root_element().tag_name().name(), "svg");
    }
    let ko = String::from_utf8(render(&ko_chart(DEFAULT_KO_CHART).unwrap(), Format::Svg)).unwrap();
    roxmltree::Document::parse(&ko).expect("well-formed");
}

#[test]
fn einf_has_the_first_hidden_dash() {
    let (c, r) = run(12);
    let doc = chart_from_page(&r, &c, ChartKind::Einf).unwrap();
    let dashes: Vec<_> = doc
        .segments_of(LineKind::Hidden)
        .map(|s| {
            (
                (doc.dots[s.from].s, doc.dots[s.from].f),
                (doc.dots[s.to].s, doc.dots[s.to].f),
            )
        })
        .collect();
    assert!(dashes.contains(&((5, 3), (4, 4))));
    assert!(!dashes.contains(&((4, 2), (3, 3))));
    let e2 = chart_from_page(&r, &c, ChartKind::E2).unwrap();
    assert_eq!(e2.segments_of(LineKind::Hidden).count(), 0);
}

#[test]
fn e2_count_at_stem_8_filtration_3() {
    let (c, r) = run(12);
    let doc = chart_from_page(&r, &c, ChartKind::E2).unwrap();
    assert_eq!(doc.census().get(&(8, 3)), Some(&1));
    assert_eq!(doc.region_census().get(&(8, 3)), None);
    let dot = doc.dots.iter().find(|d| (d.s, d.f) == (8, 3)).unwrap();
    assert!(dot.negative);
    assert_eq!(dot.label, "gamma/tau^2 c_0");
}

#[test]
fn lines_join_plotted_classes() {
    let (c, r) = run(12);
    let doc = chart_from_page(&r, &c, ChartKind::Einf).unwrap();
    for s in &doc.segments {
        let (a, b) = (&doc.dots[s.from], &doc.dots[s.to]);
        match s.kind {
            LineKind::Rho => assert_eq!((b.s - a.s, b.f - a.f), (-1, 0)),
            LineKind::H0 => assert_eq!((b.s - a.s, b.f - a.f), (0, 1)),
            LineKind::H1 => assert_eq!((b.s - a.s, b.f - a.f), (1, 1)),
            LineKind::Hidden => assert!(b.s - a.s == -1 && b.f - a.f >= 1),
        }
    }
}

#[test]
fn tikz_fragment_is_balanced() {
    let (c, r) = run(10);
    let tikz = String::from_utf8(render(
        &chart_from_page(&r, &c, ChartKind::Einf).unwrap(),
        Format::Tikz,
    ))
    .unwrap();
    assert_eq!(tikz.matches("\\begin{tikzpicture}").count(), 1);
    assert!(tikz.trim_end().ends_with("\\end{tikzpicture}"));
    assert_eq!(tikz.matches('{').count(), tikz.matches('}').count());
    assert_eq!(tikz.matches('(').count(), tikz.matches(')').count());
    assert!(tikz
        .lines()
        .filter(|l| l.starts_with('\\') && !l.starts_with("\\begin") && !l.starts_with("\\end"))
        .all(|l| l.ends_with(';')));
    assert!(tikz.contains("[dashed]"));
}
