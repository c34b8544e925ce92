//! The full pipeline over one window and its report tables.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::adams::{
    adams_no_differentials, install_hidden_rho_extensions, mahowald_invariant_of_2k, AdamsReport,
    DivisibilityRecord, HiddenExtension,
};
use crate::catalog::Catalog;
use crate::checks::{census, check_structural_constraints, Census, StructuralReport};
use crate::cone::Window;
use crate::engine::{run_bockstein, BocksteinRun, EngineOptions};
use crate::error::{Error, Result};
use crate::inference::{infer_forced_differentials, Inference, Outcome};
use crate::rules::DifferentialRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportKind {
    Divisibility,
    FixedPoints,
    TwoDivisibility,
    Mahowald,
    Census,
}

impl FromStr for ReportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "divisibility" => ReportKind::Divisibility,
            "fixed-points" => ReportKind::FixedPoints,
            "two-divisibility" => ReportKind::TwoDivisibility,
            "mahowald" => ReportKind::Mahowald,
            "census" => ReportKind::Census,
            other => return Err(Error::InvalidArgument(format!("unknown report `{other}`"))),
        })
    }
}

/// Whether the window holds coweights -1, 0 and 1, which the census, the
/// Adams check and the homotopy derivations need.
pub fn covers_region(w: &Window) -> bool {
    w.min_coweight <= -1 && w.max_coweight >= 1
}

/// Everything derived from one run.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub run: BocksteinRun,
    pub structural: StructuralReport,
    pub census: Census,
    pub adams: AdamsReport,
    pub hidden: Vec<HiddenExtension>,
    pub inferences: Vec<Inference>,
    /// Per-`k` records for every `k ≥ 1` whose ρ-division chain stays in the
    /// window; empty unless the census is exact.
    pub divisibility: Vec<DivisibilityRecord>,
    /// `(k, detector of M(2^k))`, for the same range starting at `k = 0`.
    pub mahowald: Vec<(u32, String)>,
}

pub fn analyze(
    cat: &Catalog,
    rules: &[DifferentialRule],
    window: Window,
    opts: &EngineOptions,
) -> Result<Analysis> {
    let run = run_bockstein(cat, rules, window, opts)?;
    let structural = check_structural_constraints(&run, cat);
    let census = census(&run, cat);
    let adams = adams_no_differentials(&run, cat);
    let inferences = infer_forced_differentials(cat, rules, &run)?;
    let einf = install_hidden_rho_extensions(&run, cat);
    let div = |n: u32| einf.rho_divisibility(cat, n);
    let mut divisibility = Vec::new();
    let mut mahowald = Vec::new();
    let covers = covers_region(&window) && census.is_exact();
    if covers {
        mahowald.push((0, mahowald_invariant_of_2k(&einf, cat, 0)?.name(cat)));
    }
    for k in (1..).take_while(|_| covers) {
        let max_rho_power = match div(k) {
            Ok(n) => n,
            Err(Error::OutOfWindow(_)) => break,
            Err(e) => return Err(e),
        };
        divisibility.push(DivisibilityRecord {
            k,
            max_rho_power,
            max_two_power: if k >= 5 {
                Some(crate::adams::two_divisibility(k, div)?)
            } else {
                None
            },
            fixed_point_generator_exponent: crate::adams::fixed_point_image(k, div)?,
        });
        mahowald.push((k, mahowald_invariant_of_2k(&einf, cat, k)?.name(cat)));
    }
    let hidden = einf.hidden.clone();
    Ok(Analysis {
        structural,
        census,
        adams,
        hidden,
        inferences,
        divisibility,
        mahowald,
        run,
    })
}

impl Analysis {
    /// Failures that make a run unsuccessful. Vanishing-region entries count
    /// only when `strict`.
    pub fn violations(&self, strict: bool) -> Vec<String> {
        let mut out = Vec::new();
        let covers = covers_region(&self.run.window);
        if covers {
            out.extend(
                self.census
                    .mismatches
                    .iter()
                    .map(|m| format!("census: {m}")),
            );
        }
        let s = &self.structural;
        for (tag, list) in [
            ("rho-divisibility", &s.rho_divisibility),
            ("h1-tower", &s.h1_towers),
        ] {
            out.extend(list.iter().map(|m| format!("{tag}: {m}")));
        }
        if strict {
            out.extend(
                s.vanishing_region
                    .iter()
                    .map(|m| format!("vanishing region: {m}")),
            );
        }
        if covers {
            out.extend(self.adams.unexcluded.iter().map(|m| format!("adams: {m}")));
        }
        out.extend(
            self.run
                .conflicts
                .iter()
                .map(|c| format!("leibniz conflict: d_{}({})", c.page, c.class)),
        );
        out.extend(
            self.run
                .dd_failures
                .iter()
                .map(|(r, d)| format!("d_{r} o d_{r} != 0 at {d}")),
        );
        out
    }

    /// Non-fatal diagnostics.
    pub fn warnings(&self, strict: bool) -> Vec<String> {
        let mut out = Vec::new();
        if !covers_region(&self.run.window) {
            out.push(
                "window misses coweights -1..1: census, Adams and homotopy checks skipped"
                    .to_string(),
            );
        }
        if !strict && !self.structural.vanishing_region.is_empty() {
            out.push(format!(
                "vanishing region: {} E1 classes with coweight < 0 above f = s/2 + 3/2",
                self.structural.vanishing_region.len()
            ));
        }
        if !self.run.underdetermined.is_empty() {
            out.push(format!(
                "{} differentials undecided by the rules were taken to be zero",
                self.run.underdetermined.len()
            ));
        }
        if covers_region(&self.run.window) && !self.adams.boundary.is_empty() {
            out.push(format!(
                "{} region classes rely on data at the window boundary for the Adams check",
                self.adams.boundary.len()
            ));
        }
        out
    }

    pub fn table(&self, cat: &Catalog, kind: ReportKind) -> Table {
        match kind {
            ReportKind::Divisibility => Table::new(
                "rho-divisibility of eta^k",
                &["k", "max_rho_power"],
                self.divisibility.iter().map(|r| {
                    (
                        vec![r.k.to_string(), r.max_rho_power.to_string()],
                        format!("k={} → ρ{}", r.k, sup(r.max_rho_power)),
                    )
                }),
            ),
            ReportKind::FixedPoints => Table::new(
                "image of geometric fixed points on pi_{k,k}",
                &["k", "generator_exponent"],
                self.divisibility.iter().map(|r| {
                    let m = r.fixed_point_generator_exponent;
                    (
                        vec![r.k.to_string(), m.to_string()],
                        format!("k={} → 2^{m}", r.k),
                    )
                }),
            ),
            ReportKind::TwoDivisibility => Table::new(
                "2-divisibility of eta^k",
                &["k", "max_two_power"],
                self.divisibility.iter().filter_map(|r| {
                    let m = r.max_two_power?;
                    Some((
                        vec![r.k.to_string(), m.to_string()],
                        format!("k={} → 2^{m}", r.k),
                    ))
                }),
            ),
            ReportKind::Mahowald => Table::new(
                "Mahowald invariant of 2^k (indeterminacy not computed)",
                &["k", "detector"],
                self.mahowald
                    .iter()
                    .map(|(k, x)| (vec![k.to_string(), x.clone()], format!("2^{k} → {x}"))),
            ),
            ReportKind::Census => Table::new(
                "E-infinity in coweight 0 above f = s/2 - 1",
                &["s", "f", "w", "classes"],
                self.census.found.iter().map(|(d, es)| {
                    let names: Vec<String> = es.iter().map(|e| e.name(cat)).collect();
                    let names = names.join(", ");
                    (
                        vec![
                            d.s.to_string(),
                            d.f.to_string(),
                            d.w.to_string(),
                            names.clone(),
                        ],
                        format!("{d}: {names}"),
                    )
                }),
            ),
        }
    }

    /// Inference outcomes, one line per listed permanent cycle.
    pub fn inference_lines(&self, cat: &Catalog) -> Vec<String> {
        self.inferences
            .iter()
            .map(|i| {
                let x = i.class.name(cat);
                match &i.outcome {
                    Outcome::Inferred(inst) => format!(
                        "{x}: d_{}({}) = {}",
                        inst.page,
                        inst.source.name(cat),
                        inst.target.name(cat)
                    ),
                    Outcome::Known { page, source } => {
                        format!("{x}: known, page {page} ({source})")
                    }
                    Outcome::Ambiguous { page, candidates } => {
                        format!("{x}: ambiguous on page {page}: {}", candidates.join(", "))
                    }
                    Outcome::NoCandidate { last_page } => {
                        format!("{x}: no candidate through page {last_page}")
                    }
                    Outcome::OutOfWindow => format!("{x}: out of window"),
                }
            })
            .collect()
    }
}

fn sup(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .bytes()
        .map(|b| DIGITS[(b - b'0') as usize])
        .collect()
}

/// A report as tab-separated rows plus one human-readable line per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub pretty: Vec<String>,
}

impl Table {
    fn new(
        title: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = (Vec<String>, String)>,
    ) -> Table {
        let (rows, pretty) = rows.into_iter().unzip();
        Table {
            title: title.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            pretty,
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for line in &self.pretty {
            let _ = writeln!(out, "  {line}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::seed_rules;

    #[test]
    fn superscripts() {
        assert_eq!(sup(3), "³");
        assert_eq!(sup(10), "¹⁰");
    }

    #[test]
    fn small_window_tables() {
        let c = Catalog::default();
        let rules = seed_rules(&c).unwrap();
        let a = analyze(
            &c,
            &rules,
            Window::new(12, (-2, 1)).unwrap(),
            &EngineOptions::default(),
        )
        .unwrap();
        assert!(a.violations(false).is_empty(), "{:?}", a.violations(false));
        assert!(!a.violations(true).is_empty());
        let t = a.table(&c, ReportKind::Divisibility);
        assert!(t.pretty.contains(&"k=4 → ρ³".to_string()));
        assert!(t.to_tsv().starts_with("k\tmax_rho_power\n1\t0\n"));
        let t = a.table(&c, ReportKind::Mahowald);
        assert!(t.pretty.contains(&"2^4 → h_0^3 h_3".to_string()));
        let t = a.table(&c, ReportKind::Census);
        assert_eq!(t.pretty[2], "(0, 2, 0): h_0^2, rho^2 h_1^2");
    }
}
