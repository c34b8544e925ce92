//! Structural constraints on the computed pages and the coweight-0 census.

use std::collections::BTreeMap;

use crate::catalog::Catalog;
use crate::degree::TriDegree;
use crate::engine::{rho_times, to_vector, BocksteinRun};
use crate::f2::{F2Vector, Subspace};
use crate::monomial::{module_action, Classes, Element, Generator, Monomial};

/// Steps an h1-chain from a coweight-1 class must be followable inside the
/// window for the class to be checked.
pub const H1_CHAIN_STEPS: u32 = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuralReport {
    /// (a) negative-cone differentials whose source or target is not
    /// ρ-divisible in `E_r` as far as the window reaches.
    pub rho_divisibility: Vec<String>,
    /// (b) E₁ classes with coweight < 0, s > 0 and f > s/2 + 3/2.
    pub vanishing_region: Vec<String>,
    /// (c) coweight-1 classes whose h1-multiples never vanish in the window.
    pub h1_towers: Vec<String>,
}

impl StructuralReport {
    pub fn is_clean(&self) -> bool {
        self.rho_divisibility.is_empty()
            && self.vanishing_region.is_empty()
            && self.h1_towers.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (tag, list) in [
            ("rho-divisibility", &self.rho_divisibility),
            ("vanishing region", &self.vanishing_region),
            ("h1-tower", &self.h1_towers),
        ] {
            out.extend(list.iter().map(|m| format!("{tag}: {m}")));
        }
        out
    }
}

/// Whether `v` in degree `d` of `E_r` is divisible by `ρ^n` for every `n`
/// with the preimage degree inside the window.
fn rho_divisible(run: &BocksteinRun, cat: &Catalog, r: u32, d: TriDegree, v: &F2Vector) -> bool {
    let states = &run.pages[r as usize - 1].states;
    let Some(here) = states.get(&d) else {
        return false;
    };
    let space = run.space();
    let mut n = 1;
    loop {
        let src = d - cat.rho * n;
        if !run.window.contains(src) {
            return true;
        }
        let mut image: Subspace = here.boundaries.clone();
        if let Some(st) = states.get(&src) {
            for z in st.cycles.basis() {
                let mut w = z.clone();
                let mut deg = src;
                let mut ok = true;
                for _ in 0..n {
                    match rho_times(cat, space, deg, &w) {
                        Some(next) => w = next,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                    deg = deg + cat.rho;
                }
                if ok {
                    image.insert(w);
                }
            }
        }
        if !image.contains(v) {
            return false;
        }
        n += 1;
    }
}

pub fn check_structural_constraints(run: &BocksteinRun, cat: &Catalog) -> StructuralReport {
    let mut report = StructuralReport::default();
    let space = run.space();
    let w = run.window;

    for rec in &run.differentials {
        if !rec.source.terms().all(|m| m.cone.is_negative()) || w.is_edge(rec.source_degree) {
            continue;
        }
        let t = rec.source_degree + TriDegree::BOCKSTEIN_SHIFT;
        for (d, e, what) in [
            (rec.source_degree, &rec.source, "source"),
            (t, &rec.target, "target"),
        ] {
            let v = to_vector(space, d, e).expect("recorded classes are in the window");
            if !rho_divisible(run, cat, rec.page, d, &v) {
                report.rho_divisibility.push(format!(
                    "d_{}({}) = {}: {what} not rho-divisible in E_{} at {d}",
                    rec.page,
                    rec.source.name(cat),
                    rec.target.name(cat),
                    rec.page
                ));
            }
        }
    }

    for (d, basis) in space.iter() {
        if d.coweight() < 0 && d.s > 0 && 2 * d.f > d.s + 3 {
            for m in basis {
                report
                    .vanishing_region
                    .push(format!("{} at {d}", m.name(cat)));
            }
        }
    }

    for (d, basis) in space.iter() {
        if d.coweight() != 1 || !w.in_census(d) {
            continue;
        }
        let reach = d + cat.h1 * i64::from(H1_CHAIN_STEPS);
        if !w.contains(reach) {
            continue;
        }
        for m in basis {
            let mut cur = Some(*m);
            let mut steps = 0;
            while let Some(x) = cur {
                if !w.contains(x.degree(cat)) {
                    break;
                }
                cur = module_action(cat, Generator::H1, &x);
                steps += 1;
            }
            if cur.is_some() {
                report.h1_towers.push(format!(
                    "{} at {d}: h1-multiples survive {steps} steps",
                    m.name(cat)
                ));
            }
        }
    }
    report
}

/// The coweight-0 classes above `f = s/2 - 1` predicted to survive:
/// `h0^k`, `ρ^j h1^k`, and `Q/ρ^j h1^{4k+ε}` with `j ≤ 4k-2` (ε = 0) or
/// `j ≤ 4k-1` (ε = 1, 2, 3).
pub fn expected_census(cat: &Catalog, run: &BocksteinRun) -> BTreeMap<TriDegree, Vec<Monomial>> {
    let w = run.window;
    let cl = Classes::new(cat);
    let mut out: BTreeMap<TriDegree, Vec<Monomial>> = BTreeMap::new();
    let mut add = |m: Monomial| {
        let d = m.degree(cat);
        if d.coweight() == 0 && d.above_bl_line() && w.in_census(d) {
            out.entry(d).or_default().push(m);
        }
    };
    let top = w.max_f as u32 + 2;
    for k in 0..=top {
        add(Monomial::positive(0, 0, cl.h0_pow(k)));
        if let Some(h) = cl.h1_pow(k) {
            for j in 0..=k {
                add(Monomial::positive(j, 0, h));
            }
        }
    }
    for n in 4..=top {
        let (k, eps) = (n / 4, n % 4);
        let j_max = if eps == 0 { 4 * k - 2 } else { 4 * k - 1 };
        let h = cl.h1_pow(n).expect("h1 powers exist");
        for j in 0..=j_max {
            add(Monomial::q(j, h));
        }
    }
    for v in out.values_mut() {
        v.sort();
        v.dedup();
    }
    out
}

#[derive(Clone, Debug, Default)]
pub struct Census {
    pub expected: BTreeMap<TriDegree, Vec<Monomial>>,
    /// E∞ representatives in each census degree.
    pub found: BTreeMap<TriDegree, Vec<Element>>,
    pub mismatches: Vec<String>,
}

impl Census {
    pub fn is_exact(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.found.values().map(Vec::len).sum()
    }
}

/// Compares E∞ in coweight 0 above the line with [`expected_census`].
pub fn census(run: &BocksteinRun, cat: &Catalog) -> Census {
    let expected = expected_census(cat, run);
    let mut found = BTreeMap::new();
    let mut mismatches = Vec::new();
    let w = run.window;
    let space = run.space();
    for (&d, state) in &run.e_inf {
        if d.coweight() != 0 || !d.above_bl_line() || !w.in_census(d) || state.dim() == 0 {
            continue;
        }
        found.insert(d, run.survivors(d));
    }
    let degrees: std::collections::BTreeSet<TriDegree> =
        expected.keys().chain(found.keys()).copied().collect();
    for d in degrees {
        let want = expected.get(&d).map_or(&[][..], Vec::as_slice);
        let dim = run.e_inf_dim(d);
        if dim != want.len() {
            let got: Vec<String> = run.survivors(d).iter().map(|e| e.name(cat)).collect();
            let exp: Vec<String> = want.iter().map(|m| m.name(cat)).collect();
            mismatches.push(format!("{d}: E_inf has {got:?}, expected {exp:?}"));
            continue;
        }
        let state = &run.e_inf[&d];
        let mut span = state.boundaries.clone();
        for m in want {
            let v = to_vector(space, d, &Element::single(*m));
            let ok = v.is_some_and(|v| state.cycles.contains(&v) && span.insert(v));
            if !ok {
                mismatches.push(format!(
                    "{d}: {} is not an independent survivor",
                    m.name(cat)
                ));
            }
        }
    }
    Census {
        expected,
        found,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Window;
    use crate::engine::{run_bockstein, EngineOptions};
    use crate::rules::seed_rules;

    #[test]
    fn census_and_constraints_on_a_small_window() {
        let c = Catalog::default();
        let rules = seed_rules(&c).unwrap();
        let run = run_bockstein(
            &c,
            &rules,
            Window::new(12, (-1, 1)).unwrap(),
            &EngineOptions::default(),
        )
        .unwrap();
        let cen = census(&run, &c);
        assert!(cen.is_exact(), "{:#?}", cen.mismatches);
        let rep = check_structural_constraints(&run, &c);
        assert!(rep.is_clean(), "{:#?}", rep.lines());
    }

    #[test]
    fn vanishing_region_counterexamples_only_in_coweight_minus_two() {
        let c = Catalog::default();
        let rules = seed_rules(&c).unwrap();
        let run = run_bockstein(
            &c,
            &rules,
            Window::new(6, (-2, 1)).unwrap(),
            &EngineOptions::default(),
        )
        .unwrap();
        let rep = check_structural_constraints(&run, &c);
        assert!(!rep.vanishing_region.is_empty());
        assert!(rep
            .vanishing_region
            .iter()
            .all(|l| l.starts_with("gamma/(rho")));
        assert!(rep.rho_divisibility.is_empty() && rep.h1_towers.is_empty());
    }
}
