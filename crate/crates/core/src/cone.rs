//! The Bockstein E₁-page: positive cone `Ext_C[ρ]` and the negative cone split
//! as `γE₁⁻ ⊕ QE₁⁻`, built inside a finite window.

use crate::catalog::Catalog;
use crate::degree::TriDegree;
use crate::error::{Error, Result};
use crate::monomial::{Cone, ExtElement, Monomial};
use crate::space::TrigradedSpace;

/// Classes closer than this to the filtration cap are edge classes.
pub const FILTRATION_MARGIN: i64 = 2;

/// A finite region of tridegrees. The census region is stems
/// `census_min..=census_max`; the computation window extends past it so that
/// differentials into and out of the census region are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub min_stem: i64,
    pub max_stem: i64,
    pub census_min: i64,
    pub census_max: i64,
    pub min_coweight: i64,
    pub max_coweight: i64,
    pub max_f: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window::new(24, (-2, 1)).expect("default window is valid")
    }
}

impl Window {
    /// Census stems `0..=max_stem`, computed over stems `-2..=max_stem+1`
    /// with filtrations up to `2·max_stem + 4`.
    pub fn new(max_stem: i64, coweights: (i64, i64)) -> Result<Window> {
        Window::with_bounds(-2, max_stem + 1, coweights, 2 * max_stem + 4).map(|w| Window {
            census_min: 0,
            census_max: max_stem,
            ..w
        })
    }

    /// A window whose census region is the whole window.
    pub fn with_bounds(
        min_stem: i64,
        max_stem: i64,
        (min_coweight, max_coweight): (i64, i64),
        max_f: i64,
    ) -> Result<Window> {
        if max_stem < 0 || min_stem > max_stem {
            return Err(Error::InvalidArgument(format!(
                "stem range {min_stem}..{max_stem} must be nonempty and reach stem 0"
            )));
        }
        if min_coweight > max_coweight {
            return Err(Error::InvalidArgument(format!(
                "coweight range {min_coweight}..{max_coweight} is empty"
            )));
        }
        if max_f < 0 {
            return Err(Error::InvalidArgument("negative filtration cap".into()));
        }
        Ok(Window {
            min_stem,
            max_stem,
            census_min: min_stem,
            census_max: max_stem,
            min_coweight,
            max_coweight,
            max_f,
        })
    }

    pub fn contains(&self, d: TriDegree) -> bool {
        (self.min_stem..=self.max_stem).contains(&d.s)
            && (self.min_coweight..=self.max_coweight).contains(&d.coweight())
            && (0..=self.max_f).contains(&d.f)
    }

    /// Inside the window but where truncation of the window may change the answer.
    pub fn is_edge(&self, d: TriDegree) -> bool {
        self.contains(d) && !self.in_census(d)
    }

    pub fn in_census(&self, d: TriDegree) -> bool {
        self.contains(d)
            && (self.census_min..=self.census_max).contains(&d.s)
            && d.f <= self.max_f - FILTRATION_MARGIN
    }
}

/// All valid catalog elements with filtration at most `max_f`.
pub fn ext_elements(cat: &Catalog, max_f: i64) -> Vec<ExtElement> {
    let mut out = Vec::new();
    for id in cat.ids() {
        let fam = cat.family(id);
        let mut k = fam.k_min;
        while fam.k_in_range(k) && cat.family_degree(fam, k).f <= max_f {
            let base = ExtElement::new(id, k);
            for (dh0, dh1) in [(1u32, 0u32), (0, 1)] {
                let start = if dh0 == 1 { 0 } else { 1 };
                let mut n = start;
                loop {
                    let e = base.with_h(n * dh0, n * dh1);
                    if !e.is_valid(cat) || e.degree(cat).f > max_f {
                        break;
                    }
                    out.push(e);
                    n += 1;
                }
            }
            if cat.period.f <= 0 {
                break;
            }
            k += 1;
        }
    }
    out.sort();
    out
}

/// `ρ^a τ^b x` for all catalog elements `x` landing in the window.
pub fn build_e1_positive(cat: &Catalog, window: &Window) -> TrigradedSpace {
    let mut classes = Vec::new();
    for x in ext_elements(cat, window.max_f) {
        let d = x.degree(cat);
        let torsion = x.is_tau_torsion(cat);
        for c in window.min_coweight..=window.max_coweight {
            let b = c - d.coweight();
            if b < 0 || (torsion && b > 0) {
                continue;
            }
            // ρ lowers the stem by one, τ leaves it alone
            let a_min = (d.s - window.max_stem).max(0);
            let a_max = d.s - window.min_stem;
            for a in a_min..=a_max {
                classes.push(Monomial::positive(a as u32, b as u32, x));
            }
        }
    }
    TrigradedSpace::from_classes(
        cat,
        classes
            .into_iter()
            .filter(|m| window.contains(m.degree(cat))),
    )
}

/// `(γE₁⁻, QE₁⁻)` inside the window.
pub fn build_e1_negative(cat: &Catalog, window: &Window) -> (TrigradedSpace, TrigradedSpace) {
    let mut gamma = Vec::new();
    let mut q = Vec::new();
    for x in ext_elements(cat, window.max_f + 1) {
        let d = x.degree(cat);
        if x.is_tau_torsion(cat) {
            for j in 0.. {
                let m = Monomial::q(j, x);
                let md = m.degree(cat);
                if md.s > window.max_stem {
                    break;
                }
                if window.contains(md) {
                    q.push(m);
                }
            }
        } else {
            for c in window.min_coweight..=window.max_coweight {
                let i = d.coweight() - 1 - c;
                if i < 1 {
                    continue;
                }
                for j in 0.. {
                    let m = Monomial::gamma(j, i as u32, x);
                    let md = m.degree(cat);
                    if md.s > window.max_stem {
                        break;
                    }
                    if window.contains(md) {
                        gamma.push(m);
                    }
                }
            }
        }
    }
    (
        TrigradedSpace::from_classes(cat, gamma),
        TrigradedSpace::from_classes(cat, q),
    )
}

/// The E₁-page split into its three summands, plus their sum.
#[derive(Clone, Debug)]
pub struct E1Page {
    pub window: Window,
    pub positive: TrigradedSpace,
    pub gamma_part: TrigradedSpace,
    pub q_part: TrigradedSpace,
    all: TrigradedSpace,
}

impl E1Page {
    pub fn build(cat: &Catalog, window: Window) -> E1Page {
        let positive = build_e1_positive(cat, &window);
        let (gamma_part, q_part) = build_e1_negative(cat, &window);
        let all = positive.merged(&gamma_part).merged(&q_part);
        E1Page {
            window,
            positive,
            gamma_part,
            q_part,
            all,
        }
    }

    /// Direct sum of the three parts.
    pub fn all(&self) -> &TrigradedSpace {
        &self.all
    }

    pub fn part(&self, cone: Cone) -> &TrigradedSpace {
        match cone {
            Cone::Positive => &self.positive,
            Cone::Gamma => &self.gamma_part,
            Cone::Q => &self.q_part,
        }
    }

    pub fn is_edge(&self, d: TriDegree) -> bool {
        self.window.is_edge(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Classes;

    fn cat() -> Catalog {
        Catalog::default()
    }

    #[test]
    fn coweight_zero_positive_is_rho_h0_h1() {
        let c = cat();
        let w = Window::with_bounds(-2, 3, (0, 0), 8).unwrap();
        let pos = build_e1_positive(&c, &w);
        let cl = Classes::new(&c);
        for m in pos.classes() {
            let x = m.ext();
            assert_eq!(m.tau, 0, "{}", m.name(&c));
            let pure = x.as_pure_power(&c);
            assert!(pure.is_some(), "{}", m.name(&c));
        }
        // every ρ^a h0^b and ρ^a h1^b in range is present
        for a in 0..3u32 {
            for b in 0..6u32 {
                let m = Monomial::positive(a, 0, cl.h0_pow(b));
                assert_eq!(pos.contains(&c, &m), w.contains(m.degree(&c)));
                let m = Monomial::positive(a, 0, cl.h1_pow(b).unwrap());
                assert_eq!(pos.contains(&c, &m), w.contains(m.degree(&c)));
            }
        }
    }

    #[test]
    fn stem_zero_column() {
        let c = cat();
        let w = Window::with_bounds(0, 0, (0, 0), 5).unwrap();
        let pos = build_e1_positive(&c, &w);
        let names: Vec<String> = pos
            .classes()
            .filter(|m| m.rho == 0)
            .map(|m| m.name(&c))
            .collect();
        assert_eq!(names, ["1", "h_0", "h_0^2", "h_0^3", "h_0^4", "h_0^5"]);
        // the rest of the column is rho^b h1^b
        assert!(pos
            .classes()
            .all(|m| m.rho == 0 || m.ext().as_pure_power(&c) == Some((0, m.rho))));
    }

    #[test]
    fn h1_fourth_is_alone_in_its_degree() {
        let c = cat();
        let e1 = E1Page::build(&c, Window::new(10, (-2, 1)).unwrap());
        let d = TriDegree::new(4, 4, 4);
        assert_eq!(e1.all().dim(d), 1);
        assert_eq!(e1.all().basis(d)[0].name(&c), "h_1^4");
    }

    #[test]
    fn q_classes() {
        let c = cat();
        let e1 = E1Page::build(&c, Window::new(10, (0, 0)).unwrap());
        let names = |d| -> Vec<String> { e1.q_part.basis(d).iter().map(|m| m.name(&c)).collect() };
        assert_eq!(names(TriDegree::new(5, 3, 5)), ["Q h_1^4"]);
        assert_eq!(names(TriDegree::new(8, 3, 8)), ["Q/rho^3 h_1^4"]);
    }

    #[test]
    fn q_part_infinitely_rho_divisible() {
        let c = cat();
        let w = Window::new(12, (-2, 1)).unwrap();
        let (_, q) = build_e1_negative(&c, &w);
        for m in q.classes() {
            let up = Monomial::q(m.rho + 1, m.ext());
            if w.contains(up.degree(&c)) {
                assert!(q.contains(&c, &up), "{}", up.name(&c));
                assert_eq!(
                    crate::monomial::module_action(&c, crate::monomial::Generator::Rho, &up),
                    Some(*m)
                );
            }
        }
    }

    #[test]
    fn no_gamma_on_low_coweight_generators() {
        let c = cat();
        let w = Window::new(10, (0, 0)).unwrap();
        let (g, _) = build_e1_negative(&c, &w);
        for m in g.classes() {
            assert!(m.ext().degree(&c).coweight() >= 2, "{}", m.name(&c));
            assert_eq!(m.tau as i64, m.ext().degree(&c).coweight() - 1);
        }
        let h1 = Classes::new(&c).h1_pow(1).unwrap();
        assert!(g.classes().all(|m| m.ext() != h1));
    }

    #[test]
    fn negative_coweight_gamma_above_vanishing_line_comes_from_h0_tower() {
        let c = cat();
        let w = Window::new(24, (-2, -1)).unwrap();
        let (g, _) = build_e1_negative(&c, &w);
        let unit = c.unit().unwrap();
        let mut exceptions = 0;
        for (d, basis) in g.iter() {
            if d.s > 0 && 2 * d.f > d.s + 3 {
                // only gamma/(rho^j tau) h0^b, whose Ext part sits in stem 0
                for m in basis {
                    assert_eq!((m.family, m.tau, m.h1), (unit, 1, 0), "{}", m.name(&c));
                    assert!(m.rho >= 1 && d.coweight() == -2);
                    exceptions += 1;
                }
            }
        }
        assert!(exceptions > 0);
        assert!(g.contains(&c, &Monomial::gamma(1, 1, Classes::new(&c).h0_pow(3))));
    }

    /// Brute-force enumeration of all exponent tuples up to generous bounds.
    fn brute_dim(c: &Catalog, w: &Window, d: TriDegree) -> usize {
        let mut n = 0;
        for cone in [Cone::Positive, Cone::Gamma, Cone::Q] {
            for fam in c.ids() {
                for k in 0..4 {
                    for rho in 0..16 {
                        for tau in 0..16 {
                            for h0 in 0..16 {
                                for h1 in 0..16 {
                                    let m = Monomial {
                                        cone,
                                        family: fam,
                                        k,
                                        rho,
                                        tau,
                                        h0,
                                        h1,
                                    };
                                    if m.is_valid(c) && m.degree(c) == d && w.contains(d) {
                                        n += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn dimensions_match_brute_force() {
        let c = cat();
        let w = Window::with_bounds(-1, 6, (-2, 1), 6).unwrap();
        let e1 = E1Page::build(&c, w);
        for s in -1..=6 {
            for f in 0..=6 {
                for cw in -2..=1 {
                    let d = TriDegree::new(s, f, s - cw);
                    assert_eq!(e1.all().dim(d), brute_dim(&c, &w, d), "{d}");
                }
            }
        }
    }
}
