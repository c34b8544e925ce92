//! Differentials forced by the ρ-localized survivor criterion `s + f - 2w = 0`.

use crate::catalog::Catalog;
use crate::degree::TriDegree;
use crate::engine::{to_vector, BocksteinRun, GLOBAL_PAGES};
use crate::error::Result;
use crate::leibniz::Differentials;
use crate::monomial::{Element, ExtElement, Monomial};
use crate::rules::{DifferentialRule, RuleInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A unique class whose `d_r` is otherwise undecided can hit `ρ^r x`.
    Inferred(RuleInstance),
    /// `ρ^r x` is already hit by a known differential on page `r`.
    Known {
        page: u32,
        source: String,
    },
    Ambiguous {
        page: u32,
        candidates: Vec<String>,
    },
    /// Nothing can hit `ρ^r x` on pages `1..=last_page`.
    NoCandidate {
        last_page: u32,
    },
    /// `ρ^r x` or its possible sources leave the window before a decision.
    OutOfWindow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inference {
    pub class: Monomial,
    pub outcome: Outcome,
}

/// Whether `x` survives ρ-localization, i.e. sits on the line `s + f = 2w`.
pub fn satisfies_survivor_criterion(d: TriDegree) -> bool {
    d.s + d.f - 2 * d.w == 0
}

/// The explicitly listed permanent cycles `τ^t P^k x` of the catalog.
pub fn declared_permanents(cat: &Catalog, max_stem: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    for id in cat.ids() {
        let fam = cat.family(id);
        let mut k = fam.k_min;
        loop {
            if !fam.k_in_range(k) {
                break;
            }
            let x = ExtElement::new(id, k);
            if x.degree(cat).s > max_stem {
                break;
            }
            for &(tau, tid) in &cat.permanent_twisted {
                if tid == id {
                    out.push(Monomial::positive(0, tau, x));
                }
            }
            if !fam.is_periodic() {
                break;
            }
            k += 1;
        }
    }
    out.sort();
    out
}

fn alive(run: &BocksteinRun, r: u32, m: &Monomial, d: TriDegree) -> bool {
    let Some(state) = run.pages.get(r as usize - 1).and_then(|p| p.states.get(&d)) else {
        return false;
    };
    let Some(v) = to_vector(run.space(), d, &Element::single(*m)) else {
        return false;
    };
    state.cycles.contains(&v) && !state.boundaries.contains(&v)
}

/// For each listed permanent cycle off the survivor line, finds the first
/// page `r ≤ 3` on which some class with undecided `d_r` could hit `ρ^r x`.
pub fn infer_forced_differentials(
    cat: &Catalog,
    rules: &[DifferentialRule],
    run: &BocksteinRun,
) -> Result<Vec<Inference>> {
    let diffs = Differentials::new(cat, rules);
    let mut out = Vec::new();
    for x in declared_permanents(cat, run.window.census_max) {
        if satisfies_survivor_criterion(x.degree(cat)) {
            continue;
        }
        let mut outcome = None;
        let mut r = 1u32;
        while outcome.is_none() {
            let target = Monomial {
                rho: x.rho + r,
                ..x
            };
            let td = target.degree(cat);
            let sd = td - TriDegree::BOCKSTEIN_SHIFT;
            if r > GLOBAL_PAGES || r as usize > run.pages.len() {
                outcome = Some(Outcome::NoCandidate { last_page: r - 1 });
                break;
            }
            if !run.window.contains(td) || !run.window.in_census(sd) {
                outcome = Some(Outcome::OutOfWindow);
                break;
            }
            if !alive(run, r, &target, td) {
                outcome = Some(Outcome::Known {
                    page: r - 1,
                    source: "earlier page".into(),
                });
                break;
            }
            let mut open = Vec::new();
            for m in run.space().basis(sd) {
                if m.rho != 0 || !alive(run, r, m, sd) {
                    continue;
                }
                let dets = diffs.determinations(m, r)?;
                if dets.is_empty() {
                    open.push(*m);
                } else if dets.iter().any(|d| d.value == Element::single(target)) {
                    outcome = Some(Outcome::Known {
                        page: r,
                        source: m.name(cat),
                    });
                }
            }
            if outcome.is_none() {
                outcome = match open.len() {
                    0 => None,
                    1 => Some(Outcome::Inferred(RuleInstance {
                        k: 0,
                        page: r,
                        source: open[0],
                        target: Element::single(target),
                    })),
                    _ => Some(Outcome::Ambiguous {
                        page: r,
                        candidates: open.iter().map(|m| m.name(cat)).collect(),
                    }),
                };
            }
            r += 1;
        }
        out.push(Inference {
            class: x,
            outcome: outcome.expect("loop exits with an outcome"),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Window;
    use crate::engine::{run_bockstein, EngineOptions};
    use crate::monomial::Classes;
    use crate::rules::seed_rules;

    fn inferred(c: &Catalog) -> Vec<Inference> {
        let mut rules = seed_rules(c).unwrap();
        rules.retain(|r| {
            r.target
                .as_ref()
                .is_none_or(|t| t.cone.is_negative() || t.rho.at(0) != 3)
        });
        let run = run_bockstein(
            c,
            &rules,
            Window::new(14, (0, 8)).unwrap(),
            &EngineOptions::default(),
        )
        .unwrap();
        infer_forced_differentials(c, &rules, &run).unwrap()
    }

    fn find<'a>(list: &'a [Inference], m: &Monomial) -> &'a Outcome {
        &list
            .iter()
            .find(|i| i.class == *m)
            .expect("class listed")
            .outcome
    }

    #[test]
    fn tau_p_h1_and_p_h2_are_forced_on_page_three() {
        let c = Catalog::default();
        let cl = Classes::new(&c);
        let list = inferred(&c);
        let tau_ph1 = Monomial::positive(0, 1, cl.ext("P^k h_1", 1, 0, 0).unwrap());
        let Outcome::Inferred(inst) = find(&list, &tau_ph1) else {
            panic!("{:?}", find(&list, &tau_ph1));
        };
        assert_eq!(inst.page, 3);
        assert_eq!(inst.source.name(&c), "tau^3 h_0^3 h_3");
        let ph2 = Monomial::positive(0, 0, cl.ext("P^k h_2", 1, 0, 0).unwrap());
        let Outcome::Inferred(inst) = find(&list, &ph2) else {
            panic!("{:?}", find(&list, &ph2));
        };
        assert_eq!(inst.page, 3);
        assert_eq!(inst.source.name(&c), "tau^3 h_1 c_0");
    }

    #[test]
    fn survivor_line_classes_are_skipped() {
        let c = Catalog::default();
        let cl = Classes::new(&c);
        let h1 = Monomial::positive(0, 0, cl.h1_pow(1).unwrap());
        assert!(satisfies_survivor_criterion(h1.degree(&c)));
        assert!(inferred(&c).iter().all(|i| i.class != h1));
    }
}
