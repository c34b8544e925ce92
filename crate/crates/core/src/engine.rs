//! Page turning for the ρ-Bockstein spectral sequence.

use std::collections::BTreeMap;

use crate::catalog::Catalog;
use crate::cone::{E1Page, Window};
use crate::degree::TriDegree;
use crate::error::{Error, Result};
use crate::f2::{kernel_basis, F2Matrix, F2Vector, Subspace};
use crate::leibniz::Differentials;
use crate::monomial::{Cone, Element, Generator, Monomial};
use crate::rules::{DifferentialRule, RuleInstance};
use crate::space::TrigradedSpace;

/// Pages above this run only where rules give nonzero values.
pub const GLOBAL_PAGES: u32 = 3;

/// Cycles and boundaries in one degree, as subspaces of E₁ in that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeState {
    pub cycles: Subspace,
    pub boundaries: Subspace,
}

impl DegreeState {
    fn new(n: usize) -> Self {
        DegreeState {
            cycles: Subspace::full(n),
            boundaries: Subspace::new(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.cycles.dim() - self.boundaries.dim()
    }

    /// Representatives of `Z/B`: reduced modulo `B`, in echelon form.
    pub fn reps(&self) -> Vec<F2Vector> {
        self.cycles.complement_reps(&self.boundaries)
    }

    /// Coordinates of a cycle in terms of [`Self::reps`].
    fn coords(&self, reps: &[F2Vector], v: &F2Vector) -> Vec<bool> {
        let mut w = v.clone();
        self.boundaries.reduce(&mut w);
        reps.iter()
            .map(|r| w.get(r.first_one().expect("nonzero rep")))
            .collect()
    }
}

/// A nonzero differential recorded while turning a page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialRecord {
    pub page: u32,
    pub source_degree: TriDegree,
    pub source: Element,
    pub target: Element,
}

/// A class whose differential could not be decided on pages 1–3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Underdetermined {
    pub page: u32,
    pub degree: TriDegree,
    pub class: String,
}

/// Two factorizations giving different values for the same `d_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizConflict {
    pub page: u32,
    pub class: String,
    pub values: Vec<(String, String)>,
}

/// One page `E_r` with its differential.
#[derive(Clone, Debug)]
pub struct BocksteinPage {
    pub r: u32,
    pub states: BTreeMap<TriDegree, DegreeState>,
    /// Images of [`DegreeState::reps`] for degrees with a nonzero map,
    /// reduced modulo the target boundaries.
    pub images: BTreeMap<TriDegree, Vec<F2Vector>>,
}

impl BocksteinPage {
    pub fn dim(&self, d: TriDegree) -> usize {
        self.states.get(&d).map_or(0, DegreeState::dim)
    }
}

#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    pub strict: bool,
    /// Last page to run; defaults to one past the largest ρ-exponent in the window.
    pub max_page: Option<u32>,
    pub extra_rules: Vec<RuleInstance>,
}

/// The result of running the spectral sequence over a window.
#[derive(Clone, Debug)]
pub struct BocksteinRun {
    pub window: Window,
    pub e1: E1Page,
    /// `E_r` before the page-`r` differential, for `r = 1..`.
    pub pages: Vec<BocksteinPage>,
    /// E∞ in the window.
    pub e_inf: BTreeMap<TriDegree, DegreeState>,
    pub differentials: Vec<DifferentialRecord>,
    pub underdetermined: Vec<Underdetermined>,
    pub conflicts: Vec<LeibnizConflict>,
    /// Degrees where `d ∘ d` failed to vanish.
    pub dd_failures: Vec<(u32, TriDegree)>,
}

pub(crate) fn to_vector(space: &TrigradedSpace, d: TriDegree, e: &Element) -> Option<F2Vector> {
    let n = space.dim(d);
    let mut v = F2Vector::zero(n);
    for m in e.terms() {
        v.toggle(space.index_of(d, m)?);
    }
    Some(v)
}

pub(crate) fn to_element(space: &TrigradedSpace, d: TriDegree, v: &F2Vector) -> Element {
    let basis = space.basis(d);
    v.ones().map(|i| basis[i]).collect()
}

struct PageTurner<'a> {
    cat: &'a Catalog,
    space: &'a TrigradedSpace,
    window: Window,
    diffs: Differentials<'a>,
    strict: bool,
}

impl PageTurner<'_> {
    /// `d_r` on one representative, or `None` if it is not decided.
    fn apply(
        &self,
        r: u32,
        d: TriDegree,
        rep: &F2Vector,
        target: &DegreeState,
        run: &mut BocksteinRun,
    ) -> Result<Option<F2Vector>> {
        let t = d + TriDegree::BOCKSTEIN_SHIFT;
        let mut total = F2Vector::zero(self.space.dim(t));
        let mut decided = true;
        for m in to_element(self.space, d, rep).terms() {
            match self.apply_monomial(r, d, m, target, run)? {
                Some(v) => total.add_assign(&v),
                None => decided = false,
            }
        }
        Ok(decided.then_some(total))
    }

    fn apply_monomial(
        &self,
        r: u32,
        d: TriDegree,
        m: &Monomial,
        target: &DegreeState,
        run: &mut BocksteinRun,
    ) -> Result<Option<F2Vector>> {
        let t = d + TriDegree::BOCKSTEIN_SHIFT;
        let dets = self.diffs.determinations(m, r)?;
        let mut values: Vec<(String, F2Vector)> = Vec::new();
        for det in dets {
            let Some(mut v) = to_vector(self.space, t, &det.value) else {
                return Err(Error::OutOfWindow(format!(
                    "d_{r}({}) = {} via {}",
                    m.name(self.cat),
                    det.value.name(self.cat),
                    det.via
                )));
            };
            target.boundaries.reduce(&mut v);
            values.push((det.via, v));
        }
        let Some((_, first)) = values.first() else {
            return Ok(None);
        };
        if values.iter().any(|(_, v)| v != first) {
            let conflict = LeibnizConflict {
                page: r,
                class: m.name(self.cat),
                values: values
                    .iter()
                    .map(|(via, v)| (via.clone(), to_element(self.space, t, v).name(self.cat)))
                    .collect(),
            };
            if self.strict {
                return Err(Error::Violations(format!(
                    "Leibniz rule inconsistent for d_{r}({}): {:?}",
                    conflict.class, conflict.values
                )));
            }
            run.conflicts.push(conflict);
        }
        Ok(Some(first.clone()))
    }

    fn turn(
        &self,
        r: u32,
        states: &BTreeMap<TriDegree, DegreeState>,
        run: &mut BocksteinRun,
    ) -> Result<BocksteinPage> {
        let mut images = BTreeMap::new();
        for (&d, state) in states {
            if state.dim() == 0 {
                continue;
            }
            let t = d + TriDegree::BOCKSTEIN_SHIFT;
            let Some(target) = states.get(&t).filter(|s| s.dim() > 0) else {
                continue;
            };
            let mut imgs = Vec::new();
            for rep in state.reps() {
                let u = match self.apply(r, d, &rep, target, run)? {
                    Some(u) => u,
                    None => {
                        if r <= GLOBAL_PAGES {
                            let class = to_element(self.space, d, &rep).name(self.cat);
                            if self.strict {
                                return Err(Error::Violations(format!(
                                    "underdetermined d_{r}({class}) at {d}"
                                )));
                            }
                            run.underdetermined.push(Underdetermined {
                                page: r,
                                degree: d,
                                class,
                            });
                        }
                        F2Vector::zero(self.space.dim(t))
                    }
                };
                if !target.cycles.contains(&u) {
                    return Err(Error::NotACycle {
                        class: to_element(self.space, d, &rep).name(self.cat),
                        degree: d,
                        page: r,
                    });
                }
                if !u.is_zero() {
                    run.differentials.push(DifferentialRecord {
                        page: r,
                        source_degree: d,
                        source: to_element(self.space, d, &rep),
                        target: to_element(self.space, t, &u),
                    });
                }
                imgs.push(u);
            }
            if imgs.iter().any(|u| !u.is_zero()) {
                images.insert(d, imgs);
            }
        }
        let page = BocksteinPage {
            r,
            states: states.clone(),
            images,
        };
        self.check_dd(&page, run);
        Ok(page)
    }

    fn check_dd(&self, page: &BocksteinPage, run: &mut BocksteinRun) {
        for (&d, imgs) in &page.images {
            let t = d + TriDegree::BOCKSTEIN_SHIFT;
            let Some(t_imgs) = page.images.get(&t) else {
                continue;
            };
            let t2 = t + TriDegree::BOCKSTEIN_SHIFT;
            let t_state = &page.states[&t];
            let t_reps = t_state.reps();
            let t2_state = &page.states[&t2];
            for u in imgs {
                let mut dd = F2Vector::zero(self.space.dim(t2));
                for (c, img) in t_state.coords(&t_reps, u).into_iter().zip(t_imgs) {
                    if c {
                        dd.add_assign(img);
                    }
                }
                if !t2_state.boundaries.contains(&dd) {
                    run.dd_failures.push((page.r, d));
                }
            }
        }
    }
}

fn next_states(page: &BocksteinPage, space: &TrigradedSpace) -> BTreeMap<TriDegree, DegreeState> {
    let mut next = page.states.clone();
    for (&d, imgs) in &page.images {
        let state = &page.states[&d];
        let reps = state.reps();
        let t = d + TriDegree::BOCKSTEIN_SHIFT;
        let m = F2Matrix::from_columns(space.dim(t), imgs).expect("image dimensions agree");
        let mut cycles = state.boundaries.clone();
        for combo in kernel_basis(&m) {
            let mut v = F2Vector::zero(space.dim(d));
            for i in combo.ones() {
                v.add_assign(&reps[i]);
            }
            cycles.insert(v);
        }
        next.get_mut(&d).expect("state present").cycles = cycles;
        let tb = &mut next.get_mut(&t).expect("target present").boundaries;
        for u in imgs {
            tb.insert(u.clone());
        }
    }
    next
}

/// Runs the Bockstein spectral sequence over `window`.
pub fn run_bockstein(
    cat: &Catalog,
    rules: &[DifferentialRule],
    window: Window,
    opts: &EngineOptions,
) -> Result<BocksteinRun> {
    let e1 = E1Page::build(cat, window);
    let space = e1.all().clone();
    let max_page = opts
        .max_page
        .unwrap_or_else(|| space.classes().map(|m| m.rho).max().unwrap_or(0) + 1);
    let turner = PageTurner {
        cat,
        space: &space,
        window,
        diffs: Differentials::new(cat, rules).with_instances(opts.extra_rules.clone()),
        strict: opts.strict,
    };
    let _ = turner.window;
    let mut run = BocksteinRun {
        window,
        e1,
        pages: Vec::new(),
        e_inf: BTreeMap::new(),
        differentials: Vec::new(),
        underdetermined: Vec::new(),
        conflicts: Vec::new(),
        dd_failures: Vec::new(),
    };
    let mut states: BTreeMap<TriDegree, DegreeState> = space
        .iter()
        .map(|(d, b)| (d, DegreeState::new(b.len())))
        .collect();
    for r in 1..=max_page {
        let page = turner.turn(r, &states, &mut run)?;
        states = next_states(&page, &space);
        run.pages.push(page);
    }
    run.e_inf = states;
    if opts.strict && !run.dd_failures.is_empty() {
        return Err(Error::Violations(format!(
            "d∘d ≠ 0 at {:?}",
            run.dd_failures
        )));
    }
    Ok(run)
}

impl BocksteinRun {
    pub fn space(&self) -> &TrigradedSpace {
        self.e1.all()
    }

    /// E∞ classes in a degree, as representatives.
    pub fn survivors(&self, d: TriDegree) -> Vec<Element> {
        self.e_inf.get(&d).map_or_else(Vec::new, |s| {
            s.reps()
                .iter()
                .map(|v| to_element(self.space(), d, v))
                .collect()
        })
    }

    pub fn e_inf_dim(&self, d: TriDegree) -> usize {
        self.e_inf.get(&d).map_or(0, DegreeState::dim)
    }

    /// Whether a single class is nonzero in E∞.
    pub fn survives(&self, cat: &Catalog, m: &Monomial) -> bool {
        let d = m.degree(cat);
        let Some(state) = self.e_inf.get(&d) else {
            return false;
        };
        let Some(v) = to_vector(self.space(), d, &Element::single(*m)) else {
            return false;
        };
        state.cycles.contains(&v) && !state.boundaries.contains(&v)
    }

    /// The page-`r` differential records with the given source cone.
    pub fn differentials_from(&self, cone: Cone) -> impl Iterator<Item = &DifferentialRecord> {
        self.differentials
            .iter()
            .filter(move |rec| rec.source.terms().any(|m| m.cone == cone))
    }
}

/// `ρ·v` on E₁ vectors from degree `d` to `d + deg ρ`.
pub(crate) fn rho_times(
    cat: &Catalog,
    space: &TrigradedSpace,
    d: TriDegree,
    v: &F2Vector,
) -> Option<F2Vector> {
    let e = to_element(space, d, v).act(cat, Generator::Rho);
    to_vector(space, d + cat.rho, &e)
}
