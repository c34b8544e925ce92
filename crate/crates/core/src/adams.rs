//! Adams spectral sequence over the Bockstein E∞ in coweight 0: exclusion
//! of differentials, hidden ρ-extensions and the homotopy consequences.

use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::Catalog;
use crate::cone::ext_elements;
use crate::degree::TriDegree;
use crate::engine::{to_element, to_vector, BocksteinRun, DegreeState};
use crate::error::{Error, Result};
use crate::f2::{kernel_basis, F2Matrix, F2Vector};
use crate::monomial::{module_action, Classes, Cone, Element, ExtElement, Generator, Monomial};

/// Largest multiplier power tried when excluding incoming differentials.
pub const MAX_LINEARITY_POWER: u32 = 8;

/// Why no Adams differential touches a region class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusion {
    pub class: Element,
    pub degree: TriDegree,
    pub outgoing: String,
    pub incoming: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdamsReport {
    pub excluded: Vec<Exclusion>,
    pub unexcluded: Vec<String>,
    /// Classes for which some candidate needs data beyond the window.
    pub boundary: BTreeSet<(TriDegree, String)>,
}

impl AdamsReport {
    pub fn is_clean(&self) -> bool {
        self.unexcluded.is_empty()
    }
}

/// `ρ·{Qh1^k} = {h1^k}` in homotopy, invisible in E∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HiddenExtension {
    pub source: Monomial,
    pub target: Monomial,
}

/// Adams E∞ in the region: the Bockstein E∞ plus hidden ρ-extensions.
#[derive(Clone, Debug)]
pub struct AdamsEinf<'a> {
    pub run: &'a BocksteinRun,
    pub region: BTreeSet<Monomial>,
    pub hidden: Vec<HiddenExtension>,
}

fn in_vanishing_zone(d: TriDegree) -> bool {
    d.coweight() < 0 && d.s > 0 && 2 * d.f > d.s + 3
}

fn einf(run: &BocksteinRun, d: TriDegree) -> Option<&DegreeState> {
    run.e_inf.get(&d).filter(|s| s.dim() > 0)
}

fn step(cat: &Catalog, g: Generator) -> TriDegree {
    match g {
        Generator::H0 => cat.h0,
        Generator::H1 => cat.h1,
        Generator::Rho => cat.rho,
        Generator::Tau => cat.tau,
    }
}

/// `g^n` applied to the E∞ representatives at `d`, each reduced modulo the
/// boundaries at the target; `None` if the target is not reliably computed.
fn power_images(
    run: &BocksteinRun,
    cat: &Catalog,
    g: Generator,
    n: u32,
    d: TriDegree,
    reps: &[F2Vector],
) -> Option<Vec<F2Vector>> {
    let t = d + step(cat, g) * i64::from(n);
    if !run.window.contains(t) || run.window.is_edge(t) {
        return None;
    }
    let state = run.e_inf.get(&t)?;
    reps.iter()
        .map(|v| {
            let mut e = to_element(run.space(), d, v);
            for _ in 0..n {
                e = e.act(cat, g);
            }
            let mut w = to_vector(run.space(), t, &e)?;
            state.boundaries.reduce(&mut w);
            Some(w)
        })
        .collect()
}

/// Reason no class in E∞ at `source` can hit E∞ at `target`: every image
/// must be killed by each `g^n` that annihilates the source group, and the
/// common kernel on the target group is zero.
fn exclude_incoming(
    run: &BocksteinRun,
    cat: &Catalog,
    source: TriDegree,
    target: TriDegree,
) -> Verdict {
    if !run.window.contains(source) {
        return Verdict::Boundary;
    }
    if einf(run, source).is_none() {
        return Verdict::Excluded("no sources".into());
    }
    let Some(state) = einf(run, target) else {
        return Verdict::Excluded("target group zero".into());
    };
    let reps = state.reps();
    let mut truncated = false;
    let mut columns: Vec<F2Vector> = vec![F2Vector::zero(0); reps.len()];
    let mut used = Vec::new();
    for (g, name) in [(Generator::H1, "h1"), (Generator::H0, "h0")] {
        for n in 1..=MAX_LINEARITY_POWER {
            let s = source + step(cat, g) * i64::from(n);
            if !run.window.contains(s) || run.window.is_edge(s) {
                truncated = true;
                break;
            }
            if einf(run, s).is_some() {
                continue;
            }
            let Some(imgs) = power_images(run, cat, g, n, target, &reps) else {
                truncated = true;
                break;
            };
            for (col, img) in columns.iter_mut().zip(imgs) {
                let bits: Vec<bool> = (0..col.len())
                    .map(|i| col.get(i))
                    .chain((0..img.len()).map(|i| img.get(i)))
                    .collect();
                *col = F2Vector::from_bits(&bits);
            }
            used.push(format!("{name}^{n}"));
            break;
        }
    }
    let rows = columns.first().map_or(0, F2Vector::len);
    let m = F2Matrix::from_columns(rows, &columns).expect("columns have equal length");
    if kernel_basis(&m).is_empty() {
        Verdict::Excluded(format!("{}-linearity", used.join(" and ")))
    } else if truncated {
        Verdict::Boundary
    } else {
        Verdict::Open
    }
}

enum Verdict {
    Excluded(String),
    /// Needs data beyond the window.
    Boundary,
    Open,
}

/// A basis of E∞ in coweight 0 above the line, by degree: surviving basis
/// monomials chosen greedily, padded with representatives if needed.
pub fn computed_region(run: &BocksteinRun) -> BTreeMap<TriDegree, Vec<Element>> {
    let mut out = BTreeMap::new();
    for (d, state) in &run.e_inf {
        let d = *d;
        if d.coweight() != 0 || !d.above_bl_line() || !run.window.in_census(d) || state.dim() == 0 {
            continue;
        }
        let mut span = state.boundaries.clone();
        let mut chosen = Vec::new();
        for m in run.space().basis(d) {
            let e = Element::single(*m);
            let v = to_vector(run.space(), d, &e).expect("basis class");
            if state.cycles.contains(&v) && span.insert(v) {
                chosen.push(e);
            }
        }
        for v in state.reps() {
            if span.insert(v.clone()) {
                chosen.push(to_element(run.space(), d, &v));
            }
        }
        out.insert(d, chosen);
    }
    out
}

/// Checks that no Adams differential has a region class as source or target.
pub fn adams_no_differentials(run: &BocksteinRun, cat: &Catalog) -> AdamsReport {
    let mut report = AdamsReport::default();
    let w = run.window;
    for (d, classes) in computed_region(run) {
        for m in classes {
            let mut outgoing = BTreeSet::new();
            let mut incoming = BTreeSet::new();
            let mut failed = Vec::new();
            for r in 2.. {
                let t = d + TriDegree::new(-1, r, 0);
                let s = d + TriDegree::new(1, -r, 0);
                if t.f > w.max_f && s.f < 0 {
                    break;
                }
                if in_vanishing_zone(t) && einf(run, t).is_none() {
                    outgoing.insert("vanishing region".to_string());
                } else if w.contains(t) && einf(run, t).is_none() {
                    outgoing.insert("target group zero".to_string());
                } else if !w.contains(t) && t.s > 0 && 2 * t.f > t.s + 3 {
                    outgoing.insert("vanishing region".to_string());
                } else if w.contains(t) || t.f <= w.max_f {
                    failed.push(format!("d_{r} from {} at {d}", m.name(cat)));
                }
                if s.f >= 0 {
                    match exclude_incoming(run, cat, s, d) {
                        Verdict::Excluded(reason) => {
                            incoming.insert(reason);
                        }
                        Verdict::Boundary => {
                            report.boundary.insert((d, m.name(cat)));
                        }
                        Verdict::Open => failed.push(format!("d_{r} into {} at {d}", m.name(cat))),
                    }
                }
            }
            report.unexcluded.extend(failed);
            report.excluded.push(Exclusion {
                class: m,
                degree: d,
                outgoing: outgoing.into_iter().collect::<Vec<_>>().join(", "),
                incoming: incoming.into_iter().collect::<Vec<_>>().join(", "),
            });
        }
    }
    report
}

/// Links `Qh1^k → h1^k` for `k ≥ 4` with both classes in the census.
/// No other hidden ρ-extensions into the region are installed.
pub fn install_hidden_rho_extensions<'a>(run: &'a BocksteinRun, cat: &Catalog) -> AdamsEinf<'a> {
    let region: BTreeSet<Monomial> = computed_region(run)
        .into_values()
        .flatten()
        .filter_map(|e| match e.terms().collect::<Vec<_>>()[..] {
            [m] => Some(*m),
            _ => None,
        })
        .collect();
    let cl = Classes::new(cat);
    let mut hidden = Vec::new();
    for k in 4.. {
        let Some(h) = cl.h1_pow(k) else { break };
        let target = Monomial::positive(0, 0, h);
        let source = Monomial::q(0, h);
        if !run.window.in_census(source.degree(cat)) {
            break;
        }
        if region.contains(&source) && region.contains(&target) {
            hidden.push(HiddenExtension { source, target });
        }
    }
    AdamsEinf {
        run,
        region,
        hidden,
    }
}

impl AdamsEinf<'_> {
    /// The region class `x` with `ρ·x = m` in homotopy, if any.
    fn rho_preimage(&self, cat: &Catalog, m: &Monomial) -> Result<Option<Monomial>> {
        if let Some(h) = self.hidden.iter().find(|h| h.target == *m) {
            return Ok(Some(h.source));
        }
        let pre = match m.cone {
            Cone::Positive if m.rho > 0 => Monomial {
                rho: m.rho - 1,
                ..*m
            },
            Cone::Q => Monomial {
                rho: m.rho + 1,
                ..*m
            },
            _ => return Ok(None),
        };
        if !self.run.window.in_census(pre.degree(cat)) {
            return Err(Error::OutOfWindow(format!(
                "rho-division of {} leaves the window",
                m.name(cat)
            )));
        }
        debug_assert_eq!(module_action(cat, Generator::Rho, &pre), Some(*m));
        Ok(self.region.contains(&pre).then_some(pre))
    }

    /// The longest chain `η^k = ρ^n β`; returns `(n, detector of β)`.
    pub fn rho_division_chain(&self, cat: &Catalog, k: u32) -> Result<(u32, Monomial)> {
        let cl = Classes::new(cat);
        let h = cl
            .h1_pow(k)
            .ok_or_else(|| Error::OutOfWindow(format!("h_1^{k} not in the catalog")))?;
        let mut cur = Monomial::positive(0, 0, h);
        if !self.region.contains(&cur) {
            return Err(Error::OutOfWindow(format!(
                "h_1^{k} outside the census window"
            )));
        }
        let mut n = 0;
        while let Some(pre) = self.rho_preimage(cat, &cur)? {
            cur = pre;
            n += 1;
        }
        Ok((n, cur))
    }

    pub fn rho_divisibility(&self, cat: &Catalog, k: u32) -> Result<u32> {
        self.rho_division_chain(cat, k).map(|(n, _)| n)
    }
}

/// Closed form: `k - 1` if `4 | k`, else `4⌊k/4⌋`.
pub fn rho_divisibility_closed(k: u32) -> u32 {
    if k.is_multiple_of(4) {
        k.saturating_sub(1)
    } else {
        4 * (k / 4)
    }
}

/// Exponent `m` with `φ(π_{k,k}) = 2^m Z`: the least `n` with `η^n`
/// divisible by `ρ^{k-n}`, since `|φ(ρ)| = 1` and `|φ(η)| = 2`.
pub fn fixed_point_image(k: u32, rho_div: impl Fn(u32) -> Result<u32>) -> Result<u32> {
    for n in 0..=k {
        let div = if n == 0 { 0 } else { rho_div(n)? };
        if div >= k - n {
            return Ok(n);
        }
    }
    unreachable!("n = k always qualifies")
}

/// Largest `m` with `η^k` divisible by `2^m`, via `η^{k-m}` divisible by `ρ^m`.
pub fn two_divisibility(k: u32, rho_div: impl Fn(u32) -> Result<u32>) -> Result<u32> {
    if k < 5 {
        return Err(Error::InvalidArgument(format!(
            "2-divisibility needs k >= 5, got {k}"
        )));
    }
    let mut best = 0;
    for m in 1..k {
        if rho_div(k - m)? >= m {
            best = m;
        }
    }
    Ok(best)
}

/// Classical classes of the catalog: τ-free Ext elements, by stem.
pub fn classical_at_stem(cat: &Catalog, stem: i64, max_f: i64) -> Vec<ExtElement> {
    let mut out: Vec<ExtElement> = ext_elements(cat, max_f)
        .into_iter()
        .filter(|x| !x.is_tau_torsion(cat) && x.degree(cat).s == stem)
        .collect();
    out.sort_by_key(|x| (x.degree(cat).f, x.name(cat)));
    out
}

/// The classical detector of the underlying map of the class detected by `m`.
pub fn underlying_map(cat: &Catalog, m: &Monomial) -> Result<ExtElement> {
    let d = m.degree(cat);
    match m.cone {
        Cone::Positive => {
            if m.rho > 0 {
                return Err(Error::InvalidArgument(format!(
                    "{} is rho-divisible, so its underlying class is zero",
                    m.name(cat)
                )));
            }
            if m.tau > 0 {
                return Err(Error::InvalidArgument(format!(
                    "{} is not in the region",
                    m.name(cat)
                )));
            }
            Ok(m.ext())
        }
        Cone::Gamma | Cone::Q => {
            let candidates: Vec<ExtElement> = classical_at_stem(cat, d.s, 2 * d.s + 8)
                .into_iter()
                .filter(|x| x.degree(cat).f > d.f)
                .collect();
            match candidates.as_slice() {
                [x] => Ok(*x),
                _ => Err(Error::AmbiguousDetector {
                    class: m.name(cat),
                    candidates: candidates.iter().map(|x| x.name(cat)).collect(),
                }),
            }
        }
    }
}

/// The detector of an element of `M(2^k)`: `U(β)` for the maximal
/// ρ-desuspension `β` of `η^k`.
pub fn mahowald_invariant_of_2k(
    adams: &AdamsEinf<'_>,
    cat: &Catalog,
    k: u32,
) -> Result<ExtElement> {
    if k == 0 {
        let unit = Classes::new(cat).unit();
        return Ok(unit);
    }
    let (_, beta) = adams.rho_division_chain(cat, k)?;
    underlying_map(cat, &beta)
}

/// Per-`k` homotopy data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityRecord {
    pub k: u32,
    pub max_rho_power: u32,
    pub max_two_power: Option<u32>,
    pub fixed_point_generator_exponent: u32,
}

pub fn divisibility_records(
    adams: &AdamsEinf<'_>,
    cat: &Catalog,
    ks: impl IntoIterator<Item = u32>,
) -> Result<Vec<DivisibilityRecord>> {
    let div = |n: u32| adams.rho_divisibility(cat, n);
    ks.into_iter()
        .map(|k| {
            Ok(DivisibilityRecord {
                k,
                max_rho_power: div(k)?,
                max_two_power: if k >= 5 {
                    Some(two_divisibility(k, div)?)
                } else {
                    None
                },
                fixed_point_generator_exponent: fixed_point_image(k, div)?,
            })
        })
        .collect()
}

/// `Element` form of a region class, for callers working with vectors.
pub fn region_vector(run: &BocksteinRun, cat: &Catalog, m: &Monomial) -> Option<F2Vector> {
    to_vector(run.space(), m.degree(cat), &Element::single(*m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Window;
    use crate::engine::{run_bockstein, EngineOptions};
    use crate::rules::seed_rules;

    fn closed(k: u32) -> Result<u32> {
        Ok(rho_divisibility_closed(k))
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            [1, 4, 5, 7, 8].map(rho_divisibility_closed),
            [0, 3, 4, 4, 7]
        );
        assert_eq!(fixed_point_image(5, closed).unwrap(), 4);
        assert_eq!(fixed_point_image(1, closed).unwrap(), 1);
        assert_eq!(fixed_point_image(8, closed).unwrap(), 5);
        assert_eq!(two_divisibility(5, closed).unwrap(), 1);
        assert_eq!(two_divisibility(8, closed).unwrap(), 3);
        assert_eq!(two_divisibility(9, closed).unwrap(), 4);
        assert!(two_divisibility(4, closed).is_err());
    }

    #[test]
    fn underlying_detectors() {
        let c = Catalog::default();
        let cl = Classes::new(&c);
        let q = |j, n| Monomial::q(j, cl.h1_pow(n).unwrap());
        assert_eq!(underlying_map(&c, &q(2, 4)).unwrap().name(&c), "h_0^3 h_3");
        assert_eq!(underlying_map(&c, &q(3, 5)).unwrap().name(&c), "P h_1");
        let h1sq = Monomial::positive(0, 0, cl.h1_pow(2).unwrap());
        assert_eq!(underlying_map(&c, &h1sq).unwrap().name(&c), "h_1^2");
        assert!(underlying_map(&c, &Monomial::positive(1, 0, cl.h1_pow(2).unwrap())).is_err());
    }

    #[test]
    fn engine_divisibility_and_extensions() {
        let c = Catalog::default();
        let rules = seed_rules(&c).unwrap();
        let run = run_bockstein(
            &c,
            &rules,
            Window::new(16, (-2, 1)).unwrap(),
            &EngineOptions::default(),
        )
        .unwrap();
        let adams = install_hidden_rho_extensions(&run, &c);
        let first = adams.hidden[0];
        assert_eq!(first.source.degree(&c), TriDegree::new(5, 3, 5));
        assert_eq!(first.target.degree(&c), TriDegree::new(4, 4, 4));
        for k in 1..=8 {
            assert_eq!(
                adams.rho_divisibility(&c, k).unwrap(),
                rho_divisibility_closed(k),
                "k = {k}"
            );
        }
        assert_eq!(
            mahowald_invariant_of_2k(&adams, &c, 4).unwrap().name(&c),
            "h_0^3 h_3"
        );
        assert_eq!(
            mahowald_invariant_of_2k(&adams, &c, 5).unwrap().name(&c),
            "P h_1"
        );
        assert_eq!(
            mahowald_invariant_of_2k(&adams, &c, 1).unwrap().name(&c),
            "h_1"
        );
        let report = adams_no_differentials(&run, &c);
        assert!(
            report.is_clean(),
            "{:#?}",
            &report.unexcluded[..report.unexcluded.len().min(10)]
        );
        let qh14 = report
            .excluded
            .iter()
            .find(|e| e.class == Element::single(first.source))
            .unwrap();
        assert!(qh14.outgoing.contains("vanishing region"));
    }
}
