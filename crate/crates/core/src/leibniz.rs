//! Differentials on basis classes from the seeded rules, declared permanent
//! cycles and the Leibniz rule applied to factorizations.

use crate::catalog::Catalog;
use crate::error::Result;
use crate::monomial::{multiply, Cone, Element, ExtElement, Generator, Monomial};
use crate::rules::{DifferentialRule, RuleInstance};

/// Largest τ-power and ρ-power split off a class when searching factorizations.
pub const MAX_TAU_SPLIT: u32 = 4;
pub const MAX_RHO_SPLIT: u32 = 3;

/// What is known about the Bockstein differentials on a single class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `d_r = 0` on every page.
    Permanent,
    /// `d_r = 0` for `r < page` and `d_page = target`.
    Dies { page: u32, target: Element },
    /// `d_r = 0` for `r < page`, nothing known from `page` on.
    UnknownFrom(u32),
}

impl Profile {
    /// Whether the class survives to `E_r`.
    pub fn cycle_before(&self, r: u32) -> bool {
        match self {
            Profile::Permanent => true,
            Profile::Dies { page, .. } | Profile::UnknownFrom(page) => r <= *page,
        }
    }

    /// `d_r` of the class, assuming [`Self::cycle_before`] holds.
    pub fn at(&self, r: u32) -> Option<Element> {
        match self {
            Profile::Permanent => Some(Element::zero()),
            Profile::Dies { page, target } if r == *page => Some(target.clone()),
            Profile::Dies { .. } => Some(Element::zero()),
            Profile::UnknownFrom(page) => (r < *page).then(Element::zero),
        }
    }

    fn dies(page: u32, target: Element) -> Profile {
        if target.is_zero() {
            Profile::UnknownFrom(page + 1)
        } else {
            Profile::Dies { page, target }
        }
    }

    /// Profile of `self · m` for a permanent cycle `m`.
    fn times(self, cat: &Catalog, m: &Monomial) -> Result<Profile> {
        Ok(match self {
            Profile::Dies { page, target } => Profile::dies(page, target.times(cat, m)?),
            p => p,
        })
    }

    /// Negative-cone classes in Bockstein filtration `-j` support no `d_r`
    /// with `r > j`.
    fn clamp_filtration(self, j: u32) -> Profile {
        match self {
            Profile::UnknownFrom(p) if p > j => Profile::Permanent,
            p => p,
        }
    }
}

/// One way of writing a class as a product whose factors have known profiles.
#[derive(Clone, Debug)]
pub struct Determination {
    pub via: String,
    pub value: Element,
}

pub struct Differentials<'a> {
    cat: &'a Catalog,
    rules: &'a [DifferentialRule],
    extra: Vec<RuleInstance>,
}

impl<'a> Differentials<'a> {
    pub fn new(cat: &'a Catalog, rules: &'a [DifferentialRule]) -> Self {
        Differentials {
            cat,
            rules,
            extra: Vec::new(),
        }
    }

    /// Adds rule instances found outside the rule file (e.g. inferred ones).
    pub fn with_instances(mut self, extra: Vec<RuleInstance>) -> Self {
        self.extra = extra;
        self
    }

    pub fn catalog(&self) -> &Catalog {
        self.cat
    }

    /// Every rule instance whose source is exactly `m`.
    pub fn rule_hits(&self, m: &Monomial) -> Vec<RuleInstance> {
        let mut hits: Vec<RuleInstance> = self
            .rules
            .iter()
            .filter_map(|r| r.match_source(self.cat, m))
            .collect();
        hits.extend(self.extra.iter().filter(|i| i.source == *m).cloned());
        hits
    }

    fn rule_profile(&self, m: &Monomial) -> Option<Profile> {
        let hit = self.rule_hits(m).into_iter().next()?;
        Some(Profile::dies(hit.page, hit.target))
    }

    fn unit(&self) -> ExtElement {
        ExtElement::new(self.cat.unit().expect("catalog has a unit family"), 0)
    }

    /// Profile of `τ^b`.
    pub fn tau_profile(&self, b: u32) -> Profile {
        if b == 0 {
            return Profile::Permanent;
        }
        self.rule_profile(&Monomial::positive(0, b, self.unit()))
            .unwrap_or(Profile::UnknownFrom(1))
    }

    /// Profile of a positive-cone class from rules and permanence
    /// declarations alone.
    pub fn positive_declared(&self, m: &Monomial) -> Result<Option<Profile>> {
        debug_assert_eq!(m.cone, Cone::Positive);
        let bare = Monomial { rho: 0, ..*m };
        let rho = Monomial::positive(m.rho, 0, self.unit());
        if let Some(p) = self.rule_profile(&bare) {
            return p.times(self.cat, &rho).map(Some);
        }
        let fam = self.cat.family(m.family);
        let permanent =
            (m.tau == 0 && fam.permanent_cycle) || self.cat.is_twisted_permanent(m.tau, m.family);
        Ok(permanent.then_some(Profile::Permanent))
    }

    /// Profile of a positive-cone class `ρ^a τ^b x`, falling back to the
    /// Leibniz rule on `τ^b · x`.
    pub fn positive_profile(&self, m: &Monomial) -> Result<Profile> {
        if let Some(p) = self.positive_declared(m)? {
            return Ok(p);
        }
        let x = Monomial::positive(m.rho, 0, m.ext());
        if !self.cat.family(m.family).permanent_cycle {
            return Ok(Profile::UnknownFrom(1));
        }
        self.tau_profile(m.tau).times(self.cat, &x)
    }

    /// `d_r(γ/(ρ^j τ^i))` solved from `τ^i · γ/(ρ^j τ^i) = 0`.
    pub fn derived_gamma_profile(&self, j: u32, i: u32) -> Result<Profile> {
        let coef = Monomial::gamma(j, i, self.unit());
        let p = match self.tau_profile(i) {
            Profile::Dies { page, target } if page <= j => {
                // 0 = d(τ^i)·C + τ^i·d(C), and τ^i is injective on the target degree
                let lhs = target.times(self.cat, &coef)?;
                let mut solved = Element::zero();
                for t in lhs.terms() {
                    let d = Monomial {
                        tau: t.tau + i,
                        ..*t
                    };
                    solved.add_monomial(d);
                }
                Profile::dies(page, solved)
            }
            Profile::Dies { .. } => Profile::Permanent,
            p => p,
        };
        Ok(p.clamp_filtration(j))
    }

    /// Profiles of `γ/(ρ^j τ^i)`: the seeded rule (if any) and the derived one.
    pub fn gamma_profiles(&self, j: u32, i: u32) -> Result<Vec<(&'static str, Profile)>> {
        let coef = Monomial::gamma(j, i, self.unit());
        let mut out = Vec::new();
        if let Some(p) = self.rule_profile(&coef) {
            out.push(("rule", p.clamp_filtration(j)));
        }
        out.push(("relation", self.derived_gamma_profile(j, i)?));
        Ok(out)
    }

    /// Profile of `Q/ρ^j x` from a rule on some `Q/ρ^J x`, moved along the
    /// ρ-tower.
    pub fn q_profile(&self, j: u32, x: ExtElement) -> Result<Profile> {
        let max_j = j + 64;
        for big_j in 0..=max_j {
            let src = Monomial::q(big_j, x);
            let Some(hit) = self.rule_hits(&src).into_iter().next() else {
                continue;
            };
            let p = if j >= big_j {
                let shift = j - big_j;
                let divided: Element = hit
                    .target
                    .terms()
                    .map(|t| Monomial {
                        rho: t.rho + shift,
                        ..*t
                    })
                    .collect();
                Profile::dies(hit.page, divided)
            } else {
                let mut t = hit.target.clone();
                for _ in j..big_j {
                    t = t.act(self.cat, Generator::Rho);
                }
                Profile::dies(hit.page, t)
            };
            return Ok(p.clamp_filtration(j));
        }
        Ok(Profile::UnknownFrom(1).clamp_filtration(j))
    }

    /// All determinations of `d_r(m)` from factorizations of `m`.
    pub fn determinations(&self, m: &Monomial, r: u32) -> Result<Vec<Determination>> {
        let mut out = Vec::new();
        if m.cone.is_negative() && r > m.rho {
            out.push(Determination {
                via: "filtration".into(),
                value: Element::zero(),
            });
            return Ok(out);
        }
        match m.cone {
            Cone::Positive => self.positive_determinations(m, r, &mut out)?,
            Cone::Gamma => self.gamma_determinations(m, r, &mut out)?,
            Cone::Q => self.q_determinations(m, r, &mut out)?,
        }
        Ok(out)
    }

    fn leibniz(
        &self,
        r: u32,
        (c, pc): (&Monomial, &Profile),
        (f, pf): (&Monomial, &Profile),
    ) -> Result<Option<Element>> {
        if !pc.cycle_before(r) || !pf.cycle_before(r) {
            return Ok(None);
        }
        let (Some(dc), Some(df)) = (pc.at(r), pf.at(r)) else {
            return Ok(None);
        };
        let mut v = dc.times(self.cat, f)?;
        v.add(&df.times(self.cat, c)?);
        Ok(Some(v))
    }

    fn positive_determinations(
        &self,
        m: &Monomial,
        r: u32,
        out: &mut Vec<Determination>,
    ) -> Result<()> {
        for t in 0..=m.tau {
            let f1 = Monomial::positive(0, m.tau - t, self.unit());
            let f2 = Monomial { tau: t, ..*m };
            if !f2.is_valid(self.cat) {
                continue;
            }
            let p2 = if t == 0 {
                self.positive_profile(&f2)?
            } else {
                match self.positive_declared(&f2)? {
                    Some(p) => p,
                    None => continue,
                }
            };
            let p1 = self.tau_profile(m.tau - t);
            if let Some(v) = self.leibniz(r, (&f1, &p1), (&f2, &p2))? {
                out.push(Determination {
                    via: format!("{} * {}", f1.name(self.cat), f2.name(self.cat)),
                    value: v,
                });
            }
        }
        Ok(())
    }

    fn gamma_determinations(
        &self,
        m: &Monomial,
        r: u32,
        out: &mut Vec<Determination>,
    ) -> Result<()> {
        for a in 0..=MAX_RHO_SPLIT {
            for t in 0..=MAX_TAU_SPLIT {
                let coef = Monomial::gamma(m.rho + a, m.tau + t, self.unit());
                let f = Monomial::positive(a, t, m.ext());
                if !f.is_valid(self.cat) || multiply(self.cat, &coef, &f)? != Some(*m) {
                    continue;
                }
                let pf = self.positive_profile(&f)?;
                for (how, pc) in self.gamma_profiles(m.rho + a, m.tau + t)? {
                    if let Some(v) = self.leibniz(r, (&coef, &pc), (&f, &pf))? {
                        out.push(Determination {
                            via: format!("{} [{how}] * {}", coef.name(self.cat), f.name(self.cat)),
                            value: v,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn q_determinations(&self, m: &Monomial, r: u32, out: &mut Vec<Determination>) -> Result<()> {
        let x = m.ext();
        for e in 0..=x.h1 {
            let atom_x = x.with_h(x.h0, x.h1 - e);
            for a in 0..=MAX_RHO_SPLIT {
                let atom = Monomial::q(m.rho + a, atom_x);
                let Some(h1e) = crate::monomial::Classes::new(self.cat).h1_pow(e) else {
                    continue;
                };
                let f = Monomial::positive(a, 0, h1e);
                if multiply(self.cat, &atom, &f)? != Some(*m) {
                    continue;
                }
                let pa = self.q_profile(m.rho + a, atom_x)?;
                if let Some(v) = self.leibniz(r, (&atom, &pa), (&f, &Profile::Permanent))? {
                    out.push(Determination {
                        via: format!("{} * {}", atom.name(self.cat), f.name(self.cat)),
                        value: v,
                    });
                }
            }
        }
        Ok(())
    }
}
