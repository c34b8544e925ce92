//! Parameterized Bockstein differential rules and their text format.

use std::fmt;
use std::path::Path;

use crate::catalog::{Catalog, FamilyId};
use crate::degree::TriDegree;
use crate::error::{Error, Result};
use crate::monomial::{Cone, Element, ExtElement, Monomial, H};

pub const DEFAULT_RULES: &str = include_str!("../data/rules.txt");

/// `coef·k + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub coef: i64,
    pub constant: i64,
}

impl Affine {
    pub const fn constant(c: i64) -> Self {
        Affine {
            coef: 0,
            constant: c,
        }
    }

    pub fn at(self, k: i64) -> i64 {
        self.coef * k + self.constant
    }

    pub fn parse(text: &str) -> Option<Affine> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return None;
        }
        let mut out = Affine::default();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if let Some(c) = term.strip_suffix('k') {
                let c = if c.is_empty() { 1 } else { c.parse().ok()? };
                out.coef += sign * c;
            } else {
                out.constant += sign * term.parse::<i64>().ok()?;
            }
        }
        Some(out)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coef, self.constant) {
            (0, c) => write!(f, "{c}"),
            (a, c) => {
                match a {
                    1 => write!(f, "k")?,
                    -1 => write!(f, "-k")?,
                    a => write!(f, "{a}k")?,
                }
                match c {
                    0 => Ok(()),
                    c if c > 0 => write!(f, "+{c}"),
                    c => write!(f, "{c}"),
                }
            }
        }
    }
}

/// A basis class whose exponents are affine in the rule parameter `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub cone: Cone,
    pub family: FamilyId,
    pub p: Affine,
    pub rho: Affine,
    pub tau: Affine,
    pub h0: Affine,
    pub h1: Affine,
}

impl Pattern {
    /// Degree at `k`, computed formally (also for `k` where the class is zero).
    pub fn degree(&self, cat: &Catalog, k: i64) -> TriDegree {
        let fam = cat.family(self.family);
        let x =
            fam.base + cat.period * self.p.at(k) + cat.h0 * self.h0.at(k) + cat.h1 * self.h1.at(k);
        let rho = self.rho.at(k);
        match self.cone {
            Cone::Positive => x + cat.rho * rho + cat.tau * self.tau.at(k),
            Cone::Gamma => {
                x + crate::catalog::GAMMA_OVER_TAU - cat.rho * rho - cat.tau * (self.tau.at(k) - 1)
            }
            Cone::Q => x + crate::catalog::Q_SHIFT - cat.rho * rho,
        }
    }

    /// The basis class at `k`, with h0/h1 exponents applied as products.
    /// `None` if the class is zero or some exponent is negative.
    pub fn instantiate(&self, cat: &Catalog, k: i64) -> Option<Monomial> {
        let nonneg = |a: Affine| u32::try_from(a.at(k)).ok();
        let (p, rho, tau, h0, h1) = (
            nonneg(self.p)?,
            nonneg(self.rho)?,
            nonneg(self.tau)?,
            nonneg(self.h0)?,
            nonneg(self.h1)?,
        );
        let mut x = ExtElement::new(self.family, p);
        if !x.is_valid(cat) {
            return None;
        }
        let mut shift = 0;
        for which in
            std::iter::repeat_n(H::H0, h0 as usize).chain(std::iter::repeat_n(H::H1, h1 as usize))
        {
            let (t, next) = x.mul_h(cat, which)?;
            shift += t;
            x = next;
        }
        let m = match self.cone {
            Cone::Positive => Monomial::positive(rho, tau + shift, x),
            Cone::Gamma => Monomial::from_parts(Cone::Gamma, rho, tau.checked_sub(shift)?, x),
            Cone::Q if shift == 0 => Monomial::q(rho, x),
            Cone::Q => return None,
        };
        m.is_valid(cat).then_some(m)
    }

    fn display(&self, cat: &Catalog) -> String {
        let cone = match self.cone {
            Cone::Positive => "pos",
            Cone::Gamma => "gamma",
            Cone::Q => "Q",
        };
        let mut fields = Vec::new();
        for (name, a) in [
            ("P", self.p),
            ("rho", self.rho),
            ("tau", self.tau),
            ("h0", self.h0),
            ("h1", self.h1),
        ] {
            if a != Affine::default() {
                fields.push(format!("{name}={a}"));
            }
        }
        let fam = &cat.family(self.family).name;
        if fields.is_empty() {
            format!("{cone}({fam})")
        } else {
            format!("{cone}({fam}; {})", fields.join(", "))
        }
    }

    fn parse(cat: &Catalog, text: &str) -> std::result::Result<Pattern, String> {
        let text = text.trim();
        let open = text.find('(').ok_or("expected cone(family; ...)")?;
        let body = text[open + 1..]
            .strip_suffix(')')
            .ok_or("missing closing parenthesis")?;
        let cone = match text[..open].trim() {
            "pos" => Cone::Positive,
            "gamma" => Cone::Gamma,
            "Q" => Cone::Q,
            other => return Err(format!("unknown cone `{other}`")),
        };
        let (fam, fields) = body.split_once(';').unwrap_or((body, ""));
        let family = cat
            .id(fam.trim())
            .ok_or_else(|| format!("unknown generator family `{}`", fam.trim()))?;
        let mut pat = Pattern {
            cone,
            family,
            p: Affine::default(),
            rho: Affine::default(),
            tau: Affine::default(),
            h0: Affine::default(),
            h1: Affine::default(),
        };
        for field in fields.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{field}`"))?;
            let val = Affine::parse(val).ok_or_else(|| format!("bad expression `{val}`"))?;
            let slot = match key.trim() {
                "P" => &mut pat.p,
                "rho" => &mut pat.rho,
                "tau" => &mut pat.tau,
                "h0" => &mut pat.h0,
                "h1" => &mut pat.h1,
                other => return Err(format!("unknown field `{other}`")),
            };
            *slot = val;
        }
        if cone == Cone::Q && pat.tau != Affine::default() {
            return Err("Q classes carry no tau exponent".into());
        }
        Ok(pat)
    }
}

/// `d_page(source) = target` for all `k ≥ k_min`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialRule {
    pub page: Affine,
    pub source: Pattern,
    /// `None` records a vanishing differential.
    pub target: Option<Pattern>,
    pub k_min: i64,
}

/// One instance of a rule at a fixed `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub k: i64,
    pub page: u32,
    pub source: Monomial,
    pub target: Element,
}

impl DifferentialRule {
    pub fn instance(&self, cat: &Catalog, k: i64) -> Option<RuleInstance> {
        if k < self.k_min {
            return None;
        }
        let page = u32::try_from(self.page.at(k)).ok().filter(|&r| r >= 1)?;
        let source = self.source.instantiate(cat, k)?;
        let target = match &self.target {
            Some(t) => Element::from_option(t.instantiate(cat, k)),
            None => Element::zero(),
        };
        Some(RuleInstance {
            k,
            page,
            source,
            target,
        })
    }

    /// The instance whose source is `m`, if any.
    pub fn match_source(&self, cat: &Catalog, m: &Monomial) -> Option<RuleInstance> {
        if m.cone != self.source.cone {
            return None;
        }
        let d = m.degree(cat);
        let d0 = self.source.degree(cat, 0);
        let d1 = self.source.degree(cat, 1) - d0;
        let delta = d - d0;
        let k = if d1 == TriDegree::ZERO {
            if delta != TriDegree::ZERO {
                return None;
            }
            self.k_min
        } else {
            let (num, den) = [(delta.s, d1.s), (delta.f, d1.f), (delta.w, d1.w)]
                .into_iter()
                .find(|&(_, den)| den != 0)?;
            if num % den != 0 {
                return None;
            }
            let k = num / den;
            if d1 * k != delta {
                return None;
            }
            k
        };
        self.instance(cat, k).filter(|inst| inst.source == *m)
    }

    pub fn display(&self, cat: &Catalog) -> String {
        let target = match &self.target {
            Some(t) => t.display(cat),
            None => "0".into(),
        };
        format!(
            "d_{}({}) = {} for k >= {}",
            self.page,
            self.source.display(cat),
            target,
            self.k_min
        )
    }

    /// Checks that every instance in `k_min..k_min+span` is homogeneous:
    /// the target sits at the source degree shifted by (-1, 1, 0) and the
    /// Bockstein filtration rises by the page number.
    pub fn check(&self, cat: &Catalog, span: i64) -> Result<()> {
        for k in self.k_min..self.k_min + span {
            let Some(inst) = self.instance(cat, k) else {
                continue;
            };
            let Some(t) = &self.target else { continue };
            let want = self.source.degree(cat, k) + TriDegree::BOCKSTEIN_SHIFT;
            let got = t.degree(cat, k);
            let bad = |msg: String| Error::InvalidArgument(format!("{}: {msg}", self.display(cat)));
            if got != want {
                return Err(bad(format!(
                    "target degree {got} at k={k}, expected {want}"
                )));
            }
            for term in inst.target.terms() {
                let jump = term.bockstein_filtration() - inst.source.bockstein_filtration();
                if jump != i64::from(inst.page) {
                    return Err(bad(format!(
                        "filtration rises by {jump} at k={k}, expected {}",
                        inst.page
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parses a rules file: `page | source | target | k_min` per line.
pub fn parse_rules(cat: &Catalog, text: &str) -> Result<Vec<DifferentialRule>> {
    let mut rules = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: no + 1, msg };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        }
        let page =
            Affine::parse(fields[0]).ok_or_else(|| err(format!("bad page `{}`", fields[0])))?;
        let source = Pattern::parse(cat, fields[1]).map_err(err)?;
        let target = if fields[2] == "0" {
            None
        } else {
            Some(Pattern::parse(cat, fields[2]).map_err(err)?)
        };
        let k_min = fields[3]
            .parse()
            .map_err(|_| err(format!("bad k_min `{}`", fields[3])))?;
        let rule = DifferentialRule {
            page,
            source,
            target,
            k_min,
        };
        rule.check(cat, 6).map_err(|e| err(e.to_string()))?;
        rules.push(rule);
    }
    Ok(rules)
}

/// The shipped rule set.
pub fn seed_rules(cat: &Catalog) -> Result<Vec<DifferentialRule>> {
    parse_rules(cat, DEFAULT_RULES)
}

pub fn load_rules(cat: &Catalog, path: impl AsRef<Path>) -> Result<Vec<DifferentialRule>> {
    parse_rules(cat, &std::fs::read_to_string(path)?)
}
