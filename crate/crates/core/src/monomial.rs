//! Basis classes of the Bockstein E₁-page and their F₂-linear combinations.

use std::collections::BTreeSet;

use crate::catalog::{Catalog, FamilyId};
use crate::degree::TriDegree;
use crate::error::{Error, Result};

/// Which summand of E₁ a class lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cone {
    /// `ρ^a τ^b x`, the summand converging to R-motivic Ext.
    Positive,
    /// `γ/(ρ^j τ^i) x` for τ-free `x`, `i ≥ 1`.
    Gamma,
    /// `Q/ρ^j x` for τ-torsion `x`.
    Q,
}

impl Cone {
    pub fn is_negative(self) -> bool {
        self != Cone::Positive
    }
}

/// A catalog element `P^k (family) h0^h0 h1^h1` of Ext over C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    pub family: FamilyId,
    pub k: u32,
    pub h0: u32,
    pub h1: u32,
}

impl ExtElement {
    pub fn new(family: FamilyId, k: u32) -> Self {
        ExtElement {
            family,
            k,
            h0: 0,
            h1: 0,
        }
    }

    pub fn with_h(mut self, h0: u32, h1: u32) -> Self {
        self.h0 = h0;
        self.h1 = h1;
        self
    }

    pub fn degree(&self, cat: &Catalog) -> TriDegree {
        cat.element_degree(self.family, self.k, self.h0, self.h1)
    }

    /// Whether `(h0, h1)` exponents are legal for the family (within heights,
    /// never both positive, `k` in range).
    pub fn is_valid(&self, cat: &Catalog) -> bool {
        let fam = cat.family(self.family);
        fam.k_in_range(self.k)
            && fam.h0_height.allows(self.h0)
            && fam.h1_height.allows(self.h1)
            && (self.h0 == 0 || self.h1 == 0)
    }

    pub fn is_tau_torsion(&self, cat: &Catalog) -> bool {
        cat.family(self.family).tau_torsion
    }

    /// Multiplies by `h0` (`which = H::H0`) or `h1`. Returns the τ-power that
    /// the product picks up together with the product, or `None` for zero.
    pub fn mul_h(self, cat: &Catalog, which: H) -> Option<(u32, ExtElement)> {
        let fam = cat.family(self.family);
        let (other, height, overflow) = match which {
            H::H0 => (self.h1, fam.h0_height, &fam.h0_overflow),
            H::H1 => (self.h0, fam.h1_height, &fam.h1_overflow),
        };
        if other > 0 {
            return None; // h0 h1 = 0
        }
        let bumped = match which {
            H::H0 => self.with_h(self.h0 + 1, 0),
            H::H1 => self.with_h(0, self.h1 + 1),
        };
        if height.allows(bumped.h0.max(bumped.h1)) {
            return Some((0, bumped));
        }
        let o = overflow.as_ref()?;
        let target = ExtElement {
            family: o.target,
            k: self.k,
            h0: o.h0,
            h1: o.h1,
        };
        target.is_valid(cat).then_some((o.tau, target))
    }

    /// If this element is a pure power `h0^p` or `h1^q` (including `1`),
    /// returns the sequence of multiplications producing it from the unit.
    pub fn as_pure_power(&self, cat: &Catalog) -> Option<(u32, u32)> {
        let d = self.degree(cat);
        let unit = cat.unit()?;
        let candidate = if d == cat.h0 * d.f {
            (d.f as u32, 0)
        } else if d == cat.h1 * d.s && d.s >= 0 {
            (0, d.s as u32)
        } else {
            return None;
        };
        let mut e = ExtElement::new(unit, 0);
        for which in std::iter::repeat_n(H::H0, candidate.0 as usize)
            .chain(std::iter::repeat_n(H::H1, candidate.1 as usize))
        {
            let (t, next) = e.mul_h(cat, which)?;
            if t != 0 {
                return None;
            }
            e = next;
        }
        (e == *self).then_some(candidate)
    }

    pub fn name(&self, cat: &Catalog) -> String {
        let fam = &cat.family(self.family).name;
        let mut tokens: Vec<String> = fam
            .split_whitespace()
            .filter(|t| *t != "P^k")
            .map(str::to_string)
            .collect();
        if tokens == ["1"] {
            tokens.clear();
        }
        bump_token(&mut tokens, "h_0", self.h0);
        bump_token(&mut tokens, "h_1", self.h1);
        let mut out = Vec::new();
        if fam.starts_with("P^k") {
            match self.k {
                0 => {}
                1 => out.push("P".to_string()),
                k => out.push(format!("P^{k}")),
            }
        }
        out.extend(tokens);
        if out.is_empty() {
            "1".to_string()
        } else {
            out.join(" ")
        }
    }
}

fn bump_token(tokens: &mut Vec<String>, base: &str, by: u32) {
    if by == 0 {
        return;
    }
    for t in tokens.iter_mut() {
        let (b, e) = match t.split_once('^') {
            Some((b, e)) => (b.to_string(), e.parse::<u32>().unwrap_or(1)),
            None => (t.clone(), 1),
        };
        if b == base {
            *t = format!("{b}^{}", e + by);
            return;
        }
    }
    let new = if by == 1 {
        base.to_string()
    } else {
        format!("{base}^{by}")
    };
    // keep h_0 before h_1 before everything else
    let pos = tokens
        .iter()
        .position(|t| t.as_str() > new.as_str() || !t.starts_with("h_"))
        .unwrap_or(tokens.len());
    tokens.insert(pos, new);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum H {
    H0,
    H1,
}

/// The four multiplicative generators acting on E₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Rho,
    Tau,
    H0,
    H1,
}

/// A basis element of E₁. Ordering is by (cone, family name, exponents).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub cone: Cone,
    pub family: FamilyId,
    pub k: u32,
    /// `a` in `ρ^a` (positive cone) or `j` in `γ/ρ^j`, `Q/ρ^j`.
    pub rho: u32,
    /// `b` in `τ^b` (positive cone) or `i ≥ 1` in `γ/τ^i`; zero for Q.
    pub tau: u32,
    pub h0: u32,
    pub h1: u32,
}

impl Monomial {
    pub fn positive(rho: u32, tau: u32, x: ExtElement) -> Self {
        Self::from_parts(Cone::Positive, rho, tau, x)
    }

    pub fn gamma(rho: u32, tau: u32, x: ExtElement) -> Self {
        debug_assert!(tau >= 1);
        Self::from_parts(Cone::Gamma, rho, tau, x)
    }

    pub fn q(rho: u32, x: ExtElement) -> Self {
        Self::from_parts(Cone::Q, rho, 0, x)
    }

    pub fn from_parts(cone: Cone, rho: u32, tau: u32, x: ExtElement) -> Self {
        Monomial {
            cone,
            family: x.family,
            k: x.k,
            rho,
            tau,
            h0: x.h0,
            h1: x.h1,
        }
    }

    pub fn ext(&self) -> ExtElement {
        ExtElement {
            family: self.family,
            k: self.k,
            h0: self.h0,
            h1: self.h1,
        }
    }

    pub fn degree(&self, cat: &Catalog) -> TriDegree {
        let x = self.ext().degree(cat);
        match self.cone {
            Cone::Positive => x + cat.rho * i64::from(self.rho) + cat.tau * i64::from(self.tau),
            Cone::Gamma => x + cat.gamma_degree(self.rho, self.tau),
            Cone::Q => x + cat.q_degree(self.rho),
        }
    }

    /// Bockstein filtration: the ρ-exponent, negated in the negative cone.
    pub fn bockstein_filtration(&self) -> i64 {
        match self.cone {
            Cone::Positive => i64::from(self.rho),
            _ => -i64::from(self.rho),
        }
    }

    /// Whether this is a nonzero basis element of E₁.
    pub fn is_valid(&self, cat: &Catalog) -> bool {
        let x = self.ext();
        if !x.is_valid(cat) {
            return false;
        }
        let torsion = x.is_tau_torsion(cat);
        match self.cone {
            Cone::Positive => !(torsion && self.tau > 0),
            Cone::Gamma => self.tau >= 1 && !torsion,
            Cone::Q => self.tau == 0 && torsion,
        }
    }

    pub fn name(&self, cat: &Catalog) -> String {
        let x = self.ext().name(cat);
        let pow = |sym: &str, e: u32| match e {
            0 => String::new(),
            1 => sym.to_string(),
            e => format!("{sym}^{e}"),
        };
        match self.cone {
            Cone::Positive => {
                let mut parts: Vec<String> = [pow("rho", self.rho), pow("tau", self.tau)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect();
                if x != "1" || parts.is_empty() {
                    parts.push(x);
                }
                parts.join(" ")
            }
            Cone::Gamma => {
                let denom = match (self.rho, self.tau) {
                    (0, t) => pow("tau", t),
                    (r, t) => format!("({} {})", pow("rho", r), pow("tau", t)),
                };
                if x == "1" {
                    format!("gamma/{denom}")
                } else {
                    format!("gamma/{denom} {x}")
                }
            }
            Cone::Q => {
                if self.rho == 0 {
                    format!("Q {x}")
                } else {
                    format!("Q/{} {x}", pow("rho", self.rho))
                }
            }
        }
    }
}

/// Applies one of ρ, τ, h0, h1 to a basis class; `None` is zero.
pub fn module_action(cat: &Catalog, gen: Generator, m: &Monomial) -> Option<Monomial> {
    let mut out = *m;
    match (gen, m.cone) {
        (Generator::Rho, Cone::Positive) => out.rho += 1,
        (Generator::Rho, _) => out.rho = m.rho.checked_sub(1)?,
        (Generator::Tau, Cone::Positive) => out.tau += 1,
        (Generator::Tau, Cone::Gamma) => {
            if m.tau <= 1 {
                return None;
            }
            out.tau -= 1;
        }
        (Generator::Tau, Cone::Q) => return None,
        (Generator::H0 | Generator::H1, _) => {
            let which = if gen == Generator::H0 { H::H0 } else { H::H1 };
            let (t, x) = m.ext().mul_h(cat, which)?;
            out = Monomial::from_parts(m.cone, m.rho, m.tau, x);
            match m.cone {
                Cone::Positive => out.tau += t,
                Cone::Gamma => out.tau = out.tau.checked_sub(t).filter(|&i| i >= 1)?,
                Cone::Q => {
                    if t > 0 {
                        return None;
                    }
                }
            }
        }
    }
    out.is_valid(cat).then_some(out)
}

/// Product of two basis classes, `None` for zero. At most one factor may lie
/// in the negative cone, and one of the two Ext parts must be a pure power of
/// h0 or h1 (the only products the engine needs).
pub fn multiply(cat: &Catalog, a: &Monomial, b: &Monomial) -> Result<Option<Monomial>> {
    if a.cone.is_negative() && b.cone.is_negative() {
        return Ok(None);
    }
    let (coef, pos) = if b.cone.is_negative() { (b, a) } else { (a, b) };
    let (mut acc, (p, q)) = if let Some(pq) = pos.ext().as_pure_power(cat) {
        (*coef, pq)
    } else if let Some(pq) = coef.ext().as_pure_power(cat) {
        let unit_part = Monomial::from_parts(coef.cone, coef.rho, coef.tau, pos.ext());
        if coef.cone != Cone::Positive {
            // coefficient with x = pure power, times an impure positive element
            let mut m = unit_part;
            if !m.is_valid(cat) {
                return Ok(None);
            }
            m = match apply_rho_tau(cat, &m, pos.rho, pos.tau) {
                Some(m) => m,
                None => return Ok(None),
            };
            return Ok(apply_h(cat, m, pq));
        }
        let m = Monomial::positive(coef.rho, coef.tau, pos.ext());
        if !m.is_valid(cat) {
            return Ok(None);
        }
        (m, (pq.0, pq.1))
    } else {
        return Err(Error::InvalidArgument(format!(
            "product of two non-pure Ext elements: {} * {}",
            a.name(cat),
            b.name(cat)
        )));
    };
    if pos.ext().as_pure_power(cat).is_some() {
        acc = match apply_rho_tau(cat, &acc, pos.rho, pos.tau) {
            Some(m) => m,
            None => return Ok(None),
        };
        return Ok(apply_h(cat, acc, (p, q)));
    }
    // acc already positive with pos's Ext part; add pos's ρ, τ.
    Ok(apply_rho_tau(cat, &acc, pos.rho, pos.tau).and_then(|m| apply_h(cat, m, (p, q))))
}

fn apply_rho_tau(cat: &Catalog, m: &Monomial, rho: u32, tau: u32) -> Option<Monomial> {
    let mut cur = *m;
    for _ in 0..rho {
        cur = module_action(cat, Generator::Rho, &cur)?;
    }
    for _ in 0..tau {
        cur = module_action(cat, Generator::Tau, &cur)?;
    }
    Some(cur)
}

fn apply_h(cat: &Catalog, m: Monomial, (p, q): (u32, u32)) -> Option<Monomial> {
    let mut cur = m;
    for _ in 0..p {
        cur = module_action(cat, Generator::H0, &cur)?;
    }
    for _ in 0..q {
        cur = module_action(cat, Generator::H1, &cur)?;
    }
    Some(cur)
}

/// An F₂-linear combination of basis classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element(BTreeSet<Monomial>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeSet::new())
    }

    pub fn single(m: Monomial) -> Self {
        let mut s = BTreeSet::new();
        s.insert(m);
        Element(s)
    }

    pub fn from_option(m: Option<Monomial>) -> Self {
        m.map(Self::single).unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_monomial(&mut self, m: Monomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add(&mut self, other: &Element) {
        for m in &other.0 {
            self.add_monomial(*m);
        }
    }

    /// Multiplies every term by `m`.
    pub fn times(&self, cat: &Catalog, m: &Monomial) -> Result<Element> {
        let mut out = Element::zero();
        for t in &self.0 {
            if let Some(p) = multiply(cat, t, m)? {
                out.add_monomial(p);
            }
        }
        Ok(out)
    }

    pub fn act(&self, cat: &Catalog, gen: Generator) -> Element {
        let mut out = Element::zero();
        for t in &self.0 {
            if let Some(p) = module_action(cat, gen, t) {
                out.add_monomial(p);
            }
        }
        out
    }

    pub fn name(&self, cat: &Catalog) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|m| m.name(cat))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl FromIterator<Monomial> for Element {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        let mut e = Element::zero();
        for m in iter {
            e.add_monomial(m);
        }
        e
    }
}

/// Named constructors for the classes that appear in the rule tables.
pub struct Classes<'a> {
    pub cat: &'a Catalog,
}

impl<'a> Classes<'a> {
    pub fn new(cat: &'a Catalog) -> Self {
        Classes { cat }
    }

    pub fn ext(&self, family: &str, k: u32, h0: u32, h1: u32) -> Result<ExtElement> {
        Ok(ExtElement::new(self.cat.require(family)?, k).with_h(h0, h1))
    }

    pub fn unit(&self) -> ExtElement {
        ExtElement::new(self.cat.unit().expect("catalog has a unit family"), 0)
    }

    /// `h0^p` in Ext over C.
    pub fn h0_pow(&self, p: u32) -> ExtElement {
        self.unit().with_h(p, 0)
    }

    /// `h1^n`, which lives in different families depending on `n`.
    pub fn h1_pow(&self, n: u32) -> Option<ExtElement> {
        let mut e = self.unit();
        for _ in 0..n {
            let (t, next) = e.mul_h(self.cat, H::H1)?;
            if t != 0 {
                return None;
            }
            e = next;
        }
        Some(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> Catalog {
        Catalog::default()
    }

    #[test]
    fn degrees_of_named_classes() {
        let c = cat();
        let cl = Classes::new(&c);
        let h1_4 = cl.h1_pow(4).unwrap();
        assert_eq!(Monomial::q(0, h1_4).degree(&c), TriDegree::new(5, 3, 5));
        assert_eq!(Monomial::q(3, h1_4).degree(&c), TriDegree::new(8, 3, 8));
        assert_eq!(
            Monomial::gamma(0, 1, cl.unit()).degree(&c),
            TriDegree::new(0, 0, 2)
        );
        assert_eq!(
            Monomial::gamma(1, 1, cl.unit()).degree(&c),
            TriDegree::new(1, 0, 3)
        );
    }

    #[test]
    fn gamma_coweight_is_minus_i_minus_one() {
        let c = cat();
        let u = Classes::new(&c).unit();
        for i in 1..6 {
            for j in 0..4 {
                assert_eq!(
                    Monomial::gamma(j, i, u).degree(&c).coweight(),
                    -(i as i64) - 1
                );
            }
        }
    }

    #[test]
    fn module_action_examples() {
        let c = cat();
        let cl = Classes::new(&c);
        let u = cl.unit();
        let g = Monomial::gamma(1, 2, u);
        assert_eq!(
            module_action(&c, Generator::Rho, &g),
            Some(Monomial::gamma(0, 2, u))
        );
        assert_eq!(
            module_action(&c, Generator::Tau, &Monomial::gamma(0, 1, u)),
            None
        );
        let h1_4 = cl.h1_pow(4).unwrap();
        assert_eq!(
            module_action(&c, Generator::Rho, &Monomial::q(1, h1_4)),
            Some(Monomial::q(0, h1_4))
        );
        assert_eq!(
            module_action(&c, Generator::Rho, &Monomial::q(0, h1_4)),
            None
        );
        assert_eq!(
            module_action(&c, Generator::Tau, &Monomial::q(2, h1_4)),
            None
        );
        // h0 h1 = 0
        let h1 = cl.h1_pow(1).unwrap();
        assert_eq!(
            module_action(&c, Generator::H0, &Monomial::positive(0, 0, h1)),
            None
        );
        // τ kills τ-torsion
        assert_eq!(
            module_action(&c, Generator::Tau, &Monomial::positive(0, 0, h1_4)),
            None
        );
    }

    #[test]
    fn h0_squared_h2_is_tau_h1_cubed() {
        let c = cat();
        let cl = Classes::new(&c);
        let h0h2 = Monomial::positive(0, 0, cl.ext("P^k h_2", 0, 1, 0).unwrap());
        let got = module_action(&c, Generator::H0, &h0h2).unwrap();
        assert_eq!(got, Monomial::positive(0, 1, cl.h1_pow(3).unwrap()));
        assert_eq!(got.name(&c), "tau h_1^3");
        // in the gamma part the τ is absorbed
        let g = Monomial::gamma(1, 4, cl.ext("P^k h_2", 1, 1, 0).unwrap());
        let got = module_action(&c, Generator::H0, &g).unwrap();
        assert_eq!(got.name(&c), "gamma/(rho tau^3) P h_1^3");
    }

    #[test]
    fn h1_powers_cross_families() {
        let c = cat();
        let cl = Classes::new(&c);
        let names: Vec<String> = (0..7).map(|n| cl.h1_pow(n).unwrap().name(&c)).collect();
        assert_eq!(
            names,
            ["1", "h_1", "h_1^2", "h_1^3", "h_1^4", "h_1^5", "h_1^6"]
        );
        assert_eq!(cl.h1_pow(5).unwrap().as_pure_power(&c), Some((0, 5)));
        assert_eq!(cl.h0_pow(3).as_pure_power(&c), Some((3, 0)));
        assert_eq!(cl.ext("P^k h_1", 1, 0, 0).unwrap().as_pure_power(&c), None);
    }

    #[test]
    fn names() {
        let c = cat();
        let cl = Classes::new(&c);
        assert_eq!(
            cl.ext("P^k h_0 h_3", 2, 2, 0).unwrap().name(&c),
            "P^2 h_0^3 h_3"
        );
        assert_eq!(cl.ext("P^k c_0", 1, 0, 1).unwrap().name(&c), "P h_1 c_0");
        assert_eq!(cl.ext("P^k h_1", 1, 0, 1).unwrap().name(&c), "P h_1^2");
        assert_eq!(
            Monomial::q(3, cl.h1_pow(5).unwrap()).name(&c),
            "Q/rho^3 h_1^5"
        );
        assert_eq!(
            Monomial::gamma(3, 4, cl.unit()).name(&c),
            "gamma/(rho^3 tau^4)"
        );
    }

    #[test]
    fn products() {
        let c = cat();
        let cl = Classes::new(&c);
        // γ/(ρ³τ⁴) · ρ³τP h_1 = γ/τ³ P h_1
        let coef = Monomial::gamma(3, 4, cl.unit());
        let t = Monomial::positive(3, 1, cl.ext("P^k h_1", 1, 0, 0).unwrap());
        let p = multiply(&c, &coef, &t).unwrap().unwrap();
        assert_eq!(
            p,
            Monomial::gamma(0, 3, cl.ext("P^k h_1", 1, 0, 0).unwrap())
        );
        // γ/τ^3 h0 · P h2 h0 = γ/τ^2 P h1^3 (through τ h1^3 = h0^2 h2)
        let a = Monomial::gamma(0, 3, cl.h0_pow(1));
        let b = Monomial::positive(0, 0, cl.ext("P^k h_2", 1, 1, 0).unwrap());
        let p = multiply(&c, &a, &b).unwrap().unwrap();
        assert_eq!(p.name(&c), "gamma/tau^2 P h_1^3");
        // Q/ρ² h1^4 · ρ h1 = Q/ρ h1^5
        let q = Monomial::q(2, cl.h1_pow(4).unwrap());
        let r = Monomial::positive(1, 0, cl.h1_pow(1).unwrap());
        assert_eq!(
            multiply(&c, &q, &r).unwrap(),
            Some(Monomial::q(1, cl.h1_pow(5).unwrap()))
        );
        // negative times negative vanishes
        assert_eq!(multiply(&c, &q, &coef).unwrap(), None);
    }
}
