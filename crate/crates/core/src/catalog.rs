//! The catalog of Adams-edge generator families.
//!
//! Every class the engine knows about in Ext over the C-motivic Steenrod
//! algebra is `P^k (family base) h0^a h1^b` for a catalog family. The catalog
//! is a plain text file so that tests can load mutated copies; see
//! `data/catalog.txt` for the shipped one and the line format.

use std::fmt;
use std::path::Path;

use crate::degree::TriDegree;
use crate::error::{Error, Result};

/// Degree of `γ/τ`, the bottom class of the negative cone.
pub const GAMMA_OVER_TAU: TriDegree = TriDegree::new(0, 0, 2);
/// Degree of `Qx` relative to `x`.
pub const Q_SHIFT: TriDegree = TriDegree::new(1, -1, 1);

pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId(pub u16);

/// An extended non-negative integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Height {
    Finite(u32),
    Infinite,
}

impl Height {
    pub fn allows(self, n: u32) -> bool {
        match self {
            Height::Finite(h) => n <= h,
            Height::Infinite => true,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

/// `h · (top of family) = τ^tau · target h0^h0 h1^h1`, same `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overflow {
    pub tau: u32,
    pub target: FamilyId,
    pub h0: u32,
    pub h1: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFamily {
    pub name: String,
    pub base: TriDegree,
    pub tau_torsion: bool,
    pub h0_height: Height,
    pub h1_height: Height,
    pub permanent_cycle: bool,
    pub k_min: u32,
    pub k_max: Option<u32>,
    pub h0_overflow: Option<Overflow>,
    pub h1_overflow: Option<Overflow>,
}

impl GeneratorFamily {
    pub fn is_periodic(&self) -> bool {
        self.k_max.is_none_or(|m| m > self.k_min)
    }

    pub fn k_in_range(&self, k: u32) -> bool {
        k >= self.k_min && self.k_max.is_none_or(|m| k <= m)
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    families: Vec<GeneratorFamily>,
    pub rho: TriDegree,
    pub tau: TriDegree,
    pub h0: TriDegree,
    pub h1: TriDegree,
    pub period: TriDegree,
    /// `τ^t · family` declared to be permanent cycles (with all h0/h1 multiples).
    pub permanent_twisted: Vec<(u32, FamilyId)>,
}

/// Parses and validates a catalog file.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let text = std::fs::read_to_string(path)?;
    Catalog::parse(&text)
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::parse(DEFAULT_CATALOG).expect("shipped catalog is valid")
    }
}

struct RawFamily {
    line: usize,
    fam: GeneratorFamily,
    h0_overflow: Option<String>,
    h1_overflow: Option<String>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let mut raw: Vec<RawFamily> = Vec::new();
        let mut rho = None;
        let mut tau = None;
        let mut h0 = None;
        let mut h1 = None;
        let mut period = None;
        let mut permanent = Vec::new();

        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            if let Some(directive) = fields[0].strip_prefix('@') {
                match directive {
                    "rho" | "tau" | "h0" | "h1" | "period" => {
                        if fields.len() != 2 {
                            return Err(perr(format!("@{directive} takes one degree field")));
                        }
                        let d = parse_degree(fields[1]).map_err(perr)?;
                        let slot = match directive {
                            "rho" => &mut rho,
                            "tau" => &mut tau,
                            "h0" => &mut h0,
                            "h1" => &mut h1,
                            _ => &mut period,
                        };
                        *slot = Some(d);
                    }
                    "permanent" => {
                        if fields.len() != 3 {
                            return Err(perr("@permanent | tau^t | family".into()));
                        }
                        let t = fields[1]
                            .strip_prefix("tau^")
                            .and_then(|t| t.parse::<u32>().ok())
                            .ok_or_else(|| perr(format!("bad tau power `{}`", fields[1])))?;
                        permanent.push((lineno, t, fields[2].to_string()));
                    }
                    other => return Err(perr(format!("unknown directive @{other}"))),
                }
                continue;
            }
            if fields.len() < 6 {
                return Err(perr(format!("expected 6 fields, found {}", fields.len())));
            }
            let name = fields[0].split_whitespace().collect::<Vec<_>>().join(" ");
            let base = parse_degree(fields[1]).map_err(perr)?;
            let tau_torsion = parse_flag(fields[2]).map_err(perr)?;
            let h0_height = parse_height(fields[3]).map_err(perr)?;
            let h1_height = parse_height(fields[4]).map_err(perr)?;
            let permanent_cycle = parse_flag(fields[5]).map_err(perr)?;
            let mut fam = GeneratorFamily {
                name,
                base,
                tau_torsion,
                h0_height,
                h1_height,
                permanent_cycle,
                k_min: 0,
                k_max: None,
                h0_overflow: None,
                h1_overflow: None,
            };
            let mut h0o = None;
            let mut h1o = None;
            for extra in &fields[6..] {
                let (key, value) = extra
                    .split_once('=')
                    .ok_or_else(|| perr(format!("expected key=value, found `{extra}`")))?;
                match key.trim() {
                    "k" => {
                        let (lo, hi) = value
                            .split_once("..")
                            .ok_or_else(|| perr(format!("bad k range `{value}`")))?;
                        fam.k_min = lo
                            .trim()
                            .parse()
                            .map_err(|_| perr(format!("bad k `{lo}`")))?;
                        fam.k_max = if hi.trim().is_empty() {
                            None
                        } else {
                            Some(
                                hi.trim()
                                    .parse()
                                    .map_err(|_| perr(format!("bad k `{hi}`")))?,
                            )
                        };
                    }
                    "h0*" => h0o = Some(value.trim().to_string()),
                    "h1*" => h1o = Some(value.trim().to_string()),
                    other => return Err(perr(format!("unknown key `{other}`"))),
                }
            }
            if raw.iter().any(|r| r.fam.name == fam.name) {
                return Err(perr(format!("duplicate family `{}`", fam.name)));
            }
            raw.push(RawFamily {
                line: lineno,
                fam,
                h0_overflow: h0o,
                h1_overflow: h1o,
            });
        }

        let missing = |what: &str| Error::Parse {
            line: 0,
            msg: format!("missing @{what} directive"),
        };
        raw.sort_by(|a, b| a.fam.name.cmp(&b.fam.name));
        let names: Vec<String> = raw.iter().map(|r| r.fam.name.clone()).collect();
        let lookup = |n: &str| {
            names
                .iter()
                .position(|x| x == n)
                .map(|i| FamilyId(i as u16))
        };

        let mut families = Vec::with_capacity(raw.len());
        for r in raw {
            let mut fam = r.fam;
            fam.h0_overflow = r
                .h0_overflow
                .map(|s| parse_overflow(&s, &lookup))
                .transpose()
                .map_err(|msg| Error::Parse { line: r.line, msg })?;
            fam.h1_overflow = r
                .h1_overflow
                .map(|s| parse_overflow(&s, &lookup))
                .transpose()
                .map_err(|msg| Error::Parse { line: r.line, msg })?;
            families.push(fam);
        }
        let permanent_twisted = permanent
            .into_iter()
            .map(|(line, t, name)| {
                lookup(&name).map(|id| (t, id)).ok_or(Error::Parse {
                    line,
                    msg: format!("unknown family `{name}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let cat = Catalog {
            families,
            rho: rho.ok_or_else(|| missing("rho"))?,
            tau: tau.ok_or_else(|| missing("tau"))?,
            h0: h0.ok_or_else(|| missing("h0"))?,
            h1: h1.ok_or_else(|| missing("h1"))?,
            period: period.ok_or_else(|| missing("period"))?,
            permanent_twisted,
        };
        cat.validate()?;
        Ok(cat)
    }

    pub fn families(&self) -> &[GeneratorFamily] {
        &self.families
    }

    pub fn ids(&self) -> impl Iterator<Item = FamilyId> {
        (0..self.families.len()).map(|i| FamilyId(i as u16))
    }

    pub fn family(&self, id: FamilyId) -> &GeneratorFamily {
        &self.families[id.0 as usize]
    }

    pub fn id(&self, name: &str) -> Option<FamilyId> {
        self.families
            .binary_search_by(|f| f.name.as_str().cmp(name))
            .ok()
            .map(|i| FamilyId(i as u16))
    }

    /// The family whose base is the unit of Ext.
    pub fn unit(&self) -> Option<FamilyId> {
        self.ids()
            .find(|&id| self.family(id).base == TriDegree::ZERO && !self.family(id).is_periodic())
    }

    pub fn require(&self, name: &str) -> Result<FamilyId> {
        self.id(name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    /// `base + k·period`.
    pub fn family_degree(&self, fam: &GeneratorFamily, k: u32) -> TriDegree {
        fam.base + self.period * i64::from(k)
    }

    /// Degree of `P^k (family) h0^a h1^b`.
    pub fn element_degree(&self, id: FamilyId, k: u32, a: u32, b: u32) -> TriDegree {
        self.family_degree(self.family(id), k) + self.h0 * i64::from(a) + self.h1 * i64::from(b)
    }

    /// Degree of the negative-cone coefficient `γ/(ρ^j τ^i)`, `i ≥ 1`.
    pub fn gamma_degree(&self, j: u32, i: u32) -> TriDegree {
        GAMMA_OVER_TAU - self.rho * i64::from(j) - self.tau * (i64::from(i) - 1)
    }

    /// Degree of `Q/ρ^j`, to be added to the degree of the τ-torsion class.
    pub fn q_degree(&self, j: u32) -> TriDegree {
        Q_SHIFT - self.rho * i64::from(j)
    }

    pub fn is_twisted_permanent(&self, tau: u32, id: FamilyId) -> bool {
        self.permanent_twisted
            .iter()
            .any(|&(t, f)| t == tau && f == id)
    }

    fn validate(&self) -> Result<()> {
        let conv = |name: &str, got: TriDegree, want: TriDegree| {
            if got == want {
                Ok(())
            } else {
                Err(Error::Consistency {
                    table: "grading conventions".into(),
                    msg: format!("{name} has degree {got}, expected {want}"),
                })
            }
        };
        conv("rho", self.rho, TriDegree::new(-1, 0, -1))?;
        conv("tau", self.tau, TriDegree::new(0, 0, -1))?;
        conv("P-period", self.period, TriDegree::new(8, 4, 4))?;
        if let Some(id) = self.id("P^k h_1") {
            conv("h1", self.h1, self.family(id).base)?;
        }
        for fam in &self.families {
            if fam.base.f < 0 {
                return Err(Error::NegativeFiltration {
                    s: fam.base.s,
                    f: fam.base.f,
                    w: fam.base.w,
                });
            }
            if fam.tau_torsion && !fam.permanent_cycle {
                return Err(Error::Consistency {
                    table: "catalog".into(),
                    msg: format!("tau-torsion family `{}` must be permanent", fam.name),
                });
            }
        }
        for check in table_checks() {
            for k in check.k_min..=check.k_min + 4 {
                let got = (check.degree)(self, k)?;
                let want = (check.expected)(i64::from(k));
                if got != want {
                    return Err(Error::Consistency {
                        table: check.table.into(),
                        msg: format!(
                            "{} at k = {k} has degree {got}, table lists {want}",
                            check.element
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

struct TableCheck {
    table: &'static str,
    element: &'static str,
    k_min: u32,
    degree: fn(&Catalog, u32) -> Result<TriDegree>,
    expected: fn(i64) -> TriDegree,
}

fn el(c: &Catalog, name: &str, k: u32, a: u32, b: u32) -> Result<TriDegree> {
    Ok(c.element_degree(c.require(name)?, k, a, b))
}

fn table_checks() -> Vec<TableCheck> {
    const fn t(s: i64, f: i64, w: i64) -> TriDegree {
        TriDegree::new(s, f, w)
    }
    vec![
        TableCheck {
            table: "d_r table row 1",
            element: "gamma/(rho tau^(2k+1))",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(1, 2 * k + 1)),
            expected: |k| t(1, 0, 2 * k + 3),
        },
        TableCheck {
            table: "d_r table row 2",
            element: "gamma/(rho^2 tau^(4k+2))",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(2, 4 * k + 2)),
            expected: |k| t(2, 0, 4 * k + 5),
        },
        TableCheck {
            table: "d_r table row 3",
            element: "tau^3 P^k h0^3 h3",
            k_min: 0,
            degree: |c, k| Ok(c.tau * 3 + el(c, "P^k h_0 h_3", k, 2, 0)?),
            expected: |k| t(8 * k + 7, 4 * k + 4, 4 * k + 1),
        },
        TableCheck {
            table: "d_r table row 3 target",
            element: "rho^3 tau P^(k+1) h1 (shifted back)",
            k_min: 0,
            degree: |c, k| {
                Ok(c.rho * 3 + c.tau + el(c, "P^k h_1", k + 1, 0, 0)? - TriDegree::BOCKSTEIN_SHIFT)
            },
            expected: |k| t(8 * k + 7, 4 * k + 4, 4 * k + 1),
        },
        TableCheck {
            table: "d_r table row 4",
            element: "tau^3 P^k h1 c0",
            k_min: 0,
            degree: |c, k| Ok(c.tau * 3 + el(c, "P^k c_0", k, 0, 1)?),
            expected: |k| t(8 * k + 9, 4 * k + 4, 4 * k + 3),
        },
        TableCheck {
            table: "d_r table row 4 target",
            element: "rho^3 P^(k+1) h2 (shifted back)",
            k_min: 0,
            degree: |c, k| {
                Ok(c.rho * 3 + el(c, "P^k h_2", k + 1, 0, 0)? - TriDegree::BOCKSTEIN_SHIFT)
            },
            expected: |k| t(8 * k + 9, 4 * k + 4, 4 * k + 3),
        },
        TableCheck {
            table: "d_r table row 5",
            element: "Q/rho^(4k-1) h1^(4k)",
            k_min: 1,
            degree: |c, k| Ok(c.q_degree(4 * k - 1) + el(c, "h_1^4", 0, 0, 4 * k - 4)?),
            expected: |k| t(8 * k, 4 * k - 1, 8 * k),
        },
        TableCheck {
            table: "d_r table row 5 target",
            element: "gamma/tau^(4k-1) P^(k-1) h0^3 h3 (shifted back)",
            k_min: 1,
            degree: |c, k| {
                Ok(
                    c.gamma_degree(0, 4 * k - 1) + el(c, "P^k h_0 h_3", k - 1, 2, 0)?
                        - TriDegree::BOCKSTEIN_SHIFT,
                )
            },
            expected: |k| t(8 * k, 4 * k - 1, 8 * k),
        },
        TableCheck {
            table: "d_r table row 6",
            element: "Q/rho^(4k) h1^(4k+1)",
            k_min: 1,
            degree: |c, k| Ok(c.q_degree(4 * k) + el(c, "h_1^4", 0, 0, 4 * k - 3)?),
            expected: |k| t(8 * k + 2, 4 * k, 8 * k + 2),
        },
        TableCheck {
            table: "d_r table row 6 target",
            element: "gamma/tau^(4k) P^k h1 (shifted back)",
            k_min: 1,
            degree: |c, k| {
                Ok(c.gamma_degree(0, 4 * k) + el(c, "P^k h_1", k, 0, 0)?
                    - TriDegree::BOCKSTEIN_SHIFT)
            },
            expected: |k| t(8 * k + 2, 4 * k, 8 * k + 2),
        },
        TableCheck {
            table: "coweight-1 d_r table row 1",
            element: "gamma/(rho^2 tau^(4k-2)) P^k h1",
            k_min: 1,
            degree: |c, k| Ok(c.gamma_degree(2, 4 * k - 2) + el(c, "P^k h_1", k, 0, 0)?),
            expected: |k| t(8 * k + 3, 4 * k + 1, 8 * k + 2),
        },
        TableCheck {
            table: "coweight-1 d_r table row 2",
            element: "gamma/(rho tau^(4k-1)) P^k h2",
            k_min: 1,
            degree: |c, k| Ok(c.gamma_degree(1, 4 * k - 1) + el(c, "P^k h_2", k, 0, 0)?),
            expected: |k| t(8 * k + 4, 4 * k + 1, 8 * k + 3),
        },
        TableCheck {
            table: "coweight-1 d_r table row 3",
            element: "gamma/(rho tau^(4k-1)) P^k h0 h2",
            k_min: 1,
            degree: |c, k| Ok(c.gamma_degree(1, 4 * k - 1) + el(c, "P^k h_2", k, 1, 0)?),
            expected: |k| t(8 * k + 4, 4 * k + 2, 8 * k + 3),
        },
        TableCheck {
            table: "coweight-1 d_r table row 4",
            element: "gamma/(rho tau^(4k+1)) P^k h0 h3",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(1, 4 * k + 1) + el(c, "P^k h_0 h_3", k, 0, 0)?),
            expected: |k| t(8 * k + 8, 4 * k + 2, 8 * k + 7),
        },
        TableCheck {
            table: "coweight-1 d_r table row 5",
            element: "gamma/(rho tau^(4k+1)) P^k h0^2 h3",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(1, 4 * k + 1) + el(c, "P^k h_0 h_3", k, 1, 0)?),
            expected: |k| t(8 * k + 8, 4 * k + 3, 8 * k + 7),
        },
        TableCheck {
            table: "coweight-1 d_r table row 6",
            element: "gamma/(rho^2 tau^(4k+1)) P^k c0",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(2, 4 * k + 1) + el(c, "P^k c_0", k, 0, 0)?),
            expected: |k| t(8 * k + 10, 4 * k + 3, 8 * k + 9),
        },
        TableCheck {
            table: "coweight-1 d_r table row 7",
            element: "gamma/(rho^3 tau^(4k+1)) P^k h0^3 h3",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(3, 4 * k + 1) + el(c, "P^k h_0 h_3", k, 2, 0)?),
            expected: |k| t(8 * k + 10, 4 * k + 4, 8 * k + 9),
        },
        TableCheck {
            table: "coweight-1 d_r table row 8",
            element: "gamma/(rho^3 tau^(4k+1)) P^k h1 c0",
            k_min: 0,
            degree: |c, k| Ok(c.gamma_degree(3, 4 * k + 1) + el(c, "P^k c_0", k, 0, 1)?),
            expected: |k| t(8 * k + 12, 4 * k + 4, 8 * k + 11),
        },
    ]
}

fn parse_degree(s: &str) -> std::result::Result<TriDegree, String> {
    let parts: Vec<i64> = s
        .split_whitespace()
        .map(|p| p.parse::<i64>().map_err(|_| format!("bad integer `{p}`")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [s, f, w] => Ok(TriDegree::new(s, f, w)),
        _ => Err(format!("expected three integers, found `{s}`")),
    }
}

fn parse_flag(s: &str) -> std::result::Result<bool, String> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(format!("expected 0 or 1, found `{s}`")),
    }
}

fn parse_height(s: &str) -> std::result::Result<Height, String> {
    match s {
        "inf" | "∞" => Ok(Height::Infinite),
        n => n
            .parse()
            .map(Height::Finite)
            .map_err(|_| format!("bad height `{n}`")),
    }
}

/// `[tau^t] <family> [h0^a] [h1^b]`
fn parse_overflow(
    s: &str,
    lookup: &dyn Fn(&str) -> Option<FamilyId>,
) -> std::result::Result<Overflow, String> {
    let mut toks: Vec<&str> = s.split_whitespace().collect();
    let mut tau = 0;
    if let Some(t) = toks.first().and_then(|t| t.strip_prefix("tau^")) {
        tau = t.parse().map_err(|_| format!("bad tau power in `{s}`"))?;
        toks.remove(0);
    }
    let (mut h0, mut h1) = (0, 0);
    while let Some(last) = toks.last() {
        if let Some(a) = last.strip_prefix("h0^") {
            h0 = a.parse().map_err(|_| format!("bad h0 power in `{s}`"))?;
        } else if let Some(b) = last.strip_prefix("h1^") {
            h1 = b.parse().map_err(|_| format!("bad h1 power in `{s}`"))?;
        } else {
            break;
        }
        toks.pop();
    }
    let name = toks.join(" ");
    let target = lookup(&name).ok_or_else(|| format!("unknown family `{name}`"))?;
    Ok(Overflow {
        tau,
        target,
        h0,
        h1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_loads() {
        let c = Catalog::default();
        let h1 = c.family(c.id("P^k h_1").unwrap());
        assert_eq!(h1.base, TriDegree::new(1, 1, 1));
        assert_eq!(c.tau, TriDegree::new(0, 0, -1));
        assert_eq!(c.rho, TriDegree::new(-1, 0, -1));
        assert_eq!(c.families().len(), 6);
    }

    #[test]
    fn family_degree_examples() {
        let c = Catalog::default();
        let h0h3 = c.id("P^k h_0 h_3").unwrap();
        assert_eq!(
            c.tau * 3 + c.element_degree(h0h3, 0, 2, 0),
            TriDegree::new(7, 4, 1)
        );
        let h1 = c.family(c.id("P^k h_1").unwrap());
        assert_eq!(c.family_degree(h1, 0), TriDegree::new(1, 1, 1));
        let h2 = c.family(c.id("P^k h_2").unwrap());
        assert_eq!(c.family_degree(h2, 1), TriDegree::new(11, 5, 6));
        // cross-check against the tau^3 P^k h1 c0 row minus tau^3 and h1 c0
        let h1c0 = c.tau * 3 + c.element_degree(c.id("P^k c_0").unwrap(), 0, 0, 1);
        let row4 = |k: i64| TriDegree::new(8 * k + 9, 4 * k + 4, 4 * k + 3);
        assert_eq!(
            row4(1) - row4(0),
            c.family_degree(h2, 1) - c.family_degree(h2, 0)
        );
        assert_eq!(h1c0, row4(0));
    }

    #[test]
    fn consecutive_k_differ_by_period() {
        let c = Catalog::default();
        for fam in c.families() {
            for k in 0..5 {
                assert_eq!(
                    c.family_degree(fam, k + 1) - c.family_degree(fam, k),
                    TriDegree::new(8, 4, 4)
                );
            }
        }
    }

    #[test]
    fn tau_torsion_only_for_h1_powers() {
        let c = Catalog::default();
        for fam in c.families() {
            assert_eq!(fam.tau_torsion, fam.name == "h_1^4", "{}", fam.name);
        }
        let t = c.family(c.id("h_1^4").unwrap());
        assert_eq!(t.base.coweight(), 0);
    }

    #[test]
    fn mutated_tau_degree_rejected() {
        let text = DEFAULT_CATALOG.replace("@tau    |  0 0 -1", "@tau | 0 0 -2");
        assert!(matches!(
            Catalog::parse(&text),
            Err(Error::Consistency { .. })
        ));
    }

    #[test]
    fn mutated_h0h3_cites_table_1() {
        // moves tau^3 h0^3 h3 to (7, 4, 2)
        let text = DEFAULT_CATALOG.replace("P^k h_0 h_3 | 7 2 4", "P^k h_0 h_3 | 7 2 5");
        match Catalog::parse(&text) {
            Err(Error::Consistency { table, msg }) => {
                assert_eq!(table, "d_r table row 3");
                assert!(msg.contains("(7, 4, 2)"), "{msg}");
            }
            other => panic!("expected consistency error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "@rho | -1 0 -1\nfoo | 1 2 | 0 | 0 | 0 | 1\n";
        match Catalog::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match Catalog::parse("x | 1 1 1 | 0 | 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn whitespace_insensitive_fields() {
        let text = DEFAULT_CATALOG.replace("P^k c_0     | 8 3 5 |", "P^k   c_0|  8   3  5 |");
        let c = Catalog::parse(&text).unwrap();
        assert!(c.id("P^k c_0").is_some());
    }

    #[test]
    fn overflow_parsed() {
        let c = Catalog::default();
        let h2 = c.family(c.id("P^k h_2").unwrap());
        let o = h2.h0_overflow.as_ref().unwrap();
        assert_eq!((o.tau, o.h0, o.h1), (1, 0, 2));
        assert_eq!(c.family(o.target).name, "P^k h_1");
        assert!(c.is_twisted_permanent(1, c.id("P^k h_1").unwrap()));
    }
}
