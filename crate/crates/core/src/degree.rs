//! Tridegrees `(s, f, w)`: stem, Adams filtration and weight.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A tridegree. The coweight `s - w` is derived, never stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TriDegree {
    pub s: i64,
    pub f: i64,
    pub w: i64,
}

impl TriDegree {
    pub const ZERO: TriDegree = TriDegree { s: 0, f: 0, w: 0 };
    /// Degree shift of every Bockstein `d_r`: one stem left, one filtration
    /// up, weight fixed (so coweight drops by one).
    pub const BOCKSTEIN_SHIFT: TriDegree = TriDegree { s: -1, f: 1, w: 0 };

    pub const fn new(s: i64, f: i64, w: i64) -> Self {
        TriDegree { s, f, w }
    }

    /// Like [`TriDegree::new`] but rejects negative Adams filtration.
    pub fn checked(s: i64, f: i64, w: i64) -> Result<Self> {
        if f < 0 {
            return Err(Error::NegativeFiltration { s, f, w });
        }
        Ok(TriDegree { s, f, w })
    }

    pub const fn coweight(self) -> i64 {
        self.s - self.w
    }

    /// Used by the rho-localization survivor criterion `s + f - 2w = 0`.
    pub const fn rho_local_index(self) -> i64 {
        self.s + self.f - 2 * self.w
    }

    /// Strictly above the line `f = s/2 - 1`.
    pub fn above_bl_line(self) -> bool {
        2 * self.f > self.s - 2
    }
}

/// Coweight of a degree, `s - w`.
pub fn coweight(d: TriDegree) -> i64 {
    d.coweight()
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s + o.s, self.f + o.f, self.w + o.w)
    }
}

impl Sub for TriDegree {
    type Output = TriDegree;
    fn sub(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s - o.s, self.f - o.f, self.w - o.w)
    }
}

impl Neg for TriDegree {
    type Output = TriDegree;
    fn neg(self) -> TriDegree {
        TriDegree::new(-self.s, -self.f, -self.w)
    }
}

impl Mul<i64> for TriDegree {
    type Output = TriDegree;
    fn mul(self, k: i64) -> TriDegree {
        TriDegree::new(self.s * k, self.f * k, self.w * k)
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.f, self.w)
    }
}
