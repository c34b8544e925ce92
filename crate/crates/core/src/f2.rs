//! Bit-packed linear algebra over F₂.
//!
//! Vectors are stored 64 coordinates per word. Every reduction in this module
//! uses the *lowest* set coordinate as pivot, which makes fully reduced
//! vectors the lexicographically smallest members of their coset (coordinate 0
//! being the most significant).

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zero(len);
        for i in idx {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lexicographic comparison with coordinate 0 most significant and
    /// `0 < 1` in each coordinate.
    pub fn lex_cmp(&self, other: &F2Vector) -> std::cmp::Ordering {
        for i in 0..self.len.min(other.len) {
            match (self.get(i), other.get(i)) {
                (false, true) => return std::cmp::Ordering::Less,
                (true, false) => return std::cmp::Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl std::ops::Add for &F2Vector {
    type Output = F2Vector;
    fn add(self, o: &F2Vector) -> F2Vector {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A matrix acting on column vectors: `(m·v)_i = rows[i]·v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        F2Matrix {
            cols,
            rows: vec![F2Vector::zero(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix {
            cols: n,
            rows: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: r.len(),
            });
        }
        Ok(F2Matrix { cols, rows })
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[F2Vector]) -> Result<Self> {
        let mut m = Self::zero(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    got: c.len(),
                });
            }
            for i in c.ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = F2Vector::zero(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut c = F2Vector::zero(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    /// `self · other`.
    pub fn compose(&self, other: &F2Matrix) -> F2Matrix {
        debug_assert_eq!(self.cols, other.nrows());
        let cols: Vec<F2Vector> = (0..other.ncols())
            .map(|j| self.apply(&other.column(j)))
            .collect();
        F2Matrix::from_columns(self.nrows(), &cols).expect("consistent dimensions")
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vector::is_zero)
    }

    /// Reduced row echelon form of the rows, with the pivot column of each
    /// nonzero row.
    fn rref(&self) -> Vec<(usize, F2Vector)> {
        let mut sub = Subspace::new(self.cols);
        for r in &self.rows {
            sub.insert(r.clone());
        }
        sub.into_pivoted()
    }

    pub fn rank(&self) -> usize {
        self.rref().len()
    }
}

/// A basis of the null space `{v : m·v = 0}`. One vector per free column, in
/// increasing column order.
pub fn kernel_basis(m: &F2Matrix) -> Vec<F2Vector> {
    let n = m.ncols();
    let reduced = m.rref();
    let mut is_pivot = vec![false; n];
    for (p, _) in &reduced {
        is_pivot[*p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = F2Vector::unit(n, free);
            for (p, row) in &reduced {
                if row.get(free) {
                    v.set(*p, true);
                }
            }
            v
        })
        .collect()
}

/// Coset representatives completing `sub` to a basis of F₂ⁿ. Representatives
/// are the unit vectors at non-pivot coordinates, which are the
/// lexicographically smallest members of their cosets.
///
/// Dependent generators are rejected unless `allow_dependent` is set.
pub fn quotient_basis(
    sub: &[F2Vector],
    ambient_dim: usize,
    allow_dependent: bool,
) -> Result<Vec<F2Vector>> {
    let mut s = Subspace::new(ambient_dim);
    for v in sub {
        if v.len() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                got: v.len(),
            });
        }
        s.insert(v.clone());
    }
    if !allow_dependent && s.dim() < sub.len() {
        return Err(Error::DependentSubspace {
            rank: s.dim(),
            len: sub.len(),
        });
    }
    let pivots = s.pivot_mask();
    Ok((0..ambient_dim)
        .filter(|&i| !pivots[i])
        .map(|i| F2Vector::unit(ambient_dim, i))
        .collect())
}

/// A subspace of F₂ⁿ held in reduced echelon form (lowest-coordinate pivots,
/// every pivot column cleared in all other basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// Sorted by pivot.
    basis: Vec<(usize, F2Vector)>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient)
                .map(|i| (i, F2Vector::unit(ambient, i)))
                .collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &F2Vector> {
        self.basis.iter().map(|(_, v)| v)
    }

    pub fn pivot_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.ambient];
        for (p, _) in &self.basis {
            m[*p] = true;
        }
        m
    }

    /// Clears every pivot coordinate of `v`.
    pub fn reduce(&self, v: &mut F2Vector) {
        for (p, b) in &self.basis {
            if v.get(*p) {
                v.add_assign(b);
            }
        }
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, mut v: F2Vector) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        self.reduce(&mut v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for (_, b) in self.basis.iter_mut() {
            if b.get(p) {
                b.add_assign(&v);
            }
        }
        let pos = self.basis.partition_point(|(q, _)| *q < p);
        self.basis.insert(pos, (p, v));
        true
    }

    fn into_pivoted(self) -> Vec<(usize, F2Vector)> {
        self.basis
    }

    /// Representatives of `self / sub`, assuming `sub ⊆ self`: the reduced
    /// echelon basis of the image of `self` in the quotient, each vector
    /// fully reduced modulo `sub`.
    pub fn complement_reps(&self, sub: &Subspace) -> Vec<F2Vector> {
        let mut q = Subspace::new(self.ambient);
        for v in self.basis() {
            let mut w = v.clone();
            sub.reduce(&mut w);
            q.insert(w);
        }
        // Reducing by `q` can reintroduce pivots of `sub` only if `sub ⊄ self`.
        q.basis
            .into_iter()
            .map(|(_, mut v)| {
                sub.reduce(&mut v);
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(bits: &[u8]) -> F2Vector {
        F2Vector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&F2Matrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&F2Matrix::zero(2, 2)).len(), 2);
        let m = F2Matrix::from_rows(2, vec![v(&[1, 1])]).unwrap();
        assert_eq!(kernel_basis(&m), vec![v(&[1, 1])]);
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_basis(&[], 1, false).unwrap().len(), 1);
        let span = [v(&[1, 0]), v(&[1, 1])];
        assert!(quotient_basis(&span, 2, false).unwrap().is_empty());
        assert_eq!(
            quotient_basis(&[v(&[1, 1])], 2, false).unwrap(),
            vec![v(&[0, 1])]
        );
    }

    #[test]
    fn quotient_rep_is_lex_smallest_in_coset() {
        // Brute force: the coset of (0,1) modulo {(1,1)} is {(0,1), (1,0)}.
        let sub = [v(&[1, 1])];
        let rep = &quotient_basis(&sub, 2, false).unwrap()[0];
        let coset = [rep.clone(), rep + &sub[0]];
        let min = coset.iter().min_by(|a, b| a.lex_cmp(b)).unwrap();
        assert_eq!(min, rep);
    }

    #[test]
    fn dependent_generators() {
        let sub = [v(&[1, 1]), v(&[1, 1])];
        assert!(matches!(
            quotient_basis(&sub, 2, false),
            Err(Error::DependentSubspace { rank: 1, len: 2 })
        ));
        assert_eq!(quotient_basis(&sub, 2, true).unwrap().len(), 1);
    }

    #[test]
    fn words_span_boundaries() {
        let mut a = F2Vector::zero(130);
        a.set(0, true);
        a.set(64, true);
        a.set(129, true);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(a.first_one(), Some(0));
        let b = &a + &a;
        assert!(b.is_zero());
        assert_eq!(a.count_ones(), 3);
    }

    #[test]
    fn complement_reps_of_subquotient() {
        // Z = span{e0, e1 + e2}, B = span{e0}: one rep, e1 + e2.
        let mut z = Subspace::new(3);
        z.insert(v(&[1, 0, 0]));
        z.insert(v(&[0, 1, 1]));
        let mut b = Subspace::new(3);
        b.insert(v(&[1, 0, 0]));
        assert_eq!(z.complement_reps(&b), vec![v(&[0, 1, 1])]);
    }

    fn matrix(max: usize) -> impl Strategy<Value = F2Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(
                move |rows| {
                    F2Matrix::from_rows(c, rows.iter().map(|b| F2Vector::from_bits(b)).collect())
                        .unwrap()
                },
            )
        })
    }

    fn all_vectors(n: usize) -> impl Iterator<Item = F2Vector> {
        (0u32..(1 << n))
            .map(move |mask| F2Vector::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1)))
    }

    proptest! {
        #[test]
        fn self_inverse(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let a = F2Vector::from_bits(&bits);
            prop_assert!((&a + &a).is_zero());
        }

        #[test]
        fn rank_nullity_against_enumeration(m in matrix(8)) {
            let kernel = kernel_basis(&m);
            prop_assert_eq!(kernel.len() + m.rank(), m.ncols());
            let brute = all_vectors(m.ncols()).filter(|x| m.apply(x).is_zero()).count();
            prop_assert_eq!(brute, 1usize << kernel.len());
            for k in &kernel {
                prop_assert!(m.apply(k).is_zero());
            }
            let image: std::collections::HashSet<_> = all_vectors(m.ncols()).map(|x| m.apply(&x)).collect();
            prop_assert_eq!(image.len(), 1usize << m.rank());
        }

        #[test]
        fn quotient_completes_basis(m in matrix(8)) {
            let n = m.ncols();
            let reps = quotient_basis(m.rows(), n, true).unwrap();
            prop_assert_eq!(reps.len() + m.rank(), n);
            let mut s = Subspace::new(n);
            for r in m.rows() { s.insert(r.clone()); }
            for r in &reps { prop_assert!(s.insert(r.clone())); }
            prop_assert_eq!(s.dim(), n);
        }
    }
}
