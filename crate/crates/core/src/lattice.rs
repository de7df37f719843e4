//! Integer lattices with a symmetric bilinear form.
//!
//! A [`Lattice`] is `Z^rank` together with a symmetric integer Gram matrix.
//! It houses divisor class groups, Néron–Severi lattices and the
//! intersection matrices of curve configurations. Everything here is exact:
//! determinants go through fraction-free elimination, and rational classes
//! use `BigRational`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Default lattice name used when JSON input does not carry one.
pub const DEFAULT_NAME: &str = "L";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson", into = "LatticeJson")]
pub struct Lattice {
    name: String,
    gram: Vec<Vec<i64>>,
    basis: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    rank: usize,
    gram: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<String>>,
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = Error;

    fn try_from(j: LatticeJson) -> Result<Self> {
        if j.gram.len() != j.rank {
            return Err(Error::InvalidLattice(format!(
                "rank {} but gram has {} rows",
                j.rank,
                j.gram.len()
            )));
        }
        let l = Lattice::new(j.gram)?.named(j.name.unwrap_or_else(|| DEFAULT_NAME.into()));
        match j.basis {
            Some(b) => l.with_basis(b),
            None => Ok(l),
        }
    }
}

impl From<Lattice> for LatticeJson {
    fn from(l: Lattice) -> Self {
        LatticeJson {
            name: Some(l.name),
            rank: l.gram.len(),
            gram: l.gram,
            basis: l.basis,
        }
    }
}

/// Parity of a lattice: even iff every `x·x` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Sylvester inertia `(n+, n-, n0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

/// An integral class `coords` in the basis of the lattice called `lattice`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub lattice: String,
    pub coords: Vec<i64>,
}

/// A rational class. Denominators are kept exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDivisorClass {
    pub lattice: String,
    #[serde(with = "exact::serde_rational_vec")]
    pub coords: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(lattice: impl Into<String>, coords: Vec<i64>) -> Self {
        DivisorClass {
            lattice: lattice.into(),
            coords,
        }
    }

    pub fn to_rational(&self) -> QDivisorClass {
        QDivisorClass {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|&c| exact::int(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        self.combine(other, -1)
    }

    fn combine(&self, other: &DivisorClass, sign: i64) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + sign * b)
                .collect(),
        }
    }

    pub fn neg(&self) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl QDivisorClass {
    pub fn new(lattice: impl Into<String>, coords: Vec<Rational>) -> Self {
        QDivisorClass {
            lattice: lattice.into(),
            coords,
        }
    }
}

/// Anything with coordinates in a named lattice; lets [`Lattice::pair`]
/// accept integral and rational classes alike.
pub trait Class {
    fn lattice_name(&self) -> &str;
    fn len(&self) -> usize;
    fn coord(&self, i: usize) -> Rational;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Class for DivisorClass {
    fn lattice_name(&self) -> &str {
        &self.lattice
    }
    fn len(&self) -> usize {
        self.coords.len()
    }
    fn coord(&self, i: usize) -> Rational {
        exact::int(self.coords[i])
    }
}

impl Class for QDivisorClass {
    fn lattice_name(&self) -> &str {
        &self.lattice
    }
    fn len(&self) -> usize {
        self.coords.len()
    }
    fn coord(&self, i: usize) -> Rational {
        self.coords[i].clone()
    }
}

/// Per-coordinate enumeration box for [`Lattice::vectors_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bounds {
    Uniform(u32),
    PerCoordinate(Vec<u32>),
}

impl Bounds {
    fn get(&self, i: usize) -> i64 {
        match self {
            Bounds::Uniform(b) => *b as i64,
            Bounds::PerCoordinate(v) => v[i] as i64,
        }
    }

    /// The same box widened by `k` in every coordinate.
    pub fn widened(&self, k: u32) -> Bounds {
        match self {
            Bounds::Uniform(b) => Bounds::Uniform(b + k),
            Bounds::PerCoordinate(v) => Bounds::PerCoordinate(v.iter().map(|b| b + k).collect()),
        }
    }
}

impl Lattice {
    /// Builds a lattice from a symmetric Gram matrix.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidLattice("rank must be at least 1".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidLattice(format!(
                    "gram row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice(format!(
                        "gram is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Lattice {
            name: DEFAULT_NAME.into(),
            gram,
            basis: None,
        })
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
            .collect();
        Lattice::new(gram)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_basis(mut self, basis: Vec<String>) -> Result<Self> {
        if basis.len() != self.rank() {
            return Err(Error::InvalidLattice(format!(
                "basis has {} names for rank {}",
                basis.len(),
                self.rank()
            )));
        }
        let distinct: HashSet<&String> = basis.iter().collect();
        if distinct.len() != basis.len() {
            return Err(Error::InvalidLattice("basis names must be distinct".into()));
        }
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis.as_deref()
    }

    pub fn class(&self, coords: Vec<i64>) -> Result<DivisorClass> {
        self.check_len(coords.len())?;
        Ok(DivisorClass::new(self.name.clone(), coords))
    }

    pub fn qclass(&self, coords: Vec<Rational>) -> Result<QDivisorClass> {
        self.check_len(coords.len())?;
        Ok(QDivisorClass::new(self.name.clone(), coords))
    }

    /// The `i`-th basis vector.
    pub fn basis_vector(&self, i: usize) -> DivisorClass {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        DivisorClass::new(self.name.clone(), c)
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got,
            });
        }
        Ok(())
    }

    fn check_member<C: Class + ?Sized>(&self, x: &C) -> Result<()> {
        if x.lattice_name() != self.name {
            return Err(Error::LatticeMismatch(format!(
                "class lives in {:?}, lattice is {:?}",
                x.lattice_name(),
                self.name
            )));
        }
        self.check_len(x.len())
    }

    /// Exact pairing `x^T G y` of two classes in this lattice.
    pub fn pair<X: Class + ?Sized, Y: Class + ?Sized>(&self, x: &X, y: &Y) -> Result<Rational> {
        self.check_member(x)?;
        self.check_member(y)?;
        let n = self.rank();
        let mut acc = Rational::zero();
        for i in 0..n {
            let xi = x.coord(i);
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                let g = self.gram[i][j];
                if g != 0 {
                    acc += &xi * y.coord(j) * exact::int(g);
                }
            }
        }
        Ok(acc)
    }

    /// Integral pairing of two integral classes.
    pub fn pair_int(&self, x: &DivisorClass, y: &DivisorClass) -> Result<BigInt> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(self.dot(&x.coords, &y.coords))
    }

    /// Raw pairing of coordinate vectors (no lattice-name check).
    pub fn dot(&self, x: &[i64], y: &[i64]) -> BigInt {
        match self.dot_i128(x, y) {
            Some(v) => BigInt::from(v),
            None => {
                let mut acc = BigInt::zero();
                for (i, xi) in x.iter().enumerate() {
                    for (j, yj) in y.iter().enumerate() {
                        acc += BigInt::from(*xi) * BigInt::from(self.gram[i][j]) * BigInt::from(*yj);
                    }
                }
                acc
            }
        }
    }

    /// Checked fast path for [`Lattice::dot`]; `None` on overflow.
    pub fn dot_i128(&self, x: &[i64], y: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for (j, &yj) in y.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && yj != 0 {
                    row = row.checked_add((g as i128).checked_mul(yj as i128)?)?;
                }
            }
            acc = acc.checked_add(row.checked_mul(xi as i128)?)?;
        }
        Some(acc)
    }

    fn negated_gram(&self) -> Vec<Vec<i64>> {
        self.gram
            .iter()
            .map(|r| r.iter().map(|&x| -x).collect())
            .collect()
    }

    /// Leading principal minors of `-G` all positive.
    pub fn is_negative_definite(&self) -> bool {
        exact::leading_minors_positive(&self.negated_gram())
    }

    /// Every principal minor of `-G` (not only the leading ones) is `>= 0`.
    pub fn is_negative_semidefinite(&self) -> bool {
        let neg = self.negated_gram();
        let n = self.rank();
        assert!(n < 64, "semidefiniteness check limited to rank < 64");
        (1u64..(1u64 << n)).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            !exact::principal_minor(&neg, &idx).is_negative()
        })
    }

    pub fn signature(&self) -> Signature {
        let q: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| exact::int(x)).collect())
            .collect();
        let (n_plus, n_minus, n_zero) = exact::sign_counts(&exact::congruence_diagonal(&q));
        Signature {
            n_plus,
            n_minus,
            n_zero,
        }
    }

    pub fn determinant(&self) -> BigInt {
        exact::det(&self.gram)
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn parity(&self) -> Parity {
        if self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Whether `x·x ≡ c·x (mod 2)` for all `x`. Since `x ↦ x·x mod 2` is
    /// linear, checking the basis vectors suffices.
    pub fn parity_vector_check(&self, c: &DivisorClass) -> Result<bool> {
        self.check_member(c)?;
        Ok((0..self.rank()).all(|i| {
            let ci = self.dot(&self.basis_vector(i).coords, &c.coords);
            (BigInt::from(self.gram[i][i]) - ci) % 2 == BigInt::zero()
        }))
    }

    /// A primitive integral vector in the radical of the form, if the form
    /// is degenerate. Normalized so that the first nonzero entry is positive.
    pub fn null_vector(&self) -> Option<Vec<BigInt>> {
        let n = self.rank();
        let mut m: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| exact::int(x)).collect())
            .collect();
        // Reduced row echelon form.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let pv = m[row][col].clone();
            for x in m[row].iter_mut() {
                *x /= &pv;
            }
            for r in 0..n {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..n {
                        let d = &f * &m[row][c];
                        m[r][c] -= d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free = (0..n).find(|c| !pivots.contains(c))?;
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        let lcm = v
            .iter()
            .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
        let ints: Vec<BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
        let mut ints: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
        if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            ints = ints.into_iter().map(|x| -x).collect();
        }
        Some(ints)
    }

    /// All integral `x` with `|x_i| <= bound_i`, `x·x = self_int`, and
    /// `x·v = k` for every constraint `(v, k)`, in lexicographic order.
    ///
    /// Completeness is only as good as the box: callers that need every
    /// solution must bound the coordinates themselves.
    pub fn vectors_with(
        &self,
        self_int: i64,
        dots: &[(DivisorClass, i64)],
        bounds: &Bounds,
    ) -> Result<Vec<DivisorClass>> {
        let n = self.rank();
        if let Bounds::PerCoordinate(v) = bounds {
            self.check_len(v.len())?;
        }
        for (v, _) in dots {
            self.check_member(v)?;
        }
        // Each linear constraint becomes x·w = k with w = G v.
        let mut linear: Vec<(Vec<i128>, i128)> = Vec::with_capacity(dots.len());
        for (v, k) in dots {
            let w = (0..n)
                .map(|i| self.dot_i128(&self.basis_vector(i).coords, &v.coords))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument("constraint vector too large".into()))?;
            linear.push((w, *k as i128));
        }
        // slack[c][i] = max possible |contribution| of coordinates i.. to constraint c.
        let slack: Vec<Vec<i128>> = linear
            .iter()
            .map(|(w, _)| {
                let mut s = vec![0i128; n + 1];
                for i in (0..n).rev() {
                    s[i] = s[i + 1] + w[i].abs() * bounds.get(i) as i128;
                }
                s
            })
            .collect();
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        let mut partial = vec![0i128; linear.len()];
        self.enumerate_box(0, &mut x, &mut partial, &linear, &slack, bounds, self_int, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_box(
        &self,
        depth: usize,
        x: &mut Vec<i64>,
        partial: &mut Vec<i128>,
        linear: &[(Vec<i128>, i128)],
        slack: &[Vec<i128>],
        bounds: &Bounds,
        self_int: i64,
        out: &mut Vec<DivisorClass>,
    ) {
        let n = self.rank();
        if depth == n {
            if self.dot(x, x) == BigInt::from(self_int) {
                out.push(DivisorClass::new(self.name.clone(), x.clone()));
            }
            return;
        }
        let b = bounds.get(depth);
        for v in -b..=b {
            x[depth] = v;
            let mut feasible = true;
            for (c, (w, k)) in linear.iter().enumerate() {
                let p = partial[c] + w[depth] * v as i128;
                if (k - p).abs() > slack[c][depth + 1] {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            for (c, (w, _)) in linear.iter().enumerate() {
                partial[c] += w[depth] * v as i128;
            }
            self.enumerate_box(depth + 1, x, partial, linear, slack, bounds, self_int, out);
            for (c, (w, _)) in linear.iter().enumerate() {
                partial[c] -= w[depth] * v as i128;
            }
        }
        x[depth] = 0;
    }
}
