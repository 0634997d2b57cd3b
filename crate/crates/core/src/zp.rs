//! Exact arithmetic over `Z_p` for arbitrary (possibly composite) `p`.
//!
//! Vectors, weighted adjacency matrices, and the module computations needed
//! once `p` has zero divisors: a Howell normal form for canonical spans and
//! membership, and a primary (elementary divisor) decomposition that yields
//! independent generators together with their additive orders.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The number of levels of a qupit. Always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidModulus(p as u64));
        }
        Ok(Modulus(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// `p^n`, or `None` on overflow.
    pub fn pow(self, n: usize) -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..n {
            acc = acc.checked_mul(self.0 as u128)?;
        }
        Some(acc)
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Modulus::new(p)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A length-`n` vector over `Z_p`, entries kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZpVec {
    p: Modulus,
    entries: Vec<u32>,
}

impl ZpVec {
    pub fn new(p: Modulus, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e >= p.get()) {
            return Err(Error::ResidueOutOfRange { value: bad as u64, p: p.get() });
        }
        Ok(ZpVec { p, entries })
    }

    /// Builds a vector from signed integers, reducing each into `[0, p)`.
    pub fn from_signed(p: Modulus, entries: &[i64]) -> Self {
        ZpVec { p, entries: entries.iter().map(|&e| p.reduce(e)).collect() }
    }

    pub(crate) fn from_raw(p: Modulus, entries: Vec<u32>) -> Self {
        debug_assert!(entries.iter().all(|&e| e < p.get()));
        ZpVec { p, entries }
    }

    pub fn zeros(p: Modulus, n: usize) -> Self {
        ZpVec { p, entries: vec![0; n] }
    }

    pub fn unit(p: Modulus, n: usize, a: usize) -> Self {
        let mut v = Self::zeros(p, n);
        v.entries[a] = 1;
        v
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, a: usize) -> u32 {
        self.entries[a]
    }

    pub fn set(&mut self, a: usize, value: i64) {
        self.entries[a] = self.p.reduce(value);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn check_compatible(&self, other: &ZpVec) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }

    /// `Σ a_i b_i mod p`.
    pub fn dot(&self, other: &ZpVec) -> Result<u32> {
        self.check_compatible(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &ZpVec) -> u32 {
        let p = self.p.get() as u64;
        let sum = self.entries.iter().zip(&other.entries).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
        sum as u32
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i).collect()
    }

    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }

    pub fn scale(&self, k: i64) -> ZpVec {
        let k = self.p.reduce(k);
        ZpVec { p: self.p, entries: self.entries.iter().map(|&e| self.p.mul(e, k)).collect() }
    }

    /// Reinterprets the integer entries modulo another modulus.
    pub fn reduce_to(&self, q: Modulus) -> ZpVec {
        ZpVec { p: q, entries: self.entries.iter().map(|&e| e % q.get()).collect() }
    }

    /// Smallest `k > 0` with `k · self = 0`.
    pub fn order(&self) -> u32 {
        let p = self.p.get();
        self.entries.iter().fold(1u32, |acc, &e| {
            let o = p / gcd(e as u64, p as u64) as u32;
            lcm(acc as u64, o as u64) as u32
        })
    }

    pub fn try_add(&self, other: &ZpVec) -> Result<ZpVec> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &ZpVec) -> Result<ZpVec> {
        self.check_compatible(other)?;
        Ok(self - other)
    }
}

impl Add for &ZpVec {
    type Output = ZpVec;
    fn add(self, rhs: &ZpVec) -> ZpVec {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p;
        ZpVec { p, entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| p.add(a, b)).collect() }
    }
}

impl Sub for &ZpVec {
    type Output = ZpVec;
    fn sub(self, rhs: &ZpVec) -> ZpVec {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p;
        ZpVec { p, entries: self.entries.iter().zip(&rhs.entries).map(|(&a, &b)| p.sub(a, b)).collect() }
    }
}

impl Neg for &ZpVec {
    type Output = ZpVec;
    fn neg(self) -> ZpVec {
        let p = self.p;
        ZpVec { p, entries: self.entries.iter().map(|&a| p.neg(a)).collect() }
    }
}

impl fmt::Display for ZpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Mixed-radix indexing of `Z_p^n`, vertex 0 most significant.
#[derive(Clone, Debug)]
pub struct VectorIndexer {
    p: Modulus,
    n: usize,
    strides: Vec<usize>,
    total: usize,
}

impl VectorIndexer {
    /// Fails when `p^n` exceeds `bound`.
    pub fn new(p: Modulus, n: usize, bound: u128, what: &'static str) -> Result<Self> {
        let total = p.pow(n).unwrap_or(u128::MAX);
        if total > bound || total > usize::MAX as u128 {
            return Err(Error::bound(what, total, bound));
        }
        let mut strides = vec![1usize; n];
        for a in (0..n.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * p.get() as usize;
        }
        Ok(VectorIndexer { p, n, strides, total: total as usize })
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.total
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    #[inline]
    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    #[inline]
    pub fn encode(&self, entries: &[u32]) -> usize {
        entries.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum()
    }

    pub fn decode(&self, mut index: usize) -> ZpVec {
        let p = self.p.get() as usize;
        let mut entries = vec![0u32; self.n];
        for a in (0..self.n).rev() {
            entries[a] = (index % p) as u32;
            index /= p;
        }
        ZpVec::from_raw(self.p, entries)
    }

    /// Calls `f(index, digits)` for every vector in index order.
    pub fn for_each(&self, mut f: impl FnMut(usize, &[u32])) {
        let p = self.p.get();
        let mut digits = vec![0u32; self.n];
        for index in 0..self.total {
            f(index, &digits);
            for a in (0..self.n).rev() {
                digits[a] += 1;
                if digits[a] < p {
                    break;
                }
                digits[a] = 0;
            }
        }
    }
}

/// An undirected `Z_p`-weighted graph stored as a symmetric adjacency matrix
/// with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    n: usize,
    p: Modulus,
    gamma: Vec<u32>,
}

impl WeightedGraph {
    pub fn empty(p: Modulus, n: usize) -> Self {
        WeightedGraph { n, p, gamma: vec![0; n * n] }
    }

    /// Edges use 0-based vertices; weights may be negative.
    pub fn from_edges(p: Modulus, n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let mut g = Self::empty(p, n);
        for &(a, b, w) in edges {
            g.set_edge(a, b, w)?;
        }
        Ok(g)
    }

    /// Builds a graph from a full matrix, validating symmetry and the zero diagonal.
    pub fn from_matrix(p: Modulus, n: usize, gamma: Vec<u32>) -> Result<Self> {
        if gamma.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, found: gamma.len() });
        }
        for a in 0..n {
            if gamma[a * n + a] != 0 {
                return Err(Error::InvalidGraph(format!("nonzero diagonal at vertex {a}")));
            }
            for b in 0..n {
                let w = gamma[a * n + b];
                if w >= p.get() {
                    return Err(Error::ResidueOutOfRange { value: w as u64, p: p.get() });
                }
                if w != gamma[b * n + a] {
                    return Err(Error::InvalidGraph(format!("asymmetric entry at ({a},{b})")));
                }
            }
        }
        Ok(WeightedGraph { n, p, gamma })
    }

    pub fn set_edge(&mut self, a: usize, b: usize, w: i64) -> Result<()> {
        for v in [a, b] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self loop at vertex {a}")));
        }
        let w = self.p.reduce(w);
        self.gamma[a * self.n + b] = w;
        self.gamma[b * self.n + a] = w;
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    #[inline]
    pub fn weight(&self, a: usize, b: usize) -> u32 {
        self.gamma[a * self.n + b]
    }

    pub fn matrix(&self) -> &[u32] {
        &self.gamma
    }

    pub fn row(&self, a: usize) -> ZpVec {
        ZpVec::from_raw(self.p, self.gamma[a * self.n..(a + 1) * self.n].to_vec())
    }

    /// Nonzero edges `(a, b, w)` with `a < b`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let w = self.weight(a, b);
                if w != 0 {
                    out.push((a, b, w));
                }
            }
        }
        out
    }

    /// `s·Γ`.
    pub fn mat_vec(&self, s: &ZpVec) -> Result<ZpVec> {
        if s.modulus() != self.p {
            return Err(Error::ModulusMismatch(s.modulus().get(), self.p.get()));
        }
        if s.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: s.len() });
        }
        Ok(self.mat_vec_unchecked(s.entries()))
    }

    pub(crate) fn mat_vec_unchecked(&self, s: &[u32]) -> ZpVec {
        let p = self.p.get() as u64;
        let mut out = vec![0u64; self.n];
        for (a, &sa) in s.iter().enumerate() {
            if sa == 0 {
                continue;
            }
            let row = &self.gamma[a * self.n..(a + 1) * self.n];
            for (o, &w) in out.iter_mut().zip(row) {
                *o += sa as u64 * w as u64;
            }
        }
        ZpVec::from_raw(self.p, out.into_iter().map(|v| (v % p) as u32).collect())
    }

    /// `Σ_{a<b} Γ_ab s_a s_b mod p`, which equals `½ s·Γ·s` without dividing by 2.
    pub fn half_quadratic_form(&self, s: &[u32]) -> u32 {
        let p = self.p.get() as u64;
        let mut acc = 0u64;
        for a in 0..self.n {
            if s[a] == 0 {
                continue;
            }
            for b in a + 1..self.n {
                let w = self.gamma[a * self.n + b];
                if w != 0 && s[b] != 0 {
                    acc = (acc + w as u64 * s[a] as u64 % p * s[b] as u64) % p;
                }
            }
        }
        acc as u32
    }

    /// Graph with vertex `a` renamed to `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<WeightedGraph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: perm.len() });
        }
        let mut g = Self::empty(self.p, self.n);
        for (a, b, w) in self.edges() {
            g.set_edge(perm[a], perm[b], w as i64)?;
        }
        Ok(g)
    }

    /// Disjoint union; vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &WeightedGraph) -> Result<WeightedGraph> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        let mut g = Self::empty(self.p, self.n + other.n);
        for (a, b, w) in self.edges() {
            g.set_edge(a, b, w as i64)?;
        }
        for (a, b, w) in other.edges() {
            g.set_edge(self.n + a, self.n + b, w as i64)?;
        }
        Ok(g)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Inverse of `a` modulo `m`, when it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i64, m as i64);
    (g == 1).then(|| x.rem_euclid(m as i64) as u64)
}

/// Prime factorisation as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            let mut e = 0;
            while m % f == 0 {
                m /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Howell normal form of the row span of `rows` over `Z_p`.
///
/// Rows are in echelon form, each pivot divides `p`, entries above a pivot
/// are reduced below it, and every element of the span whose first `k`
/// entries vanish is a combination of the rows with pivots past column `k`.
/// The form is unique for a given module, so two spans are equal exactly when
/// their Howell forms are.
pub fn howell_form(p: Modulus, ncols: usize, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let m = p.get() as i64;
    let mut a: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            r.iter().map(|&e| e as i64 % m).collect()
        })
        .filter(|r: &Vec<i64>| r.iter().any(|&e| e != 0))
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r >= a.len() {
            break;
        }
        // Fold the gcd of column c (rows r..) into row r.
        for k in r + 1..a.len() {
            let bk = a[k][c];
            if bk == 0 {
                continue;
            }
            let ar = a[r][c];
            let (g, s, t) = ext_gcd(ar, bk);
            let (u, v) = (-bk / g, ar / g);
            for j in c..ncols {
                let (x, y) = (a[r][j], a[k][j]);
                a[r][j] = (s * x + t * y).rem_euclid(m);
                a[k][j] = (u * x + v * y).rem_euclid(m);
            }
        }
        let pivot = a[r][c];
        if pivot == 0 {
            continue;
        }
        // Normalise the pivot to gcd(pivot, p) by a unit.
        let unit = normalizing_unit(pivot as u64, m as u64) as i64;
        for j in c..ncols {
            a[r][j] = (a[r][j] * unit).rem_euclid(m);
        }
        let g = a[r][c];
        for i in 0..r {
            let q = a[i][c] / g;
            if q != 0 {
                for j in c..ncols {
                    a[i][j] = (a[i][j] - q * a[r][j]).rem_euclid(m);
                }
            }
        }
        // Howell property: the annihilated multiple of the pivot row joins
        // the rows still to be processed.
        if g != 1 {
            let factor = m / g;
            let extra: Vec<i64> = a[r].iter().map(|&e| (e * factor).rem_euclid(m)).collect();
            if extra.iter().any(|&e| e != 0) {
                a.push(extra);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.into_iter()
        .filter(|row| row.iter().any(|&e| e != 0))
        .map(|row| row.into_iter().map(|e| e as u32).collect())
        .collect()
}

/// A unit `u` modulo `m` with `u·a ≡ gcd(a, m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    let (a1, m1) = (a / g, m / g);
    let base = mod_inverse(a1 % m1, m1).unwrap_or(0);
    let mut u = base;
    while gcd(u, m) != 1 {
        u += m1;
    }
    u % m
}

/// Reduces `v` against a Howell form; returns the remainder (zero iff `v`
/// lies in the span).
pub fn howell_reduce(p: Modulus, form: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    let m = p.get() as i64;
    let mut v: Vec<i64> = v.iter().map(|&e| e as i64).collect();
    for row in form {
        let Some(c) = row.iter().position(|&e| e != 0) else {
            continue;
        };
        let g = row[c] as i64;
        if v[c] % g != 0 {
            return v.into_iter().map(|e| e as u32).collect();
        }
        let q = v[c] / g;
        for j in c..v.len() {
            v[j] = (v[j] - q * row[j] as i64).rem_euclid(m);
        }
    }
    v.into_iter().map(|e| e as u32).collect()
}

/// Independent generators of a submodule of `Z_p^n` with their orders.
///
/// The module is the internal direct sum of the cyclic groups generated by
/// each generator, so it has exactly `∏ degrees` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpModuleBasis {
    p: Modulus,
    n: usize,
    generators: Vec<ZpVec>,
    degrees: Vec<u32>,
}

impl ZpModuleBasis {
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ZpVec] {
        &self.generators
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn size(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    /// Enumerates every element; fails when the module is larger than `bound`.
    pub fn elements(&self, bound: u128) -> Result<Vec<ZpVec>> {
        let size = self.size();
        if size > bound {
            return Err(Error::bound("module enumeration", size, bound));
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut coeffs = vec![0u32; self.generators.len()];
        let mut current = ZpVec::zeros(self.p, self.n);
        loop {
            out.push(current.clone());
            let mut i = coeffs.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coeffs[i] += 1;
                current = &current + &self.generators[i];
                if coeffs[i] < self.degrees[i] {
                    break;
                }
                // Wrapped around: degrees[i]·g_i = 0, so current is restored.
                coeffs[i] = 0;
            }
        }
    }

    pub fn howell_form(&self) -> Vec<Vec<u32>> {
        let rows: Vec<Vec<u32>> = self.generators.iter().map(|g| g.entries().to_vec()).collect();
        howell_form(self.p, self.n, &rows)
    }

    pub fn contains(&self, v: &ZpVec) -> bool {
        v.modulus() == self.p
            && v.len() == self.n
            && howell_reduce(self.p, &self.howell_form(), v.entries()).iter().all(|&e| e == 0)
    }

    /// Same set of vectors, compared through Howell forms.
    pub fn same_module(&self, other: &ZpModuleBasis) -> bool {
        self.p == other.p && self.n == other.n && self.howell_form() == other.howell_form()
    }
}

/// Generators with degrees for the module spanned by `vectors`.
///
/// The module is split into its primary components (one per prime power
/// dividing `p`); each component is a module over a local ring and is
/// diagonalised by minimal-valuation pivoting. Pivots are chosen by
/// (valuation, column, row), so output is deterministic for a given input
/// order. Generators are listed by descending degree.
pub fn howell_basis(p: Modulus, n: usize, vectors: &[ZpVec]) -> Result<ZpModuleBasis> {
    for v in vectors {
        if v.modulus() != p {
            return Err(Error::ModulusMismatch(v.modulus().get(), p.get()));
        }
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: v.len() });
        }
    }
    let pm = p.get() as u64;
    let mut gens: Vec<(ZpVec, u32)> = Vec::new();
    for (prime, exp) in factorize(pm) {
        let q = prime.pow(exp);
        let cof = pm / q;
        // CRT idempotent lifting residues mod q to Z_p with zero cofactor part.
        let lift = cof * mod_inverse(cof % q, q).expect("coprime cofactor") % pm;
        let mut rows: Vec<Vec<u64>> =
            vectors.iter().map(|v| v.entries().iter().map(|&e| e as u64 % q).collect()).collect();
        for (row, valuation) in local_diagonal(&mut rows, prime, exp, n) {
            let degree = (q / prime.pow(valuation)) as u32;
            let entries = row.iter().map(|&e| (e * lift % pm) as u32).collect();
            gens.push((ZpVec::from_raw(p, entries), degree));
        }
    }
    gens.sort_by_key(|g| std::cmp::Reverse(g.1));
    let (generators, degrees) = gens.into_iter().unzip();
    Ok(ZpModuleBasis { p, n, generators, degrees })
}

fn valuation(mut x: u64, prime: u64, exp: u32) -> u32 {
    if x == 0 {
        return exp;
    }
    let mut v = 0;
    while x % prime == 0 {
        x /= prime;
        v += 1;
    }
    v
}

/// Row-reduces over `Z_{prime^exp}`, returning independent rows and the
/// valuation of each pivot (which is also the minimal valuation of its row).
fn local_diagonal(rows: &mut Vec<Vec<u64>>, prime: u64, exp: u32, n: usize) -> Vec<(Vec<u64>, u32)> {
    let q = prime.pow(exp);
    let mut out = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for c in 0..n {
            for (r, row) in rows.iter().enumerate() {
                let v = valuation(row[c], prime, exp);
                if v < exp && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, c, r));
                }
            }
        }
        let Some((v, c, r)) = best else { return out };
        let mut pivot_row = rows.swap_remove(r);
        let scale = prime.pow(v);
        let unit = pivot_row[c] / scale;
        let inv = mod_inverse(unit % q, q).expect("unit part is invertible");
        for e in pivot_row.iter_mut() {
            *e = *e * inv % q;
        }
        for row in rows.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let m = row[c] / scale;
            for (e, &pe) in row.iter_mut().zip(&pivot_row) {
                *e = (*e + q - m * pe % q) % q;
            }
        }
        rows.retain(|row| row.iter().any(|&e| e != 0));
        out.push((pivot_row, v));
    }
}

/// Basis of `{ s : s·c = 0 for every input c }`.
pub fn solve_orthogonal(p: Modulus, n: usize, vectors: &[ZpVec]) -> Result<ZpModuleBasis> {
    for v in vectors {
        if v.modulus() != p {
            return Err(Error::ModulusMismatch(v.modulus().get(), p.get()));
        }
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: v.len() });
        }
    }
    let rows: Vec<Vec<u32>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    let constraints = howell_form(p, n, &rows);
    let m = constraints.len();
    // Rows [Cᵀ | I]; the Howell form rows vanishing on the first m columns
    // span exactly the y with C·y = 0.
    let augmented: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let mut row: Vec<u32> = constraints.iter().map(|c| c[j]).collect();
            row.extend((0..n).map(|i| u32::from(i == j)));
            row
        })
        .collect();
    let form = howell_form(p, m + n, &augmented);
    let kernel: Vec<ZpVec> = form
        .into_iter()
        .filter(|row| row[..m].iter().all(|&e| e == 0))
        .map(|row| ZpVec::from_raw(p, row[m..].to_vec()))
        .collect();
    howell_basis(p, n, &kernel)
}
