//! Prime-field arithmetic, small dense matrices over `F_p`, and subspace
//! enumeration by reduced row echelon form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Largest ambient space (in vectors) the subspace enumerators will touch.
pub const SUBSPACE_GUARD: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn require_prime(q: u64) -> Result<u32> {
    if is_prime(q) && q < (1 << 16) {
        Ok(q as u32)
    } else {
        Err(Error::NotPrime(q))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    residue: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: i64, modulus: u32) -> Self {
        FieldElement { residue: value.rem_euclid(modulus as i64) as u32, modulus }
    }

    pub fn residue(self) -> u32 {
        self.residue
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn inverse(self) -> Option<Self> {
        (!self.is_zero()).then(|| FieldElement { residue: inv_mod(self.residue, self.modulus), modulus: self.modulus })
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FieldElement { residue: (self.residue + rhs.residue) % self.modulus, modulus: self.modulus }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement { residue: (self.modulus - self.residue) % self.modulus, modulus: self.modulus }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        FieldElement { residue: mul_mod(self.residue, rhs.residue, self.modulus), modulus: self.modulus }
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime.
    let mut result = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// `|GL_r(F_q)| = prod_{i<r} (q^r - q^i)`.
pub fn gl_order(r: usize, q: u64) -> Rational {
    let q = Rational::from(q);
    let qr = q.pow(r as i64);
    (0..r).map(|i| &qr - q.pow(i as i64)).product()
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        write!(f, "F_{}{:?}", self.modulus, rows)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u32) -> Self {
        Matrix { rows, cols, modulus, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut m = Matrix::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Entries are reduced mod `modulus`.
    pub fn from_rows(rows: &[Vec<i64>], modulus: u32) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let data = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(modulus as i64) as u32)
            .collect();
        Matrix { rows: rows.len(), cols, modulus, data }
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, modulus: u32, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, modulus, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        FieldElement { residue: self.data[i * self.cols + j], modulus: self.modulus }
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }


    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = self.modulus;
        let mut out = Matrix::zeros(self.rows, other.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + mul_mod(a, other.at(k, j), p)) % p;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.at(i, j);
            }
        }
        out
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let p = self.modulus;
        let mut m = self.data.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| m[r * cols + col] != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..cols {
                    m.swap(pr * cols + j, row * cols + j);
                }
            }
            let inv = inv_mod(m[row * cols + col], p);
            for j in 0..cols {
                m[row * cols + j] = mul_mod(m[row * cols + j], inv, p);
            }
            for r in 0..self.rows {
                let f = m[r * cols + col];
                if r == row || f == 0 {
                    continue;
                }
                for j in 0..cols {
                    let sub = mul_mod(f, m[row * cols + j], p);
                    m[r * cols + j] = (m[r * cols + j] + p - sub) % p;
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.truncate(row * cols);
        (Matrix { rows: row, cols, modulus: p, data: m }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.at(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, self.modulus);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = red.at(i, n + j);
            }
        }
        Some(inv)
    }
}

/// A subspace of `F_p^n`, stored as the RREF of a basis (one row per basis vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// The span of the rows of `generators`.
    pub fn span(generators: &Matrix) -> Self {
        Subspace { basis: generators.rref().0 }
    }

    pub fn whole(n: usize, modulus: u32) -> Self {
        Subspace { basis: Matrix::identity(n, modulus) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Image under the linear map `v -> g v` (vectors as columns).
    pub fn image(&self, g: &Matrix) -> Subspace {
        Subspace::span(&self.basis.mul(&g.transpose()))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        let mut stacked = self.basis.data.clone();
        stacked.extend_from_slice(&other.basis.data);
        let m = Matrix::from_raw(self.dim() + other.dim(), self.ambient_dim(), self.basis.modulus, stacked);
        m.rank() == self.dim()
    }
}

/// All `dim`-dimensional subspaces of `F_q^ambient`, one RREF representative each,
/// in lexicographic order of pivot pattern then free entries.
pub fn enumerate_subspaces(q: u64, ambient: usize, dim: usize) -> Result<Vec<Subspace>> {
    let p = require_prime(q)?;
    if dim > ambient {
        return Err(Error::InvalidArgument(format!("dimension {dim} exceeds ambient {ambient}")));
    }
    if q.checked_pow(ambient as u32).is_none_or(|v| v > SUBSPACE_GUARD) {
        return Err(Error::TooLarge(format!("F_{q}^{ambient} has more than {SUBSPACE_GUARD} vectors")));
    }
    let mut out = Vec::new();
    for pivots in combinations(ambient, dim) {
        // Free slots: row i, columns after its pivot that are not pivots.
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..ambient).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = (q as usize).pow(free.len() as u32);
        for index in 0..total {
            let mut data = vec![0u32; dim * ambient];
            for (i, &c) in pivots.iter().enumerate() {
                data[i * ambient + c] = 1;
            }
            let mut digits = index;
            for &(i, c) in &free {
                data[i * ambient + c] = (digits % q as usize) as u32;
                digits /= q as usize;
            }
            out.push(Subspace { basis: Matrix::from_raw(dim, ambient, p, data) });
        }
    }
    Ok(out)
}

/// Increasing `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A rational point of `P^1` over `F_q`: an affine coordinate or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Point {
    Affine(u32),
    Infinity,
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Affine(a) => write!(f, "{a}"),
            P1Point::Infinity => write!(f, "inf"),
        }
    }
}

impl P1Point {
    pub fn parse(s: &str, q: u64) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(P1Point::Infinity);
        }
        match s.parse::<u64>() {
            Ok(a) if a < q => Ok(P1Point::Affine(a as u32)),
            _ => Err(Error::InvalidArgument(format!("{s:?} is not a point of P^1(F_{q})"))),
        }
    }
}

/// Parses distinct points of `P^1(F_q)`.
pub fn parse_points<'a, I: IntoIterator<Item = &'a str>>(items: I, q: u64) -> Result<Vec<P1Point>> {
    let points = items.into_iter().map(|s| P1Point::parse(s, q)).collect::<Result<Vec<_>>>()?;
    let mut sorted = points.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != points.len() {
        return Err(Error::InvalidArgument("marked points must be distinct".into()));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor expansion, independent of row reduction.
    fn det_cofactor(m: &[Vec<i64>], p: i64) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0].rem_euclid(p);
        }
        let mut total = 0;
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            total += sign * m[0][j] * det_cofactor(&minor, p);
        }
        total.rem_euclid(p)
    }

    fn all_matrices(n: usize, q: u32) -> impl Iterator<Item = Matrix> {
        let total = (q as usize).pow((n * n) as u32);
        (0..total).map(move |mut idx| {
            let data = (0..n * n)
                .map(|_| {
                    let d = (idx % q as usize) as u32;
                    idx /= q as usize;
                    d
                })
                .collect();
            Matrix::from_raw(n, n, q, data)
        })
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(2, 2), Rational::from(6));
        assert_eq!(gl_order(3, 2), Rational::from(168));
        assert_eq!(gl_order(1, 5), Rational::from(4));
    }

    #[test]
    fn gl_order_matches_invertible_count() {
        for q in [2u32, 3] {
            for r in 1..=3 {
                let count = all_matrices(r, q).filter(Matrix::is_invertible).count();
                assert_eq!(Rational::from(count), gl_order(r, q as u64), "r={r} q={q}");
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(2, 2).rank(), 2);
        assert_eq!(Matrix::from_rows(&[vec![1, 1], vec![1, 1]], 2).rank(), 1);
        assert_eq!(Matrix::zeros(2, 3, 5).rank(), 0);
        assert_eq!(Matrix::from_rows(&[vec![1, 2, 3]], 7).rank(), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]], 3);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3, 3));
        assert!(Matrix::from_rows(&[vec![1, 1], vec![1, 1]], 2).inverse().is_none());
    }

    #[test]
    fn subspace_examples() {
        assert_eq!(enumerate_subspaces(2, 2, 1).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(2, 4, 2).unwrap().len(), 35);
        assert_eq!(enumerate_subspaces(3, 5, 0).unwrap().len(), 1);
        assert!(matches!(enumerate_subspaces(4, 2, 1), Err(Error::NotPrime(4))));
        assert!(matches!(enumerate_subspaces(2, 21, 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn subspace_keys_are_canonical() {
        for q in [2u64, 3] {
            for n in 0..=4 {
                for k in 0..=n {
                    let spaces = enumerate_subspaces(q, n, k).unwrap();
                    let mut keys: Vec<_> = spaces.iter().map(|s| Subspace::span(s.basis())).collect();
                    assert_eq!(keys, spaces, "RREF is a fixed point");
                    keys.sort();
                    keys.dedup();
                    assert_eq!(keys.len(), spaces.len());
                    assert!(spaces.iter().all(|s| s.dim() == k));
                }
            }
        }
    }

    #[test]
    fn points_parse() {
        let pts = parse_points(["0", "1", "inf"], 2).unwrap();
        assert_eq!(pts, vec![P1Point::Affine(0), P1Point::Affine(1), P1Point::Infinity]);
        assert!(parse_points(["2"], 2).is_err());
        assert!(parse_points(["1", "1"], 3).is_err());
    }

    proptest! {
        #[test]
        fn rank_agrees_with_cofactor_determinant(entries in prop::collection::vec(0i64..3, 9)) {
            let rows: Vec<Vec<i64>> = entries.chunks(3).map(<[i64]>::to_vec).collect();
            let m = Matrix::from_rows(&rows, 3);
            prop_assert_eq!(m.rank() == 3, det_cofactor(&rows, 3) != 0);
            prop_assert!(m.rank() <= 3);
        }
    }
}
