use crate::field::{mul_mod, P1Point};

/// Polynomial over `F_p`, little-endian, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FpPoly {
    coeffs: Vec<u32>,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn zero() -> Self {
        FpPoly::default()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval(&self, x: u32, p: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }

    pub fn add(&self, other: &FpPoly, p: u32) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new((0..n).map(|i| (at(&self.coeffs, i) + at(&other.coeffs, i)) % p).collect())
    }

    pub fn neg(&self, p: u32) -> FpPoly {
        FpPoly::new(self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }

    pub fn sub(&self, other: &FpPoly, p: u32) -> FpPoly {
        self.add(&other.neg(p), p)
    }

    pub fn mul(&self, other: &FpPoly, p: u32) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        FpPoly::new(out)
    }
}

/// Cofactor-expansion determinant of a square matrix over `F_p[x]`.
pub(crate) fn det(m: &[Vec<FpPoly>], p: u32) -> FpPoly {
    let n = m.len();
    match n {
        0 => return FpPoly::new(vec![1]),
        1 => return m[0][0].clone(),
        _ => {}
    }
    let mut total = FpPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<FpPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det(&minor, p), p);
        total = if j % 2 == 0 { total.add(&term, p) } else { total.sub(&term, p) };
    }
    total
}

/// Digits of `index` in base `q`, least significant first, `len` of them.
pub(crate) fn digits(mut index: u64, q: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (index % q) as u32;
            index /= q;
            d
        })
        .collect()
}

/// Every polynomial of degree `< bound` (including zero), `q^bound` of them.
pub(crate) fn polys_below(q: u32, bound: usize) -> impl Iterator<Item = FpPoly> {
    let total = (q as u64).pow(bound as u32);
    (0..total).map(move |i| FpPoly::new(digits(i, q as u64, bound)))
}

/// Every monic polynomial of degree exactly `deg`.
pub(crate) fn monic_polys(q: u32, deg: usize) -> impl Iterator<Item = FpPoly> {
    polys_below(q, deg).map(move |low| {
        let mut c = low.coeffs().to_vec();
        c.resize(deg, 0);
        c.push(1);
        FpPoly::new(c)
    })
}

/// Value in the fiber at `point` of a section of `O(degree)` written as a
/// polynomial of degree `<= degree` in the affine coordinate. The fiber at a
/// point `[X0 : X1]` is trivialized by the representative `(1, a)` or `(0, 1)`.
pub(crate) fn eval_homogeneous(coeffs: &[u32], degree: i64, point: P1Point, p: u32) -> u32 {
    match point {
        P1Point::Affine(a) => coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, a, p) + c) % p),
        P1Point::Infinity => {
            if degree < 0 {
                0
            } else {
                coeffs.get(degree as usize).copied().unwrap_or(0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = 3;
        let a = FpPoly::new(vec![1, 1]); // 1 + x
        let b = FpPoly::new(vec![2, 1]); // 2 + x
        assert_eq!(a.mul(&b, p), FpPoly::new(vec![2, 0, 1]));
        assert!(a.sub(&a, p).is_zero());
        assert_eq!(a.eval(2, p), 0);
        assert_eq!(FpPoly::new(vec![0, 0]).degree(), None);
    }

    #[test]
    fn enumerators() {
        assert_eq!(polys_below(3, 2).count(), 9);
        let monic: Vec<_> = monic_polys(2, 2).collect();
        assert_eq!(monic.len(), 4);
        assert!(monic.iter().all(|m| m.is_monic() && m.degree() == Some(2)));
        assert_eq!(monic_polys(5, 0).collect::<Vec<_>>(), vec![FpPoly::new(vec![1])]);
    }

    #[test]
    fn fiber_values() {
        // 1 + 2x + x^2 as a section of O(2) and of O(3).
        let c = [1, 2, 1];
        assert_eq!(eval_homogeneous(&c, 2, P1Point::Affine(1), 5), 4);
        assert_eq!(eval_homogeneous(&c, 2, P1Point::Infinity, 5), 1);
        assert_eq!(eval_homogeneous(&c, 3, P1Point::Infinity, 5), 0);
    }
}
