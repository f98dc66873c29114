//! Effective `r`-divisors on the affine line, as Hermite normal forms.
//!
//! An effective `r`-divisor `D ⊃ O^r` of degree `n` supported on `A^1` is dual
//! to a sublattice of `F_q[x]^r` of colength `n`. Each such sublattice is the
//! row span of exactly one upper-triangular matrix with monic diagonal whose
//! entries above the diagonal are reduced modulo the diagonal entry of their
//! column. The point at infinity is never in the support.

use crate::error::{Error, Result};
use crate::field::{require_prime, P1Point};

use super::poly::{monic_polys, polys_below, FpPoly};

/// Hard ceiling on matrices enumerated by a single census call.
const HNF_GUARD: u64 = 1 << 26;

/// Upper-triangular `r × r` polynomial matrix in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HnfMatrix {
    size: usize,
    modulus: u32,
    entries: Vec<FpPoly>,
}

impl HnfMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &FpPoly {
        &self.entries[i * self.size + j]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `Σ deg(diagonal)`: the `F_q`-dimension of `F_q[x]^r / rows`.
    pub fn colength(&self) -> usize {
        (0..self.size).map(|i| self.entry(i, i).degree().unwrap_or(0)).sum()
    }

    /// Triangular, monic diagonal, above-diagonal entries reduced by their column.
    pub fn is_valid(&self) -> bool {
        (0..self.size).all(|i| {
            let diag = self.entry(i, i);
            (0..self.size).all(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => self.entry(i, j).is_zero(),
                std::cmp::Ordering::Equal => diag.is_monic(),
                std::cmp::Ordering::Greater => {
                    let bound = self.entry(j, j).degree().unwrap_or(0);
                    self.entry(i, j).degree().is_none_or(|d| d < bound)
                }
            })
        })
    }

    /// The determinant, i.e. the product of the diagonal.
    pub fn determinant(&self) -> FpPoly {
        (0..self.size).fold(FpPoly::new(vec![1]), |acc, i| acc.mul(self.entry(i, i), self.modulus))
    }
}

/// Weak compositions of `n` into `r` parts.
fn compositions(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=n)
        .flat_map(|first| {
            compositions(n - first, r - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Number of matrices the enumeration over the given diagonal degrees visits,
/// counting `q^e` candidates for each monic diagonal of degree `e`.
fn enumeration_size(q: u64, degrees: &[usize], monic_diagonal_choices: bool) -> u64 {
    degrees.iter().enumerate().fold(1u64, |acc, (j, &e)| {
        let diag = if monic_diagonal_choices { q.saturating_pow(e as u32) } else { 1 };
        acc.saturating_mul(diag).saturating_mul(q.saturating_pow((j * e) as u32))
    })
}

/// Calls `visit` on every HNF with the given diagonal polynomials.
fn for_each_hnf_with_diagonal<F: FnMut(HnfMatrix)>(q: u32, diagonal: &[FpPoly], visit: &mut F) {
    let r = diagonal.len();
    // (i, j) slots above the diagonal, each with q^{deg d_j} choices.
    let slots: Vec<(usize, usize)> = (0..r).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let choices: Vec<Vec<FpPoly>> = slots
        .iter()
        .map(|&(_, j)| polys_below(q, diagonal[j].degree().unwrap_or(0)).collect())
        .collect();
    let mut counter = vec![0usize; slots.len()];
    loop {
        let mut entries = vec![FpPoly::zero(); r * r];
        for (i, d) in diagonal.iter().enumerate() {
            entries[i * r + i] = d.clone();
        }
        for (k, &(i, j)) in slots.iter().enumerate() {
            entries[i * r + j] = choices[k][counter[k]].clone();
        }
        visit(HnfMatrix { size: r, modulus: q, entries });
        // Odometer over slot choices.
        let mut k = 0;
        loop {
            if k == slots.len() {
                return;
            }
            counter[k] += 1;
            if counter[k] < choices[k].len() {
                break;
            }
            counter[k] = 0;
            k += 1;
        }
    }
}

/// Every colength-`n` HNF supported at `x = 0` (diagonal `x^{e_i}`).
pub fn enumerate_local_hnf(q: u64, r: usize, n: usize) -> Result<Vec<HnfMatrix>> {
    let p = check_local_guard(q, r, n)?;
    let mut out = Vec::new();
    for degrees in compositions(n, r) {
        let diagonal: Vec<FpPoly> = degrees.iter().map(|&e| x_power(e)).collect();
        for_each_hnf_with_diagonal(p, &diagonal, &mut |m| out.push(m));
    }
    Ok(out)
}

fn x_power(e: usize) -> FpPoly {
    let mut c = vec![0; e + 1];
    c[e] = 1;
    FpPoly::new(c)
}

fn check_local_guard(q: u64, r: usize, n: usize) -> Result<u32> {
    let p = require_prime(q)?;
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let total: u64 = compositions(n, r)
        .iter()
        .map(|d| enumeration_size(q, d, false))
        .fold(0u64, u64::saturating_add);
    if r > 3 || n > 8 || total > HNF_GUARD {
        return Err(Error::TooLarge(format!(
            "local census q={q} r={r} n={n} ({total} matrices; limits r <= 3, n <= 8, {HNF_GUARD})"
        )));
    }
    Ok(p)
}

/// Number of colength-`n` sublattices of `F_q[[x]]^r`, counted one HNF at a time.
pub fn local_sublattice_count(q: u64, r: usize, n: usize) -> Result<u64> {
    let p = check_local_guard(q, r, n)?;
    let mut count = 0u64;
    for degrees in compositions(n, r) {
        let diagonal: Vec<FpPoly> = degrees.iter().map(|&e| x_power(e)).collect();
        for_each_hnf_with_diagonal(p, &diagonal, &mut |m| {
            debug_assert!(m.is_valid() && m.colength() == n);
            count += m.is_valid() as u64;
        });
    }
    Ok(count)
}

/// Effective `r`-divisors of degree `n` on `P^1 - ({∞} ∪ avoid)`: HNFs over
/// `F_q[x]` whose determinant has no root in `avoid`.
pub fn p1_divisor_count(q: u64, r: usize, n: usize, avoid: &[u32]) -> Result<u64> {
    let p = require_prime(q)?;
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    if avoid.iter().any(|&a| a as u64 >= q) {
        return Err(Error::InvalidArgument(format!("avoided points must lie in F_{q}")));
    }
    let mut sorted = avoid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != avoid.len() {
        return Err(Error::InvalidArgument("avoided points must be distinct".into()));
    }
    let total: u64 = compositions(n, r)
        .iter()
        .map(|d| enumeration_size(q, d, true))
        .fold(0u64, u64::saturating_add);
    if total > HNF_GUARD {
        return Err(Error::TooLarge(format!("divisor census q={q} r={r} n={n} ({total} matrices)")));
    }
    let coprime = |d: &FpPoly| avoid.iter().all(|&a| d.eval(a, p) != 0);
    let mut count = 0u64;
    for degrees in compositions(n, r) {
        let per_slot: Vec<Vec<FpPoly>> =
            degrees.iter().map(|&e| monic_polys(p, e).filter(coprime).collect()).collect();
        let mut counter = vec![0usize; r];
        if per_slot.iter().any(Vec::is_empty) {
            continue;
        }
        'diagonals: loop {
            let diagonal: Vec<FpPoly> =
                (0..r).map(|i| per_slot[i][counter[i]].clone()).collect();
            for_each_hnf_with_diagonal(p, &diagonal, &mut |m| {
                debug_assert!(m.is_valid() && m.colength() == n);
                let det = m.determinant();
                count += (m.is_valid() && avoid.iter().all(|&a| det.eval(a, p) != 0)) as u64;
            });
            let mut k = 0;
            loop {
                if k == r {
                    break 'diagonals;
                }
                counter[k] += 1;
                if counter[k] < per_slot[k].len() {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
        }
    }
    Ok(count)
}

/// Effective `r`-divisors of degree `n` on `P^1 - S` for any set `S` of
/// rational points. When `∞ ∉ S`, divisors are split into their affine part
/// and their part at infinity, which is a local census at a rational point.
pub fn p1_open_divisor_count(q: u64, r: usize, n: usize, marked: &[P1Point]) -> Result<u64> {
    let avoid: Vec<u32> = marked
        .iter()
        .filter_map(|pt| match pt {
            P1Point::Affine(a) => Some(*a),
            P1Point::Infinity => None,
        })
        .collect();
    if marked.contains(&P1Point::Infinity) {
        return p1_divisor_count(q, r, n, &avoid);
    }
    (0..=n)
        .map(|k| Ok(p1_divisor_count(q, r, n - k, &avoid)? * local_sublattice_count(q, r, k)?))
        .sum()
}
