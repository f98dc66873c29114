//! Counting maps `O^r -> ⊕O(a_i)` on `P^1` that are injective on the marked fibers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{inv_mod, mul_mod, require_prime, P1Point};

use super::bundles::SplittingType;
use super::poly::{det, digits, eval_homogeneous, FpPoly};

/// Largest number of `r`-tuples of global sections enumerated.
const HOM_GUARD: u64 = 1 << 22;

/// A global section of `E`: one polynomial of degree `<= a_i` per summand.
struct Section {
    entries: Vec<FpPoly>,
    /// Value in the fiber at each marked point.
    fibers: Vec<Vec<u32>>,
}

fn sections(t: &SplittingType, points: &[P1Point], q: u64) -> Vec<Section> {
    let p = q as u32;
    let h0 = t.sections_dim();
    (0..q.pow(h0 as u32))
        .map(|index| {
            let flat = digits(index, q, h0);
            let mut rest = flat.as_slice();
            let entries: Vec<Vec<u32>> = t
                .twists()
                .iter()
                .map(|&a| {
                    let n = (a + 1).max(0) as usize;
                    let (head, tail) = rest.split_at(n);
                    rest = tail;
                    head.to_vec()
                })
                .collect();
            let fibers = points
                .iter()
                .map(|&pt| {
                    entries.iter().zip(t.twists()).map(|(c, &a)| eval_homogeneous(c, a, pt, p)).collect()
                })
                .collect();
            Section { entries: entries.into_iter().map(FpPoly::new).collect(), fibers }
        })
        .collect()
}

/// Determinant of a small square matrix over `F_p` by elimination.
fn det_mod(mut m: Vec<Vec<u32>>, p: u32) -> u32 {
    let n = m.len();
    let mut d = 1u32;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            d = (p - d) % p;
        }
        d = mul_mod(d, m[c][c], p);
        let inv = inv_mod(m[c][c], p);
        for r in c + 1..n {
            let f = mul_mod(m[r][c], inv, p);
            if f == 0 {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (x, &y) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
    }
    d
}

fn accepts(tuple: &[&Section], s: usize, p: u32) -> bool {
    let r = tuple.len();
    if s == 0 {
        let m: Vec<Vec<FpPoly>> =
            (0..r).map(|i| tuple.iter().map(|sec| sec.entries[i].clone()).collect()).collect();
        return !det(&m, p).is_zero();
    }
    (0..s).all(|l| {
        let m: Vec<Vec<u32>> = (0..r).map(|i| tuple.iter().map(|sec| sec.fibers[l][i]).collect()).collect();
        det_mod(m, p) != 0
    })
}

/// `|Hom^S_inj(O^r, E)|` for `E = ⊕O(a_i)` on `P^1` over `F_q`.
///
/// A map is an `r`-tuple of global sections. With marked points it must be
/// an isomorphism on every marked fiber, which already forces injectivity as
/// a sheaf map. Without marked points it must have generic rank `r`, i.e. a
/// nonzero determinant in `F_q[x]`.
pub fn hom_inj_count_p1(q: u64, t: &SplittingType, marked_points: &[P1Point]) -> Result<u64> {
    let p = require_prime(q)?;
    if let Some(P1Point::Affine(a)) =
        marked_points.iter().find(|pt| matches!(pt, P1Point::Affine(a) if *a as u64 >= q))
    {
        return Err(Error::InvalidArgument(format!("{a} is not in F_{q}")));
    }
    let r = t.rank();
    let h0 = t.sections_dim() as u32;
    let total = q
        .checked_pow(h0)
        .and_then(|n| n.checked_pow(r as u32))
        .filter(|&n| n <= HOM_GUARD)
        .ok_or_else(|| Error::TooLarge(format!("{r}-tuples of sections of {t} over F_{q}")))?;
    if t.twists().iter().any(|&a| a < 0) {
        // A summand without sections makes every map degenerate.
        return Ok(0);
    }
    let secs = sections(t, marked_points, q);
    let n = secs.len() as u64;
    let s = marked_points.len();
    let count = (0..total)
        .into_par_iter()
        .filter(|&index| {
            let cols = digits(index, n, r);
            let tuple: Vec<&Section> = cols.iter().map(|&c| &secs[c as usize]).collect();
            accepts(&tuple, s, p)
        })
        .count();
    Ok(count as u64)
}

/// Whether `E = ⊕O(a_i)` is twisted far enough for the fiber-injective
/// proportion to be exact at `s` marked points: every `a_i >= max(0, s - 1)`.
///
/// This is `H^1(E(-S)) = 0` together with global generation, and it is what
/// makes `H^0(E) -> ⊕_P E_P` onto. Global generation, `H^1(E) = 0` and
/// `χ(E) >= rs` alone do not suffice: `O(3) ⊕ O(0)` with two marked points
/// satisfies all three yet its fiber maps are not jointly onto.
pub fn lemma_conditions_hold(t: &SplittingType, s: usize) -> bool {
    let bound = (s as i64 - 1).max(0);
    t.twists().iter().all(|&a| a >= bound)
}
