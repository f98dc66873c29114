//! Vector bundles on `P^1`: splitting types, automorphism group orders, and
//! truncated mass sums `Σ 1/|Aut(E)|` with explicit tail bounds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{qpow, Rational};
use crate::error::{Error, Result};
use crate::field::gl_order;

/// `O(a_1) ⊕ ... ⊕ O(a_r)` with `a_1 >= ... >= a_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SplittingType {
    twists: Vec<i64>,
}

impl TryFrom<Vec<i64>> for SplittingType {
    type Error = Error;

    fn try_from(twists: Vec<i64>) -> Result<Self> {
        SplittingType::new(twists)
    }
}

impl From<SplittingType> for Vec<i64> {
    fn from(t: SplittingType) -> Self {
        t.twists
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.twists.iter().map(|a| format!("O({a})")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl SplittingType {
    /// Twists must be weakly decreasing and non-empty.
    pub fn new(twists: Vec<i64>) -> Result<Self> {
        if twists.is_empty() || twists.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("{twists:?} is not a weakly decreasing twist list")));
        }
        Ok(SplittingType { twists })
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// `a_1 - a_r`.
    pub fn gap(&self) -> i64 {
        self.twists[0] - self.twists[self.twists.len() - 1]
    }

    /// `h^0(E) = Σ max(0, a_i + 1)`.
    pub fn sections_dim(&self) -> usize {
        self.twists.iter().map(|&a| (a + 1).max(0) as usize).sum()
    }

    /// `dim End(E) = Σ_{i,j} max(0, a_i - a_j + 1)`.
    pub fn endomorphism_dim(&self) -> usize {
        self.twists
            .iter()
            .flat_map(|a| self.twists.iter().map(move |b| (a - b + 1).max(0) as usize))
            .sum()
    }

    /// Sizes of the runs of equal twists.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, a) in self.twists.iter().enumerate() {
            if i > 0 && self.twists[i - 1] == *a {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
            }
        }
        out
    }
}

/// `|Aut(⊕O(a_i))| = Π_runs |GL_m(F_q)| · q^{Σ_{a_i > a_j} (a_i - a_j + 1)}`.
pub fn aut_order_splitting(t: &SplittingType, q: u64) -> Rational {
    let units: Rational = t.multiplicities().into_iter().map(|m| gl_order(m, q)).product();
    let unipotent: i64 = t
        .twists
        .iter()
        .flat_map(|a| t.twists.iter().map(move |b| if a > b { a - b + 1 } else { 0 }))
        .sum();
    units * qpow(q, unipotent)
}

/// All splitting types of rank `r`, degree `degree` and gap at most `max_gap`,
/// ordered by gap then lexicographically.
pub fn splitting_types(r: usize, degree: i64, max_gap: i64) -> Vec<SplittingType> {
    fn extend(
        prefix: &mut Vec<i64>,
        r: usize,
        remaining: i64,
        low: i64,
        out: &mut Vec<Vec<i64>>,
    ) {
        if prefix.len() == r {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let left = (r - prefix.len()) as i64;
        let high = *prefix.last().expect("prefix starts non-empty");
        for a in (low..=high).rev() {
            // Every later twist lies in [low, a].
            if a * left < remaining || low * left > remaining {
                continue;
            }
            prefix.push(a);
            extend(prefix, r, remaining - a, low, out);
            prefix.pop();
        }
    }
    if r == 0 || max_gap < 0 {
        return Vec::new();
    }
    let r_i = r as i64;
    let mut out = Vec::new();
    // a_1 >= ceil(d/r) and a_r = smallest twist in [a_1 - max_gap, a_1].
    let first_low = degree.div_euclid(r_i) + (degree.rem_euclid(r_i) != 0) as i64;
    for a1 in first_low..=first_low + max_gap {
        let mut prefix = vec![a1];
        extend(&mut prefix, r, degree - a1, a1 - max_gap, &mut out);
    }
    let mut types: Vec<SplittingType> =
        out.into_iter().map(|t| SplittingType::new(t).expect("generated decreasing")).collect();
    types.sort_by_key(|t| (t.gap(), std::cmp::Reverse(t.twists.clone())));
    types.dedup();
    types
}

/// Upper bound on `Σ 1/|Aut(E)|` over splitting types of gap `> cutoff`.
///
/// Rank 2: the omitted terms are exactly `1/((q-1)^2 q^{g+1})` for gaps `g`
/// of the parity of the degree, so the bound is their exact sum.
/// Rank 3: a type of gap `h > 0` has `|Aut| >= (q-1)^3 q^{2h+2}`, and there
/// are at most `h + 1` of them, giving `(q-1)^{-3} Σ_{h > cutoff} (h+1) q^{-2h-2}`.
pub fn mass_tail_bound(q: u64, r: usize, degree: i64, cutoff: i64) -> Result<Rational> {
    let one = Rational::one();
    let qm1 = Rational::from(q - 1);
    match r {
        1 => Ok(Rational::zero()),
        2 => {
            let mut first = cutoff + 1;
            if (first - degree).rem_euclid(2) != 0 {
                first += 1;
            }
            let ratio = qpow(q, -2);
            Ok(qpow(q, -(first + 1)) / (qm1.pow(2) * (&one - ratio)))
        }
        3 => {
            // Σ_{m >= M} m z^m = z^M (M/(1-z) + z/(1-z)^2), m = h + 1, M = cutoff + 2.
            let z = qpow(q, -2);
            let m = cutoff + 2;
            let tail = z.pow(m) * (Rational::from(m) / (&one - &z) + &z / (&one - &z).pow(2));
            Ok(tail / qm1.pow(3))
        }
        _ => Err(Error::InvalidArgument(format!("tail bounds are implemented for rank <= 3, got {r}"))),
    }
}

/// Truncated classical mass on `P^1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MassCensus {
    pub partial_sum: Rational,
    pub tail_bound: Rational,
    pub rows: Vec<(SplittingType, Rational)>,
}

/// `Σ 1/|Aut(E)|` over rank-`r` bundles of the given degree with gap `<= gap_cutoff`.
pub fn p1_mass_census(q: u64, r: usize, degree: i64, gap_cutoff: i64) -> Result<MassCensus> {
    if q < 2 || r == 0 || r > 3 || gap_cutoff < 0 {
        return Err(Error::InvalidArgument(format!(
            "mass census needs q >= 2, 1 <= r <= 3, cutoff >= 0 (q={q} r={r} cutoff={gap_cutoff})"
        )));
    }
    let rows: Vec<(SplittingType, Rational)> = splitting_types(r, degree, gap_cutoff)
        .into_iter()
        .map(|t| {
            let aut = aut_order_splitting(&t, q);
            (t, aut)
        })
        .collect();
    let partial_sum = rows.iter().map(|(_, aut)| aut.recip()).sum();
    Ok(MassCensus { partial_sum, tail_bound: mass_tail_bound(q, r, degree, gap_cutoff)?, rows })
}
