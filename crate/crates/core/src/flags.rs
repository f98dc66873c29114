//! Quasi-parabolic data and the point counts of the flag varieties it names.

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::field::{enumerate_subspaces, require_prime, Subspace, SUBSPACE_GUARD};
use crate::zeta::CurveData;

/// Successive-quotient dimensions `(r_1, ..., r_p)` of a flag
/// `k^r = F_1 ⊃ F_2 ⊃ ... ⊃ F_p ⊃ 0` with `dim F_j / F_{j+1} = r_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FlagType {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for FlagType {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        FlagType::new(parts)
    }
}

impl From<FlagType> for Vec<usize> {
    fn from(t: FlagType) -> Self {
        t.parts
    }
}

impl FlagType {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("flag type {parts:?} needs positive parts")));
        }
        Ok(FlagType { parts })
    }

    /// The one-step flag `(r)`: just the whole space.
    pub fn trivial(rank: usize) -> Self {
        FlagType { parts: vec![rank] }
    }

    /// Complete flags `(1, ..., 1)`.
    pub fn full(rank: usize) -> Self {
        FlagType { parts: vec![1; rank] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() == 1
    }

    /// `dim F_1 > dim F_2 > ... > dim F_p`.
    pub fn dims(&self) -> Vec<usize> {
        (0..self.parts.len()).map(|j| self.parts[j..].iter().sum()).collect()
    }

    /// Number of `F_q`-points of the flag variety: a q-multinomial.
    pub fn point_count(&self, q: u64) -> Rational {
        let mut remaining = self.rank();
        let mut total = Rational::one();
        for &part in &self.parts {
            total = total * gaussian_binomial(remaining, part, q);
            remaining -= part;
        }
        total
    }
}

/// Rank together with one flag type per marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiParabolicData {
    pub rank: usize,
    #[serde(rename = "flags")]
    pub flag_types: Vec<FlagType>,
}

impl QuasiParabolicData {
    pub fn new(rank: usize, flag_types: Vec<FlagType>) -> Result<Self> {
        let data = QuasiParabolicData { rank, flag_types };
        data.check_ranks()?;
        Ok(data)
    }

    /// Trivial flags at `marked` points.
    pub fn trivial(rank: usize, marked: usize) -> Self {
        QuasiParabolicData { rank, flag_types: vec![FlagType::trivial(rank); marked] }
    }

    pub fn marked_count(&self) -> usize {
        self.flag_types.len()
    }

    pub fn check_ranks(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        match self.flag_types.iter().find(|t| t.rank() != self.rank) {
            Some(t) => Err(Error::RankMismatch { rank: self.rank, parts: t.parts.clone() }),
            None => Ok(()),
        }
    }

    /// Checks the flag types against the curve's marked points.
    pub fn validate(&self, curve: &CurveData) -> Result<()> {
        if self.flag_types.len() != curve.marked_count() {
            return Err(Error::PointCountMismatch {
                flags: self.flag_types.len(),
                marked: curve.marked_count(),
            });
        }
        self.check_ranks()
    }

    /// `f(q, r_{i,j})`: points of the product of the flag varieties.
    pub fn flag_count(&self, q: u64) -> Rational {
        self.flag_types.iter().map(|t| t.point_count(q)).product()
    }
}

/// `[n choose k]_q = prod_{i=1}^{k} (q^{n-k+i} - 1) / (q^i - 1)`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> Rational {
    assert!(k <= n, "gaussian_binomial({n}, {k}) needs k <= n");
    let q = Rational::from(q);
    let one = Rational::one();
    let value: Rational = (1..=k)
        .map(|i| (q.pow((n - k + i) as i64) - &one) / (q.pow(i as i64) - &one))
        .product();
    assert!(value.is_integer(), "Gaussian binomial [{n} {k}] = {value} is not integral");
    value
}

/// A flag as its chain `F_1 ⊃ ... ⊃ F_p` (the zero subspace is implicit).
pub type Flag = Vec<Subspace>;

/// Every flag of the given type in `F_q^r`, by explicit descent through subspaces.
pub fn enumerate_flags(flag_type: &FlagType, q: u64) -> Result<Vec<Flag>> {
    let p = require_prime(q)?;
    let r = flag_type.rank();
    if q.checked_pow(r as u32).is_none_or(|v| v > SUBSPACE_GUARD) {
        return Err(Error::TooLarge(format!("flags in F_{q}^{r}")));
    }
    let dims = flag_type.dims();
    let mut flags: Vec<Flag> = vec![vec![Subspace::whole(r, p)]];
    for &d in &dims[1..] {
        let mut next = Vec::new();
        for flag in flags {
            let outer = flag.last().expect("flag starts with the whole space");
            // Subspaces of `outer`: coordinates with respect to its basis.
            for inner in enumerate_subspaces(q, outer.dim(), d)? {
                let mut extended = flag.clone();
                extended.push(Subspace::span(&inner.basis().mul(outer.basis())));
                next.push(extended);
            }
        }
        flags = next;
    }
    Ok(flags)
}
