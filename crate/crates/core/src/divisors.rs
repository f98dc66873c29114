//! Counts of effective rank-`r` divisors supported on `X - S`.
//!
//! The generating series is `prod_{j=1}^{r} Z_{X-S}(q^{j-1} t)`. Fixing the
//! determinant divides by the class number once the degree is large enough,
//! and the normalized counts converge to closed-form limits.

use serde::Serialize;

use crate::arith::{qpow, Rational};
use crate::error::{Error, Result};
use crate::zeta::CurveData;

/// `b_0^{(r)} .. b_{N-1}^{(r)}` for one curve and rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorCountTable {
    pub rank: usize,
    pub counts: Vec<Rational>,
    #[serde(skip)]
    pub curve: CurveData,
}

impl DivisorCountTable {
    /// `b_n / q^{rn}`: the quantity whose limit is [`limit_unfixed`].
    pub fn normalized(&self, n: usize) -> Rational {
        &self.counts[n] / qpow(self.curve.q(), (self.rank * n) as i64)
    }
}

/// Coefficients of `Z^{(r)}_{X-S}(t) = prod_{j=1}^{r} Z_{X-S}(q^{j-1} t)`.
pub fn r_divisor_series(curve: &CurveData, rank: usize, precision: usize) -> Result<DivisorCountTable> {
    if rank == 0 || precision == 0 {
        return Err(Error::InvalidArgument("rank and precision must be positive".into()));
    }
    let base = curve.zeta_series(precision);
    let q = Rational::from(curve.q());
    let mut product = base.clone();
    for j in 1..rank {
        product = product.mul(&base.scale_argument(&q.pow(j as i64)));
    }
    for (n, c) in product.coeffs().iter().enumerate() {
        if !c.is_integer() || c.is_negative() {
            return Err(Error::NotIntegral { context: format!("b_{n}^({rank})"), value: c.clone() });
        }
    }
    Ok(DivisorCountTable { rank, counts: product.coeffs().to_vec(), curve: curve.clone() })
}

/// `b_n^{(r,L)} = b_n^{(r)} / P_X(1)`, only for `n > 2g - 2 + s`.
pub fn fixed_determinant_count(curve: &CurveData, rank: usize, n: i64) -> Result<Rational> {
    let bound = 2 * curve.genus() as i64 - 2 + curve.marked_count() as i64;
    if n <= bound {
        return Err(Error::Range { n, bound });
    }
    let table = r_divisor_series(curve, rank, n as usize + 1)?;
    let value = &table.counts[n as usize] / curve.class_number()?;
    value.to_integer(&format!("b_{n}^({rank},L)"))?;
    Ok(value)
}

/// `prod_{j=2}^{r} Z_{X-S}(q^{-j})`.
fn marked_zeta_product(curve: &CurveData, rank: usize) -> Rational {
    (2..=rank as i64)
        .map(|j| curve.zeta_eval(j, true).expect("j >= 2 is never a pole"))
        .product()
}

/// `lim b_n^{(r)} / q^{rn} = P_X(1) (q-1)^{s-1} / q^{g-1+s} · prod_{j=2}^{r} Z_{X-S}(q^{-j})`.
pub fn limit_unfixed(curve: &CurveData, rank: usize) -> Result<Rational> {
    let (q, g, s) = (curve.q(), curve.genus() as i64, curve.marked_count() as i64);
    Ok(curve.class_number()?
        * Rational::from(q - 1).pow(s - 1)
        * qpow(q, 1 - g - s)
        * marked_zeta_product(curve, rank))
}

/// Limit of the fixed-determinant counts normalized by `q^{r χ}`:
/// `(q-1)^{s-1} q^{(r^2-1)(g-1) - s} · prod_{j=2}^{r} Z_{X-S}(q^{-j})`.
pub fn limit_fixed_determinant(curve: &CurveData, rank: usize) -> Rational {
    let (q, g, s) = (curve.q(), curve.genus() as i64, curve.marked_count() as i64);
    let r = rank as i64;
    Rational::from(q - 1).pow(s - 1)
        * qpow(q, (r * r - 1) * (g - 1) - s)
        * marked_zeta_product(curve, rank)
}

/// Gap `|b_n / q^{rn} - limit|` at each `n` of the table.
pub fn convergence_gaps(table: &DivisorCountTable) -> Result<Vec<Rational>> {
    let limit = limit_unfixed(&table.curve, table.rank)?;
    Ok((0..table.counts.len()).map(|n| (table.normalized(n) - &limit).abs()).collect())
}
