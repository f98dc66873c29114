//! Siegel mass formulas, classical and quasi-parabolic.
//!
//! For rank `r`, a curve of genus `g` over `F_q` and quasi-parabolic data with
//! flag count `f`,
//!
//! ```text
//! sum_{E} 1/|ParAut(E)| = f · q^{(r^2-1)(g-1)} / (q-1) · Z_X(q^-2) ··· Z_X(q^-r)
//! ```
//!
//! summed over isomorphism classes of quasi-parabolic bundles with fixed
//! determinant. With trivial flags this is the classical formula for
//! `sum 1/|Aut(E)|`.

use serde::Serialize;

use crate::arith::{qpow, Rational};
use crate::error::{Error, Result};
use crate::field::gl_order;
use crate::flags::QuasiParabolicData;
use crate::zeta::CurveData;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MassFactors {
    pub flag_factor: Rational,
    pub power_factor: Rational,
    pub unit_factor: Rational,
    pub zeta_factors: Vec<Rational>,
}

impl MassFactors {
    pub fn product(&self) -> Rational {
        &self.flag_factor
            * &self.power_factor
            * &self.unit_factor
            * self.zeta_factors.iter().product::<Rational>()
    }
}

/// An exact mass together with the factors it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MassReport {
    pub value: Rational,
    pub factors: MassFactors,
}

impl MassReport {
    fn assemble(factors: MassFactors) -> Self {
        let value = factors.product();
        MassReport { value, factors }
    }
}

/// `(|GL_r(F_q)| / q^{r^2})^s`: the proportion of maps `O^r -> E` that are
/// isomorphisms on all `s` marked fibers, once `E` is positive enough.
pub fn hom_inj_factor(rank: usize, q: u64, marked: usize) -> Rational {
    let r2 = (rank * rank) as i64;
    (gl_order(rank, q) / qpow(q, r2)).pow(marked as i64)
}

fn mass_with_flag_factor(curve: &CurveData, rank: usize, flag_factor: Rational) -> Result<MassReport> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let (q, g) = (curve.q(), curve.genus() as i64);
    let r2 = (rank * rank) as i64;
    let zeta_factors =
        (2..=rank as i64).map(|j| curve.zeta_eval(j, false)).collect::<Result<Vec<_>>>()?;
    let report = MassReport::assemble(MassFactors {
        flag_factor,
        power_factor: qpow(q, (r2 - 1) * (g - 1)),
        unit_factor: Rational::from(q - 1).recip(),
        zeta_factors,
    });
    debug_assert_eq!(report.value, report.factors.product());
    Ok(report)
}

/// Mass of quasi-parabolic bundles with the given flag data.
pub fn quasi_parabolic_mass(curve: &CurveData, data: &QuasiParabolicData) -> Result<MassReport> {
    data.validate(curve)?;
    mass_with_flag_factor(curve, data.rank, data.flag_count(curve.q()))
}

/// Mass of ordinary bundles of rank `rank` (flag factor 1).
pub fn classical_mass(curve: &CurveData, rank: usize) -> Result<MassReport> {
    mass_with_flag_factor(curve, rank, Rational::one())
}
