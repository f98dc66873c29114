//! Brute-force verifiers. Each one counts the objects a formula claims to
//! count, by enumeration, without going through the formula.
//!
//! Everything here works over a prime field `F_q` and, for bundles, on `P^1`
//! only, where every vector bundle splits as a sum of line bundles.

mod balance;
mod bundles;
mod census;
mod hnf;
mod hom;
mod hyperplane;
mod poly;

pub use balance::{eq8_balance_check, Eq8Balance};
pub use bundles::{
    aut_order_splitting, mass_tail_bound, p1_mass_census, splitting_types, MassCensus, SplittingType,
};
pub use census::{p1_parabolic_census, CensusRow, FlagOrbit, ParabolicCensus};
pub use hnf::{
    enumerate_local_hnf, local_sublattice_count, p1_divisor_count, p1_open_divisor_count, HnfMatrix,
};
pub use hom::{hom_inj_count_p1, lemma_conditions_hold};
pub use hyperplane::{hyperplane_avoid_count, HyperplaneReport};
pub use poly::FpPoly;
