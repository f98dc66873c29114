//! Census of quasi-parabolic bundles on `P^1` with their automorphism groups.
//!
//! For `E = ⊕O(a_i)` and marked points `P_1..P_s`, evaluating endomorphisms
//! at the marked fibers gives an algebra map `End(E) -> Π_l M_r(F_q)` with
//! image `A` and kernel `K`. When `s >= 1` every element of `K` has zero
//! diagonal blocks on equal twists, so `K` is nilpotent, `1 + K` is the kernel
//! of `Aut(E) -> A^×`, and that map is onto. Hence
//!
//! * `|Aut(E)| = |A^×| · |K|`,
//! * isomorphism classes of flags on `E` are the `A^×`-orbits on `Flag_S`,
//! * `|ParAut(E, F)| = |Stab_{A^×}(F)| · |K|`.
//!
//! `A^×` is enumerated outright, so orbits and stabilizers are exact.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{qpow, Rational};
use crate::error::{Error, Result};
use crate::field::{require_prime, Matrix, P1Point, Subspace};
use crate::flags::{enumerate_flags, Flag, QuasiParabolicData};

use super::bundles::{aut_order_splitting, mass_tail_bound, splitting_types, SplittingType};
use super::poly::{digits, eval_homogeneous};

/// Largest evaluation image `|A|` that is enumerated element by element.
const ALGEBRA_GUARD: u64 = 1 << 20;
/// Largest product of flag varieties handled.
const FLAG_GUARD: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagOrbit {
    pub orbit_size: u64,
    pub stabilizer_order: Rational,
}

/// One splitting type with its flag orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub bundle: SplittingType,
    pub aut_order: Rational,
    /// `|A^×|`, the image of `Aut(E)` in the marked fibers.
    pub image_order: Rational,
    /// `|K|`, automorphisms acting trivially on every marked fiber.
    pub kernel_order: Rational,
    pub flag_orbits: Vec<FlagOrbit>,
    pub parab_aut_orders: Vec<Rational>,
}

impl CensusRow {
    /// `Σ_orbits 1/|ParAut|`.
    pub fn contribution(&self) -> Rational {
        self.parab_aut_orders.iter().map(Rational::recip).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicCensus {
    pub partial_sum: Rational,
    pub tail_bound: Rational,
    pub rows: Vec<CensusRow>,
}

/// Basis of `End(E)`: `(i, j, k)` is the map `O(a_j) -> O(a_i)` given by `x^k`.
fn endomorphism_basis(t: &SplittingType) -> Vec<(usize, usize, usize)> {
    let a = t.twists();
    let r = a.len();
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let e = a[i] - a[j];
            for k in 0..=e.max(-1) {
                out.push((i, j, k as usize));
            }
        }
    }
    out
}

/// Evaluated endomorphism algebra for one bundle and marked set.
struct FiberImage {
    /// RREF basis of `A` inside `F_q^{s r^2}`.
    basis: Matrix,
    endo_dim: usize,
}

fn fiber_image(t: &SplittingType, points: &[P1Point], p: u32) -> FiberImage {
    let a = t.twists();
    let r = a.len();
    let s = points.len();
    let basis = endomorphism_basis(t);
    let mut rows = Vec::with_capacity(basis.len());
    for &(i, j, k) in &basis {
        let e = a[i] - a[j];
        let mut monomial = vec![0u32; e as usize + 1];
        monomial[k] = 1;
        let mut v = vec![0i64; s * r * r];
        for (l, &pt) in points.iter().enumerate() {
            v[l * r * r + i * r + j] = eval_homogeneous(&monomial, e, pt, p) as i64;
        }
        rows.push(v);
    }
    let evaluated = Matrix::from_rows(&rows, p);
    FiberImage { basis: evaluated.rref().0, endo_dim: basis.len() }
}

/// Elements of `A` invertible at every marked fiber, as tuples of matrices.
fn image_units(image: &FiberImage, r: usize, s: usize, q: u64) -> Result<Vec<Vec<Matrix>>> {
    let dim = image.basis.rows();
    let size = q.checked_pow(dim as u32).filter(|&n| n <= ALGEBRA_GUARD).ok_or_else(|| {
        Error::TooLarge(format!("evaluation image of dimension {dim} over F_{q}"))
    })?;
    let p = q as u32;
    let units = (0..size)
        .into_par_iter()
        .filter_map(|index| {
            let coeffs = digits(index, q, dim);
            let mut flat = vec![0u32; s * r * r];
            for (row, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (x, &b) in flat.iter_mut().zip(image.basis.row(row)) {
                    *x = (*x + c * b) % p;
                }
            }
            let blocks: Vec<Matrix> = flat
                .chunks(r * r)
                .map(|block| Matrix::from_raw(r, r, p, block.to_vec()))
                .collect();
            blocks.iter().all(Matrix::is_invertible).then_some(blocks)
        })
        .collect();
    Ok(units)
}

fn act(g: &[Matrix], flags: &[Flag]) -> Vec<Flag> {
    g.iter()
        .zip(flags)
        .map(|(g, flag)| flag.iter().map(|w: &Subspace| w.image(g)).collect())
        .collect()
}

/// All tuples of flags, one flag per marked point.
fn flag_product(data: &QuasiParabolicData, q: u64) -> Result<Vec<Vec<Flag>>> {
    let mut product: Vec<Vec<Flag>> = vec![Vec::new()];
    for t in &data.flag_types {
        let flags = enumerate_flags(t, q)?;
        if product.len().saturating_mul(flags.len()) > FLAG_GUARD {
            return Err(Error::TooLarge(format!("more than {FLAG_GUARD} flag tuples")));
        }
        product = product
            .into_iter()
            .flat_map(|prefix| {
                flags.iter().map(move |f| {
                    let mut next = prefix.clone();
                    next.push(f.clone());
                    next
                })
            })
            .collect();
    }
    Ok(product)
}

fn census_row(
    t: &SplittingType,
    q: u64,
    points: &[P1Point],
    flag_tuples: &[Vec<Flag>],
) -> Result<CensusRow> {
    let p = q as u32;
    let r = t.rank();
    let aut_order = aut_order_splitting(t, q);
    if points.is_empty() {
        // Nothing to evaluate at: ParAut = Aut and Flag_S is a point.
        return Ok(CensusRow {
            bundle: t.clone(),
            image_order: aut_order.clone(),
            kernel_order: Rational::one(),
            flag_orbits: vec![FlagOrbit { orbit_size: 1, stabilizer_order: aut_order.clone() }],
            parab_aut_orders: vec![aut_order.clone()],
            aut_order,
        });
    }
    let image = fiber_image(t, points, p);
    let kernel_order = qpow(q, (image.endo_dim - image.basis.rows()) as i64);
    let units = image_units(&image, r, points.len(), q)?;
    let image_order = Rational::from(units.len());
    if &image_order * &kernel_order != aut_order {
        return Err(Error::OracleMismatch(format!(
            "{t}: |A^x| |K| = {image_order}·{kernel_order} but |Aut| = {aut_order}"
        )));
    }

    let index: HashMap<&Vec<Flag>, usize> =
        flag_tuples.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut seen = vec![false; flag_tuples.len()];
    let mut flag_orbits = Vec::new();
    for (start, rep) in flag_tuples.iter().enumerate() {
        if seen[start] {
            continue;
        }
        let mut orbit_size = 0u64;
        let mut stabilizer = 0u64;
        for g in &units {
            let moved = act(g, rep);
            let target = *index.get(&moved).ok_or_else(|| {
                Error::OracleMismatch(format!("{t}: group element left the flag variety"))
            })?;
            if target == start {
                stabilizer += 1;
            }
            if !seen[target] {
                seen[target] = true;
                orbit_size += 1;
            }
        }
        if orbit_size * stabilizer != units.len() as u64 {
            return Err(Error::OracleMismatch(format!(
                "{t}: orbit {orbit_size} × stabilizer {stabilizer} != |A^x| {}",
                units.len()
            )));
        }
        flag_orbits.push(FlagOrbit { orbit_size, stabilizer_order: Rational::from(stabilizer) });
    }
    let parab_aut_orders =
        flag_orbits.iter().map(|o| &o.stabilizer_order * &kernel_order).collect();
    Ok(CensusRow { bundle: t.clone(), aut_order, image_order, kernel_order, flag_orbits, parab_aut_orders })
}

/// `Σ 1/|ParAut(E, F)|` over isomorphism classes of rank-`r` quasi-parabolic
/// bundles on `P^1` of the given degree whose splitting type has gap
/// `<= gap_cutoff`. The tail bound is the flag count times the classical
/// mass tail bound, since each bundle contributes exactly `f / |Aut(E)|`.
pub fn p1_parabolic_census(
    q: u64,
    data: &QuasiParabolicData,
    marked_points: &[P1Point],
    degree: i64,
    gap_cutoff: i64,
) -> Result<ParabolicCensus> {
    require_prime(q)?;
    data.check_ranks()?;
    if data.marked_count() != marked_points.len() {
        return Err(Error::PointCountMismatch { flags: data.marked_count(), marked: marked_points.len() });
    }
    if data.rank > 3 || gap_cutoff < 0 {
        return Err(Error::InvalidArgument("parabolic census needs rank <= 3 and cutoff >= 0".into()));
    }
    if let Some(P1Point::Affine(a)) = marked_points.iter().find(|pt| matches!(pt, P1Point::Affine(a) if *a as u64 >= q)) {
        return Err(Error::InvalidArgument(format!("{a} is not in F_{q}")));
    }
    let flag_tuples = flag_product(data, q)?;
    let types = splitting_types(data.rank, degree, gap_cutoff);
    let rows = types
        .par_iter()
        .map(|t| census_row(t, q, marked_points, &flag_tuples))
        .collect::<Result<Vec<_>>>()?;
    let partial_sum = rows.iter().map(CensusRow::contribution).sum();
    let tail_bound = data.flag_count(q) * mass_tail_bound(q, data.rank, degree, gap_cutoff)?;
    Ok(ParabolicCensus { partial_sum, tail_bound, rows })
}
