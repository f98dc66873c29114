//! Points of `P(V)` off the `s` hyperplanes cut out by a surjection `V -> k^s`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{mul_mod, require_prime, Matrix};

use super::poly::digits;

const GUARD: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneReport {
    /// Count for the coordinate projection onto the first `s` coordinates.
    pub count: u64,
    /// `q^{d-s} (q-1)^{s-1}`.
    pub formula: u64,
    /// Counts for randomly drawn surjections.
    pub trial_counts: Vec<u64>,
}

/// Projective points `[v]` with every coordinate of `phi v` nonzero.
fn count_avoiding(phi: &Matrix, q: u64) -> u64 {
    let (s, d) = (phi.rows(), phi.cols());
    let p = q as u32;
    let mut count = 0;
    for index in 1..q.pow(d as u32) {
        let v = digits(index, q, d);
        // One representative per line: leading (last nonzero) coordinate equal to 1.
        if v.iter().rev().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let off_all = (0..s).all(|i| {
            (0..d).fold(0u32, |acc, j| (acc + mul_mod(phi.get(i, j).residue(), v[j], p)) % p) != 0
        });
        count += off_all as u64;
    }
    count
}

/// Counts the points of `P(F_q^d)` off the hyperplanes `ker(π_i ∘ φ)` for the
/// coordinate surjection and for `trials` random surjections drawn from `seed`.
/// Fails with `OracleMismatch` if the count depends on the surjection or
/// differs from `q^{d-s} (q-1)^{s-1}`.
pub fn hyperplane_avoid_count(q: u64, d: usize, s: usize, trials: usize, seed: u64) -> Result<HyperplaneReport> {
    let p = require_prime(q)?;
    if s == 0 || s > d {
        return Err(Error::InvalidArgument(format!("need d >= s >= 1, got d={d} s={s}")));
    }
    if q.checked_pow(d as u32).is_none_or(|n| n > GUARD) {
        return Err(Error::TooLarge(format!("P(F_{q}^{d})")));
    }
    let mut rows = vec![vec![0i64; d]; s];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1;
    }
    let projection = Matrix::from_rows(&rows, p);
    let count = count_avoiding(&projection, q);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trial_counts = Vec::with_capacity(trials);
    while trial_counts.len() < trials {
        let rows: Vec<Vec<i64>> =
            (0..s).map(|_| (0..d).map(|_| rng.gen_range(0..q as i64)).collect()).collect();
        let phi = Matrix::from_rows(&rows, p);
        if phi.rank() < s {
            continue;
        }
        trial_counts.push(count_avoiding(&phi, q));
    }

    let formula = q.pow((d - s) as u32) * (q - 1).pow(s as u32 - 1);
    if let Some(bad) = trial_counts.iter().find(|&&c| c != count) {
        return Err(Error::OracleMismatch(format!(
            "surjection changed the count: {count} vs {bad} (q={q} d={d} s={s})"
        )));
    }
    if count != formula {
        return Err(Error::OracleMismatch(format!(
            "count {count} differs from q^(d-s)(q-1)^(s-1) = {formula}"
        )));
    }
    Ok(HyperplaneReport { count, formula, trial_counts })
}
