//! Zeta functions of a curve `X` over `F_q` and of the open curve `X - S`.
//!
//! `Z_X(t) = P_X(t) / ((1 - t)(1 - q t))` and, since every marked point is
//! rational, `Z_{X-S}(t) = (1 - t)^s Z_X(t)`. The marked set enters only
//! through its size.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::{qpow, Polynomial, PowerSeries, Rational};
use crate::error::{Error, Result};
use crate::field::P1Point;

/// A smooth projective curve over `F_q`, described by its Weil numerator,
/// together with the number of (rational) marked points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveData {
    q: u64,
    genus: usize,
    weil_numerator: Polynomial,
    marked_count: usize,
}

impl CurveData {
    /// Validates `P_X(0) = 1`, `deg P_X = 2g`, integral coefficients and the
    /// functional equation `a_{2g-i} = q^{g-i} a_i`.
    pub fn new(q: u64, genus: usize, weil_numerator: Polynomial, marked_count: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidCurve(format!("q = {q} must be at least 2")));
        }
        let a = &weil_numerator;
        if a.degree() != Some(2 * genus) {
            return Err(Error::InvalidCurve(format!(
                "Weil numerator has degree {:?}, expected {}",
                a.degree(),
                2 * genus
            )));
        }
        if a.coeff(0) != Rational::one() {
            return Err(Error::InvalidCurve(format!("P(0) = {}, expected 1", a.coeff(0))));
        }
        if let Some(c) = a.coeffs().iter().find(|c| !c.is_integer()) {
            return Err(Error::InvalidCurve(format!("non-integral coefficient {c}")));
        }
        let g = genus as i64;
        for i in 0..=genus {
            let lhs = a.coeff(2 * genus - i);
            let rhs = qpow(q, g - i as i64) * a.coeff(i);
            if lhs != rhs {
                return Err(Error::InvalidCurve(format!(
                    "functional equation fails at i = {i}: a_{} = {lhs}, q^{}·a_{i} = {rhs}",
                    2 * genus - i,
                    g - i as i64
                )));
            }
        }
        Ok(CurveData { q, genus, weil_numerator: weil_numerator.clone(), marked_count })
    }

    /// `P^1` over `F_q` with `marked_count` rational marked points.
    pub fn projective_line(q: u64, marked_count: usize) -> Result<Self> {
        CurveData::new(q, 0, Polynomial::one(), marked_count)
    }

    /// The curve with its Weil numerator recovered from `N_1..N_g`.
    pub fn from_point_counts(q: u64, genus: usize, counts: &[u64], marked_count: usize) -> Result<Self> {
        let p = point_counts_to_numerator(q, genus, counts)?;
        CurveData::new(q, genus, p, marked_count)
    }

    pub fn with_marked_count(&self, marked_count: usize) -> Self {
        CurveData { marked_count, ..self.clone() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn weil_numerator(&self) -> &Polynomial {
        &self.weil_numerator
    }

    pub fn marked_count(&self) -> usize {
        self.marked_count
    }

    /// `Z_{X-S}(t)` to the given precision; `Z_X(t)` when nothing is marked.
    pub fn zeta_series(&self, precision: usize) -> PowerSeries {
        // (1-t)^s / (1-t) cancels down to (1-t)^{s-1} when s >= 1.
        let q = Rational::from(self.q);
        let (numer, denom) = if self.marked_count == 0 {
            (
                self.weil_numerator.clone(),
                Polynomial::one_minus(Rational::one()).mul(&Polynomial::one_minus(q)),
            )
        } else {
            let shift = Polynomial::one_minus(Rational::one()).pow(self.marked_count as u32 - 1);
            (self.weil_numerator.mul(&shift), Polynomial::one_minus(q))
        };
        PowerSeries::from_rational_function(&numer, &denom, precision)
            .expect("denominators have constant term 1")
    }

    /// `Z_X(q^{-j})`, or `Z_{X-S}(q^{-j})` when `marked` is set. Needs `j >= 2`.
    pub fn zeta_eval(&self, j: i64, marked: bool) -> Result<Rational> {
        if j <= 1 {
            return Err(Error::Pole { j });
        }
        let t = qpow(self.q, -j);
        let one = Rational::one();
        let denom = (&one - &t) * (&one - Rational::from(self.q) * &t);
        let mut value = self.weil_numerator.eval(&t) / denom;
        if marked {
            value = value * (&one - &t).pow(self.marked_count as i64);
        }
        Ok(value)
    }

    /// `P_X(1)`, the number of line bundles of any fixed degree.
    pub fn class_number(&self) -> Result<Rational> {
        let h = self.weil_numerator.eval(&Rational::one());
        if !h.is_integer() || h <= Rational::zero() {
            return Err(Error::NonIntegerClassNumber(h));
        }
        Ok(h)
    }

    /// `N_1..N_m`, the numbers of `F_{q^i}`-rational points.
    pub fn point_counts(&self, up_to: usize) -> Result<Vec<BigInt>> {
        numerator_to_point_counts(self, up_to)
    }
}

/// Newton's identities: power sums `p_1..p_m` of the inverse roots from the
/// elementary symmetric functions `e_0 = 1, e_1, ...` (zero past the end).
fn power_sums_from_elementary(e: &[Rational], m: usize) -> Vec<Rational> {
    let e_at = |k: usize| e.get(k).cloned().unwrap_or_default();
    let mut p: Vec<Rational> = Vec::with_capacity(m);
    for k in 1..=m {
        // k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i
        let mut acc = Rational::from(k) * e_at(k);
        for i in 1..k {
            let term = e_at(k - i) * &p[i - 1];
            acc = if i % 2 == 1 { acc - term } else { acc + term };
        }
        p.push(if k % 2 == 1 { acc } else { -acc });
    }
    p
}

/// Weil numerator from `N_1..N_g`. The first `g` power sums fix `e_1..e_g`,
/// and the functional equation supplies the rest.
pub fn point_counts_to_numerator(q: u64, genus: usize, counts: &[u64]) -> Result<Polynomial> {
    if counts.len() != genus {
        return Err(Error::InvalidCounts(format!(
            "expected {genus} point counts, got {}",
            counts.len()
        )));
    }
    let power_sums: Vec<Rational> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| qpow(q, i as i64 + 1) + Rational::one() - Rational::from(n))
        .collect();
    let mut e = vec![Rational::one()];
    for k in 1..=genus {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &power_sums[i - 1];
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc / Rational::from(k));
    }
    let mut a = vec![Rational::zero(); 2 * genus + 1];
    for (k, ek) in e.iter().enumerate() {
        a[k] = if k % 2 == 0 { ek.clone() } else { -ek };
    }
    for i in 0..genus {
        a[2 * genus - i] = qpow(q, (genus - i) as i64) * &a[i];
    }
    let p = Polynomial::new(a);
    CurveData::new(q, genus, p.clone(), 0).map_err(|e| Error::InvalidCounts(e.to_string()))?;
    Ok(p)
}

/// `N_i = q^i + 1 - p_i`, with `p_i` the power sums of the inverse roots of `P_X`.
pub fn numerator_to_point_counts(curve: &CurveData, up_to: usize) -> Result<Vec<BigInt>> {
    let e: Vec<Rational> = curve
        .weil_numerator
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 0 { a.clone() } else { -a })
        .collect();
    let p = power_sums_from_elementary(&e, up_to);
    p.iter()
        .enumerate()
        .map(|(i, pi)| {
            let n = qpow(curve.q, i as i64 + 1) + Rational::one() - pi;
            let n = n.to_integer("point count")?;
            if n.is_negative() {
                return Err(Error::NegativeCount { index: i + 1, value: n.to_string() });
            }
            Ok(n)
        })
        .collect()
}

/// Curve description as read from JSON. Exactly one of `weil_numerator`
/// and `point_counts` must be present.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    pub q: u64,
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weil_numerator: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_counts: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_points: Option<Vec<String>>,
}

impl CurveInput {
    /// Marked points as `P^1(F_q)` points, when given by coordinates.
    pub fn marked_points(&self) -> Result<Option<Vec<P1Point>>> {
        self.marked_points
            .as_ref()
            .map(|pts| crate::field::parse_points(pts.iter().map(String::as_str), self.q))
            .transpose()
    }

    pub fn into_curve(&self) -> Result<CurveData> {
        let points = self.marked_points()?;
        let marked_count = match (self.marked_count, &points) {
            (Some(n), Some(pts)) if n != pts.len() => {
                return Err(Error::InvalidCurve(format!(
                    "marked_count {n} disagrees with {} marked_points",
                    pts.len()
                )))
            }
            (Some(n), _) => n,
            (None, Some(pts)) => pts.len(),
            (None, None) => 0,
        };
        match (&self.weil_numerator, &self.point_counts) {
            (Some(p), None) => {
                CurveData::new(self.q, self.genus, Polynomial::new(p.clone()), marked_count)
            }
            (None, Some(counts)) => {
                CurveData::from_point_counts(self.q, self.genus, counts, marked_count)
            }
            _ => Err(Error::InvalidCurve(
                "exactly one of weil_numerator and point_counts is required".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn elliptic() -> CurveData {
        CurveData::new(2, 1, Polynomial::from_ints([1, 0, 2]), 0).unwrap()
    }

    #[test]
    fn numerator_from_counts() {
        assert_eq!(point_counts_to_numerator(2, 0, &[]).unwrap(), Polynomial::one());
        assert_eq!(point_counts_to_numerator(2, 1, &[3]).unwrap(), Polynomial::from_ints([1, 0, 2]));
        assert_eq!(point_counts_to_numerator(3, 1, &[4]).unwrap(), Polynomial::from_ints([1, 0, 3]));
        // y^2 = x^5 + 2x + 1 over F_3 has 7 points over F_3 and 15 over F_9.
        assert_eq!(
            point_counts_to_numerator(3, 2, &[7, 15]).unwrap(),
            Polynomial::from_ints([1, 3, 7, 9, 9])
        );
    }

    #[test]
    fn bad_counts_are_rejected() {
        assert!(matches!(point_counts_to_numerator(2, 1, &[]), Err(Error::InvalidCounts(_))));
        // e_2 = (p_1^2 - p_2)/2 is not integral here.
        assert!(matches!(point_counts_to_numerator(3, 2, &[4, 9]), Err(Error::InvalidCounts(_))));
    }

    #[test]
    fn counts_from_numerator() {
        let n = numerator_to_point_counts(&elliptic(), 2).unwrap();
        assert_eq!(n, vec![BigInt::from(3), BigInt::from(9)]);
        let p1 = CurveData::projective_line(2, 0).unwrap();
        let n = numerator_to_point_counts(&p1, 3).unwrap();
        assert_eq!(n, vec![BigInt::from(3), BigInt::from(5), BigInt::from(9)]);
    }

    #[test]
    fn negative_count_is_reported() {
        let fake = CurveData::new(2, 1, Polynomial::from_ints([1, -4, 2]), 0).unwrap();
        // N_1 = 2 + 1 + (-4) = -1.
        assert!(matches!(
            numerator_to_point_counts(&fake, 1),
            Err(Error::NegativeCount { index: 1, .. })
        ));
    }

    #[test]
    fn curve_validation() {
        assert!(CurveData::new(2, 1, Polynomial::from_ints([1, 0, 3]), 0).is_err());
        assert!(CurveData::new(2, 1, Polynomial::from_ints([2, 0, 4]), 0).is_err());
        assert!(CurveData::new(2, 1, Polynomial::from_ints([1, 0]), 0).is_err());
        assert!(CurveData::new(1, 0, Polynomial::one(), 0).is_err());
        assert!(CurveData::new(3, 1, Polynomial::from_ints([1, 1, 3]), 0).is_ok());
        let half = Polynomial::new(vec![r(1, 1), r(1, 2), r(3, 1)]);
        assert!(CurveData::new(3, 1, half, 0).is_err());
    }

    /// Monic polynomials of degree n over F_2 with no root in `avoid`.
    fn count_monic_avoiding(q: u64, n: u32, avoid: &[u64]) -> u64 {
        (0..q.pow(n))
            .filter(|&low| {
                avoid.iter().all(|&a| {
                    let mut digits = low;
                    let mut coeffs = Vec::new();
                    for _ in 0..n {
                        coeffs.push(digits % q);
                        digits /= q;
                    }
                    coeffs.push(1);
                    coeffs.iter().rev().fold(0, |acc, c| (acc * a + c) % q) != 0
                })
            })
            .count() as u64
    }

    #[test]
    fn zeta_series_examples() {
        let p1 = CurveData::projective_line(2, 0).unwrap();
        // Effective divisors of degree n on P^1 over F_q: (q^{n+1}-1)/(q-1).
        assert_eq!(p1.zeta_series(4), PowerSeries::from_ints([1, 3, 7, 15]));

        // S = {0, inf}: monic polynomials with nonzero constant term.
        let expected: Vec<i64> = (0..4).map(|n| count_monic_avoiding(2, n, &[0]) as i64).collect();
        assert_eq!(expected, vec![1, 1, 2, 4]);
        assert_eq!(p1.with_marked_count(2).zeta_series(4), PowerSeries::from_ints(expected));

        // S = {inf}: all monic polynomials.
        let expected: Vec<i64> = (0..3).map(|n| count_monic_avoiding(2, n, &[]) as i64).collect();
        assert_eq!(p1.with_marked_count(1).zeta_series(3), PowerSeries::from_ints(expected));
    }

    #[test]
    fn zeta_eval_examples() {
        let p1 = CurveData::projective_line(2, 0).unwrap();
        assert_eq!(p1.zeta_eval(2, false).unwrap(), r(8, 3));
        assert_eq!(elliptic().zeta_eval(2, false).unwrap(), r(3, 1));
        assert_eq!(p1.with_marked_count(1).zeta_eval(2, true).unwrap(), r(2, 1));
        assert_eq!(p1.zeta_eval(1, false), Err(Error::Pole { j: 1 }));
        assert_eq!(p1.zeta_eval(0, true), Err(Error::Pole { j: 0 }));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(CurveData::projective_line(5, 0).unwrap().class_number().unwrap(), r(1, 1));
        assert_eq!(elliptic().class_number().unwrap(), r(3, 1));
        let c = CurveData::new(3, 1, Polynomial::from_ints([1, 1, 3]), 0).unwrap();
        assert_eq!(c.class_number().unwrap(), r(5, 1));
        let bogus = CurveData::new(2, 1, Polynomial::from_ints([1, -4, 2]), 0).unwrap();
        assert!(matches!(bogus.class_number(), Err(Error::NonIntegerClassNumber(_))));
    }

    #[test]
    fn curve_input_json() {
        let c: CurveInput =
            serde_json::from_str(r#"{"q": 2, "genus": 1, "weil_numerator": ["1","0","2"]}"#).unwrap();
        assert_eq!(c.into_curve().unwrap(), elliptic());
        let c: CurveInput =
            serde_json::from_str(r#"{"q": 2, "genus": 1, "point_counts": [3], "marked_count": 2}"#)
                .unwrap();
        assert_eq!(c.into_curve().unwrap(), elliptic().with_marked_count(2));
        let c: CurveInput = serde_json::from_str(
            r#"{"q": 2, "genus": 0, "weil_numerator": ["1"], "marked_points": ["0","1","inf"]}"#,
        )
        .unwrap();
        assert_eq!(c.into_curve().unwrap().marked_count(), 3);
        let both: CurveInput = serde_json::from_str(
            r#"{"q": 2, "genus": 1, "weil_numerator": ["1","0","2"], "point_counts": [3]}"#,
        )
        .unwrap();
        assert!(both.into_curve().is_err());
        let neither: CurveInput = serde_json::from_str(r#"{"q": 2, "genus": 0}"#).unwrap();
        assert!(neither.into_curve().is_err());
    }

    fn test_curves() -> Vec<CurveData> {
        vec![
            CurveData::projective_line(2, 0).unwrap(),
            CurveData::projective_line(3, 0).unwrap(),
            CurveData::projective_line(4, 0).unwrap(),
            elliptic(),
            CurveData::new(3, 1, Polynomial::from_ints([1, 1, 3]), 0).unwrap(),
            CurveData::from_point_counts(3, 2, &[7, 15], 0).unwrap(),
        ]
    }

    #[test]
    fn zeta_series_times_denominator_is_numerator() {
        for c in test_curves() {
            let z = c.zeta_series(12);
            let q = Rational::from(c.q());
            let d = Polynomial::one_minus(Rational::one()).mul(&Polynomial::one_minus(q));
            let back = z.mul(&PowerSeries::from_polynomial(&d, 12));
            assert_eq!(back, PowerSeries::from_polynomial(c.weil_numerator(), 12));
            for x in z.coeffs() {
                assert!(x.is_integer() && !x.is_negative(), "{x}");
            }
        }
    }

    proptest! {
        #[test]
        fn counts_round_trip(q in 2u64..6, g in 0usize..4, seed in prop::collection::vec(0u64..1000, 3)) {
            // Build a valid curve from a product of elliptic-type factors
            // 1 + a t + q t^2 with |a| <= 2 sqrt(q), then read off its counts.
            let bound = (0i64..).take_while(|a| a * a <= 4 * q as i64).last().unwrap();
            let mut p = Polynomial::one();
            for &x in seed.iter().take(g) {
                let a = (x as i64 % (2 * bound + 1)) - bound;
                p = p.mul(&Polynomial::from_ints([1, a, q as i64]));
            }
            let curve = CurveData::new(q, g, p.clone(), 0).unwrap();
            // Products of such factors can still force a negative count.
            let counts = numerator_to_point_counts(&curve, g);
            prop_assume!(counts.is_ok());
            let counts: Vec<u64> = counts.unwrap().iter().map(|n| n.try_into().unwrap()).collect();
            prop_assert_eq!(point_counts_to_numerator(q, g, &counts).unwrap(), p);
        }
    }
}
