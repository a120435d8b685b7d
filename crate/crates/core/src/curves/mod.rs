//! Hyperelliptic curves `y^2 = f(x)` over `Q`, their reductions mod `p`,
//! point counts and Frobenius traces.
//!
//! Sign convention: the trace `a1 = p + 1 - N_1` is the sum of the Weil
//! roots, so the coefficient of `X^{2g-1}` in the Weil polynomial is `-a1`.

mod discriminant;
mod kernel;
mod sweep;
mod weil;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::arith::reduce_i64;
use crate::ffield::{ExtField, FieldError, PrimeField};
use crate::BudgetExceeded;

pub use discriminant::{bareiss_det, discriminant, prime_divisors, resultant};
pub use kernel::square_and_zero_counts;
pub use sweep::trace_sweep;
pub use weil::{poly_roots, WeilPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("polynomial degree {0} is too small")]
    DegreeTooSmall(usize),
    #[error("genus {genus} needs deg f in {{{}, {}}}, got {degree}", 2 * genus + 1, 2 * genus + 2)]
    DegreeGenusMismatch { genus: u32, degree: usize },
    #[error("f has a repeated root (zero discriminant)")]
    Singular,
    #[error("{0} is a prime of bad reduction")]
    BadPrime(u64),
    #[error("bad prime {0} does not fit in 64 bits")]
    LargeBadPrime(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("unknown curve label {0:?}")]
    UnknownLabel(String),
}

/// A genus-`g` curve `y^2 = f(x)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    label: String,
    genus: u32,
    /// Constant term first.
    coeffs: Vec<i64>,
    bad_override: Option<BTreeSet<u64>>,
    discriminant: BigInt,
    /// `lc(f) * disc(f)`: its prime divisors are the bad primes.
    bad_product: BigInt,
}

impl CurveModel {
    pub fn new(
        label: impl Into<String>,
        genus: u32,
        coeffs: Vec<i64>,
        bad_override: Option<BTreeSet<u64>>,
    ) -> Result<Self, CurveError> {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let degree = coeffs.len().saturating_sub(1);
        if genus == 0 || (degree != 2 * genus as usize + 1 && degree != 2 * genus as usize + 2) {
            return Err(CurveError::DegreeGenusMismatch { genus, degree });
        }
        let disc = discriminant(&coeffs)?;
        if disc == BigInt::from(0) {
            return Err(CurveError::Singular);
        }
        let bad_product = &disc * BigInt::from(coeffs[degree]);
        let bad_override = bad_override.map(|mut s| {
            s.insert(2);
            s
        });
        Ok(CurveModel {
            label: label.into(),
            genus,
            coeffs,
            bad_override,
            discriminant: disc,
            bad_product,
        })
    }

    /// `J1: y^2 = x^5 - x + 1`, genus 2, bad at `{2, 19, 151}`.
    pub fn j1() -> Self {
        Self::new("J1", 2, vec![1, -1, 0, 0, 0, 1], None).expect("J1 is nonsingular")
    }

    /// `J2: y^2 = 4x^7 - 12x - 35`, genus 3.
    pub fn j2() -> Self {
        Self::new("J2", 3, vec![-35, -12, 0, 0, 0, 0, 0, 4], None).expect("J2 is nonsingular")
    }

    /// `J3: y^2 = 4x^9 - 8x - 39`, genus 4.
    pub fn j3() -> Self {
        Self::new("J3", 4, vec![-39, -8, 0, 0, 0, 0, 0, 0, 0, 4], None)
            .expect("J3 is nonsingular")
    }

    /// Built-in registry lookup (`J1`, `J2`, `J3`, case-insensitive).
    pub fn builtin(label: &str) -> Result<Self, CurveError> {
        match label.to_ascii_uppercase().as_str() {
            "J1" => Ok(Self::j1()),
            "J2" => Ok(Self::j2()),
            "J3" => Ok(Self::j3()),
            _ => Err(CurveError::UnknownLabel(label.to_string())),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn genus(&self) -> u32 {
        self.genus
    }
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn leading_coefficient(&self) -> i64 {
        self.coeffs[self.degree()]
    }
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }
    pub fn bad_override(&self) -> Option<&BTreeSet<u64>> {
        self.bad_override.as_ref()
    }

    /// `p = 2`, or in the override set, or dividing `lc(f) disc(f)`.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        if p == 2 {
            return true;
        }
        match &self.bad_override {
            Some(set) => set.contains(&p),
            None => discriminant::big_mod_u64(&self.bad_product, p) == 0,
        }
    }

    /// The full bad-prime set: the override if present, otherwise `{2}` and
    /// the odd primes dividing `lc(f) disc(f)`.
    pub fn bad_primes(&self) -> Result<BTreeSet<u64>, CurveError> {
        if let Some(set) = &self.bad_override {
            return Ok(set.clone());
        }
        let mut set: BTreeSet<u64> = prime_divisors(&self.bad_product)?.into_iter().collect();
        set.insert(2);
        Ok(set)
    }

    /// `f` reduced mod `p`, constant term first.
    pub fn coeffs_mod(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|&c| reduce_i64(c, p)).collect()
    }

    fn check_good(&self, p: u64) -> Result<(), CurveError> {
        if self.is_bad_prime(p) {
            Err(CurveError::BadPrime(p))
        } else {
            Ok(())
        }
    }

    /// Points on the smooth model over `F_{p^i}`, by enumeration of the
    /// field (`p^i` must stay within `budget`).
    pub fn count_points(&self, p: u64, degree: u32, budget: u64) -> Result<u64, CurveError> {
        self.check_good(p)?;
        BudgetExceeded::check((p as u128).pow(degree), budget)?;
        if degree == 1 {
            let field = PrimeField::for_bulk(p)?;
            let f = self.coeffs_mod(p);
            let affine = match field.squares_table() {
                Some(squares) => {
                    let (s, z) = square_and_zero_counts(&f, p, squares);
                    2 * s + z
                }
                None => (0..p)
                    .map(|x| (1 + field.quad_char(kernel::horner(&f, x, p)) as i64) as u64)
                    .sum(),
            };
            let lc_char = field.quad_char(reduce_i64(self.leading_coefficient(), p));
            return Ok(affine + self.points_at_infinity(lc_char));
        }
        let field = ExtField::build(p, degree)?;
        let f: Vec<Vec<u64>> = self.coeffs.iter().map(|&c| field.from_int(c)).collect();
        let mut affine = 0u64;
        for idx in 0..field.order() as u64 {
            let x = field.element(idx);
            let mut v = field.zero();
            for c in f.iter().rev() {
                v = field.add(&field.mul(&v, &x), c);
            }
            affine += (1 + field.quad_char(&v) as i64) as u64;
        }
        let lc = field.from_int(self.leading_coefficient());
        Ok(affine + self.points_at_infinity(field.quad_char(&lc)))
    }

    fn points_at_infinity(&self, lc_char: i8) -> u64 {
        if self.degree() == 2 * self.genus as usize + 1 {
            1
        } else {
            (1 + lc_char as i64) as u64
        }
    }

    /// `a1 = p + 1 - N_1`.
    pub fn frobenius_trace(&self, p: u64) -> Result<i64, CurveError> {
        let n1 = self.count_points(p, 1, u64::MAX)?;
        Ok(p as i64 + 1 - n1 as i64)
    }

    /// Trace at a good prime using a caller-owned squares bitset (already
    /// built for `p`). Used by the sweep to avoid reallocating.
    pub(crate) fn trace_with_table(&self, p: u64, squares: &[u64]) -> i64 {
        let (s, z) = square_and_zero_counts(&self.coeffs_mod(p), p, squares);
        let lc = reduce_i64(self.leading_coefficient(), p);
        let lc_char = if lc == 0 {
            0
        } else if squares[(lc >> 6) as usize] >> (lc & 63) & 1 == 1 {
            1
        } else {
            -1
        };
        let n1 = 2 * s + z + self.points_at_infinity(lc_char);
        p as i64 + 1 - n1 as i64
    }

    /// The Weil polynomial at a good prime from `N_1..N_g`; needs `p^g`
    /// within `budget`.
    pub fn weil_polynomial(&self, p: u64, budget: u64) -> Result<WeilPolynomial, CurveError> {
        BudgetExceeded::check((p as u128).pow(self.genus), budget)?;
        let counts = (1..=self.genus)
            .map(|i| self.count_points(p, i, budget))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeilPolynomial::from_point_counts(p, &counts))
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: y^2 = ", self.label)?;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}")?;
            if !first {
                write!(f, " ")?;
            }
            match (i, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "x")?,
                (1, m) => write!(f, "{m}x")?,
                (e, 1) => write!(f, "x^{e}")?,
                (e, m) => write!(f, "{m}x^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_BUDGET;

    fn elliptic() -> CurveModel {
        CurveModel::new("E", 1, vec![1, 1, 0, 1], None).unwrap()
    }

    #[test]
    fn table_curves() {
        assert_eq!(CurveModel::j1().to_string(), "J1: y^2 = x^5 - x + 1");
        assert_eq!(CurveModel::j2().to_string(), "J2: y^2 = 4x^7 - 12x - 35");
        assert_eq!(CurveModel::j3().to_string(), "J3: y^2 = 4x^9 - 8x - 39");
        assert_eq!(CurveModel::builtin("j2").unwrap().genus(), 3);
        assert!(CurveModel::builtin("J9").is_err());
    }

    #[test]
    fn bad_prime_sets() {
        assert_eq!(CurveModel::j1().bad_primes().unwrap(), BTreeSet::from([2, 19, 151]));
        assert_eq!(elliptic().bad_primes().unwrap(), BTreeSet::from([2, 31]));
        let over = CurveModel::new("J1", 2, vec![1, -1, 0, 0, 0, 1], Some(BTreeSet::from([19, 151])))
            .unwrap();
        assert_eq!(over.bad_primes().unwrap(), BTreeSet::from([2, 19, 151]));
        assert!(CurveModel::j2().is_bad_prime(185_641));
        assert!(!CurveModel::j2().is_bad_prime(185_639));
    }

    #[test]
    fn invalid_models() {
        assert!(matches!(
            CurveModel::new("x", 2, vec![1, 0, 1], None),
            Err(CurveError::DegreeGenusMismatch { .. })
        ));
        // (x - 1)^2 (x + 1) is singular
        assert_eq!(CurveModel::new("x", 1, vec![1, -1, -1, 1], None), Err(CurveError::Singular));
    }

    #[test]
    fn point_count_examples() {
        assert_eq!(CurveModel::j1().count_points(3, 1, DEFAULT_BUDGET).unwrap(), 7);
        assert_eq!(elliptic().count_points(5, 1, DEFAULT_BUDGET).unwrap(), 9);
        assert_eq!(CurveModel::j1().count_points(5, 1, DEFAULT_BUDGET).unwrap(), 11);
        assert!(matches!(CurveModel::j1().count_points(19, 1, DEFAULT_BUDGET), Err(CurveError::BadPrime(19))));
        assert!(matches!(
            CurveModel::j1().count_points(10007, 2, DEFAULT_BUDGET),
            Err(CurveError::Budget(_))
        ));
    }

    #[test]
    fn ramification_points_count_once() {
        // y^2 = x^3 - x over F_7 (x = 0, 1, 6 are roots): E has 8 points
        let e = CurveModel::new("E", 1, vec![0, -1, 0, 1], None).unwrap();
        let n = e.count_points(7, 1, DEFAULT_BUDGET).unwrap();
        let f = PrimeField::new(7).unwrap();
        let by_hand: i64 = (0..7u64)
            .map(|x| 1 + f.quad_char_euler((x * x * x + 7 * 7 - x) % 7) as i64)
            .sum::<i64>()
            + 1;
        assert_eq!(n as i64, by_hand);
        assert_eq!(n, 8);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(CurveModel::j1().frobenius_trace(3).unwrap(), -3);
        assert_eq!(CurveModel::j1().frobenius_trace(5).unwrap(), -5);
        assert_eq!(elliptic().frobenius_trace(5).unwrap(), -3);
    }

    #[test]
    fn even_degree_model_counts_two_or_zero_points_at_infinity() {
        // y^2 = 2x^4 + 1 (genus 1, even degree)
        let c = CurveModel::new("Q", 1, vec![1, 0, 0, 0, 2], None).unwrap();
        for p in [5u64, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            let affine: i64 = (0..p)
                .map(|x| 1 + f.quad_char_euler((2 * x.pow(4) + 1) % p) as i64)
                .sum();
            let inf = 1 + f.quad_char_euler(2) as i64;
            assert_eq!(c.count_points(p, 1, DEFAULT_BUDGET).unwrap() as i64, affine + inf);
        }
    }

    #[test]
    fn j1_weil_polynomial_at_3() {
        let w = CurveModel::j1().weil_polynomial(3, DEFAULT_BUDGET).unwrap();
        assert_eq!(w.trace(), -3);
        assert_eq!(w.coeffs[0], 1);
        assert_eq!(w.coeffs[4], 9);
        assert_eq!(w.coeffs[3], 3 * w.coeffs[1]);
        assert!(w.max_root_modulus_deviation() < 1e-9);
    }

    #[test]
    fn weil_polynomial_over_f9_by_hand() {
        // N_2 for J1 at p = 3 by direct enumeration of F_9 = F_3[i]
        let n2 = CurveModel::j1().count_points(3, 2, DEFAULT_BUDGET).unwrap();
        let mut affine = 0i64;
        for a in 0..3i64 {
            for b in 0..3i64 {
                // z = a + b i, i^2 = -1
                let mul = |(x, y): (i64, i64), (u, v): (i64, i64)| {
                    ((x * u - y * v).rem_euclid(3), (x * v + y * u).rem_euclid(3))
                };
                let z = (a, b);
                let z2 = mul(z, z);
                let z4 = mul(z2, z2);
                let z5 = mul(z4, z);
                let fz = ((z5.0 - a + 1).rem_euclid(3), (z5.1 - b).rem_euclid(3));
                // squares in F_9: w^((9-1)/2) = 1
                let mut w = (1, 0);
                for _ in 0..4 {
                    w = mul(w, fz);
                }
                affine += if fz == (0, 0) { 1 } else if w == (1, 0) { 2 } else { 0 };
            }
        }
        assert_eq!(n2 as i64, affine + 1);
    }
}
