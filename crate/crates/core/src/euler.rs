//! Euler products over trace-class densities.
//!
//! The local factor at `ℓ` is `h(ℓ) = ℓ |C(ℓ, t)| / |GSp_{2g}(F_ℓ)|`. For
//! `g <= 2` it depends only on whether `ℓ | t`, and `h(ℓ) - 1` has the
//! cancellation-free forms
//!
//! | g | `ℓ | t`                              | `ℓ ∤ t`                                   |
//! |---|--------------------------------------|-------------------------------------------|
//! | 1 | `1/(ℓ^2-1)`                          | `-1/((ℓ+1)(ℓ-1)^2)`                       |
//! | 2 | `(ℓ^4-ℓ^3-1)/((ℓ^2-1)(ℓ^4-1))`       | `-(ℓ^4-ℓ^3-1)/((ℓ-1)(ℓ^2-1)(ℓ^4-1))`      |
//!
//! Products are accumulated as compensated sums of `log1p(h - 1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::arith::{prime_factors, valuation};
use crate::matcount::{enumerate_trace_counts, f_ratio, TraceCountSource};
use crate::sieve::primes_up_to;
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EulerError {
    #[error("genus {0} has no closed-form local factors")]
    UnsupportedGenus(u32),
    #[error("cutoff L = {0} is below 10")]
    CutoffTooSmall(u64),
    #[error("the constant is only defined for t != 0")]
    ZeroTrace,
    #[error("image data lacks |C(m, t)| for modulus m = {m} (t = {t})")]
    MissingEntry { m: u64, t: i64 },
    #[error("image data line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Running sum with Neumaier compensation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn check_genus(g: u32) -> Result<(), EulerError> {
    if g == 1 || g == 2 {
        Ok(())
    } else {
        Err(EulerError::UnsupportedGenus(g))
    }
}

/// `h(ℓ) - 1` in floating point, from the table above.
pub fn factor_minus_one(g: u32, l: u64, divides: bool) -> Result<f64, EulerError> {
    check_genus(g)?;
    let l = l as f64;
    let (l2, l4) = (l * l, l.powi(4));
    Ok(match (g, divides) {
        (1, true) => 1.0 / (l2 - 1.0),
        (1, false) => -1.0 / ((l + 1.0) * (l - 1.0).powi(2)),
        (2, true) => (l4 - l.powi(3) - 1.0) / ((l2 - 1.0) * (l4 - 1.0)),
        _ => -(l4 - l.powi(3) - 1.0) / ((l - 1.0) * (l2 - 1.0) * (l4 - 1.0)),
    })
}

/// Exact `h(ℓ)` for `ℓ < 2^16`.
pub fn factor_exact(g: u32, l: u64, divides: bool) -> Result<Ratio<i128>, EulerError> {
    check_genus(g)?;
    assert!(l < 1 << 16, "exact factors overflow beyond 2^16");
    let l = l as i128;
    let (l2, l4) = (l * l, l.pow(4));
    Ok(match (g, divides) {
        (1, true) => Ratio::new(l2, l2 - 1),
        (1, false) => Ratio::new(l * (l2 - l - 1), (l + 1) * (l - 1) * (l - 1)),
        (2, true) => Ratio::new(l2 * (l4 - l - 1), (l2 - 1) * (l4 - 1)),
        _ => Ratio::new(l * (l.pow(6) - l.pow(5) - l4 + l + 1), (l - 1) * (l2 - 1) * (l4 - 1)),
    })
}

/// Primes up to this bound fix the tail constant.
const TAIL_SAMPLE_BOUND: u64 = 1000;

/// `C = 2 max_{ℓ <= 1000} ℓ^2 |h(ℓ) - 1|` over both factor types.
pub fn tail_constant(g: u32) -> Result<f64, EulerError> {
    let mut c: f64 = 0.0;
    for l in primes_up_to(TAIL_SAMPLE_BOUND) {
        for divides in [true, false] {
            c = c.max((l * l) as f64 * factor_minus_one(g, l, divides)?.abs());
        }
    }
    Ok(2.0 * c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerProductEstimate {
    pub g: u32,
    pub t: i64,
    pub cutoff: u64,
    pub log_partial: f64,
    pub partial: f64,
    /// Bound on `|log P - log partial|`.
    pub tail_halfwidth: f64,
}

impl EulerProductEstimate {
    pub fn lower(&self) -> f64 {
        self.partial * (-self.tail_halfwidth).exp()
    }
    pub fn upper(&self) -> f64 {
        self.partial * self.tail_halfwidth.exp()
    }
    pub fn contains(&self, x: f64) -> bool {
        (self.lower()..=self.upper()).contains(&x)
    }
}

/// Formats `x` with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = (9 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.digits$}")
}

impl fmt::Display for EulerProductEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P_{{{},{}}}(L={}) = {} in [{}, {}]",
            self.g,
            self.t,
            self.cutoff,
            sig10(self.partial),
            sig10(self.lower()),
            sig10(self.upper())
        )
    }
}

/// `Π_{ℓ <= L} h(ℓ)` with a tail bound `C/(L-1)` in log space.
pub fn euler_product(g: u32, t: i64, cutoff: u64) -> Result<EulerProductEstimate, EulerError> {
    check_genus(g)?;
    if cutoff < 10 {
        return Err(EulerError::CutoffTooSmall(cutoff));
    }
    let mut acc = CompensatedSum::default();
    for l in primes_up_to(cutoff) {
        acc.add(factor_minus_one(g, l, t % l as i64 == 0)?.ln_1p());
    }
    let log_partial = acc.value();
    Ok(EulerProductEstimate {
        g,
        t,
        cutoff,
        log_partial,
        partial: log_partial.exp(),
        tail_halfwidth: tail_constant(g)? / (cutoff - 1) as f64,
    })
}

/// Class counts for the image of Galois: `m_A` and a table of
/// `(|C(m, t)|, |G(m)|)` keyed by `(m, t mod m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageData {
    pub m_a: u64,
    pub table: BTreeMap<(u64, u64), (u128, u128)>,
}

impl ImageData {
    /// Full `GSp` image: `m_A = 1`.
    pub fn surjective() -> Self {
        let mut table = BTreeMap::new();
        table.insert((1, 0), (1, 1));
        ImageData { m_a: 1, table }
    }

    /// No information: every lookup fails.
    pub fn none() -> Self {
        ImageData { m_a: 1, table: BTreeMap::new() }
    }

    pub fn insert(&mut self, m: u64, t: i64, count: u128, group_order: u128) {
        self.table.insert((m, t.rem_euclid(m as i64) as u64), (count, group_order));
    }

    /// `m_{A,t} = m_A Π_{ℓ | m_A} ℓ^{v_ℓ(t)}`.
    pub fn m_at(&self, t: i64) -> u64 {
        let t = t.unsigned_abs();
        prime_factors(self.m_a).into_iter().fold(self.m_a, |m, l| m * l.pow(valuation(t, l)))
    }
}

impl TraceCountSource for ImageData {
    fn class_count(&self, m: u64, t: i64) -> Option<(u128, u128)> {
        self.table.get(&(m, t.rem_euclid(m as i64) as u64)).copied()
    }
}

/// Lines `m t count group_order`, an optional `m_A <n>` line, and `#`
/// comments. The trivial level `m = 1` is always present.
impl FromStr for ImageData {
    type Err = EulerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut data = ImageData::surjective();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| EulerError::Parse { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0].eq_ignore_ascii_case("m_a") {
                let [_, v] = fields[..] else { return Err(err("expected `m_A <n>`".into())) };
                data.m_a = v.parse().ok().filter(|&v: &u64| v >= 1).ok_or_else(|| err(format!("bad m_A {v:?}")))?;
                continue;
            }
            let [m, t, c, o] = fields[..] else {
                return Err(err(format!("expected 4 fields, got {}", fields.len())));
            };
            let m: u64 = m.parse().ok().filter(|&m| m >= 1).ok_or_else(|| err(format!("bad modulus {m:?}")))?;
            let t: i64 = t.parse().map_err(|_| err(format!("bad trace {t:?}")))?;
            let c: u128 = c.parse().map_err(|_| err(format!("bad count {c:?}")))?;
            let o: u128 = o.parse().map_err(|_| err(format!("bad group order {o:?}")))?;
            if o == 0 || c > o {
                return Err(err(format!("count {c} exceeds group order {o}")));
            }
            data.insert(m, t, c, o);
        }
        Ok(data)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LtConstant {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// `m_{A,t}`.
    pub m_at: u64,
    /// `m_{A,t} |C(m_{A,t}, t)| / |G(m_{A,t})|`.
    pub leading: f64,
}

/// `H_t(ℓ^{v+1})` for `ℓ | t`: image table first, then (genus 1 only)
/// enumeration of `GL_2(Z/ℓ^{v+1})`, then the stable value `ℓ^2/(ℓ^2 - 1)`.
fn divisor_factor(g: u32, l: u64, t: i64, image: &ImageData) -> Result<f64, EulerError> {
    let m = l.pow(valuation(t.unsigned_abs(), l) + 1);
    if let Ok(r) = f_ratio(image, m, t) {
        return Ok(*r.numer() as f64 / *r.denom() as f64);
    }
    if g == 2 {
        return Err(EulerError::MissingEntry { m, t });
    }
    if let Ok(table) = enumerate_trace_counts(1, m, DEFAULT_BUDGET) {
        let r = f_ratio(&table, m, t).expect("table covers its own modulus");
        return Ok(*r.numer() as f64 / *r.denom() as f64);
    }
    Ok(1.0 + factor_minus_one(1, l, true)?)
}

/// `(Φ(0)/g) · leading · Π_{ℓ ∤ m_A} H_t(ℓ^{v_ℓ(t)+1})`, the product cut at
/// `L` (primes `ℓ | t` above `L` are still included exactly).
pub fn lt_constant(g: u32, t: i64, phi0: f64, image: &ImageData, cutoff: u64) -> Result<LtConstant, EulerError> {
    if t == 0 {
        return Err(EulerError::ZeroTrace);
    }
    check_genus(g)?;
    if cutoff < 10 {
        return Err(EulerError::CutoffTooSmall(cutoff));
    }
    let m_at = image.m_at(t);
    let r = f_ratio(image, m_at, t).map_err(|_| EulerError::MissingEntry { m: m_at, t })?;
    let leading = *r.numer() as f64 / *r.denom() as f64;
    let tail = tail_constant(g)? / (cutoff - 1) as f64;
    let scale = phi0 / g as f64 * leading;
    if leading == 0.0 {
        return Ok(LtConstant { value: 0.0, lower: 0.0, upper: 0.0, m_at, leading });
    }

    let mut acc = CompensatedSum::default();
    let mut primes = primes_up_to(cutoff);
    for l in prime_factors(t.unsigned_abs()) {
        if l > cutoff {
            primes.push(l);
        }
    }
    for l in primes {
        if image.m_a.is_multiple_of(l) {
            continue;
        }
        let log_h = if t % l as i64 == 0 {
            divisor_factor(g, l, t, image)?.ln()
        } else {
            factor_minus_one(g, l, false)?.ln_1p()
        };
        acc.add(log_h);
    }
    let value = scale * acc.value().exp();
    Ok(LtConstant { value, lower: value * (-tail).exp(), upper: value * tail.exp(), m_at, leading })
}

/// `Σ_{|τ| < 2g sqrt p} Φ(τ/(2g sqrt p)) |C(m, τ)|`.
fn weighted_class_sum<S: TraceCountSource + ?Sized>(
    p: u64,
    m: u64,
    g: u32,
    phi: &dyn Fn(f64) -> f64,
    counts: &S,
) -> Result<(f64, u128), EulerError> {
    let scale = 2.0 * g as f64 * (p as f64).sqrt();
    let bound = scale.ceil() as i64;
    let (_, order) = counts.class_count(m, 0).ok_or(EulerError::MissingEntry { m, t: 0 })?;
    let mut acc = CompensatedSum::default();
    for tau in -bound..=bound {
        if (tau as f64).abs() >= scale {
            continue;
        }
        let (c, _) = counts.class_count(m, tau).ok_or(EulerError::MissingEntry { m, t: tau })?;
        acc.add(phi(tau as f64 / scale) * c as f64);
    }
    Ok((acc.value(), order))
}

/// `c_{p,m} = |G(m)| / (m Σ_{|τ| < 2g sqrt p} Φ(τ/(2g sqrt p)) |C(m, τ)|)`.
pub fn c_pm<S: TraceCountSource + ?Sized>(
    p: u64,
    m: u64,
    g: u32,
    phi: &dyn Fn(f64) -> f64,
    counts: &S,
) -> Result<f64, EulerError> {
    let (sum, order) = weighted_class_sum(p, m, g, phi, counts)?;
    Ok(order as f64 / (m as f64 * sum))
}

/// `f_p^{(m)}(τ) = Φ(τ/(2g sqrt p)) (m |C(m, τ)| / |G(m)|) c_{p,m}`, zero
/// outside `|τ| < 2g sqrt p`.
pub fn f_pm<S: TraceCountSource + ?Sized>(
    p: u64,
    m: u64,
    g: u32,
    phi: &dyn Fn(f64) -> f64,
    tau: i64,
    counts: &S,
) -> Result<f64, EulerError> {
    let scale = 2.0 * g as f64 * (p as f64).sqrt();
    if (tau as f64).abs() >= scale {
        return Ok(0.0);
    }
    let c = c_pm(p, m, g, phi, counts)?;
    let (count, order) = counts.class_count(m, tau).ok_or(EulerError::MissingEntry { m, t: tau })?;
    Ok(phi(tau as f64 / scale) * (m as f64 * count as f64 / order as f64) * c)
}

/// For each `p`: `|(m/(2g sqrt p)) Σ_{τ ≡ τ0 (m), |τ| < 2g sqrt p} Φ(τ/(2g sqrt p)) - 1|`.
pub fn riemann_sum_deviations(m: u64, tau0: i64, g: u32, phi: &dyn Fn(f64) -> f64, primes: &[u64]) -> Vec<f64> {
    primes
        .iter()
        .map(|&p| {
            let scale = 2.0 * g as f64 * (p as f64).sqrt();
            let bound = scale.ceil() as i64;
            let m_i = m as i64;
            let mut tau = -bound + (tau0 - -bound).rem_euclid(m_i);
            let mut acc = CompensatedSum::default();
            while tau <= bound {
                if (tau as f64).abs() < scale {
                    acc.add(phi(tau as f64 / scale));
                }
                tau += m_i;
            }
            (m as f64 / scale * acc.value() - 1.0).abs()
        })
        .collect()
}

/// Largest deviation from [`riemann_sum_deviations`].
pub fn riemann_sum_check(m: u64, tau0: i64, g: u32, phi: &dyn Fn(f64) -> f64, primes: &[u64]) -> f64 {
    riemann_sum_deviations(m, tau0, g, phi, primes).into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcount::TraceTable;
    use crate::satotate::{phi_g1, phi_g2};
    use std::f64::consts::PI;

    #[test]
    fn factors_match_class_counts() {
        for g in [1, 2] {
            for l in primes_up_to(200) {
                let table = TraceTable::closed_form(g, l).unwrap();
                for (t, divides) in [(0, true), (1, false)] {
                    let from_counts = f_ratio(&table, l, t).unwrap();
                    let exact = factor_exact(g, l, divides).unwrap();
                    assert_eq!(*from_counts.numer() as i128 * exact.denom(), *exact.numer() * *from_counts.denom() as i128);
                    let approx = 1.0 + factor_minus_one(g, l, divides).unwrap();
                    let want = *exact.numer() as f64 / *exact.denom() as f64;
                    assert!((approx - want).abs() < 1e-15 * want, "g={g} l={l}");
                }
            }
        }
    }

    #[test]
    fn zeta_two() {
        let e = euler_product(1, 0, 100_000).unwrap();
        assert!((e.partial - PI * PI / 6.0).abs() < 1e-4);
        assert!(e.contains(PI * PI / 6.0));
    }

    #[test]
    fn genus_two_products() {
        let p0 = euler_product(2, 0, 100_000).unwrap();
        let p1 = euler_product(2, 1, 100_000).unwrap();
        assert!((p0.partial - 1.3547).abs() <= 1e-3, "{p0}");
        assert!((p1.partial - 0.7988).abs() <= 1e-3, "{p1}");
    }

    #[test]
    fn cauchy_property() {
        for g in [1, 2] {
            for t in [0, 1, 6] {
                for l in [1_000, 10_000] {
                    let a = euler_product(g, t, l).unwrap();
                    let b = euler_product(g, t, 2 * l).unwrap();
                    assert!((a.log_partial - b.log_partial).abs() < a.tail_halfwidth);
                }
            }
        }
    }

    #[test]
    fn single_tail_constant_per_split() {
        for g in [1, 2] {
            let c = tail_constant(g).unwrap();
            for l in primes_up_to(1000) {
                for d in [true, false] {
                    assert!((l * l) as f64 * factor_minus_one(g, l, d).unwrap().abs() <= c / 2.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(euler_product(3, 0, 100), Err(EulerError::UnsupportedGenus(3)));
        assert_eq!(euler_product(1, 0, 5), Err(EulerError::CutoffTooSmall(5)));
        let s = ImageData::surjective();
        assert_eq!(lt_constant(2, 0, 1.0, &s, 1000), Err(EulerError::ZeroTrace));
        assert!(matches!(lt_constant(1, 3, 1.0, &ImageData::none(), 1000), Err(EulerError::MissingEntry { m: 1, .. })));
    }

    #[test]
    fn display_uses_ten_digits() {
        let e = euler_product(1, 0, 1000).unwrap();
        let s = e.to_string();
        assert!(s.starts_with("P_{1,0}(L=1000) = 1.64"), "{s}");
        assert_eq!(sig10(1.0 / 3.0), "0.3333333333");
        assert_eq!(sig10(12.5), "12.50000000");
    }

    #[test]
    fn genus_one_constant_for_odd_t() {
        let s = ImageData::surjective();
        for t in [1i64, 3, 15, -7] {
            let c = lt_constant(1, t, 2.0 / PI, &s, 10_000).unwrap();
            // independent product straight from the rational factors
            let mut want = 2.0 / PI;
            for l in primes_up_to(10_000) {
                let d = t % l as i64 == 0;
                let h = factor_exact(1, l, d).unwrap();
                want *= *h.numer() as f64 / *h.denom() as f64;
            }
            assert!((c.value - want).abs() < 1e-12 * want, "t={t}");
            assert!(c.lower <= c.value && c.value <= c.upper);
        }
    }

    #[test]
    fn genus_one_prime_power_factor_is_stable() {
        // t = 4 needs H_4(8) over GL_2(Z/8): enumerated, equal to 4/3
        let s = ImageData::surjective();
        let c4 = lt_constant(1, 4, 1.0, &s, 1000).unwrap();
        let c2 = lt_constant(1, 2, 1.0, &s, 1000).unwrap();
        assert!((c4.value - c2.value).abs() < 1e-12);
    }

    #[test]
    fn prime_power_classes_have_the_stable_density() {
        for (l, t) in [(2u64, 2i64), (2, 4), (2, -12), (3, 3), (3, 9)] {
            let m = l.pow(valuation(t.unsigned_abs(), l) + 1);
            let table = enumerate_trace_counts(1, m, DEFAULT_BUDGET).unwrap();
            let r = f_ratio(&table, m, t).unwrap();
            let l2 = (l * l) as u128;
            assert_eq!(r, Ratio::new(l2, l2 - 1), "l={l} t={t}");
        }
    }

    #[test]
    fn genus_two_t1_and_symmetry() {
        let s = ImageData::surjective();
        let phi0 = 256.0 / (15.0 * PI * PI);
        let c = lt_constant(2, 1, phi0, &s, 100_000).unwrap();
        let p = euler_product(2, 1, 100_000).unwrap();
        assert!((c.value - 128.0 / (15.0 * PI * PI) * p.partial).abs() < 1e-12);
        let cm = lt_constant(2, -1, phi0, &s, 100_000).unwrap();
        assert_eq!(c.value, cm.value);
        assert!(matches!(lt_constant(2, 2, phi0, &s, 1000), Err(EulerError::MissingEntry { m: 4, t: 2 })));
        let mut with4 = s.clone();
        let t4 = crate::matcount::enumerate_trace_counts(2, 2, DEFAULT_BUDGET).unwrap();
        // a user-supplied entry; any value is accepted
        with4.insert(4, 2, 4 * t4.count(0), 16 * t4.group_order);
        assert!(lt_constant(2, 2, phi0, &with4, 1000).is_ok());
    }

    #[test]
    fn image_data_parsing_and_zero_propagation() {
        let text = "# image mod 6\nm_A 6\n6 1 0 96\n6 5 0 96\n";
        let img: ImageData = text.parse().unwrap();
        assert_eq!(img.m_a, 6);
        assert_eq!(img.m_at(1), 6);
        assert_eq!(img.m_at(12), 6 * 4 * 3);
        let c = lt_constant(1, 1, 2.0 / PI, &img, 100).unwrap();
        assert_eq!(c.value, 0.0);
        let trivial: ImageData = "m_A 1".parse().unwrap();
        assert_eq!(trivial, ImageData::surjective());
        assert!("6 1 7".parse::<ImageData>().is_err());
        assert!("6 1 97 96".parse::<ImageData>().is_err());
        assert!(matches!("x 1 1 1".parse::<ImageData>(), Err(EulerError::Parse { line: 1, .. })));
    }

    #[test]
    fn class_weights() {
        let semicircle = |x: f64| phi_g1(x.clamp(-1.0, 1.0)).unwrap();
        let t2 = TraceTable::closed_form(1, 2).unwrap();
        let p = 1_000_003;
        let c = c_pm(p, 2, 1, &semicircle, &t2).unwrap();
        assert!((2.0 * (p as f64).sqrt() * c - 1.0).abs() < 0.01);
        // replacing Φ by its even part changes nothing
        let lopsided = |x: f64| semicircle(x) * (1.0 + 0.5 * x);
        let c2 = c_pm(p, 2, 1, &lopsided, &t2).unwrap();
        assert!((c - c2).abs() < 1e-12 * c);
        // f sums to one, vanishes outside the Weil range
        let p = 10_007;
        let bound = (2.0 * (p as f64).sqrt()).ceil() as i64;
        let total: f64 = (-bound..=bound).map(|tau| f_pm(p, 2, 1, &semicircle, tau, &t2).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(f_pm(p, 2, 1, &semicircle, bound + 1, &t2).unwrap(), 0.0);
        let trivial = TraceTable::trivial(1);
        let f0 = f_pm(p, 1, 1, &semicircle, 0, &trivial).unwrap();
        let c1 = c_pm(p, 1, 1, &semicircle, &trivial).unwrap();
        assert!((f0 - semicircle(0.0) * c1).abs() < 1e-15);
    }

    #[test]
    fn riemann_sums() {
        let semicircle = |x: f64| phi_g1(x.clamp(-1.0, 1.0)).unwrap();
        assert!(riemann_sum_check(1, 0, 1, &semicircle, &[1_000_003]) < 1e-2);
        let devs = riemann_sum_deviations(3, 1, 1, &semicircle, &[101, 10_007, 1_000_003]);
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
        let flat = |_: f64| 0.5;
        for p in [10_007u64, 1_000_003] {
            let d = riemann_sum_check(5, 2, 1, &flat, &[p]);
            assert!(d <= 5.0 / (2.0 * (p as f64).sqrt()) + 1e-12, "p={p} d={d}");
        }
    }

    #[test]
    fn riemann_sum_genus_two() {
        let phi = |x: f64| phi_g2(x.clamp(-1.0, 1.0)).unwrap();
        assert!(riemann_sum_check(5, 2, 2, &phi, &[100_000_007]) < 1e-2);
    }
}
