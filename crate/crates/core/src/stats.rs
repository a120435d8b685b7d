//! Statistics over trace archives: `π_A(x, t)`, the number of distinct
//! prime factors `ν(a_1)`, the Erdős–Kac comparison and non-lacunarity.
//!
//! Records with `a_1 = 0` are left out of every `ν` statistic. `log log`
//! is the natural one and is never clamped, so the smallest primes enter
//! with `log log p < 1`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::archive::TraceArchive;
use crate::sieve::SpfSieve;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("ν(0) is undefined")]
    Zero,
    #[error("|{n}| exceeds the sieve bound {bound}")]
    BeyondSieve { n: i64, bound: u64 },
    #[error("checkpoint {x} is beyond the archive bound {x_max}")]
    BeyondArchive { x: u64, x_max: u64 },
    #[error("archive must reach at least {0}")]
    ArchiveTooShort(u64),
    #[error("moment order {0} outside 1..=6")]
    MomentOrder(u32),
    #[error("epsilon {eps} outside (0, {max})")]
    Epsilon { eps: f64, max: f64 },
}

/// Distinct primes dividing `|n|`.
pub fn nu(n: i64, sieve: &SpfSieve) -> Result<u32, StatsError> {
    if n == 0 {
        return Err(StatsError::Zero);
    }
    if n.unsigned_abs() > sieve.bound() {
        return Err(StatsError::BeyondSieve { n, bound: sieve.bound() });
    }
    Ok(sieve.distinct_prime_factors(n.unsigned_abs()))
}

/// A sieve large enough for every trace in `archive`.
pub fn sieve_for(archive: &TraceArchive) -> SpfSieve {
    let max = archive.records.iter().map(|r| r.a1.unsigned_abs()).max().unwrap_or(1);
    SpfSieve::new(max.max(2))
}

/// Powers of two from `2^8` up to `x_max`.
pub fn default_checkpoints(x_max: u64) -> Vec<u64> {
    (8..64).map(|i| 1u64 << i).take_while(|&x| x <= x_max).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiTable {
    pub t: i64,
    pub checkpoints: Vec<u64>,
    /// `π_A(x, t)` at each checkpoint.
    pub values: Vec<u64>,
    /// `π_A(x, -t)`, the count under the opposite sign convention.
    pub values_neg: Vec<u64>,
}

impl PiTable {
    /// `sqrt(x) / log x` at each checkpoint.
    pub fn normalizers(&self) -> Vec<f64> {
        self.checkpoints.iter().map(|&x| (x as f64).sqrt() / (x as f64).ln()).collect()
    }

    /// Least-squares line of `π_A(x, t)` against `sqrt(x)/log x`.
    pub fn fit(&self) -> LinearFit {
        let ys: Vec<f64> = self.values.iter().map(|&v| v as f64).collect();
        linear_fit(&self.normalizers(), &ys)
    }
}

pub fn pi_a(archive: &TraceArchive, t: i64, checkpoints: &[u64]) -> Result<PiTable, StatsError> {
    if let Some(&x) = checkpoints.iter().find(|&&x| x > archive.x_max) {
        return Err(StatsError::BeyondArchive { x, x_max: archive.x_max });
    }
    let count = |target: i64| -> Vec<u64> {
        checkpoints
            .iter()
            .map(|&x| archive.range(0, x.saturating_add(1)).iter().filter(|r| r.a1 == target).count() as u64)
            .collect()
    };
    Ok(PiTable { t, checkpoints: checkpoints.to_vec(), values: count(t), values_neg: count(-t) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    LinearFit { slope, intercept, r2: 1.0 - sse / syy }
}

/// `ν(a_1)` bucket counts for `lo <= p < hi`, skipping `a_1 = 0`.
pub fn nu_histogram(archive: &TraceArchive, lo: u64, hi: u64) -> BTreeMap<u32, u64> {
    let sieve = sieve_for(archive);
    let mut hist = BTreeMap::new();
    for r in archive.range(lo, hi) {
        if r.a1 != 0 {
            *hist.entry(sieve.distinct_prime_factors(r.a1.unsigned_abs())).or_insert(0) += 1;
        }
    }
    hist
}

/// `(ν(a_1), log log p)` for every record with `a_1 ≠ 0`.
fn nu_loglog(archive: &TraceArchive) -> Vec<(u32, f64)> {
    let sieve = sieve_for(archive);
    archive
        .records
        .iter()
        .filter(|r| r.a1 != 0)
        .map(|r| (sieve.distinct_prime_factors(r.a1.unsigned_abs()), (r.p as f64).ln().ln()))
        .collect()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EkRow {
    pub tau: f64,
    pub empirical: f64,
    pub normal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EkReport {
    pub rows: Vec<EkRow>,
    /// `max |empirical - normal|` over the grid.
    pub sup_distance: f64,
}

/// Fraction of records (`a_1 ≠ 0`) with `ν(a_1) <= log log p + τ sqrt(log log p)`.
pub fn ek_cdf(archive: &TraceArchive, taus: &[f64]) -> Result<EkReport, StatsError> {
    if archive.x_max < 100 {
        return Err(StatsError::ArchiveTooShort(100));
    }
    let data = nu_loglog(archive);
    let total = data.len().max(1) as f64;
    let rows: Vec<EkRow> = taus
        .iter()
        .map(|&tau| {
            let hits = data.iter().filter(|&&(nu, ll)| nu as f64 <= ll + tau * ll.sqrt()).count();
            EkRow { tau, empirical: hits as f64 / total, normal: normal_cdf(tau) }
        })
        .collect();
    let sup_distance = rows.iter().map(|r| (r.empirical - r.normal).abs()).fold(0.0, f64::max);
    Ok(EkReport { rows, sup_distance })
}

/// `k`-th moment of the standard normal: `(k-1)!!` for even `k`, else 0.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        (1..k).step_by(2).map(|j| j as f64).product()
    }
}

/// `(1/N) Σ (ν - λ)^k / λ^{k/2}` for `k = 1..=k_max`.
pub fn normalized_moments(nus: &[u32], loglog: f64, k_max: u32) -> Vec<f64> {
    let n = nus.len().max(1) as f64;
    (1..=k_max)
        .map(|k| {
            let s: f64 = nus.iter().map(|&v| (v as f64 - loglog).powi(k as i32)).sum();
            s / n / loglog.powf(k as f64 / 2.0)
        })
        .collect()
}

/// Normalised moments of `ν(a_1)` about `log log x_max`.
pub fn ek_moments(archive: &TraceArchive, k_max: u32) -> Result<Vec<f64>, StatsError> {
    if !(1..=6).contains(&k_max) {
        return Err(StatsError::MomentOrder(k_max));
    }
    if archive.x_max < 16 {
        return Err(StatsError::ArchiveTooShort(16));
    }
    let nus: Vec<u32> = nu_loglog(archive).into_iter().map(|(n, _)| n).collect();
    Ok(normalized_moments(&nus, (archive.x_max as f64).ln().ln(), k_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LacunarityMode {
    /// `|a_1| >= (log p)^{α - ε}`.
    Log,
    /// `|a_1| >= p^{α/2 - ε}`.
    Power,
}

/// `α = 1/(2g^2 + g + 1)`.
pub fn alpha(g: u32) -> f64 {
    1.0 / (2 * g * g + g + 1) as f64
}

/// Fraction of records whose `|a_1|` clears the threshold.
pub fn nonlacunarity(archive: &TraceArchive, eps: f64, mode: LacunarityMode) -> Result<f64, StatsError> {
    let a = alpha(archive.genus);
    let max = match mode {
        LacunarityMode::Log => a,
        LacunarityMode::Power => a / 2.0,
    };
    if !(eps > 0.0 && eps < max) {
        return Err(StatsError::Epsilon { eps, max });
    }
    if archive.records.is_empty() {
        return Ok(0.0);
    }
    let hits = archive
        .records
        .iter()
        .filter(|r| {
            let p = r.p as f64;
            let threshold = match mode {
                LacunarityMode::Log => p.ln().powf(a - eps),
                LacunarityMode::Power => p.powf(a / 2.0 - eps),
            };
            r.a1.unsigned_abs() as f64 >= threshold
        })
        .count();
    Ok(hits as f64 / archive.records.len() as f64)
}

/// `x,count,sqrtx_over_logx,count_neg_t`.
pub fn write_pi_csv<W: Write>(mut w: W, table: &PiTable) -> io::Result<()> {
    writeln!(w, "x,count,sqrtx_over_logx,count_neg_t")?;
    for ((x, v), (norm, vn)) in table.checkpoints.iter().zip(&table.values).zip(table.normalizers().iter().zip(&table.values_neg)) {
        writeln!(w, "{x},{v},{norm:.10},{vn}")?;
    }
    Ok(())
}

pub fn write_nu_csv<W: Write>(mut w: W, hist: &BTreeMap<u32, u64>) -> io::Result<()> {
    writeln!(w, "nu,count")?;
    for (nu, c) in hist {
        writeln!(w, "{nu},{c}")?;
    }
    Ok(())
}

pub fn write_ek_csv<W: Write>(mut w: W, report: &EkReport) -> io::Result<()> {
    writeln!(w, "tau,empirical,normal")?;
    for r in &report.rows {
        writeln!(w, "{},{:.10},{:.10}", r.tau, r.empirical, r.normal)?;
    }
    Ok(())
}
