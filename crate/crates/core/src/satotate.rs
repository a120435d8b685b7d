//! Sato–Tate densities of the normalised trace `a_1 / (2g sqrt p)` on `[-1, 1]`.
//!
//! For `g = 1` the density is the semicircle. For `g = 2` the joint density
//! of `(x1, x2) = (trace, second coefficient)` is proportional to
//! `sqrt(ρ)`, with
//! `ρ = (x1^2 - 4x2 + 8)(x2 - 2x1 + 2)(x2 + 2x1 + 2)`, and the trace density
//! `Ψ` on `[-4, 4]` is its marginal. For general `g` the density is
//! estimated by sampling eigenangles against the Weyl weight of `USp(2g)`.

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::archive::TraceArchive;
use crate::quad::{adaptive, GaussLegendre};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error("{0} is outside the domain [{1}, {2}]")]
    Domain(f64, f64, f64),
    #[error("closed-form density only for genus 1 and 2, got {0}")]
    UnsupportedGenus(u32),
    #[error("Monte Carlo needs at least {min} samples, got {got}")]
    TooFewSamples { got: u64, min: u64 },
    #[error("archive has no records")]
    EmptyArchive,
    #[error("need at least one bin")]
    ZeroBins,
}

fn check_domain(x: f64, lo: f64, hi: f64) -> Result<(), DensityError> {
    if (lo..=hi).contains(&x) {
        Ok(())
    } else {
        Err(DensityError::Domain(x, lo, hi))
    }
}

/// `(2/π) sqrt(1 - x^2)`.
pub fn phi_g1(x: f64) -> Result<f64, DensityError> {
    check_domain(x, -1.0, 1.0)?;
    Ok(2.0 / PI * (1.0 - x * x).max(0.0).sqrt())
}

pub fn rho_g2(x1: f64, x2: f64) -> f64 {
    (x1 * x1 - 4.0 * x2 + 8.0) * (x2 - 2.0 * x1 + 2.0) * (x2 + 2.0 * x1 + 2.0)
}

/// Integration range for `x2` at trace `x`: `[2|x| - 2, x^2/4 + 2]`. `ρ`
/// vanishes at both ends and is nonnegative between.
fn psi_range(x: f64) -> (f64, f64) {
    ((2.0 * x - 2.0).max(-2.0 * x - 2.0), x * x / 4.0 + 2.0)
}

/// `Ψ(x) = (1/4π^2) ∫ sqrt(max(ρ(x, x2), 0)) dx2` on `[-4, 4]`.
///
/// The substitution `x2 = a + (b - a)(1 - cos θ)/2` absorbs the square-root
/// behaviour at both ends of the range, leaving a smooth integrand in `θ`.
pub fn psi_g2(x: f64) -> Result<f64, DensityError> {
    check_domain(x, -4.0, 4.0)?;
    let (a, b) = psi_range(x);
    if b <= a {
        return Ok(0.0);
    }
    let half = (b - a) / 2.0;
    let mut integrand = |theta: f64| {
        let x2 = a + half * (1.0 - theta.cos());
        rho_g2(x, x2).max(0.0).sqrt() * half * theta.sin()
    };
    Ok(adaptive(&mut integrand, 0.0, PI, 1e-13) / (4.0 * PI * PI))
}

/// `Ψ(x)` by a fixed composite 4-point rule directly in `x2`, with no
/// endpoint treatment. Used to observe the convergence order.
pub fn psi_g2_fixed(x: f64, panels: usize) -> Result<f64, DensityError> {
    check_domain(x, -4.0, 4.0)?;
    let (a, b) = psi_range(x);
    if b <= a {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(4);
    let v = rule.composite(&mut |x2| rho_g2(x, x2).max(0.0).sqrt(), a, b, panels);
    Ok(v / (4.0 * PI * PI))
}

/// `Φ(x) = 4 Ψ(4x)`.
pub fn phi_g2(x: f64) -> Result<f64, DensityError> {
    check_domain(x, -1.0, 1.0)?;
    Ok(4.0 * psi_g2(4.0 * x)?)
}

/// Closed-form `Φ` for `g` in `{1, 2}`.
pub fn phi(g: u32, x: f64) -> Result<f64, DensityError> {
    match g {
        1 => phi_g1(x),
        2 => phi_g2(x),
        _ => Err(DensityError::UnsupportedGenus(g)),
    }
}

/// Eigenangle sample with its Weyl weight
/// `Π_{j<k} (cos θ_j - cos θ_k)^2 Π_j sin^2 θ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylSample {
    pub angles: Vec<f64>,
    pub weight: f64,
    /// `2 Σ cos θ_j`.
    pub trace: f64,
}

impl WeylSample {
    pub fn new(angles: Vec<f64>) -> Self {
        let cos: Vec<f64> = angles.iter().map(|t| t.cos()).collect();
        let mut weight: f64 = angles.iter().map(|t| t.sin().powi(2)).product();
        for j in 0..cos.len() {
            for k in j + 1..cos.len() {
                weight *= (cos[j] - cos[k]).powi(2);
            }
        }
        WeylSample { trace: 2.0 * cos.iter().sum::<f64>(), angles, weight }
    }
}

pub const MC_MIN_SAMPLES: u64 = 10_000;
/// Independent sample blocks; each has its own ChaCha stream, and the
/// bootstrap resamples whole blocks.
pub const MC_BLOCKS: usize = 100;
pub const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub x: f64,
    pub phi: f64,
    /// Bootstrap standard error.
    pub stderr: f64,
}

impl DensityEstimate {
    /// Half-width of the reported interval, two standard errors.
    pub fn halfwidth(&self) -> f64 {
        2.0 * self.stderr
    }
}

/// Per-block weighted kernel sums: `num[i] = Σ w K((x_i - s)/h)` and `Σ w`.
struct BlockSums {
    num: Vec<f64>,
    den: f64,
}

/// Self-normalised importance-sampling estimate of `Φ` for any genus.
///
/// Angles are uniform on `[0, π]^g`; each draw carries its Weyl weight, and
/// a Gaussian kernel of bandwidth `0.5 n^{-1/5}` smooths the statistic
/// `Σ cos θ_j / g`. Blocks run on `workers` threads and are reduced in
/// block order, so the output depends only on `seed`.
pub fn mc_density(
    g: u32,
    n_samples: u64,
    seed: u64,
    eval_points: &[f64],
    workers: usize,
) -> Result<Vec<DensityEstimate>, DensityError> {
    if n_samples < MC_MIN_SAMPLES {
        return Err(DensityError::TooFewSamples { got: n_samples, min: MC_MIN_SAMPLES });
    }
    let h = 0.5 * (n_samples as f64).powf(-0.2);
    let cutoff = 8.0 * h;
    let g = g as usize;

    let block = |b: usize| -> BlockSums {
        let size = n_samples / MC_BLOCKS as u64 + ((b as u64) < n_samples % MC_BLOCKS as u64) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let mut num = vec![0.0; eval_points.len()];
        let mut den = 0.0;
        let mut cos = vec![0.0; g];
        for _ in 0..size {
            let mut w = 1.0;
            for c in cos.iter_mut() {
                let theta = rng.gen::<f64>() * PI;
                *c = theta.cos();
                w *= theta.sin().powi(2);
            }
            for j in 0..g {
                for k in j + 1..g {
                    w *= (cos[j] - cos[k]).powi(2);
                }
            }
            let s = cos.iter().sum::<f64>() / g as f64;
            den += w;
            for (acc, &x) in num.iter_mut().zip(eval_points) {
                let u = x - s;
                if u.abs() < cutoff {
                    *acc += w * (-0.5 * (u / h).powi(2)).exp();
                }
            }
        }
        BlockSums { num, den }
    };

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
    let blocks: Vec<BlockSums> = pool.install(|| (0..MC_BLOCKS).into_par_iter().map(block).collect());

    let norm = 1.0 / (h * (2.0 * PI).sqrt());
    let estimate = |pick: &mut dyn Iterator<Item = usize>| -> Vec<f64> {
        let mut num = vec![0.0; eval_points.len()];
        let mut den = 0.0;
        for b in pick {
            den += blocks[b].den;
            for (a, v) in num.iter_mut().zip(&blocks[b].num) {
                *a += v;
            }
        }
        num.iter().map(|v| v / den * norm).collect()
    };
    let point = estimate(&mut (0..MC_BLOCKS));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut sum = vec![0.0; eval_points.len()];
    let mut sum_sq = vec![0.0; eval_points.len()];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let picks: Vec<usize> = (0..MC_BLOCKS).map(|_| rng.gen_range(0..MC_BLOCKS)).collect();
        for (i, v) in estimate(&mut picks.into_iter()).into_iter().enumerate() {
            sum[i] += v;
            sum_sq[i] += v * v;
        }
    }
    let r = BOOTSTRAP_RESAMPLES as f64;
    Ok(eval_points
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mean = sum[i] / r;
            let var = (sum_sq[i] / r - mean * mean).max(0.0) * r / (r - 1.0);
            DensityEstimate { x, phi: point[i], stderr: var.sqrt() }
        })
        .collect())
}

/// Histogram of `a_1 / (2g sqrt p)` over `[-1, 1]` in equal bins.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    /// `bins + 1` edges from `-1` to `1`.
    pub edges: Vec<f64>,
    /// Fraction of records per bin; sums to 1.
    pub masses: Vec<f64>,
}

impl EmpiricalDensity {
    /// `∫ Φ` over each bin, for comparison with `masses`.
    pub fn reference_masses(&self, phi: impl Fn(f64) -> f64) -> Vec<f64> {
        self.edges.windows(2).map(|w| adaptive(&mut |x| phi(x), w[0], w[1], 1e-10)).collect()
    }

    /// `max_i |mass_i - mass_{bins-1-i}|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.masses.len();
        (0..n).map(|i| (self.masses[i] - self.masses[n - 1 - i]).abs()).fold(0.0, f64::max)
    }
}

pub fn empirical_density(archive: &TraceArchive, bins: usize) -> Result<EmpiricalDensity, DensityError> {
    if bins == 0 {
        return Err(DensityError::ZeroBins);
    }
    if archive.records.is_empty() {
        return Err(DensityError::EmptyArchive);
    }
    let g = archive.genus as f64;
    let mut counts = vec![0u64; bins];
    for r in &archive.records {
        let x = r.a1 as f64 / (2.0 * g * (r.p as f64).sqrt());
        let idx = (((x + 1.0) / 2.0 * bins as f64).floor().max(0.0) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let total = archive.records.len() as f64;
    Ok(EmpiricalDensity {
        edges: (0..=bins).map(|i| -1.0 + 2.0 * i as f64 / bins as f64).collect(),
        masses: counts.iter().map(|&c| c as f64 / total).collect(),
    })
}

/// CSV with header `x,phi,stderr`.
pub fn write_density_csv<W: Write>(mut w: W, rows: &[DensityEstimate]) -> io::Result<()> {
    writeln!(w, "x,phi,stderr")?;
    for r in rows {
        writeln!(w, "{},{:.10},{:.10}", r.x, r.phi, r.stderr)?;
    }
    Ok(())
}
