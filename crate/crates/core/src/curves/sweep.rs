use rayon::prelude::*;

use super::{CurveError, CurveModel};
use crate::archive::{FrobeniusRecord, TraceArchive};
use crate::ffield::squares_bitset;
use crate::sieve::primes_up_to;

/// Work units per worker; smaller units balance better near the top of the
/// range where primes are most expensive.
const CHUNKS_PER_WORKER: usize = 16;

/// Frobenius traces at every good prime `p <= x_max`.
///
/// Primes are split into contiguous chunks of roughly equal `sum p` and
/// processed on a pool of `workers` threads; chunk results are concatenated
/// in ascending order, so the archive does not depend on `workers`.
pub fn trace_sweep(curve: &CurveModel, x_max: u64, workers: usize) -> Result<TraceArchive, CurveError> {
    let primes: Vec<u64> = primes_up_to(x_max)
        .into_iter()
        .filter(|&p| !curve.is_bad_prime(p))
        .collect();
    let chunks = split_by_cost(&primes, workers.max(1) * CHUNKS_PER_WORKER);
    let g = curve.genus() as i128;

    let sweep_chunk = |chunk: &[u64]| -> Vec<FrobeniusRecord> {
        let mut out = Vec::with_capacity(chunk.len());
        for &p in chunk {
            let squares = squares_bitset(p);
            let a1 = curve.trace_with_table(p, &squares);
            assert!(
                (a1 as i128).pow(2) < 4 * g * g * p as i128,
                "Weil bound violated at p = {p}: a1 = {a1}"
            );
            out.push(FrobeniusRecord { p, a1, higher: None });
        }
        out
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let parts: Vec<Vec<FrobeniusRecord>> = pool.install(|| chunks.par_iter().map(|c| sweep_chunk(c)).collect());

    Ok(TraceArchive {
        genus: curve.genus(),
        coeffs: curve.coeffs().to_vec(),
        x_max,
        records: parts.into_iter().flatten().collect(),
    })
}

fn split_by_cost(primes: &[u64], parts: usize) -> Vec<&[u64]> {
    let total: u128 = primes.iter().map(|&p| p as u128).sum();
    let target = (total / parts as u128).max(1);
    let mut out = Vec::with_capacity(parts);
    let (mut start, mut acc) = (0usize, 0u128);
    for (i, &p) in primes.iter().enumerate() {
        acc += p as u128;
        if acc >= target {
            out.push(&primes[start..=i]);
            start = i + 1;
            acc = 0;
        }
    }
    if start < primes.len() {
        out.push(&primes[start..]);
    }
    out
}
