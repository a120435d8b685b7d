//! Segmented sieve of Eratosthenes and a smallest-prime-factor table.

/// Odd numbers per segment; one byte each.
const SEGMENT: usize = 1 << 16;

/// All primes `<= n`, ascending, via a segmented odd-only sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(2, n)
}

/// Primes `p` with `lo <= p <= hi`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if hi < 2 || lo > hi {
        return out;
    }
    if lo <= 2 {
        out.push(2);
    }
    if hi < 3 {
        return out;
    }
    let root = isqrt(hi);
    let base = small_odd_primes(root);

    // Sieve odd numbers in [start, hi] where start is odd.
    let mut start = lo.max(3) | 1;
    let mut seg = vec![true; SEGMENT];
    while start <= hi {
        let span = ((hi - start) / 2 + 1).min(SEGMENT as u64) as usize;
        let seg = &mut seg[..span];
        seg.fill(true);
        let end = start + 2 * (span as u64 - 1);
        for &q in &base {
            let q2 = q * q;
            if q2 > end {
                break;
            }
            // first odd multiple of q that is >= max(q^2, start)
            let mut m = if q2 >= start {
                q2
            } else {
                let r = start.div_ceil(q) * q;
                if r % 2 == 0 {
                    r + q
                } else {
                    r
                }
            };
            while m <= end {
                seg[((m - start) / 2) as usize] = false;
                m += 2 * q;
            }
        }
        out.extend(
            seg.iter()
                .enumerate()
                .filter(|(_, &is_p)| is_p)
                .map(|(i, _)| start + 2 * i as u64)
                .filter(|&v| v > 1),
        );
        start = end + 2;
    }
    out
}

fn small_odd_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is_p = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if is_p[i] {
            if i > 2 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest-prime-factor table for `1..=bound`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(bound: u64) -> Self {
        let b = bound as usize;
        let mut spf = vec![0u32; b + 1];
        for i in 2..=b {
            if spf[i] == 0 {
                let mut j = i;
                while j <= b {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Least prime dividing `n`, for `2 <= n <= bound`.
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Number of distinct prime factors of `n`, `1 <= n <= bound`.
    pub fn distinct_prime_factors(&self, mut n: u64) -> u32 {
        let mut count = 0;
        while n > 1 {
            let q = self.spf(n);
            count += 1;
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;

    #[test]
    fn sieve_matches_primality_test() {
        let ps = primes_up_to(300_000);
        let brute: Vec<u64> = (0..=300_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, brute);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(1 << 20).len(), 82_025);
        assert_eq!(primes_up_to(10).len(), 4);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
    }

    #[test]
    fn ranges() {
        assert_eq!(primes_in_range(10, 30), vec![11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_in_range(2, 3), vec![2, 3]);
        assert_eq!(primes_in_range(24, 28), Vec::<u64>::new());
        let split: Vec<u64> = primes_in_range(2, 100_000)
            .into_iter()
            .filter(|&p| p >= 50_000)
            .collect();
        assert_eq!(split, primes_in_range(50_000, 100_000));
    }

    #[test]
    fn spf_table() {
        let s = SpfSieve::new(1000);
        for n in 2..=1000u64 {
            let least = (2..=n).find(|d| n % d == 0).unwrap();
            assert_eq!(s.spf(n), least);
        }
        assert_eq!(s.distinct_prime_factors(1), 0);
        assert_eq!(s.distinct_prime_factors(12), 2);
        assert_eq!(s.distinct_prime_factors(30), 3);
    }
}
