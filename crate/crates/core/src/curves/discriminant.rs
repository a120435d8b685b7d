//! Exact discriminants of integer polynomials, and the factoring needed to
//! turn them into bad-prime sets.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CurveError;

/// `disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)` for `f` given constant term
/// first, computed by Bareiss elimination of the Sylvester matrix.
pub fn discriminant(f: &[i64]) -> Result<BigInt, CurveError> {
    let f = trimmed(f);
    let d = f.len().saturating_sub(1);
    if d < 2 {
        return Err(CurveError::DegreeTooSmall(d));
    }
    let deriv: Vec<i64> = (1..=d).map(|i| f[i] * i as i64).collect();
    let res = resultant(&f, &deriv);
    let lc = BigInt::from(f[d]);
    let (q, r) = res.div_rem(&lc);
    debug_assert!(r.is_zero(), "lc(f) divides Res(f, f')");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

fn trimmed(f: &[i64]) -> Vec<i64> {
    let mut v = f.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Resultant of two polynomials (constant term first) as the determinant of
/// their Sylvester matrix.
pub fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (j, &c) in f.iter().rev().enumerate() {
            rows[r][r + j] = BigInt::from(c);
        }
    }
    for r in 0..m {
        for (j, &c) in g.iter().rev().enumerate() {
            rows[n + r][r + j] = BigInt::from(c);
        }
    }
    bareiss_det(rows)
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Distinct prime factors of `|n|`, `n != 0`. Fails if a factor does not fit
/// in 64 bits.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>, CurveError> {
    let mut rest = n.abs().to_biguint().expect("absolute value");
    let mut out = Vec::new();
    for q in crate::sieve::primes_up_to(1 << 16) {
        let qb = BigUint::from(q);
        if (&rest % &qb).is_zero() {
            out.push(q);
            while (&rest % &qb).is_zero() {
                rest /= &qb;
            }
        }
        if rest.is_one() {
            break;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if probably_prime(&m) {
            out.push(m.to_u64().ok_or_else(|| CurveError::LargeBadPrime(m.to_string()))?);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn probably_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return crate::arith::is_prime(small);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (BigUint::from(2u32), BigUint::from(2u32));
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// `value mod p` for a big integer, in `[0, p)`.
pub fn big_mod_u64(value: &BigInt, p: u64) -> u64 {
    let r = value.magnitude() % BigUint::from(p);
    let r = r.to_u64().unwrap_or(0);
    if value.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}
