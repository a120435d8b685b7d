//! Prime fields `F_p` and small extensions `F_{p^k}` (odd characteristic).
//!
//! Both contexts are immutable once built and can be shared freely between
//! threads. Extension elements are dense coefficient vectors, constant term
//! first, reduced modulo a monic irreducible polynomial.

use crate::arith::{add_mod, inv_mod, is_prime, mul_mod, pow_mod, sub_mod};

/// Primes at or below this size get a squares table from [`PrimeField::for_bulk`].
pub const SQUARES_TABLE_THRESHOLD: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree {0} outside 1..=4")]
    DegreeOutOfRange(u32),
    #[error("modulus of degree {0} is not irreducible")]
    Reducible(usize),
}

/// The field `F_p`, optionally carrying a bitset of nonzero squares.
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
    squares: Option<Vec<u64>>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        Ok(PrimeField { p, squares: None })
    }

    /// Context for callers that will evaluate many characters: builds the
    /// squares table when `p <= SQUARES_TABLE_THRESHOLD`.
    pub fn for_bulk(p: u64) -> Result<Self, FieldError> {
        let mut f = Self::new(p)?;
        if p <= SQUARES_TABLE_THRESHOLD {
            f.build_squares_table();
        }
        Ok(f)
    }

    pub fn build_squares_table(&mut self) {
        if self.squares.is_none() {
            self.squares = Some(squares_bitset(self.p));
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Bitset of nonzero squares, bit `a` set iff `a` is a nonzero square.
    pub fn squares_table(&self) -> Option<&[u64]> {
        self.squares.as_deref()
    }

    /// Quadratic character: `0` for zero, `1` for nonzero squares, `-1` otherwise.
    pub fn quad_char(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        match &self.squares {
            Some(bits) => {
                if bits[(a >> 6) as usize] >> (a & 63) & 1 == 1 {
                    1
                } else {
                    -1
                }
            }
            None => self.quad_char_euler(a),
        }
    }

    /// Euler's criterion `a^((p-1)/2)`, never consulting the table.
    pub fn quad_char_euler(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if pow_mod(a, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }
    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.p)
    }
}

/// Bitset of the nonzero squares modulo `p`.
///
/// Runs `CHAINS` interleaved running sums `(y+C)^2 = y^2 + (2Cy + C^2)`, each
/// term kept reduced by one conditional subtraction; independent chains hide
/// the add latency.
pub fn squares_bitset(p: u64) -> Vec<u64> {
    const CHAINS: u64 = 8;
    let mut bits = vec![0u64; (p as usize >> 6) + 1];
    let half = (p - 1) / 2;
    let mut set = |sq: u64| bits[(sq >> 6) as usize] |= 1 << (sq & 63);
    let full = if p > 4 * CHAINS * CHAINS { half / CHAINS * CHAINS } else { 0 };
    if full > 0 {
        let step = 2 * CHAINS * CHAINS % p;
        let mut sq = [0u64; CHAINS as usize];
        let mut inc = [0u64; CHAINS as usize];
        for c in 0..CHAINS {
            let y = c + 1;
            sq[c as usize] = y * y % p;
            inc[c as usize] = (2 * CHAINS * y + CHAINS * CHAINS) % p;
        }
        for _ in 0..full / CHAINS {
            for c in 0..CHAINS as usize {
                set(sq[c]);
                let t = sq[c] + inc[c];
                sq[c] = t.min(t.wrapping_sub(p));
                let t = inc[c] + step;
                inc[c] = t.min(t.wrapping_sub(p));
            }
        }
    }
    for y in full + 1..=half {
        set(mul_mod(y, y, p));
    }
    bits
}

/// An element of `F_{p^k}`: `k` coefficients, constant term first.
pub type ExtElem = Vec<u64>;

/// The field `F_{p^k} = F_p[u] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    k: usize,
    /// Monic, `k + 1` coefficients, constant term first.
    modulus: Vec<u64>,
}

impl ExtField {
    /// Deterministic construction: the lexicographically first monic
    /// irreducible of degree `k`, ordering candidates by `(c_{k-1}, ..., c_0)`.
    pub fn build(p: u64, k: u32) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        if !(1..=4).contains(&k) {
            return Err(FieldError::DegreeOutOfRange(k));
        }
        let k = k as usize;
        let mut low = vec![0u64; k];
        loop {
            let mut modulus = low.clone();
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(ExtField { p, k, modulus });
            }
            // odometer with c_0 fastest
            let mut i = 0;
            loop {
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
                i += 1;
                assert!(i < k, "an irreducible polynomial of every degree exists");
            }
        }
    }

    /// Context over a caller-supplied monic modulus (constant term first).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        let k = modulus.len().saturating_sub(1);
        if modulus.last() != Some(&1) || !is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible(k));
        }
        Ok(ExtField { p, k, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.k
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    /// Field size `p^k`.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn zero(&self) -> ExtElem {
        vec![0; self.k]
    }
    pub fn one(&self) -> ExtElem {
        self.from_int(1)
    }
    pub fn from_int(&self, a: i64) -> ExtElem {
        let mut e = self.zero();
        e[0] = crate::arith::reduce_i64(a, self.p);
        e
    }
    /// The class of `u` (the adjoined root).
    pub fn generator(&self) -> ExtElem {
        let mut e = vec![0; self.k + 1];
        e[1] = 1;
        self.reduce(e)
    }

    /// The `index`-th element, reading `index` as base-`p` digits.
    pub fn element(&self, mut index: u64) -> ExtElem {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        e
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, self.p)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> ExtElem {
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, self.p), self.p);
            }
        }
        self.reduce(prod)
    }

    fn reduce(&self, mut poly: Vec<u64>) -> ExtElem {
        let k = self.k;
        for top in (k..poly.len()).rev() {
            let c = poly[top];
            if c != 0 {
                for i in 0..k {
                    let t = mul_mod(c, self.modulus[i], self.p);
                    poly[top - k + i] = sub_mod(poly[top - k + i], t, self.p);
                }
            }
        }
        poly.resize(k, 0);
        poly
    }

    /// `a^e` by square-and-multiply.
    pub fn pow(&self, a: &[u64], mut e: u128) -> ExtElem {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Quadratic character of `F_{p^k}` via `a^((q-1)/2)`.
    pub fn quad_char(&self, a: &[u64]) -> i8 {
        if self.is_zero(a) {
            return 0;
        }
        let r = self.pow(a, (self.order() - 1) / 2);
        if r == self.one() {
            1
        } else {
            -1
        }
    }
}

/// Rabin's test for a monic `f` of degree `k` over `F_p`: `u^(p^k) = u mod f`
/// and `gcd(u^(p^(k/q)) - u, f) = 1` for every prime `q | k`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    // frob[j] = u^(p^j) mod f
    let mut frob = vec![poly_rem(&x, f, p)];
    for j in 1..=k {
        let next = poly_powmod(&frob[j - 1], p, f, p);
        frob.push(next);
    }
    if trim(frob[k].clone()) != trim(poly_rem(&x, f, p)) {
        return false;
    }
    for q in crate::arith::prime_factors(k as u64) {
        let j = k / q as usize;
        let mut h = frob[j].clone();
        h.resize(h.len().max(2), 0);
        h[1] = sub_mod(h[1], 1, p);
        let g = poly_gcd(trim(h), trim(f.to_vec()), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm && !r.is_empty() {
        let shift = r.len() - 1 - dm;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, mi, p), p);
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    out
}

fn poly_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}
