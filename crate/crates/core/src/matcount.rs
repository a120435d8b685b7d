//! Trace classes in `GSp_{2g}(Z/mZ)`.
//!
//! `M` is a similitude when `MᵀJM = μJ` for a unit `μ`, where
//! `J = (0, I_g; -I_g, 0)`. Column by column this says
//! `ω(c_i, c_{g+i}) = μ` and `ω(c_i, c_j) = 0` for every other pair `i < j`,
//! with `ω(u, v) = Σ_k (u_k v_{g+k} - u_{g+k} v_k)`. The enumerator places
//! columns in the order `c_0, c_g, c_1, c_{g+1}, ...` and prunes on these
//! pairings, so only group elements are ever completed. The work budget is
//! still charged as the full `m^{4g^2}` matrix scan.

use num_rational::Ratio;

use crate::arith::{gcd, inv_mod, is_prime, valuation};
use crate::BudgetExceeded;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatcountError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("genus {0} is not supported here")]
    UnsupportedGenus(u32),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus must be at least {min}, got {m}")]
    ModulusTooSmall { m: u64, min: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("Kloosterman argument must be nonzero mod {0}")]
    ZeroArgument(u64),
    #[error("no class count available for modulus {m}, trace {t}")]
    MissingCount { m: u64, t: i64 },
    #[error("result overflows 128 bits")]
    Overflow,
    #[error("invalid eigenvalue profile: {0}")]
    InvalidProfile(String),
}

/// `|GSp_{2g}(F_ℓ)| = (ℓ-1) ℓ^{g^2} Π_{i=1..g} (ℓ^{2i} - 1)`.
pub fn gsp_order(g: u32, l: u64) -> Result<u128, MatcountError> {
    if !is_prime(l) {
        return Err(MatcountError::NotPrime(l));
    }
    let l = l as u128;
    let mut order = (l - 1).checked_mul(checked_pow(l, g * g)?).ok_or(MatcountError::Overflow)?;
    for i in 1..=g {
        order = order.checked_mul(checked_pow(l, 2 * i)? - 1).ok_or(MatcountError::Overflow)?;
    }
    Ok(order)
}

fn checked_pow(b: u128, e: u32) -> Result<u128, MatcountError> {
    b.checked_pow(e).ok_or(MatcountError::Overflow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSource {
    Enumerated,
    ClosedForm,
    Supplied,
}

/// `|C(m, t)|` for every residue `t mod m`, and `|G(m)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTable {
    pub g: u32,
    pub m: u64,
    /// Indexed by `t mod m`.
    pub counts: Vec<u128>,
    pub group_order: u128,
    pub source: CountSource,
}

impl TraceTable {
    /// The one-element group over `Z/1Z`.
    pub fn trivial(g: u32) -> Self {
        TraceTable { g, m: 1, counts: vec![1], group_order: 1, source: CountSource::ClosedForm }
    }

    /// Full table over `F_ℓ` from the closed forms (`g` in `{1, 2}`).
    pub fn closed_form(g: u32, l: u64) -> Result<Self, MatcountError> {
        let counts = (0..l).map(|t| closed_count(g, l, t as i64)).collect::<Result<Vec<_>, _>>()?;
        Ok(TraceTable { g, m: l, counts, group_order: gsp_order(g, l)?, source: CountSource::ClosedForm })
    }

    pub fn count(&self, t: i64) -> u128 {
        self.counts[t.rem_euclid(self.m as i64) as usize]
    }

    /// Table over `Z/(m1 m2)Z` from coprime factors, via CRT.
    pub fn crt_product(a: &TraceTable, b: &TraceTable) -> Result<Self, MatcountError> {
        if gcd(a.m, b.m) != 1 {
            return Err(MatcountError::NotCoprime(a.m, b.m));
        }
        let m = a.m * b.m;
        let counts = (0..m)
            .map(|t| a.counts[(t % a.m) as usize].checked_mul(b.counts[(t % b.m) as usize]))
            .collect::<Option<Vec<_>>>()
            .ok_or(MatcountError::Overflow)?;
        let group_order = a.group_order.checked_mul(b.group_order).ok_or(MatcountError::Overflow)?;
        let source = if a.source == b.source { a.source } else { CountSource::Supplied };
        Ok(TraceTable { g: a.g, m, counts, group_order, source })
    }
}

/// Anything that can answer `(|C(m, t)|, |G(m)|)`; lets callers plug in
/// counts for image groups smaller than the full `GSp`.
pub trait TraceCountSource {
    fn class_count(&self, m: u64, t: i64) -> Option<(u128, u128)>;
}

impl TraceCountSource for TraceTable {
    fn class_count(&self, m: u64, t: i64) -> Option<(u128, u128)> {
        (m == self.m).then(|| (self.count(t), self.group_order))
    }
}

impl TraceCountSource for [TraceTable] {
    fn class_count(&self, m: u64, t: i64) -> Option<(u128, u128)> {
        self.iter().find_map(|tab| tab.class_count(m, t))
    }
}

/// `|C(ℓ, t)|` by the closed forms.
///
/// g = 1: `ℓ^3 - ℓ^2` when `ℓ | t`, else `ℓ^3 - ℓ^2 - ℓ`.
/// g = 2: `ℓ^5 (ℓ-1)(ℓ^4-ℓ-1)` when `ℓ | t`, else `ℓ^4 (ℓ^6-ℓ^5-ℓ^4+ℓ+1)`.
pub fn closed_count(g: u32, l: u64, t: i64) -> Result<u128, MatcountError> {
    if !is_prime(l) {
        return Err(MatcountError::NotPrime(l));
    }
    let divides = t.rem_euclid(l as i64) == 0;
    let l = l as u128;
    let pw = |e: u32| checked_pow(l, e);
    let v = match (g, divides) {
        (1, true) => pw(3)? - pw(2)?,
        (1, false) => pw(3)? - pw(2)? - l,
        (2, true) => pw(5)?
            .checked_mul((l - 1) * (pw(4)? - l - 1))
            .ok_or(MatcountError::Overflow)?,
        (2, false) => pw(4)?
            .checked_mul(pw(6)? - pw(5)? - pw(4)? + l + 1)
            .ok_or(MatcountError::Overflow)?,
        _ => return Err(MatcountError::UnsupportedGenus(g)),
    };
    Ok(v)
}

fn check_enumeration(g: u32, m: u64, budget: u64) -> Result<(), MatcountError> {
    if g == 0 {
        return Err(MatcountError::UnsupportedGenus(g));
    }
    if m < 2 {
        return Err(MatcountError::ModulusTooSmall { m, min: 2 });
    }
    let needed = (m as u128).checked_pow(4 * g * g).unwrap_or(u128::MAX);
    BudgetExceeded::check(needed, budget)?;
    Ok(())
}

/// Exhaustive counts `N[μ][t]` of similitudes with multiplier `μ` and trace
/// `t`, both as residues mod `m`. Rows for non-units are zero.
pub fn multiplier_trace_counts(g: u32, m: u64, budget: u64) -> Result<Vec<Vec<u64>>, MatcountError> {
    check_enumeration(g, m, budget)?;
    let mut e = Enumerator::new(g as usize, m);
    let mut placed = vec![0usize; 2 * g as usize];
    e.descend(0, &mut placed, 0, 0);
    Ok(e.counts)
}

/// `|C(m, t)|` for all `t` and `|G(m)|`, by exhaustive enumeration.
pub fn enumerate_trace_counts(g: u32, m: u64, budget: u64) -> Result<TraceTable, MatcountError> {
    let by_mu = multiplier_trace_counts(g, m, budget)?;
    let mut counts = vec![0u128; m as usize];
    for row in &by_mu {
        for (t, &c) in row.iter().enumerate() {
            counts[t] += c as u128;
        }
    }
    let group_order = counts.iter().sum();
    Ok(TraceTable { g, m, counts, group_order, source: CountSource::Enumerated })
}

struct Enumerator {
    g: usize,
    n: usize,
    m: u64,
    /// All of `(Z/mZ)^{2g}`, `n` digits per vector.
    vecs: Vec<u64>,
    /// Column placed at each depth.
    order: Vec<usize>,
    units: Vec<bool>,
    counts: Vec<Vec<u64>>,
}

impl Enumerator {
    fn new(g: usize, m: u64) -> Self {
        let n = 2 * g;
        let size = (m as usize).pow(n as u32);
        let mut vecs = Vec::with_capacity(size * n);
        for idx in 0..size {
            let mut r = idx as u64;
            for _ in 0..n {
                vecs.push(r % m);
                r /= m;
            }
        }
        let order = (0..g).flat_map(|i| [i, g + i]).collect();
        let units = (0..m).map(|u| gcd(u, m) == 1).collect();
        Enumerator { g, n, m, vecs, order, units, counts: vec![vec![0; m as usize]; m as usize] }
    }

    fn vec(&self, i: usize) -> &[u64] {
        &self.vecs[i * self.n..(i + 1) * self.n]
    }

    fn omega(&self, a: usize, b: usize) -> u64 {
        let (u, v, g, m) = (self.vec(a), self.vec(b), self.g, self.m);
        let mut s = 0u64;
        for k in 0..g {
            s += u[k] * v[g + k] % m + (m - u[g + k] * v[k] % m);
        }
        s % m
    }

    fn descend(&mut self, depth: usize, placed: &mut [usize], mu: u64, trace: u64) {
        if depth == self.n {
            self.counts[mu as usize][trace as usize] += 1;
            return;
        }
        let j = self.order[depth];
        let candidates = self.vecs.len() / self.n;
        for v in 0..candidates {
            let mut mu_here = mu;
            if depth == 1 {
                // the pairing of c_0 with c_g is the multiplier
                mu_here = self.omega(placed[0], v);
                if !self.units[mu_here as usize] {
                    continue;
                }
            } else {
                let ok = (0..depth).all(|e| {
                    let k = self.order[e];
                    let target = if j == k + self.g {
                        mu
                    } else if k == j + self.g {
                        (self.m - mu) % self.m
                    } else {
                        0
                    };
                    self.omega(placed[e], v) == target
                });
                if !ok {
                    continue;
                }
            }
            placed[depth] = v;
            let t = (trace + self.vec(v)[j]) % self.m;
            self.descend(depth + 1, placed, mu_here, t);
        }
    }
}

/// Similitude test `MᵀJM = μJ` for a row-major `2g x 2g` matrix over `Z/mZ`;
/// returns the multiplier.
pub fn similitude_multiplier(g: usize, m: u64, mat: &[u64]) -> Option<u64> {
    let n = 2 * g;
    assert_eq!(mat.len(), n * n);
    let col = |j: usize| -> Vec<u64> { (0..n).map(|i| mat[i * n + j] % m).collect() };
    let omega = |u: &[u64], v: &[u64]| -> u64 {
        (0..g).map(|k| u[k] * v[g + k] % m + m - u[g + k] * v[k] % m).sum::<u64>() % m
    };
    let cols: Vec<Vec<u64>> = (0..n).map(col).collect();
    let mu = omega(&cols[0], &cols[g]);
    if gcd(mu, m) != 1 {
        return None;
    }
    for i in 0..n {
        for j in i + 1..n {
            let want = if j == i + g { mu } else { 0 };
            if omega(&cols[i], &cols[j]) != want {
                return None;
            }
        }
    }
    Some(mu)
}

/// `N_{ℓ,t} = #{(x, y, δ) in (F_ℓ^×)^3 : y ≠ -δ, (x + y/x)(1 + δ/y) = t}`.
pub fn n_count(l: u64, t: i64) -> Result<u64, MatcountError> {
    if l < 3 || !is_prime(l) {
        return Err(MatcountError::NotOddPrime(l));
    }
    let t = t.rem_euclid(l as i64) as u64;
    let inv: Vec<u64> = (0..l).map(|a| inv_mod(a, l).unwrap_or(0)).collect();
    let mut n = 0;
    for x in 1..l {
        for y in 1..l {
            let a = (x + y * inv[x as usize]) % l;
            for d in 1..l {
                if (y + d) % l == 0 {
                    continue;
                }
                let b = (1 + d * inv[y as usize]) % l;
                n += (a * b % l == t) as u64;
            }
        }
    }
    Ok(n)
}

/// `K(α) = Σ_{a in F_ℓ^×} cos(2π(aα + a^{-1})/ℓ)`.
///
/// `a` and `-a` give the same cosine, so only `a <= (ℓ-1)/2` is summed.
pub fn kloosterman(l: u64, alpha: i64) -> Result<f64, MatcountError> {
    if l < 3 || !is_prime(l) {
        return Err(MatcountError::NotOddPrime(l));
    }
    let alpha = alpha.rem_euclid(l as i64) as u64;
    if alpha == 0 {
        return Err(MatcountError::ZeroArgument(l));
    }
    let mut sum = 0.0;
    for a in 1..=(l - 1) / 2 {
        let arg = (a * alpha + inv_mod(a, l).expect("a is a unit")) % l;
        sum += (std::f64::consts::TAU * arg as f64 / l as f64).cos();
    }
    Ok(2.0 * sum)
}

/// `M_s = #{α in (F_ℓ^×)^s : Σα_i = 1, Σα_i^{-1} = 1}`, with `M_0 = 1`.
pub fn m_count(l: u64, s: u32, budget: u64) -> Result<u64, MatcountError> {
    if l < 3 || !is_prime(l) {
        return Err(MatcountError::NotOddPrime(l));
    }
    if s == 0 {
        return Ok(1);
    }
    BudgetExceeded::check((l as u128).saturating_pow(s), budget)?;
    let inv: Vec<u64> = (0..l).map(|a| inv_mod(a, l).unwrap_or(0)).collect();
    // odometer over the first s-1 entries; the last is forced by the sum
    let mut digits = vec![1u64; s as usize - 1];
    let mut count = 0;
    loop {
        let sum: u64 = digits.iter().sum::<u64>() % l;
        let last = (1 + l - sum) % l;
        if last != 0 {
            let inv_sum = (digits.iter().map(|&a| inv[a as usize]).sum::<u64>() + inv[last as usize]) % l;
            count += (inv_sum == 1) as u64;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(count);
            }
            digits[i] += 1;
            if digits[i] < l {
                break;
            }
            digits[i] = 1;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub lhs: f64,
    pub rhs: i128,
    pub pass: bool,
}

/// `Σ_α K(α)^r` against `ℓ^2 M_{r-1} - (ℓ-1)^{r-1} + 2(-1)^{r-1}`, with
/// tolerance `10^-6 ℓ^{r/2+1}`.
pub fn kloosterman_moment_check(l: u64, r: u32, budget: u64) -> Result<MomentCheck, MatcountError> {
    assert!(r >= 2, "moment order must be at least 2");
    let mut lhs = 0.0;
    for a in 1..l {
        lhs += kloosterman(l, a as i64)?.powi(r as i32);
    }
    let li = l as i128;
    let sign = if (r - 1).is_multiple_of(2) { 1 } else { -1 };
    let rhs = li * li * m_count(l, r - 1, budget)? as i128 - (li - 1).pow(r - 1) + 2 * sign;
    let tol = 1e-6 * (l as f64).powf(r as f64 / 2.0 + 1.0);
    Ok(MomentCheck { lhs, rhs, pass: (lhs - rhs as f64).abs() < tol })
}

/// `m |C(m, t)| / |G(m)|` (the quantity written `F_t(m)` or `H_t(m)`).
pub fn f_ratio<S: TraceCountSource + ?Sized>(source: &S, m: u64, t: i64) -> Result<Ratio<u128>, MatcountError> {
    let (count, order) = source.class_count(m, t).ok_or(MatcountError::MissingCount { m, t })?;
    let num = (m as u128).checked_mul(count).ok_or(MatcountError::Overflow)?;
    Ok(Ratio::new(num, order))
}

/// For `g = 1`: does `F_t(ℓ^{v+k})` equal `F_t(ℓ^{v+1})` for all
/// `1 <= k <= k_max`, where `v = v_ℓ(t)`? Charged as a scan of
/// `(ℓ^{v+k_max})^4` matrices.
pub fn f_stabilization_check(l: u64, t: i64, k_max: u32, budget: u64) -> Result<bool, MatcountError> {
    if !is_prime(l) {
        return Err(MatcountError::NotPrime(l));
    }
    let v = if t == 0 { 0 } else { valuation(t.unsigned_abs(), l) };
    let top = (l as u128).checked_pow(v + k_max).ok_or(MatcountError::Overflow)?;
    BudgetExceeded::check(top.saturating_pow(4), budget)?;
    let ratio_at = |e: u32| -> Result<Ratio<u128>, MatcountError> {
        let table = enumerate_trace_counts(1, l.pow(e), budget)?;
        f_ratio(&table, table.m, t)
    };
    let base = ratio_at(v + 1)?;
    for k in 2..=k_max {
        if ratio_at(v + k)? != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|C(m1 m2, t)| = |C(m1, t)| |C(m2, t)|` for the full groups, all by
/// enumeration.
pub fn crt_factorization_check(g: u32, m1: u64, m2: u64, t: i64, budget: u64) -> Result<bool, MatcountError> {
    if gcd(m1, m2) != 1 {
        return Err(MatcountError::NotCoprime(m1, m2));
    }
    let a = enumerate_trace_counts(g, m1, budget)?;
    let b = enumerate_trace_counts(g, m2, budget)?;
    let ab = enumerate_trace_counts(g, m1 * m2, budget)?;
    Ok(ab.count(t) == a.count(t) * b.count(t) && ab.group_order == a.group_order * b.group_order)
}

/// Eigenvalue multiplicities of a semisimple element of `Sp_{2n}`: `2x` at
/// `1`, `2y` at `-1`, and `n_λ` for each pair `{λ, λ^{-1}}` with `λ ≠ ±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenProfile {
    pub n: u32,
    pub x: u32,
    pub y: u32,
    /// The `n_λ`, summing to `z = n - x - y`.
    pub partition: Vec<u32>,
}

impl EigenProfile {
    pub fn new(n: u32, x: u32, y: u32, partition: Vec<u32>) -> Result<Self, MatcountError> {
        let z: u32 = partition.iter().sum();
        if partition.contains(&0) {
            return Err(MatcountError::InvalidProfile("zero part in partition".into()));
        }
        if x + y + z != n {
            return Err(MatcountError::InvalidProfile(format!("x + y + z = {} but n = {n}", x + y + z)));
        }
        Ok(EigenProfile { n, x, y, partition })
    }

    pub fn z(&self) -> u32 {
        self.partition.iter().sum()
    }

    pub fn is_central(&self) -> bool {
        self.z() == 0 && (self.x == self.n || self.y == self.n)
    }

    /// Whether the profile can carry a trace-zero element: `z >= 1`, or
    /// `z = 0` with `x = y`.
    pub fn trace_zero_feasible(&self) -> bool {
        self.z() >= 1 || self.x == self.y
    }
}

/// `(dim Z, d)` where `dim Z = (n_1^2 + n_1 + n_{-1}^2 + n_{-1})/2 + Σ n_λ^2`
/// is the centralizer dimension and `d = dim Sp_{2n} - dim Z` the class
/// dimension.
pub fn centralizer_dim(profile: &EigenProfile) -> (u64, u64) {
    let (n1, nm1) = (2 * profile.x as u64, 2 * profile.y as u64);
    let dim_z = (n1 * n1 + n1 + nm1 * nm1 + nm1) / 2 + profile.partition.iter().map(|&k| (k as u64).pow(2)).sum::<u64>();
    let n = profile.n as u64;
    (dim_z, 2 * n * n + n - dim_z)
}

/// Every eigenvalue profile of rank `n`.
pub fn all_profiles(n: u32) -> Vec<EigenProfile> {
    let mut out = Vec::new();
    for x in 0..=n {
        for y in 0..=n - x {
            for partition in partitions(n - x - y) {
                out.push(EigenProfile { n, x, y, partition });
            }
        }
    }
    out
}

/// Integer partitions of `z` as non-increasing part lists.
fn partitions(z: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(z, z, &mut Vec::new(), &mut out);
    out
}

/// Minimum class dimension over non-central profiles of rank `n`, optionally
/// restricted to trace-zero feasible ones, with a minimizing profile.
pub fn min_class_dim(n: u32, trace_zero: bool) -> Result<(u64, EigenProfile), MatcountError> {
    if !(2..=10).contains(&n) {
        return Err(MatcountError::InvalidProfile(format!("rank {n} outside 2..=10")));
    }
    all_profiles(n)
        .into_iter()
        .filter(|p| !p.is_central() && (!trace_zero || p.trace_zero_feasible()))
        .map(|p| (centralizer_dim(&p).1, p))
        .min_by_key(|(d, _)| *d)
        .ok_or_else(|| MatcountError::InvalidProfile("no admissible profile".into()))
}
