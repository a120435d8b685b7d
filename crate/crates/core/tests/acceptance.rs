//! Acceptance suite. One PASS/FAIL line per criterion; exits nonzero if any fail.
//!
//! Expected values are either published figures or computed here by
//! independent brute force; the library is only the system under test.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use frobstat::curves::trace_sweep;
use frobstat::euler::euler_product;
use frobstat::matcount::{enumerate_trace_counts, kloosterman, kloosterman_moment_check, min_class_dim, n_count};
use frobstat::satotate::{mc_density, phi_g2, psi_g2};
use frobstat::stats::{default_checkpoints, nu_histogram, pi_a};
use frobstat::{CurveModel, TraceArchive, DEFAULT_BUDGET};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

const X_MAX: u64 = 1 << 21;
const LEFT: u64 = 1 << 20;

static ARCHIVE: OnceLock<TraceArchive> = OnceLock::new();

fn archive() -> &'static TraceArchive {
    ARCHIVE.get_or_init(|| trace_sweep(&CurveModel::j1(), X_MAX, 8).expect("J1 sweep"))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv(a: u64, l: u64) -> u64 {
    pow_mod(a, l - 2, l)
}

// 1. enumerated trace classes against the closed forms
fn closed_forms() -> Outcome {
    let mut cases = 0;
    for (g, l) in [(1u32, 2u64), (1, 3), (1, 5), (1, 7), (1, 11), (1, 13), (2, 2), (2, 3)] {
        let table = match enumerate_trace_counts(g, l, DEFAULT_BUDGET) {
            Ok(t) => t,
            Err(e) => return outcome(false, format!("g={g} l={l}: {e}")),
        };
        let l128 = l as u128;
        let order = if g == 1 {
            l128 * (l128 - 1) * (l128 * l128 - 1)
        } else {
            l128.pow(4) * (l128 - 1) * (l128.pow(2) - 1) * (l128.pow(4) - 1)
        };
        if table.group_order != order {
            return outcome(false, format!("g={g} l={l}: |G|={} expected {order}", table.group_order));
        }
        for t in 0..l {
            let want = match (g, t == 0) {
                (1, true) => l128.pow(3) - l128.pow(2),
                (1, false) => l128.pow(3) - l128.pow(2) - l128,
                (_, true) => l128.pow(5) * (l128 - 1) * (l128.pow(4) - l128 - 1),
                (_, false) => l128.pow(4) * (l128.pow(6) - l128.pow(5) - l128.pow(4) + l128 + 1),
            };
            let got = table.count(t as i64);
            if got != want {
                return outcome(false, format!("g={g} l={l} t={t}: enumerated {got}, closed form {want}"));
            }
            cases += 1;
        }
    }
    outcome(true, format!("{cases} (g, l, t) cases exact"))
}

// 2. N_{l,t}
fn n_counts() -> Outcome {
    for l in [3u64, 5, 7, 11, 13] {
        for t in 0..l {
            let want = if t == 0 { (l - 1) * (l - 2) } else { (l - 2) * (l - 2) };
            match n_count(l, t as i64) {
                Ok(n) if n == want => {}
                other => return outcome(false, format!("l={l} t={t}: {other:?}, expected {want}")),
            }
        }
    }
    outcome(true, "l in {3,5,7,11,13}, all t")
}

fn kloosterman_oracle(l: u64, alpha: u64) -> f64 {
    (1..l).map(|a| (2.0 * PI * ((a * alpha + inv(a, l)) % l) as f64 / l as f64).cos()).sum()
}

fn m_oracle(l: u64, s: u32) -> i128 {
    let total = l.pow(s);
    let mut count = 0;
    for code in 0..total {
        let (mut c, mut sum, mut isum, mut ok) = (code, 0, 0, true);
        for _ in 0..s {
            let a = c % l;
            c /= l;
            if a == 0 {
                ok = false;
                break;
            }
            sum = (sum + a) % l;
            isum = (isum + inv(a, l)) % l;
        }
        count += (ok && sum == 1 % l && isum == 1 % l) as i128;
    }
    count
}

// 3. Kloosterman moment identity
fn kloosterman_moments() -> Outcome {
    let mut worst: f64 = 0.0;
    for l in [3u64, 5, 7, 11] {
        for alpha in 1..l {
            let lib = kloosterman(l, alpha as i64).unwrap();
            if (lib - kloosterman_oracle(l, alpha)).abs() > 1e-9 {
                return outcome(false, format!("K({alpha}) mod {l}: library {lib}"));
            }
        }
        for r in 2..=5u32 {
            let li = l as i128;
            let sign = if r % 2 == 1 { 1 } else { -1 };
            let rhs = li * li * m_oracle(l, r - 1) - (li - 1).pow(r - 1) + 2 * sign;
            let check = kloosterman_moment_check(l, r, DEFAULT_BUDGET).unwrap();
            let tol = 1e-6 * (l as f64).powf(r as f64 / 2.0 + 1.0);
            let err = (check.lhs - rhs as f64).abs();
            worst = worst.max(err / tol);
            if check.rhs != rhs || err >= tol {
                return outcome(false, format!("l={l} r={r}: lhs={} rhs={} (library rhs {})", check.lhs, rhs, check.rhs));
            }
        }
    }
    outcome(true, format!("16 cases, worst |lhs-rhs|/tol = {worst:.2e}"))
}

// 4. Euler products at L = 10^5
fn euler_products() -> Outcome {
    let p20 = euler_product(2, 0, 100_000).unwrap();
    let p21 = euler_product(2, 1, 100_000).unwrap();
    let p10 = euler_product(1, 0, 100_000).unwrap();
    let zeta2 = PI * PI / 6.0;
    let pass = (p20.partial - 1.3547).abs() <= 1e-3
        && (p21.partial - 0.7988).abs() <= 1e-3
        && (p10.partial - zeta2).abs() <= 1e-4
        && p10.contains(zeta2);
    outcome(pass, format!("P20={:.6} P21={:.6} P10={:.8} (pi^2/6={zeta2:.8})", p20.partial, p21.partial, p10.partial))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

// 5. Sato–Tate densities
fn densities() -> Outcome {
    let psi0 = psi_g2(0.0).unwrap();
    let phi0 = phi_g2(0.0).unwrap();
    let exact_phi0 = 256.0 / (15.0 * PI * PI);
    let mass = simpson(|x| phi_g2(x).unwrap(), -1.0, 1.0, 20_000);
    let mc1 = mc_density(1, 1_000_000, 1, &[0.0], 8).unwrap()[0].phi;
    let mc2 = mc_density(2, 10_000_000, 2, &[0.0], 8).unwrap()[0].phi;
    let rel1 = (mc1 / (2.0 / PI) - 1.0).abs();
    let rel2 = (mc2 / exact_phi0 - 1.0).abs();
    let pass = (psi0 - 64.0 / (15.0 * PI * PI)).abs() < 1e-8
        && (phi0 - exact_phi0).abs() < 1e-8
        && (mass - 1.0).abs() < 1e-6
        && rel1 < 0.02
        && rel2 < 0.02;
    outcome(
        pass,
        format!(
            "psi(0) err {:.1e}, integral-1 {:.1e}, MC g=1 {mc1:.5} ({:.2}%), MC g=2 {mc2:.5} ({:.2}%)",
            (psi0 - 64.0 / (15.0 * PI * PI)).abs(),
            mass - 1.0,
            100.0 * rel1,
            100.0 * rel2
        ),
    )
}

// 6. minimal conjugacy-class dimensions
fn class_dimensions() -> Outcome {
    for n in 2..=8u64 {
        let (d, _) = min_class_dim(n as u32, false).unwrap();
        if d != 4 * n - 4 {
            return outcome(false, format!("n={n}: min d = {d}, expected {}", 4 * n - 4));
        }
    }
    for n in 3..=8u64 {
        let (d, _) = min_class_dim(n as u32, true).unwrap();
        if d != 4 * n - 2 {
            return outcome(false, format!("n={n} trace zero: min d = {d}, expected {}", 4 * n - 2));
        }
    }
    let (d, p) = min_class_dim(2, true).unwrap();
    let pass = d == 4 && p.x == 1 && p.y == 1;
    outcome(pass, format!("4n-4 (n=2..8), 4n-2 (n=3..8), n=2 trace zero d={d} at x={} y={}", p.x, p.y))
}

fn distinct_primes(mut n: u64) -> u32 {
    let mut k = 0;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            k += 1;
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    k + (n > 1) as u32
}

fn oracle_histogram(archive: &TraceArchive, pred: impl Fn(usize, u64) -> bool) -> BTreeMap<u32, u64> {
    let mut h = BTreeMap::new();
    for (i, r) in archive.records.iter().enumerate() {
        if r.a1 != 0 && pred(i, r.p) {
            *h.entry(distinct_primes(r.a1.unsigned_abs())).or_insert(0) += 1;
        }
    }
    h
}

fn diff(got: &BTreeMap<u32, u64>, want: &BTreeMap<u32, u64>) -> String {
    let keys: std::collections::BTreeSet<u32> = got.keys().chain(want.keys()).copied().collect();
    keys.into_iter()
        .filter_map(|k| {
            let (g, w) = (got.get(&k).copied().unwrap_or(0), want.get(&k).copied().unwrap_or(0));
            (g != w).then(|| format!("nu={k}: {g} vs {w}"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

// 7. bit-exact histogram reproduction
fn histogram() -> Outcome {
    let a = archive();
    let left_want: BTreeMap<u32, u64> = [(0, 166), (1, 16787), (2, 40083), (3, 20214), (4, 1673)].into();
    let right_want: BTreeMap<u32, u64> = [(0, 54), (1, 12915), (2, 35388), (3, 22358), (4, 2833), (5, 9)].into();
    let left = nu_histogram(a, 0, LEFT);
    let right = nu_histogram(a, LEFT + 1, X_MAX);
    let oracle_ok = left == oracle_histogram(a, |_, p| p < LEFT) && right == oracle_histogram(a, |_, p| p > LEFT);
    let zeros = a.records.iter().filter(|r| r.a1 == 0 && r.p < LEFT).count();
    let mut detail = format!("p<2^20 {left:?}");
    if left != left_want {
        detail += &format!(" MISMATCH [{}], {zeros} zero traces", diff(&left, &left_want));
    }
    detail += &format!("; 2^20<p<2^21 {}", if right == right_want { "exact" } else { "MISMATCH" });
    if right != right_want {
        detail += &format!(" [{}]", diff(&right, &right_want));
    }
    if !oracle_ok {
        detail += "; library nu disagrees with trial division";
    }
    outcome(left == left_want && right == right_want && oracle_ok, detail)
}

// diagnostic for 7: where the published left panel actually stops
fn histogram_prefix() -> Outcome {
    let a = archive();
    let want: BTreeMap<u32, u64> = [(0, 166), (1, 16787), (2, 40083), (3, 20214), (4, 1673)].into();
    // records are good primes; bad primes 2, 19, 151 occupy 3 of the first 78,999 primes
    let prefix = oracle_histogram(a, |_, p| p <= 1_006_711);
    let count = a.records.iter().filter(|r| r.p <= 1_006_711).count();
    outcome(prefix == want, format!("good p <= 1,006,711 ({count} primes + 3 bad = first 78,999): {prefix:?}"))
}

fn naive_points(f: &[i64], p: u64) -> (u64, u64) {
    // N_1 and N_2 of y^2 = f(x), deg f = 5 (one point at infinity)
    let fm: Vec<u64> = f.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    let chi1 = |v: u64| -> i64 {
        if v == 0 {
            0
        } else if pow_mod(v, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    };
    let mut n1 = 1i64;
    for x in 0..p {
        let v = fm.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
        n1 += 1 + chi1(v);
    }
    // F_{p^2} = F_p[s]/(s^2 - nr)
    let nr = (2..p).find(|&v| chi1(v) == -1).unwrap();
    let mul = |(a, b): (u64, u64), (c, d): (u64, u64)| ((a * c + b * d % p * nr) % p, (a * d + b * c) % p);
    let mut n2 = 1i64;
    for x0 in 0..p {
        for x1 in 0..p {
            let x = (x0, x1);
            let v = fm.iter().rev().fold((0, 0), |acc, &c| {
                let m = mul(acc, x);
                ((m.0 + c) % p, m.1)
            });
            if v == (0, 0) {
                n2 += 1;
                continue;
            }
            // the norm is a square in F_p iff v is a square in F_{p^2}
            let norm = (v.0 * v.0 % p + p - v.1 * v.1 % p * nr % p) % p;
            n2 += 1 + chi1(norm);
        }
    }
    (n1 as u64, n2 as u64)
}

// 8. Weil polynomials and their roots
fn weil_roots() -> Outcome {
    let curve = CurveModel::j1();
    let primes: Vec<u64> = (3..).filter(|&p| is_prime(p) && !curve.is_bad_prime(p)).take(50).collect();
    let mut worst: f64 = 0.0;
    for &p in &primes {
        let (n1, n2) = naive_points(curve.coeffs(), p);
        let (pi, s1, s2) = (p as i128, pi128(p) + 1 - n1 as i128, pi128(p).pow(2) + 1 - n2 as i128);
        if (s1 * s1 - s2) % 2 != 0 {
            return outcome(false, format!("p={p}: non-integral e2"));
        }
        let e2 = (s1 * s1 - s2) / 2;
        let want = vec![1, -s1, e2, -pi * s1, pi * pi];
        let w = match curve.weil_polynomial(p, DEFAULT_BUDGET) {
            Ok(w) => w,
            Err(e) => return outcome(false, format!("p={p}: {e}")),
        };
        if w.coeffs != want {
            return outcome(false, format!("p={p}: {:?} vs brute force {want:?}", w.coeffs));
        }
        let roots = w.roots();
        let scale = (p as f64).powi(2);
        for r in &roots {
            worst = worst.max((r.norm() / (p as f64).sqrt() - 1.0).abs());
            if w.eval(*r).norm() > 1e-6 * scale {
                return outcome(false, format!("p={p}: root {r} does not annihilate P"));
            }
        }
        if roots.len() != 4 {
            return outcome(false, format!("p={p}: {} roots", roots.len()));
        }
    }
    outcome(
        worst < 1e-9,
        format!("{} good primes up to {}, max ||alpha|/sqrt(p)-1| = {worst:.1e}", primes.len(), primes.last().unwrap()),
    )
}

fn pi128(p: u64) -> i128 {
    p as i128
}

// 9. linear trend of pi_A(x, t) in sqrt(x)/log(x)
fn pi_trend() -> Outcome {
    let a = archive();
    let cps: Vec<u64> = default_checkpoints(a.x_max).into_iter().filter(|&c| c <= LEFT).collect();
    let mut parts = Vec::new();
    let mut pass = true;
    for t in [0, 1, -1] {
        let table = pi_a(a, t, &cps).unwrap();
        let fit = table.fit();
        pass &= fit.r2 > 0.98;
        parts.push(format!("t={t} R2={:.4}", fit.r2));
    }
    outcome(pass, format!("{} checkpoints 2^8..2^20: {}", cps.len(), parts.join(", ")))
}

// 10. determinism across worker counts
fn determinism() -> Outcome {
    let parallel = archive().to_bytes();
    let serial = trace_sweep(&CurveModel::j1(), X_MAX, 1).expect("serial sweep").to_bytes();
    outcome(parallel == serial, format!("{} archive bytes, workers 8 vs 1 {}", serial.len(), if parallel == serial { "identical" } else { "DIFFER" }))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, fn() -> Outcome, Option<Duration>);
    let min = |m: u64| Some(Duration::from_secs(60 * m));
    let criteria: [Criterion; 11] = [
        ("1", "closed-form vs enumeration", closed_forms, min(5)),
        ("2", "N_{l,t} brute force", n_counts, Some(Duration::from_secs(1))),
        ("3", "Kloosterman moment identity", kloosterman_moments, min(1)),
        ("4", "Euler products", euler_products, min(1)),
        ("5", "Sato-Tate densities", densities, min(10)),
        ("6", "minimal class dimensions", class_dimensions, Some(Duration::from_secs(1))),
        ("7", "nu histogram reproduction", histogram, None),
        ("7d", "diagnostic: histogram over the first 78,999 primes", histogram_prefix, None),
        ("8", "Weil-root property", weil_roots, min(1)),
        ("9", "pi_A(x,t) linear trend", pi_trend, None),
        ("10", "determinism across worker counts", determinism, None),
    ];
    let mut failed = Vec::new();
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let Outcome { mut pass, mut detail } = run();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                pass = false;
                detail += &format!("; over the {}s limit", limit.as_secs());
            }
        }
        println!("criterion {id:>3} {} {name} ({:.1}s): {detail}", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
