//! Weil polynomials from point counts.
//!
//! With `s_i = p^i + 1 - N_i` the power sums of the `2g` Weil roots, Newton's
//! identities recover the elementary symmetric functions `e_1..e_g`; the
//! functional equation then fixes the upper half of the coefficients.

use num_complex::Complex64;

/// `P(X) = X^{2g} + c_1 X^{2g-1} + ... + c_{2g}` with `c_k = (-1)^k e_k` and
/// `c_{2g-k} = p^{g-k} c_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilPolynomial {
    pub p: u64,
    pub genus: u32,
    /// `c_0 = 1, c_1, ..., c_{2g}`, leading coefficient first.
    pub coeffs: Vec<i128>,
}

impl WeilPolynomial {
    /// Build from `N_1..N_g` (point counts over `F_{p^i}`).
    ///
    /// Panics if Newton's identities produce a non-integer, which cannot
    /// happen for genuine point counts.
    pub fn from_point_counts(p: u64, counts: &[u64]) -> Self {
        let g = counts.len();
        let pp = p as i128;
        let power_sums: Vec<i128> = counts
            .iter()
            .enumerate()
            .map(|(i, &n)| pp.pow(i as u32 + 1) + 1 - n as i128)
            .collect();
        let mut e = vec![1i128];
        for k in 1..=g {
            let mut acc = 0i128;
            for i in 1..=k {
                let term = e[k - i] * power_sums[i - 1];
                acc += if i % 2 == 1 { term } else { -term };
            }
            assert!(acc % k as i128 == 0, "non-integral e_{k}: point counts are inconsistent");
            e.push(acc / k as i128);
        }
        let mut coeffs = vec![0i128; 2 * g + 1];
        for k in 0..=g {
            let c = if k % 2 == 0 { e[k] } else { -e[k] };
            coeffs[k] = c;
            coeffs[2 * g - k] = pp.pow((g - k) as u32) * c;
        }
        WeilPolynomial { p, genus: g as u32, coeffs }
    }

    /// The Frobenius trace `e_1 = -c_1`.
    pub fn trace(&self) -> i64 {
        (-self.coeffs[1]) as i64
    }

    /// `c_2, ..., c_g`: the remaining independent coefficients.
    pub fn higher(&self) -> Vec<i64> {
        self.coeffs[2..=self.genus as usize].iter().map(|&c| c as i64).collect()
    }

    /// The real polynomial `h` of degree `g` with `P(X) = X^g h(X + p/X)`,
    /// leading coefficient first.
    pub fn real_trace_polynomial(&self) -> Vec<i128> {
        let g = self.genus as usize;
        let pp = self.p as i128;
        // Dickson polynomials D_k(Y) = X^k + (p/X)^k, constant term first.
        let mut dickson: Vec<Vec<i128>> = vec![vec![2], vec![0, 1]];
        for k in 2..=g {
            let mut next = vec![0i128; k + 1];
            for (i, &c) in dickson[k - 1].iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, &c) in dickson[k - 2].iter().enumerate() {
                next[i] -= pp * c;
            }
            dickson.push(next);
        }
        // h(Y) = c_g + sum_{k=1}^{g} c_{g-k} D_k(Y)
        let mut h = vec![0i128; g + 1];
        h[0] = self.coeffs[g];
        for k in 1..=g {
            for (i, &d) in dickson[k].iter().enumerate() {
                h[i] += self.coeffs[g - k] * d;
            }
        }
        h.reverse();
        h
    }

    /// The `2g` complex roots. Each root `β` of `h` gives the pair of roots of
    /// `X^2 - βX + p`.
    pub fn roots(&self) -> Vec<Complex64> {
        let h: Vec<f64> = self.real_trace_polynomial().iter().map(|&c| c as f64).collect();
        let p = Complex64::new(self.p as f64, 0.0);
        let mut out = Vec::with_capacity(2 * self.genus as usize);
        for beta in poly_roots(&h) {
            let disc = (beta * beta - 4.0 * p).sqrt();
            out.push((beta + disc) / 2.0);
            out.push((beta - disc) / 2.0);
        }
        out
    }

    /// `max_j | |α_j| / sqrt(p) - 1 |` over the complex roots.
    pub fn max_root_modulus_deviation(&self) -> f64 {
        let sp = (self.p as f64).sqrt();
        self.roots().iter().map(|a| (a.norm() / sp - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Evaluate `P` at a complex point.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c as f64)
    }
}

/// Roots of a real polynomial (leading coefficient first, nonzero), by the
/// closed form up to degree 2 and Durand–Kerner iteration otherwise.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    match n {
        0 => vec![],
        1 => vec![Complex64::new(-monic[1], 0.0)],
        2 => {
            let (b, c) = (monic[1], monic[2]);
            let disc = Complex64::new(b * b - 4.0 * c, 0.0).sqrt();
            // avoid cancellation
            let q = if b >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
            if q.norm() == 0.0 {
                vec![Complex64::new(0.0, 0.0); 2]
            } else {
                vec![q, c / q]
            }
        }
        _ => durand_kerner(&monic),
    }
}

fn durand_kerner(monic: &[f64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let eval = |z: Complex64| monic.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}
