//! Character-sum kernel: for `f` over `F_p`, count the `x` with `f(x)` a
//! nonzero square and the `x` with `f(x) = 0`.
//!
//! The values `f(x)` are walked with forward differences in `LANES`
//! interleaved progressions (`x = j + LANES*b`), so each step costs `deg f`
//! modular additions per lane and no multiplications. The lanes are
//! independent, which lets the compiler vectorise the update.

use crate::arith::{add_mod, mul_mod};

const LANES: usize = 16;

/// `(S, Z)` where `S = #{x in F_p : f(x) is a nonzero square}` and
/// `Z = #{x in F_p : f(x) = 0}`. `f` is reduced mod `p`, constant term first;
/// `squares` is the bitset from [`crate::ffield::squares_bitset`].
pub fn square_and_zero_counts(f: &[u64], p: u64, squares: &[u64]) -> (u64, u64) {
    let rows = f.len();
    let fast = p < (1 << 31) && p as usize > 4 * LANES * rows;
    if !fast {
        return horner_counts(f, p, 0, p, squares);
    }
    match rows {
        2 => diff_counts::<2>(f, p, squares),
        3 => diff_counts::<3>(f, p, squares),
        4 => diff_counts::<4>(f, p, squares),
        5 => diff_counts::<5>(f, p, squares),
        6 => diff_counts::<6>(f, p, squares),
        7 => diff_counts::<7>(f, p, squares),
        8 => diff_counts::<8>(f, p, squares),
        9 => diff_counts::<9>(f, p, squares),
        10 => diff_counts::<10>(f, p, squares),
        11 => diff_counts::<11>(f, p, squares),
        _ => horner_counts(f, p, 0, p, squares),
    }
}

#[inline]
fn is_square_bit(squares: &[u64], a: u64) -> u64 {
    (squares[(a >> 6) as usize] >> (a & 63)) & 1
}

pub(crate) fn horner(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

fn horner_counts(f: &[u64], p: u64, from: u64, to: u64, squares: &[u64]) -> (u64, u64) {
    let (mut s, mut z) = (0, 0);
    for x in from..to {
        let v = horner(f, x, p);
        s += is_square_bit(squares, v);
        z += (v == 0) as u64;
    }
    (s, z)
}

/// `N` is the number of difference rows, `deg f + 1`.
fn diff_counts<const N: usize>(f: &[u64], p: u64, squares: &[u64]) -> (u64, u64) {
    let p32 = p as u32;
    let mut diffs = [[0u32; LANES]; N];
    for j in 0..LANES {
        let mut vals = [0u64; N];
        for (i, v) in vals.iter_mut().enumerate() {
            *v = horner(f, (j + LANES * i) as u64 % p, p);
        }
        for row in diffs.iter_mut() {
            row[j] = vals[0] as u32;
            for i in 0..N - 1 {
                vals[i] = (vals[i + 1] + p - vals[i]) % p;
            }
        }
    }

    // every value is < p, so this slice makes the lookup bounds check provably dead
    let sq = &squares[..=(p32 >> 6) as usize];
    let blocks = p / LANES as u64;
    let (mut s, mut z) = (0u64, 0u64);
    for _ in 0..blocks {
        for &a in diffs[0].iter() {
            s += sq[(a >> 6) as usize] >> (a & 63) & 1;
            z += (a == 0) as u64;
        }
        for k in 0..N - 1 {
            for j in 0..LANES {
                let t = diffs[k][j] + diffs[k + 1][j];
                diffs[k][j] = t.min(t.wrapping_sub(p32));
            }
        }
    }
    let (rs, rz) = horner_counts(f, p, blocks * LANES as u64, p, squares);
    (s + rs, z + rz)
}
