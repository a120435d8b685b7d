use std::collections::BTreeMap;
use std::sync::OnceLock;

use frobstat::curves::trace_sweep;
use frobstat::satotate::{empirical_density, phi_g2};
use frobstat::stats::{nu_histogram, pi_a};
use frobstat::{CurveModel, TraceArchive};

const X: u64 = 1 << 18;

fn j1() -> &'static TraceArchive {
    static A: OnceLock<TraceArchive> = OnceLock::new();
    A.get_or_init(|| trace_sweep(&CurveModel::j1(), X, 2).unwrap())
}

// Values below come from a separate C point counter (naive Legendre-symbol
// sums), not from this crate.
#[test]
fn j1_to_2_18_matches_reference_counter() {
    let a = j1();
    assert_eq!(a.records.len(), 22997);
    assert_eq!(a.records.iter().filter(|r| r.a1 == 0).count(), 37);
    let want: BTreeMap<u32, u64> = [(0, 99), (1, 5760), (2, 12061), (3, 4795), (4, 245)].into();
    assert_eq!(nu_histogram(a, 0, X), want);
    assert_eq!(*pi_a(a, 0, &[X]).unwrap().values.last().unwrap(), 37);
}

#[test]
fn j1_normalised_traces_follow_phi() {
    let hist = empirical_density(j1(), 20).unwrap();
    let reference = hist.reference_masses(|x| phi_g2(x).unwrap());
    let worst = hist.masses.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 0.03, "max bin discrepancy {worst}");
    // diagnostic only: finite samples and the curve itself can tilt the histogram
    println!("max bin discrepancy {worst:.4}, mirror-bin asymmetry {:.4}", hist.asymmetry());
}

#[test]
fn archive_survives_disk_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j1.frtr");
    j1().save(&path).unwrap();
    assert_eq!(&TraceArchive::load(&path).unwrap(), j1());
    assert_eq!(std::fs::read(&path).unwrap(), j1().to_bytes());
}

fn naive_trace(f: &[i64], p: u64) -> i64 {
    let p = p as i64;
    let mut is_sq = vec![false; p as usize];
    for y in 1..p {
        is_sq[(y * y % p) as usize] = true;
    }
    let mut n = 0;
    for x in 0..p {
        let v = f.iter().rev().fold(0, |acc, &c| (acc * x + c).rem_euclid(p));
        n += if v == 0 { 1 } else if is_sq[v as usize] { 2 } else { 0 };
    }
    // odd degree: one point at infinity
    p + 1 - (n + 1)
}

#[test]
fn higher_genus_traces_match_naive_count() {
    for curve in [CurveModel::j2(), CurveModel::j3()] {
        let archive = trace_sweep(&curve, 400, 1).unwrap();
        assert!(archive.records.len() > 50);
        for r in &archive.records {
            assert_eq!(r.a1, naive_trace(curve.coeffs(), r.p), "{} at p={}", curve.label(), r.p);
            assert!((r.a1 as f64).abs() <= 2.0 * curve.genus() as f64 * (r.p as f64).sqrt());
        }
    }
}
