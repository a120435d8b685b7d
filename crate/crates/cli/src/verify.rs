//! Self-check suites run by `frobstat verify <suite>`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use clap::ValueEnum;
use frobstat::curves::trace_sweep;
use frobstat::matcount::{
    closed_count, crt_factorization_check, enumerate_trace_counts, f_stabilization_check, gsp_order,
    kloosterman_moment_check, min_class_dim, n_count,
};
use frobstat::quad::adaptive;
use frobstat::satotate::{phi_g1, phi_g2, psi_g2};
use frobstat::stats::nu_histogram;
use frobstat::{CurveModel, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Formulas,
    #[value(name = "appendixA")]
    AppendixA,
    Kloosterman,
    Density,
    HistogramSmall,
}

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Formulas => formulas(),
        Suite::AppendixA => appendix_a(),
        Suite::Kloosterman => kloosterman(),
        Suite::Density => density(),
        Suite::HistogramSmall => histogram_small(),
    }
}

fn formulas() -> Vec<Check> {
    let mut out = Vec::new();
    for (g, l) in [(1, 2), (1, 3), (1, 5), (1, 7), (1, 11), (1, 13), (2, 2), (2, 3)] {
        let name = format!("enumerated C(l,t) vs closed form, g={g} l={l}");
        match enumerate_trace_counts(g, l, DEFAULT_BUDGET) {
            Ok(table) => {
                let closed: Vec<u128> = (0..l as i64).map(|t| closed_count(g, l, t).unwrap()).collect();
                let order = gsp_order(g, l).unwrap();
                let pass = table.counts == closed && table.group_order == order;
                out.push(check(name, pass, format!("|C(l,0)|={} |G|={}", table.counts[0], table.group_order)));
            }
            Err(e) => out.push(check(name, false, e.to_string())),
        }
    }
    for l in [3u64, 5, 7, 11, 13] {
        let ok = (0..l as i64).all(|t| {
            let want = if t == 0 { (l - 1) * (l - 2) } else { (l - 2) * (l - 2) };
            n_count(l, t).ok() == Some(want)
        });
        out.push(check(format!("N_(l,t) brute force, l={l}"), ok, ""));
    }
    for (m1, m2, t) in [(2, 3, 1), (2, 3, 0), (3, 5, 2)] {
        let r = crt_factorization_check(1, m1, m2, t, DEFAULT_BUDGET);
        out.push(check(format!("CRT factorization m1={m1} m2={m2} t={t}"), r == Ok(true), format!("{r:?}")));
    }
    for (l, t) in [(2, 2), (2, 1)] {
        let r = f_stabilization_check(l, t, 2, DEFAULT_BUDGET);
        out.push(check(format!("F_t stabilization l={l} t={t}"), r == Ok(true), format!("{r:?}")));
    }
    out
}

fn appendix_a() -> Vec<Check> {
    let mut out = Vec::new();
    for n in 2..=8u64 {
        let (d, _) = min_class_dim(n as u32, false).unwrap();
        out.push(check(format!("min d, n={n}"), d == 4 * n - 4, format!("d={d} expected {}", 4 * n - 4)));
    }
    let (d, p) = min_class_dim(2, true).unwrap();
    out.push(check("min d trace zero, n=2", d == 4 && p.x == 1 && p.y == 1, format!("d={d} via x={} y={}", p.x, p.y)));
    for n in 3..=8u64 {
        let (d, _) = min_class_dim(n as u32, true).unwrap();
        out.push(check(format!("min d trace zero, n={n}"), d == 4 * n - 2, format!("d={d} expected {}", 4 * n - 2)));
    }
    out
}

fn kloosterman() -> Vec<Check> {
    let mut out = Vec::new();
    for l in [3, 5, 7, 11] {
        for r in 2..=5 {
            let name = format!("moment identity l={l} r={r}");
            match kloosterman_moment_check(l, r, DEFAULT_BUDGET) {
                Ok(c) => out.push(check(name, c.pass, format!("lhs={:.9} rhs={}", c.lhs, c.rhs))),
                Err(e) => out.push(check(name, false, e.to_string())),
            }
        }
    }
    out
}

fn density() -> Vec<Check> {
    let psi0 = psi_g2(0.0).unwrap();
    let phi0 = phi_g2(0.0).unwrap();
    let int2 = adaptive(&mut |x| phi_g2(x).unwrap(), -1.0, 0.0, 1e-10) + adaptive(&mut |x| phi_g2(x).unwrap(), 0.0, 1.0, 1e-10);
    let int1 = adaptive(&mut |x| phi_g1(x).unwrap(), -1.0, 1.0, 1e-12);
    let psi_want = 64.0 / (15.0 * PI * PI);
    vec![
        check("Psi(0) = 64/(15 pi^2)", (psi0 - psi_want).abs() < 1e-8, format!("{psi0:.12}")),
        check("Phi(0) = 256/(15 pi^2)", (phi0 - 4.0 * psi_want).abs() < 1e-8, format!("{phi0:.12}")),
        check("integral of Phi, g=2", (int2 - 1.0).abs() < 1e-6, format!("{int2:.12}")),
        check("integral of Phi, g=1", (int1 - 1.0).abs() < 1e-6, format!("{int1:.12}")),
    ]
}

/// Pinned from an independent point-count run: J1, good p < 2^16.
const SMALL_HISTOGRAM: [(u32, u64); 5] = [(0, 56), (1, 1998), (2, 3436), (3, 994), (4, 32)];
const SMALL_ZERO_TRACES: usize = 23;

fn histogram_small() -> Vec<Check> {
    let archive = match trace_sweep(&CurveModel::j1(), 1 << 16, 1) {
        Ok(a) => a,
        Err(e) => return vec![check("sweep J1 to 2^16", false, e.to_string())],
    };
    let hist = nu_histogram(&archive, 0, 1 << 16);
    let want: BTreeMap<u32, u64> = SMALL_HISTOGRAM.into_iter().collect();
    let zeros = archive.records.iter().filter(|r| r.a1 == 0).count();
    vec![
        check("nu histogram J1, p < 2^16", hist == want, format!("{hist:?}")),
        check("zero traces J1, p < 2^16", zeros == SMALL_ZERO_TRACES, format!("{zeros}")),
    ]
}
