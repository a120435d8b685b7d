//! Curve spec files:
//!
//! ```text
//! # genus 2 example
//! label=J1
//! genus=2
//! f=1,-1,0,0,0,1
//! bad=2,19,151
//! ```
//!
//! `f` lists coefficients constant term first; `bad` is optional and
//! replaces the discriminant-derived bad-prime set.

use std::collections::BTreeSet;

use frobstat::CurveModel;

pub fn parse_curve_spec(text: &str) -> Result<CurveModel, String> {
    let (mut label, mut genus, mut coeffs, mut bad) = (None, None, None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad_value = |what: &str| format!("line {}: bad {what} {value:?}", i + 1);
        match key {
            "label" => label = Some(value.to_string()),
            "genus" => genus = Some(value.parse::<u32>().map_err(|_| bad_value("genus"))?),
            "f" => coeffs = Some(parse_list::<i64>(value).ok_or_else(|| bad_value("coefficient list"))?),
            "bad" => bad = Some(parse_list::<u64>(value).ok_or_else(|| bad_value("prime list"))?),
            other => return Err(format!("line {}: unknown key {other:?}", i + 1)),
        }
    }
    let genus = genus.ok_or("missing genus=")?;
    let coeffs = coeffs.ok_or("missing f=")?;
    let bad: Option<BTreeSet<u64>> = bad.map(|v| v.into_iter().collect());
    CurveModel::new(label.unwrap_or_else(|| "custom".into()), genus, coeffs, bad).map_err(|e| e.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}
