use std::collections::BTreeMap;
use std::str::FromStr;

use crate::clifford::Rational;
use crate::error::{Error, Result};

use super::family::IndexFamily;
use super::set::{shift, IndexSet, IndexTerm};

/// Contents of an index-family text file.
///
/// ```text
/// # comment
/// k = 3
/// b = 1
/// cutoff = 6
/// E.ff  = N
/// E.lf  = empty
/// E.bkf = (0,0) (1/2,1) (1,2,0)
/// F.rf  = N+1/2
/// ```
///
/// Tuples are `(re,p)` or `(re,im,p)`. `N+q` is `ℕ` shifted by `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFile {
    pub k: Option<u32>,
    pub b: Option<u32>,
    pub cutoff: Rational,
    pub families: BTreeMap<String, IndexFamily>,
}

impl FamilyFile {
    pub fn family(&self, name: &str) -> Result<&IndexFamily> {
        self.families
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("no family `{name}` in input")))
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses a rational such as `-3/2`, `4` or `0.5`.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = i128::from_str(n.trim()).map_err(|e| format!("bad numerator `{n}`: {e}"))?;
        let d = i128::from_str(d.trim()).map_err(|e| format!("bad denominator `{d}`: {e}"))?;
        if d == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 18 {
            return Err(format!("too many decimals in `{s}`"));
        }
        let neg = int.trim_start().starts_with('-');
        let i = if int.is_empty() || int == "-" { 0 } else { i128::from_str(int).map_err(|e| e.to_string())? };
        let f = i128::from_str(frac).map_err(|e| format!("bad decimal `{s}`: {e}"))?;
        let den = 10i128.pow(digits);
        let num = i.abs() * den + f;
        return Ok(Rational::new(if neg { -num } else { num }, den));
    }
    i128::from_str(s).map(Rational::from_integer).map_err(|e| format!("bad number `{s}`: {e}"))
}

fn parse_set(value: &str, cutoff: Rational, line: usize) -> Result<IndexSet> {
    let v = value.trim();
    if v == "empty" {
        return Ok(IndexSet::empty());
    }
    if let Some(rest) = v.strip_prefix('N') {
        let rest = rest.trim();
        if rest.is_empty() {
            return Ok(IndexSet::naturals(cutoff));
        }
        let c = rest
            .strip_prefix('+')
            .ok_or_else(|| perr(line, format!("expected `N+q`, got `{v}`")))
            .and_then(|r| parse_rational(r).map_err(|m| perr(line, m)))?;
        return Ok(shift(&IndexSet::naturals(cutoff - c), c));
    }
    let mut terms = Vec::new();
    let mut rest = v;
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| perr(line, format!("expected `(` in `{v}`")))?;
        let close = open.find(')').ok_or_else(|| perr(line, "unclosed tuple"))?;
        let fields: Vec<&str> = open[..close].split(',').collect();
        let pf = |s: &str| parse_rational(s).map_err(|m| perr(line, m));
        let pp = |s: &str| u32::from_str(s.trim()).map_err(|e| perr(line, format!("bad log power `{s}`: {e}")));
        let t = match fields.as_slice() {
            [re, p] => IndexTerm::real(pf(re)?, pp(p)?),
            [re, im, p] => IndexTerm::new(pf(re)?, pf(im)?, pp(p)?),
            _ => return Err(perr(line, format!("tuple needs 2 or 3 fields: `({})`", &open[..close]))),
        };
        terms.push(t);
        rest = open[close + 1..].trim_start();
    }
    if terms.is_empty() {
        return Err(perr(line, "empty right-hand side"));
    }
    Ok(IndexSet::from_terms(terms, cutoff))
}

/// Parses the text format documented on [`FamilyFile`].
pub fn parse_families(text: &str) -> Result<FamilyFile> {
    let mut k = None;
    let mut b = None;
    let mut cutoff = Rational::from_integer(6);
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (lhs, rhs) = body
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected `name = value`, got `{body}`")))?;
        let lhs = lhs.trim();
        match lhs {
            "k" | "b" => {
                let n = u32::from_str(rhs.trim()).map_err(|e| perr(line, format!("bad {lhs}: {e}")))?;
                if lhs == "k" {
                    if n < 2 {
                        return Err(perr(line, "k must be at least 2"));
                    }
                    k = Some(n);
                } else {
                    b = Some(n);
                }
            }
            "cutoff" => {
                cutoff = parse_rational(rhs).map_err(|m| perr(line, m))?;
            }
            _ => {
                let (fam, face) = lhs
                    .split_once('.')
                    .ok_or_else(|| perr(line, format!("expected `FAMILY.face`, got `{lhs}`")))?;
                if fam.is_empty() || face.is_empty() {
                    return Err(perr(line, format!("bad key `{lhs}`")));
                }
                pending.push((line, fam.to_string(), face.to_string(), rhs.to_string()));
            }
        }
    }
    // sets are built after the cutoff is known, wherever it appears
    let mut families: BTreeMap<String, IndexFamily> = BTreeMap::new();
    for (line, fam, face, rhs) in pending {
        let set = parse_set(&rhs, cutoff, line)?;
        let entry = families.entry(fam).or_default();
        if entry.get(&face).is_ok() {
            return Err(perr(line, format!("face `{face}` given twice")));
        }
        entry.insert(&face, set);
    }
    Ok(FamilyFile { k, b, cutoff, families })
}
