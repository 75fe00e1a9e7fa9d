use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford::Rational;

/// Exponent `z = re + i·im`, ordered by real part first.
pub type Exponent = (Rational, Rational);

/// One element `(z, p)` of an index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTerm {
    pub re: Rational,
    pub im: Rational,
    pub p: u32,
}

impl IndexTerm {
    pub fn new(re: Rational, im: Rational, p: u32) -> Self {
        Self { re, im, p }
    }

    pub fn real(re: Rational, p: u32) -> Self {
        Self::new(re, Rational::zero(), p)
    }
}

/// Infimum of the real parts of an index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Infimum {
    /// Attained by a stored term.
    Value(Rational),
    /// Nonempty, but nothing is stored below the cutoff.
    AtLeast(Rational),
    /// The empty set.
    Infinite,
}

impl Infimum {
    /// Sound lower bound, `None` for `+∞`.
    pub fn lower(self) -> Option<Rational> {
        match self {
            Infimum::Value(v) | Infimum::AtLeast(v) => Some(v),
            Infimum::Infinite => None,
        }
    }
}

impl fmt::Display for Infimum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infimum::Value(v) => write!(f, "{v}"),
            Infimum::AtLeast(v) => write!(f, ">={v}"),
            Infimum::Infinite => write!(f, "inf"),
        }
    }
}

/// Index set truncated at `cutoff`: every element with real part below the
/// cutoff is stored, closed under `(z,p) → (z,q≤p)` and `(z,p) → (z+1,p)`.
///
/// Only the largest log power is stored for each exponent; smaller powers are
/// implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    terms: BTreeMap<Exponent, u32>,
    cutoff: Rational,
    empty: bool,
}

impl IndexSet {
    pub fn empty() -> Self {
        Self { terms: BTreeMap::new(), cutoff: Rational::zero(), empty: true }
    }

    /// `ℕ = {(j, 0) : j ≥ 0}` below `cutoff`.
    pub fn naturals(cutoff: Rational) -> Self {
        Self::from_terms([IndexTerm::real(Rational::zero(), 0)], cutoff)
    }

    /// Smallest index set containing the generators, materialised below `cutoff`.
    /// An empty generator list gives the empty set.
    pub fn from_terms(gens: impl IntoIterator<Item = IndexTerm>, cutoff: Rational) -> Self {
        let raw: Vec<IndexTerm> = gens.into_iter().collect();
        if raw.is_empty() {
            return Self::empty();
        }
        let mut map = BTreeMap::new();
        for t in raw {
            merge_max(&mut map, (t.re, t.im), t.p);
        }
        Self::canonical(map, cutoff)
    }

    /// Nonempty set whose elements all lie at or above `cutoff`.
    pub fn beyond(cutoff: Rational) -> Self {
        Self { terms: BTreeMap::new(), cutoff, empty: false }
    }

    fn canonical(raw: BTreeMap<Exponent, u32>, cutoff: Rational) -> Self {
        let mut pending: BTreeMap<Exponent, u32> =
            raw.into_iter().filter(|(z, _)| z.0 < cutoff).collect();
        let mut terms = BTreeMap::new();
        while let Some((z, p)) = pending.pop_first() {
            merge_max(&mut terms, z, p);
            let next = (z.0 + Rational::from_integer(1), z.1);
            if next.0 < cutoff {
                merge_max(&mut pending, next, p);
            }
        }
        Self { terms, cutoff, empty: false }
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn cutoff(&self) -> Option<Rational> {
        (!self.empty).then_some(self.cutoff)
    }

    /// Stored exponents with their largest log power.
    pub fn exponents(&self) -> impl Iterator<Item = (Exponent, u32)> + '_ {
        self.terms.iter().map(|(z, p)| (*z, *p))
    }

    /// Every stored element, all log powers spelled out.
    pub fn elements(&self) -> Vec<IndexTerm> {
        self.terms
            .iter()
            .flat_map(|(z, p)| (0..=*p).map(move |q| IndexTerm::new(z.0, z.1, q)))
            .collect()
    }

    pub fn contains(&self, t: IndexTerm) -> bool {
        self.terms.get(&(t.re, t.im)).is_some_and(|p| t.p <= *p)
    }

    /// Largest log power at `z`, if `z` is stored.
    pub fn max_log(&self, z: Exponent) -> Option<u32> {
        self.terms.get(&z).copied()
    }

    pub fn inf(&self) -> Infimum {
        if self.empty {
            Infimum::Infinite
        } else if let Some(((re, _), _)) = self.terms.iter().min_by(|a, b| a.0 .0.cmp(&b.0 .0)) {
            Infimum::Value(*re)
        } else {
            Infimum::AtLeast(self.cutoff)
        }
    }

    /// Re-truncates at a lower cutoff.
    pub fn truncate(&self, cutoff: Rational) -> Self {
        if self.empty || cutoff >= self.cutoff {
            return self.clone();
        }
        Self::canonical(self.terms.clone(), cutoff)
    }

    /// True when canonicalising again changes nothing.
    pub fn is_canonical(&self) -> bool {
        self.empty && self.terms.is_empty()
            || !self.empty && Self::canonical(self.terms.clone(), self.cutoff) == *self
    }
}

fn merge_max(map: &mut BTreeMap<Exponent, u32>, z: Exponent, p: u32) {
    let e = map.entry(z).or_insert(p);
    *e = (*e).max(p);
}

/// `inf E` as a lower bound, `None` for `+∞`.
pub fn inf_set(e: &IndexSet) -> Infimum {
    e.inf()
}

/// Extended union `E ∪̄ F = E ∪ F ∪ {(z, p+p'+1) : (z,p) ∈ E, (z,p') ∈ F}`.
pub fn ext_union(e: &IndexSet, f: &IndexSet) -> IndexSet {
    if e.empty {
        return f.clone();
    }
    if f.empty {
        return e.clone();
    }
    let cutoff = e.cutoff.min(f.cutoff);
    let mut raw = BTreeMap::new();
    for (z, p) in e.terms.iter().chain(f.terms.iter()) {
        merge_max(&mut raw, *z, *p);
    }
    for (z, p) in &e.terms {
        if let Some(q) = f.terms.get(z) {
            merge_max(&mut raw, *z, p + q + 1);
        }
    }
    IndexSet::canonical(raw, cutoff)
}

/// `E + F = {(z+z', p+p')}`; empty if either summand is.
pub fn set_sum(e: &IndexSet, f: &IndexSet) -> IndexSet {
    if e.empty || f.empty {
        return IndexSet::empty();
    }
    let le = e.inf().lower().expect("nonempty");
    let lf = f.inf().lower().expect("nonempty");
    let cutoff = (e.cutoff + lf).min(f.cutoff + le);
    let mut raw = BTreeMap::new();
    for (z, p) in &e.terms {
        for (w, q) in &f.terms {
            let s = (z.0 + w.0, z.1 + w.1);
            if s.0 < cutoff {
                merge_max(&mut raw, s, p + q);
            }
        }
    }
    IndexSet::canonical(raw, cutoff)
}

/// `E + c`.
pub fn shift(e: &IndexSet, c: Rational) -> IndexSet {
    if e.empty {
        return IndexSet::empty();
    }
    IndexSet {
        terms: e.terms.iter().map(|(z, p)| ((z.0 + c, z.1), *p)).collect(),
        cutoff: e.cutoff + c,
        empty: false,
    }
}

/// `{(z/d, p)}` for a positive integer `d`, re-closed under `z → z+1`.
pub fn scale_down(e: &IndexSet, d: u32) -> IndexSet {
    if e.empty {
        return IndexSet::empty();
    }
    let d = Rational::from_integer(d as i128);
    let raw = e.terms.iter().map(|(z, p)| ((z.0 / d, z.1 / d), *p)).collect();
    IndexSet::canonical(raw, e.cutoff / d)
}

fn fmt_q(q: &Rational) -> String {
    q.to_string()
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(z, p)| {
                if z.1.is_zero() {
                    format!("({},{})", fmt_q(&z.0), p)
                } else {
                    format!("({},{},{})", fmt_q(&z.0), fmt_q(&z.1), p)
                }
            })
            .collect();
        write!(f, "{} [cutoff {}]", parts.join(" "), fmt_q(&self.cutoff))
    }
}

/// Serializable view of an [`IndexSet`]; rationals are written as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSetRecord {
    pub empty: bool,
    pub cutoff: Option<String>,
    pub inf: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub re: String,
    pub im: String,
    pub p: u32,
}

impl From<&IndexSet> for IndexSetRecord {
    fn from(s: &IndexSet) -> Self {
        Self {
            empty: s.empty,
            cutoff: s.cutoff().map(|c| fmt_q(&c)),
            inf: s.inf().to_string(),
            terms: s
                .terms
                .iter()
                .map(|(z, p)| TermRecord { re: fmt_q(&z.0), im: fmt_q(&z.1), p: *p })
                .collect(),
        }
    }
}
