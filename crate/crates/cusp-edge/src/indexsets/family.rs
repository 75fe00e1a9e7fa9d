use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::Rational;
use crate::error::{invalid, Error, Result};

use super::set::{ext_union, scale_down, set_sum, shift, IndexSet, IndexSetRecord, Infimum};

/// Face vocabulary of the double space.
pub const DOUBLE_FACES: [&str; 4] = ["lf", "rf", "bkf", "ff"];
/// Face vocabulary of the heat space.
pub const HEAT_FACES: [&str; 6] = ["lf", "rf", "bkf", "ff", "tf", "bf"];

/// Index sets attached to the boundary hypersurfaces of a manifold with corners.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IndexFamily {
    sets: BTreeMap<String, IndexSet>,
}

impl IndexFamily {
    pub fn new() -> Self {
        Self::default()
    }

    /// Family over the given faces, every set empty.
    pub fn empty_on(faces: &[&str]) -> Self {
        Self { sets: faces.iter().map(|f| (f.to_string(), IndexSet::empty())).collect() }
    }

    pub fn with(mut self, face: &str, set: IndexSet) -> Self {
        self.sets.insert(face.to_string(), set);
        self
    }

    pub fn insert(&mut self, face: &str, set: IndexSet) {
        self.sets.insert(face.to_string(), set);
    }

    pub fn get(&self, face: &str) -> Result<&IndexSet> {
        self.sets
            .get(face)
            .ok_or_else(|| Error::InvalidInput(format!("index family has no face `{face}`")))
    }

    pub fn faces(&self) -> impl Iterator<Item = (&str, &IndexSet)> {
        self.sets.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Checks that every face of `vocabulary` is present and nothing else.
    pub fn validate(&self, vocabulary: &[&str]) -> Result<()> {
        for f in vocabulary {
            self.get(f)?;
        }
        for k in self.sets.keys() {
            if !vocabulary.contains(&k.as_str()) {
                return invalid(format!("unknown face `{k}`"));
            }
        }
        Ok(())
    }

    pub fn records(&self) -> BTreeMap<String, IndexSetRecord> {
        self.sets.iter().map(|(k, v)| (k.clone(), IndexSetRecord::from(v))).collect()
    }

    /// Largest `cutoff − inf` over the nonempty members; a cutoff for ℕ that
    /// never limits sums with members of this family.
    fn naturals_cutoff(&self) -> Rational {
        self.sets
            .values()
            .filter_map(|s| Some(s.cutoff()? - s.inf().lower()?))
            .max()
            .unwrap_or_else(|| Rational::from_integer(1))
    }
}

impl fmt::Display for IndexFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.sets {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// b-map data: `e[g][h]` is the exponent of the defining function of face `h`
/// of the codomain pulled back to face `g` of the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMapData {
    pub domain: Vec<String>,
    pub codomain: Vec<String>,
    pub exponents: Vec<Vec<u32>>,
}

impl BMapData {
    pub fn new(domain: &[&str], codomain: &[&str], exponents: Vec<Vec<u32>>) -> Result<Self> {
        if exponents.len() != domain.len() || exponents.iter().any(|r| r.len() != codomain.len()) {
            return invalid("exponent matrix does not match the face lists");
        }
        Ok(Self {
            domain: domain.iter().map(|s| s.to_string()).collect(),
            codomain: codomain.iter().map(|s| s.to_string()).collect(),
            exponents,
        })
    }
}

fn lower(s: &IndexSet) -> Option<Rational> {
    s.inf().lower()
}

/// Pullback `f^#(E)(G) = {(Σ_H e(G,H) z_H, Σ_H p_H)}` over faces `H` with
/// `e(G,H) ≠ 0`; `ℕ` when that row vanishes.
pub fn pullback_family(f: &BMapData, e: &IndexFamily) -> Result<IndexFamily> {
    let sets: Vec<&IndexSet> = f.codomain.iter().map(|h| e.get(h)).collect::<Result<_>>()?;
    let n_cut = e.naturals_cutoff();
    let mut out = IndexFamily::new();
    for (g, row) in f.domain.iter().zip(&f.exponents) {
        let active: Vec<(u32, &IndexSet)> =
            row.iter().zip(&sets).filter(|(m, _)| **m > 0).map(|(m, s)| (*m, *s)).collect();
        if active.is_empty() {
            out.insert(g, IndexSet::naturals(n_cut));
            continue;
        }
        if active.iter().any(|(_, s)| s.is_empty()) {
            out.insert(g, IndexSet::empty());
            continue;
        }
        let mut acc: Option<IndexSet> = None;
        for (m, s) in &active {
            let scaled = scale_up(s, *m);
            acc = Some(match acc {
                None => scaled,
                Some(a) => set_sum(&a, &scaled),
            });
        }
        out.insert(g, acc.expect("at least one active face"));
    }
    Ok(out)
}

/// `{(m z, p)}`, exact multiple of an index set (no extra closure is lost: the
/// result is re-closed under `z → z+1`).
fn scale_up(s: &IndexSet, m: u32) -> IndexSet {
    if m == 1 || s.is_empty() {
        return s.clone();
    }
    let mq = Rational::from_integer(m as i128);
    let gens: Vec<_> = s
        .exponents()
        .map(|(z, p)| super::set::IndexTerm::new(z.0 * mq, z.1 * mq, p))
        .collect();
    let cutoff = s.cutoff().expect("nonempty") * mq;
    if gens.is_empty() {
        return IndexSet::beyond(cutoff);
    }
    IndexSet::from_terms(gens, cutoff)
}

/// Pushforward `f_#(E)(H) = ∪̄_{G : e(G,H) > 0} {(z/e(G,H), p) : (z,p) ∈ E(G)}`.
///
/// Requires `inf E(G) > 0` for every face `G` whose interior maps to the
/// interior of the codomain (an all-zero row).
pub fn pushforward_family(f: &BMapData, e: &IndexFamily) -> Result<IndexFamily> {
    for (g, row) in f.domain.iter().zip(&f.exponents) {
        if row.iter().all(|m| *m == 0) {
            if let Some(l) = lower(e.get(g)?) {
                if l <= Rational::from_integer(0) {
                    return Err(Error::Divergent(format!(
                        "pushforward needs inf E({g}) > 0, got {}",
                        e.get(g)?.inf()
                    )));
                }
            }
        }
    }
    let mut out = IndexFamily::new();
    for (j, h) in f.codomain.iter().enumerate() {
        let mut acc = IndexSet::empty();
        for (g, row) in f.domain.iter().zip(&f.exponents) {
            if row[j] > 0 {
                acc = ext_union(&acc, &scale_down(e.get(g)?, row[j]));
            }
        }
        out.insert(h, acc);
    }
    Ok(out)
}

fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn sum_lower(a: Infimum, b: Infimum) -> Option<Rational> {
    Some(a.lower()? + b.lower()?)
}

/// Index family of the composition `A ∘ B` of two cusp edge operators with
/// families `E`, `F` on the double space.
///
/// ```text
/// G(ff)  = (E(ff)+F(ff)) ∪̄ (E(lf)+F(rf)+k(b+1)) ∪̄ (E(bkf)+F(bkf)+(k+1)(b+1))
/// G(bkf) = (E(bkf)+F(bkf)+b+1) ∪̄ (E(ff)+F(bkf)) ∪̄ (E(bkf)+F(ff)) ∪̄ (E(lf)+F(rf))
/// G(lf)  = (E(bkf)+F(lf)+b+1) ∪̄ (E(ff)+F(lf)) ∪̄ (E(lf)+ℕ)
/// G(rf)  = (E(rf)+F(bkf)+b+1) ∪̄ (E(rf)+F(ff)+k(b+1)) ∪̄ (F(rf)+ℕ)
/// ```
///
/// Defined when `inf E(rf) + inf F(lf) > −1`.
pub fn compose_double(e: &IndexFamily, f: &IndexFamily, k: u32, b: u32) -> Result<IndexFamily> {
    e.validate(&DOUBLE_FACES)?;
    f.validate(&DOUBLE_FACES)?;
    if let Some(s) = sum_lower(e.get("rf")?.inf(), f.get("lf")?.inf()) {
        if s <= q(-1) {
            return Err(Error::Divergent(format!(
                "composition undefined: inf E(rf) + inf F(lf) = {s} <= -1"
            )));
        }
    }
    let nat = IndexSet::naturals(e.naturals_cutoff().max(f.naturals_cutoff()));
    let (k, b) = (k as i128, b as i128);
    let g = |fam: &IndexFamily, face: &str| fam.get(face).cloned();
    let (elf, erf, ebk, eff) = (g(e, "lf")?, g(e, "rf")?, g(e, "bkf")?, g(e, "ff")?);
    let (flf, frf, fbk, fff) = (g(f, "lf")?, g(f, "rf")?, g(f, "bkf")?, g(f, "ff")?);

    let g_ff = ext_union(
        &ext_union(&set_sum(&eff, &fff), &shift(&set_sum(&elf, &frf), q(k * (b + 1)))),
        &shift(&set_sum(&ebk, &fbk), q((k + 1) * (b + 1))),
    );
    let g_bkf = ext_union(
        &ext_union(
            &ext_union(&shift(&set_sum(&ebk, &fbk), q(b + 1)), &set_sum(&eff, &fbk)),
            &set_sum(&ebk, &fff),
        ),
        &set_sum(&elf, &frf),
    );
    let g_lf = ext_union(
        &ext_union(&shift(&set_sum(&ebk, &flf), q(b + 1)), &set_sum(&eff, &flf)),
        &set_sum(&elf, &nat),
    );
    let g_rf = ext_union(
        &ext_union(&shift(&set_sum(&erf, &fbk), q(b + 1)), &shift(&set_sum(&erf, &fff), q(k * (b + 1)))),
        &set_sum(&frf, &nat),
    );
    Ok(IndexFamily::new()
        .with("ff", g_ff)
        .with("bkf", g_bkf)
        .with("lf", g_lf)
        .with("rf", g_rf))
}

/// Index set of `A u` at the boundary for an operator with double-space family
/// `E` acting on a function with boundary index set `F(∂M)`:
///
/// ```text
/// (E(lf)+ℕ) ∪̄ (E(bkf)+F(∂M)+b+1) ∪̄ (E(ff)+F(∂M))
/// ```
///
/// Defined when `inf E(rf) + inf F(∂M) > −1`.
pub fn action_on_function(e: &IndexFamily, f_boundary: &IndexSet, b: u32) -> Result<IndexSet> {
    e.validate(&DOUBLE_FACES)?;
    if let Some(s) = sum_lower(e.get("rf")?.inf(), f_boundary.inf()) {
        if s <= q(-1) {
            return Err(Error::Divergent(format!(
                "action undefined: inf E(rf) + inf F(dM) = {s} <= -1"
            )));
        }
    }
    let mut n_cut = e.naturals_cutoff();
    if let (Some(c), Some(l)) = (f_boundary.cutoff(), f_boundary.inf().lower()) {
        n_cut = n_cut.max(c - l);
    }
    let nat = IndexSet::naturals(n_cut);
    let b = b as i128;
    Ok(ext_union(
        &ext_union(
            &set_sum(e.get("lf")?, &nat),
            &shift(&set_sum(e.get("bkf")?, f_boundary), q(b + 1)),
        ),
        &set_sum(e.get("ff")?, f_boundary),
    ))
}
