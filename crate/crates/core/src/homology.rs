//! Rational contact homology chain complex on a finite truncation.
//!
//! Generators are graded-commutative monomials in good orbits. The
//! differential is read off a table of rigid curve counts and extended to
//! monomials as an odd derivation.

use crate::error::{Error, Result};
use crate::grading::{classify_goodness, fredholm_index, IndexData};
use crate::linalg::{rank, Matrix};
use crate::orbit::{OrbitUniverse, Parity};
use crate::rational::{fmt_q, serde_opt_q, serde_q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub positive: String,
    pub negative: Vec<String>,
    #[serde(with = "serde_q")]
    pub value: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vdim: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<i64>,
}

/// Curve counts as read from input. `n` (with `dim Y = 2n − 1`) is needed only
/// when an entry relies on the index formula instead of a declared `vdim`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CountTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    pub counts: Vec<CountEntry>,
}

/// At least one bound must be present.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cutoff {
    #[serde(default, with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub max_action: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_length: Option<usize>,
}

impl Cutoff {
    pub fn action(a: Q) -> Self {
        Cutoff { max_action: Some(a), max_word_length: None }
    }

    pub fn length(k: usize) -> Self {
        Cutoff { max_action: None, max_word_length: Some(k) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub id: String,
    pub parity: Parity,
    #[serde(with = "serde_q")]
    pub action: Q,
}

/// A monomial, stored as nondecreasing indices into the generator list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word {
    pub letters: Vec<usize>,
    pub parity: Parity,
    #[serde(with = "serde_q")]
    pub action: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Basis {
    pub generators: Vec<Generator>,
    pub words: Vec<Word>,
    pub cutoff: Cutoff,
    #[serde(skip)]
    index: BTreeMap<Vec<usize>, usize>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, letters: &[usize]) -> Option<usize> {
        self.index.get(letters).copied()
    }

    pub fn generator_index(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    /// `1` for the empty word, otherwise orbit ids joined by `·`.
    pub fn word_name(&self, w: usize) -> String {
        self.letters_name(&self.words[w].letters)
    }

    pub fn letters_name(&self, letters: &[usize]) -> String {
        if letters.is_empty() {
            return "1".into();
        }
        letters.iter().map(|&i| self.generators[i].id.as_str()).collect::<Vec<_>>().join("·")
    }

    fn parity_of(&self, letters: &[usize]) -> Parity {
        Parity::from_bit(letters.iter().map(|&i| self.generators[i].parity.bit()).sum())
    }

    fn action_of(&self, letters: &[usize]) -> Q {
        letters.iter().map(|&i| self.generators[i].action.clone()).sum()
    }

    /// Sorts a product of generators into canonical order with the Koszul
    /// sign. Returns `None` when an odd generator repeats.
    pub fn canonicalize(&self, letters: &[usize]) -> Option<(i8, Vec<usize>)> {
        let mut v = letters.to_vec();
        let mut sign = 1i8;
        let odd = |i: usize| self.generators[i].parity == Parity::Odd;
        for end in (1..v.len()).rev() {
            for i in 0..end {
                if v[i] > v[i + 1] {
                    if odd(v[i]) && odd(v[i + 1]) {
                        sign = -sign;
                    }
                    v.swap(i, i + 1);
                }
            }
        }
        if v.windows(2).any(|p| p[0] == p[1] && odd(p[0])) {
            return None;
        }
        Some((sign, v))
    }
}

/// Good orbits of action at most `L`, sorted by action and then id.
pub fn good_generators(u: &OrbitUniverse) -> Result<Vec<Generator>> {
    let mut gens = Vec::new();
    for o in u.within_bound() {
        if classify_goodness(o, u)? {
            gens.push(Generator { id: o.id.clone(), parity: o.parity, action: o.action.clone() });
        }
    }
    gens.sort_by(|a, b| a.action.cmp(&b.action).then_with(|| a.id.cmp(&b.id)));
    Ok(gens)
}

/// All monomials in good orbits within the cutoff, ordered by action and then
/// lexicographically by letters.
pub fn build_generators(u: &OrbitUniverse, cutoff: &Cutoff) -> Result<Basis> {
    if cutoff.max_action.is_none() && cutoff.max_word_length.is_none() {
        return Err(Error::invalid("a finite cutoff (action or word length) is required"));
    }
    let generators = good_generators(u)?;
    let mut basis = Basis { generators, words: Vec::new(), cutoff: cutoff.clone(), index: BTreeMap::new() };
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(b: &Basis, start: usize, action: &Q, cur: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
        found.push(cur.clone());
        if b.cutoff.max_word_length.is_some_and(|k| cur.len() >= k) {
            return;
        }
        for i in start..b.generators.len() {
            let g = &b.generators[i];
            if g.parity == Parity::Odd && cur.last() == Some(&i) {
                continue;
            }
            let next = action + &g.action;
            if b.cutoff.max_action.as_ref().is_some_and(|m| next > *m) {
                continue;
            }
            cur.push(i);
            rec(b, i, &next, cur, found);
            cur.pop();
        }
    }
    rec(&basis, 0, &Q::zero(), &mut cur, &mut found);
    let mut words: Vec<Word> = found
        .into_iter()
        .map(|letters| Word { parity: basis.parity_of(&letters), action: basis.action_of(&letters), letters })
        .collect();
    words.sort_by(|a, b| a.action.cmp(&b.action).then_with(|| a.letters.cmp(&b.letters)));
    basis.index = words.iter().enumerate().map(|(i, w)| (w.letters.clone(), i)).collect();
    basis.words = words;
    Ok(basis)
}

/// Checks every count entry and returns the differential on generators as
/// `generator index → (canonical letters → coefficient)`.
pub fn validate_counts(
    u: &OrbitUniverse,
    basis: &Basis,
    counts: &CountTable,
) -> Result<BTreeMap<usize, BTreeMap<Vec<usize>, Q>>> {
    let mut out: BTreeMap<usize, BTreeMap<Vec<usize>, Q>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for (k, e) in counts.counts.iter().enumerate() {
        let here = |msg: String| Error::invalid(format!("/counts/{k}: {msg}"));
        let resolve = |id: &str, field: &str| -> Result<usize> {
            let o = u.get(id).map_err(|_| here(format!("{field}: unknown orbit `{id}`")))?;
            if !classify_goodness(o, u)? {
                return Err(here(format!("{field}: orbit `{id}` is bad")));
            }
            if o.action > u.action_bound {
                return Err(here(format!("{field}: orbit `{id}` exceeds the action bound")));
            }
            basis.generator_index(id).ok_or_else(|| here(format!("{field}: orbit `{id}` is not a generator")))
        };
        let gp = resolve(&e.positive, "positive")?;
        let mut neg = Vec::new();
        for id in &e.negative {
            neg.push(resolve(id, "negative")?);
        }
        if e.value.is_zero() {
            return Err(here("count value must be nonzero".into()));
        }
        let mut sorted_ids = e.negative.clone();
        sorted_ids.sort();
        if !seen.insert((e.positive.clone(), sorted_ids)) {
            return Err(here("duplicate entry".into()));
        }
        let energy = &basis.generators[gp].action - basis.action_of(&neg);
        if !energy.is_positive() {
            return Err(here(format!("energy {} is not positive", fmt_q(&energy))));
        }
        if basis.parity_of(&neg) == basis.generators[gp].parity {
            return Err(here("the differential must change parity".into()));
        }
        let vdim = match (e.vdim, counts.n, e.c1) {
            (Some(v), _, _) => v,
            (None, Some(n), Some(c1)) => {
                let cz = |id: &String| u.get(id).ok().and_then(|o| o.cz_index);
                let cz_minus: Option<Vec<i64>> = e.negative.iter().map(cz).collect();
                match (cz(&e.positive), cz_minus) {
                    (Some(p), Some(m)) => {
                        fredholm_index(&IndexData { n, euler_char: 2, c1, cz_plus: vec![p], cz_minus: m }) - 1
                    }
                    _ => return Err(here("no vdim given and CZ indices are incomplete".into())),
                }
            }
            _ => return Err(here("no vdim given and no index data (top-level n and per-entry c1)".into())),
        };
        if vdim != 0 {
            return Err(here(format!("entry is not rigid (vdim {vdim})")));
        }
        if let Some((sign, letters)) = basis.canonicalize(&neg) {
            let slot = out.entry(gp).or_default().entry(letters).or_insert_with(Q::zero);
            *slot += Q::from_integer(sign.into()) * &e.value;
        }
    }
    for m in out.values_mut() {
        m.retain(|_, v| !v.is_zero());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedTerm {
    pub source: String,
    pub target: String,
    #[serde(with = "serde_q")]
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalComplex {
    pub basis: Basis,
    /// Column `j` is `∂` of basis word `j`, as row index → coefficient.
    #[serde(serialize_with = "ser_columns")]
    pub columns: Vec<BTreeMap<usize, Q>>,
    pub truncated: Vec<TruncatedTerm>,
    #[serde(skip)]
    truncated_sources: BTreeSet<usize>,
}

fn ser_columns<S: serde::Serializer>(c: &[BTreeMap<usize, Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<BTreeMap<usize, String>> = c.iter().map(|m| m.iter().map(|(k, v)| (*k, fmt_q(v))).collect()).collect();
    serde::Serialize::serialize(&v, s)
}

/// Applies an odd derivation, given on generators, to a monomial. Returns the
/// result as canonical letters → coefficient, without truncation.
pub fn derivation_on_word(
    basis: &Basis,
    on_generators: &BTreeMap<usize, BTreeMap<Vec<usize>, Q>>,
    letters: &[usize],
) -> BTreeMap<Vec<usize>, Q> {
    let mut out: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    let mut prefix_parity = 0u8;
    for (i, &x) in letters.iter().enumerate() {
        if let Some(dx) = on_generators.get(&x) {
            for (term, c) in dx {
                let mut product: Vec<usize> = letters[..i].to_vec();
                product.extend(term);
                product.extend(&letters[i + 1..]);
                if let Some((sign, canon)) = basis.canonicalize(&product) {
                    let s = if prefix_parity % 2 == 1 { -sign } else { sign };
                    *out.entry(canon).or_insert_with(Q::zero) += Q::from_integer(s.into()) * c;
                }
            }
        }
        prefix_parity += basis.generators[x].parity.bit();
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn build_differential(u: &OrbitUniverse, basis: Basis, counts: &CountTable) -> Result<RationalComplex> {
    let on_generators = validate_counts(u, &basis, counts)?;
    let mut columns = Vec::with_capacity(basis.len());
    let mut truncated = Vec::new();
    let mut truncated_sources = BTreeSet::new();
    for (j, w) in basis.words.iter().enumerate() {
        let mut col = BTreeMap::new();
        for (term, c) in derivation_on_word(&basis, &on_generators, &w.letters) {
            match basis.position(&term) {
                Some(i) => {
                    col.insert(i, c);
                }
                None => {
                    truncated_sources.insert(j);
                    truncated.push(TruncatedTerm { source: basis.word_name(j), target: basis.letters_name(&term), value: c });
                }
            }
        }
        columns.push(col);
    }
    Ok(RationalComplex { basis, columns, truncated, truncated_sources })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareFailure {
    pub word: String,
    pub target: String,
    #[serde(with = "serde_q")]
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundarySquaredReport {
    pub ok: bool,
    pub failures: Vec<SquareFailure>,
    /// Nonzero values of `∂²` on words whose computation passed through a
    /// truncated term; they may be artifacts of the cutoff.
    pub inconclusive: Vec<SquareFailure>,
    /// Words whose `∂²` could not be fully computed inside the cutoff.
    pub truncated_words: Vec<String>,
}

impl RationalComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dense(&self) -> Matrix {
        let n = self.dim();
        let mut m = vec![vec![Q::zero(); n]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, v) in col {
                m[i][j] = v.clone();
            }
        }
        m
    }

    pub fn is_truncated(&self) -> bool {
        !self.truncated.is_empty()
    }

    pub fn check_boundary_squared(&self) -> BoundarySquaredReport {
        let mut failures = Vec::new();
        let mut inconclusive = Vec::new();
        let mut truncated_words = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            let touched = self.truncated_sources.contains(&j) || col.keys().any(|i| self.truncated_sources.contains(i));
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (&i, a) in col {
                for (&k, b) in &self.columns[i] {
                    *acc.entry(k).or_insert_with(Q::zero) += a * b;
                }
            }
            if touched {
                truncated_words.push(self.basis.word_name(j));
            }
            for (k, v) in acc.into_iter().filter(|(_, v)| !v.is_zero()) {
                let f = SquareFailure { word: self.basis.word_name(j), target: self.basis.word_name(k), value: v };
                if touched {
                    inconclusive.push(f);
                } else {
                    failures.push(f);
                }
            }
        }
        BoundarySquaredReport { ok: failures.is_empty(), failures, inconclusive, truncated_words }
    }

    fn block_rank(&self, from: Parity) -> usize {
        let rows: Vec<usize> = (0..self.dim()).filter(|&i| self.basis.words[i].parity != from).collect();
        let cols: Vec<usize> = (0..self.dim()).filter(|&j| self.basis.words[j].parity == from).collect();
        let m: Matrix = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.columns[j].get(&i).cloned().unwrap_or_else(Q::zero)).collect())
            .collect();
        rank(&m)
    }

    /// Ranks and Betti numbers per parity. Refuses when `∂² ≠ 0` inside the
    /// untruncated range.
    pub fn homology_ranks(&self) -> Result<HomologyReport> {
        let sq = self.check_boundary_squared();
        if !sq.ok {
            let first = &sq.failures[0];
            return Err(Error::Refused(format!(
                "∂² ≠ 0: coefficient {} of {} in ∂²({}) ({} failures)",
                fmt_q(&first.value),
                first.target,
                first.word,
                sq.failures.len()
            )));
        }
        let dim_even = self.basis.words.iter().filter(|w| w.parity == Parity::Even).count();
        let dim_odd = self.dim() - dim_even;
        let rank_even = self.block_rank(Parity::Even);
        let rank_odd = self.block_rank(Parity::Odd);
        Ok(HomologyReport {
            dim_even,
            dim_odd,
            rank_even,
            rank_odd,
            rank_d: rank_even + rank_odd,
            betti_even: dim_even - rank_even - rank_odd,
            betti_odd: dim_odd - rank_odd - rank_even,
            truncated: self.is_truncated(),
            truncated_terms: self.truncated.len(),
            cutoff: self.basis.cutoff.clone(),
        })
    }
}

/// `rank_even` is the rank of `∂` on even words (landing in odd words) and
/// `rank_odd` the rank on odd words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub dim_even: usize,
    pub dim_odd: usize,
    pub rank_even: usize,
    pub rank_odd: usize,
    pub rank_d: usize,
    pub betti_even: usize,
    pub betti_odd: usize,
    pub truncated: bool,
    pub truncated_terms: usize,
    pub cutoff: Cutoff,
}

/// Builds the basis, differential and homology in one step.
pub fn contact_homology(u: &OrbitUniverse, counts: &CountTable, cutoff: &Cutoff) -> Result<(RationalComplex, HomologyReport)> {
    let basis = build_generators(u, cutoff)?;
    let c = build_differential(u, basis, counts)?;
    let r = c.homology_ranks()?;
    Ok((c, r))
}
