//! Label-level skeleton of the symmetric flow category.
//!
//! Objects are finite sequences of orbits. A morphism space `M(Γ⁻, Γ⁺)` splits
//! over partitions `Λ: Γ⁻ → Γ⁺`, and its boundary strata are chains
//! `Γ⁻ = Γ₀ → Γ₁ → ⋯ → Γ_{k+1} = Γ⁺` whose steps break one or more orbits
//! along declared connected breakings `γ ⇝ Θ`. Whether a moduli space is
//! nonempty cannot be decided from orbit data, so breakings are an input.

use crate::error::{Error, Result};
use crate::homology::CountTable;
use crate::orbit::OrbitUniverse;
use crate::rational::{fmt_q, Q};
use num_traits::Signed;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub type OrbitSequence = Vec<String>;

/// `lambda[i]` is the position in `Γ⁺` that position `i` of `Γ⁻` maps to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition {
    pub lambda: Vec<usize>,
}

impl Partition {
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.lambda.len()).filter(|&i| self.lambda[i] == j).collect()
    }

    /// `self` after `first`: position `i` goes to `self[first[i]]`.
    pub fn after(&self, first: &Partition) -> Partition {
        Partition { lambda: first.lambda.iter().map(|&m| self.lambda[m]).collect() }
    }
}

fn sorted(v: &[String]) -> Vec<String> {
    let mut s = v.to_vec();
    s.sort();
    s
}

/// All functions `Γ⁻ → Γ⁺` in lexicographic order of their value lists.
/// With a universe, only partitions whose every fiber has strictly smaller
/// total action than its target orbit are kept.
pub fn enumerate_partitions(gm: &[String], gp: &[String], energy_filter: Option<&OrbitUniverse>) -> Result<Vec<Partition>> {
    if gp.is_empty() {
        return Ok(if gm.is_empty() { vec![Partition { lambda: vec![] }] } else { vec![] });
    }
    let (m, p) = (gm.len(), gp.len());
    let total = (p as u128).checked_pow(m as u32).filter(|&t| t <= 1 << 24);
    if total.is_none() {
        return Err(Error::Refused(format!("{p}^{m} partitions is too many to enumerate")));
    }
    let mut out = Vec::new();
    let mut lambda = vec![0usize; m];
    loop {
        let part = Partition { lambda: lambda.clone() };
        let keep = match energy_filter {
            None => true,
            Some(u) => {
                let mut ok = true;
                for (j, g) in gp.iter().enumerate() {
                    let fiber: Vec<&String> = part.fiber(j).into_iter().map(|i| &gm[i]).collect();
                    if u.total_action(fiber)? >= *u.action(g)? {
                        ok = false;
                    }
                }
                ok
            }
        };
        if keep {
            out.push(part);
        }
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            lambda[i] += 1;
            if lambda[i] < p {
                break;
            }
            lambda[i] = 0;
        }
    }
}

/// Orbit universe plus declared connected breakings `γ ⇝ Θ` (`Θ` stored
/// sorted). Every breaking has positive energy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowSystem {
    #[serde(skip)]
    pub universe: OrbitUniverse,
    pub breakings: BTreeMap<String, BTreeSet<Vec<String>>>,
}

impl FlowSystem {
    pub fn new(universe: OrbitUniverse, breakings: impl IntoIterator<Item = (String, Vec<String>)>) -> Result<Self> {
        let mut map: BTreeMap<String, BTreeSet<Vec<String>>> = BTreeMap::new();
        for (g, theta) in breakings {
            for id in std::iter::once(&g).chain(&theta) {
                let o = universe.get(id)?;
                if o.action > universe.action_bound {
                    return Err(Error::invalid(format!("orbit `{id}` exceeds the action bound")));
                }
            }
            let e = universe.action(&g)? - universe.total_action(&theta)?;
            if !e.is_positive() {
                return Err(Error::invalid(format!("breaking {g} ⇝ {theta:?} has energy {} ≤ 0", fmt_q(&e))));
            }
            map.entry(g).or_default().insert(sorted(&theta));
        }
        Ok(FlowSystem { universe, breakings: map })
    }

    /// Breakings taken from the support of a count table.
    pub fn from_counts(universe: OrbitUniverse, counts: &CountTable) -> Result<Self> {
        let pairs: Vec<(String, Vec<String>)> = counts.counts.iter().map(|e| (e.positive.clone(), e.negative.clone())).collect();
        FlowSystem::new(universe, pairs)
    }

    pub fn action(&self, seq: &[String]) -> Result<Q> {
        self.universe.total_action(seq)
    }

    pub fn energy(&self, gm: &[String], gp: &[String]) -> Result<Q> {
        Ok(self.action(gp)? - self.action(gm)?)
    }

    fn fiber_kind(&self, gamma: &str, fiber: &[String]) -> Option<bool> {
        let f = sorted(fiber);
        if f.len() == 1 && f[0] == gamma {
            Some(false)
        } else if self.breakings.get(gamma).is_some_and(|s| s.contains(&f)) {
            Some(true)
        } else {
            None
        }
    }

    /// A step breaks each orbit of `upper` into its fiber, which must be a
    /// declared breaking or the orbit itself, and breaks at least one.
    pub fn is_step(&self, lower: &[String], upper: &[String], p: &Partition) -> bool {
        if p.lambda.len() != lower.len() || p.lambda.iter().any(|&j| j >= upper.len()) {
            return false;
        }
        let mut nontrivial = false;
        for (j, g) in upper.iter().enumerate() {
            let fiber: Vec<String> = p.fiber(j).into_iter().map(|i| lower[i].clone()).collect();
            match self.fiber_kind(g, &fiber) {
                None => return false,
                Some(b) => nontrivial |= b,
            }
        }
        nontrivial
    }

    pub fn steps(&self, lower: &[String], upper: &[String]) -> Result<Vec<Partition>> {
        Ok(enumerate_partitions(lower, upper, None)?.into_iter().filter(|p| self.is_step(lower, upper, p)).collect())
    }
}

/// `sequences[0] = Γ⁻`, `sequences[k+1] = Γ⁺`, and `partitions[i]` maps
/// `sequences[i]` to `sequences[i+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub sequences: Vec<OrbitSequence>,
    pub partitions: Vec<Partition>,
}

impl Chain {
    pub fn depth(&self) -> usize {
        self.sequences.len().saturating_sub(2)
    }

    pub fn composed(&self) -> Partition {
        let n = self.sequences[0].len();
        let mut acc = Partition { lambda: (0..n).collect() };
        for p in &self.partitions {
            acc = p.after(&acc);
        }
        acc
    }

    /// Appends a step on top.
    pub fn then(&self, upper: &[String], p: &Partition) -> Chain {
        let mut c = self.clone();
        c.sequences.push(upper.to_vec());
        c.partitions.push(p.clone());
        c
    }

    /// Prepends a step below.
    pub fn after(&self, lower: &[String], p: &Partition) -> Chain {
        let mut c = self.clone();
        c.sequences.insert(0, lower.to_vec());
        c.partitions.insert(0, p.clone());
        c
    }

    /// Key invariant under reordering intermediate sequences. Each top orbit
    /// becomes a rooted tree whose children at every level are sorted;
    /// bottom positions are kept as labels.
    pub fn canonical_key(&self) -> String {
        let top = self.sequences.len() - 1;
        fn node(c: &Chain, level: usize, pos: usize) -> String {
            if level == 0 {
                return pos.to_string();
            }
            let below = &c.partitions[level - 1];
            let mut kids: Vec<String> = below.fiber(pos).into_iter().map(|q| node(c, level - 1, q)).collect();
            kids.sort();
            format!("{}({})", c.sequences[level][pos], kids.join(","))
        }
        (0..self.sequences[top].len()).map(|j| node(self, top, j)).collect::<Vec<_>>().join(" | ")
    }

    pub fn intermediates_sorted(&self) -> Vec<Vec<String>> {
        self.sequences[1..self.sequences.len() - 1].iter().map(|s| sorted(s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumLabel {
    pub key: String,
    pub codimension: usize,
    pub chain: Chain,
}

impl StratumLabel {
    fn from_chain(chain: Chain) -> Self {
        StratumLabel { key: chain.canonical_key(), codimension: chain.depth(), chain }
    }
}

/// One level of a top-down expansion: orbit and position of its parent in
/// the level above.
type Level = Vec<(String, usize)>;

/// Boundary strata of `M(Γ⁻, Γ⁺)_Λ` with exactly `depth` intermediate
/// sequences, one representative per class under reordering of
/// intermediates, sorted by key.
pub fn boundary_strata(sys: &FlowSystem, gm: &[String], gp: &[String], lambda: &Partition, depth: usize) -> Result<Vec<StratumLabel>> {
    if lambda.lambda.len() != gm.len() || lambda.lambda.iter().any(|&j| j >= gp.len()) {
        return Err(Error::invalid("partition does not map Γ⁻ into Γ⁺"));
    }
    let found = generate(sys, gm, gp, Some(lambda), depth)?;
    Ok(found.into_values().map(StratumLabel::from_chain).collect())
}

/// Chains are produced in two passes. First the multiset sequences
/// `Γ⁺ = M₀, M₁, …, M_{depth+1} = Γ⁻` joined by steps are found on sorted
/// multisets, where one step's successors are a Minkowski sum of per-orbit
/// options. Then each such path is realized position by position.
fn generate(sys: &FlowSystem, gm: &[String], gp: &[String], lambda: Option<&Partition>, depth: usize) -> Result<BTreeMap<String, Chain>> {
    let mut found = BTreeMap::new();
    let bottom = sorted(gm);
    let bottom_action = sys.action(gm)?;
    let mut succ: BTreeMap<Vec<String>, BTreeSet<Vec<String>>> = BTreeMap::new();
    let mut paths = Vec::new();
    multiset_paths(sys, &sorted(gp), &bottom, &bottom_action, depth + 1, &mut succ, &mut Vec::new(), &mut paths)?;
    for path in paths {
        let top: Level = gp.iter().enumerate().map(|(j, g)| (g.clone(), j)).collect();
        let mut levels = vec![top];
        realize(sys, gm, gp, lambda, &path, &mut levels, &mut found);
    }
    Ok(found)
}

/// Sorted multisets reachable from `from` in one step.
fn successors<'a>(
    sys: &FlowSystem,
    from: &[String],
    memo: &'a mut BTreeMap<Vec<String>, BTreeSet<Vec<String>>>,
) -> &'a BTreeSet<Vec<String>> {
    if !memo.contains_key(from) {
        // States: (partial multiset, some orbit broken so far).
        let mut states: BTreeSet<(Vec<String>, bool)> = BTreeSet::from([(Vec::new(), false)]);
        for g in from {
            let mut next = BTreeSet::new();
            for (acc, broken) in &states {
                let mut keep = acc.clone();
                keep.push(g.clone());
                keep.sort();
                next.insert((keep, *broken));
                for theta in sys.breakings.get(g).into_iter().flatten() {
                    let mut m = acc.clone();
                    m.extend(theta.iter().cloned());
                    m.sort();
                    next.insert((m, true));
                }
            }
            states = next;
        }
        let out = states.into_iter().filter(|(_, b)| *b).map(|(m, _)| m).collect();
        memo.insert(from.to_vec(), out);
    }
    &memo[from]
}

#[allow(clippy::too_many_arguments)]
fn multiset_paths(
    sys: &FlowSystem,
    from: &[String],
    bottom: &[String],
    bottom_action: &Q,
    remaining: usize,
    memo: &mut BTreeMap<Vec<String>, BTreeSet<Vec<String>>>,
    path: &mut Vec<Vec<String>>,
    out: &mut Vec<Vec<Vec<String>>>,
) -> Result<()> {
    let next: Vec<Vec<String>> = successors(sys, from, memo).iter().cloned().collect();
    for m in next {
        if remaining == 1 {
            if m == bottom {
                path.push(m);
                out.push(path.clone());
                path.pop();
            }
        } else if sys.action(&m)? > *bottom_action {
            path.push(m);
            multiset_paths(sys, &path[path.len() - 1].clone(), bottom, bottom_action, remaining - 1, memo, path, out)?;
            path.pop();
        }
    }
    Ok(())
}

/// Extends `levels` downward along `path`, choosing for each orbit of the
/// current level a cylinder or a breaking that fits in the multiset budget.
fn realize(
    sys: &FlowSystem,
    gm: &[String],
    gp: &[String],
    lambda: Option<&Partition>,
    path: &[Vec<String>],
    levels: &mut Vec<Level>,
    found: &mut BTreeMap<String, Chain>,
) {
    let Some((target, rest)) = path.split_first() else {
        match_bottom(gm, gp, lambda, levels, found);
        return;
    };
    let mut budget: BTreeMap<&str, usize> = BTreeMap::new();
    for g in target {
        *budget.entry(g.as_str()).or_default() += 1;
    }
    let current = levels.last().expect("nonempty").clone();
    let mut next = Vec::new();
    fill(sys, gm, gp, lambda, rest, &current, 0, false, &mut budget, &mut next, levels, found);
}

fn take(budget: &mut BTreeMap<&str, usize>, ids: &[String]) -> bool {
    for (k, id) in ids.iter().enumerate() {
        match budget.get_mut(id.as_str()) {
            Some(c) if *c > 0 => *c -= 1,
            _ => {
                give(budget, &ids[..k]);
                return false;
            }
        }
    }
    true
}

fn give(budget: &mut BTreeMap<&str, usize>, ids: &[String]) {
    for id in ids {
        *budget.get_mut(id.as_str()).expect("taken before") += 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn fill(
    sys: &FlowSystem,
    gm: &[String],
    gp: &[String],
    lambda: Option<&Partition>,
    rest: &[Vec<String>],
    current: &Level,
    pos: usize,
    broken: bool,
    budget: &mut BTreeMap<&str, usize>,
    next: &mut Level,
    levels: &mut Vec<Level>,
    found: &mut BTreeMap<String, Chain>,
) {
    if pos == current.len() {
        if broken && budget.values().all(|&c| c == 0) {
            levels.push(next.clone());
            realize(sys, gm, gp, lambda, rest, levels, found);
            levels.pop();
        }
        return;
    }
    let g = &current[pos].0;
    let cylinder = std::slice::from_ref(g);
    let options = std::iter::once((cylinder, false)).chain(sys.breakings.get(g).into_iter().flatten().map(|t| (t.as_slice(), true)));
    for (ids, is_break) in options {
        if !take(budget, ids) {
            continue;
        }
        let mark = next.len();
        next.extend(ids.iter().map(|t| (t.clone(), pos)));
        fill(sys, gm, gp, lambda, rest, current, pos + 1, broken || is_break, budget, next, levels, found);
        next.truncate(mark);
        give(budget, ids);
    }
}

/// Matches the generated bottom level against `Γ⁻` in every way compatible
/// with orbits and with `Λ` (any `Λ` when absent), recording each chain.
fn match_bottom(gm: &[String], gp: &[String], lambda: Option<&Partition>, levels: &[Level], found: &mut BTreeMap<String, Chain>) {
    let k = levels.len() - 1;
    let root = |mut pos: usize| {
        for l in (1..=k).rev() {
            pos = levels[l][pos].1;
        }
        pos
    };
    let bottom = &levels[k];
    let roots: Vec<usize> = (0..bottom.len()).map(root).collect();
    let mut beta = vec![usize::MAX; gm.len()];
    let mut used = vec![false; bottom.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        gm: &[String],
        gp: &[String],
        lambda: Option<&Partition>,
        levels: &[Level],
        roots: &[usize],
        beta: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut BTreeMap<String, Chain>,
    ) {
        let k = levels.len() - 1;
        if i == gm.len() {
            // Levels run top-down; the chain runs bottom-up.
            let mut sequences = vec![gm.to_vec()];
            let mut partitions = vec![Partition { lambda: beta.iter().map(|&b| levels[k][b].1).collect() }];
            for l in (1..k).rev() {
                sequences.push(levels[l].iter().map(|(g, _)| g.clone()).collect());
                partitions.push(Partition { lambda: levels[l].iter().map(|(_, p)| *p).collect() });
            }
            sequences.push(gp.to_vec());
            let chain = Chain { sequences, partitions };
            found.entry(chain.canonical_key()).or_insert(chain);
            return;
        }
        for b in 0..levels[k].len() {
            if !used[b] && levels[k][b].0 == gm[i] && lambda.is_none_or(|l| roots[b] == l.lambda[i]) {
                used[b] = true;
                beta[i] = b;
                rec(i + 1, gm, gp, lambda, levels, roots, beta, used, found);
                used[b] = false;
            }
        }
    }
    rec(0, gm, gp, lambda, levels, &roots, &mut beta, &mut used, found);
}

/// Strata of `M(Γ⁻, Γ⁺)` over all partitions whose intermediate sequences,
/// listed bottom-up, agree with `intermediates` up to reordering within
/// each sequence. Sorted by key.
pub fn strata_through(sys: &FlowSystem, gm: &[String], gp: &[String], intermediates: &[OrbitSequence]) -> Result<Vec<StratumLabel>> {
    for id in gm.iter().chain(gp).chain(intermediates.iter().flatten()) {
        sys.universe.get(id)?;
    }
    let mut path: Vec<Vec<String>> = intermediates.iter().rev().map(|m| sorted(m)).collect();
    path.push(sorted(gm));
    let top: Level = gp.iter().enumerate().map(|(j, g)| (g.clone(), j)).collect();
    let mut levels = vec![top];
    let mut found = BTreeMap::new();
    realize(sys, gm, gp, None, &path, &mut levels, &mut found);
    Ok(found.into_values().map(StratumLabel::from_chain).collect())
}

/// Every stratum of `M(Γ⁻, Γ⁺)` of the given depth, over all partitions,
/// ordered by composed partition and then by key.
pub fn all_boundary_strata(sys: &FlowSystem, gm: &[String], gp: &[String], depth: usize) -> Result<Vec<StratumLabel>> {
    let found = generate(sys, gm, gp, None, depth)?;
    let mut out: Vec<StratumLabel> = found.into_values().map(StratumLabel::from_chain).collect();
    out.sort_by_cached_key(|s| (s.chain.composed().lambda, s.key.clone()));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub holds: bool,
    pub left: usize,
    pub right: usize,
    pub direct: usize,
}

/// Compares three computations of the depth-2 strata of `M(Γ⁻, Γ⁺)` through
/// `mid1` and then `mid2`: codimension-one strata of `M(Γ⁻, mid2)` through
/// `mid1` followed by a step to `Γ⁺`; a step to `mid1` followed by
/// codimension-one strata of `M(mid1, Γ⁺)` through `mid2`; and the direct
/// depth-2 enumeration.
pub fn check_composition_associativity(
    sys: &FlowSystem,
    gm: &[String],
    mid1: &[String],
    mid2: &[String],
    gp: &[String],
) -> Result<AssociativityReport> {
    let mut left = BTreeSet::new();
    let top_steps = sys.steps(mid2, gp)?;
    if !top_steps.is_empty() {
        for s in strata_through(sys, gm, mid2, &[mid1.to_vec()])? {
            for p in &top_steps {
                left.insert(s.chain.then(gp, p).canonical_key());
            }
        }
    }
    let mut right = BTreeSet::new();
    let bottom_steps = sys.steps(gm, mid1)?;
    if !bottom_steps.is_empty() {
        for s in strata_through(sys, mid1, gp, &[mid2.to_vec()])? {
            for p in &bottom_steps {
                right.insert(s.chain.after(gm, p).canonical_key());
            }
        }
    }
    let direct: BTreeSet<String> = strata_through(sys, gm, gp, &[mid1.to_vec(), mid2.to_vec()])?.into_iter().map(|s| s.key).collect();
    Ok(AssociativityReport {
        holds: left == right && right == direct,
        left: left.len(),
        right: right.len(),
        direct: direct.len(),
    })
}

/// Moves entry `i` of `Γ⁻` to position `σ(i)`.
pub fn act_on_minus(sigma: &[usize], gm: &[String], p: &Partition) -> (OrbitSequence, Partition) {
    let mut seq = gm.to_vec();
    let mut lambda = p.lambda.clone();
    for (i, &s) in sigma.iter().enumerate() {
        seq[s] = gm[i].clone();
        lambda[s] = p.lambda[i];
    }
    (seq, Partition { lambda })
}

/// Moves entry `j` of `Γ⁺` to position `σ(j)`.
pub fn act_on_plus(sigma: &[usize], gp: &[String], p: &Partition) -> (OrbitSequence, Partition) {
    let mut seq = gp.to_vec();
    for (j, &s) in sigma.iter().enumerate() {
        seq[s] = gp[j].clone();
    }
    (seq, Partition { lambda: p.lambda.iter().map(|&j| sigma[j]).collect() })
}

/// The symmetric action on a stratum chain at either endpoint.
pub fn act_on_chain(sigma: &[usize], chain: &Chain, plus_side: bool) -> Chain {
    let mut c = chain.clone();
    if plus_side {
        let top = c.sequences.len() - 1;
        let (s, p) = act_on_plus(sigma, &chain.sequences[top], &chain.partitions[top - 1]);
        c.sequences[top] = s;
        c.partitions[top - 1] = p;
    } else {
        let (s, p) = act_on_minus(sigma, &chain.sequences[0], &chain.partitions[0]);
        c.sequences[0] = s;
        c.partitions[0] = p;
    }
    c
}

/// The precedence relation as a DAG on orbit multisets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Precedence {
    pub nodes: Vec<Vec<String>>,
    /// `(a, b)` means `nodes[a] ≺ nodes[b]`.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    topo: Vec<usize>,
}

impl Precedence {
    /// Builds the relation from explicit pairs; fails on a cycle.
    pub fn from_pairs(pairs: &[(Vec<String>, Vec<String>)]) -> Result<Self> {
        let mut nodes: BTreeSet<Vec<String>> = BTreeSet::new();
        for (a, b) in pairs {
            nodes.insert(sorted(a));
            nodes.insert(sorted(b));
        }
        let nodes: Vec<Vec<String>> = nodes.into_iter().collect();
        let idx = |s: &[String]| nodes.binary_search(&sorted(s)).expect("inserted");
        let mut edges: Vec<(usize, usize)> = pairs.iter().map(|(a, b)| (idx(a), idx(b))).collect();
        edges.sort();
        edges.dedup();
        Precedence::new(nodes, edges)
    }

    fn new(nodes: Vec<Vec<String>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = nodes.len();
        let mut indeg = vec![0usize; n];
        for &(_, b) in &edges {
            indeg[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            topo.push(v);
            for &(a, b) in &edges {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        if topo.len() < n {
            let stuck: Vec<String> = (0..n).filter(|&v| indeg[v] > 0).map(|v| format!("{:?}", nodes[v])).collect();
            return Err(Error::invalid(format!("precedence relation has a cycle through {}", stuck.join(", "))));
        }
        Ok(Precedence { nodes, edges, topo })
    }

    /// `Γ ≺ Γ′` whenever some step leads from `Γ` up to `Γ′`, on all orbit
    /// multisets of length at most `max_len` within the action bound.
    pub fn from_system(sys: &FlowSystem, max_len: usize) -> Result<Self> {
        let ids: Vec<String> = sys.universe.within_bound().map(|o| o.id.clone()).collect();
        let mut nodes: Vec<Vec<String>> = Vec::new();
        fn rec(ids: &[String], start: usize, max: usize, cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
            out.push(cur.clone());
            if cur.len() == max {
                return;
            }
            for i in start..ids.len() {
                cur.push(ids[i].clone());
                rec(ids, i, max, cur, out);
                cur.pop();
            }
        }
        rec(&ids, 0, max_len, &mut Vec::new(), &mut nodes);
        nodes.sort();
        let mut edges = Vec::new();
        for (a, lo) in nodes.iter().enumerate() {
            for (b, hi) in nodes.iter().enumerate() {
                if a != b && !sys.steps(lo, hi)?.is_empty() {
                    edges.push((a, b));
                }
            }
        }
        Precedence::new(nodes, edges)
    }

    pub fn index(&self, s: &[String]) -> Option<usize> {
        self.nodes.binary_search(&sorted(s)).ok()
    }

    pub fn precedes(&self, a: &[String], b: &[String]) -> bool {
        match (self.index(a), self.index(b)) {
            (Some(x), Some(y)) => self.edges.contains(&(x, y)),
            _ => false,
        }
    }

    /// Longest chain `Γ = Γ₀ ≺ ⋯ ≺ Γ_k ≺ Γ′`, reported as `k`; `None` when
    /// there is no chain at all.
    pub fn norm(&self, a: &[String], b: &[String]) -> Option<usize> {
        let (s, t) = (self.index(a)?, self.index(b)?);
        let mut best: Vec<Option<usize>> = vec![None; self.nodes.len()];
        best[s] = Some(0);
        for &v in &self.topo {
            let Some(d) = best[v] else { continue };
            for &(x, y) in &self.edges {
                if x == v && best[y].is_none_or(|e| e < d + 1) {
                    best[y] = Some(d + 1);
                }
            }
        }
        best[t].filter(|&d| d > 0).map(|d| d - 1)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph precedence {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label = if n.is_empty() { "∅".to_string() } else { n.join(" ") };
            s.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{Parity, ReebOrbit};
    use crate::rational::qi;

    fn seq(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn universe(spec: &[(&str, i64)]) -> OrbitUniverse {
        OrbitUniverse::new(qi(100), spec.iter().map(|(id, a)| ReebOrbit::simple(id, qi(*a), Parity::Even))).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(&seq(&["a", "b"]), &seq(&["c", "d"]), None).unwrap().len(), 4);
        assert_eq!(enumerate_partitions(&[], &seq(&["c"]), None).unwrap().len(), 1);
        assert!(enumerate_partitions(&seq(&["a"]), &[], None).unwrap().is_empty());
        // a = 1, b = 2, c = 3: fibers must have smaller action than targets.
        let u = universe(&[("a", 1), ("b", 2), ("c", 3)]);
        let f = enumerate_partitions(&seq(&["a", "b"]), &seq(&["b", "c"]), Some(&u)).unwrap();
        // (a→b, b→c) is the only one: b over b fails, a+b over c fails.
        assert_eq!(f, vec![Partition { lambda: vec![0, 1] }]);
    }

    #[test]
    fn all_strata_is_the_union_over_partitions() {
        let u = universe(&[("a", 9), ("m", 5), ("b", 2), ("c", 1)]);
        let sys = FlowSystem::new(
            u,
            [("a".into(), seq(&["m", "c"])), ("m".into(), seq(&["b", "c"])), ("a".into(), seq(&["b"])), ("m".into(), seq(&[]))],
        )
        .unwrap();
        let (gm, gp) = (seq(&["b", "c", "c"]), seq(&["a"]));
        for depth in 0..=2 {
            let mut by_partition = Vec::new();
            for p in enumerate_partitions(&gm, &gp, None).unwrap() {
                by_partition.extend(boundary_strata(&sys, &gm, &gp, &p, depth).unwrap());
            }
            assert_eq!(all_boundary_strata(&sys, &gm, &gp, depth).unwrap(), by_partition, "depth {depth}");
        }
        assert!(!all_boundary_strata(&sys, &gm, &gp, 1).unwrap().is_empty());
    }

    #[test]
    fn single_intermediate_stratum() {
        let u = universe(&[("a", 10), ("m", 6), ("b", 2), ("c", 3)]);
        let sys = FlowSystem::new(u, [("a".into(), seq(&["m"])), ("m".into(), seq(&["b", "c"]))]).unwrap();
        let lam = Partition { lambda: vec![0, 0] };
        let s = boundary_strata(&sys, &seq(&["b", "c"]), &seq(&["a"]), &lam, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].chain.sequences[1], seq(&["m"]));
        assert_eq!(s[0].key, "a(m(0,1))");
        assert!(boundary_strata(&sys, &seq(&["b", "c"]), &seq(&["a"]), &lam, 2).unwrap().is_empty());
        let r = check_composition_associativity(&sys, &seq(&["b", "c"]), &seq(&["m"]), &seq(&["m"]), &seq(&["a"])).unwrap();
        assert!(r.holds && r.direct == 0);
    }

    #[test]
    fn duplicates_are_identified() {
        // Two copies of a top orbit breaking the same way in different orders
        // give the same stratum up to reordering of the intermediate.
        let u = universe(&[("a", 4), ("b", 2), ("c", 1)]);
        let sys = FlowSystem::new(u, [("a".into(), seq(&["b"])), ("b".into(), seq(&["c"]))]).unwrap();
        let gm = seq(&["c", "c"]);
        let gp = seq(&["a", "a"]);
        let all = all_boundary_strata(&sys, &gm, &gp, 2).unwrap();
        let keys: BTreeSet<&String> = all.iter().map(|s| &s.key).collect();
        assert_eq!(keys.len(), all.len());
        for s in &all {
            assert_eq!(s.chain.composed(), boundary_composed(&s.chain));
            assert!(sys.energy(&gm, &gp).unwrap() > qi(0));
        }
        let r = check_composition_associativity(&sys, &gm, &seq(&["b", "b"]), &seq(&["a", "b"]), &gp).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.direct > 0);
    }

    fn boundary_composed(c: &Chain) -> Partition {
        c.partitions.iter().skip(1).fold(c.partitions[0].clone(), |acc, p| p.after(&acc))
    }

    #[test]
    fn norms() {
        let a = seq(&["a"]);
        let b = seq(&["b"]);
        let c = seq(&["c"]);
        let p = Precedence::from_pairs(&[(a.clone(), b.clone()), (b.clone(), c.clone())]).unwrap();
        assert_eq!(p.norm(&a, &c), Some(1));
        assert_eq!(p.norm(&c, &a), None);
        let q = Precedence::from_pairs(&[(a.clone(), c.clone())]).unwrap();
        assert_eq!(q.norm(&a, &c), Some(0));
        assert!(Precedence::from_pairs(&[(a.clone(), b.clone()), (b, a)]).is_err());
        assert!(p.to_dot().contains("->"));
    }

    #[test]
    fn symmetric_action_is_a_group_action() {
        let gm = seq(&["x", "y", "x"]);
        let gp = seq(&["p", "q"]);
        let perms = crate::levels::permutations(&[0usize, 1, 2]);
        for p in enumerate_partitions(&gm, &gp, None).unwrap() {
            let (s, q) = act_on_minus(&[0, 1, 2], &gm, &p);
            assert_eq!((s, q), (gm.clone(), p.clone()));
            for sigma in &perms {
                for tau in &perms {
                    let st: Vec<usize> = (0..3).map(|i| sigma[tau[i]]).collect();
                    let (g1, p1) = act_on_minus(tau, &gm, &p);
                    let lhs = act_on_minus(sigma, &g1, &p1);
                    assert_eq!(lhs, act_on_minus(&st, &gm, &p));
                }
            }
            // Swapping the two x entries maps Λ to Λ ∘ swap, a partition of
            // the same sequence.
            let (s, _) = act_on_minus(&[2, 1, 0], &gm, &p);
            assert_eq!(s, gm);
            let (s2, p2) = act_on_plus(&[1, 0], &gp, &p);
            assert_eq!(s2, seq(&["q", "p"]));
            assert_eq!(act_on_plus(&[1, 0], &s2, &p2).1, p);
        }
    }
}
