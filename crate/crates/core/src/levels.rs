//! Level functions on decorated trees.
//!
//! A level function sends each vertex to a floor `1, 2, …` such that
//! floor 1 only holds vertices with an incoming exterior edge, every internal
//! edge `(v, w)` strictly descends (`ℓ(w) ≥ ℓ(v) + 1`), and no floor between
//! 1 and the maximum is empty.

use crate::error::{Error, Result};
use crate::trees::{validate_tree, DecoratedTree, InternalEdge, Shape, Vertex};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LevelFunction {
    pub levels: BTreeMap<String, u32>,
}

impl LevelFunction {
    pub fn get(&self, v: &str) -> Option<u32> {
        self.levels.get(v).copied()
    }

    pub fn size(&self) -> u32 {
        self.levels.values().copied().max().unwrap_or(0)
    }

    /// True when every floor holds at most one vertex.
    pub fn is_maximal(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.levels.values().all(|l| seen.insert(*l))
    }

    pub(crate) fn from_indexed(t: &DecoratedTree, l: &[u32]) -> Self {
        LevelFunction { levels: t.vertices.iter().zip(l).map(|(v, &x)| (v.id.clone(), x)).collect() }
    }

    /// Levels in vertex order of `t`; fails if some vertex is unassigned.
    pub fn indexed(&self, t: &DecoratedTree) -> Result<Vec<u32>> {
        t.vertices
            .iter()
            .map(|v| self.get(&v.id).ok_or_else(|| Error::invalid(format!("vertex `{}` has no level", v.id))))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeveledTree {
    pub tree: DecoratedTree,
    pub level: LevelFunction,
}

impl LeveledTree {
    pub fn new(tree: DecoratedTree, level: LevelFunction) -> Result<Self> {
        let r = validate_level(&tree, &level);
        if !r.valid {
            return Err(Error::invalid(r.diagnostics.join("; ")));
        }
        Ok(LeveledTree { tree, level })
    }

    pub fn size(&self) -> u32 {
        self.level.size()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

fn checked_shape(t: &DecoratedTree) -> Result<Shape> {
    let r = validate_tree(t, None);
    if !r.is_tree {
        let msgs: Vec<String> = r.diagnostics.iter().map(|d| format!("{}: {}", d.location, d.message)).collect();
        return Err(Error::invalid(msgs.join("; ")));
    }
    t.shape()
}

/// Least `ℓ` with `ℓ(v) ≥ lower(v)` and `ℓ(w) ≥ ℓ(u) + 1` for every
/// constraint `(u, w)`. Constraints must be acyclic.
fn least_solution(n: usize, lower: &[u32], constraints: &[(usize, usize)]) -> Vec<u32> {
    let mut l = lower.to_vec();
    // Acyclic, so n rounds of relaxation reach the fixed point.
    for _ in 0..=n {
        let mut changed = false;
        for &(u, w) in constraints {
            if l[w] < l[u] + 1 {
                l[w] = l[u] + 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    l
}

/// Vertices with an incoming exterior edge and no parent.
pub fn input_sources(sh: &Shape) -> Vec<usize> {
    sh.sources().filter(|&v| sh.is_input[v]).collect()
}

fn base_lower(sh: &Shape) -> Vec<u32> {
    (0..sh.n).map(|v| if sh.is_input[v] { 1 } else { 2 }).collect()
}

pub(crate) fn pre_level_indexed(sh: &Shape) -> Result<Vec<u32>> {
    if input_sources(sh).is_empty() {
        return Err(Error::NoLevelFunction(
            "no vertex is both a source and carries an incoming exterior edge, so floor 1 would be empty".into(),
        ));
    }
    Ok(least_solution(sh.n, &base_lower(sh), &sh.edges))
}

/// The pointwise-minimal level function.
///
/// Inputs start at floor 1, other vertices at floor 2, and every edge pushes
/// its negative end at least one floor below its positive end.
pub fn pre_level(t: &DecoratedTree) -> Result<LevelFunction> {
    let sh = checked_shape(t)?;
    Ok(LevelFunction::from_indexed(t, &pre_level_indexed(&sh)?))
}

pub(crate) fn level_diagnostics(t: &DecoratedTree, sh: &Shape, l: &[u32]) -> Vec<String> {
    let mut out = Vec::new();
    for (v, &x) in l.iter().enumerate() {
        if x == 0 {
            out.push(format!("vertex `{}`: level must be positive", t.vertices[v].id));
        } else if x == 1 && !sh.is_input[v] {
            out.push(format!("vertex `{}` is on level 1 without an incoming exterior edge", t.vertices[v].id));
        }
    }
    for &(v, w) in &sh.edges {
        if l[w] < l[v] + 1 {
            out.push(format!(
                "edge ({}, {}): level {} does not lie below level {}",
                t.vertices[v].id, t.vertices[w].id, l[w], l[v]
            ));
        }
    }
    let max = l.iter().copied().max().unwrap_or(0);
    let used: BTreeSet<u32> = l.iter().copied().collect();
    for j in 1..=max {
        if !used.contains(&j) {
            out.push(format!("level {j} is empty"));
        }
    }
    out
}

/// Checks the three level axioms, collecting every violation.
pub fn validate_level(t: &DecoratedTree, l: &LevelFunction) -> LevelReport {
    let sh = match checked_shape(t) {
        Ok(s) => s,
        Err(e) => return LevelReport { valid: false, diagnostics: vec![e.to_string()] },
    };
    let mut diagnostics = Vec::new();
    for id in l.levels.keys() {
        if t.vertex_index(id).is_none() {
            diagnostics.push(format!("level assigned to unknown vertex `{id}`"));
        }
    }
    match l.indexed(t) {
        Ok(ix) => diagnostics.extend(level_diagnostics(t, &sh, &ix)),
        Err(e) => diagnostics.push(e.to_string()),
    }
    LevelReport { valid: diagnostics.is_empty(), diagnostics }
}

/// Result of subdividing long edges by trivial vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub leveled: LeveledTree,
    /// Ids of the inserted vertices, in insertion order.
    pub inserted: Vec<String>,
    /// Indices of the internal edges that collapse back onto the source tree.
    pub collapsible_edges: BTreeSet<usize>,
}

/// Subdivides every edge `(v, w)` with `ℓ(w) − ℓ(v) − 1 = g > 0` by `g`
/// degree-zero vertices, one per skipped floor.
///
/// The first segment of each subdivided edge keeps the original edge's
/// position; the remaining segments are appended, so collapsing
/// `collapsible_edges` reproduces the input tree exactly. Inserted ids start
/// with `~`.
pub fn insert_trivial_vertices(lt: &LeveledTree) -> Result<Subdivision> {
    let t = &lt.tree;
    let sh = checked_shape(t)?;
    let l = lt.level.indexed(t)?;
    let diags = level_diagnostics(t, &sh, &l);
    if !diags.is_empty() {
        return Err(Error::invalid(diags.join("; ")));
    }
    let mut taken: BTreeSet<String> = t.vertices.iter().map(|v| v.id.clone()).collect();
    let mut tree = t.clone();
    let mut levels = lt.level.levels.clone();
    let mut inserted = Vec::new();
    let mut collapsible = BTreeSet::new();
    for (k, e) in t.internal_edges.iter().enumerate() {
        let (v, w) = sh.edges[k];
        let gap = l[w] - l[v] - 1;
        if gap == 0 {
            continue;
        }
        let mut chain = Vec::new();
        for i in 1..=gap {
            let mut id = format!("~{}.{}.{}", e.from, e.to, i);
            while taken.contains(&id) {
                id.push('~');
            }
            taken.insert(id.clone());
            tree.vertices.push(Vertex { id: id.clone(), degree: Zero::zero() });
            levels.insert(id.clone(), l[v] + i);
            inserted.push(id.clone());
            chain.push(id);
        }
        tree.internal_edges[k].to = chain[0].clone();
        let mut prev = chain[0].clone();
        for next in chain.iter().skip(1).chain(std::iter::once(&e.to)) {
            collapsible.insert(tree.internal_edges.len());
            tree.internal_edges.push(InternalEdge { from: prev.clone(), to: next.clone(), orbit: e.orbit.clone() });
            prev = next.clone();
        }
    }
    Ok(Subdivision {
        leveled: LeveledTree { tree, level: LevelFunction { levels } },
        inserted,
        collapsible_edges: collapsible,
    })
}

/// Walks the inductive maximalization of the pre-level.
///
/// The state is a prefix of floors `1..=k` holding one vertex each plus a set
/// of ordering constraints. The least level function compatible with the
/// state puts a set `S` of vertices on floor `k + 1`. Each of the `|S|!`
/// orderings of `S` is recorded as a chain of constraints, its first vertex is
/// fixed on floor `k + 1`, and the walk recurses. Every maximal level function
/// is reached by exactly one branch.
struct Maximalizer<'a> {
    sh: &'a Shape,
    lower: Vec<u32>,
}

impl Maximalizer<'_> {
    fn walk(&self, fixed: &mut Vec<Option<u32>>, k: u32, chains: &mut Vec<(usize, usize)>, visit: &mut dyn FnMut(&[u32])) {
        let n = self.sh.n;
        if k as usize == n {
            let l: Vec<u32> = fixed.iter().map(|x| x.expect("all fixed")).collect();
            visit(&l);
            return;
        }
        let lower: Vec<u32> = (0..n)
            .map(|v| match fixed[v] {
                Some(x) => x,
                None => self.lower[v].max(k + 1),
            })
            .collect();
        let mut cons = self.sh.edges.clone();
        cons.extend(chains.iter().copied());
        let l = least_solution(n, &lower, &cons);
        let s: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none() && l[v] == k + 1).collect();
        for perm in permutations(&s) {
            let added = perm.len().saturating_sub(1);
            for w in perm.windows(2) {
                chains.push((w[0], w[1]));
            }
            fixed[perm[0]] = Some(k + 1);
            self.walk(fixed, k + 1, chains, visit);
            fixed[perm[0]] = None;
            chains.truncate(chains.len() - added);
        }
    }
}

/// All orderings of `items` in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

pub(crate) fn maximal_levels_indexed(sh: &Shape) -> Result<Vec<Vec<u32>>> {
    pre_level_indexed(sh)?;
    let m = Maximalizer { sh, lower: base_lower(sh) };
    let mut out = Vec::new();
    m.walk(&mut vec![None; sh.n], 0, &mut Vec::new(), &mut |l| out.push(l.to_vec()));
    Ok(out)
}

/// Sort key: the level vector read in lexicographic order of vertex ids.
pub(crate) fn id_sorted_key(t: &DecoratedTree, l: &[u32]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..t.vertices.len()).collect();
    order.sort_by(|&a, &b| t.vertices[a].id.cmp(&t.vertices[b].id));
    order.iter().map(|&i| l[i]).collect()
}

/// Every maximally leveled structure on `t`, in lexicographic order of the
/// id-sorted level vector. The list length is the count `N_T`.
pub fn enumerate_maximal_levels(t: &DecoratedTree) -> Result<Vec<LevelFunction>> {
    let sh = checked_shape(t)?;
    let mut all = maximal_levels_indexed(&sh)?;
    all.sort_by_key(|l| id_sorted_key(t, l));
    Ok(all.iter().map(|l| LevelFunction::from_indexed(t, l)).collect())
}

/// `N_T`, counted along the same recursion without materializing the list.
pub fn count_maximal_levels(t: &DecoratedTree) -> Result<u64> {
    let sh = checked_shape(t)?;
    pre_level_indexed(&sh)?;
    let m = Maximalizer { sh: &sh, lower: base_lower(&sh) };
    let mut count = 0u64;
    m.walk(&mut vec![None; sh.n], 0, &mut Vec::new(), &mut |_| count += 1);
    Ok(count)
}
