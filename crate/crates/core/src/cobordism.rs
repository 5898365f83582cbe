//! Cobordism trees: decorated trees whose vertices record which piece of an
//! exact cobordism `X` (with ends `Y⁺` above and `Y⁻` below) they map to.
//!
//! Star labels use `0` for the positive end and `1` for the negative end. A
//! vertex with `(∗₊, ∗₋) = (0, 0)` lives in the symplectization of `Y⁺`,
//! `(1, 1)` in that of `Y⁻`, and `(0, 1)` in the cobordism itself.

use crate::error::{Error, Result};
use crate::levels::{id_sorted_key, level_diagnostics, LevelFunction};
use crate::rational::Q;
use crate::trees::{validate_tree, DecoratedTree, Dir};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobordismTree {
    #[serde(flatten)]
    pub tree: DecoratedTree,
    /// Star of each internal edge, keyed `"from->to"`.
    #[serde(default)]
    pub edge_star: BTreeMap<String, u8>,
    pub vstar_plus: BTreeMap<String, u8>,
    pub vstar_minus: BTreeMap<String, u8>,
}

/// Which piece of the cobordism a vertex maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    /// `(0, 0)`: symplectization of the positive end.
    UpperEnd,
    /// `(0, 1)`: the cobordism.
    Cobordism,
    /// `(1, 1)`: symplectization of the negative end.
    LowerEnd,
}

pub fn edge_key(from: &str, to: &str) -> String {
    format!("{from}->{to}")
}

impl CobordismTree {
    /// Labels every vertex with `stars` and every internal edge with the
    /// lower star of its positive end.
    pub fn from_stars(tree: DecoratedTree, stars: &BTreeMap<String, (u8, u8)>) -> Self {
        let vstar_plus = stars.iter().map(|(k, v)| (k.clone(), v.0)).collect();
        let vstar_minus: BTreeMap<String, u8> = stars.iter().map(|(k, v)| (k.clone(), v.1)).collect();
        let edge_star = tree
            .internal_edges
            .iter()
            .map(|e| (edge_key(&e.from, &e.to), vstar_minus.get(&e.from).copied().unwrap_or(0)))
            .collect();
        CobordismTree { tree, edge_star, vstar_plus, vstar_minus }
    }

    pub fn stars(&self, v: &str) -> Option<(u8, u8)> {
        Some((*self.vstar_plus.get(v)?, *self.vstar_minus.get(v)?))
    }

    pub fn piece(&self, v: &str) -> Option<Piece> {
        match self.stars(v)? {
            (0, 0) => Some(Piece::UpperEnd),
            (0, 1) => Some(Piece::Cobordism),
            (1, 1) => Some(Piece::LowerEnd),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CobordismReport {
    pub valid: bool,
    pub stable: bool,
    pub diagnostics: Vec<String>,
}

/// Checks the star-label axioms and stability.
///
/// Axioms: labels are 0 or 1; `∗₊(v) ≤ ∗₋(v)`; an incoming exterior edge at
/// `v` forces `∗₊(v) = 0` and an outgoing one `∗₋(v) = 1`; an internal edge
/// `e = (v, w)` satisfies `∗(e) = ∗₋(v) = ∗₊(w)`. Stability: no vertex with
/// `∗₊ = ∗₋` is trivial.
pub fn validate_cobordism_tree(c: &CobordismTree) -> CobordismReport {
    let mut d = Vec::new();
    let tr = validate_tree(&c.tree, None);
    d.extend(tr.diagnostics.iter().map(|x| format!("{}: {}", x.location, x.message)));
    for v in &c.tree.vertices {
        match c.stars(&v.id) {
            None => d.push(format!("vertex `{}`: missing star label", v.id)),
            Some((p, m)) => {
                if p > 1 || m > 1 {
                    d.push(format!("vertex `{}`: star labels must be 0 or 1", v.id));
                } else if p > m {
                    d.push(format!("vertex `{}`: ∗₊ = {p} exceeds ∗₋ = {m}", v.id));
                }
            }
        }
    }
    for map in [&c.vstar_plus, &c.vstar_minus] {
        for k in map.keys() {
            if c.tree.vertex_index(k).is_none() {
                d.push(format!("star label for unknown vertex `{k}`"));
            }
        }
    }
    for x in &c.tree.exterior_edges {
        let Some((p, m)) = c.stars(&x.vertex) else { continue };
        match x.dir {
            Dir::In if p != 0 => d.push(format!("vertex `{}`: positive exterior edge requires ∗₊ = 0", x.vertex)),
            Dir::Out if m != 1 => d.push(format!("vertex `{}`: negative exterior edge requires ∗₋ = 1", x.vertex)),
            _ => {}
        }
    }
    let keys: BTreeSet<String> = c.tree.internal_edges.iter().map(|e| edge_key(&e.from, &e.to)).collect();
    for k in c.edge_star.keys() {
        if !keys.contains(k) {
            d.push(format!("edge star for unknown edge `{k}`"));
        }
    }
    for e in &c.tree.internal_edges {
        let key = edge_key(&e.from, &e.to);
        let Some(&s) = c.edge_star.get(&key) else {
            d.push(format!("edge `{key}`: missing star label"));
            continue;
        };
        if let (Some((_, mv)), Some((pw, _))) = (c.stars(&e.from), c.stars(&e.to)) {
            if s != mv || s != pw {
                d.push(format!("edge `{key}`: star {s} must equal ∗₋({}) = {mv} and ∗₊({}) = {pw}", e.from, e.to));
            }
        }
    }
    let valid = d.is_empty();
    let stable = valid
        && c.tree.vertices.iter().all(|v| {
            let (p, m) = c.stars(&v.id).expect("checked");
            p != m || !c.tree.is_trivial_vertex(&v.id)
        });
    if valid && !stable {
        d.push("a symplectization vertex is trivial".into());
    }
    CobordismReport { valid, stable, diagnostics: d }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeveledCobordismTree {
    pub cob: CobordismTree,
    pub level: LevelFunction,
    pub cob_level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CobordismLevels {
    pub leveled: Vec<LeveledCobordismTree>,
    /// Explanation when the list is empty.
    pub note: Option<String>,
}

impl CobordismLevels {
    pub fn count(&self) -> usize {
        self.leveled.len()
    }
}

/// Linear extensions of the sub-DAG on `verts`, optionally requiring the first
/// vertex to satisfy `first_ok`.
fn linear_extensions(verts: &[usize], edges: &[(usize, usize)], first_ok: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let inside: BTreeSet<usize> = verts.iter().copied().collect();
    let local: Vec<(usize, usize)> = edges.iter().copied().filter(|(a, b)| inside.contains(a) && inside.contains(b)).collect();
    let mut out = Vec::new();
    let mut placed: Vec<usize> = Vec::new();
    fn rec(
        verts: &[usize],
        local: &[(usize, usize)],
        placed: &mut Vec<usize>,
        first_ok: &dyn Fn(usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if placed.len() == verts.len() {
            out.push(placed.clone());
            return;
        }
        for &v in verts {
            if placed.contains(&v) {
                continue;
            }
            if placed.is_empty() && !first_ok(v) {
                continue;
            }
            if local.iter().any(|&(a, b)| b == v && !placed.contains(&a)) {
                continue;
            }
            placed.push(v);
            rec(verts, local, placed, first_ok, out);
            placed.pop();
        }
    }
    rec(verts, &local, &mut placed, first_ok, &mut out);
    out
}

/// All maximally leveled structures: every floor other than `𝔠` holds one
/// vertex, floor `𝔠` holds exactly the cobordism vertices, upper-end vertices
/// lie above it and lower-end vertices below it.
pub fn enumerate_maximal_levels_cob(c: &CobordismTree) -> Result<CobordismLevels> {
    let rep = validate_cobordism_tree(c);
    if !rep.valid {
        return Err(Error::invalid(rep.diagnostics.join("; ")));
    }
    let t = &c.tree;
    let sh = t.shape()?;
    let piece = |v: usize| c.piece(&t.vertices[v].id).expect("validated");
    let upper: Vec<usize> = (0..sh.n).filter(|&v| piece(v) == Piece::UpperEnd).collect();
    let middle: Vec<usize> = (0..sh.n).filter(|&v| piece(v) == Piece::Cobordism).collect();
    let lower: Vec<usize> = (0..sh.n).filter(|&v| piece(v) == Piece::LowerEnd).collect();
    let empty = |note: &str| Ok(CobordismLevels { leveled: Vec::new(), note: Some(note.to_string()) });
    if middle.is_empty() {
        return empty("no cobordism vertex, so the cobordism level would be empty");
    }
    let cob_level = upper.len() as u32 + 1;
    if upper.is_empty() && middle.iter().any(|&v| !sh.is_input[v]) {
        return empty("the cobordism level is level 1 but holds a vertex without an incoming exterior edge");
    }
    let tops = linear_extensions(&upper, &sh.edges, &|v| sh.is_input[v]);
    let bottoms = linear_extensions(&lower, &sh.edges, &|_| true);
    let mut found: Vec<Vec<u32>> = Vec::new();
    for top in &tops {
        for bottom in &bottoms {
            let mut l = vec![0u32; sh.n];
            for (i, &v) in top.iter().enumerate() {
                l[v] = i as u32 + 1;
            }
            for &v in &middle {
                l[v] = cob_level;
            }
            for (i, &v) in bottom.iter().enumerate() {
                l[v] = cob_level + 1 + i as u32;
            }
            if level_diagnostics(t, &sh, &l).is_empty() {
                found.push(l);
            }
        }
    }
    found.sort_by_key(|l| id_sorted_key(t, l));
    let note = found.is_empty().then(|| "no admissible level function".to_string());
    Ok(CobordismLevels {
        leveled: found
            .iter()
            .map(|l| LeveledCobordismTree { cob: c.clone(), level: LevelFunction::from_indexed(t, l), cob_level })
            .collect(),
        note,
    })
}

/// Contracts internal edges of a cobordism tree. A merged vertex takes the
/// smallest `∗₊` and the largest `∗₋` of its fiber.
pub fn contract_cobordism(c: &CobordismTree, edges: &BTreeSet<usize>) -> Result<CobordismTree> {
    let con = crate::trees::contract(&c.tree, edges)?;
    let mut stars: BTreeMap<String, (u8, u8)> = BTreeMap::new();
    for (v, &img) in con.vertex_map.iter().enumerate() {
        let id = &c.tree.vertices[v].id;
        let (p, m) = c.stars(id).ok_or_else(|| Error::invalid(format!("vertex `{id}`: missing star label")))?;
        let target = con.target.vertices[img].id.clone();
        stars.entry(target).and_modify(|s| *s = (s.0.min(p), s.1.max(m))).or_insert((p, m));
    }
    Ok(CobordismTree::from_stars(con.target, &stars))
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Star labels of every vertex from degree divisibility.
///
/// With `δ(v) = framing_degree(v) − ω_degree(v)`: if `δ ≠ 0` and `p⁺ | δ`
/// the vertex is `(0, 0)`; if `p⁻ | δ` it is `(1, 1)`; if neither divides it
/// is `(0, 1)`. If `δ = 0` the orders `|d_x|` of the type-1 nodes on adjacent
/// internal edges decide: `p⁻ | |d_x|` gives `(1, 1)`, `p⁺ | |d_x|` gives
/// `(0, 0)`, and with no such node the vertex is `(0, 1)`. Both primes
/// dividing is reported as [`Error::Ambiguous`].
///
/// `node_orders` is keyed like `edge_star` (`"from->to"`); order 0 means a
/// type-0 node.
pub fn infer_star_labels(
    t: &DecoratedTree,
    framing_degrees: &BTreeMap<String, i64>,
    omega_degrees: &BTreeMap<String, i64>,
    node_orders: &BTreeMap<String, i64>,
    p_plus: i64,
    p_minus: i64,
) -> Result<BTreeMap<String, (u8, u8)>> {
    if !is_prime(p_plus) || !is_prime(p_minus) || p_plus == p_minus {
        return Err(Error::invalid(format!("p⁺ = {p_plus} and p⁻ = {p_minus} must be distinct primes")));
    }
    let mut out = BTreeMap::new();
    for v in &t.vertices {
        let fd = framing_degrees.get(&v.id).ok_or_else(|| Error::invalid(format!("no framing degree for `{}`", v.id)))?;
        let od = omega_degrees.get(&v.id).ok_or_else(|| Error::invalid(format!("no ω degree for `{}`", v.id)))?;
        let delta = fd - od;
        let (by_plus, by_minus) = if delta != 0 {
            (delta % p_plus == 0, delta % p_minus == 0)
        } else {
            let orders: Vec<i64> = t
                .internal_edges
                .iter()
                .filter(|e| e.from == v.id || e.to == v.id)
                .filter_map(|e| node_orders.get(&edge_key(&e.from, &e.to)).copied())
                .map(i64::abs)
                .filter(|&o| o != 0)
                .collect();
            (orders.iter().any(|o| o % p_plus == 0), orders.iter().any(|o| o % p_minus == 0))
        };
        let label = match (by_plus, by_minus) {
            (true, true) => return Err(Error::Ambiguous(v.id.clone())),
            (true, false) => (0, 0),
            (false, true) => (1, 1),
            (false, false) => (0, 1),
        };
        out.insert(v.id.clone(), label);
    }
    Ok(out)
}

/// Framing degree of a vertex of a cobordism building:
/// `|D_v| − 2 + p^{∗₊(v)}·Σ_in 𝒜̃ − p^{∗₋(v)}·Σ_out 𝒜̃`, where `p⁰ = p⁺` and
/// `p¹ = p⁻`. Returns `(framing degree, ω degree = |D_v| − 2)` per vertex.
pub fn cobordism_degrees(
    c: &CobordismTree,
    approx_actions: &BTreeMap<String, i64>,
    p_plus: i64,
    p_minus: i64,
) -> Result<(BTreeMap<String, i64>, BTreeMap<String, i64>)> {
    let t = &c.tree;
    let action = |o: &str| approx_actions.get(o).copied().ok_or_else(|| Error::UnknownOrbit(o.to_string()));
    let prime = |s: u8| if s == 0 { p_plus } else { p_minus };
    let mut framing = BTreeMap::new();
    let mut omega = BTreeMap::new();
    for v in &t.vertices {
        let (sp, sm) = c.stars(&v.id).ok_or_else(|| Error::invalid(format!("vertex `{}`: missing star label", v.id)))?;
        let mut special = 0i64;
        let (mut plus, mut minus) = (0i64, 0i64);
        for e in &t.internal_edges {
            if e.to == v.id {
                plus += action(&e.orbit)?;
                special += 1;
            }
            if e.from == v.id {
                minus += action(&e.orbit)?;
                special += 1;
            }
        }
        for x in t.exterior_edges.iter().filter(|x| x.vertex == v.id) {
            special += 1;
            match x.dir {
                Dir::In => plus += action(&x.orbit)?,
                Dir::Out => minus += action(&x.orbit)?,
            }
        }
        framing.insert(v.id.clone(), special - 2 + prime(sp) * plus - prime(sm) * minus);
        omega.insert(v.id.clone(), special - 2);
    }
    Ok((framing, omega))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum GluingVar {
    /// Gluing parameter of an internal edge, by index.
    Edge(usize),
    /// Gluing parameter of an upper-end vertex, by id.
    Vertex(String),
}

/// `lhs = edge + rest`, with `rest` absent when the lower vertex of the edge
/// is not an upper-end vertex (its parameter is then read as 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingEquation {
    pub lhs: GluingVar,
    pub edge: GluingVar,
    pub rest: Option<GluingVar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingConstraintSystem {
    pub variables: Vec<GluingVar>,
    pub equations: Vec<GluingEquation>,
}

/// What a point of the gluing-parameter space does to the tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingStratum {
    pub contracted_edges: Vec<usize>,
    /// Upper-end vertices pushed into the cobordism.
    pub flipped_vertices: Vec<String>,
}

pub fn gluing_constraints(c: &CobordismTree) -> Result<GluingConstraintSystem> {
    let rep = validate_cobordism_tree(c);
    if !rep.valid {
        return Err(Error::invalid(rep.diagnostics.join("; ")));
    }
    let t = &c.tree;
    let upper = |id: &str| c.piece(id) == Some(Piece::UpperEnd);
    let mut variables: Vec<GluingVar> = (0..t.internal_edges.len()).map(GluingVar::Edge).collect();
    variables.extend(t.vertices.iter().filter(|v| upper(&v.id)).map(|v| GluingVar::Vertex(v.id.clone())));
    let equations = t
        .internal_edges
        .iter()
        .enumerate()
        .filter(|(_, e)| upper(&e.from))
        .map(|(k, e)| GluingEquation {
            lhs: GluingVar::Vertex(e.from.clone()),
            edge: GluingVar::Edge(k),
            rest: upper(&e.to).then(|| GluingVar::Vertex(e.to.clone())),
        })
        .collect();
    Ok(GluingConstraintSystem { variables, equations })
}

impl GluingConstraintSystem {
    /// Checks an assignment (`None` = ∞, values must be ≥ 0) against every
    /// equation and returns the stratum it lies in: edges with finite
    /// parameter are contracted and vertices with finite parameter move into
    /// the cobordism.
    pub fn stratum(&self, assignment: &BTreeMap<GluingVar, Option<Q>>) -> Result<GluingStratum> {
        let get = |v: &GluingVar| -> Result<Option<Q>> {
            let x = assignment.get(v).ok_or_else(|| Error::invalid(format!("no value for {v:?}")))?;
            if let Some(q) = x {
                if q.is_negative() {
                    return Err(Error::invalid(format!("negative gluing parameter for {v:?}")));
                }
            }
            Ok(x.clone())
        };
        for eq in &self.equations {
            let lhs = get(&eq.lhs)?;
            let e = get(&eq.edge)?;
            let rest = match &eq.rest {
                Some(r) => get(r)?,
                None => Some(Q::zero()),
            };
            let rhs = match (e, rest) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            if lhs != rhs {
                return Err(Error::invalid(format!("equation for {:?} violated", eq.lhs)));
            }
        }
        let mut contracted = Vec::new();
        let mut flipped = Vec::new();
        for v in &self.variables {
            if get(v)?.is_some() {
                match v {
                    GluingVar::Edge(k) => contracted.push(*k),
                    GluingVar::Vertex(id) => flipped.push(id.clone()),
                }
            }
        }
        Ok(GluingStratum { contracted_edges: contracted, flipped_vertices: flipped })
    }

    /// Solves for the vertex parameters from finite edge parameters by
    /// back-substitution from the lowest upper-end vertices. Fails when two
    /// equations for the same vertex disagree.
    pub fn back_substitute(&self, edges: &BTreeMap<usize, Q>) -> Result<BTreeMap<String, Q>> {
        let mut values: BTreeMap<String, Q> = BTreeMap::new();
        let mut pending: Vec<&GluingEquation> = self.equations.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest_pending = Vec::new();
            for eq in pending {
                let GluingVar::Vertex(lhs) = &eq.lhs else { unreachable!("lhs is a vertex") };
                let GluingVar::Edge(k) = eq.edge else { unreachable!("edge term") };
                let rest = match &eq.rest {
                    None => Some(Q::zero()),
                    Some(GluingVar::Vertex(w)) => values.get(w).cloned(),
                    Some(GluingVar::Edge(_)) => unreachable!("rest is a vertex"),
                };
                let Some(rest) = rest else {
                    rest_pending.push(eq);
                    continue;
                };
                let e = edges.get(&k).ok_or_else(|| Error::invalid(format!("no value for edge {k}")))?;
                let val = e + rest;
                match values.get(lhs) {
                    Some(old) if *old != val => {
                        return Err(Error::invalid(format!("inconsistent parameters at vertex `{lhs}`")));
                    }
                    _ => {
                        values.insert(lhs.clone(), val);
                    }
                }
            }
            if rest_pending.len() == before {
                return Err(Error::invalid("constraint system is not triangular"));
            }
            pending = rest_pending;
        }
        Ok(values)
    }
}
