//! Decorated trees: orbit-labeled directed trees with rational degree tags.
//!
//! An internal edge `(v, w)` points from its positive end `v` to its negative
//! end `w`, so `v` sits above `w` in any building. Exterior edges carry an
//! explicit direction: `In` is a positive puncture of the whole tree, `Out` a
//! negative one.

use crate::error::{Error, Result};
use crate::orbit::OrbitUniverse;
use crate::poset::{FacePoset, PosetElement};
use crate::rational::{fmt_q, serde_q, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    #[serde(with = "serde_q")]
    pub degree: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalEdge {
    pub from: String,
    pub to: String,
    pub orbit: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    In,
    Out,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorEdge {
    pub vertex: String,
    pub dir: Dir,
    pub orbit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DecoratedTree {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub internal_edges: Vec<InternalEdge>,
    #[serde(default)]
    pub exterior_edges: Vec<ExteriorEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedForest {
    pub components: Vec<DecoratedTree>,
}

/// Index-based adjacency of a tree whose references have been resolved.
#[derive(Debug, Clone)]
pub struct Shape {
    pub n: usize,
    /// `parents[w]` lists `(v, edge index)` for every internal edge `(v, w)`.
    pub parents: Vec<Vec<(usize, usize)>>,
    /// `children[v]` lists `(w, edge index)` for every internal edge `(v, w)`.
    pub children: Vec<Vec<(usize, usize)>>,
    /// Endpoints of each internal edge as vertex indices.
    pub edges: Vec<(usize, usize)>,
    /// Vertex has at least one incoming exterior edge.
    pub is_input: Vec<bool>,
}

impl Shape {
    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.parents[v].is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

/// Outcome of [`validate_tree`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub is_tree: bool,
    pub labels_ok: bool,
    pub trivial_vertices: Vec<String>,
    pub stable: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl TreeReport {
    pub fn valid(&self) -> bool {
        self.is_tree && self.labels_ok
    }
}

impl DecoratedTree {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    fn index_map(&self) -> Result<BTreeMap<&str, usize>> {
        let mut m = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if m.insert(v.id.as_str(), i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex id `{}`", v.id)));
            }
        }
        Ok(m)
    }

    /// Resolves ids into an index-based [`Shape`]. Fails on dangling vertex
    /// references and duplicate ids; does not check tree-ness.
    pub fn shape(&self) -> Result<Shape> {
        let idx = self.index_map()?;
        let n = self.vertices.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(self.internal_edges.len());
        for (k, e) in self.internal_edges.iter().enumerate() {
            let v = *idx.get(e.from.as_str()).ok_or_else(|| Error::invalid(format!("edge {k}: unknown vertex `{}`", e.from)))?;
            let w = *idx.get(e.to.as_str()).ok_or_else(|| Error::invalid(format!("edge {k}: unknown vertex `{}`", e.to)))?;
            parents[w].push((v, k));
            children[v].push((w, k));
            edges.push((v, w));
        }
        let mut is_input = vec![false; n];
        for (k, x) in self.exterior_edges.iter().enumerate() {
            let v = *idx
                .get(x.vertex.as_str())
                .ok_or_else(|| Error::invalid(format!("exterior edge {k}: unknown vertex `{}`", x.vertex)))?;
            if x.dir == Dir::In {
                is_input[v] = true;
            }
        }
        Ok(Shape { n, parents, children, edges, is_input })
    }

    /// Number of positive (`In`) and negative (`Out`) exterior edges.
    pub fn exterior_counts(&self) -> (usize, usize) {
        let plus = self.exterior_edges.iter().filter(|x| x.dir == Dir::In).count();
        (plus, self.exterior_edges.len() - plus)
    }

    /// Orbit labels of all edges adjacent to vertex `v`, internal and exterior.
    pub fn adjacent_orbits(&self, v: &str) -> Vec<&str> {
        let mut out = Vec::new();
        for e in &self.internal_edges {
            if e.from == v {
                out.push(e.orbit.as_str());
            }
            if e.to == v {
                out.push(e.orbit.as_str());
            }
        }
        for x in &self.exterior_edges {
            if x.vertex == v {
                out.push(x.orbit.as_str());
            }
        }
        out
    }

    /// A vertex is trivial when it has exactly two adjacent edges, both labeled
    /// by the same orbit, and degree tag zero.
    pub fn is_trivial_vertex(&self, v: &str) -> bool {
        let Some(i) = self.vertex_index(v) else { return false };
        if !self.vertices[i].degree.is_zero() {
            return false;
        }
        let orbits = self.adjacent_orbits(v);
        orbits.len() == 2 && orbits[0] == orbits[1]
    }

    pub fn total_degree(&self) -> Q {
        self.vertices.iter().map(|v| v.degree.clone()).sum()
    }

    /// Every orbit id mentioned by an edge.
    pub fn orbit_ids(&self) -> BTreeSet<&str> {
        self.internal_edges
            .iter()
            .map(|e| e.orbit.as_str())
            .chain(self.exterior_edges.iter().map(|x| x.orbit.as_str()))
            .collect()
    }
}

/// Structural validation with located diagnostics.
///
/// When a universe is supplied every orbit label must name one of its orbits.
pub fn validate_tree(t: &DecoratedTree, universe: Option<&OrbitUniverse>) -> TreeReport {
    let mut diags = Vec::new();
    let mut push = |loc: String, msg: String| diags.push(Diagnostic { location: loc, message: msg });

    let mut is_tree = true;
    let mut labels_ok = true;
    if t.vertices.is_empty() {
        push("/vertices".into(), "tree has no vertices".into());
        is_tree = false;
    }
    let mut seen = BTreeMap::new();
    for (i, v) in t.vertices.iter().enumerate() {
        if let Some(j) = seen.insert(v.id.as_str(), i) {
            push(format!("/vertices/{i}/id"), format!("duplicate vertex id `{}` (also at {j})", v.id));
            is_tree = false;
        }
        if v.degree.is_negative() {
            push(format!("/vertices/{i}/degree"), format!("degree {} is negative", fmt_q(&v.degree)));
            labels_ok = false;
        }
    }
    for (k, e) in t.internal_edges.iter().enumerate() {
        for (field, id) in [("from", &e.from), ("to", &e.to)] {
            if !seen.contains_key(id.as_str()) {
                push(format!("/internal_edges/{k}/{field}"), format!("unknown vertex `{id}`"));
                is_tree = false;
            }
        }
        if e.from == e.to {
            push(format!("/internal_edges/{k}"), format!("self-loop at `{}`", e.from));
            is_tree = false;
        }
    }
    for (k, x) in t.exterior_edges.iter().enumerate() {
        if !seen.contains_key(x.vertex.as_str()) {
            push(format!("/exterior_edges/{k}/vertex"), format!("unknown vertex `{}`", x.vertex));
            is_tree = false;
        }
    }
    if let Some(u) = universe {
        for (k, e) in t.internal_edges.iter().enumerate() {
            if !u.contains(&e.orbit) {
                push(format!("/internal_edges/{k}/orbit"), format!("unknown orbit `{}`", e.orbit));
                labels_ok = false;
            }
        }
        for (k, x) in t.exterior_edges.iter().enumerate() {
            if !u.contains(&x.orbit) {
                push(format!("/exterior_edges/{k}/orbit"), format!("unknown orbit `{}`", x.orbit));
                labels_ok = false;
            }
        }
    }

    if is_tree {
        let n = t.vertices.len();
        if t.internal_edges.len() + 1 != n {
            push(
                "/internal_edges".into(),
                format!("{} internal edges on {} vertices: a tree needs exactly {}", t.internal_edges.len(), n, n - 1),
            );
            is_tree = false;
        }
        // Connectivity of the underlying undirected graph.
        let sh = t.shape().expect("references checked above");
        let mut seen_v = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen_v[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in sh.children[v].iter().chain(sh.parents[v].iter()) {
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(lost) = seen_v.iter().position(|&b| !b) {
            push(format!("/vertices/{lost}"), format!("vertex `{}` is disconnected from `{}`", t.vertices[lost].id, t.vertices[0].id));
            is_tree = false;
        } else if t.internal_edges.len() + 1 != n {
            push("/internal_edges".into(), "underlying graph contains a cycle".into());
        }
    }

    let trivial_vertices: Vec<String> = if is_tree {
        t.vertices.iter().filter(|v| t.is_trivial_vertex(&v.id)).map(|v| v.id.clone()).collect()
    } else {
        Vec::new()
    };
    let stable = is_tree && trivial_vertices.is_empty();
    TreeReport { is_tree, labels_ok, trivial_vertices, stable, diagnostics: diags }
}

/// A contraction `p: source → target` collapsing a set of internal edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub source: DecoratedTree,
    pub target: DecoratedTree,
    pub collapsed: BTreeSet<usize>,
    /// For each internal edge of the source, its image edge in the target or
    /// `None` when collapsed.
    pub edge_map: Vec<Option<usize>>,
    /// For each source vertex, the index of its image vertex in the target.
    pub vertex_map: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Collapses exactly the given internal edges.
///
/// Each fiber of the vertex map is named after its lexicographically smallest
/// source vertex id, which makes iterated contractions agree with direct ones.
pub fn contract(t: &DecoratedTree, edges: &BTreeSet<usize>) -> Result<Contraction> {
    let sh = t.shape()?;
    if let Some(&bad) = edges.iter().find(|&&e| e >= sh.edges.len()) {
        return Err(Error::invalid(format!("edge index {bad} out of range")));
    }
    let mut uf = UnionFind::new(sh.n);
    for &e in edges {
        let (v, w) = sh.edges[e];
        uf.union(v, w);
    }
    // Representative name and summed degree per fiber.
    let mut fiber_name: BTreeMap<usize, String> = BTreeMap::new();
    let mut fiber_degree: BTreeMap<usize, Q> = BTreeMap::new();
    for i in 0..sh.n {
        let r = uf.find(i);
        let id = &t.vertices[i].id;
        fiber_name
            .entry(r)
            .and_modify(|s| {
                if id < s {
                    *s = id.clone()
                }
            })
            .or_insert_with(|| id.clone());
        *fiber_degree.entry(r).or_insert_with(Q::zero) += &t.vertices[i].degree;
    }
    // Target vertices keep the order of first appearance in the source.
    let mut order: Vec<usize> = Vec::new();
    let mut pos: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..sh.n {
        let r = uf.find(i);
        if let std::collections::btree_map::Entry::Vacant(e) = pos.entry(r) {
            e.insert(order.len());
            order.push(r);
        }
    }
    let vertices: Vec<Vertex> = order
        .iter()
        .map(|r| Vertex { id: fiber_name[r].clone(), degree: fiber_degree[r].clone() })
        .collect();
    let vertex_map: Vec<usize> = (0..sh.n).map(|i| pos[&uf.find(i)]).collect();
    let mut internal_edges = Vec::new();
    let mut edge_map = Vec::with_capacity(sh.edges.len());
    for (k, e) in t.internal_edges.iter().enumerate() {
        if edges.contains(&k) {
            edge_map.push(None);
        } else {
            let (v, w) = sh.edges[k];
            edge_map.push(Some(internal_edges.len()));
            internal_edges.push(InternalEdge {
                from: vertices[vertex_map[v]].id.clone(),
                to: vertices[vertex_map[w]].id.clone(),
                orbit: e.orbit.clone(),
            });
        }
    }
    let idx = t.index_map()?;
    let exterior_edges = t
        .exterior_edges
        .iter()
        .map(|x| ExteriorEdge {
            vertex: vertices[vertex_map[idx[x.vertex.as_str()]]].id.clone(),
            dir: x.dir,
            orbit: x.orbit.clone(),
        })
        .collect();
    Ok(Contraction {
        source: t.clone(),
        target: DecoratedTree { vertices, internal_edges, exterior_edges },
        collapsed: edges.clone(),
        edge_map,
        vertex_map,
    })
}

/// All contractions of `t`, indexed by collapsed-edge subsets and ordered by
/// inclusion. Element labels list the collapsed edge indices; the grade is
/// the number of collapsed edges, so the corolla is the unique maximum.
pub fn contraction_poset(t: &DecoratedTree) -> Result<FacePoset> {
    let m = t.internal_edges.len();
    if m > 20 {
        return Err(Error::Refused(format!("{m} internal edges: contraction poset too large")));
    }
    let mut masks: Vec<u32> = (0..(1u32 << m)).collect();
    masks.sort_by_key(|&s| (s.count_ones(), s));
    let mut index = vec![0usize; 1 << m];
    for (i, &s) in masks.iter().enumerate() {
        index[s as usize] = i;
    }
    let elements = masks
        .iter()
        .map(|&s| {
            let edges: Vec<String> = (0..m).filter(|b| s & (1 << b) != 0).map(|b| b.to_string()).collect();
            PosetElement { label: format!("{{{}}}", edges.join(",")), grade: s.count_ones() as i64 }
        })
        .collect();
    let mut covers = Vec::new();
    for &s in &masks {
        for b in 0..m {
            if s & (1 << b) == 0 {
                covers.push((index[s as usize], index[(s | (1 << b)) as usize]));
            }
        }
    }
    Ok(FacePoset { elements, covers })
}

/// A tree automorphism given by its action on vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    pub vertex_perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism { vertex_perm: (0..n).collect() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { vertex_perm: other.vertex_perm.iter().map(|&i| self.vertex_perm[i]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.vertex_perm.len()];
        for (i, &j) in self.vertex_perm.iter().enumerate() {
            inv[j] = i;
        }
        Automorphism { vertex_perm: inv }
    }
}

/// All label-, direction- and degree-preserving automorphisms of `t`, found
/// by exhaustive backtracking over compatible vertex bijections. Exterior
/// edges are matched as a multiset of `(direction, orbit)` per vertex.
/// Degree, exterior-edge multiset and labelled neighbour directions.
type Signature<'a> = (Q, Vec<(Dir, &'a str)>, Vec<(bool, &'a str)>);

pub fn automorphism_group(t: &DecoratedTree) -> Result<Vec<Automorphism>> {
    let sh = t.shape()?;
    let n = sh.n;
    if n == 0 {
        return Ok(vec![Automorphism::identity(0)]);
    }
    let idx = t.index_map()?;
    let mut ext_sig: Vec<Vec<(Dir, &str)>> = vec![Vec::new(); n];
    for x in &t.exterior_edges {
        ext_sig[idx[x.vertex.as_str()]].push((x.dir, x.orbit.as_str()));
    }
    for s in ext_sig.iter_mut() {
        s.sort();
    }
    // Directed labeled adjacency: (neighbor, outgoing?, orbit).
    let mut adj: Vec<BTreeMap<usize, (bool, &str)>> = vec![BTreeMap::new(); n];
    for (k, &(v, w)) in sh.edges.iter().enumerate() {
        let o = t.internal_edges[k].orbit.as_str();
        adj[v].insert(w, (true, o));
        adj[w].insert(v, (false, o));
    }
    let sig = |v: usize| {
        let mut nb: Vec<(bool, &str)> = adj[v].values().copied().collect();
        nb.sort();
        (t.vertices[v].degree.clone(), ext_sig[v].clone(), nb)
    };
    let sigs: Vec<_> = (0..n).map(sig).collect();
    // BFS order so that each vertex after the first has an assigned neighbor.
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in adj[v].keys() {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order.extend((0..n).filter(|&v| !seen[v]));

    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        depth: usize,
        order: &[usize],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        adj: &[BTreeMap<usize, (bool, &str)>],
        sigs: &[Signature<'_>],
        out: &mut Vec<Automorphism>,
    ) {
        if depth == order.len() {
            out.push(Automorphism { vertex_perm: image.clone() });
            return;
        }
        let v = order[depth];
        for cand in 0..image.len() {
            if used[cand] || sigs[cand] != sigs[v] {
                continue;
            }
            let consistent = adj[v].iter().all(|(&w, lab)| {
                let iw = image[w];
                iw == usize::MAX || adj[cand].get(&iw) == Some(lab)
            });
            if !consistent {
                continue;
            }
            image[v] = cand;
            used[cand] = true;
            rec(depth + 1, order, image, used, adj, sigs, out);
            image[v] = usize::MAX;
            used[cand] = false;
        }
    }
    rec(0, &order, &mut image, &mut used, &adj, &sigs, &mut out);
    out.sort();
    Ok(out)
}

/// Automorphisms of the source tree that leave the contraction invariant.
///
/// A contraction is identified with its set of collapsed edges, so `σ` fixes
/// `c` exactly when it maps the collapsed set onto itself. With this reading
/// the identity contraction is fixed by the whole automorphism group.
pub fn relative_automorphisms(c: &Contraction) -> Result<Vec<Automorphism>> {
    let sh = c.source.shape()?;
    let edge_of: BTreeMap<(usize, usize), usize> = sh.edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let all = automorphism_group(&c.source)?;
    Ok(all
        .into_iter()
        .filter(|s| {
            c.collapsed.iter().all(|&k| {
                let (v, w) = sh.edges[k];
                let image = edge_of[&(s.vertex_perm[v], s.vertex_perm[w])];
                c.collapsed.contains(&image)
            })
        })
        .collect())
}

fn fresh_id(taken: &BTreeSet<String>, base: &str) -> String {
    let mut id = base.to_string();
    while taken.contains(&id) {
        id.push('\'');
    }
    id
}

/// Joins the components of a forest below a ghost root.
///
/// The new root has degree zero and one incoming exterior edge labeled
/// `gamma0`; each component's unique input edge is replaced by an internal
/// edge from the root carrying the same orbit.
pub fn ghost_join(f: &DecoratedForest, gamma0: &str) -> Result<DecoratedTree> {
    if f.components.is_empty() {
        return Err(Error::invalid("forest has no components"));
    }
    let mut taken = BTreeSet::new();
    for (c, t) in f.components.iter().enumerate() {
        for v in &t.vertices {
            if !taken.insert(v.id.clone()) {
                return Err(Error::invalid(format!("vertex id `{}` repeated across components (component {c})", v.id)));
            }
        }
    }
    let root = fresh_id(&taken, "ghost");
    let mut out = DecoratedTree {
        vertices: vec![Vertex { id: root.clone(), degree: Q::zero() }],
        internal_edges: Vec::new(),
        exterior_edges: vec![ExteriorEdge { vertex: root.clone(), dir: Dir::In, orbit: gamma0.to_string() }],
    };
    for (c, t) in f.components.iter().enumerate() {
        let inputs: Vec<&ExteriorEdge> = t.exterior_edges.iter().filter(|x| x.dir == Dir::In).collect();
        if inputs.len() != 1 {
            return Err(Error::invalid(format!("component {c} has {} inputs, expected exactly one", inputs.len())));
        }
        let input = inputs[0];
        out.vertices.extend(t.vertices.iter().cloned());
        out.internal_edges.push(InternalEdge { from: root.clone(), to: input.vertex.clone(), orbit: input.orbit.clone() });
        out.internal_edges.extend(t.internal_edges.iter().cloned());
        out.exterior_edges.extend(t.exterior_edges.iter().filter(|x| x.dir == Dir::Out).cloned());
    }
    Ok(out)
}

/// `2(d−3) + 2(d+1)d + 3(#Γ⁻ + #Γ⁺) − #E^int`.
pub fn tree_dimension(t: &DecoratedTree, d: u64) -> i64 {
    let d = d as i64;
    let ext = t.exterior_edges.len() as i64;
    2 * (d - 3) + 2 * (d + 1) * d + 3 * ext - t.internal_edges.len() as i64
}

/// Small constructors used throughout tests and examples.
pub mod build {
    use super::*;
    use crate::rational::qi;

    pub fn vertex(id: &str, degree: i64) -> Vertex {
        Vertex { id: id.into(), degree: qi(degree) }
    }

    pub fn edge(from: &str, to: &str, orbit: &str) -> InternalEdge {
        InternalEdge { from: from.into(), to: to.into(), orbit: orbit.into() }
    }

    pub fn input(v: &str, orbit: &str) -> ExteriorEdge {
        ExteriorEdge { vertex: v.into(), dir: Dir::In, orbit: orbit.into() }
    }

    pub fn output(v: &str, orbit: &str) -> ExteriorEdge {
        ExteriorEdge { vertex: v.into(), dir: Dir::Out, orbit: orbit.into() }
    }

    pub fn tree(vertices: Vec<Vertex>, internal: Vec<InternalEdge>, exterior: Vec<ExteriorEdge>) -> DecoratedTree {
        DecoratedTree { vertices, internal_edges: internal, exterior_edges: exterior }
    }

    /// Root `r` with one input and `k` leaf children `c0..`, each with one output.
    pub fn star(k: usize) -> DecoratedTree {
        let mut vs = vec![vertex("r", 1)];
        let mut es = Vec::new();
        let mut xs = vec![input("r", "g")];
        for i in 0..k {
            let c = format!("c{i}");
            vs.push(vertex(&c, 1));
            es.push(edge("r", &c, "g"));
            xs.push(output(&c, "g"));
        }
        tree(vs, es, xs)
    }

    /// Directed chain `v0 → v1 → … → v(k-1)` with an input at `v0`.
    pub fn chain(k: usize) -> DecoratedTree {
        let vs = (0..k).map(|i| vertex(&format!("v{i}"), 1)).collect();
        let es = (1..k).map(|i| edge(&format!("v{}", i - 1), &format!("v{i}"), "g")).collect();
        let mut xs = vec![input("v0", "g")];
        xs.push(output(&format!("v{}", k - 1), "g"));
        tree(vs, es, xs)
    }
}
