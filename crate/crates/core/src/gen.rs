//! Generators for test families: oriented tree shapes up to isomorphism,
//! decorated trees built from them, and small random inputs.

use crate::cobordism::CobordismTree;
use crate::error::Result;
use crate::homology::{build_generators, derivation_on_word, CountEntry, CountTable, Cutoff};
use crate::linalg::kernel;
use crate::orbit::{OrbitUniverse, Parity, ReebOrbit};
use crate::rational::{qi, Q};
use num_traits::Zero;
use crate::trees::{DecoratedTree, Dir, ExteriorEdge, InternalEdge, Vertex};
use rand::Rng;
use std::collections::BTreeMap;

/// An unlabeled oriented tree on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedShape {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl OrientedShape {
    fn neighbors(&self) -> Vec<Vec<(usize, bool)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(v, w) in &self.edges {
            adj[v].push((w, true));
            adj[w].push((v, false));
        }
        adj
    }

    /// Canonical string: minimum over all roots of the rooted encoding, where
    /// each child is tagged by the direction of its connecting edge.
    pub fn canonical(&self) -> String {
        let adj = self.neighbors();
        fn enc(v: usize, parent: usize, adj: &[Vec<(usize, bool)>]) -> String {
            let mut parts: Vec<String> = adj[v]
                .iter()
                .filter(|&&(w, _)| w != parent)
                .map(|&(w, down)| format!("{}{}", if down { 'd' } else { 'u' }, enc(w, v, adj)))
                .collect();
            parts.sort();
            format!("({})", parts.concat())
        }
        (0..self.n).map(|r| enc(r, usize::MAX, &adj)).min().unwrap_or_default()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.edges.iter().any(|&(_, w)| w == v)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.edges.iter().any(|&(u, _)| u == v)).collect()
    }
}

/// All oriented trees with exactly `n` vertices, one per isomorphism class,
/// sorted by canonical form.
pub fn oriented_trees(n: usize) -> Vec<OrientedShape> {
    if n == 0 {
        return Vec::new();
    }
    let mut layer: BTreeMap<String, OrientedShape> = BTreeMap::new();
    let one = OrientedShape { n: 1, edges: vec![] };
    layer.insert(one.canonical(), one);
    for size in 1..n {
        let mut next = BTreeMap::new();
        for s in layer.values() {
            for v in 0..size {
                for down in [true, false] {
                    let mut t = s.clone();
                    t.n += 1;
                    t.edges.push(if down { (v, size) } else { (size, v) });
                    next.entry(t.canonical()).or_insert(t);
                }
            }
        }
        layer = next;
    }
    layer.into_values().collect()
}

/// Decorates a shape: vertex `i` is `v{i}` with degree 1, internal edge `k`
/// carries `labels[k]`, every vertex in `inputs` gets an incoming exterior
/// edge and every sink an outgoing one.
pub fn decorate(shape: &OrientedShape, inputs: &[usize], labels: &[&str], exterior_label: &str) -> DecoratedTree {
    let name = |i: usize| format!("v{i}");
    let vertices = (0..shape.n).map(|i| Vertex { id: name(i), degree: qi(1) }).collect();
    let internal_edges = shape
        .edges
        .iter()
        .enumerate()
        .map(|(k, &(v, w))| InternalEdge { from: name(v), to: name(w), orbit: labels[k % labels.len()].to_string() })
        .collect();
    let mut exterior_edges: Vec<ExteriorEdge> = inputs
        .iter()
        .map(|&v| ExteriorEdge { vertex: name(v), dir: Dir::In, orbit: exterior_label.to_string() })
        .collect();
    for v in shape.sinks() {
        exterior_edges.push(ExteriorEdge { vertex: name(v), dir: Dir::Out, orbit: exterior_label.to_string() });
    }
    DecoratedTree { vertices, internal_edges, exterior_edges }
}

/// Every subset of `0..n` as a sorted vector, ordered by bitmask.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..(1u32 << n)).map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect()).collect()
}

/// A uniformly random labeled tree on `n` vertices with random edge
/// directions, random orbit labels, and inputs at every source plus a random
/// subset of other vertices.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, labels: &[&str]) -> DecoratedTree {
    let mut edges = Vec::new();
    for w in 1..n {
        let v = rng.gen_range(0..w);
        edges.push(if rng.gen_bool(0.5) { (v, w) } else { (w, v) });
    }
    let shape = OrientedShape { n, edges };
    let mut inputs = shape.sources();
    for v in 0..n {
        if !inputs.contains(&v) && rng.gen_bool(0.2) {
            inputs.push(v);
        }
    }
    inputs.sort();
    let edge_labels: Vec<&str> = (0..n.saturating_sub(1)).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
    let mut t = decorate(&shape, &inputs, if edge_labels.is_empty() { labels } else { &edge_labels }, labels[0]);
    for v in t.vertices.iter_mut() {
        v.degree = Q::new(rng.gen_range(0..6i64).into(), rng.gen_range(1..4i64).into());
    }
    t
}

/// A universe of `k` simple orbits `o0..` with random integral actions in
/// `1..=max_action` and random parities, plus bound `L` above every action.
pub fn random_universe<R: Rng>(rng: &mut R, k: usize, max_action: i64) -> OrbitUniverse {
    let orbits: Vec<ReebOrbit> = (0..k)
        .map(|i| {
            let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
            ReebOrbit::simple(&format!("o{i}"), qi(rng.gen_range(1..=max_action)), parity)
        })
        .collect();
    OrbitUniverse::new(qi(max_action * 8), orbits).expect("generated universe is valid")
}

/// A random cobordism tree on `n` vertices with integral actions making every
/// symplectization vertex carry positive energy. Orbit `a{k}` has action `k`.
/// When `two_sided` is set every cobordism vertex has both incoming and
/// outgoing punctures. Returns the tree and the action of each orbit.
pub fn random_cobordism_tree<R: Rng>(rng: &mut R, n: usize, two_sided: bool) -> (CobordismTree, BTreeMap<String, i64>) {
    const STARS: [(u8, u8); 3] = [(0, 0), (0, 1), (1, 1)];
    loop {
        let mut edges = Vec::new();
        for w in 1..n {
            let v = rng.gen_range(0..w);
            edges.push(if rng.gen_bool(0.5) { (v, w) } else { (w, v) });
        }
        let class: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let allowed = |a: usize, b: usize| matches!((a, b), (0, 0) | (0, 1) | (1, 2) | (2, 2));
        if !edges.iter().all(|&(v, w)| allowed(class[v], class[w])) || !class.contains(&1) {
            continue;
        }
        let parents = |v: usize| edges.iter().filter(|e| e.1 == v).count();
        if (0..n).any(|v| class[v] == 2 && parents(v) == 0) {
            continue;
        }
        // Sinks first, so every outgoing edge is priced before its source.
        let mut order: Vec<usize> = Vec::new();
        let mut placed = vec![false; n];
        while order.len() < n {
            for v in 0..n {
                if !placed[v] && edges.iter().all(|&(a, b)| a != v || placed[b]) {
                    placed[v] = true;
                    order.push(v);
                }
            }
        }
        let mut edge_action = vec![0i64; edges.len()];
        let mut exterior: Vec<(usize, Dir, i64)> = Vec::new();
        for &v in &order {
            let mut out_sum: i64 = edges.iter().zip(&edge_action).filter(|(e, _)| e.0 == v).map(|(_, a)| a).sum();
            if class[v] >= 1 {
                let has_children = edges.iter().any(|e| e.0 == v);
                let lo = usize::from(two_sided && class[v] == 1 && !has_children);
                for _ in 0..rng.gen_range(lo..=2) {
                    let a = rng.gen_range(1..=3);
                    out_sum += a;
                    exterior.push((v, Dir::Out, a));
                }
            }
            let incoming: Vec<usize> = (0..edges.len()).filter(|&k| edges[k].1 == v).collect();
            let mut ext_in = 0;
            if class[v] <= 1 {
                ext_in = rng.gen_range(usize::from(incoming.is_empty())..=1);
            }
            let slots = incoming.len() + ext_in;
            // Energy is nonnegative at every vertex and positive off the
            // cobordism level, so each edge action is bounded by the
            // positive ends above it.
            let mut total = out_sum + if class[v] == 1 { rng.gen_range(0..=3) } else { rng.gen_range(1..=3) };
            total = total.max(slots as i64);
            let mut parts = vec![1i64; slots];
            for _ in 0..(total - slots as i64) {
                parts[rng.gen_range(0..slots)] += 1;
            }
            for (i, &k) in incoming.iter().enumerate() {
                edge_action[k] = parts[i];
            }
            for &a in &parts[incoming.len()..] {
                exterior.push((v, Dir::In, a));
            }
        }
        let name = |i: usize| format!("v{i}");
        let orbit = |a: i64| format!("a{a}");
        let tree = DecoratedTree {
            vertices: (0..n).map(|i| Vertex { id: name(i), degree: qi(1) }).collect(),
            internal_edges: edges
                .iter()
                .zip(&edge_action)
                .map(|(&(v, w), &a)| InternalEdge { from: name(v), to: name(w), orbit: orbit(a) })
                .collect(),
            exterior_edges: exterior
                .iter()
                .map(|&(v, dir, a)| ExteriorEdge { vertex: name(v), dir, orbit: orbit(a) })
                .collect(),
        };
        let mut approx = BTreeMap::new();
        for a in edge_action.iter().chain(exterior.iter().map(|e| &e.2)) {
            approx.insert(orbit(*a), *a);
        }
        let stars = (0..n).map(|v| (name(v), STARS[class[v]])).collect();
        return (CobordismTree::from_stars(tree, &stars), approx);
    }
}

/// A count table whose differential squares to zero on the action-truncated
/// complex. Generators are processed by increasing action; each `∂γ` is a
/// random rational combination of cycles among the words of smaller action
/// and opposite parity, or zero.
pub fn random_closed_counts<R: Rng>(rng: &mut R, u: &OrbitUniverse, max_action: &Q) -> Result<CountTable> {
    let basis = build_generators(u, &Cutoff::action(max_action.clone()))?;
    let mut on_generators: BTreeMap<usize, BTreeMap<Vec<usize>, Q>> = BTreeMap::new();
    let mut counts = Vec::new();
    for (g, gen) in basis.generators.iter().enumerate() {
        let candidates: Vec<usize> = (0..basis.len())
            .filter(|&w| basis.words[w].action < gen.action && basis.words[w].parity != gen.parity)
            .collect();
        if candidates.is_empty() || rng.gen_bool(0.25) {
            continue;
        }
        let mut m = vec![vec![Q::zero(); candidates.len()]; basis.len()];
        for (c, &w) in candidates.iter().enumerate() {
            for (letters, v) in derivation_on_word(&basis, &on_generators, &basis.words[w].letters) {
                let row = basis.position(&letters).expect("the differential lowers action");
                m[row][c] = v;
            }
        }
        let cycles = kernel(&m, candidates.len());
        let mut image = vec![Q::zero(); candidates.len()];
        for z in &cycles {
            let k = qi(rng.gen_range(-2..=2));
            for (x, y) in image.iter_mut().zip(z) {
                *x += &k * y;
            }
        }
        let mut dg = BTreeMap::new();
        for (c, v) in image.into_iter().enumerate() {
            if !v.is_zero() {
                let letters = basis.words[candidates[c]].letters.clone();
                counts.push(CountEntry {
                    positive: gen.id.clone(),
                    negative: letters.iter().map(|&i| basis.generators[i].id.clone()).collect(),
                    value: v.clone(),
                    vdim: Some(0),
                    c1: None,
                });
                dg.insert(letters, v);
            }
        }
        if !dg.is_empty() {
            on_generators.insert(g, dg);
        }
    }
    Ok(CountTable { n: None, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::validate_tree;
    use rand::SeedableRng;

    #[test]
    fn oriented_tree_counts() {
        // Number of oriented trees on n unlabeled vertices.
        let expected = [1, 1, 3, 8, 27, 91, 350];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(oriented_trees(i + 1).len(), e, "n = {}", i + 1);
        }
    }

    #[test]
    fn canonical_form_ignores_vertex_names() {
        let a = OrientedShape { n: 3, edges: vec![(0, 1), (0, 2)] };
        let b = OrientedShape { n: 3, edges: vec![(2, 0), (2, 1)] };
        let c = OrientedShape { n: 3, edges: vec![(0, 1), (1, 2)] };
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(a.canonical(), c.canonical());
    }

    #[test]
    fn closed_tables_square_to_zero() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let u = random_universe(&mut rng, 4, 4);
            let table = random_closed_counts(&mut rng, &u, &qi(8)).unwrap();
            let basis = build_generators(&u, &Cutoff::action(qi(8))).unwrap();
            let c = crate::homology::build_differential(&u, basis, &table).unwrap();
            assert!(c.check_boundary_squared().ok);
            assert!(!c.is_truncated());
        }
    }

    #[test]
    fn random_cobordism_trees_are_valid() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for n in 1..8 {
            for two_sided in [false, true] {
                let (c, _) = random_cobordism_tree(&mut rng, n, two_sided);
                let r = crate::cobordism::validate_cobordism_tree(&c);
                assert!(r.valid && r.stable, "{r:?}");
            }
        }
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 1..10 {
            let t = random_tree(&mut rng, n, &["g", "h"]);
            assert!(validate_tree(&t, None).is_tree);
        }
    }
}
