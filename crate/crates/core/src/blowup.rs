//! Corner blow-up combinatorics.
//!
//! The corner of the moduli space indexed by a tree `T` is modelled by the
//! free monoid `ℕ^{E(T)}`, one coordinate per internal edge. A maximally
//! leveled structure `ℓ` (a bijection `V → {1..n}`) cuts the tree between
//! consecutive floors; cut `j` crosses the edges `(v, w)` with
//! `ℓ(v) ≤ j < ℓ(w)`, and the indicator vectors of the `n − 1` cuts generate
//! a unimodular cone. These cones, over all `ℓ`, refine the corner.
//!
//! A face of such a cone spanned by a subset `J` of the cuts corresponds to
//! the leveled tree obtained by merging the floors between consecutive cuts
//! of `J` and collapsing the edges that no longer cross a floor boundary.

use crate::error::{Error, Result};
use crate::levels::{enumerate_maximal_levels, pre_level, LevelFunction, LeveledTree};
use crate::linalg::{det_int, inverse, lp_max, Matrix};
use crate::poset::{FacePoset, PosetElement};
use crate::trees::{contract, ghost_join, DecoratedForest, DecoratedTree};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A finitely generated monoid inside `ℕ^rank`, stored by its generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FreeMonoid {
    pub rank: usize,
    #[serde(serialize_with = "ser_int_matrix")]
    pub generators: Vec<Vec<BigInt>>,
}

fn ser_int_matrix<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

impl FreeMonoid {
    pub fn standard(rank: usize) -> Self {
        let generators = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        FreeMonoid { rank, generators }
    }

    pub fn from_i64(rank: usize, gens: &[Vec<i64>]) -> Self {
        FreeMonoid { rank, generators: gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect() }
    }

    /// Determinant of the generator matrix, or `None` when it is not square.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.generators.len() != self.rank {
            return None;
        }
        // Generators are columns; the determinant is transpose-invariant.
        Some(det_int(&self.generators))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_some_and(|d| d.abs().is_one())
    }

    fn as_i64(&self) -> Vec<Vec<i64>> {
        self.generators
            .iter()
            .map(|g| g.iter().map(|x| x.to_i64().expect("generator entry fits in i64")).collect())
            .collect()
    }
}

/// Cut generators of a maximal level function given in vertex index order,
/// with coordinates in the order `edge_order`.
fn cut_vectors(edges: &[(usize, usize)], l: &[u32], edge_order: &[usize]) -> Vec<Vec<i64>> {
    let n = l.len() as u32;
    (1..n)
        .map(|j| {
            edge_order
                .iter()
                .map(|&k| {
                    let (v, w) = edges[k];
                    i64::from(l[v] <= j && j < l[w])
                })
                .collect()
        })
        .collect()
}

fn check_order(m: usize, edge_order: &[usize]) -> Result<()> {
    let set: BTreeSet<usize> = edge_order.iter().copied().collect();
    if edge_order.len() != m || set.len() != m || set.iter().any(|&k| k >= m) {
        return Err(Error::invalid(format!("edge order must be a permutation of 0..{m}")));
    }
    Ok(())
}

fn maximal_indexed(lt: &LeveledTree) -> Result<Vec<u32>> {
    let r = crate::levels::validate_level(&lt.tree, &lt.level);
    if !r.valid {
        return Err(Error::invalid(r.diagnostics.join("; ")));
    }
    if !lt.level.is_maximal() {
        return Err(Error::invalid("level function is not maximal: some floor holds several vertices"));
    }
    lt.level.indexed(&lt.tree)
}

/// The cone of a maximally leveled tree: one generator per cut between
/// consecutive floors. Coordinates follow `edge_order`, a permutation of the
/// internal edge indices.
pub fn leveled_monoid(lt: &LeveledTree, edge_order: &[usize]) -> Result<FreeMonoid> {
    let l = maximal_indexed(lt)?;
    let sh = lt.tree.shape()?;
    check_order(sh.edges.len(), edge_order)?;
    Ok(FreeMonoid::from_i64(sh.edges.len(), &cut_vectors(&sh.edges, &l, edge_order)))
}

/// The literal triangular formula
/// `e′_i = e_i + Σ { e_j : pℓ(e_j) ≤ pℓ(e_i), ℓ(e_j) < ℓ(e_i) }`, where the
/// level of an edge is the level of its target vertex.
///
/// Kept for comparison: on a directed chain it yields a cone that does not
/// cover the corner, so [`leveled_monoid`] uses cut generators instead.
pub fn leveled_monoid_paper(lt: &LeveledTree, edge_order: &[usize]) -> Result<FreeMonoid> {
    let l = maximal_indexed(lt)?;
    let sh = lt.tree.shape()?;
    check_order(sh.edges.len(), edge_order)?;
    let pl = pre_level(&lt.tree)?.indexed(&lt.tree)?;
    let m = sh.edges.len();
    let gens = edge_order
        .iter()
        .map(|&i| {
            let (_, wi) = sh.edges[i];
            edge_order
                .iter()
                .map(|&j| {
                    let (_, wj) = sh.edges[j];
                    i64::from(i == j || (pl[wj] <= pl[wi] && l[wj] < l[wi]))
                })
                .collect()
        })
        .collect::<Vec<Vec<i64>>>();
    Ok(FreeMonoid::from_i64(m, &gens))
}

/// Maximal cones of the refinement of a corner, with the level functions
/// that produced them (same order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub base: FreeMonoid,
    pub maximal_cones: Vec<FreeMonoid>,
    pub levels: Vec<LevelFunction>,
}

/// The refinement generated by all maximally leveled structures on `t`,
/// in the coordinate order of `t.internal_edges`.
pub fn build_refinement(t: &DecoratedTree) -> Result<Refinement> {
    let levels = enumerate_maximal_levels(t)?;
    let sh = t.shape()?;
    let m = sh.edges.len();
    let order: Vec<usize> = (0..m).collect();
    let maximal_cones = levels
        .iter()
        .map(|l| Ok(FreeMonoid::from_i64(m, &cut_vectors(&sh.edges, &l.indexed(t)?, &order))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Refinement { base: FreeMonoid::standard(m), maximal_cones, levels })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RefinementFailure {
    NotSquare { cone: usize },
    NotUnimodular { cone: usize, determinant: String },
    OutsideBase { cone: usize },
    /// The intersection of two cones is not a face of `cone`; `witness` lies
    /// in both cones but outside the largest common face.
    NonFaceIntersection { cone: usize, other: usize, witness: Vec<String> },
    /// A wall of `cone` in the interior of the base is not shared by exactly
    /// one other cone.
    UnmatchedWall { cone: usize, wall: Vec<usize>, neighbours: usize },
    UncoveredGenerator { generator: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub smooth: bool,
    pub determinants: Vec<String>,
    pub failures: Vec<RefinementFailure>,
}

/// Square integer matrix with the generators as columns.
fn columns(cone: &[Vec<i64>], rank: usize) -> Vec<Vec<i64>> {
    (0..rank).map(|r| cone.iter().map(|g| g[r]).collect()).collect()
}

/// Inverse of a unimodular matrix, which is integral.
fn int_inverse(cols: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let m: Matrix = cols.iter().map(|r| r.iter().map(|&x| crate::rational::qi(x)).collect()).collect();
    let inv = inverse(&m)?;
    inv.iter()
        .map(|r| r.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect())
        .collect()
}

/// Checks that `cone_a ∩ cone_b` is a face of `cone_b`. `a_inv` is the
/// inverse of `cone_a`'s column matrix. Returns a witness on failure.
fn intersection_is_face_of_second(a_inv: &[Vec<i64>], b_cols: &[Vec<i64>]) -> std::result::Result<(), Vec<crate::Q>> {
    let r = b_cols.len();
    let m = b_cols.first().map_or(0, |x| x.len());
    // A = a_inv · B: coordinates of cone_b's generators in cone_a's basis.
    let a: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..m).map(|j| (0..r).map(|k| a_inv[i][k] * b_cols[k][j]).sum()).collect())
        .collect();
    let in_a: Vec<bool> = (0..m).map(|j| (0..r).all(|i| a[i][j] >= 0)).collect();
    // Propagate sign-forced zeros among μ ≥ 0 with Aμ ≥ 0.
    let mut free: Vec<bool> = vec![true; m];
    loop {
        let mut changed = false;
        for row in &a {
            if (0..m).all(|j| !free[j] || row[j] <= 0) {
                for j in 0..m {
                    if free[j] && row[j] < 0 {
                        free[j] = false;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    if (0..m).all(|j| !free[j] || in_a[j]) {
        return Ok(());
    }
    // Exact LP: maximize Σ_{j ∉ J} μ_j over μ ≥ 0, −Aμ ≤ 0, Σμ ≤ 1.
    let q = crate::rational::qi;
    let mut lp_a: Matrix = a.iter().map(|row| row.iter().map(|&x| q(-x)).collect()).collect();
    lp_a.push(vec![q(1); m]);
    let mut b = vec![q(0); r];
    b.push(q(1));
    let c: Vec<crate::Q> = (0..m).map(|j| if in_a[j] { q(0) } else { q(1) }).collect();
    let (best, mu) = lp_max(&lp_a, &b, &c).expect("bounded by the simplex constraint");
    if best.is_zero() {
        return Ok(());
    }
    // The optimum lies in both cones but outside the largest common face.
    Err((0..r).map(|i| (0..m).map(|j| q(b_cols[i][j]) * &mu[j]).sum()).collect())
}

/// Certifies smoothness and completeness of a refinement of `ℕ^rank`.
///
/// Checked exactly: every cone is square and unimodular with nonnegative
/// generators; every pairwise intersection is a face of both cones (exact
/// rational LP); every wall of a cone that is not contained in a coordinate
/// hyperplane is shared with exactly one other cone, which together with the
/// face condition makes the union the whole orthant; every base generator
/// lies in some cone.
pub fn is_smooth_refinement(r: &Refinement) -> SmoothnessCertificate {
    let rank = r.base.rank;
    let mut failures = Vec::new();
    let mut determinants = Vec::new();
    let cones: Vec<Vec<Vec<i64>>> = r.maximal_cones.iter().map(|c| c.as_i64()).collect();
    let mut inverses: Vec<Option<Vec<Vec<i64>>>> = Vec::new();
    for (i, c) in r.maximal_cones.iter().enumerate() {
        match c.determinant() {
            None => {
                failures.push(RefinementFailure::NotSquare { cone: i });
                determinants.push("-".into());
                inverses.push(None);
                continue;
            }
            Some(d) => {
                determinants.push(d.to_string());
                if !d.abs().is_one() {
                    failures.push(RefinementFailure::NotUnimodular { cone: i, determinant: d.to_string() });
                }
            }
        }
        if c.generators.iter().any(|g| g.iter().any(|x| x.is_negative())) {
            failures.push(RefinementFailure::OutsideBase { cone: i });
        }
        inverses.push(int_inverse(&columns(&cones[i], rank)));
    }
    if !failures.is_empty() {
        return SmoothnessCertificate { smooth: false, determinants, failures };
    }
    let cols: Vec<Vec<Vec<i64>>> = cones.iter().map(|c| columns(c, rank)).collect();
    for (i, inv) in inverses.iter().enumerate() {
        for (j, cj) in cols.iter().enumerate() {
            if i == j {
                continue;
            }
            let inv = inv.as_ref().expect("unimodular");
            if let Err(w) = intersection_is_face_of_second(inv, cj) {
                failures.push(RefinementFailure::NonFaceIntersection {
                    cone: j,
                    other: i,
                    witness: w.iter().map(crate::rational::fmt_q).collect(),
                });
            }
        }
    }
    // Walls: generator sets with one generator removed.
    let mut walls: HashMap<Vec<Vec<i64>>, Vec<usize>> = HashMap::new();
    for (i, c) in cones.iter().enumerate() {
        for drop in 0..c.len() {
            let mut wall: Vec<Vec<i64>> = c.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, g)| g.clone()).collect();
            wall.sort();
            walls.entry(wall).or_default().push(i);
        }
    }
    for (wall, owners) in &walls {
        let on_boundary = (0..rank).any(|coord| wall.iter().all(|g| g[coord] == 0));
        if !on_boundary && owners.len() != 2 {
            let cone = owners[0];
            let positions = wall.iter().map(|g| cones[cone].iter().position(|h| h == g).expect("wall of cone")).collect();
            failures.push(RefinementFailure::UnmatchedWall { cone, wall: positions, neighbours: owners.len() - 1 });
        }
    }
    for g in 0..rank {
        let covered = inverses.iter().flatten().any(|inv| (0..rank).all(|row| inv[row][g] >= 0));
        if !covered {
            failures.push(RefinementFailure::UncoveredGenerator { generator: g });
        }
    }
    failures.sort_by_key(|f| format!("{f:?}"));
    SmoothnessCertificate { smooth: failures.is_empty(), determinants, failures }
}

/// Result of sampling every integer point of `[0, side]^rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxCoverage {
    pub points: usize,
    pub uncovered: Vec<Vec<i64>>,
    /// Points in the interior of more than one cone.
    pub multiple_interior: Vec<Vec<i64>>,
    /// Points whose smallest containing face differs between cones.
    pub face_mismatch: Vec<Vec<i64>>,
}

impl BoxCoverage {
    pub fn ok(&self) -> bool {
        self.uncovered.is_empty() && self.multiple_interior.is_empty() && self.face_mismatch.is_empty()
    }
}

/// Enumerates, per cone, every nonnegative integer combination of its
/// generators inside the box and records which cones hit each point. A point
/// must be hit by some cone, lie in at most one cone interior, and have the
/// same carrier face (set of generators with positive coefficient) in every
/// cone containing it.
///
/// Only lattice points reachable with integer coefficients are recorded, which
/// for unimodular cones is every lattice point of the cone.
pub fn box_coverage(r: &Refinement, side: i64) -> BoxCoverage {
    let rank = r.base.rank;
    let total = ((side + 1) as usize).pow(rank as u32);
    let mut hits = vec![0u32; total];
    let mut interior = vec![0u32; total];
    let mut carrier: Vec<Option<Vec<u32>>> = vec![None; total];
    let mut mismatch = vec![false; total];
    let mut ids: HashMap<Vec<i64>, u32> = HashMap::new();
    let index = |p: &[i64]| p.iter().rev().fold(0usize, |acc, &x| acc * (side as usize + 1) + x as usize);

    for cone in r.maximal_cones.iter().map(|c| c.as_i64()) {
        let gid: Vec<u32> = cone
            .iter()
            .map(|g| {
                let next = ids.len() as u32;
                *ids.entry(g.clone()).or_insert(next)
            })
            .collect();
        let mut point = vec![0i64; rank];
        let mut coeff = vec![0i64; cone.len()];
        fn rec(
            k: usize,
            cone: &[Vec<i64>],
            side: i64,
            point: &mut Vec<i64>,
            coeff: &mut Vec<i64>,
            visit: &mut dyn FnMut(&[i64], &[i64]),
        ) {
            if k == cone.len() {
                visit(point, coeff);
                return;
            }
            loop {
                rec(k + 1, cone, side, point, coeff, visit);
                for (x, g) in point.iter_mut().zip(&cone[k]) {
                    *x += g;
                }
                coeff[k] += 1;
                if point.iter().any(|&x| x > side) {
                    for (x, g) in point.iter_mut().zip(&cone[k]) {
                        *x -= g * coeff[k];
                    }
                    coeff[k] = 0;
                    return;
                }
            }
        }
        rec(0, &cone, side, &mut point, &mut coeff, &mut |p, c| {
            let i = index(p);
            hits[i] += 1;
            if c.iter().all(|&x| x > 0) {
                interior[i] += 1;
            }
            let mut key: Vec<u32> = c.iter().zip(&gid).filter(|(x, _)| **x > 0).map(|(_, g)| *g).collect();
            key.sort_unstable();
            match &carrier[i] {
                None => carrier[i] = Some(key),
                Some(k) if *k != key => mismatch[i] = true,
                _ => {}
            }
        });
    }
    let decode = |mut i: usize| -> Vec<i64> {
        (0..rank)
            .map(|_| {
                let x = (i % (side as usize + 1)) as i64;
                i /= side as usize + 1;
                x
            })
            .collect()
    };
    BoxCoverage {
        points: total,
        uncovered: (0..total).filter(|&i| hits[i] == 0).map(decode).collect(),
        multiple_interior: (0..total).filter(|&i| interior[i] > 1).map(decode).collect(),
        face_mismatch: (0..total).filter(|&i| mismatch[i]).map(decode).collect(),
    }
}

/// A face of the refinement together with the leveled tree it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceLabel {
    /// Internal edges of `t` collapsed in the labeling tree.
    pub collapsed: Vec<usize>,
    pub leveled: LeveledTree,
}

/// Face poset of a refinement with leveled-tree labels. Grades are cone
/// dimensions, equal to the codimension of the corresponding stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinementPoset {
    pub poset: FacePoset,
    pub labels: Vec<FaceLabel>,
    /// Generators spanning each face.
    pub generators: Vec<Vec<Vec<i64>>>,
}

impl RefinementPoset {
    pub fn faces_of_dimension(&self, k: usize) -> usize {
        self.poset.elements.iter().filter(|e| e.grade == k as i64).count()
    }
}

/// The leveled tree attached to the face of the cone of `l` (maximal, vertex
/// index order) spanned by the cuts in `cuts` (values in `1..n`).
fn face_label(t: &DecoratedTree, edges: &[(usize, usize)], l: &[u32], cuts: &BTreeSet<u32>) -> Result<FaceLabel> {
    let block = |x: u32| 1 + cuts.iter().filter(|&&j| j < x).count() as u32;
    let collapsed: BTreeSet<usize> = edges
        .iter()
        .enumerate()
        .filter(|(_, &(v, w))| block(l[v]) == block(l[w]))
        .map(|(k, _)| k)
        .collect();
    let c = contract(t, &collapsed)?;
    let mut levels = BTreeMap::new();
    for (v, &img) in c.vertex_map.iter().enumerate() {
        levels.insert(c.target.vertices[img].id.clone(), block(l[v]));
    }
    Ok(FaceLabel {
        collapsed: collapsed.into_iter().collect(),
        leveled: LeveledTree { tree: c.target, level: LevelFunction { levels } },
    })
}

/// All faces of all maximal cones of [`build_refinement`], identified across
/// cones by their sorted generator sets, ordered by inclusion.
pub fn refinement_face_poset(t: &DecoratedTree) -> Result<RefinementPoset> {
    let r = build_refinement(t)?;
    let sh = t.shape()?;
    let m = sh.edges.len();
    if m > 12 {
        return Err(Error::Refused(format!("{m} internal edges: face enumeration too large")));
    }
    let mut faces: BTreeMap<(usize, Vec<Vec<i64>>), FaceLabel> = BTreeMap::new();
    for (cone, lf) in r.maximal_cones.iter().zip(&r.levels) {
        let gens = cone.as_i64();
        let l = lf.indexed(t)?;
        for mask in 0u32..(1 << gens.len()) {
            let mut key: Vec<Vec<i64>> = (0..gens.len()).filter(|b| mask & (1 << b) != 0).map(|b| gens[b].clone()).collect();
            key.sort();
            let dim = key.len();
            if let std::collections::btree_map::Entry::Vacant(e) = faces.entry((dim, key)) {
                let cuts: BTreeSet<u32> = (0..gens.len()).filter(|b| mask & (1 << b) != 0).map(|b| b as u32 + 1).collect();
                e.insert(face_label(t, &sh.edges, &l, &cuts)?);
            }
        }
    }
    let keys: Vec<&(usize, Vec<Vec<i64>>)> = faces.keys().collect();
    let position: HashMap<&Vec<Vec<i64>>, usize> = keys.iter().enumerate().map(|(i, (_, g))| (g, i)).collect();
    let mut covers = Vec::new();
    for (j, (_, gens)) in keys.iter().enumerate() {
        for drop in 0..gens.len() {
            let sub: Vec<Vec<i64>> = gens.iter().enumerate().filter(|&(k, _)| k != drop).map(|(_, g)| g.clone()).collect();
            covers.push((position[&sub], j));
        }
    }
    covers.sort_unstable();
    let elements = faces
        .iter()
        .map(|((dim, _), lab)| PosetElement { label: describe(lab), grade: *dim as i64 })
        .collect();
    let generators = keys.iter().map(|(_, g)| g.clone()).collect();
    Ok(RefinementPoset { poset: FacePoset { elements, covers }, labels: faces.into_values().collect(), generators })
}

fn describe(f: &FaceLabel) -> String {
    let mut by_level: BTreeMap<u32, Vec<&str>> = BTreeMap::new();
    for (v, l) in &f.leveled.level.levels {
        by_level.entry(*l).or_default().push(v);
    }
    let floors: Vec<String> = by_level.values().map(|vs| vs.join(",")).collect();
    floors.join(" | ")
}

/// Refinement for a disconnected domain, realized on the ghost-joined tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisconnectedRefinement {
    pub tree: DecoratedTree,
    pub refinement: Refinement,
    /// Internal edges of `tree` joining the ghost root to the components.
    pub ghost_edges: Vec<usize>,
    pub poset: RefinementPoset,
    /// Poset elements in which no ghost edge is collapsed: the ghost root is
    /// alone on its floor, which is the deepest stratum of the base.
    pub deepest: Vec<usize>,
}

pub fn disconnected_refinement(f: &DecoratedForest, gamma0: &str) -> Result<DisconnectedRefinement> {
    let tree = ghost_join(f, gamma0)?;
    let root = tree.vertices[0].id.clone();
    let ghost_edges: Vec<usize> =
        tree.internal_edges.iter().enumerate().filter(|(_, e)| e.from == root).map(|(k, _)| k).collect();
    let refinement = build_refinement(&tree)?;
    let poset = refinement_face_poset(&tree)?;
    let deepest = poset
        .labels
        .iter()
        .enumerate()
        .filter(|(_, lab)| ghost_edges.iter().all(|g| !lab.collapsed.contains(g)))
        .map(|(i, _)| i)
        .collect();
    Ok(DisconnectedRefinement { tree, refinement, ghost_edges, poset, deepest })
}

/// Largest simplex dimension accepted by [`blowup_simplex`].
pub const SIMPLEX_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
struct PolyFace {
    verts: Vec<u32>,
    dim: usize,
    /// Bitmask of the original simplex face this is the strict transform of.
    origin: Option<u32>,
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

/// Truncates the face `f` of a polytope given by its face list (vertex sets,
/// whole polytope included, empty face excluded).
fn truncate(faces: Vec<PolyFace>, f: &[u32], next_vertex: &mut u32) -> Vec<PolyFace> {
    let fset: BTreeSet<u32> = f.iter().copied().collect();
    let mut cut: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for e in faces.iter().filter(|g| g.dim == 1) {
        let (a, b) = (e.verts[0], e.verts[1]);
        if fset.contains(&a) != fset.contains(&b) {
            cut.insert((a, b), *next_vertex);
            *next_vertex += 1;
        }
    }
    let mut out = Vec::with_capacity(faces.len() * 2);
    for g in &faces {
        let inside = g.verts.iter().filter(|v| fset.contains(v)).count();
        if inside == g.verts.len() {
            continue;
        }
        if inside == 0 {
            out.push(g.clone());
            continue;
        }
        let section: Vec<u32> = cut
            .iter()
            .filter(|((a, b), _)| g.verts.binary_search(a).is_ok() && g.verts.binary_search(b).is_ok())
            .map(|(_, &v)| v)
            .collect();
        let mut kept: Vec<u32> = g.verts.iter().copied().filter(|v| !fset.contains(v)).chain(section.iter().copied()).collect();
        kept.sort_unstable();
        out.push(PolyFace { verts: kept, dim: g.dim, origin: g.origin });
        let mut sec = section;
        sec.sort_unstable();
        out.push(PolyFace { verts: sec, dim: g.dim - 1, origin: None });
    }
    out
}

/// Face poset of the maximally blown-up simplex: the faces of `Δⁿ` of
/// dimension `0, 1, …, n − 2` are truncated in order of dimension. The
/// whole polytope is included as the top element; the empty face is not.
/// Element labels list vertex ids; grades are dimensions.
pub fn blowup_simplex(n: usize) -> Result<FacePoset> {
    if n > SIMPLEX_CAP {
        return Err(Error::Refused(format!("blowup_simplex is capped at n = {SIMPLEX_CAP}")));
    }
    let mut faces: Vec<PolyFace> = (1u32..(1 << (n + 1)))
        .map(|m| PolyFace {
            verts: (0..=n as u32).filter(|i| m & (1 << i) != 0).collect(),
            dim: m.count_ones() as usize - 1,
            origin: Some(m),
        })
        .collect();
    let mut next_vertex = n as u32 + 1;
    for d in 0..n.saturating_sub(1) {
        let targets: Vec<u32> = (1u32..(1 << (n + 1))).filter(|m| m.count_ones() as usize == d + 1).collect();
        for t in targets {
            let current = faces.iter().find(|g| g.origin == Some(t)).expect("strict transform survives").verts.clone();
            faces = truncate(faces, &current, &mut next_vertex);
        }
    }
    faces.sort_by(|a, b| (a.dim, &a.verts).cmp(&(b.dim, &b.verts)));
    faces.dedup_by(|a, b| a.verts == b.verts);
    let mut containing: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, g) in faces.iter().enumerate() {
        for &v in &g.verts {
            containing.entry(v).or_default().push(i);
        }
    }
    let mut covers = Vec::new();
    for (i, h) in faces.iter().enumerate() {
        for &j in &containing[&h.verts[0]] {
            let g = &faces[j];
            if g.dim == h.dim + 1 && is_subset(&h.verts, &g.verts) {
                covers.push((i, j));
            }
        }
    }
    covers.sort_unstable();
    let elements = faces
        .iter()
        .map(|g| {
            let vs: Vec<String> = g.verts.iter().map(|v| v.to_string()).collect();
            PosetElement { label: format!("{{{}}}", vs.join(",")), grade: g.dim as i64 }
        })
        .collect();
    Ok(FacePoset { elements, covers })
}

/// Face counts by dimension, lowest dimension first.
pub fn face_vector(p: &FacePoset) -> Vec<usize> {
    p.grade_counts().values().copied().collect()
}
