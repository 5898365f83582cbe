//! Independent brute-force oracles shared by the integration tests and the
//! acceptance harness. Nothing here calls the code it is used to check.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sft_core::homology::CountTable;
use sft_core::{DecoratedTree, Dir, OrbitUniverse, Parity, Q};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Plain index form of a tree: vertex count, edges `(upper, lower)` and
/// which vertices carry an incoming exterior edge.
pub struct Plain {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub input: Vec<bool>,
}

pub fn plain(t: &DecoratedTree) -> Plain {
    let idx: HashMap<&str, usize> = t.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let edges = t.internal_edges.iter().map(|e| (idx[e.from.as_str()], idx[e.to.as_str()])).collect();
    let mut input = vec![false; t.vertices.len()];
    for x in &t.exterior_edges {
        if x.dir == Dir::In {
            input[idx[x.vertex.as_str()]] = true;
        }
    }
    Plain { n: t.vertices.len(), edges, input }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every injective level function onto `1..=n` with inputs allowed on floor
/// one only and strictly descending edges, in vertex order.
pub fn brute_maximal_levels(t: &DecoratedTree) -> BTreeSet<Vec<u32>> {
    let p = plain(t);
    let mut l: Vec<u32> = (1..=p.n as u32).collect();
    let mut out = BTreeSet::new();
    loop {
        let ok = p.edges.iter().all(|&(v, w)| l[w] > l[v]) && (0..p.n).all(|v| l[v] != 1 || p.input[v]);
        if ok {
            out.insert(l.clone());
        }
        if !next_permutation(&mut l) {
            break;
        }
    }
    out
}

/// Least solution of `x ≥ lower`, `x[w] ≥ x[v] + 1` on `rel`.
fn least(n: usize, lower: &[u32], rel: &[(usize, usize)]) -> Vec<u32> {
    let mut x = lower.to_vec();
    for _ in 0..=n {
        for &(v, w) in rel {
            if x[w] < x[v] + 1 {
                x[w] = x[v] + 1;
            }
        }
    }
    x
}

/// `N_T` from the iterated-factorial recursion. At stage `k` the vertices
/// sitting on floor `k + 1` of the least solution are ordered in all `N!`
/// ways; the first of them is fixed on floor `k + 1` and the order is kept as
/// a constraint for the later stages. Returns zero when floor one is empty.
pub fn iterated_factorial_count(t: &DecoratedTree) -> u64 {
    let p = plain(t);
    let base: Vec<u32> = (0..p.n).map(|v| if p.input[v] { 1 } else { 2 }).collect();
    let has_parent: Vec<bool> = (0..p.n).map(|v| p.edges.iter().any(|e| e.1 == v)).collect();
    if !(0..p.n).any(|v| p.input[v] && !has_parent[v]) {
        return 0;
    }
    fn rec(p: &Plain, base: &[u32], fixed: &mut Vec<Option<u32>>, rel: &mut Vec<(usize, usize)>, k: u32) -> u64 {
        if fixed.iter().all(Option::is_some) {
            return 1;
        }
        let lower: Vec<u32> = (0..p.n).map(|v| fixed[v].unwrap_or(base[v].max(k + 1))).collect();
        let x = least(p.n, &lower, rel);
        let floor: Vec<usize> = (0..p.n).filter(|&v| fixed[v].is_none() && x[v] == k + 1).collect();
        let mut total = 0;
        for order in permutations(&floor) {
            let before = rel.len();
            rel.extend(order.windows(2).map(|w| (w[0], w[1])));
            fixed[order[0]] = Some(k + 1);
            total += rec(p, base, fixed, rel, k + 1);
            fixed[order[0]] = None;
            rel.truncate(before);
        }
        total
    }
    let mut rel = p.edges.clone();
    rec(&p, &base, &mut vec![None; p.n], &mut rel, 0)
}

pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Number of `(k+1)`-leveled structures on contractions of `t`, by `k`.
/// Such a structure is a surjection `ℓ: V → {1..k+1}` that weakly descends
/// along edges; edges inside a floor are the contracted ones, and every
/// vertex of floor one after contraction must carry an input.
pub fn brute_leveled_structures(t: &DecoratedTree) -> BTreeMap<usize, usize> {
    let p = plain(t);
    let mut out = BTreeMap::new();
    let mut l = vec![1u32; p.n];
    loop {
        let m = *l.iter().max().unwrap_or(&0) as usize;
        let used: BTreeSet<u32> = l.iter().copied().collect();
        let surjective = used.len() == m;
        if surjective && p.edges.iter().all(|&(v, w)| l[w] >= l[v]) && floor_one_ok(&p, &l) {
            *out.entry(m - 1).or_insert(0) += 1;
        }
        let mut i = 0;
        while i < p.n && l[i] == p.n as u32 {
            l[i] = 1;
            i += 1;
        }
        if i == p.n {
            break;
        }
        l[i] += 1;
    }
    out
}

/// Each connected group of floor-one vertices (joined by contracted edges)
/// contains an input vertex.
fn floor_one_ok(p: &Plain, l: &[u32]) -> bool {
    let mut comp: Vec<usize> = (0..p.n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(v, w) in &p.edges {
        if l[v] == 1 && l[w] == 1 {
            let (a, b) = (find(&mut comp, v), find(&mut comp, w));
            comp[a] = b;
        }
    }
    let mut has_input: BTreeMap<usize, bool> = BTreeMap::new();
    for v in (0..p.n).filter(|&v| l[v] == 1) {
        let r = find(&mut comp, v);
        *has_input.entry(r).or_insert(false) |= p.input[v];
    }
    has_input.values().all(|&b| b)
}

fn rq(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Solves a square system exactly; `None` when singular.
fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[c].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= p * &f;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Rank of a rational matrix by elimination.
pub fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        r += 1;
    }
    r
}

/// Face counts by dimension (top included) and cover count of the simplex
/// `Δⁿ` truncated geometrically: vertices at depth `1/3`, then faces of
/// dimension `d ≤ n − 2` at depth `3^{−(d+1)}`, in barycentric coordinates.
pub fn truncated_simplex(n: usize) -> (Vec<usize>, usize) {
    // Affine functions f(x) = a·x + c ≥ 0 on ℝⁿ, x_i = b_i, b_0 = 1 − Σ x_i.
    let bary = |i: usize| -> (Vec<BigRational>, BigRational) {
        if i == 0 {
            (vec![rq(-1, 1); n], BigRational::one())
        } else {
            ((0..n).map(|j| if j + 1 == i { BigRational::one() } else { BigRational::zero() }).collect(), BigRational::zero())
        }
    };
    let mut ineqs: Vec<(Vec<BigRational>, BigRational)> = (0..=n).map(bary).collect();
    for d in 0..n.saturating_sub(1) {
        let depth = rq(1, 3i64.pow(d as u32 + 1));
        for mask in 0u32..(1 << (n + 1)) {
            if mask.count_ones() as usize != d + 1 {
                continue;
            }
            let mut a = vec![BigRational::zero(); n];
            let mut c = -depth.clone();
            for i in (0..=n).filter(|i| mask & (1 << i) == 0) {
                let (ai, ci) = bary(i);
                for (x, y) in a.iter_mut().zip(ai) {
                    *x += y;
                }
                c += ci;
            }
            ineqs.push((a, c));
        }
    }
    let m = ineqs.len();
    let eval = |k: usize, x: &[BigRational]| -> BigRational {
        ineqs[k].0.iter().zip(x).map(|(a, b)| a * b).fold(ineqs[k].1.clone(), |s, t| s + t)
    };
    let mut vertices: Vec<Vec<BigRational>> = Vec::new();
    let mut choose = vec![0usize; n];
    fn combos(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            combos(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    combos(m, n, 0, &mut Vec::new(), &mut all);
    for c in all {
        choose.clone_from(&c);
        let a: Vec<Vec<BigRational>> = choose.iter().map(|&k| ineqs[k].0.clone()).collect();
        let b: Vec<BigRational> = choose.iter().map(|&k| -ineqs[k].1.clone()).collect();
        if let Some(x) = solve(&a, &b) {
            if (0..m).all(|k| !eval(k, &x).is_negative()) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    }
    let tight: Vec<BTreeSet<usize>> = vertices.iter().map(|x| (0..m).filter(|&k| eval(k, x).is_zero()).collect()).collect();
    let facets: Vec<usize> = (0..m).filter(|k| tight.iter().any(|t| t.contains(k))).collect();
    let mut faces: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for mask in 0u64..(1 << facets.len()) {
        let s: Vec<usize> = (0..facets.len()).filter(|i| mask & (1 << i) != 0).map(|i| facets[i]).collect();
        let vs: Vec<usize> = (0..vertices.len()).filter(|&v| s.iter().all(|k| tight[v].contains(k))).collect();
        if vs.is_empty() || faces.contains_key(&vs) {
            continue;
        }
        let diffs: Vec<Vec<BigRational>> =
            vs[1..].iter().map(|&v| vertices[v].iter().zip(&vertices[vs[0]]).map(|(a, b)| a - b).collect()).collect();
        faces.insert(vs, rank(diffs));
    }
    let mut fvec = vec![0usize; n + 1];
    for &d in faces.values() {
        fvec[d] += 1;
    }
    let list: Vec<(&Vec<usize>, &usize)> = faces.iter().collect();
    let mut covers = 0;
    for (f, df) in &list {
        for (g, dg) in &list {
            if **dg == **df + 1 && f.iter().all(|v| g.contains(v)) {
                covers += 1;
            }
        }
    }
    (fvec, covers)
}

/// Brute-force homology of the truncated free graded-commutative algebra.
#[derive(Debug, PartialEq, Eq)]
pub struct OracleHomology {
    pub dim_even: usize,
    pub dim_odd: usize,
    pub betti_even: usize,
    pub betti_odd: usize,
    pub square_zero: bool,
}

/// Builds monomials over good orbits (letters sorted by orbit id, odd letters
/// at most once) with total action at most `cutoff`, extends the counts as a
/// derivation with the Koszul rule and computes kernels and images.
pub fn oracle_homology(u: &OrbitUniverse, counts: &CountTable, cutoff: &Q) -> OracleHomology {
    let good: Vec<(&str, bool, Q)> = u
        .orbits
        .values()
        .filter(|o| o.action <= u.action_bound)
        .filter(|o| !(o.multiplicity % 2 == 0 && u.orbits[&o.simple_id].odd_neg_eigenvalues))
        .map(|o| (o.id.as_str(), o.parity == Parity::Odd, o.action.clone()))
        .collect();
    let ids: Vec<&str> = good.iter().map(|g| g.0).collect();
    let odd = |i: usize| good[i].1;
    let mut words: Vec<Vec<usize>> = Vec::new();
    fn gen(good: &[(&str, bool, Q)], start: usize, left: Q, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in start..good.len() {
            if good[i].1 && cur.last() == Some(&i) {
                continue;
            }
            if good[i].2 <= left {
                cur.push(i);
                gen(good, i, &left - &good[i].2, cur, out);
                cur.pop();
            }
        }
    }
    gen(&good, 0, cutoff.clone(), &mut Vec::new(), &mut words);
    let pos: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    // Sort a product with the Koszul sign, or None on a repeated odd letter.
    let normal = |v: &[usize]| -> Option<(i64, Vec<usize>)> {
        let mut sign = 1;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] && odd(v[i]) && odd(v[j]) {
                    sign = -sign;
                }
            }
        }
        let mut s = v.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|p| p[0] == p[1] && odd(p[0])) {
            return None;
        }
        Some((sign, s))
    };
    let mut on_gen: BTreeMap<usize, Vec<(BigRational, Vec<usize>)>> = BTreeMap::new();
    for e in &counts.counts {
        let g = ids.iter().position(|&x| x == e.positive).expect("count on a good orbit");
        let letters: Vec<usize> = e.negative.iter().map(|x| ids.iter().position(|&y| y == x).expect("good orbit")).collect();
        let value = BigRational::new(e.value.numer().clone(), e.value.denom().clone());
        on_gen.entry(g).or_default().push((value, letters));
    }
    let dim = words.len();
    let mut d = vec![vec![BigRational::zero(); dim]; dim];
    for (c, w) in words.iter().enumerate() {
        let mut prefix_odd = 0;
        for i in 0..w.len() {
            let koszul = if prefix_odd % 2 == 0 { 1 } else { -1 };
            for (value, letters) in on_gen.get(&w[i]).map(Vec::as_slice).unwrap_or(&[]) {
                let product: Vec<usize> = w[..i].iter().chain(letters).chain(&w[i + 1..]).copied().collect();
                if let Some((s, key)) = normal(&product) {
                    let r = pos[&key];
                    d[r][c] += value * BigRational::from_integer((s * koszul).into());
                }
            }
            if odd(w[i]) {
                prefix_odd += 1;
            }
        }
    }
    let square_zero = (0..dim).all(|r| (0..dim).all(|c| (0..dim).map(|k| &d[r][k] * &d[k][c]).fold(BigRational::zero(), |a, b| a + b).is_zero()));
    let parity = |w: &Vec<usize>| w.iter().filter(|&&i| odd(i)).count() % 2 == 1;
    let even: Vec<usize> = (0..dim).filter(|&i| !parity(&words[i])).collect();
    let oddw: Vec<usize> = (0..dim).filter(|&i| parity(&words[i])).collect();
    let block = |rows: &[usize], cols: &[usize]| -> Vec<Vec<BigRational>> {
        rows.iter().map(|&r| cols.iter().map(|&c| d[r][c].clone()).collect()).collect()
    };
    let rank_even = rank(block(&oddw, &even));
    let rank_odd = rank(block(&even, &oddw));
    OracleHomology {
        dim_even: even.len(),
        dim_odd: oddw.len(),
        betti_even: even.len() - rank_even - rank_odd,
        betti_odd: oddw.len() - rank_odd - rank_even,
        square_zero,
    }
}
