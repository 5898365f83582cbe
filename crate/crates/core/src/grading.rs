//! Degree, index and energy arithmetic.

use crate::error::{Error, Result};
use crate::orbit::{OrbitUniverse, ReebOrbit};
use crate::rational::{fmt_q, Q};
use crate::trees::{DecoratedTree, Dir};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Smallest positive integer `m` with `m·a` integral for every action `a`,
/// together with the scaled actions.
pub fn integral_rescaling(actions: &[Q]) -> Result<(BigInt, Vec<BigInt>)> {
    if actions.is_empty() {
        return Err(Error::invalid("integral rescaling needs at least one action"));
    }
    if let Some(a) = actions.iter().find(|a| !a.is_positive()) {
        return Err(Error::invalid(format!("action {} is not positive", fmt_q(a))));
    }
    let m = actions.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let scaled: Vec<BigInt> = actions.iter().map(|a| (a * Q::from_integer(m.clone())).to_integer()).collect();
    debug_assert!(scaled.iter().all(|s| s.is_positive()));
    Ok((m, scaled))
}

/// Integral approximate actions for every orbit of a universe. Each orbit
/// contributes its `approx_action` when given and its exact action otherwise;
/// all of them are then rescaled by one common multiplier.
pub fn approx_actions(u: &OrbitUniverse) -> Result<(BigInt, BTreeMap<String, i64>)> {
    let ids: Vec<&String> = u.orbits.keys().collect();
    let raw: Vec<Q> = u.orbits.values().map(|o| o.approx_action.clone().unwrap_or_else(|| o.action.clone())).collect();
    let (m, scaled) = integral_rescaling(&raw)?;
    let mut out = BTreeMap::new();
    for (id, s) in ids.into_iter().zip(scaled) {
        let v = s.to_i64().ok_or_else(|| Error::Refused(format!("approximate action of `{id}` overflows i64")))?;
        out.insert(id.clone(), v);
    }
    Ok((m, out))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    (n + 1..).find(|&k| is_prime(k)).expect("primes are unbounded")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Primes {
    pub p_minus: u64,
    pub p_plus: u64,
}

/// `p⁻` is the least prime above the total positive-end action and `p⁺` the
/// least prime above `p⁻·(1 + total action)`.
pub fn choose_primes(approx_plus: &[i64], approx_minus: &[i64]) -> Result<Primes> {
    if approx_plus.iter().chain(approx_minus).any(|&a| a <= 0) {
        return Err(Error::invalid("approximate actions must be positive"));
    }
    let sum_plus: u64 = approx_plus.iter().map(|&a| a as u64).sum();
    let sum_all: u64 = sum_plus + approx_minus.iter().map(|&a| a as u64).sum::<u64>();
    let p_minus = next_prime(sum_plus);
    let bound = p_minus.checked_mul(1 + sum_all).ok_or_else(|| Error::Refused("prime bound overflows".into()))?;
    Ok(Primes { p_minus, p_plus: next_prime(bound) })
}

/// Which framing-degree formula to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeConvention {
    /// `|D_v| − 2 + p·(Σ_in − Σ_out)` with `D_v` all special points at `v`.
    #[default]
    SpecialPoints,
    /// `p·(Σ_in − Σ_out) − 2`, the auxiliary degree shifted by two.
    Auxiliary,
}

fn action_of(approx: &BTreeMap<String, i64>, orbit: &str) -> Result<i64> {
    approx.get(orbit).copied().ok_or_else(|| Error::UnknownOrbit(orbit.to_string()))
}

/// Special-point count and incoming/outgoing approximate action sums at `v`.
fn vertex_data(t: &DecoratedTree, v: &str, approx: &BTreeMap<String, i64>) -> Result<(i64, i64, i64)> {
    let (mut special, mut plus, mut minus) = (0i64, 0i64, 0i64);
    for e in &t.internal_edges {
        if e.to == v {
            special += 1;
            plus += action_of(approx, &e.orbit)?;
        }
        if e.from == v {
            special += 1;
            minus += action_of(approx, &e.orbit)?;
        }
    }
    for x in t.exterior_edges.iter().filter(|x| x.vertex == v) {
        special += 1;
        match x.dir {
            Dir::In => plus += action_of(approx, &x.orbit)?,
            Dir::Out => minus += action_of(approx, &x.orbit)?,
        }
    }
    Ok((special, plus, minus))
}

/// Framing degree of every vertex. Fails on the first vertex whose degree is
/// not positive.
pub fn framing_degrees(
    t: &DecoratedTree,
    p: i64,
    approx: &BTreeMap<String, i64>,
    convention: DegreeConvention,
) -> Result<BTreeMap<String, i64>> {
    if p <= 0 {
        return Err(Error::invalid("p must be positive"));
    }
    let mut out = BTreeMap::new();
    for v in &t.vertices {
        let (special, plus, minus) = vertex_data(t, &v.id, approx)?;
        let d = match convention {
            DegreeConvention::SpecialPoints => special - 2 + p * (plus - minus),
            DegreeConvention::Auxiliary => p * (plus - minus) - 2,
        };
        if d <= 0 {
            return Err(Error::invalid(format!("vertex `{}`: framing degree {d} is not positive", v.id)));
        }
        out.insert(v.id.clone(), d);
    }
    Ok(out)
}

/// Data on one side of a node: the degree of the framing restricted to that
/// side, the weighted sums of incoming and outgoing marked points, and the
/// degree of the dualizing sheaf there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NodeSide {
    pub degree: i64,
    pub plus: i64,
    pub minus: i64,
    #[serde(default)]
    pub omega: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum NodeVariant {
    Symplectization { p: i64 },
    Cobordism { p_plus: i64, p_minus: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodeType {
    pub node_type: u8,
    pub order: u64,
    pub d_x: i64,
}

fn corrected(side: &NodeSide, variant: NodeVariant) -> i64 {
    match variant {
        NodeVariant::Symplectization { p } => side.degree - p * side.plus + p * side.minus - side.omega,
        NodeVariant::Cobordism { p_plus, p_minus } => side.degree - p_plus * side.plus + p_minus * side.minus,
    }
}

/// Type and order of a node from the data on its two sides.
pub fn node_type(sides: [NodeSide; 2], variant: NodeVariant) -> NodeType {
    let d_x = corrected(&sides[0], variant) - corrected(&sides[1], variant);
    NodeType { node_type: u8::from(d_x != 0), order: d_x.unsigned_abs(), d_x }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IndexData {
    pub n: i64,
    pub euler_char: i64,
    pub c1: i64,
    #[serde(default)]
    pub cz_plus: Vec<i64>,
    #[serde(default)]
    pub cz_minus: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub index: i64,
    pub vdim: i64,
}

pub fn fredholm_index(d: &IndexData) -> i64 {
    let punctures = (d.cz_plus.len() + d.cz_minus.len()) as i64;
    d.n * d.euler_char - d.n * punctures + 2 * d.c1 + d.cz_plus.iter().sum::<i64>() - d.cz_minus.iter().sum::<i64>()
}

/// Index and virtual dimension. Symplectization moduli are divided by the
/// ℝ-translation, so `vdim = index − 1` there and `vdim = index` in a
/// cobordism.
pub fn index_report(d: &IndexData, cobordism: bool) -> IndexReport {
    let index = fredholm_index(d);
    IndexReport { index, vdim: if cobordism { index } else { index - 1 } }
}

pub fn energy(u: &OrbitUniverse, gamma_plus: &[String], gamma_minus: &[String]) -> Result<Q> {
    Ok(u.total_action(gamma_plus)? - u.total_action(gamma_minus)?)
}

/// False exactly for bad orbits: even covers of a simple orbit with an odd
/// number of eigenvalues in `(−1, 0)`.
pub fn classify_goodness(gamma: &ReebOrbit, u: &OrbitUniverse) -> Result<bool> {
    let simple = u
        .orbits
        .get(&gamma.simple_id)
        .ok_or_else(|| Error::invalid(format!("orbit `{}`: simple orbit `{}` is missing", gamma.id, gamma.simple_id)))?;
    Ok(!(gamma.multiplicity.is_multiple_of(2) && simple.odd_neg_eigenvalues))
}

/// Warning text when a declared parity disagrees with `μ_CZ + n − 3 mod 2`.
/// The declared parity is always the one used.
pub fn parity_warning(gamma: &ReebOrbit, n: i64) -> Option<String> {
    let cz = gamma.cz_index?;
    let expected = (cz + n - 3).rem_euclid(2) as u8;
    (expected != gamma.parity.bit()).then(|| {
        format!("orbit `{}`: declared parity {:?} differs from the CZ-based parity for n = {n}", gamma.id, gamma.parity)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::Parity;
    use crate::rational::{q, qi};
    use crate::trees::build::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rescaling() {
        assert_eq!(integral_rescaling(&[q(3, 2), q(5, 4)]).unwrap(), (BigInt::from(4), bi(&[6, 5])));
        assert_eq!(integral_rescaling(&[qi(2), qi(7)]).unwrap().0, BigInt::from(1));
        assert_eq!(integral_rescaling(&[q(1, 3), q(1, 6), q(1, 2)]).unwrap(), (BigInt::from(6), bi(&[2, 1, 3])));
        assert!(integral_rescaling(&[qi(0)]).is_err());
        assert!(integral_rescaling(&[]).is_err());
    }

    #[test]
    fn primes() {
        let p = choose_primes(&[11], &[9]).unwrap();
        assert_eq!(p, Primes { p_minus: 13, p_plus: 277 });
        assert_eq!(choose_primes(&[1], &[]).unwrap().p_minus, 2);
        assert_eq!(next_prime(1), 2);
        assert_eq!(next_prime(13), 17);
    }

    #[test]
    fn framing_examples() {
        let approx: BTreeMap<String, i64> = [("a".to_string(), 3), ("b".to_string(), 1)].into_iter().collect();
        let corolla = tree(vec![vertex("v", 1)], vec![], vec![input("v", "a"), output("v", "b")]);
        assert_eq!(framing_degrees(&corolla, 5, &approx, DegreeConvention::SpecialPoints).unwrap()["v"], 10);
        assert_eq!(framing_degrees(&corolla, 5, &approx, DegreeConvention::Auxiliary).unwrap()["v"], 8);
        let three = tree(vec![vertex("v", 1)], vec![], vec![input("v", "a"), output("v", "b"), output("v", "b")]);
        assert_eq!(framing_degrees(&three, 5, &approx, DegreeConvention::SpecialPoints).unwrap()["v"], 6);
        let flat = tree(vec![vertex("v", 0)], vec![], vec![input("v", "b"), output("v", "b")]);
        let err = framing_degrees(&flat, 5, &approx, DegreeConvention::SpecialPoints).unwrap_err();
        assert!(err.to_string().contains("`v`"));
    }

    #[test]
    fn node_types() {
        let s = NodeSide { degree: 7, plus: 1, minus: 0, omega: 1 };
        assert_eq!(node_type([s, s], NodeVariant::Symplectization { p: 5 }).node_type, 0);
        let a = NodeSide { degree: 6, ..Default::default() };
        let b = NodeSide { degree: 2, ..Default::default() };
        let t = node_type([a, b], NodeVariant::Symplectization { p: 5 });
        assert_eq!((t.node_type, t.order), (1, 4));
        let c = NodeSide { plus: 1, ..Default::default() };
        let t = node_type([c, NodeSide::default()], NodeVariant::Cobordism { p_plus: 101, p_minus: 7 });
        assert_eq!((t.node_type, t.order), (1, 101));
    }

    #[test]
    fn index_examples() {
        let d = IndexData { n: 2, euler_char: 2, c1: 0, cz_plus: vec![3], cz_minus: vec![1] };
        assert_eq!(index_report(&d, false), IndexReport { index: 2, vdim: 1 });
        for n in 1..6 {
            let d = IndexData { n, euler_char: 2, c1: 0, cz_plus: vec![4], cz_minus: vec![4] };
            assert_eq!(fredholm_index(&d), 0);
        }
        let d = IndexData { n: 2, euler_char: 2, c1: 0, cz_plus: vec![5], cz_minus: vec![1, 1] };
        assert_eq!(index_report(&d, false), IndexReport { index: 1, vdim: 0 });
        assert_eq!(index_report(&d, true).vdim, 1);
    }

    #[test]
    fn index_is_additive_under_breaking() {
        // Splitting along an orbit with CZ index k: the upper piece gains a
        // negative puncture, the lower piece a positive one, χ₁ + χ₂ = χ + 2.
        let whole = IndexData { n: 3, euler_char: 2, c1: 4, cz_plus: vec![5, 2], cz_minus: vec![1] };
        let up = IndexData { n: 3, euler_char: 2, c1: 1, cz_plus: vec![5, 2], cz_minus: vec![7] };
        let down = IndexData { n: 3, euler_char: 2, c1: 3, cz_plus: vec![7], cz_minus: vec![1] };
        assert_eq!(fredholm_index(&up) + fredholm_index(&down), fredholm_index(&whole));
    }

    #[test]
    fn energy_and_goodness() {
        let s = ReebOrbit::simple("s", qi(1), Parity::Odd);
        let mut bad_base = ReebOrbit::simple("t", qi(2), Parity::Even);
        bad_base.odd_neg_eigenvalues = true;
        let t2 = ReebOrbit::cover(&bad_base, "t2", 2, Parity::Even);
        let t3 = ReebOrbit::cover(&bad_base, "t3", 3, Parity::Odd);
        let s2 = ReebOrbit::cover(&s, "s2", 2, Parity::Even);
        let u = OrbitUniverse::new(qi(10), [s.clone(), bad_base.clone(), t2.clone(), t3.clone(), s2.clone()]).unwrap();
        assert!(classify_goodness(&s, &u).unwrap());
        assert!(!classify_goodness(&t2, &u).unwrap());
        assert!(classify_goodness(&t3, &u).unwrap());
        assert!(classify_goodness(&s2, &u).unwrap());
        let ids = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(energy(&u, &ids(&["t3"]), &ids(&["t", "s"])).unwrap(), qi(3));
        assert_eq!(energy(&u, &ids(&["s"]), &ids(&["s"])).unwrap(), qi(0));
        assert!(energy(&u, &ids(&["zz"]), &[]).is_err());
    }

    #[test]
    fn parity_warning_only_on_mismatch() {
        let o = ReebOrbit::simple("o", qi(1), Parity::Even).with_cz(3);
        assert!(parity_warning(&o, 2).is_none());
        assert!(parity_warning(&o, 3).is_some());
        assert!(parity_warning(&ReebOrbit::simple("p", qi(1), Parity::Odd), 2).is_none());
    }
}
