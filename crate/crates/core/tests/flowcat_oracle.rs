use sft_core::flowcat::{all_boundary_strata, check_composition_associativity, strata_through, Chain, FlowSystem};
use sft_core::orbit::{Parity, ReebOrbit};
use sft_core::rational::{qi, Q};
use sft_core::OrbitUniverse;
use std::collections::BTreeSet;

fn multisets(ids: &[String], max_len: usize) -> Vec<Vec<String>> {
    fn rec(ids: &[String], start: usize, max: usize, cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        out.push(cur.clone());
        if cur.len() < max {
            for i in start..ids.len() {
                cur.push(ids[i].clone());
                rec(ids, i, max, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(ids, 0, max_len, &mut Vec::new(), &mut out);
    out
}

/// Three orbits of actions 1, 2, 3 with every positive-energy breaking into
/// at most two orbits, including breakings into nothing.
fn system() -> (FlowSystem, Vec<String>) {
    let u = OrbitUniverse::new(qi(9), (1..=3).map(|i| ReebOrbit::simple(&format!("o{i}"), qi(i), Parity::Even))).unwrap();
    let ids: Vec<String> = u.orbits.keys().cloned().collect();
    let mut all = Vec::new();
    for g in &ids {
        for theta in multisets(&ids, 2) {
            if u.total_action(&theta).unwrap() < *u.action(g).unwrap() {
                all.push((g.clone(), theta));
            }
        }
    }
    (FlowSystem::new(u, all).unwrap(), ids)
}

/// Chains built step by step from `FlowSystem::steps`, with intermediates
/// drawn from `candidates` in sorted order.
fn brute(sys: &FlowSystem, gm: &[String], gp: &[String], depth: usize, candidates: &[Vec<String>]) -> BTreeSet<String> {
    fn rec(sys: &FlowSystem, chain: Chain, gp: &[String], left: usize, candidates: &[Vec<String>], out: &mut BTreeSet<String>) {
        let low = chain.sequences.last().unwrap().clone();
        if left == 0 {
            for p in sys.steps(&low, gp).unwrap() {
                out.insert(chain.then(gp, &p).canonical_key());
            }
            return;
        }
        for m in candidates {
            for p in sys.steps(&low, m).unwrap() {
                rec(sys, chain.then(m, &p), gp, left - 1, candidates, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    let start = Chain { sequences: vec![gm.to_vec()], partitions: vec![] };
    rec(sys, start, gp, depth, candidates, &mut out);
    out
}

#[test]
fn strata_agree_with_stepwise_construction() {
    let (sys, ids) = system();
    let action = |s: &Vec<String>| -> Q { sys.action(s).unwrap() };
    // Targets of action at most 5 keep every intermediate at length ≤ 4.
    let seqs: Vec<Vec<String>> = multisets(&ids, 3).into_iter().filter(|s| action(s) <= qi(5)).collect();
    let candidates: Vec<Vec<String>> = multisets(&ids, 4).into_iter().filter(|s| action(s) < qi(5)).collect();
    let mut nonempty = 0;
    for gm in &seqs {
        for gp in seqs.iter().filter(|s| action(s) > action(gm)) {
            for depth in 0..=2 {
                let fast: BTreeSet<String> = all_boundary_strata(&sys, gm, gp, depth).unwrap().into_iter().map(|s| s.key).collect();
                let slow = brute(&sys, gm, gp, depth, &candidates);
                assert_eq!(fast, slow, "{gm:?} → {gp:?} at depth {depth}");
                nonempty += usize::from(!fast.is_empty());
            }
        }
    }
    assert!(nonempty > 50, "only {nonempty} nonempty cases");
}

#[test]
fn strata_through_filters_by_intermediates() {
    let (sys, ids) = system();
    let gm = vec!["o1".to_string(), "o1".to_string()];
    let gp = vec!["o3".to_string(), "o2".to_string()];
    let all = all_boundary_strata(&sys, &gm, &gp, 2).unwrap();
    let mut total = 0;
    for m1 in multisets(&ids, 4) {
        for m2 in multisets(&ids, 4) {
            let through = strata_through(&sys, &gm, &gp, &[m1.clone(), m2.clone()]).unwrap();
            let expected = all.iter().filter(|s| s.chain.intermediates_sorted() == [m1.clone(), m2.clone()]).count();
            assert_eq!(through.len(), expected, "{m1:?}, {m2:?}");
            total += expected;
        }
    }
    assert_eq!(total, all.len());
}

#[test]
fn associativity_on_a_small_universe() {
    let (sys, ids) = system();
    let seqs = multisets(&ids, 2);
    let action = |s: &Vec<String>| sys.action(s).unwrap();
    let mut nonempty = 0;
    for gm in &seqs {
        for m1 in seqs.iter().filter(|s| action(s) > action(gm)) {
            for m2 in seqs.iter().filter(|s| action(s) > action(m1)) {
                for gp in seqs.iter().filter(|s| action(s) > action(m2)) {
                    let r = check_composition_associativity(&sys, gm, m1, m2, gp).unwrap();
                    assert!(r.holds, "{gm:?} {m1:?} {m2:?} {gp:?}: {r:?}");
                    nonempty += usize::from(r.direct > 0);
                }
            }
        }
    }
    assert!(nonempty > 0);
}
