use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sft_core::blowup::build_refinement;
use sft_core::cobordism::{cobordism_degrees, infer_star_labels, validate_cobordism_tree, CobordismTree};
use sft_core::gen::{random_closed_counts, random_cobordism_tree, random_tree, random_universe};
use sft_core::grading::{choose_primes, fredholm_index, is_prime, IndexData};
use sft_core::homology::{contact_homology, Cutoff};
use sft_core::levels::{count_maximal_levels, enumerate_maximal_levels, validate_level};
use sft_core::rational::{fmt_q, parse_q, q, qi};
use sft_core::signs::{reorder_sign, Factor, LineWord, OrientationLine};
use sft_core::Dir;
use std::collections::BTreeSet;

mod common;

fn word(degrees: &[(i64, bool)]) -> LineWord {
    LineWord::new(
        degrees
            .iter()
            .enumerate()
            .map(|(i, &(d, dual))| {
                let l = OrientationLine::new(&format!("x{i}"), d);
                if dual {
                    Factor::dual_of(l)
                } else {
                    Factor::line(l)
                }
            })
            .collect(),
    )
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn level_enumeration_matches_brute_force(seed in any::<u64>(), n in 1usize..=6) {
        let t = random_tree(&mut StdRng::seed_from_u64(seed), n, &["a", "b"]);
        let levels = enumerate_maximal_levels(&t).unwrap();
        for l in &levels {
            prop_assert!(l.is_maximal());
            prop_assert!(validate_level(&t, l).valid);
        }
        let listed: BTreeSet<Vec<u32>> = levels.iter().map(|l| l.indexed(&t).unwrap()).collect();
        prop_assert_eq!(listed.len(), levels.len());
        prop_assert_eq!(&listed, &common::brute_maximal_levels(&t));
        prop_assert_eq!(count_maximal_levels(&t).unwrap(), levels.len() as u64);
    }

    #[test]
    fn refinement_cones_are_unimodular_and_counted_by_levels(seed in any::<u64>(), n in 1usize..=6) {
        let t = random_tree(&mut StdRng::seed_from_u64(seed), n, &["a"]);
        let r = build_refinement(&t).unwrap();
        prop_assert!(r.maximal_cones.iter().all(|c| c.is_unimodular()));
        prop_assert_eq!(r.maximal_cones.len() as u64, count_maximal_levels(&t).unwrap());
    }

    #[test]
    fn reorder_sign_is_the_koszul_sign_of_inversions(
        (degrees, perm) in prop::collection::vec((-3i64..=3, any::<bool>()), 1..8)
            .prop_flat_map(|d| { let n = d.len(); (Just(d), permutation(n)) })
    ) {
        let w = word(&degrees);
        let r = reorder_sign(&w, &perm).unwrap();
        let pos: Vec<usize> = r.factors.iter().map(|f| f.line.label[1..].parse().unwrap()).collect();
        let mut sign = 1i8;
        for a in 0..pos.len() {
            for b in a + 1..pos.len() {
                if pos[a] > pos[b] && (degrees[pos[a]].0 * degrees[pos[b]].0) % 2 != 0 {
                    sign = -sign;
                }
            }
        }
        prop_assert_eq!(r.sign, sign * w.sign);
        let mut inverse = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let back = reorder_sign(&r, &inverse).unwrap();
        let identity = reorder_sign(&r, &perm).unwrap();
        prop_assert!(back == w || identity == w, "no inverse returns the original word");
    }

    #[test]
    fn index_is_additive_under_gluing(
        n in 1i64..=5,
        top in prop::collection::vec(-6i64..=6, 1..3),
        mid in prop::collection::vec(-6i64..=6, 0..3),
        bottom in prop::collection::vec(-6i64..=6, 0..3),
        glued in -6i64..=6,
        c1a in -3i64..=3,
        c1b in -3i64..=3,
    ) {
        let upper = IndexData { n, euler_char: 2, c1: c1a, cz_plus: top.clone(), cz_minus: [mid.clone(), vec![glued]].concat() };
        let lower = IndexData { n, euler_char: 2, c1: c1b, cz_plus: vec![glued], cz_minus: bottom.clone() };
        let whole = IndexData { n, euler_char: 2, c1: c1a + c1b, cz_plus: top, cz_minus: [mid, bottom].concat() };
        prop_assert_eq!(fredholm_index(&upper) + fredholm_index(&lower), fredholm_index(&whole));
    }

    #[test]
    fn primes_satisfy_their_bounds(plus in prop::collection::vec(1i64..=40, 0..5), minus in prop::collection::vec(1i64..=40, 0..5)) {
        let p = choose_primes(&plus, &minus).unwrap();
        let sum_plus: i64 = plus.iter().sum();
        let sum_all = sum_plus + minus.iter().sum::<i64>();
        prop_assert!(is_prime(p.p_minus) && is_prime(p.p_plus));
        prop_assert!(p.p_minus as i64 > sum_plus);
        prop_assert!(p.p_plus as i64 > p.p_minus as i64 * (1 + sum_all));
        prop_assert!(!(sum_plus + 1..p.p_minus as i64).any(|k| is_prime(k as u64)));
    }

    #[test]
    fn inferred_star_labels_validate(seed in any::<u64>(), n in 1usize..=6, two_sided in any::<bool>()) {
        let (c, approx) = random_cobordism_tree(&mut StdRng::seed_from_u64(seed), n, two_sided);
        prop_assert!(validate_cobordism_tree(&c).valid);
        let ext = |d: Dir| -> Vec<i64> { c.tree.exterior_edges.iter().filter(|x| x.dir == d).map(|x| approx[&x.orbit]).collect() };
        let p = choose_primes(&ext(Dir::In), &ext(Dir::Out)).unwrap();
        let (pp, pm) = (p.p_plus as i64, p.p_minus as i64);
        let (framing, omega) = cobordism_degrees(&c, &approx, pp, pm).unwrap();
        let inferred = infer_star_labels(&c.tree, &framing, &omega, &Default::default(), pp, pm).unwrap();
        prop_assert!(validate_cobordism_tree(&CobordismTree::from_stars(c.tree.clone(), &inferred)).valid);
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..=1000, d in 1i64..=1000) {
        let x = q(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x.clone());
        let a = q(n.abs() + 1, d);
        let json = serde_json::to_string(&sft_core::ReebOrbit::simple("g", a.clone(), sft_core::Parity::Odd)).unwrap();
        let back: sft_core::ReebOrbit = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.action, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_tables_have_consistent_homology(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let u = random_universe(&mut rng, 3, 3);
        let cutoff = qi(6);
        let counts = random_closed_counts(&mut rng, &u, &cutoff).unwrap();
        let (c, r) = contact_homology(&u, &counts, &Cutoff::action(cutoff.clone())).unwrap();
        prop_assert!(c.check_boundary_squared().ok);
        let o = common::oracle_homology(&u, &counts, &cutoff);
        prop_assert_eq!((r.betti_even, r.betti_odd), (o.betti_even, o.betti_odd));
        prop_assert_eq!(r.dim_even as i64 - r.dim_odd as i64, r.betti_even as i64 - r.betti_odd as i64);
    }
}
