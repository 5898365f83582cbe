use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sft_core::cobordism::{validate_cobordism_tree, CobordismTree};
use sft_core::gen::{random_closed_counts, random_cobordism_tree, random_tree, random_universe};
use sft_core::homology::{contact_homology, CountTable, Cutoff};
use sft_core::levels::count_maximal_levels;
use sft_core::rational::qi;
use sft_core::{DecoratedTree, OrbitUniverse};
use std::fmt::Debug;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(x: &T) -> T {
    let s = serde_json::to_string(x).unwrap();
    let back: T = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, x);
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
    back
}

#[test]
fn trees_survive_json() {
    let mut rng = StdRng::seed_from_u64(11);
    for n in 1..=7 {
        let t = random_tree(&mut rng, n, &["a", "b"]);
        let back: DecoratedTree = round_trip(&t);
        assert_eq!(count_maximal_levels(&back).unwrap(), count_maximal_levels(&t).unwrap());
    }
}

#[test]
fn cobordism_trees_survive_json() {
    let mut rng = StdRng::seed_from_u64(12);
    for n in 1..=6 {
        let (c, _) = random_cobordism_tree(&mut rng, n, n % 2 == 0);
        let back: CobordismTree = round_trip(&c);
        assert!(validate_cobordism_tree(&back).valid);
    }
}

#[test]
fn universes_and_count_tables_survive_json() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..10 {
        let u = random_universe(&mut rng, 3, 4);
        let counts = random_closed_counts(&mut rng, &u, &qi(6)).unwrap();
        let u2: OrbitUniverse = round_trip(&u);
        let c2: CountTable = round_trip(&counts);
        let cutoff = Cutoff::action(qi(6));
        let (_, a) = contact_homology(&u, &counts, &cutoff).unwrap();
        let (_, b) = contact_homology(&u2, &c2, &cutoff).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn rationals_are_written_as_reduced_strings() {
    let u: OrbitUniverse = serde_json::from_str(
        r#"{ "L": "5", "orbits": [{ "id": "a", "action": "3/2", "multiplicity": 1, "parity": "odd", "simple_id": "a" }] }"#,
    )
    .unwrap();
    let v = serde_json::to_value(&u).unwrap();
    assert_eq!(v["orbits"][0]["action"], "3/2");
    assert!(serde_json::from_str::<OrbitUniverse>(
        r#"{ "L": "5", "orbits": [{ "id": "a", "action": "6/4", "multiplicity": 1, "parity": "odd", "simple_id": "a" }] }"#
    )
    .is_err());
}
