//! Seeded randomized checks, reproducible from `--seed`.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use sft_core::blowup::{build_refinement, is_smooth_refinement};
use sft_core::gen::{random_closed_counts, random_tree, random_universe};
use sft_core::grading::{fredholm_index, IndexData};
use sft_core::homology::{contact_homology, Cutoff};
use sft_core::levels::{count_maximal_levels, enumerate_maximal_levels, validate_level};
use sft_core::rational::qi;
use sft_core::signs::{reorder_sign, Factor, LineWord, OrientationLine};
use std::collections::BTreeSet;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

fn check(name: &'static str, cases: usize, mut case: impl FnMut(usize) -> Result<(), String>) -> Check {
    let first_failure = (0..cases).find_map(|i| case(i).err().map(|e| format!("case {i}: {e}")));
    Check { name, cases, passed: first_failure.is_none(), first_failure }
}

fn cz(rng: &mut StdRng, k: usize) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(-6..=6)).collect()
}

pub fn run(seed: u64, cases: usize) -> SelftestReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut checks = Vec::new();

    checks.push(check("levels", cases, |_| {
        let n = rng.gen_range(1..=6);
        let t = random_tree(&mut rng, n, &["a", "b"]);
        let ls = enumerate_maximal_levels(&t).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<_> = ls.iter().collect();
        if distinct.len() != ls.len() {
            return Err("duplicate level functions".into());
        }
        if let Some(l) = ls.iter().find(|l| !l.is_maximal() || !validate_level(&t, l).valid) {
            return Err(format!("{l:?} is not a valid maximal level"));
        }
        let n_t = count_maximal_levels(&t).map_err(|e| e.to_string())?;
        if n_t != ls.len() as u64 {
            return Err(format!("count {n_t} ≠ enumeration {}", ls.len()));
        }
        Ok(())
    }));

    checks.push(check("refinement_smooth", cases, |_| {
        let n = rng.gen_range(1..=5);
        let t = random_tree(&mut rng, n, &["a", "b"]);
        let r = build_refinement(&t).map_err(|e| e.to_string())?;
        let cert = is_smooth_refinement(&r);
        if cert.smooth {
            Ok(())
        } else {
            Err(format!("{:?}", cert.failures.first()))
        }
    }));

    checks.push(check("koszul_coherence", cases, |_| {
        let len = rng.gen_range(1..=7);
        let factors: Vec<Factor> = (0..len)
            .map(|i| {
                let l = OrientationLine::new(&format!("x{i}"), rng.gen_range(-3..=3));
                if rng.gen_bool(0.3) {
                    Factor::dual_of(l)
                } else {
                    Factor::line(l)
                }
            })
            .collect();
        let w = LineWord::new(factors);
        let mut p1: Vec<usize> = (0..len).collect();
        let mut p2 = p1.clone();
        p1.shuffle(&mut rng);
        p2.shuffle(&mut rng);
        let composed: Vec<usize> = p2.iter().map(|&i| p1[i]).collect();
        let stepwise = reorder_sign(&reorder_sign(&w, &p1).map_err(|e| e.to_string())?, &p2).map_err(|e| e.to_string())?;
        let direct = reorder_sign(&w, &composed).map_err(|e| e.to_string())?;
        if stepwise == direct {
            Ok(())
        } else {
            Err(format!("sign {} ≠ {}", stepwise.sign, direct.sign))
        }
    }));

    checks.push(check("closed_tables", cases.min(20), |_| {
        let u = random_universe(&mut rng, 4, 4);
        let table = random_closed_counts(&mut rng, &u, &qi(8)).map_err(|e| e.to_string())?;
        let (c, r) = contact_homology(&u, &table, &Cutoff::action(qi(8))).map_err(|e| e.to_string())?;
        if !c.check_boundary_squared().ok {
            return Err("∂² ≠ 0".into());
        }
        let lhs = r.dim_even as i64 - r.dim_odd as i64;
        let rhs = r.betti_even as i64 - r.betti_odd as i64;
        if lhs == rhs {
            Ok(())
        } else {
            Err(format!("Euler characteristic {lhs} ≠ {rhs}"))
        }
    }));

    checks.push(check("index_additivity", cases, |_| {
        let n = rng.gen_range(1..=5);
        let (top_plus, top_minus, bottom_minus) = (cz(&mut rng, 1), cz(&mut rng, 2), cz(&mut rng, 2));
        let glued = rng.gen_range(-6..=6);
        let (c1a, c1b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let upper = IndexData { n, euler_char: 2, c1: c1a, cz_plus: top_plus.clone(), cz_minus: [top_minus.clone(), vec![glued]].concat() };
        let lower = IndexData { n, euler_char: 2, c1: c1b, cz_plus: vec![glued], cz_minus: bottom_minus.clone() };
        let whole = IndexData { n, euler_char: 2, c1: c1a + c1b, cz_plus: top_plus, cz_minus: [top_minus, bottom_minus].concat() };
        let (a, b, w) = (fredholm_index(&upper), fredholm_index(&lower), fredholm_index(&whole));
        if a + b == w {
            Ok(())
        } else {
            Err(format!("{a} + {b} ≠ {w}"))
        }
    }));

    SelftestReport { seed, checks }
}
