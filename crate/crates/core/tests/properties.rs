mod common;

use avoid_core::constructions::{ab_set, residue_set, top_interval};
use avoid_core::exact::{all_extremal, lift_residues, prefix_profile, rho_m};
use avoid_core::family1::def1_transform;
use avoid_core::family2::{family2_case, family2_extremal};
use avoid_core::generate::RandomAvoiding;
use avoid_core::{avoids, max_avoiding, IntSet, SearchConfig, ThreeVarEquation};
use proptest::prelude::*;

fn eq(a: u64, b: u64, c: u64) -> ThreeVarEquation {
    ThreeVarEquation::new(a, b, c).unwrap()
}

fn equations() -> impl Strategy<Value = ThreeVarEquation> {
    (1u64..5, 1u64..5, 1u64..14).prop_filter_map("valid", |(a, b, c)| ThreeVarEquation::new(a, b, c).ok())
}

#[test]
fn sizes_step_by_at_most_one() {
    for e in [eq(1, 2, 4), eq(2, 2, 5), eq(1, 2, 13), eq(1, 3, 9), eq(3, 5, 2)] {
        let sizes = prefix_profile(&e, 50, &SearchConfig::default(), &mut |_, _, _| {}).unwrap().sizes;
        assert!(sizes.windows(2).all(|w| w[0] <= w[1] && w[1] <= w[0] + 1), "{e}: {sizes:?}");
    }
}

#[test]
fn solver_dominates_constructions() {
    let cfg = SearchConfig::default();
    for e in [eq(1, 2, 4), eq(2, 2, 5), eq(1, 2, 13), eq(3, 3, 2), eq(1, 1, 4)] {
        let form = e.to_form();
        let sizes = prefix_profile(&e, 40, &cfg, &mut |_, _, _| {}).unwrap().sizes;
        for n in 1..=40u64 {
            let mut built = vec![top_interval(&form, n).unwrap()];
            built.extend((2..8).filter_map(|q| residue_set(&form, q, n).ok()));
            if e.a() == e.b() && family2_case(e.b(), e.c()).is_ok() {
                built.push(family2_extremal(e.b(), e.c(), n).unwrap().set.materialize());
            }
            if e.a() == 1 && e.c() == e.b() * e.b() {
                built.push(ab_set(e.b(), n).unwrap().0);
            }
            for s in built {
                assert!(s.len() <= sizes[n as usize], "{e} n={n}: {s}");
            }
        }
    }
}

#[test]
fn all_extremal_small_cases() {
    let cfg = SearchConfig::default();
    let e = eq(2, 2, 5);
    let got = all_extremal(&e, 3, 100, &cfg).unwrap();
    let sols = common::solution_masks(2, 2, 5, 3);
    let mut want: Vec<IntSet> = (0u64..8)
        .filter(|m| m.count_ones() as usize == got.size && sols.iter().all(|&s| m & s != s))
        .map(|m| IntSet::from_predicate(3, |x| m >> (x - 1) & 1 == 1))
        .collect();
    want.sort_by(|a, b| a.members().cmp(b.members()));
    assert_eq!(got.sets, want);
    assert!(!got.truncated);
    let one = all_extremal(&eq(1, 2, 4), 1, 5, &cfg).unwrap();
    assert_eq!(one.sets, vec![IntSet::new(1, [1]).unwrap()]);
}

#[test]
fn swapped_solutions_when_a_equals_b() {
    for c in [1, 3, 5, 7] {
        let e = eq(2, 2, c);
        let sols = avoid_core::enumerate_solutions(&e, 30);
        for s in &sols {
            assert!(sols.iter().any(|t| (t.x, t.y, t.z) == (s.y, s.x, s.z)));
        }
    }
}

#[test]
fn transform_ends_in_interval_form() {
    let e = eq(1, 2, 13);
    let mut gen = RandomAvoiding::new(5);
    for _ in 0..300 {
        let s = gen.sample_any(&e, 80);
        if s.is_empty() {
            continue;
        }
        let tr = def1_transform(&e, &s).unwrap();
        assert_eq!(tr.last(), &tr.closed_form(), "{s}");
        assert!(tr.r[tr.t] < tr.s && tr.r[..tr.t].iter().all(|&r| r >= tr.s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifted_residue_sets_avoid(e in equations(), m in 1u64..12, n in 1u64..80) {
        let rho = rho_m(&e, m, &SearchConfig::default()).unwrap();
        let lifted = lift_residues(&rho.witness, m, n);
        prop_assert!(avoids(&e, &lifted));
        prop_assert_eq!(rho.rho * m as i128, avoid_core::rational::ratio(rho.witness.len() as i128, 1));
    }

    #[test]
    fn witness_matches_scan(e in equations(), n in 1u64..=14) {
        let r = max_avoiding(&e, n, &SearchConfig::default()).unwrap();
        prop_assert_eq!(r.max_size, common::brute_max(e.a(), e.b(), e.c(), n));
        prop_assert!(common::brute_avoids(e.a(), e.b(), e.c(), r.witness.members()));
        prop_assert_eq!(r.witness.len(), r.max_size);
    }
}
