mod common;

use common::*;
use fugal_core::finset::{FinFn, FinSet};
use fugal_core::machines::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn diamond_runs_like_a_pipeline((m1, m2) in composable(3), w in proptest::collection::vec(0usize..3, 0..6)) {
        let w: Vec<usize> = w.into_iter().filter(|&a| a < m1.input().len()).collect();
        let comp = compose_diamond(&m2, &m1).unwrap();
        prop_assert_eq!(comp.states().len(), m1.states().len() * m2.states().len());
        for f in m2.states().indices() {
            for e in m1.states().indices() {
                let (e1, mid) = run(&m1, e, &w);
                let (f1, out) = run(&m2, f, &mid);
                let (end, got) = run(&comp, f * m1.states().len() + e, &w);
                prop_assert_eq!(got, out);
                prop_assert_eq!(end, f1 * m1.states().len() + e1);
            }
        }
    }

    #[test]
    fn pipeline_check_agrees((m1, m2) in composable(3)) {
        prop_assert!(check_pipeline(&m2, &m1, 4).unwrap().holds());
    }

    #[test]
    fn associator_is_an_invertible_morphism((m1, m2) in composable(2), m3_tables in proptest::collection::vec(0usize..2, 8)) {
        let g = FinSet::range("G", 2);
        let d: Vec<usize> = (0..g.len() * m2.output().len()).map(|k| m3_tables[k % 8]).collect();
        let s: Vec<usize> = (0..g.len() * m2.output().len()).map(|k| m3_tables[(k + 3) % 8] % 2).collect();
        let m3 = MealyMachine::new("m3", g, m2.output().clone(), FinSet::range("D", 2), d, s).unwrap();
        let left = compose_diamond(&compose_diamond(&m3, &m2).unwrap(), &m1).unwrap();
        let right = compose_diamond(&m3, &compose_diamond(&m2, &m1).unwrap()).unwrap();
        let a = associator(&m3, &m2, &m1);
        prop_assert!(a.is_bijective());
        prop_assert!(check_machine_morphism(&a, &left, &right).unwrap().holds());
    }

    #[test]
    fn unitors_are_morphisms(m in machine(3)) {
        let l = compose_diamond(&MealyMachine::identity(m.output()), &m).unwrap();
        let r = compose_diamond(&m, &MealyMachine::identity(m.input())).unwrap();
        prop_assert!(check_machine_morphism(&left_unitor(&m), &l, &m).unwrap().holds());
        prop_assert!(check_machine_morphism(&right_unitor(&m), &r, &m).unwrap().holds());
    }

    #[test]
    fn morphism_check_matches_definition(m in machine(2), table in proptest::collection::vec(0usize..2, 2)) {
        let target = m.clone().renamed("n");
        let f = FinFn::new(m.states().clone(), target.states().clone(), table[..m.states().len()].iter().map(|&x| x % m.states().len()).collect()).unwrap();
        let oracle = m.states().indices().all(|e| m.input().indices().all(|a| {
            target.d(f.apply(e), a) == f.apply(m.d(e, a)) && target.s(f.apply(e), a) == m.s(e, a)
        }));
        prop_assert_eq!(check_machine_morphism(&f, &m, &target).unwrap().holds(), oracle);
    }
}

#[test]
fn composite_of_incompatible_machines_is_a_type_error() {
    let m = MealyMachine::identity(&FinSet::range("X", 3));
    assert!(compose_diamond(&m, &xor()).is_err());
}
