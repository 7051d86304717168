mod common;

use common::*;
use fugal_core::finset::{FinFn, FinSet, Word};
use fugal_core::gen::random_powerset_mealy;
use fugal_core::kleisli::*;
use fugal_core::machines::run_mealy;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

fn mask(xs: &[usize]) -> usize {
    xs.iter().fold(0, |m, &i| m | 1 << i)
}

/// Random nondeterministic machine with carriers of size `1..=3`.
fn nondet() -> impl Strategy<Value = PowersetMealy> {
    (1..=3usize, 1..=3usize, 1..=3usize, any::<u64>()).prop_map(|(ne, ni, no, seed)| {
        random_powerset_mealy(
            &mut ChaCha8Rng::seed_from_u64(seed),
            &FinSet::range("E", ne),
            &FinSet::range("I", ni),
            &FinSet::range("O", no),
        )
    })
}

proptest! {
    #[test]
    fn expand_of_lift_restricts_to_the_machine(m in machine(4)) {
        let x = expand(&lift_deterministic(&m), DEFAULT_EXPAND_LIMIT).unwrap();
        for e in m.states().indices() {
            for a in m.input().indices() {
                prop_assert_eq!(x.d(1 << e, 1 << a), 1 << m.d(e, a));
                prop_assert_eq!(x.s(1 << e, 1 << a), 1 << m.s(e, a));
            }
        }
    }

    #[test]
    fn expansion_is_the_union_of_pointwise_images(n in nondet()) {
        let x = expand(&n, DEFAULT_EXPAND_LIMIT).unwrap();
        let (ne, ni) = (n.states().len(), n.input().len());
        for s in 0..1usize << ne {
            for t in 0..1usize << ni {
                let mut next = 0;
                let mut out = 0;
                for e in members(s, ne) {
                    for a in members(t, ni) {
                        next |= mask(n.d(e, a));
                        out |= mask(n.s(e, a));
                    }
                }
                prop_assert_eq!(x.d(s, t), next);
                prop_assert_eq!(x.s(s, t), out);
            }
        }
    }

    #[test]
    fn expansion_preserves_unions(n in nondet()) {
        let x = expand(&n, DEFAULT_EXPAND_LIMIT).unwrap();
        let (ne, ni) = (n.states().len(), n.input().len());
        for s in 0..1usize << ne {
            for s2 in 0..1usize << ne {
                for t in 0..1usize << ni {
                    prop_assert_eq!(x.d(s | s2, t), x.d(s, t) | x.d(s2, t));
                    prop_assert_eq!(x.s(s | s2, t), x.s(s, t) | x.s(s2, t));
                    prop_assert_eq!(x.d(t & s, 0), 0);
                }
            }
        }
    }

    #[test]
    fn nondeterministic_runs_follow_the_expansion(n in nondet(), w in proptest::collection::vec(0usize..3, 0..5), start in 0usize..8) {
        let w: Vec<usize> = w.into_iter().filter(|&a| a < n.input().len()).collect();
        let start = members(start, n.states().len());
        let trace = run_nondeterministic(&n, &start, &Word::new(n.input().clone(), w.clone()).unwrap()).unwrap();
        let x = expand(&n, DEFAULT_EXPAND_LIMIT).unwrap();
        let mut s = mask(&start);
        for (k, &a) in w.iter().enumerate() {
            prop_assert_eq!(mask(&trace[k].1), x.s(s, 1 << a));
            s = x.d(s, 1 << a);
            prop_assert_eq!(mask(&trace[k].0), s);
        }
    }

    #[test]
    fn lifted_runs_are_singleton_runs(m in machine(3), w in proptest::collection::vec(0usize..3, 0..6)) {
        let w: Vec<usize> = w.into_iter().filter(|&a| a < m.input().len()).collect();
        let word = Word::new(m.input().clone(), w).unwrap();
        let trace = run_nondeterministic(&lift_deterministic(&m), &[0], &word).unwrap();
        let (_, out) = run_mealy(&m, 0, &word).unwrap();
        let singletons: Vec<Vec<usize>> = out.letters().iter().map(|&o| vec![o]).collect();
        prop_assert_eq!(trace.into_iter().map(|(_, o)| o).collect::<Vec<_>>(), singletons);
    }

    #[test]
    fn lifting_preserves_morphisms(m in machine(2), target in machine(2), table in proptest::collection::vec(0usize..2, 2)) {
        let target = fugal_core::machines::MealyMachine::new(
            "t",
            target.states().clone(),
            m.input().clone(),
            m.output().clone(),
            (0..target.states().len() * m.input().len()).map(|k| k % target.states().len()).collect(),
            (0..target.states().len() * m.input().len()).map(|k| k % m.output().len()).collect(),
        ).unwrap();
        let f = FinFn::new(m.states().clone(), target.states().clone(), table[..m.states().len()].iter().map(|&x| x % target.states().len()).collect()).unwrap();
        let det = fugal_core::machines::check_machine_morphism(&f, &m, &target).unwrap().holds();
        let lifted = check_kleisli_morphism(&f, &lift_deterministic(&m), &lift_deterministic(&target)).unwrap().holds();
        prop_assert_eq!(det, lifted);
    }
}

#[test]
fn strengths_agree_on_all_small_subsets() {
    for s in 0..16 {
        for t in 0..16 {
            let (s, t) = (members(s, 4), members(t, 4));
            assert_eq!(pair_left_first(&s, &t), pair_right_first(&s, &t));
        }
    }
}
