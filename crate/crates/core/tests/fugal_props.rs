mod common;

use common::*;
use fugal_core::finset::{FinMonoid, FinSet, FreeMonoidHandle};
use fugal_core::fugal::*;
use fugal_core::gen::all_monoid_machines;
use fugal_core::guitart::sigma_functor;
use fugal_core::machines::compose_diamond;
use fugal_core::Verdict;
use proptest::prelude::*;

/// `s(e, x·y) = s(e, x)·s(d(e, x), y)` on every triple, by brute force.
fn fugal_oracle(m: &MonoidMealyMachine, input: &FinMonoid, output: &FinMonoid) -> bool {
    let fin = |x: Elem| match x {
        Elem::Fin(x) => x,
        Elem::Word(_) => unreachable!(),
    };
    m.states().indices().all(|e| {
        input.carrier().indices().all(|x| {
            input.carrier().indices().all(|y| {
                let lhs = fin(m.out(e, &Elem::Fin(input.mul(x, y))));
                let ex = m.act(e, &Elem::Fin(x));
                let rhs = output.mul(fin(m.out(e, &Elem::Fin(x))), fin(m.out(ex, &Elem::Fin(y))));
                lhs == rhs
            })
        })
    })
}

fn unital(m: &MonoidMealyMachine, output: &FinMonoid) -> bool {
    m.states().indices().all(|e| m.out(e, &m.input().unit()) == Elem::Fin(output.unit()))
}

fn small_monoids() -> Vec<FinMonoid> {
    vec![FinMonoid::z2_multiplicative(), FinMonoid::idempotent2()]
}

#[test]
fn sigma_is_a_functor_iff_fugal_and_unital() {
    for input in small_monoids() {
        for output in small_monoids() {
            for ne in 1..=2 {
                for m in all_monoid_machines(&FinSet::range("E", ne), &input, &output) {
                    let expected = fugal_oracle(&m, &input, &output) && unital(&m, &output);
                    assert_eq!(sigma_functor(&m).unwrap().verdict.holds(), expected, "{m:?}");
                    assert_eq!(is_fugal(&m, None).unwrap().holds(), fugal_oracle(&m, &input, &output));
                }
            }
        }
    }
}

#[test]
fn fugal_machines_send_the_unit_to_idempotents() {
    for input in small_monoids() {
        let output = FinMonoid::cyclic(3);
        for m in all_monoid_machines(&FinSet::range("E", 2), &input, &output) {
            if is_fugal(&m, None).unwrap().holds() {
                assert!(unit_outputs_idempotent(&m).holds());
            }
        }
    }
}

#[test]
fn free_input_needs_a_bound() {
    let m = fugal_extension(&xor());
    assert!(is_fugal(&m, None).is_err());
}

#[test]
fn non_fugal_evaluator_is_caught() {
    // Reports the length of the input word as a single output letter.
    let b = bits();
    let m = MonoidMealyMachine::with_evaluator(
        "len",
        FinSet::singleton("E", "*"),
        FreeMonoidHandle::new(b.clone()),
        Monoid::Finite(FinMonoid::z2_multiplicative()),
        vec![0, 0],
        |_, w| Elem::Fin(if w.is_empty() { 0 } else { 1 }),
    )
    .unwrap();
    let witness = is_fugal(&m, Some(3)).unwrap();
    assert!(matches!(witness.verdict, Verdict::Fails(_)));
}

proptest! {
    #[test]
    fn extensions_are_fugal(m in machine(3)) {
        prop_assert!(is_fugal(&fugal_extension(&m), Some(4)).unwrap().holds());
    }

    #[test]
    fn extension_outputs_match_word_runs(m in machine(3)) {
        let ext = fugal_extension(&m);
        for w in all_words(m.input().len(), 4) {
            for e in m.states().indices() {
                let (end, out) = run(&m, e, &w);
                prop_assert_eq!(ext.eval(e, &Elem::Word(w.clone())), (end, Elem::Word(out)));
            }
        }
    }

    #[test]
    fn flat_preserves_composition((m1, m2) in composable(3)) {
        prop_assert!(check_flat_preserves_composition(&m1, &m2, 4).unwrap().holds());
        let lhs = fugal_extension(&compose_diamond(&m2, &m1).unwrap());
        let rhs = compose_monoid_diamond(&fugal_extension(&m2), &fugal_extension(&m1)).unwrap();
        for w in all_words(m1.input().len(), 3) {
            for s in lhs.states().indices() {
                prop_assert_eq!(lhs.eval(s, &Elem::Word(w.clone())), rhs.eval(s, &Elem::Word(w.clone())));
            }
        }
    }

    #[test]
    fn hk_is_the_identity(m in (1..=3usize, 1..=3usize).prop_flat_map(|(ne, ni)| machine_on("m", FinSet::range("E", ne), FinSet::range("A", ni), FinMonoid::cyclic(3).carrier().clone()))) {
        let target = FinMonoid::cyclic(3);
        prop_assert!(verify_hk(&m, &target).unwrap().holds());
        let k = k_extend(&m, &target).unwrap();
        prop_assert!(verify_kh(&k, 5).unwrap().holds());
        // K multiplies the output letters out in the target.
        for w in all_words(m.input().len(), 3) {
            for e in m.states().indices() {
                let (end, out) = run(&m, e, &w);
                prop_assert_eq!(k.eval(e, &Elem::Word(w.clone())), (end, Elem::Fin(target.fold(out))));
            }
        }
    }

    #[test]
    fn kh_recovers_fugal_extensions(m in machine(3)) {
        prop_assert!(verify_kh(&fugal_extension(&m), 4).unwrap().holds());
    }
}
