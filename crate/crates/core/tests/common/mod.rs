#![allow(dead_code)]

use fugal_core::finset::FinSet;
use fugal_core::machines::MealyMachine;
use proptest::collection::vec;
use proptest::prelude::*;

pub fn bits() -> FinSet {
    FinSet::range("B", 2)
}

pub fn xor() -> MealyMachine {
    MealyMachine::from_fns("xor", bits(), bits(), bits(), |p, x| p ^ x, |p, x| p ^ x).unwrap()
}

pub fn machine_on(
    name: &'static str,
    states: FinSet,
    input: FinSet,
    output: FinSet,
) -> impl Strategy<Value = MealyMachine> {
    let cells = states.len() * input.len();
    (vec(0..states.len(), cells), vec(0..output.len(), cells)).prop_map(move |(d, s)| {
        MealyMachine::new(name, states.clone(), input.clone(), output.clone(), d, s).unwrap()
    })
}

/// Machines with every carrier of size `1..=max`.
pub fn machine(max: usize) -> impl Strategy<Value = MealyMachine> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(ne, ni, no)| {
        machine_on("m", FinSet::range("E", ne), FinSet::range("I", ni), FinSet::range("O", no))
    })
}

/// `(m1, m2)` with `m1`'s output equal to `m2`'s input.
pub fn composable(max: usize) -> impl Strategy<Value = (MealyMachine, MealyMachine)> {
    (1..=max, 1..=max, 1..=max, 1..=max, 1..=max).prop_flat_map(|(e, f, a, b, c)| {
        let (a, b, c) = (FinSet::range("A", a), FinSet::range("B", b), FinSet::range("C", c));
        (
            machine_on("m1", FinSet::range("E", e), a, b.clone()),
            machine_on("m2", FinSet::range("F", f), b, c),
        )
    })
}

/// Word-level oracle: the output word of `m` from `e`, letter by letter.
pub fn run(m: &MealyMachine, mut e: usize, word: &[usize]) -> (usize, Vec<usize>) {
    let mut out = Vec::new();
    for &a in word {
        out.push(m.s(e, a));
        e = m.d(e, a);
    }
    (e, out)
}

/// All words over `k` letters of length at most `n`, independently of the
/// library's enumeration.
pub fn all_words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut layer = vec![Vec::new()];
    let mut out = layer.clone();
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
