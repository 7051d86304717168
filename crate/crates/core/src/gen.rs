//! Random and exhaustive instance generators.
//!
//! Everything takes an explicit `Rng`, so a seeded generator gives
//! reproducible instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cat::{enumerate_nat_trans, NatTrans, SetFunctor, DEFAULT_CANDIDATE_LIMIT};
use crate::finset::{FinFn, FinMonoid, FinSet};
use crate::fugal::{check_action, Elem, Monoid, MonoidMealyMachine};
use crate::guitart::FinCat;
use crate::intertwiner::Intertwiner;
use crate::kleisli::PowersetMealy;
use crate::machines::MealyMachine;
use crate::rel::Rel;
use crate::Verdict;

/// A machine on `E = {0..ne}` with uniformly random tables.
pub fn random_mealy<R: Rng>(rng: &mut R, name: &str, states: &FinSet, input: &FinSet, output: &FinSet) -> MealyMachine {
    let cells = states.len() * input.len();
    let d = (0..cells).map(|_| rng.gen_range(0..states.len())).collect();
    let s = (0..cells).map(|_| rng.gen_range(0..output.len())).collect();
    MealyMachine::new(name, states.clone(), input.clone(), output.clone(), d, s).expect("random tables are in range")
}

/// Random sizes in `1..=max` for states, input and output.
pub fn random_mealy_upto<R: Rng>(rng: &mut R, max: usize) -> MealyMachine {
    let (ne, ni, no) = (rng.gen_range(1..=max), rng.gen_range(1..=max), rng.gen_range(1..=max));
    random_mealy(
        rng,
        "m",
        &FinSet::range("E", ne),
        &FinSet::range("I", ni),
        &FinSet::range("O", no),
    )
}

/// `(m1, m2)` with the output of `m1` equal to the input of `m2`; all
/// carriers have size in `1..=max`.
pub fn random_composable_pair<R: Rng>(rng: &mut R, max: usize) -> (MealyMachine, MealyMachine) {
    let mut size = || rng.gen_range(1..=max);
    let (e, f, a, b, c) = (size(), size(), size(), size(), size());
    let (a, b, c) = (FinSet::range("A", a), FinSet::range("B", b), FinSet::range("C", c));
    let m1 = random_mealy(rng, "m1", &FinSet::range("E", e), &a, &b);
    let m2 = random_mealy(rng, "m2", &FinSet::range("F", f), &b, &c);
    (m1, m2)
}

pub fn random_powerset_mealy<R: Rng>(rng: &mut R, states: &FinSet, input: &FinSet, output: &FinSet) -> PowersetMealy {
    let cells = states.len() * input.len();
    let subset = |rng: &mut R, n: usize| (0..n).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>();
    let d = (0..cells).map(|_| subset(rng, states.len())).collect();
    let s = (0..cells).map(|_| subset(rng, output.len())).collect();
    PowersetMealy::new("n", states.clone(), input.clone(), output.clone(), d, s).expect("random subsets are in range")
}

pub fn random_rel<R: Rng>(rng: &mut R, src: &FinSet, dst: &FinSet) -> Rel {
    let bits = src.len() * dst.len();
    Rel::from_mask(src, dst, rng.gen_range(0..1u64 << bits))
}

/// Every right action of `m` on `states`, as tables indexed `e * |M| + x`.
pub fn all_actions(states: &FinSet, m: &FinMonoid) -> Vec<Vec<usize>> {
    let cells = states.len() * m.len();
    let mut out = Vec::new();
    let mut table = vec![0; cells];
    loop {
        if check_action(states, m, &table).holds() {
            out.push(table.clone());
        }
        if !bump(&mut table, states.len()) {
            return out;
        }
    }
}

fn bump(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every machine between two finite monoids on `states`: each action
/// paired with each output table, in lexicographic order.
pub fn all_monoid_machines(states: &FinSet, input: &FinMonoid, output: &FinMonoid) -> Vec<MonoidMealyMachine> {
    let cells = states.len() * input.len();
    let mut out = Vec::new();
    for act in all_actions(states, input) {
        let mut s = vec![0; cells];
        loop {
            out.push(
                MonoidMealyMachine::from_tables(
                    "m",
                    states.clone(),
                    input.clone(),
                    Monoid::Finite(output.clone()),
                    act.clone(),
                    s.iter().map(|&y| Elem::Fin(y)).collect(),
                )
                .expect("enumerated action"),
            );
            if !bump(&mut s, output.len()) {
                break;
            }
        }
    }
    out
}

/// A random action of the one-object category of `Z/2 = {1, g}` on
/// `n` points: `g` acts by an involution built from random disjoint swaps.
pub fn random_z2_set<R: Rng>(rng: &mut R, c: &FinCat, name: &str, n: usize) -> SetFunctor {
    let set = FinSet::range(name, n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut inv: Vec<usize> = (0..n).collect();
    for pair in perm.chunks(2) {
        if pair.len() == 2 && rng.gen_bool(0.5) {
            inv.swap(pair[0], pair[1]);
        }
    }
    let g = FinFn::new(set.clone(), set.clone(), inv).expect("involution");
    let unit = c.id(0);
    let maps = c
        .morphisms()
        .indices()
        .map(|f| if f == unit { FinFn::identity(&set) } else { g.clone() })
        .collect();
    SetFunctor::new(name, c.clone(), vec![set], maps).expect("involutions give Z/2-sets")
}

/// A uniformly chosen natural transformation `src ⇒ dst`, if any exists.
pub fn random_nat_trans<R: Rng>(rng: &mut R, src: &SetFunctor, dst: &SetFunctor) -> Option<NatTrans> {
    enumerate_nat_trans(src, dst, DEFAULT_CANDIDATE_LIMIT)
        .ok()?
        .choose(rng)
        .cloned()
}

/// Uniformly random structure maps between two machines.
pub fn random_intertwiner<R: Rng>(
    rng: &mut R,
    src: &MealyMachine,
    dst: &MealyMachine,
    u: &FinSet,
    v: &FinSet,
) -> Intertwiner {
    let mut pick = |n: usize, m: usize| -> Vec<usize> { (0..n).map(|_| rng.gen_range(0..m)).collect() };
    let iota = pick(dst.input().len() * u.len(), u.len() * src.input().len());
    let eps = pick(dst.states().len() * u.len(), v.len() * src.states().len());
    let omega = pick(dst.output().len() * u.len(), v.len() * src.output().len());
    let w = u.len();
    let (wi, we, wo) = (src.input().len(), src.states().len(), src.output().len());
    Intertwiner::from_fns(
        src.clone(),
        dst.clone(),
        u.clone(),
        v.clone(),
        |x, y| {
            let k = iota[x * w + y];
            (k / wi, k % wi)
        },
        |x, y| {
            let k = eps[x * w + y];
            (k / we, k % we)
        },
        |x, y| {
            let k = omega[x * w + y];
            (k / wo, k % wo)
        },
    )
    .expect("random structure maps are in range")
}

/// Every valid intertwiner from `src` to `dst` with the given `U`, `V`:
/// `ι` and `ε` are enumerated, the transition equation filters them, and
/// `ω` ranges over all completions of the values the output equation forces.
pub fn all_intertwiners(src: &MealyMachine, dst: &MealyMachine, u: &FinSet, v: &FinSet) -> Vec<Intertwiner> {
    let w = u.len();
    let (ni, ne, no) = (src.input().len(), src.states().len(), src.output().len());
    let iota_cells = dst.input().len() * w;
    let eps_cells = dst.states().len() * w;
    let omega_cells = dst.output().len() * w;
    let mut out = Vec::new();
    if w * ni == 0 && iota_cells > 0 || v.len() * ne == 0 && eps_cells > 0 || v.len() * no == 0 && omega_cells > 0 {
        return out;
    }
    let mut iota = vec![0; iota_cells];
    loop {
        let mut eps = vec![0; eps_cells];
        loop {
            if let Some(forced) = forced_omega(src, dst, w, &iota, &eps) {
                let free: Vec<usize> = (0..omega_cells).filter(|&k| forced[k].is_none()).collect();
                let mut digits = vec![0; free.len()];
                loop {
                    let mut omega: Vec<usize> = forced.iter().map(|x| x.unwrap_or(0)).collect();
                    for (&k, &d) in free.iter().zip(&digits) {
                        omega[k] = d;
                    }
                    let split = |t: &[usize], k: usize, width: usize| (t[k] / width, t[k] % width);
                    out.push(
                        Intertwiner::from_fns(
                            src.clone(),
                            dst.clone(),
                            u.clone(),
                            v.clone(),
                            |x, y| split(&iota, x * w + y, ni),
                            |x, y| split(&eps, x * w + y, ne),
                            |x, y| split(&omega, x * w + y, no),
                        )
                        .expect("enumerated maps are in range"),
                    );
                    if !bump(&mut digits, v.len() * no) {
                        break;
                    }
                }
            }
            if !bump(&mut eps, v.len() * ne) {
                break;
            }
        }
        if !bump(&mut iota, w * ni) {
            return out;
        }
    }
}

/// Checks the transition equation and collects the `ω` values forced by the
/// output equation; `None` if either is violated.
fn forced_omega(src: &MealyMachine, dst: &MealyMachine, w: usize, iota: &[usize], eps: &[usize]) -> Option<Vec<Option<usize>>> {
    let (ni, ne, no) = (src.input().len(), src.states().len(), src.output().len());
    let mut forced = vec![None; dst.output().len() * w];
    for e2 in dst.states().indices() {
        for i2 in dst.input().indices() {
            for x in 0..w {
                let (u1, i) = (iota[i2 * w + x] / ni, iota[i2 * w + x] % ni);
                let (v, e) = (eps[e2 * w + u1] / ne, eps[e2 * w + u1] % ne);
                if eps[dst.d(e2, i2) * w + x] != v * ne + src.d(e, i) {
                    return None;
                }
                let want = v * no + src.s(e, i);
                let slot = &mut forced[dst.s(e2, i2) * w + x];
                match *slot {
                    Some(have) if have != want => return None,
                    _ => *slot = Some(want),
                }
            }
        }
    }
    Some(forced)
}

/// Whether `m` sends the unit to the unit at every state.
pub fn is_unital(m: &MonoidMealyMachine) -> bool {
    let one = m.input().unit();
    let target = m.output().unit();
    m.states().indices().all(|e| m.out(e, &one) == target)
}

/// All machines on `states` that are fugal and unital.
pub fn all_unital_fugal_machines(states: &FinSet, input: &FinMonoid, output: &FinMonoid) -> Vec<MonoidMealyMachine> {
    all_monoid_machines(states, input, output)
        .into_iter()
        .filter(|m| {
            is_unital(m)
                && matches!(
                    crate::fugal::is_fugal(m, None).map(|w| w.verdict),
                    Ok(Verdict::Holds)
                )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_mealy_upto(&mut ChaCha8Rng::seed_from_u64(7), 4);
        let b = random_mealy_upto(&mut ChaCha8Rng::seed_from_u64(7), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn actions_of_z2_on_two_points() {
        // Identity and swap for g; g must be an involution.
        let acts = all_actions(&FinSet::range("E", 2), &FinMonoid::z2_multiplicative());
        assert_eq!(acts.len(), 2);
    }

    #[test]
    fn z2_sets_are_functors() {
        let c = FinCat::from_monoid(&FinMonoid::z2_multiplicative());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..4 {
            assert_eq!(random_z2_set(&mut rng, &c, "X", n).set(0).len(), n);
        }
    }
}
