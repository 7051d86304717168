//! The acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p fugal-cli --test acceptance -- --nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use fugal_core::cat::{check_ran_universal_property, ran_along, SetFunctor, DEFAULT_CANDIDATE_LIMIT};
use fugal_core::finset::{words_up_to, FinFn, FinMonoid, FinSet};
use fugal_core::fugal::{check_flat_preserves_composition, fugal_extension, is_fugal, k_extend, verify_hk, verify_kh, Elem};
use fugal_core::gen::{
    all_intertwiners, all_monoid_machines, is_unital, random_composable_pair, random_mealy, random_mealy_upto, random_nat_trans,
    random_powerset_mealy, random_z2_set,
};
use fugal_core::guitart::{verify_pi_functoriality, CatFunctor, FinCat};
use fugal_core::intertwiner::{check_intertwiner, compose_intertwiners, Intertwiner};
use fugal_core::kleisli::{expand, lift_deterministic, PowersetMealy};
use fugal_core::machines::{check_machine_morphism, MealyMachine};
use fugal_core::rel::{enumerate_machines, greatest_fixpoint, ran_reachability, verify_terminal, Mode, Rel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, n: usize, text: String) -> Line {
    Line {
        ok,
        text: format!("{} criterion {n}: {text}", if ok { "PASS" } else { "FAIL" }),
    }
}

fn rng(n: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xACCE_0000 + n)
}

/// 500 machines, carriers up to 4, word pairs of total length up to 6,
/// under 10 s. The extension is also compared with a plain run on every
/// word up to length 6.
fn criterion_1() -> Line {
    let mut r = rng(1);
    let machines: Vec<MealyMachine> = (0..500).map(|_| random_mealy_upto(&mut r, 4)).collect();
    let start = Instant::now();
    let failures = machines
        .iter()
        .filter(|m| !matches!(is_fugal(&fugal_extension(m), Some(6)), Ok(w) if w.holds()))
        .count();
    let took = start.elapsed();

    let mut run_mismatches = 0;
    for m in machines.iter().take(100) {
        let ext = fugal_extension(m);
        for w in words_up_to(m.input().len(), 6) {
            for e in m.states().indices() {
                let (end, out) = m.run_indices(e, &w);
                if ext.eval(e, &Elem::Word(w.clone())) != (end, Elem::Word(out)) {
                    run_mismatches += 1;
                }
            }
        }
    }
    let ok = failures == 0 && run_mismatches == 0 && took < Duration::from_secs(10);
    line(
        ok,
        1,
        format!("500 extensions fugal up to total length 6 ({failures} failures, {run_mismatches} run mismatches, {:.2}s < 10s)", took.as_secs_f64()),
    )
}

/// 200 composable pairs, carriers up to 3, every word up to length 5.
/// Independent oracle: piping one run into the other.
fn criterion_2() -> Line {
    let mut r = rng(2);
    let mut mismatches = 0;
    let mut oracle_mismatches = 0;
    for _ in 0..200 {
        let (m1, m2) = random_composable_pair(&mut r, 3);
        if !matches!(check_flat_preserves_composition(&m1, &m2, 5), Ok(v) if v.holds()) {
            mismatches += 1;
        }
        let comp = fugal_core::fugal::compose_monoid_diamond(&fugal_extension(&m2), &fugal_extension(&m1)).expect("composable");
        let width = m1.states().len();
        for w in words_up_to(m1.input().len(), 5) {
            for f in m2.states().indices() {
                for e in m1.states().indices() {
                    let (e1, mid) = m1.run_indices(e, &w);
                    let (f1, out) = m2.run_indices(f, &mid);
                    if comp.eval(f * width + e, &Elem::Word(w.clone())) != (f1 * width + e1, Elem::Word(out)) {
                        oracle_mismatches += 1;
                    }
                }
            }
        }
    }
    line(
        mismatches + oracle_mismatches == 0,
        2,
        format!("200 pairs, words up to 5 ({mismatches} mismatches, {oracle_mismatches} against piping)"),
    )
}

/// HK = id exactly and KH = id up to length 6, for 200 machines into each
/// of Z/2 and C3. Oracle: K multiplies the letter outputs left to right.
fn criterion_3() -> Line {
    let mut r = rng(3);
    let mut hk = 0;
    let mut kh = 0;
    let mut oracle = 0;
    let mut total = 0;
    for target in [FinMonoid::z2_multiplicative(), FinMonoid::cyclic(3)] {
        for _ in 0..200 {
            total += 1;
            let (ne, ni) = (r.gen_range(1..=4), r.gen_range(1..=4));
            let m = random_mealy(&mut r, "m", &FinSet::range("E", ne), &FinSet::range("A", ni), target.carrier());
            if !matches!(verify_hk(&m, &target), Ok(v) if v.holds()) {
                hk += 1;
            }
            let k = k_extend(&m, &target).expect("typed");
            if !matches!(verify_kh(&k, 6), Ok(v) if v.holds()) {
                kh += 1;
            }
            for w in words_up_to(ni, 4) {
                for e in m.states().indices() {
                    let (end, letters) = m.run_indices(e, &w);
                    let product = letters.iter().fold(target.unit(), |acc, &y| target.mul(acc, y));
                    if k.eval(e, &Elem::Word(w.clone())) != (end, Elem::Fin(product)) {
                        oracle += 1;
                    }
                }
            }
        }
    }
    line(
        hk + kh + oracle == 0,
        3,
        format!("{total} machines into Z2 and C3 ({hk} HK mismatches, {kh} KH mismatches, {oracle} against the fold)"),
    )
}

/// Every pair of composable machines with |E| <= 2 over Z/2 and I2 whose
/// output assignment is functorial (fugal and unital). Fugal machines that
/// are not unital have no span and are counted separately.
fn criterion_4() -> Line {
    let start = Instant::now();
    let monoids = [FinMonoid::z2_multiplicative(), FinMonoid::idempotent2()];
    let mut pools = Vec::new();
    let mut excluded = 0;
    for (a, ma) in monoids.iter().enumerate() {
        for (b, mb) in monoids.iter().enumerate() {
            for n in 1..=2 {
                for m in all_monoid_machines(&FinSet::range("E", n), ma, mb) {
                    if !matches!(is_fugal(&m, None), Ok(w) if w.holds()) {
                        continue;
                    }
                    if is_unital(&m) {
                        pools.push((a, b, m));
                    } else {
                        excluded += 1;
                    }
                }
            }
        }
    }
    let mut pairs = 0;
    let mut failures = 0;
    for (a, b, m1) in &pools {
        for (b2, _, m2) in &pools {
            if b != b2 {
                continue;
            }
            let _ = a;
            pairs += 1;
            if !matches!(verify_pi_functoriality(m1, m2), Ok(v) if v.holds()) {
                failures += 1;
            }
        }
    }
    let took = start.elapsed();
    let ok = failures == 0 && pairs > 0 && took < Duration::from_secs(60);
    line(
        ok,
        4,
        format!(
            "{} machines, {pairs} composable pairs, {failures} failures, {excluded} fugal non-unital machines excluded ({:.2}s < 60s)",
            pools.len(),
            took.as_secs_f64()
        ),
    )
}

/// The largest machine among all subsets of A x B, by brute force.
fn enumeration_maximum(i: &Rel, o: &Rel, mode: Mode) -> Option<Rel> {
    let (a, b) = (o.src().clone(), o.dst().clone());
    let bits = a.len() * b.len();
    let mut machines = Vec::new();
    for mask in 0..1u64 << bits {
        let e = Rel::from_mask(&a, &b, mask);
        let closed = a.indices().all(|x| {
            a.indices().all(|y| {
                b.indices().all(|c| {
                    let precomposed = i.contains(x, y) && e.contains(y, c);
                    (!precomposed || e.contains(x, c)) && (!precomposed || mode == Mode::Moore || o.contains(x, c))
                })
            })
        });
        let below = a.indices().all(|x| b.indices().all(|c| !e.contains(x, c) || mode == Mode::Mealy || o.contains(x, c)));
        if closed && below {
            machines.push(e);
        }
    }
    let union = machines.iter().fold(Rel::empty(&a, &b), |acc, e| acc.union(e).expect("same type"));
    machines.contains(&union).then_some(union)
}

fn criterion_5() -> Line {
    let (a, b) = (FinSet::range("A", 2), FinSet::range("B", 2));
    let mut cases = 0;
    let mut moore_bad = 0;
    let mut mealy_bad = 0;
    for im in 0..16 {
        for om in 0..16 {
            cases += 1;
            let (i, o) = (Rel::from_mask(&a, &a, im), Rel::from_mask(&a, &b, om));
            let ran = ran_reachability(&i, &o, Mode::Moore).expect("typed");
            let same = Some(&ran) == enumeration_maximum(&i, &o, Mode::Moore).as_ref()
                && ran == greatest_fixpoint(&i, &o, Mode::Moore).expect("typed");
            if !same {
                moore_bad += 1;
            }
            let mealy = ran_reachability(&i, &o, Mode::Mealy).expect("typed");
            let certified = matches!(verify_terminal(&mealy, &i, &o, Mode::Mealy, 20), Ok(rep) if rep.verdict.holds());
            if !certified || Some(&mealy) != enumeration_maximum(&i, &o, Mode::Mealy).as_ref() {
                mealy_bad += 1;
            }
        }
    }

    // One base point: every subrelation of O is a Moore machine.
    let one = FinSet::range("A", 1);
    let mut count_bad = 0;
    for nb in 0..=3 {
        let bb = FinSet::range("B", nb);
        for im in 0..2 {
            for om in 0..1u64 << nb {
                let (i, o) = (Rel::from_mask(&one, &one, im), Rel::from_mask(&one, &bb, om));
                let n = enumerate_machines(&i, &o, Mode::Moore, 20).expect("small").len();
                if n != 1 << o.len() {
                    count_bad += 1;
                }
            }
        }
    }
    line(
        moore_bad + mealy_bad + count_bad == 0,
        5,
        format!("{cases} (I,O) cases ({moore_bad} Moore disagreements, {mealy_bad} Mealy not terminal, {count_bad} singleton counts off 2^|O|)"),
    )
}

/// Every Z/2-set on `n` points: one per involution.
fn all_z2_sets(c: &FinCat, n: usize) -> Vec<SetFunctor> {
    let set = FinSet::range("O", n);
    let mut out = Vec::new();
    let mut table = vec![0; n];
    loop {
        if (0..n).all(|x| table[table[x]] == x) {
            let g = FinFn::new(set.clone(), set.clone(), table.clone()).expect("in range");
            let maps = c.morphisms().indices().map(|f| if f == c.id(0) { FinFn::identity(&set) } else { g.clone() }).collect();
            out.push(SetFunctor::new("O", c.clone(), vec![set.clone()], maps).expect("involution"));
        }
        let mut k = 0;
        while k < n {
            table[k] += 1;
            if table[k] < n {
                break;
            }
            table[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
    }
}

fn criterion_6() -> Line {
    let c = FinCat::from_monoid(&FinMonoid::z2_multiplicative());
    let id = CatFunctor::identity(&c);
    let mut sets = 0;
    let mut yoneda_bad = 0;
    for n in 0..=3 {
        for o in all_z2_sets(&c, n) {
            sets += 1;
            match ran_along(&id, &o, DEFAULT_CANDIDATE_LIMIT) {
                Ok(ran) if ran.functor().set(0).len() == n => {}
                _ => yoneda_bad += 1,
            }
        }
    }
    let mut r = rng(6);
    let mut trials = 0;
    let mut not_unique = 0;
    while trials < 20 {
        let (ne, no) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let e = random_z2_set(&mut r, &c, "E", ne);
        let o = random_z2_set(&mut r, &c, "O", no);
        let Some(gamma) = random_nat_trans(&mut r, &e, &o) else {
            continue;
        };
        trials += 1;
        if !matches!(check_ran_universal_property(&id, &o, &e, &gamma, DEFAULT_CANDIDATE_LIMIT), Ok(u) if u.is_unique()) {
            not_unique += 1;
        }
    }
    line(
        yoneda_bad + not_unique == 0,
        6,
        format!("{sets} Z/2-sets with |O| <= 3 ({yoneda_bad} size mismatches), {trials} cones ({not_unique} without a unique mediator)"),
    )
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Union of pointwise images, straight from the nondeterministic tables.
fn image(n: &PowersetMealy, states: usize, letters: usize) -> (usize, usize) {
    let (mut d, mut s) = (0, 0);
    for e in members(states, n.states().len()) {
        for a in members(letters, n.input().len()) {
            d |= n.d(e, a).iter().fold(0, |m, &x| m | 1 << x);
            s |= n.s(e, a).iter().fold(0, |m, &x| m | 1 << x);
        }
    }
    (d, s)
}

fn criterion_7() -> Line {
    let mut r = rng(7);
    let mut lift_bad = 0;
    for _ in 0..200 {
        let m = random_mealy_upto(&mut r, 4);
        let x = expand(&lift_deterministic(&m), 16).expect("small");
        let same = m.states().indices().all(|e| {
            m.input().indices().all(|a| x.d(1 << e, 1 << a) == 1 << m.d(e, a) && x.s(1 << e, 1 << a) == 1 << m.s(e, a))
        });
        if !same {
            lift_bad += 1;
        }
    }
    let mut checked = 0u64;
    let mut union_bad = 0;
    for ne in 1..=3 {
        for ni in 1..=2 {
            for _ in 0..20 {
                let n = random_powerset_mealy(&mut r, &FinSet::range("E", ne), &FinSet::range("I", ni), &FinSet::range("O", 2));
                let x = expand(&n, 16).expect("small");
                for s1 in 0..1 << ne {
                    for s2 in 0..1 << ne {
                        for t1 in 0..1 << ni {
                            for t2 in 0..1 << ni {
                                checked += 1;
                                let joined = (x.d(s1 | s2, t1 | t2), x.s(s1 | s2, t1 | t2));
                                let parts = [(s1, t1), (s1, t2), (s2, t1), (s2, t2)]
                                    .iter()
                                    .fold((0, 0), |acc, &(s, t)| (acc.0 | x.d(s, t), acc.1 | x.s(s, t)));
                                if joined != parts || (x.d(s1, t1), x.s(s1, t1)) != image(&n, s1, t1) {
                                    union_bad += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    line(
        lift_bad + union_bad == 0,
        7,
        format!("200 lifted machines ({lift_bad} differ on singletons), {checked} subset unions with |E| <= 3 ({union_bad} not preserved)"),
    )
}

/// Every machine on `n` states over the two-letter alphabets.
fn all_bit_machines(n: usize) -> Vec<MealyMachine> {
    let bits = FinSet::range("A", 2);
    let states = FinSet::range("E", n);
    let cells = 2 * n;
    let mut out = Vec::new();
    for dm in 0..n.pow(cells as u32) {
        for sm in 0..1usize << cells {
            let d = (0..cells).map(|k| dm / n.pow(k as u32) % n).collect();
            let s = (0..cells).map(|k| sm >> k & 1).collect();
            out.push(MealyMachine::new("m", states.clone(), bits.clone(), bits.clone(), d, s).expect("typed"));
        }
    }
    out
}

fn family() -> Vec<MealyMachine> {
    let b = FinSet::range("A", 2);
    vec![
        MealyMachine::from_fns("xor", b.clone(), b.clone(), b.clone(), |e, x| e ^ x, |e, x| e ^ x).unwrap(),
        MealyMachine::from_fns("delay", b.clone(), b.clone(), b.clone(), |_, x| x, |p, _| p).unwrap(),
        MealyMachine::from_fns("copy", FinSet::range("E", 1), b.clone(), b.clone(), |_, _| 0, |_, x| x).unwrap(),
    ]
}

fn criterion_8() -> Line {
    let machines: Vec<MealyMachine> = (1..=2).flat_map(all_bit_machines).collect();
    let mut maps = 0u64;
    let mut induced_bad = 0;
    for m in &machines {
        for m2 in &machines {
            let (n1, n2) = (m.states().len(), m2.states().len());
            for code in 0..n2.pow(n1 as u32) {
                let table = (0..n1).map(|k| code / n2.pow(k as u32) % n2).collect();
                let f = FinFn::new(m.states().clone(), m2.states().clone(), table).expect("in range");
                maps += 1;
                let morphism = check_machine_morphism(&f, m, m2).expect("typed").holds();
                let induced = check_intertwiner(&Intertwiner::from_morphism(&f, m, m2).expect("typed")).holds();
                if morphism != induced {
                    induced_bad += 1;
                }
            }
        }
    }

    let fam = family();
    let sizes: Vec<FinSet> = (1..=2).map(|n| FinSet::range("U", n)).collect();
    let mut valid: Vec<Vec<Vec<Intertwiner>>> = Vec::new();
    for a in &fam {
        let mut row = Vec::new();
        for b in &fam {
            let mut all = Vec::new();
            for u in &sizes {
                for v in &sizes {
                    all.extend(all_intertwiners(a, b, u, v));
                }
            }
            row.push(all);
        }
        valid.push(row);
    }
    let mut pasted = 0u64;
    let mut paste_bad = 0;
    for a in 0..fam.len() {
        for b in 0..fam.len() {
            for c in 0..fam.len() {
                for i1 in &valid[a][b] {
                    for i2 in &valid[b][c] {
                        pasted += 1;
                        if !check_intertwiner(&compose_intertwiners(i2, i1).expect("composable")).holds() {
                            paste_bad += 1;
                        }
                    }
                }
            }
        }
    }
    line(
        induced_bad + paste_bad == 0 && pasted > 0,
        8,
        format!(
            "{maps} state maps between {} machines ({induced_bad} disagreements), {pasted} pastings of valid intertwiners ({paste_bad} invalid)",
            machines.len()
        ),
    )
}

fn criterion_9() -> Line {
    let run = || Command::new(env!("CARGO_BIN_EXE_fugal")).args(["laws", "--seed", "0"]).output().expect("binary runs");
    let (first, second) = (run(), run());
    let ok = first.status.success() && second.status.success() && first.stdout == second.stdout && !first.stdout.is_empty();
    line(
        ok,
        9,
        format!("`laws --seed 0` twice: {} bytes, identical: {}", first.stdout.len(), first.stdout == second.stdout),
    )
}

#[test]
fn acceptance() {
    let criteria: [fn() -> Line; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut failed = Vec::new();
    for criterion in criteria {
        let l = criterion();
        println!("{}", l.text);
        if !l.ok {
            failed.push(l.text);
        }
    }
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}
