use fugal_core::cat::*;
use fugal_core::finset::{FinFn, FinMonoid, FinSet};
use fugal_core::gen::{random_nat_trans, random_z2_set};
use fugal_core::guitart::{CatFunctor, FinCat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn z2() -> FinCat {
    FinCat::from_monoid(&FinMonoid::z2_multiplicative())
}

/// Every Z/2-set on `n` points: one per involution.
fn all_z2_sets(c: &FinCat, n: usize) -> Vec<SetFunctor> {
    let x = FinSet::range("O", n);
    let mut out = Vec::new();
    let mut table = vec![0; n];
    loop {
        if (0..n).all(|i| table[table[i]] == i) {
            let g = FinFn::new(x.clone(), x.clone(), table.clone()).unwrap();
            let maps = c
                .morphisms()
                .indices()
                .map(|f| if f == c.id(0) { FinFn::identity(&x) } else { g.clone() })
                .collect();
            out.push(SetFunctor::new("O", c.clone(), vec![x.clone()], maps).unwrap());
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

#[test]
fn yoneda_for_every_small_z2_set() {
    let c = z2();
    let id = CatFunctor::identity(&c);
    let mut seen = 0;
    for n in 0..=3 {
        for o in all_z2_sets(&c, n) {
            let ran = ran_along(&id, &o, DEFAULT_CANDIDATE_LIMIT).unwrap();
            assert_eq!(ran.functor().set(0).len(), n);
            assert!(ran.counit().unwrap().component(0).is_bijective());
            seen += 1;
        }
    }
    // Involutions on 0, 1, 2, 3 points.
    assert_eq!(seen, 1 + 1 + 2 + 4);
}

#[test]
fn mediators_are_unique_and_factor_through_the_counit() {
    let c = z2();
    let t = CatFunctor::identity(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut trials = 0;
    while trials < 20 {
        let o = random_z2_set(&mut rng, &c, "O", 1 + trials % 3);
        let e = random_z2_set(&mut rng, &c, "E", trials % 4);
        let Some(gamma) = random_nat_trans(&mut rng, &e, &o) else { continue };
        let outcome = check_ran_universal_property(&t, &o, &e, &gamma, DEFAULT_CANDIDATE_LIMIT).unwrap();
        let UniversalOutcome::UniqueMediator(phi) = outcome else { panic!("{outcome}") };
        // With T = Id the counit is invertible, so φ = ε⁻¹ ∘ γ.
        let eps = ran_along(&t, &o, DEFAULT_CANDIDATE_LIMIT).unwrap().counit().unwrap();
        for u in e.set(0).indices() {
            assert_eq!(eps.component(0).apply(phi.component(0).apply(u)), gamma.component(0).apply(u));
        }
        trials += 1;
    }
}

fn chaotic_swap() -> (FinCat, CatMonadCell) {
    let c = FinCat::chaotic(&FinSet::range("X", 2));
    let n = 2;
    let swap = CatFunctor::checked(
        "sw",
        c.clone(),
        c.clone(),
        vec![1, 0],
        c.morphisms().indices().map(|f| (1 - f / n) * n + (1 - f % n)).collect(),
    )
    .unwrap();
    // η_x : x → Tx and μ_x : TTx = x → Tx.
    let to_t: Vec<usize> = (0..n).map(|x| x * n + (1 - x)).collect();
    let monad = CatMonadCell::new(swap, to_t.clone(), to_t).unwrap();
    (c, monad)
}

/// The chaotic category acting on `n` points at each object, transported
/// along `p` from 0 to 1.
fn chaotic_set(c: &FinCat, p: &[usize]) -> SetFunctor {
    let x = FinSet::range("O", p.len());
    let fwd = FinFn::new(x.clone(), x.clone(), p.to_vec()).unwrap();
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    let back = FinFn::new(x.clone(), x.clone(), inv).unwrap();
    let maps = vec![FinFn::identity(&x), fwd, back, FinFn::identity(&x)];
    SetFunctor::new("O", c.clone(), vec![x.clone(), x], maps).unwrap()
}

#[test]
fn swap_monad_on_the_chaotic_category() {
    let (c, monad) = chaotic_swap();
    assert!(check_monad_laws(&monad).holds());
    for p in [vec![0], vec![0, 1], vec![1, 0], vec![2, 0, 1]] {
        let o = chaotic_set(&c, &p);
        let t = monad.functor();
        let kappa: Vec<usize> = (0..2).map(|x| c.id(t.obj(x))).collect();
        let (ran, moore, mealy) = build_machine_from_monad(&monad, &o, t, &kappa, DEFAULT_CANDIDATE_LIMIT).unwrap();
        for x in 0..2 {
            // All objects are isomorphic, so a family is fixed by one value.
            assert_eq!(ran.functor().set(x).len(), p.len());
        }
        assert!(check_module_laws(&moore, &monad).unwrap().holds());
        assert_eq!(mealy.output(), &o);
    }
}

#[test]
fn moore_machine_from_ran_is_terminal_among_modules() {
    let c = z2();
    let monad = CatMonadCell::identity(&c);
    let id = CatFunctor::identity(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        let o = random_z2_set(&mut rng, &c, "O", n);
        let (_, terminal, _) = build_machine_from_monad(&monad, &o, &id, &[c.id(0)], DEFAULT_CANDIDATE_LIMIT).unwrap();
        for k in 0..=3 {
            let e = random_z2_set(&mut rng, &c, "E", k);
            let Some(sigma) = random_nat_trans(&mut rng, &e, &o) else { continue };
            let delta = NatTrans::identity(&e);
            let candidate = CatMooreMachine::new(id.clone(), delta, sigma).unwrap();
            assert!(check_module_laws(&candidate, &monad).unwrap().holds());
            assert!(count_moore_mediators(&candidate, &terminal, DEFAULT_CANDIDATE_LIMIT).unwrap().is_unique());
        }
    }
}

#[test]
fn nat_trans_enumeration_matches_a_count() {
    // Z/2-maps between free orbits: g acts freely on both, so a map is fixed
    // by the image of one point of each orbit.
    let c = z2();
    let free = |name: &str, orbits: usize| {
        let x = FinSet::range(name, 2 * orbits);
        let g = FinFn::from_fn(x.clone(), x.clone(), |i| i ^ 1).unwrap();
        let maps = c.morphisms().indices().map(|f| if f == c.id(0) { FinFn::identity(&x) } else { g.clone() }).collect();
        SetFunctor::new(name, c.clone(), vec![x], maps).unwrap()
    };
    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let all = enumerate_nat_trans(&free("A", a), &free("B", b), DEFAULT_CANDIDATE_LIMIT).unwrap();
        assert_eq!(all.len(), (2 * b).pow(a as u32));
    }
}
