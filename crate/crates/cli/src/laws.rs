//! The `laws` report: each law checked on seeded random or exhaustive
//! instances, one line per law, no timings.

use fugal_core::cat::{check_ran_universal_property, DEFAULT_CANDIDATE_LIMIT};
use fugal_core::finset::{FinFn, FinMonoid, FinSet};
use fugal_core::fugal::{fugal_extension, is_fugal, k_extend, verify_hk, verify_kh};
use fugal_core::gen::{
    all_monoid_machines, all_unital_fugal_machines, is_unital, random_composable_pair, random_mealy,
    random_mealy_upto, random_nat_trans, random_z2_set,
};
use fugal_core::guitart::{sigma_functor, verify_pi_functoriality, CatFunctor, FinCat};
use fugal_core::intertwiner::{check_intertwiner, Intertwiner};
use fugal_core::kleisli::{expand, lift_deterministic};
use fugal_core::machines::{check_machine_morphism, check_pipeline};
use fugal_core::rel::{greatest_fixpoint, ran_reachability, verify_terminal, Mode, Rel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Report {
    pub lines: Vec<String>,
}

struct Tally {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }

    fn line(&self, unit: &str) -> String {
        match &self.failure {
            None => format!("PASS {}: {} {unit}", self.name, self.cases),
            Some(f) => format!("FAIL {}: {} {unit}; first failure: {f}", self.name, self.cases),
        }
    }
}

fn holds<W, E>(r: Result<fugal_core::Verdict<W>, E>) -> bool {
    matches!(r, Ok(v) if v.holds())
}

pub fn report(seed: u64, len: usize, limit: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines = vec![
        pipeline(&mut rng, len, limit),
        extensions(&mut rng, len, limit),
        roundtrip(&mut rng, len, limit),
        sigma_exhaustive(),
        pi_pairs(limit),
        rel_terminal(),
        ran_universal(&mut rng, limit),
        kleisli_lift(&mut rng, limit),
        induced_intertwiners(&mut rng, limit),
        corpus(),
    ];
    Report { lines }
}

fn pipeline(rng: &mut ChaCha8Rng, len: usize, limit: usize) -> String {
    let mut t = Tally::new("pipeline");
    for k in 0..limit {
        let (m1, m2) = random_composable_pair(rng, 3);
        t.record(holds(check_pipeline(&m2, &m1, len)), || format!("pair #{k}"));
    }
    t.line("composable pairs")
}

fn extensions(rng: &mut ChaCha8Rng, len: usize, limit: usize) -> String {
    let mut t = Tally::new("fugal-extension");
    for k in 0..limit {
        let m = random_mealy_upto(rng, 4);
        let ok = matches!(is_fugal(&fugal_extension(&m), Some(len)), Ok(w) if w.holds());
        t.record(ok, || format!("machine #{k}"));
    }
    t.line("machines")
}

fn roundtrip(rng: &mut ChaCha8Rng, len: usize, limit: usize) -> String {
    let mut t = Tally::new("restrict-extend");
    for target in [FinMonoid::z2_multiplicative(), FinMonoid::cyclic(3)] {
        for k in 0..limit {
            let (ne, ni) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let m = random_mealy(rng, "m", &FinSet::range("E", ne), &FinSet::range("A", ni), target.carrier());
            let ok = holds(verify_hk(&m, &target)) && matches!(k_extend(&m, &target), Ok(x) if holds(verify_kh(&x, len)));
            t.record(ok, || format!("machine #{k} into {}", target.carrier().name()));
        }
    }
    t.line("machines")
}

fn sigma_exhaustive() -> String {
    let mut t = Tally::new("sigma-functor");
    let monoids = [FinMonoid::z2_multiplicative(), FinMonoid::idempotent2()];
    for input in &monoids {
        for output in &monoids {
            for n in 1..=2 {
                for m in all_monoid_machines(&FinSet::range("E", n), input, output) {
                    let fugal = matches!(is_fugal(&m, None), Ok(w) if w.holds());
                    let functor = matches!(sigma_functor(&m), Ok(s) if s.verdict.holds());
                    t.record(functor == (fugal && is_unital(&m)), || {
                        format!("{} states, {} to {}", n, input.carrier().name(), output.carrier().name())
                    });
                }
            }
        }
    }
    t.line("machines")
}

fn pi_pairs(limit: usize) -> String {
    let mut t = Tally::new("span-composition");
    let (z2, i2) = (FinMonoid::z2_multiplicative(), FinMonoid::idempotent2());
    'outer: for (a, b, c) in [(&z2, &z2, &z2), (&z2, &i2, &z2), (&i2, &z2, &i2), (&i2, &i2, &i2)] {
        for n in 1..=2 {
            let firsts = all_unital_fugal_machines(&FinSet::range("E", n), a, b);
            let seconds = all_unital_fugal_machines(&FinSet::range("F", n), b, c);
            for m1 in &firsts {
                for m2 in &seconds {
                    if t.cases >= limit {
                        break 'outer;
                    }
                    t.record(holds(verify_pi_functoriality(m1, m2)), || format!("a pair with {n} states"));
                }
            }
        }
    }
    t.line("pairs")
}

fn rel_terminal() -> String {
    let mut t = Tally::new("rel-terminal");
    let (a, b) = (FinSet::range("A", 2), FinSet::range("B", 2));
    for im in 0..16 {
        for om in 0..16 {
            let (i, o) = (Rel::from_mask(&a, &a, im), Rel::from_mask(&a, &b, om));
            for mode in [Mode::Moore, Mode::Mealy] {
                let ok = match (ran_reachability(&i, &o, mode), greatest_fixpoint(&i, &o, mode)) {
                    (Ok(r), Ok(g)) => r == g && matches!(verify_terminal(&r, &i, &o, mode, 20), Ok(rep) if rep.verdict.holds()),
                    _ => false,
                };
                t.record(ok, || format!("I={i} O={o} ({mode})"));
            }
        }
    }
    t.line("cases")
}

fn ran_universal(rng: &mut ChaCha8Rng, limit: usize) -> String {
    let mut t = Tally::new("ran-universal");
    let c = FinCat::from_monoid(&FinMonoid::z2_multiplicative());
    let id = CatFunctor::identity(&c);
    for k in 0..limit.min(20) {
        let (ne, no) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let e = random_z2_set(rng, &c, "E", ne);
        let o = random_z2_set(rng, &c, "O", no);
        let Some(gamma) = random_nat_trans(rng, &e, &o) else {
            continue;
        };
        let ok = matches!(
            check_ran_universal_property(&id, &o, &e, &gamma, DEFAULT_CANDIDATE_LIMIT),
            Ok(u) if u.is_unique()
        );
        t.record(ok, || format!("trial #{k}"));
    }
    t.line("cones")
}

fn kleisli_lift(rng: &mut ChaCha8Rng, limit: usize) -> String {
    let mut t = Tally::new("kleisli-lift");
    for k in 0..limit {
        let m = random_mealy_upto(rng, 3);
        let ok = match expand(&lift_deterministic(&m), 16) {
            Err(_) => false,
            Ok(x) => m.states().indices().all(|e| {
                m.input().indices().all(|a| x.d(1 << e, 1 << a) == 1 << m.d(e, a) && x.s(1 << e, 1 << a) == 1 << m.s(e, a))
            }),
        };
        t.record(ok, || format!("machine #{k}"));
    }
    t.line("machines")
}

fn induced_intertwiners(rng: &mut ChaCha8Rng, limit: usize) -> String {
    let mut t = Tally::new("induced-intertwiner");
    let bits = FinSet::range("A", 2);
    for k in 0..limit {
        let (n1, n2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let m = random_mealy(rng, "m", &FinSet::range("E", n1), &bits, &bits);
        let m2 = random_mealy(rng, "m'", &FinSet::range("F", n2), &bits, &bits);
        let table = (0..n1).map(|_| rng.gen_range(0..n2)).collect();
        let f = FinFn::new(m.states().clone(), m2.states().clone(), table).expect("in range");
        let morphism = holds(check_machine_morphism(&f, &m, &m2));
        let induced = matches!(Intertwiner::from_morphism(&f, &m, &m2), Ok(it) if check_intertwiner(&it).holds());
        t.record(morphism == induced, || format!("map #{k}"));
    }
    t.line("maps")
}

fn corpus() -> String {
    let mut t = Tally::new("corpus-roundtrip");
    for (name, parsed) in crate::doc::corpus_documents() {
        let ok = match parsed {
            Ok(d) => matches!(crate::doc::parse_document(&d.to_json()), Ok(again) if again == d),
            Err(_) => false,
        };
        t.record(ok, || name.to_string());
    }
    t.line("documents")
}
