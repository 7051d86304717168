//! Mealy machines between monoids and the fugality law
//! `s(e, m·m') = s(e, m) · s(d(e, m), m')`.
//!
//! Input monoids are either finite (tables over `E×M`) or free (`A*`, given
//! intensionally). Laws that quantify over a free monoid are checked on every
//! word up to a length bound, in canonical word order.

use std::fmt;
use std::sync::Arc;

use crate::error::{malformed, mismatch};
use crate::finset::{
    pair_index, product_set, render_letters, words_up_to, FinMonoid, FinSet, FreeMonoidHandle,
};
use crate::machines::{compose_diamond, Equation, MealyMachine};
use crate::{Error, Result, Verdict};

/// A monoid usable as machine input or output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monoid {
    Finite(FinMonoid),
    Free(FreeMonoidHandle),
}

/// An element of a [`Monoid`]: a carrier index or a word of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Fin(usize),
    Word(Vec<usize>),
}

impl Elem {
    fn as_fin(&self) -> usize {
        match self {
            Elem::Fin(x) => *x,
            Elem::Word(_) => panic!("expected a finite-monoid element"),
        }
    }

    fn as_word(&self) -> &[usize] {
        match self {
            Elem::Word(w) => w,
            Elem::Fin(_) => panic!("expected a word"),
        }
    }
}

impl Monoid {
    pub fn free(generators: FinSet) -> Self {
        Monoid::Free(FreeMonoidHandle::new(generators))
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Monoid::Free(_))
    }

    pub fn unit(&self) -> Elem {
        match self {
            Monoid::Finite(m) => Elem::Fin(m.unit()),
            Monoid::Free(_) => Elem::Word(Vec::new()),
        }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        match self {
            Monoid::Finite(m) => Elem::Fin(m.mul(x.as_fin(), y.as_fin())),
            Monoid::Free(_) => {
                let mut w = x.as_word().to_vec();
                w.extend_from_slice(y.as_word());
                Elem::Word(w)
            }
        }
    }

    /// `z == x · y`, without building the product for words.
    pub fn is_product(&self, z: &Elem, x: &Elem, y: &Elem) -> bool {
        match self {
            Monoid::Finite(m) => z.as_fin() == m.mul(x.as_fin(), y.as_fin()),
            Monoid::Free(_) => {
                let (z, x, y) = (z.as_word(), x.as_word(), y.as_word());
                z.len() == x.len() + y.len() && z.starts_with(x) && z.ends_with(y)
            }
        }
    }

    /// The generator set for a free monoid, the carrier for a finite one.
    pub fn letters(&self) -> &FinSet {
        match self {
            Monoid::Finite(m) => m.carrier(),
            Monoid::Free(h) => h.generators(),
        }
    }

    /// Finite monoids: the whole carrier. Free monoids: all words of length
    /// at most `bound`, canonical order.
    pub fn elements_up_to(&self, bound: usize) -> Vec<Elem> {
        match self {
            Monoid::Finite(m) => m.carrier().indices().map(Elem::Fin).collect(),
            Monoid::Free(h) => words_up_to(h.generators().len(), bound)
                .into_iter()
                .map(Elem::Word)
                .collect(),
        }
    }

    pub fn generator(&self, a: usize) -> Elem {
        match self {
            Monoid::Finite(_) => Elem::Fin(a),
            Monoid::Free(_) => Elem::Word(vec![a]),
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        match (self, x) {
            (Monoid::Finite(m), Elem::Fin(i)) => *i < m.len(),
            (Monoid::Free(h), Elem::Word(w)) => w.iter().all(|&a| a < h.generators().len()),
            _ => false,
        }
    }

    pub fn render(&self, x: &Elem) -> String {
        match (self, x) {
            (Monoid::Finite(m), Elem::Fin(i)) => m.carrier().label(*i).to_string(),
            (Monoid::Free(h), Elem::Word(w)) => format!("[{}]", labels(h.generators(), w)),
            _ => format!("{x:?}"),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Elem> {
        match self {
            Monoid::Finite(m) => Ok(Elem::Fin(m.carrier().require(text)?)),
            Monoid::Free(h) => {
                let inner = text
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| malformed(format!("expected a bracketed word, got `{text}`")))?;
                let w = inner
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|l| h.generators().require(l.trim()))
                    .collect::<Result<_>>()?;
                Ok(Elem::Word(w))
            }
        }
    }
}

fn labels(set: &FinSet, w: &[usize]) -> String {
    w.iter().map(|&a| set.label(a)).collect::<Vec<_>>().join(",")
}

type Evaluator = Arc<dyn Fn(usize, &[usize]) -> Elem + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// Finite input: `act` and `out` indexed by `e * |M| + m`.
    Tables { act: Vec<usize>, out: Vec<Elem> },
    /// Free input: generator tables; `s(e, w)` is the product in the output
    /// monoid of the generator outputs along the run.
    Generators { act: Vec<usize>, out: Vec<Elem> },
    /// Fugal extension of a set machine, evaluated by recursion on the word.
    Flat(MealyMachine),
    /// `(ε × E) ∘ ⟨s, d⟩♭` into a finite monoid whose carrier is the
    /// machine's output set.
    Counit(MealyMachine, FinMonoid),
    /// `second ⋄ first`, states `F × E`.
    Diamond(Box<MonoidMealyMachine>, Box<MonoidMealyMachine>),
    /// Free input with generator action and an arbitrary output evaluator.
    Custom { act: Vec<usize>, out: Evaluator },
}

/// A Mealy machine `⟨s, d⟩ : E × M → N × E` between monoids, where `d` is an
/// action of `M` on `E`.
#[derive(Clone)]
pub struct MonoidMealyMachine {
    name: String,
    states: FinSet,
    input: Monoid,
    output: Monoid,
    repr: Repr,
}

/// Failure of the action laws `d(e,1) = e`, `d(e, m·m') = d(d(e,m), m')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionViolation {
    Unit { state: String },
    Composition { state: String, m: String, m2: String },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionViolation::Unit { state } => write!(f, "d({state},1) ≠ {state}"),
            ActionViolation::Composition { state, m, m2 } => {
                write!(f, "d({state},{m}·{m2}) ≠ d(d({state},{m}),{m2})")
            }
        }
    }
}

/// Exhaustive check that `act` (indexed `e * |M| + m`) is a right action.
pub fn check_action(states: &FinSet, monoid: &FinMonoid, act: &[usize]) -> Verdict<ActionViolation> {
    let n = monoid.len();
    let d = |e: usize, m: usize| act[e * n + m];
    let c = monoid.carrier();
    for e in states.indices() {
        if d(e, monoid.unit()) != e {
            return Verdict::Fails(ActionViolation::Unit {
                state: states.label(e).into(),
            });
        }
    }
    for e in states.indices() {
        for m in c.indices() {
            for m2 in c.indices() {
                if d(e, monoid.mul(m, m2)) != d(d(e, m), m2) {
                    return Verdict::Fails(ActionViolation::Composition {
                        state: states.label(e).into(),
                        m: c.label(m).into(),
                        m2: c.label(m2).into(),
                    });
                }
            }
        }
    }
    Verdict::Holds
}

fn check_outputs(output: &Monoid, out: &[Elem]) -> Result<()> {
    match out.iter().find(|x| !output.contains(x)) {
        Some(x) => Err(malformed(format!("output value {x:?} is not in the output monoid"))),
        None => Ok(()),
    }
}

impl MonoidMealyMachine {
    /// Finite input monoid; `act` must be an action.
    pub fn from_tables(
        name: impl Into<String>,
        states: FinSet,
        input: FinMonoid,
        output: Monoid,
        act: Vec<usize>,
        out: Vec<Elem>,
    ) -> Result<Self> {
        let n = states.len() * input.len();
        if act.len() != n || out.len() != n {
            return Err(malformed(format!("machine tables must have {n} entries")));
        }
        if act.iter().any(|&e| e >= states.len()) {
            return Err(malformed("transition leaves the state set"));
        }
        check_outputs(&output, &out)?;
        if let Verdict::Fails(v) = check_action(&states, &input, &act) {
            return Err(Error::Precondition(format!("transition is not a monoid action: {v}")));
        }
        Ok(MonoidMealyMachine {
            name: name.into(),
            states,
            input: Monoid::Finite(input),
            output,
            repr: Repr::Tables { act, out },
        })
    }

    /// Free input monoid given by generator tables (`e * |A| + a`).
    pub fn from_generators(
        name: impl Into<String>,
        states: FinSet,
        input: FreeMonoidHandle,
        output: Monoid,
        act: Vec<usize>,
        out: Vec<Elem>,
    ) -> Result<Self> {
        let n = states.len() * input.generators().len();
        if act.len() != n || out.len() != n {
            return Err(malformed(format!("generator tables must have {n} entries")));
        }
        if act.iter().any(|&e| e >= states.len()) {
            return Err(malformed("transition leaves the state set"));
        }
        check_outputs(&output, &out)?;
        Ok(MonoidMealyMachine {
            name: name.into(),
            states,
            input: Monoid::Free(input),
            output,
            repr: Repr::Generators { act, out },
        })
    }

    /// Free input monoid with an arbitrary output map, for machines that are
    /// not determined by their generator tables (e.g. non-fugal ones).
    pub fn with_evaluator(
        name: impl Into<String>,
        states: FinSet,
        input: FreeMonoidHandle,
        output: Monoid,
        act: Vec<usize>,
        out: impl Fn(usize, &[usize]) -> Elem + Send + Sync + 'static,
    ) -> Result<Self> {
        if act.len() != states.len() * input.generators().len() || act.iter().any(|&e| e >= states.len()) {
            return Err(malformed("bad generator action table"));
        }
        Ok(MonoidMealyMachine {
            name: name.into(),
            states,
            input: Monoid::Free(input),
            output,
            repr: Repr::Custom {
                act,
                out: Arc::new(out),
            },
        })
    }

    /// The identity 1-cell on a monoid: one state, `s(*, m) = m`.
    pub fn identity(monoid: &Monoid) -> Self {
        let states = FinSet::singleton("1", "*");
        let name = format!("id_{}", monoid.letters().name());
        match monoid {
            Monoid::Finite(m) => Self::from_tables(
                name,
                states,
                m.clone(),
                monoid.clone(),
                vec![0; m.len()],
                m.carrier().indices().map(Elem::Fin).collect(),
            )
            .expect("identity is an action"),
            Monoid::Free(h) => Self::from_generators(
                name,
                states,
                h.clone(),
                monoid.clone(),
                vec![0; h.generators().len()],
                h.generators().indices().map(|a| Elem::Word(vec![a])).collect(),
            )
            .expect("identity tables"),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn input(&self) -> &Monoid {
        &self.input
    }

    pub fn output(&self) -> &Monoid {
        &self.output
    }

    /// `(d(e, m), s(e, m))`.
    pub fn eval(&self, e: usize, m: &Elem) -> (usize, Elem) {
        match &self.repr {
            Repr::Tables { act, out } => {
                let k = e * self.input.letters().len() + m.as_fin();
                (act[k], out[k].clone())
            }
            Repr::Generators { act, out } => {
                let k = self.input.letters().len();
                let mut state = e;
                let mut acc = self.output.unit();
                for &a in m.as_word() {
                    acc = self.output.mul(&acc, &out[state * k + a]);
                    state = act[state * k + a];
                }
                (state, acc)
            }
            Repr::Flat(base) => {
                let (end, _) = base.run_indices(e, m.as_word());
                (end, Elem::Word(flat_output(base, e, m.as_word())))
            }
            Repr::Counit(base, target) => {
                let (end, letters) = base.run_indices(e, m.as_word());
                (end, Elem::Fin(target.fold(letters)))
            }
            Repr::Diamond(second, first) => {
                let width = first.states.len();
                let (f, e1) = (e / width, e % width);
                let (e2, mid) = first.eval(e1, m);
                let (f2, out) = second.eval(f, &mid);
                (pair_index(f2, e2, width), out)
            }
            Repr::Custom { act, out } => {
                let k = self.input.letters().len();
                let end = m.as_word().iter().fold(e, |st, &a| act[st * k + a]);
                (end, out(e, m.as_word()))
            }
        }
    }

    pub fn act(&self, e: usize, m: &Elem) -> usize {
        self.eval(e, m).0
    }

    pub fn out(&self, e: usize, m: &Elem) -> Elem {
        self.eval(e, m).1
    }

    /// Materialises a finite-input machine as tables, checking the action laws.
    pub fn to_tables(&self) -> Result<MonoidMealyMachine> {
        let Monoid::Finite(input) = &self.input else {
            return Err(Error::Usage("only finite-input machines have finite tables".into()));
        };
        let mut act = Vec::new();
        let mut out = Vec::new();
        for e in self.states.indices() {
            for m in input.carrier().indices() {
                let (e2, o) = self.eval(e, &Elem::Fin(m));
                act.push(e2);
                out.push(o);
            }
        }
        Self::from_tables(
            self.name.clone(),
            self.states.clone(),
            input.clone(),
            self.output.clone(),
            act,
            out,
        )
    }
}

impl fmt::Debug for MonoidMealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Tables { .. } => "tables",
            Repr::Generators { .. } => "generators",
            Repr::Flat(_) => "flat",
            Repr::Counit(..) => "counit",
            Repr::Diamond(..) => "diamond",
            Repr::Custom { .. } => "custom",
        };
        f.debug_struct("MonoidMealyMachine")
            .field("name", &self.name)
            .field("states", &self.states)
            .field("input", &self.input)
            .field("output", &self.output)
            .field("repr", &kind)
            .finish()
    }
}

/// `s♭(e, []) = []`, `s♭(e, a :: as) = s(e, a) :: s♭(d(e, a), as)`.
pub fn flat_output(m: &MealyMachine, e: usize, word: &[usize]) -> Vec<usize> {
    match word.split_first() {
        None => Vec::new(),
        Some((&a, rest)) => {
            let mut out = vec![m.s(e, a)];
            out.extend(flat_output(m, m.d(e, a), rest));
            out
        }
    }
}

/// Series composition of machines between monoids; `first`'s output monoid
/// must be `second`'s input monoid. Finite-input composites are materialised
/// as tables (which checks that the composite transition is an action).
pub fn compose_monoid_diamond(
    second: &MonoidMealyMachine,
    first: &MonoidMealyMachine,
) -> Result<MonoidMealyMachine> {
    if first.output != second.input {
        return Err(mismatch(format!(
            "output monoid of `{}` is not the input monoid of `{}`",
            first.name, second.name
        )));
    }
    let composite = MonoidMealyMachine {
        name: format!("{}⋄{}", second.name, first.name),
        states: product_set(&second.states, &first.states),
        input: first.input.clone(),
        output: second.output.clone(),
        repr: Repr::Diamond(Box::new(second.clone()), Box::new(first.clone())),
    };
    match composite.input {
        Monoid::Finite(_) => composite.to_tables(),
        Monoid::Free(_) => Ok(composite),
    }
}

/// A triple `(e, m, m')` violating the fugality law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FugalViolation {
    pub state: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for FugalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.state, self.left, self.right)
    }
}

#[derive(Debug, Clone)]
pub struct FugalWitness {
    pub machine: MonoidMealyMachine,
    pub verdict: Verdict<FugalViolation>,
    /// `None` for an exhaustive check over a finite input monoid.
    pub bound: Option<usize>,
}

impl FugalWitness {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// Position of a word in the canonical enumeration of `words_up_to`.
struct WordIndex {
    k: usize,
    offsets: Vec<usize>,
}

impl WordIndex {
    fn new(k: usize, bound: usize) -> Self {
        let mut offsets = Vec::with_capacity(bound + 2);
        let mut total = 0usize;
        let mut layer = 1usize;
        for _ in 0..=bound {
            offsets.push(total);
            total += layer;
            layer *= k.max(1);
        }
        offsets.push(total);
        WordIndex { k, offsets }
    }

    fn rank(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |r, &a| r * self.k + a)
    }

    fn index(&self, w: &[usize]) -> usize {
        self.offsets[w.len()] + self.rank(w)
    }
}

/// Decides fugality. Finite input monoids are checked on every triple;
/// free input monoids on every state and every word pair `(u, v)` with
/// `|u| + |v| ≤ bound`, and a bound is then required.
pub fn is_fugal(m: &MonoidMealyMachine, bound: Option<usize>) -> Result<FugalWitness> {
    let verdict = match &m.input {
        Monoid::Finite(input) => {
            let c = input.carrier();
            let mut found = None;
            'outer: for e in m.states.indices() {
                for x in c.indices() {
                    let (ex, sx) = m.eval(e, &Elem::Fin(x));
                    for y in c.indices() {
                        let sxy = m.out(e, &Elem::Fin(input.mul(x, y)));
                        let sy = m.out(ex, &Elem::Fin(y));
                        if !m.output.is_product(&sxy, &sx, &sy) {
                            found = Some(FugalViolation {
                                state: m.states.label(e).into(),
                                left: c.label(x).into(),
                                right: c.label(y).into(),
                            });
                            break 'outer;
                        }
                    }
                }
            }
            return Ok(FugalWitness {
                machine: m.clone(),
                verdict: Verdict::from_search(found),
                bound: None,
            });
        }
        Monoid::Free(h) => {
            let bound = bound.ok_or_else(|| {
                Error::Usage("fugality over a free monoid needs a word-length bound".into())
            })?;
            let gens = h.generators();
            let words = words_up_to(gens.len(), bound);
            let index = WordIndex::new(gens.len(), bound);
            // Every (state, word) evaluated once; pairs are then table lookups.
            let table: Vec<Vec<(usize, Elem)>> = m
                .states
                .indices()
                .map(|e| {
                    words
                        .iter()
                        .map(|w| m.eval(e, &Elem::Word(w.clone())))
                        .collect()
                })
                .collect();
            let mut found = None;
            'outer: for e in m.states.indices() {
                for u in &words {
                    let (eu, su) = &table[e][index.index(u)];
                    for v in words.iter().take_while(|v| u.len() + v.len() <= bound) {
                        let mut uv = u.clone();
                        uv.extend_from_slice(v);
                        let suv = &table[e][index.index(&uv)].1;
                        let sv = &table[*eu][index.index(v)].1;
                        if !m.output.is_product(suv, su, sv) {
                            found = Some(FugalViolation {
                                state: m.states.label(e).into(),
                                left: format!("[{}]", labels(gens, u)),
                                right: format!("[{}]", labels(gens, v)),
                            });
                            break 'outer;
                        }
                    }
                }
            }
            Verdict::from_search(found)
        }
    };
    Ok(FugalWitness {
        machine: m.clone(),
        verdict,
        bound,
    })
}

/// The fugal extension `⟨s♭, d*⟩ : E × A* → B* × E` of a set machine.
pub fn fugal_extension(m: &MealyMachine) -> MonoidMealyMachine {
    MonoidMealyMachine {
        name: format!("{}♭", m.name()),
        states: m.states().clone(),
        input: Monoid::free(m.input().clone()),
        output: Monoid::free(m.output().clone()),
        repr: Repr::Flat(m.clone()),
    }
}

/// Evaluates a free-input machine on single letters: the generator tables
/// `(d(e, [a]), s(e, [a]))`, indexed `e * |A| + a`.
pub fn restrict_to_generators(m: &MonoidMealyMachine) -> Result<(Vec<usize>, Vec<Elem>)> {
    let Monoid::Free(h) = &m.input else {
        return Err(Error::Usage("restriction needs a free input monoid".into()));
    };
    let mut act = Vec::new();
    let mut out = Vec::new();
    for e in m.states.indices() {
        for a in h.generators().indices() {
            let (e2, o) = m.eval(e, &Elem::Word(vec![a]));
            act.push(e2);
            out.push(o);
        }
    }
    Ok((act, out))
}

/// Restriction of a machine over `A*` with finite output monoid `M` to a set
/// machine over `(A, UM)`.
pub fn h_restrict(m: &MonoidMealyMachine) -> Result<MealyMachine> {
    let Monoid::Free(h) = &m.input else {
        return Err(Error::Usage("restriction needs a free input monoid".into()));
    };
    let Monoid::Finite(target) = &m.output else {
        return Err(Error::Usage("restriction to a set machine needs a finite output monoid".into()));
    };
    let (act, out) = restrict_to_generators(m)?;
    MealyMachine::new(
        format!("H({})", m.name),
        m.states.clone(),
        h.generators().clone(),
        target.carrier().clone(),
        act,
        out.iter().map(Elem::as_fin).collect(),
    )
}

/// `K⟨s₀, d₀⟩ = (ε × E) ∘ ⟨s₀, d₀⟩♭`: extend freely, then multiply the
/// output letters out in `target` (left to right; the empty word gives the unit).
pub fn k_extend(m0: &MealyMachine, target: &FinMonoid) -> Result<MonoidMealyMachine> {
    if m0.output() != target.carrier() {
        return Err(mismatch(format!(
            "machine output `{}` is not the carrier of `{}`",
            m0.output().name(),
            target.carrier().name()
        )));
    }
    Ok(MonoidMealyMachine {
        name: format!("K({})", m0.name()),
        states: m0.states().clone(),
        input: Monoid::free(m0.input().clone()),
        output: Monoid::Finite(target.clone()),
        repr: Repr::Counit(m0.clone(), target.clone()),
    })
}

/// `KH` for a free-input machine with any output monoid: restrict to the
/// generators, then extend by multiplying out in the output monoid.
pub fn kh(m: &MonoidMealyMachine) -> Result<MonoidMealyMachine> {
    let Monoid::Free(h) = &m.input else {
        return Err(Error::Usage("KH needs a free input monoid".into()));
    };
    let (act, out) = restrict_to_generators(m)?;
    Ok(MonoidMealyMachine {
        name: format!("KH({})", m.name),
        states: m.states.clone(),
        input: Monoid::Free(h.clone()),
        output: m.output.clone(),
        repr: Repr::Generators { act, out },
    })
}

/// Where two machines disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub state: String,
    pub input: String,
    pub part: Equation,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} differs at ({},{}): {} vs {}",
            self.part, self.state, self.input, self.left, self.right
        )
    }
}

/// Compares two machines with the same states and monoids on every input
/// element (finite) or word up to `bound` (free): transitions and outputs.
pub fn compare_bounded(
    left: &MonoidMealyMachine,
    right: &MonoidMealyMachine,
    bound: usize,
) -> Result<Verdict<Mismatch>> {
    if left.states != right.states || left.input != right.input || left.output != right.output {
        return Err(mismatch(format!(
            "`{}` and `{}` do not have the same states and monoids",
            left.name, right.name
        )));
    }
    for x in left.input.elements_up_to(bound) {
        for e in left.states.indices() {
            let (le, lo) = left.eval(e, &x);
            let (re, ro) = right.eval(e, &x);
            let part = if le != re {
                Some((Equation::Transition, left.states.label(le).into(), left.states.label(re).into()))
            } else if lo != ro {
                Some((Equation::Output, left.output.render(&lo), left.output.render(&ro)))
            } else {
                None
            };
            if let Some((part, l, r)) = part {
                return Ok(Verdict::Fails(Mismatch {
                    state: left.states.label(e).into(),
                    input: left.input.render(&x),
                    part,
                    left: l,
                    right: r,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `(m2 ⋄ m1)♭` against `m2♭ ⋄ m1♭`, on all state pairs and all words of
/// length at most `bound`, comparing both outputs and transitions.
pub fn check_flat_preserves_composition(
    m1: &MealyMachine,
    m2: &MealyMachine,
    bound: usize,
) -> Result<Verdict<Mismatch>> {
    let lhs = fugal_extension(&compose_diamond(m2, m1)?);
    let rhs = compose_monoid_diamond(&fugal_extension(m2), &fugal_extension(m1))?;
    compare_bounded(&lhs, &rhs, bound)
}

/// A cell where `HK⟨s₀,d₀⟩` differs from `⟨s₀,d₀⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMismatch {
    pub state: String,
    pub letter: String,
    pub part: Equation,
}

impl fmt::Display for TableMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} table differs at ({},{})", self.part, self.state, self.letter)
    }
}

/// `HK = id`, exactly, on the tables of `m0`.
pub fn verify_hk(m0: &MealyMachine, target: &FinMonoid) -> Result<Verdict<TableMismatch>> {
    let back = h_restrict(&k_extend(m0, target)?)?;
    for e in m0.states().indices() {
        for a in m0.input().indices() {
            let part = if back.d(e, a) != m0.d(e, a) {
                Some(Equation::Transition)
            } else if back.s(e, a) != m0.s(e, a) {
                Some(Equation::Output)
            } else {
                None
            };
            if let Some(part) = part {
                return Ok(Verdict::Fails(TableMismatch {
                    state: m0.states().label(e).into(),
                    letter: m0.input().label(a).into(),
                    part,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `KH = id` on a free-input machine, compared on all words up to `bound`.
pub fn verify_kh(m: &MonoidMealyMachine, bound: usize) -> Result<Verdict<Mismatch>> {
    compare_bounded(&kh(m)?, m, bound)
}

/// Checks that `f: E → F` is a morphism between the fugal extensions of
/// `m` and `m2` on all words up to `bound`.
pub fn check_flat_preserves_morphism(
    f: &crate::finset::FinFn,
    m: &MealyMachine,
    m2: &MealyMachine,
    bound: usize,
) -> Result<Verdict<Mismatch>> {
    if f.dom() != m.states() || f.cod() != m2.states() {
        return Err(mismatch("state map does not go between the machines"));
    }
    let (x, y) = (fugal_extension(m), fugal_extension(m2));
    if x.input != y.input || x.output != y.output {
        return Err(mismatch("machines have different alphabets"));
    }
    for w in x.input.elements_up_to(bound) {
        for e in m.states().indices() {
            let (ex, ox) = x.eval(e, &w);
            let (ey, oy) = y.eval(f.apply(e), &w);
            let part = if ey != f.apply(ex) {
                Some(Equation::Transition)
            } else if ox != oy {
                Some(Equation::Output)
            } else {
                None
            };
            if let Some(part) = part {
                return Ok(Verdict::Fails(Mismatch {
                    state: m.states().label(e).into(),
                    input: x.input.render(&w),
                    part,
                    left: x.output.render(&ox),
                    right: y.output.render(&oy),
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// For every state, `s(e, 1)` is idempotent in the output monoid.
pub fn unit_outputs_idempotent(m: &MonoidMealyMachine) -> Verdict<String> {
    let one = m.input.unit();
    Verdict::from_search(m.states.indices().find_map(|e| {
        let x = m.out(e, &one);
        (!m.output.is_product(&x, &x, &x)).then(|| m.states.label(e).to_string())
    }))
}

/// Renders a word over a free monoid's generators the way the CLI prints it.
pub fn render_word(m: &Monoid, w: &[usize]) -> String {
    render_letters(m.letters(), w)
}
