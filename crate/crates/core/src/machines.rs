//! Mealy and Moore machines over finite sets.
//!
//! A Mealy machine with states `E`, input `I` and output `O` is a pair of
//! tables `d: E×I → E`, `s: E×I → O`. Machines over fixed alphabets form a
//! category whose morphisms are state maps commuting with both tables, and
//! machines compose in series by [`compose_diamond`].

use std::fmt;

use crate::error::mismatch;
use crate::finset::{pair_index, product_set, FinFn, FinSet, Word};
use crate::{Result, Verdict};

#[derive(Clone)]
pub struct MealyMachine {
    name: String,
    states: FinSet,
    input: FinSet,
    output: FinSet,
    next: FinFn,
    out: FinFn,
}

impl MealyMachine {
    /// Tables are indexed by `e * |I| + a`.
    pub fn new(
        name: impl Into<String>,
        states: FinSet,
        input: FinSet,
        output: FinSet,
        next: Vec<usize>,
        out: Vec<usize>,
    ) -> Result<Self> {
        let dom = product_set(&states, &input);
        let next = FinFn::new(dom.clone(), states.clone(), next)?;
        let out = FinFn::new(dom, output.clone(), out)?;
        Ok(MealyMachine {
            name: name.into(),
            states,
            input,
            output,
            next,
            out,
        })
    }

    pub fn from_fns(
        name: impl Into<String>,
        states: FinSet,
        input: FinSet,
        output: FinSet,
        d: impl Fn(usize, usize) -> usize,
        s: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let w = input.len();
        let n = states.len() * w;
        let next = (0..n).map(|k| d(k / w, k % w)).collect();
        let out = (0..n).map(|k| s(k / w, k % w)).collect();
        Self::new(name, states, input, output, next, out)
    }

    /// The identity 1-cell on an alphabet: one state, output = input.
    pub fn identity(alphabet: &FinSet) -> Self {
        Self::from_fns(
            format!("id_{}", alphabet.name()),
            FinSet::singleton("1", "*"),
            alphabet.clone(),
            alphabet.clone(),
            |_, _| 0,
            |_, a| a,
        )
        .expect("identity tables are typed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn input(&self) -> &FinSet {
        &self.input
    }

    pub fn output(&self) -> &FinSet {
        &self.output
    }

    pub fn transition(&self) -> &FinFn {
        &self.next
    }

    pub fn output_map(&self) -> &FinFn {
        &self.out
    }

    #[inline]
    pub fn d(&self, e: usize, a: usize) -> usize {
        self.next.apply(pair_index(e, a, self.input.len()))
    }

    #[inline]
    pub fn s(&self, e: usize, a: usize) -> usize {
        self.out.apply(pair_index(e, a, self.input.len()))
    }

    /// Iterated transition `d*` and the output word, by index.
    pub fn run_indices(&self, e0: usize, letters: &[usize]) -> (usize, Vec<usize>) {
        let mut e = e0;
        let mut out = Vec::with_capacity(letters.len());
        for &a in letters {
            out.push(self.s(e, a));
            e = self.d(e, a);
        }
        (e, out)
    }

    /// Relabels the states along a bijection `states → new`.
    pub fn relabel_states(&self, new_states: &FinSet) -> Result<Self> {
        if new_states.len() != self.states.len() {
            return Err(mismatch("relabelling must preserve the number of states"));
        }
        Self::from_fns(
            self.name.clone(),
            new_states.clone(),
            self.input.clone(),
            self.output.clone(),
            |e, a| self.d(e, a),
            |e, a| self.s(e, a),
        )
    }
}

/// Structural equality: same state set, alphabets and tables. Names are ignored.
impl PartialEq for MealyMachine {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.input == other.input
            && self.output == other.output
            && self.next == other.next
            && self.out == other.out
    }
}

impl Eq for MealyMachine {}

impl fmt::Debug for MealyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MealyMachine")
            .field("name", &self.name)
            .field("states", &self.states)
            .field("input", &self.input)
            .field("output", &self.output)
            .field("d", &self.next)
            .field("s", &self.out)
            .finish()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MooreMachine {
    name: String,
    states: FinSet,
    input: FinSet,
    output: FinSet,
    next: FinFn,
    out: FinFn,
}

impl MooreMachine {
    pub fn new(
        name: impl Into<String>,
        states: FinSet,
        input: FinSet,
        output: FinSet,
        next: Vec<usize>,
        out: Vec<usize>,
    ) -> Result<Self> {
        let next = FinFn::new(product_set(&states, &input), states.clone(), next)?;
        let out = FinFn::new(states.clone(), output.clone(), out)?;
        Ok(MooreMachine {
            name: name.into(),
            states,
            input,
            output,
            next,
            out,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn input(&self) -> &FinSet {
        &self.input
    }

    pub fn output(&self) -> &FinSet {
        &self.output
    }

    pub fn transition(&self) -> &FinFn {
        &self.next
    }

    pub fn output_map(&self) -> &FinFn {
        &self.out
    }

    #[inline]
    pub fn d(&self, e: usize, a: usize) -> usize {
        self.next.apply(pair_index(e, a, self.input.len()))
    }

    #[inline]
    pub fn s(&self, e: usize) -> usize {
        self.out.apply(e)
    }
}

impl fmt::Debug for MooreMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MooreMachine")
            .field("name", &self.name)
            .field("states", &self.states)
            .field("d", &self.next)
            .field("s", &self.out)
            .finish()
    }
}

fn check_run_args(states: &FinSet, input: &FinSet, e0: usize, w: &Word) -> Result<()> {
    if e0 >= states.len() {
        return Err(crate::error::malformed(format!(
            "start state index {e0} is not a state of `{}`",
            states.name()
        )));
    }
    if w.alphabet() != input {
        return Err(crate::error::malformed(format!(
            "word over `{}` fed to a machine with input `{}`",
            w.alphabet().name(),
            input.name()
        )));
    }
    Ok(())
}

/// Runs `m` from `e0` on `w`; returns the final state `d*(e0, w)` and the
/// output word, one letter per input letter.
pub fn run_mealy(m: &MealyMachine, e0: usize, w: &Word) -> Result<(usize, Word)> {
    check_run_args(&m.states, &m.input, e0, w)?;
    let (e, out) = m.run_indices(e0, w.letters());
    Ok((e, Word::new(m.output.clone(), out)?))
}

/// Runs a Moore machine; the output word lists `s` of each state entered.
pub fn run_moore(m: &MooreMachine, e0: usize, w: &Word) -> Result<(usize, Word)> {
    check_run_args(&m.states, &m.input, e0, w)?;
    let mut e = e0;
    let mut out = Vec::with_capacity(w.len());
    for &a in w.letters() {
        e = m.d(e, a);
        out.push(m.s(e));
    }
    Ok((e, Word::new(m.output.clone(), out)?))
}

/// Series composition `m2 ⋄ m1`: `m1`'s output feeds `m2`.
///
/// The state set is `F × E` with `F` the states of `m2`, and
/// `d((f,e),a) = (d₂(f, s₁(e,a)), d₁(e,a))`, `s((f,e),a) = s₂(f, s₁(e,a))`.
pub fn compose_diamond(m2: &MealyMachine, m1: &MealyMachine) -> Result<MealyMachine> {
    if m1.output != m2.input {
        return Err(mismatch(format!(
            "output `{}` of `{}` is not the input `{}` of `{}`",
            m1.output.name(),
            m1.name,
            m2.input.name(),
            m2.name
        )));
    }
    let states = product_set(&m2.states, &m1.states);
    let width = m1.states.len();
    MealyMachine::from_fns(
        format!("{}⋄{}", m2.name, m1.name),
        states,
        m1.input.clone(),
        m2.output.clone(),
        |fe, a| {
            let (f, e) = (fe / width, fe % width);
            let b = m1.s(e, a);
            pair_index(m2.d(f, b), m1.d(e, a), width)
        },
        |fe, a| {
            let (f, e) = (fe / width, fe % width);
            m2.s(f, m1.s(e, a))
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    /// `d' ∘ (f × I) = f ∘ d`
    Transition,
    /// `s' ∘ (f × I) = s` (Moore: `s' ∘ f = s`)
    Output,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::Transition => "transition",
            Equation::Output => "output",
        })
    }
}

/// A pair `(e, a)` where a candidate morphism fails one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismViolation {
    pub state: String,
    pub letter: Option<String>,
    pub equation: Equation,
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.letter {
            Some(a) => write!(f, "{} equation fails at ({},{})", self.equation, self.state, a),
            None => write!(f, "{} equation fails at {}", self.equation, self.state),
        }
    }
}

fn check_morphism_typing(f: &FinFn, src: &FinSet, dst: &FinSet, same_alphabets: bool) -> Result<()> {
    if f.dom() != src || f.cod() != dst {
        return Err(mismatch(format!(
            "state map `{}` → `{}` does not go between the machines' state sets",
            f.dom().name(),
            f.cod().name()
        )));
    }
    if !same_alphabets {
        return Err(mismatch("machines have different input or output alphabets"));
    }
    Ok(())
}

/// Checks that `f` is a morphism of Mealy machines `m → m2`.
pub fn check_machine_morphism(
    f: &FinFn,
    m: &MealyMachine,
    m2: &MealyMachine,
) -> Result<Verdict<MorphismViolation>> {
    check_morphism_typing(
        f,
        &m.states,
        &m2.states,
        m.input == m2.input && m.output == m2.output,
    )?;
    for e in m.states.indices() {
        for a in m.input.indices() {
            let equation = if m2.d(f.apply(e), a) != f.apply(m.d(e, a)) {
                Some(Equation::Transition)
            } else if m2.s(f.apply(e), a) != m.s(e, a) {
                Some(Equation::Output)
            } else {
                None
            };
            if let Some(equation) = equation {
                return Ok(Verdict::Fails(MorphismViolation {
                    state: m.states.label(e).to_string(),
                    letter: Some(m.input.label(a).to_string()),
                    equation,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Checks that `f` is a morphism of Moore machines `m → m2`.
pub fn check_moore_morphism(
    f: &FinFn,
    m: &MooreMachine,
    m2: &MooreMachine,
) -> Result<Verdict<MorphismViolation>> {
    check_morphism_typing(
        f,
        &m.states,
        &m2.states,
        m.input == m2.input && m.output == m2.output,
    )?;
    for e in m.states.indices() {
        for a in m.input.indices() {
            if m2.d(f.apply(e), a) != f.apply(m.d(e, a)) {
                return Ok(Verdict::Fails(MorphismViolation {
                    state: m.states.label(e).to_string(),
                    letter: Some(m.input.label(a).to_string()),
                    equation: Equation::Transition,
                }));
            }
        }
        if m2.s(f.apply(e)) != m.s(e) {
            return Ok(Verdict::Fails(MorphismViolation {
                state: m.states.label(e).to_string(),
                letter: None,
                equation: Equation::Output,
            }));
        }
    }
    Ok(Verdict::Holds)
}

/// Horizontal composite of 2-cells: `f2 × f1` on `F × E`.
pub fn tensor_morphisms(f2: &FinFn, f1: &FinFn) -> FinFn {
    f2.product(f1)
}

/// The reassociation `(G×F)×E → G×(F×E)` between the state sets of
/// `(m3⋄m2)⋄m1` and `m3⋄(m2⋄m1)`.
pub fn associator(m3: &MealyMachine, m2: &MealyMachine, m1: &MealyMachine) -> FinFn {
    let (g, f, e) = (m3.states.len(), m2.states.len(), m1.states.len());
    let left = product_set(&product_set(&m3.states, &m2.states), &m1.states);
    let right = product_set(&m3.states, &product_set(&m2.states, &m1.states));
    FinFn::from_fn(left, right, |k| {
        let (gf, ei) = (k / e, k % e);
        let (gi, fi) = (gf / f, gf % f);
        debug_assert!(gi < g);
        pair_index(gi, pair_index(fi, ei, e), f * e)
    })
    .expect("associator is typed")
}

/// `1 × E → E` for `id ⋄ m`.
pub fn left_unitor(m: &MealyMachine) -> FinFn {
    let dom = product_set(&FinSet::singleton("1", "*"), &m.states);
    FinFn::from_fn(dom, m.states.clone(), |k| k).expect("unitor is typed")
}

/// `E × 1 → E` for `m ⋄ id`.
pub fn right_unitor(m: &MealyMachine) -> FinFn {
    let dom = product_set(&m.states, &FinSet::singleton("1", "*"));
    FinFn::from_fn(dom, m.states.clone(), |k| k).expect("unitor is typed")
}

/// Bounded interchange of composition and execution: running `m2 ⋄ m1`
/// agrees with piping `m1`'s output into `m2`, from every state pair and on
/// every word of length at most `bound`.
pub fn check_pipeline(
    m2: &MealyMachine,
    m1: &MealyMachine,
    bound: usize,
) -> Result<Verdict<(String, Vec<usize>)>> {
    let comp = compose_diamond(m2, m1)?;
    let width = m1.states.len();
    for w in crate::finset::words_up_to(m1.input.len(), bound) {
        for fe in comp.states.indices() {
            let (f, e) = (fe / width, fe % width);
            let (e1, mid) = m1.run_indices(e, &w);
            let (f1, out) = m2.run_indices(f, &mid);
            let (end, got) = comp.run_indices(fe, &w);
            if got != out || end != pair_index(f1, e1, width) {
                return Ok(Verdict::Fails((comp.states.label(fe).to_string(), w)));
            }
        }
    }
    Ok(Verdict::Holds)
}
