//! Nondeterministic Mealy machines: Mealy machines in the Kleisli category
//! of the powerset monad, the lifting of deterministic machines and the
//! subset expansion.

use std::fmt;

use crate::error::{malformed, mismatch};
use crate::finset::{pair_index, FinFn, FinSet, Word};
use crate::machines::{Equation, MealyMachine, MorphismViolation};
use crate::{Error, Result, Verdict};

/// Default cap, in bits, for powerset materialisation in [`expand`].
pub const DEFAULT_EXPAND_LIMIT: usize = 16;

/// `d : E × I → P(E)`, `s : E × I → P(O)`, tables indexed `e * |I| + a`,
/// each image a sorted subset.
#[derive(Clone, PartialEq, Eq)]
pub struct PowersetMealy {
    name: String,
    states: FinSet,
    input: FinSet,
    output: FinSet,
    d: Vec<Vec<usize>>,
    s: Vec<Vec<usize>>,
}

fn normalise(mut xs: Vec<usize>) -> Vec<usize> {
    xs.sort_unstable();
    xs.dedup();
    xs
}

fn union_into(acc: &mut Vec<usize>, xs: &[usize]) {
    acc.extend_from_slice(xs);
}

impl PowersetMealy {
    pub fn new(
        name: impl Into<String>,
        states: FinSet,
        input: FinSet,
        output: FinSet,
        d: Vec<Vec<usize>>,
        s: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = states.len() * input.len();
        if d.len() != n || s.len() != n {
            return Err(malformed(format!("nondeterministic tables must have {n} entries")));
        }
        if d.iter().flatten().any(|&e| e >= states.len()) {
            return Err(malformed("transition image leaves the state set"));
        }
        if s.iter().flatten().any(|&o| o >= output.len()) {
            return Err(malformed("output image leaves the output set"));
        }
        Ok(PowersetMealy {
            name: name.into(),
            states,
            input,
            output,
            d: d.into_iter().map(normalise).collect(),
            s: s.into_iter().map(normalise).collect(),
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

    pub fn d(&self, e: usize, a: usize) -> &[usize] {
        &self.d[pair_index(e, a, self.input.len())]
    }

    pub fn s(&self, e: usize, a: usize) -> &[usize] {
        &self.s[pair_index(e, a, self.input.len())]
    }

    /// `dᵉ(S, T) = ⋃ { d(e, i) : e ∈ S, i ∈ T }`, and likewise `sᵉ`.
    pub fn step(&self, states: &[usize], letters: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut next = Vec::new();
        let mut out = Vec::new();
        for &e in states {
            for &a in letters {
                union_into(&mut next, self.d(e, a));
                union_into(&mut out, self.s(e, a));
            }
        }
        (normalise(next), normalise(out))
    }
}

impl fmt::Debug for PowersetMealy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowersetMealy")
            .field("name", &self.name)
            .field("states", &self.states)
            .field("input", &self.input)
            .field("output", &self.output)
            .field("d", &self.d)
            .field("s", &self.s)
            .finish()
    }
}

/// Post-composes with the singleton unit on states and outputs.
pub fn lift_deterministic(m: &MealyMachine) -> PowersetMealy {
    let cells = m.states().len() * m.input().len();
    PowersetMealy {
        name: format!("L({})", m.name()),
        states: m.states().clone(),
        input: m.input().clone(),
        output: m.output().clone(),
        d: (0..cells).map(|k| vec![m.transition().apply(k)]).collect(),
        s: (0..cells).map(|k| vec![m.output_map().apply(k)]).collect(),
    }
}

fn mask_members(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

fn members_mask(xs: &[usize]) -> usize {
    xs.iter().fold(0, |m, &i| m | 1 << i)
}

/// The deterministic machine on `P(E)` over `P(I)` and `P(O)`. Subsets are
/// indexed by bitmask. Fails when `|E| + |I|` or `|O|` exceeds `limit` bits.
pub fn expand(n: &PowersetMealy, limit: usize) -> Result<MealyMachine> {
    let (ne, ni, no) = (n.states.len(), n.input.len(), n.output.len());
    if ne + ni > limit || no > limit {
        return Err(Error::Resource(format!(
            "expanding `{}` needs 2^{} cells and 2^{} outputs; limit is {limit} bits",
            n.name,
            ne + ni,
            no
        )));
    }
    MealyMachine::from_fns(
        format!("{}ᵉ", n.name),
        n.states.powerset(),
        n.input.powerset(),
        n.output.powerset(),
        |sm, tm| members_mask(&n.step(&mask_members(sm), &mask_members(tm)).0),
        |sm, tm| members_mask(&n.step(&mask_members(sm), &mask_members(tm)).1),
    )
}

/// One `(state subset, output subset)` pair per letter, feeding each letter
/// as a singleton.
pub fn run_nondeterministic(
    n: &PowersetMealy,
    start: &[usize],
    w: &Word,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if w.alphabet() != &n.input {
        return Err(mismatch("word is not over the machine's input alphabet"));
    }
    if start.iter().any(|&e| e >= n.states.len()) {
        return Err(malformed("start set is not a subset of the states"));
    }
    let mut current = normalise(start.to_vec());
    let mut trace = Vec::with_capacity(w.len());
    for &a in w.letters() {
        let (next, out) = n.step(&current, &[a]);
        trace.push((next.clone(), out));
        current = next;
    }
    Ok(trace)
}

/// Checks that `η ∘ f` is a 2-cell `n → n2`:
/// `d₂(f e, a) = P f (d(e, a))` and `s₂(f e, a) = s(e, a)`.
pub fn check_kleisli_morphism(
    f: &FinFn,
    n: &PowersetMealy,
    n2: &PowersetMealy,
) -> Result<Verdict<MorphismViolation>> {
    if f.dom() != &n.states || f.cod() != &n2.states {
        return Err(mismatch("state map does not go between the machines"));
    }
    if n.input != n2.input || n.output != n2.output {
        return Err(mismatch("machines have different alphabets"));
    }
    for e in n.states.indices() {
        for a in n.input.indices() {
            let image = normalise(n.d(e, a).iter().map(|&x| f.apply(x)).collect());
            let equation = if n2.d(f.apply(e), a) != image.as_slice() {
                Some(Equation::Transition)
            } else if n2.s(f.apply(e), a) != n.s(e, a) {
                Some(Equation::Output)
            } else {
                None
            };
            if let Some(equation) = equation {
                return Ok(Verdict::Fails(MorphismViolation {
                    state: n.states.label(e).into(),
                    letter: Some(n.input.label(a).into()),
                    equation,
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// `S × T` built by strengthening on the right first: `⋃_{t∈T} S × {t}`.
pub fn pair_right_first(s: &[usize], t: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = t.iter().flat_map(|&y| s.iter().map(move |&x| (x, y))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `S × T` built by strengthening on the left first: `⋃_{s∈S} {s} × T`.
pub fn pair_left_first(s: &[usize], t: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = s.iter().flat_map(|&x| t.iter().map(move |&y| (x, y))).collect();
    out.sort_unstable();
    out.dedup();
    out
}
