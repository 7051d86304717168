//! Machines in the bicategory of relations.
//!
//! A Moore machine for fixed `I : A ⇝ A` and `O : A ⇝ B` is a relation
//! `E : A ⇝ B` with `E∘I ⊆ E` and `E ⊆ O`; a Mealy machine has `E∘I ⊆ E` and
//! `E∘I ⊆ O`. The terminal machine is computed by a reachability formula and
//! certified against a greatest-fixpoint iteration and full enumeration.

use std::fmt;

use crate::error::{malformed, mismatch};
use crate::finset::FinSet;
use crate::{Error, Result, Verdict};

/// Default cap on `|A × B|` for full enumeration in [`verify_terminal`].
pub const DEFAULT_ENUMERATION_BITS: usize = 14;

/// A relation `src ⇝ dst`, stored as a bit matrix (row-major, `a * |dst| + b`).
#[derive(Clone, PartialEq, Eq)]
pub struct Rel {
    src: FinSet,
    dst: FinSet,
    bits: Vec<bool>,
}

impl Rel {
    pub fn new(src: FinSet, dst: FinSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Rel::empty(&src, &dst);
        for (a, b) in pairs {
            if a >= src.len() || b >= dst.len() {
                return Err(malformed(format!("pair ({a},{b}) is outside {}×{}", src.name(), dst.name())));
            }
            r.bits[a * dst.len() + b] = true;
        }
        Ok(r)
    }

    pub fn from_labels<'a>(
        src: FinSet,
        dst: FinSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let idx = pairs
            .into_iter()
            .map(|(a, b)| Ok((src.require(a)?, dst.require(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Rel::new(src, dst, idx)
    }

    pub fn empty(src: &FinSet, dst: &FinSet) -> Self {
        Rel {
            src: src.clone(),
            dst: dst.clone(),
            bits: vec![false; src.len() * dst.len()],
        }
    }

    pub fn full(src: &FinSet, dst: &FinSet) -> Self {
        Rel {
            src: src.clone(),
            dst: dst.clone(),
            bits: vec![true; src.len() * dst.len()],
        }
    }

    pub fn identity(set: &FinSet) -> Self {
        Rel::new(set.clone(), set.clone(), set.indices().map(|a| (a, a))).expect("diagonal")
    }

    /// Subset number `mask` of `src × dst`, bit `a * |dst| + b`.
    pub fn from_mask(src: &FinSet, dst: &FinSet, mask: u64) -> Self {
        Rel {
            src: src.clone(),
            dst: dst.clone(),
            bits: (0..src.len() * dst.len()).map(|k| mask >> k & 1 == 1).collect(),
        }
    }

    pub fn src(&self) -> &FinSet {
        &self.src
    }

    pub fn dst(&self) -> &FinSet {
        &self.dst
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.dst.len() + b]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.dst.len();
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(move |(k, _)| (k / w, k % w))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&x| x).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn same_type(&self, other: &Rel) -> Result<()> {
        if self.src != other.src || self.dst != other.dst {
            return Err(mismatch("relations have different carriers"));
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &Rel) -> Result<bool> {
        self.same_type(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&x, &y)| !x || y))
    }

    pub fn union(&self, other: &Rel) -> Result<Rel> {
        self.same_type(other)?;
        Ok(Rel {
            bits: self.bits.iter().zip(&other.bits).map(|(&x, &y)| x || y).collect(),
            ..self.clone()
        })
    }

    pub fn intersection(&self, other: &Rel) -> Result<Rel> {
        self.same_type(other)?;
        Ok(Rel {
            bits: self.bits.iter().zip(&other.bits).map(|(&x, &y)| x && y).collect(),
            ..self.clone()
        })
    }

    /// First pair of `self` not in `other`.
    fn first_outside(&self, other: &Rel) -> Option<(usize, usize)> {
        self.pairs().find(|&(a, b)| !other.contains(a, b))
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .pairs()
            .map(|(a, b)| format!("({},{})", self.src.label(a), self.dst.label(b)))
            .collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rel({}⇝{}: {self})", self.src.name(), self.dst.name())
    }
}

/// `(snd ∘ fst)(a, c)` iff `fst(a, b)` and `snd(b, c)` for some `b`.
pub fn rel_compose(snd: &Rel, fst: &Rel) -> Result<Rel> {
    if fst.dst != snd.src {
        return Err(mismatch(format!(
            "cannot compose: `{}` is not `{}`",
            fst.dst.name(),
            snd.src.name()
        )));
    }
    let mut out = Rel::empty(&fst.src, &snd.dst);
    for (a, b) in fst.pairs() {
        for c in snd.dst.indices() {
            if snd.contains(b, c) {
                out.bits[a * snd.dst.len() + c] = true;
            }
        }
    }
    Ok(out)
}

fn require_endo(i: &Rel) -> Result<()> {
    if i.src != i.dst {
        return Err(mismatch("closure needs an endorelation"));
    }
    Ok(())
}

/// Least transitive relation containing `i` (paths of length ≥ 1).
pub fn trans_closure(i: &Rel) -> Result<Rel> {
    require_endo(i)?;
    let mut r = i.clone();
    loop {
        let next = r.union(&rel_compose(i, &r)?)?;
        if next == r {
            return Ok(r);
        }
        r = next;
    }
}

/// Least reflexive and transitive relation containing `i`.
pub fn refl_trans_closure(i: &Rel) -> Result<Rel> {
    require_endo(i)?;
    trans_closure(i)?.union(&Rel::identity(&i.src))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Moore,
    Mealy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Moore => "moore",
            Mode::Mealy => "mealy",
        })
    }
}

fn check_feet(i: &Rel, o: &Rel) -> Result<()> {
    require_endo(i)?;
    if o.src != i.src {
        return Err(mismatch("output relation must start where the input relation lives"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineViolation {
    /// `(a, b) ∈ E∘I` but not in `E`.
    Transition { a: String, b: String },
    /// `(a, b)` in `E` (Moore) or `E∘I` (Mealy) but not in `O`.
    Output { a: String, b: String },
}

impl fmt::Display for MachineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineViolation::Transition { a, b } => write!(f, "E∘I ⊄ E at ({a},{b})"),
            MachineViolation::Output { a, b } => write!(f, "output not inside O at ({a},{b})"),
        }
    }
}

pub fn check_machine(e: &Rel, i: &Rel, o: &Rel, mode: Mode) -> Result<Verdict<MachineViolation>> {
    check_feet(i, o)?;
    e.same_type(o)?;
    let ei = rel_compose(e, i)?;
    let label = |(a, b): (usize, usize)| (e.src.label(a).to_string(), e.dst.label(b).to_string());
    if let Some(p) = ei.first_outside(e) {
        let (a, b) = label(p);
        return Ok(Verdict::Fails(MachineViolation::Transition { a, b }));
    }
    let emitted = match mode {
        Mode::Moore => e,
        Mode::Mealy => &ei,
    };
    if let Some(p) = emitted.first_outside(o) {
        let (a, b) = label(p);
        return Ok(Verdict::Fails(MachineViolation::Output { a, b }));
    }
    Ok(Verdict::Holds)
}

/// Moore: `R(a,b) ⟺ ∀a'. I♮(a',a) ⇒ O(a',b)`; Mealy: the same with `I⁺`.
pub fn ran_reachability(i: &Rel, o: &Rel, mode: Mode) -> Result<Rel> {
    check_feet(i, o)?;
    let closure = match mode {
        Mode::Moore => refl_trans_closure(i)?,
        Mode::Mealy => trans_closure(i)?,
    };
    let mut r = Rel::empty(&o.src, &o.dst);
    for a in o.src.indices() {
        for b in o.dst.indices() {
            r.bits[a * o.dst.len() + b] = o.src.indices().all(|a2| !closure.contains(a2, a) || o.contains(a2, b));
        }
    }
    Ok(r)
}

/// Greatest machine by downward iteration from `O` (Moore) or `A × B`
/// (Mealy), removing `(x, b)` whenever some `I`-predecessor `a` of `x`
/// lacks `(a, b)` (Mealy: or lacks `O(a, b)`).
pub fn greatest_fixpoint(i: &Rel, o: &Rel, mode: Mode) -> Result<Rel> {
    check_feet(i, o)?;
    let mut e = match mode {
        Mode::Moore => o.clone(),
        Mode::Mealy => Rel::full(&o.src, &o.dst),
    };
    loop {
        let mut next = e.clone();
        for x in o.src.indices() {
            for b in o.dst.indices() {
                let keep = o.src.indices().all(|a| {
                    !i.contains(a, x) || (e.contains(a, b) && (mode == Mode::Moore || o.contains(a, b)))
                });
                if !keep {
                    next.bits[x * o.dst.len() + b] = false;
                }
            }
        }
        if next == e {
            return Ok(e);
        }
        e = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TerminalViolation {
    NotAMachine(MachineViolation),
    /// A machine not contained in the candidate.
    NotMaximal { machine: String },
    FixpointDiffers { fixpoint: String },
}

impl fmt::Display for TerminalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalViolation::NotAMachine(v) => write!(f, "candidate is not a machine: {v}"),
            TerminalViolation::NotMaximal { machine } => write!(f, "machine {machine} is not below the candidate"),
            TerminalViolation::FixpointDiffers { fixpoint } => write!(f, "greatest fixpoint is {fixpoint}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalReport {
    pub verdict: Verdict<TerminalViolation>,
    /// Number of machines found by enumeration.
    pub machines: u64,
}

/// Every machine `E ⊆ A × B`, in mask order.
pub fn enumerate_machines(i: &Rel, o: &Rel, mode: Mode, limit_bits: usize) -> Result<Vec<Rel>> {
    check_feet(i, o)?;
    let bits = o.src.len() * o.dst.len();
    if bits > limit_bits.min(63) {
        return Err(Error::Resource(format!(
            "enumerating subsets of a {bits}-element carrier exceeds the {limit_bits}-bit limit"
        )));
    }
    let mut out = Vec::new();
    for mask in 0..1u64 << bits {
        let e = Rel::from_mask(&o.src, &o.dst, mask);
        if check_machine(&e, i, o, mode)?.holds() {
            out.push(e);
        }
    }
    Ok(out)
}

/// Certifies `r` as the terminal machine: `r` is a machine, every
/// enumerated machine lies below it, and it equals the greatest fixpoint.
pub fn verify_terminal(r: &Rel, i: &Rel, o: &Rel, mode: Mode, limit_bits: usize) -> Result<TerminalReport> {
    let machines = enumerate_machines(i, o, mode, limit_bits)?;
    let count = machines.len() as u64;
    let report = |verdict| Ok(TerminalReport { verdict, machines: count });
    if let Verdict::Fails(v) = check_machine(r, i, o, mode)? {
        return report(Verdict::Fails(TerminalViolation::NotAMachine(v)));
    }
    for e in &machines {
        if !e.is_subset(r)? {
            return report(Verdict::Fails(TerminalViolation::NotMaximal { machine: e.to_string() }));
        }
    }
    let fix = greatest_fixpoint(i, o, mode)?;
    if &fix != r {
        return report(Verdict::Fails(TerminalViolation::FixpointDiffers { fixpoint: fix.to_string() }));
    }
    report(Verdict::Holds)
}
