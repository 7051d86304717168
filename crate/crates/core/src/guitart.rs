//! Finite categories, discrete opfibrations and spans of categories.
//!
//! A machine between finite monoids becomes a span `M ← E[d] → N`: the left
//! leg projects the translation category of the action, the right leg is the
//! output functor Σ. Spans compose by strict pullback.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{malformed, mismatch};
use crate::finset::{pair_label, product_set, FinFn, FinMonoid, FinSet};
use crate::fugal::{check_action, compose_monoid_diamond, Elem, Monoid, MonoidMealyMachine};
use crate::{Error, Result, Verdict};

struct CatData {
    name: String,
    objects: FinSet,
    morphisms: FinSet,
    src: Vec<usize>,
    tgt: Vec<usize>,
    id: Vec<usize>,
    /// `comp[g * |Mor| + f] = g ∘ f` when `tgt f = src g`.
    comp: Vec<Option<usize>>,
}

/// A finite category. Cheap to clone.
#[derive(Clone)]
pub struct FinCat(Arc<CatData>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatLawViolation {
    LeftUnit { morphism: String },
    RightUnit { morphism: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for CatLawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatLawViolation::LeftUnit { morphism } => write!(f, "id ∘ {morphism} ≠ {morphism}"),
            CatLawViolation::RightUnit { morphism } => write!(f, "{morphism} ∘ id ≠ {morphism}"),
            CatLawViolation::Associativity { h, g, f: x } => {
                write!(f, "({h} ∘ {g}) ∘ {x} ≠ {h} ∘ ({g} ∘ {x})")
            }
        }
    }
}

impl FinCat {
    /// Checks the structure (typing of `src`, `tgt`, `id`, composition
    /// defined exactly on composable pairs) and the category laws.
    pub fn new(
        name: impl Into<String>,
        objects: FinSet,
        morphisms: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        id: Vec<usize>,
        comp: Vec<Option<usize>>,
    ) -> Result<Self> {
        let cat = Self::unchecked(name, objects, morphisms, src, tgt, id, comp)?;
        if let Verdict::Fails(v) = check_category_laws(&cat) {
            return Err(malformed(format!("category `{}` violates a law: {v}", cat.name())));
        }
        Ok(cat)
    }

    /// Structural checks only; used for constructions that satisfy the
    /// laws by design.
    fn unchecked(
        name: impl Into<String>,
        objects: FinSet,
        morphisms: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        id: Vec<usize>,
        comp: Vec<Option<usize>>,
    ) -> Result<Self> {
        let (no, nm) = (objects.len(), morphisms.len());
        if src.len() != nm || tgt.len() != nm || id.len() != no || comp.len() != nm * nm {
            return Err(malformed("category tables have the wrong size"));
        }
        if src.iter().chain(&tgt).any(|&x| x >= no) || id.iter().any(|&f| f >= nm) {
            return Err(malformed("category table entry out of range"));
        }
        for x in 0..no {
            if src[id[x]] != x || tgt[id[x]] != x {
                return Err(malformed(format!("identity of `{}` is not an endomorphism of it", objects.label(x))));
            }
        }
        for g in 0..nm {
            for f in 0..nm {
                let defined = comp[g * nm + f];
                match (tgt[f] == src[g], defined) {
                    (true, None) => {
                        return Err(malformed(format!(
                            "composite {} ∘ {} is missing",
                            morphisms.label(g),
                            morphisms.label(f)
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(malformed(format!(
                            "composite {} ∘ {} given for a non-composable pair",
                            morphisms.label(g),
                            morphisms.label(f)
                        )))
                    }
                    (true, Some(h)) if h >= nm || src[h] != src[f] || tgt[h] != tgt[g] => {
                        return Err(malformed(format!(
                            "composite {} ∘ {} has the wrong type",
                            morphisms.label(g),
                            morphisms.label(f)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(FinCat(Arc::new(CatData {
            name: name.into(),
            objects,
            morphisms,
            src,
            tgt,
            id,
            comp,
        })))
    }

    /// Builds the composition table from a function on composable pairs.
    pub fn from_fn(
        name: impl Into<String>,
        objects: FinSet,
        morphisms: FinSet,
        src: Vec<usize>,
        tgt: Vec<usize>,
        id: Vec<usize>,
        comp: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let nm = morphisms.len();
        let mut table = vec![None; nm * nm];
        for g in 0..nm {
            for f in 0..nm {
                if src.get(g).is_some() && tgt.get(f) == src.get(g) {
                    table[g * nm + f] = Some(comp(g, f));
                }
            }
        }
        Self::new(name, objects, morphisms, src, tgt, id, table)
    }

    /// A monoid as a one-object category. Composition is diagrammatic:
    /// `g ∘ f = f · g` (first `f`, then `g`).
    pub fn from_monoid(m: &FinMonoid) -> Self {
        let n = m.len();
        let mut comp = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                comp[g * n + f] = Some(m.mul(f, g));
            }
        }
        Self::unchecked(
            m.carrier().name().to_string(),
            FinSet::singleton("*", "*"),
            m.carrier().clone(),
            vec![0; n],
            vec![0; n],
            vec![m.unit()],
            comp,
        )
        .expect("one-object category")
    }

    /// Only identities.
    pub fn discrete(objects: &FinSet) -> Self {
        let n = objects.len();
        let morphisms = FinSet::new(
            format!("Mor({})", objects.name()),
            objects.elements().iter().map(|x| format!("id_{x}")),
        )
        .expect("distinct labels");
        let comp = (0..n * n).map(|k| (k / n == k % n).then_some(k % n)).collect();
        Self::unchecked(
            objects.name().to_string(),
            objects.clone(),
            morphisms,
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            comp,
        )
        .expect("discrete category")
    }

    /// Exactly one morphism `x → y` for every pair of objects.
    pub fn chaotic(objects: &FinSet) -> Self {
        let n = objects.len();
        let morphisms = FinSet::new(
            format!("Mor({})", objects.name()),
            objects
                .elements()
                .iter()
                .flat_map(|x| objects.elements().iter().map(move |y| format!("{x}→{y}"))),
        )
        .expect("distinct labels");
        // Morphism x → y sits at x * n + y.
        let src = (0..n * n).map(|k| k / n).collect();
        let tgt = (0..n * n).map(|k| k % n).collect();
        let id = (0..n).map(|x| x * n + x).collect();
        let m = n * n;
        let comp = (0..m * m)
            .map(|k| {
                let (g, f) = (k / m, k % m);
                (f % n == g / n).then_some((f / n) * n + g % n)
            })
            .collect();
        Self::unchecked(format!("Ch({})", objects.name()), objects.clone(), morphisms, src, tgt, id, comp)
            .expect("chaotic category")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn objects(&self) -> &FinSet {
        &self.0.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.0.morphisms
    }

    pub fn src(&self, f: usize) -> usize {
        self.0.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.0.tgt[f]
    }

    pub fn id(&self, x: usize) -> usize {
        self.0.id[x]
    }

    /// `g ∘ f`, if composable.
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.0.comp[g * self.0.morphisms.len() + f]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.0
            .morphisms
            .indices()
            .filter(|&f| self.0.src[f] == x && self.0.tgt[f] == y)
            .collect()
    }

    pub fn morphisms_from(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.morphisms.indices().filter(move |&f| self.0.src[f] == x)
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nm = self.0.morphisms.len();
        (0..nm * nm).filter_map(move |k| self.0.comp[k].map(|_| (k / nm, k % nm)))
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.objects == other.0.objects
                && self.0.morphisms == other.0.morphisms
                && self.0.src == other.0.src
                && self.0.tgt == other.0.tgt
                && self.0.id == other.0.id
                && self.0.comp == other.0.comp)
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}: {} objects, {} morphisms)",
            self.0.name,
            self.0.objects.len(),
            self.0.morphisms.len()
        )
    }
}

/// Unit laws per morphism, then associativity over composable triples.
pub fn check_category_laws(c: &FinCat) -> Verdict<CatLawViolation> {
    let label = |f: usize| c.morphisms().label(f).to_string();
    for f in c.morphisms().indices() {
        if c.comp(c.id(c.tgt(f)), f) != Some(f) {
            return Verdict::Fails(CatLawViolation::LeftUnit { morphism: label(f) });
        }
        if c.comp(f, c.id(c.src(f))) != Some(f) {
            return Verdict::Fails(CatLawViolation::RightUnit { morphism: label(f) });
        }
    }
    for (g, f) in c.composable_pairs() {
        let gf = c.comp(g, f).expect("composable");
        for h in c.morphisms_from(c.tgt(g)) {
            let hg = c.comp(h, g).expect("composable");
            if c.comp(h, gf) != c.comp(hg, f) {
                return Verdict::Fails(CatLawViolation::Associativity {
                    h: label(h),
                    g: label(g),
                    f: label(f),
                });
            }
        }
    }
    Verdict::Holds
}

/// A functor between finite categories, as object and morphism tables.
#[derive(Clone, PartialEq, Eq)]
pub struct CatFunctor {
    name: String,
    dom: FinCat,
    cod: FinCat,
    on_obj: Vec<usize>,
    on_mor: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    Source { morphism: String },
    Target { morphism: String },
    /// `F(g ∘ f) ≠ F(g) ∘ F(f)`; `first` is `f`.
    Composition { first: String, second: String },
    Identity { object: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::Source { morphism } => write!(f, "source of {morphism} not preserved"),
            FunctorViolation::Target { morphism } => write!(f, "target of {morphism} not preserved"),
            FunctorViolation::Composition { first, second } => {
                write!(f, "composition not preserved at ({first},{second})")
            }
            FunctorViolation::Identity { object } => write!(f, "identity of {object} not preserved"),
        }
    }
}

impl CatFunctor {
    /// Checks table sizes only; see [`check_functor_laws`].
    pub fn new(
        name: impl Into<String>,
        dom: FinCat,
        cod: FinCat,
        on_obj: Vec<usize>,
        on_mor: Vec<usize>,
    ) -> Result<Self> {
        if on_obj.len() != dom.objects().len() || on_mor.len() != dom.morphisms().len() {
            return Err(malformed("functor tables have the wrong size"));
        }
        if on_obj.iter().any(|&x| x >= cod.objects().len()) || on_mor.iter().any(|&f| f >= cod.morphisms().len()) {
            return Err(malformed("functor table entry out of range"));
        }
        Ok(CatFunctor {
            name: name.into(),
            dom,
            cod,
            on_obj,
            on_mor,
        })
    }

    /// [`CatFunctor::new`] followed by the functor laws.
    pub fn checked(
        name: impl Into<String>,
        dom: FinCat,
        cod: FinCat,
        on_obj: Vec<usize>,
        on_mor: Vec<usize>,
    ) -> Result<Self> {
        let f = Self::new(name, dom, cod, on_obj, on_mor)?;
        match check_functor_laws(&f) {
            Verdict::Holds => Ok(f),
            Verdict::Fails(v) => Err(malformed(format!("`{}` is not a functor: {v}", f.name))),
        }
    }

    pub fn identity(c: &FinCat) -> Self {
        CatFunctor {
            name: format!("id_{}", c.name()),
            dom: c.clone(),
            cod: c.clone(),
            on_obj: c.objects().indices().collect(),
            on_mor: c.morphisms().indices().collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dom(&self) -> &FinCat {
        &self.dom
    }

    pub fn cod(&self) -> &FinCat {
        &self.cod
    }

    pub fn obj(&self, x: usize) -> usize {
        self.on_obj[x]
    }

    pub fn mor(&self, f: usize) -> usize {
        self.on_mor[f]
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &CatFunctor) -> Result<CatFunctor> {
        if self.cod != g.dom {
            return Err(mismatch(format!("cannot compose `{}` with `{}`", self.name, g.name)));
        }
        Ok(CatFunctor {
            name: format!("{}∘{}", g.name, self.name),
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            on_obj: self.on_obj.iter().map(|&x| g.on_obj[x]).collect(),
            on_mor: self.on_mor.iter().map(|&f| g.on_mor[f]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        fn bij(t: &[usize], n: usize) -> bool {
            let mut seen = vec![false; n];
            t.len() == n && t.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        }
        bij(&self.on_obj, self.cod.objects().len()) && bij(&self.on_mor, self.cod.morphisms().len())
    }
}

impl fmt::Debug for CatFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CatFunctor({}: {:?} → {:?})", self.name, self.dom, self.cod)
    }
}

/// Sources and targets, then composition, then identities.
pub fn check_functor_laws(func: &CatFunctor) -> Verdict<FunctorViolation> {
    let (c, d) = (&func.dom, &func.cod);
    let label = |f: usize| c.morphisms().label(f).to_string();
    for f in c.morphisms().indices() {
        if d.src(func.mor(f)) != func.obj(c.src(f)) {
            return Verdict::Fails(FunctorViolation::Source { morphism: label(f) });
        }
        if d.tgt(func.mor(f)) != func.obj(c.tgt(f)) {
            return Verdict::Fails(FunctorViolation::Target { morphism: label(f) });
        }
    }
    for f in c.morphisms().indices() {
        for g in c.morphisms_from(c.tgt(f)) {
            let gf = c.comp(g, f).expect("composable");
            if Some(func.mor(gf)) != d.comp(func.mor(g), func.mor(f)) {
                return Verdict::Fails(FunctorViolation::Composition {
                    first: label(f),
                    second: label(g),
                });
            }
        }
    }
    for x in c.objects().indices() {
        if func.mor(c.id(x)) != d.id(func.obj(x)) {
            return Verdict::Fails(FunctorViolation::Identity {
                object: c.objects().label(x).into(),
            });
        }
    }
    Verdict::Holds
}

/// An object with a base morphism out of its image that has no lift, or
/// more than one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpfibrationViolation {
    pub object: String,
    pub morphism: String,
    pub lifts: usize,
}

impl fmt::Display for OpfibrationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "object {} has {} lifts of {}",
            self.object, self.lifts, self.morphism
        )
    }
}

fn lifts(p: &CatFunctor, e: usize, m: usize) -> Vec<usize> {
    p.dom.morphisms_from(e).filter(|&g| p.mor(g) == m).collect()
}

pub fn is_discrete_opfibration(p: &CatFunctor) -> Verdict<OpfibrationViolation> {
    for e in p.dom.objects().indices() {
        for m in p.cod.morphisms_from(p.obj(e)) {
            let found = lifts(p, e, m).len();
            if found != 1 {
                return Verdict::Fails(OpfibrationViolation {
                    object: p.dom.objects().label(e).into(),
                    morphism: p.cod.morphisms().label(m).into(),
                    lifts: found,
                });
            }
        }
    }
    Verdict::Holds
}

/// The translation category of an action, with its projection to `M`.
/// Morphism `(e, m)` (index `e * |M| + m`) goes `e → d(e, m)`.
pub fn translation_category(states: &FinSet, m: &FinMonoid, act: &[usize]) -> Result<(FinCat, CatFunctor)> {
    if act.len() != states.len() * m.len() || act.iter().any(|&e| e >= states.len()) {
        return Err(malformed("action table has the wrong shape"));
    }
    if let Verdict::Fails(v) = check_action(states, m, act) {
        return Err(Error::Precondition(format!("not an action: {v}")));
    }
    let k = m.len();
    let nm = states.len() * k;
    let mut comp = vec![None; nm * nm];
    for f in 0..nm {
        let (e, x) = (f / k, f % k);
        let mid = act[f];
        for y in 0..k {
            comp[(mid * k + y) * nm + f] = Some(e * k + m.mul(x, y));
        }
    }
    let cat = FinCat::unchecked(
        format!("{}[d]", states.name()),
        states.clone(),
        product_set(states, m.carrier()),
        (0..nm).map(|f| f / k).collect(),
        act.to_vec(),
        states.indices().map(|e| e * k + m.unit()).collect(),
        comp,
    )?;
    let base = FinCat::from_monoid(m);
    let proj = CatFunctor::new(
        "p",
        cat.clone(),
        base,
        vec![0; states.len()],
        (0..nm).map(|f| f % k).collect(),
    )?;
    Ok((cat, proj))
}

fn finite_monoids(m: &MonoidMealyMachine) -> Result<(&FinMonoid, &FinMonoid)> {
    match (m.input(), m.output()) {
        (Monoid::Finite(a), Monoid::Finite(b)) => Ok((a, b)),
        _ => Err(Error::Usage(format!(
            "`{}`: span presentation needs finite input and output monoids",
            m.name()
        ))),
    }
}

fn action_table(m: &MonoidMealyMachine, input: &FinMonoid) -> Vec<usize> {
    m.states()
        .indices()
        .flat_map(|e| input.carrier().indices().map(move |x| m.act(e, &Elem::Fin(x))))
        .collect()
}

/// The assignment `(e, m) ↦ s(e, m)` together with whether it is a functor.
#[derive(Debug, Clone)]
pub struct SigmaWitness {
    pub assignment: CatFunctor,
    pub verdict: Verdict<FunctorViolation>,
}

/// Σ : E[d] → N. Functorial exactly when the machine is fugal and sends
/// units to the unit.
pub fn sigma_functor(m: &MonoidMealyMachine) -> Result<SigmaWitness> {
    let (input, output) = finite_monoids(m)?;
    let (cat, _) = translation_category(m.states(), input, &action_table(m, input))?;
    let k = input.len();
    let on_mor = cat
        .morphisms()
        .indices()
        .map(|f| match m.out(f / k, &Elem::Fin(f % k)) {
            Elem::Fin(y) => y,
            Elem::Word(_) => unreachable!("finite output monoid"),
        })
        .collect();
    let assignment = CatFunctor::new(
        "Σ",
        cat.clone(),
        FinCat::from_monoid(output),
        vec![0; cat.objects().len()],
        on_mor,
    )?;
    let verdict = check_functor_laws(&assignment);
    Ok(SigmaWitness { assignment, verdict })
}

/// `A ← E → B` with `p` a discrete opfibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuitartSpan {
    p: CatFunctor,
    s: CatFunctor,
}

impl GuitartSpan {
    pub fn new(p: CatFunctor, s: CatFunctor) -> Result<Self> {
        if p.dom != s.dom {
            return Err(mismatch("span legs have different apexes"));
        }
        for leg in [&p, &s] {
            if let Verdict::Fails(v) = check_functor_laws(leg) {
                return Err(malformed(format!("span leg `{}` is not a functor: {v}", leg.name)));
            }
        }
        if let Verdict::Fails(v) = is_discrete_opfibration(&p) {
            return Err(Error::Precondition(format!(
                "left leg is not a discrete opfibration: {v}"
            )));
        }
        Ok(GuitartSpan { p, s })
    }

    /// `B ← B → B` with identity legs.
    pub fn identity(b: &FinCat) -> Self {
        GuitartSpan {
            p: CatFunctor::identity(b),
            s: CatFunctor::identity(b),
        }
    }

    pub fn apex(&self) -> &FinCat {
        &self.p.dom
    }

    pub fn base(&self) -> &FinCat {
        &self.p.cod
    }

    pub fn target(&self) -> &FinCat {
        &self.s.cod
    }

    pub fn left(&self) -> &CatFunctor {
        &self.p
    }

    pub fn right(&self) -> &CatFunctor {
        &self.s
    }
}

/// Π(m) = `M ← E[d] → N`. Fails with a precondition error when Σ is not a
/// functor.
pub fn pi_span(m: &MonoidMealyMachine) -> Result<GuitartSpan> {
    let (input, _) = finite_monoids(m)?;
    let (_, proj) = translation_category(m.states(), input, &action_table(m, input))?;
    let sigma = sigma_functor(m)?;
    if let Verdict::Fails(v) = sigma.verdict {
        return Err(Error::Precondition(format!("Σ of `{}` is not a functor: {v}", m.name())));
    }
    GuitartSpan::new(proj, sigma.assignment)
}

/// Strict pullback of `S₁ : E → B` and `q : F → B`, then the outer legs.
/// Objects and morphisms of the apex are pairs `(e, f)` with equal images.
pub fn compose_spans(sp1: &GuitartSpan, sp2: &GuitartSpan) -> Result<GuitartSpan> {
    if sp1.target() != sp2.base() {
        return Err(mismatch(format!(
            "target `{}` of the first span is not the base `{}` of the second",
            sp1.target().name(),
            sp2.base().name()
        )));
    }
    let (e, f) = (sp1.apex(), sp2.apex());
    let (s1, q) = (&sp1.s, &sp2.p);
    let pairs = |left: &FinSet, right: &FinSet, keep: &dyn Fn(usize, usize) -> bool| {
        let mut idx = Vec::new();
        for a in left.indices() {
            for b in right.indices() {
                if keep(a, b) {
                    idx.push((a, b));
                }
            }
        }
        let labels: Vec<String> = idx
            .iter()
            .map(|&(a, b)| pair_label(left.label(a), right.label(b)))
            .collect();
        let lookup: HashMap<(usize, usize), usize> = idx.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        (idx, labels, lookup)
    };
    let (objs, obj_labels, obj_at) = pairs(e.objects(), f.objects(), &|x, y| s1.obj(x) == q.obj(y));
    let (mors, mor_labels, mor_at) = pairs(e.morphisms(), f.morphisms(), &|g, h| s1.mor(g) == q.mor(h));
    let objects = FinSet::new(format!("{}×{}", e.name(), f.name()), obj_labels)?;
    let morphisms = FinSet::new(format!("Mor({}×{})", e.name(), f.name()), mor_labels)?;
    let src = mors.iter().map(|&(g, h)| obj_at[&(e.src(g), f.src(h))]).collect();
    let tgt = mors.iter().map(|&(g, h)| obj_at[&(e.tgt(g), f.tgt(h))]).collect();
    let id = objs.iter().map(|&(x, y)| mor_at[&(e.id(x), f.id(y))]).collect();
    let n = mors.len();
    let mut comp = vec![None; n * n];
    for (i, &(g2, h2)) in mors.iter().enumerate() {
        for (j, &(g1, h1)) in mors.iter().enumerate() {
            if let (Some(g), Some(h)) = (e.comp(g2, g1), f.comp(h2, h1)) {
                comp[i * n + j] = Some(mor_at[&(g, h)]);
            }
        }
    }
    let z = FinCat::unchecked(format!("{}×_{}{}", e.name(), sp1.target().name(), f.name()), objects, morphisms, src, tgt, id, comp)?;
    let left = CatFunctor::new(
        "p",
        z.clone(),
        sp1.base().clone(),
        objs.iter().map(|&(x, _)| sp1.p.obj(x)).collect(),
        mors.iter().map(|&(g, _)| sp1.p.mor(g)).collect(),
    )?;
    let right = CatFunctor::new(
        "S",
        z,
        sp2.target().clone(),
        objs.iter().map(|&(_, y)| sp2.s.obj(y)).collect(),
        mors.iter().map(|&(_, h)| sp2.s.mor(h)).collect(),
    )?;
    GuitartSpan::new(left, right)
}

/// Why `Π(m₂ ⋄ m₁)` and `Π(m₂) ∘ Π(m₁)` are not identified by the canonical
/// comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PiViolation {
    NotFunctor(FunctorViolation),
    NotBijective,
    LeftLeg { morphism: String },
    RightLeg { morphism: String },
}

impl fmt::Display for PiViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiViolation::NotFunctor(v) => write!(f, "comparison is not a functor: {v}"),
            PiViolation::NotBijective => write!(f, "comparison is not bijective"),
            PiViolation::LeftLeg { morphism } => write!(f, "left legs disagree at {morphism}"),
            PiViolation::RightLeg { morphism } => write!(f, "right legs disagree at {morphism}"),
        }
    }
}

/// First morphism of `f.dom` where `f` and `g` differ (objects are implied
/// by identities).
fn first_difference(f: &CatFunctor, g: &CatFunctor) -> Option<String> {
    let c = &f.dom;
    c.objects()
        .indices()
        .find(|&x| f.obj(x) != g.obj(x))
        .map(|x| c.objects().label(x).to_string())
        .or_else(|| {
            c.morphisms()
                .indices()
                .find(|&h| f.mor(h) != g.mor(h))
                .map(|h| c.morphisms().label(h).to_string())
        })
}

/// Builds `Π(m₁)`, `Π(m₂)`, their composite `Z`, and `Π(m₂ ⋄ m₁)`; checks
/// that `(f,e) ↦ (e,f)`, `((f,e),m) ↦ ((e,m),(f,s₁(e,m)))` is an isomorphism
/// of categories commuting with both legs.
pub fn verify_pi_functoriality(m1: &MonoidMealyMachine, m2: &MonoidMealyMachine) -> Result<Verdict<PiViolation>> {
    let (a, _) = finite_monoids(m1)?;
    let (b, _) = finite_monoids(m2)?;
    let (sp1, sp2) = (pi_span(m1)?, pi_span(m2)?);
    let z = compose_spans(&sp1, &sp2)?;
    let direct = pi_span(&compose_monoid_diamond(m2, m1)?)?;

    let (ne, ka, kb) = (m1.states().len(), a.len(), b.len());
    let zc = z.apex();
    let obj_at = |e: usize, f: usize| zc.objects().index_of(&pair_label(m1.states().label(e), m2.states().label(f)));
    let e_mor = sp1.apex().morphisms();
    let f_mor = sp2.apex().morphisms();
    let mor_at = |em: usize, fm: usize| zc.morphisms().index_of(&pair_label(e_mor.label(em), f_mor.label(fm)));

    let dc = direct.apex();
    let mut on_obj = Vec::with_capacity(dc.objects().len());
    for x in dc.objects().indices() {
        let (f, e) = (x / ne, x % ne);
        match obj_at(e, f) {
            Some(i) => on_obj.push(i),
            None => return Ok(Verdict::Fails(PiViolation::NotBijective)),
        }
    }
    let mut on_mor = Vec::with_capacity(dc.morphisms().len());
    for h in dc.morphisms().indices() {
        let (x, m) = (h / ka, h % ka);
        let (f, e) = (x / ne, x % ne);
        let Elem::Fin(n) = m1.out(e, &Elem::Fin(m)) else {
            unreachable!("finite output monoid")
        };
        match mor_at(e * ka + m, f * kb + n) {
            Some(i) => on_mor.push(i),
            None => return Ok(Verdict::Fails(PiViolation::NotBijective)),
        }
    }
    let k = CatFunctor::new("K", dc.clone(), zc.clone(), on_obj, on_mor)?;
    if let Verdict::Fails(v) = check_functor_laws(&k) {
        return Ok(Verdict::Fails(PiViolation::NotFunctor(v)));
    }
    if !k.is_bijective() {
        return Ok(Verdict::Fails(PiViolation::NotBijective));
    }
    if let Some(morphism) = first_difference(&k.then(&z.p)?, &direct.p) {
        return Ok(Verdict::Fails(PiViolation::LeftLeg { morphism }));
    }
    if let Some(morphism) = first_difference(&k.then(&z.s)?, &direct.s) {
        return Ok(Verdict::Fails(PiViolation::RightLeg { morphism }));
    }
    Ok(Verdict::Holds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoCellViolation {
    NotFunctor(FunctorViolation),
    /// `q ∘ H ≠ p`.
    LeftTriangle { cell: String },
    /// `T ∘ H ≠ S`.
    RightTriangle { cell: String },
    /// `H` does not send the lift of `morphism` at `object` to a lift.
    Lift { object: String, morphism: String },
}

impl fmt::Display for TwoCellViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoCellViolation::NotFunctor(v) => write!(f, "H is not a functor: {v}"),
            TwoCellViolation::LeftTriangle { cell } => write!(f, "left triangle fails at {cell}"),
            TwoCellViolation::RightTriangle { cell } => write!(f, "right triangle fails at {cell}"),
            TwoCellViolation::Lift { object, morphism } => {
                write!(f, "lift of {morphism} at {object} not preserved")
            }
        }
    }
}

/// `H : E → F` between spans `A ← E → B` and `A ← F → B`.
pub fn check_mac_2cell(h: &CatFunctor, sp1: &GuitartSpan, sp2: &GuitartSpan) -> Result<Verdict<TwoCellViolation>> {
    if &h.dom != sp1.apex() || &h.cod != sp2.apex() {
        return Err(mismatch("H does not go between the span apexes"));
    }
    if sp1.base() != sp2.base() || sp1.target() != sp2.target() {
        return Err(mismatch("spans have different feet"));
    }
    if let Verdict::Fails(v) = check_functor_laws(h) {
        return Ok(Verdict::Fails(TwoCellViolation::NotFunctor(v)));
    }
    if let Some(cell) = first_difference(&h.then(&sp2.p)?, &sp1.p) {
        return Ok(Verdict::Fails(TwoCellViolation::LeftTriangle { cell }));
    }
    if let Some(cell) = first_difference(&h.then(&sp2.s)?, &sp1.s) {
        return Ok(Verdict::Fails(TwoCellViolation::RightTriangle { cell }));
    }
    let e = sp1.apex();
    for x in e.objects().indices() {
        for m in sp1.base().morphisms_from(sp1.p.obj(x)) {
            let here = lifts(&sp1.p, x, m);
            let there = lifts(&sp2.p, h.obj(x), m);
            if here.len() != 1 || there.len() != 1 || h.mor(here[0]) != there[0] {
                return Ok(Verdict::Fails(TwoCellViolation::Lift {
                    object: e.objects().label(x).into(),
                    morphism: sp1.base().morphisms().label(m).into(),
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// The functor `E[d] → E'[d']` induced by a state map: `e ↦ f(e)`,
/// `(e, m) ↦ (f(e), m)`.
pub fn morphism_functor(f: &FinFn, sp1: &GuitartSpan, sp2: &GuitartSpan) -> Result<CatFunctor> {
    let (e, e2) = (sp1.apex(), sp2.apex());
    if f.dom() != e.objects() || f.cod() != e2.objects() {
        return Err(mismatch("state map does not go between the span apexes"));
    }
    let k = sp1.base().morphisms().len();
    CatFunctor::new(
        "H",
        e.clone(),
        e2.clone(),
        f.table().to_vec(),
        e.morphisms().indices().map(|g| f.apply(g / k) * k + g % k).collect(),
    )
}
