//! Machines valued in a finite functor category `[C, FinSet]`.
//!
//! For an endofunctor `T` of a finite category `C` and `O : C → Set`, the
//! right Kan extension `Ran_T O` sends `c` to the set of families
//! `α_x : C(c, T x) → O(x)` natural in `x`. With a monad structure on `T`
//! and a comparison `κ : i ⇒ T` from the input functor, it carries a Moore
//! and a Mealy machine structure.

use std::collections::HashMap;
use std::fmt;

use crate::error::{malformed, mismatch};
use crate::finset::{FinFn, FinSet};
use crate::guitart::{CatFunctor, FinCat, FunctorViolation};
use crate::{Error, Result, Verdict};

/// Default cap on enumerated candidates.
pub const DEFAULT_CANDIDATE_LIMIT: u64 = 1_000_000;

/// A functor `C → FinSet`. Equality ignores the name.
#[derive(Clone)]
pub struct SetFunctor {
    name: String,
    dom: FinCat,
    sets: Vec<FinSet>,
    maps: Vec<FinFn>,
}

pub fn check_set_functor_laws(f: &SetFunctor) -> Verdict<FunctorViolation> {
    let c = &f.dom;
    for x in c.objects().indices() {
        if f.maps[c.id(x)] != FinFn::identity(&f.sets[x]) {
            return Verdict::Fails(FunctorViolation::Identity {
                object: c.objects().label(x).into(),
            });
        }
    }
    for (g, h) in c.composable_pairs() {
        let gh = c.comp(g, h).expect("composable");
        if f.maps[h].then(&f.maps[g]).ok().as_ref() != Some(&f.maps[gh]) {
            return Verdict::Fails(FunctorViolation::Composition {
                first: c.morphisms().label(h).into(),
                second: c.morphisms().label(g).into(),
            });
        }
    }
    Verdict::Holds
}

impl SetFunctor {
    /// `maps[f] : sets[src f] → sets[tgt f]`; the functor laws are checked.
    pub fn new(name: impl Into<String>, dom: FinCat, sets: Vec<FinSet>, maps: Vec<FinFn>) -> Result<Self> {
        let f = Self::unchecked(name, dom, sets, maps)?;
        if let Verdict::Fails(v) = check_set_functor_laws(&f) {
            return Err(malformed(format!("`{}` is not a functor: {v}", f.name)));
        }
        Ok(f)
    }

    fn unchecked(name: impl Into<String>, dom: FinCat, sets: Vec<FinSet>, maps: Vec<FinFn>) -> Result<Self> {
        let name = name.into();
        if sets.len() != dom.objects().len() || maps.len() != dom.morphisms().len() {
            return Err(malformed(format!("`{name}` must give one set per object and one map per morphism")));
        }
        for f in dom.morphisms().indices() {
            if maps[f].dom() != &sets[dom.src(f)] || maps[f].cod() != &sets[dom.tgt(f)] {
                return Err(malformed(format!(
                    "`{name}`: map for `{}` does not go between the right sets",
                    dom.morphisms().label(f)
                )));
            }
        }
        Ok(SetFunctor { name, dom, sets, maps })
    }

    pub fn constant(name: impl Into<String>, dom: &FinCat, set: &FinSet) -> Self {
        SetFunctor {
            name: name.into(),
            dom: dom.clone(),
            sets: vec![set.clone(); dom.objects().len()],
            maps: vec![FinFn::identity(set); dom.morphisms().len()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dom(&self) -> &FinCat {
        &self.dom
    }

    pub fn set(&self, x: usize) -> &FinSet {
        &self.sets[x]
    }

    pub fn map(&self, f: usize) -> &FinFn {
        &self.maps[f]
    }

    /// `E ∘ T`.
    pub fn precompose(&self, t: &CatFunctor) -> Result<SetFunctor> {
        if t.cod() != &self.dom {
            return Err(mismatch(format!("cannot precompose `{}` with `{}`", self.name, t.name())));
        }
        let c = t.dom();
        Ok(SetFunctor {
            name: format!("{}∘{}", self.name, t.name()),
            dom: c.clone(),
            sets: c.objects().indices().map(|x| self.sets[t.obj(x)].clone()).collect(),
            maps: c.morphisms().indices().map(|f| self.maps[t.mor(f)].clone()).collect(),
        })
    }
}

impl PartialEq for SetFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.sets == other.sets && self.maps == other.maps
    }
}

impl Eq for SetFunctor {}

impl fmt::Debug for SetFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<usize> = self.sets.iter().map(FinSet::len).collect();
        write!(f, "SetFunctor({}: sizes {:?})", self.name, sizes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityViolation {
    pub morphism: String,
    pub element: String,
}

impl fmt::Display for NaturalityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "naturality square for {} fails at {}", self.morphism, self.element)
    }
}

/// A natural transformation between set-valued functors on the same category.
#[derive(Clone, PartialEq, Eq)]
pub struct NatTrans {
    src: SetFunctor,
    dst: SetFunctor,
    components: Vec<FinFn>,
}

pub fn check_naturality(a: &NatTrans) -> Verdict<NaturalityViolation> {
    let c = &a.src.dom;
    for f in c.morphisms().indices() {
        let (x, y) = (c.src(f), c.tgt(f));
        for u in a.src.sets[x].indices() {
            if a.dst.maps[f].apply(a.components[x].apply(u)) != a.components[y].apply(a.src.maps[f].apply(u)) {
                return Verdict::Fails(NaturalityViolation {
                    morphism: c.morphisms().label(f).into(),
                    element: a.src.sets[x].label(u).into(),
                });
            }
        }
    }
    Verdict::Holds
}

impl NatTrans {
    pub fn new(src: SetFunctor, dst: SetFunctor, components: Vec<FinFn>) -> Result<Self> {
        let a = Self::unchecked(src, dst, components)?;
        if let Verdict::Fails(v) = check_naturality(&a) {
            return Err(malformed(format!("not natural: {v}")));
        }
        Ok(a)
    }

    fn unchecked(src: SetFunctor, dst: SetFunctor, components: Vec<FinFn>) -> Result<Self> {
        if src.dom != dst.dom {
            return Err(mismatch("natural transformation between functors on different categories"));
        }
        if components.len() != src.sets.len() {
            return Err(malformed("one component per object required"));
        }
        for (x, a) in components.iter().enumerate() {
            if a.dom() != &src.sets[x] || a.cod() != &dst.sets[x] {
                return Err(malformed(format!(
                    "component at `{}` has the wrong type",
                    src.dom.objects().label(x)
                )));
            }
        }
        Ok(NatTrans { src, dst, components })
    }

    pub fn identity(f: &SetFunctor) -> Self {
        NatTrans {
            src: f.clone(),
            dst: f.clone(),
            components: f.sets.iter().map(FinFn::identity).collect(),
        }
    }

    pub fn src(&self) -> &SetFunctor {
        &self.src
    }

    pub fn dst(&self) -> &SetFunctor {
        &self.dst
    }

    pub fn component(&self, x: usize) -> &FinFn {
        &self.components[x]
    }

    /// `self` first, then `b`.
    pub fn then(&self, b: &NatTrans) -> Result<NatTrans> {
        if self.dst != b.src {
            return Err(mismatch("natural transformations are not composable"));
        }
        let components = self
            .components
            .iter()
            .zip(&b.components)
            .map(|(f, g)| f.then(g))
            .collect::<Result<_>>()?;
        Ok(NatTrans {
            src: self.src.clone(),
            dst: b.dst.clone(),
            components,
        })
    }

    /// Whiskering `α T : E∘T ⇒ F∘T`.
    pub fn whisker(&self, t: &CatFunctor) -> Result<NatTrans> {
        Ok(NatTrans {
            src: self.src.precompose(t)?,
            dst: self.dst.precompose(t)?,
            components: t.dom().objects().indices().map(|x| self.components[t.obj(x)].clone()).collect(),
        })
    }
}

impl fmt::Debug for NatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NatTrans")
            .field("src", &self.src)
            .field("dst", &self.dst)
            .field("components", &self.components)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonadLawViolation {
    UnitNaturality { morphism: String },
    MultiplicationNaturality { morphism: String },
    LeftUnit { object: String },
    RightUnit { object: String },
    Associativity { object: String },
}

impl fmt::Display for MonadLawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadLawViolation::UnitNaturality { morphism } => write!(f, "η not natural at {morphism}"),
            MonadLawViolation::MultiplicationNaturality { morphism } => write!(f, "μ not natural at {morphism}"),
            MonadLawViolation::LeftUnit { object } => write!(f, "μ ∘ ηT ≠ id at {object}"),
            MonadLawViolation::RightUnit { object } => write!(f, "μ ∘ Tη ≠ id at {object}"),
            MonadLawViolation::Associativity { object } => write!(f, "μ ∘ Tμ ≠ μ ∘ μT at {object}"),
        }
    }
}

/// A monad `(T, η, μ)` on a finite category: `eta[c] : c → Tc`,
/// `mu[c] : TTc → Tc`, given as morphisms of `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatMonadCell {
    t: CatFunctor,
    eta: Vec<usize>,
    mu: Vec<usize>,
}

pub fn check_monad_laws(m: &CatMonadCell) -> Verdict<MonadLawViolation> {
    let (t, c) = (&m.t, m.t.dom());
    let label = |f: usize| c.morphisms().label(f).to_string();
    let obj = |x: usize| c.objects().label(x).to_string();
    for f in c.morphisms().indices() {
        let (x, y) = (c.src(f), c.tgt(f));
        if c.comp(t.mor(f), m.eta[x]) != c.comp(m.eta[y], f) {
            return Verdict::Fails(MonadLawViolation::UnitNaturality { morphism: label(f) });
        }
        if c.comp(t.mor(f), m.mu[x]) != c.comp(m.mu[y], t.mor(t.mor(f))) {
            return Verdict::Fails(MonadLawViolation::MultiplicationNaturality { morphism: label(f) });
        }
    }
    for x in c.objects().indices() {
        let id = Some(c.id(t.obj(x)));
        if c.comp(m.mu[x], m.eta[t.obj(x)]) != id {
            return Verdict::Fails(MonadLawViolation::LeftUnit { object: obj(x) });
        }
        if c.comp(m.mu[x], t.mor(m.eta[x])) != id {
            return Verdict::Fails(MonadLawViolation::RightUnit { object: obj(x) });
        }
        if c.comp(m.mu[x], t.mor(m.mu[x])) != c.comp(m.mu[x], m.mu[t.obj(x)]) {
            return Verdict::Fails(MonadLawViolation::Associativity { object: obj(x) });
        }
    }
    Verdict::Holds
}

impl CatMonadCell {
    /// Checks typing; the monad laws are a separate verdict.
    pub fn new(t: CatFunctor, eta: Vec<usize>, mu: Vec<usize>) -> Result<Self> {
        let c = t.dom().clone();
        if t.cod() != &c {
            return Err(mismatch("a monad needs an endofunctor"));
        }
        if let Verdict::Fails(v) = crate::guitart::check_functor_laws(&t) {
            return Err(malformed(format!("`{}` is not a functor: {v}", t.name())));
        }
        let n = c.objects().len();
        if eta.len() != n || mu.len() != n {
            return Err(malformed("η and μ need one component per object"));
        }
        for x in c.objects().indices() {
            let bad = |f: usize, from: usize, to: usize| {
                f >= c.morphisms().len() || c.src(f) != from || c.tgt(f) != to
            };
            if bad(eta[x], x, t.obj(x)) || bad(mu[x], t.obj(t.obj(x)), t.obj(x)) {
                return Err(malformed(format!(
                    "η or μ at `{}` has the wrong type",
                    c.objects().label(x)
                )));
            }
        }
        Ok(CatMonadCell { t, eta, mu })
    }

    pub fn identity(c: &FinCat) -> Self {
        let ids: Vec<usize> = c.objects().indices().map(|x| c.id(x)).collect();
        CatMonadCell {
            t: CatFunctor::identity(c),
            eta: ids.clone(),
            mu: ids,
        }
    }

    pub fn functor(&self) -> &CatFunctor {
        &self.t
    }

    pub fn eta(&self, x: usize) -> usize {
        self.eta[x]
    }

    pub fn mu(&self, x: usize) -> usize {
        self.mu[x]
    }
}

/// `Ran_T O` with the data needed to evaluate its elements.
#[derive(Debug, Clone)]
pub struct RanExtension {
    t: CatFunctor,
    o: SetFunctor,
    functor: SetFunctor,
    /// Per object `c`: the slots `(x, f)` with `f : c → T x`.
    slots: Vec<Vec<(usize, usize)>>,
    /// Per object `c`: each natural family as one value per slot.
    families: Vec<Vec<Vec<usize>>>,
}

impl RanExtension {
    pub fn functor(&self) -> &SetFunctor {
        &self.functor
    }

    pub fn along(&self) -> &CatFunctor {
        &self.t
    }

    pub fn output(&self) -> &SetFunctor {
        &self.o
    }

    /// `α_x(f)` for the family with index `alpha` in `Ran(c)`.
    pub fn eval(&self, c: usize, alpha: usize, x: usize, f: usize) -> usize {
        let slot = self.slots[c]
            .iter()
            .position(|&s| s == (x, f))
            .expect("f must be a morphism c → T x");
        self.families[c][alpha][slot]
    }

    fn lookup(&self, c: usize, values: &[usize]) -> usize {
        self.families[c]
            .iter()
            .position(|v| v == values)
            .expect("natural families are closed under the induced maps")
    }

    /// The family at `c` given pointwise by `value(x, f)`.
    fn family(&self, c: usize, value: impl Fn(usize, usize) -> usize) -> usize {
        let values: Vec<usize> = self.slots[c].iter().map(|&(x, f)| value(x, f)).collect();
        self.lookup(c, &values)
    }

    /// `ε : Ran_T O ∘ T ⇒ O`, `ε_c(α) = α_c(id_{Tc})`.
    pub fn counit(&self) -> Result<NatTrans> {
        let c = self.t.dom();
        let src = self.functor.precompose(&self.t)?;
        let components = c
            .objects()
            .indices()
            .map(|x| {
                let tx = self.t.obj(x);
                FinFn::from_fn(src.sets[x].clone(), self.o.sets[x].clone(), |a| {
                    self.eval(tx, a, x, c.id(tx))
                })
            })
            .collect::<Result<_>>()?;
        NatTrans::new(src, self.o.clone(), components)
    }
}

fn candidate_count(radices: impl IntoIterator<Item = usize>, limit: u64, what: &str) -> Result<u64> {
    let mut total: u64 = 1;
    for r in radices {
        total = total.saturating_mul(r as u64);
        if total > limit {
            return Err(Error::Resource(format!("{what}: more than {limit} candidates")));
        }
    }
    Ok(total)
}

/// Mixed-radix counter; `false` once every combination has been visited.
fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// Pointwise right Kan extension of `o` along the endofunctor `t`, by
/// enumerating `∏_x O(x)^{C(c, T x)}` and keeping the natural families.
pub fn ran_along(t: &CatFunctor, o: &SetFunctor, limit: u64) -> Result<RanExtension> {
    let c = t.dom();
    if t.cod() != c || o.dom() != c {
        return Err(mismatch("Ran needs an endofunctor of the output functor's domain"));
    }
    let mut slots = Vec::new();
    let mut families = Vec::new();
    let mut sets = Vec::new();
    for a in c.objects().indices() {
        let here: Vec<(usize, usize)> = c
            .objects()
            .indices()
            .flat_map(|x| c.hom(a, t.obj(x)).into_iter().map(move |f| (x, f)))
            .collect();
        let radices: Vec<usize> = here.iter().map(|&(x, _)| o.sets[x].len()).collect();
        candidate_count(radices.iter().copied(), limit, "natural-family enumeration")?;
        let position: HashMap<(usize, usize), usize> = here.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut found = Vec::new();
        if radices.iter().all(|&r| r > 0) {
            let mut digits = vec![0; radices.len()];
            loop {
                // For h : x → y, α_y(T h ∘ f) = O(h)(α_x(f)).
                let natural = here.iter().enumerate().all(|(i, &(x, f))| {
                    c.morphisms_from(x).all(|h| {
                        let y = c.tgt(h);
                        let tf = c.comp(t.mor(h), f).expect("composable");
                        digits[position[&(y, tf)]] == o.maps[h].apply(digits[i])
                    })
                });
                if natural {
                    found.push(digits.clone());
                }
                if !advance(&mut digits, &radices) {
                    break;
                }
            }
        } else if radices.is_empty() {
            found.push(Vec::new());
        }
        let labels: Vec<String> = found
            .iter()
            .map(|vals| {
                let parts: Vec<String> = here
                    .iter()
                    .zip(vals)
                    .map(|(&(x, f), &v)| {
                        format!("{}:{}={}", c.objects().label(x), c.morphisms().label(f), o.sets[x].label(v))
                    })
                    .collect();
                format!("⟨{}⟩", parts.join(";"))
            })
            .collect();
        sets.push(FinSet::new(format!("Ran({})", c.objects().label(a)), labels)?);
        slots.push(here);
        families.push(found);
    }
    let mut ran = RanExtension {
        t: t.clone(),
        o: o.clone(),
        functor: SetFunctor::constant("", c, &FinSet::empty("")),
        slots,
        families,
    };
    // g : a → b acts by precomposition: (g·α)_x(f') = α_x(f' ∘ g).
    let maps = c
        .morphisms()
        .indices()
        .map(|g| {
            let (a, b) = (c.src(g), c.tgt(g));
            FinFn::from_fn(sets[a].clone(), sets[b].clone(), |alpha| {
                ran.family(b, |x, f2| ran.eval(a, alpha, x, c.comp(f2, g).expect("composable")))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ran.functor = SetFunctor::new(format!("Ran_{}{}", t.name(), o.name()), c.clone(), sets, maps)?;
    Ok(ran)
}

/// `(E, δ : E∘i ⇒ E, σ : E ⇒ O)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatMooreMachine {
    pub input: CatFunctor,
    pub delta: NatTrans,
    pub sigma: NatTrans,
}

/// `(E, δ : E∘i ⇒ E, σ : E∘i ⇒ O)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatMealyMachine {
    pub input: CatFunctor,
    pub delta: NatTrans,
    pub sigma: NatTrans,
}

fn check_delta_shape(i: &CatFunctor, delta: &NatTrans) -> Result<()> {
    if delta.src != delta.dst.precompose(i)? {
        return Err(mismatch("δ must go from E∘i to E"));
    }
    Ok(())
}

impl CatMooreMachine {
    pub fn new(input: CatFunctor, delta: NatTrans, sigma: NatTrans) -> Result<Self> {
        check_delta_shape(&input, &delta)?;
        if sigma.src != delta.dst {
            return Err(mismatch("σ must start at the state functor"));
        }
        Ok(CatMooreMachine { input, delta, sigma })
    }

    pub fn states(&self) -> &SetFunctor {
        &self.delta.dst
    }

    pub fn output(&self) -> &SetFunctor {
        &self.sigma.dst
    }
}

impl CatMealyMachine {
    pub fn new(input: CatFunctor, delta: NatTrans, sigma: NatTrans) -> Result<Self> {
        check_delta_shape(&input, &delta)?;
        if sigma.src != delta.src {
            return Err(mismatch("σ must start at the state functor precomposed with the input"));
        }
        Ok(CatMealyMachine { input, delta, sigma })
    }

    pub fn states(&self) -> &SetFunctor {
        &self.delta.dst
    }

    pub fn output(&self) -> &SetFunctor {
        &self.sigma.dst
    }
}

/// Whether `κ : i ⇒ T` (components `kappa[c] : i c → T c`) is natural.
pub fn check_comparison(i: &CatFunctor, t: &CatFunctor, kappa: &[usize]) -> Result<Verdict<String>> {
    let c = t.dom();
    if i.dom() != c || i.cod() != c || kappa.len() != c.objects().len() {
        return Err(mismatch("comparison κ does not match the category"));
    }
    for x in c.objects().indices() {
        let k = kappa[x];
        if k >= c.morphisms().len() || c.src(k) != i.obj(x) || c.tgt(k) != t.obj(x) {
            return Err(malformed(format!("κ at `{}` has the wrong type", c.objects().label(x))));
        }
    }
    Ok(Verdict::from_search(c.morphisms().indices().find_map(|h| {
        let (x, y) = (c.src(h), c.tgt(h));
        (c.comp(t.mor(h), kappa[x]) != c.comp(kappa[y], i.mor(h))).then(|| c.morphisms().label(h).to_string())
    })))
}

/// The machines carried by `Ran_T O`:
/// Moore `σ_c(α) = α_c(η_c)`, Mealy `σ_c(α) = α_c(κ_c)`, and in both
/// `δ_c(α)_x(f) = α_x(μ_x ∘ T f ∘ κ_c)`.
pub fn build_machine_from_monad(
    monad: &CatMonadCell,
    o: &SetFunctor,
    i: &CatFunctor,
    kappa: &[usize],
    limit: u64,
) -> Result<(RanExtension, CatMooreMachine, CatMealyMachine)> {
    if let Verdict::Fails(v) = check_monad_laws(monad) {
        return Err(Error::Precondition(format!("monad laws fail: {v}")));
    }
    if let Verdict::Fails(h) = check_comparison(i, &monad.t, kappa)? {
        return Err(Error::Precondition(format!("κ is not natural at {h}")));
    }
    let t = &monad.t;
    let c = t.dom();
    let ran = ran_along(t, o, limit)?;
    let e = ran.functor.clone();
    let ei = e.precompose(i)?;
    let comp = |g: usize, f: usize| c.comp(g, f).expect("composable");

    let delta = c
        .objects()
        .indices()
        .map(|a| {
            FinFn::from_fn(ei.sets[a].clone(), e.sets[a].clone(), |alpha| {
                ran.family(a, |x, f| {
                    let route = comp(comp(monad.mu[x], t.mor(f)), kappa[a]);
                    ran.eval(i.obj(a), alpha, x, route)
                })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = NatTrans::new(ei.clone(), e.clone(), delta)
        .map_err(|err| Error::Precondition(format!("δ: {err}")))?;

    let moore_sigma = c
        .objects()
        .indices()
        .map(|a| FinFn::from_fn(e.sets[a].clone(), o.sets[a].clone(), |alpha| ran.eval(a, alpha, a, monad.eta[a])))
        .collect::<Result<Vec<_>>>()?;
    let moore_sigma = NatTrans::new(e.clone(), o.clone(), moore_sigma)
        .map_err(|err| Error::Precondition(format!("Moore σ: {err}")))?;

    let mealy_sigma = c
        .objects()
        .indices()
        .map(|a| FinFn::from_fn(ei.sets[a].clone(), o.sets[a].clone(), |alpha| ran.eval(i.obj(a), alpha, a, kappa[a])))
        .collect::<Result<Vec<_>>>()?;
    let mealy_sigma = NatTrans::new(ei, o.clone(), mealy_sigma)
        .map_err(|err| Error::Precondition(format!("Mealy σ: {err}")))?;

    let moore = CatMooreMachine::new(i.clone(), delta.clone(), moore_sigma)?;
    let mealy = CatMealyMachine::new(i.clone(), delta, mealy_sigma)?;
    Ok((ran, moore, mealy))
}

/// `δ ∘ Eη = id` and `δ ∘ Eμ = δ ∘ δT`, for a machine whose input is `T`.
pub fn check_module_laws(m: &CatMooreMachine, monad: &CatMonadCell) -> Result<Verdict<String>> {
    if m.input != monad.t {
        return Err(mismatch("module laws need the monad's functor as input"));
    }
    let c = monad.t.dom();
    let e = m.states();
    let t = &monad.t;
    for x in c.objects().indices() {
        let d = &m.delta.components[x];
        for u in e.sets[x].indices() {
            if d.apply(e.maps[monad.eta[x]].apply(u)) != u {
                return Ok(Verdict::Fails(format!("unit at {}", c.objects().label(x))));
            }
        }
        let dt = &m.delta.components[t.obj(x)];
        for u in e.sets[t.obj(t.obj(x))].indices() {
            if d.apply(e.maps[monad.mu[x]].apply(u)) != d.apply(dt.apply(u)) {
                return Ok(Verdict::Fails(format!("associativity at {}", c.objects().label(x))));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Every natural transformation `src ⇒ dst`, in mixed-radix order over
/// the components (object-major).
pub fn enumerate_nat_trans(src: &SetFunctor, dst: &SetFunctor, limit: u64) -> Result<Vec<NatTrans>> {
    if src.dom != dst.dom {
        return Err(mismatch("functors on different categories"));
    }
    let c = &src.dom;
    let cells: Vec<(usize, usize)> = c
        .objects()
        .indices()
        .flat_map(|x| src.sets[x].indices().map(move |u| (x, u)))
        .collect();
    let radices: Vec<usize> = cells.iter().map(|&(x, _)| dst.sets[x].len()).collect();
    candidate_count(radices.iter().copied(), limit, "natural-transformation enumeration")?;
    if radices.iter().any(|&r| r == 0) {
        return Ok(Vec::new());
    }
    let offsets: Vec<usize> = c
        .objects()
        .indices()
        .scan(0, |acc, x| {
            let here = *acc;
            *acc += src.sets[x].len();
            Some(here)
        })
        .collect();
    let mut out = Vec::new();
    let mut digits = vec![0; radices.len()];
    loop {
        let natural = c.morphisms().indices().all(|f| {
            let (x, y) = (c.src(f), c.tgt(f));
            src.sets[x].indices().all(|u| {
                dst.maps[f].apply(digits[offsets[x] + u]) == digits[offsets[y] + src.maps[f].apply(u)]
            })
        });
        if natural {
            let components = c
                .objects()
                .indices()
                .map(|x| {
                    let n = src.sets[x].len();
                    FinFn::new(src.sets[x].clone(), dst.sets[x].clone(), digits[offsets[x]..offsets[x] + n].to_vec())
                })
                .collect::<Result<_>>()?;
            out.push(NatTrans::unchecked(src.clone(), dst.clone(), components)?);
        }
        if !advance(&mut digits, &radices) {
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalOutcome {
    UniqueMediator(NatTrans),
    NoMediator,
    Multiple(usize),
}

impl UniversalOutcome {
    pub fn is_unique(&self) -> bool {
        matches!(self, UniversalOutcome::UniqueMediator(_))
    }

    fn from_matches(mut found: Vec<NatTrans>) -> Self {
        match found.len() {
            0 => UniversalOutcome::NoMediator,
            1 => UniversalOutcome::UniqueMediator(found.pop().expect("one")),
            n => UniversalOutcome::Multiple(n),
        }
    }
}

impl fmt::Display for UniversalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniversalOutcome::UniqueMediator(_) => write!(f, "unique mediator"),
            UniversalOutcome::NoMediator => write!(f, "no mediator"),
            UniversalOutcome::Multiple(n) => write!(f, "{n} mediators"),
        }
    }
}

/// Counts `φ : E ⇒ Ran_T O` with `ε ∘ φT = γ` for `γ : E∘T ⇒ O`.
pub fn check_ran_universal_property(
    t: &CatFunctor,
    o: &SetFunctor,
    e: &SetFunctor,
    gamma: &NatTrans,
    limit: u64,
) -> Result<UniversalOutcome> {
    if gamma.src != e.precompose(t)? || &gamma.dst != o {
        return Err(mismatch("γ must go from E∘T to O"));
    }
    let ran = ran_along(t, o, limit)?;
    let eps = ran.counit()?;
    let mut matches = Vec::new();
    for phi in enumerate_nat_trans(e, &ran.functor, limit)? {
        if phi.whisker(t)?.then(&eps)? == *gamma {
            matches.push(phi);
        }
    }
    Ok(UniversalOutcome::from_matches(matches))
}

/// Counts machine morphisms `φ : candidate → terminal` (natural, commuting
/// with `δ` and with `σ`).
pub fn count_moore_mediators(
    candidate: &CatMooreMachine,
    terminal: &CatMooreMachine,
    limit: u64,
) -> Result<UniversalOutcome> {
    if candidate.input != terminal.input || candidate.output() != terminal.output() {
        return Err(mismatch("machines have different input or output"));
    }
    let i = &candidate.input;
    let mut matches = Vec::new();
    for phi in enumerate_nat_trans(candidate.states(), terminal.states(), limit)? {
        let keeps_output = phi.then(&terminal.sigma)? == candidate.sigma;
        let keeps_transition = candidate.delta.then(&phi)? == phi.whisker(i)?.then(&terminal.delta)?;
        if keeps_output && keeps_transition {
            matches.push(phi);
        }
    }
    Ok(UniversalOutcome::from_matches(matches))
}
