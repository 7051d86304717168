//! Intertwiners between Mealy machines over different alphabets, and the
//! 2-cells between parallel intertwiners.
//!
//! An intertwiner from `(E, d, s)` over `(I, O)` to `(E', d', s')` over
//! `(I', O')` is a pair of sets `U, V` with maps
//! `ι : I'×U → U×I`, `ε : E'×U → V×E`, `ω : O'×U → V×O` such that, for all
//! `(e', i', u)` with `ι(i', u) = (u₁, i)` and `ε(e', u₁) = (v, e)`,
//!
//! - `ε(d'(e', i'), u) = (v, d(e, i))`
//! - `ω(s'(e', i'), u) = (v, s(e, i))`

use std::fmt;

use crate::error::{malformed, mismatch};
use crate::finset::{pair_index, product_set, FinFn, FinSet};
use crate::machines::{Equation, MealyMachine};
use crate::{Result, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intertwiner {
    src: MealyMachine,
    dst: MealyMachine,
    u: FinSet,
    v: FinSet,
    iota: FinFn,
    eps: FinFn,
    omega: FinFn,
}

fn expect_type(name: &str, f: &FinFn, dom: &FinSet, cod: &FinSet) -> Result<()> {
    if f.dom() != dom || f.cod() != cod {
        return Err(malformed(format!(
            "{name} must go {} → {}",
            dom.name(),
            cod.name()
        )));
    }
    Ok(())
}

impl Intertwiner {
    /// `src` is `(E, d, s)`, `dst` is `(E', d', s')`.
    pub fn new(
        src: MealyMachine,
        dst: MealyMachine,
        u: FinSet,
        v: FinSet,
        iota: FinFn,
        eps: FinFn,
        omega: FinFn,
    ) -> Result<Self> {
        expect_type("ι", &iota, &product_set(dst.input(), &u), &product_set(&u, src.input()))?;
        expect_type("ε", &eps, &product_set(dst.states(), &u), &product_set(&v, src.states()))?;
        expect_type("ω", &omega, &product_set(dst.output(), &u), &product_set(&v, src.output()))?;
        Ok(Intertwiner {
            src,
            dst,
            u,
            v,
            iota,
            eps,
            omega,
        })
    }

    /// Builds the three maps from functions returning index pairs.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        src: MealyMachine,
        dst: MealyMachine,
        u: FinSet,
        v: FinSet,
        iota: impl Fn(usize, usize) -> (usize, usize),
        eps: impl Fn(usize, usize) -> (usize, usize),
        omega: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<Self> {
        // `x × U → w × y`
        let fun = |x: &FinSet, w: &FinSet, y: &FinSet, f: &dyn Fn(usize, usize) -> (usize, usize)| -> Result<FinFn> {
            let table = x
                .indices()
                .flat_map(|a| u.indices().map(move |b| (a, b)))
                .map(|(a, b)| {
                    let (p, q) = f(a, b);
                    pair_index(p, q, y.len())
                })
                .collect();
            FinFn::new(product_set(x, &u), product_set(w, y), table)
        };
        let iota = fun(dst.input(), &u, src.input(), &iota)?;
        let eps = fun(dst.states(), &v, src.states(), &eps)?;
        let omega = fun(dst.output(), &v, src.output(), &omega)?;
        Ok(Intertwiner {
            src,
            dst,
            u,
            v,
            iota,
            eps,
            omega,
        })
    }

    /// `U = V = {*}` and identity structure maps.
    pub fn identity(m: &MealyMachine) -> Self {
        let one = FinSet::singleton("1", "*");
        Self::from_fns(
            m.clone(),
            m.clone(),
            one.clone(),
            one,
            |i, _| (0, i),
            |e, _| (0, e),
            |o, _| (0, o),
        )
        .expect("identity intertwiner")
    }

    /// The intertwiner induced by a state map `f : E → F` between machines
    /// `from` and `to` over the same alphabets: it runs from `to` to `from`
    /// with `ε(e, *) = (*, f(e))` and `ι`, `ω` trivial. It satisfies the
    /// equations exactly when `f` is a machine morphism `from → to`.
    pub fn from_morphism(f: &FinFn, from: &MealyMachine, to: &MealyMachine) -> Result<Self> {
        if f.dom() != from.states() || f.cod() != to.states() {
            return Err(mismatch("state map does not go between the machines"));
        }
        if from.input() != to.input() || from.output() != to.output() {
            return Err(mismatch("machines have different alphabets"));
        }
        let one = FinSet::singleton("1", "*");
        Self::from_fns(
            to.clone(),
            from.clone(),
            one.clone(),
            one,
            |i, _| (0, i),
            |e, _| (0, f.apply(e)),
            |o, _| (0, o),
        )
    }

    pub fn src(&self) -> &MealyMachine {
        &self.src
    }

    pub fn dst(&self) -> &MealyMachine {
        &self.dst
    }

    pub fn u(&self) -> &FinSet {
        &self.u
    }

    pub fn v(&self) -> &FinSet {
        &self.v
    }

    pub fn iota_map(&self) -> &FinFn {
        &self.iota
    }

    pub fn eps_map(&self) -> &FinFn {
        &self.eps
    }

    pub fn omega_map(&self) -> &FinFn {
        &self.omega
    }

    fn split(k: usize, w: usize) -> (usize, usize) {
        (k / w, k % w)
    }

    /// `ι(i', u) = (u₁, i)`.
    pub fn iota(&self, i2: usize, u: usize) -> (usize, usize) {
        Self::split(self.iota.apply(pair_index(i2, u, self.u.len())), self.src.input().len())
    }

    /// `ε(e', u) = (v, e)`.
    pub fn eps(&self, e2: usize, u: usize) -> (usize, usize) {
        Self::split(self.eps.apply(pair_index(e2, u, self.u.len())), self.src.states().len())
    }

    /// `ω(o', u) = (v, o)`.
    pub fn omega(&self, o2: usize, u: usize) -> (usize, usize) {
        Self::split(self.omega.apply(pair_index(o2, u, self.u.len())), self.src.output().len())
    }
}

/// A point `(e', i', u)` where one of the two equations fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinerViolation {
    pub state: String,
    pub letter: String,
    pub u: String,
    pub equation: Equation,
}

impl fmt::Display for IntertwinerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} equation fails at ({},{},{})",
            self.equation, self.state, self.letter, self.u
        )
    }
}

pub fn check_intertwiner(it: &Intertwiner) -> Verdict<IntertwinerViolation> {
    let (m, m2) = (&it.src, &it.dst);
    for e2 in m2.states().indices() {
        for i2 in m2.input().indices() {
            for u in it.u.indices() {
                let (u1, i) = it.iota(i2, u);
                let (v, e) = it.eps(e2, u1);
                let equation = if it.eps(m2.d(e2, i2), u) != (v, m.d(e, i)) {
                    Some(Equation::Transition)
                } else if it.omega(m2.s(e2, i2), u) != (v, m.s(e, i)) {
                    Some(Equation::Output)
                } else {
                    None
                };
                if let Some(equation) = equation {
                    return Verdict::Fails(IntertwinerViolation {
                        state: m2.states().label(e2).into(),
                        letter: m2.input().label(i2).into(),
                        u: it.u.label(u).into(),
                        equation,
                    });
                }
            }
        }
    }
    Verdict::Holds
}

/// Pasting: `it1` from `m` to `m'`, `it2` from `m'` to `m''`, giving an
/// intertwiner from `m` to `m''` with `U = U₂×U₁`, `V = V₂×V₁`.
pub fn compose_intertwiners(it2: &Intertwiner, it1: &Intertwiner) -> Result<Intertwiner> {
    if it1.dst != it2.src {
        return Err(mismatch("the middle machines of the intertwiners differ"));
    }
    let u = product_set(&it2.u, &it1.u);
    let v = product_set(&it2.v, &it1.v);
    let (w1, wv1) = (it1.u.len(), it1.v.len());
    Intertwiner::from_fns(
        it1.src.clone(),
        it2.dst.clone(),
        u,
        v,
        |i3, uu| {
            let (u2, u1) = (uu / w1, uu % w1);
            let (u2b, i2) = it2.iota(i3, u2);
            let (u1b, i1) = it1.iota(i2, u1);
            (pair_index(u2b, u1b, w1), i1)
        },
        |e3, uu| {
            let (u2, u1) = (uu / w1, uu % w1);
            let (v2, e2) = it2.eps(e3, u2);
            let (v1, e1) = it1.eps(e2, u1);
            (pair_index(v2, v1, wv1), e1)
        },
        |o3, uu| {
            let (u2, u1) = (uu / w1, uu % w1);
            let (v2, o2) = it2.omega(o3, u2);
            let (v1, o1) = it1.omega(o2, u1);
            (pair_index(v2, v1, wv1), o1)
        },
    )
}

/// `(f, g) : (U, V) ⇒ (U', V')` between parallel intertwiners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinerTwoCell {
    pub src: Intertwiner,
    pub dst: Intertwiner,
    pub f: FinFn,
    pub g: FinFn,
}

impl IntertwinerTwoCell {
    pub fn new(src: Intertwiner, dst: Intertwiner, f: FinFn, g: FinFn) -> Result<Self> {
        if src.src != dst.src || src.dst != dst.dst {
            return Err(mismatch("2-cell endpoints are not parallel intertwiners"));
        }
        if f.dom() != &src.u || f.cod() != &dst.u || g.dom() != &src.v || g.cod() != &dst.v {
            return Err(mismatch("2-cell maps do not go U → U' and V → V'"));
        }
        Ok(IntertwinerTwoCell { src, dst, f, g })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Square {
    Iota,
    Epsilon,
    Omega,
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Square::Iota => "ι",
            Square::Epsilon => "ε",
            Square::Omega => "ω",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareViolation {
    pub square: Square,
    pub at: String,
    pub u: String,
}

impl fmt::Display for SquareViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} square fails at ({},{})", self.square, self.at, self.u)
    }
}

/// `ι'(i', f u) = (f × I) ι(i', u)`, `ε'(e', f u) = (g × E) ε(e', u)`,
/// `ω'(o', f u) = (g × O) ω(o', u)`.
pub fn check_two_cell(tc: &IntertwinerTwoCell) -> Verdict<SquareViolation> {
    let (a, b, f, g) = (&tc.src, &tc.dst, &tc.f, &tc.g);
    let m2 = &a.dst;
    let fail = |square, set: &FinSet, x: usize, u: usize| {
        Verdict::Fails(SquareViolation {
            square,
            at: set.label(x).into(),
            u: a.u.label(u).into(),
        })
    };
    for u in a.u.indices() {
        for i2 in m2.input().indices() {
            let (u1, i) = a.iota(i2, u);
            if b.iota(i2, f.apply(u)) != (f.apply(u1), i) {
                return fail(Square::Iota, m2.input(), i2, u);
            }
        }
        for e2 in m2.states().indices() {
            let (v, e) = a.eps(e2, u);
            if b.eps(e2, f.apply(u)) != (g.apply(v), e) {
                return fail(Square::Epsilon, m2.states(), e2, u);
            }
        }
        for o2 in m2.output().indices() {
            let (v, o) = a.omega(o2, u);
            if b.omega(o2, f.apply(u)) != (g.apply(v), o) {
                return fail(Square::Omega, m2.output(), o2, u);
            }
        }
    }
    Verdict::Holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::check_machine_morphism;

    fn bits() -> FinSet {
        FinSet::range("B", 2)
    }

    fn xor() -> MealyMachine {
        MealyMachine::from_fns("xor", bits(), bits(), bits(), |p, x| p ^ x, |p, x| p ^ x).unwrap()
    }

    fn ident() -> MealyMachine {
        MealyMachine::identity(&bits())
    }

    #[test]
    fn identity_validates() {
        assert!(check_intertwiner(&Intertwiner::identity(&xor())).holds());
    }

    #[test]
    fn morphism_induced() {
        let f = FinFn::from_fn(xor().states().clone(), ident().states().clone(), |_| 0).unwrap();
        let it = Intertwiner::from_morphism(&f, &xor(), &ident()).unwrap();
        assert!(!check_machine_morphism(&f, &xor(), &ident()).unwrap().holds());
        assert_eq!(
            check_intertwiner(&it),
            Verdict::Fails(IntertwinerViolation {
                state: "1".into(),
                letter: "0".into(),
                u: "*".into(),
                equation: Equation::Output
            })
        );
        let id = FinFn::identity(xor().states());
        assert!(check_intertwiner(&Intertwiner::from_morphism(&id, &xor(), &xor()).unwrap()).holds());
    }

    #[test]
    fn identity_two_cell() {
        let it = Intertwiner::identity(&xor());
        let tc = IntertwinerTwoCell::new(it.clone(), it.clone(), FinFn::identity(it.u()), FinFn::identity(it.v())).unwrap();
        assert!(check_two_cell(&tc).holds());
    }

    #[test]
    fn collapse_two_cell_on_constant_maps() {
        // Trivial one-state machine over {*}; every structure map constant.
        let one = FinSet::singleton("1", "*");
        let m = MealyMachine::identity(&one);
        let u = FinSet::range("U", 2);
        let a = Intertwiner::from_fns(m.clone(), m.clone(), u.clone(), one.clone(), |_, _| (0, 0), |_, _| (0, 0), |_, _| (0, 0))
            .unwrap();
        let b = Intertwiner::from_fns(m.clone(), m, one.clone(), one.clone(), |_, _| (0, 0), |_, _| (0, 0), |_, _| (0, 0))
            .unwrap();
        let f = FinFn::from_fn(u, one.clone(), |_| 0).unwrap();
        let tc = IntertwinerTwoCell::new(a, b, f, FinFn::identity(&one)).unwrap();
        assert!(check_two_cell(&tc).holds());
    }

    #[test]
    fn broken_g_is_named() {
        let m = xor();
        let v = FinSet::range("V", 2);
        let one = FinSet::singleton("1", "*");
        let it = Intertwiner::from_fns(m.clone(), m, one.clone(), v.clone(), |i, _| (0, i), |e, _| (0, e), |o, _| (0, o))
            .unwrap();
        let swap = FinFn::from_fn(v.clone(), v, |x| 1 - x).unwrap();
        let tc = IntertwinerTwoCell::new(it.clone(), it, FinFn::identity(&one), swap).unwrap();
        assert_eq!(
            check_two_cell(&tc).counterexample().map(|c| c.square),
            Some(Square::Epsilon)
        );
    }

    #[test]
    fn pasting_identities() {
        let id = Intertwiner::identity(&xor());
        let c = compose_intertwiners(&id, &id).unwrap();
        assert!(check_intertwiner(&c).holds());
        assert_eq!(c.u().len(), 1);
    }

    #[test]
    fn pasting_needs_matching_middle() {
        let a = Intertwiner::identity(&xor());
        let b = Intertwiner::identity(&ident());
        assert!(compose_intertwiners(&a, &b).is_err());
    }
}
