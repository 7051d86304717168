//! Finite sets, total functions between them, words, and finite monoids.
//!
//! Elements are string labels. Internally every element is addressed by its
//! position in declaration order, and all "first counterexample" searches in
//! the crate iterate in that order.

use std::collections::HashMap;
use std::fmt;
use std::cell::RefCell;
use std::sync::{Arc, OnceLock, Weak};

use crate::error::{malformed, mismatch};
use crate::{Result, Verdict};

#[derive(Debug)]
struct SetData {
    name: String,
    elements: Vec<String>,
    /// Built eagerly by `new`, lazily for sets whose labels are distinct by
    /// construction.
    index: OnceLock<HashMap<String, usize>>,
}

/// A finite set of distinct labels with a fixed iteration order.
///
/// Cloning is cheap. Two sets are equal when they list the same labels in
/// the same order; the name is informational.
#[derive(Clone)]
pub struct FinSet(Arc<SetData>);

impl FinSet {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        elements: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let name = name.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(malformed(format!("duplicate element `{e}` in set `{name}`")));
            }
        }
        Ok(FinSet(Arc::new(SetData {
            name,
            elements,
            index: OnceLock::from(index),
        })))
    }

    fn from_distinct(name: String, elements: Vec<String>) -> Self {
        FinSet(Arc::new(SetData {
            name,
            elements,
            index: OnceLock::new(),
        }))
    }

    /// Set `{0, 1, ..., n-1}` with decimal labels.
    pub fn range(name: impl Into<String>, n: usize) -> Self {
        Self::new(name, (0..n).map(|i| i.to_string())).expect("decimal labels are distinct")
    }

    pub fn singleton(name: impl Into<String>, label: impl Into<String>) -> Self {
        Self::new(name, [label.into()]).expect("one label")
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self::new(name, Vec::<String>::new()).expect("no labels")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.0.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0
            .index
            .get_or_init(|| self.0.elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect())
            .get(label)
            .copied()
    }

    /// Like [`FinSet::index_of`] but reports unknown labels as malformed input.
    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| malformed(format!("`{label}` is not an element of `{}`", self.name())))
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        FinSet(Arc::new(SetData {
            name: name.into(),
            elements: self.0.elements.clone(),
            index: self.0.index.clone(),
        }))
    }

    /// All subsets, indexed by bitmask: subset `k` contains element `i` iff
    /// bit `i` of `k` is set. Labels look like `{a,b}`.
    pub fn powerset(&self) -> FinSet {
        assert!(self.len() < usize::BITS as usize, "powerset too large");
        let labels = (0..1usize << self.len()).map(|mask| subset_label(self, mask));
        FinSet::new(format!("P({})", self.name()), labels).expect("subset labels are distinct")
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elements == other.0.elements
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name(), self.elements())
    }
}

/// Label for a pair. Components that themselves contain `|` are
/// parenthesised so nested products stay unambiguous.
pub fn pair_label(left: &str, right: &str) -> String {
    fn wrap(s: &str) -> std::borrow::Cow<'_, str> {
        if s.contains('|') {
            format!("({s})").into()
        } else {
            s.into()
        }
    }
    format!("{}|{}", wrap(left), wrap(right))
}

pub fn subset_label(set: &FinSet, mask: usize) -> String {
    let inner: Vec<&str> = set
        .indices()
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| set.label(i))
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// Cartesian product; pair `(i, j)` sits at index `i * |y| + j`.
///
/// Products are memoised per thread by the identity of their factors, so
/// repeated products of the same sets share one allocation.
pub fn product_set(x: &FinSet, y: &FinSet) -> FinSet {
    type Entry = (Weak<SetData>, Weak<SetData>, FinSet);
    thread_local! {
        static PRODUCTS: RefCell<HashMap<(usize, usize), Entry>> = RefCell::new(HashMap::new());
    }
    let key = (Arc::as_ptr(&x.0) as usize, Arc::as_ptr(&y.0) as usize);
    let live = |(wx, wy, _): &Entry| {
        wx.upgrade().is_some_and(|a| Arc::ptr_eq(&a, &x.0)) && wy.upgrade().is_some_and(|b| Arc::ptr_eq(&b, &y.0))
    };
    if let Some(hit) = PRODUCTS.with(|c| c.borrow().get(&key).filter(|e| live(e)).map(|e| e.2.clone())) {
        return hit;
    }
    let mut labels = Vec::with_capacity(x.len() * y.len());
    for a in x.elements() {
        for b in y.elements() {
            labels.push(pair_label(a, b));
        }
    }
    let product = FinSet::from_distinct(format!("{}×{}", x.name(), y.name()), labels);
    PRODUCTS.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= 4096 {
            c.retain(|_, e| e.0.strong_count() > 0 && e.1.strong_count() > 0);
        }
        if c.len() < 4096 {
            c.insert(key, (Arc::downgrade(&x.0), Arc::downgrade(&y.0), product.clone()));
        }
    });
    product
}

/// Index of the pair `(i, j)` inside `product_set(x, y)` when `|y| = width`.
#[inline]
pub fn pair_index(i: usize, j: usize, width: usize) -> usize {
    i * width + j
}

/// A total function between finite sets, stored as a lookup table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinFn {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(malformed(format!(
                "function table has {} entries but domain `{}` has {} elements",
                table.len(),
                dom.name(),
                dom.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= cod.len()) {
            return Err(malformed(format!(
                "function value {bad} lies outside codomain `{}`",
                cod.name()
            )));
        }
        Ok(FinFn { dom, cod, table })
    }

    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(usize) -> usize) -> Result<Self> {
        let table = dom.indices().map(f).collect();
        Self::new(dom, cod, table)
    }

    /// Builds a function from `(argument, value)` label pairs; every domain
    /// element must be mapped exactly once.
    pub fn from_labels<'a>(
        dom: FinSet,
        cod: FinSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut table = vec![None; dom.len()];
        for (a, b) in pairs {
            let i = dom.require(a)?;
            let j = cod.require(b)?;
            if table[i].replace(j).is_some() {
                return Err(malformed(format!("`{a}` is mapped twice")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| malformed(format!("`{}` is not mapped", dom.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dom, cod, table)
    }

    pub fn identity(set: &FinSet) -> Self {
        FinFn {
            dom: set.clone(),
            cod: set.clone(),
            table: set.indices().collect(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn apply_label(&self, x: &str) -> Result<&str> {
        Ok(self.cod.label(self.apply(self.dom.require(x)?)))
    }

    /// `g ∘ f`, with `f` applied first.
    pub fn then(&self, g: &FinFn) -> Result<FinFn> {
        if self.cod != g.dom {
            return Err(mismatch(format!(
                "cannot compose: codomain `{}` differs from domain `{}`",
                self.cod.name(),
                g.dom.name()
            )));
        }
        Ok(FinFn {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            table: self.table.iter().map(|&x| g.table[x]).collect(),
        })
    }

    /// `self × other` on the product sets.
    pub fn product(&self, other: &FinFn) -> FinFn {
        let dom = product_set(&self.dom, &other.dom);
        let cod = product_set(&self.cod, &other.cod);
        let w = other.cod.len();
        let mut table = Vec::with_capacity(dom.len());
        for &a in &self.table {
            for &b in &other.table {
                table.push(pair_index(a, b, w));
            }
        }
        FinFn { dom, cod, table }
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom.len() != self.cod.len() {
            return false;
        }
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, &v) in self.table.iter().enumerate() {
            m.entry(&self.dom.label(i), &self.cod.label(v));
        }
        m.finish()
    }
}

/// A finite sequence of letters from an alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct Word {
    alphabet: FinSet,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(alphabet: FinSet, letters: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l >= alphabet.len()) {
            return Err(malformed(format!(
                "letter index {bad} outside alphabet `{}`",
                alphabet.name()
            )));
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: FinSet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn from_labels<S: AsRef<str>>(
        alphabet: FinSet,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let letters = labels
            .into_iter()
            .map(|l| alphabet.require(l.as_ref()))
            .collect::<Result<_>>()?;
        Ok(Word { alphabet, letters })
    }

    pub fn alphabet(&self) -> &FinSet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.letters.iter().map(|&l| self.alphabet.label(l)).collect()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.labels())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_letters(self.alphabet(), self.letters()))
    }
}

/// Renders a word compactly: letters are juxtaposed when every label in the
/// alphabet is a single character, comma separated otherwise.
pub fn render_letters(alphabet: &FinSet, letters: &[usize]) -> String {
    let short = alphabet.elements().iter().all(|l| l.chars().count() == 1);
    let parts: Vec<&str> = letters.iter().map(|&l| alphabet.label(l)).collect();
    if short {
        parts.concat()
    } else {
        format!("[{}]", parts.join(","))
    }
}

/// Multiplication of the free monoid.
pub fn word_concat(u: &Word, v: &Word) -> Result<Word> {
    if u.alphabet != v.alphabet {
        return Err(mismatch(format!(
            "cannot concatenate words over `{}` and `{}`",
            u.alphabet.name(),
            v.alphabet.name()
        )));
    }
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters);
    Ok(Word {
        alphabet: u.alphabet.clone(),
        letters,
    })
}

/// Every word of length at most `bound` over `alphabet_size` letters, in
/// canonical order: by length, then lexicographically by letter index.
pub fn words_up_to(alphabet_size: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::with_capacity(layer.len() * alphabet_size);
        for w in &layer {
            for a in 0..alphabet_size {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
        if alphabet_size == 0 {
            break;
        }
    }
    out
}

/// The free monoid `A*` on a finite set of generators, never materialised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMonoidHandle {
    generators: FinSet,
}

impl FreeMonoidHandle {
    pub fn new(generators: FinSet) -> Self {
        FreeMonoidHandle { generators }
    }

    pub fn generators(&self) -> &FinSet {
        &self.generators
    }

    pub fn unit(&self) -> Word {
        Word::empty(self.generators.clone())
    }

    pub fn mul(&self, u: &Word, v: &Word) -> Result<Word> {
        word_concat(u, v)
    }
}

/// A finite monoid given by its multiplication table.
///
/// Construction only checks that the table is total and typed; the monoid
/// laws are checked by [`check_monoid_laws`].
#[derive(Clone, PartialEq, Eq)]
pub struct FinMonoid {
    carrier: FinSet,
    unit: usize,
    table: Vec<usize>,
}

/// First failure found by [`check_monoid_laws`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonoidLawViolation {
    LeftUnit { x: String },
    RightUnit { x: String },
    Associativity { x: String, y: String, z: String },
}

impl fmt::Display for MonoidLawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidLawViolation::LeftUnit { x } => write!(f, "left unit law fails at {x}"),
            MonoidLawViolation::RightUnit { x } => write!(f, "right unit law fails at {x}"),
            MonoidLawViolation::Associativity { x, y, z } => {
                write!(f, "associativity fails at ({x},{y},{z})")
            }
        }
    }
}

impl FinMonoid {
    /// `table[x * n + y]` is `x · y`.
    pub fn new(carrier: FinSet, unit: usize, table: Vec<usize>) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(malformed("monoid carrier must be nonempty"));
        }
        if unit >= n {
            return Err(malformed("monoid unit lies outside the carrier"));
        }
        if table.len() != n * n {
            return Err(malformed(format!(
                "multiplication table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if table.iter().any(|&v| v >= n) {
            return Err(malformed("multiplication table leaves the carrier"));
        }
        Ok(FinMonoid {
            carrier,
            unit,
            table,
        })
    }

    /// Builds a monoid from a possibly partial list of products; missing
    /// entries are malformed input.
    pub fn from_entries(
        carrier: FinSet,
        unit: &str,
        entries: impl IntoIterator<Item = ((usize, usize), usize)>,
    ) -> Result<Self> {
        let n = carrier.len();
        let unit = carrier.require(unit)?;
        let mut table = vec![None; n * n];
        for ((x, y), z) in entries {
            if x >= n || y >= n || z >= n {
                return Err(malformed("multiplication entry outside the carrier"));
            }
            table[x * n + y] = Some(z);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    malformed(format!(
                        "multiplication table not total: {}·{} is undefined",
                        carrier.label(k / n),
                        carrier.label(k % n)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(carrier, unit, table)
    }

    pub fn from_fn(carrier: FinSet, unit: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = carrier.len();
        let table = (0..n * n).map(|k| mul(k / n, k % n)).collect();
        Self::new(carrier, unit, table)
    }

    /// `Z/n` under addition, labels `0..n`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(FinSet::range(format!("Z{n}"), n), 0, |x, y| (x + y) % n)
            .expect("cyclic group table")
    }

    /// `Z/2` written multiplicatively as `{1, g}`.
    pub fn z2_multiplicative() -> Self {
        let carrier = FinSet::new("Z2", ["1", "g"]).expect("labels");
        Self::from_fn(carrier, 0, |x, y| x ^ y).expect("table")
    }

    /// The two-element monoid `{1, a}` with `a·a = a`.
    pub fn idempotent2() -> Self {
        let carrier = FinSet::new("I2", ["1", "a"]).expect("labels");
        Self::from_fn(carrier, 0, |x, y| x | y).expect("table")
    }

    pub fn trivial() -> Self {
        Self::new(FinSet::singleton("1", "1"), 0, vec![0]).expect("table")
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.carrier.len() + y]
    }

    /// Left-to-right product of a sequence; the empty sequence gives the unit.
    pub fn fold(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.unit, |acc, x| self.mul(acc, x))
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }
}

impl fmt::Debug for FinMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinMonoid({:?}, unit {})", self.carrier, self.carrier.label(self.unit))
    }
}

/// Exhaustive check of the unit and associativity laws. Unit laws are
/// checked element by element first, then associativity over all triples.
pub fn check_monoid_laws(m: &FinMonoid) -> Verdict<MonoidLawViolation> {
    let c = &m.carrier;
    let u = m.unit;
    for x in c.indices() {
        if m.mul(u, x) != x {
            return Verdict::Fails(MonoidLawViolation::LeftUnit {
                x: c.label(x).to_string(),
            });
        }
        if m.mul(x, u) != x {
            return Verdict::Fails(MonoidLawViolation::RightUnit {
                x: c.label(x).to_string(),
            });
        }
    }
    for x in c.indices() {
        for y in c.indices() {
            for z in c.indices() {
                if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                    return Verdict::Fails(MonoidLawViolation::Associativity {
                        x: c.label(x).to_string(),
                        y: c.label(y).to_string(),
                        z: c.label(z).to_string(),
                    });
                }
            }
        }
    }
    Verdict::Holds
}
