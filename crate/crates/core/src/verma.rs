//! The generalized Verma module `N(k, 0)` induced from the trivial module.
//!
//! States are sparse combinations of canonical PBW monomials
//! `x_1(-n_1) ⋯ x_r(-n_r)·1` with factors sorted by `(mode, basis index)`,
//! so deeper modes come first. The loop generator `x(n)` acts through
//!
//! ```text
//! x(n) y(m) w = y(m) x(n) w + [x, y](n + m) w + n δ_{n+m,0} (x, y) k w
//! ```
//!
//! together with `x(n)·1 = 0` for `n >= 0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::liealg::{AlgebraHandle, AlgebraId, LieAlgebra, LieElement, Role, Root};
use crate::rational::{self, int, Rational};

/// One loop generator `x_index(mode)` inside a PBW monomial.
///
/// Field order matters: the derived `Ord` is the canonical factor order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub mode: i32,
    pub index: u32,
}

impl Factor {
    pub fn new(index: usize, mode: i32) -> Self {
        Self {
            mode,
            index: index as u32,
        }
    }
}

pub type Monomial = SmallVec<[Factor; 6]>;

type Terms = HashMap<Monomial, Rational>;

fn add_into(terms: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// An element of `N(k, 0)` in the canonical PBW basis.
#[derive(Clone, PartialEq, Eq)]
pub struct PbwState {
    algebra: AlgebraId,
    terms: Terms,
}

/// Degree and `h`-weight of a state; `None` marks a mixed (inhomogeneous)
/// component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grade {
    #[serde(with = "mixed")]
    pub degree: Option<u32>,
    #[serde(with = "mixed")]
    pub h_weight: Option<Root>,
}

mod mixed {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr<T> {
        Value(T),
        Tag(String),
    }

    pub fn serialize<T: Serialize, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => v.serialize(s),
            None => s.serialize_str("mixed"),
        }
    }

    pub fn deserialize<'de, T: Deserialize<'de>, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<T>, D::Error> {
        match Repr::<T>::deserialize(d)? {
            Repr::Value(v) => Ok(Some(v)),
            Repr::Tag(t) if t == "mixed" => Ok(None),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("unexpected tag {t:?}"))),
        }
    }
}

impl PbwState {
    pub fn zero(algebra: AlgebraId) -> Self {
        Self {
            algebra,
            terms: Terms::new(),
        }
    }

    /// The vacuum vector `1`.
    pub fn vacuum(algebra: AlgebraId) -> Self {
        Self::monomial(algebra, Monomial::new(), Rational::one())
    }

    /// `c · m`; the monomial is sorted into canonical order first, which is
    /// only meaningful for commuting factors. Use
    /// [`VermaModule::normal_form`] for arbitrary products.
    pub fn monomial(algebra: AlgebraId, mut m: Monomial, c: Rational) -> Self {
        m.sort_unstable();
        let mut s = Self::zero(algebra);
        add_into(&mut s.terms, m, c);
        s
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[Factor]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical (sorted) monomial order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::HandleMismatch(
                self.algebra.to_string(),
                other.algebra.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check(other)?;
        for (m, c) in &other.terms {
            add_into(&mut self.terms, m.clone(), c.clone());
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) -> Result<()> {
        self.check(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (m, x) in &other.terms {
            add_into(&mut self.terms, m.clone(), x * c);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.algebra);
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x * c);
        }
        out
    }

    /// Replaces every basis index through `map`, keeping coefficients. The
    /// map must be order-preserving so monomials stay canonical.
    pub(crate) fn reindex(&self, target: AlgebraId, map: impl Fn(u32) -> u32) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mm: Monomial = m
                .iter()
                .map(|f| Factor {
                    mode: f.mode,
                    index: map(f.index),
                })
                .collect();
            debug_assert!(mm.windows(2).all(|w| w[0] <= w[1]));
            out.terms.insert(mm, c.clone());
        }
        out
    }

    /// Degree and `h`-weight, or "mixed" if not homogeneous.
    pub fn grade(&self, algebra: &LieAlgebra) -> Grade {
        let mut degree: Option<Option<u32>> = None;
        let mut weight: Option<Option<Root>> = None;
        for m in self.terms.keys() {
            let d: u32 = m.iter().map(|f| (-f.mode) as u32).sum();
            let w = m.iter().fold(Root::zero(algebra.rank()), |acc, f| {
                acc.add(&algebra.weight_of(f.index as usize))
            });
            degree = match degree {
                None => Some(Some(d)),
                Some(Some(x)) if x == d => Some(Some(x)),
                _ => Some(None),
            };
            weight = match weight {
                None => Some(Some(w)),
                Some(Some(x)) if x == w => Some(Some(x)),
                _ => Some(None),
            };
        }
        Grade {
            degree: degree.unwrap_or(Some(0)),
            h_weight: weight.unwrap_or_else(|| Some(Root::zero(algebra.rank()))),
        }
    }

    /// The first nonzero term in canonical order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().min_by(|a, b| a.0.cmp(b.0))
    }

    /// If `self = s · other` for a rational `s`, returns `s`. The candidate is
    /// read off the leading monomial of `other` and then checked globally.
    pub fn ratio_to(&self, other: &Self) -> Option<Rational> {
        if self.algebra != other.algebra {
            return None;
        }
        let Some((m, c)) = other.leading_term() else {
            return if self.is_zero() { Some(Rational::zero()) } else { None };
        };
        let s = self.coefficient(m) / c;
        let diff = self.sub(&other.scale(&s)).ok()?;
        diff.is_zero().then_some(s)
    }

    pub fn to_repr(&self, algebra: &AlgebraHandle) -> StateRepr {
        StateRepr(
            self.sorted_terms()
                .into_iter()
                .map(|(m, c)| TermRepr {
                    coeff: rational::to_string(c),
                    monomial: m.iter().map(|f| factor_repr(algebra, *f)).collect(),
                })
                .collect(),
        )
    }

    pub fn from_repr(algebra: &AlgebraHandle, repr: &StateRepr) -> Result<Self> {
        let mut s = Self::zero(algebra.id());
        for t in &repr.0 {
            let c = rational::parse(&t.coeff)?;
            let mut m = Monomial::new();
            for f in &t.monomial {
                m.push(parse_factor(algebra, f)?);
            }
            if m.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Parse("monomial not in canonical order".into()));
            }
            if m.iter().any(|f| f.mode >= 0) {
                return Err(Error::Parse("PBW factors must have negative modes".into()));
            }
            add_into(&mut s.terms, m, c);
        }
        Ok(s)
    }

    pub fn display<'a>(&'a self, algebra: &'a AlgebraHandle) -> StateDisplay<'a> {
        StateDisplay {
            state: self,
            algebra,
        }
    }
}

impl fmt::Debug for PbwState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.sorted_terms().into_iter().map(|(m, c)| {
                let key: Vec<(u32, i32)> = m.iter().map(|f| (f.index, f.mode)).collect();
                (key, c.to_string())
            }))
            .finish()
    }
}

pub struct StateDisplay<'a> {
    state: &'a PbwState,
    algebra: &'a AlgebraHandle,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.state.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for fac in m.iter() {
                write!(f, " {}({})", self.algebra.label(fac.index as usize), fac.mode)?;
            }
            write!(f, " 1")?;
        }
        Ok(())
    }
}

/// `[role, root-or-index, mode]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRepr(pub Role, pub RootOrIndex, pub i32);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootOrIndex {
    Root(Root),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub coeff: String,
    pub monomial: Vec<FactorRepr>,
}

/// Wire form of a state: list of `{coeff: "p/q", monomial: [...]}` in
/// canonical monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateRepr(pub Vec<TermRepr>);

fn factor_repr(algebra: &AlgebraHandle, f: Factor) -> FactorRepr {
    let b = &algebra.basis()[f.index as usize];
    let which = match b.role {
        Role::H => RootOrIndex::Index(b.cartan.unwrap()),
        _ => RootOrIndex::Root(b.root.clone().unwrap()),
    };
    FactorRepr(b.role, which, f.mode)
}

fn parse_factor(algebra: &AlgebraHandle, f: &FactorRepr) -> Result<Factor> {
    let FactorRepr(role, which, mode) = f;
    let index = match (role, which) {
        (Role::E, RootOrIndex::Root(r)) => algebra.e_index(r),
        (Role::F, RootOrIndex::Root(r)) => algebra.f_index(r),
        (Role::H, RootOrIndex::Index(i)) if (1..=algebra.rank()).contains(i) => {
            Some(algebra.h_index(*i))
        }
        _ => None,
    }
    .ok_or_else(|| Error::Parse(format!("unknown basis factor {f:?} for {}", algebra.id())))?;
    Ok(Factor::new(index, *mode))
}

/// `x(mode)` for an arbitrary Lie algebra element `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopFactor {
    pub element: LieElement,
    pub mode: i32,
}

impl LoopFactor {
    pub fn new(element: LieElement, mode: i32) -> Self {
        Self { element, mode }
    }
}

/// Formal rational combination of products of loop generators. Each product
/// is written left to right and acts right to left.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OperatorWord {
    terms: Vec<(Rational, Vec<LoopFactor>)>,
}

impl OperatorWord {
    pub fn new() -> Self {
        Self::default()
    }

    /// The identity operator.
    pub fn identity() -> Self {
        Self {
            terms: vec![(Rational::one(), Vec::new())],
        }
    }

    pub fn term(mut self, c: Rational, factors: Vec<LoopFactor>) -> Self {
        self.push(c, factors);
        self
    }

    pub fn push(&mut self, c: Rational, factors: Vec<LoopFactor>) {
        if !c.is_zero() {
            self.terms.push((c, factors));
        }
    }

    pub fn extend(&mut self, other: OperatorWord) {
        self.terms.extend(other.terms);
    }

    pub fn scale(mut self, c: &Rational) -> Self {
        for (x, _) in &mut self.terms {
            *x *= c;
        }
        self.terms.retain(|(x, _)| !x.is_zero());
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Rational, Vec<LoopFactor>)] {
        &self.terms
    }
}

type CacheKey = (u32, i32, Monomial);

/// The module `N(k, 0)` over a fixed algebra handle and level.
pub struct VermaModule {
    algebra: AlgebraHandle,
    level: Rational,
    cache: RwLock<HashMap<CacheKey, Arc<Vec<(Monomial, Rational)>>>>,
}

impl fmt::Debug for VermaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VermaModule")
            .field("algebra", &self.algebra.id())
            .field("level", &self.level.to_string())
            .finish()
    }
}

impl VermaModule {
    pub fn new(algebra: AlgebraHandle, level: Rational) -> Self {
        Self {
            algebra,
            level,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &AlgebraHandle {
        &self.algebra
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn vacuum(&self) -> PbwState {
        PbwState::vacuum(self.algebra.id())
    }

    pub fn zero(&self) -> PbwState {
        PbwState::zero(self.algebra.id())
    }

    fn check(&self, s: &PbwState) -> Result<()> {
        if s.algebra != self.algebra.id() {
            return Err(Error::HandleMismatch(
                self.algebra.id().to_string(),
                s.algebra.to_string(),
            ));
        }
        Ok(())
    }

    /// `x_index(n) · s`.
    pub fn apply(&self, index: usize, n: i32, s: &PbwState) -> Result<PbwState> {
        self.check(s)?;
        let mut out = Terms::new();
        for (m, c) in &s.terms {
            self.act(index as u32, n, m, c, &mut out);
        }
        Ok(PbwState {
            algebra: s.algebra,
            terms: out,
        })
    }

    /// `x(n) · s` for an arbitrary element `x`.
    pub fn apply_element(&self, x: &LieElement, n: i32, s: &PbwState) -> Result<PbwState> {
        self.check(s)?;
        if x.algebra() != self.algebra.id() {
            return Err(Error::HandleMismatch(
                self.algebra.id().to_string(),
                x.algebra().to_string(),
            ));
        }
        let mut out = Terms::new();
        for (i, a) in x.terms() {
            for (m, c) in &s.terms {
                self.act(i as u32, n, m, &(a * c), &mut out);
            }
        }
        Ok(PbwState {
            algebra: s.algebra,
            terms: out,
        })
    }

    /// Applies each product in the word right to left and sums the results.
    pub fn apply_word(&self, word: &OperatorWord, s: &PbwState) -> Result<PbwState> {
        let mut total = self.zero();
        for (c, factors) in &word.terms {
            let mut state = s.clone();
            for f in factors.iter().rev() {
                state = self.apply_element(&f.element, f.mode, &state)?;
                if state.is_zero() {
                    break;
                }
            }
            total.add_scaled(&state, c)?;
        }
        Ok(total)
    }

    /// Straightens the product `x_1(m_1) ⋯ x_r(m_r) · 1` given in any order.
    pub fn normal_form(&self, product: &[(usize, i32)]) -> PbwState {
        let mut state = self.vacuum();
        for &(index, mode) in product.iter().rev() {
            state = self.apply(index, mode, &state).expect("own handle");
        }
        state
    }

    /// Accumulates `c · x(n) · m` into `out`.
    fn act(&self, x: u32, n: i32, m: &[Factor], c: &Rational, out: &mut Terms) {
        if c.is_zero() {
            return;
        }
        let me = Factor { mode: n, index: x };
        match m.first() {
            None if n >= 0 => return,
            None => {
                add_into(out, Monomial::from_slice(&[me]), c.clone());
                return;
            }
            Some(first) if n < 0 && me <= *first => {
                let mut mm = Monomial::with_capacity(m.len() + 1);
                mm.push(me);
                mm.extend_from_slice(m);
                add_into(out, mm, c.clone());
                return;
            }
            _ => {}
        }
        for (mm, cc) in self.act_cached(x, n, m).iter() {
            add_into(out, mm.clone(), c * cc);
        }
    }

    fn act_cached(&self, x: u32, n: i32, m: &[Factor]) -> Arc<Vec<(Monomial, Rational)>> {
        let key: CacheKey = (x, n, Monomial::from_slice(m));
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return Arc::clone(hit);
        }
        let mut out = Terms::new();
        self.commute_through(x, n, m, &mut out);
        let value = Arc::new(out.into_iter().collect::<Vec<_>>());
        self.cache
            .write()
            .unwrap()
            .insert(key, Arc::clone(&value));
        value
    }

    /// `x(n) y(p) w = y(p) (x(n) w) + [x,y](n+p) w + n δ_{n+p,0} (x,y) k w`
    /// where `m = y(p) w`.
    fn commute_through(&self, x: u32, n: i32, m: &[Factor], out: &mut Terms) {
        let y = m[0];
        let rest = &m[1..];

        let mut inner = Terms::new();
        self.act(x, n, rest, &Rational::one(), &mut inner);
        for (mm, cc) in &inner {
            self.act(y.index, y.mode, mm, cc, out);
        }

        let mode = n + y.mode;
        for (z, b) in self.algebra.bracket_basis(x as usize, y.index as usize) {
            self.act(*z as u32, mode, rest, b, out);
        }

        if mode == 0 && n != 0 {
            let form = self.algebra.form_basis(x as usize, y.index as usize);
            if !form.is_zero() {
                let central = int(n as i64) * form * &self.level;
                add_into(out, Monomial::from_slice(rest), central);
            }
        }
    }

    /// Number of memoized `x(n)·m` entries.
    pub fn cache_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}

/// Sorted `(monomial, coefficient)` map, handy for diffs in reports.
pub fn diff_terms(algebra: &LieAlgebra, state: &PbwState) -> BTreeMap<String, String> {
    state
        .sorted_terms()
        .into_iter()
        .map(|(m, c)| {
            let label = if m.is_empty() {
                "1".to_string()
            } else {
                m.iter()
                    .map(|f| format!("{}({})", algebra.label(f.index as usize), f.mode))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            (label, c.to_string())
        })
        .collect()
}
