//! The simple Lie algebras of types B_l and D_l, realized inside the Clifford
//! algebra on `2l` generators.
//!
//! Structure constants are never written down by hand: every bracket is
//! computed from the Clifford realization of the basis and re-expanded in the
//! basis. The basis order is frozen as
//!
//! 1. `e_α` for the positive roots in [`LieAlgebra::positive_roots`] order,
//! 2. `f_α` in the same order,
//! 3. `H_1, …, H_l`,
//!
//! where positive roots are listed as `ε_i - ε_j, ε_i + ε_j` for `i < j` in
//! lexicographic order, followed (type B only) by the short roots `ε_1 … ε_l`.
//! PBW monomial order in [`crate::verma`] depends on this enumeration.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordElement;
use crate::error::{Error, Result};
use crate::rational::{self, int, q, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    B,
    D,
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::B => write!(f, "B"),
            LieType::D => write!(f, "D"),
        }
    }
}

impl std::str::FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "B" | "b" => Ok(LieType::B),
            "D" | "d" => Ok(LieType::D),
            other => Err(Error::Parse(format!("unknown Lie type {other:?}"))),
        }
    }
}

/// Identifies an algebra handle; elements carry it so that mixing algebras is
/// caught.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraId {
    pub ty: LieType,
    pub rank: usize,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.ty, self.rank)
    }
}

/// A root (or any integral weight) in ε-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn zero(rank: usize) -> Self {
        Root(vec![0; rank])
    }

    /// `ε_i` (1-based).
    pub fn eps(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Root(v)
    }

    /// `ε_i + ε_j`.
    pub fn plus(rank: usize, i: usize, j: usize) -> Self {
        Root::eps(rank, i).add(&Root::eps(rank, j))
    }

    /// `ε_i - ε_j`.
    pub fn minus(rank: usize, i: usize, j: usize) -> Self {
        Root::eps(rank, i).sub(&Root::eps(rank, j))
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i32) -> Root {
        Root(self.0.iter().map(|a| a * c).collect())
    }

    /// Standard inner product with `(ε_i, ε_j) = δ_ij`.
    pub fn dot(&self, other: &Root) -> i32 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> i32 {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}e{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}e{}", i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    E,
    F,
    H,
}

#[derive(Debug, Clone)]
pub struct BasisElement {
    pub role: Role,
    /// Positive root for `e`/`f`; `None` for Cartan elements.
    pub root: Option<Root>,
    /// 1-based Cartan index for `H_i`.
    pub cartan: Option<usize>,
    pub realization: CliffordElement,
}

impl BasisElement {
    /// The `h`-weight of this basis vector.
    pub fn weight(&self, rank: usize) -> Root {
        match self.role {
            Role::E => self.root.clone().unwrap(),
            Role::F => self.root.as_ref().unwrap().neg(),
            Role::H => Root::zero(rank),
        }
    }

    pub fn label(&self) -> String {
        match self.role {
            Role::E => format!("e[{}]", self.root.as_ref().unwrap()),
            Role::F => format!("f[{}]", self.root.as_ref().unwrap()),
            Role::H => format!("H{}", self.cartan.unwrap()),
        }
    }
}

/// Sparse exact vector over the basis of one algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieElement {
    algebra: AlgebraId,
    terms: BTreeMap<usize, Rational>,
}

impl LieElement {
    pub fn zero(algebra: AlgebraId) -> Self {
        Self {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(algebra: AlgebraId, index: usize) -> Self {
        let mut x = Self::zero(algebra);
        x.terms.insert(index, Rational::one());
        x
    }

    pub fn from_terms(
        algebra: AlgebraId,
        terms: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Self {
        let mut x = Self::zero(algebra);
        for (i, c) in terms {
            x.add_term(i, c);
        }
        x
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn coefficient(&self, index: usize) -> Rational {
        self.terms.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, index: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(index).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&index);
        }
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.algebra);
        for (&i, x) in &self.terms {
            out.add_term(i, x * c);
        }
        out
    }
}

#[derive(Debug)]
pub struct LieAlgebra {
    id: AlgebraId,
    basis: Vec<BasisElement>,
    positive_roots: Vec<Root>,
    simple_roots: Vec<Root>,
    e_index: HashMap<Root, usize>,
    f_index: HashMap<Root, usize>,
    /// `table[i][j] = [x_i, x_j]` as sparse `(index, coefficient)` pairs.
    table: Vec<Vec<Vec<(usize, Rational)>>>,
}

pub type AlgebraHandle = Arc<LieAlgebra>;

/// Builds `g_B(l)` or `g_D(l)` with its full bracket table.
pub fn build_algebra(ty: LieType, rank: usize) -> Result<AlgebraHandle> {
    LieAlgebra::build(ty, rank).map(Arc::new)
}

impl LieAlgebra {
    pub fn build(ty: LieType, l: usize) -> Result<Self> {
        if l < 4 {
            return Err(Error::RankTooSmall(l));
        }
        let id = AlgebraId { ty, rank: l };
        let a = |i| CliffordElement::a(l, i);
        let s = |i| CliffordElement::a_star(l, i);
        let nord = |x: CliffordElement, y: CliffordElement| x.normal_order(&y).unwrap();

        let mut positive_roots = Vec::new();
        let mut e_real = Vec::new();
        let mut f_real = Vec::new();
        for i in 1..=l {
            for j in i + 1..=l {
                positive_roots.push(Root::minus(l, i, j));
                e_real.push(nord(a(i), s(j)));
                f_real.push(nord(a(j), s(i)));
                positive_roots.push(Root::plus(l, i, j));
                e_real.push(nord(a(i), a(j)));
                f_real.push(nord(s(j), s(i)));
            }
        }
        if ty == LieType::B {
            for i in 1..=l {
                positive_roots.push(Root::eps(l, i));
                e_real.push(a(i));
                f_real.push(s(i));
            }
        }

        let mut basis = Vec::new();
        for (root, r) in positive_roots.iter().zip(e_real) {
            basis.push(BasisElement {
                role: Role::E,
                root: Some(root.clone()),
                cartan: None,
                realization: r,
            });
        }
        for (root, r) in positive_roots.iter().zip(f_real) {
            basis.push(BasisElement {
                role: Role::F,
                root: Some(root.clone()),
                cartan: None,
                realization: r,
            });
        }
        for i in 1..=l {
            basis.push(BasisElement {
                role: Role::H,
                root: None,
                cartan: Some(i),
                realization: nord(a(i), s(i)),
            });
        }

        let mut simple_roots: Vec<Root> = (1..l).map(|i| Root::minus(l, i, i + 1)).collect();
        simple_roots.push(match ty {
            LieType::D => Root::plus(l, l - 1, l),
            LieType::B => Root::eps(l, l),
        });

        let n = positive_roots.len();
        let e_index = positive_roots.iter().cloned().zip(0..n).collect();
        let f_index = positive_roots.iter().cloned().zip(n..2 * n).collect();

        let mut algebra = LieAlgebra {
            id,
            basis,
            positive_roots,
            simple_roots,
            e_index,
            f_index,
            table: Vec::new(),
        };
        algebra.table = algebra.compute_table()?;
        Ok(algebra)
    }

    fn compute_table(&self) -> Result<Vec<Vec<Vec<(usize, Rational)>>>> {
        let l = self.id.rank;
        // Non-Cartan realizations are single monomials ±m.
        let mut lookup: HashMap<Vec<u8>, (usize, Rational)> = HashMap::new();
        for (idx, b) in self.basis.iter().enumerate() {
            if b.role == Role::H {
                continue;
            }
            let mut terms = b.realization.terms();
            let (m, c) = terms.next().expect("nonzero realization");
            debug_assert!(terms.next().is_none());
            lookup.insert(m.clone(), (idx, c.clone()));
        }
        let cartan_offset = 2 * self.positive_roots.len();

        let decompose = |x: &CliffordElement| -> Result<Vec<(usize, Rational)>> {
            let mut out = LieElement::zero(self.id);
            let mut constant = Rational::zero();
            for (m, c) in x.terms() {
                match m.len() {
                    0 => constant += c,
                    2 if m[1] as usize == m[0] as usize + l => {
                        // a_i a_i* = H_i + 1/2
                        let i = m[0] as usize;
                        out.add_term(cartan_offset + i, c.clone());
                        constant += c * q(1, 2);
                    }
                    _ => match lookup.get(m) {
                        Some((idx, scale)) => out.add_term(*idx, c / scale),
                        None => return Err(Error::OutsideBasis(x.to_string())),
                    },
                }
            }
            if !constant.is_zero() {
                return Err(Error::OutsideBasis(x.to_string()));
            }
            Ok(out.terms.into_iter().collect())
        };

        let dim = self.basis.len();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                if j < i {
                    table[i][j] = table[j][i]
                        .iter()
                        .map(|(k, c): &(usize, Rational)| (*k, -c.clone()))
                        .collect();
                    continue;
                }
                let c = self.basis[i]
                    .realization
                    .commutator(&self.basis[j].realization)?;
                table[i][j] = decompose(&c)?;
            }
        }
        Ok(table)
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn ty(&self) -> LieType {
        self.id.ty
    }

    pub fn rank(&self) -> usize {
        self.id.rank
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.simple_roots
    }

    /// Highest root `ε_1 + ε_2`.
    pub fn theta(&self) -> Root {
        Root::plus(self.rank(), 1, 2)
    }

    pub fn dual_coxeter(&self) -> i64 {
        let l = self.rank() as i64;
        match self.ty() {
            LieType::B => 2 * l - 1,
            LieType::D => 2 * l - 2,
        }
    }

    /// Finite Weyl vector (half-sum of positive roots), in ε-coordinates.
    pub fn rho(&self) -> Vec<Rational> {
        let mut rho = vec![Rational::zero(); self.rank()];
        for r in &self.positive_roots {
            for (x, &c) in rho.iter_mut().zip(&r.0) {
                *x += q(c as i64, 2);
            }
        }
        rho
    }

    pub fn e_index(&self, root: &Root) -> Option<usize> {
        self.e_index.get(root).copied()
    }

    pub fn f_index(&self, root: &Root) -> Option<usize> {
        self.f_index.get(root).copied()
    }

    pub fn h_index(&self, i: usize) -> usize {
        2 * self.positive_roots.len() + i - 1
    }

    /// Index of the root vector for an arbitrary (positive or negative) root.
    pub fn root_vector_index(&self, root: &Root) -> Option<usize> {
        self.e_index(root).or_else(|| self.f_index(&root.neg()))
    }

    /// `e_α` for a positive root. Panics if `root` is not a positive root.
    pub fn e(&self, root: &Root) -> LieElement {
        let idx = self
            .e_index(root)
            .unwrap_or_else(|| panic!("{root} is not a positive root of {}", self.id));
        LieElement::basis(self.id, idx)
    }

    /// `f_α` for a positive root. Panics if `root` is not a positive root.
    pub fn f(&self, root: &Root) -> LieElement {
        let idx = self
            .f_index(root)
            .unwrap_or_else(|| panic!("{root} is not a positive root of {}", self.id));
        LieElement::basis(self.id, idx)
    }

    /// Cartan basis vector `H_i`.
    pub fn cartan(&self, i: usize) -> LieElement {
        LieElement::basis(self.id, self.h_index(i))
    }

    /// The coroot `h_α = [e_α, f_α]`.
    pub fn coroot(&self, root: &Root) -> LieElement {
        self.bracket(&self.e(root), &self.f(root))
            .expect("same algebra")
    }

    pub fn basis_element(&self, index: usize) -> LieElement {
        LieElement::basis(self.id, index)
    }

    pub fn weight_of(&self, index: usize) -> Root {
        self.basis[index].weight(self.rank())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = LieElement::zero(self.id);
        for (&i, a) in &x.terms {
            for (&j, b) in &y.terms {
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out.add_term(*k, &ab * c);
                }
            }
        }
        Ok(out)
    }

    fn check(&self, x: &LieElement) -> Result<()> {
        if x.algebra != self.id {
            return Err(Error::HandleMismatch(
                self.id.to_string(),
                x.algebra.to_string(),
            ));
        }
        Ok(())
    }

    /// Invariant form on basis vectors: `(H_i, H_j) = δ_ij`,
    /// `(e_α, f_α) = 2 / (α, α)`, all other pairings zero.
    pub fn form_basis(&self, i: usize, j: usize) -> Rational {
        let (bi, bj) = (&self.basis[i], &self.basis[j]);
        match (bi.role, bj.role) {
            (Role::H, Role::H) => {
                if bi.cartan == bj.cartan {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            (Role::E, Role::F) | (Role::F, Role::E) if bi.root == bj.root => {
                q(2, bi.root.as_ref().unwrap().norm2() as i64)
            }
            _ => Rational::zero(),
        }
    }

    pub fn invariant_form(&self, x: &LieElement, y: &LieElement) -> Result<Rational> {
        self.check(x)?;
        self.check(y)?;
        let mut total = Rational::zero();
        for (&i, a) in &x.terms {
            for (&j, b) in &y.terms {
                let f = self.form_basis(i, j);
                if !f.is_zero() {
                    total += a * b * f;
                }
            }
        }
        Ok(total)
    }

    /// Pairs `(x_i, x^i)` with `(x_i, x^j) = δ_ij`, in basis order.
    pub fn dual_basis(&self) -> Vec<(LieElement, LieElement)> {
        (0..self.dim())
            .map(|i| {
                let b = &self.basis[i];
                let dual = match b.role {
                    Role::H => self.basis_element(i),
                    Role::E => {
                        let r = b.root.as_ref().unwrap();
                        self.f(r).scale(&q(r.norm2() as i64, 2))
                    }
                    Role::F => {
                        let r = b.root.as_ref().unwrap();
                        self.e(r).scale(&q(r.norm2() as i64, 2))
                    }
                };
                (self.basis_element(i), dual)
            })
            .collect()
    }

    /// Dual basis of an arbitrary basis, by inverting its Gram matrix.
    pub fn dual_of(&self, basis: &[LieElement]) -> Result<Vec<LieElement>> {
        let n = self.dim();
        if basis.len() != n {
            return Err(Error::Unsupported(format!(
                "expected {n} basis vectors, got {}",
                basis.len()
            )));
        }
        let gram: Vec<Vec<Rational>> = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| self.invariant_form(x, y))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let inv = crate::linalg::invert(&gram)
            .ok_or_else(|| Error::Unsupported("degenerate basis".into()))?;
        // x^i = Σ_j inv[j][i] x_j, since (x_k, x^i) = Σ_j G[k][j] inv[j][i] = δ_ki.
        Ok((0..n)
            .map(|i| {
                let mut out = LieElement::zero(self.id);
                for (j, x) in basis.iter().enumerate() {
                    if !inv[j][i].is_zero() {
                        out = out.add(&x.scale(&inv[j][i])).unwrap();
                    }
                }
                out
            })
            .collect())
    }

    /// `⟨β, h⟩` for a Cartan element `h = Σ c_i H_i`.
    pub fn pair_weight_cartan(&self, weight: &Root, h: &LieElement) -> Rational {
        h.terms()
            .map(|(idx, c)| {
                let b = &self.basis[idx];
                assert_eq!(b.role, Role::H, "not a Cartan element");
                c * int(weight.0[b.cartan.unwrap() - 1] as i64)
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn label(&self, index: usize) -> String {
        self.basis[index].label()
    }

    pub fn dump(&self) -> AlgebraDump {
        let basis = self
            .basis
            .iter()
            .enumerate()
            .map(|(index, b)| BasisEntry {
                index,
                role: b.role,
                root: b.root.clone(),
                cartan: b.cartan,
            })
            .collect();
        let mut bracket = Vec::new();
        let mut form = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !self.table[i][j].is_empty() {
                    bracket.push(BracketEntry {
                        i,
                        j,
                        result: self.table[i][j]
                            .iter()
                            .map(|(k, c)| (*k, rational::to_string(c)))
                            .collect(),
                    });
                }
                let f = self.form_basis(i, j);
                if !f.is_zero() {
                    form.push(FormEntry {
                        i,
                        j,
                        value: rational::to_string(&f),
                    });
                }
            }
        }
        AlgebraDump {
            r#type: self.ty(),
            rank: self.rank(),
            dimension: self.dim(),
            dual_coxeter: self.dual_coxeter(),
            positive_roots: self.positive_roots.clone(),
            simple_roots: self.simple_roots.clone(),
            theta: self.theta(),
            basis,
            bracket,
            form,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub index: usize,
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub root: Option<Root>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cartan: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    /// `(basis index, "p/q")` pairs.
    pub result: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormEntry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

/// JSON document describing an algebra: basis, roots, bracket table and form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub r#type: LieType,
    pub rank: usize,
    pub dimension: usize,
    pub dual_coxeter: i64,
    pub positive_roots: Vec<Root>,
    pub simple_roots: Vec<Root>,
    pub theta: Root,
    pub basis: Vec<BasisEntry>,
    pub bracket: Vec<BracketEntry>,
    pub form: Vec<FormEntry>,
}
