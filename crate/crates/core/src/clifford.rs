//! The Clifford algebra on `a_1..a_l, a_1*..a_l*` with
//! `[a_i, a_j]_+ = [a_i*, a_j*]_+ = 0` and `[a_i, a_j*]_+ = δ_ij`.
//!
//! Every sign in the Lie algebra realizations downstream comes from here.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Rational};

/// A generator `a_i` (plain) or `a_i*` (starred), with `index` in `1..=l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliffordGenerator {
    Plain(usize),
    Starred(usize),
}

impl CliffordGenerator {
    /// Position in the order `a_1 < … < a_l < a_1* < … < a_l*`.
    fn slot(self, rank: usize) -> u8 {
        match self {
            CliffordGenerator::Plain(i) => (i - 1) as u8,
            CliffordGenerator::Starred(i) => (rank + i - 1) as u8,
        }
    }

    fn index(self) -> usize {
        match self {
            CliffordGenerator::Plain(i) | CliffordGenerator::Starred(i) => i,
        }
    }
}

/// Strictly increasing sequence of generator slots; empty is the unit.
pub type CliffordMonomial = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordElement {
    rank: usize,
    terms: BTreeMap<CliffordMonomial, Rational>,
}

impl CliffordElement {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(rank: usize, c: Rational) -> Self {
        let mut x = Self::zero(rank);
        x.add_term(Vec::new(), c);
        x
    }

    pub fn one(rank: usize) -> Self {
        Self::scalar(rank, Rational::one())
    }

    /// A single generator. Panics if the index is outside `1..=rank`.
    pub fn generator(rank: usize, g: CliffordGenerator) -> Self {
        assert!(
            (1..=rank).contains(&g.index()),
            "generator {g:?} outside rank {rank}"
        );
        let mut x = Self::zero(rank);
        x.add_term(vec![g.slot(rank)], Rational::one());
        x
    }

    pub fn a(rank: usize, i: usize) -> Self {
        Self::generator(rank, CliffordGenerator::Plain(i))
    }

    pub fn a_star(rank: usize, i: usize) -> Self {
        Self::generator(rank, CliffordGenerator::Starred(i))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CliffordMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &[u8]) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when every monomial has exactly one generator.
    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|m| m.len() == 1)
    }

    fn add_term(&mut self, monomial: CliffordMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.rank);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Canonical product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut word = m1.clone();
                word.extend_from_slice(m2);
                straighten(self.rank, word, c1 * c2, &mut out);
            }
        }
        Ok(out)
    }

    /// `xy - yx`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// `:xy: = (xy - yx) / 2` for degree-1 elements.
    pub fn normal_order(&self, other: &Self) -> Result<Self> {
        if !self.is_linear() || !other.is_linear() {
            return Err(Error::NotLinear);
        }
        Ok(self.commutator(other)?.scale(&q(1, 2)))
    }
}

/// Anticommutator of two generator slots: 1 for a dual pair `a_i, a_i*`.
fn anticommutator(rank: usize, g: u8, h: u8) -> bool {
    let (g, h) = (g as usize, h as usize);
    g.abs_diff(h) == rank
}

/// Bubble-sort `word` into canonical order, accumulating `coeff * word` into
/// `out`. Swapping adjacent `g > h` gives `gh = -hg + [g,h]_+`.
fn straighten(rank: usize, mut word: Vec<u8>, coeff: Rational, out: &mut CliffordElement) {
    let mut sign_flip = false;
    let mut i = 0;
    while i + 1 < word.len() {
        let (g, h) = (word[i], word[i + 1]);
        if g < h {
            i += 1;
            continue;
        }
        if g == h {
            // g^2 = 0
            return;
        }
        if anticommutator(rank, g, h) {
            let mut contracted = word.clone();
            contracted.drain(i..i + 2);
            let c = if sign_flip { -coeff.clone() } else { coeff.clone() };
            straighten(rank, contracted, c, out);
        }
        word.swap(i, i + 1);
        sign_flip = !sign_flip;
        i = i.saturating_sub(1);
    }
    out.add_term(word, if sign_flip { -coeff } else { coeff });
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if m.is_empty() {
                write!(f, "·1")?;
            }
            for &g in m {
                let g = g as usize;
                if g < self.rank {
                    write!(f, "·a{}", g + 1)?;
                } else {
                    write!(f, "·a{}*", g - self.rank + 1)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const L: usize = 4;

    fn gens(l: usize) -> Vec<CliffordElement> {
        (1..=l)
            .map(|i| CliffordElement::a(l, i))
            .chain((1..=l).map(|i| CliffordElement::a_star(l, i)))
            .collect()
    }

    #[test]
    fn square_of_generator_vanishes() {
        let a1 = CliffordElement::a(L, 1);
        assert!(a1.multiply(&a1).unwrap().is_zero());
    }

    #[test]
    fn distinct_generators_anticommute() {
        let a1 = CliffordElement::a(L, 1);
        let a2 = CliffordElement::a(L, 2);
        assert_eq!(
            a2.multiply(&a1).unwrap(),
            a1.multiply(&a2).unwrap().scale(&int(-1))
        );
    }

    #[test]
    fn dual_pair_contracts() {
        let a1 = CliffordElement::a(L, 1);
        let s1 = CliffordElement::a_star(L, 1);
        let expected = CliffordElement::one(L)
            .sub(&a1.multiply(&s1).unwrap())
            .unwrap();
        assert_eq!(s1.multiply(&a1).unwrap(), expected);
    }

    #[test]
    fn normal_ordering_examples() {
        let a1 = CliffordElement::a(L, 1);
        let a2 = CliffordElement::a(L, 2);
        let s1 = CliffordElement::a_star(L, 1);
        assert!(a1.normal_order(&a1).unwrap().is_zero());
        assert_eq!(a1.normal_order(&a2).unwrap(), a1.multiply(&a2).unwrap());
        let expected = a1
            .multiply(&s1)
            .unwrap()
            .sub(&CliffordElement::scalar(L, q(1, 2)))
            .unwrap();
        assert_eq!(a1.normal_order(&s1).unwrap(), expected);
        let quad = a1.multiply(&a2).unwrap();
        assert_eq!(quad.normal_order(&a1), Err(Error::NotLinear));
    }

    // covers: clifford-realization
    #[test]
    fn commutator_examples() {
        let x = CliffordElement::a(L, 1)
            .multiply(&CliffordElement::a_star(L, 2))
            .unwrap();
        let y = CliffordElement::a(L, 2)
            .multiply(&CliffordElement::a_star(L, 3))
            .unwrap();
        let expected = CliffordElement::a(L, 1)
            .multiply(&CliffordElement::a_star(L, 3))
            .unwrap();
        assert_eq!(x.commutator(&y).unwrap(), expected);
        assert!(x.commutator(&x).unwrap().is_zero());

        let h1 = CliffordElement::a(L, 1)
            .normal_order(&CliffordElement::a_star(L, 1))
            .unwrap();
        assert_eq!(h1.commutator(&x).unwrap(), x);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let x = CliffordElement::a(4, 1);
        let y = CliffordElement::a(5, 1);
        assert_eq!(x.multiply(&y), Err(Error::RankMismatch(4, 5)));
    }

    #[test]
    fn anticommutation_is_exhaustive() {
        for l in [4, 5] {
            let gs = gens(l);
            for (i, g) in gs.iter().enumerate() {
                for (j, h) in gs.iter().enumerate() {
                    let anti = g.multiply(h).unwrap().add(&h.multiply(g).unwrap()).unwrap();
                    let expected = if i.abs_diff(j) == l {
                        CliffordElement::one(l)
                    } else {
                        CliffordElement::zero(l)
                    };
                    assert_eq!(anti, expected, "generators {i} {j}");
                }
            }
        }
    }

    fn random_monomial(rng: &mut ChaCha8Rng, gs: &[CliffordElement]) -> CliffordElement {
        let len = rng.gen_range(0..5);
        let mut x = CliffordElement::scalar(L, int(rng.gen_range(-3..=3)));
        for _ in 0..len {
            x = x.multiply(&gs[rng.gen_range(0..gs.len())]).unwrap();
        }
        x
    }

    #[test]
    fn multiplication_is_associative() {
        let gs = gens(L);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = random_monomial(&mut rng, &gs);
            let y = random_monomial(&mut rng, &gs);
            let z = random_monomial(&mut rng, &gs);
            assert_eq!(
                x.multiply(&y).unwrap().multiply(&z).unwrap(),
                x.multiply(&y.multiply(&z).unwrap()).unwrap()
            );
        }
    }

    fn random_quadratic(rng: &mut ChaCha8Rng, gs: &[CliffordElement]) -> CliffordElement {
        let mut x = CliffordElement::zero(L);
        for _ in 0..3 {
            let g = &gs[rng.gen_range(0..gs.len())];
            let h = &gs[rng.gen_range(0..gs.len())];
            let c = int(rng.gen_range(-2..=2));
            x = x.add(&g.normal_order(h).unwrap().scale(&c)).unwrap();
        }
        x
    }

    #[test]
    fn commutator_is_antisymmetric_and_jacobi() {
        let gs = gens(L);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_quadratic(&mut rng, &gs);
            let y = random_quadratic(&mut rng, &gs);
            let z = random_quadratic(&mut rng, &gs);
            let xy = x.commutator(&y).unwrap();
            assert!(xy.add(&y.commutator(&x).unwrap()).unwrap().is_zero());
            let jacobi = xy
                .commutator(&z)
                .unwrap()
                .add(&y.commutator(&z).unwrap().commutator(&x).unwrap())
                .unwrap()
                .add(&z.commutator(&x).unwrap().commutator(&y).unwrap())
                .unwrap();
            assert!(jacobi.is_zero());
        }
    }
}
