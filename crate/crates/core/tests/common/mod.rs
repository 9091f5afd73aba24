//! Shared oracles for the integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use affine_verma::liealg::LieAlgebra;
use affine_verma::rational::int;
use affine_verma::{PbwState, Rational};
use num_traits::{One, Zero};
use rand::Rng;

/// `(mode, index)` factors, ascending in canonical order.
pub type Word = Vec<(i32, u32)>;

pub fn state_map(s: &PbwState) -> BTreeMap<Word, Rational> {
    s.terms()
        .map(|(m, c)| (m.iter().map(|f| (f.mode, f.index)).collect(), c.clone()))
        .collect()
}

/// Straightens `x_1(m_1) ⋯ x_r(m_r) · 1` by adjacent swaps, rightmost
/// inversion first, with no memoization. Uses only the structure constants
/// and the form.
pub fn oracle_normal_form(g: &LieAlgebra, k: &Rational, product: &[(usize, i32)]) -> BTreeMap<Word, Rational> {
    let mut out: BTreeMap<Word, Rational> = BTreeMap::new();
    let start: Word = product.iter().map(|&(i, m)| (m, i as u32)).collect();
    let mut work = vec![(start, Rational::one())];
    while let Some((w, c)) = work.pop() {
        if c.is_zero() || w.last().is_some_and(|f| f.0 >= 0) {
            continue;
        }
        let Some(i) = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i] > w[i + 1]) else {
            *out.entry(w).or_insert_with(Rational::zero) += c;
            continue;
        };
        let (x, y) = (w[i], w[i + 1]);
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        work.push((swapped, c.clone()));
        let mode = x.0 + y.0;
        for (z, b) in g.bracket_basis(x.1 as usize, y.1 as usize) {
            let mut br = w[..i].to_vec();
            br.push((mode, *z as u32));
            br.extend_from_slice(&w[i + 2..]);
            work.push((br, &c * b));
        }
        if mode == 0 && x.0 != 0 {
            let form = g.form_basis(x.1 as usize, y.1 as usize);
            if !form.is_zero() {
                let mut rest = w[..i].to_vec();
                rest.extend_from_slice(&w[i + 2..]);
                work.push((rest, &c * int(x.0 as i64) * form * k));
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn random_product(rng: &mut impl Rng, dim: usize, len: usize, modes: std::ops::RangeInclusive<i32>) -> Vec<(usize, i32)> {
    (0..len)
        .map(|_| (rng.gen_range(0..dim), rng.gen_range(modes.clone())))
        .collect()
}
