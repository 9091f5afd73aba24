//! Shorthand for writing loop-algebra expressions in root-vector notation.

use crate::liealg::{LieAlgebra, LieElement, Root};
use crate::rational::int;
use crate::verma::LoopFactor;

/// Root-vector letters over one algebra. Indices are 1-based.
#[derive(Clone, Copy)]
pub struct Letters<'a> {
    g: &'a LieAlgebra,
}

impl<'a> Letters<'a> {
    pub fn new(g: &'a LieAlgebra) -> Self {
        Self { g }
    }

    pub fn rank(&self) -> usize {
        self.g.rank()
    }

    /// `ε_i`.
    pub fn eps(&self, i: usize) -> Root {
        Root::eps(self.g.rank(), i)
    }

    /// `ε_i + ε_j`.
    pub fn plus(&self, i: usize, j: usize) -> Root {
        Root::plus(self.g.rank(), i, j)
    }

    /// `ε_i - ε_j`.
    pub fn minus(&self, i: usize, j: usize) -> Root {
        Root::minus(self.g.rank(), i, j)
    }

    /// `e_α(n)` for a positive root `α`.
    pub fn e(&self, root: &Root, n: i32) -> LoopFactor {
        LoopFactor::new(self.g.e(root), n)
    }

    /// `f_α(n)` for a positive root `α`.
    pub fn f(&self, root: &Root, n: i32) -> LoopFactor {
        LoopFactor::new(self.g.f(root), n)
    }

    /// `h_α(n)` with `h_α = [e_α, f_α]`; `h_{ε_i} = 2H_i` also inside type D.
    pub fn h(&self, root: &Root, n: i32) -> LoopFactor {
        LoopFactor::new(self.h_element(root), n)
    }

    pub fn h_element(&self, root: &Root) -> LieElement {
        if root.norm2() == 1 {
            let i = root.0.iter().position(|&a| a != 0).expect("nonzero root") + 1;
            self.g.cartan(i).scale(&int(2 * root.0[i - 1] as i64))
        } else {
            self.g.coroot(root)
        }
    }

    /// `x(n)` for an arbitrary element.
    pub fn elem(&self, x: LieElement, n: i32) -> LoopFactor {
        LoopFactor::new(x, n)
    }
}
