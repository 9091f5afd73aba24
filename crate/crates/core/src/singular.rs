//! The singular vectors `v_B` (degree 2, weight `2ε_1`) and `v_D` (degree 4,
//! weight `2θ`) at level `-l + 3/2`, a singularity checker, and a brute-force
//! solver for the singular space of a given degree and weight.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebra, LieElement, LieType, Root};
use crate::linalg::FractionFreeEchelon;
use crate::notation::Letters;
use crate::rational::{int, q, Rational};
use crate::verma::{diff_terms, Factor, Grade, Monomial, OperatorWord, PbwState, VermaModule};

/// Default degree bound for [`solve_singular_space`].
pub const DEFAULT_DEGREE_BOUND: u32 = 4;

/// One named summand (or indexed sum) of a transcribed formula.
#[derive(Debug, Clone)]
pub struct TermFamily {
    pub label: &'static str,
    pub word: OperatorWord,
}

/// Evaluates `Σ families` on the vacuum.
pub fn evaluate(module: &VermaModule, families: &[TermFamily]) -> Result<PbwState> {
    let mut total = module.zero();
    for fam in families {
        total.add_assign(&module.apply_word(&fam.word, &module.vacuum())?)?;
    }
    Ok(total)
}

fn require(module: &VermaModule, ty: LieType) -> Result<&LieAlgebra> {
    let g = module.algebra();
    if g.ty() != ty {
        return Err(Error::Unsupported(format!("expected type {ty}, got {}", g.id())));
    }
    Ok(g)
}

/// Summands of `v_B`: `-1/4 e_{ε_1}(-1)^2` then `e_{ε_1-ε_j}(-1) e_{ε_1+ε_j}(-1)`
/// for `j = 2..l`.
pub fn vb_terms(g: &LieAlgebra) -> Vec<(Rational, Vec<crate::verma::LoopFactor>)> {
    let s = Letters::new(g);
    let e1 = s.eps(1);
    let mut out = vec![(q(-1, 4), vec![s.e(&e1, -1), s.e(&e1, -1)])];
    for j in 2..=g.rank() {
        out.push((int(1), vec![s.e(&s.minus(1, j), -1), s.e(&s.plus(1, j), -1)]));
    }
    out
}

pub fn build_vb(module: &VermaModule) -> Result<PbwState> {
    let g = require(module, LieType::B)?;
    let mut word = OperatorWord::new();
    for (c, fs) in vb_terms(g) {
        word.push(c, fs);
    }
    module.apply_word(&word, &module.vacuum())
}

/// Number of term families in [`vd_families`]; guards transcription drift.
pub const VD_FAMILY_COUNT: usize = 41;

/// The term families of `v_D`, in display order. Unmarked modes are `-1`.
pub fn vd_families(g: &LieAlgebra) -> Vec<TermFamily> {
    let s = Letters::new(g);
    let l = g.rank();
    let li = l as i64;
    let (p, m) = (|i, j| s.plus(i, j), |i, j| s.minus(i, j));
    let e = |r: Root| s.e(&r, -1);
    let e2 = |r: Root| s.e(&r, -2);
    let f = |r: Root| s.f(&r, -1);
    let h = |r: Root| s.h(&r, -1);
    let theta = p(1, 2);
    let idx = || 3..=l;

    let a = 2 * li + 1;
    let b = 2 * li - 5;
    let c = 2 * li - 1;

    let mut fams = Vec::new();
    let mut fam = |label: &'static str, build: &dyn Fn(&mut OperatorWord)| {
        let mut w = OperatorWord::new();
        build(&mut w);
        fams.push(TermFamily { label, word: w });
    };

    fam("e1-i e1+i e2-j e2+j, j != i", &|w| {
        for i in idx() {
            for j in idx().filter(|&j| j != i) {
                w.push(q(2 * a, 3), vec![e(m(1, i)), e(p(1, i)), e(m(2, j)), e(p(2, j))]);
            }
        }
    });
    fam("e1-i e1+i e2-i e2+i", &|w| {
        for i in idx() {
            w.push(q(a, 3), vec![e(m(1, i)), e(p(1, i)), e(m(2, i)), e(p(2, i))]);
        }
    });
    fam("e1-i e2+i e1+j e2-j, j != i", &|w| {
        for i in idx() {
            for j in idx().filter(|&j| j != i) {
                w.push(q(-a, 3), vec![e(m(1, i)), e(p(2, i)), e(p(1, j)), e(m(2, j))]);
            }
        }
    });
    fam("e1-i e2+i e1-j e2+j", &|w| {
        for i in idx() {
            for j in idx() {
                w.push(q(-a, 6), vec![e(m(1, i)), e(p(2, i)), e(m(1, j)), e(p(2, j))]);
            }
        }
    });
    fam("e1+i e2-i e1+j e2-j", &|w| {
        for i in idx() {
            for j in idx() {
                w.push(q(-a, 6), vec![e(p(1, i)), e(m(2, i)), e(p(1, j)), e(m(2, j))]);
            }
        }
    });
    fam("θ e1+j e2-i f_{j-i}, j < i", &|w| {
        for i in idx() {
            for j in 3..i {
                w.push(int(2), vec![e(theta.clone()), e(p(1, j)), e(m(2, i)), f(m(j, i))]);
            }
        }
    });
    fam("θ e1+j e2-i e_{i-j}, j > i", &|w| {
        for i in idx() {
            for j in i + 1..=l {
                w.push(int(2), vec![e(theta.clone()), e(p(1, j)), e(m(2, i)), e(m(i, j))]);
            }
        }
    });
    fam("θ e1-j e2-i e_{j+i}, j < i", &|w| {
        for i in idx() {
            for j in 3..i {
                w.push(int(-2), vec![e(theta.clone()), e(m(1, j)), e(m(2, i)), e(p(j, i))]);
            }
        }
    });
    fam("θ e1-j e2-i e_{i+j}, j > i", &|w| {
        for i in idx() {
            for j in i + 1..=l {
                w.push(int(2), vec![e(theta.clone()), e(m(1, j)), e(m(2, i)), e(p(i, j))]);
            }
        }
    });
    fam("θ e2+i e1+j f_{j+i}, j < i", &|w| {
        for i in idx() {
            for j in 3..i {
                w.push(int(2), vec![e(theta.clone()), e(p(2, i)), e(p(1, j)), f(p(j, i))]);
            }
        }
    });
    fam("θ e2+i e1+j f_{i+j}, j > i", &|w| {
        for i in idx() {
            for j in i + 1..=l {
                w.push(int(-2), vec![e(theta.clone()), e(p(2, i)), e(p(1, j)), f(p(i, j))]);
            }
        }
    });
    fam("θ e2+i e1-j e_{j-i}, j < i", &|w| {
        for i in idx() {
            for j in 3..i {
                w.push(int(-2), vec![e(theta.clone()), e(p(2, i)), e(m(1, j)), e(m(j, i))]);
            }
        }
    });
    fam("θ e2+i e1-j f_{i-j}, j > i", &|w| {
        for i in idx() {
            for j in i + 1..=l {
                w.push(int(-2), vec![e(theta.clone()), e(p(2, i)), e(m(1, j)), f(m(i, j))]);
            }
        }
    });
    fam("θ f1-2 e1-i e1+i", &|w| {
        for i in idx() {
            w.push(q(-2 * b, 3), vec![e(theta.clone()), f(m(1, 2)), e(m(1, i)), e(p(1, i))]);
        }
    });
    fam("θ e1-2 e2-i e2+i", &|w| {
        for i in idx() {
            w.push(q(2 * b, 3), vec![e(theta.clone()), e(m(1, 2)), e(m(2, i)), e(p(2, i))]);
        }
    });
    fam("θ e1+i e2-i h_{εi}", &|w| {
        for i in idx() {
            w.push(int(1), vec![e(theta.clone()), e(p(1, i)), e(m(2, i)), h(s.eps(i))]);
        }
    });
    fam("θ e1+i e2-i h_{1-2}", &|w| {
        for i in idx() {
            w.push(q(b, 3), vec![e(theta.clone()), e(p(1, i)), e(m(2, i)), h(m(1, 2))]);
        }
    });
    fam("θ e1-i e2+i h_{εi}", &|w| {
        for i in idx() {
            w.push(int(-1), vec![e(theta.clone()), e(m(1, i)), e(p(2, i)), h(s.eps(i))]);
        }
    });
    fam("θ e1-i e2+i h_{1-2}", &|w| {
        for i in idx() {
            w.push(q(b, 3), vec![e(theta.clone()), e(m(1, i)), e(p(2, i)), h(m(1, 2))]);
        }
    });
    fam("θ e1+i(-2) e2-i", &|w| {
        for i in idx() {
            w.push(q(b, 3), vec![e(theta.clone()), e2(p(1, i)), e(m(2, i))]);
        }
    });
    fam("θ e1-i(-2) e2+i", &|w| {
        for i in idx() {
            w.push(q(b, 3), vec![e(theta.clone()), e2(m(1, i)), e(p(2, i))]);
        }
    });
    fam("θ(-2) e1+i e2-i", &|w| {
        for i in idx() {
            w.push(q(-a * (li - 3), 3), vec![e2(theta.clone()), e(p(1, i)), e(m(2, i))]);
        }
    });
    fam("θ(-2) e1-i e2+i", &|w| {
        for i in idx() {
            w.push(q(-a * (li - 3), 3), vec![e2(theta.clone()), e(m(1, i)), e(p(2, i))]);
        }
    });
    fam("θ e1+i e2-i(-2)", &|w| {
        for i in idx() {
            w.push(q(-b, 3), vec![e(theta.clone()), e(p(1, i)), e2(m(2, i))]);
        }
    });
    fam("θ e1-i e2+i(-2)", &|w| {
        for i in idx() {
            w.push(q(-b, 3), vec![e(theta.clone()), e(m(1, i)), e2(p(2, i))]);
        }
    });
    fam("θ(-2) θ h_{1-2}", &|w| {
        w.push(q(b * c, 6), vec![e2(theta.clone()), e(theta.clone()), h(m(1, 2))]);
    });
    fam("θ(-2) θ h_{ε1}", &|w| {
        w.push(q(-b, 2), vec![e2(theta.clone()), e(theta.clone()), h(s.eps(1))]);
    });
    fam("θ(-2)^2", &|w| {
        w.push(q(-a * b * (2 * li - 7), 24), vec![e2(theta.clone()), e2(theta.clone())]);
    });
    fam("θ θ(-3)", &|w| {
        w.push(q(b * b, 2), vec![e(theta.clone()), s.e(&theta, -3)]);
    });

    let sym = |w: &mut OperatorWord, coeff: Rational, r: Root| {
        w.push(coeff.clone(), vec![e(theta.clone()), e(theta.clone()), e(r.clone()), f(r.clone())]);
        w.push(coeff, vec![e(theta.clone()), e(theta.clone()), f(r.clone()), e(r)]);
    };
    fam("θ^2 (ef + fe)_{1-2}", &|w| {
        sym(w, q(-2 * b * (li - 2), 3 * c), m(1, 2));
    });
    fam("θ^2 (ef + fe)_{2-i}", &|w| {
        for i in idx() {
            sym(w, q(b, c), m(2, i));
        }
    });
    fam("θ^2 (ef + fe)_{2+i}", &|w| {
        for i in idx() {
            sym(w, q(b, c), p(2, i));
        }
    });
    fam("θ^2 (ef + fe)_{1-i}", &|w| {
        for i in idx() {
            sym(w, q(b, c), m(1, i));
        }
    });
    fam("θ^2 (ef + fe)_{1+i}", &|w| {
        for i in idx() {
            sym(w, q(b, c), p(1, i));
        }
    });
    fam("θ^2 (ef + fe)_{1+2}", &|w| {
        sym(w, q(b, c), p(1, 2));
    });
    fam("θ^2 (ef + fe)_α, α ⊥ ε1, ε2", &|w| {
        for alpha in g.positive_roots() {
            if alpha.0[0] == 0 && alpha.0[1] == 0 && alpha.norm2() == 2 {
                sym(w, q(-4, c), alpha.clone());
            }
        }
    });
    fam("θ^2 h_{1-2}^2", &|w| {
        w.push(q(-b, 6), vec![e(theta.clone()), e(theta.clone()), h(m(1, 2)), h(m(1, 2))]);
    });
    fam("θ^2 h_{ε1}^2", &|w| {
        w.push(q(-1, 2 * c), vec![e(theta.clone()), e(theta.clone()), h(s.eps(1)), h(s.eps(1))]);
    });
    fam("θ^2 h_{1-2} h_{1+2}", &|w| {
        w.push(q(-b, c), vec![e(theta.clone()), e(theta.clone()), h(m(1, 2)), h(p(1, 2))]);
    });
    fam("θ^2 h_{1-i} h_{1+i}", &|w| {
        for i in idx() {
            w.push(q(4, c), vec![e(theta.clone()), e(theta.clone()), h(m(1, i)), h(p(1, i))]);
        }
    });
    fam("θ^2 h_{1+2}(-2)", &|w| {
        w.push(q(b, 2), vec![e(theta.clone()), e(theta.clone()), s.h(&theta, -2)]);
    });
    fams
}

pub fn build_vd(module: &VermaModule) -> Result<PbwState> {
    let g = require(module, LieType::D)?;
    evaluate(module, &vd_families(g))
}

/// The operators `e_{α_i}(0)` for the simple roots and `f_θ(1)`; with
/// `strict`, also `e_α(0)` for every positive root and `x(1)` for every basis
/// element.
pub fn raising_operators(g: &LieAlgebra, strict: bool) -> Vec<(String, LieElement, i32)> {
    let mut ops: Vec<(String, LieElement, i32)> = g
        .simple_roots()
        .iter()
        .map(|r| (format!("e_{r}(0)"), g.e(r), 0))
        .collect();
    ops.push((format!("f_{}(1)", g.theta()), g.f(&g.theta()), 1));
    if strict {
        for r in g.positive_roots() {
            if !g.simple_roots().contains(r) {
                ops.push((format!("e_{r}(0)"), g.e(r), 0));
            }
        }
        for i in 0..g.dim() {
            ops.push((format!("{}(1)", g.label(i)), g.basis_element(i), 1));
        }
    }
    ops
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub generator: String,
    /// Monomial → coefficient of the residual; empty means it vanished.
    pub residual: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularReport {
    pub vector: String,
    pub algebra: String,
    pub level: String,
    pub terms: usize,
    pub grade: Grade,
    pub checks: Vec<GeneratorCheck>,
    pub pass: bool,
}

/// Applies every raising operator to `v` and records the residuals.
pub fn check_singular(
    module: &VermaModule,
    name: &str,
    v: &PbwState,
    strict: bool,
) -> Result<SingularReport> {
    let g = module.algebra();
    let checks = raising_operators(g, strict)
        .into_par_iter()
        .map(|(label, x, n)| {
            let r = module.apply_element(&x, n, v)?;
            Ok(GeneratorCheck {
                generator: label,
                residual: diff_terms(g, &r),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = !v.is_zero() && checks.iter().all(|c| c.residual.is_empty());
    Ok(SingularReport {
        vector: name.to_string(),
        algebra: g.id().to_string(),
        level: module.level().to_string(),
        terms: v.len(),
        grade: v.grade(g),
        checks,
        pass,
    })
}

/// All canonical monomials of the given degree and `h`-weight.
pub fn candidate_monomials(g: &LieAlgebra, degree: u32, weight: &Root) -> Vec<Monomial> {
    let weights: Vec<Root> = (0..g.dim()).map(|i| g.weight_of(i)).collect();
    let max_l1 = weights
        .iter()
        .map(|w| w.0.iter().map(|a| a.unsigned_abs()).sum::<u32>())
        .max()
        .unwrap_or(0);
    let mut out = Vec::new();
    let mut current = Monomial::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        weights: &[Root],
        max_l1: u32,
        remaining: u32,
        target: &Root,
        min: Option<Factor>,
        current: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            if target.is_zero() {
                out.push(current.clone());
            }
            return;
        }
        let l1: u32 = target.0.iter().map(|a| a.unsigned_abs()).sum();
        if l1 > max_l1 * remaining {
            return;
        }
        for mode in (-(remaining as i32))..=-1 {
            for (index, w) in weights.iter().enumerate() {
                let f = Factor::new(index, mode);
                if min.is_some_and(|m| f < m) {
                    continue;
                }
                current.push(f);
                go(
                    weights,
                    max_l1,
                    remaining - (-mode) as u32,
                    &target.sub(w),
                    Some(f),
                    current,
                    out,
                );
                current.pop();
            }
        }
    }
    go(&weights, max_l1, degree, weight, None, &mut current, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct SingularSpace {
    pub candidates: usize,
    pub equations: usize,
    pub basis: Vec<PbwState>,
}

/// Solves `X v = 0` for every raising operator `X` over the span of all
/// canonical monomials of the given degree and weight.
pub fn solve_singular_space(
    module: &VermaModule,
    degree: u32,
    weight: &Root,
    strict: bool,
    degree_bound: u32,
) -> Result<SingularSpace> {
    if degree > degree_bound {
        return Err(Error::DegreeBound {
            degree,
            bound: degree_bound,
        });
    }
    let g = module.algebra();
    let candidates = candidate_monomials(g, degree, weight);
    let ops = raising_operators(g, strict);
    let images: Vec<Vec<PbwState>> = candidates
        .par_iter()
        .map(|m| {
            let state = PbwState::monomial(g.id(), m.clone(), Rational::one());
            ops.iter()
                .map(|(_, x, n)| module.apply_element(x, *n, &state))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut row_of: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    for (col, per_op) in images.iter().enumerate() {
        for (op, image) in per_op.iter().enumerate() {
            for (mono, c) in image.terms() {
                let next = rows.len();
                let r = *row_of.entry((op, mono.clone())).or_insert(next);
                if r == rows.len() {
                    rows.push(BTreeMap::new());
                }
                *rows[r].entry(col).or_insert_with(Rational::zero) += c;
            }
        }
    }
    let mut ech = FractionFreeEchelon::new();
    for row in &rows {
        ech.push(crate::linalg::primitive_row(row));
    }
    let basis = ech
        .nullspace(candidates.len())
        .into_iter()
        .map(|v| {
            let mut s = module.zero();
            for (m, c) in candidates.iter().zip(v) {
                if !c.is_zero() {
                    s.add_assign(&PbwState::monomial(g.id(), m.clone(), c))
                        .expect("same handle");
                }
            }
            s
        })
        .collect();
    Ok(SingularSpace {
        candidates: candidates.len(),
        equations: rows.len(),
        basis,
    })
}

/// One displayed identity `e_{ε_1-ε_2}(0) · lhs = rhs`, instantiated at
/// particular indices.
#[derive(Debug, Clone)]
pub struct AppendixRelation {
    pub label: String,
    pub lhs: OperatorWord,
    pub rhs: OperatorWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub label: String,
    pub holds: bool,
    /// `computed - stated`, empty when the identity holds.
    pub difference: BTreeMap<String, String>,
}

/// The per-monomial identities for `e_{ε_1-ε_2}(0)` acting on the summands
/// of `v_D`, one entry per index instance.
pub fn appendix_relations(g: &LieAlgebra) -> Vec<AppendixRelation> {
    let s = Letters::new(g);
    let l = g.rank();
    let (p, m) = (|i, j| s.plus(i, j), |i, j| s.minus(i, j));
    let e = |r: Root| s.e(&r, -1);
    let e2 = |r: Root| s.e(&r, -2);
    let f = |r: Root| s.f(&r, -1);
    let h = |r: Root| s.h(&r, -1);
    let th = || e(p(1, 2));
    let w = |terms: Vec<(Rational, Vec<crate::verma::LoopFactor>)>| {
        let mut out = OperatorWord::new();
        for (c, fs) in terms {
            out.push(c, fs);
        }
        out
    };
    let one = || int(1);
    let mut rels = Vec::new();
    let mut add = |label: String, lhs: Vec<crate::verma::LoopFactor>, rhs: OperatorWord| {
        rels.push(AppendixRelation {
            label,
            lhs: OperatorWord::new().term(one(), lhs),
            rhs,
        });
    };
    let pairs = |cond: fn(usize, usize) -> bool| {
        (3..=l)
            .flat_map(move |i| (3..=l).map(move |j| (i, j)))
            .filter(move |&(i, j)| cond(i, j))
            .collect::<Vec<_>>()
    };

    for (i, j) in pairs(|_, _| true) {
        add(
            format!("aux1[i={i},j={j}]"),
            vec![e(m(1, i)), e(p(1, i)), e(m(2, j)), e(p(2, j))],
            w(vec![
                (one(), vec![e(m(1, i)), e(p(1, i)), e(m(1, j)), e(p(2, j))]),
                (one(), vec![e(m(1, i)), e(p(1, i)), e(p(1, j)), e(m(2, j))]),
                (one(), vec![e(m(1, i)), e(p(1, i)), e2(p(1, 2))]),
            ]),
        );
    }
    for (i, j) in pairs(|i, j| i != j) {
        add(
            format!("aux2[i={i},j={j}]"),
            vec![e(m(1, i)), e(p(2, i)), e(p(1, j)), e(m(2, j))],
            w(vec![
                (one(), vec![e(m(1, i)), e(p(1, i)), e(p(1, j)), e(m(2, j))]),
                (one(), vec![e(m(1, i)), e(p(2, i)), e(p(1, j)), e(m(1, j))]),
            ]),
        );
        add(
            format!("aux3[i={i},j={j}]"),
            vec![e(m(1, i)), e(p(2, i)), e(m(1, j)), e(p(2, j))],
            w(vec![
                (one(), vec![e(m(1, i)), e(p(1, i)), e(m(1, j)), e(p(2, j))]),
                (one(), vec![e(m(1, i)), e(p(2, i)), e(m(1, j)), e(p(1, j))]),
            ]),
        );
    }
    for i in 3..=l {
        add(
            format!("aux4[i={i}]"),
            vec![e(m(1, i)), e(p(2, i)), e(m(1, i)), e(p(2, i))],
            w(vec![
                (int(2), vec![e(m(1, i)), e(m(1, i)), e(p(1, i)), e(p(2, i))]),
                (one(), vec![e2(p(1, 2)), e(m(1, i)), e(p(1, i))]),
            ]),
        );
    }
    for (i, j) in pairs(|i, j| i != j) {
        add(
            format!("aux5[i={i},j={j}]"),
            vec![e(p(1, i)), e(m(2, i)), e(p(1, j)), e(m(2, j))],
            w(vec![
                (one(), vec![e(p(1, i)), e(m(1, i)), e(p(1, j)), e(m(2, j))]),
                (one(), vec![e(p(1, i)), e(m(2, i)), e(p(1, j)), e(m(1, j))]),
            ]),
        );
    }
    for i in 3..=l {
        add(
            format!("aux6[i={i}]"),
            vec![e(p(1, i)), e(m(2, i)), e(p(1, i)), e(m(2, i))],
            w(vec![
                (int(2), vec![e(p(1, i)), e(p(1, i)), e(m(1, i)), e(m(2, i))]),
                (one(), vec![e2(p(1, 2)), e(p(1, i)), e(m(1, i))]),
            ]),
        );
    }
    for (i, j) in pairs(|i, j| j < i) {
        add(
            format!("aux7[i={i},j={j}]"),
            vec![th(), e(p(1, j)), e(m(2, i)), f(m(j, i))],
            w(vec![(one(), vec![th(), e(p(1, j)), e(m(1, i)), f(m(j, i))])]),
        );
    }
    for (i, j) in pairs(|i, j| i < j) {
        add(
            format!("aux8[i={i},j={j}]"),
            vec![th(), e(p(1, j)), e(m(2, i)), e(m(i, j))],
            w(vec![(one(), vec![th(), e(p(1, j)), e(m(1, i)), e(m(i, j))])]),
        );
    }
    for (i, j) in pairs(|i, j| i != j) {
        add(
            format!("aux9[i={i},j={j}]"),
            vec![th(), e(m(1, j)), e(m(2, i)), e(p(i.min(j), i.max(j)))],
            w(vec![(one(), vec![th(), e(m(1, j)), e(m(1, i)), e(p(i.min(j), i.max(j)))])]),
        );
        add(
            format!("aux10[i={i},j={j}]"),
            vec![th(), e(p(2, i)), e(p(1, j)), f(p(i.min(j), i.max(j)))],
            w(vec![(one(), vec![th(), e(p(1, i)), e(p(1, j)), f(p(i.min(j), i.max(j)))])]),
        );
    }
    for (i, j) in pairs(|i, j| j < i) {
        add(
            format!("aux11[i={i},j={j}]"),
            vec![th(), e(p(2, i)), e(m(1, j)), e(m(j, i))],
            w(vec![(one(), vec![th(), e(p(1, i)), e(m(1, j)), e(m(j, i))])]),
        );
    }
    for (i, j) in pairs(|i, j| i < j) {
        add(
            format!("aux12[i={i},j={j}]"),
            vec![th(), e(p(2, i)), e(m(1, j)), f(m(i, j))],
            w(vec![(one(), vec![th(), e(p(1, i)), e(m(1, j)), f(m(i, j))])]),
        );
    }
    for i in 3..=l {
        add(
            format!("aux13[i={i}]"),
            vec![th(), f(m(1, 2)), e(m(1, i)), e(p(1, i))],
            w(vec![
                (one(), vec![th(), e(p(1, i)), e2(m(1, i))]),
                (one(), vec![th(), e(m(1, i)), e2(p(1, i))]),
                (one(), vec![th(), e(m(1, i)), e(p(1, i)), h(m(1, 2))]),
            ]),
        );
        add(
            format!("aux14[i={i}]"),
            vec![th(), e(m(1, 2)), e(m(2, i)), e(p(2, i))],
            w(vec![
                (one(), vec![th(), e(m(1, 2)), e(m(1, i)), e(p(2, i))]),
                (one(), vec![th(), e(m(1, 2)), e2(p(1, 2))]),
                (one(), vec![th(), e(m(1, 2)), e(p(1, i)), e(m(2, i))]),
            ]),
        );
        add(
            format!("aux15[i={i}]"),
            vec![th(), e(p(1, i)), e(m(2, i)), h(s.eps(i))],
            w(vec![(one(), vec![th(), e(p(1, i)), e(m(1, i)), h(s.eps(i))])]),
        );
        add(
            format!("aux16[i={i}]"),
            vec![th(), e(p(1, i)), e(m(2, i)), h(m(1, 2))],
            w(vec![
                (one(), vec![th(), e(p(1, i)), e(m(1, i)), h(m(1, 2))]),
                (int(-2), vec![th(), e(m(1, 2)), e(p(1, i)), e(m(2, i))]),
                (int(2), vec![th(), e(p(1, i)), e2(m(1, i))]),
            ]),
        );
        add(
            format!("aux17[i={i}]"),
            vec![th(), e(m(1, i)), e(p(2, i)), h(s.eps(i))],
            w(vec![(one(), vec![th(), e(m(1, i)), e(p(1, i)), h(s.eps(i))])]),
        );
        add(
            format!("aux18[i={i}]"),
            vec![th(), e(m(1, i)), e(p(2, i)), h(m(1, 2))],
            w(vec![
                (one(), vec![th(), e(m(1, i)), e(p(1, i)), h(m(1, 2))]),
                (int(-2), vec![th(), e(m(1, 2)), e(m(1, i)), e(p(2, i))]),
                (int(2), vec![th(), e(m(1, i)), e2(p(1, i))]),
            ]),
        );
        add(
            format!("aux19[i={i}]"),
            vec![th(), e2(p(1, i)), e(m(2, i))],
            w(vec![(one(), vec![th(), e2(p(1, i)), e(m(1, i))])]),
        );
        add(
            format!("aux20[i={i}]"),
            vec![th(), e2(m(1, i)), e(p(2, i))],
            w(vec![(one(), vec![th(), e2(m(1, i)), e(p(1, i))])]),
        );
        add(
            format!("aux21[i={i}]"),
            vec![e2(p(1, 2)), e(p(1, i)), e(m(2, i))],
            w(vec![(one(), vec![e2(p(1, 2)), e(p(1, i)), e(m(1, i))])]),
        );
        add(
            format!("aux22[i={i}]"),
            vec![e2(p(1, 2)), e(m(1, i)), e(p(2, i))],
            w(vec![(one(), vec![e2(p(1, 2)), e(m(1, i)), e(p(1, i))])]),
        );
        add(
            format!("aux23[i={i}]"),
            vec![th(), e(p(1, i)), e2(m(2, i))],
            w(vec![(one(), vec![th(), e(p(1, i)), e2(m(1, i))])]),
        );
        add(
            format!("aux24[i={i}]"),
            vec![th(), e(m(1, i)), e2(p(2, i))],
            w(vec![(one(), vec![th(), e(m(1, i)), e2(p(1, i))])]),
        );
    }
    add(
        "aux25".into(),
        vec![e2(p(1, 2)), th(), h(m(1, 2))],
        w(vec![(int(-2), vec![e2(p(1, 2)), th(), e(m(1, 2))])]),
    );
    add(
        "aux26".into(),
        vec![e2(p(1, 2)), th(), h(s.eps(1))],
        w(vec![(int(-2), vec![e2(p(1, 2)), th(), e(m(1, 2))])]),
    );
    add("aux27".into(), vec![e2(p(1, 2)), e2(p(1, 2))], OperatorWord::new());
    add("aux28".into(), vec![th(), s.e(&p(1, 2), -3)], OperatorWord::new());

    let sym = |r: Root| {
        vec![
            vec![th(), th(), e(r.clone()), f(r.clone())],
            vec![th(), th(), f(r.clone()), e(r)],
        ]
    };
    let mut add_sym = |label: String, r: Root, rhs: OperatorWord| {
        let mut lhs = OperatorWord::new();
        for fs in sym(r) {
            lhs.push(one(), fs);
        }
        rels.push(AppendixRelation { label, lhs, rhs });
    };
    add_sym(
        "aux29".into(),
        m(1, 2),
        w(vec![
            (int(2), vec![th(), th(), e(m(1, 2)), h(m(1, 2))]),
            (int(2), vec![th(), th(), e2(m(1, 2))]),
        ]),
    );
    for i in 3..=l {
        add_sym(
            format!("aux30[i={i}]"),
            m(2, i),
            w(vec![
                (int(2), vec![th(), th(), e(m(1, i)), f(m(2, i))]),
                (int(-1), vec![th(), th(), e2(m(1, 2))]),
            ]),
        );
        add_sym(
            format!("aux31[i={i}]"),
            p(2, i),
            w(vec![
                (int(2), vec![th(), th(), e(p(1, i)), f(p(2, i))]),
                (int(-1), vec![th(), th(), e2(m(1, 2))]),
            ]),
        );
        add_sym(
            format!("aux32[i={i}]"),
            m(1, i),
            w(vec![
                (int(-2), vec![th(), th(), e(m(1, i)), f(m(2, i))]),
                (one(), vec![th(), th(), e2(m(1, 2))]),
            ]),
        );
        add_sym(
            format!("aux33[i={i}]"),
            p(1, i),
            w(vec![
                (int(-2), vec![th(), th(), e(p(1, i)), f(p(2, i))]),
                (one(), vec![th(), th(), e2(m(1, 2))]),
            ]),
        );
    }
    add_sym("aux34".into(), p(1, 2), OperatorWord::new());
    for alpha in g.positive_roots() {
        if alpha.0[0] == 0 && alpha.0[1] == 0 && alpha.norm2() == 2 {
            add_sym(format!("aux35[α={alpha}]"), alpha.clone(), OperatorWord::new());
        }
    }
    let mut add = |label: String, lhs: Vec<crate::verma::LoopFactor>, rhs: OperatorWord| {
        rels.push(AppendixRelation {
            label,
            lhs: OperatorWord::new().term(one(), lhs),
            rhs,
        });
    };
    add(
        "aux36".into(),
        vec![th(), th(), h(m(1, 2)), h(m(1, 2))],
        w(vec![
            (int(-4), vec![th(), th(), e(m(1, 2)), h(m(1, 2))]),
            (int(-4), vec![th(), th(), e2(m(1, 2))]),
        ]),
    );
    add(
        "aux37".into(),
        vec![th(), th(), h(s.eps(1)), h(s.eps(1))],
        w(vec![
            (int(-4), vec![th(), th(), e(m(1, 2)), h(s.eps(1))]),
            (int(-4), vec![th(), th(), e2(m(1, 2))]),
        ]),
    );
    add(
        "aux38".into(),
        vec![th(), th(), h(m(1, 2)), h(p(1, 2))],
        w(vec![(int(-2), vec![th(), th(), e(m(1, 2)), h(p(1, 2))])]),
    );
    for i in 3..=l {
        add(
            format!("aux39[i={i}]"),
            vec![th(), th(), h(m(1, i)), h(p(1, i))],
            w(vec![
                (int(-1), vec![th(), th(), e(m(1, 2)), h(s.eps(1))]),
                (int(-1), vec![th(), th(), e2(m(1, 2))]),
            ]),
        );
    }
    add("aux40".into(), vec![th(), th(), s.h(&p(1, 2), -2)], OperatorWord::new());
    rels
}

/// Checks each appendix identity in `N_D(k, 0)`.
pub fn verify_appendix(module: &VermaModule) -> Result<Vec<RelationVerdict>> {
    let g = require(module, LieType::D)?;
    let raise = g.e(&Root::minus(g.rank(), 1, 2));
    appendix_relations(g)
        .into_par_iter()
        .map(|rel| {
            let lhs = module.apply_word(&rel.lhs, &module.vacuum())?;
            let lhs = module.apply_element(&raise, 0, &lhs)?;
            let rhs = module.apply_word(&rel.rhs, &module.vacuum())?;
            let diff = lhs.sub(&rhs)?;
            Ok(RelationVerdict {
                label: rel.label,
                holds: diff.is_zero(),
                difference: diff_terms(g, &diff),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_algebra;

    fn module(ty: LieType, l: usize) -> VermaModule {
        VermaModule::new(build_algebra(ty, l).unwrap(), crate::embedding_level(l))
    }

    #[test]
    fn vb_shape() {
        let m = module(LieType::B, 4);
        let g = m.algebra().clone();
        assert_eq!(vb_terms(&g).len(), 4);
        let v = build_vb(&m).unwrap();
        let e1 = g.e_index(&Root::eps(4, 1)).unwrap();
        assert_eq!(
            v.coefficient(&[Factor::new(e1, -1), Factor::new(e1, -1)]),
            q(-1, 4)
        );
        let grade = v.grade(&g);
        assert_eq!(grade.degree, Some(2));
        assert_eq!(grade.h_weight, Some(Root::eps(4, 1).scale(2)));

        let g5 = build_algebra(LieType::B, 5).unwrap();
        let t4: Vec<String> = vb_terms(&g).iter().map(|(_, fs)| format!("{fs:?}")).collect();
        let t5 = vb_terms(&g5);
        assert_eq!(t5.len(), 5);
        for ((c4, f4), (c5, f5)) in vb_terms(&g).iter().zip(&t5) {
            assert_eq!(c4, c5);
            let labels = |fs: &[crate::verma::LoopFactor], h: &LieAlgebra| {
                fs.iter()
                    .map(|f| h.label(f.element.terms().next().unwrap().0))
                    .collect::<Vec<_>>()
            };
            assert_eq!(labels(f4, &g), labels(f5, &g5));
        }
        assert_eq!(t4.len(), 4);
    }

    #[test]
    fn vd_family_checksum() {
        for l in 4..=6 {
            let g = build_algebra(LieType::D, l).unwrap();
            let fams = vd_families(&g);
            assert_eq!(fams.len(), VD_FAMILY_COUNT);
            // double sums over i, j in 3..=l with j != i
            let n = (l - 2) * (l - 3);
            assert_eq!(fams[0].word.len(), n);
            assert_eq!(fams[2].word.len(), n);
        }
    }

    // covers: vd-weight
    #[test]
    fn vd_grade_and_top_coefficient() {
        let m = module(LieType::D, 4);
        let g = m.algebra().clone();
        let v = build_vd(&m).unwrap();
        let grade = v.grade(&g);
        assert_eq!(grade.degree, Some(4));
        assert_eq!(grade.h_weight, Some(g.theta().scale(2)));
        let t = g.e_index(&g.theta()).unwrap();
        assert_eq!(
            v.coefficient(&[Factor::new(t, -2), Factor::new(t, -2)]),
            q(-9, 8)
        );
    }

    // covers: vb-singular
    #[test]
    fn vb_is_singular() {
        for l in 4..=6 {
            let m = module(LieType::B, l);
            let r = check_singular(&m, "v_B", &build_vb(&m).unwrap(), false).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    // covers: vd-singular
    #[test]
    fn vd_is_singular() {
        for l in 4..=6 {
            let m = module(LieType::D, l);
            let r = check_singular(&m, "v_D", &build_vd(&m).unwrap(), false).unwrap();
            assert!(r.pass, "l = {l}: {:#?}", r.checks);
        }
    }

    #[test]
    fn perturbed_vd_is_not_singular() {
        let m = module(LieType::D, 4);
        let g = m.algebra().clone();
        let mut fams = vd_families(&g);
        fams[27].word = fams[27].word.clone().scale(&q(2, 1));
        let v = evaluate(&m, &fams).unwrap();
        assert!(!check_singular(&m, "v", &v, false).unwrap().pass);
    }

    // covers: singular-uniqueness
    #[test]
    fn solver_recovers_vd_l4() {
        let m = module(LieType::D, 4);
        let g = m.algebra().clone();
        let space = solve_singular_space(&m, 4, &g.theta().scale(2), false, 4).unwrap();
        assert_eq!(space.basis.len(), 1, "{} candidates", space.candidates);
        assert!(space.basis[0].ratio_to(&build_vd(&m).unwrap()).is_some());
    }

    #[test]
    fn creation_of_theta_is_not_singular() {
        let m = module(LieType::D, 4);
        let g = m.algebra().clone();
        let s = m.apply(g.e_index(&g.theta()).unwrap(), -1, &m.vacuum()).unwrap();
        let r = check_singular(&m, "e_θ(-1)1", &s, false).unwrap();
        assert!(!r.pass);
        let last = r.checks.last().unwrap();
        assert!(last.generator.starts_with("f_"));
        assert_eq!(last.residual.get("1").map(String::as_str), Some("-5/2"));
    }

    #[test]
    fn scaling_preserves_singularity() {
        let m = module(LieType::B, 4);
        let v = build_vb(&m).unwrap();
        let a = check_singular(&m, "v", &v, false).unwrap();
        let b = check_singular(&m, "v", &v.scale(&q(-7, 3)), false).unwrap();
        assert_eq!(a.pass, b.pass);
    }

    // covers: singular-uniqueness
    #[test]
    fn solver_recovers_vb() {
        let m = module(LieType::B, 4);
        let space = solve_singular_space(&m, 2, &Root::eps(4, 1).scale(2), false, 4).unwrap();
        assert_eq!(space.basis.len(), 1);
        assert!(space.basis[0].ratio_to(&build_vb(&m).unwrap()).is_some());
        let g = m.algebra().clone();
        let none = solve_singular_space(&m, 1, &g.theta(), false, 4).unwrap();
        assert_eq!(none.candidates, 1);
        assert!(none.basis.is_empty());
        assert!(matches!(
            solve_singular_space(&m, 5, &g.theta(), false, 4),
            Err(Error::DegreeBound { .. })
        ));
    }

    // covers: appendix-relations
    #[test]
    fn appendix_relations_hold() {
        for l in 4..=6 {
            let m = module(LieType::D, l);
            let failed: Vec<_> = verify_appendix(&m)
                .unwrap()
                .into_iter()
                .filter(|v| !v.holds)
                .collect();
            assert!(failed.is_empty(), "l = {l}: {failed:#?}");
        }
    }
}
