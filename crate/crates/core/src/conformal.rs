//! Sugawara vectors, central charges, and the two certificates comparing the
//! conformal vectors of `N_B(k, 0)` and `N_D(k, 0)` modulo `U(ĝ_B) v_B`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::embedding::embed_state;
use crate::error::{Error, Result};
use crate::liealg::{build_algebra, LieAlgebra, LieElement, LieType, Root};
use crate::notation::Letters;
use crate::rational::{self, int, q, Rational};
use crate::singular::build_vb;
use crate::verma::{Grade, OperatorWord, PbwState, VermaModule};

#[derive(Debug, Clone)]
pub struct ConformalData {
    pub omega: PbwState,
    pub central_charge: Rational,
    pub level: Rational,
    pub dual_coxeter: i64,
}

/// `c = k dim g / (k + h∨)`.
pub fn central_charge(g: &LieAlgebra, k: &Rational) -> Result<Rational> {
    let shifted = k + int(g.dual_coxeter());
    if shifted.is_zero() {
        return Err(Error::CriticalLevel(k.to_string()));
    }
    Ok(k * int(g.dim() as i64) / shifted)
}

/// `Σ a^i(-1) b^i(-1) 1` over the given dual pairs.
pub fn casimir_state(module: &VermaModule, pairs: &[(LieElement, LieElement)]) -> Result<PbwState> {
    let mut total = module.zero();
    for (a, b) in pairs {
        let inner = module.apply_element(b, -1, &module.vacuum())?;
        total.add_assign(&module.apply_element(a, -1, &inner)?)?;
    }
    Ok(total)
}

/// `ω = Σ a^i(-1) b^i(-1) 1 / (2(k + h∨))`, with the module's level as `k`.
pub fn sugawara(module: &VermaModule) -> Result<ConformalData> {
    let g = module.algebra();
    let k = module.level().clone();
    let c = central_charge(g, &k)?;
    let prefactor = rational::one() / (int(2) * (&k + int(g.dual_coxeter())));
    let omega = casimir_state(module, &g.dual_basis())?.scale(&prefactor);
    Ok(ConformalData {
        omega,
        central_charge: c,
        level: k,
        dual_coxeter: g.dual_coxeter(),
    })
}

/// All rational `k`, away from both critical levels, with `c_D(k) = c_B(k)`.
pub fn solve_level_equation(l: usize) -> Result<Vec<Rational>> {
    let b = build_algebra(LieType::B, l)?;
    let d = build_algebra(LieType::D, l)?;
    let (nb, nd) = (int(b.dim() as i64), int(d.dim() as i64));
    let (hb, hd) = (int(b.dual_coxeter()), int(d.dual_coxeter()));
    // k nd (k + hb) = k nb (k + hd)  ⇔  k ((nd - nb) k + nd hb - nb hd) = 0
    let lead = &nd - &nb;
    let lin = &nd * &hb - &nb * &hd;
    let mut roots = vec![Rational::zero()];
    if !lead.is_zero() {
        roots.push(-lin / lead);
    }
    roots.retain(|k| !(k + &hb).is_zero() && !(k + &hd).is_zero());
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// `Σ (e_α(-1) f_α(-1) + f_α(-1) e_α(-1)) 1` over `roots`.
fn symmetrized(module: &VermaModule, roots: &[Root]) -> Result<PbwState> {
    let s = Letters::new(module.algebra());
    let mut w = OperatorWord::new();
    for r in roots {
        w.push(int(1), vec![s.e(r, -1), s.f(r, -1)]);
        w.push(int(1), vec![s.f(r, -1), s.e(r, -1)]);
    }
    module.apply_word(&w, &module.vacuum())
}

fn short_roots(g: &LieAlgebra) -> Vec<Root> {
    g.positive_roots().iter().filter(|r| r.norm2() == 1).cloned().collect()
}

fn long_roots(g: &LieAlgebra) -> Vec<Root> {
    g.positive_roots().iter().filter(|r| r.norm2() == 2).cloned().collect()
}

/// `u = (2l f_{ε_1}(0)^2 + 4 Σ_{i≥2} f_{ε_1-ε_i}(0) f_{ε_1+ε_i}(0)) · v_B`, an
/// element of `U(ĝ_B) v_B`.
pub fn certificate_vector(module: &VermaModule) -> Result<PbwState> {
    let g = module.algebra();
    let s = Letters::new(g);
    let l = g.rank();
    let mut w = OperatorWord::new();
    w.push(int(2 * l as i64), vec![s.f(&s.eps(1), 0), s.f(&s.eps(1), 0)]);
    for i in 2..=l {
        w.push(int(4), vec![s.f(&s.minus(1, i), 0), s.f(&s.plus(1, i), 0)]);
    }
    module.apply_word(&w, &build_vb(module)?)
}

/// `R = a Σ_short (ef + fe) - 4 Σ_long (ef + fe) - Σ_short h_α(-1)^2 1`,
/// normally with `a = 2l - 1`.
pub fn quadratic_relation_state(module: &VermaModule, a: &Rational) -> Result<PbwState> {
    let g = module.algebra();
    let s = Letters::new(g);
    let mut r = symmetrized(module, &short_roots(g))?.scale(a);
    r.add_scaled(&symmetrized(module, &long_roots(g))?, &int(-4))?;
    let mut w = OperatorWord::new();
    for root in short_roots(g) {
        w.push(int(-1), vec![s.h(&root, -1), s.h(&root, -1)]);
    }
    r.add_assign(&module.apply_word(&w, &module.vacuum())?)?;
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticReport {
    pub rank: usize,
    pub level: String,
    pub certificate_terms: usize,
    pub certificate_grade: Grade,
    pub relation_terms: usize,
    /// `R = s · u`; absent when no single scalar works.
    #[serde(with = "rational::serde_str_opt")]
    pub scalar: Option<Rational>,
    pub pass: bool,
}

fn quadratic_report(module: &VermaModule, a: &Rational) -> Result<QuadraticReport> {
    let g = module.algebra();
    let u = certificate_vector(module)?;
    let r = quadratic_relation_state(module, a)?;
    let scalar = if u.is_zero() { None } else { r.ratio_to(&u) };
    Ok(QuadraticReport {
        rank: g.rank(),
        level: module.level().to_string(),
        certificate_terms: u.len(),
        certificate_grade: u.grade(g),
        relation_terms: r.len(),
        pass: scalar.as_ref().is_some_and(|s| !s.is_zero()) && !r.is_zero(),
        scalar,
    })
}

/// Checks `R ∈ U(ĝ_B) v_B` by exhibiting `R = s · u`.
pub fn verify_quadratic_relation(module: &VermaModule) -> Result<QuadraticReport> {
    let l = module.algebra().rank() as i64;
    quadratic_report(module, &int(2 * l - 1))
}

/// The same check with `2l - 1` replaced by `a`; used as a negative control.
pub fn verify_quadratic_relation_with(module: &VermaModule, a: &Rational) -> Result<QuadraticReport> {
    quadratic_report(module, a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformalReport {
    pub rank: usize,
    #[serde(with = "rational::serde_str")]
    pub level: Rational,
    #[serde(with = "rational::serde_str")]
    pub c_b: Rational,
    #[serde(with = "rational::serde_str")]
    pub c_d: Rational,
    pub difference_terms: usize,
    pub difference_grade: Grade,
    /// `ω_B - ι(ω_D) = s' · u`; absent when no single scalar works.
    #[serde(with = "rational::serde_str_opt")]
    pub scalar: Option<Rational>,
    pub pass: bool,
}

/// Compares `ω_B` with the embedded `ω_D` in `N_B(k, 0)`.
pub fn verify_conformal_equality(l: usize, k: &Rational) -> Result<ConformalReport> {
    let b = VermaModule::new(build_algebra(LieType::B, l)?, k.clone());
    let d = VermaModule::new(build_algebra(LieType::D, l)?, k.clone());
    let wb = sugawara(&b)?;
    let wd = sugawara(&d)?;
    let delta = wb.omega.sub(&embed_state(d.algebra(), b.algebra(), &wd.omega)?)?;
    let u = certificate_vector(&b)?;
    let scalar = if u.is_zero() { None } else { delta.ratio_to(&u) };
    Ok(ConformalReport {
        rank: l,
        level: k.clone(),
        c_b: wb.central_charge.clone(),
        c_d: wd.central_charge.clone(),
        difference_terms: delta.len(),
        difference_grade: delta.grade(b.algebra()),
        pass: scalar.is_some() && wb.central_charge == wd.central_charge,
        scalar,
    })
}

/// `s' = s / (2(2l+1)(2l-1))`, from
/// `ω_B - ω_D = ((2l-1) S - 4 L - H) / (2(2l+1)(2l-1))` with `S`, `L`, `H` the
/// short, long and Cartan sums.
pub fn expected_conformal_scalar(l: usize, s: &Rational) -> Rational {
    let l = l as i64;
    s * q(1, 2 * (2 * l + 1) * (2 * l - 1))
}
