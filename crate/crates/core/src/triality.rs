//! Diagram automorphisms as Lie algebra automorphisms, determined by the
//! Chevalley generators, and their action on `N(k, 0)`.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebra, LieElement, Role, Root};
use crate::linalg;
use crate::rational::{self, Rational};
use crate::verma::{LoopFactor, OperatorWord, PbwState, VermaModule};

/// `π'`: `α_1 → α_3 → α_4 → α_1`, fixing `α_2` (1-based images).
pub const PI_PRIME: [usize; 4] = [3, 2, 4, 1];
/// `π''`: `α_1 ↔ α_4`, fixing `α_2` and `α_3`.
pub const PI_DOUBLE_PRIME: [usize; 4] = [4, 2, 3, 1];

/// `a_ij = ⟨α_j, α_i∨⟩`.
pub fn cartan_matrix(g: &LieAlgebra) -> Vec<Vec<i32>> {
    let s = g.simple_roots();
    s.iter()
        .map(|ai| s.iter().map(|aj| 2 * aj.dot(ai) / ai.norm2()).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct DiagramAutomorphism {
    /// `σ(i)` for `i = 1..l`, stored 0-based.
    pub sigma: Vec<usize>,
    /// Image of each basis vector.
    pub images: Vec<LieElement>,
}

impl DiagramAutomorphism {
    pub fn apply(&self, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero(x.algebra());
        for (i, c) in x.terms() {
            out = out.add(&self.images[i].scale(c)).expect("same algebra");
        }
        out
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            sigma: other.sigma.iter().map(|&i| self.sigma[i]).collect(),
            images: other.images.iter().map(|x| self.apply(x)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, x)| *x == LieElement::basis(x.algebra(), i))
    }

    /// Pairs of basis indices where `π[x, y] ≠ [πx, πy]`.
    pub fn bracket_defects(&self, g: &LieAlgebra) -> Vec<(usize, usize)> {
        let n = g.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply(&g.bracket(&g.basis_element(i), &g.basis_element(j)).unwrap());
                let rhs = g.bracket(&self.images[i], &self.images[j]).unwrap();
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    pub fn dump(&self, g: &LieAlgebra) -> AutomorphismDump {
        AutomorphismDump {
            algebra: g.id().to_string(),
            sigma: self.sigma.iter().map(|i| i + 1).collect(),
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    (
                        g.label(i),
                        x.terms()
                            .map(|(j, c)| (g.label(j), rational::to_string(c)))
                            .collect(),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDump {
    pub algebra: String,
    pub sigma: Vec<usize>,
    /// basis label → image as label → coefficient
    pub images: BTreeMap<String, BTreeMap<String, String>>,
}

/// Builds the automorphism with `e_i ↦ e_{σ(i)}`, `f_i ↦ f_{σ(i)}`; `sigma`
/// holds 1-based images of the simple-root indices.
pub fn build_automorphism(g: &LieAlgebra, sigma: &[usize]) -> Result<DiagramAutomorphism> {
    let l = g.rank();
    let mut seen = vec![false; l];
    let valid_perm = sigma.len() == l
        && sigma.iter().all(|&i| {
            (1..=l).contains(&i) && !std::mem::replace(&mut seen[i - 1], true)
        });
    if !valid_perm {
        return Err(Error::NotDiagramSymmetry(format!("{sigma:?} is not a permutation of 1..{l}")));
    }
    let sigma: Vec<usize> = sigma.iter().map(|i| i - 1).collect();
    let a = cartan_matrix(g);
    for i in 0..l {
        for j in 0..l {
            if a[sigma[i]][sigma[j]] != a[i][j] {
                return Err(Error::NotDiagramSymmetry(format!(
                    "σ does not preserve the Cartan matrix at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let simple = g.simple_roots();
    let mut images: Vec<Option<LieElement>> = vec![None; g.dim()];
    for i in 0..l {
        images[g.e_index(&simple[i]).unwrap()] = Some(g.e(&simple[sigma[i]]));
        images[g.f_index(&simple[i]).unwrap()] = Some(g.f(&simple[sigma[i]]));
    }

    // Breadth-first over positive roots: e_β = [e_i, e_γ] / c with β = γ + α_i.
    let mut queue: VecDeque<Root> = simple.iter().cloned().collect();
    while let Some(gamma) = queue.pop_front() {
        for (i, ai) in simple.iter().enumerate() {
            let beta = gamma.add(ai);
            let Some(eb) = g.e_index(&beta) else { continue };
            if images[eb].is_some() {
                continue;
            }
            for (role, x_i, x_gamma, x_beta) in [
                (Role::E, g.e(ai), g.e(&gamma), g.e(&beta)),
                (Role::F, g.f(ai), g.f(&gamma), g.f(&beta)),
            ] {
                let br = g.bracket(&x_i, &x_gamma)?;
                let idx = match role {
                    Role::E => eb,
                    _ => g.f_index(&beta).unwrap(),
                };
                let c = br.coefficient(idx);
                if c.is_zero() || br != x_beta.scale(&c) {
                    return Err(Error::Unsupported(format!("no bracket word reaches {beta}")));
                }
                let gi = images[match role {
                    Role::E => g.e_index(&gamma).unwrap(),
                    _ => g.f_index(&gamma).unwrap(),
                }]
                .clone()
                .unwrap();
                let pi_i = match role {
                    Role::E => g.e(&simple[sigma[i]]),
                    _ => g.f(&simple[sigma[i]]),
                };
                images[idx] = Some(g.bracket(&pi_i, &gi)?.scale(&(rational::one() / c)));
            }
            queue.push_back(beta);
        }
    }

    // H_j in terms of simple coroots h_i, then h_i ↦ h_{σ(i)}.
    let coroots: Vec<LieElement> = simple.iter().map(|r| g.coroot(r)).collect();
    let coords: Vec<Vec<Rational>> = coroots
        .iter()
        .map(|h| (1..=l).map(|j| h.coefficient(g.h_index(j))).collect())
        .collect();
    let inv = linalg::invert(&coords)
        .ok_or_else(|| Error::Unsupported("simple coroots are dependent".into()))?;
    // H_j = Σ_i inv[j][i] h_i, since coords[i][j] is the H_j coefficient of h_i.
    for j in 0..l {
        let mut img = LieElement::zero(g.id());
        for i in 0..l {
            if !inv[j][i].is_zero() {
                img = img.add(&coroots[sigma[i]].scale(&inv[j][i]))?;
            }
        }
        images[g.h_index(j + 1)] = Some(img);
    }

    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::Unsupported(format!("closure missed {}", g.label(i)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagramAutomorphism { sigma, images })
}

/// `π` on a state: `x_1(m_1) ⋯ x_r(m_r) 1 ↦ π(x_1)(m_1) ⋯ π(x_r)(m_r) 1`.
pub fn apply_automorphism(
    module: &VermaModule,
    pi: &DiagramAutomorphism,
    s: &PbwState,
) -> Result<PbwState> {
    let g = module.algebra();
    let mut w = OperatorWord::new();
    for (m, c) in s.terms() {
        let factors = m
            .iter()
            .map(|f| LoopFactor::new(pi.images[f.index as usize].clone(), f.mode))
            .collect();
        w.push(c.clone(), factors);
    }
    if s.algebra() != g.id() {
        return Err(Error::HandleMismatch(g.id().to_string(), s.algebra().to_string()));
    }
    module.apply_word(&w, &module.vacuum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialityReport {
    pub pi_prime_bracket_defects: usize,
    pub pi_double_prime_bracket_defects: usize,
    pub pi_prime_cubed_is_identity: bool,
    pub pi_double_prime_squared_is_identity: bool,
    /// `π(v) = s v`; exact fixedness is `s = 1`.
    #[serde(with = "rational::serde_str_opt")]
    pub pi_prime_vd_scalar: Option<Rational>,
    #[serde(with = "rational::serde_str_opt")]
    pub pi_double_prime_vd_scalar: Option<Rational>,
    pub omega_fixed: bool,
    pub pass: bool,
}

/// Runs every triality check on `N_{D_4}(k, 0)`.
pub fn verify_triality(module: &VermaModule) -> Result<TrialityReport> {
    let g = module.algebra();
    if g.ty() != crate::LieType::D || g.rank() != 4 {
        return Err(Error::Unsupported(format!("triality needs D_4, got {}", g.id())));
    }
    let p1 = build_automorphism(g, &PI_PRIME)?;
    let p2 = build_automorphism(g, &PI_DOUBLE_PRIME)?;
    let vd = crate::singular::build_vd(module)?;
    let omega = crate::conformal::sugawara(module)?.omega;
    let s1 = apply_automorphism(module, &p1, &vd)?.ratio_to(&vd);
    let s2 = apply_automorphism(module, &p2, &vd)?.ratio_to(&vd);
    let omega_fixed = apply_automorphism(module, &p1, &omega)? == omega
        && apply_automorphism(module, &p2, &omega)? == omega;
    let d1 = p1.bracket_defects(g).len();
    let d2 = p2.bracket_defects(g).len();
    let cube = p1.compose(&p1).compose(&p1).is_identity();
    let square = p2.compose(&p2).is_identity();
    let one = rational::one();
    let pass = d1 == 0
        && d2 == 0
        && cube
        && square
        && s1.as_ref() == Some(&one)
        && s2.as_ref() == Some(&one)
        && omega_fixed;
    Ok(TrialityReport {
        pi_prime_bracket_defects: d1,
        pi_double_prime_bracket_defects: d2,
        pi_prime_cubed_is_identity: cube,
        pi_double_prime_squared_is_identity: square,
        pi_prime_vd_scalar: s1,
        pi_double_prime_vd_scalar: s2,
        omega_fixed,
        pass,
    })
}
