//! Affine weights and real coroots for `B_l^(1)`, `D_l^(1)`: shifted pairings,
//! the dot action of reflections, and an admissibility checker.
//!
//! A weight is stored as (finite part in ε-coordinates, level `⟨λ, c⟩`,
//! coefficient of `δ`). The real coroot of `α + mδ` is
//! `α∨ + m·2/(α,α)·c`, so
//! `⟨λ, (α + mδ)∨⟩ = 2((λ̄, α) + m·level)/(α, α)`.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::liealg::{LieAlgebra, Root};
use crate::linalg;
use crate::rational::{self, int, q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineWeight {
    #[serde(with = "rational::serde_str_vec")]
    pub finite: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub level: Rational,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
}

impl AffineWeight {
    /// `k Λ_0`.
    pub fn level_only(rank: usize, k: Rational) -> Self {
        Self {
            finite: vec![Rational::zero(); rank],
            level: k,
            delta: Rational::zero(),
        }
    }

    /// Affine Weyl vector: finite `ρ` and level `h∨`.
    pub fn rho(algebra: &LieAlgebra) -> Self {
        Self {
            finite: algebra.rho(),
            level: int(algebra.dual_coxeter()),
            delta: Rational::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            finite: self
                .finite
                .iter()
                .zip(&other.finite)
                .map(|(a, b)| a + b)
                .collect(),
            level: &self.level + &other.level,
            delta: &self.delta + &other.delta,
        }
    }

    /// Adds `c·(α + mδ)`.
    fn add_root(&self, c: &Rational, root: &AffineCoroot) -> Self {
        let mut out = self.clone();
        for (x, &a) in out.finite.iter_mut().zip(&root.root.0) {
            *x += c * int(a as i64);
        }
        out.delta += c * int(root.mode);
        out
    }

    fn dot_finite(&self, root: &Root) -> Rational {
        self.finite
            .iter()
            .zip(&root.0)
            .fold(Rational::zero(), |acc, (x, &a)| acc + x * int(a as i64))
    }
}

/// Coroot of the real root `α + mδ` (`α` a nonzero finite root of either sign).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineCoroot {
    pub root: Root,
    pub mode: i64,
}

impl AffineCoroot {
    pub fn new(root: Root, mode: i64) -> Self {
        assert!(!root.is_zero(), "real roots have nonzero finite part");
        Self { root, mode }
    }

    /// Finite simple coroot `α_i∨`.
    pub fn simple(algebra: &LieAlgebra, i: usize) -> Self {
        Self::new(algebra.simple_roots()[i - 1].clone(), 0)
    }

    /// `α_0∨ = (δ - θ)∨`.
    pub fn affine_simple(algebra: &LieAlgebra) -> Self {
        Self::new(algebra.theta().neg(), 1)
    }

    pub fn is_positive(&self) -> bool {
        self.mode > 0 || (self.mode == 0 && is_positive_root(&self.root))
    }

    /// `(α, α)`.
    pub fn norm2(&self) -> i32 {
        self.root.norm2()
    }

    /// Coordinates `(α∨ in ε-coordinates, coefficient of c)`.
    pub fn coordinates(&self) -> Vec<Rational> {
        let n = q(2, self.norm2() as i64);
        let mut v: Vec<Rational> = self.root.0.iter().map(|&a| int(a as i64) * &n).collect();
        v.push(int(self.mode) * n);
        v
    }

    pub fn label(&self) -> String {
        match self.mode {
            0 => format!("({})∨", self.root),
            1 => format!("(δ{}{})∨", sign_prefix(&self.root), self.root),
            m => format!("({m}δ{}{})∨", sign_prefix(&self.root), self.root),
        }
    }
}

fn sign_prefix(root: &Root) -> &'static str {
    if root.0.iter().find(|&&a| a != 0).is_some_and(|&a| a < 0) {
        ""
    } else {
        "+"
    }
}

/// Positive in the ordering where `ε_1 > ε_2 > … > ε_l > 0`.
fn is_positive_root(root: &Root) -> bool {
    root.0.iter().find(|&&a| a != 0).is_some_and(|&a| a > 0)
}

/// `⟨λ, α∨⟩`, or `⟨λ + ρ, α∨⟩` when `shifted`.
pub fn pairing(
    algebra: &LieAlgebra,
    weight: &AffineWeight,
    coroot: &AffineCoroot,
    shifted: bool,
) -> Rational {
    let w = if shifted {
        weight.add(&AffineWeight::rho(algebra))
    } else {
        weight.clone()
    };
    (w.dot_finite(&coroot.root) + int(coroot.mode) * &w.level) * q(2, coroot.norm2() as i64)
}

/// Dot action `r_β.λ = λ - ⟨λ + ρ, β∨⟩ β`.
pub fn reflect_dot(algebra: &LieAlgebra, weight: &AffineWeight, coroot: &AffineCoroot) -> AffineWeight {
    let p = pairing(algebra, weight, coroot, true);
    weight.add_root(&-p, coroot)
}

/// Finite roots of the algebra, positive and negative.
fn all_roots(algebra: &LieAlgebra) -> Vec<Root> {
    algebra
        .positive_roots()
        .iter()
        .flat_map(|r| [r.clone(), r.neg()])
        .collect()
}

/// Positive real coroots with `mode <= bound`.
pub fn positive_coroots(algebra: &LieAlgebra, bound: i64) -> Vec<AffineCoroot> {
    let mut out: Vec<AffineCoroot> = algebra
        .positive_roots()
        .iter()
        .map(|r| AffineCoroot::new(r.clone(), 0))
        .collect();
    for m in 1..=bound {
        out.extend(all_roots(algebra).into_iter().map(|r| AffineCoroot::new(r, m)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum AdmissibilityStatus {
    Admissible,
    NotAdmissible { reason: String },
    Degenerate { reason: String },
}

/// Condition (i) beyond the scanned modes: per finite root `α` the shifted
/// pairing is affine in `m` with slope `2(k + h∨)/(α,α)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailCertificate {
    /// Roots whose pairing increases with `m` and is positive past the bound.
    pub increasing: usize,
    /// Roots with constant pairing (critical level only).
    pub constant: usize,
    /// Roots whose pairing decreases; their residues were scanned exactly.
    pub decreasing: usize,
    /// Extra modes scanned past the bound until the pairing became positive.
    pub extra_modes_scanned: i64,
    pub violations_beyond_bound: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    #[serde(flatten)]
    pub status: AdmissibilityStatus,
    pub mode_bound: i64,
    /// Scanned positive coroots whose shifted pairing lies in `-Z_+`.
    pub violations: Vec<String>,
    pub tail: Option<TailCertificate>,
    /// Rank of the integral coroots (scanned up to the bound); full rank is `l+1`.
    pub integral_rank: usize,
    /// Simple integral coroots found within the mode bound.
    pub simple_integral_coroots: Vec<AffineCoroot>,
    pub simple_integral_labels: Vec<String>,
    /// Every scanned positive integral coroot decomposes into the simple ones
    /// with nonnegative integer coefficients, and the simple ones are independent.
    pub generating_set_certified: bool,
}

/// Checks the two admissibility conditions for `weight` over real coroots of
/// mode `<= mode_bound`, with an exact tail argument for larger modes.
pub fn check_admissible(
    algebra: &LieAlgebra,
    weight: &AffineWeight,
    mode_bound: i64,
) -> AdmissibilityReport {
    let l = algebra.rank();
    let h = int(algebra.dual_coxeter());
    let mut report = AdmissibilityReport {
        admissible: false,
        status: AdmissibilityStatus::Admissible,
        mode_bound,
        violations: Vec::new(),
        tail: None,
        integral_rank: 0,
        simple_integral_coroots: Vec::new(),
        simple_integral_labels: Vec::new(),
        generating_set_certified: false,
    };

    if &weight.level + &h == Rational::zero() {
        report.status = AdmissibilityStatus::Degenerate {
            reason: "critical level k = -h∨ is excluded".into(),
        };
        return report;
    }
    if weight.level.is_zero() && weight.finite.iter().all(|x| x.is_zero()) {
        report.admissible = true;
        report.status = AdmissibilityStatus::Degenerate {
            reason: "λ = 0 is dominant integral of level 0; trivially admissible, no reduction to report"
                .into(),
        };
        return report;
    }

    let scanned = positive_coroots(algebra, mode_bound);
    for c in &scanned {
        let p = pairing(algebra, weight, c, true);
        if rational::is_nonpositive_integer(&p) {
            report.violations.push(format!("{} -> {}", c.label(), p));
        }
    }

    let tail = tail_certificate(algebra, weight, mode_bound);

    let integral: Vec<&AffineCoroot> = scanned
        .iter()
        .filter(|c| rational::is_integer(&pairing(algebra, weight, c, false)))
        .collect();
    let coords: Vec<Vec<Rational>> = integral.iter().map(|c| c.coordinates()).collect();
    report.integral_rank = linalg::rank(&coords);

    let present: HashSet<Vec<Rational>> = coords.iter().cloned().collect();
    let simple: Vec<usize> = (0..integral.len())
        .filter(|&i| {
            !(0..integral.len()).any(|j| {
                j != i && {
                    let diff: Vec<Rational> =
                        coords[i].iter().zip(&coords[j]).map(|(a, b)| a - b).collect();
                    present.contains(&diff)
                }
            })
        })
        .collect();
    report.simple_integral_coroots = simple.iter().map(|&i| integral[i].clone()).collect();
    report.simple_integral_labels = simple.iter().map(|&i| integral[i].label()).collect();
    report.generating_set_certified = certify_generating_set(
        &simple.iter().map(|&i| coords[i].clone()).collect::<Vec<_>>(),
        &coords,
        l + 1,
    );

    let full_rank = report.integral_rank == l + 1;
    let condition_one = report.violations.is_empty() && tail.violations_beyond_bound.is_empty();
    report.admissible = condition_one && full_rank;
    report.status = if report.admissible {
        AdmissibilityStatus::Admissible
    } else if !condition_one {
        AdmissibilityStatus::NotAdmissible {
            reason: "⟨λ+ρ, α∨⟩ ∈ -Z_+ for some positive real coroot".into(),
        }
    } else {
        AdmissibilityStatus::NotAdmissible {
            reason: format!(
                "integral coroots span rank {} < {}",
                report.integral_rank,
                l + 1
            ),
        }
    };
    report.tail = Some(tail);
    report
}

fn tail_certificate(algebra: &LieAlgebra, weight: &AffineWeight, bound: i64) -> TailCertificate {
    let mut cert = TailCertificate {
        increasing: 0,
        constant: 0,
        decreasing: 0,
        extra_modes_scanned: 0,
        violations_beyond_bound: Vec::new(),
    };
    let shifted_level = &weight.level + int(algebra.dual_coxeter());
    for root in all_roots(algebra) {
        let at = |m: i64| pairing(algebra, weight, &AffineCoroot::new(root.clone(), m), true);
        let slope = &shifted_level * q(2, root.norm2() as i64);
        if slope.is_zero() {
            // Constant in m; already covered by the scan at m = 1.
            cert.constant += 1;
            continue;
        }
        if slope.is_positive() {
            cert.increasing += 1;
            let mut m = bound + 1;
            while !at(m).is_positive() {
                if rational::is_nonpositive_integer(&at(m)) {
                    cert.violations_beyond_bound
                        .push(AffineCoroot::new(root.clone(), m).label());
                }
                m += 1;
                cert.extra_modes_scanned += 1;
            }
            continue;
        }
        cert.decreasing += 1;
        // Past the zero crossing every value is negative; integrality repeats
        // with period denom(slope), so one period decides the rest.
        let crossing = (at(0) / -&slope).ceil();
        let start = rational::as_i64(&crossing).unwrap_or(bound).max(bound + 1);
        let period = rational::as_i64(&Rational::from_integer(slope.denom().clone())).unwrap_or(1);
        for m in start..start + period {
            if rational::is_nonpositive_integer(&at(m)) {
                cert.violations_beyond_bound
                    .push(AffineCoroot::new(root.clone(), m).label());
                break;
            }
        }
        // Between the bound and the crossing the values are still positive
        // only if the crossing lies past them; scan that window too.
        for m in bound + 1..start {
            if rational::is_nonpositive_integer(&at(m)) {
                cert.violations_beyond_bound
                    .push(AffineCoroot::new(root.clone(), m).label());
                break;
            }
        }
    }
    cert
}

/// `simple` must be independent of full rank, and every element of `all`
/// must be a nonnegative integer combination of `simple`.
fn certify_generating_set(simple: &[Vec<Rational>], all: &[Vec<Rational>], dim: usize) -> bool {
    if simple.len() != dim || linalg::rank(simple) != dim {
        return false;
    }
    let Some(inv) = linalg::invert(simple) else {
        return false;
    };
    all.iter().all(|v| {
        (0..dim).all(|j| {
            let c = (0..dim).fold(Rational::zero(), |acc, i| acc + &v[i] * &inv[i][j]);
            rational::is_integer(&c) && !c.is_negative()
        })
    })
}

/// `(2δ - θ)∨`.
pub fn two_delta_minus_theta(algebra: &LieAlgebra) -> AffineCoroot {
    AffineCoroot::new(algebra.theta().neg(), 2)
}

/// `λ = kΛ_0` with `k = -l + 3/2`.
pub fn embedding_weight(algebra: &LieAlgebra) -> AffineWeight {
    AffineWeight::level_only(algebra.rank(), crate::embedding_level(algebra.rank()))
}

/// The shifted pairings at the embedding level used in the admissibility
/// argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingSummary {
    pub rank: usize,
    #[serde(with = "rational::serde_str_vec")]
    pub simple: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub affine_simple: Rational,
    #[serde(with = "rational::serde_str")]
    pub two_delta_minus_theta: Rational,
}

pub fn embedding_pairings(algebra: &LieAlgebra) -> PairingSummary {
    let w = embedding_weight(algebra);
    PairingSummary {
        rank: algebra.rank(),
        simple: (1..=algebra.rank())
            .map(|i| pairing(algebra, &w, &AffineCoroot::simple(algebra, i), true))
            .collect(),
        affine_simple: pairing(algebra, &w, &AffineCoroot::affine_simple(algebra), true),
        two_delta_minus_theta: pairing(algebra, &w, &two_delta_minus_theta(algebra), true),
    }
}

impl PairingSummary {
    pub fn matches_expected(&self) -> bool {
        let l = self.rank as i64;
        self.simple.iter().all(|p| p.is_one())
            && self.affine_simple == q(5 - 2 * l, 2)
            && self.two_delta_minus_theta == int(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_algebra, LieType};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rho_level_is_dual_coxeter() {
        for ty in [LieType::B, LieType::D] {
            for l in 4..=6 {
                let g = build_algebra(ty, l).unwrap();
                assert_eq!(AffineWeight::rho(&g).level, int(g.dual_coxeter()));
                // ⟨ρ, α_i∨⟩ = 1 on all affine simple coroots
                let zero = AffineWeight::level_only(l, Rational::zero());
                for i in 1..=l {
                    let c = AffineCoroot::simple(&g, i);
                    assert_eq!(pairing(&g, &zero, &c, true), int(1));
                }
                assert_eq!(
                    pairing(&g, &zero, &AffineCoroot::affine_simple(&g), true),
                    int(1)
                );
            }
        }
    }

    // covers: admissible-pairings
    #[test]
    fn embedding_pairings_for_type_d() {
        for l in 4..=8 {
            let g = build_algebra(LieType::D, l).unwrap();
            let p = embedding_pairings(&g);
            assert!(p.matches_expected(), "l = {l}: {p:?}");
        }
    }

    // covers: vd-weight
    #[test]
    fn dot_action_examples() {
        let g = build_algebra(LieType::D, 4).unwrap();
        let lam = embedding_weight(&g);
        let r = reflect_dot(&g, &lam, &two_delta_minus_theta(&g));
        let mut expected = lam.clone();
        expected.delta = int(-4);
        expected.finite = vec![int(2), int(2), int(0), int(0)];
        assert_eq!(r, expected);

        for i in 1..=4 {
            let c = AffineCoroot::simple(&g, i);
            let r = reflect_dot(&g, &lam, &c);
            let mut expected = lam.clone();
            for (x, &a) in expected.finite.iter_mut().zip(&c.root.0) {
                *x -= int(a as i64);
            }
            assert_eq!(r, expected);
        }
    }

    #[test]
    fn dot_action_is_involutive() {
        let g = build_algebra(LieType::B, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let roots = all_roots(&g);
        for _ in 0..100 {
            let w = AffineWeight {
                finite: (0..5).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect(),
                level: q(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                delta: q(rng.gen_range(-9..=9), 1),
            };
            let c = AffineCoroot::new(roots[rng.gen_range(0..roots.len())].clone(), rng.gen_range(-3..=3));
            let twice = reflect_dot(&g, &reflect_dot(&g, &w, &c), &c);
            assert_eq!(twice, w);
        }
    }

    // covers: admissible-pairings
    #[test]
    fn type_d_embedding_weight_is_admissible() {
        for l in [4, 6] {
            let g = build_algebra(LieType::D, l).unwrap();
            let report = check_admissible(&g, &embedding_weight(&g), 20);
            assert!(report.admissible, "{report:?}");
            assert!(report.generating_set_certified);
            let mut expected: Vec<AffineCoroot> =
                (1..=l).map(|i| AffineCoroot::simple(&g, i)).collect();
            expected.push(two_delta_minus_theta(&g));
            let got: HashSet<_> = report.simple_integral_coroots.iter().cloned().collect();
            assert_eq!(got, expected.into_iter().collect::<HashSet<_>>());
        }
    }

    #[test]
    fn level_zero_is_degenerate() {
        let g = build_algebra(LieType::D, 4).unwrap();
        let r = check_admissible(&g, &AffineWeight::level_only(4, Rational::zero()), 20);
        assert!(matches!(r.status, AdmissibilityStatus::Degenerate { .. }));
        let r = check_admissible(&g, &AffineWeight::level_only(4, int(-6)), 20);
        assert!(!r.admissible);
        assert!(matches!(r.status, AdmissibilityStatus::Degenerate { .. }));
    }

    #[test]
    fn negative_integer_level_is_not_admissible() {
        // k = -2 for D_4: ⟨λ+ρ, α_0∨⟩ = k + 1 = -1.
        let g = build_algebra(LieType::D, 4).unwrap();
        let r = check_admissible(&g, &AffineWeight::level_only(4, int(-2)), 6);
        assert!(!r.admissible);
        assert!(!r.violations.is_empty());
    }

    #[test]
    fn tail_catches_violations_past_the_bound() {
        // k = -h∨ - 1/2 gives negative slope; violations appear at large m.
        let g = build_algebra(LieType::D, 4).unwrap();
        let w = AffineWeight::level_only(4, q(-13, 2));
        let r = check_admissible(&g, &w, 1);
        let tail = r.tail.unwrap();
        assert!(tail.decreasing > 0);
        assert!(!tail.violations_beyond_bound.is_empty());
        assert!(!r.admissible);
    }
}
