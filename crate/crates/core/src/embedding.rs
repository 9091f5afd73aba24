//! `N_D(k, 0) ⊂ N_B(k, 0)` through the basis inclusion, the zero-mode
//! relations generated by `v_B`, and the explicit certificate expressing
//! `v_D` as an element of `U(ĝ_B) v_B`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebra, LieElement, LieType, Role, Root};
use crate::notation::Letters;
use crate::rational::{int, q, Rational};
use crate::singular::{build_vb, build_vd, TermFamily};
use crate::verma::{diff_terms, Grade, LoopFactor, OperatorWord, PbwState, VermaModule};

/// Index of each `D` basis vector inside the `B` basis.
pub fn index_map(d: &LieAlgebra, b: &LieAlgebra) -> Result<Vec<usize>> {
    if d.ty() != LieType::D || b.ty() != LieType::B || d.rank() != b.rank() {
        return Err(Error::Unsupported(format!(
            "no inclusion {} -> {}",
            d.id(),
            b.id()
        )));
    }
    let map: Vec<usize> = d
        .basis()
        .iter()
        .map(|x| match x.role {
            Role::E => b.e_index(x.root.as_ref().unwrap()).unwrap(),
            Role::F => b.f_index(x.root.as_ref().unwrap()).unwrap(),
            Role::H => b.h_index(x.cartan.unwrap()),
        })
        .collect();
    debug_assert!(map.windows(2).all(|w| w[0] < w[1]));
    Ok(map)
}

pub fn embed_element(d: &LieAlgebra, b: &LieAlgebra, x: &LieElement) -> Result<LieElement> {
    let map = index_map(d, b)?;
    Ok(LieElement::from_terms(
        b.id(),
        x.terms().map(|(i, c)| (map[i], c.clone())),
    ))
}

/// Reinterprets a `D` state over the `B` basis.
pub fn embed_state(d: &LieAlgebra, b: &LieAlgebra, s: &PbwState) -> Result<PbwState> {
    if s.algebra() != d.id() {
        return Err(Error::HandleMismatch(d.id().to_string(), s.algebra().to_string()));
    }
    let map = index_map(d, b)?;
    Ok(s.reindex(b.id(), |i| map[i as usize] as u32))
}

/// One zero-mode relation `X · v_B = rhs`.
#[derive(Debug, Clone)]
pub struct ZeroModeRelation {
    pub label: String,
    /// Zero-mode lowering operators, written left to right.
    pub operators: Vec<LoopFactor>,
    /// Sum of the roots of the operators (all of the form `f_α(0)`).
    pub lowered_by: Root,
    pub rhs: OperatorWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroModeVerdict {
    pub label: String,
    pub holds: bool,
    pub grade: Grade,
    pub grade_ok: bool,
    /// `computed - stated`, empty when the identity holds.
    pub difference: BTreeMap<String, String>,
}

/// Reading of the last sum in the `f_{ε_1}(0)^2` relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetrizedReading {
    /// `(e f + f e)`, matching every other sum of the same shape.
    Corrected,
    /// `(e f + e f)` exactly as displayed.
    Literal,
}

fn word(terms: Vec<(Rational, Vec<LoopFactor>)>) -> OperatorWord {
    let mut w = OperatorWord::new();
    for (c, fs) in terms {
        w.push(c, fs);
    }
    w
}

/// The nine families of zero-mode relations, instantiated over their index
/// ranges.
pub fn zero_mode_relations(b: &LieAlgebra, reading: SymmetrizedReading) -> Vec<ZeroModeRelation> {
    let s = Letters::new(b);
    let l = b.rank();
    let li = l as i64;
    let (p, m, eps) = (|i, j| s.plus(i, j), |i, j| s.minus(i, j), |i| s.eps(i));
    let e = |r: Root| s.e(&r, -1);
    let f = |r: Root| s.f(&r, -1);
    let h = |r: Root| s.h(&r, -1);
    let f0 = |r: Root| s.f(&r, 0);
    // `(e_α f_α + f_α e_α)(-1)` with coefficient `c`.
    let sym = |c: Rational, r: Root| {
        vec![
            (c.clone(), vec![e(r.clone()), f(r.clone())]),
            (c, vec![f(r.clone()), e(r)]),
        ]
    };
    // `ε_a + ε_b` with the smaller index first
    let pp = |a: usize, b: usize| p(a.min(b), a.max(b));
    let one = || int(1);
    let half = || q(1, 2);
    let mut rels = Vec::new();

    {
        let mut t = vec![(half(), vec![e(eps(1)), h(eps(1))])];
        for j in 2..=l {
            t.push((one(), vec![e(p(1, j)), f(eps(j))]));
        }
        for j in 2..=l {
            t.push((one(), vec![e(m(1, j)), e(eps(j))]));
        }
        t.push((q(-(2 * li - 3), 2), vec![s.e(&eps(1), -2)]));
        rels.push(ZeroModeRelation {
            label: "f_ε1(0)".into(),
            operators: vec![f0(eps(1))],
            lowered_by: eps(1),
            rhs: word(t),
        });
    }
    for i in 2..=l {
        let mut t = vec![(-half(), vec![e(eps(1)), e(eps(i))])];
        for j in 2..i {
            t.push((one(), vec![e(p(1, j)), f(m(j, i))]));
        }
        for j in 2..i {
            t.push((-one(), vec![e(m(1, j)), e(p(j, i))]));
        }
        t.push((-one(), vec![h(m(1, i)), e(p(1, i))]));
        for j in i + 1..=l {
            t.push((one(), vec![e(p(1, j)), e(m(i, j))]));
        }
        for j in i + 1..=l {
            t.push((one(), vec![e(m(1, j)), e(p(i, j))]));
        }
        t.push((q(2 * li - 3, 2), vec![s.e(&p(1, i), -2)]));
        rels.push(ZeroModeRelation {
            label: format!("f_ε1-ε{i}(0)"),
            operators: vec![f0(m(1, i))],
            lowered_by: m(1, i),
            rhs: word(t),
        });
    }
    {
        let mut t = vec![
            (half(), vec![e(eps(2)), h(eps(2))]),
            (-one(), vec![e(p(1, 2)), f(eps(1))]),
            (one(), vec![e(eps(1)), f(m(1, 2))]),
        ];
        for j in 3..=l {
            t.push((one(), vec![e(m(2, j)), e(eps(j))]));
        }
        for j in 3..=l {
            t.push((one(), vec![e(p(2, j)), f(eps(j))]));
        }
        t.push((q(-(2 * li - 5), 2), vec![s.e(&eps(2), -2)]));
        rels.push(ZeroModeRelation {
            label: "f_ε1(0) f_ε1-ε2(0)".into(),
            operators: vec![f0(eps(1)), f0(m(1, 2))],
            lowered_by: eps(1).add(&m(1, 2)),
            rhs: word(t),
        });
    }
    {
        let mut t = sym(half(), eps(1));
        t.push((-half(), vec![h(eps(1)), h(eps(1))]));
        for j in 2..=l {
            t.extend(sym(one(), eps(j)));
        }
        for j in 2..=l {
            t.extend(sym(-one(), p(1, j)));
        }
        for j in 2..=l {
            match reading {
                SymmetrizedReading::Corrected => t.extend(sym(-one(), m(1, j))),
                SymmetrizedReading::Literal => {
                    t.push((int(-2), vec![e(m(1, j)), f(m(1, j))]));
                }
            }
        }
        rels.push(ZeroModeRelation {
            label: "f_ε1(0)^2".into(),
            operators: vec![f0(eps(1)), f0(eps(1))],
            lowered_by: eps(1).scale(2),
            rhs: word(t),
        });
    }
    for i in 2..=l {
        let mut t = sym(q(-1, 4), eps(i));
        t.extend(sym(q(1, 4), eps(1)));
        t.push((one(), vec![h(m(1, i)), h(p(1, i))]));
        for j in (2..=l).filter(|&j| j != i) {
            t.extend(sym(half(), p(1, j)));
        }
        for j in (2..=l).filter(|&j| j != i) {
            t.extend(sym(half(), m(1, j)));
        }
        for j in 2..i {
            t.extend(sym(-half(), m(j, i)));
        }
        for j in (2..=l).filter(|&j| j != i) {
            t.extend(sym(-half(), pp(i, j)));
        }
        for j in i + 1..=l {
            t.extend(sym(-half(), m(i, j)));
        }
        rels.push(ZeroModeRelation {
            label: format!("f_ε1-ε{i}(0) f_ε1+ε{i}(0)"),
            operators: vec![f0(m(1, i)), f0(p(1, i))],
            lowered_by: eps(1).scale(2),
            rhs: word(t),
        });
    }
    for i in 3..=l {
        let mut t = vec![(-half(), vec![e(eps(1)), f(eps(i))])];
        for j in 2..i {
            t.push((one(), vec![e(p(1, j)), f(p(j, i))]));
        }
        for j in 2..i {
            t.push((-one(), vec![e(m(1, j)), e(m(j, i))]));
        }
        t.push((-one(), vec![h(p(1, i)), e(m(1, i))]));
        for j in i + 1..=l {
            t.push((-one(), vec![e(p(1, j)), f(p(i, j))]));
        }
        for j in i + 1..=l {
            t.push((-one(), vec![e(m(1, j)), f(m(i, j))]));
        }
        t.push((q(2 * li - 3, 2), vec![s.e(&m(1, i), -2)]));
        rels.push(ZeroModeRelation {
            label: format!("f_ε1+ε{i}(0)"),
            operators: vec![f0(p(1, i))],
            lowered_by: p(1, i),
            rhs: word(t),
        });
    }
    for i in 3..=l {
        let mut t = vec![
            (-half(), vec![e(eps(2)), e(eps(i))]),
            (-one(), vec![h(m(2, i)), e(p(2, i))]),
            (-one(), vec![f(m(1, 2)), e(p(1, i))]),
            (-one(), vec![e(p(1, 2)), f(m(1, i))]),
        ];
        for j in 3..i {
            t.push((one(), vec![e(p(2, j)), f(m(j, i))]));
        }
        for j in 3..i {
            t.push((-one(), vec![e(m(2, j)), e(pp(i, j))]));
        }
        for j in i + 1..=l {
            t.push((one(), vec![e(m(2, j)), e(p(i, j))]));
        }
        for j in i + 1..=l {
            t.push((one(), vec![e(p(2, j)), e(m(i, j))]));
        }
        t.push((q(2 * li - 3, 2), vec![s.e(&p(2, i), -2)]));
        rels.push(ZeroModeRelation {
            label: format!("f_ε1-ε{i}(0) f_ε1-ε2(0)"),
            operators: vec![f0(m(1, i)), f0(m(1, 2))],
            lowered_by: m(1, i).add(&m(1, 2)),
            rhs: word(t),
        });
    }
    {
        let mut t = vec![
            (-half(), vec![e(eps(2)), e(eps(2))]),
            (int(-2), vec![f(m(1, 2)), e(p(1, 2))]),
        ];
        for j in 3..=l {
            t.push((int(2), vec![e(m(2, j)), e(p(2, j))]));
        }
        rels.push(ZeroModeRelation {
            label: "f_ε1-ε2(0)^2".into(),
            operators: vec![f0(m(1, 2)), f0(m(1, 2))],
            lowered_by: m(1, 2).scale(2),
            rhs: word(t),
        });
    }
    for i in 3..=l {
        let mut t = vec![
            (-half(), vec![e(eps(2)), f(eps(i))]),
            (-one(), vec![h(p(2, i)), e(m(2, i))]),
            (-one(), vec![f(m(1, 2)), e(m(1, i))]),
            (-one(), vec![e(p(1, 2)), f(p(1, i))]),
        ];
        for j in 3..i {
            t.push((one(), vec![e(p(2, j)), f(pp(i, j))]));
        }
        for j in 3..i {
            t.push((-one(), vec![e(m(2, j)), e(m(j, i))]));
        }
        for j in i + 1..=l {
            t.push((-one(), vec![e(m(2, j)), f(m(i, j))]));
        }
        for j in i + 1..=l {
            t.push((-one(), vec![e(p(2, j)), f(p(i, j))]));
        }
        t.push((q(2 * li - 3, 2), vec![s.e(&m(2, i), -2)]));
        rels.push(ZeroModeRelation {
            label: format!("f_ε1-ε2(0) f_ε1+ε{i}(0)"),
            operators: vec![f0(m(1, 2)), f0(p(1, i))],
            lowered_by: m(1, 2).add(&p(1, i)),
            rhs: word(t),
        });
    }
    rels
}

/// Checks every zero-mode relation on `v_B` in `N_B(k, 0)`.
pub fn verify_zero_mode_relations(
    module: &VermaModule,
    reading: SymmetrizedReading,
) -> Result<Vec<ZeroModeVerdict>> {
    let b = module.algebra();
    let vb = build_vb(module)?;
    let top = Root::eps(b.rank(), 1).scale(2);
    zero_mode_relations(b, reading)
        .into_par_iter()
        .map(|rel| {
            let lhs = module.apply_word(&OperatorWord::new().term(int(1), rel.operators), &vb)?;
            let rhs = module.apply_word(&rel.rhs, &module.vacuum())?;
            let diff = lhs.sub(&rhs)?;
            let grade = lhs.grade(b);
            let grade_ok = grade.degree == Some(2) && grade.h_weight == Some(top.sub(&rel.lowered_by));
            Ok(ZeroModeVerdict {
                label: rel.label,
                holds: diff.is_zero(),
                grade,
                grade_ok,
                difference: diff_terms(b, &diff),
            })
        })
        .collect()
}

/// Number of families in [`membership_certificate`].
pub const CERTIFICATE_FAMILY_COUNT: usize = 20;

/// The operator combination `X` with `X · v_B = v_D` in `N_B(k, 0)`, in
/// display order.
pub fn membership_certificate(b: &LieAlgebra) -> Vec<TermFamily> {
    let s = Letters::new(b);
    let l = b.rank();
    let li = l as i64;
    let (p, m, eps) = (|i, j| s.plus(i, j), |i, j| s.minus(i, j), |i| s.eps(i));
    let e = |r: Root| s.e(&r, -1);
    let f = |r: Root| s.f(&r, -1);
    let h = |r: Root| s.h(&r, -1);
    let f0 = |r: Root| s.f(&r, 0);
    let th = || e(p(1, 2));
    let a = 2 * li + 1;
    let bb = 2 * li - 5;
    let c = 2 * li - 1;

    let mut fams = Vec::new();
    let mut fam = |label: &'static str, terms: Vec<(Rational, Vec<LoopFactor>)>| {
        fams.push(TermFamily { label, word: word(terms) });
    };
    let over = |build: &dyn Fn(usize) -> (Rational, Vec<LoopFactor>)| {
        (3..=l).map(build).collect::<Vec<_>>()
    };

    fam("e_ε2^2", vec![(q(a, 12), vec![e(eps(2)), e(eps(2))])]);
    fam("f_1-2 θ", vec![(q(-bb, 3), vec![f(m(1, 2)), th()])]);
    fam("e_2-i e_2+i", over(&|i| (q(a, 3), vec![e(m(2, i)), e(p(2, i))])));
    fam("θ e_ε2 f_ε1(0)", vec![(q(-1, 2), vec![th(), e(eps(2)), f0(eps(1))])]);
    fam("θ e_2-i f_1-i(0)", over(&|i| (int(1), vec![th(), e(m(2, i)), f0(m(1, i))])));
    fam(
        "e_ε1 e_ε2 f_1-2(0)",
        vec![(q(-a, 12), vec![e(eps(1)), e(eps(2)), f0(m(1, 2))])],
    );
    fam(
        "θ(-2) f_1-2(0)",
        vec![(q(-a * bb, 12), vec![s.e(&p(1, 2), -2), f0(m(1, 2))])],
    );
    fam(
        "h_1-2 θ f_1-2(0)",
        vec![(q(bb, 6), vec![h(m(1, 2)), th(), f0(m(1, 2))])],
    );
    fam(
        "e_1-i e_2+i f_1-2(0)",
        over(&|i| (q(-a, 6), vec![e(m(1, i)), e(p(2, i)), f0(m(1, 2))])),
    );
    fam(
        "e_1+i e_2-i f_1-2(0)",
        over(&|i| (q(-a, 6), vec![e(p(1, i)), e(m(2, i)), f0(m(1, 2))])),
    );
    fam(
        "e_ε1 θ f_ε1(0) f_1-2(0)",
        vec![(q(1, 2), vec![e(eps(1)), th(), f0(eps(1)), f0(m(1, 2))])],
    );
    fam(
        "θ^2 f_ε1(0)^2",
        vec![(q(1, c), vec![th(), th(), f0(eps(1)), f0(eps(1))])],
    );
    fam(
        "θ^2 f_1-2(0) f_1+2(0)",
        vec![(q(-bb, c), vec![th(), th(), f0(m(1, 2)), f0(p(1, 2))])],
    );
    fam(
        "θ^2 f_1-i(0) f_1+i(0)",
        over(&|i| (q(4, c), vec![th(), th(), f0(m(1, i)), f0(p(1, i))])),
    );
    fam("θ e_2+i f_1+i(0)", over(&|i| (int(1), vec![th(), e(p(2, i)), f0(p(1, i))])));
    fam(
        "θ e_1-i f_1-i(0) f_1-2(0)",
        over(&|i| (int(-1), vec![th(), e(m(1, i)), f0(m(1, i)), f0(m(1, 2))])),
    );
    fam(
        "e_ε1^2 f_1-2(0)^2",
        vec![(q(a, 24), vec![e(eps(1)), e(eps(1)), f0(m(1, 2)), f0(m(1, 2))])],
    );
    fam(
        "e_1-2 θ f_1-2(0)^2",
        vec![(q(bb, 6), vec![e(m(1, 2)), th(), f0(m(1, 2)), f0(m(1, 2))])],
    );
    fam(
        "e_1-i e_1+i f_1-2(0)^2",
        over(&|i| (q(a, 6), vec![e(m(1, i)), e(p(1, i)), f0(m(1, 2)), f0(m(1, 2))])),
    );
    fam(
        "θ e_1+i f_1-2(0) f_1+i(0)",
        over(&|i| (int(-1), vec![th(), e(p(1, i)), f0(m(1, 2)), f0(p(1, i))])),
    );
    fams
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub rank: usize,
    pub families: usize,
    pub products: usize,
    pub output_terms: usize,
    pub output_grade: Grade,
    pub grade_ok: bool,
    pub equals_embedded_vd: bool,
    /// `X · v_B - ι(v_D)`, empty on success.
    pub difference: BTreeMap<String, String>,
}

/// Applies the certificate to `v_B` and compares with the embedded `v_D`.
pub fn verify_membership_certificate(
    b_module: &VermaModule,
    d_module: &VermaModule,
) -> Result<CertificateReport> {
    let b = b_module.algebra();
    let d = d_module.algebra();
    let vb = build_vb(b_module)?;
    let fams = membership_certificate(b);
    let parts = fams
        .par_iter()
        .map(|fam| b_module.apply_word(&fam.word, &vb))
        .collect::<Result<Vec<_>>>()?;
    let mut out = b_module.zero();
    for part in &parts {
        out.add_assign(part)?;
    }
    let vd = embed_state(d, b, &build_vd(d_module)?)?;
    let diff = out.sub(&vd)?;
    let grade = out.grade(b);
    Ok(CertificateReport {
        rank: b.rank(),
        families: fams.len(),
        products: fams.iter().map(|f| f.word.len()).sum(),
        output_terms: out.len(),
        grade_ok: grade.degree == Some(4) && grade.h_weight == Some(b.theta().scale(2)),
        output_grade: grade,
        equals_embedded_vd: diff.is_zero() && !out.is_zero(),
        difference: diff_terms(b, &diff),
    })
}
