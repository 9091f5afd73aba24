//! Exact linear algebra: dense inversion for Gram matrices and a sparse
//! fraction-free nullspace solver for the singular-vector systems.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Gauss-Jordan inverse of a square matrix; `None` if singular.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Sparse integer row, column index → nonzero coefficient.
pub type SparseRow = BTreeMap<usize, BigInt>;

/// Clears denominators and removes the content, giving a primitive integer row
/// with positive leading coefficient.
pub fn primitive_row(row: &BTreeMap<usize, Rational>) -> SparseRow {
    let lcm = row
        .values()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: SparseRow = row
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(&c, x)| (c, (x * Rational::from_integer(lcm.clone())).to_integer()))
        .collect();
    normalize(&mut out);
    out
}

fn normalize(row: &mut SparseRow) {
    let g = row.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let negative = row.values().next().is_some_and(|x| x.is_negative());
    let g = if negative { -g } else { g };
    if !g.is_one() {
        for x in row.values_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a·target - b·source` where `a, b` cancel `col`, then divides by the content.
fn eliminate(target: &mut SparseRow, source: &SparseRow, col: usize) {
    let Some(t) = target.get(&col).cloned() else {
        return;
    };
    let s = &source[&col];
    let g = t.gcd(s);
    let a = s / &g;
    let b = &t / &g;
    let mut out = SparseRow::new();
    let keys: std::collections::BTreeSet<usize> =
        target.keys().chain(source.keys()).copied().collect();
    for k in keys {
        let mut v = BigInt::zero();
        if let Some(x) = target.get(&k) {
            v += &a * x;
        }
        if let Some(y) = source.get(&k) {
            v -= &b * y;
        }
        if !v.is_zero() {
            out.insert(k, v);
        }
    }
    normalize(&mut out);
    *target = out;
}

/// Reduced echelon form built row by row with integer arithmetic only.
#[derive(Debug, Default)]
pub struct FractionFreeEchelon {
    /// pivot column → primitive row whose only pivot-column entry is that one
    pivots: BTreeMap<usize, SparseRow>,
}

impl FractionFreeEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn push(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, x| !x.is_zero());
        let cols: Vec<usize> = row
            .keys()
            .copied()
            .filter(|c| self.pivots.contains_key(c))
            .collect();
        for c in cols {
            if row.contains_key(&c) {
                eliminate(&mut row, &self.pivots[&c], c);
            }
        }
        let Some(&pivot) = row.keys().next() else {
            return false;
        };
        normalize(&mut row);
        for other in self.pivots.values_mut() {
            if other.contains_key(&pivot) {
                eliminate(other, &row, pivot);
            }
        }
        self.pivots.insert(pivot, row);
        true
    }

    /// A basis of the nullspace of the accumulated rows over `ncols` unknowns,
    /// each vector scaled to be primitive integral.
    pub fn nullspace(&self, ncols: usize) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); ncols];
                v[f] = Rational::one();
                for (&p, row) in &self.pivots {
                    if let Some(c) = row.get(&f) {
                        // row[p]·x_p + row[f]·x_f = 0 (other free columns are 0)
                        v[p] = -Rational::new(c.clone(), row[&p].clone());
                    }
                }
                v
            })
            .collect()
    }
}

/// Nullspace of a sparse rational matrix given as rows.
pub fn nullspace(rows: &[BTreeMap<usize, Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech = FractionFreeEchelon::new();
    for r in rows {
        ech.push(primitive_row(r));
    }
    ech.nullspace(ncols)
}

/// Rank of a set of rational vectors.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut ech = FractionFreeEchelon::new();
    for r in rows {
        let sparse: BTreeMap<usize, Rational> = r
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        ech.push(primitive_row(&sparse));
    }
    ech.rank()
}
