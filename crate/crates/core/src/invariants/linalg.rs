//! Exact row reduction over `Q` and `F_p`.
//!
//! Over `Q` rows are cleared to primitive integer vectors and eliminated
//! fraction-free; the echelon form is then back-substituted into the
//! reduced row echelon form. Over `F_p` plain Gauss-Jordan is used. Pivots
//! are always the first nonzero column, so the RREF (and every basis read
//! off it) is independent of the route taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{FieldElem, FieldSpec};

/// Reduced row echelon form: nonzero rows and their pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<FieldElem>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nullspace basis, one vector per free column in ascending order; the
    /// vector for free column `j` has a 1 at `j` and zeros at every later
    /// column.
    pub fn nullspace(&self, field: FieldSpec) -> Vec<Vec<FieldElem>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = vec![field.zero(); self.ncols];
                v[j] = field.one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&row[j];
                }
                v
            })
            .collect()
    }
}

pub fn rref(field: FieldSpec, rows: &[Vec<FieldElem>], ncols: usize) -> Rref {
    match field {
        FieldSpec::Rationals => rref_rational(rows, ncols),
        FieldSpec::PrimeField(_) => rref_modular(rows.to_vec(), ncols),
    }
}

pub fn rank(field: FieldSpec, rows: &[Vec<FieldElem>], ncols: usize) -> usize {
    rref(field, rows, ncols).rank()
}

pub fn nullspace(field: FieldSpec, rows: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    rref(field, rows, ncols).nullspace(field)
}

fn rref_modular(mut m: Vec<Vec<FieldElem>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(k) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][col].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    Rref {
        ncols,
        rows: m,
        pivots,
    }
}

/// Scales a rational row to a primitive integer row.
fn integer_row(row: &[FieldElem]) -> Vec<BigInt> {
    let q: Vec<BigRational> = row
        .iter()
        .map(|x| match x {
            FieldElem::Rational(q) => q.clone(),
            FieldElem::Residue { .. } => panic!("residue in a rational matrix"),
        })
        .collect();
    let lcm = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = q.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(ints)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

fn rref_rational(rows: &[Vec<FieldElem>], ncols: usize) -> Rref {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();

    // fraction-free forward elimination to echelon form
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(k) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        let p = &prow[col];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            let next: Vec<BigInt> = row
                .iter()
                .zip(prow)
                .map(|(x, y)| p * x - &a * y)
                .collect();
            *row = primitive(next);
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);

    // back-substitution into exact rationals
    let mut q: Vec<Vec<BigRational>> = m
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let lead = row[pc].clone();
            row.into_iter().map(|x| BigRational::new(x, lead.clone())).collect()
        })
        .collect();
    for i in (0..q.len()).rev() {
        let pc = pivots[i];
        let (above, rest) = q.split_at_mut(i);
        let prow = &rest[0];
        for row in above.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (x, y) in row.iter_mut().zip(prow) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    let rows = q
        .into_iter()
        .map(|row| row.into_iter().map(FieldElem::Rational).collect())
        .collect();
    Rref { ncols, rows, pivots }
}
