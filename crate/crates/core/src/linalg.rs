//! Exact dense linear algebra over the rationals, for pointwise checks.

use num_traits::{One, Zero};

use crate::poly::Rational;

pub type Vector = Vec<Rational>;

/// Reduced row echelon form of the rows; returns the nonzero rows.
pub fn row_basis(rows: &[Vector]) -> Vec<Vector> {
    let mut m: Vec<Vector> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = Rational::one() / &m[rank][col];
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

pub fn rank(rows: &[Vector]) -> usize {
    row_basis(rows).len()
}

/// Basis of `{x : rows · x = 0}` for vectors of length `cols`.
pub fn nullspace(rows: &[Vector], cols: usize) -> Vec<Vector> {
    let r = row_basis(rows);
    let mut pivots = Vec::new();
    for row in &r {
        pivots.push(row.iter().position(|x| !x.is_zero()).expect("nonzero row"));
    }
    let mut out = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(a: &[Vector], b: &[Vector]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    if ra != rb {
        return false;
    }
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    rank(&all) == ra
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn det(mut m: Vec<Vector>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        let p = m[col][col].clone();
        acc *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let pivot = m[col].clone();
            for (x, y) in m[r][col..n].iter_mut().zip(&pivot[col..n]) {
                *x -= &factor * y;
            }
        }
    }
    acc
}
