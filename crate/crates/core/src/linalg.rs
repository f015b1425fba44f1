//! Exact rank, determinant and nullspace computations.
//!
//! Over a prime field rows are reduced one at a time by [`EchelonBuilder`],
//! which also gives the ranks of every prefix of a matrix in a single pass.
//! Over the rationals rows are cleared of denominators and reduced with
//! fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::{Field, Rational};

/// Row echelon form built incrementally.
#[derive(Clone, Debug)]
pub struct EchelonBuilder<F: Field> {
    field: F,
    ncols: usize,
    /// Stored rows, each with a pivot entry equal to one.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> EchelonBuilder<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Adds a row; returns whether it was independent of the earlier ones.
    pub fn push(&mut self, mut row: Vec<F::Elem>) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        if self.is_full() {
            return false;
        }
        let f = &self.field;
        for (pivot, basis) in &self.rows {
            let factor = row[*pivot].clone();
            if f.is_zero(&factor) {
                continue;
            }
            for j in *pivot..self.ncols {
                if !f.is_zero(&basis[j]) {
                    row[j] = f.sub(&row[j], &f.mul(&factor, &basis[j]));
                }
            }
        }
        let Some(pivot) = row.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&row[pivot]).expect("nonzero pivot");
        for x in row.iter_mut().skip(pivot) {
            *x = f.mul(x, &inv);
        }
        self.rows.push((pivot, row));
        true
    }
}

/// Rank over any field by incremental elimination.
pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> usize {
    let mut eb = EchelonBuilder::new(field.clone(), ncols);
    for row in rows {
        eb.push(row.clone());
        if eb.is_full() {
            break;
        }
    }
    eb.rank()
}

/// Integer row proportional to a rational row.
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Fraction-free echelon reduction in place; returns the pivot count and
/// the number of row swaps.
fn bareiss_in_place(a: &mut [Vec<BigInt>], ncols: usize) -> (usize, usize) {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut swaps = 0;
    for col in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    (r, swaps)
}

pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    bareiss_in_place(&mut rows, ncols).0
}

/// Determinant of a square integer matrix.
pub fn bareiss_det(mut rows: Vec<Vec<BigInt>>) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
    let (rank, swaps) = bareiss_in_place(&mut rows, n);
    if rank < n {
        return BigInt::zero();
    }
    let det = rows[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        -det
    } else {
        det
    }
}

pub fn rational_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss_rank(rows.iter().map(|r| clear_denominators(r)).collect(), ncols)
}

/// Determinant of a square rational matrix.
pub fn rational_det(rows: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            clear_denominators(r)
        })
        .collect();
    Rational::new(bareiss_det(ints), scale)
}

/// Basis of `{x : A x = 0}` for an `m x ncols` matrix `A`.
pub fn nullspace<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let f = field;
    let mut a: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !f.is_zero(&a[i][col])) else {
            continue;
        };
        a.swap(p, r);
        let inv = f.inv(&a[r][col]).expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(x, &f.mul(&factor, y));
            }
        }
        pivots.push(col);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[i][fc]);
            }
            v
        })
        .collect()
}

/// Product `A x` for a dense matrix.
pub fn mat_vec<F: Field>(field: &F, rows: &[Vec<F::Elem>], x: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(x)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}
