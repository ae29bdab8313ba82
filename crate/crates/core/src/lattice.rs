//! Exact integer linear algebra: Hermite and Smith normal forms, ranks and
//! lattice membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Index of the entry with the smallest absolute value, ties to the lowest index.
fn smallest_nonzero<'a>(entries: impl Iterator<Item = (usize, &'a BigInt)>) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for (i, v) in entries {
        if v.is_zero() {
            continue;
        }
        let a = v.abs();
        match &best {
            Some((_, b)) if *b <= a => {}
            _ => best = Some((i, a)),
        }
    }
    best.map(|(i, _)| i)
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `h = u * m`, `u` unimodular, `h` in row echelon form
/// with positive pivots and the entries above each pivot reduced into
/// `0..pivot`. Zero rows sit at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row == rows {
            break;
        }
        loop {
            let Some(k) = smallest_nonzero((pivot_row..rows).map(|i| (i, &h[(i, col)]))) else {
                break;
            };
            h.swap_rows(pivot_row, k);
            u.swap_rows(pivot_row, k);
            let mut clean = true;
            for i in pivot_row + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                let neg = -q;
                h.add_row_multiple(i, pivot_row, &neg);
                u.add_row_multiple(i, pivot_row, &neg);
                clean &= h[(i, col)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            let neg = -q;
            h.add_row_multiple(i, pivot_row, &neg);
            u.add_row_multiple(i, pivot_row, &neg);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form: `d = u * m * v` diagonal with `d_1 | d_2 | ...`, all
/// diagonal entries nonnegative, `u` and `v` unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let sub = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
            let idx: Vec<(usize, usize)> = sub.collect();
            let Some(k) = smallest_nonzero(idx.iter().enumerate().map(|(k, &(i, j))| (k, &d[(i, j)])))
            else {
                return (d, u, v);
            };
            let (pi, pj) = idx[k];
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// Nonzero diagonal entries of the Smith normal form.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = smith_normal_form(m);
    (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
}

/// Rank over the rationals by fraction-free elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let x = (&a[(i, j)] * &a[(rank, col)] - &a[(i, col)] * &a[(rank, j)]) / &prev;
                a[(i, j)] = x;
            }
            a[(i, col)] = BigInt::zero();
        }
        prev = a[(rank, col)].clone();
        rank += 1;
    }
    rank
}

/// A full-rank sublattice of `Z^ambient_dim`-span, given by a basis in
/// Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

/// Result of a lattice membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeMembership {
    /// Coefficients with respect to the lattice basis.
    Member(Vec<BigInt>),
    NotMember,
}

impl Lattice {
    /// The lattice generated by the rows of `gens`.
    pub fn from_generators(gens: &IntMatrix) -> Lattice {
        let (h, _) = hermite_normal_form(gens);
        let nonzero: Vec<usize> = (0..h.rows()).filter(|&i| !h.is_zero_row(i)).collect();
        let basis = h.select_rows(&nonzero);
        let pivots = (0..basis.rows())
            .map(|i| (0..basis.cols()).find(|&j| !basis[(i, j)].is_zero()).expect("nonzero row"))
            .collect();
        Lattice { ambient_dim: gens.cols(), basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Basis rows, in Hermite normal form.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Index of the lattice in the integer points of its rational span.
    pub fn index_in_saturation(&self) -> BigInt {
        invariant_factors(&self.basis).into_iter().product()
    }

    /// Decides `x` in the lattice; on success returns the unique coefficient
    /// vector expressing `x` in the basis.
    pub fn membership(&self, x: &[BigInt]) -> Result<LatticeMembership> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: x.len() });
        }
        let mut residual = x.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivots.iter().enumerate() {
            let pivot = &self.basis[(k, p)];
            let (q, r) = residual[p].div_rem(pivot);
            if !r.is_zero() {
                return Ok(LatticeMembership::NotMember);
            }
            for (j, res) in residual.iter_mut().enumerate() {
                *res -= &q * &self.basis[(k, j)];
            }
            coeffs.push(q);
        }
        if residual.iter().all(Zero::is_zero) {
            Ok(LatticeMembership::Member(coeffs))
        } else {
            Ok(LatticeMembership::NotMember)
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(matches!(self.membership(x)?, LatticeMembership::Member(_)))
    }
}
