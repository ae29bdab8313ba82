//! Rational polyhedral cones spanned by finitely many integer vectors.
//!
//! Facets are computed by the double description method applied to the dual
//! cone, working in coordinates of a lattice basis of the span so that the
//! cone is always full-dimensional there. Normals are reported as primitive
//! integer vectors lying in the rational span of the generators, which makes
//! them canonical even when the cone is not full-dimensional in the ambient
//! space.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{rational_rank, Lattice, LatticeMembership};
use crate::matrix::{dot, make_primitive, primitive_from_rational, solve_rational, IntMatrix};

pub const MAX_AMBIENT_DIM: usize = 8;

/// A cone `C = cone(generators)` with its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    ambient_dim: usize,
    generators: IntMatrix,
    rank: usize,
    facet_normals: IntMatrix,
    incidence: Vec<Vec<usize>>,
}

impl PolyCone {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// Dimension of the rational span of the generators.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Primitive facet normals, one per row, in lexicographic order.
    pub fn facet_normals(&self) -> &IntMatrix {
        &self.facet_normals
    }

    pub fn num_facets(&self) -> usize {
        self.facet_normals.rows()
    }

    /// Indices of the generators lying on facet `i` (0-based).
    pub fn incidence(&self, i: usize) -> &[usize] {
        &self.incidence[i]
    }

    pub fn incidences(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Value of the `i`-th facet functional at `x`.
    pub fn facet_value(&self, i: usize, x: &[BigInt]) -> BigInt {
        dot(self.facet_normals.row(i), x)
    }

    /// True when the cone contains no line.
    pub fn is_pointed(&self) -> bool {
        // C is pointed iff its dual, taken inside the span, is full-dimensional.
        rational_rank(&self.facet_normals) == self.rank
    }

    /// An integer functional that is positive on every generator: the sum of
    /// the facet normals.
    pub fn strictly_positive_functional(&self) -> Result<Vec<BigInt>> {
        if !self.is_pointed() {
            return Err(Error::NotPointed);
        }
        let mut w = vec![BigInt::zero(); self.ambient_dim];
        for row in self.facet_normals.row_iter() {
            for (a, b) in w.iter_mut().zip(row) {
                *a += b;
            }
        }
        // Each generator is nonzero and lies in the span, so some facet
        // functional is positive on it.
        if self.generators.row_iter().any(|g| !dot(&w, g).is_positive()) {
            return Err(Error::NotPointed);
        }
        Ok(w)
    }
}

/// Computes the cone spanned by the rows of `gens`.
pub fn cone_from_generators(gens: &IntMatrix) -> Result<PolyCone> {
    if gens.rows() == 0 {
        return Err(Error::NoGenerators);
    }
    if gens.cols() > MAX_AMBIENT_DIM {
        return Err(Error::DimensionTooLarge(gens.cols()));
    }
    if let Some(row) = (0..gens.rows()).find(|&i| gens.is_zero_row(i)) {
        return Err(Error::ZeroGenerator { row });
    }

    let lattice = Lattice::from_generators(gens);
    let basis = lattice.basis();
    let rank = basis.rows();
    let coords: Vec<Vec<BigInt>> = gens
        .row_iter()
        .map(|g| match lattice.membership(g) {
            Ok(LatticeMembership::Member(c)) => c,
            _ => unreachable!("generators lie in the lattice they generate"),
        })
        .collect();

    // Facets of C are the extreme rays of the dual cone {f : f.c >= 0}.
    let rays = dual_extreme_rays(&coords, rank);

    let gram = basis.mul(&basis.transpose());
    let basis_t = basis.transpose();
    let mut normals: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|f| {
            let y = solve_rational(&gram, f).expect("gram matrix of a basis is invertible");
            let y = primitive_from_rational(&y);
            let mut l = basis_t.left_apply_col(&y);
            make_primitive(&mut l);
            l
        })
        .collect();
    normals.sort();
    normals.dedup();

    let incidence = normals
        .iter()
        .map(|l| (0..gens.rows()).filter(|&g| dot(l, gens.row(g)).is_zero()).collect())
        .collect();
    Ok(PolyCone {
        ambient_dim: gens.cols(),
        generators: gens.clone(),
        rank,
        facet_normals: IntMatrix::from_rows(gens.cols(), &normals),
        incidence,
    })
}

struct Ray {
    dir: Vec<BigInt>,
    // zero pattern over the constraints processed so far
    zeros: Vec<bool>,
}

/// Extreme rays of `{f in Q^dim : a.f >= 0 for all a in constraints}`, where
/// the constraints span `Q^dim`. Rays are primitive integer vectors.
fn dual_extreme_rays(constraints: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let n = constraints.len();
    // greedy choice of `dim` independent constraints
    let mut initial: Vec<usize> = Vec::with_capacity(dim);
    for k in 0..n {
        if initial.len() == dim {
            break;
        }
        let mut trial: Vec<Vec<BigInt>> = initial.iter().map(|&i| constraints[i].clone()).collect();
        trial.push(constraints[k].clone());
        if rational_rank(&IntMatrix::from_rows(dim, &trial)) == trial.len() {
            initial.push(k);
        }
    }
    assert_eq!(initial.len(), dim, "constraints must span the space");

    let a0 = IntMatrix::from_rows(dim, &initial.iter().map(|&i| constraints[i].clone()).collect::<Vec<_>>());
    let mut processed = vec![false; n];
    for &i in &initial {
        processed[i] = true;
    }
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let mut e = vec![BigInt::zero(); dim];
            e[k] = BigInt::from(1);
            let f = solve_rational(&a0, &e).expect("independent constraints");
            let dir = primitive_from_rational(&f);
            let zeros = (0..n).map(|i| processed[i] && dot(&constraints[i], &dir).is_zero()).collect();
            Ray { dir, zeros }
        })
        .collect();

    for c in 0..n {
        if processed[c] {
            continue;
        }
        let a = &constraints[c];
        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.dir)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut next: Vec<Ray> = Vec::new();
        for (p, n_) in pos.iter().flat_map(|&p| neg.iter().map(move |&q| (p, q))) {
            let common: Vec<usize> =
                (0..n).filter(|&i| rays[p].zeros[i] && rays[n_].zeros[i]).collect();
            if dim < 2 || common.len() < dim - 2 {
                continue;
            }
            let rows: Vec<Vec<BigInt>> = common.iter().map(|&i| constraints[i].clone()).collect();
            if rational_rank(&IntMatrix::from_rows(dim, &rows)) != dim - 2 {
                continue;
            }
            let (vp, vn) = (&values[p], &values[n_]);
            let mut dir: Vec<BigInt> = rays[n_]
                .dir
                .iter()
                .zip(&rays[p].dir)
                .map(|(x, y)| vp * x - vn * y)
                .collect();
            make_primitive(&mut dir);
            let mut zeros = vec![false; n];
            for &i in &common {
                zeros[i] = true;
            }
            zeros[c] = true;
            next.push(Ray { dir, zeros });
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            r.zeros[c] = values[i].is_zero();
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
        processed[c] = true;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.dir).collect();
    out.sort();
    out.dedup();
    out
}

impl IntMatrix {
    /// Matrix times column vector.
    pub(crate) fn left_apply_col(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols());
        self.row_iter().map(|r| dot(r, v)).collect()
    }
}
