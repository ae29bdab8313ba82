//! Machine-integer view of a semigroup in facet-value coordinates.
//!
//! Every element `x` of the lattice `G_S` is identified with the vector of
//! its facet values `(L_1(x), ..., L_m(x))`; the map is injective because the
//! facet normals of a pointed cone span the dual of its span. A unimodular
//! change of lattice basis puts the value map in echelon form, so lattice
//! points with bounded facet values can be enumerated coordinate by
//! coordinate without any rejection sampling.

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, Lattice};
use crate::matrix::IntMatrix;

/// A sublattice of `Z^m` in row echelon form with positive pivots.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    /// From the nonzero rows of a Hermite normal form.
    fn from_hnf(h: &IntMatrix) -> Result<Echelon> {
        let rows: Vec<Vec<i64>> = to_i64_rows(h)?.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
        let pivots = rows.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect();
        Ok(Echelon { rows, pivots })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coordinates of `v` in the rows, if `v` is in the lattice.
    pub fn coords(&self, v: &[i64]) -> Option<Vec<i128>> {
        let mut rem: Vec<i128> = v.iter().map(|&a| a as i128).collect();
        let mut z = Vec::with_capacity(self.rank());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let h = row[p] as i128;
            if rem[p] % h != 0 {
                return None;
            }
            let q = rem[p] / h;
            for (r, &a) in rem.iter_mut().zip(row).skip(p) {
                *r -= q * a as i128;
            }
            z.push(q);
        }
        rem.iter().all(|&r| r == 0).then_some(z)
    }

    /// Canonical representative of `v` modulo the lattice: every pivot
    /// coordinate is reduced into `[0, pivot)`.
    pub fn reduce(&self, v: &mut [i64]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = v[p].div_euclid(row[p]);
            if q != 0 {
                for (a, &b) in v.iter_mut().zip(row).skip(p) {
                    *a -= q * b;
                }
            }
        }
    }
}

/// The lattice generated by the generators on one facet, in value
/// coordinates.
#[derive(Clone, Debug)]
pub(crate) struct FaceLattice {
    pub echelon: Echelon,
    /// `echelon.rows[k] = sum_g combos[k][g] * gen_values[face_gens[g]]`
    pub combos: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub n: usize,
    pub m: usize,
    pub normals: Vec<Vec<i64>>,
    pub gen_values: Vec<Vec<i64>>,
    /// lattice basis, rows; `x = sum z_k basis[k]`
    basis: Vec<Vec<i64>>,
    /// `values(x) = sum z_k tri.rows[k]`
    tri: Echelon,
    pub face_gens: Vec<Vec<usize>>,
    pub face_lattices: Vec<FaceLattice>,
}

fn to_i64_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows().ok_or(Error::EntryTooLarge)
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

fn face_lattice(values: Vec<Vec<i64>>) -> Result<FaceLattice> {
    if values.is_empty() {
        return Ok(FaceLattice { echelon: Echelon { rows: Vec::new(), pivots: Vec::new() }, combos: Vec::new() });
    }
    let (h, u) = hermite_normal_form(&IntMatrix::from_i64_rows(&values));
    let echelon = Echelon::from_hnf(&h)?;
    let mut combos = to_i64_rows(&u)?;
    combos.truncate(echelon.rank());
    Ok(FaceLattice { echelon, combos })
}

impl Frame {
    pub fn new(lattice: &Lattice, cone: &PolyCone) -> Result<Frame> {
        let normals_big = cone.facet_normals();
        let basis_big = lattice.basis();
        // values of the lattice basis: B * N^t
        let values = basis_big.mul(&normals_big.transpose());
        let (tri, u) = hermite_normal_form(&values);
        let basis = u.mul(basis_big);
        let tri = Echelon::from_hnf(&tri)?;
        assert_eq!(tri.rank(), lattice.rank(), "value map is injective on the lattice");
        let gens = cone.generators();
        let gen_values = to_i64_rows(&gens.mul(&normals_big.transpose()))?;
        let m = normals_big.rows();
        let face_gens: Vec<Vec<usize>> = (0..m)
            .map(|i| (0..gen_values.len()).filter(|&g| gen_values[g][i] == 0).collect())
            .collect();
        let face_lattices = face_gens
            .iter()
            .map(|f| face_lattice(f.iter().map(|&g| gen_values[g].clone()).collect()))
            .collect::<Result<_>>()?;
        Ok(Frame {
            n: gens.cols(),
            m,
            normals: to_i64_rows(normals_big)?,
            gen_values,
            basis: to_i64_rows(&basis)?,
            tri,
            face_gens,
            face_lattices,
        })
    }

    pub fn rank(&self) -> usize {
        self.tri.rank()
    }

    pub fn num_generators(&self) -> usize {
        self.gen_values.len()
    }

    /// Facet values of an ambient vector.
    pub fn values_of(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.normals
            .iter()
            .map(|l| narrow(l.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum()))
            .collect()
    }

    /// Ambient vector with the given facet values.
    pub fn ambient_of(&self, v: &[i64]) -> Result<Vec<i64>> {
        let z = self.tri.coords(v).ok_or(Error::NotInLattice)?;
        (0..self.n)
            .map(|j| narrow(z.iter().zip(&self.basis).map(|(zk, b)| zk * b[j] as i128).sum()))
            .collect()
    }

    /// All lattice points whose facet values satisfy `lo[i] <= v_i <= hi[i]`,
    /// as value vectors, in enumeration order.
    pub fn enumerate_box(&self, lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        if self.rank() == 0 {
            return out;
        }
        // coordinates before the first pivot are identically zero
        if (0..self.tri.pivots[0]).any(|i| lo[i] > 0 || hi[i] < 0) {
            return out;
        }
        let mut v = vec![0i64; self.m];
        self.descend(0, lo, hi, &mut v, &mut out);
        out
    }

    fn descend(&self, k: usize, lo: &[i64], hi: &[i64], v: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == self.rank() {
            out.push(v.clone());
            return;
        }
        let p = self.tri.pivots[k];
        let row = &self.tri.rows[k];
        let h = row[p];
        let zmin = (lo[p] - v[p]).div_euclid(h) + i64::from((lo[p] - v[p]).rem_euclid(h) != 0);
        let zmax = (hi[p] - v[p]).div_euclid(h);
        let end = if k + 1 < self.rank() { self.tri.pivots[k + 1] } else { self.m };
        for z in zmin..=zmax {
            for i in p..self.m {
                v[i] += z * row[i];
            }
            if (p + 1..end).all(|i| lo[i] <= v[i] && v[i] <= hi[i]) {
                self.descend(k + 1, lo, hi, v, out);
            }
            for i in p..self.m {
                v[i] -= z * row[i];
            }
        }
    }
}

pub(crate) fn degree(v: &[i64]) -> i64 {
    v.iter().sum()
}
