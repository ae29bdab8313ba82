//! Finite simplicial complexes on labelled vertex sets and their reduced
//! homology over `Q` or `F_p`.
//!
//! Vertices are labelled `1..=m`. Faces are stored explicitly as bitmasks, so
//! `m` is capped at [`MAX_VERTICES`]. The chain complex is always augmented by
//! the empty face in degree `-1`: the complex with no faces at all has
//! `H̃_{-1}` of dimension one, every nonempty complex has `H̃_{-1} = 0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational_rank;
use crate::matrix::IntMatrix;
use crate::semigroup::AffineSemigroup;

pub const MAX_VERTICES: usize = 20;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    #[default]
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rational"),
            FieldSpec::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid field `{0}`: expected `rational` or `fp:<prime>`")]
pub struct ParseFieldError(pub String);

impl FromStr for FieldSpec {
    type Err = ParseFieldError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParseFieldError(s.to_string());
        match s {
            "rational" | "rationals" | "q" | "Q" => Ok(FieldSpec::Rationals),
            _ => {
                let p = s.strip_prefix("fp:").ok_or_else(err)?;
                let p: u64 = p.parse().map_err(|_| err())?;
                FieldSpec::prime(p).map_err(|_| err())
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mask_of(vertices: &[usize], max: usize) -> Result<u32> {
    let mut mask = 0u32;
    for &v in vertices {
        if v == 0 || v > max {
            return Err(Error::VertexOutOfRange { vertex: v, max });
        }
        mask |= 1 << (v - 1);
    }
    Ok(mask)
}

fn labels_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// Orders faces by size, then lexicographically on sorted labels.
fn face_order(a: &u32, b: &u32) -> std::cmp::Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| labels_of(*a).cmp(&labels_of(*b)))
}

/// A simplicial complex whose vertices are a subset of `1..=num_vertices`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    num_vertices: usize,
    ground: u32,
    faces: BTreeSet<u32>,
}

impl SimplicialComplex {
    /// The complex on ground set `1..=m` with no faces.
    pub fn empty(m: usize) -> Result<Self> {
        if m > MAX_VERTICES {
            return Err(Error::TooManyFacets(m));
        }
        Ok(SimplicialComplex { num_vertices: m, ground: full_mask(m), faces: BTreeSet::new() })
    }

    /// The downward closure of the given faces. Empty faces are ignored.
    pub fn from_faces<I, F>(m: usize, faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[usize]>,
    {
        let mut k = Self::empty(m)?;
        for f in faces {
            let mask = mask_of(f.as_ref(), m)?;
            k.insert_closed(mask);
        }
        Ok(k)
    }

    /// The full simplex on the given vertices.
    pub fn simplex(m: usize, vertices: &[usize]) -> Result<Self> {
        Self::from_faces(m, [vertices])
    }

    fn insert_closed(&mut self, mask: u32) {
        if mask == 0 || self.faces.contains(&mask) {
            return;
        }
        // enumerate nonempty submasks
        let mut sub = mask;
        while sub != 0 {
            self.faces.insert(sub);
            sub = (sub - 1) & mask;
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Vertex labels of the ground set.
    pub fn ground_set(&self) -> Vec<usize> {
        labels_of(self.ground)
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        match mask_of(face, self.num_vertices) {
            Ok(0) => true,
            Ok(m) => self.faces.contains(&m),
            Err(_) => false,
        }
    }

    /// All nonempty faces, ordered by size and then lexicographically.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut masks: Vec<u32> = self.faces.iter().copied().collect();
        masks.sort_by(face_order);
        masks.into_iter().map(labels_of).collect()
    }

    /// Nonempty subsets of the ground set of size at most `max_size` that are
    /// not faces, in canonical order.
    pub fn non_faces(&self, max_size: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<u32> = Vec::new();
        let ground = self.ground;
        let mut sub = ground;
        while sub != 0 {
            if (sub.count_ones() as usize) <= max_size && !self.faces.contains(&sub) {
                out.push(sub);
            }
            sub = (sub - 1) & ground;
        }
        out.sort_by(face_order);
        out.into_iter().map(labels_of).collect()
    }

    /// The subcomplex of faces contained in `subset`, on ground set `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let mask = mask_of(subset, self.num_vertices)?;
        if mask == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let faces = self.faces.iter().copied().filter(|f| f & !mask == 0).collect();
        Ok(SimplicialComplex { num_vertices: self.num_vertices, ground: mask, faces })
    }

    fn faces_of_size(&self, size: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.faces.iter().copied().filter(|f| f.count_ones() as usize == size).collect();
        v.sort_by(face_order);
        v
    }

    /// Dimension of the augmented chain group in degree `q` (`q >= -1`).
    fn chain_dim(&self, q: i64) -> usize {
        if q == -1 {
            1
        } else {
            self.faces_of_size((q + 1) as usize).len()
        }
    }

    /// Rank of the boundary map from degree `q` to degree `q - 1`.
    fn boundary_rank(&self, q: i64, field: FieldSpec) -> usize {
        if q < 0 {
            return 0;
        }
        let cols = self.faces_of_size((q + 1) as usize);
        if cols.is_empty() {
            return 0;
        }
        let rows: Vec<u32> = if q == 0 { vec![0] } else { self.faces_of_size(q as usize) };
        let mut entries = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, &face) in cols.iter().enumerate() {
            for (k, v) in labels_of(face).into_iter().enumerate() {
                let facet = face & !(1 << (v - 1));
                if let Ok(i) = rows.binary_search_by(|x| face_order(x, &facet)) {
                    entries[i][j] = if k % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        match field {
            FieldSpec::Rationals => {
                let m = IntMatrix::from_rows(cols.len(), &entries.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<Vec<BigInt>>>());
                rational_rank(&m)
            }
            FieldSpec::PrimeField(p) => rank_mod_p(entries, p),
        }
    }

    /// Dimension of the reduced homology group in degree `q`.
    pub fn reduced_betti(&self, q: i64, field: FieldSpec) -> usize {
        if q < -1 || q > self.top_dimension().max(-1) {
            return 0;
        }
        self.chain_dim(q) - self.boundary_rank(q, field) - self.boundary_rank(q + 1, field)
    }

    /// Largest face dimension, or -1 for the complex with no faces.
    pub fn top_dimension(&self) -> i64 {
        self.faces.iter().map(|f| f.count_ones() as i64 - 1).max().unwrap_or(-1)
    }

    /// Reduced Betti numbers in degrees `-1..=top_dimension`.
    pub fn reduced_betti_numbers(&self, field: FieldSpec) -> Vec<usize> {
        (-1..=self.top_dimension()).map(|q| self.reduced_betti(q, field)).collect()
    }

    /// Alternating count of faces including the empty face: `sum (-1)^q f_q`
    /// for `q >= -1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let mut chi = -1;
        for f in &self.faces {
            let q = f.count_ones() as i64 - 1;
            chi += if q % 2 == 0 { 1 } else { -1 };
        }
        chi
    }
}

/// The complex `π(S)` on the facets of `S`: a nonempty set `J` of facet
/// labels is a face iff some generator lies on every facet in `J`.
///
/// This agrees with asking for a nonzero element of `∩_{i∈J} S ∩ F_i`: facet
/// functionals are nonnegative on `S`, so such an element vanishes on `F_i`
/// only if each generator in its decomposition does.
pub fn build_pi_s(s: &AffineSemigroup) -> SimplicialComplex {
    let m = s.num_facets();
    let mut k = SimplicialComplex::empty(m).expect("facet count checked at construction");
    for g in 0..s.num_generators() {
        let mask = (0..m)
            .filter(|&i| s.cone().incidence(i).contains(&g))
            .fold(0u32, |acc, i| acc | (1 << i));
        k.insert_closed(mask);
    }
    k
}

fn full_mask(m: usize) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn rank_mod_p(mut a: Vec<Vec<i64>>, p: u64) -> usize {
    let p = p as i128;
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = a.drain(..).map(|r| r.into_iter().map(|x| (x as i128).rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_inverse(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        for i in 0..rows {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    // extended Euclid
    let (mut r0, mut r1) = (a.rem_euclid(p), p);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p)
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let faces: Vec<String> = self.faces().iter().map(|fc| format_face(fc)).collect();
        write!(f, "{{{}}}", faces.join(", "))
    }
}

/// Writes a face as its concatenated labels when all are single digits
/// (`{13}`), comma-separated otherwise.
pub fn format_face(face: &[usize]) -> String {
    if face.iter().all(|&v| v < 10) {
        face.iter().map(ToString::to_string).collect()
    } else {
        face.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}
