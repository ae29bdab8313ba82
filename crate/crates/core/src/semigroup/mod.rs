//! Affine semigroups `S ⊂ N^n` given by generators, together with the derived
//! lattice `G_S`, the cone `C(S)`, the facet localizations `S_i`, their
//! intersection `S'`, the Hochster transform and the standardness test.
//!
//! Facets are indexed from 0 in this API; simplicial complexes and reports
//! label them `1..=m`.

mod frame;
mod membership;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{cone_from_generators, PolyCone};
use crate::error::{Error, Result};
use crate::homology::MAX_VERTICES;
use crate::lattice::{rational_rank, Lattice};
use crate::matrix::{dot, primitive_from_rational, solve_rational, IntMatrix};

pub(crate) use frame::{degree, Frame};
pub(crate) use membership::Explorer;
pub use membership::{Certificate, MembershipAnswer, Refutation};

/// An affine semigroup with its derived data. Immutable after construction.
#[derive(Clone, Debug)]
pub struct AffineSemigroup {
    generators: IntMatrix,
    lattice: Lattice,
    cone: PolyCone,
    degree_functional: Vec<BigInt>,
    frame: Frame,
}

/// Rows `L_i` of the Hochster transform and the image semigroup `L(S) ⊂ N^m`.
#[derive(Clone, Debug)]
pub struct HochsterTransform {
    pub matrix: IntMatrix,
    pub image: AffineSemigroup,
}

impl HochsterTransform {
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.left_apply_col(x)
    }
}

/// The three conditions of a standard semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardReport {
    /// `C(S)` is the nonnegative orthant intersected with the span of `G_S`,
    /// so the saturation is `G_S ∩ N^n`.
    pub saturation_is_orthant_section: bool,
    /// Distinct coordinates cut out distinct facets.
    pub facets_distinct: bool,
    /// Each coordinate face has rank `r - 1`.
    pub facet_ranks: bool,
    pub standard: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub ambient_dim: usize,
    pub rank: usize,
    pub num_facets: usize,
    pub num_generators: usize,
    pub homogeneous: bool,
    /// Primitive integer functional in the span that is constant on the
    /// generators, and that constant.
    pub grading: Option<Vec<i64>>,
    pub generator_degree: Option<i64>,
    pub is_toric_surface_in_p4: bool,
}

impl AffineSemigroup {
    /// Builds the semigroup generated by the rows of `gens`.
    pub fn new(gens: &IntMatrix) -> Result<Self> {
        if gens.rows() == 0 || gens.cols() == 0 {
            return Err(Error::NoGenerators);
        }
        for i in 0..gens.rows() {
            if let Some(j) = gens.row(i).iter().position(Signed::is_negative) {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
        let cone = cone_from_generators(gens)?;
        if !cone.is_pointed() {
            return Err(Error::NotPointed);
        }
        if cone.num_facets() > MAX_VERTICES {
            return Err(Error::TooManyFacets(cone.num_facets()));
        }
        let degree_functional = cone.strictly_positive_functional()?;
        let lattice = Lattice::from_generators(gens);
        let frame = Frame::new(&lattice, &cone)?;
        Ok(AffineSemigroup { generators: gens.clone(), lattice, cone, degree_functional, frame })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::NoGenerators);
        }
        let cols = rows[0].len();
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
        Self::new(&IntMatrix::from_rows(cols, rows))
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn generator_rows(&self) -> Vec<Vec<i64>> {
        self.generators.to_i64_rows().expect("checked at construction")
    }

    pub fn num_generators(&self) -> usize {
        self.generators.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.cols()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn num_facets(&self) -> usize {
        self.cone.num_facets()
    }

    pub fn degree_functional(&self) -> &[BigInt] {
        &self.degree_functional
    }

    pub(crate) fn frame(&self) -> &Frame {
        &self.frame
    }

    /// `w(x)`, the degree with respect to the degree functional.
    pub fn degree_of(&self, x: &[i64]) -> Result<i64> {
        self.check_dim(x)?;
        Ok(degree(&self.frame.values_of(x)?))
    }

    /// Largest degree of a generator.
    pub fn max_generator_degree(&self) -> i64 {
        self.frame.gen_values.iter().map(|v| degree(v)).max().unwrap_or(0)
    }

    /// Facet values `(L_1(x), ..., L_m(x))`, i.e. the Hochster coordinates.
    pub fn facet_values(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.check_dim(x)?;
        self.frame.values_of(x)
    }

    /// Generator indices on each facet.
    pub fn facet_generators(&self, facet: usize) -> Result<&[usize]> {
        self.check_facet(facet)?;
        Ok(&self.frame.face_gens[facet])
    }

    fn check_dim(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: x.len() });
        }
        Ok(())
    }

    fn check_facet(&self, facet: usize) -> Result<()> {
        if facet >= self.num_facets() {
            return Err(Error::InvalidFacet { index: facet, facets: self.num_facets() });
        }
        Ok(())
    }

    pub fn in_lattice(&self, x: &[i64]) -> Result<bool> {
        self.check_dim(x)?;
        let big: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.lattice.contains(&big)
    }

    /// Lattice membership followed by the facet values, or the reason the
    /// vector cannot be in any `S_i`.
    fn lattice_values(&self, x: &[i64]) -> Result<Option<Vec<i64>>> {
        if !self.in_lattice(x)? {
            return Ok(None);
        }
        Ok(Some(self.frame.values_of(x)?))
    }

    /// Exact membership in `S`.
    pub fn member_of_s(&self, x: &[i64]) -> Result<MembershipAnswer> {
        let Some(v) = self.lattice_values(x)? else {
            return Ok(MembershipAnswer::refuted(Refutation::NotInLattice));
        };
        if let Some(i) = v.iter().position(|&a| a < 0) {
            return Ok(MembershipAnswer::refuted(Refutation::NegativeOnFacet { facet: i }));
        }
        Ok(match membership::decompose(&self.frame, &v) {
            Some(coefficients) => MembershipAnswer::member(Certificate::Decomposition { coefficients }),
            None => MembershipAnswer::refuted(Refutation::Exhaustive),
        })
    }

    /// Exact membership in `S_i = S - (S ∩ F_i)`. A member comes with a
    /// shift `y ∈ S ∩ F_i` and a decomposition of `x + y`.
    pub fn member_of_si(&self, facet: usize, x: &[i64]) -> Result<MembershipAnswer> {
        self.check_facet(facet)?;
        let Some(v) = self.lattice_values(x)? else {
            return Ok(MembershipAnswer::refuted(Refutation::NotInLattice));
        };
        let explorer = Explorer::new(&self.frame, 0);
        Ok(explorer.in_si(&v, facet))
    }

    /// Exact membership in `S' = ∩_i S_i`.
    pub fn member_of_sprime(&self, x: &[i64]) -> Result<MembershipAnswer> {
        let Some(v) = self.lattice_values(x)? else {
            return Ok(MembershipAnswer::refuted(Refutation::NotInLattice));
        };
        let explorer = Explorer::new(&self.frame, 0);
        Ok(explorer.in_sprime(&v))
    }

    fn sorted_ambient(&self, values: Vec<Vec<i64>>) -> Result<Vec<Vec<i64>>> {
        let mut pts: Vec<(i64, Vec<i64>)> = values
            .into_iter()
            .map(|v| Ok((degree(&v), self.frame.ambient_of(&v)?)))
            .collect::<Result<_>>()?;
        pts.sort();
        Ok(pts.into_iter().map(|(_, x)| x).collect())
    }

    fn saturation_values(&self, d: u64) -> Vec<Vec<i64>> {
        let d = i64::try_from(d).unwrap_or(i64::MAX / 4);
        let m = self.num_facets();
        self.frame
            .enumerate_box(&vec![0; m], &vec![d; m])
            .into_iter()
            .filter(|v| degree(v) <= d)
            .collect()
    }

    /// The points of `G_S ∩ C(S)` of degree at most `d`, sorted by degree and
    /// then lexicographically.
    pub fn saturation_elements_up_to(&self, d: u64) -> Result<Vec<Vec<i64>>> {
        self.sorted_ambient(self.saturation_values(d))
    }

    /// Points of `S' \ S` of degree at most `d`, sorted by degree and then
    /// lexicographically.
    pub fn sprime_minus_s_up_to(&self, d: u64) -> Result<Vec<Vec<i64>>> {
        let candidates = self.saturation_values(d);
        let top = candidates.iter().flat_map(|v| v.iter().copied()).max().unwrap_or(0);
        let explorer = Explorer::new(&self.frame, top);
        let hits = candidates
            .into_iter()
            .filter(|v| (0..self.num_facets()).all(|i| explorer.certifies_si(v, i)))
            .filter(|v| membership::decompose(&self.frame, v).is_none())
            .collect();
        self.sorted_ambient(hits)
    }

    /// `x ↦ (L_1(x), ..., L_m(x))` and the image semigroup in `N^m`.
    pub fn hochster_transform(&self) -> Result<HochsterTransform> {
        let matrix = self.cone.facet_normals().clone();
        let image_gens = self.generators.mul(&matrix.transpose());
        let image = AffineSemigroup::new(&image_gens)?;
        Ok(HochsterTransform { matrix, image })
    }

    /// Checks the three standardness conditions against the coordinate
    /// functionals of `N^n`.
    pub fn is_standard(&self) -> StandardReport {
        let basis = self.lattice.basis();
        let n = self.ambient_dim();
        let r = self.rank();
        // restriction of e_k to the span, in basis coordinates
        let coord: Vec<Vec<BigInt>> = (0..n).map(|k| (0..r).map(|b| basis[(b, k)].clone()).collect()).collect();
        let live: Vec<usize> = (0..n).filter(|&k| coord[k].iter().any(|x| !x.is_zero())).collect();
        let facet_restr: Vec<Vec<BigInt>> =
            self.cone.facet_normals().row_iter().map(|l| basis.left_apply_col(l)).collect();

        let saturation_is_orthant_section =
            facet_restr.iter().all(|f| live.iter().any(|&k| positively_proportional(f, &coord[k])));
        let facets_distinct = live
            .iter()
            .enumerate()
            .all(|(a, &k)| live[a + 1..].iter().all(|&l| !proportional(&coord[k], &coord[l])));
        let facet_ranks = live.iter().all(|&k| {
            let on: Vec<usize> = (0..self.num_generators()).filter(|&g| self.generators[(g, k)].is_zero()).collect();
            rational_rank(&self.generators.select_rows(&on)) + 1 == r
        });
        StandardReport {
            saturation_is_orthant_section,
            facets_distinct,
            facet_ranks,
            standard: saturation_is_orthant_section && facets_distinct && facet_ranks,
        }
    }

    /// Size and grading data, and whether `S` defines a toric surface in `P^4`.
    pub fn classify(&self) -> Profile {
        let mut distinct = self.generator_rows();
        distinct.sort();
        distinct.dedup();
        let grading = self.homogeneous_grading();
        let (grading, generator_degree) = match grading {
            Some((h, d)) => (h.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>(), d.to_i64()),
            None => (None, None),
        };
        let homogeneous = grading.is_some();
        Profile {
            ambient_dim: self.ambient_dim(),
            rank: self.rank(),
            num_facets: self.num_facets(),
            num_generators: distinct.len(),
            homogeneous,
            grading,
            generator_degree,
            is_toric_surface_in_p4: homogeneous && distinct.len() == 5 && self.rank() == 3,
        }
    }

    fn homogeneous_grading(&self) -> Option<(Vec<BigInt>, BigInt)> {
        let basis = self.lattice.basis();
        // functional h = B^t y in the span with G h = 1
        let a = self.generators.mul(&basis.transpose());
        let ones = vec![BigInt::from(1); self.num_generators()];
        let y = solve_rational(&a, &ones)?;
        let y = primitive_from_rational(&y);
        let h = basis.transpose().left_apply_col(&y);
        let mut h = h;
        crate::matrix::make_primitive(&mut h);
        let d = dot(&h, self.generators.row(0));
        if !d.is_positive() {
            return None;
        }
        Some((h, d))
    }
}

fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    (0..a.len()).all(|i| (i..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

fn positively_proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    proportional(a, b) && a.iter().zip(b).all(|(x, y)| x.sign() == y.sign())
}
