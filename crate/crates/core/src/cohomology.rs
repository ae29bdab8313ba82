//! Local cohomology of `k[S']` through the combinatorial decomposition
//!
//! ```text
//! H^i(k[S']) = ⊕_{J ∉ π(S), #J ≤ m-2} k[G_J] ⊗ H̃_{i-2}(π_J; k),
//! G_J = ∩_{i∉J} S_i \ ∪_{j∈J} S_j,
//! ```
//!
//! evaluated in facet-value coordinates, where the facets of `S` become the
//! coordinate hyperplanes. Membership of a point in `G_J` is decided exactly,
//! but each `G_J` is only searched in a finite box, so vanishing results carry
//! the bound they were checked at while a witness proves non-vanishing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{build_pi_s, format_face, FieldSpec, SimplicialComplex};
use crate::semigroup::{degree, AffineSemigroup, Explorer, Frame};

/// A reduced Betti number `dim H̃_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub q: i64,
    pub dim: usize,
}

/// A point of some `G_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<i64>,
    pub facet_values: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GjStatus {
    /// `count` points of the box lie in `G_J`; `witness` is the first in
    /// (degree, lexicographic) order.
    WitnessFound { witness: Witness, count: usize },
    EmptyUpToBound { bound: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributionRecord {
    pub j: Vec<usize>,
    /// Nonzero reduced Betti numbers of `π_J`.
    pub betti: Vec<BettiEntry>,
    pub gj_status: GjStatus,
}

impl ContributionRecord {
    pub fn betti_at(&self, q: i64) -> usize {
        self.betti.iter().find(|b| b.q == q).map_or(0, |b| b.dim)
    }

    fn witness_count(&self) -> usize {
        match &self.gj_status {
            GjStatus::WitnessFound { count, .. } => *count,
            GjStatus::EmptyUpToBound { .. } => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LevelVerdict {
    ZeroExact,
    ZeroUpToBound { bound: u64 },
    Nonzero { j: Vec<usize>, witness: Witness },
}

impl LevelVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, LevelVerdict::Nonzero { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            LevelVerdict::ZeroExact => "ZeroExact",
            LevelVerdict::ZeroUpToBound { .. } => "ZeroUpToBound",
            LevelVerdict::Nonzero { .. } => "Nonzero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub i: usize,
    /// Candidates with `H̃_{i-2}(π_J) ≠ 0`.
    pub contributing: Vec<Vec<usize>>,
    pub verdict: LevelVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub rank: usize,
    pub num_facets: usize,
    pub field: FieldSpec,
    pub bound: u64,
    /// Faces of `π(S)`.
    pub complex: Vec<Vec<usize>>,
    /// Non-faces `J` with `#J ≤ m - 2`.
    pub candidates: Vec<Vec<usize>>,
    /// Candidates with a nonzero Betti number in some level `0..r`.
    pub contributions: Vec<ContributionRecord>,
    pub levels: Vec<LevelReport>,
}

impl CohomologyReport {
    pub fn level(&self, i: usize) -> Option<&LevelReport> {
        self.levels.get(i)
    }

    /// `Σ_J count(G_J) · dim H̃_{i-2}(π_J)` over the searched boxes.
    pub fn witness_weighted_dimension(&self, i: usize) -> usize {
        let q = i as i64 - 2;
        self.contributions.iter().map(|c| c.witness_count() * c.betti_at(q)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum CmVerdict {
    CohenMacaulayExact,
    CohenMacaulayUpToBound { bound: u64 },
    NotCohenMacaulay { level: usize, j: Vec<usize>, witness: Witness },
}

impl CmVerdict {
    pub fn is_cohen_macaulay(&self) -> bool {
        !matches!(self, CmVerdict::NotCohenMacaulay { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CmVerdict::CohenMacaulayExact => "CohenMacaulayExact",
            CmVerdict::CohenMacaulayUpToBound { .. } => "CohenMacaulayUpToBound",
            CmVerdict::NotCohenMacaulay { .. } => "NotCohenMacaulay",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub i: usize,
    pub point: Vec<i64>,
    pub dimension: usize,
    /// Candidates `J` with `x ∈ G_J` and `H̃_{i-2}(π_J) ≠ 0`.
    pub contributing: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Agreement {
    /// `S = S'` up to the degree and `k[S']` is Cohen-Macaulay up to the
    /// bound: both sides hold.
    BothHold,
    /// A point of `S' \ S` exists, so `k[S]` is not `S_2`, hence not
    /// Cohen-Macaulay: both sides fail.
    BothFail,
    /// `S = S'` up to the degree but `k[S']` is not Cohen-Macaulay; the two
    /// sides can only be compared once `S' \ S` is known in every degree.
    InconclusiveAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GotoWatanabeReport {
    pub degree: u64,
    pub bound: u64,
    /// Points of `S' \ S` of degree at most `degree`.
    pub sprime_minus_s: Vec<Vec<i64>>,
    pub sprime_verdict: CmVerdict,
    pub agreement: Agreement,
}

impl GotoWatanabeReport {
    pub fn consistent(&self) -> bool {
        !matches!(self.agreement, Agreement::InconclusiveAtBound)
    }
}

/// `4 ×` the largest generator degree.
pub fn default_bound(s: &AffineSemigroup) -> u64 {
    4 * s.max_generator_degree().max(0) as u64
}

/// `3 ×` the largest generator degree.
pub fn default_degree(s: &AffineSemigroup) -> u64 {
    3 * s.max_generator_degree().max(0) as u64
}

fn to_mask(j: &[usize]) -> Vec<bool> {
    let m = j.iter().copied().max().unwrap_or(0);
    let mut in_j = vec![false; m];
    for &l in j {
        in_j[l - 1] = true;
    }
    in_j
}

fn in_j(mask: &[bool], i: usize) -> bool {
    mask.get(i).copied().unwrap_or(false)
}

fn betti_entries(k: &SimplicialComplex, j: &[usize], field: FieldSpec, max_q: i64) -> Result<Vec<BettiEntry>> {
    let restricted = k.restrict(j)?;
    Ok((-1..=max_q)
        .map(|q| BettiEntry { q, dim: restricted.reduced_betti(q, field) })
        .filter(|b| b.dim != 0)
        .collect())
}

/// `v ∈ G_J`.
fn in_gj(explorer: &Explorer, v: &[i64], mask: &[bool], m: usize) -> bool {
    (0..m).all(|i| explorer.certifies_si(v, i) != in_j(mask, i))
}

fn box_for(mask: &[bool], m: usize, bound: i64) -> (Vec<i64>, Vec<i64>) {
    let lo = (0..m).map(|i| if in_j(mask, i) { -bound } else { 0 }).collect();
    (lo, vec![bound; m])
}

fn search_gj(frame: &Frame, explorer: &Explorer, j: &[usize], bound: u64) -> Result<GjStatus> {
    let m = frame.m;
    let mask = to_mask(j);
    let b = i64::try_from(bound).map_err(|_| Error::Overflow)?;
    let (lo, hi) = box_for(&mask, m, b);
    let mut hits: Vec<(i64, Vec<i64>, Vec<i64>)> = Vec::new();
    for v in frame.enumerate_box(&lo, &hi) {
        if in_gj(explorer, &v, &mask, m) {
            let point = frame.ambient_of(&v)?;
            hits.push((degree(&v), point, v));
        }
    }
    hits.sort();
    let count = hits.len();
    Ok(match hits.into_iter().next() {
        Some((_, point, facet_values)) => GjStatus::WitnessFound { witness: Witness { point, facet_values }, count },
        None => GjStatus::EmptyUpToBound { bound },
    })
}

/// Searches `G_J` in the bound-`B` box whether or not `π_J` has homology.
/// `j` holds 1-based facet labels.
pub fn search_g_j(s: &AffineSemigroup, j: &[usize], bound: u64) -> Result<GjStatus> {
    let m = s.num_facets();
    if let Some(&bad) = j.iter().find(|&&l| l == 0 || l > m) {
        return Err(Error::VertexOutOfRange { vertex: bad, max: m });
    }
    let b = i64::try_from(bound).map_err(|_| Error::Overflow)?;
    let frame = s.frame();
    search_gj(frame, &Explorer::new(frame, b), j, bound)
}

/// Builds the report for every level `0 ≤ i < r`.
///
/// For each candidate `J` with a nonzero Betti number in some level, the box
/// `0 ≤ L_i(x) ≤ B (i ∉ J)`, `-B ≤ L_j(x) ≤ B (j ∈ J)` is searched for points
/// of `G_J`. Points of `G_J` satisfy `L_i(x) ≥ 0` for `i ∉ J`, so the box
/// covers every point of `G_J` with facet values at most `B`.
pub fn analyze_cohomology(s: &AffineSemigroup, field: FieldSpec, bound: u64) -> Result<CohomologyReport> {
    let r = s.rank();
    let m = s.num_facets();
    let k = build_pi_s(s);
    let candidates = if m >= 2 { k.non_faces(m - 2) } else { Vec::new() };
    let max_q = r as i64 - 3;

    let mut with_betti = Vec::new();
    for j in &candidates {
        let betti = betti_entries(&k, j, field, max_q)?;
        if !betti.is_empty() {
            with_betti.push((j.clone(), betti));
        }
    }

    let b = i64::try_from(bound).map_err(|_| Error::Overflow)?;
    let frame = s.frame();
    let contributions: Vec<ContributionRecord> = if with_betti.is_empty() {
        Vec::new()
    } else {
        let explorer = Explorer::new(frame, b);
        with_betti
            .into_par_iter()
            .map(|(j, betti)| {
                let gj_status = search_gj(frame, &explorer, &j, bound)?;
                Ok(ContributionRecord { j, betti, gj_status })
            })
            .collect::<Result<_>>()?
    };

    let levels = (0..r)
        .map(|i| {
            let q = i as i64 - 2;
            let relevant: Vec<&ContributionRecord> = contributions.iter().filter(|c| c.betti_at(q) != 0).collect();
            let verdict = if relevant.is_empty() {
                LevelVerdict::ZeroExact
            } else {
                relevant
                    .iter()
                    .find_map(|c| match &c.gj_status {
                        GjStatus::WitnessFound { witness, .. } => {
                            Some(LevelVerdict::Nonzero { j: c.j.clone(), witness: witness.clone() })
                        }
                        GjStatus::EmptyUpToBound { .. } => None,
                    })
                    .unwrap_or(LevelVerdict::ZeroUpToBound { bound })
            };
            LevelReport { i, contributing: relevant.iter().map(|c| c.j.clone()).collect(), verdict }
        })
        .collect();

    Ok(CohomologyReport {
        rank: r,
        num_facets: m,
        field,
        bound,
        complex: k.faces(),
        candidates,
        contributions,
        levels,
    })
}

/// Folds levels `2..r` of a report into a verdict on `k[S']`.
pub fn verdict_of(report: &CohomologyReport) -> CmVerdict {
    let mut exact = true;
    for level in report.levels.iter().skip(2) {
        match &level.verdict {
            LevelVerdict::ZeroExact => {}
            LevelVerdict::ZeroUpToBound { .. } => exact = false,
            LevelVerdict::Nonzero { j, witness } => {
                return CmVerdict::NotCohenMacaulay { level: level.i, j: j.clone(), witness: witness.clone() };
            }
        }
    }
    if exact {
        CmVerdict::CohenMacaulayExact
    } else {
        CmVerdict::CohenMacaulayUpToBound { bound: report.bound }
    }
}

pub fn cm_verdict(s: &AffineSemigroup, field: FieldSpec, bound: u64) -> Result<CmVerdict> {
    Ok(verdict_of(&analyze_cohomology(s, field, bound)?))
}

/// Dimension of the degree-`x` piece of `H^i(k[S'])`.
pub fn graded_piece_dimension(s: &AffineSemigroup, i: usize, x: &[i64], field: FieldSpec) -> Result<GradedPiece> {
    if !s.in_lattice(x)? {
        return Err(Error::NotInLattice);
    }
    let m = s.num_facets();
    let q = i as i64 - 2;
    let k = build_pi_s(s);
    let candidates = if m >= 2 { k.non_faces(m - 2) } else { Vec::new() };
    let frame = s.frame();
    let v = frame.values_of(x)?;
    let mut explorer = None;
    let mut dimension = 0;
    let mut contributing = Vec::new();
    for j in candidates {
        let betti = k.restrict(&j)?.reduced_betti(q, field);
        if betti == 0 {
            continue;
        }
        let top = v.iter().copied().max().unwrap_or(0);
        let explorer = explorer.get_or_insert_with(|| Explorer::new(frame, top));
        if in_gj(explorer, &v, &to_mask(&j), m) {
            dimension += betti;
            contributing.push(j);
        }
    }
    Ok(GradedPiece { i, point: x.to_vec(), dimension, contributing })
}

/// Compares `S = S'` (up to degree `d`) with the Cohen-Macaulay verdict on
/// `k[S']` (box bound `bound`) for a toric surface in `P^4`.
pub fn goto_watanabe_check(s: &AffineSemigroup, d: u64, bound: u64) -> Result<GotoWatanabeReport> {
    if !s.classify().is_toric_surface_in_p4 {
        return Err(Error::NotToricSurfaceInP4);
    }
    let sprime_minus_s = s.sprime_minus_s_up_to(d)?;
    let sprime_verdict = cm_verdict(s, FieldSpec::Rationals, bound)?;
    let agreement = if !sprime_minus_s.is_empty() {
        Agreement::BothFail
    } else if sprime_verdict.is_cohen_macaulay() {
        Agreement::BothHold
    } else {
        Agreement::InconclusiveAtBound
    };
    Ok(GotoWatanabeReport { degree: d, bound, sprime_minus_s, sprime_verdict, agreement })
}

/// `{1,3}` style label for a vertex set.
pub fn format_j(j: &[usize]) -> String {
    format!("{{{}}}", format_face(j))
}
