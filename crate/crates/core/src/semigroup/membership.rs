//! Membership in `S`, in the facet localizations `S_i = S - (S ∩ F_i)` and in
//! their intersection `S'`.
//!
//! All three are decided exactly. Membership in `S_i` reduces to a knapsack
//! over the generators off the facet modulo the group of the face, see
//! [`Layers`].

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::frame::Frame;

/// Evidence that a vector belongs to a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `x = sum c_g g`.
    Decomposition { coefficients: Vec<u64> },
    /// `x + shift = sum c_g g`, with `shift` in the face semigroup `S ∩ F_facet`
    /// (given by its ambient coordinates).
    Shifted { facet: usize, shift: Vec<i64>, coefficients: Vec<u64> },
    /// One shifted certificate per facet.
    PerFacet { certificates: Vec<Certificate> },
}

/// Reason a vector is definitely not in a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    NotInLattice,
    /// A facet functional is negative on the vector, and it vanishes on every
    /// admissible shift.
    NegativeOnFacet { facet: usize },
    /// Every candidate decomposition was examined.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MembershipAnswer {
    Member { certificate: Certificate },
    NonMember { refutation: Refutation },
}

impl MembershipAnswer {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipAnswer::Member { .. })
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, MembershipAnswer::NonMember { .. })
    }

    pub(crate) fn member(certificate: Certificate) -> Self {
        MembershipAnswer::Member { certificate }
    }

    pub(crate) fn refuted(refutation: Refutation) -> Self {
        MembershipAnswer::NonMember { refutation }
    }
}

/// Exact decomposition of a value vector as a nonnegative combination of the
/// generator values, by depth-first search with memoized failures.
pub(crate) fn decompose(frame: &Frame, target: &[i64]) -> Option<Vec<u64>> {
    if target.iter().any(|&t| t < 0) {
        return None;
    }
    let k = frame.num_generators();
    // support[g]: coordinates some generator with index >= g can still raise
    let mut support = vec![vec![false; frame.m]; k + 1];
    for g in (0..k).rev() {
        support[g] = support[g + 1].clone();
        for i in 0..frame.m {
            support[g][i] |= frame.gen_values[g][i] > 0;
        }
    }
    let mut counts = vec![0u64; k];
    let mut failed: HashSet<(usize, Vec<i64>)> = HashSet::new();
    let mut rem = target.to_vec();
    if search(frame, 0, &mut rem, &mut counts, &support, &mut failed) {
        Some(counts)
    } else {
        None
    }
}

fn search(
    frame: &Frame,
    g: usize,
    rem: &mut Vec<i64>,
    counts: &mut Vec<u64>,
    support: &[Vec<bool>],
    failed: &mut HashSet<(usize, Vec<i64>)>,
) -> bool {
    if rem.iter().all(|&x| x == 0) {
        return true;
    }
    if g == frame.num_generators() {
        return false;
    }
    if (0..frame.m).any(|i| rem[i] > 0 && !support[g][i]) {
        return false;
    }
    if failed.contains(&(g, rem.clone())) {
        return false;
    }
    let vals = &frame.gen_values[g];
    let max = (0..frame.m)
        .filter(|&i| vals[i] > 0)
        .map(|i| rem[i] / vals[i])
        .min()
        .expect("generators of a pointed cone have a positive facet value");
    for c in (0..=max).rev() {
        for i in 0..frame.m {
            rem[i] -= c * vals[i];
        }
        counts[g] = c as u64;
        let ok = search(frame, g + 1, rem, counts, support, failed);
        for i in 0..frame.m {
            rem[i] += c * vals[i];
        }
        if ok {
            return true;
        }
    }
    counts[g] = 0;
    failed.insert((g, rem.clone()));
    false
}

/// residue -> last generator and predecessor residue, `None` for zero
type Layer = BTreeMap<Vec<i64>, Option<(u32, Vec<i64>)>>;

/// Residues modulo the face lattice of one facet that are reachable by
/// nonnegative combinations of the generators off that facet, layered by
/// the value of the facet functional.
///
/// `x` lies in `S_i = S - (S ∩ F_i)` iff `x ∈ S + G(S ∩ F_i)`, i.e. iff
/// `x - sum a_g g` lies in the group of the face for some `a ≥ 0` on the
/// off-face generators. Those satisfy `sum a_g L_i(g) = L_i(x)`, so only
/// finitely many combinations matter, and modulo the face group each layer
/// has at most as many classes as the torsion of `G_S / G(S ∩ F_i)`.
pub(crate) struct Layers {
    facet: usize,
    layers: Vec<Layer>,
}

impl Layers {
    pub fn new(frame: &Frame, facet: usize, max_value: i64) -> Layers {
        let echelon = &frame.face_lattices[facet].echelon;
        let off: Vec<usize> = (0..frame.num_generators()).filter(|&g| frame.gen_values[g][facet] > 0).collect();
        let mut zero = vec![0i64; frame.m];
        echelon.reduce(&mut zero);
        let mut layers: Vec<Layer> = vec![BTreeMap::from([(zero, None)])];
        for t in 1..=max_value.max(0) {
            let mut layer = BTreeMap::new();
            for &g in &off {
                let vals = &frame.gen_values[g];
                let Some(prev) = usize::try_from(t - vals[facet]).ok().map(|p| &layers[p]) else {
                    continue;
                };
                for rho in prev.keys() {
                    let mut next: Vec<i64> = rho.iter().zip(vals).map(|(a, b)| a + b).collect();
                    echelon.reduce(&mut next);
                    layer.entry(next).or_insert_with(|| Some((g as u32, rho.clone())));
                }
            }
            layers.push(layer);
        }
        Layers { facet, layers }
    }

    fn max_value(&self) -> i64 {
        self.layers.len() as i64 - 1
    }

    fn contains(&self, frame: &Frame, v: &[i64]) -> bool {
        let t = v[self.facet];
        if t < 0 || t > self.max_value() {
            return false;
        }
        let mut rho = v.to_vec();
        frame.face_lattices[self.facet].echelon.reduce(&mut rho);
        self.layers[t as usize].contains_key(&rho)
    }

    /// Off-face coefficients `a` with `v - sum a_g g` in the face group.
    fn combination(&self, frame: &Frame, v: &[i64]) -> Option<Vec<u64>> {
        let mut t = v[self.facet];
        if t < 0 || t > self.max_value() {
            return None;
        }
        let mut rho = v.to_vec();
        frame.face_lattices[self.facet].echelon.reduce(&mut rho);
        let mut counts = vec![0u64; frame.num_generators()];
        loop {
            match self.layers[t as usize].get(&rho)? {
                None => return Some(counts),
                Some((g, prev)) => {
                    let g = *g as usize;
                    counts[g] += 1;
                    t -= frame.gen_values[g][self.facet];
                    rho = prev.clone();
                }
            }
        }
    }
}

/// Precomputed membership data for repeated queries on value vectors whose
/// facet values are at most `max_value`. Larger queries are still answered
/// exactly, with the data rebuilt for that query.
pub(crate) struct Explorer<'a> {
    frame: &'a Frame,
    layers: Vec<Layers>,
}

impl<'a> Explorer<'a> {
    pub fn new(frame: &'a Frame, max_value: i64) -> Self {
        let layers = (0..frame.m).map(|i| Layers::new(frame, i, max_value)).collect();
        Explorer { frame, layers }
    }

    fn with_layers<T>(&self, v: &[i64], i: usize, f: impl FnOnce(&Layers) -> T) -> T {
        if v[i] <= self.layers[i].max_value() {
            f(&self.layers[i])
        } else {
            f(&Layers::new(self.frame, i, v[i]))
        }
    }

    /// Membership of the value vector `v` (a lattice point) in `S_i`.
    pub fn in_si(&self, v: &[i64], i: usize) -> MembershipAnswer {
        if v[i] < 0 {
            return MembershipAnswer::refuted(Refutation::NegativeOnFacet { facet: i });
        }
        let Some(mut coefficients) = self.with_layers(v, i, |l| l.combination(self.frame, v)) else {
            return MembershipAnswer::refuted(Refutation::Exhaustive);
        };
        let frame = self.frame;
        let mut rem = v.to_vec();
        for (g, &a) in coefficients.iter().enumerate() {
            for (r, &b) in rem.iter_mut().zip(&frame.gen_values[g]) {
                *r -= a as i64 * b;
            }
        }
        let face = &frame.face_lattices[i];
        let z = face.echelon.coords(&rem).expect("residue matched the face group");
        let face_gens = &frame.face_gens[i];
        let mut shift = vec![0i64; frame.m];
        for (f, &g) in face_gens.iter().enumerate() {
            let c: i128 = z.iter().zip(&face.combos).map(|(zk, row)| zk * row[f] as i128).sum();
            let c = i64::try_from(c).expect("face coefficients fit in i64");
            if c > 0 {
                coefficients[g] += c as u64;
            } else {
                for (y, &b) in shift.iter_mut().zip(&frame.gen_values[g]) {
                    *y -= c * b;
                }
            }
        }
        let shift = frame.ambient_of(&shift).expect("face elements are lattice points");
        MembershipAnswer::member(Certificate::Shifted { facet: i, shift, coefficients })
    }

    /// Fast boolean form of `in_si(..).is_member()`.
    pub fn certifies_si(&self, v: &[i64], i: usize) -> bool {
        v[i] >= 0 && self.with_layers(v, i, |l| l.contains(self.frame, v))
    }

    /// Membership in `S' = ∩ S_i`.
    pub fn in_sprime(&self, v: &[i64]) -> MembershipAnswer {
        let mut certificates = Vec::with_capacity(self.frame.m);
        for i in 0..self.frame.m {
            match self.in_si(v, i) {
                MembershipAnswer::Member { certificate } => certificates.push(certificate),
                refuted => return refuted,
            }
        }
        MembershipAnswer::member(Certificate::PerFacet { certificates })
    }
}
