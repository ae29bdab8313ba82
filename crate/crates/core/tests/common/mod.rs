//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! Nothing here goes through the library's membership or homology code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::Rng;
use semigroup_cm::semigroup::AffineSemigroup;

pub type Rows = Vec<Vec<i64>>;

pub fn rows(r: &[&[i64]]) -> Rows {
    r.iter().map(|x| x.to_vec()).collect()
}

pub fn semigroup(r: &Rows) -> AffineSemigroup {
    AffineSemigroup::from_rows(r).expect("fixture builds")
}

pub fn curve() -> Rows {
    rows(&[&[4, 0], &[3, 1], &[1, 3], &[0, 4]])
}

pub fn identity3() -> Rows {
    rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])
}

pub fn triangle() -> Rows {
    rows(&[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3], &[1, 1, 1], &[2, 1, 0]])
}

/// Toric surfaces in `P^4` whose cone has four facets.
pub fn quadrilaterals() -> Vec<(&'static str, Rows)> {
    vec![
        ("rectangle", rows(&[&[0, 0, 3], &[2, 0, 1], &[0, 1, 2], &[2, 1, 0], &[1, 0, 2]])),
        ("square", rows(&[&[0, 0, 4], &[2, 0, 2], &[0, 2, 2], &[2, 2, 0], &[1, 1, 2]])),
        ("trapezoid", rows(&[&[0, 0, 3], &[3, 0, 0], &[0, 1, 2], &[1, 1, 1], &[1, 0, 2]])),
    ]
}

/// Toric surfaces in `P^4` whose cone has five facets.
pub fn pentagons() -> Vec<(&'static str, Rows)> {
    vec![
        ("pentagon-3", rows(&[&[0, 0, 3], &[1, 0, 2], &[2, 1, 0], &[1, 2, 0], &[0, 1, 2]])),
        ("pentagon-4", rows(&[&[0, 0, 4], &[2, 0, 2], &[3, 1, 0], &[1, 3, 0], &[0, 1, 3]])),
        ("pentagon-5", rows(&[&[0, 0, 5], &[1, 0, 4], &[3, 2, 0], &[2, 3, 0], &[0, 1, 4]])),
    ]
}

/// `k[S']` has nonvanishing `H^2` at facet values `(0, 1, -1, 0, 4)`.
pub fn non_cm() -> Rows {
    rows(&[&[0, 0, 4], &[3, 0, 1], &[0, 1, 3], &[1, 3, 0], &[0, 3, 1], &[2, 0, 2], &[3, 1, 0]])
}

pub fn all_fixtures() -> Vec<(&'static str, Rows)> {
    let mut v = vec![("curve", curve()), ("identity", identity3()), ("triangle", triangle())];
    v.extend(quadrilaterals());
    v.extend(pentagons());
    v.push(("non-cm", non_cm()));
    v
}

/// Elements of `S` of degree at most `max_degree`, by breadth-first search
/// over sums of generators. `weight` gives the degree of each generator and
/// must be positive.
pub fn bfs_elements(gens: &Rows, weight: &[i64], max_degree: i64) -> HashSet<Vec<i64>> {
    let n = gens[0].len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(vec![0; n]);
    queue.push_back((vec![0i64; n], 0i64));
    while let Some((x, d)) = queue.pop_front() {
        for (g, &w) in gens.iter().zip(weight) {
            if d + w > max_degree {
                continue;
            }
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
            if seen.insert(y.clone()) {
                queue.push_back((y, d + w));
            }
        }
    }
    seen
}

pub fn generator_degrees(s: &AffineSemigroup, gens: &Rows) -> Vec<i64> {
    gens.iter().map(|g| s.degree_of(g).unwrap()).collect()
}

/// `x ∈ S_i` decided by searching shifts `y` in the semigroup spanned by
/// `face_gens` of a facet, with `x + y` checked against `s_elements`.
pub fn in_si_by_shift(
    s_elements: &HashSet<Vec<i64>>,
    face_gens: &Rows,
    x: &[i64],
    max_multiplier: i64,
) -> bool {
    let k = face_gens.len();
    let mut coeffs = vec![0i64; k];
    loop {
        let y: Vec<i64> = (0..x.len())
            .map(|c| x[c] + face_gens.iter().zip(&coeffs).map(|(g, a)| g[c] * a).sum::<i64>())
            .collect();
        if s_elements.contains(&y) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            coeffs[i] += 1;
            if coeffs[i] <= max_multiplier {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// Downward-closed family of nonempty vertex bitmasks.
pub fn close(faces: &[u32]) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for &f in faces {
        let mut sub = f;
        while sub != 0 {
            out.insert(sub);
            sub = (sub - 1) & f;
        }
    }
    out
}

pub fn mask_labels(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

fn rank_i128(mut a: Vec<Vec<i128>>) -> usize {
    // cross-multiplied elimination; matrices here are tiny
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                a[r][k] = a[rank][c] * a[r][k] - a[r][c] * a[rank][k];
            }
            a[r][c] = 0;
        }
        rank += 1;
    }
    rank
}

fn rank_mod(mut a: Vec<Vec<i128>>, p: i128) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|&t| a[rank][c] * t % p == 1).unwrap();
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % p;
                for k in 0..cols {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced Betti number from the augmented chain complex, over `Q` when
/// `prime` is `None`.
pub fn naive_reduced_betti(faces: &BTreeSet<u32>, q: i64, prime: Option<u64>) -> usize {
    let of_size = |k: i64| -> Vec<u32> {
        if k == 0 {
            vec![0]
        } else {
            faces.iter().copied().filter(|f| f.count_ones() as i64 == k).collect()
        }
    };
    let boundary_rank = |deg: i64| -> usize {
        if deg < 0 {
            return 0;
        }
        let cols = of_size(deg + 1);
        let rows = of_size(deg);
        if cols.is_empty() || rows.is_empty() {
            return 0;
        }
        let mut m = vec![vec![0i128; cols.len()]; rows.len()];
        for (j, &f) in cols.iter().enumerate() {
            let verts: Vec<u32> = (0..32).filter(|b| f & (1 << b) != 0).collect();
            for (k, &v) in verts.iter().enumerate() {
                let i = rows.iter().position(|&r| r == f & !(1 << v)).unwrap();
                m[i][j] = if k % 2 == 0 { 1 } else { -1 };
            }
        }
        match prime {
            None => rank_i128(m),
            Some(p) => rank_mod(m, p as i128),
        }
    };
    if q < -1 {
        return 0;
    }
    let dim = of_size(q + 1).len();
    dim - boundary_rank(q) - boundary_rank(q + 1)
}

/// Random nonzero vectors in `N^n` with entries at most `max_entry`.
pub fn random_rows(rng: &mut impl Rng, n: usize, count: usize, max_entry: i64) -> Rows {
    (0..count)
        .map(|_| loop {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_entry)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect()
}

/// Multiples of the unit vectors of `N^r` together with random extra points.
pub fn random_orthant_semigroup(rng: &mut impl Rng, r: usize) -> Rows {
    let mut gens: Rows = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = rng.gen_range(1..=3);
            v
        })
        .collect();
    let extra = rng.gen_range(0..=3);
    gens.extend(random_rows(rng, r, extra, 4));
    gens
}

/// Applies a permutation to the rows of `gens` and to its columns.
pub fn permute(gens: &Rows, row_perm: &[usize], col_perm: &[usize]) -> Rows {
    row_perm.iter().map(|&i| col_perm.iter().map(|&c| gens[i][c]).collect()).collect()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}
