#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use agstar::{FieldSpec, SimplicialComplex};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const Q: FieldSpec = FieldSpec::Rationals;
pub const F2: FieldSpec = FieldSpec::PrimeField(2);
pub const F3: FieldSpec = FieldSpec::PrimeField(3);

pub fn cx(n: usize, raw: &[&[u32]]) -> SimplicialComplex {
    SimplicialComplex::from_vertex_lists(n, raw).unwrap()
}

pub fn fixture(name: &str) -> SimplicialComplex {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut n = 0;
    let mut facets: Vec<Vec<u32>> = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        if let Some(v) = body.strip_prefix("n=") {
            n = v.parse().unwrap();
            continue;
        }
        facets.push(body.split_whitespace().map(|t| t.parse().unwrap()).collect());
    }
    SimplicialComplex::from_vertex_lists(n, &facets).unwrap()
}

// ---------- dense oracle, written independently of the library ----------

/// Rank over ℚ by Bareiss fraction-free elimination on big integers.
pub fn dense_rank_q(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].abs();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank over 𝔽_p by plain Gaussian elimination.
pub fn dense_rank_p(m: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let inv = |x: i64| -> i64 {
        let mut r = 1;
        let (mut b, mut e) = (x, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let s = inv(a[r][c]);
        for j in 0..cols {
            a[r][j] = a[r][j] * s % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

pub fn dense_rank(m: &[Vec<i64>], field: FieldSpec) -> usize {
    match field {
        FieldSpec::Rationals => dense_rank_q(m),
        FieldSpec::PrimeField(p) => dense_rank_p(m, p as i64),
    }
}

/// All faces, as sorted vertex lists, generated from the facet lists.
pub fn all_faces(facets: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    for f in facets {
        for mask in 1u32..(1 << f.len()) {
            out.insert(f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
        }
    }
    out
}

pub fn facet_lists(c: &SimplicialComplex) -> Vec<Vec<u32>> {
    c.facets().iter().map(|f| f.vertices().collect()).collect()
}

/// `dim H̃_k` for `k = -1..=dim`, from explicit face lists and dense ranks.
pub fn oracle_homology_of_faces(faces: &BTreeSet<Vec<u32>>, field: FieldSpec) -> Vec<usize> {
    let top = faces.iter().map(|f| f.len()).max().unwrap_or(0);
    let by_size: Vec<Vec<&Vec<u32>>> = (0..=top + 1).map(|s| faces.iter().filter(|f| f.len() == s).collect()).collect();
    let boundary_rank = |s: usize| -> usize {
        if s == 0 || s > top {
            return 0;
        }
        let rows = &by_size[s - 1];
        let cols = &by_size[s];
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, f) in cols.iter().enumerate() {
            for i in 0..f.len() {
                let mut g = (*f).clone();
                g.remove(i);
                let r = rows.iter().position(|x| **x == g).unwrap();
                m[r][j] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
        dense_rank(&m, field)
    };
    let ranks: Vec<usize> = (0..=top + 1).map(boundary_rank).collect();
    (0..=top).map(|s| by_size[s].len() - ranks[s] - ranks[s + 1]).collect()
}

pub fn oracle_homology(c: &SimplicialComplex, field: FieldSpec) -> Vec<usize> {
    let facets = if c.is_empty_face_only() { Vec::new() } else { facet_lists(c) };
    oracle_homology_of_faces(&all_faces(&facets), field)
}

/// Induced subcomplex on `w`, from face lists.
fn restrict(faces: &BTreeSet<Vec<u32>>, w: &[u32]) -> BTreeSet<Vec<u32>> {
    faces.iter().filter(|f| f.iter().all(|v| w.contains(v))).cloned().collect()
}

/// Type via Hochster's formula on face lists and the dense oracle.
pub fn oracle_type(c: &SimplicialComplex, field: FieldSpec) -> usize {
    let n = c.n();
    let d = (c.dim() + 1) as usize;
    let faces = all_faces(&facet_lists(c));
    let mut total = 0;
    for mask in 0u32..(1 << n) {
        let w: Vec<u32> = (1..=n as u32).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        let k = w.len() as isize - (n - d) as isize - 1;
        if k < -1 {
            continue;
        }
        let h = oracle_homology_of_faces(&restrict(&faces, &w), field);
        total += h.get((k + 1) as usize).copied().unwrap_or(0);
    }
    total
}

// ---------- generators ----------

pub fn cycle(k: u32) -> SimplicialComplex {
    let edges: Vec<Vec<u32>> = (1..=k).map(|i| vec![i, i % k + 1]).collect();
    SimplicialComplex::from_vertex_lists(k as usize, &edges).unwrap()
}

/// Boundary of the simplex on `[k]`.
pub fn sphere(k: u32) -> SimplicialComplex {
    let facets: Vec<Vec<u32>> = (1..=k).map(|skip| (1..=k).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::from_vertex_lists(k as usize, &facets).unwrap()
}

pub fn octahedron() -> SimplicialComplex {
    let mut facets = Vec::new();
    for a in [1, 2] {
        for b in [3, 4] {
            for c in [5, 6] {
                facets.push(vec![a, b, c]);
            }
        }
    }
    SimplicialComplex::from_vertex_lists(6, &facets).unwrap()
}

pub fn sigma() -> SimplicialComplex {
    fixture("sigma.txt")
}

pub fn relabel(rng: &mut ChaCha8Rng, c: &SimplicialComplex) -> SimplicialComplex {
    let mut perm: Vec<u32> = (1..=c.n() as u32).collect();
    perm.shuffle(rng);
    c.permute(&perm)
}

pub fn random_pure(rng: &mut ChaCha8Rng, n: usize, d: usize, p: f64) -> SimplicialComplex {
    let mut facets: Vec<Vec<u32>> = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == d && rng.random_bool(p) {
            facets.push((1..=n as u32).filter(|v| mask >> (v - 1) & 1 == 1).collect());
        }
    }
    if facets.is_empty() {
        facets.push((1..=d as u32).collect());
    }
    SimplicialComplex::from_vertex_lists(n, &facets).unwrap()
}

/// Glues `sigma` onto `gamma` along a random ridge of each.
pub fn random_ridge_sum(
    rng: &mut ChaCha8Rng,
    gamma: &SimplicialComplex,
    sigma: &SimplicialComplex,
) -> SimplicialComplex {
    let dim = gamma.dim();
    let rg = gamma.faces_of_dim(dim - 1);
    let rs = sigma.faces_of_dim(dim - 1);
    let wg = rg[rng.random_range(0..rg.len())];
    let ws = rs[rng.random_range(0..rs.len())];
    let mut gv: Vec<u32> = wg.vertices().collect();
    gv.shuffle(rng);
    let gluing: Vec<(u32, u32)> = ws.vertices().zip(gv).collect();
    SimplicialComplex::ridge_sum(gamma, sigma, &gluing).unwrap()
}

/// A mixed corpus of small complexes with `n <= 7`, `1 <= dim + 1 <= 3`.
pub fn random_corpus(seed: u64, count: usize) -> Vec<SimplicialComplex> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = match rng.random_range(0..12) {
            0 => cycle(rng.random_range(3..=7)),
            1 => sphere(rng.random_range(3..=5)),
            2 => octahedron(),
            3 => sigma(),
            4 => {
                let a = cycle(rng.random_range(3..=4));
                let b = cycle(rng.random_range(3..=4));
                random_ridge_sum(&mut rng, &a, &b)
            }
            5 => {
                let s = sphere(4);
                random_ridge_sum(&mut rng, &s, &s)
            }
            6 => {
                let s = if rng.random_bool(0.5) { sphere(4) } else { octahedron() };
                let f = s.facets()[rng.random_range(0..s.facets().len())];
                s.contrastar(f).unwrap()
            }
            7 => {
                let base = cycle(rng.random_range(3..=6));
                base.cone(base.n() as u32 + 1).unwrap()
            }
            8 => cx(7, &[&[1, 2], &[2, 3], &[1, 3], &[4, 5], &[5, 6], &[6, 7], &[4, 7]]),
            9 => cx(5, &[&[1, 2, 3], &[3, 4, 5]]),
            _ => {
                let n = rng.random_range(3..=7);
                let d = rng.random_range(1..=3.min(n));
                let p = rng.random_range(0.2..0.9);
                random_pure(&mut rng, n, d, p)
            }
        };
        if c.n() <= 7 {
            out.push(relabel(&mut rng, &c));
        }
    }
    out
}

// ---------- exhaustive enumeration ----------

/// One enumerated complex: its vertex count and every nonempty face as a bit set.
pub struct SmallComplex {
    pub m: usize,
    pub faces: Vec<u64>,
}

impl SmallComplex {
    pub fn face_lists(&self) -> BTreeSet<Vec<u32>> {
        let mut out: BTreeSet<Vec<u32>> = self.faces.iter().map(|&f| bits_to_vec(f)).collect();
        out.insert(Vec::new());
        out
    }

    pub fn maximal(&self) -> Vec<Vec<u32>> {
        self.faces
            .iter()
            .filter(|&&f| !self.faces.iter().any(|&g| g != f && g & f == f))
            .map(|&f| bits_to_vec(f))
            .collect()
    }

    pub fn complex(&self) -> SimplicialComplex {
        if self.m == 0 {
            return SimplicialComplex::empty_face_only(1);
        }
        SimplicialComplex::from_vertex_lists(self.m, &self.maximal()).unwrap()
    }
}

fn bits_to_vec(f: u64) -> Vec<u32> {
    (0..64).filter(|i| f >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Every simplicial complex with vertex set exactly `[m]` and at most
/// `max_faces` nonempty faces, for all `m`, plus `{∅}`.
pub fn all_small_complexes(max_faces: usize, mut visit: impl FnMut(&SmallComplex)) {
    visit(&SmallComplex { m: 0, faces: Vec::new() });
    for m in 1..=max_faces {
        let mut candidates: Vec<u64> = (1u64..1 << m).filter(|f| f.count_ones() >= 2).collect();
        candidates.sort_by_key(|f| (f.count_ones(), *f));
        let budget = max_faces - m;
        let mut current = SmallComplex { m, faces: (0..m).map(|i| 1u64 << i).collect() };
        grow(&candidates, 0, budget, &mut current, &mut visit);
    }
}

fn grow(
    candidates: &[u64],
    start: usize,
    budget: usize,
    current: &mut SmallComplex,
    visit: &mut impl FnMut(&SmallComplex),
) {
    visit(current);
    if budget == 0 {
        return;
    }
    for i in start..candidates.len() {
        let f = candidates[i];
        let closed = (0..64)
            .filter(|b| f >> b & 1 == 1)
            .all(|b| {
                let g = f & !(1 << b);
                g.count_ones() < 2 || current.faces.contains(&g)
            });
        if !closed {
            continue;
        }
        current.faces.push(f);
        grow(candidates, i + 1, budget - 1, current, visit);
        current.faces.pop();
    }
}

// ---------- oracle classification ----------

pub fn oracle_link(faces: &BTreeSet<Vec<u32>>, f: &[u32]) -> BTreeSet<Vec<u32>> {
    faces
        .iter()
        .filter(|g| g.iter().all(|v| !f.contains(v)))
        .filter(|g| {
            let mut u: Vec<u32> = g.iter().chain(f).copied().collect();
            u.sort_unstable();
            faces.contains(&u)
        })
        .cloned()
        .collect()
}

/// Reisner's criterion on explicit face lists.
pub fn oracle_is_cm(faces: &BTreeSet<Vec<u32>>, field: FieldSpec) -> bool {
    let d = faces.iter().map(|f| f.len()).max().unwrap_or(0);
    faces.iter().all(|f| {
        let h = oracle_homology_of_faces(&oracle_link(faces, f), field);
        let top = d - f.len();
        h.iter().take(top).all(|&x| x == 0) && h.len() <= top + 1
    })
}

/// CM, and CM of the same dimension after deleting any single facet.
pub fn oracle_is_uniformly_cm(facets: &[Vec<u32>], field: FieldSpec) -> bool {
    let faces = all_faces(facets);
    oracle_is_cm(&faces, field)
        && facets.iter().all(|f| {
            let mut rest = faces.clone();
            rest.remove(f);
            facets.len() > 1 && oracle_is_cm(&rest, field)
        })
}

/// `h`-vector from face counts.
pub fn oracle_h_vector(faces: &BTreeSet<Vec<u32>>) -> Vec<i64> {
    let d = faces.iter().map(|f| f.len()).max().unwrap_or(0);
    let f: Vec<i64> = (0..=d).map(|s| faces.iter().filter(|x| x.len() == s).count() as i64).collect();
    let binom = |a: i64, b: i64| -> i64 { (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1)) };
    (0..=d as i64)
        .map(|k| (0..=k).map(|i| (-1i64).pow((k - i) as u32) * binom(d as i64 - i, k - i) * f[i as usize]).sum())
        .collect()
}
