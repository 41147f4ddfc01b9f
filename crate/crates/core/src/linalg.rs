//! Exact rank of sparse integer matrices over ℚ or a prime field.
//!
//! Rows are kept as sorted sparse vectors. Over 𝔽_p rows are combined with
//! modular inverses; over ℚ elimination is fraction-free (`a·t − b·p`, then the
//! row is divided by its content), first in `i128` and, on overflow, again
//! from scratch with arbitrary-precision integers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient field for every homology-dependent computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldSpec {
    /// Characteristic 0.
    #[default]
    Rationals,
    /// 𝔽_p, standing in for any field of characteristic `p`.
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("q"),
            FieldSpec::PrimeField(p) => write!(f, "f{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `q`, `f<p>` and `fp:<p>` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" || s == "qq" || s == "rationals" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix('f'))
            .ok_or_else(|| Error::Precondition(format!("unknown field '{s}'")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Precondition(format!("unknown field '{s}'")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A sparse integer matrix; every stored entry is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); rows] }
    }

    /// Sums duplicate positions and drops zeros.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Precondition(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            m.data[r].push((c, v));
        }
        for row in &mut m.data {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        Ok(m)
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let data = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|e| *e.1 != 0).map(|(c, v)| (c, *v)).collect())
            .collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r]
            .binary_search_by_key(&c, |e| e.0)
            .map_or(0, |i| self.data[r][i].1)
    }

    /// The matrix with column `c` removed; later columns shift left.
    pub fn without_column(&self, c: usize) -> Self {
        let data = self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|e| e.0 != c)
                    .map(|&(j, v)| (if j > c { j - 1 } else { j }, v))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols.saturating_sub(1), data }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                t.data[c].push((r, v));
            }
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                d[r][c] = v;
            }
        }
        d
    }

    /// `self · other` over the integers.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut trips = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            for &(k, a) in row {
                for &(c, b) in &other.data[k] {
                    trips.push((r, c, a * b));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, trips)
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())
    }
}

/// Rank together with the pivot columns of a left-to-right elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

type Row<E> = Vec<(usize, E)>;

/// Scalar arithmetic for one elimination flavour. `None` from `combine`
/// signals overflow.
trait Arith {
    type E: Clone;
    fn lift(&self, v: i64) -> Option<Self::E>;
    fn combine(&self, target: &Row<Self::E>, pivot: &Row<Self::E>, col: usize) -> Option<Row<Self::E>>;
}

fn entry<E>(row: &Row<E>, col: usize) -> &E {
    let i = row.binary_search_by_key(&col, |e| e.0).expect("pivot column present");
    &row[i].1
}

struct ModP(u64);

impl Arith for ModP {
    type E = u64;

    fn lift(&self, v: i64) -> Option<u64> {
        let r = v.rem_euclid(self.0 as i64) as u64;
        (r != 0).then_some(r)
    }

    fn combine(&self, target: &Row<u64>, pivot: &Row<u64>, col: usize) -> Option<Row<u64>> {
        let p = self.0;
        let inv = pow_mod(*entry(pivot, col), p - 2, p);
        let factor = mul_mod(*entry(target, col), inv, p);
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ci = target.get(i).map_or(usize::MAX, |e| e.0);
            let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
            if ci < cj {
                out.push(target[i]);
                i += 1;
            } else {
                let sub = mul_mod(factor, pivot[j].1, p);
                let v = if ci == cj {
                    let t = target[i].1;
                    i += 1;
                    (t + p - sub) % p
                } else {
                    (p - sub) % p
                };
                if v != 0 {
                    out.push((cj, v));
                }
                j += 1;
            }
        }
        Some(out)
    }
}

/// Integer operations needed by fraction-free elimination.
trait FfInt: Clone {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
    /// `a·x − b·y`, `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
}

impl FfInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
}

impl FfInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
}

struct FractionFree<T>(std::marker::PhantomData<T>);

impl<T: FfInt> Arith for FractionFree<T> {
    type E = T;

    fn lift(&self, v: i64) -> Option<T> {
        (v != 0).then(|| T::from_i64(v))
    }

    fn combine(&self, target: &Row<T>, pivot: &Row<T>, col: usize) -> Option<Row<T>> {
        let a = entry(pivot, col);
        let b = entry(target, col);
        let g = a.gcd(b);
        let (a, b) = (a.div_exact(&g), b.div_exact(&g));
        let zero = T::from_i64(0);
        let mut out: Row<T> = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ci = target.get(i).map_or(usize::MAX, |e| e.0);
            let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
            let (c, v) = if ci < cj {
                i += 1;
                (ci, T::mul_sub(&a, &target[i - 1].1, &b, &zero)?)
            } else if cj < ci {
                j += 1;
                (cj, T::mul_sub(&a, &zero, &b, &pivot[j - 1].1)?)
            } else {
                i += 1;
                j += 1;
                (ci, T::mul_sub(&a, &target[i - 1].1, &b, &pivot[j - 1].1)?)
            };
            if !v.is_zero() {
                out.push((c, v));
            }
        }
        // Divide out the row content to keep entries small.
        if let Some(first) = out.first() {
            let mut content = first.1.clone();
            for e in &out[1..] {
                if content.is_unit() {
                    break;
                }
                content = content.gcd(&e.1);
            }
            if !content.is_unit() {
                for e in &mut out {
                    e.1 = e.1.div_exact(&content);
                }
            }
        }
        Some(out)
    }
}

struct Eliminator<A: Arith> {
    arith: A,
    rows: Vec<Row<A::E>>,
    col_rows: Vec<BTreeSet<usize>>,
    active: BTreeSet<usize>,
}

impl<A: Arith> Eliminator<A> {
    fn new(m: &SparseMatrix, arith: A) -> Self {
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        let mut active = BTreeSet::new();
        let rows: Vec<Row<A::E>> = m
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let lifted: Row<A::E> =
                    row.iter().filter_map(|&(c, v)| arith.lift(v).map(|e| (c, e))).collect();
                for (c, _) in &lifted {
                    col_rows[*c].insert(r);
                }
                if !lifted.is_empty() {
                    active.insert(r);
                }
                lifted
            })
            .collect();
        Self { arith, rows, col_rows, active }
    }

    /// Uses row `r` to clear column `c` from every other active row.
    fn pivot_on(&mut self, r: usize, c: usize) -> Option<()> {
        self.active.remove(&r);
        for (cc, _) in &self.rows[r] {
            self.col_rows[*cc].remove(&r);
        }
        let targets: Vec<usize> = self.col_rows[c].iter().copied().collect();
        for s in targets {
            let old = std::mem::take(&mut self.rows[s]);
            for (cc, _) in &old {
                self.col_rows[*cc].remove(&s);
            }
            let new = self.arith.combine(&old, &self.rows[r], c)?;
            for (cc, _) in &new {
                self.col_rows[*cc].insert(s);
            }
            if new.is_empty() {
                self.active.remove(&s);
            }
            self.rows[s] = new;
        }
        Some(())
    }

    /// Markowitz pivoting: minimise `(r_i − 1)(c_j − 1)`, ties by `(row, col)`.
    fn markowitz_rank(mut self) -> Option<usize> {
        let mut rank = 0;
        while !self.active.is_empty() {
            let mut best: Option<(usize, usize, usize)> = None;
            'scan: for &r in &self.active {
                let rlen = self.rows[r].len() - 1;
                for (c, _) in &self.rows[r] {
                    let cost = rlen * (self.col_rows[*c].len() - 1);
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, r, *c));
                        if cost == 0 {
                            break 'scan;
                        }
                    }
                }
            }
            let (_, r, c) = best.expect("active row has entries");
            self.pivot_on(r, c)?;
            rank += 1;
        }
        Some(rank)
    }

    /// Column-by-column elimination; the pivot row in each column is the
    /// shortest candidate, ties by row index.
    fn left_to_right(mut self, cols: usize) -> Option<Vec<usize>> {
        let mut pivots = Vec::new();
        for c in 0..cols {
            if self.active.is_empty() {
                break;
            }
            let r = self.col_rows[c]
                .iter()
                .copied()
                .min_by_key(|&r| (self.rows[r].len(), r));
            if let Some(r) = r {
                self.pivot_on(r, c)?;
                pivots.push(c);
            }
        }
        Some(pivots)
    }
}

/// Exact rank of `m` over `field`.
pub fn rank(m: &SparseMatrix, field: FieldSpec) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    match field {
        FieldSpec::PrimeField(p) => Eliminator::new(m, ModP(p)).markowitz_rank().expect("no overflow mod p"),
        FieldSpec::Rationals => Eliminator::new(m, FractionFree::<i128>(Default::default()))
            .markowitz_rank()
            .unwrap_or_else(|| {
                Eliminator::new(m, FractionFree::<BigInt>(Default::default()))
                    .markowitz_rank()
                    .expect("bigint elimination cannot overflow")
            }),
    }
}

/// Rank plus the lexicographically first set of pivot columns.
pub fn rank_profile(m: &SparseMatrix, field: FieldSpec) -> RankProfile {
    let pivots = match field {
        FieldSpec::PrimeField(p) => Eliminator::new(m, ModP(p)).left_to_right(m.cols),
        FieldSpec::Rationals => Eliminator::new(m, FractionFree::<i128>(Default::default()))
            .left_to_right(m.cols)
            .or_else(|| Eliminator::new(m, FractionFree::<BigInt>(Default::default())).left_to_right(m.cols)),
    }
    .expect("elimination completes");
    RankProfile { rank: pivots.len(), pivot_columns: pivots }
}
