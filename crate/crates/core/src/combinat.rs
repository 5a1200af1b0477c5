//! Partitions, Kostka numbers and contingency-table counts.
//!
//! A [`Partition`] here is always a tuple of exactly `n` non-negative parts
//! stored in non-increasing order; trailing zeros are significant because they
//! fix the rank `n`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::arith::bigint_det;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from arbitrary parts; the parts are sorted into
    /// non-increasing order, since `T_a = T_{σ(a)}`.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Accepts only parts that are already non-increasing.
    pub fn from_canonical(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(alloc::format!(
                "parts {parts:?} are not non-increasing"
            )));
        }
        Ok(Partition(parts))
    }

    pub fn zero(n: usize) -> Self {
        Partition(vec![0; n])
    }

    /// `(c, …, c)` with `n` parts.
    pub fn constant(n: usize, c: u32) -> Self {
        Partition(vec![c; n])
    }

    /// `(j, 0, …, 0)`.
    pub fn row(n: usize, j: u32) -> Self {
        let mut parts = vec![0; n];
        if n > 0 {
            parts[0] = j;
        }
        Partition(parts)
    }

    /// `(j, …, j, 0)`.
    pub fn co_row(n: usize, j: u32) -> Self {
        let mut parts = vec![j; n];
        if n > 0 {
            parts[n - 1] = 0;
        }
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `v(a) = Σ_j j·a_j` with 1-based `j`.
    pub fn v(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &a)| (j as u64 + 1) * a as u64)
            .sum()
    }

    pub fn last(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Multiplicities of the distinct parts, in order of appearance.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let mut prev = None;
        for &a in &self.0 {
            if Some(a) == prev {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
                prev = Some(a);
            }
        }
        out
    }

    /// Subtracts `c` from every part. Returns `None` if some part would go negative.
    pub fn shift_down(&self, c: u32) -> Option<Self> {
        self.0
            .iter()
            .map(|&a| a.checked_sub(c))
            .collect::<Option<Vec<_>>>()
            .map(Partition)
    }

    pub fn shift_up(&self, c: u32) -> Self {
        Partition(self.0.iter().map(|&a| a + c).collect())
    }

    /// Dominance order: `self ⊴ other` iff weights agree and every partial sum
    /// of `self` is at most the matching partial sum of `other`.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let (mut s, mut t) = (0u32, 0u32);
        for j in 0..self.rank().max(other.rank()) {
            s += self.0.get(j).copied().unwrap_or(0);
            t += other.0.get(j).copied().unwrap_or(0);
            if s > t {
                return false;
            }
        }
        true
    }

    /// Parts as signed exponents.
    pub fn exponents(&self) -> Vec<i32> {
        self.0.iter().map(|&a| a as i32).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All partitions with exactly `n` (possibly zero) parts and the given weight,
/// in increasing lexicographic order.
pub fn enumerate_partitions(n: usize, total: u32) -> Vec<Partition> {
    fn rec(n: usize, remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if cur.len() == n {
            if remaining == 0 {
                out.push(Partition(cur.clone()));
            }
            return;
        }
        let slots = (n - cur.len()) as u32;
        // the current part must be large enough that the remaining slots can absorb the rest
        let lo = remaining.div_ceil(slots);
        for a in lo..=max.min(remaining) {
            cur.push(a);
            rec(n, remaining - a, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Partition(Vec::new()));
        }
        return out;
    }
    rec(n, total, total, &mut Vec::with_capacity(n), &mut out);
    out.sort();
    out
}

/// `Π(n)`: partitions of `n` with `n` parts.
pub fn pi(n: usize) -> Vec<Partition> {
    enumerate_partitions(n, n as u32)
}

fn check_weights(a: &Partition, b: &Partition) -> Result<()> {
    if a.weight() != b.weight() {
        return Err(Error::WeightMismatch { left: a.weight(), right: b.weight() });
    }
    Ok(())
}

/// Number of semistandard Young tableaux of shape `shape` and content `content`.
pub fn kostka_number(shape: &Partition, content: &Partition) -> Result<u64> {
    check_weights(shape, content)?;
    let content: Vec<u32> = content.parts().iter().copied().filter(|&c| c > 0).collect();
    let mut memo = BTreeMap::new();
    Ok(kostka_rec(shape.parts(), &content, &mut memo))
}

// Peels off the cells holding the largest letter: they form a horizontal strip.
fn kostka_rec(shape: &[u32], content: &[u32], memo: &mut BTreeMap<(Vec<u32>, usize), u64>) -> u64 {
    let Some((&last, rest)) = content.split_last() else {
        return u64::from(shape.iter().all(|&s| s == 0));
    };
    // letter k = content.len() can only occupy rows 1..=k
    if shape.iter().skip(content.len()).any(|&s| s > 0) {
        return 0;
    }
    let key = (shape.to_vec(), content.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    let mut inner = shape.to_vec();
    strips(shape, 0, last, &mut inner, &mut |nu| {
        total += kostka_rec(nu, rest, memo);
    });
    memo.insert(key, total);
    total
}

// Enumerates ν ⊆ shape with shape/ν a horizontal strip of `size` cells.
fn strips(shape: &[u32], row: usize, size: u32, nu: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if row == shape.len() {
        if size == 0 {
            f(nu);
        }
        return;
    }
    let lo = shape.get(row + 1).copied().unwrap_or(0);
    let max_take = (shape[row] - lo).min(size);
    for take in 0..=max_take {
        nu[row] = shape[row] - take;
        strips(shape, row + 1, size - take, nu, f);
    }
    nu[row] = shape[row];
}

/// Number of non-negative integer matrices with row sums `rows` and column sums `cols`.
pub fn contingency_count(rows: &Partition, cols: &Partition) -> Result<u128> {
    check_weights(rows, cols)?;
    let cols: Vec<u32> = cols.parts().iter().copied().filter(|&c| c > 0).collect();
    let rows: Vec<u32> = rows.parts().iter().copied().filter(|&r| r > 0).collect();
    let mut memo = BTreeMap::new();
    Ok(contingency_rec(rows, &cols, &mut memo))
}

fn contingency_rec(mut rows: Vec<u32>, cols: &[u32], memo: &mut BTreeMap<(Vec<u32>, usize), u128>) -> u128 {
    let Some((&c, rest)) = cols.split_first() else {
        return u128::from(rows.iter().all(|&r| r == 0));
    };
    // completions are symmetric in the remaining row sums
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let key = (rows.clone(), cols.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0u128;
    let mut next = rows.clone();
    fill_column(&rows, 0, c, &mut next, &mut |remaining| {
        total += contingency_rec(remaining.to_vec(), rest, memo);
    });
    memo.insert(key, total);
    total
}

fn fill_column(rows: &[u32], i: usize, left: u32, next: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if i == rows.len() {
        if left == 0 {
            f(next);
        }
        return;
    }
    let tail: u32 = rows[i + 1..].iter().sum();
    let lo = left.saturating_sub(tail);
    for take in lo..=rows[i].min(left) {
        next[i] = rows[i] - take;
        fill_column(rows, i + 1, left - take, next, f);
    }
    next[i] = rows[i];
}

/// Outcome of checking `D = AᵀA` over `Π(n)`.
#[derive(Clone, Debug)]
pub struct CholeskyReport {
    pub n: usize,
    /// `Π(n)` in decreasing lexicographic order; rows and columns of both matrices follow it.
    pub partitions: Vec<Partition>,
    /// `A[λ][μ] = K_{λ,μ}`.
    pub kostka: Vec<Vec<u64>>,
    /// `D[a'][a]`.
    pub contingency: Vec<Vec<u128>>,
    pub product_matches: bool,
    pub dominance_unitriangular: bool,
    /// Upper uni-triangular with the rows listed in decreasing lex order.
    pub lex_upper_unitriangular: bool,
    pub det: BigInt,
}

impl CholeskyReport {
    pub fn success(&self) -> bool {
        self.product_matches && self.dominance_unitriangular && self.det == BigInt::from(1)
    }
}

pub fn verify_cholesky(n: usize) -> Result<CholeskyReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let mut partitions = pi(n);
    partitions.reverse();
    let k = partitions.len();

    let mut kostka = vec![vec![0u64; k]; k];
    let mut contingency = vec![vec![0u128; k]; k];
    for (i, a) in partitions.iter().enumerate() {
        for (j, b) in partitions.iter().enumerate() {
            kostka[i][j] = kostka_number(a, b)?;
            contingency[i][j] = contingency_count(a, b)?;
        }
    }

    let mut product_matches = true;
    for i in 0..k {
        for j in 0..k {
            let s: u128 = (0..k).map(|r| kostka[r][i] as u128 * kostka[r][j] as u128).sum();
            product_matches &= s == contingency[i][j];
        }
    }

    let mut dominance_unitriangular = true;
    let mut lex_upper_unitriangular = true;
    for (i, a) in partitions.iter().enumerate() {
        for (j, b) in partitions.iter().enumerate() {
            let kab = kostka[i][j];
            if i == j {
                dominance_unitriangular &= kab == 1;
                lex_upper_unitriangular &= kab == 1;
            } else {
                if !b.dominated_by(a) {
                    dominance_unitriangular &= kab == 0;
                }
                if j < i {
                    lex_upper_unitriangular &= kab == 0;
                }
            }
        }
    }

    let big: Vec<Vec<BigInt>> = contingency
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let det = bigint_det(&big);

    Ok(CholeskyReport {
        n,
        partitions,
        kostka,
        contingency,
        product_matches,
        dominance_unitriangular,
        lex_upper_unitriangular,
        det,
    })
}
