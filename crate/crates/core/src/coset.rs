//! Left-coset representatives of `Γ diag(p^{a_1}, …, p^{a_n}) Γ` with
//! `Γ = SL_n(ℤ)`, and the brute-force product of double cosets.
//!
//! Representatives are row-style Hermite forms: upper triangular with positive
//! diagonal, entries above each pivot reduced modulo that pivot. Two matrices
//! of positive determinant lie in the same left coset `ΓM` iff their Hermite
//! forms agree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{ext_gcd, gcd_i128, p_pow};
use crate::combinat::{enumerate_partitions, Partition};
use crate::error::{Error, Result};
use crate::Rat;

/// Default cap on the number of coset representatives a single call may produce.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(IntMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        Ok(IntMatrix { n, data: rows.concat() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix { n, data: vec![0; n * n] };
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diag(d: &[i64]) -> Self {
        let n = d.len();
        let mut m = IntMatrix { n, data: vec![0; n * n] };
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self> {
        let n = cols.len();
        let mut m = IntMatrix { n, data: vec![0; n * n] };
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::InvalidArgument("matrix is not square".into()));
            }
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: i128 = (0..n).map(|k| self.get(i, k) as i128 * other.get(k, j) as i128).sum();
                out[i * n + j] = i64::try_from(s).map_err(|_| Error::InvalidArgument("entry overflow".into()))?;
            }
        }
        Ok(IntMatrix { n, data: out })
    }

    fn wide(&self) -> Vec<Vec<i128>> {
        self.data.chunks(self.n).map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    }

    pub fn det(&self) -> i128 {
        det_i128(&self.wide())
    }

    /// Adjugate, so that `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Vec<Vec<i128>> {
        let n = self.n;
        let w = self.wide();
        let mut adj = vec![vec![0i128; n]; n];
        if n == 1 {
            adj[0][0] = 1;
            return adj;
        }
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i128>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| w[r][c]).collect())
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[j][i] = sign * det_i128(&minor);
            }
        }
        adj
    }

    /// Row-style Hermite normal form; this is the canonical representative of `ΓM`.
    pub fn hermite_form(&self) -> Result<IntMatrix> {
        let n = self.n;
        let mut a = self.wide();
        for col in 0..n {
            for i in col + 1..n {
                if a[i][col] == 0 {
                    continue;
                }
                let (g, x, y) = ext_gcd(a[col][col], a[i][col]);
                let u = a[col][col] / g;
                let v = a[i][col] / g;
                for c in 0..n {
                    let (top, bot) = (a[col][c], a[i][c]);
                    a[col][c] = x * top + y * bot;
                    a[i][c] = -v * top + u * bot;
                }
            }
            if a[col][col] == 0 {
                return Err(Error::Singular);
            }
            if a[col][col] < 0 {
                for c in 0..n {
                    a[col][c] = -a[col][c];
                }
            }
            let pivot = a[col][col];
            for i in 0..col {
                let q = a[i][col].div_euclid(pivot);
                if q != 0 {
                    for c in 0..n {
                        a[i][c] -= q * a[col][c];
                    }
                }
            }
        }
        let data = a
            .into_iter()
            .flatten()
            .map(|x| i64::try_from(x).map_err(|_| Error::InvalidArgument("entry overflow".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { n, data })
    }

    /// Elementary divisors `e_1 | e_2 | … | e_n` (ascending; zeros last for singular input).
    pub fn elementary_divisors(&self) -> Vec<i128> {
        smith_diagonal(self.wide())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                diag.resize(n, 0);
                return diag;
            };
            a.swap(k, bi);
            for row in a.iter_mut() {
                row.swap(k, bj);
            }
            let pivot = a[k][k];
            let mut clean = true;
            for i in k + 1..n {
                let q = a[i][k] / pivot;
                if q != 0 {
                    for c in k..n {
                        a[i][c] -= q * a[k][c];
                    }
                }
                clean &= a[i][k] == 0;
            }
            for j in k + 1..n {
                let q = a[k][j] / pivot;
                if q != 0 {
                    for row in a.iter_mut().skip(k) {
                        row[j] -= q * row[k];
                    }
                }
                clean &= a[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole remaining block
            let offender = (k + 1..n).find(|&i| (k + 1..n).any(|j| a[i][j] % pivot != 0));
            match offender {
                Some(i) => {
                    for c in k..n {
                        a[k][c] += a[i][c];
                    }
                }
                None => break,
            }
        }
        diag.push(a[k][k].abs());
    }
    diag
}

/// `Δ_j = gcd` of all `j×j` minors, by direct enumeration of minors.
pub fn minor_gcds(m: &IntMatrix) -> Vec<i128> {
    let n = m.dim();
    let w = m.wide();
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    };
    (1..=n)
        .map(|k| {
            let sets = subsets(k);
            let mut g = 0i128;
            for rows in &sets {
                for cols in &sets {
                    let sub: Vec<Vec<i128>> = rows.iter().map(|&r| cols.iter().map(|&c| w[r][c]).collect()).collect();
                    g = gcd_i128(g, det_i128(&sub));
                }
            }
            g
        })
        .collect()
}

/// Determinantal divisors `(Δ_1, …, Δ_n)` of a nonsingular matrix, via the Smith
/// form, cross-checked against the minor gcds for `n ≤ 4`.
pub fn determinantal_divisors(m: &IntMatrix) -> Result<Vec<i128>> {
    let ed = m.elementary_divisors();
    if ed.contains(&0) {
        return Err(Error::Singular);
    }
    let mut out = Vec::with_capacity(ed.len());
    let mut acc = 1i128;
    for e in ed {
        acc *= e;
        out.push(acc);
    }
    if m.dim() <= 4 && minor_gcds(m) != out {
        return Err(Error::Internal(format!("Smith form and minor gcds disagree for {m}")));
    }
    Ok(out)
}

/// `deg T_a(p) = p^{Σ_i (n+1-2i) a_i} · W(1/p) / W_a(1/p)` with `W` the Poincaré
/// polynomial of `S_n` and `W_a` that of the stabilizer of `a`.
pub fn hecke_degree(a: &Partition, p: u64) -> Result<BigInt> {
    let n = a.rank();
    let t = p_pow(p, -1);
    let q_int = |j: usize| -> Rat { (0..j).map(|i| num_traits::pow(t.clone(), i)).sum() };
    let mut ratio = Rat::one();
    for j in 1..=n {
        ratio *= q_int(j);
    }
    for k in a.multiplicities() {
        for j in 1..=k {
            ratio /= q_int(j);
        }
    }
    let exponent: i64 = a
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &ai)| (n as i64 + 1 - 2 * (i as i64 + 1)) * ai as i64)
        .sum();
    let deg = ratio * p_pow(p, exponent);
    if !deg.is_integer() {
        return Err(Error::Internal(format!("non-integral degree for {a} at p = {p}")));
    }
    Ok(deg.to_integer())
}

fn degree_u128(a: &Partition, p: u64) -> Result<u128> {
    hecke_degree(a, p)?
        .to_u128()
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget: 0 })
}

/// Target elementary divisors `(p^{a_n}, …, p^{a_1})`.
fn smith_target(a: &Partition, p: u64) -> Result<Vec<i128>> {
    a.parts()
        .iter()
        .rev()
        .map(|&e| (p as i128).checked_pow(e).ok_or_else(|| Error::InvalidArgument("p-power overflow".into())))
        .collect()
}

#[derive(Clone, Debug)]
pub struct CosetList {
    pub a: Partition,
    pub p: u64,
    pub reps: Vec<IntMatrix>,
}

impl CosetList {
    pub fn degree(&self) -> usize {
        self.reps.len()
    }
}

/// Compositions of `total` into `n` parts with every part in `[lo, hi]`.
fn bounded_compositions(n: usize, total: u32, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in lo..=hi.min(left) {
            cur.push(x);
            rec(n, left - x, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// Complete list of Hermite-form representatives of `Γ\Γ diag(p^a) Γ`.
pub fn coset_decomposition(a: &Partition, p: u64, budget: u128) -> Result<CosetList> {
    let n = a.rank();
    let predicted = degree_u128(a, p)?;
    if predicted > budget {
        return Err(Error::BudgetExceeded { needed: predicted, budget });
    }
    let target = smith_target(a, p)?;
    let lo = a.last();
    let hi = a.parts().first().copied().unwrap_or(0);
    let step = (p as i64).pow(lo);

    // Every entry of M is divisible by p^{a_n}, and p^{a_1} M^{-1} is integral,
    // so the diagonal exponents lie in [a_n, a_1].
    let diagonals = bounded_compositions(n, a.weight(), lo, hi);
    let mut candidates: u128 = 0;
    for b in &diagonals {
        let mut c: u128 = 1;
        for (j, &bj) in b.iter().enumerate() {
            let per = (p as u128).pow(bj) / step as u128;
            c = c.saturating_mul(per.saturating_pow(j as u32));
        }
        candidates = candidates.saturating_add(c);
    }
    let cap = budget.saturating_mul(64);
    if candidates > cap {
        return Err(Error::BudgetExceeded { needed: candidates, budget: cap });
    }

    let mut reps = Vec::new();
    for b in diagonals {
        let d: Vec<i64> = b.iter().map(|&e| (p as i64).pow(e)).collect();
        // slots above the diagonal, each ranging over multiples of `step` below its column pivot
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let radix: Vec<i64> = slots.iter().map(|&(_, j)| d[j] / step).collect();
        let mut digits = vec![0i64; slots.len()];
        let mut m = IntMatrix::diag(&d);
        loop {
            for (s, &(i, j)) in slots.iter().enumerate() {
                m.set(i, j, digits[s] * step);
            }
            if m.elementary_divisors() == target {
                reps.push(m.clone());
            }
            let mut s = 0;
            loop {
                if s == digits.len() {
                    break;
                }
                digits[s] += 1;
                if digits[s] < radix[s] {
                    break;
                }
                digits[s] = 0;
                s += 1;
            }
            if s == digits.len() {
                break;
            }
        }
    }
    reps.sort();
    if reps.len() as u128 != predicted {
        return Err(Error::Internal(format!(
            "found {} cosets for {a} at p = {p}, degree formula gives {predicted}",
            reps.len()
        )));
    }
    Ok(CosetList { a: a.clone(), p, reps })
}

/// Structure constants `T_a T_b = Σ_c α_c T_c` from explicit cosets.
#[derive(Clone, Debug)]
pub struct OracleProduct {
    pub a: Partition,
    pub b: Partition,
    pub p: u64,
    pub constants: BTreeMap<Partition, u64>,
    pub degree_a: u128,
    pub degree_b: u128,
}

/// `#{k : D·B_k^{-1} ∈ ΓA}`, i.e. the number of pairs `(j, k)` with `ΓD = ΓA_jB_k`.
fn pairs_into(d: &IntMatrix, b_adj: &[Vec<Vec<i128>>], det_b: i128, target_a: &[i128]) -> u64 {
    let n = d.dim();
    let dw: Vec<Vec<i128>> = d.rows().into_iter().map(|r| r.into_iter().map(|x| x as i128).collect()).collect();
    let mut count = 0;
    let mut x = vec![vec![0i128; n]; n];
    'outer: for adj in b_adj {
        for i in 0..n {
            for j in 0..n {
                let s: i128 = (0..n).map(|k| dw[i][k] * adj[k][j]).sum();
                if s % det_b != 0 {
                    continue 'outer;
                }
                x[i][j] = s / det_b;
            }
        }
        if smith_diagonal(x.clone()) == target_a {
            count += 1;
        }
    }
    count
}

pub fn oracle_multiply(a: &Partition, b: &Partition, p: u64, budget: u128) -> Result<OracleProduct> {
    let n = a.rank();
    if b.rank() != n {
        return Err(Error::RankMismatch { expected: n, got: b.rank() });
    }
    let degree_a = degree_u128(a, p)?;
    if degree_a > budget {
        return Err(Error::BudgetExceeded { needed: degree_a, budget });
    }
    let cosets_b = coset_decomposition(b, p, budget)?;
    let degree_b = cosets_b.degree() as u128;
    let det_b = (p as i128).pow(b.weight());
    let b_adj: Vec<Vec<Vec<i128>>> = cosets_b.reps.iter().map(|m| m.adjugate()).collect();
    let target_a = smith_target(a, p)?;

    // two further left cosets inside each ΓDΓ, for the constancy check
    let mut upper = IntMatrix::identity(n);
    let mut lower = IntMatrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        upper.set(i, i + 1, 1);
        lower.set(i + 1, i, 1);
    }

    let mut constants = BTreeMap::new();
    let mut degree_sum = BigInt::zero();
    for c in enumerate_partitions(n, a.weight() + b.weight()) {
        let d = IntMatrix::diag(&smith_target(&c, p)?.iter().rev().map(|&x| x as i64).collect::<Vec<_>>());
        let alpha = pairs_into(&d, &b_adj, det_b, &target_a);
        for other in [d.mul(&upper)?, d.mul(&lower)?] {
            let beta = pairs_into(&other, &b_adj, det_b, &target_a);
            if beta != alpha {
                return Err(Error::Internal(format!(
                    "coset count for {c} depends on the left coset: {alpha} vs {beta}"
                )));
            }
        }
        if alpha > 0 {
            degree_sum += hecke_degree(&c, p)? * BigInt::from(alpha);
            constants.insert(c, alpha);
        }
    }
    if degree_sum != BigInt::from(degree_a) * BigInt::from(degree_b) {
        return Err(Error::Internal(format!("degree identity fails for T_{a} T_{b} at p = {p}")));
    }
    Ok(OracleProduct { a: a.clone(), b: b.clone(), p, constants, degree_a, degree_b })
}

pub fn degree_as_rat(a: &Partition, p: u64) -> Result<Rat> {
    Ok(Rat::from_integer(hecke_degree(a, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn hadamard() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1], vec![1, -1, -1, 1]]).unwrap()
    }

    #[test]
    fn coset_counts() {
        assert_eq!(coset_decomposition(&p(&[1, 0]), 3, DEFAULT_BUDGET).unwrap().degree(), 4);
        assert_eq!(coset_decomposition(&p(&[1, 0, 0]), 2, DEFAULT_BUDGET).unwrap().degree(), 7);
        for n in 1..=4 {
            let list = coset_decomposition(&Partition::constant(n, 2), 3, DEFAULT_BUDGET).unwrap();
            assert_eq!(list.reps, vec![IntMatrix::diag(&vec![9; n])]);
        }
    }

    #[test]
    fn representatives_are_distinct_hermite_forms_of_the_right_type() {
        for (a, prime) in [(p(&[2, 1, 0]), 2u64), (p(&[2, 0]), 3), (p(&[1, 1, 0]), 3), (p(&[2, 1, 0, 0]), 2)] {
            let list = coset_decomposition(&a, prime, DEFAULT_BUDGET).unwrap();
            let target = smith_target(&a, prime).unwrap();
            let mut seen = alloc::collections::BTreeSet::new();
            for m in &list.reps {
                assert_eq!(&m.hermite_form().unwrap(), m);
                assert_eq!(m.elementary_divisors(), target);
                assert_eq!(m.det(), (prime as i128).pow(a.weight()));
                assert!(seen.insert(m.clone()));
            }
        }
    }

    #[test]
    fn enumeration_is_complete_without_bounds() {
        // rebuild the list from all upper-triangular Hermite matrices of the right determinant
        let (a, prime) = (p(&[2, 1, 0]), 2u64);
        let target = smith_target(&a, prime).unwrap();
        let mut brute = Vec::new();
        for b in bounded_compositions(3, 3, 0, 3) {
            let d: Vec<i64> = b.iter().map(|&e| 2i64.pow(e)).collect();
            for x01 in 0..d[1] {
                for x02 in 0..d[2] {
                    for x12 in 0..d[2] {
                        let m = IntMatrix::from_rows(&[vec![d[0], x01, x02], vec![0, d[1], x12], vec![0, 0, d[2]]]).unwrap();
                        if m.elementary_divisors() == target {
                            brute.push(m);
                        }
                    }
                }
            }
        }
        brute.sort();
        assert_eq!(brute, coset_decomposition(&a, prime, DEFAULT_BUDGET).unwrap().reps);
    }

    #[test]
    fn budget_is_enforced() {
        let err = coset_decomposition(&p(&[3, 0, 0]), 5, 100).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn determinantal_divisor_examples() {
        // 3×3 minors of diag(4,2,2,1) include 2·2·1, so Δ_3 = 4
        let d = IntMatrix::diag(&[4, 2, 2, 1]);
        assert_eq!(minor_gcds(&d), vec![1, 2, 4, 16]);
        assert_eq!(determinantal_divisors(&d).unwrap(), vec![1, 2, 4, 16]);
        assert_eq!(determinantal_divisors(&IntMatrix::identity(3)).unwrap(), vec![1, 1, 1]);
        let h = hadamard();
        assert_eq!(minor_gcds(&h), vec![1, 2, 4, 16]);
        assert_eq!(determinantal_divisors(&h).unwrap(), vec![1, 2, 4, 16]);
        assert_eq!(h.elementary_divisors(), vec![1, 2, 2, 4]);
        assert_eq!(h.det().abs(), 16);
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(determinantal_divisors(&singular), Err(Error::Singular));
    }

    #[test]
    fn hermite_form_is_left_invariant() {
        let m = IntMatrix::from_rows(&[vec![4, 1, 3], vec![2, 5, 1], vec![0, 2, 7]]).unwrap();
        let u = IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 0], vec![3, 7, 1]]).unwrap();
        assert_eq!(u.det(), 1);
        assert_eq!(u.mul(&m).unwrap().hermite_form().unwrap(), m.hermite_form().unwrap());
        assert_eq!(m.hermite_form().unwrap().det(), m.det().abs());
    }

    #[test]
    fn degree_formula_examples() {
        for prime in [2u64, 3, 5] {
            assert_eq!(hecke_degree(&p(&[1, 0]), prime).unwrap(), BigInt::from(prime + 1));
            assert_eq!(hecke_degree(&p(&[1, 0, 0]), prime).unwrap(), BigInt::from(1 + prime + prime * prime));
            assert_eq!(hecke_degree(&p(&[3, 3, 3]), prime).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn oracle_examples() {
        for prime in [2u64, 3, 5] {
            let prod = oracle_multiply(&p(&[1, 0]), &p(&[1, 0]), prime, DEFAULT_BUDGET).unwrap();
            let expected: BTreeMap<_, _> = [(p(&[2, 0]), 1), (p(&[1, 1]), prime + 1)].into_iter().collect();
            assert_eq!(prod.constants, expected);

            let prod = oracle_multiply(&p(&[1, 0]), &p(&[1, 1]), prime, DEFAULT_BUDGET).unwrap();
            assert_eq!(prod.constants, [(p(&[2, 1]), 1)].into_iter().collect());
        }
        let prod = oracle_multiply(&p(&[1, 0, 0]), &p(&[1, 1, 0]), 2, DEFAULT_BUDGET).unwrap();
        let expected: BTreeMap<_, _> = [(p(&[2, 1, 0]), 1), (p(&[1, 1, 1]), 7)].into_iter().collect();
        assert_eq!(prod.constants, expected);
    }

    // Classifies every product A_j B_k by Hermite form and checks the
    // fixed-coset shortcut against the full pair count.
    #[test]
    fn fixed_coset_shortcut_matches_full_classification() {
        for (a, b, prime) in [
            (p(&[1, 0]), p(&[1, 0]), 3u64),
            (p(&[2, 0]), p(&[1, 0]), 2),
            (p(&[1, 0, 0]), p(&[1, 0, 0]), 2),
            (p(&[1, 0, 0]), p(&[2, 1, 0]), 2),
        ] {
            let ca = coset_decomposition(&a, prime, DEFAULT_BUDGET).unwrap();
            let cb = coset_decomposition(&b, prime, DEFAULT_BUDGET).unwrap();
            let mut by_coset: BTreeMap<IntMatrix, u64> = BTreeMap::new();
            for x in &ca.reps {
                for y in &cb.reps {
                    *by_coset.entry(x.mul(y).unwrap().hermite_form().unwrap()).or_default() += 1;
                }
            }
            let mut by_class: BTreeMap<Vec<i128>, alloc::collections::BTreeSet<u64>> = BTreeMap::new();
            for (m, count) in &by_coset {
                by_class.entry(m.elementary_divisors()).or_default().insert(*count);
            }
            let oracle = oracle_multiply(&a, &b, prime, DEFAULT_BUDGET).unwrap();
            assert_eq!(by_class.len(), oracle.constants.len());
            for (c, alpha) in &oracle.constants {
                let counts = &by_class[&smith_target(c, prime).unwrap()];
                assert_eq!(counts.len(), 1, "count not constant across left cosets of {c}");
                assert_eq!(counts.iter().next(), Some(alpha));
            }
        }
    }
}
