//! The spherical Hecke algebra at a single prime, multiplied through the
//! Satake transform.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::p_pow;
use crate::combinat::Partition;
use crate::error::{Error, Result};
use crate::satake::SatakeCache;
use crate::sympoly::SymPoly;
use crate::Rat;

/// `T_{(1,…,1)}^{twist} · Σ coeff · T_a`, normalized so that the smallest
/// last part among the stored partitions is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    p: u64,
    twist: i64,
    terms: BTreeMap<Partition, Rat>,
}

impl HeckeElement {
    pub fn zero(n: usize, p: u64) -> Self {
        HeckeElement { n, p, twist: 0, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        Self::generator(&Partition::zero(n), p)
    }

    /// The double-coset operator `T_a(p)`.
    pub fn generator(a: &Partition, p: u64) -> Self {
        let mut e = Self::zero(a.rank(), p);
        e.add_term(&a.exponents(), Rat::one());
        e
    }

    /// Builds an element from exponent vectors, which may have negative parts.
    pub fn from_exponents<'a>(n: usize, p: u64, terms: impl IntoIterator<Item = (&'a [i32], Rat)>) -> Result<Self> {
        let mut e = Self::zero(n, p);
        for (c, x) in terms {
            if c.len() != n {
                return Err(Error::RankMismatch { expected: n, got: c.len() });
            }
            if c.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidArgument(format!("{c:?} is not non-increasing")));
            }
            e.add_term(c, x);
        }
        Ok(e)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Power of the central operator `T_{(1,…,1)}` split off from every term.
    pub fn central_twist(&self) -> i64 {
        self.twist
    }

    /// Stored terms, relative to the central twist.
    pub fn terms(&self) -> &BTreeMap<Partition, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with the twist folded back in, keyed by absolute exponent vectors.
    pub fn absolute_terms(&self) -> BTreeMap<Vec<i32>, Rat> {
        self.terms
            .iter()
            .map(|(a, c)| (a.exponents().iter().map(|&x| x + self.twist as i32).collect(), c.clone()))
            .collect()
    }

    /// Coefficient of `T_c` for an absolute exponent vector `c`.
    pub fn coeff(&self, c: &[i32]) -> Rat {
        let shifted: Option<Vec<u32>> = c.iter().map(|&x| u32::try_from(x as i64 - self.twist).ok()).collect();
        shifted
            .and_then(|s| self.terms.get(&Partition::new(s)).cloned())
            .unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, c: &[i32], x: Rat) {
        if x.is_zero() {
            return;
        }
        let mut abs = self.absolute_terms();
        let entry = abs.entry(c.to_vec()).or_insert_with(Rat::zero);
        *entry += x;
        abs.retain(|_, v| !v.is_zero());
        self.set_absolute(abs);
    }

    fn set_absolute(&mut self, abs: BTreeMap<Vec<i32>, Rat>) {
        let twist = abs.keys().map(|c| *c.last().unwrap_or(&0)).min().unwrap_or(0);
        self.twist = twist as i64;
        self.terms = abs
            .into_iter()
            .map(|(c, x)| (Partition::new(c.iter().map(|&v| (v - twist) as u32).collect::<Vec<_>>()), x))
            .collect();
    }

    pub fn add(&self, other: &HeckeElement) -> Result<HeckeElement> {
        self.check_compatible(other)?;
        let mut abs = self.absolute_terms();
        for (c, x) in other.absolute_terms() {
            *abs.entry(c).or_insert_with(Rat::zero) += x;
        }
        abs.retain(|_, v| !v.is_zero());
        let mut out = Self::zero(self.n, self.p);
        out.set_absolute(abs);
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> HeckeElement {
        if s.is_zero() {
            return Self::zero(self.n, self.p);
        }
        let mut out = self.clone();
        for x in out.terms.values_mut() {
            *x *= s;
        }
        out
    }

    fn check_compatible(&self, other: &HeckeElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch { expected: self.n, got: other.n });
        }
        if self.p != other.p {
            return Err(Error::InvalidArgument(format!("primes differ: {} vs {}", self.p, other.p)));
        }
        Ok(())
    }
}

impl core::fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, x)) in self.absolute_terms().iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let parts: Vec<alloc::string::String> = c.iter().map(|v| format!("{v}")).collect();
            if x.is_one() {
                write!(f, "T({})", parts.join(","))?;
            } else {
                write!(f, "{x}·T({})", parts.join(","))?;
            }
        }
        Ok(())
    }
}

/// `Σ_i i·c_i` with 1-based indices, valid for negative parts.
fn v_of(c: &[i32]) -> i64 {
    c.iter().enumerate().map(|(i, &x)| (i as i64 + 1) * x as i64).sum()
}

/// Hecke algebra of rank `n` at the prime `p`, with a shared Satake cache.
pub struct HeckeAlgebra {
    n: usize,
    p: u64,
    cache: SatakeCache,
}

impl HeckeAlgebra {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(HeckeAlgebra { n, p, cache: SatakeCache::new() })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn cache(&self) -> &SatakeCache {
        &self.cache
    }

    fn check(&self, e: &HeckeElement) -> Result<()> {
        if e.n != self.n {
            return Err(Error::RankMismatch { expected: self.n, got: e.n });
        }
        if e.p != self.p {
            return Err(Error::InvalidArgument(format!("element lives at p = {}, algebra at p = {}", e.p, self.p)));
        }
        Ok(())
    }

    /// `ω(T_c)` for an exponent vector that may have negative parts.
    fn image_of(&self, c: &[i32]) -> Result<SymPoly> {
        let k = *c.last().unwrap_or(&0);
        let a = Partition::new(c.iter().map(|&x| (x - k) as u32).collect::<Vec<_>>());
        let img = self.cache.get(&a, self.p)?;
        if k == 0 {
            return Ok(img.poly.clone());
        }
        Ok(self.twisted(&img.poly, k as i64))
    }

    fn twisted(&self, f: &SymPoly, k: i64) -> SymPoly {
        let nn = (self.n * (self.n + 1) / 2) as i64;
        f.mul(&SymPoly::central(self.n, k as i32)).scale(&p_pow(self.p, -k * nn))
    }

    pub fn satake_of_element(&self, e: &HeckeElement) -> Result<SymPoly> {
        self.check(e)?;
        let mut out = SymPoly::zero(self.n);
        for (a, x) in &e.terms {
            out.add_scaled(&self.cache.get(a, self.p)?.poly, x);
        }
        if e.twist != 0 {
            out = self.twisted(&out, e.twist);
        }
        Ok(out)
    }

    /// Inverts the Satake map. The lex-largest monomial of the residual is
    /// always the leading term of some `ω(T_c)`, whose coefficient there is
    /// `p^{-v(c)}`.
    pub fn from_satake(&self, f: &SymPoly) -> Result<HeckeElement> {
        if f.nvars() != self.n {
            return Err(Error::RankMismatch { expected: self.n, got: f.nvars() });
        }
        let mut residual = f.clone();
        let mut abs: BTreeMap<Vec<i32>, Rat> = BTreeMap::new();
        while let Some((c, gamma)) = residual.terms().iter().next_back().map(|(c, g)| (c.clone(), g.clone())) {
            let alpha = gamma * p_pow(self.p, v_of(&c));
            let image = self.image_of(&c)?;
            residual.add_scaled(&image, &-alpha.clone());
            if residual.terms().range(c.clone()..).next().is_some() {
                return Err(Error::Internal(format!("pivot at {c:?} was not eliminated")));
            }
            abs.insert(c, alpha);
        }
        let mut e = HeckeElement::zero(self.n, self.p);
        e.set_absolute(abs);
        Ok(e)
    }

    pub fn multiply(&self, e: &HeckeElement, f: &HeckeElement) -> Result<HeckeElement> {
        self.check(e)?;
        self.check(f)?;
        let prod = self.satake_of_element(e)?.mul(&self.satake_of_element(f)?);
        self.from_satake(&prod)
    }

    pub fn generator(&self, a: &Partition) -> Result<HeckeElement> {
        if a.rank() != self.n {
            return Err(Error::RankMismatch { expected: self.n, got: a.rank() });
        }
        Ok(HeckeElement::generator(a, self.p))
    }

    /// `T_a T_b = Σ_c α_c T_c` with every `α_c` checked to be a non-negative integer.
    pub fn multiply_generators(&self, a: &Partition, b: &Partition) -> Result<BTreeMap<Partition, u64>> {
        let prod = self.multiply(&self.generator(a)?, &self.generator(b)?)?;
        let mut out = BTreeMap::new();
        for (c, x) in prod.absolute_terms() {
            let count = if x.is_integer() && !x.is_negative() { x.to_integer().to_u64() } else { None };
            let Some(count) = count else {
                return Err(Error::Internal(format!("structure constant {x} at {c:?} in T_{a} T_{b} is not a count")));
            };
            let c = Partition::from_canonical(c.iter().map(|&v| v as u32).collect::<Vec<_>>())?;
            out.insert(c, count);
        }
        Ok(out)
    }

    /// Product `Π_j T_{(a_j,0,…,0)}` over the parts of `a`.
    pub fn row_product(&self, a: &Partition) -> Result<HeckeElement> {
        let mut acc = HeckeElement::identity(self.n, self.p);
        for &j in a.parts().iter().filter(|&&j| j > 0) {
            acc = self.multiply(&acc, &self.generator(&Partition::row(self.n, j))?)?;
        }
        Ok(acc)
    }
}

/// Outcome of expanding `T_{(j,0,…,0)} · T_{(j,…,j,0)}`.
#[derive(Clone, Debug)]
pub struct Lem2Report {
    pub n: usize,
    pub j: u32,
    pub p: u64,
    pub product: BTreeMap<Partition, Rat>,
    /// `c_i` for `i = 0..=j`, the coefficient of `T_{(2j-i, j, …, j, i)}` divided by `p^{(n-1)i}`.
    pub coefficients: Vec<Rat>,
    pub support_ok: bool,
    pub duality_ok: bool,
    pub leading_one: bool,
}

impl Lem2Report {
    pub fn passes(&self) -> bool {
        self.support_ok && self.duality_ok && self.leading_one
    }
}

fn lem2_cell(n: usize, j: u32, i: u32) -> Partition {
    let mut parts = alloc::vec![j; n];
    parts[0] = 2 * j - i;
    parts[n - 1] = i;
    Partition::new(parts)
}

pub fn verify_lem2(algebra: &HeckeAlgebra, j: u32) -> Result<Lem2Report> {
    let n = algebra.rank();
    let p = algebra.prime();
    if n < 2 || j == 0 {
        return Err(Error::InvalidArgument(format!("need n ≥ 2 and j ≥ 1, got n = {n}, j = {j}")));
    }
    let prod = algebra.multiply(
        &algebra.generator(&Partition::row(n, j))?,
        &algebra.generator(&Partition::co_row(n, j))?,
    )?;
    let product: BTreeMap<Partition, Rat> = prod
        .absolute_terms()
        .into_iter()
        .map(|(c, x)| (Partition::new(c.iter().map(|&v| v as u32).collect::<Vec<_>>()), x))
        .collect();

    let cells: Vec<Partition> = (0..=j).map(|i| lem2_cell(n, j, i)).collect();
    let support_ok = product.keys().all(|c| cells.contains(c));
    let dual = |c: &Partition| -> Option<Partition> {
        let parts: Option<Vec<u32>> = c.parts().iter().rev().map(|&x| (2 * j).checked_sub(x)).collect();
        parts.map(Partition::new)
    };
    let duality_ok = product.iter().all(|(c, x)| {
        dual(c).is_some_and(|d| product.get(&d).cloned().unwrap_or_else(Rat::zero) == *x)
    });
    let coefficients: Vec<Rat> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            product.get(c).cloned().unwrap_or_else(Rat::zero) * p_pow(p, -((n as i64 - 1) * i as i64))
        })
        .collect();
    let leading_one = coefficients[0].is_one();
    Ok(Lem2Report { n, j, p, product, coefficients, support_ok, duality_ok, leading_one })
}

/// Largest over `i` of `max_p |c_i| / min_p |c_i|` across a ladder of reports
/// for the same `(n, j)`; coefficients vanishing at every prime are skipped.
pub fn lem2_spread(reports: &[Lem2Report]) -> Option<f64> {
    let width = reports.iter().map(|r| r.coefficients.len()).min()?;
    let mut worst = 1.0f64;
    for i in 0..width {
        let vals: Vec<f64> = reports.iter().map(|r| r.coefficients[i].abs().to_f64().unwrap_or(f64::NAN)).collect();
        if vals.iter().all(|&v| v == 0.0) {
            continue;
        }
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        worst = worst.max(if lo == 0.0 { f64::INFINITY } else { hi / lo });
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};
    use crate::combinat::enumerate_partitions;
    use crate::coset::{oracle_multiply, DEFAULT_BUDGET};
    use alloc::vec;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn satake_of_elements() {
        let alg = HeckeAlgebra::new(2, 3).unwrap();
        let t10 = alg.generator(&p(&[1, 0])).unwrap();
        let img = alg.satake_of_element(&t10).unwrap();
        assert_eq!(img, SymPoly::monomial_symmetric(&p(&[1, 0])).scale(&rat_frac(1, 3)));
        assert_eq!(alg.satake_of_element(&HeckeElement::identity(2, 3)).unwrap(), SymPoly::one(2));

        let e = HeckeElement::generator(&p(&[2, 0]), 3)
            .add(&HeckeElement::generator(&p(&[1, 1]), 3).scale(&rat(4)))
            .unwrap();
        assert_eq!(alg.satake_of_element(&e).unwrap(), img.mul(&img));
    }

    #[test]
    fn twist_normalization() {
        let e = HeckeElement::generator(&p(&[3, 2, 2]), 5);
        assert_eq!(e.central_twist(), 2);
        assert_eq!(e.terms().keys().next(), Some(&p(&[1, 0, 0])));
        assert_eq!(e.coeff(&[3, 2, 2]), rat(1));
        let alg = HeckeAlgebra::new(3, 5).unwrap();
        let direct = crate::satake::satake_image(&p(&[3, 2, 2]), 5).unwrap().poly;
        assert_eq!(alg.satake_of_element(&e).unwrap(), direct);
    }

    #[test]
    fn negative_exponents_roundtrip() {
        let alg = HeckeAlgebra::new(3, 2).unwrap();
        let c: &[i32] = &[1, 0, -1];
        let e = HeckeElement::from_exponents(3, 2, [(c, rat(3))]).unwrap();
        assert_eq!(e.central_twist(), -1);
        let back = alg.from_satake(&alg.satake_of_element(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn product_examples() {
        let alg = HeckeAlgebra::new(2, 3).unwrap();
        let prod = alg.multiply_generators(&p(&[1, 0]), &p(&[1, 0])).unwrap();
        assert_eq!(prod, [(p(&[2, 0]), 1), (p(&[1, 1]), 4)].into_iter().collect());

        let alg = HeckeAlgebra::new(3, 2).unwrap();
        let prod = alg.multiply_generators(&p(&[1, 0, 0]), &p(&[1, 1, 0])).unwrap();
        assert_eq!(prod, [(p(&[2, 1, 0]), 1), (p(&[1, 1, 1]), 7)].into_iter().collect());

        let e = alg.generator(&p(&[2, 1, 0])).unwrap();
        assert_eq!(alg.multiply(&HeckeElement::identity(3, 2), &e).unwrap(), e);
    }

    #[test]
    fn agrees_with_coset_oracle_small() {
        for (n, prime) in [(2usize, 2u64), (2, 5), (3, 2)] {
            let alg = HeckeAlgebra::new(n, prime).unwrap();
            for wa in 0..=2 {
                for wb in 0..=2 {
                    for a in enumerate_partitions(n, wa) {
                        for b in enumerate_partitions(n, wb) {
                            let satake = alg.multiply_generators(&a, &b).unwrap();
                            let oracle = oracle_multiply(&a, &b, prime, DEFAULT_BUDGET).unwrap().constants;
                            assert_eq!(satake, oracle, "{a} · {b} at p = {prime}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn commutative() {
        let alg = HeckeAlgebra::new(3, 3).unwrap();
        let e = alg.generator(&p(&[2, 1, 0])).unwrap().add(&alg.generator(&p(&[1, 0, 0])).unwrap().scale(&rat_frac(-2, 7))).unwrap();
        let f = alg.generator(&p(&[2, 0, 0])).unwrap().add(&HeckeElement::identity(3, 3)).unwrap();
        assert_eq!(alg.multiply(&e, &f).unwrap(), alg.multiply(&f, &e).unwrap());
    }

    #[test]
    fn lem2_rank_two() {
        for prime in [2u64, 3, 5, 101] {
            let alg = HeckeAlgebra::new(2, prime).unwrap();
            let r = verify_lem2(&alg, 1).unwrap();
            assert!(r.passes());
            assert_eq!(r.coefficients, vec![rat(1), rat_frac(prime as i64 + 1, prime as i64)]);
        }
    }

    #[test]
    fn lem2_rank_three() {
        for j in 1..=3 {
            let alg = HeckeAlgebra::new(3, 2).unwrap();
            let r = verify_lem2(&alg, j).unwrap();
            assert!(r.passes(), "{r:?}");
        }
    }
}
