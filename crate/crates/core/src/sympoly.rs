//! Symmetric Laurent polynomials in `x_1, …, x_n`.
//!
//! A [`SymPoly`] stores one coefficient per `S_n`-orbit of exponent vectors,
//! keyed by the non-increasing representative. The stored coefficient is the
//! coefficient of every monomial in the orbit, i.e. the coefficient of the
//! monomial symmetric function `m_b`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinat::{kostka_number, enumerate_partitions, Partition};
use crate::error::{Error, Result};
use crate::poly::{permutations_with_sign, Exponent, Poly};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    n: usize,
    terms: BTreeMap<Exponent, Rat>,
}

fn canonical(e: &[i32]) -> Exponent {
    let mut v = e.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn is_canonical(e: &[i32]) -> bool {
    e.windows(2).all(|w| w[0] >= w[1])
}

/// Distinct permutations of a multiset of exponents.
pub fn orbit(rep: &[i32]) -> Vec<Exponent> {
    let mut cur = rep.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // lexicographic next-permutation over the ascending start
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

impl SymPoly {
    pub fn zero(n: usize) -> Self {
        SymPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut s = SymPoly::zero(n);
        s.terms.insert(vec![0; n], Rat::one());
        s
    }

    /// The monomial symmetric function `m_a`.
    pub fn monomial_symmetric(a: &Partition) -> Self {
        let mut s = SymPoly::zero(a.rank());
        s.terms.insert(a.exponents(), Rat::one());
        s
    }

    /// `(x_1 ⋯ x_n)^k`.
    pub fn central(n: usize, k: i32) -> Self {
        let mut s = SymPoly::zero(n);
        s.terms.insert(vec![k; n], Rat::one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Orbit representatives (non-increasing) with their coefficients.
    pub fn terms(&self) -> &BTreeMap<Exponent, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^b` for any exponent vector `b`.
    pub fn coeff(&self, b: &[i32]) -> Rat {
        self.terms.get(&canonical(b)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_orbit(&mut self, rep: &[i32], coeff: Rat) {
        debug_assert_eq!(rep.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        let key = canonical(rep);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &SymPoly, scale: &Rat) {
        for (e, c) in &other.terms {
            self.add_orbit(e, c * scale);
        }
    }

    pub fn scale(&self, s: &Rat) -> SymPoly {
        let mut out = SymPoly::zero(self.n);
        out.add_scaled(self, s);
        out
    }

    pub fn sub(&self, other: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    /// Homogeneous degree, if every monomial has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Full monomial expansion.
    pub fn expand(&self) -> Poly {
        let mut p = Poly::zero(self.n);
        for (rep, c) in &self.terms {
            for e in orbit(rep) {
                p.add_term(e, c.clone());
            }
        }
        p
    }

    /// Reads a symmetric polynomial off its full expansion, checking that every
    /// orbit is complete with a constant coefficient.
    pub fn from_poly(p: &Poly) -> Result<SymPoly> {
        let n = p.nvars();
        let mut s = SymPoly::zero(n);
        let mut seen = 0usize;
        for (e, c) in p.terms() {
            if is_canonical(e) {
                for member in orbit(e) {
                    if &p.coeff(&member) != c {
                        return Err(Error::Internal(alloc::format!(
                            "polynomial is not symmetric at {member:?}"
                        )));
                    }
                    seen += 1;
                }
                s.terms.insert(e.clone(), c.clone());
            }
        }
        if seen != p.len() {
            return Err(Error::Internal("polynomial is not symmetric".into()));
        }
        Ok(s)
    }

    /// Exact product. Only exponents whose sum is non-increasing are kept,
    /// which is exactly one representative per orbit of the product.
    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        // expand the larger factor; iterate orbits of the smaller one
        let big: Vec<(Exponent, &Rat)> = large
            .terms
            .iter()
            .flat_map(|(rep, c)| orbit(rep).into_iter().map(move |e| (e, c)))
            .collect();
        let mut acc: BTreeMap<Exponent, Rat> = BTreeMap::new();
        let mut sum = vec![0i32; self.n];
        for (rep, ca) in &small.terms {
            for ea in orbit(rep) {
                for (eb, cb) in &big {
                    let mut ok = true;
                    for k in 0..self.n {
                        sum[k] = ea[k] + eb[k];
                        if k > 0 && sum[k] > sum[k - 1] {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        let entry = acc.entry(sum.clone()).or_insert_with(Rat::zero);
                        *entry += ca * *cb;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SymPoly { n: self.n, terms: acc }
    }

    pub fn pow(&self, k: u32) -> SymPoly {
        let mut out = SymPoly::one(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Invariance under the transposition `(i j)`, checked on the full expansion.
    pub fn is_invariant_under(&self, i: usize, j: usize) -> bool {
        let p = self.expand();
        let mut sigma: Vec<usize> = (0..self.n).collect();
        sigma.swap(i, j);
        p.permute(&sigma) == p
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (rep, c) in &self.terms {
            for e in orbit(rep) {
                let mut m = c.clone();
                for (xi, &ei) in x.iter().zip(&e) {
                    m *= crate::arith::rat_pow(xi, ei as i64);
                }
                total += m;
            }
        }
        total
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (rep, c) in &self.terms {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            for e in orbit(rep) {
                let mut m = Complex64::new(cf, 0.0);
                for (xi, &ei) in x.iter().zip(&e) {
                    m *= xi.powi(ei);
                }
                total += m;
            }
        }
        total
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn max_abs_coeff(&self) -> Rat {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rat::zero)
    }
}

/// `m_a`.
pub fn monomial_symmetric(a: &Partition) -> SymPoly {
    SymPoly::monomial_symmetric(a)
}

/// `x^a ∏_{i<j} (x_i - t·x_j)`, the summand of the symmetrization before `σ` acts.
fn alternant_seed(a: &Partition, t: &Rat) -> Poly {
    let n = a.rank();
    let mut seed = Poly::monomial(a.exponents(), Rat::one());
    for i in 0..n {
        for j in i + 1..n {
            seed = seed.mul(&Poly::binomial(n, i, j, t));
        }
    }
    seed
}

/// `Σ_σ σ( x^a ∏_{i<j} (x_i - t x_j)/(x_i - x_j) )`, computed as the alternating
/// sum of the numerators divided exactly by the Vandermonde product.
pub fn symmetrize_alternant(a: &Partition, t: &Rat) -> Result<SymPoly> {
    let n = a.rank();
    let seed = alternant_seed(a, t);
    let mut numerator = Poly::zero(n);
    for (sigma, sign) in permutations_with_sign(n) {
        numerator.add_scaled(&seed.permute(&sigma), &Rat::from_integer(sign.into()));
    }
    SymPoly::from_poly(&numerator.div_vandermonde()?)
}

/// Schur polynomial `s_a` in `rank(a)` variables via the bialternant `a_{λ+δ} / a_δ`.
pub fn schur(a: &Partition) -> Result<SymPoly> {
    let n = a.rank();
    let shifted: Vec<i32> = a.exponents().iter().enumerate().map(|(i, &x)| x + (n - 1 - i) as i32).collect();
    let mut alt = Poly::zero(n);
    let base = Poly::monomial(shifted, Rat::one());
    for (sigma, sign) in permutations_with_sign(n) {
        alt.add_scaled(&base.permute(&sigma), &Rat::from_integer(sign.into()));
    }
    SymPoly::from_poly(&alt.div_vandermonde()?)
}

/// Schur polynomial via its Kostka expansion `s_a = Σ_b K_{a,b} m_b`.
pub fn schur_via_kostka(a: &Partition) -> Result<SymPoly> {
    let mut s = SymPoly::zero(a.rank());
    for b in enumerate_partitions(a.rank(), a.weight()) {
        let k = kostka_number(a, &b)?;
        s.add_orbit(&b.exponents(), Rat::from_integer(k.into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn m(parts: &[u32]) -> SymPoly {
        SymPoly::monomial_symmetric(&p(parts))
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(m(&[1, 0]).expand().len(), 2);
        assert_eq!(m(&[1, 1]).expand().len(), 1);
        assert_eq!(m(&[2, 1, 0]).expand().len(), 6);
        assert_eq!(orbit(&[2, 2, 0, 0]).len(), 6);
    }

    #[test]
    fn product_examples() {
        let x = m(&[1, 0]);
        let mut expected = m(&[2, 0]);
        expected.add_scaled(&m(&[1, 1]), &rat(2));
        assert_eq!(x.mul(&x), expected);
        assert_eq!(x.mul(&SymPoly::one(2)), x);

        let s1 = schur(&p(&[1, 0])).unwrap();
        let mut rhs = schur(&p(&[2, 0])).unwrap();
        rhs.add_scaled(&schur(&p(&[1, 1])).unwrap(), &rat(1));
        assert_eq!(s1.mul(&s1), rhs);
    }

    #[test]
    fn product_matches_full_expansion() {
        let mut f = m(&[2, 1, 0]);
        f.add_scaled(&m(&[1, 1, 1]), &rat_frac(-3, 2));
        let mut g = m(&[1, 0, 0]);
        g.add_scaled(&m(&[3, 0, 0]), &rat(5));
        let direct = SymPoly::from_poly(&f.expand().mul(&g.expand())).unwrap();
        assert_eq!(f.mul(&g), direct);
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur(&p(&[1, 1])).unwrap(), m(&[1, 1]));
        let s210 = schur(&p(&[2, 1, 0])).unwrap();
        assert_eq!(s210.coeff(&[1, 1, 1]), rat(2));
        // complete homogeneous: every monomial of degree j appears once
        let h3 = schur(&p(&[3, 0, 0])).unwrap();
        for b in enumerate_partitions(3, 3) {
            assert_eq!(h3.coeff(&b.exponents()), rat(1));
        }
    }

    #[test]
    fn schur_routes_agree() {
        for n in 1..=4 {
            for w in 0..=6 {
                for a in enumerate_partitions(n, w) {
                    assert_eq!(schur(&a).unwrap(), schur_via_kostka(&a).unwrap(), "{a}");
                }
            }
        }
    }

    #[test]
    fn alternant_examples() {
        let t = rat_frac(1, 7);
        assert_eq!(symmetrize_alternant(&p(&[1, 0]), &t).unwrap(), m(&[1, 0]));
        assert_eq!(symmetrize_alternant(&p(&[1, 1]), &t).unwrap(), m(&[1, 1]).scale(&(rat(1) + &t)));
        // t = 0 gives the bialternant; for a regular (distinct-part) a it is s_a
        let a = p(&[3, 1, 0]);
        assert_eq!(symmetrize_alternant(&a, &rat(0)).unwrap(), schur(&a).unwrap());
    }

    #[test]
    fn alternant_at_zero_is_schur_even_with_repeated_parts() {
        for n in 1..=4 {
            for w in 0..=4 {
                for a in enumerate_partitions(n, w) {
                    assert_eq!(symmetrize_alternant(&a, &rat(0)).unwrap(), schur(&a).unwrap(), "{a}");
                }
            }
        }
    }

    #[test]
    fn invariance_check() {
        let s = symmetrize_alternant(&p(&[2, 1, 0, 0]), &rat_frac(1, 3)).unwrap();
        assert!(s.is_invariant_under(0, 3));
        assert!(s.is_invariant_under(1, 2));
        assert_eq!(s.homogeneous_degree(), Some(3));
    }

    #[test]
    fn evaluation() {
        let x = [rat(2), rat(3)];
        assert_eq!(m(&[1, 0]).eval(&x), rat(5));
        assert_eq!(m(&[1, 1]).eval(&x), rat(6));
        let z = [Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)];
        assert!((m(&[2, 0]).eval_complex(&z).re - 13.0).abs() < 1e-12);
    }
}
