//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! Only what the alternant construction needs: products, variable
//! permutations and exact division by `x_i - x_j`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rat;

pub type Exponent = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n], Rat::one())
    }

    pub fn monomial(exp: Exponent, coeff: Rat) -> Self {
        let mut p = Poly::zero(exp.len());
        p.add_term(exp, coeff);
        p
    }

    /// `x_i - c·x_j`.
    pub fn binomial(n: usize, i: usize, j: usize, c: &Rat) -> Self {
        let mut p = Poly::zero(n);
        let mut e = vec![0; n];
        e[i] = 1;
        p.add_term(e.clone(), Rat::one());
        e[i] = 0;
        e[j] = 1;
        p.add_term(e, -c.clone());
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: Rat) {
        debug_assert_eq!(exp.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, scale: &Rat) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * scale);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Applies `σ` to the variables: `x_i ↦ x_{σ(i)}`.
    pub fn permute(&self, sigma: &[usize]) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.n];
            for (i, &ei) in e.iter().enumerate() {
                f[sigma[i]] = ei;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Exact quotient by `x_i - x_j`; a nonzero remainder is an error.
    pub fn div_exact_linear(&self, i: usize, j: usize) -> Result<Poly> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Write F = Σ_k F_k x_i^k and run synthetic division by (x_i - x_j)
        // from the top degree down.
        let mut slices: BTreeMap<i32, BTreeMap<Exponent, Rat>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[i];
            rest[i] = 0;
            slices.entry(k).or_default().insert(rest, c.clone());
        }
        let lo = *slices.keys().next().unwrap();
        let hi = *slices.keys().next_back().unwrap();

        let mut quotient = Poly::zero(self.n);
        let mut carry: BTreeMap<Exponent, Rat> = BTreeMap::new();
        let mut k = hi;
        while k >= lo {
            // Q_{k-1} = F_k + x_j·Q_k
            let mut q = slices.remove(&k).unwrap_or_default();
            for (e, c) in carry {
                let mut f = e;
                f[j] += 1;
                let entry = q.entry(f).or_insert_with(Rat::zero);
                *entry += c;
            }
            q.retain(|_, c| !c.is_zero());
            if k == lo {
                if !q.is_empty() {
                    return Err(Error::Internal(format!(
                        "nonzero remainder dividing by (x{} - x{})",
                        i + 1,
                        j + 1
                    )));
                }
                break;
            }
            for (e, c) in &q {
                let mut f = e.clone();
                f[i] = k - 1;
                quotient.add_term(f, c.clone());
            }
            carry = q;
            k -= 1;
        }
        Ok(quotient)
    }

    /// Divides by the Vandermonde product `∏_{i<j} (x_i - x_j)`, one factor at a time.
    pub fn div_vandermonde(&self) -> Result<Poly> {
        let mut q = self.clone();
        for i in 0..self.n {
            for j in i + 1..self.n {
                q = q.div_exact_linear(i, j)?;
            }
        }
        Ok(q)
    }

    pub fn vandermonde(n: usize) -> Poly {
        let mut v = Poly::one(n);
        for i in 0..n {
            for j in i + 1..n {
                v = v.mul(&Poly::binomial(n, i, j, &Rat::one()));
            }
        }
        v
    }
}

/// All permutations of `0..n` together with their signs.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, sign: &mut i32, out: &mut Vec<(Vec<usize>, i32)>) {
        if k <= 1 {
            out.push((perm.clone(), *sign));
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, perm, sign, out);
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
            *sign = -*sign;
        }
        heap(k - 1, perm, sign, out);
    }
    let mut sign = 1;
    heap(n, &mut perm, &mut sign, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    #[test]
    fn division_roundtrip() {
        let n = 3;
        let v = Poly::vandermonde(n);
        let mut f = Poly::zero(n);
        f.add_term(vec![2, 0, 1], rat(3));
        f.add_term(vec![0, 1, 1], rat_frac(-1, 2));
        f.add_term(vec![0, 0, 0], rat(7));
        let prod = f.mul(&v);
        assert_eq!(prod.div_vandermonde().unwrap(), f);
    }

    #[test]
    fn nonzero_remainder_is_reported() {
        let f = Poly::monomial(vec![1, 0], rat(1));
        assert!(matches!(f.div_exact_linear(0, 1), Err(Error::Internal(_))));
    }

    #[test]
    fn vandermonde_is_alternating() {
        let v = Poly::vandermonde(4);
        for (sigma, sign) in permutations_with_sign(4) {
            let mut expected = v.clone();
            if sign < 0 {
                expected = Poly::zero(4);
                expected.add_scaled(&v, &rat(-1));
            }
            assert_eq!(v.permute(&sigma), expected);
        }
    }

    #[test]
    fn permutation_count_and_signs() {
        let perms = permutations_with_sign(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|(_, s)| *s == 1).count(), 12);
    }
}
