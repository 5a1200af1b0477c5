//! Satake images of the double-coset operators `T_a(p)`.
//!
//! With `t = 1/p` the image is
//!
//! ```text
//! ω(T_a(p)) = p^{-v(a)} (1-t)^n ∏_i ∏_{j=1}^{k_i} (1-t^j)^{-1} Σ_σ σ( x^a ∏_{i<j} (x_i - t x_j)/(x_i - x_j) )
//! ```
//!
//! where `k_1, …, k_t` are the multiplicities of the distinct parts of `a`.
//! The `scaled` polynomial `p^{v(a)} ω(T_a(p))` is the Hall–Littlewood
//! polynomial `P_a(x; 1/p)`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use spin::RwLock;

use crate::arith::{denominator_is_p_power, p_pow, rat_frac};
use crate::combinat::Partition;
use crate::error::{Error, Result};
use crate::sympoly::{schur, symmetrize_alternant, SymPoly};
use crate::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct SatakeImage {
    pub a: Partition,
    pub p: u64,
    /// `ω(T_a(p))`.
    pub poly: SymPoly,
    /// `p^{v(a)} ω(T_a(p))`.
    pub scaled: SymPoly,
}

/// `(1-t)^n ∏_i ∏_{j=1}^{k_i} (1-t^j)^{-1}`.
pub fn normalizing_prefactor(a: &Partition, t: &Rat) -> Rat {
    let one = Rat::one();
    let mut f = num_traits::pow(&one - t, a.rank());
    for k in a.multiplicities() {
        for j in 1..=k {
            f /= &one - num_traits::pow(t.clone(), j);
        }
    }
    f
}

pub fn satake_image(a: &Partition, p: u64) -> Result<SatakeImage> {
    if p < 2 {
        return Err(Error::InvalidArgument(alloc::format!("p = {p} is not a prime")));
    }
    let t = rat_frac(1, p as i64);
    let sym = symmetrize_alternant(a, &t)?;
    let scaled = sym.scale(&normalizing_prefactor(a, &t));
    let poly = scaled.scale(&p_pow(p, -(a.v() as i64)));
    Ok(SatakeImage { a: a.clone(), p, poly, scaled })
}

/// Per-`(a, p)` memo of Satake images. Lookups take a shared lock; inserts
/// take the write lock after the image has been computed.
#[derive(Default)]
pub struct SatakeCache {
    images: RwLock<BTreeMap<(Partition, u64), Arc<SatakeImage>>>,
}

impl SatakeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, a: &Partition, p: u64) -> Result<Arc<SatakeImage>> {
        let key = (a.clone(), p);
        if let Some(img) = self.images.read().get(&key) {
            return Ok(img.clone());
        }
        let img = Arc::new(satake_image(a, p)?);
        Ok(self.images.write().entry(key).or_insert(img).clone())
    }

    pub fn len(&self) -> usize {
        self.images.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Checks on the scaled image `p^{v(a)} ω(T_a(p))`.
#[derive(Clone, Debug)]
pub struct BasicReport {
    pub a: Partition,
    pub p: u64,
    /// Every support monomial `b` has some permutation `σ(b) ≤_lex a`.
    pub support_lex_any_permutation: bool,
    /// The non-increasing rearrangement of every support monomial is `≤_lex a`.
    pub support_lex_sorted: bool,
    /// The non-increasing rearrangement of every support monomial is dominated by `a`.
    pub support_dominance: bool,
    pub leading_coefficient_one: bool,
    pub symmetric: bool,
    pub denominators_p_powers: bool,
    pub homogeneous: bool,
}

impl BasicReport {
    /// Items (ii)–(iv) together with the dominance form of item (i).
    pub fn passes(&self) -> bool {
        self.support_dominance
            && self.leading_coefficient_one
            && self.symmetric
            && self.denominators_p_powers
            && self.homogeneous
    }
}

pub fn verify_basic(image: &SatakeImage) -> BasicReport {
    let a = &image.a;
    let a_exp = a.exponents();
    let n = a.rank();
    let scaled = &image.scaled;

    let mut lex_any = true;
    let mut lex_sorted = true;
    let mut dominance = true;
    for rep in scaled.terms().keys() {
        let mut ascending = rep.clone();
        ascending.reverse();
        lex_any &= ascending <= a_exp;
        lex_sorted &= *rep <= a_exp;
        dominance &= rep.iter().all(|&x| x >= 0)
            && Partition::new(rep.iter().map(|&x| x as u32).collect::<Vec<_>>()).dominated_by(a);
    }
    let symmetric = (0..n.saturating_sub(1)).all(|i| scaled.is_invariant_under(i, i + 1));
    BasicReport {
        a: a.clone(),
        p: image.p,
        support_lex_any_permutation: lex_any,
        support_lex_sorted: lex_sorted,
        support_dominance: dominance,
        leading_coefficient_one: scaled.coeff(&a_exp).is_one(),
        symmetric,
        denominators_p_powers: scaled.terms().values().all(|c| denominator_is_p_power(c, image.p)),
        homogeneous: scaled.is_zero() || scaled.homogeneous_degree() == Some(a.weight() as i64),
    }
}

/// Largest coefficient of `p^{v(a)} ω(T_a(p)) - s_a`.
pub fn schur_limit_defect(image: &SatakeImage) -> Result<Rat> {
    Ok(image.scaled.sub(&schur(&image.a)?).max_abs_coeff())
}

/// The trivial-representation evaluation point `p^{(n+1)/2} α` with
/// `α_i = p^{(n+1-2i)/2}`, i.e. `x_i = p^{n+1-i}`.
pub fn trivial_point(n: usize, p: u64) -> Vec<Rat> {
    (1..=n).map(|i| p_pow(p, (n + 1 - i) as i64)).collect()
}

/// `ω(T_a(p))` at the trivial point; this is the eigenvalue on constants.
pub fn trivial_eigenvalue(image: &SatakeImage) -> Rat {
    image.poly.eval(&trivial_point(image.a.rank(), image.p))
}

/// `max |c|` over the scaled coefficients, the `c_p(a,b) ≪ 1` bound.
pub fn max_scaled_coefficient(image: &SatakeImage) -> Rat {
    image.scaled.terms().values().map(|c| c.abs()).max().unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::combinat::enumerate_partitions;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn m(parts: &[u32]) -> SymPoly {
        SymPoly::monomial_symmetric(&p(parts))
    }

    fn one_minus_inverse(p: u64) -> Rat {
        rat(1) - rat_frac(1, p as i64)
    }

    #[test]
    fn rank_two_examples() {
        for prime in [2u64, 3, 5, 101] {
            let img = satake_image(&p(&[1, 0]), prime).unwrap();
            assert_eq!(img.scaled, m(&[1, 0]));
            assert_eq!(img.poly.scale(&p_pow(prime, 1)), m(&[1, 0]));

            let img = satake_image(&p(&[1, 1]), prime).unwrap();
            assert_eq!(img.poly.scale(&p_pow(prime, 3)), m(&[1, 1]));

            let img = satake_image(&p(&[2, 0]), prime).unwrap();
            let mut expected = m(&[2, 0]);
            expected.add_scaled(&m(&[1, 1]), &one_minus_inverse(prime));
            assert_eq!(img.scaled, expected);
            assert_eq!(schur_limit_defect(&img).unwrap(), rat_frac(1, prime as i64));
        }
    }

    #[test]
    fn identity_has_unit_image() {
        for n in 1..=4 {
            let img = satake_image(&Partition::zero(n), 7).unwrap();
            assert_eq!(img.poly, SymPoly::one(n));
            assert!(schur_limit_defect(&img).unwrap().is_zero());
        }
    }

    #[test]
    fn basic_examples() {
        let img = satake_image(&p(&[2, 0]), 3).unwrap();
        let r = verify_basic(&img);
        assert!(r.passes() && r.support_lex_sorted);
        assert_eq!(img.scaled.coeff(&[1, 1]), rat_frac(2, 3));

        let img = satake_image(&p(&[1, 1, 1]), 5).unwrap();
        assert_eq!(img.scaled, m(&[1, 1, 1]));

        let img = satake_image(&p(&[2, 1, 0]), 5).unwrap();
        assert!(verify_basic(&img).passes());
        let keys: Vec<_> = img.scaled.terms().keys().cloned().collect();
        assert!(keys.iter().all(|k| k == &[2, 1, 0] || k == &[1, 1, 1]));
    }

    #[test]
    fn basic_sweep() {
        for n in 1..=4 {
            for w in 0..=5 {
                for a in enumerate_partitions(n, w) {
                    for prime in [2u64, 3] {
                        let r = verify_basic(&satake_image(&a, prime).unwrap());
                        assert!(r.passes(), "{a} p={prime}: {r:?}");
                        assert!(r.support_lex_sorted);
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_point_gives_hecke_degree() {
        // deg T_(1,0) = p + 1, deg T_(1,0,0) = 1 + p + p^2, central cosets have degree 1
        let img = satake_image(&p(&[1, 0]), 3).unwrap();
        assert_eq!(trivial_eigenvalue(&img), rat(4));
        let img = satake_image(&p(&[1, 0, 0]), 2).unwrap();
        assert_eq!(trivial_eigenvalue(&img), rat(7));
        let img = satake_image(&p(&[2, 2, 2]), 5).unwrap();
        assert_eq!(trivial_eigenvalue(&img), rat(1));
    }

    #[test]
    fn cache_returns_identical_images() {
        let cache = SatakeCache::new();
        let a = p(&[2, 1, 0]);
        let x = cache.get(&a, 5).unwrap();
        let y = cache.get(&a, 5).unwrap();
        assert!(Arc::ptr_eq(&x, &y));
        assert_eq!(cache.len(), 1);
    }
}
