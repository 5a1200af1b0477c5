//! The amplifier linear system and the spectral quantities around it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{p_pow, rat_solve};
use crate::combinat::{pi, Partition};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::sympoly::SymPoly;
use crate::Rat;

const SPECTRAL_TOL: f64 = 1e-9;

/// Archimedean spectral parameters `μ_1, …, μ_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralParams {
    mu: Vec<Complex64>,
}

/// `ρ_j = (n + 1 - 2j)/2`, descending.
pub fn rho(n: usize) -> Vec<f64> {
    (1..=n).map(|j| (n as f64 + 1.0 - 2.0 * j as f64) / 2.0).collect()
}

/// Whether `v` lies in the convex hull of the permutations of `rho(n)`,
/// via majorization of the sorted vectors.
pub fn in_rho_hull(v: &[f64]) -> bool {
    let r = rho(v.len());
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let (mut ps, mut pr) = (0.0, 0.0);
    for (x, y) in s.iter().zip(&r) {
        ps += x;
        pr += y;
        if ps > pr + SPECTRAL_TOL {
            return false;
        }
    }
    (ps - pr).abs() <= SPECTRAL_TOL
}

impl SpectralParams {
    pub fn new(mu: Vec<Complex64>) -> Result<Self> {
        let sum: Complex64 = mu.iter().sum();
        if sum.norm() > SPECTRAL_TOL {
            return Err(Error::InvalidArgument(format!("spectral parameters sum to {sum}")));
        }
        let mut unmatched: Vec<Complex64> = mu.iter().map(|z| z.conj()).collect();
        for z in &mu {
            match unmatched.iter().position(|w| (w - z).norm() <= SPECTRAL_TOL) {
                Some(i) => {
                    unmatched.swap_remove(i);
                }
                None => return Err(Error::InvalidArgument("spectral parameters are not closed under conjugation".into())),
            }
        }
        let im: Vec<f64> = mu.iter().map(|z| z.im).collect();
        if !in_rho_hull(&im) {
            return Err(Error::InvalidArgument("imaginary parts lie outside the hull of the Weyl orbit of rho".into()));
        }
        Ok(SpectralParams { mu })
    }

    pub fn mu(&self) -> &[Complex64] {
        &self.mu
    }
}

/// `(n³ - n)/24 + ½ Σ μ_j²`.
pub fn laplace_eigenvalue(params: &SpectralParams) -> f64 {
    let n = params.mu.len() as f64;
    let sq: Complex64 = params.mu.iter().map(|z| z * z).sum();
    (n * n * n - n) / 24.0 + sq.re / 2.0
}

/// `∏_{j<k} (1 + |λ_j - λ_k|)`.
pub fn spectral_density(lambda: &[f64]) -> f64 {
    let mut out = 1.0;
    for j in 0..lambda.len() {
        for k in j + 1..lambda.len() {
            out *= 1.0 + (lambda[j] - lambda[k]).abs();
        }
    }
    out
}

/// Solution of `pⁿ Σ_{a∈Π(n)} y_a Π_j T_{(a_j,0,…,0)} = p^{n(n+1)/2} T_{(1,…,1)}`.
#[derive(Clone, Debug)]
pub struct AmplifierSolution {
    pub n: usize,
    pub p: u64,
    /// `Π(n)` in descending lexicographic order; rows and columns of `matrix`.
    pub partitions: Vec<Partition>,
    /// `C[a'][a]`: coefficient of `m_{a'}` in `pⁿ ω(Π_j T_{(a_j,0,…,0)})`.
    pub matrix: Vec<Vec<Rat>>,
    pub y: BTreeMap<Partition, Rat>,
}

impl AmplifierSolution {
    pub fn max_abs_y(&self) -> Rat {
        self.y.values().map(|v| v.abs()).max().unwrap_or_else(Rat::zero)
    }

    /// `(|Π(n)| · max_a |y_a|)^{-1}`.
    pub fn corollary_bound(&self) -> f64 {
        let m = self.max_abs_y().to_f64().unwrap_or(f64::INFINITY);
        1.0 / (self.partitions.len() as f64 * m)
    }
}

pub fn amplifier_coefficients(algebra: &HeckeAlgebra) -> Result<AmplifierSolution> {
    let n = algebra.rank();
    let p = algebra.prime();
    let mut parts = pi(n);
    parts.reverse();
    let cache = algebra.cache();
    let mut columns = Vec::with_capacity(parts.len());
    for a in &parts {
        let mut prod = SymPoly::one(n);
        for &j in a.parts().iter().filter(|&&j| j > 0) {
            prod = prod.mul(&cache.get(&Partition::row(n, j), p)?.scaled);
        }
        columns.push(prod);
    }
    let matrix: Vec<Vec<Rat>> = parts
        .iter()
        .map(|row| columns.iter().map(|col| col.coeff(&row.exponents())).collect())
        .collect();
    let mut rhs = vec![Rat::zero(); parts.len()];
    *rhs.last_mut().unwrap() = Rat::one();
    let sol = rat_solve(matrix.clone(), rhs)?;
    let y = parts.iter().cloned().zip(sol).collect();
    Ok(AmplifierSolution { n, p, partitions: parts, matrix, y })
}

/// Both sides of the operator identity, evaluated in the Hecke algebra.
pub fn amplifier_identity_sides(algebra: &HeckeAlgebra, sol: &AmplifierSolution) -> Result<(HeckeElement, HeckeElement)> {
    let n = algebra.rank();
    let p = algebra.prime();
    let mut lhs = HeckeElement::zero(n, p);
    for (a, y) in &sol.y {
        lhs = lhs.add(&algebra.row_product(a)?.scale(y))?;
    }
    lhs = lhs.scale(&p_pow(p, n as i64));
    let rhs = HeckeElement::generator(&Partition::constant(n, 1), p).scale(&p_pow(p, (n * (n + 1) / 2) as i64));
    Ok((lhs, rhs))
}

pub fn verify_amplifier_identity(algebra: &HeckeAlgebra, sol: &AmplifierSolution) -> Result<bool> {
    let (lhs, rhs) = amplifier_identity_sides(algebra, sol)?;
    Ok(lhs == rhs)
}

/// Hecke eigenvalues `λ_{[j]}(p)` for `j = 1..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenvalueTable {
    pub n: usize,
    pub p: u64,
    pub lam: Vec<Complex64>,
    pub alpha: Option<Vec<Complex64>>,
}

impl EigenvalueTable {
    pub fn from_values(p: u64, lam: Vec<Complex64>) -> Self {
        EigenvalueTable { n: lam.len(), p, lam, alpha: None }
    }

    /// `λ_{[j]} = ω(T_{[j]})(p^{(n+1)/2} α)`; requires `∏ α_i = 1`.
    pub fn from_satake(algebra: &HeckeAlgebra, alpha: Vec<Complex64>) -> Result<Self> {
        let n = algebra.rank();
        let p = algebra.prime();
        if alpha.len() != n {
            return Err(Error::RankMismatch { expected: n, got: alpha.len() });
        }
        let prod: Complex64 = alpha.iter().product();
        if (prod - Complex64::one()).norm() > 1e-9 {
            return Err(Error::InvalidArgument(format!("Satake parameters multiply to {prod}, not 1")));
        }
        let scale = libm::pow(p as f64, (n as f64 + 1.0) / 2.0);
        let x: Vec<Complex64> = alpha.iter().map(|a| a * scale).collect();
        let lam = (1..=n as u32)
            .map(|j| Ok(algebra.cache().get(&Partition::row(n, j), p)?.poly.eval_complex(&x)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EigenvalueTable { n, p, lam, alpha: Some(alpha) })
    }

    /// Eigenvalues on constant functions, computed exactly.
    pub fn trivial(algebra: &HeckeAlgebra) -> Result<Self> {
        let n = algebra.rank();
        let p = algebra.prime();
        let x = crate::satake::trivial_point(n, p);
        let lam = (1..=n as u32)
            .map(|j| {
                let v = algebra.cache().get(&Partition::row(n, j), p)?.poly.eval(&x);
                Ok(Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EigenvalueTable { n, p, lam, alpha: None })
    }

    /// `|λ_{[j]}| / p^{j(n-1)/2}` for `j = 1..n`.
    pub fn normalized(&self) -> Vec<f64> {
        self.lam
            .iter()
            .enumerate()
            .map(|(i, l)| l.norm() / libm::pow(self.p as f64, (i as f64 + 1.0) * (self.n as f64 - 1.0) / 2.0))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct BigCheck {
    pub normalized: Vec<f64>,
    /// 1-based index achieving the maximum normalized value.
    pub witness_j: usize,
    pub bound: f64,
    pub bound_holds: bool,
    /// `pⁿ Σ |y_a| Π_j |λ_{[a_j]}| / p^{n(n+1)/2}`; genuine data forces this to be at least 1.
    pub contradiction: f64,
    /// `pⁿ Σ y_a Π_j λ_{[a_j]} / p^{n(n+1)/2}`, equal to 1 for genuine data.
    pub identity_value: Complex64,
}

pub fn corollary_big_check(table: &EigenvalueTable, sol: &AmplifierSolution) -> Result<BigCheck> {
    if table.n != sol.n || table.p != sol.p {
        return Err(Error::InvalidArgument("eigenvalue table and amplifier solution disagree on n or p".into()));
    }
    let n = table.n;
    let normalized = table.normalized();
    let (witness, best) = normalized
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let bound = sol.corollary_bound();
    let lam_of = |j: u32| if j == 0 { Complex64::one() } else { table.lam[j as usize - 1] };
    let mut abs_sum = 0.0;
    let mut signed = Complex64::zero();
    for (a, y) in &sol.y {
        let yf = y.to_f64().unwrap_or(f64::NAN);
        let prod: Complex64 = a.parts().iter().map(|&j| lam_of(j)).product();
        abs_sum += yf.abs() * prod.norm();
        signed += prod * yf;
    }
    let scale = libm::pow(table.p as f64, n as f64 - (n * (n + 1) / 2) as f64);
    Ok(BigCheck {
        normalized,
        witness_j: witness + 1,
        bound,
        bound_holds: best >= bound,
        contradiction: abs_sum * scale,
        identity_value: signed * scale,
    })
}

/// `Σ_j |Σ_l x_{[j]}(l) λ_{[j]}(l) / l^{j(n-1)/2}|²` with
/// `x_{[j]}(l) = |λ_{[j]}(l, ref)| / λ_{[j]}(l, ref)` and `0/0 = 0`.
pub fn amplifier_value(big_l: u64, tables: &[EigenvalueTable], reference: &[EigenvalueTable]) -> Result<f64> {
    let mut seen = alloc::collections::BTreeSet::new();
    let n = tables.first().map_or(0, |t| t.n);
    for t in tables {
        if !seen.insert(t.p) {
            return Err(Error::InvalidArgument(format!("prime {} repeated", t.p)));
        }
        if t.p <= big_l || t.p > 2 * big_l {
            return Err(Error::InvalidArgument(format!("prime {} outside ({big_l}, {}]", t.p, 2 * big_l)));
        }
        if t.n != n {
            return Err(Error::RankMismatch { expected: n, got: t.n });
        }
    }
    let mut total = 0.0;
    for j in 0..n {
        let mut inner = Complex64::zero();
        for t in tables {
            let r = reference
                .iter()
                .find(|r| r.p == t.p)
                .ok_or_else(|| Error::InvalidArgument(format!("no reference table at p = {}", t.p)))?;
            let lr = r.lam[j];
            let sign = if lr.norm() == 0.0 { Complex64::zero() } else { Complex64::new(lr.norm(), 0.0) / lr };
            let norm = libm::pow(t.p as f64, (j as f64 + 1.0) * (n as f64 - 1.0) / 2.0);
            inner += sign * t.lam[j] / norm;
        }
        total += inner.norm_sqr();
    }
    Ok(total)
}

/// `(B²/n) |P|²`, the lower bound for the self-referenced amplifier when every
/// prime has some normalized eigenvalue at least `B`.
pub fn amplifier_lower_bound(n: usize, min_bound: f64, prime_count: usize) -> f64 {
    min_bound * min_bound / n as f64 * (prime_count * prime_count) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    #[test]
    fn laplace_examples() {
        let zero = SpectralParams::new(vec![Complex64::zero(); 4]).unwrap();
        assert_eq!(laplace_eigenvalue(&zero), 2.5);
        let mu = SpectralParams::new([1.0, 1.0, -1.0, -1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap();
        assert_eq!(laplace_eigenvalue(&mu), 4.5);
        let t = 0.3;
        let mu = SpectralParams::new(vec![Complex64::new(0.0, t), Complex64::new(0.0, -t)]).unwrap();
        assert!((laplace_eigenvalue(&mu) - (0.25 - t * t)).abs() < 1e-15);
    }

    #[test]
    fn density_examples() {
        assert_eq!(spectral_density(&[0.0; 4]), 1.0);
        assert_eq!(spectral_density(&[3.0, 1.0, -1.0, -3.0]), 4725.0);
        assert_eq!(spectral_density(&[1.5, -1.5]), 4.0);
    }

    #[test]
    fn rho_hull_boundary() {
        let r = rho(4);
        let on_boundary: Vec<Complex64> = r.iter().map(|&x| Complex64::new(0.0, x)).collect();
        assert!(SpectralParams::new(on_boundary).is_ok());
        let outside: Vec<Complex64> = r.iter().map(|&x| Complex64::new(0.0, 1.1 * x)).collect();
        assert!(SpectralParams::new(outside).is_err());
        let not_closed = vec![Complex64::new(1.0, 0.2), Complex64::new(-1.0, -0.2)];
        assert!(SpectralParams::new(not_closed).is_err());
    }

    #[test]
    fn rank_two_solution() {
        for prime in [2u64, 3, 5, 101] {
            let alg = HeckeAlgebra::new(2, prime).unwrap();
            let sol = amplifier_coefficients(&alg).unwrap();
            let q = prime as i64;
            assert_eq!(sol.matrix, vec![vec![rat(1), rat(1)], vec![rat(1) - rat_frac(1, q), rat(2)]]);
            assert_eq!(sol.y[&Partition::new(vec![1, 1])], rat_frac(q, q + 1));
            assert_eq!(sol.y[&Partition::new(vec![2, 0])], rat_frac(-q, q + 1));
            assert!(verify_amplifier_identity(&alg, &sol).unwrap());
        }
    }

    #[test]
    fn rank_one_is_trivial() {
        let alg = HeckeAlgebra::new(1, 7).unwrap();
        let sol = amplifier_coefficients(&alg).unwrap();
        assert_eq!(sol.y.values().cloned().collect::<Vec<_>>(), vec![rat(1)]);
        assert!(verify_amplifier_identity(&alg, &sol).unwrap());
    }

    #[test]
    fn big_check_trivial_and_zero() {
        let alg = HeckeAlgebra::new(3, 5).unwrap();
        let sol = amplifier_coefficients(&alg).unwrap();
        let triv = EigenvalueTable::trivial(&alg).unwrap();
        let check = corollary_big_check(&triv, &sol).unwrap();
        // j = 1 already clears the bound; the maximum sits at j = n
        assert!(check.normalized[0] > 1.0 && check.normalized[0] >= check.bound);
        assert_eq!(check.witness_j, 3);
        assert!(check.bound_holds);
        assert!((check.identity_value - Complex64::one()).norm() < 1e-9);

        let zero = EigenvalueTable::from_values(5, vec![Complex64::zero(); 3]);
        let check = corollary_big_check(&zero, &sol).unwrap();
        assert!(!check.bound_holds);
        assert_eq!(check.contradiction, 0.0);
    }

    #[test]
    fn amplifier_value_examples() {
        let alg = HeckeAlgebra::new(2, 11).unwrap();
        let t = EigenvalueTable::trivial(&alg).unwrap();
        let single = amplifier_value(10, core::slice::from_ref(&t), core::slice::from_ref(&t)).unwrap();
        let direct: f64 = t.normalized().iter().map(|v| v * v).sum();
        assert!((single - direct).abs() < 1e-12);

        let zero = EigenvalueTable::from_values(11, vec![Complex64::zero(); 2]);
        assert_eq!(amplifier_value(10, core::slice::from_ref(&t), &[zero]).unwrap(), 0.0);
        assert!(amplifier_value(10, &[t.clone(), t.clone()], core::slice::from_ref(&t)).is_err());
        assert!(amplifier_value(20, core::slice::from_ref(&t), core::slice::from_ref(&t)).is_err());
    }
}
