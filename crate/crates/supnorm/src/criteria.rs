//! Acceptance checks. `Scale::Full` runs each check at its stated size;
//! `Scale::Quick` is a reduced sweep for `verify` without `--full`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use supnorm_core::amplifier::{
    amplifier_coefficients, laplace_eigenvalue, rho, spectral_density, verify_amplifier_identity, SpectralParams,
};
use supnorm_core::arith::rat_frac;
use supnorm_core::combinat::{enumerate_partitions, verify_cholesky};
use supnorm_core::coset::{coset_decomposition, oracle_multiply, IntMatrix, DEFAULT_BUDGET};
use supnorm_core::diophantine::{
    columns_proportional_mod, enumerate_s_delta, lembp_count, revalidate_witness, scaling_experiment,
    sum_of_two_squares_count, BinaryQuadratic, QuadraticForm,
};
use supnorm_core::hecke::{lem2_spread, verify_lem2};
use supnorm_core::satake::{schur_limit_defect, trivial_eigenvalue};
use supnorm_core::{HeckeAlgebra, Partition, Result};

use crate::experiments::corollary_ladder;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<40} {}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub const NAMES: [&str; 10] = [
    "cross-oracle Hecke multiplication",
    "combinatorial Cholesky",
    "amplifier identity",
    "row/co-row product",
    "degree equals trivial eigenvalue",
    "Schur limit",
    "S_delta counting structure",
    "exponent trends",
    "lembp circle counts",
    "spectral utilities",
];

/// Node budget used by every search inside the criteria.
pub const NODE_BUDGET: u64 = 1 << 34;

type Check = fn(Scale) -> Result<(bool, String)>;

const CHECKS: [Check; 10] = [
    cross_oracle,
    cholesky,
    amplifier_identity,
    row_corow,
    trivial_degree,
    schur_limit,
    s_delta_structure,
    exponent_trends,
    lembp_circles,
    spectral,
];

pub fn run(id: u8, scale: Scale) -> CriterionResult {
    let idx = usize::from(id) - 1;
    let (passed, detail) = match CHECKS[idx](scale) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, name: NAMES[idx], passed, detail }
}

pub fn run_all(scale: Scale) -> Vec<CriterionResult> {
    (1..=10).map(|id| run(id, scale)).collect()
}

fn partitions_up_to(n: usize, max_weight: u32) -> Vec<Partition> {
    (0..=max_weight).flat_map(|w| enumerate_partitions(n, w)).collect()
}

fn cross_oracle(scale: Scale) -> Result<(bool, String)> {
    let (ranks, primes, w): (&[usize], &[u64], u32) = match scale {
        Scale::Full => (&[2, 3], &[2, 3, 5], 3),
        Scale::Quick => (&[2], &[2, 3], 2),
    };
    let mut pairs = 0;
    for &n in ranks {
        let gens = partitions_up_to(n, w);
        for &p in primes {
            let alg = HeckeAlgebra::new(n, p)?;
            for a in &gens {
                for b in &gens {
                    let satake = alg.multiply_generators(a, b)?;
                    let oracle = oracle_multiply(a, b, p, DEFAULT_BUDGET)?;
                    if satake != oracle.constants {
                        return Ok((false, format!("n={n} p={p} a={a} b={b}: {satake:?} vs {:?}", oracle.constants)));
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok((true, format!("{pairs} generator pairs agree exactly")))
}

fn cholesky(scale: Scale) -> Result<(bool, String)> {
    let top = if scale == Scale::Full { 6 } else { 4 };
    for n in 1..=top {
        let r = verify_cholesky(n)?;
        if !r.success() {
            return Ok((false, format!("n={n}: product {} det {}", r.product_matches, r.det)));
        }
    }
    Ok((true, format!("D = AᵀA and det D = 1 for n ≤ {top}")))
}

fn amplifier_identity(scale: Scale) -> Result<(bool, String)> {
    let (ranks, primes, ladder): (&[usize], &[u64], &[u64]) = match scale {
        Scale::Full => (&[2, 3, 4], &[2, 3, 5, 101], &[101, 1009, 10007]),
        Scale::Quick => (&[2, 3], &[2, 3], &[101, 1009]),
    };
    for &n in ranks {
        for &p in primes {
            let alg = HeckeAlgebra::new(n, p)?;
            let sol = amplifier_coefficients(&alg)?;
            if !verify_amplifier_identity(&alg, &sol)? {
                return Ok((false, format!("identity fails at n={n} p={p}")));
            }
            if n == 2 {
                let pi = p as i64;
                let want = [rat_frac(-pi, pi + 1), rat_frac(pi, pi + 1)];
                let got: Vec<_> = sol.partitions.iter().map(|a| sol.y[a].clone()).collect();
                let mut want_sorted = want.to_vec();
                want_sorted.sort();
                let mut got_sorted = got.clone();
                got_sorted.sort();
                if got_sorted != want_sorted {
                    return Ok((false, format!("n=2 p={p}: y = {got:?}")));
                }
            }
        }
    }
    let mut spreads = Vec::new();
    for n in 1..=*ranks.last().unwrap_or(&1) {
        let maxes: Vec<f64> = ladder
            .iter()
            .map(|&p| Ok(amplifier_coefficients(&HeckeAlgebra::new(n, p)?)?.max_abs_y().to_f64().unwrap_or(f64::NAN)))
            .collect::<Result<_>>()?;
        let lo = maxes.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = maxes.iter().cloned().fold(0.0, f64::max);
        let spread = (hi - lo) / lo;
        if spread.is_nan() || spread >= 0.10 {
            return Ok((false, format!("n={n}: max|y| over {ladder:?} = {maxes:?}")));
        }
        spreads.push(format!("n={n}:{spread:.4}"));
    }
    Ok((true, format!("identity exact; max|y| relative spread {}", spreads.join(" "))))
}

fn row_corow(scale: Scale) -> Result<(bool, String)> {
    let n = if scale == Scale::Full { 4 } else { 3 };
    let mut worst: f64 = 1.0;
    for j in 1..=n as u32 {
        let mut reports = Vec::new();
        for p in [2u64, 3, 5] {
            let r = verify_lem2(&HeckeAlgebra::new(n, p)?, j)?;
            if p <= 3 && !r.passes() {
                return Ok((false, format!("n={n} j={j} p={p}: {r:?}")));
            }
            reports.push(r);
        }
        match lem2_spread(&reports) {
            Some(s) if s <= 2.0 => worst = worst.max(s),
            s => return Ok((false, format!("n={n} j={j}: spread {s:?}"))),
        }
    }
    Ok((true, format!("n={n}: support and duality hold; worst spread {worst:.3}")))
}

fn trivial_degree(scale: Scale) -> Result<(bool, String)> {
    let (primes, w): (&[u64], u32) = match scale {
        Scale::Full => (&[2, 3, 5], 3),
        Scale::Quick => (&[2, 3], 2),
    };
    let mut checked = 0;
    for n in 1..=3 {
        for &p in primes {
            let alg = HeckeAlgebra::new(n, p)?;
            for a in partitions_up_to(n, w) {
                let eig = trivial_eigenvalue(&*alg.cache().get(&a, p)?);
                let degree = coset_decomposition(&a, p, DEFAULT_BUDGET)?.degree();
                if eig != supnorm_core::arith::rat(degree as i64) {
                    return Ok((false, format!("n={n} p={p} a={a}: eigenvalue {eig} vs {degree} cosets")));
                }
                checked += 1;
            }
        }
    }
    let example = coset_decomposition(&Partition::new(vec![1, 0]), 3, DEFAULT_BUDGET)?.degree();
    Ok((example == 4, format!("{checked} cases exact; T_(1,0) at p=3 has {example} cosets")))
}

fn schur_limit(scale: Scale) -> Result<(bool, String)> {
    let (top, w) = match scale {
        Scale::Full => (4, 6),
        Scale::Quick => (3, 4),
    };
    let primes = [101u64, 1009];
    let mut worst: f64 = 1.0;
    let mut cases = 0;
    for n in 1..=top {
        let algs: Vec<HeckeAlgebra> = primes.iter().map(|&p| HeckeAlgebra::new(n, p)).collect::<Result<_>>()?;
        for a in partitions_up_to(n, w) {
            let c: Vec<f64> = algs
                .iter()
                .zip(primes)
                .map(|(alg, p)| {
                    let d = schur_limit_defect(&*alg.cache().get(&a, p)?)?;
                    Ok(d.to_f64().unwrap_or(f64::NAN) * p as f64)
                })
                .collect::<Result<_>>()?;
            cases += 1;
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            let ratio = c[0].max(c[1]) / c[0].min(c[1]);
            if ratio.is_nan() || ratio > 2.0 {
                return Ok((false, format!("n={n} a={a}: p·defect = {c:?}")));
            }
            worst = worst.max(ratio);
        }
    }
    Ok((true, format!("{cases} partitions; worst p·defect ratio {worst:.4}")))
}

/// All ±1 matrices `H` with `HᵀH = 4I` and `det H = 16`, by exhaustion.
pub fn hadamard_matrices() -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for bits in 0u32..1 << 16 {
        let data: Vec<i64> = (0..16).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
        let h = IntMatrix::new(4, data).expect("16 entries");
        if h.transpose().mul(&h).expect("same size") == IntMatrix::diag(&[4, 4, 4, 4]) && h.det() == 16 {
            out.push(h);
        }
    }
    out
}

fn s_delta_structure(scale: Scale) -> Result<(bool, String)> {
    let form = QuadraticForm::identity(4);
    let delta = 1e-6;
    let cases: &[(u64, u64)] = match scale {
        Scale::Full => &[(16, 2), (81, 3)],
        Scale::Quick => &[(16, 2)],
    };
    let mut details = Vec::new();
    for &(m, l) in cases {
        let r = enumerate_s_delta(&form, m, l, delta, NODE_BUDGET)?;
        if !r.complete {
            return Ok((false, format!("(m,l)=({m},{l}): search incomplete after {} nodes", r.nodes)));
        }
        for w in &r.witnesses {
            let check = revalidate_witness(w, &form, m, l, delta)?;
            if !check.passes() {
                return Ok((false, format!("(m,l)=({m},{l}): {w} fails {check:?}")));
            }
            let coprime = w.entries().iter().all(|&x| x % l as i64 != 0);
            if coprime && !columns_proportional_mod(w, l) {
                return Ok((false, format!("(m,l)=({m},{l}): {w} has non-proportional columns")));
            }
        }
        let finer = enumerate_s_delta(&form, m, l, delta / 10.0, NODE_BUDGET)?;
        if !finer.complete || finer.count != r.count {
            return Ok((false, format!("(m,l)=({m},{l}): {} at δ vs {} at δ/10", r.count, finer.count)));
        }
        if m == 16 {
            let found: BTreeSet<&IntMatrix> = r.witnesses.iter().collect();
            let hadamard = hadamard_matrices();
            if hadamard.is_empty() || !hadamard.iter().all(|h| found.contains(h)) {
                return Ok((false, "Hadamard matrices missing from the witness set".into()));
            }
            details.push(format!("({m},{l}): {} witnesses incl. all {} Hadamard", r.count, hadamard.len()));
        } else {
            details.push(format!("({m},{l}): {} witnesses", r.count));
        }
    }
    Ok((true, details.join("; ")))
}

fn exponent_trends(scale: Scale) -> Result<(bool, String)> {
    let (scales, trials, primes): (&[i64], usize, &[u64]) = match scale {
        Scale::Full => (&[10, 20, 30, 40], 16, &[2, 3, 5, 7]),
        Scale::Quick => (&[10, 20], 4, &[2, 3, 5, 7]),
    };
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, k) in [(3, 0), (3, 1), (4, 0), (4, 1), (4, 2)] {
        let ladder = corollary_ladder(n, k, scales, trials, 7, NODE_BUDGET)?;
        let slope = ladder.slope.unwrap_or(f64::NAN);
        ok &= slope <= ladder.benchmark + 0.3;
        parts.push(format!("({n},{k}):{slope:.3}≤{:.1}", ladder.benchmark + 0.3));
    }
    let scaling = scaling_experiment(&QuadraticForm::identity(4), 1, primes, 1e-6, NODE_BUDGET)?;
    let slope = scaling.slope.unwrap_or(f64::NAN);
    let complete = scaling.rows.iter().all(|r| r.complete);
    ok &= complete && slope < 3.0;
    parts.push(format!("scaling:{slope:.3}<3"));
    Ok((ok, parts.join(" ")))
}

fn lembp_circles(_: Scale) -> Result<(bool, String)> {
    let circle = |r: f64| BinaryQuadratic { a: 1.0, b: 0.0, c: 1.0, d: 0.0, e: 0.0, f: -r };
    let main = lembp_count(&circle(25.0), 0.5, 1.0, None)?;
    if main.count != 12 {
        return Ok((false, format!("x²+y²=25 gives {}", main.count)));
    }
    for big_n in 0..=200u64 {
        let r = lembp_count(&circle(big_n as f64), 0.5, 1.0, None)?;
        let want = sum_of_two_squares_count(big_n);
        if r.count != want {
            return Ok((false, format!("N={big_n}: {} vs r₂ = {want}", r.count)));
        }
    }
    let hex = BinaryQuadratic { a: 1.0, b: 1.0, c: 1.0, d: 0.0, e: 0.0, f: -1.0 };
    let hex_count = lembp_count(&hex, 0.5, 1.0, None)?.count;
    Ok((hex_count == 6, format!("x²+y²=25 → 12; r₂(N) exact for N ≤ 200; x²+xy+y²=1 → {hex_count}")))
}

fn spectral(_: Scale) -> Result<(bool, String)> {
    let lap = laplace_eigenvalue(&SpectralParams::new(vec![Complex64::new(0.0, 0.0); 4])?);
    let dens = spectral_density(&[3.0, 1.0, -1.0, -3.0]);
    let mut ok = lap == 2.5 && dens == 4725.0;
    for n in 2..=4 {
        let boundary: Vec<Complex64> = rho(n).iter().map(|&r| Complex64::new(0.0, r)).collect();
        let outside: Vec<Complex64> = rho(n).iter().map(|&r| Complex64::new(0.0, 1.01 * r)).collect();
        ok &= SpectralParams::new(boundary).is_ok() && SpectralParams::new(outside).is_err();
    }
    Ok((ok, format!("laplace(μ=0) = {lap}; density(3,1,-1,-3) = {dens}; iρ accepted, 1.01·iρ rejected")))
}
