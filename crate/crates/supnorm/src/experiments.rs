//! Seeded random inputs and the ladder experiments built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use supnorm_core::coset::det_i128;
use supnorm_core::diophantine::{corollary_count_experiment, CorollaryInstance, QuadraticForm};
use supnorm_core::linalg::loglog_slope;
use supnorm_core::{Rat, Result};

/// Denominator of the random forms.
pub const RANDOM_DEN: i128 = 16;

/// Random positive definite form with diagonal numerators in `[40, 48]` and
/// off-diagonal numerators in `[-4, 4]`, over `RANDOM_DEN`. Gershgorin keeps
/// the condition number below `60 / 28`.
#[allow(clippy::needless_range_loop)]
pub fn random_spd_from(rng: &mut ChaCha8Rng, n: usize) -> QuadraticForm {
    let mut num = vec![vec![0i128; n]; n];
    for i in 0..n {
        num[i][i] = rng.gen_range(40..=48);
        for j in 0..i {
            let v = rng.gen_range(-4..=4);
            num[i][j] = v;
            num[j][i] = v;
        }
    }
    QuadraticForm::new(num, RANDOM_DEN).expect("diagonally dominant forms are positive definite")
}

pub fn random_spd(n: usize, seed: u64) -> QuadraticForm {
    random_spd_from(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

/// Uniform integer vector with `lo·X ≤ ‖v‖ ≤ X`.
fn random_vector(rng: &mut ChaCha8Rng, n: usize, x: i64, lo: f64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-x..=x)).collect();
        let norm = (v.iter().map(|a| (a * a) as f64).sum::<f64>()).sqrt();
        if norm <= x as f64 && norm >= lo * x as f64 {
            return v;
        }
    }
}

fn independent(xs: &[Vec<i64>]) -> bool {
    let gram: Vec<Vec<i128>> = xs
        .iter()
        .map(|a| xs.iter().map(|b| a.iter().zip(b).map(|(x, y)| (*x as i128) * (*y as i128)).sum()).collect())
        .collect();
    xs.is_empty() || det_i128(&gram) != 0
}

/// One instance with a planted solution `y_0`: `q_0 = y_0ᵀQy_0`, `q_i = x_iᵀQy_0`,
/// and `δ = X^{-4}/2`.
pub fn planted_instance(rng: &mut ChaCha8Rng, n: usize, k: usize, x: i64) -> CorollaryInstance {
    let form = random_spd_from(rng, n);
    let y0 = random_vector(rng, n, x, 0.5);
    let xs = loop {
        let xs: Vec<Vec<i64>> = (0..k).map(|_| random_vector(rng, n, x, 0.0)).collect();
        if independent(&xs) {
            break xs;
        }
    };
    let den = form.denominator();
    let qs = xs.iter().map(|xi| Rat::new(form.bilinear_num(xi, &y0).into(), den.into())).collect();
    let q0 = form.value(&y0);
    let xf = x as f64;
    CorollaryInstance { form, xs, q0, qs, scale_x: xf, delta: 0.5 / (xf * xf * xf * xf) }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    pub x: i64,
    pub mean_count: f64,
    pub counts: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ladder {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<LadderRow>,
    pub slope: Option<f64>,
    /// `n - k - 2`.
    pub benchmark: f64,
}

/// Mean count over `trials` planted instances at each scale `X`, and the
/// log-log slope of the means.
pub fn corollary_ladder(n: usize, k: usize, scales: &[i64], trials: usize, seed: u64, node_budget: u64) -> Result<Ladder> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &x in scales {
        let mut counts = Vec::with_capacity(trials);
        for _ in 0..trials {
            let inst = planted_instance(&mut rng, n, k, x);
            counts.push(corollary_count_experiment(&inst, node_budget)?.count);
        }
        let mean_count = counts.iter().sum::<u64>() as f64 / trials.max(1) as f64;
        rows.push(LadderRow { x, mean_count, counts });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.x as f64, r.mean_count)).collect();
    Ok(Ladder {
        n,
        k,
        seed,
        trials,
        slope: loglog_slope(&pts),
        rows,
        benchmark: n as f64 - k as f64 - 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_forms_are_seed_deterministic() {
        assert_eq!(random_spd(4, 11), random_spd(4, 11));
        assert_ne!(random_spd(4, 11).digest(), random_spd(4, 12).digest());
        let (lo, hi) = random_spd(4, 3).eigen_bounds();
        assert!(hi / lo <= 4.0);
    }

    #[test]
    fn planted_solution_is_counted() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, k) in [(3, 0), (3, 1), (4, 2)] {
            let inst = planted_instance(&mut rng, n, k, 10);
            let r = corollary_count_experiment(&inst, 1 << 30).unwrap();
            assert!(r.count >= 1);
        }
    }
}
