//! Lattice-point counts under quadratic and linear constraints, and the
//! search for integer matrices that are near-similitudes of a quadratic form
//! with prescribed determinantal divisors.
//!
//! Floating point only ever narrows a search. Every reported point is
//! re-checked in integer arithmetic, or else with an explicit margin; a
//! comparison that falls inside the margin is an [`Error::Unstable`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{bigint_det, gcd_i128};
use crate::coset::{det_i128, determinantal_divisors, IntMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::Rat;

/// Relative margin inside which a float comparison counts as undecided.
pub const MARGIN: f64 = 1e-9;

/// Symmetric positive definite form `num / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    num: Vec<Vec<i128>>,
    den: i128,
}

impl QuadraticForm {
    pub fn new(num: Vec<Vec<i128>>, den: i128) -> Result<Self> {
        let n = num.len();
        if n == 0 || num.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("form matrix must be square and non-empty".into()));
        }
        if den <= 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if num[i][j] != num[j][i] {
                    return Err(Error::InvalidArgument("form matrix is not symmetric".into()));
                }
            }
        }
        for k in 1..=n {
            let minor: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| BigInt::from(num[i][j])).collect()).collect();
            if !bigint_det(&minor).is_positive() {
                return Err(Error::InvalidArgument(format!("leading minor {k} is not positive")));
            }
        }
        Ok(QuadraticForm { num, den })
    }

    pub fn identity(n: usize) -> Self {
        let num = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        QuadraticForm { num, den: 1 }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[Vec<i128>] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        Rat::new(BigInt::from(self.num[i][j]), BigInt::from(self.den))
    }

    pub fn to_f64(&self) -> Mat {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| self.num[i][j] as f64 / self.den as f64)
    }

    /// `num · x`.
    pub fn apply_num(&self, x: &[i64]) -> Vec<i128> {
        self.num.iter().map(|row| row.iter().zip(x).map(|(a, &b)| a * b as i128).sum()).collect()
    }

    /// `xᵀ num y`.
    pub fn bilinear_num(&self, x: &[i64], y: &[i64]) -> i128 {
        self.apply_num(y).iter().zip(x).map(|(a, &b)| a * b as i128).sum()
    }

    pub fn value(&self, x: &[i64]) -> Rat {
        Rat::new(BigInt::from(self.bilinear_num(x, x)), BigInt::from(self.den))
    }

    /// Smallest and largest eigenvalue.
    pub fn eigen_bounds(&self) -> (f64, f64) {
        let ev = linalg::symmetric_eigenvalues(&self.to_f64());
        (ev[0], ev[ev.len() - 1])
    }

    /// FNV-1a digest of the denominator and numerators, for report headers.
    pub fn digest(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: i128| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        feed(self.den);
        for row in &self.num {
            for &x in row {
                feed(x);
            }
        }
        format!("{h:016x}")
    }
}

/// `m^{2/n}`, exact when it is an integer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetScale {
    pub exact: Option<i128>,
    pub approx: f64,
}

pub fn det_scale(m: u64, n: usize) -> DetScale {
    let approx = libm::pow(m as f64, 2.0 / n as f64);
    let target = (m as i128) * (m as i128);
    let guess = libm::round(approx) as i128;
    let exact = (guess.saturating_sub(1)..=guess + 1)
        .find(|&r| r > 0 && r.checked_pow(n as u32) == Some(target));
    DetScale { exact, approx: exact.map_or(approx, |r| r as f64) }
}

/// Decides `ratio ≤ bound` unless the two are too close to call.
fn decide_le(ratio: f64, bound: f64) -> Result<bool> {
    let slack = MARGIN * bound.abs().max(1e-300);
    if ratio <= bound - slack {
        Ok(true)
    } else if ratio >= bound + slack {
        Ok(false)
    } else {
        Err(Error::Unstable(format!("{ratio:e} is within the float margin of {bound:e}")))
    }
}

fn gram_num(gamma: &IntMatrix, form: &QuadraticForm) -> Vec<Vec<i128>> {
    let n = gamma.dim();
    let cols: Vec<Vec<i64>> = (0..n).map(|j| gamma.column(j)).collect();
    (0..n).map(|i| (0..n).map(|j| form.bilinear_num(&cols[i], &cols[j])).collect()).collect()
}

/// `max_ij |γᵀQγ - s·Q|_ij / s` with `s = (det γ)^{2/n}`.
pub fn matrix_deviation(gamma: &IntMatrix, form: &QuadraticForm) -> Result<f64> {
    check_dims(gamma, form)?;
    let det = gamma.det();
    if det <= 0 {
        return Err(Error::InvalidArgument(format!("determinant {det} is not positive")));
    }
    let n = gamma.dim();
    let scale = det_scale(det as u64, n);
    let g = gram_num(gamma, form);
    let den = form.den as f64;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dev = match scale.exact {
                Some(r) => (g[i][j] - r * form.num[i][j]).abs() as f64 / (r as f64 * den),
                None => (g[i][j] as f64 - scale.approx * form.num[i][j] as f64).abs() / (scale.approx * den),
            };
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

pub fn within_deviation(gamma: &IntMatrix, form: &QuadraticForm, delta: f64) -> Result<bool> {
    decide_le(matrix_deviation(gamma, form)?, delta)
}

fn check_dims(gamma: &IntMatrix, form: &QuadraticForm) -> Result<()> {
    if gamma.dim() != form.dim() {
        return Err(Error::RankMismatch { expected: form.dim(), got: gamma.dim() });
    }
    Ok(())
}

/// Euclidean norm of the log singular values of `g⁻¹γg / |det γ|^{1/n}`.
pub fn cartan_deviation(gamma: &IntMatrix, g: &Mat) -> Result<f64> {
    let n = gamma.dim();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::RankMismatch { expected: n, got: g.nrows() });
    }
    let det = gamma.det();
    if det == 0 {
        return Err(Error::Singular);
    }
    let m = linalg::inverse(g)? * linalg::from_int_rows(&gamma.rows()) * g;
    let norm = libm::pow((det as f64).abs(), 1.0 / n as f64);
    let sv = linalg::singular_values(&m);
    Ok(libm::sqrt(sv.iter().map(|s| libm::log(s / norm).powi(2)).sum::<f64>()))
}

/// `a x² + b xy + c y² + d x + e y + f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl BinaryQuadratic {
    pub fn eval(&self, x: i64, y: i64) -> f64 {
        let (x, y) = (x as f64, y as f64);
        self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.f
    }

    /// `P(y, x)`.
    pub fn swapped(&self) -> Self {
        BinaryQuadratic { a: self.c, c: self.a, d: self.e, e: self.d, ..*self }
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LembpReport {
    pub count: u64,
    /// Certified Euclidean radius containing every solution.
    pub radius: f64,
    /// Sup-norm box that was scanned.
    pub box_bound: i64,
    pub complete: bool,
    pub points: Vec<(i64, i64)>,
}

/// `#{(x, y) ∈ ℤ² : |P(x, y)| < δ}` by scanning a certified box.
pub fn lembp_count(poly: &BinaryQuadratic, delta: f64, min_disc: f64, box_bound: Option<i64>) -> Result<LembpReport> {
    let disc = poly.discriminant();
    if !(poly.a > 0.0 && disc < 0.0) {
        return Err(Error::InvalidArgument("quadratic part is not positive definite".into()));
    }
    if disc.abs() < min_disc {
        return Err(Error::InvalidArgument(format!("|discriminant| = {} is below {min_disc}", disc.abs())));
    }
    // q(v) ≥ λ|v|², so |P(v)| < δ forces λr² - g r + f - δ < 0 with g = |(d, e)|
    let lambda = (poly.a + poly.c - libm::sqrt((poly.a - poly.c).powi(2) + poly.b * poly.b)) / 2.0;
    let g = libm::hypot(poly.d, poly.e);
    let disc_r = g * g - 4.0 * lambda * (poly.f - delta);
    let radius = if disc_r < 0.0 { 0.0 } else { (g + libm::sqrt(disc_r)) / (2.0 * lambda) };
    let certified = libm::floor(radius * (1.0 + MARGIN)) as i64 + 1;
    let bound = box_bound.unwrap_or(certified);
    let mut points = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            if decide_le(poly.eval(x, y).abs(), delta)? {
                points.push((x, y));
            }
        }
    }
    Ok(LembpReport { count: points.len() as u64, radius, box_bound: bound, complete: bound >= certified, points })
}

/// `y_constrained = A·y_free + b + O(F)` from `k` linear conditions `|x_iᵀy - q_i| ≤ E`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearDecomposition {
    /// Coordinates solved for, in increasing order.
    pub constrained: Vec<usize>,
    /// Remaining coordinates, in increasing order.
    pub free: Vec<usize>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub f: f64,
    /// Determinant of the selected `k×k` minor.
    pub minor_det: i128,
    /// `sqrt(det(M Mᵀ))` for the `k×n` matrix `M` with rows `x_i`.
    pub volume: f64,
}

impl LinearDecomposition {
    /// `constrained ++ free`.
    pub fn permutation(&self) -> Vec<usize> {
        self.constrained.iter().chain(&self.free).cloned().collect()
    }

    pub fn center(&self, free_values: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, bi)| row.iter().zip(free_values).map(|(x, y)| x * y).sum::<f64>() + bi)
            .collect()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn constr_decompose(xs: &[Vec<i128>], q: &[f64], e: f64) -> Result<LinearDecomposition> {
    let k = xs.len();
    if q.len() != k {
        return Err(Error::InvalidArgument("one target per vector is required".into()));
    }
    let n = xs.first().map_or(0, |x| x.len());
    if k == 0 || k > n || xs.iter().any(|x| x.len() != n) {
        return Err(Error::InvalidArgument(format!("need 1 ≤ k ≤ n vectors of equal length, got k = {k}, n = {n}")));
    }
    let mut best: Option<(Vec<usize>, i128)> = None;
    for cols in combinations(n, k) {
        let minor: Vec<Vec<i128>> = xs.iter().map(|x| cols.iter().map(|&c| x[c]).collect()).collect();
        let d = det_i128(&minor);
        if d != 0 && best.as_ref().is_none_or(|(_, bd)| d.abs() > bd.abs()) {
            best = Some((cols, d));
        }
    }
    let (constrained, minor_det) = best.ok_or(Error::Singular)?;
    let free: Vec<usize> = (0..n).filter(|c| !constrained.contains(c)).collect();

    let m1 = IntMatrix::new(k, xs.iter().flat_map(|x| constrained.iter().map(|&c| x[c] as i64)).collect())?;
    let adj = m1.adjugate();
    let inv: Vec<Vec<f64>> = adj.iter().map(|r| r.iter().map(|&v| v as f64 / minor_det as f64).collect()).collect();
    let a: Vec<Vec<f64>> = (0..k)
        .map(|i| free.iter().map(|&c| -(0..k).map(|s| inv[i][s] * xs[s][c] as f64).sum::<f64>()).collect())
        .collect();
    let b: Vec<f64> = (0..k).map(|i| (0..k).map(|s| inv[i][s] * q[s]).sum()).collect();
    let inv_norm = inv.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);

    let gram: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((0..n).map(|c| xs[i][c] * xs[j][c]).sum::<i128>())).collect())
        .collect();
    let volume = libm::sqrt(bigint_det(&gram).to_f64().unwrap_or(f64::INFINITY));
    Ok(LinearDecomposition { constrained, free, a, b, f: inv_norm * e, minor_det, volume })
}

/// Integer points with `|yᵀQy - target| ≤ tol` and `|x_iᵀQy - q_i| ≤ linear_tol`.
#[derive(Clone, Copy, Debug)]
pub struct ShellProblem<'a> {
    pub form: &'a QuadraticForm,
    pub target: f64,
    pub tol: f64,
    pub linear: &'a [Vec<i64>],
    pub linear_targets: &'a [f64],
    pub linear_tol: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ShellPoints {
    /// Points passing the float filter; a superset of the exact solutions.
    pub points: Vec<Vec<i64>>,
    pub nodes: u64,
    /// Certified bound on `‖y‖₂` for every solution.
    pub radius: f64,
}

/// Fincke–Pohst enumeration of the free coordinates, with the constrained
/// coordinates read off the linear conditions.
pub fn shell_points(prob: &ShellProblem<'_>, node_budget: u64) -> Result<ShellPoints> {
    let form = prob.form;
    let n = form.dim();
    let k = prob.linear.len();
    if prob.linear_targets.len() != k || k > n {
        return Err(Error::InvalidArgument("inconsistent linear constraints".into()));
    }
    let den = form.den as f64;
    let qf = form.to_f64();
    let (lam_min, lam_max) = form.eigen_bounds();

    let (free, constrained, a, b, slack) = if k == 0 {
        ((0..n).collect::<Vec<_>>(), Vec::new(), Vec::new(), Vec::new(), 0.0)
    } else {
        let rows: Vec<Vec<i128>> = prob.linear.iter().map(|x| form.apply_num(x)).collect();
        let targets: Vec<f64> = prob.linear_targets.iter().map(|q| q * den).collect();
        let dec = constr_decompose(&rows, &targets, prob.linear_tol * den)?;
        (dec.free.clone(), dec.constrained.clone(), dec.a, dec.b, dec.f)
    };
    let d = free.len();
    let mut p = Mat::zeros(n, d);
    let mut r = nalgebra::DVector::<f64>::zeros(n);
    for (t, &fi) in free.iter().enumerate() {
        p[(fi, t)] = 1.0;
    }
    for (s, &ci) in constrained.iter().enumerate() {
        for t in 0..d {
            p[(ci, t)] = a[s][t];
        }
        r[ci] = b[s];
    }
    // |true y - (Pz + r)|_Q ≤ sqrt(λ_max · k) · F
    let sigma = libm::sqrt(lam_max * k as f64) * slack;
    let hi_root = libm::sqrt((prob.target + prob.tol).max(0.0)) + sigma;
    let lo_root = (libm::sqrt((prob.target - prob.tol).max(0.0)) - sigma).max(0.0);
    let radius = hi_root / libm::sqrt(lam_min);

    let mut out = ShellPoints { radius, ..Default::default() };
    let push_candidates = |z: &[i64], out: &mut ShellPoints| {
        let zf: Vec<f64> = z.iter().map(|&v| v as f64).collect();
        let centers: Vec<f64> = (0..constrained.len())
            .map(|s| a[s].iter().zip(&zf).map(|(x, y)| x * y).sum::<f64>() + b[s])
            .collect();
        let ranges: Vec<(i64, i64)> = centers
            .iter()
            .map(|&c| {
                let w = slack + MARGIN * (1.0 + c.abs());
                (libm::ceil(c - w) as i64, libm::floor(c + w) as i64)
            })
            .collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return;
        }
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut y = vec![0i64; n];
            for (t, &fi) in free.iter().enumerate() {
                y[fi] = z[t];
            }
            for (s, &ci) in constrained.iter().enumerate() {
                y[ci] = idx[s];
            }
            if float_filter(prob, &y) {
                out.points.push(y);
            }
            let mut s = 0;
            while s < idx.len() {
                idx[s] += 1;
                if idx[s] <= ranges[s].1 {
                    break;
                }
                idx[s] = ranges[s].0;
                s += 1;
            }
            if s == idx.len() {
                break;
            }
        }
    };

    if d == 0 {
        push_candidates(&[], &mut out);
        return Ok(out);
    }

    let s_mat = p.transpose() * &qf * &p;
    let h = p.transpose() * &qf * &r;
    let c0 = r.dot(&(&qf * &r));
    let s_inv = linalg::inverse(&s_mat)?;
    let center = -(&s_inv * &h);
    let constant = c0 + h.dot(&center);
    let chol = s_mat.clone().cholesky().ok_or_else(|| Error::Internal("reduced form is not positive definite".into()))?;
    let u = chol.l().transpose();

    let scale = hi_root * hi_root;
    let r_hi = hi_root * hi_root - constant + MARGIN * (1.0 + scale);
    let r_lo = lo_root * lo_root - constant - MARGIN * (1.0 + scale);
    if r_hi < 0.0 {
        return Ok(out);
    }

    struct Walk<'w> {
        u: &'w Mat,
        center: &'w nalgebra::DVector<f64>,
        r_lo: f64,
        r_hi: f64,
        budget: u64,
    }
    fn descend(
        w: &Walk<'_>,
        level: usize,
        acc: f64,
        z: &mut Vec<i64>,
        nodes: &mut u64,
        leaf: &mut dyn FnMut(&[i64]),
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > w.budget {
            return Err(Error::BudgetExceeded { needed: *nodes as u128, budget: w.budget as u128 });
        }
        let d = z.len();
        let uii = w.u[(level, level)];
        let shift: f64 = (level + 1..d).map(|j| w.u[(level, j)] / uii * (z[j] as f64 - w.center[j])).sum();
        let mid = w.center[level] - shift;
        let room_hi = w.r_hi - acc;
        if room_hi < 0.0 {
            return Ok(());
        }
        let outer = libm::sqrt(room_hi) / uii.abs();
        let lo = libm::ceil(mid - outer) as i64;
        let hi = libm::floor(mid + outer) as i64;
        if level == 0 {
            let room_lo = w.r_lo - acc;
            let inner = if room_lo > 0.0 { libm::sqrt(room_lo) / uii.abs() } else { -1.0 };
            for v in lo..=hi {
                if (v as f64 - mid).abs() < inner {
                    continue;
                }
                z[0] = v;
                leaf(z);
            }
            return Ok(());
        }
        for v in lo..=hi {
            z[level] = v;
            let t = uii * (v as f64 - mid);
            descend(w, level - 1, acc + t * t, z, nodes, leaf)?;
        }
        Ok(())
    }

    let walk = Walk { u: &u, center: &center, r_lo, r_hi, budget: node_budget };
    let mut z = vec![0i64; d];
    let mut nodes = 0u64;
    let mut found = ShellPoints::default();
    descend(&walk, d - 1, 0.0, &mut z, &mut nodes, &mut |z| push_candidates(z, &mut found))?;
    out.points = found.points;
    out.nodes = nodes;
    Ok(out)
}

fn float_filter(prob: &ShellProblem<'_>, y: &[i64]) -> bool {
    let den = prob.form.den as f64;
    let val = prob.form.bilinear_num(y, y) as f64 / den;
    if (val - prob.target).abs() > prob.tol + MARGIN * (1.0 + prob.target.abs()) {
        return false;
    }
    prob.linear.iter().zip(prob.linear_targets).all(|(x, &q)| {
        let v = prob.form.bilinear_num(x, y) as f64 / den;
        (v - q).abs() <= prob.linear_tol + MARGIN * (1.0 + q.abs())
    })
}

/// Count report shared by the lattice experiments.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CountReport {
    pub m: Option<u64>,
    pub l: Option<u64>,
    pub delta: f64,
    /// Certified Euclidean bound on every enumerated vector.
    pub box_bound: f64,
    pub q_digest: String,
    pub count: u64,
    pub witnesses: Vec<IntMatrix>,
    pub points: Vec<Vec<i64>>,
    /// False when the node budget ran out before the search finished.
    pub complete: bool,
    pub nodes: u64,
    pub exponent_fit: Option<f64>,
}

/// One instance of `#{y : yᵀQy = q_0 + O(X²δ), x_iᵀQy = q_i + O(X²δ)}`.
#[derive(Clone, Debug)]
pub struct CorollaryInstance {
    pub form: QuadraticForm,
    pub xs: Vec<Vec<i64>>,
    pub q0: Rat,
    pub qs: Vec<Rat>,
    pub scale_x: f64,
    pub delta: f64,
}

fn rat_within(diff: &Rat, tol: f64) -> Result<bool> {
    decide_le(diff.abs().to_f64().unwrap_or(f64::INFINITY), tol)
}

pub fn corollary_count_experiment(inst: &CorollaryInstance, node_budget: u64) -> Result<CountReport> {
    let form = &inst.form;
    let n = form.dim();
    if inst.xs.len() != inst.qs.len() || inst.xs.len() + 2 > n.max(2) {
        return Err(Error::InvalidArgument(format!("need k ≤ n - 2 constraint vectors, got {}", inst.xs.len())));
    }
    let tol = inst.scale_x * inst.scale_x * inst.delta;
    let targets: Vec<f64> = inst.qs.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
    let prob = ShellProblem {
        form,
        target: inst.q0.to_f64().unwrap_or(f64::NAN),
        tol,
        linear: &inst.xs,
        linear_targets: &targets,
        linear_tol: tol,
    };
    let found = shell_points(&prob, node_budget)?;
    let mut points = Vec::new();
    for y in found.points {
        let mut ok = rat_within(&(form.value(&y) - &inst.q0), tol)?;
        for (x, q) in inst.xs.iter().zip(&inst.qs) {
            if !ok {
                break;
            }
            let v = Rat::new(BigInt::from(form.bilinear_num(x, &y)), BigInt::from(form.den));
            ok = rat_within(&(v - q), tol)?;
        }
        if ok {
            points.push(y);
        }
    }
    points.sort();
    Ok(CountReport {
        delta: inst.delta,
        box_bound: found.radius,
        q_digest: form.digest(),
        count: points.len() as u64,
        points,
        complete: true,
        nodes: found.nodes,
        ..Default::default()
    })
}

/// True when every `2×2` minor of `γ` vanishes modulo `l`.
pub fn minors_vanish_mod(gamma: &IntMatrix, l: u64) -> bool {
    let n = gamma.dim();
    let l = l as i128;
    for i in 0..n {
        for i2 in i + 1..n {
            for j in 0..n {
                for j2 in j + 1..n {
                    let m = gamma.get(i, j) as i128 * gamma.get(i2, j2) as i128
                        - gamma.get(i2, j) as i128 * gamma.get(i, j2) as i128;
                    if m % l != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every pair of columns differs modulo `l` by a unit multiple.
pub fn columns_proportional_mod(gamma: &IntMatrix, l: u64) -> bool {
    let n = gamma.dim();
    let l = l as i128;
    let units: Vec<i128> = (1..l.max(2)).filter(|&a| gcd_i128(a, l) == 1).collect();
    for i in 0..n {
        for j in i + 1..n {
            let proportional = units.iter().any(|&a| {
                (0..n).all(|r| (gamma.get(r, j) as i128 - a * gamma.get(r, i) as i128).rem_euclid(l) == 0)
            });
            if !proportional {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub det_ok: bool,
    pub delta1_ok: bool,
    pub delta2_ok: bool,
    pub deviation_ok: bool,
    pub congruences_ok: bool,
}

impl WitnessCheck {
    pub fn passes(&self) -> bool {
        self.det_ok && self.delta1_ok && self.delta2_ok && self.deviation_ok && self.congruences_ok
    }
}

/// Independent re-check of a member of `S(m, l)` within deviation `δ`.
pub fn revalidate_witness(gamma: &IntMatrix, form: &QuadraticForm, m: u64, l: u64, delta: f64) -> Result<WitnessCheck> {
    let det_ok = gamma.det() == m as i128;
    let dd = if gamma.det() == 0 { Vec::new() } else { determinantal_divisors(gamma)? };
    Ok(WitnessCheck {
        det_ok,
        delta1_ok: dd.first() == Some(&1),
        delta2_ok: gamma.dim() < 2 || dd.get(1) == Some(&(l as i128)),
        deviation_ok: det_ok && within_deviation(gamma, form, delta)?,
        congruences_ok: minors_vanish_mod(gamma, l),
    })
}

fn columns_minors_vanish(cols: &[Vec<i64>], l: i128) -> bool {
    let last = cols.len() - 1;
    let n = cols[last].len();
    cols[..last].iter().all(|c| {
        (0..n).all(|i| {
            (i + 1..n).all(|i2| (c[i] as i128 * cols[last][i2] as i128 - c[i2] as i128 * cols[last][i] as i128) % l == 0)
        })
    })
}

/// `𝒮_δ[m, l]`: integer matrices with `det = m`, `Δ_1 = 1`, `Δ_2 = l` and
/// `matrix_deviation ≤ δ`, by depth-first search over columns.
pub fn enumerate_s_delta(form: &QuadraticForm, m: u64, l: u64, delta: f64, node_budget: u64) -> Result<CountReport> {
    let n = form.dim();
    if m == 0 || l == 0 {
        return Err(Error::InvalidArgument("m and l must be positive".into()));
    }
    let scale = det_scale(m, n);
    let s = scale.approx;
    let tol = delta * s;
    let (lam_min, _) = form.eigen_bounds();
    let box_bound = (0..n)
        .map(|j| libm::sqrt((s * form.num[j][j] as f64 / form.den as f64 + tol) / lam_min))
        .fold(0.0, f64::max);

    struct Search<'s> {
        form: &'s QuadraticForm,
        m: u64,
        l: u64,
        delta: f64,
        s: f64,
        tol: f64,
        budget: u64,
        nodes: u64,
        witnesses: Vec<IntMatrix>,
    }
    fn dfs(st: &mut Search<'_>, cols: &mut Vec<Vec<i64>>) -> Result<()> {
        let n = st.form.dim();
        let j = cols.len();
        if j == n {
            let gamma = IntMatrix::from_columns(cols)?;
            if gamma.det() != st.m as i128 {
                return Ok(());
            }
            if revalidate_witness(&gamma, st.form, st.m, st.l, st.delta)?.passes() {
                st.witnesses.push(gamma);
            }
            return Ok(());
        }
        let den = st.form.den as f64;
        let targets: Vec<f64> = (0..j).map(|i| st.s * st.form.num[i][j] as f64 / den).collect();
        let prob = ShellProblem {
            form: st.form,
            target: st.s * st.form.num[j][j] as f64 / den,
            tol: st.tol,
            linear: cols,
            linear_targets: &targets,
            linear_tol: st.tol,
        };
        let remaining = st.budget.saturating_sub(st.nodes);
        let found = shell_points(&prob, remaining)?;
        st.nodes += found.nodes;
        for x in found.points {
            cols.push(x);
            if j == 0 || columns_minors_vanish(cols, st.l as i128) {
                dfs(st, cols)?;
            }
            cols.pop();
        }
        Ok(())
    }

    let mut st = Search { form, m, l, delta, s, tol, budget: node_budget, nodes: 0, witnesses: Vec::new() };
    let complete = match dfs(&mut st, &mut Vec::new()) {
        Ok(()) => true,
        Err(Error::BudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    let mut witnesses = st.witnesses;
    witnesses.sort();
    Ok(CountReport {
        m: Some(m),
        l: Some(l),
        delta,
        box_bound,
        q_digest: form.digest(),
        count: witnesses.len() as u64,
        witnesses,
        complete,
        nodes: st.nodes,
        ..Default::default()
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub p: u64,
    pub m: u64,
    pub l: u64,
    pub count: u64,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub nu: u32,
    pub rows: Vec<ScalingRow>,
    /// Slope of `log count` against `log p^ν` over complete rows with nonzero count.
    pub slope: Option<f64>,
    /// `n - 1`.
    pub benchmark: f64,
    /// `3 - 1/(2ν)`.
    pub bound_exponent: f64,
}

/// `#𝒮_δ[p^{4ν}, p^ν]` over a prime ladder, for `n = 4`.
pub fn scaling_experiment(form: &QuadraticForm, nu: u32, primes: &[u64], delta: f64, node_budget: u64) -> Result<ScalingReport> {
    if form.dim() != 4 {
        return Err(Error::InvalidArgument("the scaling experiment is set in dimension 4".into()));
    }
    if !(1..=4).contains(&nu) {
        return Err(Error::InvalidArgument(format!("ν = {nu} outside 1..=4")));
    }
    let mut rows = Vec::new();
    for &p in primes {
        let l = p.checked_pow(nu).ok_or_else(|| Error::InvalidArgument("p^ν overflows".into()))?;
        let m = l.checked_pow(4).ok_or_else(|| Error::InvalidArgument("p^{4ν} overflows".into()))?;
        let report = enumerate_s_delta(form, m, l, delta, node_budget)?;
        rows.push(ScalingRow { p, m, l, count: report.count, complete: report.complete });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.complete && r.count > 0)
        .map(|r| (r.l as f64, r.count as f64))
        .collect();
    Ok(ScalingReport {
        nu,
        slope: linalg::loglog_slope(&pts),
        rows,
        benchmark: 3.0,
        bound_exponent: 3.0 - 1.0 / (2.0 * nu as f64),
    })
}

/// `r_2(n) = 4 (d_1(n) - d_3(n))`, with `d_i` counting divisors `≡ i (mod 4)`.
pub fn sum_of_two_squares_count(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let (mut d1, mut d3) = (0i64, 0i64);
    for d in 1..=n {
        if n.is_multiple_of(d) {
            match d % 4 {
                1 => d1 += 1,
                3 => d3 += 1,
                _ => {}
            }
        }
    }
    (4 * (d1 - d3)) as u64
}
