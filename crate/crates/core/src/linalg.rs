//! Floating-point helpers on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;

pub fn from_rows(rows: &[Vec<f64>]) -> Mat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn from_int_rows(rows: &[Vec<i64>]) -> Mat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(n, m, |i, j| rows[i][j] as f64)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Mat) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// Singular values, descending.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    let mut sv: Vec<f64> = symmetric_eigenvalues(&(m.transpose() * m)).into_iter().map(|x| libm::sqrt(x.max(0.0))).collect();
    sv.reverse();
    sv
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &Mat) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Least-squares slope of `log y` against `log x`. Needs two distinct `x`
/// and positive values throughout.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (libm::log(x), libm::log(y)))
        .collect();
    if pts.len() < 2 || pts.len() != points.len() {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn eigen_and_singular() {
        let m = from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let ev = symmetric_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
        let sv = singular_values(&from_rows(&[vec![4.0, 0.0], vec![0.0, 1.0]]));
        assert!((sv[0] - 4.0).abs() < 1e-12 && (sv[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 3.0, 5.0, 7.0].iter().map(|&x: &f64| (x, 5.0 * x * x * x)).collect();
        assert!((loglog_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(2.0, 1.0)]), None);
        assert_eq!(loglog_slope(&[(2.0, 1.0), (3.0, 0.0)]), None);
    }

    #[test]
    fn singular_inverse() {
        assert_eq!(inverse(&from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]])), Err(Error::Singular));
    }
}
