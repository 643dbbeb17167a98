//! Critical-rate estimation: least-squares polynomial fit of `1 / log N`
//! against the rate, and its first root.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::sweep::SweepTable;
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE: usize = 9;

/// Fits whose design matrix is worse conditioned than this are refitted at
/// lower degree.
pub const CONDITION_LIMIT: f64 = 1e10;

const ROOT_TOL: f64 = 1e-6;
const SCAN_STEPS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyFit {
    pub requested_degree: usize,
    pub degree: usize,
    /// Abscissa transform `t = (lambda - center) / scale`.
    pub center: f64,
    pub scale: f64,
    /// Coefficients in `t`, lowest order first.
    pub coefficients: Vec<f64>,
    /// The same polynomial expanded in `lambda`, lowest order first.
    pub raw_coefficients: Vec<f64>,
    /// Ratio of extreme singular values of the design matrix.
    pub condition: f64,
    pub residual_norm: f64,
}

impl PolyFit {
    pub fn eval(&self, lambda: f64) -> f64 {
        let t = (lambda - self.center) / self.scale;
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub lambda_hat: f64,
    /// Interval searched for the root.
    pub search: (f64, f64),
    pub fit: PolyFit,
}

fn lstsq(t: &[f64], y: &[f64], degree: usize) -> Result<(Vec<f64>, f64, f64)> {
    let design = DMatrix::from_fn(t.len(), degree + 1, |i, j| t[i].powi(j as i32));
    let rhs = DVector::from_column_slice(y);
    let sv = design.singular_values();
    let (max, min) = (sv.max(), sv.min());
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    // Householder QR is backward stable for full-rank least squares.
    let qr = design.clone().qr();
    let coef = qr
        .r()
        .solve_upper_triangular(&(qr.q().transpose() * &rhs))
        .ok_or_else(|| Error::InvalidFit(format!("rank-deficient design at degree {degree}")))?;
    let residual = (&design * &coef - rhs).norm();
    Ok((coef.iter().copied().collect(), condition, residual))
}

/// Expands `sum c_k ((x - center) / scale)^k` in powers of `x`.
fn expand(coefficients: &[f64], center: f64, scale: f64) -> Vec<f64> {
    let n = coefficients.len();
    let mut out = vec![0.0; n];
    // Horner in polynomial arithmetic: acc = acc * (x - center) / scale + c.
    for &c in coefficients.iter().rev() {
        let mut next = vec![0.0; n];
        for (k, &a) in out.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            next[k] -= a * center / scale;
            if k + 1 < n {
                next[k + 1] += a / scale;
            }
        }
        next[0] += c;
        out = next;
    }
    out
}

/// Least-squares fit of `y = 1 / log(mean_N)` by a polynomial of `degree`
/// in the rate. Rows where every run was capped are skipped.
pub fn fit_reciprocal_log(table: &SweepTable, degree: usize) -> Result<PolyFit> {
    let mut lambdas = Vec::new();
    let mut ys = Vec::new();
    for r in &table.rows {
        if r.mean_n.is_nan() {
            log::warn!("skipping lambda = {}: no uncapped runs", r.lambda);
            continue;
        }
        if !(r.mean_n > 1.0) {
            return Err(Error::InvalidFit(format!("mean_N = {} at lambda = {} is not above 1", r.mean_n, r.lambda)));
        }
        lambdas.push(r.lambda);
        ys.push(1.0 / r.mean_n.ln());
    }
    fit_points(&lambdas, &ys, degree)
}

/// Polynomial least squares on arbitrary points.
pub fn fit_points(lambdas: &[f64], ys: &[f64], degree: usize) -> Result<PolyFit> {
    if lambdas.len() != ys.len() || degree >= lambdas.len() {
        return Err(Error::InvalidFit(format!("degree {degree} needs more than {} usable rows", lambdas.len())));
    }
    let (lo, hi) = lambdas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let center = 0.5 * (lo + hi);
    let scale = if hi > lo { 0.5 * (hi - lo) } else { 1.0 };
    let t: Vec<f64> = lambdas.iter().map(|&x| (x - center) / scale).collect();

    let mut deg = degree;
    let (mut coef, mut condition, mut residual) = lstsq(&t, ys, deg)?;
    while condition > CONDITION_LIMIT && deg > 1 {
        let (c, k, r) = lstsq(&t, ys, deg - 1)?;
        if r > residual * (1.0 + 1e-6) + f64::EPSILON {
            break;
        }
        deg -= 1;
        (coef, condition, residual) = (c, k, r);
    }
    if deg != degree {
        log::warn!("ill-conditioned fit: degree reduced from {degree} to {deg} (condition {condition:.3e})");
    }
    Ok(PolyFit {
        requested_degree: degree,
        degree: deg,
        center,
        scale,
        raw_coefficients: expand(&coef, center, scale),
        coefficients: coef,
        condition,
        residual_norm: residual,
    })
}

/// Smallest root of the fitted `1 / log N` curve in
/// `[min lambda, max lambda + one grid step]`.
pub fn estimate_lambda_c(table: &SweepTable, degree: usize) -> Result<LambdaEstimate> {
    let fit = fit_reciprocal_log(table, degree)?;
    let lambdas = table.lambdas();
    if lambdas.len() < 2 {
        return Err(Error::InvalidFit("need at least two grid points".into()));
    }
    let n = lambdas.len();
    let step = lambdas[n - 1] - lambdas[n - 2];
    let (lo, hi) = (lambdas[0], lambdas[n - 1] + step);
    let root = first_root(|x| fit.eval(x), lo, hi).ok_or(Error::NoDivergence)?;
    Ok(LambdaEstimate { lambda_hat: root, search: (lo, hi), fit })
}

fn first_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Option<f64> {
    let h = (hi - lo) / SCAN_STEPS as f64;
    let mut a = lo;
    let mut fa = f(a);
    if fa == 0.0 {
        return Some(a);
    }
    for k in 1..=SCAN_STEPS {
        let b = if k == SCAN_STEPS { hi } else { lo + k as f64 * h };
        let fb = f(b);
        if fa.signum() != fb.signum() || fb == 0.0 {
            return Some(bisect(&f, a, b, fa));
        }
        (a, fa) = (b, fb);
    }
    None
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            (a, fa) = (m, fm);
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::SweepRow;

    fn table(points: &[(f64, f64)]) -> SweepTable {
        SweepTable::new(
            points.iter().map(|&(lambda, mean_n)| SweepRow { lambda, reps: 1, mean_n, se_n: 0.0, capped: 0 }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn linear_data_is_recovered() {
        let xs: Vec<f64> = (0..10).map(|k| 0.1 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - x).collect();
        let fit = fit_points(&xs, &ys, 1).unwrap();
        assert!((fit.raw_coefficients[0] - 2.0).abs() < 1e-10);
        assert!((fit.raw_coefficients[1] + 1.0).abs() < 1e-10);
        assert!(fit.residual_norm < 1e-12);
    }

    #[test]
    fn constant_data_at_degree_zero() {
        let fit = fit_points(&[1.0, 2.0, 3.0], &[0.7; 3], 0).unwrap();
        assert!((fit.coefficients[0] - 0.7).abs() < 1e-15);
        assert!(fit.residual_norm < 1e-15);
    }

    #[test]
    fn expansion_matches_evaluation() {
        let xs: Vec<f64> = (0..12).map(|k| 0.5 + 0.25 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x: &f64| (x * 1.3).sin()).collect();
        let fit = fit_points(&xs, &ys, 5).unwrap();
        for &x in &xs {
            let raw = fit.raw_coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c);
            assert!((raw - fit.eval(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn degree_must_be_below_row_count() {
        assert!(fit_points(&[1.0, 2.0], &[1.0, 2.0], 2).is_err());
        let t = table(&[(1.0, 0.5), (2.0, 3.0)]);
        assert!(fit_reciprocal_log(&t, 0).is_err());
    }

    #[test]
    fn root_of_a_known_curve() {
        // 1 / log N = 3 - lambda exactly.
        let pts: Vec<(f64, f64)> = (1..=29)
            .map(|k| {
                let l = 0.1 * k as f64;
                (l, (1.0 / (2.95 - l)).exp())
            })
            .collect();
        let est = estimate_lambda_c(&table(&pts), 3).unwrap();
        assert!((est.lambda_hat - 2.95).abs() < 1e-5, "{}", est.lambda_hat);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|k| (0.1 * k as f64, 2.0)).collect();
        assert!(matches!(estimate_lambda_c(&table(&pts), 1), Err(Error::NoDivergence)));
    }

    #[test]
    fn high_degree_fit_stays_accurate() {
        let xs: Vec<f64> = (0..25).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 + 0.5 * x).collect();
        let fit = fit_points(&xs, &ys, 19).unwrap();
        assert!(fit.degree <= 19);
        assert!(fit.residual_norm < 1e-6, "{fit:?}");
    }
}
