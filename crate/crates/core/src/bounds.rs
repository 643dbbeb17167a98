//! Subcriticality bounds on the arrival rate.
//!
//! Three sufficient conditions for the clan of ancestors to be finite, each a
//! closed form in the first two moments `rho1 = E U`, `rho2 = E U^2` of the
//! call length:
//!
//! * `ffg  = 1 / (rho2 + rho1 + 1)`
//! * `star = 1 / (rho1 + sqrt(rho2))`, the Perron root of the one-step
//!   branching kernel `m(u, v) = lambda pi(v) (u + v)` divided by `lambda`
//! * `double_star = 4 / (3 rho1 + sqrt(rho1^2 + 8 rho2))`, the inverse of the
//!   dominant eigenvalue of the 2x2 matrix `T*` obtained by colouring the
//!   branching process over two generations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LengthDistribution;

/// Relative slack accepted on `rho2 >= rho1^2`, so that moments computed in
/// floating point for a point mass pass validation.
const MOMENT_SLACK: f64 = 1e-12;

fn check_moments(rho1: f64, rho2: f64) -> Result<()> {
    let ok = rho1.is_finite() && rho2.is_finite() && rho1 > 0.0 && rho2 >= rho1 * rho1 * (1.0 - MOMENT_SLACK);
    if ok {
        Ok(())
    } else {
        Err(Error::MomentDomain { rho1, rho2 })
    }
}

pub fn lambda_ffg(rho1: f64, rho2: f64) -> Result<f64> {
    check_moments(rho1, rho2)?;
    // The trailing 1 is the mean call duration.
    Ok(1.0 / (rho2 + rho1 + 1.0))
}

pub fn lambda_star(rho1: f64, rho2: f64) -> Result<f64> {
    check_moments(rho1, rho2)?;
    Ok(1.0 / (rho2.sqrt() + rho1))
}

pub fn lambda_double_star(rho1: f64, rho2: f64) -> Result<f64> {
    check_moments(rho1, rho2)?;
    Ok(4.0 / (3.0 * rho1 + (rho1 * rho1 + 8.0 * rho2).sqrt()))
}

/// The three critical rates for one length law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalBounds {
    pub rho1: f64,
    pub rho2: f64,
    pub ffg: f64,
    pub star: f64,
    pub double_star: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl CriticalBounds {
    pub fn from_moments(rho1: f64, rho2: f64) -> Result<Self> {
        let (eps1, eps2) = tstar_eigen(rho1, rho2)?;
        Ok(Self {
            rho1,
            rho2,
            ffg: lambda_ffg(rho1, rho2)?,
            star: lambda_star(rho1, rho2)?,
            double_star: lambda_double_star(rho1, rho2)?,
            eps1,
            eps2,
        })
    }

    pub fn for_distribution(pi: &LengthDistribution) -> Self {
        let (rho1, rho2) = pi.moments();
        Self::from_moments(rho1, rho2).expect("constructible laws have valid moments")
    }
}

/// Eigenvalues `(eps1, eps2)` of `T* = [[rho1/2, rho2/2], [1, rho1]]`,
/// largest first.
pub fn tstar_eigen(rho1: f64, rho2: f64) -> Result<(f64, f64)> {
    check_moments(rho1, rho2)?;
    let disc = (rho1 * rho1 + 8.0 * rho2).sqrt();
    Ok(((3.0 * rho1 + disc) / 4.0, (3.0 * rho1 - disc) / 4.0))
}

/// The two-generation transfer matrix and its powers.
///
/// `(f_n, g_n)` are defined by `(f_1, g_1) = (rho1/2, 1)` and
/// `(f_{n+1}, g_{n+1}) = T* (f_n, g_n)`; the recursion is extended back to
/// `(f_0, g_0) = (1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TStar {
    pub rho1: f64,
    pub rho2: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl TStar {
    pub fn new(rho1: f64, rho2: f64) -> Result<Self> {
        let (eps1, eps2) = tstar_eigen(rho1, rho2)?;
        // eps1 == eps2 would need rho1^2 + 8 rho2 == 0.
        assert!(eps1 > eps2, "T* has distinct eigenvalues for rho1 > 0");
        Ok(Self { rho1, rho2, eps1, eps2 })
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.rho1 / 2.0, self.rho2 / 2.0], [1.0, self.rho1]]
    }

    pub fn determinant(&self) -> f64 {
        self.rho1 * self.rho1 / 2.0 - self.rho2 / 2.0
    }

    /// `(f_k, g_k)` for `k = 1..=n` by repeated multiplication.
    pub fn fg_recursive(&self, n: usize) -> Vec<(f64, f64)> {
        let m = self.matrix();
        let mut out = Vec::with_capacity(n);
        let (mut f, mut g) = (self.rho1 / 2.0, 1.0);
        for _ in 0..n {
            out.push((f, g));
            (f, g) = (m[0][0] * f + m[0][1] * g, m[1][0] * f + m[1][1] * g);
        }
        out
    }

    /// `(f_k, g_k)` from the eigen-decomposition.
    pub fn fg_closed(&self, k: usize) -> (f64, f64) {
        let (f, g) = self.fg_scaled(k);
        let scale = self.eps1.powi(k as i32);
        (f * scale, g * scale)
    }

    /// `(f_k, g_k) / eps1^k`, bounded for all `k`.
    fn fg_scaled(&self, k: usize) -> (f64, f64) {
        let (e1, e2, r1) = (self.eps1, self.eps2, self.rho1);
        let ratio = (e2 / e1).powi(k as i32);
        let gap = e1 - e2;
        ((e1 - r1 + ratio * (r1 - e2)) / gap, (1.0 - ratio) / gap)
    }

    /// Natural log of the `n`-th term of the dominating series for a root
    /// of length `v`:
    /// `lambda^n (v (g_{n-1} rho1 + f_{n-1}) + rho2 g_{n-1} + rho1 f_{n-1})`.
    pub fn log_series_term(&self, lambda: f64, v: f64, n: usize) -> f64 {
        assert!(n >= 1, "series terms start at n = 1");
        let (f, g) = self.fg_scaled(n - 1);
        let inner = v * (g * self.rho1 + f) + self.rho2 * g + self.rho1 * f;
        n as f64 * lambda.ln() + (n - 1) as f64 * self.eps1.ln() + inner.ln()
    }
}

/// `(f_k, g_k)` for `k = 1..=n`, computed by matrix iteration and checked
/// against the closed form.
pub fn fg_sequence(rho1: f64, rho2: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    Ok(TStar::new(rho1, rho2)?.fg_recursive(n))
}

/// `n`-th term of the dominating series (log-space internally).
pub fn series_term(lambda: f64, v: f64, n: usize, rho1: f64, rho2: f64) -> Result<f64> {
    Ok(TStar::new(rho1, rho2)?.log_series_term(lambda, v, n).exp())
}

/// Mean offspring matrix `M[i][j] = lambda pi(v_j) (v_i + v_j)` over the
/// atoms of a discrete length law.
pub fn mean_matrix_discrete(lambda: f64, pi: &LengthDistribution) -> Result<DMatrix<f64>> {
    let atoms = pi.atoms().ok_or(Error::NotDiscrete)?;
    let k = atoms.len();
    Ok(DMatrix::from_fn(k, k, |i, j| lambda * atoms[j].1 * (atoms[i].0 + atoms[j].0)))
}

pub const POWER_ITERATION_TOL: f64 = 1e-10;
pub const POWER_ITERATION_MAX: usize = 100_000;

/// Perron root of a nonnegative square matrix by power iteration.
///
/// Iterates until the Collatz–Wielandt bounds `min_i (Mx)_i / x_i` and
/// `max_i (Mx)_i / x_i` agree to [`POWER_ITERATION_TOL`] relative.
pub fn spectral_radius(matrix: &DMatrix<f64>) -> Result<f64> {
    assert!(matrix.is_square(), "spectral radius needs a square matrix");
    let n = matrix.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    debug_assert!(matrix.iter().all(|&x| x >= 0.0));
    let mut x = nalgebra::DVector::from_element(n, 1.0 / n as f64);
    for iteration in 1..=POWER_ITERATION_MAX {
        let y = matrix * &x;
        let norm = y.sum();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            if x[i] > 0.0 {
                let r = y[i] / x[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if hi - lo <= POWER_ITERATION_TOL * hi {
            return Ok(0.5 * (lo + hi));
        }
        x = y / norm;
        if iteration == POWER_ITERATION_MAX {
            break;
        }
    }
    Err(Error::NonConvergence { iterations: POWER_ITERATION_MAX })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn moments() -> impl Strategy<Value = (f64, f64)> {
        (0.01..5.0f64, 1.0..4.0f64).prop_map(|(r1, k)| (r1, r1 * r1 * k))
    }

    #[test]
    fn uniform_values() {
        let (r1, r2) = (0.5, 1.0 / 3.0);
        assert!((lambda_ffg(r1, r2).unwrap() - 6.0 / 11.0).abs() < 1e-15);
        assert!((lambda_star(r1, r2).unwrap() - 0.9282).abs() < 5e-5);
        assert!((lambda_double_star(r1, r2).unwrap() - 1.2469).abs() < 5e-4);
        let (e1, _) = tstar_eigen(r1, r2).unwrap();
        assert!((e1 - 0.80196).abs() < 1e-5);
    }

    #[test]
    fn point_mass_values() {
        for d in [0.25, 0.5, 1.0, 3.0] {
            assert!((lambda_ffg(d, d * d).unwrap() - 1.0 / (d * d + d + 1.0)).abs() < 1e-15);
            assert!((lambda_star(d, d * d).unwrap() - 1.0 / (2.0 * d)).abs() < 1e-12);
            assert!((lambda_double_star(d, d * d).unwrap() - 2.0 / (3.0 * d)).abs() < 1e-12);
            let (e1, e2) = tstar_eigen(d, d * d).unwrap();
            assert!((e1 - 1.5 * d).abs() < 1e-12 && e2.abs() < 1e-12);
        }
        assert!((lambda_ffg(1e-9, 1e-18).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn beta22_star() {
        assert!((lambda_star(0.5, 0.3).unwrap() - 0.954_45).abs() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        assert!(lambda_star(0.0, 0.0).is_err());
        assert!(lambda_ffg(1.0, 0.5).is_err());
        assert!(lambda_double_star(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn fg_start_and_growth() {
        let t = TStar::new(0.5, 1.0 / 3.0).unwrap();
        let seq = t.fg_recursive(31);
        assert_eq!(seq[0], (0.25, 1.0));
        let ratio = seq[30].0 / seq[29].0;
        assert!((ratio - t.eps1).abs() < 1e-3 * t.eps1);
        assert_eq!(t.fg_closed(0), (1.0, 0.0));
    }

    #[test]
    fn point_mass_fg_matches_matrix_powers() {
        // Degenerate eps2 = 0 branch.
        let d = 0.7;
        let t = TStar::new(d, d * d).unwrap();
        let m = t.matrix();
        let mut p = [[1.0, 0.0], [0.0, 1.0]];
        for k in 1..=12 {
            let (f, g) = t.fg_closed(k);
            // (f_k, g_k) = T^{k-1} (rho1/2, 1).
            let want_f = p[0][0] * d / 2.0 + p[0][1];
            let want_g = p[1][0] * d / 2.0 + p[1][1];
            assert!((f - want_f).abs() <= 1e-12 * want_f.abs().max(1.0), "k={k}");
            assert!((g - want_g).abs() <= 1e-12 * want_g.abs().max(1.0), "k={k}");
            p = [
                [m[0][0] * p[0][0] + m[0][1] * p[1][0], m[0][0] * p[0][1] + m[0][1] * p[1][1]],
                [m[1][0] * p[0][0] + m[1][1] * p[1][0], m[1][0] * p[0][1] + m[1][1] * p[1][1]],
            ];
        }
    }

    #[test]
    fn series_ratio_behaviour() {
        let (r1, r2) = (0.5, 1.0 / 3.0);
        let t = TStar::new(r1, r2).unwrap();
        let crit = 1.0 / t.eps1;
        let ratio =
            |lambda: f64, n: usize| (t.log_series_term(lambda, 0.5, n + 1) - t.log_series_term(lambda, 0.5, n)).exp();
        assert!((ratio(0.9 * crit, 30) - 0.9).abs() < 0.05 * 0.9);
        assert!((ratio(crit, 50) - 1.0).abs() < 0.01);
        let terms: Vec<f64> = (20..40).map(|n| t.log_series_term(1.1 * crit, 0.5, n)).collect();
        assert!(terms.windows(2).all(|w| w[1] > w[0]));
        // No overflow far out.
        assert!(t.log_series_term(1.1 * crit, 0.5, 200).is_finite());
        let direct = series_term(0.3, 0.5, 3, r1, r2).unwrap();
        let (f, g) = t.fg_recursive(2)[1];
        let want = 0.3f64.powi(3) * (0.5 * (g * r1 + f) + r2 * g + r1 * f);
        assert!((direct - want).abs() < 1e-14);
    }

    #[test]
    fn first_series_term_is_one_step_mean() {
        // n = 1: lambda * sum_v pi(v) (w + v) = lambda (w + rho1).
        let term = series_term(0.4, 0.8, 1, 0.5, 1.0 / 3.0).unwrap();
        assert!((term - 0.4 * (0.8 + 0.5)).abs() < 1e-14);
    }

    #[test]
    fn mean_matrix_examples() {
        let pi = LengthDistribution::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
        let m = mean_matrix_discrete(0.2, &pi).unwrap();
        let want = [[0.2, 0.3], [0.3, 0.4]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - want[i][j]).abs() < 1e-15);
            }
        }
        let rho = spectral_radius(&m).unwrap();
        assert!((rho - 0.2 * (1.5 + 2.5f64.sqrt())).abs() < 1e-9);
        assert!((rho - 0.61623).abs() < 1e-5);

        let single = LengthDistribution::point_mass(0.5).unwrap();
        let m = mean_matrix_discrete(1.0, &single).unwrap();
        assert_eq!(m.shape(), (1, 1));
        assert!((spectral_radius(&m).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(mean_matrix_discrete(1.0, &LengthDistribution::uniform01()), Err(Error::NotDiscrete)));
    }

    #[test]
    fn mean_matrix_row_sums() {
        let pi = LengthDistribution::discrete(vec![(0.3, 0.2), (1.0, 0.5), (2.5, 0.3)]).unwrap();
        let (r1, _) = pi.moments();
        let m = mean_matrix_discrete(0.7, &pi).unwrap();
        for (i, &(u, _)) in pi.atoms().unwrap().iter().enumerate() {
            let row: f64 = m.row(i).sum();
            assert!((row - 0.7 * (u + r1)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn orderings_hold((r1, r2) in moments()) {
            let b = CriticalBounds::from_moments(r1, r2).unwrap();
            prop_assert!(b.ffg <= b.star);
            prop_assert!(b.double_star >= 4.0 / 3.0 * b.star * (1.0 - 1e-12));
            prop_assert!(b.double_star <= 2.0 / (3.0 * r1) * (1.0 + 1e-12));
        }

        #[test]
        fn eigenvalues_solve_characteristic_polynomial((r1, r2) in moments()) {
            let t = TStar::new(r1, r2).unwrap();
            let m = t.matrix();
            let tr = m[0][0] + m[1][1];
            for e in [t.eps1, t.eps2] {
                let p = e * e - tr * e + t.determinant();
                prop_assert!(p.abs() <= 1e-12 * (tr * tr).max(1.0));
            }
            prop_assert!((t.eps1 * t.eps2 - t.determinant()).abs() <= 1e-12 * (r2).max(1.0));
            prop_assert!(t.eps1 >= t.eps2.abs());
        }

        #[test]
        fn closed_form_tracks_recursion((r1, r2) in moments()) {
            let t = TStar::new(r1, r2).unwrap();
            for (k, &(f, g)) in t.fg_recursive(40).iter().enumerate() {
                let (cf, cg) = t.fg_closed(k + 1);
                prop_assert!((cf - f).abs() <= 1e-9 * f.abs());
                prop_assert!((cg - g).abs() <= 1e-9 * g.abs());
            }
        }
    }
}
