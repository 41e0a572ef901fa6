//! Levenberg–Marquardt with a finite-difference Jacobian.

use levenberg_marquardt::{LeastSquaresProblem, LevenbergMarquardt};
use nalgebra::{DMatrix, DVector, Dyn, Owned};
use rayon::prelude::*;

/// Central-difference step.
pub const FD_STEP: f64 = 1e-6;

struct Problem<'a, F> {
    f: &'a F,
    x: DVector<f64>,
    m: usize,
}

impl<F> LeastSquaresProblem<f64, Dyn, Dyn> for Problem<'_, F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    type ResidualStorage = Owned<f64, Dyn>;
    type JacobianStorage = Owned<f64, Dyn, Dyn>;
    type ParameterStorage = Owned<f64, Dyn>;

    fn set_params(&mut self, x: &DVector<f64>) {
        self.x.copy_from(x);
    }

    fn params(&self) -> DVector<f64> {
        self.x.clone()
    }

    fn residuals(&self) -> Option<DVector<f64>> {
        let r = (self.f)(self.x.as_slice());
        r.iter().all(|v| v.is_finite()).then(|| DVector::from_vec(r))
    }

    fn jacobian(&self) -> Option<DMatrix<f64>> {
        let n = self.x.len();
        let cols: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                let mut xp = self.x.as_slice().to_vec();
                let mut xm = xp.clone();
                xp[j] += FD_STEP;
                xm[j] -= FD_STEP;
                let (rp, rm) = ((self.f)(&xp), (self.f)(&xm));
                rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect()
            })
            .collect();
        let jac = DMatrix::from_fn(self.m, n, |i, j| cols[j][i]);
        jac.iter().all(|v| v.is_finite()).then_some(jac)
    }
}

#[derive(Clone, Debug)]
pub struct Fit {
    pub x: Vec<f64>,
    /// Largest absolute residual at `x`.
    pub residual: f64,
    pub evaluations: usize,
}

/// Minimizes `Σ f(x)²` from `x0`.
pub fn minimize<F>(f: &F, x0: Vec<f64>, patience: usize) -> Fit
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let m = f(&x0).len();
    let problem = Problem { f, x: DVector::from_vec(x0), m };
    let (done, report) = LevenbergMarquardt::new()
        .with_patience(patience.max(1))
        .with_ftol(1e-15)
        .with_xtol(1e-15)
        .with_gtol(1e-15)
        .minimize(problem);
    let x = done.x.as_slice().to_vec();
    let residual = f(&x).iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Fit { x, residual, evaluations: report.number_of_evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_rosenbrock_residuals() {
        let f = |x: &[f64]| vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]];
        let fit = minimize(&f, vec![-1.2, 1.0], 100);
        assert!((fit.x[0] - 1.0).abs() < 1e-8 && (fit.x[1] - 1.0).abs() < 1e-8);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn overdetermined_consistent_system() {
        let f = |x: &[f64]| vec![x[0] + x[1] - 3.0, x[0] - x[1] - 1.0, 2.0 * x[0] - 4.0];
        let fit = minimize(&f, vec![0.0, 0.0], 50);
        assert!((fit.x[0] - 2.0).abs() < 1e-9 && (fit.x[1] - 1.0).abs() < 1e-9);
    }
}
