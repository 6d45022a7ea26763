//! Projected-gradient non-negative least squares.

use crate::dictionary::NoteDictionary;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnlsConfig {
    pub max_iter: usize,
    /// Stop once `(r_prev - r) / r_prev` falls below this.
    pub tolerance: f64,
}

impl Default for NnlsConfig {
    fn default() -> Self {
        Self {
            max_iter: 500,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub activations: Vec<f64>,
    /// `||D a - f||` for the initial iterate and after each step.
    pub residuals: Vec<f64>,
}

impl NnlsSolution {
    pub fn residual(&self) -> f64 {
        *self.residuals.last().unwrap()
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len() - 1
    }
}

/// Solver bound to one dictionary; the step size is computed once.
#[derive(Debug, Clone)]
pub struct NnlsSolver<'a> {
    dict: &'a NoteDictionary,
    step: f64,
    pub config: NnlsConfig,
}

impl<'a> NnlsSolver<'a> {
    pub fn new(dict: &'a NoteDictionary, config: NnlsConfig) -> Self {
        let l = dict.lipschitz();
        let step = if l > 0.0 { 1.0 / l } else { 0.0 };
        Self { dict, step, config }
    }

    pub fn solve(&self, frame: &[f64]) -> NnlsSolution {
        let d = self.dict;
        let n = d.notes();
        let mut a = vec![0.0; n];
        let mut fitted = vec![0.0; d.bins];
        let mut resid_vec: Vec<f64> = frame.to_vec();
        let mut grad = vec![0.0; n];
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut residuals = vec![norm(&resid_vec)];

        for _ in 0..self.config.max_iter {
            let prev = *residuals.last().unwrap();
            if prev == 0.0 {
                break;
            }
            d.mul_t(&resid_vec, &mut grad);
            let candidate: Vec<f64> = a
                .iter()
                .zip(&grad)
                .map(|(x, g)| (x + self.step * g).max(0.0))
                .collect();
            d.mul(&candidate, &mut fitted);
            let next_resid: Vec<f64> = frame.iter().zip(&fitted).map(|(f, y)| f - y).collect();
            let r = norm(&next_resid);
            // Guards the monotone contract against rounding at convergence.
            if r > prev {
                break;
            }
            a = candidate;
            resid_vec = next_resid;
            residuals.push(r);
            if (prev - r) / prev < self.config.tolerance {
                break;
            }
        }
        NnlsSolution {
            activations: a,
            residuals,
        }
    }
}

pub fn nnls_activations(frame: &[f64], dict: &NoteDictionary) -> Vec<f64> {
    NnlsSolver::new(dict, NnlsConfig::default())
        .solve(frame)
        .activations
}
