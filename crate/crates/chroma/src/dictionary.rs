//! Harmonic note profiles over the semitone bins.

use crate::logfreq::NOTE_BINS;

pub const DEFAULT_HARMONICS: usize = 8;
pub const DEFAULT_DECAY: f64 = 0.8;

/// Column `n` models note `n` as harmonics with geometric decay. Stored sparsely
/// since each column touches at most `harmonics` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct NoteDictionary {
    pub columns: Vec<Vec<(usize, f64)>>,
    pub bins: usize,
}

impl NoteDictionary {
    pub fn new(harmonics: usize, decay: f64) -> Self {
        let bins = NOTE_BINS;
        let columns = (0..bins)
            .map(|n| {
                let mut col: Vec<(usize, f64)> = Vec::new();
                for k in 1..=harmonics {
                    let bin = n + (12.0 * (k as f64).log2()).round() as usize;
                    if bin >= bins {
                        break;
                    }
                    let w = decay.powi(k as i32 - 1);
                    match col.iter_mut().find(|(b, _)| *b == bin) {
                        Some(entry) => entry.1 += w,
                        None => col.push((bin, w)),
                    }
                }
                let norm = col.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
                col.iter_mut().for_each(|(_, w)| *w /= norm);
                col
            })
            .collect();
        Self { columns, bins }
    }

    pub fn notes(&self) -> usize {
        self.columns.len()
    }

    pub fn column_dense(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.bins];
        for &(b, w) in &self.columns[n] {
            v[b] = w;
        }
        v
    }

    /// `D a`
    pub fn mul(&self, a: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (col, &x) in self.columns.iter().zip(a) {
            if x != 0.0 {
                for &(b, w) in col {
                    out[b] += w * x;
                }
            }
        }
    }

    /// `D^T r`
    pub fn mul_t(&self, r: &[f64], out: &mut [f64]) {
        for (o, col) in out.iter_mut().zip(&self.columns) {
            *o = col.iter().map(|&(b, w)| w * r[b]).sum();
        }
    }

    /// Squared spectral norm of `D` by power iteration on `D^T D`.
    pub fn lipschitz(&self) -> f64 {
        let n = self.notes();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut tmp = vec![0.0; self.bins];
        let mut next = vec![0.0; n];
        let mut lambda = 0.0;
        for _ in 0..1000 {
            self.mul(&v, &mut tmp);
            self.mul_t(&tmp, &mut next);
            let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            next.iter_mut().for_each(|x| *x /= norm);
            let done = (norm - lambda).abs() <= 1e-13 * norm;
            lambda = norm;
            std::mem::swap(&mut v, &mut next);
            if done {
                break;
            }
        }
        lambda
    }
}

impl Default for NoteDictionary {
    fn default() -> Self {
        Self::new(DEFAULT_HARMONICS, DEFAULT_DECAY)
    }
}
