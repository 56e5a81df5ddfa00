//! Linear soft-margin SVM trained by dual coordinate descent on the hinge
//! loss, one-vs-rest for more than one class.
//!
//! Features are centered on the training mean and augmented with a constant
//! bias feature of value 1, so the dual works with
//! `Q_ij = y_i y_j (<x_i - mu, x_j - mu> + 1)`. Every solve starts from a
//! precomputed Gram matrix; this keeps each epoch at `O(l^2)` regardless of
//! the feature dimension.

use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_MAX_EPOCHS: usize = 1000;

/// Stopping rule for the dual solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Stop once the largest projected-gradient magnitude in an epoch is
    /// below this.
    pub tolerance: f64,
    pub max_epochs: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_epochs: DEFAULT_MAX_EPOCHS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    /// Dual objective `1/2 a'Qa - sum(a)` after each epoch.
    pub objective_trace: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
}

/// Minimizes `1/2 a'Qa - sum(a)` subject to `0 <= a_i <= c`, where
/// `Q_ij = y_i y_j kernel_ij` and `kernel` is row-major `l × l`.
///
/// Coordinates are visited in index order every epoch.
pub fn solve_dual(kernel: &[f64], y: &[f64], c: f64, config: &SolverConfig) -> DualSolution {
    let l = y.len();
    debug_assert_eq!(kernel.len(), l * l);
    let mut alpha = vec![0.0; l];
    // grad = Q a - 1
    let mut grad = vec![-1.0f64; l];
    let mut objective_trace = Vec::new();
    let mut converged = false;
    let mut epochs = 0;

    while epochs < config.max_epochs {
        epochs += 1;
        let mut max_violation: f64 = 0.0;
        for i in 0..l {
            let g = grad[i];
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg == 0.0 {
                continue;
            }
            let qii = kernel[i * l + i];
            if qii <= 0.0 {
                continue;
            }
            let old = alpha[i];
            let new = (old - g / qii).clamp(0.0, c);
            let delta = new - old;
            if delta == 0.0 {
                continue;
            }
            alpha[i] = new;
            let row = &kernel[i * l..(i + 1) * l];
            let scale = delta * y[i];
            for (j, gj) in grad.iter_mut().enumerate() {
                *gj += scale * y[j] * row[j];
            }
        }
        // 1/2 a'Qa - sum a = 1/2 sum a_i (grad_i - 1)
        let objective = 0.5 * alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>();
        objective_trace.push(objective);
        if max_violation < config.tolerance {
            converged = true;
            break;
        }
    }

    DualSolution {
        alpha,
        objective_trace,
        epochs,
        converged,
    }
}

/// Row-major Gram matrix of inner products.
pub fn gram_matrix(rows: &[&[f64]]) -> Vec<f64> {
    let l = rows.len();
    let upper: Vec<Vec<f64>> = (0..l)
        .into_par_iter()
        .map(|i| (i..l).map(|j| dot(rows[i], rows[j])).collect())
        .collect();
    let mut gram = vec![0.0; l * l];
    for (i, row) in upper.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            let j = i + offset;
            gram[i * l + j] = v;
            gram[j * l + i] = v;
        }
    }
    gram
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Turns a raw Gram matrix into the centered, bias-augmented kernel
/// `<x_i - mu, x_j - mu> + 1` with `mu` the mean of the rows.
pub(crate) fn centered_bias_kernel(gram: &[f64], l: usize) -> Vec<f64> {
    let row_means: Vec<f64> = (0..l)
        .map(|i| gram[i * l..(i + 1) * l].iter().sum::<f64>() / l as f64)
        .collect();
    let grand = row_means.iter().sum::<f64>() / l as f64;
    let mut kernel = vec![0.0; l * l];
    for i in 0..l {
        for j in 0..l {
            kernel[i * l + j] = gram[i * l + j] - row_means[i] - row_means[j] + grand + 1.0;
        }
    }
    kernel
}

/// Per-feature z-scoring fitted on training rows. Constant features keep
/// scale 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[&[f64]]) -> Self {
        let d = rows.first().map_or(0, |r| r.len());
        let l = rows.len() as f64;
        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(*r) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= l);
        let mut var = vec![0.0; d];
        for r in rows {
            for ((v, x), m) in var.iter_mut().zip(*r).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|v| {
                let sd = (v / l).sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Self { mean, scale }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((x, m), s)| (x - m) / s)
            .collect()
    }
}

/// Training options shared by every fit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SvmSettings {
    /// Z-score features on the training rows before fitting.
    pub standardize: bool,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverStats {
    pub epochs: usize,
    pub converged: bool,
}

/// Trained one-vs-rest linear SVM.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SvmModel {
    pub(crate) classes: Vec<String>,
    pub(crate) weights: Vec<Vec<f64>>,
    pub(crate) biases: Vec<f64>,
    /// Training mean subtracted before scoring.
    pub(crate) offset: Vec<f64>,
    pub(crate) scaler: Option<Standardizer>,
    pub(crate) c: f64,
    pub(crate) ref_size: usize,
    pub(crate) stats: Vec<SolverStats>,
}

impl SvmModel {
    /// Class names in lexicographic order; score rows follow this order.
    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    /// One weight vector per class over the concatenated feature space.
    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn ref_size(&self) -> usize {
        self.ref_size
    }

    pub fn dimension(&self) -> usize {
        self.offset.len()
    }

    pub fn solver_stats(&self) -> &[SolverStats] {
        &self.stats
    }

    /// One-vs-rest scores of a raw feature row.
    pub fn decision_values(&self, features: &[f64]) -> Vec<f64> {
        let scaled;
        let x = match &self.scaler {
            Some(s) => {
                scaled = s.transform(features);
                &scaled[..]
            }
            None => features,
        };
        let centered: Vec<f64> = x.iter().zip(&self.offset).map(|(a, m)| a - m).collect();
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| dot(w, &centered) + b)
            .collect()
    }

    /// Index into [`classes`](Self::classes) of the highest score. Ties go to
    /// the lexicographically smallest class.
    pub fn predict_index(&self, features: &[f64]) -> usize {
        let scores = self.decision_values(features);
        let mut best = 0;
        for (k, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = k;
            }
        }
        best
    }
}

/// Fits a one-vs-rest model on `rows` with class indices `labels`.
///
/// `raw_gram` is the Gram matrix of `rows`; with standardization it is
/// ignored and recomputed from the z-scored rows.
pub(crate) fn fit(
    rows: &[&[f64]],
    labels: &[usize],
    classes: &[String],
    raw_gram: Option<&[f64]>,
    c: f64,
    ref_size: usize,
    settings: &SvmSettings,
) -> SvmModel {
    let config = &settings.solver;
    let l = rows.len();
    let d = rows.first().map_or(0, |r| r.len());

    let scaler = settings.standardize.then(|| Standardizer::fit(rows));
    let transformed: Option<Vec<Vec<f64>>> = scaler.as_ref().map(|s| rows.iter().map(|r| s.transform(r)).collect());
    let rows: Vec<&[f64]> = match &transformed {
        Some(t) => t.iter().map(Vec::as_slice).collect(),
        None => rows.to_vec(),
    };
    let owned_gram;
    let gram = match (raw_gram, &transformed) {
        (Some(g), None) => g,
        _ => {
            owned_gram = gram_matrix(&rows);
            &owned_gram[..]
        }
    };
    let kernel = centered_bias_kernel(gram, l);

    let mut offset = vec![0.0; d];
    for r in &rows {
        for (m, x) in offset.iter_mut().zip(*r) {
            *m += x;
        }
    }
    offset.iter_mut().for_each(|m| *m /= l as f64);

    let mut weights = Vec::with_capacity(classes.len());
    let mut biases = Vec::with_capacity(classes.len());
    let mut stats = Vec::with_capacity(classes.len());
    for class in 0..classes.len() {
        let y: Vec<f64> = labels.iter().map(|&k| if k == class { 1.0 } else { -1.0 }).collect();
        let solution = solve_dual(&kernel, &y, c, config);
        let mut w = vec![0.0; d];
        let mut b = 0.0;
        for ((row, &a), &yi) in rows.iter().zip(&solution.alpha).zip(&y) {
            if a == 0.0 {
                continue;
            }
            let coef = a * yi;
            for ((wk, x), m) in w.iter_mut().zip(*row).zip(&offset) {
                *wk += coef * (x - m);
            }
            b += coef;
        }
        weights.push(w);
        biases.push(b);
        stats.push(SolverStats {
            epochs: solution.epochs,
            converged: solution.converged,
        });
    }

    SvmModel {
        classes: classes.to_vec(),
        weights,
        biases,
        offset,
        scaler,
        c,
        ref_size,
        stats,
    }
}
