//! Stratified nested cross-validation with a grid search over C.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::svm::{self, SvmSettings};
use super::{check_c, check_min_class_size, class_counts, ClassifyError, LabeledDataset, Result};

pub const DEFAULT_C_GRID: [f64; 3] = [0.01, 1.0, 100.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvConfig {
    pub outer_folds: usize,
    pub inner_folds: usize,
    pub c_grid: Vec<f64>,
    pub seed: u64,
    pub svm: SvmSettings,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            outer_folds: 2,
            inner_folds: 5,
            c_grid: DEFAULT_C_GRID.to_vec(),
            seed: 0,
            svm: SvmSettings::default(),
        }
    }
}

impl CvConfig {
    fn validate(&self) -> Result<()> {
        for folds in [self.outer_folds, self.inner_folds] {
            if folds < 2 {
                return Err(ClassifyError::TooFewFolds(folds));
            }
        }
        if self.c_grid.is_empty() {
            return Err(ClassifyError::EmptyGrid);
        }
        self.c_grid.iter().try_for_each(|&c| check_c(c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    /// Mean of the outer-fold accuracies.
    pub accuracy: f64,
    pub fold_accuracies: Vec<f64>,
    /// C selected by the inner loop for each outer fold.
    pub chosen_c: Vec<f64>,
    /// Mean inner accuracy per grid value, for each outer fold.
    pub inner_accuracies: Vec<Vec<f64>>,
    pub classes: Vec<String>,
    /// Outer-fold test predictions; rows are true classes, columns predicted.
    pub confusion_counts: Vec<Vec<usize>>,
    /// `confusion_counts` with each row divided by its sum.
    pub confusion: Vec<Vec<f64>>,
    pub outer_folds: usize,
    pub inner_folds: usize,
    pub c_grid: Vec<f64>,
    pub seed: u64,
    pub standardized: bool,
}

/// Splits sample indices into `folds` groups that preserve class proportions.
///
/// Each class's members are shuffled, then dealt round-robin to the folds,
/// continuing from where the previous class stopped. Fold contents are
/// returned in ascending index order.
pub fn stratified_folds(labels: &[usize], class_names: &[String], folds: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for (class, name) in class_names.iter().enumerate() {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < folds {
            return Err(ClassifyError::ClassTooSmall {
                class: name.clone(),
                count: members.len(),
                required: folds,
            });
        }
        members.shuffle(rng);
        for m in members {
            out[next].push(m);
            next = (next + 1) % folds;
        }
    }
    out.iter_mut().for_each(|f| f.sort_unstable());
    Ok(out)
}

/// Like [`stratified_folds`] over a subset, but classes with fewer members
/// than folds are tolerated. The caller guarantees `subset.len() >= folds`.
fn subset_folds(subset: &[usize], labels: &[usize], n_classes: usize, folds: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for class in 0..n_classes {
        let mut members: Vec<usize> = subset.iter().copied().filter(|&i| labels[i] == class).collect();
        members.shuffle(rng);
        for m in members {
            out[next].push(m);
            next = (next + 1) % folds;
        }
    }
    out.iter_mut().for_each(|f| f.sort_unstable());
    out
}

fn complement(all: usize, excluded: &[usize]) -> Vec<usize> {
    let mut mask = vec![true; all];
    excluded.iter().for_each(|&i| mask[i] = false);
    (0..all).filter(|&i| mask[i]).collect()
}

/// Precomputed state shared by every fit on one feature matrix.
pub(crate) struct CvEngine<'a> {
    rows: Vec<&'a [f64]>,
    /// Full Gram matrix of `rows`, absent when features are standardized
    /// per fold.
    gram: Option<Vec<f64>>,
    classes: Vec<String>,
    ref_size: usize,
}

impl<'a> CvEngine<'a> {
    pub(crate) fn new(rows: &'a [Vec<f64>], classes: Vec<String>, ref_size: usize, settings: &SvmSettings) -> Self {
        let rows: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let gram = (!settings.standardize).then(|| svm::gram_matrix(&rows));
        Self {
            rows,
            gram,
            classes,
            ref_size,
        }
    }

    fn fit(&self, train: &[usize], labels: &[usize], c: f64, settings: &SvmSettings) -> svm::SvmModel {
        let rows: Vec<&[f64]> = train.iter().map(|&i| self.rows[i]).collect();
        let y: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
        let n = self.rows.len();
        let sub_gram = self.gram.as_ref().map(|g| {
            let mut sub = Vec::with_capacity(train.len() * train.len());
            for &i in train {
                for &j in train {
                    sub.push(g[i * n + j]);
                }
            }
            sub
        });
        svm::fit(&rows, &y, &self.classes, sub_gram.as_deref(), c, self.ref_size, settings)
    }

    /// Runs nested CV for one label assignment.
    pub(crate) fn run(&self, labels: &[usize], config: &CvConfig) -> Result<CvReport> {
        config.validate()?;
        let n = self.rows.len();
        let k = self.classes.len();
        // Stream 0 drives the outer split, stream 1 + f the inner split of
        // outer fold f.
        let mut outer_rng = ChaCha8Rng::seed_from_u64(config.seed);
        outer_rng.set_stream(0);
        let outer = stratified_folds(labels, &self.classes, config.outer_folds, &mut outer_rng)?;

        let mut fold_accuracies = Vec::with_capacity(config.outer_folds);
        let mut chosen_c = Vec::with_capacity(config.outer_folds);
        let mut inner_accuracies = Vec::with_capacity(config.outer_folds);
        let mut confusion_counts = vec![vec![0usize; k]; k];

        for (f, test) in outer.iter().enumerate() {
            let train = complement(n, test);
            if train.len() < config.inner_folds {
                return Err(ClassifyError::InnerTooSmall {
                    outer_fold: f,
                    size: train.len(),
                    folds: config.inner_folds,
                });
            }
            let mut inner_rng = ChaCha8Rng::seed_from_u64(config.seed);
            inner_rng.set_stream(1 + f as u64);
            let inner = subset_folds(&train, labels, k, config.inner_folds, &mut inner_rng);

            let scores: Vec<f64> = config
                .c_grid
                .iter()
                .map(|&c| {
                    let total: f64 = inner
                        .iter()
                        .map(|validation| {
                            let fit_on: Vec<usize> = train.iter().copied().filter(|i| validation.binary_search(i).is_err()).collect();
                            let model = self.fit(&fit_on, labels, c, &config.svm);
                            let correct = validation
                                .iter()
                                .filter(|&&i| model.predict_index(self.rows[i]) == labels[i])
                                .count();
                            correct as f64 / validation.len() as f64
                        })
                        .sum();
                    total / inner.len() as f64
                })
                .collect();

            let mut best = 0;
            for (g, &s) in scores.iter().enumerate() {
                let better = s > scores[best] || (s == scores[best] && config.c_grid[g] < config.c_grid[best]);
                if better {
                    best = g;
                }
            }
            let c = config.c_grid[best];
            let model = self.fit(&train, labels, c, &config.svm);
            let mut correct = 0;
            for &i in test {
                let predicted = model.predict_index(self.rows[i]);
                confusion_counts[labels[i]][predicted] += 1;
                if predicted == labels[i] {
                    correct += 1;
                }
            }
            fold_accuracies.push(correct as f64 / test.len() as f64);
            chosen_c.push(c);
            inner_accuracies.push(scores);
        }

        let accuracy = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
        let confusion = confusion_counts
            .iter()
            .map(|row| {
                let total: usize = row.iter().sum();
                row.iter()
                    .map(|&x| if total == 0 { 0.0 } else { x as f64 / total as f64 })
                    .collect()
            })
            .collect();
        Ok(CvReport {
            accuracy,
            fold_accuracies,
            chosen_c,
            inner_accuracies,
            classes: self.classes.clone(),
            confusion_counts,
            confusion,
            outer_folds: config.outer_folds,
            inner_folds: config.inner_folds,
            c_grid: config.c_grid.clone(),
            seed: config.seed,
            standardized: config.svm.standardize,
        })
    }
}

/// Nested cross-validation: the outer stratified split estimates accuracy;
/// inside each outer training set a stratified inner split picks the C with
/// the best mean accuracy (ties go to the smallest C).
pub fn nested_cv(data: &LabeledDataset, config: &CvConfig) -> Result<CvReport> {
    config.validate()?;
    check_min_class_size(&class_counts(data.labels()), config.outer_folds)?;
    let rows = data.feature_rows();
    let engine = CvEngine::new(&rows, data.classes(), data.ref_size(), &config.svm);
    engine.run(&data.class_indices(), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|c| format!("c{c}")).collect()
    }

    #[test]
    fn folds_partition_and_stratify() {
        let labels: Vec<usize> = (0..23).map(|i| if i < 13 { 0 } else { 1 }).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let folds = stratified_folds(&labels, &names(2), 4, &mut rng).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        for f in &folds {
            let zeros = f.iter().filter(|&&i| labels[i] == 0).count();
            let ones = f.len() - zeros;
            assert!((zeros as f64 - 13.0 / 4.0).abs() <= 1.0);
            assert!((ones as f64 - 10.0 / 4.0).abs() <= 1.0);
        }
        let sizes: Vec<_> = folds.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn folds_reject_small_class() {
        let labels = vec![0, 0, 0, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            stratified_folds(&labels, &names(2), 2, &mut rng).unwrap_err(),
            ClassifyError::ClassTooSmall { class: "c1".into(), count: 1, required: 2 }
        );
    }

    #[test]
    fn folds_depend_on_seed_only() {
        let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
        let a = stratified_folds(&labels, &names(2), 2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = stratified_folds(&labels, &names(2), 2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let c = stratified_folds(&labels, &names(2), 2, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn config_validation() {
        let bad = CvConfig {
            outer_folds: 1,
            ..CvConfig::default()
        };
        assert_eq!(bad.validate().unwrap_err(), ClassifyError::TooFewFolds(1));
        let bad = CvConfig {
            c_grid: vec![],
            ..CvConfig::default()
        };
        assert_eq!(bad.validate().unwrap_err(), ClassifyError::EmptyGrid);
        let bad = CvConfig {
            c_grid: vec![1.0, -1.0],
            ..CvConfig::default()
        };
        assert_eq!(bad.validate().unwrap_err(), ClassifyError::InvalidC(-1.0));
    }
}
