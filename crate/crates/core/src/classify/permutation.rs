//! Label-permutation test for nested CV accuracy.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::cv::{CvConfig, CvEngine, CvReport};
use super::{check_min_class_size, class_counts, ClassifyError, LabeledDataset, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationReport {
    pub observed_accuracy: f64,
    pub permutation_accuracies: Vec<f64>,
    /// Fraction of permutations whose accuracy is strictly above the observed
    /// accuracy.
    pub p_value: f64,
    pub permutation_count: usize,
    pub rng_seed: u64,
    pub observed: CvReport,
}

/// Runs nested CV on the true labels and on `trials` label permutations.
///
/// Trial `t` draws from ChaCha stream `t` of `seed`: first the label shuffle,
/// then a fresh CV seed, so each trial re-randomizes its folds and the result
/// does not depend on how trials are scheduled across threads.
pub fn permutation_test(data: &LabeledDataset, trials: usize, seed: u64, config: &CvConfig) -> Result<PermutationReport> {
    if trials == 0 {
        return Err(ClassifyError::ZeroTrials);
    }
    check_min_class_size(&class_counts(data.labels()), config.outer_folds)?;
    let rows = data.feature_rows();
    let engine = CvEngine::new(&rows, data.classes(), data.ref_size(), &config.svm);
    let labels = data.class_indices();
    let observed = engine.run(&labels, config)?;

    let permutation_accuracies = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let mut shuffled = labels.clone();
            shuffled.shuffle(&mut rng);
            let trial_config = CvConfig {
                seed: rng.next_u64(),
                ..config.clone()
            };
            engine.run(&shuffled, &trial_config).map(|r| r.accuracy)
        })
        .collect::<Result<Vec<f64>>>()?;

    let exceed = permutation_accuracies
        .iter()
        .filter(|&&a| a > observed.accuracy)
        .count();
    Ok(PermutationReport {
        observed_accuracy: observed.accuracy,
        p_value: exceed as f64 / trials as f64,
        permutation_count: trials,
        permutation_accuracies,
        rng_seed: seed,
        observed,
    })
}
