//! Linear SVM classification of TopVS vectors with stratified nested
//! cross-validation and a label-permutation significance test.

mod cv;
mod permutation;
pub mod svm;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::embed::TopologicalVector;

pub use cv::{nested_cv, stratified_folds, CvConfig, CvReport, DEFAULT_C_GRID};
pub use permutation::{permutation_test, PermutationReport};
pub use svm::{SolverConfig, SvmModel, SvmSettings};

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("{vectors} vectors but {labels} labels")]
    LengthMismatch { vectors: usize, labels: usize },
    #[error("vector {index} has reference size {actual}, expected {expected}")]
    RefSizeMismatch {
        index: usize,
        expected: usize,
        actual: usize,
    },
    #[error("need at least 2 distinct labels, found {0}")]
    TooFewClasses(usize),
    #[error("class {class:?} has {count} member(s), at least {required} required")]
    ClassTooSmall {
        class: String,
        count: usize,
        required: usize,
    },
    #[error("regularization C must be positive and finite, got {0}")]
    InvalidC(f64),
    #[error("the C grid is empty")]
    EmptyGrid,
    #[error("fold count must be at least 2, got {0}")]
    TooFewFolds(usize),
    #[error("inner CV needs at least {folds} training samples, outer fold {outer_fold} has {size}")]
    InnerTooSmall {
        outer_fold: usize,
        size: usize,
        folds: usize,
    },
    #[error("vector has dimension {actual} (reference size {ref_size}), model expects {expected}")]
    DimensionMismatch {
        expected: usize,
        actual: usize,
        ref_size: usize,
    },
    #[error("permutation trials must be at least 1")]
    ZeroTrials,
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

/// TopVS vectors with parallel class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    vectors: Vec<TopologicalVector>,
    labels: Vec<String>,
}

impl LabeledDataset {
    /// Requires equal lengths, one shared reference size, at least two classes
    /// and at least two members per class.
    pub fn new(vectors: Vec<TopologicalVector>, labels: Vec<String>) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(ClassifyError::LengthMismatch {
                vectors: vectors.len(),
                labels: labels.len(),
            });
        }
        if let Some(first) = vectors.first() {
            let expected = first.ref_size();
            if let Some((index, v)) = vectors.iter().enumerate().find(|(_, v)| v.ref_size() != expected) {
                return Err(ClassifyError::RefSizeMismatch {
                    index,
                    expected,
                    actual: v.ref_size(),
                });
            }
        }
        let counts = class_counts(&labels);
        if counts.len() < 2 {
            return Err(ClassifyError::TooFewClasses(counts.len()));
        }
        check_min_class_size(&counts, 2)?;
        Ok(Self { vectors, labels })
    }

    pub fn vectors(&self) -> &[TopologicalVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ref_size(&self) -> usize {
        self.vectors[0].ref_size()
    }

    /// Distinct labels in lexicographic order.
    pub fn classes(&self) -> Vec<String> {
        class_counts(&self.labels).into_keys().collect()
    }

    /// Label of each sample as an index into [`classes`](Self::classes).
    pub fn class_indices(&self) -> Vec<usize> {
        let classes = self.classes();
        self.labels
            .iter()
            .map(|l| classes.binary_search(l).expect("label is a class"))
            .collect()
    }

    /// Same vectors with a new label assignment.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        Self::new(self.vectors.clone(), labels)
    }

    pub(crate) fn feature_rows(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(TopologicalVector::concatenated).collect()
    }
}

fn class_counts(labels: &[String]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for l in labels {
        *counts.entry(l.clone()).or_insert(0) += 1;
    }
    counts
}

fn check_min_class_size(counts: &BTreeMap<String, usize>, required: usize) -> Result<()> {
    match counts.iter().find(|(_, &n)| n < required) {
        Some((class, &count)) => Err(ClassifyError::ClassTooSmall {
            class: class.clone(),
            count,
            required,
        }),
        None => Ok(()),
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(ClassifyError::InvalidC(c))
    }
}

/// Trains a one-vs-rest linear SVM on the whole dataset.
pub fn svm_train(data: &LabeledDataset, c: f64) -> Result<SvmModel> {
    svm_train_with(data, c, &SvmSettings::default())
}

pub fn svm_train_with(data: &LabeledDataset, c: f64, settings: &SvmSettings) -> Result<SvmModel> {
    check_c(c)?;
    let rows = data.feature_rows();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(svm::fit(
        &refs,
        &data.class_indices(),
        &data.classes(),
        None,
        c,
        data.ref_size(),
        settings,
    ))
}

/// Predicts the class of one vector.
pub fn svm_predict(model: &SvmModel, vector: &TopologicalVector) -> Result<String> {
    if vector.ref_size() != model.ref_size() || vector.dimension() != model.dimension() {
        return Err(ClassifyError::DimensionMismatch {
            expected: model.dimension(),
            actual: vector.dimension(),
            ref_size: vector.ref_size(),
        });
    }
    let k = model.predict_index(&vector.concatenated());
    Ok(model.classes()[k].clone())
}
