//! Topological classification of weighted networks.
//!
//! A network is filtered by thresholding its edge weights. The resulting
//! 1-dimensional barcode splits the edge weights into births (the maximum
//! spanning tree) and deaths (everything else). Sampling the quantile
//! functions of both sets at a shared reference size gives a vector whose
//! `p`-norm distance is a weighted combination of closed-form
//! `p`-Wasserstein distances, so ordinary linear classifiers work directly
//! on barcodes.
//!
//! Modules, bottom-up: [`graph`] (data model and ingestion), [`barcode`]
//! (decomposition and Betti curves), [`wasserstein`] (distances),
//! [`embed`] (vectors), [`simgen`] (modular network simulator),
//! [`classify`] (SVM, nested CV, permutation test) and [`cli`].

pub mod barcode;
pub mod classify;
pub mod cli;
pub mod embed;
pub mod graph;
pub mod simgen;
pub mod wasserstein;

pub use barcode::{betti_curves, counts_for_size, decompose, BettiCurve, BirthDeathDecomposition};
pub use classify::{nested_cv, permutation_test, svm_predict, svm_train, CvConfig, CvReport, LabeledDataset, PermutationReport, SvmModel};
pub use embed::{embed, embed_dataset, reconstruct_barcode, TopologicalVector};
pub use graph::WeightedNetwork;
pub use simgen::{generate, generate_benchmark, BenchmarkSpec, ModularSpec};
pub use wasserstein::{
    barcode_mean, ot_oracle, product_metric, pseudoinverse_sample, wasserstein_approx, wasserstein_exact, Exponent, SortedValueSet,
};
