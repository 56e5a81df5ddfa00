//! Random modular networks.
//!
//! Nodes are split into equal contiguous modules. A within-module edge draws
//! from `N(1, 0.5^2)` with probability `r` and from `N(0, 0.5^2)` otherwise;
//! a between-module edge uses probability `1 - r` for the `N(1, 0.5^2)`
//! branch. Negative weights are clipped to 0.
//!
//! Edges are visited row-major over `i < j`. Each edge consumes one uniform
//! for the branch coin and one uniform that is mapped to a normal variate
//! through the inverse normal CDF, so a seed fixes the network on every
//! platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::graph::WeightedNetwork;

pub const SIGNAL_MEAN: f64 = 1.0;
pub const NOISE_MEAN: f64 = 0.0;
pub const WEIGHT_SD: f64 = 0.5;

/// Group labels of the two-group benchmark.
pub const GROUP_LABELS: [&str; 2] = ["L1", "L2"];

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("{node_count} nodes cannot be split evenly into {module_count} modules")]
    UnevenModules { node_count: usize, module_count: usize },
    #[error("module count must be at least 1")]
    NoModules,
    #[error("a network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("within-module probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("per_group must be at least 1")]
    EmptyGroups,
    #[error("at least one network size is required")]
    NoSizes,
}

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModularSpec {
    pub node_count: usize,
    pub module_count: usize,
    pub within_probability: f64,
    pub seed: u64,
}

impl ModularSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(SimError::TooFewNodes(self.node_count));
        }
        if self.module_count == 0 {
            return Err(SimError::NoModules);
        }
        if !self.node_count.is_multiple_of(self.module_count) {
            return Err(SimError::UnevenModules {
                node_count: self.node_count,
                module_count: self.module_count,
            });
        }
        if !(0.0..=1.0).contains(&self.within_probability) {
            return Err(SimError::BadProbability(self.within_probability));
        }
        Ok(())
    }

    pub fn module_size(&self) -> usize {
        self.node_count / self.module_count
    }

    pub fn module_of(&self, node: usize) -> usize {
        node / self.module_size()
    }
}

/// A generated network with the bookkeeping needed to check the generator.
#[derive(Debug, Clone)]
pub struct ModularNetwork {
    pub network: WeightedNetwork,
    /// Module index of each node.
    pub modules: Vec<usize>,
    /// For each `i < j` edge in row-major order, whether the weight came from
    /// the `N(1, 0.5^2)` branch.
    pub signal_branch: Vec<bool>,
}

/// Maps 53 random bits to the open interval (0, 1).
fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

pub fn generate_detailed(spec: &ModularSpec) -> Result<ModularNetwork> {
    spec.validate()?;
    let n = spec.node_count;
    let standard = Normal::new(0.0, 1.0).expect("unit normal is valid");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let modules: Vec<usize> = (0..n).map(|v| spec.module_of(v)).collect();

    let mut entries = Vec::with_capacity(n * (n - 1) / 2);
    let mut signal_branch = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let signal_probability = if modules[i] == modules[j] {
                spec.within_probability
            } else {
                1.0 - spec.within_probability
            };
            let coin: f64 = rng.random();
            let signal = coin < signal_probability;
            let z = standard.inverse_cdf(open_unit(&mut rng));
            let mean = if signal { SIGNAL_MEAN } else { NOISE_MEAN };
            let w = (mean + WEIGHT_SD * z).max(0.0);
            entries.push((i, j, w));
            signal_branch.push(signal);
        }
    }
    let network = WeightedNetwork::from_edge_list(&entries, n).expect("generated edges are valid");
    Ok(ModularNetwork {
        network,
        modules,
        signal_branch,
    })
}

/// Generates one random modular network.
pub fn generate(spec: &ModularSpec) -> Result<WeightedNetwork> {
    generate_detailed(spec).map(|m| m.network)
}

/// Two groups of modular networks that differ in module count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSpec {
    pub sizes: Vec<usize>,
    pub modules: (usize, usize),
    pub within_probability: f64,
    /// Networks per group for each size.
    pub per_group: usize,
    pub seed: u64,
}

impl BenchmarkSpec {
    /// Every network at one size, `per_group` per group.
    pub fn same_size(node_count: usize, within_probability: f64, per_group: usize, seed: u64) -> Self {
        Self {
            sizes: vec![node_count],
            modules: (3, 5),
            within_probability,
            per_group,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkDataset {
    pub networks: Vec<WeightedNetwork>,
    pub labels: Vec<String>,
    /// Generator parameters of each network, parallel to `networks`.
    pub specs: Vec<ModularSpec>,
}

/// Generates group L1 (first module count) then group L2, each holding
/// `per_group` networks for every size. Per-network seeds are drawn in order
/// from a stream keyed by the benchmark seed.
pub fn generate_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkDataset> {
    if spec.per_group == 0 {
        return Err(SimError::EmptyGroups);
    }
    if spec.sizes.is_empty() {
        return Err(SimError::NoSizes);
    }
    let mut seeds = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut specs = Vec::new();
    let mut labels = Vec::new();
    for (group, module_count) in [spec.modules.0, spec.modules.1].into_iter().enumerate() {
        for &node_count in &spec.sizes {
            for _ in 0..spec.per_group {
                let s = ModularSpec {
                    node_count,
                    module_count,
                    within_probability: spec.within_probability,
                    seed: seeds.next_u64(),
                };
                s.validate()?;
                specs.push(s);
                labels.push(GROUP_LABELS[group].to_string());
            }
        }
    }
    let networks = specs.par_iter().map(generate).collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkDataset {
        networks,
        labels,
        specs,
    })
}
