//! TopVS vectors: sampled birth and death quantile functions at a shared
//! reference network size.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::barcode::{counts_for_size, decompose, BirthDeathDecomposition};
use crate::graph::WeightedNetwork;
use crate::wasserstein::{pseudoinverse_sample, Exponent, SortedValueSet, WassersteinError};

/// Smallest reference size with a nonempty deaths block.
pub const MIN_REF_SIZE: usize = 3;

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("reference size must be at least {MIN_REF_SIZE}, got {0}")]
    RefSizeTooSmall(usize),
    #[error("a {0}-node network has no cycles, so its death set is empty and cannot be embedded")]
    NoDeaths(usize),
    #[error("reference size {ref_size} is below the largest network size {max_node_count}")]
    RefSizeBelowMax { ref_size: usize, max_node_count: usize },
    #[error("cannot embed an empty dataset")]
    EmptyDataset,
    #[error("{block} block has length {actual}, expected {expected} for reference size {ref_size}")]
    BlockLength {
        block: &'static str,
        actual: usize,
        expected: usize,
        ref_size: usize,
    },
    #[error("{block} block is not ascending at position {position}")]
    NotAscending { block: &'static str, position: usize },
    #[error(transparent)]
    Wasserstein(#[from] WassersteinError),
}

pub type Result<T> = std::result::Result<T, EmbedError>;

/// A point of TopVS: `m = ref_size - 1` sampled births followed by
/// `n = 1 + ref_size (ref_size - 3) / 2` sampled deaths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologicalVector {
    ref_size: usize,
    births_block: Vec<f64>,
    deaths_block: Vec<f64>,
}

impl TopologicalVector {
    pub fn new(ref_size: usize, births_block: Vec<f64>, deaths_block: Vec<f64>) -> Result<Self> {
        if ref_size < MIN_REF_SIZE {
            return Err(EmbedError::RefSizeTooSmall(ref_size));
        }
        let (m, n) = counts_for_size(ref_size);
        for (block, values, expected) in [("births", &births_block, m), ("deaths", &deaths_block, n)] {
            if values.len() != expected {
                return Err(EmbedError::BlockLength {
                    block,
                    actual: values.len(),
                    expected,
                    ref_size,
                });
            }
            if let Some(pos) = values.windows(2).position(|w| w[0].partial_cmp(&w[1]).is_none_or(|o| o.is_gt())) {
                return Err(EmbedError::NotAscending {
                    block,
                    position: pos + 1,
                });
            }
        }
        Ok(Self {
            ref_size,
            births_block,
            deaths_block,
        })
    }

    pub(crate) fn from_blocks_unchecked(ref_size: usize, births_block: Vec<f64>, deaths_block: Vec<f64>) -> Self {
        debug_assert_eq!(counts_for_size(ref_size), (births_block.len(), deaths_block.len()));
        Self {
            ref_size,
            births_block,
            deaths_block,
        }
    }

    pub fn ref_size(&self) -> usize {
        self.ref_size
    }

    pub fn births(&self) -> &[f64] {
        &self.births_block
    }

    pub fn deaths(&self) -> &[f64] {
        &self.deaths_block
    }

    /// `m + n`.
    pub fn dimension(&self) -> usize {
        self.births_block.len() + self.deaths_block.len()
    }

    /// Births block followed by deaths block; the classifier's feature vector.
    pub fn concatenated(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dimension());
        out.extend_from_slice(&self.births_block);
        out.extend_from_slice(&self.deaths_block);
        out
    }

    /// Iterates the concatenated coordinates without allocating.
    pub fn coordinates(&self) -> impl Iterator<Item = f64> + '_ {
        self.births_block.iter().chain(&self.deaths_block).copied()
    }
}

/// Samples a decomposition's birth and death sets at a reference size.
pub fn embed_decomposition(decomposition: &BirthDeathDecomposition, ref_size: usize) -> Result<TopologicalVector> {
    if ref_size < MIN_REF_SIZE {
        return Err(EmbedError::RefSizeTooSmall(ref_size));
    }
    if decomposition.deaths.is_empty() {
        return Err(EmbedError::NoDeaths(decomposition.node_count));
    }
    let (m, n) = counts_for_size(ref_size);
    let births = SortedValueSet::new(decomposition.births.clone())?;
    let deaths = SortedValueSet::new(decomposition.deaths.clone())?;
    Ok(TopologicalVector::from_blocks_unchecked(
        ref_size,
        pseudoinverse_sample(&births, m)?,
        pseudoinverse_sample(&deaths, n)?,
    ))
}

/// Embeds one network. With `ref_size == node_count` the blocks are the raw
/// sorted birth and death sets.
pub fn embed(net: &WeightedNetwork, ref_size: usize) -> Result<TopologicalVector> {
    if ref_size < MIN_REF_SIZE {
        return Err(EmbedError::RefSizeTooSmall(ref_size));
    }
    if net.node_count() < MIN_REF_SIZE {
        return Err(EmbedError::NoDeaths(net.node_count()));
    }
    embed_decomposition(&decompose(net), ref_size)
}

/// A dataset embedded at one reference size.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEmbedding {
    pub vectors: Vec<TopologicalVector>,
    pub ref_size: usize,
    pub max_node_count: usize,
    /// True when `ref_size` was set above the largest network, so every
    /// network is upsampled.
    pub exceeds_max: bool,
}

/// Embeds every network at the largest node count in the dataset.
pub fn embed_dataset(nets: &[WeightedNetwork]) -> Result<Vec<TopologicalVector>> {
    embed_dataset_with(nets, None).map(|e| e.vectors)
}

/// Embeds every network at `ref_size`, defaulting to the largest node count.
/// An explicit `ref_size` may not be below that maximum.
pub fn embed_dataset_with(nets: &[WeightedNetwork], ref_size: Option<usize>) -> Result<DatasetEmbedding> {
    let max_node_count = nets
        .iter()
        .map(WeightedNetwork::node_count)
        .max()
        .ok_or(EmbedError::EmptyDataset)?;
    let ref_size = ref_size.unwrap_or(max_node_count);
    if ref_size < max_node_count {
        return Err(EmbedError::RefSizeBelowMax {
            ref_size,
            max_node_count,
        });
    }
    let vectors = nets
        .par_iter()
        .map(|net| embed(net, ref_size))
        .collect::<Result<Vec<_>>>()?;
    Ok(DatasetEmbedding {
        vectors,
        ref_size,
        max_node_count,
        exceeds_max: ref_size > max_node_count,
    })
}

/// Splits a vector back into its sorted births and deaths.
pub fn reconstruct_barcode(vector: &TopologicalVector) -> (Vec<f64>, Vec<f64>) {
    (vector.births_block.clone(), vector.deaths_block.clone())
}

/// `p`-norm distance between two equal-length coordinate sequences.
pub fn lp_distance(a: &[f64], b: &[f64], p: Exponent) -> f64 {
    assert_eq!(a.len(), b.len(), "lp_distance needs equal lengths");
    p.norm(a.iter().zip(b).map(|(x, y)| x - y))
}
