//! Closed-form p-Wasserstein distances between 1-dimensional barcodes.
//!
//! A birth or death set is a uniform point mass on its values, so optimal
//! transport between two such sets reduces to comparing their quantile
//! functions. With `k` equally spaced quantile levels the distance is
//!
//! ```text
//! W_hat = ( 1/k^p * sum_j |Fa^-1(j/k) - Fb^-1(j/k)|^p )^(1/p)
//! ```
//!
//! which is the plain `p`-norm of the sampled difference divided by `k`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::embed::TopologicalVector;

/// Largest set size the brute-force transport oracle will enumerate.
pub const ORACLE_MAX_SIZE: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum WassersteinError {
    #[error("value set is empty")]
    EmptySet,
    #[error("value set is not ascending at position {0}")]
    NotAscending(usize),
    #[error("value set holds a non-finite value at position {0}")]
    NonFinite(usize),
    #[error("sample count k must be at least 1")]
    ZeroSamples,
    #[error("exact distance needs equal cardinalities, got {left} and {right}; use the approximated form")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("oracle is limited to sets of size {ORACLE_MAX_SIZE}, got {0}")]
    OracleTooLarge(usize),
    #[error("vectors were built at different reference sizes {left} and {right}")]
    RefSizeMismatch { left: usize, right: usize },
    #[error("exponent p must be >= 1 or inf, got {0}")]
    InvalidExponent(String),
    #[error("cannot average an empty list of vectors")]
    EmptyVectorList,
}

pub type Result<T> = std::result::Result<T, WassersteinError>;

/// The exponent `p` of a p-Wasserstein distance or p-norm; `p = inf` is the
/// max metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(WassersteinError::InvalidExponent(p.to_string()))
        }
    }

    /// `p`-norm of a sequence of differences.
    pub fn norm<I: IntoIterator<Item = f64>>(self, diffs: I) -> f64 {
        let abs = diffs.into_iter().map(f64::abs);
        match self {
            Exponent::Infinity => abs.fold(0.0, f64::max),
            Exponent::Finite(1.0) => abs.sum(),
            Exponent::Finite(2.0) => abs.map(|d| d * d).sum::<f64>().sqrt(),
            Exponent::Finite(p) => abs.map(|d| d.powf(p)).sum::<f64>().powf(p.recip()),
        }
    }

    /// Combines two nonnegative partial norms: `(x^p + y^p)^(1/p)` or `max(x, y)`.
    pub fn combine(self, x: f64, y: f64) -> f64 {
        self.norm([x, y])
    }
}

impl Default for Exponent {
    fn default() -> Self {
        Exponent::Finite(2.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = WassersteinError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(Exponent::Infinity),
            other => other
                .parse::<f64>()
                .map_err(|_| WassersteinError::InvalidExponent(s.to_string()))
                .and_then(Exponent::new),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// A nonempty ascending list of finite values, viewed as a uniform point
/// mass distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedValueSet(Vec<f64>);

impl SortedValueSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(WassersteinError::EmptySet);
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(WassersteinError::NonFinite(pos));
        }
        if let Some(pos) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(WassersteinError::NotAscending(pos + 1));
        }
        Ok(Self(values))
    }

    /// Sorts the values first.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(WassersteinError::NonFinite(pos));
        }
        values.sort_by(f64::total_cmp);
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Quantile function `F^-1(j/k)` for `j = 1..=k`: the smallest value whose
    /// empirical CDF reaches `j/k`, i.e. index `ceil(j N / k) - 1`.
    pub fn quantile(&self, j: usize, k: usize) -> f64 {
        let n = self.0.len() as u128;
        let (j, k) = (j as u128, k as u128);
        let idx = (j * n).div_ceil(k) - 1;
        self.0[idx as usize]
    }
}

impl TryFrom<Vec<f64>> for SortedValueSet {
    type Error = WassersteinError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// Samples the quantile function at `1/k, 2/k, ..., k/k`.
pub fn pseudoinverse_sample(set: &SortedValueSet, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(WassersteinError::ZeroSamples);
    }
    Ok((1..=k).map(|j| set.quantile(j, k)).collect())
}

/// Approximated p-Wasserstein distance from `k` quantile samples of each set.
pub fn wasserstein_approx(a: &SortedValueSet, b: &SortedValueSet, k: usize, p: Exponent) -> Result<f64> {
    if k == 0 {
        return Err(WassersteinError::ZeroSamples);
    }
    let diffs = (1..=k).map(|j| a.quantile(j, k) - b.quantile(j, k));
    Ok(p.norm(diffs) / k as f64)
}

/// Exact p-Wasserstein distance between equal-size sets: the `l`-th smallest
/// value of `a` is matched to the `l`-th smallest value of `b`.
pub fn wasserstein_exact(a: &SortedValueSet, b: &SortedValueSet, p: Exponent) -> Result<f64> {
    if a.len() != b.len() {
        return Err(WassersteinError::CardinalityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let diffs = a.values().iter().zip(b.values()).map(|(x, y)| x - y);
    Ok(p.norm(diffs) / a.len() as f64)
}

/// Brute-force optimal transport between two equal-size uniform point masses:
/// the minimum over all bijections, normalized like [`wasserstein_exact`].
///
/// A test oracle; factorial in the set size.
pub fn ot_oracle(a: &SortedValueSet, b: &SortedValueSet, p: Exponent) -> Result<f64> {
    if a.len() != b.len() {
        return Err(WassersteinError::CardinalityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n > ORACLE_MAX_SIZE {
        return Err(WassersteinError::OracleTooLarge(n));
    }
    let (av, bv) = (a.values(), b.values());
    let best = (0..n)
        .permutations(n)
        .map(|perm| {
            let costs = perm.iter().enumerate().map(|(i, &j)| (av[i] - bv[j]).abs());
            match p {
                Exponent::Infinity => costs.fold(0.0, f64::max),
                Exponent::Finite(p) => costs.map(|c| c.powf(p)).sum(),
            }
        })
        .fold(f64::INFINITY, f64::min);
    let total = match p {
        Exponent::Infinity => best,
        Exponent::Finite(p) => best.powf(p.recip()),
    };
    Ok(total / n as f64)
}

/// Approximated Wasserstein distances for the births block and the deaths
/// block of two vectors, sampled at their own block lengths.
pub fn block_distances(x: &TopologicalVector, y: &TopologicalVector, p: Exponent) -> Result<(f64, f64)> {
    check_ref_size(x, y)?;
    let m = x.births().len();
    let n = x.deaths().len();
    let bx = SortedValueSet::new(x.births().to_vec())?;
    let by = SortedValueSet::new(y.births().to_vec())?;
    let dx = SortedValueSet::new(x.deaths().to_vec())?;
    let dy = SortedValueSet::new(y.deaths().to_vec())?;
    Ok((
        wasserstein_approx(&bx, &by, m, p)?,
        wasserstein_approx(&dx, &dy, n, p)?,
    ))
}

/// Product metric `( (m W_B)^p + (n W_D)^p )^(1/p)` on TopVS, which equals
/// the `p`-norm distance of the concatenated vectors.
pub fn product_metric(x: &TopologicalVector, y: &TopologicalVector, p: Exponent) -> Result<f64> {
    let (w_births, w_deaths) = block_distances(x, y, p)?;
    let m = x.births().len() as f64;
    let n = x.deaths().len() as f64;
    Ok(p.combine(m * w_births, n * w_deaths))
}

fn check_ref_size(x: &TopologicalVector, y: &TopologicalVector) -> Result<()> {
    if x.ref_size() != y.ref_size() {
        return Err(WassersteinError::RefSizeMismatch {
            left: x.ref_size(),
            right: y.ref_size(),
        });
    }
    Ok(())
}

/// Coordinate-wise mean of vectors sharing a reference size. This is the
/// barcode mean under the approximated 2-Wasserstein product metric.
pub fn barcode_mean(vectors: &[TopologicalVector]) -> Result<TopologicalVector> {
    let first = vectors.first().ok_or(WassersteinError::EmptyVectorList)?;
    for v in &vectors[1..] {
        check_ref_size(first, v)?;
    }
    let count = vectors.len() as f64;
    let mean_block = |block: fn(&TopologicalVector) -> &[f64]| -> Vec<f64> {
        let mut acc = vec![0.0; block(first).len()];
        for v in vectors {
            for (a, x) in acc.iter_mut().zip(block(v)) {
                *a += x;
            }
        }
        acc.iter_mut().for_each(|a| *a /= count);
        acc
    };
    let births = mean_block(TopologicalVector::births);
    let deaths = mean_block(TopologicalVector::deaths);
    Ok(TopologicalVector::from_blocks_unchecked(first.ref_size(), births, deaths))
}
