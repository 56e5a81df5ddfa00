//! Weighted network model and file ingestion.
//!
//! A [`WeightedNetwork`] is a dense symmetric weight matrix with an unused
//! zero diagonal. Pairs that are not listed in an input file get weight 0,
//! so every stored network is logically complete.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance used when validating symmetry and the zero diagonal
/// of adjacency-matrix input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("a network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("node index out of range in edge ({i}, {j}): node_count is {node_count}")]
    IndexOutOfRange { i: usize, j: usize, node_count: usize },
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),
    #[error("duplicate edge for unordered pair ({0}, {1})")]
    DuplicatePair(usize, usize),
    #[error("non-finite weight {value} at ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },
    #[error("matrix is not square: row {row} has {columns} columns, expected {expected}")]
    NotSquare {
        row: usize,
        columns: usize,
        expected: usize,
    },
    #[error("non-numeric token {token:?} at row {row}, column {column}")]
    BadToken {
        token: String,
        row: usize,
        column: usize,
    },
    #[error("matrix is asymmetric at ({i}, {j}): {upper} vs {lower}")]
    Asymmetric {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
    },
    #[error("nonzero diagonal entry {value} at node {node}")]
    NonzeroDiagonal { node: usize, value: f64 },
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("{} distinct node labels exceed node_count {node_count}", labels)]
    TooManyLabels { labels: usize, node_count: usize },
    #[error("manifest entry {index} ({path}): {message}")]
    Manifest {
        index: usize,
        path: String,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<GraphError>,
    },
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// An undirected weighted network on `node_count` nodes.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNetwork {
    node_count: usize,
    weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

/// A single undirected edge with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

impl WeightedNetwork {
    /// Builds a network from `(i, j, w)` triples. Unlisted pairs get weight 0.
    pub fn from_edge_list(entries: &[(usize, usize, f64)], node_count: usize) -> Result<Self> {
        if node_count < 2 {
            return Err(GraphError::TooFewNodes(node_count));
        }
        let mut weights = vec![0.0; node_count * node_count];
        let mut seen = vec![false; node_count * node_count];
        for &(i, j, w) in entries {
            if i >= node_count || j >= node_count {
                return Err(GraphError::IndexOutOfRange { i, j, node_count });
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if !w.is_finite() {
                return Err(GraphError::NonFinite { i, j, value: w });
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            if seen[lo * node_count + hi] {
                return Err(GraphError::DuplicatePair(lo, hi));
            }
            seen[lo * node_count + hi] = true;
            weights[i * node_count + j] = w;
            weights[j * node_count + i] = w;
        }
        Ok(Self {
            node_count,
            weights,
            labels: None,
        })
    }

    /// Parses a whitespace-separated square matrix, one row per line.
    ///
    /// Entries within [`SYMMETRY_TOLERANCE`] of their transpose are accepted and
    /// the upper-triangle value is kept for both; diagonal entries within the
    /// tolerance of 0 are forced to 0.
    pub fn from_adjacency_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in text.lines() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let row = rows.len();
            let values = trimmed
                .split_whitespace()
                .enumerate()
                .map(|(column, token)| {
                    token.parse::<f64>().map_err(|_| GraphError::BadToken {
                        token: token.to_string(),
                        row,
                        column,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(values);
        }
        let n = rows.len();
        for (row, values) in rows.iter().enumerate() {
            if values.len() != n {
                return Err(GraphError::NotSquare {
                    row,
                    columns: values.len(),
                    expected: n,
                });
            }
        }
        if n < 2 {
            return Err(GraphError::TooFewNodes(n));
        }

        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            let d = rows[i][i];
            if !d.is_finite() {
                return Err(GraphError::NonFinite { i, j: i, value: d });
            }
            if d.abs() > SYMMETRY_TOLERANCE {
                return Err(GraphError::NonzeroDiagonal { node: i, value: d });
            }
            for j in (i + 1)..n {
                let upper = rows[i][j];
                let lower = rows[j][i];
                if !upper.is_finite() {
                    return Err(GraphError::NonFinite { i, j, value: upper });
                }
                if !lower.is_finite() {
                    return Err(GraphError::NonFinite {
                        i: j,
                        j: i,
                        value: lower,
                    });
                }
                if (upper - lower).abs() > SYMMETRY_TOLERANCE {
                    return Err(GraphError::Asymmetric { i, j, upper, lower });
                }
                weights[i * n + j] = upper;
                weights[j * n + i] = upper;
            }
        }
        Ok(Self {
            node_count: n,
            weights,
            labels: None,
        })
    }

    /// Parses edge-list CSV with header `i,j,w`. Lines starting with `#` are
    /// comments.
    ///
    /// If every endpoint token is a nonnegative integer the tokens are used as
    /// node indices. Otherwise endpoints are treated as string labels and
    /// mapped to dense indices in order of first appearance.
    pub fn from_edge_list_csv(text: &str, node_count: Option<usize>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let header_line = |record_pos: Option<&csv::Position>| {
            record_pos.map(|p| p.line() as usize).unwrap_or(0)
        };

        let headers = reader.headers().map_err(|e| GraphError::EdgeList {
            line: 1,
            message: e.to_string(),
        })?;
        let expected = ["i", "j", "w"];
        if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(GraphError::EdgeList {
                line: header_line(headers.position()),
                message: format!("expected header `i,j,w`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }

        let mut raw: Vec<(String, String, f64, usize)> = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| GraphError::EdgeList {
                line: e.position().map(|p| p.line() as usize).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = header_line(record.position());
            if record.len() != 3 {
                return Err(GraphError::EdgeList {
                    line,
                    message: format!("expected 3 fields, found {}", record.len()),
                });
            }
            let w = record[2].parse::<f64>().map_err(|_| GraphError::EdgeList {
                line,
                message: format!("non-numeric weight {:?}", &record[2]),
            })?;
            raw.push((record[0].to_string(), record[1].to_string(), w, line));
        }

        let numeric = raw
            .iter()
            .all(|(a, b, _, _)| a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok());

        let (entries, labels) = if numeric {
            let entries: Vec<(usize, usize, f64)> = raw
                .iter()
                .map(|(a, b, w, _)| (a.parse().unwrap(), b.parse().unwrap(), *w))
                .collect();
            (entries, None)
        } else {
            let mut table: Vec<String> = Vec::new();
            let mut index: HashMap<String, usize> = HashMap::new();
            let mut lookup = |name: &str| -> usize {
                if let Some(&k) = index.get(name) {
                    return k;
                }
                table.push(name.to_string());
                index.insert(name.to_string(), table.len() - 1);
                table.len() - 1
            };
            let entries: Vec<(usize, usize, f64)> = raw
                .iter()
                .map(|(a, b, w, _)| (lookup(a), lookup(b), *w))
                .collect();
            (entries, Some(table))
        };

        let inferred = entries
            .iter()
            .map(|&(i, j, _)| i.max(j) + 1)
            .max()
            .unwrap_or(0)
            .max(labels.as_ref().map_or(0, Vec::len));
        let node_count = node_count.unwrap_or(inferred);
        if let Some(table) = &labels {
            if table.len() > node_count {
                return Err(GraphError::TooManyLabels {
                    labels: table.len(),
                    node_count,
                });
            }
        }
        let mut net = Self::from_edge_list(&entries, node_count)?;
        net.labels = labels;
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Weight of the edge between `i` and `j`. Diagonal entries are 0.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.node_count + j]
    }

    /// Row-major `node_count × node_count` weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// External node labels, if the input file used string node names.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Iterates the `|V|(|V|-1)/2` edges with `i < j` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.node_count;
        (0..n).flat_map(move |i| {
            ((i + 1)..n).map(move |j| Edge {
                i,
                j,
                weight: self.weights[i * n + j],
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.node_count * (self.node_count - 1) / 2
    }

    /// Returns the network with nodes relabeled so that old node `k` becomes
    /// `permutation[k]`.
    pub fn permuted(&self, permutation: &[usize]) -> Self {
        let n = self.node_count;
        assert_eq!(permutation.len(), n, "permutation length must equal node count");
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                weights[permutation[i] * n + permutation[j]] = self.weights[i * n + j];
            }
        }
        let labels = self.labels.as_ref().map(|table| {
            let mut relabeled = vec![String::new(); n];
            for (k, name) in table.iter().enumerate() {
                relabeled[permutation[k]] = name.clone();
            }
            relabeled
        });
        Self {
            node_count: n,
            weights,
            labels,
        }
    }

    /// Serializes every `i < j` pair as edge-list CSV with header `i,j,w`.
    ///
    /// Floats use the shortest representation that parses back to the same
    /// `f64`.
    pub fn to_edge_list_csv(&self) -> String {
        let mut out = String::from("i,j,w\n");
        for e in self.edges() {
            writeln!(out, "{},{},{:?}", e.i, e.j, e.weight).unwrap();
        }
        out
    }

    /// Serializes the weight matrix as whitespace-separated rows.
    pub fn to_adjacency_text(&self) -> String {
        let n = self.node_count;
        let mut out = String::new();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:?}", self.weight(i, j))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// On-disk network encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkFormat {
    Edgelist,
    Adjacency,
}

/// One record of a dataset manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub format: NetworkFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_count: Option<usize>,
    pub label: String,
}

/// Networks and labels loaded from a manifest, in manifest order.
#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub networks: Vec<WeightedNetwork>,
    pub labels: Vec<String>,
    pub paths: Vec<PathBuf>,
}

pub fn parse_manifest(text: &str) -> serde_json::Result<Vec<ManifestEntry>> {
    serde_json::from_str(text)
}

/// Reads a network file in the given format.
pub fn read_network(path: &Path, format: NetworkFormat, node_count: Option<usize>) -> Result<WeightedNetwork> {
    let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = match format {
        NetworkFormat::Edgelist => WeightedNetwork::from_edge_list_csv(&text, node_count),
        NetworkFormat::Adjacency => WeightedNetwork::from_adjacency_text(&text),
    };
    parsed.map_err(|e| GraphError::File {
        path: path.to_path_buf(),
        source: Box::new(e),
    })
}

/// Loads every network listed in a manifest file. Relative paths resolve
/// against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<LoadedDataset> {
    let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let entries = parse_manifest(&text).map_err(|source| GraphError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut networks = Vec::with_capacity(entries.len());
    let mut labels = Vec::with_capacity(entries.len());
    let mut paths = Vec::with_capacity(entries.len());
    for (index, entry) in entries.into_iter().enumerate() {
        if entry.format == NetworkFormat::Edgelist && entry.node_count.is_none() {
            return Err(GraphError::Manifest {
                index,
                path: entry.path,
                message: "edgelist entries require node_count".into(),
            });
        }
        let file = base.join(&entry.path);
        networks.push(read_network(&file, entry.format, entry.node_count)?);
        labels.push(entry.label);
        paths.push(file);
    }
    Ok(LoadedDataset {
        networks,
        labels,
        paths,
    })
}
