//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topvs::barcode::filtration_values;
use topvs::embed::{embed_dataset_with, lp_distance};
use topvs::*;

const CLOSED_FORM_TOL: f64 = 1e-12;
const ORACLE_REL_TOL: f64 = 1e-9;
const SETTING_ONE_MIN_ACCURACY: f64 = 0.90;
const SIGNIFICANCE: f64 = 0.05;
const DATASETS_PER_SETTING: u64 = 10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn random_network(rng: &mut ChaCha8Rng, n: usize) -> WeightedNetwork {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            entries.push((i, j, rng.random::<f64>()));
        }
    }
    WeightedNetwork::from_edge_list(&entries, n).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn random_vector(rng: &mut ChaCha8Rng, ref_size: usize) -> TopologicalVector {
    let (m, n) = counts_for_size(ref_size);
    let births = sorted((0..m).map(|_| rng.random_range(-2.0..3.0)).collect());
    let deaths = sorted((0..n).map(|_| rng.random_range(-2.0..3.0)).collect());
    TopologicalVector::new(ref_size, births, deaths).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fig2_golden() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let g1 = dir.path().join("g1.json");
    let g2 = dir.path().join("g2.json");
    std::fs::write(&g1, r#"{"node_count":4,"births":[3,4,5],"deaths":[0.5,1,1.5]}"#).unwrap();
    std::fs::write(&g2, r#"{"node_count":4,"births":[2,2.5,3],"deaths":[0.5,1,1.5]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_topvs"))
        .args(["dist", "--p", "1"])
        .arg(&g1)
        .arg(&g2)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let w = report["w_births"].as_f64().ok_or("missing w_births")?;
    ensure((w - 1.5).abs() < CLOSED_FORM_TOL, || format!("w_births = {w}"))?;
    Ok(format!("w_births = {w}"))
}

fn cardinality_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for n in 3..=50 {
        let (m, k) = (n - 1, 1 + n * (n - 3) / 2);
        for _ in 0..100 {
            let net = random_network(&mut rng, n);
            let d = decompose(&net);
            ensure(d.births.len() == m && d.deaths.len() == k, || format!("|V|={n}: {} births, {} deaths", d.births.len(), d.deaths.len()))?;
            let union = sorted(d.births.iter().chain(&d.deaths).copied().collect());
            let edges = sorted(net.edges().map(|e| e.weight).collect());
            ensure(union == edges, || format!("|V|={n}: births and deaths do not partition the edge weights"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} networks"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let size = rng.random_range(1..=7);
        let a = SortedValueSet::from_unsorted((0..size).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
        let b = SortedValueSet::from_unsorted((0..size).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
        for p in [1.0, 2.0, 3.0] {
            let p = Exponent::Finite(p);
            let exact = wasserstein_exact(&a, &b, p).unwrap();
            let oracle = ot_oracle(&a, &b, p).unwrap();
            let rel = (exact - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
            ensure(rel < ORACLE_REL_TOL, || format!("trial {trial} p={p}: exact {exact} vs oracle {oracle}"))?;
        }
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn sampling_and_isometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let size = rng.random_range(1..=40);
        let a = SortedValueSet::from_unsorted((0..size).map(|_| rng.random::<f64>()).collect()).unwrap();
        let b = SortedValueSet::from_unsorted((0..size).map(|_| rng.random::<f64>()).collect()).unwrap();
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
            let diff = (wasserstein_approx(&a, &b, size, p).unwrap() - wasserstein_exact(&a, &b, p).unwrap()).abs();
            worst = worst.max(diff);
            ensure(diff < CLOSED_FORM_TOL, || format!("approx vs exact differ by {diff}"))?;
        }
    }
    for _ in 0..1000 {
        let ref_size = rng.random_range(3..=15);
        let x = random_vector(&mut rng, ref_size);
        let y = random_vector(&mut rng, ref_size);
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
            let direct = lp_distance(&x.concatenated(), &y.concatenated(), p);
            let product = product_metric(&x, &y, p).unwrap();
            let diff = (direct - product).abs();
            worst = worst.max(diff);
            ensure(diff < CLOSED_FORM_TOL, || format!("ref {ref_size} p={p}: {direct} vs {product}"))?;
        }
    }
    Ok(format!("worst absolute error {worst:.2e}"))
}

fn monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut thresholds_checked = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..=40);
        let net = random_network(&mut rng, n);
        let thresholds = filtration_values(&net);
        let curve = betti_curves(&net, &thresholds).unwrap();
        ensure(curve.beta0.windows(2).all(|w| w[0] <= w[1]), || "beta0 decreased".into())?;
        ensure(curve.beta1.windows(2).all(|w| w[0] >= w[1]), || "beta1 increased".into())?;
        for (k, &eps) in thresholds.iter().enumerate() {
            let edges = net.edges().filter(|e| e.weight > eps).count();
            ensure(curve.beta0[k] + edges == n + curve.beta1[k], || format!("Euler relation fails at threshold {k}"))?;
        }
        thresholds_checked += thresholds.len();
    }
    Ok(format!("{thresholds_checked} thresholds"))
}

fn dataset_accuracy(sizes: &[usize], per_group: usize, r: f64, seed: u64, expect_ref: Option<(usize, usize, usize)>) -> Result<f64, String> {
    let spec = BenchmarkSpec {
        sizes: sizes.to_vec(),
        modules: (3, 5),
        within_probability: r,
        per_group,
        seed,
    };
    let bench = generate_benchmark(&spec).map_err(|e| e.to_string())?;
    let embedding = embed_dataset_with(&bench.networks, None).map_err(|e| e.to_string())?;
    if let Some((v, m, n)) = expect_ref {
        let v0 = &embedding.vectors[0];
        ensure(embedding.ref_size == v && v0.births().len() == m && v0.deaths().len() == n, || {
            format!("ref {} m {} n {}", embedding.ref_size, v0.births().len(), v0.deaths().len())
        })?;
    }
    let data = LabeledDataset::new(embedding.vectors, bench.labels).map_err(|e| e.to_string())?;
    let report = nested_cv(&data, &CvConfig { seed, ..CvConfig::default() }).map_err(|e| e.to_string())?;
    Ok(report.accuracy)
}

fn mean_accuracy(sizes: &[usize], per_group: usize, r: f64, expect_ref: Option<(usize, usize, usize)>) -> Result<f64, String> {
    let mut total = 0.0;
    for seed in 0..DATASETS_PER_SETTING {
        total += dataset_accuracy(sizes, per_group, r, 1000 + seed, expect_ref)?;
    }
    Ok(total / DATASETS_PER_SETTING as f64)
}

fn trend(sizes: &[usize], per_group: usize, expect_ref: Option<(usize, usize, usize)>) -> Outcome {
    let strong = mean_accuracy(sizes, per_group, 0.75, expect_ref)?;
    let weak = mean_accuracy(sizes, per_group, 0.55, expect_ref)?;
    ensure(strong >= SETTING_ONE_MIN_ACCURACY, || format!("mean accuracy at r=0.75 is {strong:.4}"))?;
    ensure(strong >= weak, || format!("accuracy at r=0.75 ({strong:.4}) below r=0.55 ({weak:.4})"))?;
    Ok(format!("mean accuracy r=0.75: {strong:.4}, r=0.55: {weak:.4}"))
}

fn setting_one_trend() -> Outcome {
    trend(&[90], 30, None)
}

fn permutation_significance() -> Outcome {
    let bench = generate_benchmark(&BenchmarkSpec::same_size(90, 0.75, 30, 7000)).map_err(|e| e.to_string())?;
    let vectors = embed_dataset(&bench.networks).map_err(|e| e.to_string())?;
    let data = LabeledDataset::new(vectors, bench.labels.clone()).map_err(|e| e.to_string())?;
    let structured = permutation_test(&data, 100, 7000, &CvConfig::default()).map_err(|e| e.to_string())?;
    ensure(structured.p_value < SIGNIFICANCE, || format!("structured p = {}", structured.p_value))?;

    let seeds = 20;
    let mut above = 0;
    for seed in 0..seeds {
        let mut labels = bench.labels.clone();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(8000 + seed));
        let shuffled = data.with_labels(labels).map_err(|e| e.to_string())?;
        let report = permutation_test(&shuffled, 100, 8000 + seed, &CvConfig { seed, ..CvConfig::default() }).map_err(|e| e.to_string())?;
        if report.p_value > SIGNIFICANCE {
            above += 1;
        }
    }
    ensure(above * 10 >= seeds * 9, || format!("null p > 0.05 in only {above}/{seeds} seeds"))?;
    Ok(format!("structured p = {}, null p > 0.05 in {above}/{seeds} seeds", structured.p_value))
}

fn mixed_size_trend() -> Outcome {
    trend(&[60, 90, 120], 10, Some((120, 119, 7021))).map(|s| format!("ref 120 (m=119, n=7021); {s}"))
}

fn squared_distance_sum(center: &TopologicalVector, vectors: &[TopologicalVector]) -> f64 {
    vectors
        .iter()
        .map(|v| product_metric(center, v, Exponent::Finite(2.0)).unwrap().powi(2))
        .sum()
}

fn with_coordinate(v: &TopologicalVector, k: usize, delta: f64) -> TopologicalVector {
    let mut coords = v.concatenated();
    coords[k] += delta;
    let m = v.births().len();
    let births = sorted(coords[..m].to_vec());
    let deaths = sorted(coords[m..].to_vec());
    TopologicalVector::new(v.ref_size(), births, deaths).unwrap()
}

fn mean_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut perturbations = 0;
    for dataset in 0..20 {
        let n = rng.random_range(4..=12);
        let count = rng.random_range(2..=8);
        let nets: Vec<_> = (0..count).map(|_| random_network(&mut rng, n)).collect();
        let vectors = embed_dataset(&nets).unwrap();
        let mean = barcode_mean(&vectors).unwrap();
        let base = squared_distance_sum(&mean, &vectors);
        for k in 0..mean.dimension() {
            for delta in [0.1, -0.1] {
                let moved = with_coordinate(&mean, k, delta);
                let value = squared_distance_sum(&moved, &vectors);
                ensure(value > base, || format!("dataset {dataset}: moving coordinate {k} by {delta} gives {value} <= {base}"))?;
                perturbations += 1;
            }
        }
    }
    Ok(format!("{perturbations} perturbations"))
}

fn run(name: &str, criterion: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|e| {
        Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS  {name} ({elapsed:.1}s): {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL  {name} ({elapsed:.1}s): {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 golden 1-Wasserstein value via `dist --p 1`", fig2_golden),
        ("2 birth/death cardinality law", cardinality_law),
        ("3 exact distance matches bijection oracle", oracle_equivalence),
        ("4 sampling consistency and product-metric isometry", sampling_and_isometry),
        ("5 Betti monotonicity and Euler relation", monotonicity),
        ("6 same-size benchmark accuracy trend", setting_one_trend),
        ("7 permutation-test significance and null calibration", permutation_significance),
        ("8 mixed-size benchmark embedding and trend", mixed_size_trend),
        ("9 barcode mean minimizes squared distances", mean_property),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let results = criteria
        .iter()
        .filter(|(name, _)| filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str())))
        .map(|(name, f)| run(name, *f))
        .collect_vec();
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
