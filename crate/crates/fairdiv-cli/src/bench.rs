//! Timing harness for the two identical-scenario allocators.
//!
//! Only the allocation call is timed; generation and I/O stay outside the
//! clock so the records reflect the O(n*m) vs O(m*log m + n*m) contrast.
//! Absolute times are hardware-bound and are not comparable across
//! machines; the fit coefficients and the relative gap between the two
//! algorithms are the meaningful outputs.

use std::time::Instant;

use fairdiv_core::allocators::{alg_identical_values, buyer_identical_values};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BENCH_HEADER: &str = "n,m,algorithm,trials,mean_seconds,stddev_seconds";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub algorithm: &'static str,
    pub trials: usize,
    pub mean_seconds: f64,
    pub stddev_seconds: f64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6}",
            self.n, self.m, self.algorithm, self.trials, self.mean_seconds, self.stddev_seconds
        )
    }
}

fn summarize(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Runs both allocators on a fresh identical scenario of size n = m = size
/// for each entry of `sizes`, `trials` times each. Prices are uniform in
/// [1, 1000]; the scenario never materializes an n x m matrix — identical
/// scenarios are fully described by their shared price vector.
pub fn run(sizes: &[usize], trials: usize, seed: u64) -> Vec<BenchRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(sizes.len() * 2);
    for &size in sizes {
        let values: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=1000)).collect();
        let mut buyer_times = Vec::with_capacity(trials);
        let mut alg_times = Vec::with_capacity(trials);
        for _ in 0..trials {
            let t0 = Instant::now();
            let a = buyer_identical_values(&values, size);
            buyer_times.push(t0.elapsed().as_secs_f64());
            std::hint::black_box(a);

            let t0 = Instant::now();
            let a = alg_identical_values(&values, size);
            alg_times.push(t0.elapsed().as_secs_f64());
            std::hint::black_box(a);
        }
        let (mean, sd) = summarize(&buyer_times);
        records.push(BenchRecord {
            n: size,
            m: size,
            algorithm: "buyer-identical",
            trials,
            mean_seconds: mean,
            stddev_seconds: sd,
        });
        let (mean, sd) = summarize(&alg_times);
        records.push(BenchRecord {
            n: size,
            m: size,
            algorithm: "alg-identical",
            trials,
            mean_seconds: mean,
            stddev_seconds: sd,
        });
    }
    records
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    /// Slope of the least-squares line through the origin.
    pub coefficient: f64,
    /// Coefficient of determination against the sample mean.
    pub r_squared: f64,
}

/// Least-squares fit of y = c * x through the origin.
pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> Fit {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let c = sxy / sxx;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - c * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Fit { coefficient: c, r_squared }
}

/// Fits one algorithm's mean times against the model `x(n, m)`.
pub fn fit_records(records: &[BenchRecord], algorithm: &str, x: impl Fn(f64, f64) -> f64) -> Fit {
    let rows: Vec<&BenchRecord> = records
        .iter()
        .filter(|r| r.algorithm == algorithm)
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| x(r.n as f64, r.m as f64)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_seconds).collect();
    fit_through_origin(&xs, &ys)
}

pub fn product_model(n: f64, m: f64) -> f64 {
    n * m
}

pub fn sort_model(n: f64, m: f64) -> f64 {
    m * m.log2() + n * m
}

/// Prior measurements for context at matching sizes (different hardware;
/// never an acceptance target). Size, buyer-identical mean, alg-identical
/// mean, in seconds.
pub const REFERENCE_MEANS: &[(usize, f64, f64)] = &[
    (1000, 0.0070, 0.0083),
    (2000, 0.0179, 0.0211),
    (3000, 0.0250, 0.0317),
    (4000, 0.0393, 0.0497),
    (5000, 0.0511, 0.0677),
    (6000, 0.0684, 0.0990),
    (7000, 0.0850, 0.1412),
    (8000, 0.1038, 0.1984),
    (9000, 0.1251, 0.2601),
    (10000, 0.1442, 0.3284),
];
