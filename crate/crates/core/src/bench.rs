//! Timing of the fairness endpoint, the full front and the decomposition
//! over random relevance vectors.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caratheodory::gls_decompose;
use crate::error::{ExpoError, Result};
use crate::io::ModelSpec;
use crate::pareto::{feasible_target, pareto_front};
use crate::types::RelevanceVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    /// Feasible target, i.e. the fairness endpoint of the front.
    Endpoint,
    Front,
    /// Decomposition of the fairness endpoint.
    Gls,
    /// Endpoint followed by its decomposition.
    EndpointGls,
}

impl Component {
    pub const ALL: [Component; 4] = [Self::Endpoint, Self::Front, Self::Gls, Self::EndpointGls];

    pub fn name(self) -> &'static str {
        match self {
            Self::Endpoint => "endpoint",
            Self::Front => "front",
            Self::Gls => "gls",
            Self::EndpointGls => "endpoint+gls",
        }
    }
}

/// Summary of one component's running time in seconds at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub component: Component,
    pub mean: f64,
    pub median: f64,
    pub q025: f64,
    pub q975: f64,
}

/// Linear-interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn summarize(n: usize, component: Component, mut times: Vec<f64>) -> BenchRow {
    times.sort_by(f64::total_cmp);
    BenchRow {
        n,
        component,
        mean: times.iter().sum::<f64>() / times.len() as f64,
        median: quantile(&times, 0.5),
        q025: quantile(&times, 0.025),
        q975: quantile(&times, 0.975),
    }
}

/// For every `n`, draw `reps` relevance vectors uniformly from `[0, 1]^n`
/// and time each component once per vector.
pub fn run_bench(ns: &[usize], reps: usize, seed: u64, spec: ModelSpec) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(ExpoError::InvalidInput("need at least one repetition".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in ns {
        let model = spec.build(n)?;
        let mut times = [(); 4].map(|_| Vec::with_capacity(reps));
        for _ in 0..reps {
            let rho = loop {
                let values: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                let rho = RelevanceVector::new(values)?;
                if rho.sum() > 0.0 {
                    break rho;
                }
            };
            let start = Instant::now();
            let target = feasible_target(&model, &rho)?.exposure;
            let endpoint = start.elapsed().as_secs_f64();

            let start = Instant::now();
            pareto_front(&model, &target, &rho)?;
            let front = start.elapsed().as_secs_f64();

            let start = Instant::now();
            gls_decompose(&target, &model)?;
            let gls = start.elapsed().as_secs_f64();

            times[0].push(endpoint);
            times[1].push(front);
            times[2].push(gls);
            times[3].push(endpoint + gls);
        }
        for (component, t) in Component::ALL.into_iter().zip(times) {
            rows.push(summarize(n, component, t));
        }
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}
