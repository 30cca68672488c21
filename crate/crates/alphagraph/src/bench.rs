//! Desk-scale tuning experiments: prune-vs-rebuild timing, recall/QPS
//! sweeps over the search beam width, and plot-ready report emission.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::build::{build_vamana, VamanaParams};
use crate::dataset::{Dataset, MetricKind};
use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};
use crate::graph::ProximityGraph;
use crate::prune::rp_tuning;
use crate::search::{brute_force_knn, greedy_search, recall_at_k, Query};

/// How a measured index was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Base,
    Prune,
    Rebuild,
}

/// One measurement row: an index configuration at one beam width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(rename = "dataset")]
    pub dataset_name: String,
    pub method: Method,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub recall: f64,
    pub qps: f64,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Wall-clock seconds spent producing this index (build, or prune
    /// time for tuned copies). Excludes ground truth and query time.
    pub build_seconds: f64,
    pub hops_mean: f64,
}

/// Full experiment description.
///
/// `vamana.alpha` is ignored: the base build uses `base_alpha` and each
/// rebuild uses its target alpha; `vamana` supplies `r`, `l_build` and
/// the build seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningPlan {
    pub base_alpha: f64,
    /// Descending prune/rebuild targets, each below `base_alpha`.
    pub target_alphas: Vec<f64>,
    pub vamana: VamanaParams,
    pub l_sweep: Vec<usize>,
    pub k: usize,
    pub query_count: usize,
    pub seed: u64,
}

impl TuningPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.base_alpha >= 1.0) {
            return Err(Error::InvalidParams("base_alpha must be >= 1".into()));
        }
        for &a in &self.target_alphas {
            if !(a >= 1.0 && a < self.base_alpha) {
                return Err(Error::InvalidParams(format!(
                    "target alpha {a} must lie in [1, base_alpha)"
                )));
            }
        }
        if self.l_sweep.is_empty() {
            return Err(Error::InvalidParams("l_sweep must be nonempty".into()));
        }
        let min_l = *self.l_sweep.iter().min().unwrap();
        if self.k == 0 || self.k > min_l {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k <= min(l_sweep), got k = {}, min L = {min_l}",
                self.k
            )));
        }
        if self.query_count == 0 {
            return Err(Error::InvalidParams("query_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Recall/QPS/hops at one beam width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub l: usize,
    pub recall: f64,
    pub qps: f64,
    pub hops_mean: f64,
}

/// Measures one graph across beam widths against precomputed ground
/// truth. One warm-up pass per width is excluded from timing. With
/// `threaded` the batch runs on the rayon pool and the wall clock spans
/// the whole batch; recall is identical either way.
pub fn measure_sweep(
    g: &ProximityGraph,
    ds: &Dataset,
    queries: &[Vec<f64>],
    truth: &[Vec<usize>],
    k: usize,
    l_sweep: &[usize],
    threaded: bool,
) -> Result<Vec<SweepPoint>> {
    if queries.len() != truth.len() {
        return Err(Error::InvalidParams(
            "queries and ground truth differ in length".into(),
        ));
    }
    let mode = if threaded {
        ExecMode::default()
    } else {
        ExecMode::Sequential
    };
    let mut points = Vec::with_capacity(l_sweep.len());
    for &l in l_sweep {
        // warm-up pass
        for q in queries {
            greedy_search(g, ds, Query::Point(q), k, l)?;
        }
        let started = Instant::now();
        let results = map_indices(queries.len(), mode, |qi| {
            greedy_search(g, ds, Query::Point(&queries[qi]), k, l)
        });
        let elapsed = started.elapsed().as_secs_f64();

        let mut recall_sum = 0.0;
        let mut hops_sum = 0usize;
        for (res, tru) in results.into_iter().zip(truth) {
            let res = res?;
            recall_sum += recall_at_k(&res.top_k, tru, k)?;
            hops_sum += res.hops;
        }
        points.push(SweepPoint {
            l,
            recall: recall_sum / queries.len() as f64,
            qps: queries.len() as f64 / elapsed,
            hops_mean: hops_sum as f64 / queries.len() as f64,
        });
    }
    Ok(points)
}

fn record_sweep(
    records: &mut Vec<BenchRecord>,
    g: &ProximityGraph,
    ds: &Dataset,
    queries: &[Vec<f64>],
    truth: &[Vec<usize>],
    plan: &TuningPlan,
    dataset_name: &str,
    method: Method,
    alpha: f64,
    build_seconds: f64,
) -> Result<()> {
    let stats = g.degree_stats();
    for pt in measure_sweep(g, ds, queries, truth, plan.k, &plan.l_sweep, false)? {
        records.push(BenchRecord {
            dataset_name: dataset_name.to_string(),
            method,
            alpha,
            l: pt.l,
            recall: pt.recall,
            qps: pt.qps,
            avg_degree: stats.avg_out_degree,
            max_degree: stats.max_out_degree,
            build_seconds,
            hops_mean: pt.hops_mean,
        });
    }
    Ok(())
}

/// Builds a base index, then for every target alpha both (a) prunes a
/// copy of the base in place and (b) rebuilds from scratch, measuring
/// recall/QPS across `l_sweep` for every resulting graph. Emits one
/// record per (method, alpha, L). Ground truth and query time are
/// excluded from the build/prune timings.
pub fn run_tuning_experiment(
    ds: &Dataset,
    queries: &[Vec<f64>],
    plan: &TuningPlan,
    dataset_name: &str,
) -> Result<Vec<BenchRecord>> {
    plan.validate()?;
    if ds.metric() != MetricKind::Euclidean {
        return Err(Error::InvalidParams(
            "tuning experiments need coordinate-form datasets".into(),
        ));
    }
    if queries.is_empty() {
        return Err(Error::InvalidParams("need at least one query".into()));
    }

    let qrefs: Vec<Query> = queries.iter().map(|q| Query::Point(q)).collect();
    let truth = brute_force_knn(ds, &qrefs, plan.k)?;

    let base_params = VamanaParams {
        alpha: plan.base_alpha,
        ..plan.vamana
    };
    let started = Instant::now();
    let base = build_vamana(ds, &base_params)?;
    let base_seconds = started.elapsed().as_secs_f64();

    let mut records = Vec::new();
    record_sweep(
        &mut records,
        &base,
        ds,
        queries,
        &truth,
        plan,
        dataset_name,
        Method::Base,
        plan.base_alpha,
        base_seconds,
    )?;

    for &alpha2 in &plan.target_alphas {
        let mut pruned = base.clone();
        let started = Instant::now();
        rp_tuning(&mut pruned, ds, alpha2, true)?;
        let prune_seconds = started.elapsed().as_secs_f64();
        record_sweep(
            &mut records,
            &pruned,
            ds,
            queries,
            &truth,
            plan,
            dataset_name,
            Method::Prune,
            alpha2,
            prune_seconds,
        )?;

        let rebuild_params = VamanaParams {
            alpha: alpha2,
            ..plan.vamana
        };
        let started = Instant::now();
        let rebuilt = build_vamana(ds, &rebuild_params)?;
        let rebuild_seconds = started.elapsed().as_secs_f64();
        record_sweep(
            &mut records,
            &rebuilt,
            ds,
            queries,
            &truth,
            plan,
            dataset_name,
            Method::Rebuild,
            alpha2,
            rebuild_seconds,
        )?;
    }
    Ok(records)
}

/// Non-dominated subset under (maximize recall, maximize qps), sorted by
/// recall descending. Records tying on both axes are all kept.
pub fn pareto_frontier(records: &[BenchRecord], methods: &[Method]) -> Vec<BenchRecord> {
    let pool: Vec<&BenchRecord> = records
        .iter()
        .filter(|r| methods.contains(&r.method))
        .collect();
    let mut kept: Vec<BenchRecord> = pool
        .iter()
        .filter(|r| {
            !pool.iter().any(|s| {
                s.recall >= r.recall
                    && s.qps >= r.qps
                    && (s.recall > r.recall || s.qps > r.qps)
            })
        })
        .map(|r| (*r).clone())
        .collect();
    kept.sort_by(|a, b| {
        b.recall
            .partial_cmp(&a.recall)
            .unwrap()
            .then(b.qps.partial_cmp(&a.qps).unwrap())
            .then(a.l.cmp(&b.l))
    });
    kept
}

/// Report file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Writes records as CSV (`dataset,method,alpha,L,recall,qps,avg_degree,
/// max_degree,build_seconds,hops_mean` with a header row) or as a JSON
/// array of objects with the same keys.
pub fn emit_report(
    records: &[BenchRecord],
    path: impl AsRef<Path>,
    format: ReportFormat,
) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_path(path.as_ref()).map_err(Error::from)?;
            if records.is_empty() {
                // serde-driven headers need at least one record; write them by hand
                w.write_record([
                    "dataset",
                    "method",
                    "alpha",
                    "L",
                    "recall",
                    "qps",
                    "avg_degree",
                    "max_degree",
                    "build_seconds",
                    "hops_mean",
                ])
                .map_err(Error::from)?;
            }
            for r in records {
                w.serialize(r).map_err(Error::from)?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            std::fs::write(path, serde_json::to_vec_pretty(records)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{gen_random_dataset, gen_random_queries, RandomDist};

    fn rec(recall: f64, qps: f64) -> BenchRecord {
        BenchRecord {
            dataset_name: "t".into(),
            method: Method::Base,
            alpha: 1.2,
            l: 10,
            recall,
            qps,
            avg_degree: 3.0,
            max_degree: 5,
            build_seconds: 0.1,
            hops_mean: 4.0,
        }
    }

    #[test]
    fn pareto_examples() {
        let one = vec![rec(0.9, 100.0)];
        assert_eq!(pareto_frontier(&one, &[Method::Base]).len(), 1);

        let two = vec![rec(0.9, 100.0), rec(0.8, 50.0)];
        let f = pareto_frontier(&two, &[Method::Base]);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].recall, 0.9);

        let three = vec![rec(0.95, 50.0), rec(0.90, 80.0), rec(0.85, 70.0)];
        let f = pareto_frontier(&three, &[Method::Base]);
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].recall, f[1].recall), (0.95, 0.90));

        // exact ties survive
        let ties = vec![rec(0.9, 100.0), rec(0.9, 100.0)];
        assert_eq!(pareto_frontier(&ties, &[Method::Base]).len(), 2);

        // method filter
        assert!(pareto_frontier(&three, &[Method::Prune]).is_empty());
    }

    #[test]
    fn report_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let csv_path = dir.path().join("r.csv");
        let json_path = dir.path().join("r.json");

        emit_report(&[], &csv_path, ReportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert_eq!(
            text.trim(),
            "dataset,method,alpha,L,recall,qps,avg_degree,max_degree,build_seconds,hops_mean"
        );

        let records = vec![rec(0.75, 123.5), rec(0.5, 200.0)];
        emit_report(&records, &csv_path, ReportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert_eq!(text.lines().count(), records.len() + 1);
        assert!(text.lines().nth(1).unwrap().starts_with("t,base,1.2,10,0.75,"));

        emit_report(&records, &json_path, ReportFormat::Json).unwrap();
        let back: Vec<BenchRecord> =
            serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn base_only_plan_emits_base_records() {
        let ds = gen_random_dataset(400, 4, 3, RandomDist::UniformCube).unwrap();
        let queries = gen_random_queries(10, 4, 4, RandomDist::UniformCube);
        let plan = TuningPlan {
            base_alpha: 1.2,
            target_alphas: vec![],
            vamana: VamanaParams {
                alpha: 1.2,
                r: 8,
                l_build: 12,
                seed: 5,
            },
            l_sweep: vec![10, 20],
            k: 5,
            query_count: 10,
            seed: 4,
        };
        let records = run_tuning_experiment(&ds, &queries, &plan, "synthetic").unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.method == Method::Base));
        assert!(records.iter().all(|r| (0.0..=1.0).contains(&r.recall)));
        assert!(records.iter().all(|r| r.qps > 0.0));
    }

    #[test]
    fn full_plan_emits_all_methods() {
        let ds = gen_random_dataset(300, 4, 6, RandomDist::Gaussian).unwrap();
        let queries = gen_random_queries(8, 4, 7, RandomDist::Gaussian);
        let plan = TuningPlan {
            base_alpha: 1.2,
            target_alphas: vec![1.05],
            vamana: VamanaParams {
                alpha: 1.2,
                r: 8,
                l_build: 12,
                seed: 5,
            },
            l_sweep: vec![10],
            k: 5,
            query_count: 8,
            seed: 4,
        };
        let records = run_tuning_experiment(&ds, &queries, &plan, "synthetic").unwrap();
        assert_eq!(records.len(), 3);
        let methods: Vec<Method> = records.iter().map(|r| r.method).collect();
        assert_eq!(methods, vec![Method::Base, Method::Prune, Method::Rebuild]);
        // sparser target prunes edges off the base
        assert!(records[1].avg_degree <= records[0].avg_degree);
    }

    #[test]
    fn plan_validation() {
        let mut plan = TuningPlan {
            base_alpha: 1.2,
            target_alphas: vec![1.3],
            vamana: VamanaParams {
                alpha: 1.2,
                r: 8,
                l_build: 12,
                seed: 5,
            },
            l_sweep: vec![10],
            k: 5,
            query_count: 8,
            seed: 4,
        };
        assert!(plan.validate().is_err()); // target above base
        plan.target_alphas = vec![1.1];
        plan.k = 20;
        assert!(plan.validate().is_err()); // k above min L
        plan.k = 5;
        plan.validate().unwrap();
    }
}
