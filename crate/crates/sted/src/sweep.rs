//! Scores every case of a corpus manifest with the requested metrics.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use sted_core::semantic::EmbeddingContext;
use sted_core::sted::{PreparedSet, StedConfig};
use sted_core::ted::{ted_similarity, TedConfig};
use sted_core::variation::VariationKind;

use crate::corpus::{read_document, read_manifest, ManifestRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Sted,
    Ted,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Sted => "sted",
            Metric::Ted => "ted",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sted" => Ok(Metric::Sted),
            "ted" => Ok(Metric::Ted),
            other => Err(format!("unknown metric `{other}` (expected sted or ted)")),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub case_id: String,
    pub kind: VariationKind,
    pub ratio: Option<f64>,
    pub metric: Metric,
    pub score: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub metrics: Vec<Metric>,
    pub sted: StedConfig,
    pub ted: TedConfig,
    /// Record per-case failures in the rows instead of aborting.
    pub keep_going: bool,
}

fn score_case(
    dir: &Path,
    record: &ManifestRecord,
    metric: Metric,
    options: &SweepOptions,
    ctx: &EmbeddingContext<'_>,
) -> Result<f64> {
    let docs = [read_document(&dir.join(&record.base_path))?, read_document(&dir.join(&record.variant_path))?];
    match metric {
        Metric::Sted => Ok(PreparedSet::new(&docs, &options.sted, ctx)?.score(0, 1)),
        Metric::Ted => Ok(ted_similarity(&docs[0], &docs[1], &options.ted)),
    }
}

/// One row per (case, metric) in manifest order, metrics in the order
/// given. Cases run on the current rayon pool.
pub fn run_sweep(manifest: &Path, options: &SweepOptions, ctx: &EmbeddingContext<'_>) -> Result<Vec<SweepRow>> {
    let records = read_manifest(manifest)?;
    let dir = manifest.parent().unwrap_or(Path::new("."));
    let jobs: Vec<(&ManifestRecord, Metric)> =
        records.iter().flat_map(|r| options.metrics.iter().map(move |&m| (r, m))).collect();
    jobs.par_iter()
        .map(|&(record, metric)| {
            let outcome = score_case(dir, record, metric, options, ctx);
            let (score, error) = match outcome {
                Ok(s) => (Some(s), None),
                Err(e) if options.keep_going => (None, Some(e.to_string())),
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                case_id: record.case_id.clone(),
                kind: record.kind,
                ratio: record.ratio,
                metric,
                score,
                error,
            })
        })
        .collect()
}

/// CSV with columns `case_id,kind,ratio,metric,score`, plus `error` when
/// `with_errors` is set. Missing values are empty fields.
pub fn sweep_csv(rows: &[SweepRow], with_errors: bool) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::internal("csv", e);
    let mut header = vec!["case_id", "kind", "ratio", "metric", "score"];
    if with_errors {
        header.push("error");
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.case_id.clone(),
            r.kind.to_string(),
            r.ratio.map(|x| x.to_string()).unwrap_or_default(),
            r.metric.to_string(),
            r.score.map(|x| x.to_string()).unwrap_or_default(),
        ];
        if with_errors {
            rec.push(r.error.clone().unwrap_or_default());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::internal("csv", e))
}
