//! Aggregates per-document attribute scores across many document sets into
//! bucketed frequency distributions, one per super attribute, with the
//! population variance of each attribute's scores.

use crate::dictionary::SuperAttribute;
use crate::error::{Error, Result};
use crate::score::ScoreReport;

/// Frequency distribution of attribute scores across a corpus.
#[derive(Debug, Clone)]
pub struct ScoreDistribution {
    bucket_width: f64,
    bucket_count: usize,
    scores: [Vec<f64>; 5],
}

/// One attribute's aggregated row.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionRow {
    pub attribute: SuperAttribute,
    pub counts: Vec<u64>,
    pub variance: f64,
    pub n: u64,
}

impl ScoreDistribution {
    /// The bucket width must divide 1.0 into a whole number of buckets.
    pub fn new(bucket_width: f64) -> Result<ScoreDistribution> {
        if !(bucket_width > 0.0 && bucket_width <= 1.0) {
            return Err(Error::ScoreSet {
                message: format!("bucket width {bucket_width} is out of range"),
            });
        }
        let buckets = (1.0 / bucket_width).round();
        if buckets < 1.0 || (buckets * bucket_width - 1.0).abs() > 1e-9 {
            return Err(Error::ScoreSet {
                message: format!("bucket width {bucket_width} does not divide 1.0 evenly"),
            });
        }
        Ok(ScoreDistribution {
            bucket_width,
            bucket_count: buckets as usize,
            scores: Default::default(),
        })
    }

    /// Folds every defined attribute cell of one scored set into the
    /// distribution.
    pub fn add_report(&mut self, report: &ScoreReport) {
        for doc in 0..report.documents.len() {
            for (attribute, cell) in report.matrix.row(doc) {
                let idx = SuperAttribute::ALL
                    .iter()
                    .position(|a| *a == attribute)
                    .expect("attribute is one of the five");
                self.scores[idx].push(cell.score);
            }
        }
    }

    pub fn bucket_width(&self) -> f64 {
        self.bucket_width
    }

    pub fn rows(&self) -> Vec<DistributionRow> {
        SuperAttribute::ALL
            .iter()
            .enumerate()
            .map(|(idx, &attribute)| {
                let scores = &self.scores[idx];
                let mut counts = vec![0u64; self.bucket_count];
                for &score in scores {
                    let bucket = ((score / self.bucket_width) as usize).min(self.bucket_count - 1);
                    counts[bucket] += 1;
                }
                DistributionRow {
                    attribute,
                    counts,
                    variance: population_variance(scores),
                    n: scores.len() as u64,
                }
            })
            .collect()
    }

    /// The variance of one attribute's scores.
    pub fn variance(&self, attribute: SuperAttribute) -> f64 {
        let idx = SuperAttribute::ALL
            .iter()
            .position(|a| *a == attribute)
            .expect("attribute is one of the five");
        population_variance(&self.scores[idx])
    }

    /// Renders the distribution as CSV: one row per attribute with bucket
    /// counts, variance and sample size.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("attribute");
        for b in 0..self.bucket_count {
            let lo = b as f64 * self.bucket_width;
            let hi = (b + 1) as f64 * self.bucket_width;
            let close = if b + 1 == self.bucket_count { ']' } else { ')' };
            out.push_str(&format!(",[{lo:.2}-{hi:.2}{close}"));
        }
        out.push_str(",variance,n\n");
        for row in self.rows() {
            out.push_str(row.attribute.as_str());
            for count in &row.counts {
                out.push_str(&format!(",{count}"));
            }
            out.push_str(&format!(",{:.6},{}\n", row.variance, row.n));
        }
        out
    }
}

fn population_variance(scores: &[f64]) -> f64 {
    if scores.is_empty() {
        return 0.0;
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / scores.len() as f64
}
