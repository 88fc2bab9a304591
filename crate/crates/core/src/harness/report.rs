use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{SuiteConfig, SuiteName};
use crate::error::{Error, Result};
use crate::record::{Instance, Margin, VerificationRecord};

/// Failing records kept in full per check; the rest are only counted.
pub const FAILURE_CAP: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckAggregate {
    pub count: usize,
    pub failures: usize,
    /// Smallest `value + tolerance` over all margins of the check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_headroom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<Margin>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_instance: Option<Instance>,
    /// Largest value of every reported metric.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metric_max: BTreeMap<String, f64>,
}

/// Smallest headroom of one check at one `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub check: String,
    pub p: f64,
    pub count: usize,
    pub failures: usize,
    pub min_headroom: f64,
}

/// Wall-clock facts of a run. Everything else in a report is a function of
/// the config alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub timestamp_unix: u64,
    pub elapsed_seconds: f64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub suite: SuiteName,
    pub config: SuiteConfig,
    pub total_records: usize,
    pub total_failures: usize,
    pub checks: BTreeMap<String, CheckAggregate>,
    pub series: Vec<SeriesPoint>,
    pub failures: Vec<VerificationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
}

impl VerificationReport {
    pub fn from_records(config: &SuiteConfig, records: &[VerificationRecord]) -> Self {
        let mut checks: BTreeMap<String, CheckAggregate> = BTreeMap::new();
        let mut series: BTreeMap<(String, u64), SeriesPoint> = BTreeMap::new();
        let mut failures = Vec::new();
        let mut kept: BTreeMap<&str, usize> = BTreeMap::new();

        for rec in records {
            let agg = checks.entry(rec.check.clone()).or_default();
            agg.count += 1;
            if !rec.pass {
                agg.failures += 1;
                let n = kept.entry(&rec.check).or_default();
                if *n < FAILURE_CAP {
                    *n += 1;
                    failures.push(rec.clone());
                }
            }
            for (name, &v) in &rec.metrics {
                let m = agg.metric_max.entry(name.clone()).or_insert(v);
                *m = m.max(v);
            }
            let Some(worst) = rec.worst_margin() else { continue };
            let headroom = worst.headroom();
            if agg.min_headroom.is_none_or(|h| headroom < h) {
                agg.min_headroom = Some(headroom);
                agg.worst_margin = Some(worst.clone());
                agg.worst_instance = Some(rec.instance.clone());
            }
            if let Some(p) = rec.instance.p {
                let point = series.entry((rec.check.clone(), p.to_bits())).or_insert_with(|| SeriesPoint {
                    check: rec.check.clone(),
                    p,
                    count: 0,
                    failures: 0,
                    min_headroom: headroom,
                });
                point.count += 1;
                point.failures += usize::from(!rec.pass);
                point.min_headroom = point.min_headroom.min(headroom);
            }
        }

        VerificationReport {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            suite: config.suite,
            // the output path is not part of the numerical content
            config: SuiteConfig {
                report: None,
                ..config.clone()
            },
            total_records: records.len(),
            total_failures: records.iter().filter(|r| !r.pass).count(),
            checks,
            series: series.into_values().collect(),
            failures,
            run: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.total_failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without its [`RunInfo`]; identical across reruns of the
    /// same config.
    pub fn numerical_json(&self) -> String {
        VerificationReport {
            run: None,
            ..self.clone()
        }
        .to_json()
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    /// One line per check, then a verdict.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .map(|(name, agg)| {
                let worst = match (&agg.worst_margin, agg.min_headroom) {
                    (Some(m), Some(h)) => format!("worst {} headroom {h:.3e}", m.name),
                    _ => "no margins".to_string(),
                };
                let status = if agg.failures == 0 { "ok  " } else { "FAIL" };
                format!("{status} {name:<22} {:>6} records {:>5} failed  {worst}", agg.count, agg.failures)
            })
            .collect();
        out.push(format!(
            "{} suite: {} records, {} failed",
            self.suite, self.total_records, self.total_failures
        ));
        out
    }

    /// `check,p,count,failures,min_headroom`, one row per series point.
    pub fn plot_csv(&self) -> String {
        let mut out = String::from("check,p,count,failures,min_headroom\n");
        for s in &self.series {
            let _ = writeln!(out, "{},{},{},{},{:e}", s.check, s.p, s.count, s.failures, s.min_headroom);
        }
        out
    }
}

pub fn write_plot_data(report: &VerificationReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, report.plot_csv()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::checks;

    fn rec(check: &str, p: f64, value: f64) -> VerificationRecord {
        VerificationRecord::new(
            check,
            Instance {
                p: Some(p),
                ..Instance::default()
            },
            vec![Margin::new("m", value, 0.1)],
        )
        .with_metric("x", value)
    }

    #[test]
    fn aggregates_track_worst_and_failures() {
        let cfg = SuiteConfig::default_for(SuiteName::Operator);
        let recs = vec![
            rec(checks::AGH, 0.5, 1.0),
            rec(checks::AGH, 0.5, -0.5),
            rec(checks::AGH, 0.1, 0.2),
        ];
        let r = VerificationReport::from_records(&cfg, &recs);
        let agg = &r.checks[checks::AGH];
        assert_eq!((agg.count, agg.failures), (3, 1));
        assert!((agg.min_headroom.unwrap() + 0.4).abs() < 1e-15);
        assert_eq!(agg.metric_max["x"], 1.0);
        assert_eq!(r.series.len(), 2);
        assert_eq!(r.series[0].p, 0.1);
        assert_eq!(r.failures.len(), 1);
        assert!(!r.passed());
    }

    #[test]
    fn empty_report_plots_header_only() {
        let cfg = SuiteConfig::default_for(SuiteName::Functional);
        let r = VerificationReport::from_records(&cfg, &[]);
        assert!(r.passed());
        assert_eq!(r.plot_csv(), "check,p,count,failures,min_headroom\n");
    }

    #[test]
    fn json_round_trip() {
        let cfg = SuiteConfig::default_for(SuiteName::Operator);
        let r = VerificationReport::from_records(&cfg, &[rec(checks::EQP_IDENTITY, 0.3, 0.01)]);
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
