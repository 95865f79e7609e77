use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ClassValues;
use crate::error::{Error, Result};
use crate::metrics::{CumulativeAverager, TimingStats};
use crate::raster::ClassScheme;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingSummary {
    pub mean_ms: f64,
    pub median_ms: f64,
    pub p95_ms: f64,
    pub samples: usize,
}

impl From<&TimingStats> for TimingSummary {
    fn from(t: &TimingStats) -> Self {
        TimingSummary {
            mean_ms: t.mean,
            median_ms: t.median,
            p95_ms: t.p95,
            samples: t.count(),
        }
    }
}

/// Cumulative class percentages of one run (one row cleaner, one model...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub frames: u64,
    pub c_avg: ClassValues,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingSummary>,
}

pub fn summarize(
    name: &str,
    averager: &CumulativeAverager,
    scheme: &ClassScheme,
    timing: Option<&TimingStats>,
) -> Result<RunSummary> {
    if averager.class_count() != scheme.class_count() {
        return Err(Error::ClassCountMismatch {
            expected: scheme.class_count(),
            actual: averager.class_count(),
        });
    }
    let values = averager.value()?;
    Ok(RunSummary {
        name: name.to_owned(),
        frames: averager.frame_count(),
        c_avg: ClassValues::from_names(scheme.names(), &values),
        timing: timing.map(TimingSummary::from),
    })
}

impl RunSummary {
    /// Checks what a report read from disk must satisfy. The class values
    /// are not required to sum to 100, since published tables are rounded.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Report("empty run name".into()));
        }
        if self.frames == 0 {
            return Err(Error::Report(format!(
                "run {:?} has zero frames",
                self.name
            )));
        }
        if self.c_avg.is_empty() {
            return Err(Error::Report(format!("run {:?} has no classes", self.name)));
        }
        for (class, v) in self.c_avg.iter() {
            if !v.is_finite() || !(0.0..=100.0).contains(&v) {
                return Err(Error::Report(format!(
                    "run {:?}: {class} percentage {v} outside [0, 100]",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let summary: RunSummary = serde_json::from_str(text)?;
        summary.validate()?;
        Ok(summary)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Report(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("summary serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ClassPercentages;

    fn averager(frames: &[[f64; 3]]) -> CumulativeAverager {
        let mut avg = CumulativeAverager::new(3);
        for f in frames {
            avg.accumulate(&ClassPercentages {
                values: f.to_vec(),
                frame_pixels: 1,
            })
            .unwrap();
        }
        avg
    }

    #[test]
    fn all_soil_run() {
        let avg = averager(&[[0.0, 100.0, 0.0]; 4]);
        let s = summarize("clean", &avg, &ClassScheme::default(), None).unwrap();
        assert_eq!(s.frames, 4);
        assert_eq!(s.c_avg.get("soil"), Some(100.0));
        assert_eq!(s.c_avg.get("straw"), Some(0.0));
        assert_eq!(s.c_avg.get("background"), Some(0.0));
    }

    #[test]
    fn snapshot_equals_value() {
        let avg = averager(&[[1.0, 60.0, 39.0], [0.5, 70.25, 29.25], [2.0, 80.0, 18.0]]);
        let s = summarize("x", &avg, &ClassScheme::default(), None).unwrap();
        assert_eq!(s.c_avg.values().collect::<Vec<_>>(), avg.value().unwrap());
    }

    #[test]
    fn empty_averager_rejected() {
        let avg = CumulativeAverager::new(3);
        assert!(summarize("x", &avg, &ClassScheme::default(), None).is_err());
    }

    #[test]
    fn json_schema_and_round_trip() {
        let avg = averager(&[[0.1, 70.0, 29.9], [0.3, 65.0, 34.7]]);
        let timing = TimingStats::from_samples(vec![1.0, 2.0, 4.0]).unwrap();
        let s = summarize(
            "Row Cleaner B",
            &avg,
            &ClassScheme::default(),
            Some(&timing),
        )
        .unwrap();
        let text = s.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["name"], "Row Cleaner B");
        assert_eq!(v["frames"], 2);
        assert!(v["c_avg"]["straw"].is_number());
        assert_eq!(v["timing"]["median_ms"], 2.0);
        assert_eq!(v["timing"]["samples"], 3);
        let back = RunSummary::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn timing_is_optional() {
        let text =
            r#"{"name":"A","frames":3,"c_avg":{"soil":58.35,"straw":40.87,"background":0.84}}"#;
        let s = RunSummary::from_json(text).unwrap();
        assert!(s.timing.is_none());
        assert!(!s.to_json().contains("timing"));
    }

    #[test]
    fn malformed_reports_rejected() {
        for bad in [
            r#"{"name":"A","frames":0,"c_avg":{"soil":1}}"#,
            r#"{"name":"","frames":1,"c_avg":{"soil":1}}"#,
            r#"{"name":"A","frames":1,"c_avg":{"soil":101}}"#,
            r#"{"name":"A","frames":1,"c_avg":{}}"#,
            r#"{"name":"A","frames":1}"#,
            r#"not json"#,
        ] {
            assert!(RunSummary::from_json(bad).is_err(), "{bad}");
        }
    }
}
