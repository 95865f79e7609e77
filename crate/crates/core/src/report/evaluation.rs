use serde::{Deserialize, Serialize};

use super::format::{csv_field, fmt_2dp, render_table};
use super::{Format, TimingSummary};
use crate::metrics::ConfusionMatrix;
use crate::raster::ClassScheme;

/// Column order of model-comparison tables; other classes follow in id order.
const PREFERRED_ORDER: [&str; 3] = ["straw", "soil", "background"];

/// Per-class scores in percent. `None` marks a class absent from the
/// score's denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub class: String,
    pub iou_pct: Option<f64>,
    pub acc_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub name: String,
    pub frames: u64,
    pub pixels: u64,
    pub classes: Vec<ClassScore>,
    pub overall_accuracy_pct: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingSummary>,
}

impl EvaluationReport {
    pub fn new(name: &str, frames: u64, cm: &ConfusionMatrix, scheme: &ClassScheme) -> Self {
        let pct = |r: Option<f64>| r.map(|v| v * 100.0);
        let classes = scheme
            .names()
            .iter()
            .zip(cm.iou_per_class().into_iter().zip(cm.acc_per_class()))
            .map(|(class, (iou, acc))| ClassScore {
                class: class.clone(),
                iou_pct: pct(iou),
                acc_pct: pct(acc),
            })
            .collect();
        EvaluationReport {
            name: name.to_owned(),
            frames,
            pixels: cm.total(),
            classes,
            overall_accuracy_pct: pct(cm.overall_accuracy()),
            timing: None,
        }
    }

    fn display_order(&self) -> Vec<&ClassScore> {
        let mut ordered: Vec<&ClassScore> = PREFERRED_ORDER
            .iter()
            .filter_map(|name| self.classes.iter().find(|c| c.class == *name))
            .collect();
        ordered.extend(
            self.classes
                .iter()
                .filter(|c| !PREFERRED_ORDER.contains(&c.class.as_str())),
        );
        ordered
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(self).expect("report serializes");
                text.push('\n');
                text
            }
            Format::Csv => {
                let classes = self.display_order();
                let mut header = vec!["model".to_string()];
                let mut row = vec![csv_field(&self.name)];
                for c in &classes {
                    header.push(format!("{}_iou_pct", c.class));
                    header.push(format!("{}_acc_pct", c.class));
                    row.push(c.iou_pct.map(|v| v.to_string()).unwrap_or_default());
                    row.push(c.acc_pct.map(|v| v.to_string()).unwrap_or_default());
                }
                header.extend(["overall_acc_pct".into(), "frames".into()]);
                row.push(
                    self.overall_accuracy_pct
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                );
                row.push(self.frames.to_string());
                format!("{}\n{}\n", header.join(","), row.join(","))
            }
            Format::Text => {
                let cell = |v: Option<f64>| v.map(fmt_2dp).unwrap_or_else(|| "absent".into());
                let classes = self.display_order();
                let mut header = vec!["Model".to_string()];
                let mut row = vec![self.name.clone()];
                for c in &classes {
                    let label = c.class.to_uppercase();
                    header.push(format!("{label} IoU (%)"));
                    header.push(format!("{label} Acc (%)"));
                    row.push(cell(c.iou_pct));
                    row.push(cell(c.acc_pct));
                }
                header.push("Overall Acc (%)".into());
                row.push(cell(self.overall_accuracy_pct));
                if let Some(t) = &self.timing {
                    header.push("Inference Time (ms)".into());
                    row.push(fmt_2dp(t.mean_ms));
                }
                render_table(&header, &[row])
            }
        }
    }
}
