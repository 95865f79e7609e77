use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::format::{csv_field, fmt_2dp, render_table};
use super::{Format, RunSummary};
use crate::error::{Error, Result};

/// Display columns, in the order published row-cleaner tables use.
const DISPLAY_CLASSES: [&str; 3] = ["soil", "straw", "background"];

pub const CSV_HEADER: &str = "row_cleaner,soil_pct,straw_pct,background_pct,frames";

/// Runs side by side. Names are unique and every run reports soil and straw.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    rows: Vec<RunSummary>,
}

impl ComparisonTable {
    pub fn new(rows: Vec<RunSummary>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Report("comparison needs at least one run".into()));
        }
        let mut names = HashSet::new();
        for row in &rows {
            row.validate()?;
            if !names.insert(row.name.as_str()) {
                return Err(Error::Report(format!("duplicate run name {:?}", row.name)));
            }
            for class in ["soil", "straw"] {
                if row.c_avg.get(class).is_none() {
                    return Err(Error::Report(format!(
                        "run {:?} has no {class} percentage",
                        row.name
                    )));
                }
            }
        }
        Ok(ComparisonTable { rows })
    }

    pub fn rows(&self) -> &[RunSummary] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedRun {
    pub name: String,
    pub straw_pct: f64,
    pub soil_pct: f64,
}

/// Runs ordered cleanest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub runs: Vec<RankedRun>,
}

impl Ranking {
    pub fn names(&self) -> Vec<&str> {
        self.runs.iter().map(|r| r.name.as_str()).collect()
    }
}

fn cleanliness_order(a: &RankedRun, b: &RankedRun) -> Ordering {
    a.straw_pct
        .total_cmp(&b.straw_pct)
        .then_with(|| b.soil_pct.total_cmp(&a.soil_pct))
        .then_with(|| a.name.cmp(&b.name))
}

/// Least straw first; ties go to more soil, then to the name. Background
/// does not take part.
pub fn rank_by_cleanliness(table: &ComparisonTable) -> Ranking {
    let mut runs: Vec<RankedRun> = table
        .rows
        .iter()
        .map(|r| RankedRun {
            name: r.name.clone(),
            straw_pct: r.c_avg.get("straw").unwrap_or(f64::NAN),
            soil_pct: r.c_avg.get("soil").unwrap_or(f64::NAN),
        })
        .collect();
    runs.sort_by(cleanliness_order);
    Ranking { runs }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDocument {
    pub runs: Vec<RunSummary>,
    pub ranking: Vec<String>,
}

fn pct_cell(row: &RunSummary, class: &str) -> String {
    row.c_avg
        .get(class)
        .map(fmt_2dp)
        .unwrap_or_else(|| "-".into())
}

fn csv_row(row: &RunSummary) -> String {
    let mut fields = vec![csv_field(&row.name)];
    fields.extend(
        DISPLAY_CLASSES
            .iter()
            .map(|c| row.c_avg.get(c).map(|v| v.to_string()).unwrap_or_default()),
    );
    fields.push(row.frames.to_string());
    fields.join(",")
}

fn text_rows(rows: &[RunSummary]) -> String {
    let with_timing = rows.iter().any(|r| r.timing.is_some());
    let mut header = vec![
        "Row Cleaner".to_string(),
        "Amount of Soil (%)".into(),
        "Amount of Straw (%)".into(),
        "Amount of Background (%)".into(),
        "Frames".into(),
    ];
    if with_timing {
        header.extend(["Mean (ms)".into(), "Median (ms)".into(), "p95 (ms)".into()]);
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut cells = vec![r.name.clone()];
            cells.extend(DISPLAY_CLASSES.iter().map(|c| pct_cell(r, c)));
            cells.push(r.frames.to_string());
            if with_timing {
                match &r.timing {
                    Some(t) => cells.extend([t.mean_ms, t.median_ms, t.p95_ms].map(fmt_2dp)),
                    None => cells.extend(["-", "-", "-"].map(String::from)),
                }
            }
            cells
        })
        .collect();
    render_table(&header, &body)
}

/// Renders a single run in the given format. JSON output is the run
/// report schema read back by [`RunSummary::load`].
pub fn emit_summary(summary: &RunSummary, format: Format) -> String {
    match format {
        Format::Json => summary.to_json(),
        Format::Csv => format!("{CSV_HEADER}\n{}\n", csv_row(summary)),
        Format::Text => text_rows(std::slice::from_ref(summary)),
    }
}

/// Renders the table and its cleanliness ranking.
pub fn emit(table: &ComparisonTable, format: Format) -> String {
    let ranking = rank_by_cleanliness(table);
    match format {
        Format::Json => {
            let doc = ComparisonDocument {
                runs: table.rows.clone(),
                ranking: ranking.runs.iter().map(|r| r.name.clone()).collect(),
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("comparison serializes");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut text = String::from(CSV_HEADER);
            text.push('\n');
            for row in &table.rows {
                text.push_str(&csv_row(row));
                text.push('\n');
            }
            text
        }
        Format::Text => {
            let mut text = text_rows(&table.rows);
            text.push('\n');
            let header = ["Rank", "Row Cleaner", "Straw (%)", "Soil (%)"].map(String::from);
            let body: Vec<Vec<String>> = ranking
                .runs
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        (i + 1).to_string(),
                        r.name.clone(),
                        fmt_2dp(r.straw_pct),
                        fmt_2dp(r.soil_pct),
                    ]
                })
                .collect();
            text.push_str(&render_table(&header, &body));
            text
        }
    }
}
