use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{bleu, identification_accuracy, rating_accuracy, rouge_l};
use crate::dataset::{parse_identification, parse_winner, IdLabel, SampleRecord, Slot, Task};
use crate::error::{Error, Result};

/// One model output line: `{"id": ..., "text": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub text: String,
}

/// Task-specific reading of a prediction.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Labels(Vec<IdLabel>),
    Winner(Slot),
    Text(String),
    Unparseable,
}

pub fn parse_prediction(task: Task, text: &str) -> Parsed {
    match task {
        Task::DistortionIdentification => parse_identification(text).map_or(Parsed::Unparseable, Parsed::Labels),
        Task::InstantRating => parse_winner(text).map_or(Parsed::Unparseable, Parsed::Winner),
        Task::AssessmentReasoningPrompt | Task::ComparisonReasoningPrompt => Parsed::Text(text.to_owned()),
    }
}

/// Mean of one metric over a subset of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub setting: String,
    pub subset: String,
    pub n: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub task: Task,
    /// Overall mean of each metric.
    pub metrics: BTreeMap<String, f64>,
    /// Per-setting and per-subset means of each metric.
    pub cells: BTreeMap<String, Vec<Cell>>,
    pub n: usize,
    pub unparseable: usize,
    pub unparseable_rate: f64,
}

const ALL: &str = "all";

fn arity_subset(arity: Option<usize>) -> &'static str {
    match arity {
        Some(0) => "pristine",
        Some(1) => "single",
        Some(_) => "multi",
        None => ALL,
    }
}

#[derive(Default)]
struct Acc {
    sum: f64,
    n: usize,
}

impl MetricReport {
    /// Fixed-width table: one row per cell, one column per metric.
    pub fn to_table(&self) -> String {
        let names: Vec<&String> = self.metrics.keys().collect();
        type Row = (usize, Vec<Option<f64>>);
        let mut rows: BTreeMap<(String, String), Row> = BTreeMap::new();
        for (k, name) in names.iter().enumerate() {
            for c in &self.cells[*name] {
                let row = rows
                    .entry((c.setting.clone(), c.subset.clone()))
                    .or_insert_with(|| (c.n, vec![None; names.len()]));
                row.1[k] = Some(c.value);
            }
        }
        let mut header = vec!["setting".to_string(), "subset".to_string(), "n".to_string()];
        header.extend(names.iter().map(|s| s.to_string()));
        let mut table = vec![header];
        for ((setting, subset), (n, values)) in rows {
            let mut line = vec![setting, subset, n.to_string()];
            line.extend(values.iter().map(|v| v.map_or("-".into(), |v| format!("{v:.4}"))));
            table.push(line);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|k| table.iter().map(|r| r[k].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &table {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(k, (s, w))| if k < 2 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                .collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        writeln!(
            out,
            "unparseable: {}/{} ({:.4})",
            self.unparseable, self.n, self.unparseable_rate
        )
        .unwrap();
        out
    }
}

fn index_unique<'a, T>(items: &'a [T], id: impl Fn(&T) -> &str, what: &str) -> Result<HashMap<&'a str, &'a T>> {
    let mut map = HashMap::with_capacity(items.len());
    for it in items {
        if map.insert(id(it), it).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate {what} id {:?}", id(it))));
        }
    }
    Ok(map)
}

/// Score predictions against the gold records of `task`. Every gold record
/// of the task must have exactly one prediction and vice versa.
pub fn evaluate_run(predictions: &[Prediction], gold: &[SampleRecord], task: Task) -> Result<MetricReport> {
    let gold: Vec<&SampleRecord> = gold.iter().filter(|r| r.task == task).collect();
    if gold.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "gold set has no {} records",
            task.flag_name()
        )));
    }
    let preds = index_unique(predictions, |p| p.id.as_str(), "prediction")?;
    let gold_ids = index_unique(&gold, |r| r.id.as_str(), "gold")?;
    let mut missing: Vec<&str> = gold_ids.keys().filter(|id| !preds.contains_key(*id)).copied().collect();
    let mut extra: Vec<&str> = preds.keys().filter(|id| !gold_ids.contains_key(*id)).copied().collect();
    if !missing.is_empty() || !extra.is_empty() {
        missing.sort_unstable();
        extra.sort_unstable();
        let list = |ids: &[&str]| ids.iter().map(|id| format!("{id:?}")).collect::<Vec<_>>().join(", ");
        let mut parts = Vec::new();
        if !missing.is_empty() {
            parts.push(format!("no prediction for gold id(s) {}", list(&missing)));
        }
        if !extra.is_empty() {
            parts.push(format!("no gold record for prediction id(s) {}", list(&extra)));
        }
        return Err(Error::InvalidArgument(parts.join("; ")));
    }

    let mut accs: BTreeMap<String, BTreeMap<(String, String), Acc>> = BTreeMap::new();
    let mut unparseable = 0;
    for record in &gold {
        let pred = preds[record.id.as_str()];
        let parsed = parse_prediction(task, &pred.text);
        if parsed == Parsed::Unparseable {
            unparseable += 1;
        }
        let scores: Vec<(&str, f64)> = match task {
            Task::DistortionIdentification => {
                let gt = record
                    .gold_labels()
                    .ok_or_else(|| Error::InvalidArgument(format!("gold {} has no recipe", record.id)))?;
                let p = match &parsed {
                    Parsed::Labels(l) => l.as_slice(),
                    _ => &[],
                };
                vec![("accuracy", identification_accuracy(p, &gt)?)]
            }
            Task::InstantRating => {
                let gt = record.gold_winner().ok_or_else(|| {
                    Error::InvalidArgument(format!("gold {} names no winner", record.id))
                })?;
                let p = match parsed {
                    Parsed::Winner(s) => Some(s),
                    _ => None,
                };
                vec![("accuracy", rating_accuracy(p, gt))]
            }
            Task::AssessmentReasoningPrompt | Task::ComparisonReasoningPrompt => {
                if record.response.trim().is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "gold {} has no reference response",
                        record.id
                    )));
                }
                vec![
                    ("bleu", bleu(&pred.text, &record.response)?),
                    ("rouge_l", rouge_l(&pred.text, &record.response)?),
                ]
            }
        };
        let setting = record.setting.to_string();
        let subset = arity_subset(record.arity());
        for (name, v) in scores {
            let cells = accs.entry(name.to_string()).or_default();
            let mut keys = vec![(ALL.to_string(), ALL.to_string()), (setting.clone(), ALL.to_string())];
            if subset != ALL {
                keys.push((ALL.to_string(), subset.to_string()));
                keys.push((setting.clone(), subset.to_string()));
            }
            for key in keys {
                let a = cells.entry(key).or_default();
                a.sum += v;
                a.n += 1;
            }
        }
    }

    let mut metrics = BTreeMap::new();
    let mut cells = BTreeMap::new();
    for (name, map) in accs {
        let list: Vec<Cell> = map
            .into_iter()
            .map(|((setting, subset), a)| Cell {
                setting,
                subset,
                n: a.n,
                value: a.sum / a.n as f64,
            })
            .collect();
        let overall = list
            .iter()
            .find(|c| c.setting == ALL && c.subset == ALL)
            .map(|c| c.value)
            .unwrap_or(0.0);
        metrics.insert(name.clone(), overall);
        cells.insert(name, list);
    }
    let n = gold.len();
    Ok(MetricReport {
        task,
        metrics,
        cells,
        n,
        unparseable,
        unparseable_rate: unparseable as f64 / n as f64,
    })
}
