use std::path::PathBuf;

use iqakit_core::dataset::{read_jsonl, SampleRecord, Task};
use iqakit_core::metrics::{evaluate_run, Prediction};
use serde::Deserialize;

use super::{emit, require_file};
use crate::config::{normalize, usage, Overrides};
use crate::EvalArgs;

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ReportFormat {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalOptions {
    pred: PathBuf,
    gold: PathBuf,
    task: Task,
    #[serde(default)]
    report: ReportFormat,
    out: Option<PathBuf>,
}

pub fn run(args: EvalArgs) -> anyhow::Result<()> {
    let mut file = match &args.config {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    let mut o = Overrides::default();
    o.set("pred", args.pred)
        .set("gold", args.gold)
        .set("task", args.task)
        .set("report", args.report)
        .set("out", args.out);
    for src in [&mut file, &mut o] {
        normalize("task", src, |s| s.parse::<Task>().map_err(usage))?;
    }
    file.extend(o);
    let opts: EvalOptions = crate::config::resolve(None, file)?;
    require_file("pred", &opts.pred)?;
    require_file("gold", &opts.gold)?;

    let preds: Vec<Prediction> = read_jsonl(&opts.pred)?;
    let gold: Vec<SampleRecord> = read_jsonl(&opts.gold)?;
    let report = evaluate_run(&preds, &gold, opts.task)?;
    let text = match opts.report {
        ReportFormat::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
        ReportFormat::Table => report.to_table(),
    };
    emit(opts.out.as_deref(), &text)
}
