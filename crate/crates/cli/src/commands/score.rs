use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use anyhow::Context;
use iqakit_client::{
    extract_confidence, infer_all, BriefKeyTokens, EndpointConfig, HttpClient, InferenceRequest, KeyTokenSelector,
};
use iqakit_core::dataset::templates::SHORT_ANSWER_SUFFIX;
use iqakit_core::dataset::{parse_winner, read_jsonl, write_jsonl, Slot, Task};
use iqakit_core::metrics::{plcc, srcc};
use iqakit_core::rng::{derive_seed, hash_str};
use iqakit_core::scoring::{
    make_plan, run_plan, validate_weighting, win_rate_scores, ComparisonOutcome, ComparisonPlan, ConfidenceModel,
    PlannedPair, QualityScoreTable, SimulatedComparator, Strategy, Weighting, Winner,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{emit, require_file, thread_pool};
use crate::config::{resolve, usage, Overrides};
use crate::ScoreArgs;

const COMPARISON_QUESTION: &str = "Compare the overall quality of Image A and Image B. Which image is better?";
const DEFAULT_CONCURRENCY: usize = 4;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScoreOptions {
    groups: PathBuf,
    #[serde(default = "default_strategy")]
    strategy: String,
    k: Option<usize>,
    endpoint: Option<String>,
    token_env: Option<String>,
    timeout_secs: Option<f64>,
    max_retries: Option<u32>,
    #[serde(default)]
    oracle: bool,
    #[serde(default)]
    eps: f64,
    weighting: Option<String>,
    #[serde(default)]
    seed: u64,
    out: PathBuf,
    report: Option<PathBuf>,
    plans: Option<PathBuf>,
    outcomes: Option<PathBuf>,
    parallel: Option<usize>,
}

fn default_strategy() -> String {
    "round-robin".into()
}

/// One line of the groups file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Group {
    group_id: String,
    images: Vec<GroupImage>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupImage {
    id: String,
    #[serde(default)]
    path: Option<PathBuf>,
    #[serde(default)]
    mos: Option<f64>,
}

#[derive(Serialize)]
struct PlanLine<'a> {
    group_id: &'a str,
    #[serde(flatten)]
    pair: &'a PlannedPair,
}

#[derive(Serialize)]
struct GroupCorrelation {
    group_id: String,
    n: usize,
    srcc: Option<f64>,
    plcc: Option<f64>,
}

#[derive(Serialize)]
struct ScoreReport {
    images: usize,
    comparisons: usize,
    mean_srcc: Option<f64>,
    mean_plcc: Option<f64>,
    groups: Vec<GroupCorrelation>,
}

fn parse_strategy(name: &str, k: Option<usize>) -> anyhow::Result<Strategy> {
    match name.to_ascii_lowercase().replace('_', "-").as_str() {
        "round-robin" => Ok(Strategy::RoundRobin),
        "random-k" => Ok(Strategy::RandomK {
            k: k.ok_or_else(|| usage("--strategy random-k needs --k"))?,
        }),
        other => Err(usage(format!("unknown strategy {other:?}; use round-robin or random-k"))),
    }
}

fn parse_weighting(name: Option<&str>, strategy: Strategy) -> anyhow::Result<Weighting> {
    match name.map(|s| s.to_ascii_lowercase().replace('-', "_")).as_deref() {
        None => Ok(match strategy {
            Strategy::RandomK { k } if k <= 2 => Weighting::ConfidenceWeighted,
            _ => Weighting::Unweighted,
        }),
        Some("unweighted") => Ok(Weighting::Unweighted),
        Some("confidence" | "confidence_weighted") => Ok(Weighting::ConfidenceWeighted),
        Some(other) => Err(usage(format!("unknown weighting {other:?}; use unweighted or confidence"))),
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn run(args: ScoreArgs) -> anyhow::Result<()> {
    let mut o = Overrides::default();
    o.set("groups", args.groups)
        .set("strategy", args.strategy)
        .set("k", args.k)
        .set("endpoint", args.endpoint)
        .set("token_env", args.token_env)
        .set("timeout_secs", args.timeout_secs)
        .set("max_retries", args.max_retries)
        .flag("oracle", args.oracle)
        .set("eps", args.eps)
        .set("weighting", args.weighting)
        .set("seed", args.seed)
        .set("out", args.out)
        .set("report", args.report)
        .set("plans", args.plans)
        .set("outcomes", args.outcomes)
        .set("parallel", args.parallel);
    let opts: ScoreOptions = resolve(args.config.as_deref(), o)?;

    let strategy = parse_strategy(&opts.strategy, opts.k)?;
    let weighting = parse_weighting(opts.weighting.as_deref(), strategy)?;
    if opts.oracle == opts.endpoint.is_some() {
        return Err(usage("choose exactly one of --endpoint and --oracle"));
    }
    require_file("groups", &opts.groups)?;
    let groups: Vec<Group> = read_jsonl(&opts.groups).map_err(usage)?;
    if groups.is_empty() {
        return Err(usage(format!("{} holds no groups", opts.groups.display())));
    }
    let base = opts.groups.parent().unwrap_or(Path::new("")).to_path_buf();

    let mut seen = HashSet::new();
    for g in &groups {
        for img in &g.images {
            if !seen.insert(img.id.as_str()) {
                return Err(usage(format!("image id {:?} appears twice", img.id)));
            }
        }
    }
    let plans = groups
        .iter()
        .map(|g| {
            let ids: Vec<String> = g.images.iter().map(|i| i.id.clone()).collect();
            let plan = make_plan(&g.group_id, &ids, strategy, derive_seed(opts.seed, hash_str(&g.group_id)))
                .map_err(usage)?;
            validate_weighting(&plan, weighting).map_err(usage)?;
            Ok(plan)
        })
        .collect::<anyhow::Result<Vec<ComparisonPlan>>>()?;

    let outcomes: Vec<Vec<ComparisonOutcome>> = if opts.oracle {
        oracle_outcomes(&groups, &plans, &opts)?
    } else {
        endpoint_outcomes(&groups, &plans, &opts, &base, weighting)?
    };

    let mut table = QualityScoreTable::default();
    for (g, outs) in groups.iter().zip(&outcomes) {
        let ids: Vec<String> = g.images.iter().map(|i| i.id.clone()).collect();
        let t = win_rate_scores(&ids, outs, weighting).with_context(|| format!("group {}", g.group_id))?;
        table.scores.extend(t.scores);
    }
    if let Some(dir) = opts.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::fs::File::create(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
    table.write_csv(file)?;

    if let Some(path) = &opts.plans {
        let lines: Vec<PlanLine> = plans
            .iter()
            .flat_map(|p| p.pairs.iter().map(|pair| PlanLine { group_id: &p.group_id, pair }))
            .collect();
        write_jsonl(&lines, path)?;
    }
    if let Some(path) = &opts.outcomes {
        write_jsonl(&outcomes.concat(), path)?;
    }

    let comparisons = outcomes.iter().map(Vec::len).sum();
    eprintln!("scored {} images from {comparisons} comparisons", table.scores.len());
    if groups.iter().all(|g| g.images.iter().all(|i| i.mos.is_some())) {
        let report = correlation_report(&groups, &table, comparisons);
        emit(opts.report.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    }
    Ok(())
}

fn correlation_report(groups: &[Group], table: &QualityScoreTable, comparisons: usize) -> ScoreReport {
    let rows: Vec<GroupCorrelation> = groups
        .iter()
        .map(|g| {
            let mos: Vec<f64> = g.images.iter().map(|i| i.mos.unwrap_or(f64::NAN)).collect();
            let score: Vec<f64> = g.images.iter().map(|i| table.get(&i.id).unwrap_or(f64::NAN)).collect();
            GroupCorrelation {
                group_id: g.group_id.clone(),
                n: g.images.len(),
                srcc: srcc(&score, &mos).ok(),
                plcc: plcc(&score, &mos).ok(),
            }
        })
        .collect();
    let s: Vec<f64> = rows.iter().filter_map(|r| r.srcc).collect();
    let p: Vec<f64> = rows.iter().filter_map(|r| r.plcc).collect();
    ScoreReport {
        images: table.scores.len(),
        comparisons,
        mean_srcc: mean(&s),
        mean_plcc: mean(&p),
        groups: rows,
    }
}

fn oracle_outcomes(
    groups: &[Group],
    plans: &[ComparisonPlan],
    opts: &ScoreOptions,
) -> anyhow::Result<Vec<Vec<ComparisonOutcome>>> {
    let mut comparators = Vec::with_capacity(groups.len());
    for g in groups {
        let mut truth = HashMap::new();
        for img in &g.images {
            let mos = img
                .mos
                .ok_or_else(|| usage(format!("--oracle needs a MOS for image {:?}", img.id)))?;
            truth.insert(img.id.clone(), mos);
        }
        let seed = derive_seed(derive_seed(opts.seed, hash_str(&g.group_id)), 1);
        comparators.push(SimulatedComparator::new(truth, opts.eps, ConfidenceModel::default(), seed).map_err(usage)?);
    }
    let pool = thread_pool(opts.parallel)?;
    pool.install(|| {
        plans
            .par_iter()
            .zip(comparators.par_iter())
            .map(|(plan, cmp)| run_plan(plan, cmp).with_context(|| format!("group {}", plan.group_id)))
            .collect()
    })
}

fn endpoint_outcomes(
    groups: &[Group],
    plans: &[ComparisonPlan],
    opts: &ScoreOptions,
    base: &Path,
    weighting: Weighting,
) -> anyhow::Result<Vec<Vec<ComparisonOutcome>>> {
    let mut config = EndpointConfig::new(opts.endpoint.clone().expect("checked by caller"));
    config.token_env = opts.token_env.clone();
    if let Some(t) = opts.timeout_secs {
        config.timeout_secs = t;
    }
    if let Some(r) = opts.max_retries {
        config.max_retries = r;
    }
    let client = HttpClient::new(config).map_err(usage)?;

    let mut paths: HashMap<&str, String> = HashMap::new();
    for g in groups {
        for img in &g.images {
            let p = img
                .path
                .as_ref()
                .ok_or_else(|| usage(format!("image {:?} has no path", img.id)))?;
            let p = if p.is_absolute() { p.clone() } else { base.join(p) };
            require_file("groups image", &p)?;
            paths.insert(&img.id, p.to_string_lossy().into_owned());
        }
    }
    let question = format!("{COMPARISON_QUESTION} {SHORT_ANSWER_SUFFIX}");
    let mut requests = Vec::new();
    let mut index: Vec<(usize, &PlannedPair)> = Vec::new();
    for (gi, plan) in plans.iter().enumerate() {
        for (k, pair) in plan.pairs.iter().enumerate() {
            let (a, b) = pair.presented();
            let mut req = InferenceRequest::new(
                format!("{}:{k}", plan.group_id),
                question.clone(),
                vec![paths[a].clone(), paths[b].clone()],
            );
            req.want_logprobs = weighting == Weighting::ConfidenceWeighted;
            requests.push(req);
            index.push((gi, pair));
        }
    }
    let responses = infer_all(&client, &requests, opts.parallel.unwrap_or(DEFAULT_CONCURRENCY));
    let keys = BriefKeyTokens(Task::InstantRating);
    let mut failures = BTreeMap::new();
    let mut outcomes: Vec<Vec<ComparisonOutcome>> = vec![Vec::new(); plans.len()];
    for ((req, resp), (gi, pair)) in requests.iter().zip(responses).zip(index) {
        let id = req.id.clone().unwrap_or_default();
        let resp = match resp {
            Ok(r) => r,
            Err(e) => {
                failures.insert(id, e.to_string());
                continue;
            }
        };
        let Some(slot) = parse_winner(&resp.text) else {
            failures.insert(id, format!("no winner in {:?}", resp.text));
            continue;
        };
        let confidence = match weighting {
            Weighting::Unweighted => 1.0,
            Weighting::ConfidenceWeighted => match extract_confidence(&resp, &keys.select(&resp)) {
                Ok(Some(c)) => c,
                Ok(None) => {
                    failures.insert(id, "no key token to take confidence from".into());
                    continue;
                }
                Err(e) => {
                    failures.insert(id, e.to_string());
                    continue;
                }
            },
        };
        let i_won = (slot == Slot::A) == pair.i_is_a;
        outcomes[gi].push(ComparisonOutcome {
            i: pair.i.clone(),
            j: pair.j.clone(),
            winner: if i_won { Winner::I } else { Winner::J },
            confidence,
        });
    }
    if !failures.is_empty() {
        let list: Vec<String> = failures.iter().map(|(id, e)| format!("  {id}: {e}")).collect();
        anyhow::bail!("{} comparison(s) failed:\n{}", failures.len(), list.join("\n"));
    }
    Ok(outcomes)
}
