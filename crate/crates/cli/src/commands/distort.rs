use std::path::{Path, PathBuf};

use anyhow::Context;
use iqakit_core::dataset::read_jsonl;
use iqakit_core::distort::{distort_file, DistortionSpec, Params, Severity, SubCategory};
use iqakit_core::rng::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{require_file, thread_pool};
use crate::config::{resolve, usage, Overrides};
use crate::DistortArgs;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistortOptions {
    input: Option<PathBuf>,
    sub: Option<String>,
    level: Option<u8>,
    #[serde(default)]
    seed: u64,
    output: Option<PathBuf>,
    params: Option<Params>,
    batch: Option<PathBuf>,
    parallel: Option<usize>,
}

/// One line of a batch file. Without a seed, job `i` uses
/// `derive_seed(seed, i)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Job {
    input: PathBuf,
    output: PathBuf,
    sub: String,
    level: u8,
    seed: Option<u64>,
    params: Option<Params>,
}

#[derive(Serialize)]
struct Done<'a> {
    output: &'a Path,
    #[serde(flatten)]
    spec: &'a DistortionSpec,
}

fn make_spec(sub: &str, level: u8, seed: u64, params: Option<Params>) -> anyhow::Result<DistortionSpec> {
    let sub = SubCategory::from_id(sub).ok_or_else(|| usage(format!("unknown sub-category {sub:?}")))?;
    let severity = Severity::from_level(level).ok_or_else(|| usage(format!("level must be 1 to 5, got {level}")))?;
    let spec = DistortionSpec::new(sub, severity, seed);
    match params {
        Some(p) => spec.with_params(p).map_err(usage),
        None => Ok(spec),
    }
}

fn relative_to(base: &Path, p: PathBuf) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

pub fn run(args: DistortArgs) -> anyhow::Result<()> {
    let params = args
        .params
        .map(|s| serde_json::from_str::<serde_json::Value>(&s))
        .transpose()
        .map_err(|e| usage(format!("--params is not JSON: {e}")))?;
    let mut o = Overrides::default();
    o.set("input", args.input)
        .set("sub", args.sub)
        .set("level", args.level)
        .set("seed", args.seed)
        .set("output", args.output)
        .set("params", params)
        .set("batch", args.batch)
        .set("parallel", args.parallel);
    let opts: DistortOptions = resolve(args.config.as_deref(), o)?;
    let pool = thread_pool(opts.parallel)?;

    if let Some(batch) = &opts.batch {
        require_file("batch", batch)?;
        let base = batch.parent().unwrap_or(Path::new("")).to_path_buf();
        let jobs: Vec<Job> = read_jsonl(batch).map_err(usage)?;
        let specs = jobs
            .into_iter()
            .enumerate()
            .map(|(i, job)| {
                let seed = job.seed.unwrap_or_else(|| derive_seed(opts.seed, i as u64));
                let spec = make_spec(&job.sub, job.level, seed, job.params)
                    .with_context(|| format!("batch line {}", i + 1))?;
                Ok((relative_to(&base, job.input), relative_to(&base, job.output), spec))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        for (input, _, _) in &specs {
            require_file("batch input", input)?;
        }
        pool.install(|| {
            specs.par_iter().try_for_each(|(input, output, spec)| {
                if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                distort_file(input, spec, output).with_context(|| format!("distorting {}", input.display()))
            })
        })?;
        for (_, output, spec) in &specs {
            println!("{}", serde_json::to_string(&Done { output, spec })?);
        }
        return Ok(());
    }

    let input = opts.input.ok_or_else(|| usage("--input is required"))?;
    let output = opts.output.ok_or_else(|| usage("--output is required"))?;
    let sub = opts.sub.ok_or_else(|| usage("--sub is required"))?;
    let level = opts.level.ok_or_else(|| usage("--level is required"))?;
    let spec = make_spec(&sub, level, opts.seed, opts.params)?;
    require_file("input", &input)?;
    pool.install(|| distort_file(&input, &spec, &output))
        .with_context(|| format!("distorting {}", input.display()))?;
    println!("{}", serde_json::to_string(&Done { output: &output, spec: &spec })?);
    Ok(())
}
