//! The dataset build shared by the command line and the scripting bindings.
//!
//! Record `i` draws everything from `derive_seed(seed, i)`, so output does
//! not depend on the worker count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::builder::{
    build_assessment_prompt, build_comparison_prompt, build_identification_sample, build_rating_sample,
    ComparisonResult, ImageSink,
};
use super::{write_jsonl, MosTable, SampleRecord, Slot, Task};
use crate::compose::{sample_recipe, Recipe, SampleMode, Setting, DEFAULT_PRISTINE_FRAC, NON_REFERENCE_EXCLUDED};
use crate::distort::{apply_all, Severity};
use crate::error::{Error, Result};
use crate::image::{load_image, psnr, ImageBuf};
use crate::rng::derive_seed;

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];
const MAX_REDRAWS: u64 = 64;

fn default_pristine_frac() -> f64 {
    DEFAULT_PRISTINE_FRAC
}

fn default_multi_frac() -> f64 {
    0.5
}

fn default_count() -> usize {
    100
}

/// Build options. Keys match the command-line flags (`pristine_frac` and
/// `pristine-frac` are both accepted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    #[serde(default)]
    pub refs: Option<PathBuf>,
    pub task: Task,
    pub setting: Setting,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_pristine_frac", alias = "pristine-frac")]
    pub pristine_frac: f64,
    #[serde(default = "default_multi_frac", alias = "multi-frac")]
    pub multi_frac: f64,
    #[serde(default)]
    pub seed: u64,
    pub out: PathBuf,
    #[serde(default)]
    pub mos: Option<PathBuf>,
    #[serde(default)]
    pub parallel: Option<usize>,
}

impl BuildConfig {
    pub fn new(task: Task, setting: Setting, out: impl Into<PathBuf>) -> Self {
        Self {
            refs: None,
            task,
            setting,
            count: default_count(),
            pristine_frac: DEFAULT_PRISTINE_FRAC,
            multi_frac: default_multi_frac(),
            seed: 0,
            out: out.into(),
            mos: None,
            parallel: None,
        }
    }

    /// Check keys before any work starts.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: String| {
            Err(Error::Config {
                key: key.into(),
                message,
            })
        };
        if self.count == 0 {
            return bad("count", "must be at least 1".into());
        }
        for (key, v) in [("pristine_frac", self.pristine_frac), ("multi_frac", self.multi_frac)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(key, format!("must be in [0, 1], got {v}"));
            }
        }
        if self.parallel == Some(0) {
            return bad("parallel", "must be at least 1".into());
        }
        match self.task {
            Task::InstantRating => match &self.mos {
                None => return bad("mos", "instant-rating needs a MOS CSV".into()),
                Some(p) if !p.is_file() => return bad("mos", format!("{} is not a file", p.display())),
                _ => {}
            },
            _ => match &self.refs {
                None => return bad("refs", format!("{} needs a reference image directory", self.task)),
                Some(p) if !p.is_dir() => {
                    return bad("refs", format!("{} is not a directory", p.display()))
                }
                _ => {}
            },
        }
        if self.out.as_os_str().is_empty() {
            return bad("out", "must be a file path".into());
        }
        Ok(())
    }
}

/// Where generated images go for a dataset written to `out`:
/// `<dir>/<stem>_images/`.
pub fn output_image_dir(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".into());
    out.with_file_name(format!("{stem}_images"))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildSummary {
    pub records: usize,
    pub pristine: usize,
    pub multi: usize,
    /// Records containing each super-category.
    pub per_category: BTreeMap<String, usize>,
    /// Specs per severity level.
    pub per_level: BTreeMap<u8, usize>,
    /// Slight specs in the categories dropped without a reference.
    pub slight_in_excluded: usize,
}

impl BuildSummary {
    fn add(&mut self, record: &SampleRecord) {
        self.records += 1;
        let Some(recipe) = record.recipe_meta.first() else {
            return;
        };
        for r in &record.recipe_meta {
            for s in &r.specs {
                *self.per_level.entry(s.severity.level()).or_default() += 1;
                if s.severity == Severity::Slight && NON_REFERENCE_EXCLUDED.contains(&s.super_category()) {
                    self.slight_in_excluded += 1;
                }
            }
        }
        if recipe.is_pristine() {
            self.pristine += 1;
        }
        if recipe.len() > 1 {
            self.multi += 1;
        }
        for c in recipe.super_categories() {
            *self.per_category.entry(c.name().to_owned()).or_default() += 1;
        }
    }
}

fn list_refs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Config {
            key: "refs".into(),
            message: format!("no images in {}", dir.display()),
        });
    }
    Ok(files)
}

struct Refs {
    paths: Vec<String>,
    images: Vec<ImageBuf>,
}

impl Refs {
    fn load(dir: &Path) -> Result<Self> {
        let files = list_refs(dir)?;
        let images = files.par_iter().map(load_image).collect::<Result<Vec<_>>>()?;
        let paths = files.iter().map(|p| p.to_string_lossy().replace('\\', "/")).collect();
        Ok(Self { paths, images })
    }

    fn pick(&self, seed: u64) -> usize {
        (derive_seed(seed, 0) % self.images.len() as u64) as usize
    }
}

struct Job<'a> {
    cfg: &'a BuildConfig,
    refs: Option<Refs>,
    mos: Option<MosTable>,
    rateable: Vec<String>,
    sink: ImageSink,
}

impl Job<'_> {
    fn mode(&self) -> SampleMode {
        SampleMode::Mixed {
            pristine_frac: self.cfg.pristine_frac,
            multi_frac: self.cfg.multi_frac,
        }
    }

    fn recipe(&self, seed: u64, stream: u64) -> Result<Recipe> {
        sample_recipe(derive_seed(seed, stream), self.mode(), self.cfg.setting)
    }

    fn refs(&self) -> &Refs {
        self.refs.as_ref().expect("refs loaded for image tasks")
    }

    fn record(&self, index: usize) -> Result<SampleRecord> {
        let cfg = self.cfg;
        let id = cfg.task.record_id(index);
        let seed = derive_seed(cfg.seed, index as u64);
        match cfg.task {
            Task::DistortionIdentification => {
                let refs = self.refs();
                let k = refs.pick(seed);
                let recipe = self.recipe(seed, 1)?;
                build_identification_sample(
                    &id,
                    &refs.images[k],
                    &refs.paths[k],
                    &recipe,
                    cfg.setting,
                    derive_seed(seed, 2),
                    &self.sink,
                )
            }
            Task::AssessmentReasoningPrompt => {
                let refs = self.refs();
                let k = refs.pick(seed);
                let recipe = self.recipe(seed, 1)?;
                let img = apply_all(&refs.images[k], &recipe.specs)?;
                let path = self.sink.write(&id, &img)?;
                build_assessment_prompt(&id, &path, Some(&refs.paths[k]), &recipe, cfg.setting)
            }
            Task::ComparisonReasoningPrompt => {
                let refs = self.refs();
                let k = refs.pick(seed);
                let reference = &refs.images[k];
                let ra = self.recipe(seed, 1)?;
                let a = apply_all(reference, &ra.specs)?;
                let pa = psnr(reference, &a)?;
                for attempt in 0..MAX_REDRAWS {
                    let rb = self.recipe(seed, 3 + attempt)?;
                    let b = apply_all(reference, &rb.specs)?;
                    let pb = psnr(reference, &b)?;
                    if pa == pb {
                        continue;
                    }
                    let winner = if pa > pb { Slot::A } else { Slot::B };
                    let path_a = self.sink.write(&format!("{id}_a"), &a)?;
                    let path_b = self.sink.write(&format!("{id}_b"), &b)?;
                    return build_comparison_prompt(
                        &id,
                        &path_a,
                        &path_b,
                        Some(&refs.paths[k]),
                        [&ra, &rb],
                        Some(ComparisonResult { winner }),
                        cfg.setting,
                    );
                }
                Err(Error::Rejected(format!("{id}: no untied comparison found")))
            }
            Task::InstantRating => {
                let table = self.mos.as_ref().expect("MOS table loaded for rating");
                for attempt in 0..MAX_REDRAWS {
                    let s = derive_seed(seed, 10 + attempt);
                    let g = &self.rateable[(derive_seed(s, 0) % self.rateable.len() as u64) as usize];
                    match build_rating_sample(&id, table, g, cfg.setting, derive_seed(s, 1)) {
                        Err(Error::Rejected(_)) => continue,
                        other => return other,
                    }
                }
                Err(Error::Rejected(format!("{id}: every drawn pair was tied")))
            }
        }
    }
}

/// Build the dataset described by `cfg`: write generated images, the JSONL
/// file, and return per-category counts.
pub fn build_dataset(cfg: &BuildConfig) -> Result<BuildSummary> {
    cfg.validate()?;
    let (refs, mos, rateable) = if cfg.task == Task::InstantRating {
        let table = MosTable::load(cfg.mos.as_deref().expect("validated"))?;
        let rateable: Vec<String> = table.rateable_groups().into_iter().map(str::to_owned).collect();
        if rateable.is_empty() {
            return Err(Error::Config {
                key: "mos".into(),
                message: "no content group has two images with distinct MOS".into(),
            });
        }
        (None, Some(table), rateable)
    } else {
        (Some(Refs::load(cfg.refs.as_deref().expect("validated"))?), None, Vec::new())
    };
    let base = cfg
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let job = Job {
        cfg,
        refs,
        mos,
        rateable,
        sink: ImageSink::new(output_image_dir(&cfg.out), base),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let records = pool.install(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| job.record(i))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summary = BuildSummary::default();
    for r in &records {
        r.check()?;
        summary.add(r);
    }
    write_jsonl(&records, &cfg.out)?;
    Ok(summary)
}
