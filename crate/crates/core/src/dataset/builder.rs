use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::answer::{format_labels, IdLabel, Slot};
use super::mos::MosTable;
use super::templates::{self, fill, SHORT_ANSWER_SUFFIX};
use super::{ImageRefs, SampleRecord, Task};
use crate::compose::{recipe_violations, Recipe, Setting, NON_REFERENCE_EXCLUDED};
use crate::distort::{apply_all, distortion_name, Severity};
use crate::error::{Error, Result};
use crate::image::{save_image, ImageBuf, ImageFormat};

/// Directory that receives generated images; record paths are written
/// relative to `base`.
#[derive(Debug, Clone)]
pub struct ImageSink {
    dir: PathBuf,
    base: PathBuf,
}

impl ImageSink {
    pub fn new(dir: impl Into<PathBuf>, base: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            base: base.into(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Save `img` as `<name>.png` and return its path relative to the base.
    pub fn write(&self, name: &str, img: &ImageBuf) -> Result<String> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(format!("{name}.png"));
        save_image(img, &path, ImageFormat::Png)?;
        let rel = path.strip_prefix(&self.base).unwrap_or(&path);
        Ok(rel.to_string_lossy().replace('\\', "/"))
    }
}

fn check_recipe(recipe: &Recipe, setting: Setting) -> Result<()> {
    let mut problems: Vec<String> = recipe_violations(recipe).iter().map(ToString::to_string).collect();
    if setting == Setting::NonReference {
        for s in &recipe.specs {
            if s.severity == Severity::Slight && NON_REFERENCE_EXCLUDED.contains(&s.super_category()) {
                problems.push(format!(
                    "slight {} is excluded without a reference",
                    s.super_category()
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::IllegalRecipe(problems.join("; ")))
    }
}

fn labels_of(recipe: &Recipe) -> Vec<IdLabel> {
    if recipe.is_pristine() {
        vec![IdLabel::Pristine]
    } else {
        recipe
            .super_categories()
            .into_iter()
            .map(IdLabel::Distorted)
            .collect()
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.random_range(0..pool.len())]
}

/// Question and response from the pools; half of the draws take the
/// short-answer form.
fn brief_qa(
    rng: &mut ChaCha8Rng,
    questions: &[&str],
    responses: &[&str],
    slot: &str,
    answer: &str,
) -> (String, String, bool) {
    let q = pick(rng, questions);
    let r = pick(rng, responses);
    if rng.random_bool(0.5) {
        (format!("{q} {SHORT_ANSWER_SUFFIX}"), answer.to_owned(), true)
    } else {
        (q.to_owned(), fill(r, slot, answer), false)
    }
}

fn reference_for(setting: Setting, path: &str) -> Option<String> {
    (setting == Setting::FullReference).then(|| path.to_owned())
}

/// Distort `reference` with `recipe`, save the result through `sink` and
/// emit the identification record. A pristine recipe saves a re-encoded
/// copy of the reference.
pub fn build_identification_sample(
    id: &str,
    reference: &ImageBuf,
    reference_path: &str,
    recipe: &Recipe,
    setting: Setting,
    seed: u64,
    sink: &ImageSink,
) -> Result<SampleRecord> {
    check_recipe(recipe, setting)?;
    let distorted = apply_all(reference, &recipe.specs)?;
    let image_a = sink.write(id, &distorted)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let answer = format_labels(&labels_of(recipe));
    let (question, response, short_answer) = brief_qa(
        &mut rng,
        &templates::IDENTIFICATION_QUESTIONS,
        &templates::IDENTIFICATION_RESPONSES,
        templates::DISTORTIONS_SLOT,
        &answer,
    );
    Ok(SampleRecord {
        id: id.to_owned(),
        task: Task::DistortionIdentification,
        setting,
        image_refs: ImageRefs {
            reference: reference_for(setting, reference_path),
            image_a,
            image_b: None,
        },
        question,
        response,
        recipe_meta: vec![recipe.clone()],
        short_answer,
    })
}

/// Draw two images of one content group without replacement, put them in
/// seeded A/B order and label the higher-MOS one the winner. Equal MOS
/// rejects the draw.
pub fn build_rating_sample(
    id: &str,
    table: &MosTable,
    group: &str,
    setting: Setting,
    seed: u64,
) -> Result<SampleRecord> {
    let rows = table.group(group);
    if rows.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "content group {group:?} has {} image(s), need at least 2",
            rows.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i = rng.random_range(0..rows.len());
    let mut j = rng.random_range(0..rows.len() - 1);
    if j >= i {
        j += 1;
    }
    let (first, second) = (rows[i], rows[j]);
    if first.mos == second.mos {
        return Err(Error::Rejected(format!(
            "{} and {} have equal MOS {}",
            first.image_path, second.image_path, first.mos
        )));
    }
    let (a, b) = if rng.random_bool(0.5) {
        (first, second)
    } else {
        (second, first)
    };
    let winner = if a.mos > b.mos { Slot::A } else { Slot::B };
    let (question, response, short_answer) = brief_qa(
        &mut rng,
        &templates::RATING_QUESTIONS,
        &templates::RATING_RESPONSES,
        templates::WINNER_SLOT,
        winner.label(),
    );
    Ok(SampleRecord {
        id: id.to_owned(),
        task: Task::InstantRating,
        setting,
        image_refs: ImageRefs {
            reference: reference_for(setting, &a.reference_path),
            image_a: a.image_path.clone(),
            image_b: Some(b.image_path.clone()),
        },
        question,
        response,
        recipe_meta: vec![],
        short_answer,
    })
}

/// Outcome of a ground-truth comparison fed to the comparison prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub winner: Slot,
}

const ANSWER_DIMENSIONS: &str =
    "Describe the contents, distortions along with their impacts on contents, and overall quality.";

fn describe(recipe: &Recipe) -> String {
    if recipe.is_pristine() {
        return "is undistorted".to_owned();
    }
    let parts: Vec<String> = recipe
        .specs
        .iter()
        .map(|s| {
            format!(
                "{} ({}, {} severity)",
                s.super_category(),
                distortion_name(s.sub),
                s.severity.name()
            )
        })
        .collect();
    format!("is degraded by {}", parts.join(" followed by "))
}

fn roles(setting: Setting, evaluated: &str) -> String {
    match setting {
        Setting::FullReference => format!("You are given a reference image and {evaluated}."),
        Setting::NonReference => format!("You are given {evaluated}."),
    }
}

/// GT-informed prompt for a detailed assessment of one image.
pub fn build_assessment_prompt(
    id: &str,
    image_path: &str,
    reference_path: Option<&str>,
    recipe: &Recipe,
    setting: Setting,
) -> Result<SampleRecord> {
    check_recipe(recipe, setting)?;
    let reference = prompt_reference(setting, reference_path)?;
    let question = format!(
        "{} Ground truth: the evaluated image {}. {ANSWER_DIMENSIONS}",
        roles(setting, "an evaluated image"),
        describe(recipe)
    );
    Ok(SampleRecord {
        id: id.to_owned(),
        task: Task::AssessmentReasoningPrompt,
        setting,
        image_refs: ImageRefs {
            reference,
            image_a: image_path.to_owned(),
            image_b: None,
        },
        question,
        response: String::new(),
        recipe_meta: vec![recipe.clone()],
        short_answer: false,
    })
}

fn prompt_reference(setting: Setting, reference_path: Option<&str>) -> Result<Option<String>> {
    match (setting, reference_path) {
        (Setting::FullReference, None) => Err(Error::InvalidArgument(
            "full-reference prompt needs a reference image".into(),
        )),
        (Setting::FullReference, Some(p)) => Ok(Some(p.to_owned())),
        (Setting::NonReference, _) => Ok(None),
    }
}

/// GT-informed prompt comparing two images; `result` names the winner.
#[allow(clippy::too_many_arguments)]
pub fn build_comparison_prompt(
    id: &str,
    image_a: &str,
    image_b: &str,
    reference_path: Option<&str>,
    recipes: [&Recipe; 2],
    result: Option<ComparisonResult>,
    setting: Setting,
) -> Result<SampleRecord> {
    let result = result.ok_or_else(|| {
        Error::InvalidArgument("comparison prompt needs a comparison result".into())
    })?;
    for r in recipes {
        check_recipe(r, setting)?;
    }
    let reference = prompt_reference(setting, reference_path)?;
    let question = format!(
        "{} Ground truth: Image A {}; Image B {}. {} is of higher quality than {}. {ANSWER_DIMENSIONS} Then state which image is better.",
        roles(setting, "two evaluated images, Image A and Image B"),
        describe(recipes[0]),
        describe(recipes[1]),
        result.winner,
        result.winner.other()
    );
    Ok(SampleRecord {
        id: id.to_owned(),
        task: Task::ComparisonReasoningPrompt,
        setting,
        image_refs: ImageRefs {
            reference,
            image_a: image_a.to_owned(),
            image_b: Some(image_b.to_owned()),
        },
        question,
        response: String::new(),
        recipe_meta: recipes.iter().map(|r| (*r).clone()).collect(),
        short_answer: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{parse_identification, parse_winner, MosRow};
    use crate::distort::{DistortionSpec, SubCategory, SuperCategory};

    fn recipe(subs: &[(SubCategory, Severity)]) -> Recipe {
        Recipe::new(subs.iter().map(|&(s, v)| DistortionSpec::new(s, v, 7)).collect())
    }

    fn reference() -> ImageBuf {
        ImageBuf::from_fn(24, 24, |x, y| [x as f64 / 24.0, y as f64 / 24.0, 0.4]).unwrap()
    }

    fn sink(dir: &Path) -> ImageSink {
        ImageSink::new(dir.join("images"), dir)
    }

    fn short_and_long(r: &Recipe) -> (SampleRecord, SampleRecord) {
        let dir = tempfile::tempdir().unwrap();
        let mut short = None;
        let mut long = None;
        for seed in 0..64 {
            let rec = build_identification_sample(
                "s",
                &reference(),
                "ref.png",
                r,
                Setting::FullReference,
                seed,
                &sink(dir.path()),
            )
            .unwrap();
            if rec.short_answer {
                short.get_or_insert(rec);
            } else {
                long.get_or_insert(rec);
            }
        }
        (short.unwrap(), long.unwrap())
    }

    #[test]
    fn identification_responses() {
        let (short, long) = short_and_long(&recipe(&[(SubCategory::GaussianNoiseRgb, Severity::Obvious)]));
        assert_eq!(short.response, "noise");
        assert!(short.question.ends_with(SHORT_ANSWER_SUFFIX));
        assert!(long.response.contains("noise") && long.response.len() > 5);
        assert!(!long.question.ends_with(SHORT_ANSWER_SUFFIX));

        let (short, long) = short_and_long(&recipe(&[
            (SubCategory::LensBlur, Severity::Moderate),
            (SubCategory::DarkenGammaRgb, Severity::Serious),
        ]));
        assert_eq!(short.response, "blur, darken");
        assert!(long.response.contains("blur") && long.response.contains("darken"));
        assert_eq!(
            parse_identification(&long.response),
            Some(vec![
                IdLabel::Distorted(SuperCategory::Blur),
                IdLabel::Distorted(SuperCategory::Darken)
            ])
        );

        let (short, long) = short_and_long(&Recipe::pristine());
        assert_eq!(short.response, "none");
        assert_eq!(parse_identification(&long.response), Some(vec![IdLabel::Pristine]));
        assert_eq!(short.gold_labels(), Some(vec![IdLabel::Pristine]));
    }

    #[test]
    fn identification_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let r = recipe(&[(SubCategory::SpeckleNoise, Severity::Serious)]);
        let build = |name: &str| {
            build_identification_sample(name, &reference(), "ref.png", &r, Setting::NonReference, 3, &sink(dir.path()))
                .unwrap()
        };
        let a = build("a");
        let b = build("b");
        assert_eq!(a.question, b.question);
        assert_eq!(a.response, b.response);
        assert_eq!(a.image_refs.reference, None);
        let bytes = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
        assert_eq!(bytes(&a.image_refs.image_a), bytes(&b.image_refs.image_a));
    }

    #[test]
    fn non_reference_rejects_slight_tone() {
        let dir = tempfile::tempdir().unwrap();
        let r = recipe(&[(SubCategory::BrightenShiftHsv, Severity::Slight)]);
        let err = build_identification_sample("x", &reference(), "r", &r, Setting::NonReference, 0, &sink(dir.path()));
        assert!(matches!(err, Err(Error::IllegalRecipe(_))));
        assert!(
            build_identification_sample("x", &reference(), "r", &r, Setting::FullReference, 0, &sink(dir.path())).is_ok()
        );
    }

    fn table(mos: [f64; 2]) -> MosTable {
        MosTable::from_rows(vec![
            MosRow {
                image_path: "x.png".into(),
                reference_path: "ref.png".into(),
                content_group_id: "g".into(),
                mos: mos[0],
            },
            MosRow {
                image_path: "y.png".into(),
                reference_path: "ref.png".into(),
                content_group_id: "g".into(),
                mos: mos[1],
            },
        ])
        .unwrap()
    }

    #[test]
    fn rating_label_follows_slot() {
        let t = table([4.2, 2.1]);
        let mut seen = [false; 2];
        for seed in 0..64 {
            let r = build_rating_sample("r", &t, "g", Setting::FullReference, seed).unwrap();
            let winner = r.gold_winner().unwrap();
            if r.image_refs.image_a == "x.png" {
                assert_eq!(winner, Slot::A);
                seen[0] = true;
            } else {
                assert_eq!(r.image_refs.image_b.as_deref(), Some("x.png"));
                assert_eq!(winner, Slot::B);
                seen[1] = true;
            }
            if r.short_answer {
                assert_eq!(parse_winner(&r.response), Some(winner));
                assert_eq!(r.response, winner.label());
            }
            assert!(r.check().is_ok());
        }
        assert_eq!(seen, [true, true]);
    }

    #[test]
    fn rating_tie_rejected() {
        let t = table([3.0, 3.0]);
        assert!(matches!(
            build_rating_sample("r", &t, "g", Setting::NonReference, 0),
            Err(Error::Rejected(_))
        ));
        assert!(build_rating_sample("r", &t, "missing", Setting::NonReference, 0).is_err());
    }

    #[test]
    fn prompts() {
        let r = recipe(&[(SubCategory::MotionBlur, Severity::Serious)]);
        let p = build_assessment_prompt("p", "a.png", Some("ref.png"), &r, Setting::FullReference).unwrap();
        assert!(p.question.contains("motion blur") && p.question.contains("serious"));
        assert!(p.question.contains("contents, distortions along with their impacts on contents, and overall quality"));
        assert!(p.response.is_empty());

        let clean = Recipe::pristine();
        let p = build_assessment_prompt("p", "a.png", None, &clean, Setting::NonReference).unwrap();
        assert!(p.question.contains("undistorted"));

        let c = build_comparison_prompt(
            "c",
            "a.png",
            "b.png",
            None,
            [&r, &clean],
            Some(ComparisonResult { winner: Slot::A }),
            Setting::NonReference,
        )
        .unwrap();
        assert!(c.question.contains("Image A is of higher quality"));
        assert!(c.check().is_ok());
        assert!(build_comparison_prompt("c", "a", "b", None, [&r, &clean], None, Setting::NonReference).is_err());
    }
}
