//! Question/response records for the brief tasks, prompt payloads for the
//! detailed ones, JSONL I/O and train/test splitting.

mod answer;
mod builder;
mod jsonl;
mod mos;
mod pipeline;
mod split;
pub mod templates;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compose::{Recipe, Setting};
use crate::error::Error;

pub use answer::{format_labels, parse_identification, parse_winner, IdLabel, Slot};
pub use builder::{
    build_comparison_prompt, build_identification_sample, build_rating_sample, build_assessment_prompt,
    ComparisonResult, ImageSink,
};
pub use jsonl::{read_jsonl, write_jsonl};
pub use mos::{MosRow, MosTable};
pub use pipeline::{build_dataset, output_image_dir, BuildConfig, BuildSummary};
pub use split::{split_dataset, SplitPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    DistortionIdentification,
    InstantRating,
    AssessmentReasoningPrompt,
    ComparisonReasoningPrompt,
}

impl Task {
    pub const ALL: [Task; 4] = [
        Task::DistortionIdentification,
        Task::InstantRating,
        Task::AssessmentReasoningPrompt,
        Task::ComparisonReasoningPrompt,
    ];

    /// Short kebab-case name used on the command line.
    pub fn flag_name(self) -> &'static str {
        match self {
            Task::DistortionIdentification => "identification",
            Task::InstantRating => "instant-rating",
            Task::AssessmentReasoningPrompt => "assessment-prompt",
            Task::ComparisonReasoningPrompt => "comparison-prompt",
        }
    }

    fn id_prefix(self) -> &'static str {
        match self {
            Task::DistortionIdentification => "ident",
            Task::InstantRating => "rate",
            Task::AssessmentReasoningPrompt => "assess",
            Task::ComparisonReasoningPrompt => "compare",
        }
    }

    pub fn record_id(self, index: usize) -> String {
        format!("{}-{index:06}", self.id_prefix())
    }

    /// Prompt tasks leave the response empty for an external generator.
    pub fn is_prompt(self) -> bool {
        matches!(
            self,
            Task::AssessmentReasoningPrompt | Task::ComparisonReasoningPrompt
        )
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag_name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Task::ALL
            .into_iter()
            .find(|t| t.flag_name() == norm || t.flag_name().replace('-', "") == norm.replace('-', ""))
            .or(match norm.as_str() {
                "distortion-identification" => Some(Task::DistortionIdentification),
                "rating" => Some(Task::InstantRating),
                "assessment-reasoning-prompt" | "assessment" => Some(Task::AssessmentReasoningPrompt),
                "comparison-reasoning-prompt" | "comparison" => Some(Task::ComparisonReasoningPrompt),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown task {s:?}")))
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "full-reference" | "fr" => Ok(Setting::FullReference),
            "non-reference" | "nr" | "no-reference" => Ok(Setting::NonReference),
            _ => Err(Error::InvalidArgument(format!("unknown setting {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRefs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    pub image_a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_b: Option<String>,
}

/// One dataset line. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    pub task: Task,
    pub setting: Setting,
    pub image_refs: ImageRefs,
    pub question: String,
    pub response: String,
    pub recipe_meta: Vec<Recipe>,
    pub short_answer: bool,
}

impl SampleRecord {
    /// Gold identification labels: super-categories of the first recipe, or
    /// the pristine label.
    pub fn gold_labels(&self) -> Option<Vec<IdLabel>> {
        if self.task != Task::DistortionIdentification {
            return None;
        }
        let recipe = self.recipe_meta.first()?;
        Some(if recipe.is_pristine() {
            vec![IdLabel::Pristine]
        } else {
            recipe
                .super_categories()
                .into_iter()
                .map(IdLabel::Distorted)
                .collect()
        })
    }

    /// Gold winner of a rating record, read from its response.
    pub fn gold_winner(&self) -> Option<Slot> {
        if self.task != Task::InstantRating {
            return None;
        }
        parse_winner(&self.response)
    }

    /// Number of distortions on the evaluated image (identification only).
    pub fn arity(&self) -> Option<usize> {
        match self.task {
            Task::DistortionIdentification | Task::AssessmentReasoningPrompt => {
                self.recipe_meta.first().map(Recipe::len)
            }
            _ => None,
        }
    }

    /// Check the structural invariants tying task, setting and images.
    pub fn check(&self) -> Result<(), Error> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("record {}: {m}", self.id)));
        match (self.setting, &self.image_refs.reference) {
            (Setting::FullReference, None) => return bad("full-reference record without a reference"),
            (Setting::NonReference, Some(_)) => return bad("non-reference record with a reference"),
            _ => {}
        }
        let pair = matches!(self.task, Task::InstantRating | Task::ComparisonReasoningPrompt);
        if pair && self.image_refs.image_b.is_none() {
            return bad("paired task without image_b");
        }
        if self.short_answer && !self.question.ends_with(templates::SHORT_ANSWER_SUFFIX) {
            return bad("short answer without the suffix");
        }
        if self.task.is_prompt() && !self.response.is_empty() {
            return bad("prompt task with a response");
        }
        Ok(())
    }
}
