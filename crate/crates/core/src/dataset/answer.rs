use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distort::{find_distortions, SuperCategory};

/// Identification label: a super-category, or the pristine label `none`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdLabel {
    #[serde(rename = "none")]
    Pristine,
    #[serde(untagged)]
    Distorted(SuperCategory),
}

impl IdLabel {
    /// The pristine label plus every super-category.
    pub fn all() -> Vec<IdLabel> {
        std::iter::once(IdLabel::Pristine)
            .chain(SuperCategory::ALL.into_iter().map(IdLabel::Distorted))
            .collect()
    }
}

impl fmt::Display for IdLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdLabel::Pristine => f.write_str(super::templates::NONE_FILLER),
            IdLabel::Distorted(s) => f.write_str(s.name()),
        }
    }
}

/// Comma-joined label names, the short-answer form.
pub fn format_labels(labels: &[IdLabel]) -> String {
    labels
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Presentation slot of an image in a paired question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    A,
    B,
}

impl Slot {
    pub fn other(self) -> Slot {
        match self {
            Slot::A => Slot::B,
            Slot::B => Slot::A,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Slot::A => "Image A",
            Slot::B => "Image B",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn words(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

const PRISTINE_CUES: [&[&str]; 5] = [
    &["none"],
    &["no", "distortion"],
    &["no", "distortions"],
    &["undistorted"],
    &["pristine"],
];

/// Labels named in free text, in order of first mention. `None` when the
/// text names neither a distortion nor the absence of one.
pub fn parse_identification(text: &str) -> Option<Vec<IdLabel>> {
    let found = find_distortions(text);
    if !found.is_empty() {
        return Some(found.into_iter().map(IdLabel::Distorted).collect());
    }
    let w = words(text);
    let pristine = (0..w.len()).any(|i| PRISTINE_CUES.iter().any(|cue| w[i..].iter().map(String::as_str).take(cue.len()).eq(cue.iter().copied())));
    pristine.then(|| vec![IdLabel::Pristine])
}

/// The first image slot named in the text ("Image A", "image b", or a bare
/// "A"/"B" answer).
pub fn parse_winner(text: &str) -> Option<Slot> {
    let w = words(text);
    let slot = |t: &str| match t {
        "a" => Some(Slot::A),
        "b" => Some(Slot::B),
        _ => None,
    };
    if w.len() == 1 {
        return slot(&w[0]);
    }
    w.windows(2)
        .find_map(|p| if p[0] == "image" { slot(&p[1]) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identification_parsing() {
        assert_eq!(
            parse_identification("blur, darken"),
            Some(vec![
                IdLabel::Distorted(SuperCategory::Blur),
                IdLabel::Distorted(SuperCategory::Darken)
            ])
        );
        assert_eq!(parse_identification("Distortions present: none."), Some(vec![IdLabel::Pristine]));
        assert_eq!(parse_identification("There is no distortion."), Some(vec![IdLabel::Pristine]));
        assert_eq!(parse_identification("I cannot tell."), None);
        assert_eq!(format_labels(&[IdLabel::Pristine]), "none");
    }

    #[test]
    fn label_serde() {
        assert_eq!(serde_json::to_string(&IdLabel::Pristine).unwrap(), "\"none\"");
        let d = IdLabel::Distorted(SuperCategory::OverSharpen);
        assert_eq!(serde_json::to_string(&d).unwrap(), "\"over_sharpen\"");
        assert_eq!(serde_json::from_str::<IdLabel>("\"over_sharpen\"").unwrap(), d);
        assert_eq!(IdLabel::all().len(), 13);
    }

    #[test]
    fn winner_parsing() {
        assert_eq!(parse_winner("Image B is better."), Some(Slot::B));
        assert_eq!(parse_winner("A"), Some(Slot::A));
        assert_eq!(parse_winner("I would choose image a over image b"), Some(Slot::A));
        assert_eq!(parse_winner("Both look the same."), None);
        assert_eq!(parse_winner("a picture"), None);
    }
}
