//! Fixed question and response pools, 20 entries each.
//!
//! Response templates carry one placeholder: `{DISTORTIONS}` (a
//! comma-joined list of super-category names, or `none`) or `{WINNER}`
//! (`Image A` / `Image B`).

pub const SHORT_ANSWER_SUFFIX: &str = "Answer the question using a single word or phrase.";

pub const DISTORTIONS_SLOT: &str = "{DISTORTIONS}";
pub const WINNER_SLOT: &str = "{WINNER}";

/// Filler for an undistorted image.
pub const NONE_FILLER: &str = "none";

pub const IDENTIFICATION_QUESTIONS: [&str; 20] = [
    "What distortions can be found in the evaluated image?",
    "Which types of distortion does the evaluated image suffer from?",
    "Identify the distortions present in the evaluated image.",
    "What kind of degradation affects the evaluated image?",
    "Name the distortions that appear in the evaluated image.",
    "Which distortion categories are visible in the evaluated image?",
    "List the distortions of the evaluated image.",
    "What has degraded the evaluated image?",
    "Can you tell which distortions the evaluated image contains?",
    "Point out the distortion types in the evaluated image.",
    "Which degradations have been applied to the evaluated image?",
    "What distortion is the evaluated image mainly affected by?",
    "Determine the distortion types that exist in the evaluated image.",
    "What are the visible distortions in the evaluated image?",
    "Please identify any distortion in the evaluated image.",
    "Which kinds of artifacts are introduced into the evaluated image?",
    "Tell me the distortions you observe in the evaluated image.",
    "Which distortion types reduce the visual fidelity of the evaluated image?",
    "Recognize the distortions in the evaluated image.",
    "What distortions does the evaluated image exhibit?",
];

pub const IDENTIFICATION_RESPONSES: [&str; 20] = [
    "The distortions found in the evaluated image: {DISTORTIONS}.",
    "Distortions present: {DISTORTIONS}.",
    "The evaluated image shows the following distortions: {DISTORTIONS}.",
    "Identified distortion types: {DISTORTIONS}.",
    "After inspection, the distortions are: {DISTORTIONS}.",
    "Distortion categories observed: {DISTORTIONS}.",
    "The image is affected by: {DISTORTIONS}.",
    "Detected degradations: {DISTORTIONS}.",
    "Visible distortions in the evaluated image: {DISTORTIONS}.",
    "My answer is {DISTORTIONS}.",
    "The evaluated image contains these distortions: {DISTORTIONS}.",
    "Observed distortion types: {DISTORTIONS}.",
    "Distortions identified in this image: {DISTORTIONS}.",
    "The degradations applied are: {DISTORTIONS}.",
    "From what can be seen, the distortions are {DISTORTIONS}.",
    "Artifacts introduced: {DISTORTIONS}.",
    "The distortion list for the evaluated image is {DISTORTIONS}.",
    "Types of distortion found: {DISTORTIONS}.",
    "Recognized distortions: {DISTORTIONS}.",
    "Distortions exhibited by the evaluated image: {DISTORTIONS}.",
];

pub const RATING_QUESTIONS: [&str; 20] = [
    "Which of the two images has better quality?",
    "Compare the two images. Which one looks better?",
    "Between Image A and Image B, which has higher quality?",
    "Which image is of higher visual quality?",
    "Which image would a viewer prefer in terms of quality?",
    "Select the image with better perceptual quality.",
    "Of the two images, which one is less degraded?",
    "Which image has superior quality?",
    "Judge the two images and pick the better one.",
    "Which of the evaluated images is visually better?",
    "Which image shows higher fidelity?",
    "Decide which image has the better overall quality.",
    "Which image is more pleasing in quality?",
    "Pick the image whose quality is higher.",
    "Considering quality, which image is better?",
    "Which one of the two images has fewer quality problems?",
    "Tell me which image has better quality.",
    "Which image wins in terms of quality?",
    "Please choose the image of better quality.",
    "Which of the pair is the higher-quality image?",
];

pub const RATING_RESPONSES: [&str; 20] = [
    "{WINNER} has better quality.",
    "{WINNER} is better.",
    "The image with higher quality is {WINNER}.",
    "{WINNER} shows superior visual quality.",
    "Viewers would prefer {WINNER}.",
    "{WINNER} has the better perceptual quality.",
    "{WINNER} is less degraded.",
    "The better one is {WINNER}.",
    "After comparison, {WINNER} looks better.",
    "{WINNER} is visually better.",
    "{WINNER} shows higher fidelity.",
    "Overall, {WINNER} has the better quality.",
    "{WINNER} is more pleasing in quality.",
    "The quality of {WINNER} is higher.",
    "Considering quality, {WINNER} is better.",
    "{WINNER} has fewer quality problems.",
    "My choice is {WINNER}.",
    "{WINNER} wins in terms of quality.",
    "I would choose {WINNER}.",
    "The higher-quality image is {WINNER}.",
];

/// Fill `slot` in `template` with `value`.
pub fn fill(template: &str, slot: &str, value: &str) -> String {
    template.replace(slot, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distort::find_distortions;

    #[test]
    fn pools_have_slots_and_no_stray_names() {
        for t in IDENTIFICATION_RESPONSES {
            assert_eq!(t.matches(DISTORTIONS_SLOT).count(), 1, "{t}");
            let bare = t.replace(DISTORTIONS_SLOT, "");
            assert!(find_distortions(&bare).is_empty(), "{t}");
            assert!(!bare.to_lowercase().contains("none"), "{t}");
        }
        for t in RATING_RESPONSES {
            assert_eq!(t.matches(WINNER_SLOT).count(), 1, "{t}");
            assert!(!t.to_lowercase().contains("image a") && !t.to_lowercase().contains("image b"));
        }
        for q in IDENTIFICATION_QUESTIONS.iter().chain(&RATING_QUESTIONS) {
            assert!(find_distortions(q).is_empty(), "{q}");
        }
        let unique = |p: &[&str]| p.iter().collect::<std::collections::HashSet<_>>().len();
        assert_eq!(unique(&IDENTIFICATION_QUESTIONS), 20);
        assert_eq!(unique(&IDENTIFICATION_RESPONSES), 20);
        assert_eq!(unique(&RATING_QUESTIONS), 20);
        assert_eq!(unique(&RATING_RESPONSES), 20);
    }
}
