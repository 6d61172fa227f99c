//! Display names and the synonym table used to read distortion names back
//! out of free text.

use super::{SubCategory, SuperCategory};

/// Result of parsing a distortion name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameMatch {
    Sub(SubCategory),
    Super(SuperCategory),
}

impl NameMatch {
    pub fn super_category(self) -> SuperCategory {
        match self {
            NameMatch::Sub(s) => s.super_category(),
            NameMatch::Super(s) => s,
        }
    }
}

/// Canonical lowercase display name of a sub-category.
pub fn distortion_name(sub: SubCategory) -> &'static str {
    use SubCategory::*;
    match sub {
        GaussianBlur => "gaussian blur",
        MotionBlur => "motion blur",
        GlassBlur => "glass blur",
        LensBlur => "lens blur",
        ZoomBlur => "zoom blur",
        JitterBlur => "jitter blur",
        GaussianNoiseRgb => "rgb gaussian noise",
        GaussianNoiseYcbcr => "ycbcr gaussian noise",
        SpeckleNoise => "speckle noise",
        CorrelatedNoise => "spatially correlated noise",
        PoissonNoise => "poisson noise",
        ImpulseNoise => "impulse noise",
        Jpeg => "jpeg",
        Jpeg2000 => "jpeg2000",
        BrightenShiftHsv => "hsv brightness shift",
        BrightenShiftRgb => "rgb brightness shift",
        BrightenGammaHsv => "hsv brightening gamma",
        BrightenGammaRgb => "rgb brightening gamma",
        DarkenShiftHsv => "hsv darkness shift",
        DarkenShiftRgb => "rgb darkness shift",
        DarkenGammaHsv => "hsv darkening gamma",
        DarkenGammaRgb => "rgb darkening gamma",
        ContrastStrengthenScale => "contrast scaling up",
        ContrastStrengthenStretch => "contrast stretching up",
        ContrastWeakenScale => "contrast scaling down",
        ContrastWeakenStretch => "contrast stretching down",
        SaturateStrengthenHsv => "hsv saturation boost",
        SaturateStrengthenYcbcr => "ycbcr saturation boost",
        SaturateWeakenHsv => "hsv saturation cut",
        SaturateWeakenYcbcr => "ycbcr saturation cut",
        OverSharpen => "unsharp masking",
        Pixelate => "box nearest pixelation",
        QuantizeHistEqual => "histogram quantization",
        QuantizeMedianCut => "median cut quantization",
        QuantizeOtsu => "otsu quantization",
    }
}

/// Extra spellings accepted for each super-category, beyond its name.
const SYNONYMS: &[(&str, SuperCategory)] = &[
    ("blurry", SuperCategory::Blur),
    ("blurred", SuperCategory::Blur),
    ("blurriness", SuperCategory::Blur),
    ("noisy", SuperCategory::Noise),
    ("compressed", SuperCategory::Compression),
    ("compression artifacts", SuperCategory::Compression),
    ("jpeg compression", SuperCategory::Compression),
    ("jpeg2000 compression", SuperCategory::Compression),
    ("brightened", SuperCategory::Brighten),
    ("brightening", SuperCategory::Brighten),
    ("overexposed", SuperCategory::Brighten),
    ("overexposure", SuperCategory::Brighten),
    ("darkened", SuperCategory::Darken),
    ("darkening", SuperCategory::Darken),
    ("underexposed", SuperCategory::Darken),
    ("underexposure", SuperCategory::Darken),
    ("contrast strengthening", SuperCategory::ContrastStrengthen),
    ("contrast enhancement", SuperCategory::ContrastStrengthen),
    ("high contrast", SuperCategory::ContrastStrengthen),
    ("contrast weakening", SuperCategory::ContrastWeaken),
    ("contrast reduction", SuperCategory::ContrastWeaken),
    ("low contrast", SuperCategory::ContrastWeaken),
    ("saturation strengthening", SuperCategory::SaturateStrengthen),
    ("oversaturated", SuperCategory::SaturateStrengthen),
    ("oversaturation", SuperCategory::SaturateStrengthen),
    ("saturation weakening", SuperCategory::SaturateWeaken),
    ("desaturated", SuperCategory::SaturateWeaken),
    ("undersaturated", SuperCategory::SaturateWeaken),
    ("oversharpen", SuperCategory::OverSharpen),
    ("oversharpened", SuperCategory::OverSharpen),
    ("over sharpened", SuperCategory::OverSharpen),
    ("over sharpening", SuperCategory::OverSharpen),
    ("pixelated", SuperCategory::Pixelate),
    ("pixelation", SuperCategory::Pixelate),
    ("quantized", SuperCategory::Quantize),
    ("quantization", SuperCategory::Quantize),
    ("color quantization", SuperCategory::Quantize),
];

fn tokens(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Every registered phrase with its match, super-category names and
/// synonyms first.
fn phrases() -> impl Iterator<Item = (&'static str, NameMatch)> {
    SuperCategory::ALL
        .into_iter()
        .map(|s| (s.name(), NameMatch::Super(s)))
        .chain(SYNONYMS.iter().map(|&(p, s)| (p, NameMatch::Super(s))))
        .chain(
            SubCategory::ALL
                .into_iter()
                .map(|s| (distortion_name(s), NameMatch::Sub(s))),
        )
}

/// Case-insensitive exact parse of a single name. Hyphens, underscores and
/// repeated spaces are treated as word breaks.
pub fn parse_distortion_name(text: &str) -> Option<NameMatch> {
    let want = tokens(text);
    if want.is_empty() {
        return None;
    }
    phrases().find(|(p, _)| tokens(p) == want).map(|(_, m)| m)
}

/// Every phrase that counts as a distortion name, for key-token matching.
pub fn key_phrases() -> Vec<&'static str> {
    phrases().map(|(p, _)| p).collect()
}

/// Super-categories mentioned in `text`, in order of first mention.
///
/// Scans word by word, taking the longest registered phrase at each
/// position.
pub fn find_distortions(text: &str) -> Vec<SuperCategory> {
    let table: Vec<(Vec<String>, SuperCategory)> = phrases()
        .map(|(p, m)| (tokens(p), m.super_category()))
        .collect();
    let words = tokens(text);
    let mut found = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let hit = table
            .iter()
            .filter(|(t, _)| words[i..].starts_with(t))
            .max_by_key(|(t, _)| t.len());
        match hit {
            Some((t, s)) => {
                if !found.contains(s) {
                    found.push(*s);
                }
                i += t.len();
            }
            None => i += 1,
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn names_are_unique_and_round_trip() {
        let mut seen = HashSet::new();
        for (p, m) in phrases() {
            assert!(seen.insert(tokens(p)), "duplicate phrase {p}");
            assert_eq!(parse_distortion_name(p), Some(m));
        }
        for s in SubCategory::ALL {
            assert_eq!(parse_distortion_name(distortion_name(s)), Some(NameMatch::Sub(s)));
            assert_eq!(SubCategory::from_id(s.id()), Some(s));
        }
        for s in SuperCategory::ALL {
            assert_eq!(
                parse_distortion_name(&s.name().to_uppercase()),
                Some(NameMatch::Super(s))
            );
        }
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse_distortion_name("JPEG compression"),
            Some(NameMatch::Super(SuperCategory::Compression))
        );
        assert_eq!(parse_distortion_name("jpeg"), Some(NameMatch::Sub(SubCategory::Jpeg)));
        assert_eq!(parse_distortion_name("sharpened too much"), None);
        assert_eq!(parse_distortion_name("   "), None);
        assert_eq!(
            parse_distortion_name("Over Sharpen"),
            Some(NameMatch::Super(SuperCategory::OverSharpen))
        );
    }

    #[test]
    fn find_in_sentence() {
        let found = find_distortions("The image suffers from motion blur and heavy JPEG compression, plus noise.");
        assert_eq!(
            found,
            vec![SuperCategory::Blur, SuperCategory::Compression, SuperCategory::Noise]
        );
        assert_eq!(
            find_distortions("contrast weaken, over-sharpen"),
            vec![SuperCategory::ContrastWeaken, SuperCategory::OverSharpen]
        );
        assert!(find_distortions("a clean photo of a cat").is_empty());
    }
}
