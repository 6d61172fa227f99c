//! Legal distortion recipes: at most two distortions, ordered pairs drawn
//! from a fixed combination table, an optional pristine share, and the
//! out-of-distribution train/validation split.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distort::{DistortionSpec, Severity, SubCategory, SuperCategory};
use crate::error::{Error, Result};

/// Maximum number of distortions in one recipe.
pub const MAX_DISTORTIONS: usize = 2;

/// Default share of undistorted samples.
pub const DEFAULT_PRISTINE_FRAC: f64 = 0.05;

/// Whether the model sees a reference image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    FullReference,
    NonReference,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::FullReference => "full_reference",
            Setting::NonReference => "non_reference",
        })
    }
}

/// Ordered list of 0 to 2 distortions; empty means pristine.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Recipe {
    pub specs: Vec<DistortionSpec>,
}

impl Recipe {
    pub fn pristine() -> Self {
        Self::default()
    }

    pub fn new(specs: Vec<DistortionSpec>) -> Self {
        Self { specs }
    }

    pub fn is_pristine(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    /// Super-categories in application order.
    pub fn super_categories(&self) -> Vec<SuperCategory> {
        self.specs.iter().map(DistortionSpec::super_category).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SampleMode {
    Single,
    Multi,
    Mixed { pristine_frac: f64, multi_frac: f64 },
}

impl SampleMode {
    fn validate(self) -> Result<()> {
        if let SampleMode::Mixed {
            pristine_frac,
            multi_frac,
        } = self
        {
            for (name, v) in [("pristine_frac", pristine_frac), ("multi_frac", multi_frac)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidArgument(format!("{name} must be in [0, 1], got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Allowed second distortions for each first distortion.
pub fn allowed_followers(first: SuperCategory) -> &'static [SuperCategory] {
    use SuperCategory::*;
    match first {
        Blur => &[
            Brighten,
            Compression,
            ContrastStrengthen,
            ContrastWeaken,
            Darken,
            Noise,
            Quantize,
            SaturateStrengthen,
            SaturateWeaken,
        ],
        Brighten => &[Blur, Compression, Noise, Pixelate, Quantize],
        Compression => &[
            Blur,
            Brighten,
            ContrastStrengthen,
            ContrastWeaken,
            Darken,
            Noise,
            SaturateStrengthen,
            SaturateWeaken,
        ],
        ContrastStrengthen => &[Blur, Compression, Noise, Pixelate, Quantize],
        ContrastWeaken => &[Blur, Compression, Noise, Pixelate, Quantize],
        Darken => &[Blur, Compression, Noise, Pixelate, Quantize],
        Noise => &[
            Blur,
            Brighten,
            Compression,
            ContrastStrengthen,
            ContrastWeaken,
            Darken,
            OverSharpen,
            Pixelate,
            SaturateStrengthen,
            SaturateWeaken,
        ],
        OverSharpen => &[Brighten],
        Pixelate => &[
            Brighten,
            ContrastStrengthen,
            ContrastWeaken,
            Darken,
            Noise,
            OverSharpen,
            Quantize,
            SaturateStrengthen,
            SaturateWeaken,
        ],
        Quantize => &[
            Brighten,
            ContrastStrengthen,
            ContrastWeaken,
            Darken,
            Noise,
            OverSharpen,
            Pixelate,
            SaturateStrengthen,
            SaturateWeaken,
        ],
        SaturateStrengthen => &[Blur, Compression, Noise, OverSharpen, Pixelate, Quantize],
        SaturateWeaken => &[Blur, Compression, Noise, OverSharpen, Pixelate, Quantize],
    }
}

pub fn is_allowed_pair(first: SuperCategory, second: SuperCategory) -> bool {
    allowed_followers(first).contains(&second)
}

/// Every allowed ordered pair, in table order.
pub fn allowed_pairs() -> Vec<(SuperCategory, SuperCategory)> {
    SuperCategory::ALL
        .into_iter()
        .flat_map(|a| allowed_followers(a).iter().map(move |&b| (a, b)))
        .collect()
}

/// The combination table as a JSON-friendly map.
pub fn combination_table() -> BTreeMap<SuperCategory, Vec<SuperCategory>> {
    SuperCategory::ALL
        .into_iter()
        .map(|s| (s, allowed_followers(s).to_vec()))
        .collect()
}

/// Super-categories whose slight level is dropped without a reference image.
pub const NON_REFERENCE_EXCLUDED: [SuperCategory; 8] = [
    SuperCategory::Brighten,
    SuperCategory::Darken,
    SuperCategory::ContrastWeaken,
    SuperCategory::ContrastStrengthen,
    SuperCategory::SaturateWeaken,
    SuperCategory::SaturateStrengthen,
    SuperCategory::Quantize,
    SuperCategory::OverSharpen,
];

fn excluded(setting: Setting, spec: &DistortionSpec) -> bool {
    setting == Setting::NonReference
        && spec.severity == Severity::Slight
        && NON_REFERENCE_EXCLUDED.contains(&spec.super_category())
}

fn draw_spec(rng: &mut ChaCha8Rng, sup: SuperCategory) -> DistortionSpec {
    let subs: Vec<SubCategory> = sup.subs().collect();
    let sub = subs[rng.random_range(0..subs.len())];
    let severity = Severity::ALL[rng.random_range(0..Severity::ALL.len())];
    DistortionSpec::new(sub, severity, rng.random())
}

fn draw_single(rng: &mut ChaCha8Rng) -> DistortionSpec {
    let sub = SubCategory::ALL[rng.random_range(0..SubCategory::ALL.len())];
    let severity = Severity::ALL[rng.random_range(0..Severity::ALL.len())];
    DistortionSpec::new(sub, severity, rng.random())
}

fn draw_multi(rng: &mut ChaCha8Rng, pairs: &[(SuperCategory, SuperCategory)]) -> Vec<DistortionSpec> {
    let (a, b) = pairs[rng.random_range(0..pairs.len())];
    vec![draw_spec(rng, a), draw_spec(rng, b)]
}

/// Draw a recipe. A pure function of `seed`, `mode` and `setting`.
///
/// Under [`Setting::NonReference`] any draw containing a slight spec from
/// [`NON_REFERENCE_EXCLUDED`] is rejected and redrawn.
pub fn sample_recipe(seed: u64, mode: SampleMode, setting: Setting) -> Result<Recipe> {
    mode.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = allowed_pairs();
    let multi = match mode {
        SampleMode::Single => false,
        SampleMode::Multi => true,
        SampleMode::Mixed {
            pristine_frac,
            multi_frac,
        } => {
            if rng.random::<f64>() < pristine_frac {
                return Ok(Recipe::pristine());
            }
            rng.random::<f64>() < multi_frac
        }
    };
    loop {
        let specs = if multi {
            draw_multi(&mut rng, &pairs)
        } else {
            vec![draw_single(&mut rng)]
        };
        if !specs.iter().any(|s| excluded(setting, s)) {
            return Ok(Recipe::new(specs));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    TooMany { count: usize },
    PairNotAllowed { first: SuperCategory, second: SuperCategory },
    DuplicateSuperCategory { category: SuperCategory },
    ParamsMismatch { index: usize, sub: SubCategory },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooMany { count } => {
                write!(f, "{count} distortions exceed the cap of {MAX_DISTORTIONS}")
            }
            Violation::PairNotAllowed { first, second } => {
                write!(f, "{first} followed by {second} is not an allowed combination")
            }
            Violation::DuplicateSuperCategory { category } => {
                write!(f, "{category} appears more than once")
            }
            Violation::ParamsMismatch { index, sub } => {
                write!(f, "spec {index} carries parameters of the wrong kind for {}", sub.id())
            }
        }
    }
}

/// Every violated recipe invariant; empty means valid.
pub fn recipe_violations(recipe: &Recipe) -> Vec<Violation> {
    let mut out = Vec::new();
    let cats = recipe.super_categories();
    if cats.len() > MAX_DISTORTIONS {
        out.push(Violation::TooMany { count: cats.len() });
    }
    for (i, spec) in recipe.specs.iter().enumerate() {
        if !spec.params.fits(spec.sub) {
            out.push(Violation::ParamsMismatch { index: i, sub: spec.sub });
        }
    }
    for (i, &c) in cats.iter().enumerate() {
        if cats[..i].contains(&c) && !cats[i + 1..].contains(&c) {
            out.push(Violation::DuplicateSuperCategory { category: c });
        }
    }
    for w in cats.windows(2) {
        if w[0] != w[1] && !is_allowed_pair(w[0], w[1]) {
            out.push(Violation::PairNotAllowed {
                first: w[0],
                second: w[1],
            });
        }
    }
    out
}

/// `Ok` for a valid recipe, otherwise an error listing every violation.
pub fn validate_recipe(recipe: &Recipe) -> Result<()> {
    let v = recipe_violations(recipe);
    if v.is_empty() {
        return Ok(());
    }
    let msg: Vec<String> = v.iter().map(ToString::to_string).collect();
    Err(Error::IllegalRecipe(msg.join("; ")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OodSplit {
    Train,
    Validation,
}

/// Out-of-distribution assignment of each sub-category.
pub fn ood_split(sub: SubCategory) -> OodSplit {
    use SubCategory::*;
    match sub {
        GaussianBlur | JitterBlur | GaussianNoiseRgb | ImpulseNoise | Jpeg2000
        | BrightenGammaRgb | DarkenGammaRgb | ContrastStrengthenStretch
        | ContrastWeakenStretch | SaturateStrengthenYcbcr | SaturateWeakenYcbcr
        | QuantizeHistEqual => OodSplit::Validation,
        _ => OodSplit::Train,
    }
}
