//! The distortion library: 12 super-categories, 35 sub-categories, five
//! severity levels each.
//!
//! A [`DistortionSpec`] pins one concrete corruption (sub-category, severity,
//! resolved parameters, seed). [`apply_distortion`] is a pure function of the
//! image and the spec; every random draw comes from a counter-based stream
//! keyed by the spec seed and the pixel index.

mod blur;
mod compress;
mod names;
mod noise;
mod params;
mod quantize;
mod tone;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{load_image, save_image, ImageBuf, ImageFormat};

pub use names::{
    distortion_name, find_distortions, key_phrases, parse_distortion_name, NameMatch,
};
pub use params::{catalog, resolve_params, Catalog, CatalogEntry, ParamSource, Params, CATALOG_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuperCategory {
    Blur,
    Noise,
    Compression,
    Brighten,
    Darken,
    ContrastStrengthen,
    ContrastWeaken,
    SaturateStrengthen,
    SaturateWeaken,
    OverSharpen,
    Pixelate,
    Quantize,
}

impl SuperCategory {
    pub const ALL: [SuperCategory; 12] = [
        SuperCategory::Blur,
        SuperCategory::Noise,
        SuperCategory::Compression,
        SuperCategory::Brighten,
        SuperCategory::Darken,
        SuperCategory::ContrastStrengthen,
        SuperCategory::ContrastWeaken,
        SuperCategory::SaturateStrengthen,
        SuperCategory::SaturateWeaken,
        SuperCategory::OverSharpen,
        SuperCategory::Pixelate,
        SuperCategory::Quantize,
    ];

    /// Canonical lowercase display name, e.g. `"contrast strengthen"`.
    pub fn name(self) -> &'static str {
        match self {
            SuperCategory::Blur => "blur",
            SuperCategory::Noise => "noise",
            SuperCategory::Compression => "compression",
            SuperCategory::Brighten => "brighten",
            SuperCategory::Darken => "darken",
            SuperCategory::ContrastStrengthen => "contrast strengthen",
            SuperCategory::ContrastWeaken => "contrast weaken",
            SuperCategory::SaturateStrengthen => "saturate strengthen",
            SuperCategory::SaturateWeaken => "saturate weaken",
            SuperCategory::OverSharpen => "over-sharpen",
            SuperCategory::Pixelate => "pixelate",
            SuperCategory::Quantize => "quantize",
        }
    }

    pub fn subs(self) -> impl Iterator<Item = SubCategory> {
        SubCategory::ALL
            .into_iter()
            .filter(move |s| s.super_category() == self)
    }
}

impl fmt::Display for SuperCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubCategory {
    GaussianBlur,
    MotionBlur,
    GlassBlur,
    LensBlur,
    ZoomBlur,
    JitterBlur,
    GaussianNoiseRgb,
    GaussianNoiseYcbcr,
    SpeckleNoise,
    CorrelatedNoise,
    PoissonNoise,
    ImpulseNoise,
    Jpeg,
    Jpeg2000,
    BrightenShiftHsv,
    BrightenShiftRgb,
    BrightenGammaHsv,
    BrightenGammaRgb,
    DarkenShiftHsv,
    DarkenShiftRgb,
    DarkenGammaHsv,
    DarkenGammaRgb,
    ContrastStrengthenScale,
    ContrastStrengthenStretch,
    ContrastWeakenScale,
    ContrastWeakenStretch,
    SaturateStrengthenHsv,
    SaturateStrengthenYcbcr,
    SaturateWeakenHsv,
    SaturateWeakenYcbcr,
    OverSharpen,
    Pixelate,
    QuantizeHistEqual,
    QuantizeMedianCut,
    QuantizeOtsu,
}

impl SubCategory {
    pub const ALL: [SubCategory; 35] = [
        SubCategory::GaussianBlur,
        SubCategory::MotionBlur,
        SubCategory::GlassBlur,
        SubCategory::LensBlur,
        SubCategory::ZoomBlur,
        SubCategory::JitterBlur,
        SubCategory::GaussianNoiseRgb,
        SubCategory::GaussianNoiseYcbcr,
        SubCategory::SpeckleNoise,
        SubCategory::CorrelatedNoise,
        SubCategory::PoissonNoise,
        SubCategory::ImpulseNoise,
        SubCategory::Jpeg,
        SubCategory::Jpeg2000,
        SubCategory::BrightenShiftHsv,
        SubCategory::BrightenShiftRgb,
        SubCategory::BrightenGammaHsv,
        SubCategory::BrightenGammaRgb,
        SubCategory::DarkenShiftHsv,
        SubCategory::DarkenShiftRgb,
        SubCategory::DarkenGammaHsv,
        SubCategory::DarkenGammaRgb,
        SubCategory::ContrastStrengthenScale,
        SubCategory::ContrastStrengthenStretch,
        SubCategory::ContrastWeakenScale,
        SubCategory::ContrastWeakenStretch,
        SubCategory::SaturateStrengthenHsv,
        SubCategory::SaturateStrengthenYcbcr,
        SubCategory::SaturateWeakenHsv,
        SubCategory::SaturateWeakenYcbcr,
        SubCategory::OverSharpen,
        SubCategory::Pixelate,
        SubCategory::QuantizeHistEqual,
        SubCategory::QuantizeMedianCut,
        SubCategory::QuantizeOtsu,
    ];

    pub fn super_category(self) -> SuperCategory {
        use SubCategory::*;
        match self {
            GaussianBlur | MotionBlur | GlassBlur | LensBlur | ZoomBlur | JitterBlur => {
                SuperCategory::Blur
            }
            GaussianNoiseRgb | GaussianNoiseYcbcr | SpeckleNoise | CorrelatedNoise
            | PoissonNoise | ImpulseNoise => SuperCategory::Noise,
            Jpeg | Jpeg2000 => SuperCategory::Compression,
            BrightenShiftHsv | BrightenShiftRgb | BrightenGammaHsv | BrightenGammaRgb => {
                SuperCategory::Brighten
            }
            DarkenShiftHsv | DarkenShiftRgb | DarkenGammaHsv | DarkenGammaRgb => {
                SuperCategory::Darken
            }
            ContrastStrengthenScale | ContrastStrengthenStretch => {
                SuperCategory::ContrastStrengthen
            }
            ContrastWeakenScale | ContrastWeakenStretch => SuperCategory::ContrastWeaken,
            SaturateStrengthenHsv | SaturateStrengthenYcbcr => SuperCategory::SaturateStrengthen,
            SaturateWeakenHsv | SaturateWeakenYcbcr => SuperCategory::SaturateWeaken,
            OverSharpen => SuperCategory::OverSharpen,
            Pixelate => SuperCategory::Pixelate,
            QuantizeHistEqual | QuantizeMedianCut | QuantizeOtsu => SuperCategory::Quantize,
        }
    }

    /// Machine identifier, identical to the serde form (`"motion_blur"`).
    pub fn id(self) -> &'static str {
        use SubCategory::*;
        match self {
            GaussianBlur => "gaussian_blur",
            MotionBlur => "motion_blur",
            GlassBlur => "glass_blur",
            LensBlur => "lens_blur",
            ZoomBlur => "zoom_blur",
            JitterBlur => "jitter_blur",
            GaussianNoiseRgb => "gaussian_noise_rgb",
            GaussianNoiseYcbcr => "gaussian_noise_ycbcr",
            SpeckleNoise => "speckle_noise",
            CorrelatedNoise => "correlated_noise",
            PoissonNoise => "poisson_noise",
            ImpulseNoise => "impulse_noise",
            Jpeg => "jpeg",
            Jpeg2000 => "jpeg2000",
            BrightenShiftHsv => "brighten_shift_hsv",
            BrightenShiftRgb => "brighten_shift_rgb",
            BrightenGammaHsv => "brighten_gamma_hsv",
            BrightenGammaRgb => "brighten_gamma_rgb",
            DarkenShiftHsv => "darken_shift_hsv",
            DarkenShiftRgb => "darken_shift_rgb",
            DarkenGammaHsv => "darken_gamma_hsv",
            DarkenGammaRgb => "darken_gamma_rgb",
            ContrastStrengthenScale => "contrast_strengthen_scale",
            ContrastStrengthenStretch => "contrast_strengthen_stretch",
            ContrastWeakenScale => "contrast_weaken_scale",
            ContrastWeakenStretch => "contrast_weaken_stretch",
            SaturateStrengthenHsv => "saturate_strengthen_hsv",
            SaturateStrengthenYcbcr => "saturate_strengthen_ycbcr",
            SaturateWeakenHsv => "saturate_weaken_hsv",
            SaturateWeakenYcbcr => "saturate_weaken_ycbcr",
            OverSharpen => "over_sharpen",
            Pixelate => "pixelate",
            QuantizeHistEqual => "quantize_hist_equal",
            QuantizeMedianCut => "quantize_median_cut",
            QuantizeOtsu => "quantize_otsu",
        }
    }

    /// Accepts the machine id (`jpeg`, `motion_blur`, `motion-blur`) or the
    /// display name of a sub-category.
    pub fn from_id(text: &str) -> Option<SubCategory> {
        let norm = text.trim().to_ascii_lowercase().replace('-', "_");
        SubCategory::ALL
            .into_iter()
            .find(|s| s.id() == norm)
            .or_else(|| match parse_distortion_name(text) {
                Some(NameMatch::Sub(s)) => Some(s),
                _ => None,
            })
    }
}

impl fmt::Display for SubCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(distortion_name(*self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Severity {
    Slight = 1,
    Moderate = 2,
    Obvious = 3,
    Serious = 4,
    Catastrophic = 5,
}

impl Severity {
    pub const ALL: [Severity; 5] = [
        Severity::Slight,
        Severity::Moderate,
        Severity::Obvious,
        Severity::Serious,
        Severity::Catastrophic,
    ];

    pub fn from_level(level: u8) -> Option<Severity> {
        Severity::ALL.get(usize::from(level).checked_sub(1)?).copied()
    }

    pub fn level(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Severity::Slight => "slight",
            Severity::Moderate => "moderate",
            Severity::Obvious => "obvious",
            Severity::Serious => "serious",
            Severity::Catastrophic => "catastrophic",
        }
    }

    fn index(self) -> usize {
        self as usize - 1
    }
}

impl TryFrom<u8> for Severity {
    type Error = String;

    fn try_from(level: u8) -> std::result::Result<Self, Self::Error> {
        Severity::from_level(level).ok_or_else(|| format!("severity level {level} outside 1..=5"))
    }
}

impl From<Severity> for u8 {
    fn from(s: Severity) -> u8 {
        s.level()
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One concrete corruption. Serializes as
/// `{"sub": "...", "level": n, "params": {...}, "seed": n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    pub sub: SubCategory,
    #[serde(rename = "level")]
    pub severity: Severity,
    pub params: Params,
    pub seed: u64,
}

impl DistortionSpec {
    /// Spec with the canonical parameters for `(sub, severity)`.
    pub fn new(sub: SubCategory, severity: Severity, seed: u64) -> Self {
        Self {
            sub,
            severity,
            params: resolve_params(sub, severity),
            seed,
        }
    }

    /// Replace the parameters; the override must match the sub-category's
    /// parameter kind.
    pub fn with_params(mut self, params: Params) -> Result<Self> {
        if !params.fits(self.sub) {
            return Err(Error::InvalidArgument(format!(
                "parameters {params:?} do not apply to {}",
                self.sub.id()
            )));
        }
        self.params = params;
        Ok(self)
    }

    pub fn super_category(&self) -> SuperCategory {
        self.sub.super_category()
    }
}

/// Apply one distortion. Output has the input's dimensions and channels in
/// [0, 1]; the result is a pure function of `(img, spec)`.
pub fn apply_distortion(img: &ImageBuf, spec: &DistortionSpec) -> Result<ImageBuf> {
    use SubCategory as S;
    if !spec.params.fits(spec.sub) {
        return Err(Error::InvalidArgument(format!(
            "parameters {:?} do not apply to {}",
            spec.params,
            spec.sub.id()
        )));
    }
    let support = spec.params.required_support();
    if img.width().min(img.height()) < support {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            required: support,
        });
    }
    let seed = spec.seed;
    let out = match (spec.sub, &spec.params) {
        (S::GaussianBlur, Params::GaussianBlur { sigma, kernel_size }) => {
            blur::gaussian(img, *sigma, *kernel_size)
        }
        (S::MotionBlur, Params::MotionBlur { radius, sigma }) => {
            blur::motion(img, *radius, *sigma, seed)?
        }
        (S::GlassBlur, Params::GlassBlur { sigma, shift, iterations }) => {
            blur::glass(img, *sigma, *shift, *iterations, seed)
        }
        (S::LensBlur, Params::LensBlur { radius }) => blur::lens(img, *radius)?,
        (S::ZoomBlur, Params::ZoomBlur { max_zoom, steps }) => blur::zoom(img, *max_zoom, *steps),
        (S::JitterBlur, Params::JitterBlur { shift, copies }) => {
            blur::jitter(img, *shift, *copies, seed)
        }
        (S::GaussianNoiseRgb, Params::GaussianNoise { sigma }) => {
            noise::gaussian_rgb(img, *sigma, seed)
        }
        (
            S::GaussianNoiseYcbcr,
            Params::YcbcrNoise {
                sigma_luma,
                sigma_cr,
                sigma_cb,
            },
        ) => noise::gaussian_ycbcr(img, *sigma_luma, *sigma_cr / 255.0, *sigma_cb / 255.0, seed),
        (S::SpeckleNoise, Params::SpeckleNoise { sigma }) => noise::speckle(img, *sigma, seed),
        (S::CorrelatedNoise, Params::CorrelatedNoise { sigma, window }) => {
            noise::correlated(img, *sigma, *window, seed)?
        }
        (S::PoissonNoise, Params::PoissonNoise { interval }) => {
            noise::poisson(img, *interval, seed)?
        }
        (S::ImpulseNoise, Params::ImpulseNoise { density }) => noise::impulse(img, *density, seed),
        (S::Jpeg, Params::Jpeg { quality }) => compress::jpeg(img, *quality)?,
        (S::Jpeg2000, Params::Jpeg2000 { quality }) => compress::jpeg2000(img, *quality)?,
        (_, Params::ValueShift { delta }) => tone::value_shift(img, *delta),
        (_, Params::RgbShift { delta }) => tone::rgb_shift(img, *delta),
        (_, Params::ValueGamma { gamma }) => tone::value_gamma(img, *gamma),
        (_, Params::RgbGamma { gamma }) => tone::rgb_gamma(img, *gamma),
        (_, Params::ContrastScale { alpha }) => tone::contrast_scale(img, *alpha),
        (_, Params::ContrastStretch { alpha, epsilon }) => {
            tone::contrast_stretch(img, *alpha, *epsilon)
        }
        (_, Params::SaturationHsv { scale }) => tone::saturation_hsv(img, *scale),
        (_, Params::SaturationYcbcr { scale }) => tone::saturation_ycbcr(img, *scale),
        (
            S::OverSharpen,
            Params::OverSharpen {
                alpha,
                blur_sigma,
                kernel_size,
            },
        ) => tone::over_sharpen(img, *alpha, *blur_sigma, *kernel_size),
        (S::Pixelate, Params::Pixelate { factor }) => tone::pixelate(img, *factor)?,
        (S::QuantizeHistEqual, Params::Quantize { classes }) => {
            quantize::histogram_equalized(img, *classes)
        }
        (S::QuantizeMedianCut, Params::Quantize { classes }) => quantize::median_cut(img, *classes),
        (S::QuantizeOtsu, Params::Quantize { classes }) => quantize::multi_otsu(img, *classes),
        (sub, params) => {
            return Err(Error::InvalidArgument(format!(
                "parameters {params:?} do not apply to {}",
                sub.id()
            )))
        }
    };
    debug_assert_eq!((out.width(), out.height()), (img.width(), img.height()));
    Ok(out)
}

/// Apply specs in order.
pub fn apply_all<'a>(
    img: &ImageBuf,
    specs: impl IntoIterator<Item = &'a DistortionSpec>,
) -> Result<ImageBuf> {
    let mut cur = img.clone();
    for spec in specs {
        cur = apply_distortion(&cur, spec)?;
    }
    Ok(cur)
}

/// Load `input`, apply `spec`, and save to `output` in the format implied
/// by its extension.
pub fn distort_file(input: &Path, spec: &DistortionSpec, output: &Path) -> Result<()> {
    let img = load_image(input)?;
    let out = apply_distortion(&img, spec)?;
    save_image(&out, output, ImageFormat::from_path(output))
}

/// Whether this build can apply the sub-category (JPEG2000 needs the
/// `jpeg2000` feature).
pub fn is_supported(sub: SubCategory) -> bool {
    sub != SubCategory::Jpeg2000 || cfg!(feature = "jpeg2000")
}

// Random stream domains, one per stochastic step.
pub(crate) mod domain {
    pub const MOTION_ANGLE: u64 = 1;
    pub const GLASS: u64 = 2;
    pub const JITTER: u64 = 3;
    pub const NOISE_RGB: u64 = 4;
    pub const NOISE_YCBCR: u64 = 5;
    pub const SPECKLE: u64 = 6;
    pub const CORRELATED: u64 = 7;
    pub const POISSON: u64 = 8;
    pub const IMPULSE: u64 = 9;
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn taxonomy_counts() {
        assert_eq!(SuperCategory::ALL.len(), 12);
        assert_eq!(SubCategory::ALL.len(), 35);
        let counts: Vec<usize> = SuperCategory::ALL.iter().map(|c| c.subs().count()).collect();
        assert_eq!(counts, vec![6, 6, 2, 4, 4, 2, 2, 2, 2, 1, 1, 3]);
    }

    #[test]
    fn ids_match_serde_and_are_unique() {
        let mut seen = HashMap::new();
        for sub in SubCategory::ALL {
            let json = serde_json::to_string(&sub).unwrap();
            assert_eq!(json, format!("\"{}\"", sub.id()));
            assert!(seen.insert(sub.id(), sub).is_none());
            assert_eq!(SubCategory::from_id(sub.id()), Some(sub));
        }
        assert_eq!(SubCategory::from_id("motion-blur"), Some(SubCategory::MotionBlur));
        assert_eq!(SubCategory::from_id("JPEG"), Some(SubCategory::Jpeg));
        assert_eq!(SubCategory::from_id("sharpness"), None);
    }

    #[test]
    fn severity_bijection() {
        for (i, s) in Severity::ALL.iter().enumerate() {
            assert_eq!(s.level() as usize, i + 1);
            assert_eq!(Severity::from_level(s.level()), Some(*s));
        }
        assert_eq!(Severity::from_level(0), None);
        assert_eq!(Severity::from_level(6), None);
        assert_eq!(Severity::Slight.name(), "slight");
        assert_eq!(Severity::Catastrophic.name(), "catastrophic");
    }

    #[test]
    fn spec_json_shape() {
        let spec = DistortionSpec::new(SubCategory::MotionBlur, Severity::Obvious, 42);
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["sub"], "motion_blur");
        assert_eq!(v["level"], 3);
        assert_eq!(v["seed"], 42);
        assert_eq!(v["params"]["radius"], 15);
        assert_eq!(v["params"]["sigma"], 7.0);
        let back: DistortionSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);
        let bad = serde_json::json!({"sub": "jpeg", "level": 9, "params": {"kind": "jpeg", "quality": 5}, "seed": 0});
        assert!(serde_json::from_value::<DistortionSpec>(bad).is_err());
    }

    #[test]
    fn mismatched_override_rejected() {
        let spec = DistortionSpec::new(SubCategory::Jpeg, Severity::Slight, 0);
        assert!(spec.with_params(Params::ImpulseNoise { density: 0.1 }).is_err());
    }

    #[test]
    fn too_small_for_kernel() {
        let img = ImageBuf::filled(8, 8, [0.5; 3]).unwrap();
        let spec = DistortionSpec::new(SubCategory::GaussianBlur, Severity::Catastrophic, 0);
        assert!(matches!(
            apply_distortion(&img, &spec),
            Err(Error::ImageTooSmall { required: 17, .. })
        ));
    }

    fn gradient(w: usize, h: usize) -> ImageBuf {
        ImageBuf::from_fn(w, h, |x, y| {
            [
                x as f64 / w as f64,
                y as f64 / h as f64,
                ((x * 3 + y * 5) % 11) as f64 / 10.0,
            ]
        })
        .unwrap()
    }

    fn apply_override(img: &ImageBuf, sub: SubCategory, level: u8, params: Params) -> ImageBuf {
        let spec = DistortionSpec::new(sub, Severity::from_level(level).unwrap(), 0)
            .with_params(params)
            .unwrap();
        apply_distortion(img, &spec).unwrap()
    }

    #[test]
    fn constant_gray_fixed_under_contrast_weaken() {
        let img = ImageBuf::filled(16, 16, [0.5; 3]).unwrap();
        let spec = DistortionSpec::new(SubCategory::ContrastWeakenScale, Severity::Catastrophic, 0);
        assert_eq!(spec.params, Params::ContrastScale { alpha: 0.2 });
        let out = apply_distortion(&img, &spec).unwrap();
        for v in out.data() {
            assert!((v - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn saturate_weaken_hsv_level5_is_gray() {
        let spec = DistortionSpec::new(SubCategory::SaturateWeakenHsv, Severity::Catastrophic, 0);
        let out = apply_distortion(&gradient(20, 20), &spec).unwrap();
        for px in out.data().chunks_exact(3) {
            assert!((px[0] - px[1]).abs() <= 1e-6 && (px[1] - px[2]).abs() <= 1e-6);
        }
    }

    #[test]
    fn brighten_rgb_level1_on_black() {
        let img = ImageBuf::filled(6, 6, [0.0; 3]).unwrap();
        let spec = DistortionSpec::new(SubCategory::BrightenShiftRgb, Severity::Slight, 0);
        let out = apply_distortion(&img, &spec).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.1));
    }

    #[test]
    fn pixelate_level5_on_4x4_is_mean() {
        // Red ramps 0, 0.25, 0.5, 0.75 per column (mean 0.375); green is 1
        // in the top row only (mean 0.25); blue is constant 0.6.
        let img = ImageBuf::from_fn(4, 4, |x, y| {
            [x as f64 * 0.25, if y == 0 { 1.0 } else { 0.0 }, 0.6]
        })
        .unwrap();
        let spec = DistortionSpec::new(SubCategory::Pixelate, Severity::Catastrophic, 0);
        let out = apply_distortion(&img, &spec).unwrap();
        for px in out.data().chunks_exact(3) {
            assert!((px[0] - 0.375).abs() < 1e-12);
            assert!((px[1] - 0.25).abs() < 1e-12);
            assert!((px[2] - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_limits() {
        let img = gradient(24, 24);
        let close = |out: &ImageBuf| {
            out.data()
                .iter()
                .zip(img.data())
                .all(|(a, b)| (a - b).abs() < 1e-9)
        };
        assert!(close(&apply_override(
            &img,
            SubCategory::GaussianBlur,
            1,
            Params::GaussianBlur { sigma: 0.0, kernel_size: 1 }
        )));
        assert!(close(&apply_override(
            &img,
            SubCategory::SaturateStrengthenHsv,
            1,
            Params::SaturationHsv { scale: 1.0 }
        )));
        assert!(close(&apply_override(
            &img,
            SubCategory::SaturateWeakenYcbcr,
            1,
            Params::SaturationYcbcr { scale: 1.0 }
        )));
        assert!(close(&apply_override(
            &img,
            SubCategory::ImpulseNoise,
            3,
            Params::ImpulseNoise { density: 0.0 }
        )));
    }

    #[test]
    fn every_sub_preserves_shape_range_and_is_deterministic() {
        let img = gradient(48, 40);
        for sub in SubCategory::ALL {
            if !is_supported(sub) {
                continue;
            }
            for sev in Severity::ALL {
                let spec = DistortionSpec::new(sub, sev, 99);
                let a = apply_distortion(&img, &spec).unwrap();
                assert_eq!((a.width(), a.height()), (48, 40), "{sub:?}");
                assert!(a.data().iter().all(|v| (0.0..=1.0).contains(v)), "{sub:?}");
                assert_eq!(a, apply_distortion(&img, &spec).unwrap(), "{sub:?}");
            }
        }
    }

    #[test]
    fn seed_changes_stochastic_output() {
        let img = gradient(32, 32);
        let a = apply_distortion(&img, &DistortionSpec::new(SubCategory::SpeckleNoise, Severity::Obvious, 1)).unwrap();
        let b = apply_distortion(&img, &DistortionSpec::new(SubCategory::SpeckleNoise, Severity::Obvious, 2)).unwrap();
        assert_ne!(a, b);
    }
}
