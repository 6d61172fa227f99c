//! The severity table: canonical parameters for every (sub-category, level).

use serde::{Deserialize, Serialize};

use super::{Severity, SubCategory, SuperCategory};

/// Bumped whenever a catalog value changes.
pub const CATALOG_VERSION: &str = "1.0.0";

/// Resolved numeric parameters of one distortion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Params {
    GaussianBlur { sigma: f64, kernel_size: usize },
    /// Line kernel of `radius` taps, Gaussian-weighted along its length.
    MotionBlur { radius: u32, sigma: f64 },
    GlassBlur { sigma: f64, shift: u32, iterations: u32 },
    LensBlur { radius: u32 },
    ZoomBlur { max_zoom: f64, steps: u32 },
    JitterBlur { shift: u32, copies: u32 },
    GaussianNoise { sigma: f64 },
    /// Luma sigma on the unit scale; chroma sigmas on the 8-bit scale.
    YcbcrNoise { sigma_luma: f64, sigma_cr: f64, sigma_cb: f64 },
    SpeckleNoise { sigma: f64 },
    CorrelatedNoise { sigma: f64, window: usize },
    PoissonNoise { interval: f64 },
    ImpulseNoise { density: f64 },
    Jpeg { quality: u8 },
    /// Target PSNR in dB of the single quality layer.
    Jpeg2000 { quality: f64 },
    ValueShift { delta: f64 },
    RgbShift { delta: f64 },
    ValueGamma { gamma: f64 },
    RgbGamma { gamma: f64 },
    ContrastScale { alpha: f64 },
    ContrastStretch { alpha: f64, epsilon: f64 },
    SaturationHsv { scale: f64 },
    SaturationYcbcr { scale: f64 },
    OverSharpen { alpha: f64, blur_sigma: f64, kernel_size: usize },
    Pixelate { factor: f64 },
    Quantize { classes: u32 },
}

/// Kernel size `round(4 sigma) + 1`, bumped to the next odd size if needed.
pub(crate) fn gaussian_kernel_size(sigma: f64) -> usize {
    let k = (4.0 * sigma).round() as usize + 1;
    if k.is_multiple_of(2) {
        k + 1
    } else {
        k
    }
}

impl Params {
    /// Whether these parameters belong to `sub`'s family.
    pub fn fits(&self, sub: SubCategory) -> bool {
        use SubCategory as S;
        matches!(
            (sub, self),
            (S::GaussianBlur, Params::GaussianBlur { .. })
                | (S::MotionBlur, Params::MotionBlur { .. })
                | (S::GlassBlur, Params::GlassBlur { .. })
                | (S::LensBlur, Params::LensBlur { .. })
                | (S::ZoomBlur, Params::ZoomBlur { .. })
                | (S::JitterBlur, Params::JitterBlur { .. })
                | (S::GaussianNoiseRgb, Params::GaussianNoise { .. })
                | (S::GaussianNoiseYcbcr, Params::YcbcrNoise { .. })
                | (S::SpeckleNoise, Params::SpeckleNoise { .. })
                | (S::CorrelatedNoise, Params::CorrelatedNoise { .. })
                | (S::PoissonNoise, Params::PoissonNoise { .. })
                | (S::ImpulseNoise, Params::ImpulseNoise { .. })
                | (S::Jpeg, Params::Jpeg { .. })
                | (S::Jpeg2000, Params::Jpeg2000 { .. })
                | (S::BrightenShiftHsv | S::DarkenShiftHsv, Params::ValueShift { .. })
                | (S::BrightenShiftRgb | S::DarkenShiftRgb, Params::RgbShift { .. })
                | (S::BrightenGammaHsv | S::DarkenGammaHsv, Params::ValueGamma { .. })
                | (S::BrightenGammaRgb | S::DarkenGammaRgb, Params::RgbGamma { .. })
                | (
                    S::ContrastStrengthenScale | S::ContrastWeakenScale,
                    Params::ContrastScale { .. }
                )
                | (
                    S::ContrastStrengthenStretch | S::ContrastWeakenStretch,
                    Params::ContrastStretch { .. }
                )
                | (
                    S::SaturateStrengthenHsv | S::SaturateWeakenHsv,
                    Params::SaturationHsv { .. }
                )
                | (
                    S::SaturateStrengthenYcbcr | S::SaturateWeakenYcbcr,
                    Params::SaturationYcbcr { .. }
                )
                | (S::OverSharpen, Params::OverSharpen { .. })
                | (S::Pixelate, Params::Pixelate { .. })
                | (
                    S::QuantizeHistEqual | S::QuantizeMedianCut | S::QuantizeOtsu,
                    Params::Quantize { .. }
                )
        )
    }

    /// Smallest image side the distortion's kernel needs.
    pub fn required_support(&self) -> usize {
        match *self {
            Params::GaussianBlur { kernel_size, .. } => kernel_size,
            Params::MotionBlur { radius, .. } => super::blur::motion_kernel_size(radius),
            Params::GlassBlur { sigma, .. } => gaussian_kernel_size(sigma),
            Params::LensBlur { radius } => 2 * radius as usize + 1,
            Params::CorrelatedNoise { window, .. } => window,
            Params::OverSharpen { kernel_size, .. } => kernel_size,
            _ => 1,
        }
    }
}

fn pick<T: Copy>(values: [T; 5], severity: Severity) -> T {
    values[severity.index()]
}

/// Canonical parameters for `(sub, severity)`.
pub fn resolve_params(sub: SubCategory, severity: Severity) -> Params {
    use SubCategory as S;
    let at = |v: [f64; 5]| pick(v, severity);
    match sub {
        S::GaussianBlur => {
            let sigma = at([0.5, 1.0, 2.0, 3.0, 4.0]);
            Params::GaussianBlur {
                sigma,
                kernel_size: gaussian_kernel_size(sigma),
            }
        }
        S::MotionBlur => {
            let (radius, sigma) = pick([(5, 3.0), (10, 5.0), (15, 7.0), (15, 9.0), (20, 12.0)], severity);
            Params::MotionBlur { radius, sigma }
        }
        S::GlassBlur => {
            let (sigma, shift, iterations) = pick(
                [(0.7, 1, 1), (0.9, 2, 1), (1.2, 2, 2), (1.4, 3, 2), (1.6, 4, 2)],
                severity,
            );
            Params::GlassBlur {
                sigma,
                shift,
                iterations,
            }
        }
        S::LensBlur => Params::LensBlur {
            radius: pick([1, 2, 4, 6, 8], severity),
        },
        S::ZoomBlur => Params::ZoomBlur {
            max_zoom: at([1.03, 1.06, 1.10, 1.15, 1.21]),
            steps: 10,
        },
        S::JitterBlur => Params::JitterBlur {
            shift: pick([1, 2, 3, 4, 5], severity),
            copies: 5,
        },
        S::GaussianNoiseRgb => Params::GaussianNoise {
            sigma: at([0.05, 0.1, 0.15, 0.2, 0.25]),
        },
        S::GaussianNoiseYcbcr => {
            let (l, c) = pick(
                [(0.05, 1.0), (0.06, 1.45), (0.07, 1.9), (0.08, 2.35), (0.09, 2.8)],
                severity,
            );
            Params::YcbcrNoise {
                sigma_luma: l,
                sigma_cr: c,
                sigma_cb: c,
            }
        }
        S::SpeckleNoise => Params::SpeckleNoise {
            sigma: at([0.14, 0.21, 0.28, 0.35, 0.42]),
        },
        S::CorrelatedNoise => Params::CorrelatedNoise {
            sigma: at([0.05, 0.1, 0.15, 0.2, 0.25]),
            window: 3,
        },
        S::PoissonNoise => Params::PoissonNoise {
            interval: at([80.0, 60.0, 40.0, 25.0, 15.0]),
        },
        S::ImpulseNoise => Params::ImpulseNoise {
            density: at([0.01, 0.03, 0.05, 0.07, 0.10]),
        },
        S::Jpeg => Params::Jpeg {
            quality: pick([25, 18, 12, 8, 5], severity),
        },
        S::Jpeg2000 => Params::Jpeg2000 {
            quality: at([29.0, 27.5, 26.0, 24.5, 23.0]),
        },
        S::BrightenShiftHsv => Params::ValueShift {
            delta: at([0.1, 0.2, 0.3, 0.4, 0.5]),
        },
        S::DarkenShiftHsv => Params::ValueShift {
            delta: at([-0.1, -0.2, -0.3, -0.4, -0.5]),
        },
        S::BrightenShiftRgb => Params::RgbShift {
            delta: at([0.1, 0.15, 0.2, 0.27, 0.35]),
        },
        S::DarkenShiftRgb => Params::RgbShift {
            delta: at([-0.1, -0.15, -0.2, -0.27, -0.35]),
        },
        S::BrightenGammaHsv => Params::ValueGamma {
            gamma: at(BRIGHTEN_GAMMA),
        },
        S::DarkenGammaHsv => Params::ValueGamma {
            gamma: at(DARKEN_GAMMA),
        },
        S::BrightenGammaRgb => Params::RgbGamma {
            gamma: at(BRIGHTEN_GAMMA),
        },
        S::DarkenGammaRgb => Params::RgbGamma {
            gamma: at(DARKEN_GAMMA),
        },
        S::ContrastStrengthenScale => Params::ContrastScale {
            alpha: at([1.4, 1.7, 2.1, 2.6, 4.0]),
        },
        S::ContrastWeakenScale => Params::ContrastScale {
            alpha: at([0.75, 0.6, 0.45, 0.3, 0.2]),
        },
        S::ContrastStrengthenStretch => Params::ContrastStretch {
            alpha: at([2.0, 4.0, 6.0, 8.0, 10.0]),
            epsilon: STRETCH_EPSILON,
        },
        S::ContrastWeakenStretch => Params::ContrastStretch {
            alpha: at([1.0, 0.9, 0.8, 0.6, 0.4]),
            epsilon: STRETCH_EPSILON,
        },
        S::SaturateStrengthenHsv => Params::SaturationHsv {
            scale: at([3.0, 6.0, 12.0, 20.0, 64.0]),
        },
        S::SaturateWeakenHsv => Params::SaturationHsv {
            scale: at([0.7, 0.55, 0.4, 0.2, 0.0]),
        },
        S::SaturateStrengthenYcbcr => Params::SaturationYcbcr {
            scale: at([2.0, 3.0, 5.0, 8.0, 16.0]),
        },
        S::SaturateWeakenYcbcr => Params::SaturationYcbcr {
            scale: at([0.6, 0.4, 0.2, 0.1, 0.0]),
        },
        S::OverSharpen => Params::OverSharpen {
            alpha: at([2.0, 2.8, 4.0, 6.0, 8.0]),
            blur_sigma: 2.0,
            kernel_size: 9,
        },
        S::Pixelate => Params::Pixelate {
            factor: at([0.5, 0.4, 0.3, 0.25, 0.2]),
        },
        S::QuantizeHistEqual => Params::Quantize {
            classes: pick([24, 16, 8, 6, 4], severity),
        },
        S::QuantizeMedianCut => Params::Quantize {
            classes: pick([20, 15, 10, 6, 3], severity),
        },
        S::QuantizeOtsu => Params::Quantize {
            classes: pick([15, 11, 8, 5, 3], severity),
        },
    }
}

const BRIGHTEN_GAMMA: [f64; 5] = [0.7, 0.58, 0.47, 0.36, 0.25];
const DARKEN_GAMMA: [f64; 5] = [1.5, 1.8, 2.2, 2.7, 3.5];
const STRETCH_EPSILON: f64 = 1e-4;

/// Where a catalog value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSource {
    /// Published parameter list, used as printed.
    Published,
    /// Published list, with the strengthen/weaken assignment chosen to match
    /// the direction of the scaling formula.
    PublishedReassigned,
    /// No published value; chosen for this library.
    Chosen,
}

pub fn param_source(sub: SubCategory) -> ParamSource {
    use SubCategory as S;
    match sub {
        S::GaussianBlur | S::ZoomBlur | S::CorrelatedNoise | S::BrightenGammaRgb
        | S::DarkenGammaRgb => ParamSource::Chosen,
        S::ContrastStrengthenScale | S::ContrastWeakenScale => ParamSource::PublishedReassigned,
        _ => ParamSource::Published,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub sub: SubCategory,
    #[serde(rename = "super")]
    pub super_category: SuperCategory,
    pub name: String,
    pub level: u8,
    pub severity: String,
    pub params: Params,
    pub source: ParamSource,
}

/// The versioned, exportable severity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: String,
    pub entries: Vec<CatalogEntry>,
}

pub fn catalog() -> Catalog {
    let entries = SubCategory::ALL
        .into_iter()
        .flat_map(|sub| {
            Severity::ALL.into_iter().map(move |sev| CatalogEntry {
                sub,
                super_category: sub.super_category(),
                name: super::distortion_name(sub).to_string(),
                level: sev.level(),
                severity: sev.name().to_string(),
                params: resolve_params(sub, sev),
                source: param_source(sub),
            })
        })
        .collect();
    Catalog {
        version: CATALOG_VERSION.to_string(),
        entries,
    }
}

impl Catalog {
    pub fn get(&self, sub: SubCategory, level: u8) -> Option<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.sub == sub && e.level == level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_examples() {
        assert_eq!(
            resolve_params(SubCategory::MotionBlur, Severity::Obvious),
            Params::MotionBlur { radius: 15, sigma: 7.0 }
        );
        assert_eq!(
            resolve_params(SubCategory::ImpulseNoise, Severity::Catastrophic),
            Params::ImpulseNoise { density: 0.10 }
        );
        assert_eq!(
            resolve_params(SubCategory::Jpeg, Severity::Slight),
            Params::Jpeg { quality: 25 }
        );
    }

    #[test]
    fn gaussian_kernel_sizes() {
        let sizes: Vec<usize> = Severity::ALL
            .iter()
            .map(|&s| match resolve_params(SubCategory::GaussianBlur, s) {
                Params::GaussianBlur { kernel_size, .. } => kernel_size,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(sizes, vec![3, 5, 9, 13, 17]);
        assert_eq!(gaussian_kernel_size(0.1), 1);
        assert_eq!(gaussian_kernel_size(0.7), 5);
    }

    #[test]
    fn table_is_complete_and_consistent() {
        let cat = catalog();
        assert_eq!(cat.entries.len(), 35 * 5);
        for e in &cat.entries {
            assert!(e.params.fits(e.sub), "{:?}", e.sub);
            assert_eq!(e.super_category, e.sub.super_category());
        }
    }

    #[test]
    fn shift_signs_follow_direction() {
        for sev in Severity::ALL {
            match (
                resolve_params(SubCategory::BrightenShiftHsv, sev),
                resolve_params(SubCategory::DarkenShiftHsv, sev),
            ) {
                (Params::ValueShift { delta: b }, Params::ValueShift { delta: d }) => {
                    assert!(b > 0.0 && d < 0.0 && b == -d)
                }
                _ => unreachable!(),
            }
        }
    }
}
