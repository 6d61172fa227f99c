use std::path::Path;

use ::image::codecs::jpeg::JpegEncoder;
use ::image::codecs::png::PngEncoder;
use ::image::{ExtendedColorType, ImageEncoder, ImageReader};
use serde::{Deserialize, Serialize};

use super::ImageBuf;
use crate::error::{Error, Result};

/// On-disk encodings. 8-bit quantization (`round(v * 255)`) happens here and
/// nowhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    Png,
    /// Baseline JPEG with quality in 1..=100.
    Jpeg(u8),
}

impl ImageFormat {
    /// PNG unless the extension says JPEG (quality 95 in that case).
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("jpg") | Some("jpeg") => ImageFormat::Jpeg(95),
            _ => ImageFormat::Png,
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuf> {
    let path = path.as_ref();
    let dynamic = ImageReader::open(path)?
        .with_guessed_format()?
        .decode()
        .map_err(|source| Error::Decode {
            path: path.to_path_buf(),
            source,
        })?;
    let rgb = dynamic.to_rgb8();
    ImageBuf::from_rgb8(rgb.width() as usize, rgb.height() as usize, rgb.as_raw())
}

pub fn decode_image(bytes: &[u8]) -> Result<ImageBuf> {
    let dynamic = ::image::load_from_memory(bytes).map_err(|e| Error::Codec(e.to_string()))?;
    let rgb = dynamic.to_rgb8();
    ImageBuf::from_rgb8(rgb.width() as usize, rgb.height() as usize, rgb.as_raw())
}

pub fn encode_image(img: &ImageBuf, format: ImageFormat) -> Result<Vec<u8>> {
    let bytes = img.to_rgb8();
    let (w, h) = (img.width() as u32, img.height() as u32);
    let mut out = Vec::new();
    match format {
        ImageFormat::Png => PngEncoder::new(&mut out)
            .write_image(&bytes, w, h, ExtendedColorType::Rgb8)
            .map_err(|e| Error::Codec(e.to_string()))?,
        ImageFormat::Jpeg(q) => {
            if !(1..=100).contains(&q) {
                return Err(Error::InvalidArgument(format!(
                    "JPEG quality {q} outside 1..=100"
                )));
            }
            JpegEncoder::new_with_quality(&mut out, q)
                .encode(&bytes, w, h, ExtendedColorType::Rgb8)
                .map_err(|e| Error::Codec(e.to_string()))?
        }
    }
    Ok(out)
}

pub fn save_image(img: &ImageBuf, path: impl AsRef<Path>, format: ImageFormat) -> Result<()> {
    let bytes = encode_image(img, format)?;
    std::fs::write(path, bytes)?;
    Ok(())
}
