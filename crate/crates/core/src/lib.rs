//! Building blocks for image quality assessment datasets and evaluation.
//!
//! The crate is organised bottom-up:
//!
//! - [`image`]: the floating-point RGB buffer, colour conversions, filtering,
//!   resampling and PSNR.
//! - [`distort`]: the 35 severity-parameterised distortions grouped into 12
//!   super-categories, plus the name tables used for answer matching.
//! - [`compose`]: legal single/multi-distortion recipes and the OOD split.
//! - [`dataset`]: question/response triplets, prompt assembly, JSONL I/O.
//! - [`scoring`]: comparison plans and win-rate quality scores.
//! - [`metrics`]: accuracy, SRCC/PLCC, BLEU, ROUGE-L and run evaluation.

pub mod compose;
pub mod dataset;
pub mod distort;
pub mod error;
pub mod image;
pub mod metrics;
pub mod rng;
pub mod scoring;

pub use error::{Error, Result};
pub use image::{ImageBuf, ResampleMode};
