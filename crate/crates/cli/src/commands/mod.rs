pub mod build;
pub mod catalog;
pub mod distort;
pub mod eval;
pub mod score;

use std::io::Write;
use std::path::Path;

use anyhow::Context;

use crate::config::usage;

/// Write `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn thread_pool(parallel: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    if parallel == Some(0) {
        return Err(usage("--parallel must be at least 1"));
    }
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.unwrap_or(0))
        .build()?)
}

pub fn require_file(key: &str, path: &Path) -> anyhow::Result<()> {
    if !path.is_file() {
        return Err(usage(format!("--{key}: {} is not a readable file", path.display())));
    }
    Ok(())
}
