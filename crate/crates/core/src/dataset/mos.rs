use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One CSV row: `image_path,reference_path,content_group_id,mos`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosRow {
    pub image_path: String,
    pub reference_path: String,
    pub content_group_id: String,
    pub mos: f64,
}

/// Rows grouped by content, groups in sorted id order.
#[derive(Debug, Clone, Default)]
pub struct MosTable {
    rows: Vec<MosRow>,
    groups: BTreeMap<String, Vec<usize>>,
}

impl MosTable {
    pub fn from_rows(rows: Vec<MosRow>) -> Result<Self> {
        let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            if !r.mos.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "MOS for {} is not finite",
                    r.image_path
                )));
            }
            groups.entry(r.content_group_id.clone()).or_default().push(i);
        }
        Ok(Self { rows, groups })
    }

    /// Read a CSV table. Relative image paths are checked against the CSV's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut rows = Vec::new();
        for (i, row) in reader.deserialize::<MosRow>().enumerate() {
            let row = row.map_err(|e| Error::Parse {
                path: path.to_owned(),
                line: i + 2,
                message: e.to_string(),
            })?;
            rows.push(row);
        }
        let base = path.parent().unwrap_or(Path::new("."));
        for (i, r) in rows.iter().enumerate() {
            if !base.join(&r.image_path).exists() {
                return Err(Error::Parse {
                    path: path.to_owned(),
                    line: i + 2,
                    message: format!("image {} does not exist", r.image_path),
                });
            }
        }
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> &[MosRow] {
        &self.rows
    }

    pub fn group_ids(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(String::as_str)
    }

    pub fn group(&self, id: &str) -> Vec<&MosRow> {
        self.groups
            .get(id)
            .map(|ix| ix.iter().map(|&i| &self.rows[i]).collect())
            .unwrap_or_default()
    }

    /// Groups that can yield a non-tied pair.
    pub fn rateable_groups(&self) -> Vec<&str> {
        self.groups
            .iter()
            .filter(|(_, ix)| {
                ix.iter()
                    .any(|&i| self.rows[i].mos != self.rows[ix[0]].mos)
            })
            .map(|(g, _)| g.as_str())
            .collect()
    }
}
