use iqakit_core::compose::combination_table;
use iqakit_core::distort::catalog;
use serde_json::json;

use super::emit;
use crate::CatalogArgs;

pub fn run(args: CatalogArgs) -> anyhow::Result<()> {
    let cat = catalog();
    let doc = json!({
        "version": cat.version,
        "severity_table": cat.entries,
        "combination_table": combination_table(),
    });
    emit(args.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&doc)?))
}
