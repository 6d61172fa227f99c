use iqakit_core::compose::Setting;
use iqakit_core::dataset::{build_dataset, BuildConfig, Task};

use crate::config::{normalize, resolve, usage, Overrides};
use crate::BuildArgs;

pub fn run(args: BuildArgs) -> anyhow::Result<()> {
    let mut o = Overrides::default();
    o.set("refs", args.refs)
        .set("task", args.task)
        .set("setting", args.setting)
        .set("count", args.count)
        .set("pristine_frac", args.pristine_frac)
        .set("multi_frac", args.multi_frac)
        .set("seed", args.seed)
        .set("out", args.out)
        .set("mos", args.mos)
        .set("parallel", args.parallel);
    let cfg = resolve_config(args.config.as_deref(), o)?;
    cfg.validate().map_err(usage)?;
    let summary = build_dataset(&cfg)?;
    eprintln!("wrote {} records to {}", summary.records, cfg.out.display());
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn resolve_config(path: Option<&std::path::Path>, mut o: Overrides) -> anyhow::Result<BuildConfig> {
    // Task and setting accept their flag spellings in either source.
    let mut file = match path {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    for src in [&mut file, &mut o] {
        normalize("task", src, |s| s.parse::<Task>().map_err(usage))?;
        normalize("setting", src, |s| s.parse::<Setting>().map_err(usage))?;
    }
    file.extend(o);
    resolve(None, file)
}
