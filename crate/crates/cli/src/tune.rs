use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use fracroot::lle::read_profile_csv;
use fracroot::tuning::{profile_features, select_alpha, AlphaCandidate, SelectionCriteria};
use serde::{Deserialize, Serialize};

use crate::manifest::{digests, sha256_file, FileDigest, Manifest};
use crate::profile::ObservableFilter;
use crate::{default_out, manifest_dir, UsageError};

#[derive(Args, Debug)]
pub struct TuneArgs {
    /// Directory holding *_profile.csv files [default: data].
    #[arg(long, env = "FRACROOT_OUT")]
    input: Option<PathBuf>,
    /// Report path [default: <input>/tuning_report.json].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObservableFilter::Both)]
    observable: ObservableFilter,
    /// Restrict to these case labels (comma-separated).
    #[arg(long)]
    cases: Option<String>,
    #[arg(long, default_value_t = 0.8)]
    min_negative_fraction: f64,
    #[arg(long, default_value_t = 0.3)]
    max_transient_fraction: f64,
    #[arg(long, default_value_t = 0.5)]
    max_positive_excursion: f64,
    #[arg(long, default_value_t = 0.5)]
    late_window_fraction: f64,
    #[arg(long, conflicts_with_all = ["input", "cases"])]
    replay: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TuneConfig {
    pub inputs: Vec<PathBuf>,
    pub criteria: SelectionCriteria,
}

fn discover(dir: &Path, filter: ObservableFilter, cases: Option<&[String]>) -> Result<Vec<PathBuf>> {
    let mut found = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some(stem) = name.strip_suffix("_profile.csv") else {
            continue;
        };
        let Some(meta) = fracroot::ensemble::parse_matrix_file_name(&format!("{stem}.csv")) else {
            continue;
        };
        if filter.accepts(meta.observable) && cases.is_none_or(|c| c.contains(&meta.case_label)) {
            found.push(path);
        }
    }
    found.sort();
    if found.is_empty() {
        bail!("no profile files found in {}", dir.display());
    }
    Ok(found)
}

fn execute(cfg: &TuneConfig, report_path: &Path) -> Result<(Manifest, f64)> {
    let mut by_alpha: BTreeMap<u64, AlphaCandidate> = BTreeMap::new();
    let mut observables = Vec::new();
    let mut cases = Vec::new();
    for path in &cfg.inputs {
        let prof = read_profile_csv(path)?;
        let meta = prof
            .meta
            .clone()
            .with_context(|| format!("{} does not follow the profile naming convention", path.display()))?;
        let feats = profile_features(&prof, cfg.criteria.late_window_fraction)?;
        let key = if meta.alpha == 0.0 { 0 } else { meta.alpha.to_bits() };
        by_alpha
            .entry(key)
            .or_insert_with(|| AlphaCandidate {
                alpha: meta.alpha,
                profiles: Vec::new(),
            })
            .profiles
            .push(feats);
        let obs = meta.observable.to_string();
        if !observables.contains(&obs) {
            observables.push(obs);
        }
        if !cases.contains(&meta.case_label) {
            cases.push(meta.case_label);
        }
    }
    let mut candidates: Vec<AlphaCandidate> = by_alpha.into_values().collect();
    candidates.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    observables.sort();
    cases.sort();
    let report = select_alpha(&candidates, &cfg.criteria, observables, cases)?;

    if let Some(dir) = report_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(report_path, serde_json::to_string_pretty(&report)? + "\n")
        .with_context(|| format!("writing {}", report_path.display()))?;

    let dir = manifest_dir(report_path);
    let mut m = Manifest::new("tune", cfg)?;
    m.inputs = cfg
        .inputs
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect::<Result<_>>()?;
    m.outputs = digests(&dir, &[report_path.to_path_buf()])?;
    m.write(&dir.join("tune_manifest.json"))?;
    for r in &report.per_alpha {
        println!(
            "alpha {:<5} {:<12} negative {:.3}  transient {:>2}  excursion {:.3}  late lambda1 {:.4}",
            r.alpha,
            format!("{:?}", r.classification).to_lowercase(),
            r.negative_fraction,
            r.transient_end_index,
            r.max_excursion,
            r.mean_late_lambda1
        );
    }
    Ok((m, report.selected_alpha))
}

pub fn run(a: TuneArgs) -> Result<()> {
    if let Some(path) = &a.replay {
        let recorded = Manifest::read(path, "tune")?;
        let cfg: TuneConfig = recorded.config()?;
        cfg.criteria.validate().map_err(UsageError::from)?;
        let dir = manifest_dir(path);
        let report = dir.join(&recorded.outputs.first().context("manifest lists no report")?.path);
        execute(&cfg, &report)?;
        let n = recorded.verify_outputs(&dir)?;
        println!("replay matched {n} files in {}", dir.display());
        return Ok(());
    }
    let criteria = SelectionCriteria {
        min_negative_fraction: a.min_negative_fraction,
        max_transient_fraction: a.max_transient_fraction,
        max_positive_excursion: a.max_positive_excursion,
        late_window_fraction: a.late_window_fraction,
    };
    criteria.validate().map_err(UsageError::from)?;
    let input = a.input.clone().unwrap_or_else(default_out);
    let cases: Option<Vec<String>> = a
        .cases
        .as_ref()
        .map(|s| s.split(',').map(|c| c.trim().to_string()).collect());
    let inputs = discover(&input, a.observable, cases.as_deref())?;
    let report_path = a.out.clone().unwrap_or_else(|| input.join("tuning_report.json"));
    let cfg = TuneConfig { inputs, criteria };
    let (_, alpha) = execute(&cfg, &report_path)?;
    println!("selected alpha {alpha} (report {})", report_path.display());
    Ok(())
}
