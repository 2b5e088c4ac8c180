use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use fracroot::ensemble::{parse_matrix_file_name, read_matrix_csv, Observable};
use fracroot::lle::{
    profile_file_name, profile_matrix, write_curve_plot_csv, write_profile_csv, write_window_plot_csv, LleParams,
};
use serde::{Deserialize, Serialize};

use crate::manifest::{digests, Manifest};
use crate::{default_out, manifest_dir, UsageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObservableFilter {
    Sk,
    Rk,
    Both,
}

impl ObservableFilter {
    pub fn accepts(self, o: Observable) -> bool {
        matches!(
            (self, o),
            (ObservableFilter::Both, _)
                | (ObservableFilter::Sk, Observable::StepNorm)
                | (ObservableFilter::Rk, Observable::ResidualNorm)
        )
    }
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// Matrix files; when omitted every case*_alpha*_{sk,rk}.csv in --input is used.
    files: Vec<PathBuf>,
    /// Directory searched for matrix files [default: data].
    #[arg(long, env = "FRACROOT_OUT")]
    input: Option<PathBuf>,
    /// Output directory [default: the input directory].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObservableFilter::Both)]
    observable: ObservableFilter,
    #[arg(long, default_value_t = 5)]
    look_back: usize,
    #[arg(long, default_value_t = 1)]
    hmin: usize,
    #[arg(long, default_value_t = 5)]
    hmax: usize,
    #[arg(long, default_value_t = 1)]
    hstep: usize,
    /// Number of neighbours.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0.4)]
    test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
    /// Draw a fresh train/test split for every horizon.
    #[arg(long)]
    split_per_horizon: bool,
    /// Also write per-window curves (`*_curves.csv`) and log-error by window (`*_windows.csv`).
    #[arg(long)]
    plot_data: bool,
    #[arg(long, conflicts_with_all = ["files", "input"])]
    replay: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub inputs: Vec<PathBuf>,
    pub observable: ObservableFilter,
    pub params: LleParams<f64>,
    pub plot_data: bool,
}

fn discover(dir: &Path, filter: ObservableFilter) -> Result<Vec<PathBuf>> {
    let mut found: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .and_then(parse_matrix_file_name)
                .is_some_and(|m| filter.accepts(m.observable))
        })
        .collect();
    found.sort();
    if found.is_empty() {
        bail!(
            "no matrix files matching case*_alpha*_{{sk,rk}}.csv in {}",
            dir.display()
        );
    }
    Ok(found)
}

fn resolve(a: &ProfileArgs) -> Result<(ProfileConfig, PathBuf)> {
    let params = LleParams {
        look_back: a.look_back,
        h_min: a.hmin,
        h_max: a.hmax,
        h_step: a.hstep,
        k_neighbors: a.k,
        test_fraction: a.test_fraction,
        split_seed: a.split_seed,
        split_per_horizon: a.split_per_horizon,
        ..LleParams::default()
    };
    params.validate().map_err(UsageError::from)?;
    let input_dir = a.input.clone().unwrap_or_else(default_out);
    let inputs = if a.files.is_empty() {
        discover(&input_dir, a.observable)?
    } else {
        let missing: Vec<String> = a
            .files
            .iter()
            .filter(|p| !p.is_file())
            .map(|p| p.display().to_string())
            .collect();
        if !missing.is_empty() {
            bail!("missing input files: {}", missing.join(", "));
        }
        a.files.clone()
    };
    let out = a.out.clone().unwrap_or(input_dir);
    Ok((
        ProfileConfig {
            inputs,
            observable: a.observable,
            params,
            plot_data: a.plot_data,
        },
        out,
    ))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn execute(cfg: &ProfileConfig, out: &Path) -> Result<Manifest> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut written = Vec::new();
    for input in &cfg.inputs {
        let m = read_matrix_csv(input)?;
        if let Some(meta) = &m.meta {
            if !cfg.observable.accepts(meta.observable) {
                continue;
            }
        }
        let prof = profile_matrix(&m, &cfg.params).with_context(|| format!("profiling {}", input.display()))?;
        let name = match &m.meta {
            Some(meta) => profile_file_name(meta),
            None => format!("{}_profile.csv", stem(input)),
        };
        let path = out.join(&name);
        write_profile_csv(&prof, &path)?;
        written.push(path);
        if cfg.plot_data {
            let base = name.trim_end_matches("_profile.csv");
            let curves = out.join(format!("{base}_curves.csv"));
            let windows = out.join(format!("{base}_windows.csv"));
            write_curve_plot_csv(&prof, &curves)?;
            write_window_plot_csv(&prof, &windows)?;
            written.push(curves);
            written.push(windows);
        }
    }
    let mut m = Manifest::new("profile", cfg)?;
    m.inputs = cfg
        .inputs
        .iter()
        .map(|p| {
            Ok(crate::manifest::FileDigest {
                path: p.display().to_string(),
                sha256: crate::manifest::sha256_file(p)?,
            })
        })
        .collect::<Result<_>>()?;
    m.outputs = digests(out, &written)?;
    m.write(&out.join("profile_manifest.json"))?;
    Ok(m)
}

pub fn run(a: ProfileArgs) -> Result<()> {
    if let Some(path) = &a.replay {
        let recorded = Manifest::read(path, "profile")?;
        let cfg: ProfileConfig = recorded.config()?;
        cfg.params.validate().map_err(UsageError::from)?;
        let out = a.out.clone().unwrap_or_else(|| manifest_dir(path));
        execute(&cfg, &out)?;
        let n = recorded.verify_outputs(&out)?;
        println!("replay matched {n} files in {}", out.display());
        return Ok(());
    }
    let (cfg, out) = resolve(&a)?;
    let m = execute(&cfg, &out)?;
    println!("wrote {} files to {}", m.outputs.len(), out.display());
    Ok(())
}
