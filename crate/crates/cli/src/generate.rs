use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use fracroot::ensemble::{generate_initials, run_ensemble_from, write_initials_csv, write_matrix_csv, EnsembleConfig};
use fracroot::numeric::{format_complex, parse_complex_list, Polynomial};
use fracroot::presets::{example, Example};
use fracroot::C64;
use serde::{Deserialize, Serialize};

use crate::manifest::{digests, Manifest};
use crate::{default_out, manifest_dir, parse_list, UsageError};

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Built-in problem: 1 for x^3-1, 2 for the sextic.
    #[arg(long)]
    example: Option<u32>,
    /// Polynomial coefficients, lowest degree first (e.g. "-1,0,0,1").
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Base initial vector; defaults to the example's base for --case.
    #[arg(long, allow_hyphen_values = true)]
    base: Option<String>,
    #[arg(long, default_value_t = 1)]
    case: u32,
    /// Comma-separated alpha grid; defaults to the example's grid.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 0.01)]
    jitter: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Master seed; defaults to the case number.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: data, or the manifest's directory on replay].
    #[arg(long, env = "FRACROOT_OUT")]
    out: Option<PathBuf>,
    /// Rerun the configuration stored in a manifest and check the digests.
    #[arg(long, conflicts_with_all = ["example", "poly", "base", "alphas", "seed"])]
    replay: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub coeffs: Vec<String>,
    pub ensemble: EnsembleConfig,
}

fn resolve(a: &GenerateArgs) -> Result<GenerateConfig> {
    let preset: Option<&Example> = match a.example {
        Some(id) => Some(example(id).map_err(UsageError::from)?),
        None => None,
    };
    let poly = match (&a.poly, preset) {
        (Some(p), _) => Polynomial::parse(p).map_err(UsageError::from)?,
        (None, Some(ex)) => ex.polynomial(),
        (None, None) => return Err(UsageError::msg("give --example or --poly").into()),
    };
    let base: Vec<C64> = match (&a.base, preset) {
        (Some(b), _) => parse_complex_list(b).map_err(UsageError::from)?,
        (None, Some(ex)) => ex.base(a.case).map_err(UsageError::from)?,
        (None, None) => return Err(UsageError::msg("--base is required with --poly").into()),
    };
    let alphas = match (&a.alphas, preset) {
        (Some(s), _) => parse_list(s)?,
        (None, Some(ex)) => ex.alphas.to_vec(),
        (None, None) => vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
    };
    let seed = a.seed.unwrap_or_else(|| Example::default_seed(a.case));
    let ensemble = EnsembleConfig::new(base, a.case.to_string(), seed)
        .with_runs(a.runs)
        .with_iters(a.iters)
        .with_jitter(a.jitter)
        .with_alphas(alphas)
        .with_beta(a.beta);
    let cfg = GenerateConfig {
        coeffs: poly.coeffs().iter().map(|&c| format_complex(c)).collect(),
        ensemble,
    };
    check(&cfg)?;
    Ok(cfg)
}

fn polynomial(cfg: &GenerateConfig) -> Result<Polynomial<f64>> {
    Ok(Polynomial::parse(&cfg.coeffs.join(","))?)
}

fn check(cfg: &GenerateConfig) -> Result<()> {
    cfg.ensemble.validate().map_err(UsageError::from)?;
    if cfg.ensemble.alphas.is_empty() {
        return Err(UsageError::msg("alpha grid is empty").into());
    }
    let f = polynomial(cfg).map_err(|e| UsageError::msg(e.to_string()))?;
    if f.degree() != cfg.ensemble.base_vector.len() {
        return Err(UsageError::msg(format!(
            "base vector has {} components but the polynomial has degree {}",
            cfg.ensemble.base_vector.len(),
            f.degree()
        ))
        .into());
    }
    Ok(())
}

pub fn manifest_name(case_label: &str) -> String {
    format!("generate_case{case_label}_manifest.json")
}

fn execute(cfg: &GenerateConfig, out: &Path) -> Result<Manifest> {
    let f = polynomial(cfg)?;
    let ens = &cfg.ensemble;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let initials = generate_initials(ens);
    let mut files = vec![write_initials_csv(
        &initials,
        &out.join(format!("case{}_initials.csv", ens.case_label)),
    )?];
    for &alpha in &ens.alphas {
        let (s, r) = run_ensemble_from(&f, &initials, ens, alpha)?;
        files.push(write_matrix_csv(&s, out)?);
        files.push(write_matrix_csv(&r, out)?);
    }
    let mut m = Manifest::new("generate", cfg)?;
    m.outputs = digests(out, &files)?;
    m.write(&out.join(manifest_name(&ens.case_label)))?;
    Ok(m)
}

pub fn run(a: GenerateArgs) -> Result<()> {
    if let Some(path) = &a.replay {
        let recorded = Manifest::read(path, "generate")?;
        let cfg: GenerateConfig = recorded.config()?;
        check(&cfg)?;
        let out = a.out.clone().unwrap_or_else(|| manifest_dir(path));
        execute(&cfg, &out)?;
        let n = recorded.verify_outputs(&out)?;
        println!("replay matched {n} files in {}", out.display());
        return Ok(());
    }
    let cfg = resolve(&a)?;
    let out = a.out.clone().unwrap_or_else(default_out);
    let m = execute(&cfg, &out)?;
    println!(
        "wrote {} files for case {} ({} runs x {} iterations, {} alpha values) to {}",
        m.outputs.len(),
        cfg.ensemble.case_label,
        cfg.ensemble.n_runs,
        cfg.ensemble.n_iters,
        cfg.ensemble.alphas.len(),
        out.display()
    );
    Ok(())
}
