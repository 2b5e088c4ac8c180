use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::ArrayView2;
use rayon::prelude::*;

use super::fit::{fit_best_slope, SlopeFit};
use super::knn::{log_gmae_curve, make_batch};
use super::params::LleParams;
use crate::ensemble::{format_real, matrix_file_name, mix_seed, parse_matrix_file_name, EnsembleMatrix, MatrixMeta};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileEntry<T> {
    pub t_end: usize,
    pub fit: SlopeFit<T>,
    /// `(h, ln GMAE(h))` the fit was made from; empty when read from CSV.
    pub curve: Vec<(usize, T)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovProfile<T> {
    pub entries: Vec<ProfileEntry<T>>,
    pub meta: Option<MatrixMeta>,
}

impl<T: Real> LyapunovProfile<T> {
    pub fn lambda1(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.fit.lambda1).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One slope fit per window end `t_end = L, …, n_iters`. The train/test
/// split of each window is seeded from `(split_seed, t_end)`.
pub fn lyapunov_profile<T: Real>(x: ArrayView2<T>, params: &LleParams<T>) -> Result<LyapunovProfile<T>> {
    params.validate()?;
    let l = params.micro_len();
    if l > x.ncols() {
        return Err(Error::InsufficientData(format!(
            "micro length {l} exceeds the {} iterations available",
            x.ncols()
        )));
    }
    let entries = (l..=x.ncols())
        .into_par_iter()
        .map(|t_end| {
            let window = LleParams {
                split_seed: mix_seed(params.split_seed, t_end as u64),
                ..*params
            };
            let batch = make_batch(x, t_end, &window)?;
            let curve = log_gmae_curve(batch.view(), &window)?;
            let fit = fit_best_slope(&curve, &window)?;
            Ok(ProfileEntry { t_end, fit, curve })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LyapunovProfile { entries, meta: None })
}

/// [`lyapunov_profile`] of an ensemble matrix, carrying over its metadata.
pub fn profile_matrix(m: &EnsembleMatrix, params: &LleParams<f64>) -> Result<LyapunovProfile<f64>> {
    let mut p = lyapunov_profile(m.values.view(), params)?;
    p.meta = m.meta.clone();
    Ok(p)
}

/// `case{c}_alpha{a}_{sk|rk}_profile.csv`
pub fn profile_file_name(meta: &MatrixMeta) -> String {
    matrix_file_name(meta).replace(".csv", "_profile.csv")
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(path).map_err(|e| Error::io(path, e))?))
}

fn opt(v: Option<String>) -> String {
    v.unwrap_or_default()
}

/// Header `t_end,lambda1,lambda2,h_split,segments,sse`; absent values are
/// left empty.
pub fn write_profile_csv(p: &LyapunovProfile<f64>, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "t_end,lambda1,lambda2,h_split,segments,sse").map_err(io)?;
    for e in &p.entries {
        let f = &e.fit;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            e.t_end,
            format_real(f.lambda1),
            opt(f.lambda2.map(format_real)),
            opt(f.h_split.map(|h| h.to_string())),
            f.segments,
            format_real(f.sse)
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a profile written by [`write_profile_csv`]. Intercepts are not
/// stored in the file and come back as NaN; curves come back empty.
pub fn read_profile_csv(path: &Path) -> Result<LyapunovProfile<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, message: String| Error::Parse {
        source_name: path.display().to_string(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "t_end,lambda1,lambda2,h_split,segments,sse" => {}
        _ => return Err(err(1, "missing profile header".into())),
    }
    let mut entries = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 6 {
            return Err(err(n, format!("expected 6 fields, found {}", f.len())));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|_| err(n, format!("not a number: {s:?}")));
        let opt_real = |s: &str| if s.is_empty() { Ok(None) } else { real(s).map(Some) };
        let int = |s: &str| s.parse::<usize>().map_err(|_| err(n, format!("not an integer: {s:?}")));
        let lambda2 = opt_real(f[2])?;
        let h_split = if f[3].is_empty() { None } else { Some(int(f[3])?) };
        let segments = int(f[4])?;
        if !(segments == 1 || segments == 2) || (segments == 2) != (lambda2.is_some() && h_split.is_some()) {
            return Err(err(n, "inconsistent segment fields".into()));
        }
        entries.push(ProfileEntry {
            t_end: int(f[0])?,
            fit: SlopeFit {
                lambda1: real(f[1])?,
                intercept1: f64::NAN,
                lambda2,
                intercept2: lambda2.map(|_| f64::NAN),
                h_split,
                sse: real(f[5])?,
                segments: segments as u8,
            },
            curve: Vec::new(),
        });
    }
    if entries.is_empty() {
        return Err(err(2, "profile has no rows".into()));
    }
    let meta = path
        .file_name()
        .and_then(|s| s.to_str())
        .and_then(|s| s.strip_suffix("_profile.csv"))
        .and_then(|s| parse_matrix_file_name(&format!("{s}.csv")));
    Ok(LyapunovProfile { entries, meta })
}

/// Per-window log-error curves with their fitted lines: `t_end,h,y,fit`.
pub fn write_curve_plot_csv(p: &LyapunovProfile<f64>, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "t_end,h,y,fit").map_err(io)?;
    for e in &p.entries {
        for &(h, y) in &e.curve {
            writeln!(
                w,
                "{},{},{},{}",
                e.t_end,
                h,
                format_real(y),
                format_real(e.fit.predict(h))
            )
            .map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Log-error against window position, using `y(h_min)` of each window:
/// `t_end,y_hmin,lambda1`.
pub fn write_window_plot_csv(p: &LyapunovProfile<f64>, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "t_end,y_hmin,lambda1").map_err(io)?;
    for e in &p.entries {
        let y = e.curve.first().map(|&(_, y)| format_real(y)).unwrap_or_default();
        writeln!(w, "{},{},{}", e.t_end, y, format_real(e.fit.lambda1)).map_err(io)?;
    }
    w.flush().map_err(io)
}
