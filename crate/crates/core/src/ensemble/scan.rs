use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::csv::MatrixMeta;
use super::initials::generate_initials;
use crate::error::{Error, Result};
use crate::numeric::Polynomial;
use crate::solvers::{run_solver, Method, SolverParams, Stopping};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Observable {
    /// `s_k`, file suffix `sk`.
    #[serde(rename = "sk")]
    StepNorm,
    /// `r_k`, file suffix `rk`.
    #[serde(rename = "rk")]
    ResidualNorm,
}

impl Observable {
    pub const ALL: [Observable; 2] = [Observable::StepNorm, Observable::ResidualNorm];

    pub fn suffix(self) -> &'static str {
        match self {
            Observable::StepNorm => "sk",
            Observable::ResidualNorm => "rk",
        }
    }
}

impl std::fmt::Display for Observable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.suffix())
    }
}

impl std::str::FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sk" => Ok(Observable::StepNorm),
            "rk" => Ok(Observable::ResidualNorm),
            other => Err(Error::InvalidParams(format!(
                "unknown observable {other:?}; expected sk or rk"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub base_vector: Vec<C64>,
    pub n_runs: usize,
    pub n_iters: usize,
    pub jitter_frac: f64,
    pub alphas: Vec<f64>,
    pub beta: f64,
    pub master_seed: u64,
    pub case_label: String,
}

impl EnsembleConfig {
    /// 1000 runs of 50 iterations, jitter 0.01, β = 1, α ∈ {0,…,5}.
    pub fn new(base_vector: Vec<C64>, case_label: impl Into<String>, master_seed: u64) -> Self {
        Self {
            base_vector,
            n_runs: 1000,
            n_iters: 50,
            jitter_frac: 0.01,
            alphas: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            beta: 1.0,
            master_seed,
            case_label: case_label.into(),
        }
    }

    pub fn with_runs(mut self, n: usize) -> Self {
        self.n_runs = n;
        self
    }

    pub fn with_iters(mut self, n: usize) -> Self {
        self.n_iters = n;
        self
    }

    pub fn with_jitter(mut self, jitter: f64) -> Self {
        self.jitter_frac = jitter;
        self
    }

    pub fn with_alphas(mut self, alphas: Vec<f64>) -> Self {
        self.alphas = alphas;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 || self.n_iters == 0 {
            return Err(Error::InvalidParams("runs and iterations must be at least 1".into()));
        }
        if !(self.jitter_frac >= 0.0 && self.jitter_frac.is_finite()) {
            return Err(Error::InvalidParams(
                "jitter fraction must be finite and nonnegative".into(),
            ));
        }
        if self.base_vector.is_empty() || self.base_vector.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParams("base vector must be nonempty and finite".into()));
        }
        if self.alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParams("alphas must be finite".into()));
        }
        SolverParams::new(0.0, self.beta).validate()
    }

    fn params(&self, alpha: f64) -> SolverParams<f64> {
        SolverParams::new(alpha, self.beta)
            .with_max_iters(self.n_iters)
            .with_stopping(Stopping::FixedIterations)
    }
}

/// One observable of one `(case, α)` scan, `n_runs × n_iters`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleMatrix {
    pub values: Array2<f64>,
    /// Observable, case and α; absent when read from a file whose name does
    /// not follow the `case{c}_alpha{a}_{sk|rk}.csv` convention.
    pub meta: Option<MatrixMeta>,
}

impl EnsembleMatrix {
    pub fn new(values: Array2<f64>, observable: Observable, case_label: impl Into<String>, alpha: f64) -> Self {
        Self {
            values,
            meta: Some(MatrixMeta {
                observable,
                case_label: case_label.into(),
                alpha,
            }),
        }
    }

    pub fn n_runs(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_iters(&self) -> usize {
        self.values.ncols()
    }
}

/// Runs INVM^α without early stopping from freshly generated initials and
/// returns the `(S, R)` matrices.
pub fn run_ensemble(
    f: &Polynomial<f64>,
    config: &EnsembleConfig,
    alpha: f64,
) -> Result<(EnsembleMatrix, EnsembleMatrix)> {
    config.validate()?;
    run_ensemble_from(f, &generate_initials(config), config, alpha)
}

/// As [`run_ensemble`] with the initial vectors supplied, so one set can be
/// shared by every α of a scan.
pub fn run_ensemble_from(
    f: &Polynomial<f64>,
    initials: &[Vec<C64>],
    config: &EnsembleConfig,
    alpha: f64,
) -> Result<(EnsembleMatrix, EnsembleMatrix)> {
    config.validate()?;
    if config.base_vector.len() != f.degree() {
        return Err(Error::InvalidParams(format!(
            "base vector has {} components, polynomial degree is {}",
            config.base_vector.len(),
            f.degree()
        )));
    }
    let params = config.params(alpha);
    let rows: Vec<(Vec<f64>, Vec<f64>)> = initials
        .par_iter()
        .map(|x0| run_solver(f, x0, &params, Method::Invm).map(|t| (t.step_norms, t.residual_norms)))
        .collect::<Result<_>>()?;

    let n = config.n_iters;
    let mut s = Array2::zeros((rows.len(), n));
    let mut r = Array2::zeros((rows.len(), n));
    for (j, (sk, rk)) in rows.iter().enumerate() {
        for k in 0..n {
            s[[j, k]] = sk[k];
            r[[j, k]] = rk[k];
        }
    }
    Ok((
        EnsembleMatrix::new(s, Observable::StepNorm, &config.case_label, alpha),
        EnsembleMatrix::new(r, Observable::ResidualNorm, &config.case_label, alpha),
    ))
}
